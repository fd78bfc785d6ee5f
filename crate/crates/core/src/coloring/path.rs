use std::collections::{BTreeMap, BTreeSet};

use super::scan;
use crate::error::{invalid, Budget, Error, Result};
use crate::graph_core::{build_graph, verify_proper, Coloring, Graph};
use crate::oracle::extend_coloring;
use crate::structures::StaircaseLink;

/// Blow-up of a path `Z_0 − Z_1 − … − Z_m`; `links[i]` joins `Z_i` to `Z_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathBlowup {
    pub sizes: Vec<usize>,
    pub links: Vec<StaircaseLink>,
}

impl PathBlowup {
    pub fn m(&self) -> usize {
        self.sizes.len().saturating_sub(1)
    }

    pub fn omega(&self) -> usize {
        let links = self.links.iter().map(|l| l.clique_number(self.sizes[l.to]));
        links.chain(self.sizes.iter().copied()).max().unwrap_or(0)
    }

    /// The same path read from `Z_m` to `Z_0`.
    pub fn reversed(&self) -> PathBlowup {
        let m = self.m();
        let sizes: Vec<usize> = self.sizes.iter().rev().copied().collect();
        let links = self
            .links
            .iter()
            .rev()
            .map(|l| StaircaseLink { from: m - l.to, to: m - l.from, degrees: l.reverse_degrees(self.sizes[l.to]) })
            .collect();
        PathBlowup { sizes, links }
    }

    /// Vertex ids run clique by clique; `layout[i]` lists `Z_i` in order.
    pub fn materialize(&self) -> Result<(Graph, Vec<Vec<usize>>)> {
        let mut layout = Vec::new();
        let mut next = 0;
        for &s in &self.sizes {
            layout.push((next..next + s).collect::<Vec<_>>());
            next += s;
        }
        let mut edges = Vec::new();
        for c in &layout {
            for (x, &u) in c.iter().enumerate() {
                edges.extend(c[x + 1..].iter().map(|&v| (u, v)));
            }
        }
        for l in &self.links {
            for (p, &d) in l.degrees.iter().enumerate() {
                edges.extend(layout[l.to][..d].iter().map(|&v| (layout[l.from][p], v)));
            }
        }
        Ok((build_graph(next, &edges)?, layout))
    }

    fn check(&self) -> Result<()> {
        let m = self.m();
        if self.sizes.len() < 2 {
            return invalid("a path blow-up needs at least two cliques");
        }
        if self.sizes.contains(&0) {
            return invalid("every Z_i must be non-null");
        }
        if self.links.len() != m {
            return invalid(format!("expected {m} links, got {}", self.links.len()));
        }
        for (i, l) in self.links.iter().enumerate() {
            if l.from != i || l.to != i + 1 {
                return invalid(format!("link {i} must join Z_{i} to Z_{}", i + 1));
            }
            if let Some(e) = l.shape_error(self.sizes[i], self.sizes[i + 1], true) {
                return invalid(format!("link Z_{i} -> Z_{}: {e}", i + 1));
            }
        }
        Ok(())
    }
}

/// What an end clique must receive: only a color set, or a coloring by position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EndConstraint {
    Set(Vec<u32>),
    Fixed(Vec<u32>),
}

impl EndConstraint {
    pub fn colors(&self) -> &[u32] {
        match self {
            EndConstraint::Set(c) | EndConstraint::Fixed(c) => c,
        }
    }

    pub fn is_fixed(&self) -> bool {
        matches!(self, EndConstraint::Fixed(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathColoring {
    pub coloring: Coloring,
    /// Colors of `Z_i` by position.
    pub sequences: Vec<Vec<u32>>,
    /// `direct`, `odd`, `even`, `repair` or `search`.
    pub method: &'static str,
}

/// Colors the path with colors `1..=chi` so that the end cliques honor their
/// constraints. At most one end may be fixed.
pub fn color_path_blowup(path: &PathBlowup, start: &EndConstraint, end: &EndConstraint, chi: u32) -> Result<PathColoring> {
    path.check()?;
    let m = path.m();
    let omega = path.omega();
    if chi as usize <= omega {
        return invalid(format!("need more than ω = {omega} colors, got {chi}"));
    }
    if 2 * path.sizes[0] > omega {
        return invalid(format!("|Z_0| = {} exceeds ω/2", path.sizes[0]));
    }
    if start.is_fixed() && end.is_fixed() {
        return invalid("at most one end clique may carry a fixed coloring");
    }
    for (c, size, name) in [(start, path.sizes[0], "Z_0"), (end, path.sizes[m], "Z_m")] {
        let set: BTreeSet<u32> = c.colors().iter().copied().collect();
        if set.len() != c.colors().len() || c.colors().len() != size {
            return invalid(format!("{name} needs {size} distinct colors, got {:?}", c.colors()));
        }
        if set.iter().any(|&x| x == 0 || x > chi) {
            return invalid(format!("{name} uses a color outside 1..={chi}"));
        }
    }
    let c0: BTreeSet<u32> = start.colors().iter().copied().collect();
    let cm: BTreeSet<u32> = end.colors().iter().copied().collect();
    let slack = chi as usize - omega;
    let (sequences, method) = if m % 2 == 1 {
        let x = c0.intersection(&cm).count();
        if 2 * x > (m - 1) * slack {
            return invalid(format!("|C_0 ∩ C_m| = {x} exceeds (m−1)(χ′−ω)/2"));
        }
        if m == 1 {
            let seq = |c: &EndConstraint| if c.is_fixed() { c.colors().to_vec() } else { sorted(c.colors()) };
            (vec![seq(start), seq(end)], "direct")
        } else if start.is_fixed() {
            let mut s = odd_case(&path.reversed(), &end_set(end), start.colors(), chi);
            s.reverse();
            (s, "odd")
        } else {
            let fixed = if end.is_fixed() { end.colors().to_vec() } else { sorted(end.colors()) };
            (odd_case(path, &c0, &fixed, chi), "odd")
        }
    } else {
        let d0 = c0.difference(&cm).count();
        let dm = cm.difference(&c0).count();
        if 2 * d0.min(dm) > m * slack {
            return invalid(format!("both |C_0 \\ C_m| = {d0} and |C_m \\ C_0| = {dm} exceed m(χ′−ω)/2"));
        }
        if start.is_fixed() || end.is_fixed() {
            match repair_case(path, start, end, chi)? {
                Some(s) => (s, "repair"),
                None => (search_case(path, start, end, chi)?, "search"),
            }
        } else if 2 * d0 <= m * slack {
            (even_case(path, &c0, &cm, chi), "even")
        } else {
            let mut s = even_case(&path.reversed(), &cm, &c0, chi);
            s.reverse();
            (s, "even")
        }
    };
    let (g, layout) = path.materialize()?;
    let mut colors = vec![0u32; g.n()];
    for (i, c) in layout.iter().enumerate() {
        if sequences[i].len() < c.len() {
            return Err(Error::Construction(format!("Z_{i} received {} colors for {} vertices", sequences[i].len(), c.len())));
        }
        for (&v, &col) in c.iter().zip(&sequences[i]) {
            colors[v] = col;
        }
    }
    let coloring = Coloring::new(colors)?;
    let r = verify_proper(&g, &coloring)?;
    if !r.is_pass() {
        return Err(Error::Construction(format!("path coloring ({method}) is not proper: {:?}", r.witness)));
    }
    let sequences = layout.iter().map(|c| c.iter().map(|&v| coloring.color(v)).collect()).collect();
    Ok(PathColoring { coloring, sequences, method })
}

fn sorted(c: &[u32]) -> Vec<u32> {
    let mut v = c.to_vec();
    v.sort_unstable();
    v
}

fn end_set(c: &EndConstraint) -> BTreeSet<u32> {
    c.colors().iter().copied().collect()
}

/// Odd `m ≥ 3`: `Z_0` receives the set `c0`, `Z_m` the coloring `fixed`.
fn odd_case(path: &PathBlowup, c0: &BTreeSet<u32>, fixed: &[u32], chi: u32) -> Vec<Vec<u32>> {
    let m = path.m();
    // canonical color of Z_m at position q (1-based) is χ′+1−q
    let mut pi: BTreeMap<u32, u32> = BTreeMap::new();
    for (q, &c) in fixed.iter().enumerate() {
        pi.insert(chi - q as u32, c);
    }
    let cm: BTreeSet<u32> = fixed.iter().copied().collect();
    let mut cs: Vec<u32> = c0.intersection(&cm).map(|c| chi - fixed.iter().position(|x| x == c).unwrap() as u32).collect();
    cs.sort_unstable();
    let only0: Vec<u32> = c0.difference(&cm).copied().collect();
    for (idx, &c) in only0.iter().enumerate() {
        pi.insert(idx as u32 + 1, c);
    }
    let canon = free_start(m, path.omega(), chi, path.sizes[0], cs.len(), &cs);
    rename(canon, &path.sizes, pi, chi)
}

/// Even `m`, both ends set-only, `|C_0 \ C_m| ≤ m(χ′−ω)/2`: append a
/// fictitious `Z_{m+1}` holding `C_0 \ C_m` and use the odd construction.
fn even_case(path: &PathBlowup, c0: &BTreeSet<u32>, cm: &BTreeSet<u32>, chi: u32) -> Vec<Vec<u32>> {
    let m = path.m();
    let both: Vec<u32> = c0.intersection(cm).copied().collect();
    let only_m: Vec<u32> = cm.difference(c0).copied().collect();
    let only_0: Vec<u32> = c0.difference(cm).copied().collect();
    let x = only_0.len();
    let cs: Vec<u32> = (chi + 1 - x as u32..=chi).collect();
    let mut pi = BTreeMap::new();
    for (idx, &c) in both.iter().chain(&only_m).enumerate() {
        pi.insert(idx as u32 + 1, c);
    }
    for (&canon, &c) in cs.iter().zip(&only_0) {
        pi.insert(canon, c);
    }
    let mut canon = free_start(m + 1, path.omega(), chi, path.sizes[0], x, &cs);
    canon.truncate(m + 1);
    rename(canon, &path.sizes, pi, chi)
}

/// Canonical sequences for odd `m ≥ 3` with `Z_0 = {1..z0−x} ∪ cs` and the
/// top block on `Z_m`:
///
/// | clique            | sequence                                      |
/// |-------------------|-----------------------------------------------|
/// | `Z_0`             | `X_{0,1}`                                     |
/// | `Z_i`, `1..=m−2`  | `X_{i,1}` then `X_{i−1,1}` reversed           |
/// | `Z_{m−1}`         | `1..ω`                                        |
/// | `Z_m`             | `χ′, χ′−1, …`                                 |
///
/// `X_{2h,1}` grows from `{1..z0−x}` by `χ′−ω` colors per step until it
/// reaches `{1..z0}`; `X_{2h−1,1}` is the top `ω−z0` colors missing from
/// both neighbors.
fn free_start(m: usize, omega: usize, chi: u32, z0: usize, x: usize, cs: &[u32]) -> Vec<Vec<u32>> {
    let slack = chi as usize - omega;
    let mut xs: Vec<Vec<u32>> = vec![Vec::new(); m];
    xs[0] = (1..=(z0 - x) as u32).chain(cs.iter().copied()).collect();
    xs[m - 1] = (1..=z0 as u32).collect();
    for h in 1..=(m - 1) / 2 {
        xs[2 * h] = if h * slack < x {
            let y: Vec<u32> = (1..=(z0 - x + h * slack) as u32).collect();
            let extra: Vec<u32> = cs.iter().copied().filter(|c| !y.contains(c)).take(z0 - y.len()).collect();
            [y, extra].concat()
        } else {
            (1..=z0 as u32).collect()
        };
    }
    for h in 1..=(m - 1) / 2 {
        let skip: Vec<u32> = xs[2 * h].iter().chain(&xs[2 * h - 2]).copied().collect();
        xs[2 * h - 1] = scan(chi, 1, &skip, omega - z0);
    }
    let mut out = vec![xs[0].clone()];
    for i in 1..m - 1 {
        out.push(xs[i].iter().chain(xs[i - 1].iter().rev()).copied().collect());
    }
    out.push((1..=omega as u32).collect());
    out.push((0..omega as u32).map(|q| chi - q).collect());
    out
}

/// Applies `pi` (completed by matching the unused canonical colors to the
/// unused real colors in increasing order) and cuts each clique to size.
fn rename(canon: Vec<Vec<u32>>, sizes: &[usize], mut pi: BTreeMap<u32, u32>, chi: u32) -> Vec<Vec<u32>> {
    let used: BTreeSet<u32> = pi.values().copied().collect();
    let free_real = (1..=chi).filter(|c| !used.contains(c));
    let free_canon: Vec<u32> = (1..=chi).filter(|c| !pi.contains_key(c)).collect();
    for (a, b) in free_canon.into_iter().zip(free_real) {
        pi.insert(a, b);
    }
    canon.into_iter().zip(sizes).map(|(s, &n)| s.into_iter().take(n).map(|c| pi[&c]).collect()).collect()
}

/// Even `m` with a fixed end: take the set-only coloring, impose the fixed
/// order, then re-match cliques one at a time away from the fixed end until
/// the old coloring is compatible again. `None` if a matching fails.
fn repair_case(path: &PathBlowup, start: &EndConstraint, end: &EndConstraint, chi: u32) -> Result<Option<Vec<Vec<u32>>>> {
    let set_only = |c: &EndConstraint| EndConstraint::Set(c.colors().to_vec());
    let base = color_path_blowup(path, &set_only(start), &set_only(end), chi)?.sequences;
    if start.is_fixed() {
        return Ok(repair_forward(path, base, start.colors(), end.colors(), chi));
    }
    let mut base = base;
    base.reverse();
    Ok(repair_forward(&path.reversed(), base, end.colors(), start.colors(), chi).map(|mut s| {
        s.reverse();
        s
    }))
}

fn repair_forward(path: &PathBlowup, mut seqs: Vec<Vec<u32>>, fixed: &[u32], last: &[u32], chi: u32) -> Option<Vec<Vec<u32>>> {
    let m = path.m();
    seqs[0] = fixed.to_vec();
    for i in 1..=m {
        let into = &path.links[i - 1].degrees;
        let prev_forbid = |q: usize| -> BTreeSet<u32> { into.iter().zip(&seqs[i - 1]).filter(|(&d, _)| d > q).map(|(_, &c)| c).collect() };
        let next_forbid = |q: usize| -> BTreeSet<u32> {
            if i == m {
                return BTreeSet::new();
            }
            seqs[i + 1][..path.links[i].degrees[q]].iter().copied().collect()
        };
        let pool: Vec<u32> = if i == m { sorted(last) } else { (1..=chi).collect() };
        let old = &seqs[i];
        let cands = |strict: bool| -> Vec<Vec<u32>> {
            (0..path.sizes[i])
                .map(|q| {
                    let (pf, nf) = (prev_forbid(q), next_forbid(q));
                    let mut c: Vec<u32> = pool.iter().copied().filter(|c| !pf.contains(c) && !(strict && nf.contains(c))).collect();
                    // old color first, then colors the next clique tolerates
                    c.sort_by_key(|x| (*x != old[q], nf.contains(x)));
                    c
                })
                .collect()
        };
        if let Some(s) = match_layer(&cands(true)) {
            seqs[i] = s;
            return Some(seqs);
        }
        seqs[i] = match_layer(&cands(false))?;
    }
    Some(seqs)
}

/// Distinct representatives, one color per position, by augmenting paths.
fn match_layer(cands: &[Vec<u32>]) -> Option<Vec<u32>> {
    fn augment(q: usize, cands: &[Vec<u32>], owner: &mut BTreeMap<u32, usize>, seen: &mut BTreeSet<u32>) -> bool {
        for &c in &cands[q] {
            if seen.insert(c) {
                let free = match owner.get(&c) {
                    None => true,
                    Some(&o) => augment(o, cands, owner, seen),
                };
                if free {
                    owner.insert(c, q);
                    return true;
                }
            }
        }
        false
    }
    let mut owner = BTreeMap::new();
    for q in 0..cands.len() {
        if !augment(q, cands, &mut owner, &mut BTreeSet::new()) {
            return None;
        }
    }
    let mut out = vec![0; cands.len()];
    for (c, q) in owner {
        out[q] = c;
    }
    Some(out)
}

/// Even `m` with a fixed end: list-coloring search with the fixed clique
/// precolored and the other end restricted to its set.
fn search_case(path: &PathBlowup, start: &EndConstraint, end: &EndConstraint, chi: u32) -> Result<Vec<Vec<u32>>> {
    let (g, layout) = path.materialize()?;
    let mut lists: Vec<Option<Vec<u32>>> = vec![None; g.n()];
    for (clique, c) in [(&layout[0], start), (&layout[path.m()], end)] {
        for (p, &v) in clique.iter().enumerate() {
            lists[v] = Some(match c {
                EndConstraint::Fixed(f) => vec![f[p]],
                EndConstraint::Set(s) => s.clone(),
            });
        }
    }
    let mut budget = Budget::default();
    let found = extend_coloring(&g, chi, &lists, &mut budget)?;
    let coloring = found.ok_or_else(|| Error::Construction("hypothesis holds but exhaustive search finds no coloring extending the fixed end".into()))?;
    Ok(layout.iter().map(|c| c.iter().map(|&v| coloring.color(v)).collect()).collect())
}
