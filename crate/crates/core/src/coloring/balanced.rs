use std::collections::BTreeSet;

use super::bound::BoundParams;
use super::cyclic::cyclic_coloring;
use super::{scan, ColorSequence, Role};
use crate::error::{invalid, Error, Result};
use crate::graph_core::{build_graph, CheckKind, Coloring, Graph, Report};
use crate::structures::StaircaseLink;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BColoringMode {
    Plain,
    /// Two cyclic passes: `B_1, B'_2, B'_3` first, then the remainders.
    Split,
}

/// One clique chain `B_i = L_{i,0} − L_{i,1} − … − L_{i,n}`.
/// `links[j]` joins `L_{i,j}` to `L_{i,j+1}` (ids are the chain positions).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainDescriptor {
    pub b_size: usize,
    /// Sizes of `L_{i,1..n}`.
    pub sizes: Vec<usize>,
    pub links: Vec<StaircaseLink>,
}

impl ChainDescriptor {
    pub fn size(&self, j: usize) -> usize {
        if j == 0 {
            self.b_size
        } else {
            self.sizes[j - 1]
        }
    }

    /// All interior cliques of size ω−1, consecutive cliques joined by the
    /// densest staircase that keeps cliques at size ω.
    pub fn tight(b_size: usize, n: usize, omega: usize) -> ChainDescriptor {
        let sizes = vec![omega - 1; n];
        let links = (0..n)
            .map(|j| {
                let from = if j == 0 { b_size } else { omega - 1 };
                StaircaseLink { from: j, to: j + 1, degrees: (0..from).map(|p| omega - 1 - p).collect() }
            })
            .collect();
        ChainDescriptor { b_size, sizes, links }
    }
}

/// Whether the two-pass `B` coloring applies.
pub fn split_required(params: &BoundParams, b_sizes: &[usize]) -> bool {
    let b1 = b_sizes.first().copied().unwrap_or(0);
    // |B_1| > 1 + 3(ℓ−1)q/8
    params.ell_is_1_mod_4() && 8 * b1 > 8 + 3 * (params.ell - 1) * params.q
}

/// Colors of the `B_i` (i.e. `L^c_{i,0}`) from `1..=Σ|B_i|`.
pub fn b_coloring(b_sizes: &[usize], params: &BoundParams, mode: BColoringMode) -> Result<Vec<Vec<u32>>> {
    let total: usize = b_sizes.iter().sum();
    match mode {
        BColoringMode::Plain => cyclic_coloring(b_sizes, &(1..=total as u32).collect::<Vec<_>>()),
        BColoringMode::Split => {
            if b_sizes.len() != 3 {
                return invalid(format!("split coloring needs k = 3, got k = {}", b_sizes.len()));
            }
            let r = (params.ell - 1) * params.q;
            let (b2, b3) = (r.div_ceil(8), r / 8);
            if b_sizes[1] < b2 || b_sizes[2] < b3 {
                return invalid(format!("B_2, B_3 too small for split sizes {b2}, {b3}"));
            }
            let head = b_sizes[0] + b2 + b3;
            let first = cyclic_coloring(&[b_sizes[0], b2, b3], &(1..=head as u32).collect::<Vec<_>>())?;
            let rest_sizes = [b_sizes[1] - b2, b_sizes[2] - b3];
            let (big, small) = if rest_sizes[0] >= rest_sizes[1] { (0, 1) } else { (1, 0) };
            let rest = cyclic_coloring(&[rest_sizes[big], rest_sizes[small]], &(head as u32 + 1..=total as u32).collect::<Vec<_>>())?;
            let mut tails = [Vec::new(), Vec::new()];
            tails[big] = rest[0].clone();
            tails[small] = rest[1].clone();
            let mut out = first;
            out[1].extend(&tails[0]);
            out[2].extend(&tails[1]);
            Ok(out)
        }
    }
}

/// `L_{i,j,1}`, `L_{i,j,2}` for every chain and `j ∈ 0..=n` (0-based `i`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalancedColoring {
    pub params: BoundParams,
    pub b_colors: Vec<Vec<u32>>,
    pub first: Vec<Vec<Vec<u32>>>,
    pub second: Vec<Vec<Vec<u32>>>,
    /// `J_i`; `n + 1` when no even `j` has `L_{i,j,1} = {1..|B_i|}`.
    pub switch: Vec<usize>,
}

impl BalancedColoring {
    pub fn k(&self) -> usize {
        self.b_colors.len()
    }

    /// `L^c_{i,j}` with 0-based `i`.
    pub fn sequence(&self, i: usize, j: usize) -> Vec<u32> {
        if j == 0 {
            return self.b_colors[i].clone();
        }
        let mut s = self.first[i][j].clone();
        s.extend(&self.second[i][j]);
        s
    }

    pub fn sequences(&self) -> Vec<ColorSequence> {
        let mut out = Vec::new();
        for i in 0..self.k() {
            for j in 0..=self.params.n() {
                out.push(ColorSequence::new(Role::Lc(i + 1, j), self.sequence(i, j)));
            }
        }
        out
    }

    /// Coloring of the graph built by [`materialize_chains`], using the
    /// first `|L_{i,j}|` entries of each sequence.
    pub fn coloring_for(&self, layout: &[Vec<Vec<usize>>], n: usize) -> Result<Coloring> {
        let mut colors = vec![0u32; n];
        for (i, chain) in layout.iter().enumerate() {
            for (j, clique) in chain.iter().enumerate() {
                let seq = self.sequence(i, j);
                if clique.len() > seq.len() {
                    return Err(Error::Construction(format!("L_{{{},{j}}} has {} vertices but {} colors", i + 1, clique.len(), seq.len())));
                }
                for (&v, &c) in clique.iter().zip(&seq) {
                    colors[v] = c;
                }
            }
        }
        Coloring::new(colors)
    }
}

fn top_block(chi: u32, omega: usize) -> Vec<u32> {
    (chi + 2 - omega as u32..=chi).rev().collect()
}

fn is_initial(set: &[u32], size: usize) -> bool {
    let mut s = set.to_vec();
    s.sort_unstable();
    s.len() == size && s.iter().zip(1u32..).all(|(&a, b)| a == b)
}

/// Balanced coloring from an already chosen coloring of the `B_i`
/// (sizes nonincreasing).
pub fn balanced_from_b(params: BoundParams, b_colors: Vec<Vec<u32>>) -> Result<BalancedColoring> {
    let k = b_colors.len();
    let n = params.n();
    let omega = params.omega;
    let chi = params.chi;
    let q = params.q;
    if k == 0 {
        return invalid("no chains");
    }
    let b: Vec<usize> = b_colors.iter().map(Vec::len).collect();
    if b.iter().any(|&x| x == 0 || x > omega) {
        return invalid(format!("B sizes {b:?} must lie in 1..=ω"));
    }
    let mut first = vec![vec![Vec::new(); n + 1]; k];
    let mut top = vec![vec![false; n + 1]; k];
    for i in 0..k {
        first[i][0] = b_colors[i].clone();
        for j in (2..=n).step_by(2) {
            let a = (j / 2) * q;
            let mut pool: Vec<u32> = Vec::new();
            if k == 1 {
                pool.extend(&b_colors[i]);
            } else {
                let t = a % (k - 1);
                let (hi, lo) = (a.div_ceil(k - 1), a / (k - 1));
                for step in 1..k {
                    let other = (i + step) % k;
                    let take = if step <= t { hi } else { lo };
                    pool.extend(b_colors[other].iter().take(take));
                }
                pool.extend(b_colors[i].iter().take(hi.max(b[i].saturating_sub(a))));
            }
            pool.sort_unstable();
            pool.dedup();
            if pool.len() < b[i] {
                return Err(Error::Construction(format!("L_{{{},{j},1}} has only {} candidates", i + 1, pool.len())));
            }
            pool.truncate(b[i]);
            first[i][j] = pool;
        }
    }
    let odd_len = |i: usize| omega - b[i];
    for i in 0..k {
        for j in (1..=n).step_by(2) {
            let seq = if j < n {
                if j >= 3 && is_initial(&first[i][j - 1], b[i]) {
                    top[i][j] = true;
                    top_block(chi, omega)[..odd_len(i)].to_vec()
                } else {
                    let mut skip = first[i][j - 1].clone();
                    skip.extend(&first[i][j + 1]);
                    scan(chi, 1, &skip, odd_len(i))
                }
            } else {
                let mut skip = first[i][j - 1].clone();
                skip.extend(1..=b[i] as u32);
                scan(chi, 1, &skip, odd_len(i))
            };
            if seq.len() < odd_len(i) {
                return Err(Error::Construction(format!("L_{{{},{j},1}} ran out of colors", i + 1)));
            }
            first[i][j] = seq;
        }
    }
    let mut second = vec![vec![Vec::new(); n + 1]; k];
    let mut switch = vec![n + 1; k];
    for i in 0..k {
        switch[i] = (2..=n).step_by(2).find(|&j| is_initial(&first[i][j], b[i])).unwrap_or(n + 1);
        for j in 1..=n {
            let full: Vec<u32> = if j >= switch[i] {
                if j % 2 == 0 {
                    (1..omega as u32).collect()
                } else {
                    top_block(chi, omega)
                }
            } else if top[i][j] {
                top_block(chi, omega)
            } else {
                let mut s = first[i][j].clone();
                if j % 2 == 1 {
                    s.extend(scan(chi, 1, &first[i][j], b[i].saturating_sub(1)));
                } else {
                    s.extend(scan(1, chi, &first[i][j], (omega - b[i]).saturating_sub(1)));
                }
                s
            };
            let head = if j % 2 == 0 { b[i] } else { odd_len(i) }.min(full.len());
            first[i][j] = full[..head].to_vec();
            second[i][j] = full[head..].to_vec();
        }
    }
    Ok(BalancedColoring { params, b_colors, first, second, switch })
}

fn clique_number_of_chains(chains: &[ChainDescriptor]) -> usize {
    let s: usize = chains.iter().map(|c| c.b_size).sum();
    let links = chains.iter().flat_map(|c| c.links.iter().map(|l| l.clique_number(c.size(l.to))));
    links.chain(std::iter::once(s)).max().unwrap_or(0)
}

fn check_chains(chains: &[ChainDescriptor], params: &BoundParams) -> Result<()> {
    let n = params.n();
    for (i, c) in chains.iter().enumerate() {
        if c.sizes.len() != n || c.links.len() != n {
            return invalid(format!("chain {} must have {n} interior cliques and {n} links", i + 1));
        }
        if c.sizes.iter().any(|&s| s == 0 || s + 1 > params.omega) {
            return invalid(format!("chain {}: interior cliques must have 1..ω−1 vertices", i + 1));
        }
        for (j, l) in c.links.iter().enumerate() {
            if l.from != j || l.to != j + 1 {
                return invalid(format!("chain {} link {j} must join positions {j} and {}", i + 1, j + 1));
            }
            if let Some(e) = l.shape_error(c.size(j), c.size(j + 1), true) {
                return invalid(format!("chain {} link {j}: {e}", i + 1));
            }
        }
    }
    let w = clique_number_of_chains(chains);
    if w > params.omega {
        return invalid(format!("chains have clique number {w} > ω = {}", params.omega));
    }
    Ok(())
}

/// Balanced coloring of the chains `P_1..P_k` whose `B` ends form one clique.
pub fn balanced_coloring(chains: &[ChainDescriptor], params: &BoundParams, mode: BColoringMode) -> Result<BalancedColoring> {
    check_chains(chains, params)?;
    let b: Vec<usize> = chains.iter().map(|c| c.b_size).collect();
    if b.windows(2).any(|w| w[0] < w[1]) {
        return invalid(format!("B sizes must be nonincreasing, got {b:?}"));
    }
    let min = params.s * params.q + 1;
    if b.iter().any(|&x| x < min) {
        return invalid(format!("every |B_i| must be at least {min}, got {b:?}"));
    }
    let needs_split = split_required(params, &b);
    if needs_split && b.len() != 3 {
        return invalid("the split regime requires k = 3");
    }
    if needs_split != (mode == BColoringMode::Split) {
        return invalid(format!("B coloring mode {mode:?} does not match the instance (split {})", if needs_split { "required" } else { "not allowed" }));
    }
    let b_colors = b_coloring(&b, params, mode)?;
    balanced_from_b(*params, b_colors)
}

/// Both monotonicity properties of a balanced coloring, per chain.
pub fn prop_balanced_check(bc: &BalancedColoring) -> Report {
    let n = bc.params.n();
    for i in 0..bc.k() {
        let base: BTreeSet<u32> = bc.b_colors[i].iter().copied().collect();
        for parity in [0, 1] {
            let js: Vec<usize> = (0..=n).filter(|j| j % 2 == parity && (parity == 0 || *j >= 1)).collect();
            let part = |j: usize| -> BTreeSet<u32> {
                bc.first[i][j].iter().copied().filter(|c| base.contains(c) == (parity == 1)).collect()
            };
            for w in js.windows(2) {
                // subset relations are transitive, so consecutive pairs suffice
                let (a, b) = (part(w[0]), part(w[1]));
                if let Some(c) = a.difference(&b).next() {
                    let what = if parity == 0 { "outside" } else { "inside" };
                    return Report::rule(
                        "monotonicity",
                        format!("chain {}: color {c} {what} L^c_{{{},0}} is in L_{{{},{},1}} but not L_{{{},{},1}}", i + 1, i + 1, i + 1, w[0], i + 1, w[1]),
                    );
                }
            }
        }
    }
    Report::pass(CheckKind::Structure)
}

/// Graph of the chains with the `B` ends joined into one clique. Vertex ids
/// run chain by chain, clique by clique; `layout[i][j]` lists `L_{i,j}`.
pub fn materialize_chains(chains: &[ChainDescriptor]) -> Result<(Graph, Vec<Vec<Vec<usize>>>)> {
    let mut layout = Vec::new();
    let mut next = 0;
    for c in chains {
        let mut cl = Vec::new();
        for j in 0..=c.sizes.len() {
            cl.push((next..next + c.size(j)).collect::<Vec<_>>());
            next += c.size(j);
        }
        layout.push(cl);
    }
    let mut edges = Vec::new();
    let s: Vec<usize> = layout.iter().flat_map(|cl| cl[0].iter().copied()).collect();
    for (x, &u) in s.iter().enumerate() {
        edges.extend(s[x + 1..].iter().map(|&v| (u, v)));
    }
    for (c, cl) in chains.iter().zip(&layout) {
        for clique in &cl[1..] {
            for (x, &u) in clique.iter().enumerate() {
                edges.extend(clique[x + 1..].iter().map(|&v| (u, v)));
            }
        }
        for l in &c.links {
            for (p, &d) in l.degrees.iter().enumerate() {
                edges.extend(cl[l.to][..d].iter().map(|&v| (cl[l.from][p], v)));
            }
        }
    }
    Ok((build_graph(next, &edges)?, layout))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::graph_core::verify_proper;

    /// Expands "a..b" (either direction) and plain numbers.
    pub(crate) fn seq(text: &str) -> Vec<u32> {
        let mut out = Vec::new();
        for tok in text.split(',').map(str::trim) {
            if let Some((a, b)) = tok.split_once("..") {
                let (a, b): (u32, u32) = (a.parse().unwrap(), b.parse().unwrap());
                if a <= b {
                    out.extend(a..=b);
                } else {
                    out.extend((b..=a).rev());
                }
            } else {
                out.push(tok.parse().unwrap());
            }
        }
        out
    }

    pub(crate) fn example_3_5() -> BalancedColoring {
        let params = BoundParams::new(9, 40).unwrap();
        let chains: Vec<ChainDescriptor> = [17, 12, 11].iter().map(|&b| ChainDescriptor::tight(b, 3, 40)).collect();
        balanced_coloring(&chains, &params, BColoringMode::Split).unwrap()
    }

    #[test]
    fn example_sequences() {
        let bc = example_3_5();
        let want = [
            ["1,4,7,10,13,16..27", "45..28,15,14,12,11,9,27..16,13,10,8,7", "1..8,10,13,16..22,9,11,12,14,15,23..39", "45..7"],
            [
                "2,5,8,11,14,28,30,32,34,36,38,40",
                "45..41,39,37,35,33,31,29,27..15,13,12,10,7,40,38,36,34,32,30,28,14,11,9,8",
                "1..6,8,9,11,14,28,30,7,10,12,13,15..27,29,31..39",
                "45..31,29,27..16,30,28,15..7",
            ],
            [
                "3,6,9,12,15,29,31,33,35,37,39",
                "45..40,38,36,34,32,30,28,27..16,14,13,11,10,8,39,37,35,33,31,29,15,12,9,7",
                "1..6,7,9,12,15,29,8,10,11,13,14,16..28,30..39",
                "45..30,28..16,29,15..7",
            ],
        ];
        for (i, row) in want.iter().enumerate() {
            for (j, text) in row.iter().enumerate() {
                assert_eq!(bc.sequence(i, j), seq(text), "L^c_{{{},{j}}}", i + 1);
            }
        }
        assert!(prop_balanced_check(&bc).is_pass());
    }

    #[test]
    fn mutation_breaks_monotonicity() {
        // drop a color that L_{i,j,1} and L_{i,j+2,1} must share from the latter
        let mut found = false;
        'search: for ell in [11, 13, 15] {
            for omega in (20..60).step_by(4) {
                let params = BoundParams::new(ell, omega).unwrap();
                let min = params.s * params.q + 1;
                if 3 * min > omega {
                    continue;
                }
                let b = [omega - 2 * min, min, min];
                if split_required(&params, &b) {
                    continue;
                }
                let chains: Vec<ChainDescriptor> = b.iter().map(|&x| ChainDescriptor::tight(x, params.n(), omega)).collect();
                let Ok(mut bc) = balanced_coloring(&chains, &params, BColoringMode::Plain) else { continue };
                assert!(prop_balanced_check(&bc).is_pass());
                for (i, j) in [(0, 1), (1, 1), (2, 1), (0, 2), (1, 2), (2, 2)] {
                    let inside = j % 2 == 1;
                    let shared = bc.first[i][j]
                        .iter()
                        .copied()
                        .find(|c| bc.b_colors[i].contains(c) == inside && bc.first[i][j + 2].contains(c));
                    if let Some(c) = shared {
                        let pos = bc.first[i][j + 2].iter().position(|&x| x == c).unwrap();
                        bc.first[i][j + 2][pos] = params.chi + 1;
                        assert!(!prop_balanced_check(&bc).is_pass());
                        found = true;
                        break 'search;
                    }
                }
            }
        }
        assert!(found);
    }

    #[test]
    fn first_part_at_zero_is_b() {
        let bc = example_3_5();
        for i in 0..3 {
            assert_eq!(bc.first[i][0], bc.b_colors[i]);
        }
    }

    #[test]
    fn single_chain() {
        let params = BoundParams::new(11, 10).unwrap();
        let chains = vec![ChainDescriptor::tight(3, params.n(), 10)];
        let bc = balanced_coloring(&chains, &params, BColoringMode::Plain).unwrap();
        assert_eq!(bc.switch[0], 2);
        assert_eq!(bc.sequence(0, 2), (1..=9).collect::<Vec<_>>());
        assert_eq!(bc.sequence(0, 3), (3..=11).rev().collect::<Vec<_>>());
        assert!(prop_balanced_check(&bc).is_pass());
        let (g, layout) = materialize_chains(&chains).unwrap();
        let c = bc.coloring_for(&layout, g.n()).unwrap();
        assert!(verify_proper(&g, &c).unwrap().is_pass());
    }

    #[test]
    fn preconditions() {
        let params = BoundParams::new(9, 40).unwrap();
        let chains: Vec<ChainDescriptor> = [17, 12, 11].iter().map(|&b| ChainDescriptor::tight(b, 3, 40)).collect();
        assert!(balanced_coloring(&chains, &params, BColoringMode::Plain).is_err());
        let small: Vec<ChainDescriptor> = [17, 12, 10].iter().map(|&b| ChainDescriptor::tight(b, 3, 40)).collect();
        assert!(balanced_coloring(&small, &params, BColoringMode::Split).is_err());
        let unsorted: Vec<ChainDescriptor> = [12, 17, 11].iter().map(|&b| ChainDescriptor::tight(b, 3, 40)).collect();
        assert!(balanced_coloring(&unsorted, &params, BColoringMode::Split).is_err());
    }
}
