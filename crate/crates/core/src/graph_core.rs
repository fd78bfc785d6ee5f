//! Graph representation, proper-coloring checks, hole enumeration and an
//! exact clique-number search.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{invalid, Budget, Result};

pub const FORMAT_VERSION: u32 = 1;

/// Immutable simple undirected graph on `0..n` with sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    labels: BTreeMap<usize, String>,
}

/// Build a graph, deduplicating edges. Loops and out-of-range ends are errors.
pub fn build_graph(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        if u >= n || v >= n {
            return invalid(format!("edge ({u},{v}) out of range for n={n}"));
        }
        if u == v {
            return invalid(format!("self-loop at vertex {u}"));
        }
        adj[u].push(v);
        adj[v].push(u);
    }
    for a in &mut adj {
        a.sort_unstable();
        a.dedup();
    }
    Ok(Graph { adj, labels: BTreeMap::new() })
}

impl Graph {
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn label(&self, v: usize) -> Option<&str> {
        self.labels.get(&v).map(String::as_str)
    }

    pub fn labels(&self) -> &BTreeMap<usize, String> {
        &self.labels
    }

    pub fn with_labels(mut self, labels: BTreeMap<usize, String>) -> Result<Graph> {
        if let Some((&v, _)) = labels.iter().find(|(&v, _)| v >= self.n()) {
            return invalid(format!("label for vertex {v} out of range"));
        }
        self.labels = labels;
        Ok(self)
    }

    pub(crate) fn adjacency_bits(&self) -> Vec<BitSet> {
        self.adj
            .iter()
            .map(|ns| {
                let mut b = BitSet::new(self.n());
                for &v in ns {
                    b.insert(v);
                }
                b
            })
            .collect()
    }

    /// Subgraph induced by `vertices`, relabelled to `0..vertices.len()` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let mut edges = Vec::new();
        for (i, &v) in vertices.iter().enumerate() {
            for &w in &self.adj[v] {
                let j = index[w];
                if j != usize::MAX && i < j {
                    edges.push((i, j));
                }
            }
        }
        build_graph(vertices.len(), &edges).expect("induced edges are in range")
    }

    /// Graph with vertex `v` renamed to `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Graph> {
        let mut seen = vec![false; self.n()];
        if perm.len() != self.n() || perm.iter().any(|&p| p >= self.n() || std::mem::replace(&mut seen[p], true)) {
            return invalid("not a permutation of the vertex set");
        }
        let edges: Vec<_> = self.edges().map(|(u, v)| (perm[u], perm[v])).collect();
        build_graph(self.n(), &edges)
    }

    pub fn to_json(&self) -> String {
        let file = GraphFile {
            version: FORMAT_VERSION,
            n: self.n(),
            edges: self.edges().map(|(u, v)| [u, v]).collect(),
            labels: self.labels.clone(),
        };
        serde_json::to_string_pretty(&file).expect("graph serializes")
    }

    pub fn from_json(text: &str) -> Result<Graph> {
        let file: GraphFile = serde_json::from_str(text)?;
        if file.version != FORMAT_VERSION {
            return invalid(format!("unsupported graph format version {}", file.version));
        }
        let edges: Vec<_> = file.edges.iter().map(|e| (e[0], e[1])).collect();
        build_graph(file.n, &edges)?.with_labels(file.labels)
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph G {\n");
        for v in 0..self.n() {
            match self.label(v) {
                Some(l) => writeln!(out, "  {v} [label=\"{}\"];", l.replace('"', "\\\"")).unwrap(),
                None => writeln!(out, "  {v};").unwrap(),
            }
        }
        for (u, v) in self.edges() {
            writeln!(out, "  {u} -- {v};").unwrap();
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Serialize, Deserialize)]
struct GraphFile {
    version: u32,
    n: usize,
    edges: Vec<[usize; 2]>,
    #[serde(default)]
    labels: BTreeMap<usize, String>,
}

/// Total map from vertices to positive colors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    colors: Vec<u32>,
}

impl Coloring {
    pub fn new(colors: Vec<u32>) -> Result<Coloring> {
        if let Some(v) = colors.iter().position(|&c| c == 0) {
            return invalid(format!("vertex {v} has color 0; colors start at 1"));
        }
        Ok(Coloring { colors })
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn color(&self, v: usize) -> u32 {
        self.colors[v]
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    /// Largest color used (0 for the empty graph).
    pub fn num_colors(&self) -> u32 {
        self.colors.iter().copied().max().unwrap_or(0)
    }

    pub fn to_json(&self, method: &str) -> String {
        let file = ColoringFile {
            version: FORMAT_VERSION,
            colors: self.colors.iter().enumerate().map(|(v, &c)| (v, c)).collect(),
            num_colors: self.num_colors(),
            method: method.to_string(),
        };
        serde_json::to_string_pretty(&file).expect("coloring serializes")
    }

    /// Parse a coloring file; returns the coloring and its method tag.
    pub fn from_json(text: &str) -> Result<(Coloring, String)> {
        let file: ColoringFile = serde_json::from_str(text)?;
        if file.version != FORMAT_VERSION {
            return invalid(format!("unsupported coloring format version {}", file.version));
        }
        let n = file.colors.len();
        if file.colors.keys().enumerate().any(|(i, &v)| i != v) {
            return invalid("coloring must cover vertices 0..n without gaps");
        }
        let c = Coloring::new(file.colors.into_values().collect())?;
        if c.num_colors() != file.num_colors {
            return invalid(format!("num_colors {} does not match the largest color {}", file.num_colors, c.num_colors()));
        }
        debug_assert_eq!(c.len(), n);
        Ok((c, file.method))
    }
}

#[derive(Serialize, Deserialize)]
struct ColoringFile {
    version: u32,
    colors: BTreeMap<usize, u32>,
    num_colors: u32,
    method: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    Properness,
    Holed,
    Bound,
    Structure,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Witness {
    /// A monochromatic edge.
    Edge { u: usize, v: usize, color: u32 },
    /// A hole of the wrong length, as a cyclic vertex sequence.
    Cycle { vertices: Vec<usize> },
    /// A count that exceeded its limit (colors vs bound, for instance).
    Counts { found: u64, limit: u64 },
    /// A violated structural rule.
    Rule { rule: String, detail: String },
}

/// Outcome of a check. A failing report always carries a witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub status: Status,
    pub kind: CheckKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl Report {
    pub fn pass(kind: CheckKind) -> Report {
        Report { status: Status::Pass, kind, witness: None }
    }

    pub fn fail(kind: CheckKind, witness: Witness) -> Report {
        Report { status: Status::Fail, kind, witness: Some(witness) }
    }

    pub(crate) fn rule(rule: &str, detail: impl Into<String>) -> Report {
        Report::fail(CheckKind::Structure, Witness::Rule { rule: rule.to_string(), detail: detail.into() })
    }

    pub fn is_pass(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Check that no edge is monochromatic.
pub fn verify_proper(g: &Graph, c: &Coloring) -> Result<Report> {
    if c.len() != g.n() {
        return invalid(format!("coloring covers {} vertices, graph has {}", c.len(), g.n()));
    }
    for (u, v) in g.edges() {
        if c.color(u) == c.color(v) {
            return Ok(Report::fail(CheckKind::Properness, Witness::Edge { u, v, color: c.color(u) }));
        }
    }
    Ok(Report::pass(CheckKind::Properness))
}

/// Visit every chordless cycle with length in `min_len..=max_len` exactly once.
///
/// Each cycle is reported starting at its smallest vertex, oriented so the
/// second vertex is smaller than the last.
pub fn for_each_chordless_cycle<F>(g: &Graph, min_len: usize, max_len: usize, budget: &mut Budget, mut visit: F) -> Result<()>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    if min_len < 4 {
        return invalid("min_len must be at least 4");
    }
    let bits = g.adjacency_bits();
    let mut closed: Vec<BitSet> = bits.clone();
    for (v, b) in closed.iter_mut().enumerate() {
        b.insert(v);
    }
    let mut path = Vec::with_capacity(max_len);
    for v0 in 0..g.n() {
        path.clear();
        path.push(v0);
        for &v1 in g.neighbors(v0).iter().filter(|&&v| v > v0) {
            path.push(v1);
            let forbidden = BitSet::new(g.n());
            let flow = extend(g, &bits, &closed, &mut path, forbidden, min_len, max_len, budget, &mut visit)?;
            path.pop();
            if flow.is_break() {
                return Ok(());
            }
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn extend<F>(
    g: &Graph,
    bits: &[BitSet],
    closed: &[BitSet],
    path: &mut Vec<usize>,
    forbidden: BitSet,
    min_len: usize,
    max_len: usize,
    budget: &mut Budget,
    visit: &mut F,
) -> Result<ControlFlow<()>>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    budget.tick("chordless cycle enumeration")?;
    let v0 = path[0];
    let last = *path.last().unwrap();
    let k = path.len();
    let mut next_forbidden = forbidden.clone();
    next_forbidden.union_with(&closed[last]);
    for &w in g.neighbors(last) {
        if w <= v0 || forbidden.contains(w) || w == path[k - 2] {
            continue;
        }
        if bits[v0].contains(w) {
            // closing vertex; a triangle when k == 2
            if k >= 3 && k + 1 >= min_len && k < max_len && path[1] < w {
                path.push(w);
                let flow = visit(path);
                path.pop();
                if flow.is_break() {
                    return Ok(flow);
                }
            }
            continue;
        }
        if k + 1 < max_len {
            path.push(w);
            let flow = extend(g, bits, closed, path, next_forbidden.clone(), min_len, max_len, budget, visit)?;
            path.pop();
            if flow.is_break() {
                return Ok(flow);
            }
        }
    }
    Ok(ControlFlow::Continue(()))
}

/// All chordless cycles with length in `min_len..=max_len`, canonically oriented.
pub fn chordless_cycles(g: &Graph, min_len: usize, max_len: usize, budget: &mut Budget) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    for_each_chordless_cycle(g, min_len, max_len, budget, |c| {
        out.push(c.to_vec());
        ControlFlow::Continue(())
    })?;
    out.sort();
    Ok(out)
}

/// Pass iff every hole of length at most `max_len` has length exactly `ell`.
pub fn validate_ell_holed(g: &Graph, ell: usize, max_len: usize, budget: &mut Budget) -> Result<Report> {
    if ell < 7 || ell % 2 == 0 {
        return invalid(format!("ell must be odd and at least 7, got {ell}"));
    }
    if max_len < ell + 1 {
        return invalid(format!("max_len {max_len} must be at least ell + 1"));
    }
    let mut bad = None;
    for_each_chordless_cycle(g, 4, max_len, budget, |c| {
        if c.len() != ell {
            bad = Some(c.to_vec());
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(match bad {
        Some(vertices) => Report::fail(CheckKind::Holed, Witness::Cycle { vertices }),
        None => Report::pass(CheckKind::Holed),
    })
}

/// A maximum clique, by branch and bound with a greedy-coloring bound.
pub fn maximum_clique(g: &Graph, budget: &mut Budget) -> Result<Vec<usize>> {
    let bits = g.adjacency_bits();
    let mut all = BitSet::new(g.n());
    for v in 0..g.n() {
        all.insert(v);
    }
    let mut best = Vec::new();
    let mut current = Vec::new();
    clique_expand(&bits, &mut current, all, &mut best, budget)?;
    best.sort_unstable();
    Ok(best)
}

fn clique_expand(bits: &[BitSet], current: &mut Vec<usize>, cand: BitSet, best: &mut Vec<usize>, budget: &mut Budget) -> Result<()> {
    budget.tick("maximum clique")?;
    if cand.is_empty() {
        if current.len() > best.len() {
            *best = current.clone();
        }
        return Ok(());
    }
    // Greedy color classes give an upper bound on any clique inside `cand`.
    let (order, bounds) = color_sort(bits, &cand);
    let mut cand = cand;
    for idx in (0..order.len()).rev() {
        if current.len() + bounds[idx] <= best.len() {
            return Ok(());
        }
        let v = order[idx];
        current.push(v);
        clique_expand(bits, current, cand.intersect(&bits[v]), best, budget)?;
        current.pop();
        cand.remove(v);
    }
    Ok(())
}

fn color_sort(bits: &[BitSet], cand: &BitSet) -> (Vec<usize>, Vec<usize>) {
    let mut rest: Vec<usize> = cand.iter().collect();
    let mut order = Vec::with_capacity(rest.len());
    let mut bounds = Vec::with_capacity(rest.len());
    let mut color = 0;
    while !rest.is_empty() {
        color += 1;
        let mut class: Vec<usize> = Vec::new();
        rest.retain(|&v| {
            if class.iter().all(|&u| !bits[u].contains(v)) {
                class.push(v);
                false
            } else {
                true
            }
        });
        for v in class {
            order.push(v);
            bounds.push(color);
        }
    }
    (order, bounds)
}

/// Exact clique number.
pub fn clique_number_bruteforce(g: &Graph, budget: &mut Budget) -> Result<usize> {
    maximum_clique(g, budget).map(|c| c.len())
}
