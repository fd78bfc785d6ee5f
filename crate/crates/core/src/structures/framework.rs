use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::cycle::random_staircase;
use super::{OrderedClique, StaircaseLink};
use crate::error::{invalid, Error, Result};
use crate::graph_core::{build_graph, CheckKind, Graph, Report};

/// A vertex of the framework. `P(i, j)` is the interior vertex of the path
/// from `b_i` to `a_i` at distance `j` from `b_i`.
///
/// The derived order (a's, t's, b's, s's, path interiors) is the vertex-id layout.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    A(usize),
    T(usize),
    B(usize),
    S(usize),
    P(usize, usize),
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::A(i) => write!(f, "a{i}"),
            Node::T(i) => write!(f, "t{i}"),
            Node::B(i) => write!(f, "b{i}"),
            Node::S(i) => write!(f, "s{i}"),
            Node::P(i, j) => write!(f, "p{i}.{j}"),
        }
    }
}

impl FromStr for Node {
    type Err = Error;

    fn from_str(s: &str) -> Result<Node> {
        let bad = || Error::Invalid(format!("bad framework vertex name {s:?}"));
        let (head, rest) = s.split_at(s.char_indices().nth(1).map_or(s.len(), |(i, _)| i));
        let num = |x: &str| x.parse::<usize>().map_err(|_| bad());
        match head {
            "a" => Ok(Node::A(num(rest)?)),
            "t" => Ok(Node::T(num(rest)?)),
            "b" => Ok(Node::B(num(rest)?)),
            "s" => Ok(Node::S(num(rest)?)),
            "p" => {
                let (i, j) = rest.split_once('.').ok_or_else(bad)?;
                Ok(Node::P(num(i)?, num(j)?))
            }
            _ => Err(bad()),
        }
    }
}

impl Serialize for Node {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Node {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Node, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A tent: apex index (`a_apex` or `b_apex`) and the inclusive base interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tent {
    pub apex: usize,
    pub base: [usize; 2],
}

/// Combinatorial framework: arborescences `T` (apex `a_0`) and `S` (apex
/// `b_k`) given as parent→child arcs, plus tent annotations. The paths
/// `P_i` are implicit, each with `(ℓ−3)/2` edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameworkSpec {
    pub ell: usize,
    pub k: usize,
    pub m: usize,
    pub t_extra: usize,
    pub s_extra: usize,
    pub t_arcs: Vec<[Node; 2]>,
    pub s_arcs: Vec<[Node; 2]>,
    pub upper_tents: Vec<Tent>,
    pub lower_tents: Vec<Tent>,
}

/// Clique sizes (absent means 1) and the staircases along every path edge,
/// oriented from the `b` end toward the `a` end.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowupAssignment {
    pub sizes: BTreeMap<Node, usize>,
    pub links: Vec<StaircaseLink<Node>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameworkBlowup {
    pub framework: FrameworkSpec,
    pub assignment: BlowupAssignment,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TentShape {
    Star,
    /// A directed path of `spine` internal vertices below the apex, with the
    /// base leaves hanging off it.
    Caterpillar { spine: usize },
    /// A directed path of `handle` internal vertices with every leaf on its last vertex.
    Broom { handle: usize },
}

/// Rooted tree view of one arborescence.
#[derive(Clone, Debug)]
pub(crate) struct Arb {
    root: Node,
    parent: BTreeMap<Node, Node>,
    children: BTreeMap<Node, Vec<Node>>,
}

impl Arb {
    fn build(nodes: &[Node], arcs: &[[Node; 2]], root: Node) -> std::result::Result<Arb, String> {
        let known: BTreeSet<Node> = nodes.iter().copied().collect();
        let mut parent = BTreeMap::new();
        let mut children: BTreeMap<Node, Vec<Node>> = nodes.iter().map(|&v| (v, Vec::new())).collect();
        for &[p, c] in arcs {
            if !known.contains(&p) || !known.contains(&c) {
                return Err(format!("arc {p}->{c} uses a vertex outside the arborescence"));
            }
            if c == root {
                return Err(format!("arc {p}->{c} enters the apex"));
            }
            if parent.insert(c, p).is_some() {
                return Err(format!("{c} has two parents"));
            }
            children.get_mut(&p).unwrap().push(c);
        }
        for v in children.values_mut() {
            v.sort();
        }
        let arb = Arb { root, parent, children };
        let reached = arb.descendants(root, |_| true);
        if reached.len() != nodes.len() {
            let missing = nodes.iter().find(|v| !reached.contains(v)).unwrap();
            return Err(format!("{missing} is not reachable from {root}"));
        }
        Ok(arb)
    }

    fn children(&self, v: Node) -> &[Node] {
        &self.children[&v]
    }

    fn is_leaf(&self, v: Node) -> bool {
        v != self.root && self.children(v).is_empty()
    }

    /// `v` and everything below it, not descending into nodes where `enter` is false.
    fn descendants(&self, v: Node, enter: impl Fn(Node) -> bool) -> BTreeSet<Node> {
        let mut out = BTreeSet::new();
        let mut stack = vec![v];
        while let Some(x) = stack.pop() {
            if out.insert(x) {
                stack.extend(self.children(x).iter().copied().filter(|&c| enter(c)));
            }
        }
        out
    }

    /// Vertices from the root down to `v`, inclusive.
    pub(crate) fn root_path(&self, v: Node) -> Vec<Node> {
        let mut path = vec![v];
        let mut x = v;
        while let Some(&p) = self.parent.get(&x) {
            path.push(p);
            x = p;
        }
        path.reverse();
        path
    }

    fn is_ancestor(&self, u: Node, v: Node) -> bool {
        let mut x = v;
        while let Some(&p) = self.parent.get(&x) {
            if p == u {
                return true;
            }
            x = p;
        }
        false
    }

    fn leaves(&self) -> Vec<Node> {
        self.children.keys().copied().filter(|&v| self.is_leaf(v)).collect()
    }
}

impl FrameworkSpec {
    pub fn n_path(&self) -> usize {
        (self.ell - 3) / 2
    }

    pub fn t_nodes(&self) -> Vec<Node> {
        (0..=self.k).map(Node::A).chain((0..self.t_extra).map(Node::T)).collect()
    }

    pub fn s_nodes(&self) -> Vec<Node> {
        (1..=self.k).map(Node::B).chain((0..self.s_extra).map(Node::S)).collect()
    }

    /// Path `P_i` from `b_i` to `a_i`.
    pub fn chain(&self, i: usize) -> Vec<Node> {
        let n = self.n_path();
        std::iter::once(Node::B(i)).chain((1..n).map(|j| Node::P(i, j))).chain(std::iter::once(Node::A(i))).collect()
    }

    /// Every vertex of `D`, in layout order.
    pub fn nodes(&self) -> Vec<Node> {
        let mut v: Vec<Node> = self.t_nodes();
        v.extend(self.s_nodes());
        for i in 1..=self.k {
            let c = self.chain(i);
            v.extend_from_slice(&c[1..c.len() - 1]);
        }
        v.sort();
        v
    }

    pub(crate) fn arbs(&self) -> std::result::Result<(Arb, Arb), Report> {
        let t = Arb::build(&self.t_nodes(), &self.t_arcs, Node::A(0)).map_err(|e| Report::rule("T", e))?;
        let s = Arb::build(&self.s_nodes(), &self.s_arcs, Node::B(self.k)).map_err(|e| Report::rule("S", e))?;
        Ok((t, s))
    }

    /// `a_0` followed by the vertices every maximal directed path from `a_0` passes through.
    pub fn a0_nodes(&self) -> Vec<Node> {
        let Ok((t, _)) = self.arbs() else { return vec![Node::A(0)] };
        let mut out = vec![Node::A(0)];
        let mut x = Node::A(0);
        while let [only] = t.children(x) {
            if t.is_leaf(*only) {
                break;
            }
            out.push(*only);
            x = *only;
        }
        out
    }

    /// The `m = 0` framework whose single tent is a broom, so that `A_0` has
    /// `a0_size` vertices.
    pub fn m0_broom(ell: usize, k: usize, a0_size: usize) -> Result<FrameworkSpec> {
        if a0_size == 0 {
            return invalid("A_0 has at least the vertex a_0");
        }
        build_spiral(ell, k, 0, &[0], &[], &mut |_, _| TentShape::Broom { handle: a0_size - 1 }, &mut |opts: &[Node]| opts[0])
    }

    /// The spiral framework for upper apexes `u` (starting at 0) and lower
    /// apexes `w` (decreasing), every tent a star hanging its successor from
    /// the apex.
    pub fn spiral(ell: usize, k: usize, m: usize, u: &[usize], w: &[usize]) -> Result<FrameworkSpec> {
        build_spiral(ell, k, m, u, w, &mut |_, _| TentShape::Star, &mut |opts: &[Node]| opts[0])
    }
}

/// Full structural validation of a framework.
pub fn validate_framework(spec: &FrameworkSpec) -> Report {
    match check_framework(spec) {
        Ok(()) => Report::pass(CheckKind::Structure),
        Err(r) => r,
    }
}

fn check_framework(spec: &FrameworkSpec) -> std::result::Result<(), Report> {
    let (ell, k, m) = (spec.ell, spec.k, spec.m);
    if ell < 7 || ell % 2 == 0 {
        return Err(Report::rule("ell", format!("ell must be odd and at least 7, got {ell}")));
    }
    if k < 3 || m + 2 > k {
        return Err(Report::rule("k,m", format!("need k >= 3 and 0 <= m <= k-2, got k={k}, m={m}")));
    }
    let (t, s) = spec.arbs()?;

    // tent apexes and base partitions
    check_tents(&spec.upper_tents, 0..=m, m + 1..=k, "upper")?;
    check_tents(&spec.lower_tents, m + 1..=k, 1..=m, "lower")?;
    if !spec.upper_tents.iter().any(|x| x.apex == 0) {
        return Err(Report::rule("tents", "no tent has apex a_0"));
    }
    if m == 0 && !spec.lower_tents.is_empty() {
        return Err(Report::rule("tents", "m = 0 but lower tents are present"));
    }

    let upper_sets = tent_sets(&t, &spec.upper_tents, Node::A, |v| matches!(v, Node::A(i) if (1..=m).contains(&i)), "upper")?;
    let lower_sets = tent_sets(&s, &spec.lower_tents, Node::B, |v| matches!(v, Node::B(i) if (m + 1..=k).contains(&i)), "lower")?;
    check_membership(&t, &upper_sets, |v| matches!(v, Node::T(_)), "T")?;
    check_membership(&s, &lower_sets, |v| matches!(v, Node::S(_)), "S")?;

    // leaves
    for v in t.leaves() {
        if !matches!(v, Node::A(i) if i >= m.max(1)) {
            return Err(Report::rule("T leaves", format!("{v} is a leaf of T")));
        }
    }
    for v in s.leaves() {
        if !matches!(v, Node::B(i) if i <= m + 1) {
            return Err(Report::rule("S leaves", format!("{v} is a leaf of S")));
        }
    }

    // spine arcs
    for i in 1..=m {
        let p = t.parent[&Node::A(i)];
        let ok = match upper_sets.iter().find(|(x, _)| x.apex == i - 1) {
            Some((_, set)) => set.contains(&p) && !t.children(p).iter().all(|&c| t.is_leaf(c) && c != Node::A(i)) && !t.is_leaf(p),
            None => p == Node::A(i - 1),
        };
        if !ok {
            return Err(Report::rule("spine", format!("a_{i} hangs from {p}")));
        }
    }
    for i in m + 1..k {
        let p = s.parent[&Node::B(i)];
        let ok = match lower_sets.iter().find(|(x, _)| x.apex == i + 1) {
            Some((_, set)) => set.contains(&p) && !s.is_leaf(p),
            None => p == Node::B(i + 1),
        };
        if !ok {
            return Err(Report::rule("spine", format!("b_{i} hangs from {p}")));
        }
    }

    check_spiral(spec)?;

    // exactly one of the two directed paths for every pair
    for i in 1..=k {
        for j in i + 1..=k {
            let (a, b) = (Node::A(i), Node::A(j));
            let tp = t.is_ancestor(a, b) || t.is_ancestor(b, a);
            let (a, b) = (Node::B(i), Node::B(j));
            let sp = s.is_ancestor(a, b) || s.is_ancestor(b, a);
            if tp == sp {
                let what = if tp { "both" } else { "neither" };
                return Err(Report::rule("paths", format!("pair ({i},{j}) has {what} of the directed paths")));
            }
        }
    }
    Ok(())
}

fn check_tents(
    tents: &[Tent],
    apexes: std::ops::RangeInclusive<usize>,
    bases: std::ops::RangeInclusive<usize>,
    side: &str,
) -> std::result::Result<(), Report> {
    let mut covered = BTreeMap::new();
    let mut seen_apex = BTreeSet::new();
    for x in tents {
        if !apexes.contains(&x.apex) || !seen_apex.insert(x.apex) {
            return Err(Report::rule("tents", format!("{side} tent apex {} is out of range or repeated", x.apex)));
        }
        let [lo, hi] = x.base;
        if lo > hi || !bases.contains(&lo) || !bases.contains(&hi) {
            return Err(Report::rule("tents", format!("{side} tent base [{lo},{hi}] is not an interval of {bases:?}")));
        }
        for b in lo..=hi {
            if covered.insert(b, x.apex).is_some() {
                return Err(Report::rule("tents", format!("{side} bases overlap at {b}")));
            }
        }
    }
    if let Some(b) = bases.clone().find(|b| !covered.contains_key(b)) {
        return Err(Report::rule("tents", format!("index {b} lies in no {side} tent base")));
    }
    Ok(())
}

type TentSets = Vec<(Tent, BTreeSet<Node>)>;

fn tent_sets(
    arb: &Arb,
    tents: &[Tent],
    node: fn(usize) -> Node,
    is_spine: impl Fn(Node) -> bool,
    side: &str,
) -> std::result::Result<TentSets, Report> {
    let mut out = Vec::new();
    for &x in tents {
        let set = arb.descendants(node(x.apex), |v| !is_spine(v));
        let leaves: BTreeSet<Node> = set.iter().copied().filter(|&v| arb.is_leaf(v)).collect();
        let want: BTreeSet<Node> = (x.base[0]..=x.base[1]).map(node).collect();
        if leaves != want {
            return Err(Report::rule(
                "tents",
                format!("{side} tent at {} has leaves {:?}, base says {:?}", node(x.apex), names(&leaves), names(&want)),
            ));
        }
        out.push((x, set));
    }
    Ok(out)
}

fn check_membership(arb: &Arb, sets: &TentSets, internal: impl Fn(Node) -> bool, which: &str) -> std::result::Result<(), Report> {
    for &v in arb.children.keys().filter(|&&v| internal(v)) {
        let count = sets.iter().filter(|(_, s)| s.contains(&v)).count();
        if count != 1 {
            return Err(Report::rule("tents", format!("{which} vertex {v} lies in {count} tents")));
        }
    }
    Ok(())
}

fn names(s: &BTreeSet<Node>) -> Vec<String> {
    s.iter().map(|v| v.to_string()).collect()
}

/// Walk apex → leftmost base → lower apex → rightmost base → upper apex ...
/// from the `a_0` tent; every tent must be visited exactly once.
fn check_spiral(spec: &FrameworkSpec) -> std::result::Result<(), Report> {
    let upper: BTreeMap<usize, Tent> = spec.upper_tents.iter().map(|x| (x.apex, *x)).collect();
    let lower: BTreeMap<usize, Tent> = spec.lower_tents.iter().map(|x| (x.apex, *x)).collect();
    let total = upper.len() + lower.len();
    let mut visited = 0;
    let mut current = (true, 0usize);
    let mut seen = BTreeSet::new();
    loop {
        if !seen.insert(current) {
            return Err(Report::rule("spiral", "the spiral revisits a tent"));
        }
        visited += 1;
        let next = if current.0 {
            let lo = upper[&current.1].base[0];
            lower.contains_key(&lo).then_some((false, lo))
        } else {
            let hi = lower[&current.1].base[1];
            upper.contains_key(&hi).then_some((true, hi))
        };
        match next {
            Some(n) => current = n,
            None => break,
        }
    }
    if visited != total {
        return Err(Report::rule("spiral", format!("the spiral from a_0 reaches {visited} of {total} tents")));
    }
    Ok(())
}

/// Bullet-by-bullet check of a blow-up assignment against its framework.
pub fn validate_assignment(spec: &FrameworkSpec, asg: &BlowupAssignment) -> Report {
    let nodes: BTreeSet<Node> = spec.nodes().into_iter().collect();
    let path_nodes: BTreeSet<Node> = (1..=spec.k).flat_map(|i| spec.chain(i)).collect();
    for (&v, &size) in &asg.sizes {
        if !nodes.contains(&v) {
            return Report::rule("bullet 1", format!("size given for unknown vertex {v}"));
        }
        if size == 0 {
            return Report::rule("bullet 1", format!("W_{v} is empty"));
        }
        if size != 1 && !path_nodes.contains(&v) {
            return Report::rule("bullet 1", format!("{v} lies on no path but W_{v} has size {size}"));
        }
    }
    let size = |v: &Node| asg.sizes.get(v).copied().unwrap_or(1);
    let mut expected: BTreeSet<(Node, Node)> = BTreeSet::new();
    for i in 1..=spec.k {
        let c = spec.chain(i);
        expected.extend(c.windows(2).map(|w| (w[0], w[1])));
    }
    let mut given = BTreeSet::new();
    for l in &asg.links {
        if !expected.contains(&(l.from, l.to)) {
            return Report::rule("bullet 2", format!("link {}->{} is not a path edge oriented from b to a", l.from, l.to));
        }
        if !given.insert((l.from, l.to)) {
            return Report::rule("bullet 2", format!("link {}->{} given twice", l.from, l.to));
        }
        if let Some(e) = l.shape_error(size(&l.from), size(&l.to), true) {
            return Report::rule("bullet 2", format!("link {}->{}: {e}", l.from, l.to));
        }
    }
    if let Some((a, b)) = expected.difference(&given).next() {
        return Report::rule("bullet 2", format!("path edge {a}-{b} has no link"));
    }
    Report::pass(CheckKind::Structure)
}

/// Vertex ids of every clique of a materialized framework blow-up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameworkLayout {
    pub cliques: BTreeMap<Node, Vec<usize>>,
    pub a0: Vec<Node>,
    pub n: usize,
}

impl FrameworkBlowup {
    pub fn new(framework: FrameworkSpec, assignment: BlowupAssignment) -> Self {
        FrameworkBlowup { framework, assignment }
    }

    pub fn size(&self, v: Node) -> usize {
        self.assignment.sizes.get(&v).copied().unwrap_or(1)
    }

    pub fn link(&self, from: Node, to: Node) -> Option<&StaircaseLink<Node>> {
        self.assignment.links.iter().find(|l| l.from == from && l.to == to)
    }

    /// Spine vertices get ids `0..|V(D)|` in node order, then the remaining
    /// vertices follow clique by clique in the same order.
    pub fn layout(&self) -> FrameworkLayout {
        let nodes = self.framework.nodes();
        let mut cliques: BTreeMap<Node, Vec<usize>> = nodes.iter().enumerate().map(|(i, &v)| (v, vec![i])).collect();
        let mut next = nodes.len();
        for v in &nodes {
            for _ in 1..self.size(*v) {
                cliques.get_mut(v).unwrap().push(next);
                next += 1;
            }
        }
        FrameworkLayout { cliques, a0: self.framework.a0_nodes(), n: next }
    }

    /// Largest root-to-leaf weight in `T` and `S`, and the largest clique
    /// across any path staircase.
    pub fn structural_clique_number(&self) -> usize {
        let Ok((t, s)) = self.framework.arbs() else { return 0 };
        let weight = |arb: &Arb| -> usize {
            arb.children.keys().map(|&v| arb.root_path(v).iter().map(|&x| self.size(x)).sum::<usize>()).max().unwrap_or(0)
        };
        let links = self.assignment.links.iter().map(|l| l.clique_number(self.size(l.to)));
        links.chain([weight(&t), weight(&s)]).max().unwrap_or(0)
    }
}

/// Realize the blow-up. Cliques are named after their framework vertex.
pub fn materialize_framework_blowup(spec: &FrameworkSpec, asg: &BlowupAssignment) -> Result<(Graph, Vec<OrderedClique>)> {
    let r = validate_framework(spec);
    if !r.is_pass() {
        return Err(Error::Invalid(format!("invalid framework: {:?}", r.witness)));
    }
    let r = validate_assignment(spec, asg);
    if !r.is_pass() {
        return Err(Error::Invalid(format!("invalid assignment: {:?}", r.witness)));
    }
    let (t, s) = spec.arbs().expect("validated");
    let fb = FrameworkBlowup::new(spec.clone(), asg.clone());
    let layout = fb.layout();
    let w = |v: &Node| &layout.cliques[v];
    let mut edges = Vec::new();
    let mut labels = BTreeMap::new();
    for (v, c) in &layout.cliques {
        for (p, &x) in c.iter().enumerate() {
            labels.insert(x, format!("W_{v}[{}]", p + 1));
            edges.extend(c[p + 1..].iter().map(|&y| (x, y)));
        }
    }
    for arb in [&t, &s] {
        for (&v, _) in arb.parent.iter() {
            for &u in &arb.root_path(v)[..arb.root_path(v).len() - 1] {
                for &x in w(&u) {
                    edges.extend(w(&v).iter().map(|&y| (x, y)));
                }
            }
        }
    }
    for l in &asg.links {
        let (a, b) = (w(&l.from), w(&l.to));
        for (p, &d) in l.degrees.iter().enumerate() {
            edges.extend(b[..d].iter().map(|&y| (a[p], y)));
        }
    }
    let g = build_graph(layout.n, &edges)?.with_labels(labels)?;
    let cliques = layout.cliques.iter().map(|(v, c)| OrderedClique { id: v.to_string(), vertices: c.clone() }).collect();
    Ok((g, cliques))
}

/// Builds the spiral framework for apex lists `u` (upper, increasing from 0)
/// and `w` (lower, decreasing). `shape` picks each tent's tree and `attach`
/// picks the parent of the next spine vertex among a tent's non-leaves.
fn build_spiral(
    ell: usize,
    k: usize,
    m: usize,
    u: &[usize],
    w: &[usize],
    shape: &mut dyn FnMut(bool, usize) -> TentShape,
    attach: &mut dyn FnMut(&[Node]) -> Node,
) -> Result<FrameworkSpec> {
    if u.first() != Some(&0) || !(u.len() == w.len() || u.len() == w.len() + 1) {
        return invalid("apex lists must alternate starting from a_0");
    }
    let mut upper = Vec::new();
    for t in 0..u.len() {
        let lo = if t < w.len() { w[t] } else { m + 1 };
        let hi = if t == 0 { k } else { w[t - 1] - 1 };
        upper.push(Tent { apex: u[t], base: [lo, hi] });
    }
    let mut lower = Vec::new();
    for t in 0..w.len() {
        let lo = u[t] + 1;
        let hi = if t + 1 < u.len() { u[t + 1] } else { m };
        lower.push(Tent { apex: w[t], base: [lo, hi] });
    }
    let mut spec = FrameworkSpec {
        ell,
        k,
        m,
        t_extra: 0,
        s_extra: 0,
        t_arcs: Vec::new(),
        s_arcs: Vec::new(),
        upper_tents: upper.clone(),
        lower_tents: lower.clone(),
    };
    // non-leaf vertices per tent, keyed by apex
    let mut t_hubs: BTreeMap<usize, Vec<Node>> = BTreeMap::new();
    for x in &upper {
        let hubs = grow_tent(&mut spec.t_arcs, &mut spec.t_extra, Node::A(x.apex), (x.base[0]..=x.base[1]).map(Node::A).collect(), Node::T, shape(true, x.apex));
        t_hubs.insert(x.apex, hubs);
    }
    let mut s_hubs: BTreeMap<usize, Vec<Node>> = BTreeMap::new();
    for x in &lower {
        let hubs = grow_tent(&mut spec.s_arcs, &mut spec.s_extra, Node::B(x.apex), (x.base[0]..=x.base[1]).map(Node::B).collect(), Node::S, shape(false, x.apex));
        s_hubs.insert(x.apex, hubs);
    }
    for i in 1..=m {
        let p = match t_hubs.get(&(i - 1)) {
            Some(h) => attach(h),
            None => Node::A(i - 1),
        };
        spec.t_arcs.push([p, Node::A(i)]);
    }
    for i in m + 1..k {
        let p = match s_hubs.get(&(i + 1)) {
            Some(h) => attach(h),
            None => Node::B(i + 1),
        };
        spec.s_arcs.push([p, Node::B(i)]);
    }
    spec.t_arcs.sort();
    spec.s_arcs.sort();
    let r = validate_framework(&spec);
    if !r.is_pass() {
        return invalid(format!("apex lists do not give a framework: {:?}", r.witness));
    }
    Ok(spec)
}

fn grow_tent(arcs: &mut Vec<[Node; 2]>, extra: &mut usize, apex: Node, leaves: Vec<Node>, mk: fn(usize) -> Node, shape: TentShape) -> Vec<Node> {
    match shape {
        TentShape::Star => {
            arcs.extend(leaves.iter().map(|&l| [apex, l]));
            vec![apex]
        }
        TentShape::Caterpillar { spine } => {
            let mut hubs = vec![apex];
            for _ in 0..spine.max(1) {
                let v = mk(*extra);
                *extra += 1;
                arcs.push([*hubs.last().unwrap(), v]);
                hubs.push(v);
            }
            // leaves alternate from the bottom of the spine upward; the last hub always gets one
            for (idx, &l) in leaves.iter().enumerate() {
                let h = hubs[hubs.len() - 1 - idx % hubs.len()];
                arcs.push([h, l]);
            }
            hubs
        }
        TentShape::Broom { handle } => {
            let mut tip = apex;
            for _ in 0..handle {
                let v = mk(*extra);
                *extra += 1;
                arcs.push([tip, v]);
                tip = v;
            }
            arcs.extend(leaves.iter().map(|&l| [tip, l]));
            vec![tip]
        }
    }
}

/// Random spiral framework with random tent shapes and a random blow-up whose
/// path cliques have sizes in `1..=max_size`.
pub fn random_framework(ell: usize, k: usize, m: usize, max_size: usize, seed: u64) -> Result<(FrameworkSpec, BlowupAssignment)> {
    if ell < 7 || ell % 2 == 0 || k < 3 || m + 2 > k || max_size == 0 {
        return invalid(format!("unsupported parameters ell={ell}, k={k}, m={m}, max_size={max_size}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..64 {
        let Some((u, w)) = random_apexes(&mut rng, k, m) else { continue };
        let mut shape_rng = ChaCha8Rng::seed_from_u64(rng.gen());
        let mut attach_rng = ChaCha8Rng::seed_from_u64(rng.gen());
        let spec = build_spiral(
            ell,
            k,
            m,
            &u,
            &w,
            &mut |_, _| match shape_rng.gen_range(0..3) {
                0 => TentShape::Star,
                s => TentShape::Caterpillar { spine: s },
            },
            &mut |hubs: &[Node]| *hubs.choose(&mut attach_rng).unwrap(),
        );
        let Ok(spec) = spec else { continue };
        let asg = random_assignment(&spec, max_size, &mut rng);
        return Ok((spec, asg));
    }
    invalid(format!("could not generate a framework for k={k}, m={m}"))
}

fn random_apexes(rng: &mut impl Rng, k: usize, m: usize) -> Option<(Vec<usize>, Vec<usize>)> {
    if m == 0 {
        return Some((vec![0], Vec::new()));
    }
    // tents alternate upper/lower; pick how many and where
    let mut counts = Vec::new();
    for total in 2..=2 * k {
        let (nu, nl) = (total.div_ceil(2), total / 2);
        let feasible = if total % 2 == 1 { nu >= 2 && nu - 2 < m && nl < k - m } else { nu - 1 < m && nl - 1 < k - m };
        if feasible {
            counts.push(total);
        }
    }
    let total = *counts.choose(rng)?;
    let (nu, nl) = (total.div_ceil(2), total / 2);
    let pick = |rng: &mut dyn rand::RngCore, range: Vec<usize>, count: usize| -> Vec<usize> {
        let mut v: Vec<usize> = range.choose_multiple(rng, count).copied().collect();
        v.sort_unstable();
        v
    };
    let (mut u, mut w);
    if total % 2 == 1 {
        u = vec![0];
        u.extend(pick(rng, (1..m).collect(), nu - 2));
        u.push(m);
        w = pick(rng, (m + 2..=k).collect(), nl);
    } else {
        u = vec![0];
        u.extend(pick(rng, (1..m).collect(), nu - 1));
        w = pick(rng, (m + 2..=k).collect(), nl - 1);
        w.insert(0, m + 1);
    }
    w.reverse();
    Some((u, w))
}

fn random_assignment(spec: &FrameworkSpec, max_size: usize, rng: &mut impl Rng) -> BlowupAssignment {
    let mut sizes = BTreeMap::new();
    let mut links = Vec::new();
    for i in 1..=spec.k {
        let chain = spec.chain(i);
        for &v in &chain {
            sizes.insert(v, rng.gen_range(1..=max_size));
        }
        for e in chain.windows(2) {
            let degrees = random_staircase(rng, sizes[&e[0]], sizes[&e[1]], true);
            links.push(StaircaseLink { from: e[0], to: e[1], degrees });
        }
    }
    BlowupAssignment { sizes, links }
}

/// Random `m = 0` blow-up with clique number at most `omega` whose `B`
/// cliques all have at least `s⌈ω/(ℓ−1)⌉ + 1` vertices.
pub fn random_m0_blowup(ell: usize, k: usize, omega: usize, seed: u64) -> Result<(FrameworkSpec, BlowupAssignment)> {
    if ell < 7 || ell % 2 == 0 || k < 3 {
        return invalid(format!("unsupported parameters ell={ell}, k={k}"));
    }
    let min_b = (ell - 1) / 4 * omega.div_ceil(ell - 1) + 1;
    if k * min_b > omega {
        return invalid(format!("{k} cliques of size {min_b} do not fit in omega = {omega}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shape = match rng.gen_range(0..3) {
        0 => TentShape::Star,
        1 => TentShape::Caterpillar { spine: rng.gen_range(1..=2) },
        _ => TentShape::Broom { handle: rng.gen_range(0..=2) },
    };
    let spec = build_spiral(ell, k, 0, &[0], &[], &mut |_, _| shape, &mut |h: &[Node]| h[0])?;
    let (t, _) = spec.arbs().expect("generated framework is valid");
    let total = rng.gen_range(k * min_b..=omega);
    let mut b = vec![min_b; k];
    for _ in 0..total - k * min_b {
        b[rng.gen_range(0..k)] += 1;
    }
    let mut sizes = BTreeMap::new();
    let mut links = Vec::new();
    for i in 1..=k {
        let chain = spec.chain(i);
        let depth = t.root_path(Node::A(i)).len() - 1;
        for (j, &v) in chain.iter().enumerate() {
            let size = if j == 0 {
                b[i - 1]
            } else if v == Node::A(i) {
                rng.gen_range(1..=omega - depth)
            } else {
                rng.gen_range(1..omega)
            };
            sizes.insert(v, size);
        }
        for e in chain.windows(2) {
            let mut degrees = random_staircase(&mut rng, sizes[&e[0]], sizes[&e[1]], true);
            for (p, d) in degrees.iter_mut().enumerate() {
                *d = (*d).min(omega - 1 - p);
            }
            links.push(StaircaseLink { from: e[0], to: e[1], degrees });
        }
    }
    Ok((spec, BlowupAssignment { sizes, links }))
}

impl BlowupAssignment {
    /// All path cliques of size `size`, joined completely along the paths.
    pub fn uniform(spec: &FrameworkSpec, size: usize) -> BlowupAssignment {
        let mut sizes = BTreeMap::new();
        let mut links = Vec::new();
        for i in 1..=spec.k {
            let chain = spec.chain(i);
            for &v in &chain {
                sizes.insert(v, size);
            }
            links.extend(chain.windows(2).map(|e| StaircaseLink::complete(e[0], e[1], size, size)));
        }
        BlowupAssignment { sizes, links }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Budget;
    use crate::graph_core::{clique_number_bruteforce, validate_ell_holed};

    pub(crate) fn figure2() -> FrameworkSpec {
        FrameworkSpec::spiral(7, 10, 4, &[0, 3, 4], &[9, 8]).unwrap()
    }

    #[test]
    fn node_names_round_trip() {
        for v in [Node::A(0), Node::T(3), Node::B(12), Node::S(1), Node::P(2, 1)] {
            assert_eq!(v.to_string().parse::<Node>().unwrap(), v);
        }
        assert!("q1".parse::<Node>().is_err());
        assert!("p1".parse::<Node>().is_err());
    }

    #[test]
    fn figure2_is_valid() {
        let f = figure2();
        assert!(validate_framework(&f).is_pass(), "{:?}", validate_framework(&f));
        assert_eq!(f.upper_tents.iter().map(|x| (x.apex, x.base)).collect::<Vec<_>>(), vec![(0, [9, 10]), (3, [8, 8]), (4, [5, 7])]);
        assert_eq!(f.lower_tents.iter().map(|x| (x.apex, x.base)).collect::<Vec<_>>(), vec![(9, [1, 3]), (8, [4, 4])]);
        let asg = BlowupAssignment::uniform(&f, 1);
        let (g, _) = materialize_framework_blowup(&f, &asg).unwrap();
        assert!(validate_ell_holed(&g, 7, 14, &mut Budget::default()).unwrap().is_pass());
    }

    #[test]
    fn lower_tent_with_m0_fails() {
        let mut f = FrameworkSpec::spiral(7, 3, 0, &[0], &[]).unwrap();
        f.lower_tents.push(Tent { apex: 3, base: [1, 1] });
        assert!(!validate_framework(&f).is_pass());
    }

    #[test]
    fn uncovered_base_fails() {
        let mut f = FrameworkSpec::spiral(7, 4, 0, &[0], &[]).unwrap();
        f.upper_tents[0].base = [1, 3];
        assert!(!validate_framework(&f).is_pass());
    }

    #[test]
    fn theta_for_k3() {
        let f = FrameworkSpec::spiral(7, 3, 0, &[0], &[]).unwrap();
        let asg = BlowupAssignment::uniform(&f, 1);
        let (g, _) = materialize_framework_blowup(&f, &asg).unwrap();
        let holes = crate::graph_core::chordless_cycles(&g, 4, 14, &mut Budget::default()).unwrap();
        assert_eq!(holes.len(), 3);
        assert!(holes.iter().all(|h| h.len() == 7));
    }

    #[test]
    fn perturbed_size_and_bullets() {
        let f = FrameworkSpec::spiral(7, 3, 0, &[0], &[]).unwrap();
        let mut asg = BlowupAssignment::uniform(&f, 1);
        asg.sizes.insert(Node::P(1, 1), 2);
        for l in asg.links.iter_mut() {
            if l.to == Node::P(1, 1) {
                l.degrees = vec![2];
            }
            if l.from == Node::P(1, 1) {
                l.degrees = vec![1, 1];
            }
        }
        assert!(validate_assignment(&f, &asg).is_pass());
        let mut bad = asg.clone();
        bad.sizes.insert(Node::A(0), 2);
        assert!(matches!(validate_assignment(&f, &bad).witness, Some(crate::graph_core::Witness::Rule { ref rule, .. }) if rule == "bullet 1"));
        let mut bad = asg.clone();
        bad.links[0].degrees = vec![0];
        assert!(matches!(validate_assignment(&f, &bad).witness, Some(crate::graph_core::Witness::Rule { ref rule, .. }) if rule == "bullet 2"));
    }

    #[test]
    fn random_frameworks_are_valid_and_holed() {
        for seed in 0..12 {
            let (k, m) = [(3, 0), (4, 1), (5, 2), (6, 3)][seed as usize % 4];
            let (f, asg) = random_framework(7, k, m, 2, seed).unwrap();
            assert!(validate_framework(&f).is_pass());
            assert!(validate_assignment(&f, &asg).is_pass());
            let (g, _) = materialize_framework_blowup(&f, &asg).unwrap();
            let fb = FrameworkBlowup::new(f, asg);
            assert_eq!(fb.structural_clique_number(), clique_number_bruteforce(&g, &mut Budget::default()).unwrap());
            assert!(validate_ell_holed(&g, 7, 14, &mut Budget::default()).unwrap().is_pass(), "seed {seed}");
        }
        assert_eq!(random_framework(9, 5, 2, 3, 7).unwrap(), random_framework(9, 5, 2, 3, 7).unwrap());
    }

    #[test]
    fn m0_generators() {
        let f = FrameworkSpec::m0_broom(9, 3, 5).unwrap();
        assert_eq!(f.a0_nodes().len(), 5);
        for seed in 0..20 {
            let (f, asg) = random_m0_blowup(7, 3, 12, seed).unwrap();
            assert!(validate_assignment(&f, &asg).is_pass());
            let fb = FrameworkBlowup::new(f.clone(), asg.clone());
            assert!(fb.structural_clique_number() <= 12);
            assert!((1..=3).all(|i| fb.size(Node::B(i)) >= 3));
            materialize_framework_blowup(&f, &asg).unwrap();
        }
        assert!(random_m0_blowup(7, 3, 5, 0).is_err());
    }
}
