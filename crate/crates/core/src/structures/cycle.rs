use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{OrderedClique, StaircaseLink};
use crate::error::{invalid, Error, Result};
use crate::graph_core::{build_graph, Graph, Report};

/// Blow-up of an ℓ-cycle: cliques `W_1..W_ℓ` (stored 0-based) and the links
/// `W_i -> W_{i+1}`, indices mod ℓ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleBlowupSpec {
    pub ell: usize,
    pub sizes: Vec<usize>,
    pub links: Vec<StaircaseLink>,
}

impl CycleBlowupSpec {
    /// Every clique of size `t`, every consecutive pair complete.
    pub fn clique_blowup(ell: usize, t: usize) -> Self {
        let links = (0..ell).map(|i| StaircaseLink::complete(i, (i + 1) % ell, t, t)).collect();
        CycleBlowupSpec { ell, sizes: vec![t; ell], links }
    }

    pub fn n(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn structural_clique_number(&self) -> usize {
        let links = self.links.iter().map(|l| l.clique_number(self.sizes[l.to]));
        links.chain(self.sizes.iter().copied()).max().unwrap_or(0)
    }
}

pub fn validate_cycle_spec(spec: &CycleBlowupSpec) -> Report {
    let ell = spec.ell;
    if ell < 7 || ell % 2 == 0 {
        return Report::rule("ell", format!("ell must be odd and at least 7, got {ell}"));
    }
    if spec.sizes.len() != ell {
        return Report::rule("cliques", format!("expected {ell} cliques, got {}", spec.sizes.len()));
    }
    if let Some(i) = spec.sizes.iter().position(|&s| s == 0) {
        return Report::rule("cliques", format!("W_{} is empty", i + 1));
    }
    if spec.links.len() != ell {
        return Report::rule("links", format!("expected {ell} links, got {}", spec.links.len()));
    }
    for (i, l) in spec.links.iter().enumerate() {
        if l.from != i || l.to != (i + 1) % ell {
            return Report::rule("links", format!("link {i} must join W_{} to W_{}", i + 1, (i + 1) % ell + 1));
        }
        if let Some(e) = l.shape_error(spec.sizes[i], spec.sizes[l.to], false) {
            return Report::rule("ordering", format!("link W_{} -> W_{}: {e}", i + 1, l.to + 1));
        }
    }
    Report::pass(crate::graph_core::CheckKind::Structure)
}

/// Vertex ids: the first vertex of every clique (`0..ℓ`), then the remaining
/// vertices clique by clique. Labels read `W_i[p]` with 1-based `i` and `p`.
pub fn materialize_cycle_blowup(spec: &CycleBlowupSpec) -> Result<(Graph, Vec<OrderedClique>)> {
    let report = validate_cycle_spec(spec);
    if !report.is_pass() {
        return Err(Error::Invalid(format!("invalid cycle spec: {:?}", report.witness)));
    }
    let ell = spec.ell;
    let mut cliques: Vec<OrderedClique> =
        (0..ell).map(|i| OrderedClique { id: format!("W_{}", i + 1), vertices: vec![i] }).collect();
    let mut next = ell;
    for (i, &s) in spec.sizes.iter().enumerate() {
        for _ in 1..s {
            cliques[i].vertices.push(next);
            next += 1;
        }
    }
    let mut edges = Vec::new();
    let mut labels = BTreeMap::new();
    for (i, c) in cliques.iter().enumerate() {
        for (p, &v) in c.vertices.iter().enumerate() {
            labels.insert(v, format!("W_{}[{}]", i + 1, p + 1));
            edges.extend(c.vertices[p + 1..].iter().map(|&w| (v, w)));
        }
    }
    for l in &spec.links {
        let (a, b) = (&cliques[l.from].vertices, &cliques[l.to].vertices);
        for (p, &d) in l.degrees.iter().enumerate() {
            edges.extend(b[..d].iter().map(|&w| (a[p], w)));
        }
    }
    let g = build_graph(next, &edges)?.with_labels(labels)?;
    Ok((g, cliques))
}

/// Random nonincreasing degree vector; `positive` forces every vertex on both
/// sides to have a neighbor.
pub(crate) fn random_staircase(rng: &mut impl Rng, from_size: usize, to_size: usize, positive: bool) -> Vec<usize> {
    let lo = usize::from(positive);
    let mut d: Vec<usize> = (0..from_size).map(|_| rng.gen_range(lo..=to_size)).collect();
    d.sort_unstable_by(|a, b| b.cmp(a));
    if positive {
        d[0] = to_size;
    } else if d[0] == 0 {
        d[0] = 1;
    }
    d
}

/// Seeded random cycle blow-up; sizes in `1..=max_size`, each link with at
/// least one edge.
pub fn random_cycle_spec(ell: usize, max_size: usize, seed: u64) -> Result<CycleBlowupSpec> {
    if ell < 7 || ell % 2 == 0 {
        return invalid(format!("ell must be odd and at least 7, got {ell}"));
    }
    if max_size == 0 {
        return invalid("max_size must be positive");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sizes: Vec<usize> = (0..ell).map(|_| rng.gen_range(1..=max_size)).collect();
    let links = (0..ell)
        .map(|i| {
            let j = (i + 1) % ell;
            StaircaseLink { from: i, to: j, degrees: random_staircase(&mut rng, sizes[i], sizes[j], false) }
        })
        .collect();
    Ok(CycleBlowupSpec { ell, sizes, links })
}
