use serde::Serialize;

use super::balanced::{balanced_coloring, split_required, BColoringMode, ChainDescriptor};
use super::bound::{chi_bound, BoundParams};
use super::{ceil_div, ColorSequence, Role};
use crate::error::{Budget, Error, Result};
use crate::graph_core::{verify_proper, Coloring, Graph};
use crate::oracle::{exact_chromatic, greedy_fallback, GreedyOrder};
use crate::structures::{materialize_framework_blowup, BlowupAssignment, FrameworkBlowup, FrameworkLayout, FrameworkSpec, Node, StaircaseLink};

/// Largest graph handed to the exact oracle by the fallback.
pub const EXACT_FALLBACK_MAX_N: usize = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ConstructiveM0,
    FallbackExact,
    FallbackGreedy,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::ConstructiveM0 => "constructive_m0",
            Method::FallbackExact => "fallback_exact",
            Method::FallbackGreedy => "fallback_greedy",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameworkColoring {
    pub coloring: Coloring,
    pub method: Method,
    pub omega: usize,
    pub bound: u32,
    /// Sequences of the construction; empty for the fallbacks.
    pub sequences: Vec<ColorSequence>,
    /// Why the construction was not used, if it was not.
    pub note: Option<String>,
}

impl FrameworkColoring {
    pub fn within_bound(&self) -> bool {
        self.coloring.num_colors() <= self.bound
    }
}

/// Colors a framework blow-up within ⌈ℓω/(ℓ−1)⌉ colors: by the explicit
/// construction when `m = 0` and its hypotheses hold, otherwise by the exact
/// oracle (small graphs) or a greedy pass, each certified against the bound.
pub fn color_framework(spec: &FrameworkSpec, asg: &BlowupAssignment, budget: &mut Budget) -> Result<FrameworkColoring> {
    let (g, _) = materialize_framework_blowup(spec, asg)?;
    let fb = FrameworkBlowup::new(spec.clone(), asg.clone());
    let omega = fb.structural_clique_number();
    let bound = chi_bound(spec.ell, omega)?;
    let note = if spec.m == 0 {
        match constructive_m0(&fb, &g, omega) {
            Ok((coloring, sequences)) if coloring.num_colors() <= bound => {
                return Ok(FrameworkColoring { coloring, method: Method::ConstructiveM0, omega, bound, sequences, note: None });
            }
            Ok((coloring, _)) => format!("construction used {} colors", coloring.num_colors()),
            Err(e) => e.to_string(),
        }
    } else {
        format!("m = {} has no explicit construction", spec.m)
    };
    let (coloring, method) = certified_fallback(&g, bound, budget)?;
    Ok(FrameworkColoring { coloring, method, omega, bound, sequences: Vec::new(), note: Some(note) })
}

/// Exact oracle when the graph is small enough and the search fits the
/// budget, otherwise the better of two greedy orders. Errors with
/// `Error::Budget` if nothing within `bound` colors was found.
pub fn certified_fallback(g: &Graph, bound: u32, budget: &mut Budget) -> Result<(Coloring, Method)> {
    if g.n() <= EXACT_FALLBACK_MAX_N {
        match exact_chromatic(g, Some(bound), budget) {
            Ok((_, coloring)) => return Ok((coloring, Method::FallbackExact)),
            Err(Error::Budget { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    let coloring = [GreedyOrder::Saturation, GreedyOrder::Degeneracy]
        .into_iter()
        .map(|o| greedy_fallback(g, o))
        .min_by_key(Coloring::num_colors)
        .unwrap();
    if coloring.num_colors() > bound {
        return Err(Error::Budget { what: "fallback could not certify the bound", limit: budget.limit() });
    }
    Ok((coloring, Method::FallbackGreedy))
}

fn chain_descriptor(fb: &FrameworkBlowup, i: usize) -> Result<ChainDescriptor> {
    let chain = fb.framework.chain(i);
    let mut links = Vec::new();
    for (j, e) in chain.windows(2).enumerate() {
        let l = fb.link(e[0], e[1]).ok_or_else(|| Error::Invalid(format!("missing link {}->{}", e[0], e[1])))?;
        links.push(StaircaseLink { from: j, to: j + 1, degrees: l.degrees.clone() });
    }
    Ok(ChainDescriptor { b_size: fb.size(chain[0]), sizes: chain[1..].iter().map(|&v| fb.size(v)).collect(), links })
}

/// `A^c_0` for the given chain colors.
fn a0_sequence(params: &BoundParams, b_sorted: &[usize], last_first: &[Vec<u32>]) -> Vec<u32> {
    let (omega, chi) = (params.omega, params.chi);
    if params.ell_is_1_mod_4() {
        return (1..omega as u32).collect();
    }
    let k = b_sorted.len();
    let threshold = ceil_div((params.s * k * params.q) as u64, (k - 1) as u64) as usize;
    let i_prime = b_sorted.iter().take_while(|&&m| m >= threshold).count();
    let top: Vec<u32> = (chi + 2 - omega as u32..=chi).rev().collect();
    if i_prime == 0 {
        return top;
    }
    let used: Vec<u32> = last_first.iter().flatten().copied().collect();
    let part1: Vec<u32> = super::scan(chi, 1, &used, omega - b_sorted[0]);
    let part2 = super::scan(chi, 1, &part1, omega - 1 - part1.len());
    [part1, part2].concat()
}

/// The `m = 0` construction: chains by the balanced coloring, `A_0` by the
/// residue-dependent sequence, remaining `T` vertices first-fit.
fn constructive_m0(fb: &FrameworkBlowup, g: &Graph, omega: usize) -> Result<(Coloring, Vec<ColorSequence>)> {
    let spec = &fb.framework;
    let params = BoundParams::new(spec.ell, omega)?;
    let k = spec.k;
    let mut chains = Vec::new();
    for i in 1..=k {
        chains.push(chain_descriptor(fb, i)?);
    }
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| chains[b].b_size.cmp(&chains[a].b_size));
    let sorted: Vec<ChainDescriptor> = order.iter().map(|&i| chains[i].clone()).collect();
    let b_sorted: Vec<usize> = sorted.iter().map(|c| c.b_size).collect();
    let mode = if split_required(&params, &b_sorted) { BColoringMode::Split } else { BColoringMode::Plain };
    let bc = balanced_coloring(&sorted, &params, mode)?;

    let layout: FrameworkLayout = fb.layout();
    let mut colors = vec![0u32; layout.n];
    let n = params.n();
    for (pos, &i) in order.iter().enumerate() {
        for (j, v) in spec.chain(i + 1).into_iter().enumerate() {
            let seq = bc.sequence(pos, j);
            let clique = &layout.cliques[&v];
            if clique.len() > seq.len() {
                return Err(Error::Construction(format!("{v} has {} vertices but {} colors", clique.len(), seq.len())));
            }
            for (&x, &c) in clique.iter().zip(&seq) {
                colors[x] = c;
            }
        }
    }
    let last_first: Vec<Vec<u32>> = (0..k).map(|pos| bc.first[pos][n].clone()).collect();
    let a0 = a0_sequence(&params, &b_sorted, &last_first);
    if layout.a0.len() > a0.len() {
        return Err(Error::Construction(format!("A_0 has {} vertices but {} colors", layout.a0.len(), a0.len())));
    }
    for (v, &c) in layout.a0.iter().zip(&a0) {
        colors[layout.cliques[v][0]] = c;
    }
    for v in spec.t_nodes().into_iter().filter(|v| matches!(v, Node::T(_)) && !layout.a0.contains(v)) {
        let x = layout.cliques[&v][0];
        let c = (1..=params.chi)
            .find(|c| g.neighbors(x).iter().all(|&y| colors[y] != *c))
            .ok_or_else(|| Error::Construction(format!("no color left for {v}")))?;
        colors[x] = c;
    }
    let coloring = Coloring::new(colors)?;
    let r = verify_proper(g, &coloring)?;
    if !r.is_pass() {
        return Err(Error::Construction(format!("m = 0 construction conflicts: {:?}", r.witness)));
    }
    let mut sequences = Vec::new();
    for (pos, &i) in order.iter().enumerate() {
        sequences.push(ColorSequence::new(Role::B(i + 1), bc.b_colors[pos].clone()));
        for j in 1..=n {
            sequences.push(ColorSequence::new(Role::Lc(i + 1, j), bc.sequence(pos, j)));
        }
    }
    sequences.push(ColorSequence::new(Role::A0, a0));
    Ok((coloring, sequences))
}
