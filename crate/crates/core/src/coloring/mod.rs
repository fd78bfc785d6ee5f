//! Explicit colorings of cycle blow-ups, clique chains, path blow-ups and
//! `m = 0` frameworks, each checked against ⌈ℓω/(ℓ−1)⌉.

mod balanced;
mod bound;
mod cycle;
mod cyclic;
mod framework;
mod path;

use std::fmt;

pub use balanced::{
    b_coloring, balanced_coloring, balanced_from_b, materialize_chains, prop_balanced_check, split_required, BColoringMode,
    BalancedColoring, ChainDescriptor,
};
pub use bound::{chi_bound, min_clique_threshold, BoundParams};
pub use cycle::{color_cycle_blowup, cycle_sequences, CycleColoring};
pub use cyclic::{cyclic_coloring, cyclic_coloring_unsorted, sort_for_cyclic};
pub use framework::{certified_fallback, color_framework, FrameworkColoring, Method};
pub use path::{color_path_blowup, EndConstraint, PathBlowup, PathColoring};

pub(crate) use bound::ceil_div;

/// Which set of the constructions a sequence belongs to. Indices are 1-based
/// as printed; `j` counts cliques from the `B` end of a chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Role {
    X1(usize),
    X2(usize),
    L1(usize, usize),
    L2(usize, usize),
    Lc(usize, usize),
    A0,
    B(usize),
    Z(usize),
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::X1(i) => write!(f, "X_{{{i},1}}"),
            Role::X2(i) => write!(f, "X_{{{i},2}}"),
            Role::L1(i, j) => write!(f, "L_{{{i},{j},1}}"),
            Role::L2(i, j) => write!(f, "L_{{{i},{j},2}}"),
            Role::Lc(i, j) => write!(f, "L^c_{{{i},{j}}}"),
            Role::A0 => write!(f, "A^c_0"),
            Role::B(i) => write!(f, "B^c_{i}"),
            Role::Z(i) => write!(f, "Z_{i}"),
        }
    }
}

/// An ordered list of distinct colors tagged with its role.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorSequence {
    pub role: Role,
    pub colors: Vec<u32>,
}

impl ColorSequence {
    pub fn new(role: Role, colors: Vec<u32>) -> Self {
        ColorSequence { role, colors }
    }
}

/// One line per sequence: `<role>: c1 c2 ...`.
pub fn dump_sequences(seqs: &[ColorSequence]) -> String {
    let mut out = String::new();
    for s in seqs {
        let body: Vec<String> = s.colors.iter().map(u32::to_string).collect();
        out.push_str(&format!("{}: {}\n", s.role, body.join(" ")));
    }
    out
}

/// The first `count` colors of `from..=to` (either direction) not in `skip`.
pub(crate) fn scan(from: u32, to: u32, skip: &[u32], count: usize) -> Vec<u32> {
    let run: Box<dyn Iterator<Item = u32>> = if from <= to { Box::new(from..=to) } else { Box::new((to..=from).rev()) };
    run.filter(|c| !skip.contains(c)).take(count).collect()
}
