//! Blow-ups of odd cycles and of frameworks: specs, validators, materializers,
//! structural clique numbers and seeded generators.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::graph_core::{Graph, FORMAT_VERSION};

mod cycle;
mod framework;

pub use cycle::{materialize_cycle_blowup, random_cycle_spec, validate_cycle_spec, CycleBlowupSpec};
pub use framework::{
    materialize_framework_blowup, random_framework, random_m0_blowup, validate_assignment, validate_framework, BlowupAssignment,
    FrameworkBlowup, FrameworkLayout, FrameworkSpec, Node, Tent, TentShape,
};

/// A clique of the materialized graph with its vertex order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderedClique {
    pub id: String,
    pub vertices: Vec<usize>,
}

impl OrderedClique {
    pub fn size(&self) -> usize {
        self.vertices.len()
    }
}

/// One-sided encoding of a bipartite graph that obeys both orderings:
/// vertex `p` of `from` is adjacent to the first `degrees[p]` vertices of `to`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StaircaseLink<Id = usize> {
    pub from: Id,
    pub to: Id,
    pub degrees: Vec<usize>,
}

impl<Id> StaircaseLink<Id> {
    pub fn complete(from: Id, to: Id, from_size: usize, to_size: usize) -> Self {
        StaircaseLink { from, to, degrees: vec![to_size; from_size] }
    }

    /// Degree vector seen from the `to` side.
    pub fn reverse_degrees(&self, to_size: usize) -> Vec<usize> {
        (0..to_size).map(|q| self.degrees.iter().filter(|&&d| d > q).count()).collect()
    }

    /// Largest clique inside `from ∪ to`.
    pub fn clique_number(&self, to_size: usize) -> usize {
        let cross = self.degrees.iter().enumerate().filter(|(_, &d)| d > 0).map(|(p, &d)| p + 1 + d).max().unwrap_or(0);
        cross.max(self.degrees.len()).max(to_size)
    }

    /// Shape problems, if any, for cliques of the given sizes.
    pub(crate) fn shape_error(&self, from_size: usize, to_size: usize, positive: bool) -> Option<String> {
        if self.degrees.len() != from_size {
            return Some(format!("degree vector has length {}, clique has {} vertices", self.degrees.len(), from_size));
        }
        if self.degrees.windows(2).any(|w| w[0] < w[1]) {
            return Some(format!("degree vector {:?} is not nonincreasing", self.degrees));
        }
        if let Some(&d) = self.degrees.iter().find(|&&d| d > to_size) {
            return Some(format!("degree {d} exceeds target size {to_size}"));
        }
        if positive && (self.degrees.iter().any(|&d| d == 0) || self.degrees.first() != Some(&to_size)) {
            return Some(format!("degree vector {:?} leaves a vertex with no neighbor across the link", self.degrees));
        }
        None
    }
}

/// Either family of spec, as stored on disk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Spec {
    Cycle(CycleBlowupSpec),
    Framework(FrameworkBlowup),
}

#[derive(Serialize, Deserialize)]
struct SpecFile {
    version: u32,
    #[serde(flatten)]
    spec: Spec,
}

impl Spec {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&SpecFile { version: FORMAT_VERSION, spec: self.clone() }).expect("spec serializes")
    }

    pub fn from_json(text: &str) -> Result<Spec> {
        let v: serde_json::Value = serde_json::from_str(text)?;
        match v.get("version").and_then(|x| x.as_u64()) {
            Some(1) => {}
            Some(other) => return invalid(format!("unsupported spec format version {other}")),
            None => return invalid("spec file has no version field"),
        }
        let file: SpecFile = serde_json::from_value(v)?;
        Ok(file.spec)
    }

    pub fn ell(&self) -> usize {
        match self {
            Spec::Cycle(c) => c.ell,
            Spec::Framework(f) => f.framework.ell,
        }
    }

    pub fn materialize(&self) -> Result<(Graph, Vec<OrderedClique>)> {
        match self {
            Spec::Cycle(c) => materialize_cycle_blowup(c),
            Spec::Framework(f) => materialize_framework_blowup(&f.framework, &f.assignment),
        }
    }

    pub fn structural_clique_number(&self) -> usize {
        match self {
            Spec::Cycle(c) => c.structural_clique_number(),
            Spec::Framework(f) => f.structural_clique_number(),
        }
    }
}

/// DOT output with one cluster per ordered clique.
pub fn to_dot_clustered(g: &Graph, cliques: &[OrderedClique]) -> String {
    use std::fmt::Write as _;
    let mut out = String::from("graph G {\n");
    for (i, c) in cliques.iter().enumerate() {
        writeln!(out, "  subgraph cluster_{i} {{\n    label=\"{}\";", c.id).unwrap();
        for &v in &c.vertices {
            let label = g.label(v).unwrap_or("");
            writeln!(out, "    {v} [label=\"{label}\"];").unwrap();
        }
        out.push_str("  }\n");
    }
    for (u, v) in g.edges() {
        writeln!(out, "  {u} -- {v};").unwrap();
    }
    out.push_str("}\n");
    out
}
