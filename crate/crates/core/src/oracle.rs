//! Exact chromatic number by DSATUR branch and bound, greedy colorers, and a
//! list-coloring extension search used when a construction has no closed form.

use crate::error::{Budget, Result};
use crate::graph_core::{clique_number_bruteforce, Coloring, Graph};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GreedyOrder {
    /// Smallest-last (degeneracy) order.
    Degeneracy,
    /// DSATUR: most distinct neighbor colors first.
    Saturation,
}

/// Proper coloring by a greedy pass in the requested order.
pub fn greedy_fallback(g: &Graph, order: GreedyOrder) -> Coloring {
    let n = g.n();
    let mut color = vec![0u32; n];
    match order {
        GreedyOrder::Degeneracy => {
            let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
            let mut removed = vec![false; n];
            let mut seq = Vec::with_capacity(n);
            for _ in 0..n {
                let v = (0..n).filter(|&v| !removed[v]).min_by_key(|&v| (deg[v], v)).unwrap();
                removed[v] = true;
                seq.push(v);
                for &w in g.neighbors(v) {
                    if !removed[w] {
                        deg[w] -= 1;
                    }
                }
            }
            for &v in seq.iter().rev() {
                color[v] = smallest_free(g, &color, v);
            }
        }
        GreedyOrder::Saturation => {
            for _ in 0..n {
                let v = (0..n)
                    .filter(|&v| color[v] == 0)
                    .max_by_key(|&v| (saturation(g, &color, v), g.degree(v), std::cmp::Reverse(v)))
                    .unwrap();
                color[v] = smallest_free(g, &color, v);
            }
        }
    }
    Coloring::new(color).expect("greedy colors are positive")
}

fn smallest_free(g: &Graph, color: &[u32], v: usize) -> u32 {
    let mut used: Vec<u32> = g.neighbors(v).iter().map(|&w| color[w]).filter(|&c| c > 0).collect();
    used.sort_unstable();
    used.dedup();
    let mut c = 1;
    for u in used {
        if u == c {
            c += 1;
        } else if u > c {
            break;
        }
    }
    c
}

fn saturation(g: &Graph, color: &[u32], v: usize) -> usize {
    let mut used: Vec<u32> = g.neighbors(v).iter().map(|&w| color[w]).filter(|&c| c > 0).collect();
    used.sort_unstable();
    used.dedup();
    used.len()
}

/// Exact chromatic number with an optimal witness coloring.
///
/// `upper_hint` only steers the search; the answer does not depend on it.
pub fn exact_chromatic(g: &Graph, upper_hint: Option<u32>, budget: &mut Budget) -> Result<(u32, Coloring)> {
    if g.n() == 0 {
        return Ok((0, Coloring::new(Vec::new())?));
    }
    let mut best = greedy_fallback(g, GreedyOrder::Saturation);
    let lower = clique_number_bruteforce(g, budget)? as u32;
    if let Some(h) = upper_hint {
        if h >= lower && h < best.num_colors() {
            if let Some(c) = k_colorable(g, h, budget)? {
                best = c;
            }
        }
    }
    while best.num_colors() > lower {
        match k_colorable(g, best.num_colors() - 1, budget)? {
            Some(c) => best = c,
            None => break,
        }
    }
    Ok((best.num_colors(), best))
}

/// A proper coloring with colors in `1..=k`, or `None` if there is none.
pub fn k_colorable(g: &Graph, k: u32, budget: &mut Budget) -> Result<Option<Coloring>> {
    let mut s = Search::new(g, k, vec![None; g.n()], true);
    if s.run(budget)? {
        Ok(Some(Coloring::new(s.color)?))
    } else {
        Ok(None)
    }
}

/// List coloring: vertex `v` may only use colors in `lists[v]` (any of
/// `1..=k` when `None`). Singleton lists act as precolored vertices.
pub fn extend_coloring(g: &Graph, k: u32, lists: &[Option<Vec<u32>>], budget: &mut Budget) -> Result<Option<Coloring>> {
    assert_eq!(lists.len(), g.n());
    let mut s = Search::new(g, k, lists.to_vec(), false);
    if s.run(budget)? {
        Ok(Some(Coloring::new(s.color)?))
    } else {
        Ok(None)
    }
}

struct Search<'a> {
    g: &'a Graph,
    k: usize,
    color: Vec<u32>,
    /// `blocked[v][c]`: neighbors of `v` currently holding color `c`.
    blocked: Vec<Vec<u16>>,
    allowed: Vec<Vec<bool>>,
    symmetric: bool,
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph, k: u32, lists: Vec<Option<Vec<u32>>>, symmetric: bool) -> Self {
        let k = k as usize;
        let allowed = lists
            .into_iter()
            .map(|l| match l {
                None => vec![true; k + 1],
                Some(cs) => {
                    let mut a = vec![false; k + 1];
                    for c in cs {
                        if (1..=k).contains(&(c as usize)) {
                            a[c as usize] = true;
                        }
                    }
                    a
                }
            })
            .collect();
        Search { g, k, color: vec![0; g.n()], blocked: vec![vec![0; k + 1]; g.n()], allowed, symmetric }
    }

    fn options(&self, v: usize, limit: usize) -> impl Iterator<Item = usize> + '_ {
        (1..=limit).filter(move |&c| self.allowed[v][c] && self.blocked[v][c] == 0)
    }

    fn set(&mut self, v: usize, c: usize) {
        self.color[v] = c as u32;
        for &w in self.g.neighbors(v) {
            self.blocked[w][c] += 1;
        }
    }

    fn unset(&mut self, v: usize, c: usize) {
        self.color[v] = 0;
        for &w in self.g.neighbors(v) {
            self.blocked[w][c] -= 1;
        }
    }

    fn run(&mut self, budget: &mut Budget) -> Result<bool> {
        self.step(self.g.n(), 0, budget)
    }

    fn step(&mut self, remaining: usize, max_used: usize, budget: &mut Budget) -> Result<bool> {
        if remaining == 0 {
            return Ok(true);
        }
        budget.tick("exact coloring search")?;
        let limit = if self.symmetric { (max_used + 1).min(self.k) } else { self.k };
        // fewest options first, then most uncolored neighbors
        let mut pick = None;
        let mut key = (usize::MAX, 0usize);
        for v in (0..self.g.n()).filter(|&v| self.color[v] == 0) {
            let opts = self.options(v, self.k).count();
            let free_deg = self.g.neighbors(v).iter().filter(|&&w| self.color[w] == 0).count();
            if opts < key.0 || (opts == key.0 && free_deg > key.1) {
                key = (opts, free_deg);
                pick = Some(v);
            }
            if opts == 0 {
                return Ok(false);
            }
        }
        let v = pick.expect("an uncolored vertex remains");
        let choices: Vec<usize> = self.options(v, limit).collect();
        for c in choices {
            self.set(v, c);
            if self.step(remaining - 1, max_used.max(c), budget)? {
                return Ok(true);
            }
            self.unset(v, c);
        }
        Ok(false)
    }
}
