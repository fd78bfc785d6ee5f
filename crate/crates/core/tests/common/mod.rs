//! Independent oracles and generators shared by the integration targets.
#![allow(dead_code)]

use std::collections::BTreeMap;

use holed_color::coloring::{BoundParams, ChainDescriptor, EndConstraint, PathBlowup};
use holed_color::graph_core::{Coloring, Graph};
use holed_color::structures::StaircaseLink;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Monochromatic edges, found by scanning every pair.
pub fn conflicts(g: &Graph, c: &Coloring) -> usize {
    let mut bad = 0;
    for u in 0..g.n() {
        for v in u + 1..g.n() {
            if g.has_edge(u, v) && c.color(u) == c.color(v) {
                bad += 1;
            }
        }
    }
    bad
}

/// Clique number by plain recursion over candidate sets.
pub fn clique_number_naive(g: &Graph) -> usize {
    fn grow(g: &Graph, size: usize, cand: &[usize], best: &mut usize) {
        *best = (*best).max(size);
        for (i, &v) in cand.iter().enumerate() {
            if size + cand.len() - i <= *best {
                return;
            }
            let next: Vec<usize> = cand[i + 1..].iter().copied().filter(|&u| g.has_edge(u, v)).collect();
            grow(g, size + 1, &next, best);
        }
    }
    let mut best = 0;
    grow(g, 0, &(0..g.n()).collect::<Vec<_>>(), &mut best);
    best
}

/// Holes counted by length: every vertex subset of size `4..=max_len`
/// inducing a connected 2-regular graph. Needs `n ≤ 32`.
pub fn holes_by_subsets(g: &Graph, max_len: usize) -> BTreeMap<usize, usize> {
    let n = g.n();
    assert!(n <= 32);
    let adj: Vec<u32> = (0..n).map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | 1 << u)).collect();
    let mut out = BTreeMap::new();
    for size in 4..=max_len.min(n) {
        // Gosper's hack over all `size`-subsets
        let mut s: u64 = (1u64 << size) - 1;
        while s < 1u64 << n {
            let set = s as u32;
            let regular = (0..n).filter(|&v| set >> v & 1 == 1).all(|v| (adj[v] & set).count_ones() == 2);
            if regular {
                // connected: flood from the lowest vertex
                let start = set.trailing_zeros() as usize;
                let mut seen = 1u32 << start;
                let mut frontier = seen;
                while frontier != 0 {
                    let v = frontier.trailing_zeros() as usize;
                    frontier &= frontier - 1;
                    let fresh = adj[v] & set & !seen;
                    seen |= fresh;
                    frontier |= fresh;
                }
                if seen == set {
                    *out.entry(size).or_insert(0) += 1;
                }
            }
            let c = s & s.wrapping_neg();
            let r = s + c;
            s = (((r ^ s) >> 2) / c) | r;
        }
    }
    out
}

fn staircase(rng: &mut ChaCha8Rng, from: usize, to: usize, omega: usize) -> Vec<usize> {
    let mut d: Vec<usize> = (0..from).map(|_| rng.gen_range(1..=to)).collect();
    d.sort_unstable_by(|a, b| b.cmp(a));
    d[0] = to;
    for (p, x) in d.iter_mut().enumerate() {
        *x = (*x).min(omega - 1 - p).max(1);
    }
    d
}

pub struct PathCase {
    pub path: PathBlowup,
    pub start: EndConstraint,
    pub end: EndConstraint,
    pub chi: u32,
}

/// A random path blow-up with end constraints meeting hypothesis (1) or (2),
/// or `None` when the draw cannot be completed.
pub fn random_path_case(seed: u64) -> Option<PathCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = rng.gen_range(1..=8usize);
    let w = rng.gen_range(2..=20usize);
    let mut sizes = vec![rng.gen_range(1..=(w / 2).max(1))];
    for _ in 0..m {
        sizes.push(rng.gen_range(1..w));
    }
    let links = (0..m).map(|i| StaircaseLink { from: i, to: i + 1, degrees: staircase(&mut rng, sizes[i], sizes[i + 1], w) }).collect();
    let path = PathBlowup { sizes: sizes.clone(), links };
    let omega = path.omega();
    if 2 * sizes[0] > omega {
        return None;
    }
    let chi = (omega + rng.gen_range(1..=(omega / 3).max(1))) as u32;
    let slack = chi as usize - omega;
    let (z0, zm) = (sizes[0], sizes[m]);
    let mut palette: Vec<u32> = (1..=chi).collect();
    palette.shuffle(&mut rng);
    // shared colors between the ends
    let shared = if m % 2 == 1 {
        rng.gen_range(0..=((m - 1) * slack / 2).min(z0).min(zm))
    } else {
        let room = m * slack / 2;
        let lo = z0.saturating_sub(room).min(zm.saturating_sub(room));
        let hi = z0.min(zm);
        if lo > hi {
            return None;
        }
        rng.gen_range(lo..=hi)
    };
    if z0 + zm - shared > chi as usize {
        return None;
    }
    let c0 = palette[..z0].to_vec();
    let mut cm: Vec<u32> = c0[..shared].to_vec();
    cm.extend(&palette[z0..z0 + zm - shared]);
    cm.shuffle(&mut rng);
    let (start, end) = match rng.gen_range(0..3) {
        0 => (EndConstraint::Set(c0), EndConstraint::Set(cm)),
        1 => (EndConstraint::Fixed(c0), EndConstraint::Set(cm)),
        _ => (EndConstraint::Set(c0), EndConstraint::Fixed(cm)),
    };
    Some(PathCase { path, start, end, chi })
}

/// Hypothesis (1)/(2) recomputed from scratch.
pub fn path_hypothesis_holds(case: &PathCase) -> bool {
    let m = case.path.sizes.len() - 1;
    let omega = case.path.omega();
    let slack = case.chi as usize - omega;
    let c0 = case.start.colors();
    let cm = case.end.colors();
    let both = c0.iter().filter(|c| cm.contains(c)).count();
    if 2 * case.path.sizes[0] > omega {
        return false;
    }
    if m % 2 == 1 {
        2 * both <= (m - 1) * slack
    } else {
        2 * (c0.len() - both).min(cm.len() - both) <= m * slack
    }
}

/// Random chains for the balanced coloring: `k` chains, `B` sizes at least
/// `sq+1`, sorted, summing to at most ω, staircases capped so ω stays put.
pub fn random_chains(seed: u64) -> (BoundParams, Vec<ChainDescriptor>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let ell = *[7usize, 9, 11, 13].choose(&mut rng).unwrap();
        let omega = rng.gen_range(6..=60usize);
        let params = BoundParams::new(ell, omega).unwrap();
        let min_b = params.s * params.q + 1;
        let max_k = if ell % 4 == 1 { 3 } else { 4 };
        let k = rng.gen_range(3..=max_k);
        if k * min_b > omega {
            continue;
        }
        let total = rng.gen_range(k * min_b..=omega);
        let mut b = vec![min_b; k];
        for _ in 0..total - k * min_b {
            b[rng.gen_range(0..k)] += 1;
        }
        b.sort_unstable_by(|x, y| y.cmp(x));
        let n = params.n();
        let chains = b
            .iter()
            .map(|&bs| {
                let sizes: Vec<usize> = (0..n).map(|_| rng.gen_range(1..omega)).collect();
                let links = (0..n)
                    .map(|j| {
                        let from = if j == 0 { bs } else { sizes[j - 1] };
                        StaircaseLink { from: j, to: j + 1, degrees: staircase(&mut rng, from, sizes[j], omega) }
                    })
                    .collect();
                ChainDescriptor { b_size: bs, sizes, links }
            })
            .collect();
        return (params, chains);
    }
}
