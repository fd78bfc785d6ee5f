use super::bound::chi_bound;
use super::{ColorSequence, Role};
use crate::error::{Error, Result};
use crate::graph_core::{verify_proper, Coloring};
use crate::structures::{materialize_cycle_blowup, CycleBlowupSpec};

/// Color sequence of every clique `W_1..W_ℓ` (0-based), each of length `ω`.
/// The clique `W_i` takes the first `|W_i|` entries.
pub fn cycle_sequences(ell: usize, omega: usize) -> Result<Vec<Vec<u32>>> {
    chi_bound(ell, omega)?;
    if omega == 0 {
        return Ok(vec![Vec::new(); ell]);
    }
    if omega % 2 == 1 {
        // drop positions ≥ (ω+1)/2, recurse on ω−1, then add one shared
        // fresh color and the reversed head of the next clique
        let h = (omega - 1) / 2;
        let sub = cycle_sequences(ell, omega - 1)?;
        let fresh = chi_bound(ell, omega - 1)? + 1;
        return Ok((0..ell)
            .map(|i| {
                let mut s = sub[i][..h].to_vec();
                s.push(fresh);
                s.extend(sub[(i + 1) % ell][..h].iter().rev());
                s
            })
            .collect());
    }
    let first = even_first_halves(ell, omega);
    Ok((0..ell)
        .map(|i| {
            let mut s = first[i].clone();
            s.extend(first[(i + 1) % ell].iter().rev());
            s
        })
        .collect())
}

/// `X_{i,1}` for even ω, 0-based `i`.
fn even_first_halves(ell: usize, omega: usize) -> Vec<Vec<u32>> {
    let w = omega as u32;
    let q = omega.div_ceil(ell - 1) as u32;
    let h2 = w / 2;
    // ω/2 = s'q + j with 1 ≤ j ≤ q
    let sp = (h2 - 1) / q;
    let j = h2 - sp * q;
    let r = |a: u32, b: u32| (a..=b).collect::<Vec<u32>>();
    let cat = |parts: &[Vec<u32>]| parts.concat();
    let mut x = vec![Vec::new(); ell + 1];
    x[1] = r(1, h2);
    x[2] = r(h2 + 1, w);
    x[3] = cat(&[r(q + 1, h2), r(w + 1, w + q)]);
    for h in 2..=sp {
        x[2 * h as usize] = cat(&[r(h2 + 1 + (h - 1) * q, w), r(1, (h - 1) * q)]);
        x[2 * h as usize + 1] = cat(&[r(h * q + 1, h2), r(w + 1, w + q), r(h2 + 1, h2 + (h - 1) * q)]);
    }
    let even_tail = cat(&[r(w + 1 - j, w), r(1, h2 - j)]);
    let odd_tail = cat(&[r(w + q - j + 1, w + q), r(h2 + 1, w - j)]);
    for m in (2 * sp as usize + 2)..=ell {
        x[m] = if m % 2 == 0 { even_tail.clone() } else { odd_tail.clone() };
    }
    x.remove(0);
    x
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleColoring {
    pub coloring: Coloring,
    pub omega: usize,
    pub bound: u32,
    pub sequences: Vec<Vec<u32>>,
}

impl CycleColoring {
    /// `X_{i,1}` and `X_{i,2}` (the two halves) of every clique.
    pub fn tagged(&self) -> Vec<ColorSequence> {
        let mut out = Vec::new();
        for (i, s) in self.sequences.iter().enumerate() {
            let h = s.len().div_ceil(2);
            out.push(ColorSequence::new(Role::X1(i + 1), s[..h].to_vec()));
            out.push(ColorSequence::new(Role::X2(i + 1), s[h..].to_vec()));
        }
        out
    }
}

/// Colors a cycle blow-up with at most ⌈ℓω/(ℓ−1)⌉ colors.
pub fn color_cycle_blowup(spec: &CycleBlowupSpec) -> Result<CycleColoring> {
    let (g, cliques) = materialize_cycle_blowup(spec)?;
    let omega = spec.structural_clique_number();
    let sequences = cycle_sequences(spec.ell, omega)?;
    let mut colors = vec![0u32; g.n()];
    for (c, seq) in cliques.iter().zip(&sequences) {
        for (&v, &col) in c.vertices.iter().zip(seq) {
            colors[v] = col;
        }
    }
    let coloring = Coloring::new(colors)?;
    let report = verify_proper(&g, &coloring)?;
    if !report.is_pass() {
        return Err(Error::Construction(format!("cycle coloring is not proper: {:?}", report.witness)));
    }
    Ok(CycleColoring { coloring, omega, bound: chi_bound(spec.ell, omega)?, sequences })
}
