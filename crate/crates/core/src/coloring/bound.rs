use crate::error::{invalid, Result};

pub(crate) fn ceil_div(a: u64, b: u64) -> u64 {
    a.div_ceil(b)
}

fn check_ell(ell: usize) -> Result<()> {
    if ell < 7 || ell % 2 == 0 {
        return invalid(format!("ell must be odd and at least 7, got {ell}"));
    }
    Ok(())
}

/// ⌈ℓω/(ℓ−1)⌉.
pub fn chi_bound(ell: usize, omega: usize) -> Result<u32> {
    check_ell(ell)?;
    Ok(ceil_div((ell * omega) as u64, (ell - 1) as u64) as u32)
}

/// Derived constants for one `(ℓ, ω)` pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundParams {
    pub ell: usize,
    pub omega: usize,
    /// `ℓ = 4s+3` or `ℓ = 4s+1`.
    pub s: usize,
    /// ⌈ω/(ℓ−1)⌉.
    pub q: usize,
    /// ⌈3(s−1)q/2⌉.
    pub alpha: usize,
    /// ⌈3sq/2⌉.
    pub beta: usize,
    pub chi: u32,
}

impl BoundParams {
    pub fn new(ell: usize, omega: usize) -> Result<BoundParams> {
        check_ell(ell)?;
        if omega == 0 {
            return invalid("omega must be positive");
        }
        let s = (ell - 1) / 4;
        let q = omega.div_ceil(ell - 1);
        Ok(BoundParams {
            ell,
            omega,
            s,
            q,
            alpha: (3 * (s - 1) * q).div_ceil(2),
            beta: (3 * s * q).div_ceil(2),
            chi: chi_bound(ell, omega)?,
        })
    }

    /// Path length `n = (ℓ−3)/2` of every clique chain.
    pub fn n(&self) -> usize {
        (self.ell - 3) / 2
    }

    pub fn ell_is_1_mod_4(&self) -> bool {
        self.ell % 4 == 1
    }
}

/// Smallest integer size `t` with `t ≥ min{qs, ω/2} + 1`.
pub fn min_clique_threshold(ell: usize, omega: usize) -> Result<usize> {
    let p = BoundParams::new(ell, omega)?;
    let qs = p.q * p.s;
    // compare qs with ω/2 as 2qs vs ω
    Ok(if 2 * qs <= omega { qs + 1 } else { omega.div_ceil(2) + 1 })
}
