//! Exhaustive check of the m = 0 counting inequality
//!
//! `Σ_{j≤i′}(m_j − ⌈skq/(k−1)⌉) + k⌈sq/(k−1)⌉ + ω − m_1 ≤ ⌈ℓω/(ℓ−1)⌉`
//!
//! with `q = ⌈ω/(ℓ−1)⌉`, `s = ⌊(ℓ−1)/4⌋`, over all admissible clique sizes.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::coloring::{ceil_div, chi_bound};
use crate::error::{invalid, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IneqInstance {
    pub ell: usize,
    pub omega: usize,
    /// `m_1 ≥ … ≥ m_k`.
    pub m: Vec<usize>,
}

impl IneqInstance {
    pub fn k(&self) -> usize {
        self.m.len()
    }

    pub fn s(&self) -> usize {
        (self.ell - 1) / 4
    }

    pub fn q(&self) -> usize {
        self.omega.div_ceil(self.ell - 1)
    }

    /// `⌈skq/(k−1)⌉`.
    pub fn threshold(&self) -> usize {
        let k = self.k();
        ceil_div((self.s() * k * self.q()) as u64, (k - 1) as u64) as usize
    }

    /// Largest `i` with `m_i` at the threshold, 0 if none.
    pub fn i_prime(&self) -> usize {
        let t = self.threshold();
        self.m.iter().take_while(|&&x| x >= t).count()
    }

    pub fn check(&self) -> Result<()> {
        if self.ell < 7 || self.ell % 2 == 0 {
            return invalid(format!("ℓ must be odd and at least 7, got {}", self.ell));
        }
        let k = self.k();
        let max_k = if self.ell == 7 { 5 } else { 4 };
        if !(3..=max_k).contains(&k) {
            return invalid(format!("k = {k} outside 3..={max_k} for ℓ = {}", self.ell));
        }
        if self.m.windows(2).any(|w| w[0] < w[1]) {
            return invalid("clique sizes must be nonincreasing");
        }
        let floor = self.s() * self.q() + 1;
        if self.m[k - 1] < floor {
            return invalid(format!("m_k = {} below sq+1 = {floor}", self.m[k - 1]));
        }
        let total: usize = self.m.iter().sum();
        if total > self.omega {
            return invalid(format!("Σ m_i = {total} exceeds ω = {}", self.omega));
        }
        Ok(())
    }
}

/// Left side minus right side; nonpositive means the inequality holds.
pub fn ineq_3_1_margin(inst: &IneqInstance) -> Result<i64> {
    inst.check()?;
    let k = inst.k();
    let t = inst.threshold() as i64;
    let ip = inst.i_prime();
    let head: i64 = inst.m[..ip].iter().map(|&x| x as i64 - t).sum();
    let per = ceil_div((inst.s() * inst.q()) as u64, (k - 1) as u64) as i64;
    let chi = chi_bound(inst.ell, inst.omega)? as i64;
    Ok(head + k as i64 * per + inst.omega as i64 - inst.m[0] as i64 - chi)
}

/// Calls `f` on every nonincreasing `m` of length `k` with entries at least
/// `lo` and sum at most `omega`.
pub fn for_each_admissible(k: usize, lo: usize, omega: usize, mut f: impl FnMut(&[usize])) {
    fn rec(m: &mut Vec<usize>, k: usize, lo: usize, cap: usize, left: usize, f: &mut dyn FnMut(&[usize])) {
        if m.len() == k {
            f(m);
            return;
        }
        let rest = k - m.len() - 1;
        // the remaining entries need at least `lo` each
        let Some(room) = left.checked_sub(rest * lo) else { return };
        for x in lo..=cap.min(room) {
            m.push(x);
            rec(m, k, lo, x, left - x, f);
            m.pop();
        }
    }
    rec(&mut Vec::with_capacity(k), k, lo, omega, omega, &mut f);
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub ell: usize,
    pub k: usize,
    pub i_prime: usize,
    pub count: u64,
    pub max_margin: i64,
    /// An instance attaining `max_margin`.
    pub argmax: IneqInstance,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub omega_max: usize,
    pub rows: Vec<SweepRow>,
    /// Instances with `i′ ≥ 1` and positive margin, at most one per row.
    pub violations: Vec<(IneqInstance, i64)>,
}

impl SweepReport {
    /// The inequality is only needed when `i′ ≥ 1`; `i′ = 0` rows are informational.
    pub fn is_pass(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.rows.iter().map(|r| r.count).sum()
    }

    pub fn row(&self, ell: usize, k: usize, i_prime: usize) -> Option<&SweepRow> {
        self.rows.iter().find(|r| (r.ell, r.k, r.i_prime) == (ell, k, i_prime))
    }

    pub fn table(&self) -> String {
        let mut out = String::from("ell  k  i'      count  max_margin  argmax\n");
        for r in &self.rows {
            let tag = if r.i_prime == 0 { "  (not gated)" } else { "" };
            out.push_str(&format!(
                "{:>3} {:>2} {:>3} {:>10} {:>11}  ω={} m={:?}{tag}\n",
                r.ell, r.k, r.i_prime, r.count, r.max_margin, r.argmax.omega, r.argmax.m
            ));
        }
        out.push_str(&format!("total {} instances, {}\n", self.total(), if self.is_pass() { "pass" } else { "FAIL" }));
        out
    }
}

/// Enumerates every admissible instance for `ℓ ∈ ells`, `ω ≤ omega_max`.
/// Work is split by `(ℓ, k, ω)` and merged in that order.
pub fn sweep_ineq_3_1(ells: &[usize], omega_max: usize) -> Result<SweepReport> {
    let mut jobs = Vec::new();
    for &ell in ells {
        if ell < 7 || ell % 2 == 0 {
            return invalid(format!("ℓ must be odd and at least 7, got {ell}"));
        }
        let max_k = if ell == 7 { 5 } else { 4 };
        for k in 3..=max_k {
            jobs.extend((1..=omega_max).map(|w| (ell, k, w)));
        }
    }
    type Acc = BTreeMap<(usize, usize, usize), SweepRow>;
    let parts: Vec<Acc> = jobs
        .par_iter()
        .map(|&(ell, k, omega)| {
            let mut acc = Acc::new();
            let probe = IneqInstance { ell, omega, m: vec![0; k] };
            let lo = probe.s() * probe.q() + 1;
            for_each_admissible(k, lo, omega, |m| {
                let inst = IneqInstance { ell, omega, m: m.to_vec() };
                let margin = ineq_3_1_margin(&inst).expect("enumerated instances are admissible");
                let ip = inst.i_prime();
                let row = acc.entry((ell, k, ip)).or_insert_with(|| SweepRow { ell, k, i_prime: ip, count: 0, max_margin: margin, argmax: inst.clone() });
                row.count += 1;
                if margin > row.max_margin {
                    row.max_margin = margin;
                    row.argmax = inst;
                }
            });
            acc
        })
        .collect();
    let mut merged = Acc::new();
    for part in parts {
        for (key, r) in part {
            match merged.get_mut(&key) {
                None => {
                    merged.insert(key, r);
                }
                Some(m) => {
                    m.count += r.count;
                    if r.max_margin > m.max_margin {
                        m.max_margin = r.max_margin;
                        m.argmax = r.argmax;
                    }
                }
            }
        }
    }
    let rows: Vec<SweepRow> = merged.into_values().collect();
    let violations = rows.iter().filter(|r| r.i_prime >= 1 && r.max_margin > 0).map(|r| (r.argmax.clone(), r.max_margin)).collect();
    Ok(SweepReport { omega_max, rows, violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cdiv(a: usize, b: usize) -> i64 {
        (a as f64 / b as f64).ceil() as i64
    }

    /// Straight transcription with float ceilings, fine at these magnitudes.
    fn margin_oracle(ell: usize, omega: usize, m: &[usize]) -> i64 {
        let (k, s) = (m.len(), (ell - 1) / 4);
        let q = cdiv(omega, ell - 1) as usize;
        let t = cdiv(s * k * q, k - 1);
        let ip = (1..=k).filter(|&i| m[i - 1] as i64 >= t).max().unwrap_or(0);
        let head: i64 = (0..ip).map(|j| m[j] as i64 - t).sum();
        head + k as i64 * cdiv(s * q, k - 1) + omega as i64 - m[0] as i64 - cdiv(ell * omega, ell - 1)
    }

    #[test]
    fn worked_example() {
        // ℓ = 7, ω = 12: q = 2, s = 1, threshold 3 = sq+1, so every admissible m has i′ = k
        let inst = IneqInstance { ell: 7, omega: 12, m: vec![3, 3, 3] };
        assert_eq!((inst.threshold(), inst.i_prime()), (3, 3));
        assert_eq!(ineq_3_1_margin(&inst).unwrap(), -2);
        let inst = IneqInstance { ell: 7, omega: 12, m: vec![5, 4, 3] };
        assert_eq!(ineq_3_1_margin(&inst).unwrap(), margin_oracle(7, 12, &[5, 4, 3]));
        // i′ = 1 needs a gap between sq+1 and the threshold: q = 4 gives 5 < 6
        let inst = IneqInstance { ell: 7, omega: 24, m: vec![9, 5, 5] };
        assert_eq!(inst.i_prime(), 1);
        // 3⌈q/2⌉ − ⌈3q/2⌉ + ω − χ = 6 − 6 + 24 − 28
        assert_eq!(ineq_3_1_margin(&inst).unwrap(), -4);
        // empty sum when i′ = 0 (ℓ = 11, ω = 40: s = 2, q = 4, threshold 12)
        let inst = IneqInstance { ell: 11, omega: 40, m: vec![11, 10, 9] };
        assert_eq!(inst.i_prime(), 0);
        assert_eq!(ineq_3_1_margin(&inst).unwrap(), 3 * 4 + 40 - 11 - 44);
    }

    #[test]
    fn rejects_inadmissible() {
        let bad = [
            IneqInstance { ell: 7, omega: 12, m: vec![3, 4, 3] },
            IneqInstance { ell: 7, omega: 12, m: vec![5, 5, 2] },
            IneqInstance { ell: 7, omega: 12, m: vec![3, 3, 3, 3, 3, 3] },
            IneqInstance { ell: 11, omega: 40, m: vec![9, 9, 9, 9, 9] },
            IneqInstance { ell: 7, omega: 12, m: vec![6, 6, 6] },
        ];
        for inst in bad {
            assert!(ineq_3_1_margin(&inst).is_err(), "{inst:?}");
        }
    }

    #[test]
    fn enumeration_matches_naive() {
        for (k, lo, w) in [(3, 2, 12), (4, 3, 20), (5, 2, 14)] {
            let mut fast = Vec::new();
            for_each_admissible(k, lo, w, |m| fast.push(m.to_vec()));
            let mut naive = Vec::new();
            let mut m = vec![lo; k];
            loop {
                if m.windows(2).all(|p| p[0] >= p[1]) && m.iter().sum::<usize>() <= w {
                    naive.push(m.clone());
                }
                let mut i = k;
                loop {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                    if m[i] < w {
                        m[i] += 1;
                        break;
                    }
                    m[i] = lo;
                }
                if m.iter().all(|&x| x == lo) {
                    break;
                }
            }
            fast.sort();
            naive.sort();
            assert_eq!(fast, naive, "k={k} lo={lo} w={w}");
        }
    }

    #[test]
    fn small_sweeps_pass() {
        let r = sweep_ineq_3_1(&[7], 60).unwrap();
        assert!(r.is_pass(), "{}", r.table());
        let r = sweep_ineq_3_1(&[11], 80).unwrap();
        assert!(r.is_pass(), "{}", r.table());
        for row in r.rows.iter().filter(|r| r.i_prime >= 1) {
            assert!(row.max_margin <= 0);
        }
    }

    #[test]
    fn k5_with_q1_is_empty() {
        let r = sweep_ineq_3_1(&[7], 60).unwrap();
        // ω ≤ 6 gives q = 1; five cliques of at least 2 need ω ≥ 10
        let small = sweep_ineq_3_1(&[7], 6).unwrap();
        assert!(small.rows.iter().all(|row| row.k != 5));
        assert!(r.rows.iter().filter(|row| row.k == 5).all(|row| row.argmax.q() >= 2));
        for row in r.rows.iter().filter(|row| row.k == 5 && row.i_prime == 5) {
            assert!(row.max_margin < 0);
        }
    }

    #[test]
    fn counts_agree_with_direct_enumeration() {
        let r = sweep_ineq_3_1(&[7], 30).unwrap();
        let mut direct: BTreeMap<(usize, usize), u64> = BTreeMap::new();
        for k in 3..=5 {
            for w in 1..=30usize {
                let q = w.div_ceil(6);
                for_each_admissible(k, q + 1, w, |m| {
                    let ip = IneqInstance { ell: 7, omega: w, m: m.to_vec() }.i_prime();
                    *direct.entry((k, ip)).or_default() += 1;
                });
            }
        }
        for row in &r.rows {
            assert_eq!(direct[&(row.k, row.i_prime)], row.count);
        }
        assert_eq!(direct.values().sum::<u64>(), r.total());
    }

    #[test]
    fn boundary_cases() {
        let r = sweep_ineq_3_1(&[7, 11], 60).unwrap();
        // k = 3, i′ = 3 reaches equality
        assert_eq!(r.row(7, 3, 3).unwrap().max_margin, 0);
        let tie = IneqInstance { ell: 7, omega: 6, m: vec![2, 2, 2] };
        assert_eq!(ineq_3_1_margin(&tie).unwrap(), 0);
        // so does k = 3, i′ = 2: 2 + 2 + 6 + 18 − 7 − 21
        let tie = IneqInstance { ell: 7, omega: 18, m: vec![7, 7, 4] };
        assert_eq!((tie.i_prime(), ineq_3_1_margin(&tie).unwrap()), (2, 0));
        // ℓ = 7, k = 5: four cliques at ⌈5q/4⌉ plus one at q+1 exceed 6q ≥ ω
        assert!(r.row(7, 5, 4).is_none() && r.row(7, 5, 5).is_none());
        // i′ = 0 is not covered by the inequality and can be positive
        let over = IneqInstance { ell: 11, omega: 20, m: vec![5, 5, 5, 5] };
        assert_eq!((over.i_prime(), ineq_3_1_margin(&over).unwrap()), (0, 1));
        assert!(r.is_pass());
    }

    proptest! {
        #[test]
        fn margin_matches_oracle(ell in prop::sample::select(vec![7usize, 11, 15]), k in 3usize..=5, omega in 6usize..150, raw in prop::collection::vec(0usize..100, 5)) {
            prop_assume!(k <= 4 || ell == 7);
            let lo = (ell - 1) / 4 * omega.div_ceil(ell - 1) + 1;
            prop_assume!(k * lo <= omega);
            let room = omega - k * lo;
            let mut extra: Vec<usize> = raw[..k].to_vec();
            extra.sort_unstable_by(|a, b| b.cmp(a));
            let sum: usize = extra.iter().sum();
            if sum > room {
                extra.iter_mut().for_each(|e| *e = *e * room / sum);
            }
            let m: Vec<usize> = extra.iter().map(|e| lo + e).collect();
            let inst = IneqInstance { ell, omega, m: m.clone() };
            prop_assert!(inst.check().is_ok());
            prop_assert_eq!(ineq_3_1_margin(&inst).unwrap(), margin_oracle(ell, omega, &m));
        }
    }
}
