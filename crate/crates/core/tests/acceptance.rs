//! Acceptance suite: one PASS/FAIL line per criterion, runtime limits included.
//! `cargo test --test acceptance [-- <id or name fragment>...]`

mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use holed_color::appendix_checks::{for_each_admissible, sweep_ineq_3_1};
use holed_color::coloring::{
    balanced_coloring, chi_bound, color_cycle_blowup, color_framework, color_path_blowup, cyclic_coloring, materialize_chains,
    prop_balanced_check, split_required, BColoringMode, BoundParams, ChainDescriptor, EndConstraint, Method,
};
use holed_color::graph_core::{chordless_cycles, validate_ell_holed, verify_proper};
use holed_color::oracle::exact_chromatic;
use holed_color::structures::{
    materialize_cycle_blowup, materialize_framework_blowup, random_cycle_spec, random_framework, random_m0_blowup, CycleBlowupSpec,
};
use holed_color::Budget;

use common::*;

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1_cyclic_golden() -> Outcome {
    let got = cyclic_coloring(&[3, 2, 1], &(1..=7).collect::<Vec<_>>()).map_err(|e| e.to_string())?;
    let want = vec![vec![1, 4, 6], vec![2, 5], vec![3]];
    ensure(got == want, || format!("got {got:?}"))?;
    Ok("sets {1,4,6} {2,5} {3}".into())
}

/// `"a..b"` runs (either direction) and single values, comma separated.
fn seq(text: &str) -> Vec<u32> {
    let mut out = Vec::new();
    for tok in text.split(',') {
        match tok.split_once("..") {
            Some((a, b)) => {
                let (a, b): (u32, u32) = (a.parse().unwrap(), b.parse().unwrap());
                if a <= b {
                    out.extend(a..=b)
                } else {
                    out.extend((b..=a).rev())
                }
            }
            None => out.push(tok.parse().unwrap()),
        }
    }
    out
}

fn c2_balanced_golden() -> Outcome {
    let want = [
        ["1,4,7,10,13,16..27", "45..28,15,14,12,11,9,27..16,13,10,8,7", "1..8,10,13,16..22,9,11,12,14,15,23..39", "45..7"],
        [
            "2,5,8,11,14,28,30,32,34,36,38,40",
            "45..41,39,37,35,33,31,29,27..15,13,12,10,7,40,38,36,34,32,30,28,14,11,9,8",
            "1..6,8,9,11,14,28,30,7,10,12,13,15..27,29,31..39",
            "45..31,29,27..16,30,28,15..7",
        ],
        [
            "3,6,9,12,15,29,31,33,35,37,39",
            "45..40,38,36,34,32,30,28,27..16,14,13,11,10,8,39,37,35,33,31,29,15,12,9,7",
            "1..6,7,9,12,15,29,8,10,11,13,14,16..28,30..39",
            "45..30,28..16,29,15..7",
        ],
    ];
    let params = BoundParams::new(9, 40).map_err(|e| e.to_string())?;
    let chains: Vec<ChainDescriptor> = [17, 12, 11].iter().map(|&b| ChainDescriptor::tight(b, 3, 40)).collect();
    let bc = balanced_coloring(&chains, &params, BColoringMode::Split).map_err(|e| e.to_string())?;
    let mut matched = 0;
    for (i, row) in want.iter().enumerate() {
        for (j, text) in row.iter().enumerate() {
            let got = bc.sequence(i, j);
            ensure(got == seq(text), || format!("L^c_{{{},{j}}} = {got:?}", i + 1))?;
            matched += 1;
        }
    }
    Ok(format!("{matched}/12 sequences match"))
}

fn c3_cycle_bound() -> Outcome {
    let mut mismatches = 0;
    for seed in 0..500u64 {
        let ell = [7, 9, 11][seed as usize % 3];
        let spec = random_cycle_spec(ell, 5, seed).map_err(|e| e.to_string())?;
        let c = color_cycle_blowup(&spec).map_err(|e| format!("seed {seed}: {e}"))?;
        let (g, _) = materialize_cycle_blowup(&spec).map_err(|e| e.to_string())?;
        ensure(conflicts(&g, &c.coloring) == 0, || format!("seed {seed}: improper"))?;
        let bound = chi_bound(ell, spec.structural_clique_number()).unwrap();
        ensure(c.coloring.num_colors() <= bound, || format!("seed {seed}: {} > {bound}", c.coloring.num_colors()))?;
        mismatches += usize::from(clique_number_naive(&g) != spec.structural_clique_number());
    }
    ensure(mismatches == 0, || format!("{mismatches} ω mismatches"))?;
    Ok("500/500 proper and within bound, 0 ω mismatches".into())
}

fn c4_sharpness() -> Outcome {
    let mut got = Vec::new();
    for (ell, t, want) in [(7, 1, 3), (7, 2, 5), (7, 3, 7), (9, 1, 3), (9, 2, 5)] {
        let (g, _) = materialize_cycle_blowup(&CycleBlowupSpec::clique_blowup(ell, t)).map_err(|e| e.to_string())?;
        let (chi, _) = exact_chromatic(&g, None, &mut Budget::default()).map_err(|e| e.to_string())?;
        ensure(chi == want && chi == chi_bound(ell, 2 * t).unwrap(), || format!("ℓ={ell} t={t}: χ={chi}, expected {want}"))?;
        got.push(chi);
    }
    Ok(format!("χ = {got:?}"))
}

fn c5_balanced_random() -> Outcome {
    for seed in 0..200u64 {
        let (params, chains) = random_chains(seed);
        let b: Vec<usize> = chains.iter().map(|c| c.b_size).collect();
        let mode = if split_required(&params, &b) { BColoringMode::Split } else { BColoringMode::Plain };
        let bc = balanced_coloring(&chains, &params, mode).map_err(|e| format!("seed {seed}: {e}"))?;
        let (g, layout) = materialize_chains(&chains).map_err(|e| e.to_string())?;
        let c = bc.coloring_for(&layout, g.n()).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(conflicts(&g, &c) == 0, || format!("seed {seed}: improper"))?;
        ensure(c.num_colors() <= params.chi, || format!("seed {seed}: {} colors > {}", c.num_colors(), params.chi))?;
        let r = prop_balanced_check(&bc);
        ensure(r.is_pass(), || format!("seed {seed}: monotonicity {:?}", r.witness))?;
    }
    Ok("200/200 proper, monotone".into())
}

fn c6_paths() -> Outcome {
    let mut methods: BTreeMap<&str, usize> = BTreeMap::new();
    let mut failures = Vec::new();
    let (mut seed, mut done) = (0u64, 0);
    while done < 200 {
        seed += 1;
        let Some(case) = random_path_case(seed) else { continue };
        ensure(path_hypothesis_holds(&case), || format!("seed {seed}: generator broke the hypothesis"))?;
        done += 1;
        let r = match color_path_blowup(&case.path, &case.start, &case.end, case.chi) {
            Ok(r) => r,
            Err(e) => {
                failures.push(format!("seed {seed}: {e}"));
                continue;
            }
        };
        let (g, layout) = case.path.materialize().map_err(|e| e.to_string())?;
        ensure(conflicts(&g, &r.coloring) == 0, || format!("seed {seed}: improper"))?;
        ensure(r.coloring.num_colors() <= case.chi, || format!("seed {seed}: above χ′"))?;
        let m = layout.len() - 1;
        for (clique, c) in [(&layout[0], &case.start), (&layout[m], &case.end)] {
            let got: Vec<u32> = clique.iter().map(|&v| r.coloring.color(v)).collect();
            let ok = match c {
                EndConstraint::Fixed(f) => &got == f,
                EndConstraint::Set(s) => {
                    let (mut a, mut b) = (got.clone(), s.clone());
                    a.sort_unstable();
                    b.sort_unstable();
                    a == b
                }
            };
            ensure(ok, || format!("seed {seed}: end contract broken, {got:?} vs {c:?}"))?;
        }
        *methods.entry(r.method).or_default() += 1;
    }
    if !failures.is_empty() {
        return Err(format!("{} of 200 not colored: {}", failures.len(), failures.join("; ")));
    }
    Ok(format!("200/200 by {methods:?}"))
}

fn c7_appendix() -> Outcome {
    let r = sweep_ineq_3_1(&[7, 11], 120).map_err(|e| e.to_string())?;
    ensure(r.is_pass(), || format!("violations {:?}", r.violations))?;
    // k = 5 needs ℓ = 7; ⌈ω/6⌉ = 1 means ω ≤ 6 and each m_i ≥ 2
    let mut q1 = 0;
    for omega in 1..=6 {
        for_each_admissible(5, 2, omega, |_| q1 += 1);
    }
    ensure(q1 == 0, || format!("{q1} instances with k = 5, q = 1"))?;
    let ties: Vec<String> = r.rows.iter().filter(|x| x.i_prime >= 1 && x.max_margin == 0).map(|x| format!("(ℓ={},k={},i′={})", x.ell, x.k, x.i_prime)).collect();
    Ok(format!("{} instances, max gated margin 0 at {}, k=5 q=1 empty", r.total(), ties.join(" ")))
}

fn c8_holed() -> Outcome {
    let mut graphs = Vec::new();
    let mut seed = 0u64;
    while graphs.len() < 50 {
        seed += 1;
        let ell = [7, 9][seed as usize % 2];
        let spec = random_cycle_spec(ell, 3, seed).map_err(|e| e.to_string())?;
        let (g, _) = materialize_cycle_blowup(&spec).map_err(|e| e.to_string())?;
        if g.n() <= 28 {
            graphs.push((g, ell));
        }
    }
    while graphs.len() < 100 {
        seed += 1;
        let k = 3 + seed as usize % 2;
        let Ok((f, a)) = random_framework(7, k, seed as usize % (k - 1), 1 + seed as usize % 2, seed) else { continue };
        let (g, _) = materialize_framework_blowup(&f, &a).map_err(|e| e.to_string())?;
        if g.n() <= 28 {
            graphs.push((g, 7));
        }
    }
    for (i, (g, ell)) in graphs.iter().enumerate() {
        let r = validate_ell_holed(g, *ell, g.n().max(ell + 1), &mut Budget::default()).map_err(|e| e.to_string())?;
        ensure(r.is_pass(), || format!("instance {i}: {:?}", r.witness))?;
    }
    // subset enumeration on the first five of each family with n ≤ 22
    let mut picks: Vec<usize> = Vec::new();
    for range in [0..50, 50..100] {
        picks.extend(range.filter(|&i| graphs[i].0.n() <= 22).take(5));
    }
    ensure(picks.len() == 10, || format!("only {} small instances", picks.len()))?;
    for &i in &picks {
        let (g, ell) = &graphs[i];
        let naive = holes_by_subsets(g, 2 * ell);
        let mut lib: BTreeMap<usize, usize> = BTreeMap::new();
        for c in chordless_cycles(g, 4, 2 * ell, &mut Budget::default()).map_err(|e| e.to_string())? {
            *lib.entry(c.len()).or_default() += 1;
        }
        ensure(naive == lib, || format!("instance {i}: subsets {naive:?} vs enumerator {lib:?}"))?;
        ensure(naive.keys().all(|&len| len == *ell), || format!("instance {i}: hole lengths {naive:?}"))?;
    }
    let sizes: Vec<usize> = picks.iter().map(|&i| graphs[i].0.n()).collect();
    Ok(format!("100/100 ℓ-holed, 10/10 agree with subset enumeration (n = {sizes:?})"))
}

fn c9_frameworks() -> Outcome {
    let params = [(7, 3, 12), (7, 4, 16), (7, 5, 30), (9, 3, 24), (11, 3, 20), (11, 4, 40), (13, 3, 30), (15, 3, 40)];
    let mut constructive = 0;
    for seed in 0..50u64 {
        let (ell, k, w) = params[seed as usize % params.len()];
        let (f, a) = random_m0_blowup(ell, k, w, seed).map_err(|e| e.to_string())?;
        let r = color_framework(&f, &a, &mut Budget::default()).map_err(|e| format!("seed {seed}: {e}"))?;
        let (g, _) = materialize_framework_blowup(&f, &a).map_err(|e| e.to_string())?;
        ensure(conflicts(&g, &r.coloring) == 0, || format!("m=0 seed {seed}: improper"))?;
        ensure(r.within_bound(), || format!("m=0 seed {seed}: above bound"))?;
        ensure(r.method == Method::ConstructiveM0, || format!("m=0 seed {seed}: fell back ({:?})", r.note))?;
        constructive += 1;
    }
    let (mut seed, mut certified) = (0u64, 0);
    while certified < 10 {
        seed += 1;
        let k = 3 + seed as usize % 3;
        let m = 1 + seed as usize % (k - 2);
        let Ok((f, a)) = random_framework(7, k, m, 1 + seed as usize % 2, seed) else { continue };
        let (g, _) = materialize_framework_blowup(&f, &a).map_err(|e| e.to_string())?;
        if g.n() > 36 {
            continue;
        }
        let r = color_framework(&f, &a, &mut Budget::default()).map_err(|e| format!("m={m} seed {seed}: {e}"))?;
        ensure(verify_proper(&g, &r.coloring).map_err(|e| e.to_string())?.is_pass(), || format!("m={m} seed {seed}: improper"))?;
        let (chi, _) = exact_chromatic(&g, None, &mut Budget::default()).map_err(|e| format!("m={m} seed {seed}: {e}"))?;
        ensure(chi <= r.bound && r.within_bound(), || format!("m={m} seed {seed}: χ={chi}, bound {}", r.bound))?;
        certified += 1;
    }
    Ok(format!("{constructive}/50 constructive_m0, 10/10 m≥1 certified by the exact oracle"))
}

fn main() {
    let criteria = [
        Criterion { id: 1, name: "cyclic coloring golden", limit: Duration::from_millis(1), run: c1_cyclic_golden },
        Criterion { id: 2, name: "balanced coloring golden", limit: Duration::from_millis(10), run: c2_balanced_golden },
        Criterion { id: 3, name: "cycle blow-up bound", limit: Duration::from_secs(60), run: c3_cycle_bound },
        Criterion { id: 4, name: "sharpness", limit: Duration::from_secs(30), run: c4_sharpness },
        Criterion { id: 5, name: "balanced coloring random", limit: Duration::from_secs(30), run: c5_balanced_random },
        Criterion { id: 6, name: "path blow-ups", limit: Duration::from_secs(30), run: c6_paths },
        Criterion { id: 7, name: "counting inequality sweep", limit: Duration::from_secs(120), run: c7_appendix },
        Criterion { id: 8, name: "hole validation", limit: Duration::from_secs(120), run: c8_holed },
        Criterion { id: 9, name: "framework bound", limit: Duration::from_secs(180), run: c9_frameworks },
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for c in criteria.iter().filter(|c| filter.is_empty() || filter.iter().any(|f| c.name.contains(f.as_str()) || *f == c.id.to_string())) {
        let t = Instant::now();
        let out = (c.run)();
        let dt = t.elapsed();
        let verdict = match out {
            Ok(detail) if dt <= c.limit => format!("PASS [{}] {} ({:.3?} / {:?}): {detail}", c.id, c.name, dt, c.limit),
            Ok(detail) => format!("FAIL [{}] {} ({:.3?} over {:?}): {detail}", c.id, c.name, dt, c.limit),
            Err(why) => format!("FAIL [{}] {} ({:.3?}): {why}", c.id, c.name, dt),
        };
        failed += usize::from(verdict.starts_with("FAIL"));
        println!("{verdict}");
    }
    println!("acceptance: {} failed", failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
