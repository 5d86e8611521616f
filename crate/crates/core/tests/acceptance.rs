//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits nonzero if any fails.
//!
//! Run alone with `cargo test -p sidon-designs --test acceptance`.

use std::time::Instant;

use num_rational::Ratio;
use sidon_designs::arith::smallest_prime_geq;
use sidon_designs::bh_design::{
    bodmann_haas, default_direct_tol, default_potential_tol, frame_potential_gram, verify_direct,
    verify_frame_potential, Reduction,
};
use sidon_designs::finite_field::{is_prime_power, DEFAULT_FIELD_CAP};
use sidon_designs::sidon::{bose_trace_zero, build_with_cap, m_exact, m_known, Family, SidonSet};
use sidon_designs::zauner_bounds::{
    asymptotic_check, bound_b, bound_c, bound_d, table, tie_identities, BoundSource, RowClass,
    SicDimensionData, DEFAULT_K_MAX,
};

/// Field cap large enough for Singer at q = 149 (GF(149^3) has 3.3M elements).
const LARGE_FIELD_CAP: u64 = 1 << 22;

type Outcome = Result<String, String>;

fn prime_powers(lo: u64, hi: u64) -> impl Iterator<Item = u64> {
    (lo..=hi).filter(|&q| is_prime_power(q).is_some())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn expected_parameters(family: Family, q: u64) -> (u64, u64) {
    match family {
        Family::ErdosTuran => (q * q, q),
        Family::Singer => (q * q + q + 1, q + 1),
        Family::Bose => (q * q - 1, q),
        Family::Spence => (q * (q - 1), q - 1),
        Family::Hughes => ((q - 1) * (q - 1), q - 2),
        Family::Custom => unreachable!(),
    }
}

/// 1. Every family member with q <= 64 is Sidon with the stated parameters.
fn construction_correctness() -> Outcome {
    let mut count = 0;
    for q in prime_powers(2, 64) {
        for family in Family::CONSTRUCTED {
            if !family.accepts(q) {
                continue;
            }
            let set = build_with_cap(family, q, DEFAULT_FIELD_CAP).map_err(|e| format!("{family}({q}): {e}"))?;
            ensure(set.parameters() == expected_parameters(family, q), || {
                format!("{family}({q}): parameters {:?}", set.parameters())
            })?;
            ensure(set.is_sidon(), || format!("{family}({q}) is not Sidon"))?;
            count += 1;
        }
    }
    Ok(format!("{count} family members verified"))
}

fn members_with_dim(max_d: u64, min_d: u64) -> Vec<(Family, u64)> {
    let mut out = Vec::new();
    for family in Family::CONSTRUCTED {
        for q in prime_powers(2, max_d + 2) {
            if !family.accepts(q) {
                continue;
            }
            let d = expected_parameters(family, q).1;
            if (min_d..=max_d).contains(&d) {
                out.push((family, q));
            }
        }
    }
    out
}

/// 2. Direct certification for d <= 25; frame-potential certification up
/// to d = 150.
fn design_certification() -> Outcome {
    let mut worst_direct: f64 = 0.0;
    let small = members_with_dim(25, 1);
    for &(family, q) in &small {
        let set = build_with_cap(family, q, DEFAULT_FIELD_CAP).map_err(|e| e.to_string())?;
        let design = bodmann_haas(&set).map_err(|e| e.to_string())?;
        let d = design.dim();
        let residual = verify_direct(&design).map_err(|e| e.to_string())?;
        ensure(residual <= default_direct_tol(d), || {
            format!("{family}({q}) d={d}: direct residual {residual:e}")
        })?;
        worst_direct = worst_direct.max(residual / d as f64);
        let fp = verify_frame_potential(&design, default_potential_tol(d));
        ensure(fp.certified, || format!("{family}({q}) d={d}: frame potential {fp:?}"))?;
    }

    let large = members_with_dim(150, 26);
    let mut worst_fp: f64 = 0.0;
    let mut max_d = 0;
    for &(family, q) in &large {
        let set = build_with_cap(family, q, LARGE_FIELD_CAP).map_err(|e| e.to_string())?;
        let design = bodmann_haas(&set).map_err(|e| e.to_string())?;
        let d = design.dim();
        let tol = default_potential_tol(d);
        let fp = verify_frame_potential(&design, tol);
        ensure(fp.certified, || format!("{family}({q}) d={d}: {fp:?}"))?;
        let dev = (fp.trace_m - fp.target).abs().max((fp.potential - fp.target).abs());
        worst_fp = worst_fp.max(dev / (d * d) as f64);
        max_d = max_d.max(d);
    }

    // The character-sum route against the full Gram route at moderate d.
    for (family, q) in [(Family::Singer, 31u64), (Family::Bose, 37), (Family::Hughes, 41)] {
        let design = bodmann_haas(&build_with_cap(family, q, DEFAULT_FIELD_CAP).unwrap()).unwrap();
        let fast = verify_frame_potential(&design, default_potential_tol(design.dim()));
        let (t, p) = frame_potential_gram(&design, Reduction::Deterministic);
        ensure(
            (t - fast.trace_m).abs() < 1e-8 && (p - fast.potential).abs() < 1e-6,
            || format!("{family}({q}): gram ({t}, {p}) vs characters ({}, {})", fast.trace_m, fast.potential),
        )?;
    }
    Ok(format!(
        "{} direct (max residual/d {worst_direct:.1e}), {} frame-potential up to d={max_d} (max dev/d^2 {worst_fp:.1e})",
        small.len(),
        large.len()
    ))
}

/// 3. Non-Sidon inputs fail both certificates by more than 0.1.
fn soundness() -> Outcome {
    let mut controls: Vec<(String, SidonSet)> = vec![("{0,1,2} in Z_9".into(), SidonSet::cyclic(9, &[0, 1, 2]).unwrap())];
    for q in [4u64, 5, 7, 8, 9, 11, 13, 16] {
        controls.push((format!("trace-zero Bose({q})"), bose_trace_zero(q).unwrap()));
    }
    let mut min_gap = f64::INFINITY;
    for (name, set) in &controls {
        ensure(!set.is_sidon(), || format!("{name} unexpectedly Sidon"))?;
        let design = bodmann_haas(set).map_err(|e| e.to_string())?;
        let d = design.dim();
        let residual = verify_direct(&design).map_err(|e| e.to_string())?;
        let fp = verify_frame_potential(&design, default_potential_tol(d));
        let gap = fp.potential - fp.target;
        ensure(residual > 0.1 && residual > default_direct_tol(d), || {
            format!("{name}: direct residual {residual}")
        })?;
        ensure(!fp.certified && gap > 0.1, || format!("{name}: potential gap {gap}"))?;
        min_gap = min_gap.min(residual).min(gap);
    }
    Ok(format!("{} controls rejected, smallest gap {min_gap:.3}", controls.len()))
}

/// 4. Sum of weights is d(d+1)/2 in exact arithmetic.
fn weight_sum_identity() -> Outcome {
    let mut count = 0;
    let mut check = |set: &SidonSet| -> Result<(), String> {
        let design = bodmann_haas(set).map_err(|e| e.to_string())?;
        let d = design.dim() as u64;
        let sum = design.exact_weight_sum().ok_or("missing exact weights")?;
        ensure(sum == Ratio::from_integer(d * (d + 1) / 2), || {
            format!("{}: weight sum {sum}", set.label())
        })?;
        count += 1;
        Ok(())
    };
    for q in prime_powers(2, 64) {
        for family in Family::CONSTRUCTED {
            if family.accepts(q) {
                let set = build_with_cap(family, q, DEFAULT_FIELD_CAP).map_err(|e| e.to_string())?;
                check(&set)?;
                if set.len() > 1 {
                    check(&set.remove_points(1).unwrap())?;
                }
            }
        }
    }
    for d in 1..=40 {
        check(&m_known(d).witness(DEFAULT_FIELD_CAP).map_err(|e| e.to_string())?)?;
    }
    check(&SidonSet::cyclic(9, &[0, 1, 2]).unwrap())?;
    Ok(format!("{count} designs"))
}

/// 5. m_known agrees with exhaustive search for d <= 5 and respects the
/// counting lower bound and the prime-square upper bound up to d = 500.
fn oracle_equivalence() -> Outcome {
    for d in 1..=5 {
        let known = m_known(d).order;
        let exact = m_exact(d).map_err(|e| e.to_string())?;
        ensure(known == exact, || format!("d={d}: m_known {known} != m_exact {exact}"))?;
    }
    for d in 1..=500u64 {
        let m = m_known(d).order;
        ensure(m >= d * d - d + 1, || format!("d={d}: m_known {m} below d^2-d+1"))?;
        let p = smallest_prime_geq(d);
        ensure(m <= p * p, || format!("d={d}: m_known {m} above p(d)^2 = {}", p * p))?;
    }
    Ok("d<=5 exact match; bounds hold for d<=500".into())
}

/// 6. Row classification, column (e), and tie identities.
fn table_reconstruction() -> Outcome {
    let data = SicDimensionData::bundled();
    let rows = table(150, &data, DEFAULT_K_MAX).map_err(|e| e.to_string())?;
    let (mut sic, mut tie, mut better) = (0, 0, 0);
    for r in &rows {
        ensure(!r.best_sources.contains(&BoundSource::E), || {
            format!("d={}: column e wins", r.d)
        })?;
        ensure(r.columns().iter().all(|&(_, v)| v >= r.lower), || {
            format!("d={}: a bound is below d^2", r.d)
        })?;
        ensure(r.sidon > r.lower, || format!("d={}: sidon bound <= d^2", r.d))?;
        match r.class() {
            RowClass::SicKnown => sic += 1,
            RowClass::Tie => tie += 1,
            RowClass::SidonBetter => {
                ensure(r.sidon_witness.family == Family::Hughes, || {
                    format!("d={}: improvement via {}", r.d, r.sidon_witness.label())
                })?;
                better += 1;
            }
            RowClass::PreviousBetter => {
                return Err(format!(
                    "d={}: previous bound {:?} beats sidon {}",
                    r.d,
                    r.previous_upper(),
                    r.sidon
                ))
            }
        }
    }
    ensure(
        m_known_never_erdos_turan(500),
        || "Erdos-Turan wins m_known somewhere".into(),
    )?;

    let mut ties = 0;
    for q in prime_powers(2, 2000) {
        for (family, d, n, prev) in tie_identities(q) {
            ensure(Some(n) == prev, || format!("{family}({q}), d={d}: {n} vs {prev:?}"))?;
            ties += 1;
        }
        // Same identities straight from the formulas.
        let d = q + 1;
        ensure(Some(q * q + q + 1 + d) == bound_c(d), || format!("Singer({q})"))?;
        ensure(Some(q * q - 1 + q) == bound_d(q), || format!("Bose({q})"))?;
        if q >= 3 {
            let d = q - 1;
            ensure(Some((q * (q - 1) + d, 1)) == bound_b(d, DEFAULT_K_MAX), || format!("Spence({q})"))?;
        }
    }
    Ok(format!(
        "{} rows: {sic} SIC, {tie} tie, {better} Hughes improvements; {ties} tie identities",
        rows.len()
    ))
}

fn m_known_never_erdos_turan(d_max: u64) -> bool {
    (1..=d_max).all(|d| m_known(d).family != Family::ErdosTuran)
        && prime_powers(3, 64)
            .filter(|q| q % 2 == 1)
            .all(|q| Family::Bose.parameters(q).unwrap().0 < Family::ErdosTuran.parameters(q).unwrap().0)
}

/// 7. (m_known(d) + d - d^2) / d^1.525 stays below 10 for d <= 2000.
fn asymptotic_sanity() -> Outcome {
    let rep = asymptotic_check(2000);
    ensure(rep.prime_square_violations.is_empty(), || {
        format!("m_known > p(d)^2 at {:?}", rep.prime_square_violations)
    })?;
    ensure(rep.floor_violations.is_empty(), || {
        format!("m_known + d < d^2 + 1 at {:?}", rep.floor_violations)
    })?;
    ensure(rep.max_ratio < 10.0, || format!("max ratio {} at d={}", rep.max_ratio, rep.argmax))?;
    Ok(format!("max ratio {:.4} at d={}", rep.max_ratio, rep.argmax))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("1 construction correctness", construction_correctness),
        ("2 design certification", design_certification),
        ("3 soundness of non-Sidon controls", soundness),
        ("4 exact weight-sum identity", weight_sum_identity),
        ("5 m_known oracle equivalence", oracle_equivalence),
        ("6 bounds table reconstruction", table_reconstruction),
        ("7 asymptotic sanity", asymptotic_sanity),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS criterion {name}: {msg} ({secs:.1}s)"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name}: {msg} ({secs:.1}s)");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
