//! Acceptance criteria 1 to 14, each at its stated tolerance. Every criterion
//! prints one pass/fail line; the test fails if any criterion does.

mod common;

use std::time::Instant;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use qcs_core::avg_case::{gap_from_quasi_avg_oracle, sb_acceptance_exact, GapOracle, SbThresholds};
use qcs_core::circuits::{adversarial_robustness, algorithm_a, build_iqp, iqp_gap_amplitude, qaoa_acceptance, ExactProvider};
use qcs_core::estimator::{estimate, gate_count, round_sig, EstimateParams, Model};
use qcs_core::gap_stats::{
    count_condition_subspaces, count_matrix_solutions, exact_moment_rational, gap_histogram, mass_poly, promise_stats,
    indicator_quarter,
};
use qcs_core::linops::{
    encode_permanent_with, fock_amplitude, fock_submatrix, permanent_naive_int, permanent_ryser, permanent_ryser_int,
    spectral_norm, ComplexMatrix, FockConfig, IntMatrix,
};
use qcs_core::lptwy::count_ones_lptwy;
use qcs_core::poly3::{canonical_monomials, term_capacity};
use qcs_core::valiant::verify_reduction;
use qcs_core::Poly3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn criterion_1() -> Outcome {
    let q = |m: Model, per: bool| {
        let mut p = EstimateParams::new(m);
        if per {
            p = p.per_element();
        }
        estimate(&p).unwrap().q
    };
    let start = Instant::now();
    let got = [
        q(Model::IqpMult, false),
        q(Model::QaoaMult, false),
        q(Model::BosonMult, false),
        q(Model::IqpMult, true),
        q(Model::QaoaMult, true),
        q(Model::BosonMult, true),
    ];
    let secs = start.elapsed().as_secs_f64();
    outcome(got == [185, 370, 93, 208, 420, 98] && secs < 1.0, format!("{got:?} in {secs:.3}s"))
}

fn criterion_2() -> Outcome {
    let formula = [
        (185u128.pow(3) + 5 * 185) / 6,
        {
            let n = 185u128;
            (n.pow(3) + 20 * n) / 3
        },
        2 * 93u128 * 93 + 93,
    ];
    let lib = [
        gate_count(Model::IqpMult, 185).unwrap(),
        gate_count(Model::QaoaMult, 370).unwrap(),
        gate_count(Model::BosonMult, 93).unwrap(),
    ];
    let rounded = lib.map(|x| round_sig(x, 3));
    let ok = lib == formula && lib == [1_055_425, 2_111_775, 17_391] && rounded == [1_060_000, 2_110_000, 17_400];
    outcome(ok, format!("{lib:?} -> {rounded:?}"))
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(301);
    let mut worst = 0.0f64;
    for n in 2..=12 {
        for _ in 0..200 {
            let f = Poly3::random(n, &mut rng).unwrap();
            let a = iqp_gap_amplitude(&f).unwrap() * (n as f64).exp2();
            worst = worst.max((a - c(common::gap(&f) as f64, 0.0)).norm());
        }
    }
    let mut worst_shift = 0.0f64;
    for n in 1..=8 {
        for _ in 0..5 {
            let fbar = Poly3::random(n, &mut rng).unwrap().strip_linear();
            let state = build_iqp(&fbar).run().unwrap();
            for d in 0..1u64 << n {
                let g = common::gap(&fbar.with_linear_mask(d).unwrap()) as f64;
                let a = state.amplitude(d as usize).unwrap() * (n as f64).exp2();
                worst_shift = worst_shift.max((a - c(g, 0.0)).norm());
            }
        }
    }
    outcome(worst < 1e-6 && worst_shift < 1e-9, format!("max error {worst:.1e}, shifted {worst_shift:.1e}"))
}

fn criterion_4() -> Outcome {
    let mut ratios = Vec::new();
    let mut zero_ok = true;
    for i in 0..1u128 << term_capacity(2) {
        let f = Poly3::from_index(2, i).unwrap();
        let g = common::gap(&f);
        let acc = qaoa_acceptance(&f).unwrap();
        if g == 0 {
            zero_ok &= acc.abs() < 1e-12;
        } else {
            ratios.push(acc / (g * g) as f64);
        }
    }
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    // n = 1 fixture: the empty polynomial has gap 2.
    let empty = Poly3::zero(1).unwrap();
    let k1 = qaoa_acceptance(&empty).unwrap() / 4.0;
    let consistent = (k1 - 0.125).abs() < 1e-12 && (lo - k1 / 8.0).abs() < 1e-12;
    outcome(
        hi - lo < 1e-10 && zero_ok && consistent,
        format!("{} nonzero-gap polynomials, ratio {lo}, spread {:.1e}, n=1 ratio {k1}", ratios.len(), hi - lo),
    )
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(501);
    let mut bad = 0;
    let mut runs = 0;
    for n in 6..=16 {
        for t in 1..=4 {
            for i in 0..100 {
                let f = Poly3::random(n, &mut rng).unwrap();
                let want = (1u64 << n) - f.zeros_count().unwrap();
                if n <= 10 && i < 5 {
                    assert_eq!(want, common::ones(&f));
                }
                runs += 1;
                bad += usize::from(count_ones_lptwy(&f, t).unwrap() != want);
            }
        }
    }
    outcome(bad == 0, format!("{runs} instances, {bad} mismatches"))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(601);
    let mut bad = 0;
    for i in 0..500 {
        let d = 1 + i % 8;
        let rows: Vec<Vec<i64>> = (0..d).map(|_| (0..d).map(|_| rng.gen_range(-4..=4)).collect()).collect();
        let m = IntMatrix::from_rows(rows.clone()).unwrap();
        let ry = permanent_ryser_int(&m).unwrap();
        let nv = permanent_naive_int(&m).unwrap();
        let oracle = BigInt::from(common::permanent_by_permutations(&rows));
        bad += usize::from(ry != nv || nv != oracle);
    }
    let s = 0.5f64.sqrt();
    let u = ComplexMatrix::from_rows(vec![vec![c(s, 0.0), c(0.0, s)], vec![c(0.0, -s), c(-s, 0.0)]]).unwrap();
    let (r, r2) = (FockConfig(vec![2, 1]), FockConfig(vec![1, 2]));
    let per = permanent_ryser(&fock_submatrix(&u, &r, &r2).unwrap()).unwrap();
    let amp = fock_amplitude(&u, &r, &r2).unwrap();
    let per_err = (per - c(0.0, -s)).norm();
    let amp_err = (amp - c(0.0, -1.0 / (2.0 * 2f64.sqrt()))).norm();
    outcome(
        bad == 0 && per_err < 1e-12 && amp_err < 1e-12,
        format!("500 matrices, {bad} mismatches; Per error {per_err:.1e}, amplitude error {amp_err:.1e}"),
    )
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(701);
    let (mut unit, mut block, mut rel) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..100 {
        let d = 1 + i % 4;
        let rows = (0..d)
            .map(|_| (0..d).map(|_| c(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5))).collect())
            .collect();
        let a = ComplexMatrix::from_rows(rows).unwrap();
        let cc = 1.0 / (2.0 * spectral_norm(&a).unwrap());
        let e = encode_permanent_with(&a, cc).unwrap();
        unit = unit.max(e.unitary.unitarity_defect().unwrap());
        block = block.max(e.unitary.block(0, 0, d, d).max_abs_diff(&a.scale_re(cc)).unwrap());
        let want = qcs_core::linops::permanent_naive(&a).unwrap() * cc.powi(d as i32);
        rel = rel.max((e.amplitude - want).norm() / want.norm());
    }
    outcome(
        unit < 1e-9 && block < 1e-10 && rel < 1e-7,
        format!("unitarity {unit:.1e}, block {block:.1e}, relative {rel:.1e}"),
    )
}

fn criterion_8() -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for n in 1..=3 {
        for m in canonical_monomials(n) {
            let f = Poly3::from_terms(n, [m]).unwrap();
            let r = verify_reduction(&f).unwrap();
            // Unused variables double the gap without entering the graph.
            let unused = n - f.terms().flatten().collect::<std::collections::BTreeSet<_>>().len();
            let want = BigInt::from(64) * BigInt::from(common::gap(&f)) / BigInt::from(1i64 << unused);
            checked += 1;
            if r.perm != want || r.nodes > 22 {
                bad.push(format!("{f}: {} vs {want}", r.perm));
            }
        }
    }
    outcome(bad.is_empty(), format!("{checked} single-term polynomials, failures {bad:?}"))
}

fn criterion_9() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for n in 1..=4usize {
        // Oracle: moments from the gap of every polynomial.
        let total = 1u128 << term_capacity(n);
        let gaps: Vec<i64> = (0..total).map(|i| common::gap(&Poly3::from_index(n, i).unwrap())).collect();
        let mean = |k: u32| {
            let s: BigInt = gaps.iter().map(|&g| BigInt::from(g).pow(2 * k)).sum();
            BigRational::new(s, BigInt::from(total as u64))
        };
        let norm = |k: u32| BigRational::from_integer(BigInt::from(1) << (n as u32 * k));
        let m2 = exact_moment_rational(n, 1).unwrap();
        ok &= m2 == BigRational::from_integer(1.into()) && m2 == mean(1) / norm(1);
        let m4 = exact_moment_rational(n, 2).unwrap();
        ok &= m4 == mean(2) / norm(2) && m4 <= BigRational::from_integer(3.into());
        notes.push(format!("E4(n={n})={m4}"));
        for k in 1..=3u32 {
            if 2 * k as usize * n <= 24 {
                let cnt = count_matrix_solutions(n, k).unwrap();
                ok &= BigRational::from_integer(cnt.into()) == mean(k);
            }
        }
    }
    let d3: Vec<u64> = (1..=4).map(|k| count_condition_subspaces(k, 3).unwrap()).collect();
    let d2: Vec<u64> = (1..=4).map(|k| count_condition_subspaces(k, 2).unwrap()).collect();
    ok &= d3 == [1, 3, 15, 105] && d2 == [1, 3, 15, 135];
    outcome(ok, format!("{}; degree 3 {d3:?}, degree 2 {d2:?}", notes.join(", ")))
}

fn criterion_10() -> Outcome {
    let printed = [
        1.0, -6.0672, 29.9730, -114.8688, 345.0021, -829.2997, 1620.0455, -2593.7392, 3410.0118, -3665.1216,
        3183.4033, -2188.3186, 1149.8164, -435.1008, 105.8449, -12.4590,
    ];
    let p = mass_poly();
    let worst = p.c.iter().zip(printed).map(|(a, b)| (a - b).abs()).fold(0.0f64, f64::max);
    let sum: f64 = p.c.iter().sum();
    let mut excess = f64::NEG_INFINITY;
    for i in 0..=20_000 {
        let x = i as f64 * 1e-3;
        excess = excess.max(p.eval(x) - indicator_quarter(x));
    }
    outcome(
        p.c.len() == 16 && worst < 5e-4 && (sum - 0.1222).abs() <= 5e-5 && excess <= 0.0,
        format!("max coefficient error {worst:.1e}, sum {sum:.6}, max p - I on grid {excess:.2e}"),
    )
}

fn criterion_11() -> Outcome {
    let (n, samples, seed) = (16usize, 100_000usize, 1101u64);
    let hist = gap_histogram(n, samples, seed).unwrap();
    let (mut yes, mut no) = (0u64, 0u64);
    for (&g, &k) in &hist {
        match common::promise_label(g, n) {
            Some(true) => yes += k,
            Some(false) => no += k,
            None => {}
        }
    }
    let m = samples as f64;
    let promise = (yes + no) as f64 / m;
    let promise_se = (promise * (1.0 - promise) / m).sqrt();
    let p0 = yes.max(no) as f64 / (yes + no) as f64;
    let p0_se = (p0 * (1.0 - p0) / (yes + no) as f64).sqrt();
    let stats = promise_stats(n, samples, seed).unwrap();
    let agree = (stats.yes - yes as f64 / m).abs() < 1e-12 && (stats.no - no as f64 / m).abs() < 1e-12;
    let no_mass = no as f64 / m;
    outcome(
        agree && promise + 3.0 * promise_se >= 0.2 && p0 - 3.0 * p0_se <= 11.0 / 12.0 && no_mass >= 0.05,
        format!("promise {promise:.4} (se {promise_se:.4}), p0 {p0:.4} (se {p0_se:.4}), NO mass {no_mass:.4}"),
    )
}

fn criterion_12() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1201);
    let mut wrong = 0;
    let mut runs = 0;
    for n in 1..=12 {
        for _ in 0..200 {
            let f = Poly3::random(n, &mut rng).unwrap();
            let t = gap_from_quasi_avg_oracle(&f, &mut GapOracle::Exact, &mut rng).unwrap();
            runs += 1;
            wrong += usize::from(t.gap != common::gap(&f));
        }
    }
    let n = 10;
    let trials = 500;
    let mut ok = 0;
    for trial in 0..trials {
        let mut trng = ChaCha8Rng::seed_from_u64(120_000 + trial);
        let f = Poly3::random(n, &mut trng).unwrap();
        let mut oracle = GapOracle::corrupted(1.0 / (3.0 * n as f64), 7_000 + trial).unwrap();
        let t = gap_from_quasi_avg_oracle(&f, &mut oracle, &mut trng).unwrap();
        ok += usize::from(t.gap == common::gap(&f));
    }
    let frac = ok as f64 / trials as f64;
    let floor = 2.0 / 3.0 - 3.0 * (2.0f64 / 9.0 / trials as f64).sqrt();
    outcome(
        wrong == 0 && frac >= floor,
        format!("exact: {wrong} wrong of {runs}; corrupted: {frac:.3} success (floor {floor:.3})"),
    )
}

fn criterion_13() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for n in [4usize, 6, 8] {
        let l = 10.0 * 2f64.powi(n as i32 / 2);
        let log_t = -l * std::f64::consts::LN_2 + 9.0 / 2f64.sqrt();
        let th = SbThresholds::new(n);
        ok &= (th.log_t - log_t).abs() < 1e-9 && th.l as f64 == l;
        // Oracle: smallest even YES gap and largest even NO gap.
        let yes_gap = (0..).step_by(2).find(|g: &i64| 2 * g * g >= 1 << n).unwrap();
        let no_gap = (0..).step_by(2).take_while(|g: &i64| 4 * g * g <= 1 << n).last().unwrap();
        let lnp = |g: i64| {
            let r = g as f64 / (1u64 << n) as f64;
            let a = l * (0.5 * (1.0 + r)).ln();
            let b = l * (0.5 * (1.0 - r)).ln();
            a.max(b) + (1.0 + (a.min(b) - a.max(b)).exp()).ln()
        };
        let (py, pn) = (lnp(yes_gap), lnp(no_gap));
        let (ly, ln_) = (
            sb_acceptance_exact(yes_gap, n, th.l).unwrap(),
            sb_acceptance_exact(no_gap, n, th.l).unwrap(),
        );
        ok &= (py - ly).abs() < 1e-9 && (pn - ln_).abs() < 1e-9;
        ok &= ly >= log_t && ln_ <= log_t - 1.5f64.ln();
        notes.push(format!("n={n}: ln p_yes {ly:.3} >= {log_t:.3}, ln p_no {ln_:.3} <= {:.3}", log_t - 1.5f64.ln()));
    }
    outcome(ok, notes.join("; "))
}

fn criterion_14() -> Outcome {
    let mut checked = 0usize;
    let mut wrong = 0usize;
    let mut classify = |f: &Poly3| {
        if let Some(yes) = common::promise_label(common::gap(f), f.n()) {
            checked += 1;
            wrong += usize::from(algorithm_a(f, &mut ExactProvider).unwrap().accepted() != yes);
        }
    };
    for n in 1..=4 {
        for i in 0..1u128 << term_capacity(n) {
            classify(&Poly3::from_index(n, i).unwrap());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1401);
    for n in 5..=10 {
        let count = if n == 8 || n == 10 { 1000 } else { 300 };
        for _ in 0..count {
            classify(&Poly3::random(n, &mut rng).unwrap());
        }
    }
    let eps = 1e-3;
    let (mut promise, mut correct) = (0, 0);
    for _ in 0..8 {
        let r = adversarial_robustness(&Poly3::random(8, &mut rng).unwrap(), eps).unwrap();
        assert!(r.l1_used <= eps + 1e-12);
        promise += r.promise_instances;
        correct += r.correct;
    }
    let frac = correct as f64 / promise as f64;
    outcome(
        wrong == 0 && frac >= 1.0 - 60.0 * eps,
        format!("{checked} promise instances, {wrong} wrong; adversarial {correct}/{promise} = {frac:.4}"),
    )
}

#[test]
fn acceptance_criteria() {
    let criteria: [(u32, &str, fn() -> Outcome); 14] = [
        (1, "estimator headline numbers", criterion_1),
        (2, "gate-count formulas", criterion_2),
        (3, "IQP amplitude identity", criterion_3),
        (4, "QAOA proportionality", criterion_4),
        (5, "LPTWY oracle equivalence", criterion_5),
        (6, "permanent cross-validation", criterion_6),
        (7, "dilation soundness", criterion_7),
        (8, "gadget reduction", criterion_8),
        (9, "moment identities", criterion_9),
        (10, "mass polynomial", criterion_10),
        (11, "promise statistics", criterion_11),
        (12, "quasi-average-case recursion", criterion_12),
        (13, "SB acceptance thresholds", criterion_13),
        (14, "decision procedure robustness", criterion_14),
    ];
    let mut failed = Vec::new();
    for (id, name, run) in criteria {
        let start = Instant::now();
        let o = run();
        println!(
            "criterion {id:>2} {:<4} {name}: {} [{:.1}s]",
            if o.ok { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
        if !o.ok {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
