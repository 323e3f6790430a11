//! Reproduction driver: reruns every acceptance criterion and writes a
//! line-delimited report plus the regenerated tables.

use std::path::Path;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::avg_case::{gap_from_quasi_avg_oracle, sb_report, GapOracle, SbThresholds};
use crate::circuits::{adversarial_robustness, algorithm_a, build_iqp, iqp_gap_amplitude, qaoa_acceptance, qaoa_kappa, ExactProvider};
use crate::error::Result;
use crate::estimator::{format_table, gate_count, headline_table, round_sig, Model, CENTURY_SECONDS, DEFAULT_BUDGET, DEFAULT_FLOPS};
use crate::gap_stats::{
    count_condition_subspaces, count_matrix_solutions, exact_gap_power_mean, exact_moment_rational, gap_histogram,
    mass_poly, mass_poly_grid_excess, promise_stats, sgap_label_from_gap, SgapLabel, REFERENCE_MASS_COEFFS,
};
use crate::linops::{
    encode_permanent_with, fock_amplitude, permanent_naive_int, permanent_ryser, permanent_ryser_int, spectral_norm,
    ComplexMatrix, FockConfig, IntMatrix,
};
use crate::lptwy::count_ones_lptwy;
use crate::poly3::{canonical_monomials, Poly3};
use crate::valiant::verify_reduction;

#[derive(Debug, Clone, PartialEq)]
pub struct ReproduceConfig {
    pub seed: u64,
    /// Conjecture constant for the multiplicative IQP and QAOA rows.
    pub constant: Option<f64>,
    pub quick: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub status: Status,
    pub details: Value,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// Run under parameters other than the published ones; not gated.
    NonDefault,
}

impl Status {
    fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::NonDefault => "non-default",
        }
    }

    fn of(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub criteria: Vec<CriterionResult>,
    pub records: Vec<Value>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.criteria.iter().all(|c| c.status != Status::Fail)
    }

    pub fn summary(&self) -> String {
        self.criteria
            .iter()
            .map(|c| format!("criterion {:>2} {:<32} {}", c.id, c.name, c.status.name()))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

fn sub_seed(seed: u64, id: u32) -> u64 {
    seed ^ (u64::from(id)).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

/// Run every criterion, write `report.jsonl`, `estimates.txt` and
/// `gap_histogram.csv` under `out`, and return the report.
pub fn reproduce_all(out: &Path, cfg: &ReproduceConfig) -> Result<Report> {
    std::fs::create_dir_all(out)?;
    let default_constant = cfg.constant.map_or(true, |c| c == 0.5);
    let rows = headline_table(DEFAULT_FLOPS, CENTURY_SECONDS, DEFAULT_BUDGET, None)?;
    let rows = match cfg.constant {
        Some(c) => {
            let adjusted = headline_table(DEFAULT_FLOPS, CENTURY_SECONDS, DEFAULT_BUDGET, Some(c))?;
            rows.into_iter()
                .zip(adjusted)
                .map(|(d, a)| if matches!(d.model, Model::IqpMult | Model::QaoaMult) { a } else { d })
                .collect()
        }
        None => rows,
    };
    let mut table = format_table(&rows);
    if !default_constant {
        table += &format!("non-default parameters: constant {} for iqp-mult and qaoa-mult\n", cfg.constant.unwrap_or(0.5));
    }
    std::fs::write(out.join("estimates.txt"), &table)?;

    let mut criteria = Vec::new();
    // 1
    let get = |m: Model| rows.iter().find(|r| r.model == m).expect("row present");
    let qs = [Model::IqpMult, Model::QaoaMult, Model::BosonMult].map(|m| (get(m).horizon.q, get(m).per_element.q));
    let headline_ok = qs == [(185, 208), (370, 420), (93, 98)];
    criteria.push(CriterionResult {
        id: 1,
        name: "estimator headline numbers",
        status: if default_constant { Status::of(headline_ok) } else { Status::NonDefault },
        details: json!({
            "default_parameters": default_constant,
            "century": qs.map(|p| p.0),
            "per_element": qs.map(|p| p.1),
            "table": rows,
        }),
    });
    // 2
    let g = [
        gate_count(Model::IqpMult, 185)?,
        gate_count(Model::QaoaMult, 370)?,
        gate_count(Model::BosonMult, 93)?,
    ];
    let rounded = g.map(|x| round_sig(x, 3));
    criteria.push(CriterionResult {
        id: 2,
        name: "gate-count formulas",
        status: Status::of(g == [1_055_425, 2_111_775, 17_391] && rounded == [1_060_000, 2_110_000, 17_400]),
        details: json!({ "exact": g, "rounded": rounded }),
    });
    criteria.push(iqp_identity(cfg)?);
    criteria.push(qaoa_ratio()?);
    criteria.push(lptwy_equivalence(cfg)?);
    criteria.push(permanents(cfg)?);
    criteria.push(dilations(cfg)?);
    criteria.push(reduction_gate()?);
    criteria.push(moments()?);
    criteria.push(mass_polynomial());
    criteria.push(promise(cfg, out)?);
    criteria.push(theorem4(cfg)?);
    criteria.push(sb_thresholds()?);
    criteria.push(algorithm_a_robustness(cfg)?);

    let mut records: Vec<Value> = criteria
        .iter()
        .map(|c| {
            json!({
                "kind": "criterion",
                "id": c.id,
                "name": c.name,
                "status": c.status.name(),
                "passed": c.status != Status::Fail,
                "details": c.details,
            })
        })
        .collect();
    let failed: Vec<u32> = criteria.iter().filter(|c| c.status == Status::Fail).map(|c| c.id).collect();
    records.push(json!({
        "kind": "summary",
        "seed": cfg.seed,
        "quick": cfg.quick,
        "default_parameters": default_constant,
        "criteria": criteria.len(),
        "failed": failed,
        "all_passed": failed.is_empty(),
    }));
    let mut text = String::new();
    for r in &records {
        let mut line = json!({ "schema_version": super::SCHEMA_VERSION });
        line.as_object_mut().expect("object").extend(r.as_object().expect("object").clone());
        text += &serde_json::to_string(&line)?;
        text.push('\n');
    }
    std::fs::write(out.join("report.jsonl"), text)?;
    Ok(Report { criteria, records })
}

fn iqp_identity(cfg: &ReproduceConfig) -> Result<CriterionResult> {
    let per_n = if cfg.quick { 20 } else { 200 };
    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(cfg.seed, 3));
    let mut worst = 0.0f64;
    for n in 2..=12 {
        for _ in 0..per_n {
            let f = Poly3::random(n, &mut rng)?;
            let amp = iqp_gap_amplitude(&f)?;
            let scaled = amp * (n as f64).exp2();
            let err = (scaled - Complex64::new(f.gap_bruteforce()?.0 as f64, 0.0)).norm();
            worst = worst.max(err);
        }
    }
    // Hiding identity: one run of C_{f̄} gives every shifted gap.
    let classes = if cfg.quick { 1 } else { 5 };
    let mut worst_shift = 0.0f64;
    for n in 1..=8 {
        for _ in 0..classes {
            let fbar = Poly3::random(n, &mut rng)?.strip_linear();
            let state = build_iqp(&fbar).run()?;
            for d in 0..1u64 << n {
                let scaled = state.amplitude(d as usize)? * (n as f64).exp2();
                let gap = fbar.with_linear_mask(d)?.gap_bruteforce()?.0 as f64;
                worst_shift = worst_shift.max((scaled - Complex64::new(gap, 0.0)).norm());
            }
        }
    }
    Ok(CriterionResult {
        id: 3,
        name: "IQP amplitude identity",
        status: Status::of(worst < 1e-6 && worst_shift < 1e-9),
        details: json!({ "per_n": per_n, "max_error": worst, "classes_per_n": classes, "max_shifted_error": worst_shift }),
    })
}

fn qaoa_ratio() -> Result<CriterionResult> {
    let mut ratios = Vec::new();
    let mut zero_ok = true;
    for i in 0..8u128 {
        let f = Poly3::from_index(2, i)?;
        let gap = f.gap_bruteforce()?.0;
        let acc = qaoa_acceptance(&f)?;
        if gap == 0 {
            zero_ok &= acc.abs() < 1e-12;
        } else {
            ratios.push(acc / (gap * gap) as f64);
        }
    }
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut n1 = Vec::new();
    for i in 0..2u128 {
        let f = Poly3::from_index(1, i)?;
        let g = f.gap_bruteforce()?.0 as f64;
        if g != 0.0 {
            n1.push(qaoa_acceptance(&f)? / (g * g));
        }
    }
    let kappa_ok = (lo - qaoa_kappa(2)).abs() < 1e-10 && n1.iter().all(|r| (r - qaoa_kappa(1)).abs() < 1e-10);
    Ok(CriterionResult {
        id: 4,
        name: "QAOA proportionality",
        status: Status::of(hi - lo < 1e-10 && zero_ok && kappa_ok && !ratios.is_empty()),
        details: json!({ "ratio": lo, "spread": hi - lo, "nonzero_gap_instances": ratios.len(), "n1_ratios": n1 }),
    })
}

fn lptwy_equivalence(cfg: &ReproduceConfig) -> Result<CriterionResult> {
    let per = if cfg.quick { 3 } else { 100 };
    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(cfg.seed, 5));
    let mut mismatches = 0u64;
    let mut runs = 0u64;
    for n in 6..=16 {
        for t in 1..=4 {
            for _ in 0..per {
                let f = Poly3::random(n, &mut rng)?;
                let want = (1u64 << n) - f.zeros_count()?;
                runs += 1;
                if count_ones_lptwy(&f, t)? != want {
                    mismatches += 1;
                }
            }
        }
    }
    Ok(CriterionResult {
        id: 5,
        name: "LPTWY oracle equivalence",
        status: Status::of(mismatches == 0),
        details: json!({ "instances": runs, "mismatches": mismatches }),
    })
}

/// Matrix with `Per = −i/√2`, used for the three-photon amplitude.
pub fn example_unitary() -> ComplexMatrix {
    let s = 0.5f64.sqrt();
    ComplexMatrix::from_rows(vec![
        vec![Complex64::new(s, 0.0), Complex64::new(0.0, s)],
        vec![Complex64::new(0.0, -s), Complex64::new(-s, 0.0)],
    ])
    .expect("square")
}

fn permanents(cfg: &ReproduceConfig) -> Result<CriterionResult> {
    let count = if cfg.quick { 50 } else { 500 };
    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(cfg.seed, 6));
    let mut mismatches = 0;
    for i in 0..count {
        let d = 1 + i % 8;
        let m = IntMatrix::from_rows((0..d).map(|_| (0..d).map(|_| rng.gen_range(-5..=5)).collect()).collect())?;
        if permanent_ryser_int(&m)? != permanent_naive_int(&m)? {
            mismatches += 1;
        }
    }
    let u = example_unitary();
    let (r, r2) = (FockConfig(vec![2, 1]), FockConfig(vec![1, 2]));
    let sub = crate::linops::fock_submatrix(&u, &r, &r2)?;
    let per = permanent_ryser(&sub)?;
    let amp = fock_amplitude(&u, &r, &r2)?;
    let per_err = (per - Complex64::new(0.0, -0.5f64.sqrt())).norm();
    let amp_err = (amp - Complex64::new(0.0, -1.0 / (2.0 * 2f64.sqrt()))).norm();
    Ok(CriterionResult {
        id: 6,
        name: "permanent cross-validation",
        status: Status::of(mismatches == 0 && per_err < 1e-12 && amp_err < 1e-12),
        details: json!({ "matrices": count, "mismatches": mismatches, "per_error": per_err, "amplitude_error": amp_err }),
    })
}

fn dilations(cfg: &ReproduceConfig) -> Result<CriterionResult> {
    let count = if cfg.quick { 20 } else { 100 };
    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(cfg.seed, 7));
    let (mut unit, mut block, mut rel) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..count {
        let d = 1 + i % 4;
        let rows = (0..d)
            .map(|_| (0..d).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect())
            .collect();
        let a = ComplexMatrix::from_rows(rows)?;
        let c = 0.5 / spectral_norm(&a)?;
        let e = encode_permanent_with(&a, c)?;
        unit = unit.max(e.unitary.unitarity_defect()?);
        block = block.max(e.unitary.block(0, 0, d, d).max_abs_diff(&a.scale_re(c))?);
        rel = rel.max(e.relative_error());
    }
    Ok(CriterionResult {
        id: 7,
        name: "dilation soundness",
        status: Status::of(unit < 1e-9 && block < 1e-10 && rel < 1e-7),
        details: json!({ "matrices": count, "unitarity_defect": unit, "block_defect": block, "relative_error": rel }),
    })
}

fn reduction_gate() -> Result<CriterionResult> {
    let mut checked = 0;
    let mut bad = Vec::new();
    for n in 1..=3 {
        for m in canonical_monomials(n) {
            let f = Poly3::from_terms(n, [m])?;
            let r = verify_reduction(&f)?;
            checked += 1;
            if !r.ok {
                bad.push(f.to_string());
            }
        }
    }
    Ok(CriterionResult {
        id: 8,
        name: "gadget reduction",
        status: Status::of(bad.is_empty()),
        details: json!({ "polynomials": checked, "failures": bad }),
    })
}

fn moments() -> Result<CriterionResult> {
    let second: Vec<bool> = (1..=4).map(|n| exact_moment_rational(n, 1).map(|r| r == BigRational::one())).collect::<Result<_>>()?;
    let three = BigRational::from_integer(BigInt::from(3));
    let fourth: Vec<String> = (1..=4)
        .map(|n| exact_moment_rational(n, 2))
        .collect::<Result<Vec<_>>>()?
        .iter()
        .map(|r| format!("{}/{}", r.numer(), r.denom()))
        .collect();
    let fourth_ok = (1..=4).map(|n| exact_moment_rational(n, 2)).collect::<Result<Vec<_>>>()?.iter().all(|r| *r <= three);
    let mut matrix_checks = 0;
    let mut matrix_ok = true;
    for n in 1..=4usize {
        for k in 1..=3u32 {
            if 2 * k as usize * n > 24 {
                continue;
            }
            let mean = exact_gap_power_mean(n, k)?;
            matrix_checks += 1;
            matrix_ok &= BigRational::from_integer(BigInt::from(count_matrix_solutions(n, k)?)) == mean;
        }
    }
    let d3: Vec<u64> = (1..=4).map(|k| count_condition_subspaces(k, 3)).collect::<Result<_>>()?;
    let d2: Vec<u64> = (1..=4).map(|k| count_condition_subspaces(k, 2)).collect::<Result<_>>()?;
    Ok(CriterionResult {
        id: 9,
        name: "moment identities",
        status: Status::of(
            second.iter().all(|&b| b) && fourth_ok && matrix_ok && d3 == [1, 3, 15, 105] && d2[3] == 135,
        ),
        details: json!({
            "second_moment_is_one": second,
            "fourth_moments": fourth,
            "matrix_checks": matrix_checks,
            "matrix_identity": matrix_ok,
            "subspaces_degree3": d3,
            "subspaces_degree2": d2,
        }),
    })
}

fn mass_polynomial() -> CriterionResult {
    let p = mass_poly();
    let worst = p.c.iter().zip(REFERENCE_MASS_COEFFS).map(|(a, b)| (a - b).abs()).fold(0.0f64, f64::max);
    let sum: f64 = p.c.iter().sum();
    let (excess, at) = mass_poly_grid_excess(&p, 20.0, 1e-3);
    CriterionResult {
        id: 10,
        name: "mass polynomial",
        status: Status::of(worst < 5e-4 && (sum - 0.1222).abs() <= 5e-5 && excess <= 0.0),
        details: json!({ "max_coefficient_error": worst, "sum": sum, "max_excess": excess, "max_excess_at": at }),
    }
}

fn promise(cfg: &ReproduceConfig, out: &Path) -> Result<CriterionResult> {
    let (n, samples) = if cfg.quick { (12, 10_000) } else { (16, 100_000) };
    let seed = sub_seed(cfg.seed, 11);
    let s = promise_stats(n, samples, seed)?;
    let hist = gap_histogram(n, samples, seed)?;
    let mut csv = String::from("gap,count\n");
    for (g, c) in &hist {
        csv += &format!("{g},{c}\n");
    }
    std::fs::write(out.join("gap_histogram.csv"), csv)?;
    let promise = s.yes + s.no;
    let ok = promise + 3.0 * s.promise_se >= 0.2 && s.p0 - 3.0 * s.p0_se <= 11.0 / 12.0 && s.no >= 0.05;
    Ok(CriterionResult {
        id: 11,
        name: "promise statistics",
        status: Status::of(ok),
        details: json!({ "stats": s, "promise_fraction": promise, "no_mass_asymptotic_bound": 0.12 }),
    })
}

fn theorem4(cfg: &ReproduceConfig) -> Result<CriterionResult> {
    let per_n = if cfg.quick { 20 } else { 200 };
    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(cfg.seed, 12));
    let mut exact_wrong = 0;
    for n in 1..=12 {
        for _ in 0..per_n {
            let f = Poly3::random(n, &mut rng)?;
            let t = gap_from_quasi_avg_oracle(&f, &mut GapOracle::Exact, &mut rng)?;
            if t.gap != f.gap_bruteforce()?.0 {
                exact_wrong += 1;
            }
        }
    }
    let trials = if cfg.quick { 100 } else { 500 };
    let n = 10;
    let mut successes = 0;
    for trial in 0..trials {
        let mut trng = ChaCha8Rng::seed_from_u64(sub_seed(cfg.seed, 1200 + trial));
        let f = Poly3::random(n, &mut trng)?;
        let mut oracle = GapOracle::corrupted(1.0 / (3.0 * n as f64), trng.gen())?;
        let t = gap_from_quasi_avg_oracle(&f, &mut oracle, &mut trng)?;
        successes += usize::from(t.gap == f.gap_bruteforce()?.0);
    }
    let frac = successes as f64 / trials as f64;
    let sigma = (2.0 / 9.0 / trials as f64).sqrt();
    Ok(CriterionResult {
        id: 12,
        name: "quasi-average-case recursion",
        status: Status::of(exact_wrong == 0 && frac >= 2.0 / 3.0 - 3.0 * sigma),
        details: json!({
            "exact_instances": per_n * 12,
            "exact_wrong": exact_wrong,
            "corrupted_trials": trials,
            "success_fraction": frac,
            "threshold": 2.0 / 3.0 - 3.0 * sigma,
        }),
    })
}

fn sb_thresholds() -> Result<CriterionResult> {
    let mut rows = Vec::new();
    let mut ok = true;
    for n in [4usize, 6, 8] {
        let th = SbThresholds::new(n);
        let yes = sb_report(n, th.yes_gap())?;
        let no = sb_report(n, th.no_gap())?;
        ok &= yes.above_t && no.below_t_over_c;
        rows.push(json!({
            "n": n,
            "l": th.l,
            "log_t": th.log_t,
            "yes_gap": th.yes_gap(),
            "log_accept_yes": yes.log_accept,
            "no_gap": th.no_gap(),
            "log_accept_no": no.log_accept,
        }));
    }
    Ok(CriterionResult {
        id: 13,
        name: "SB acceptance thresholds",
        status: Status::of(ok),
        details: json!({ "rows": rows }),
    })
}

fn algorithm_a_robustness(cfg: &ReproduceConfig) -> Result<CriterionResult> {
    let mut wrong = 0usize;
    let mut checked = 0usize;
    for n in 1..=4usize {
        let total = 1u128 << crate::poly3::term_capacity(n);
        for i in 0..total {
            let f = Poly3::from_index(n, i)?;
            let (c, w) = classify_one(&f)?;
            checked += c;
            wrong += w;
        }
    }
    let per_n = if cfg.quick { 50 } else { 500 };
    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(cfg.seed, 14));
    for n in 5..=10 {
        for _ in 0..per_n {
            let (c, w) = classify_one(&Poly3::random(n, &mut rng)?)?;
            checked += c;
            wrong += w;
        }
    }
    let eps = 1e-3;
    let classes = if cfg.quick { 2 } else { 8 };
    let (mut promise, mut correct) = (0usize, 0usize);
    for _ in 0..classes {
        let r = adversarial_robustness(&Poly3::random(8, &mut rng)?, eps)?;
        promise += r.promise_instances;
        correct += r.correct;
    }
    let frac = if promise == 0 { 1.0 } else { correct as f64 / promise as f64 };
    Ok(CriterionResult {
        id: 14,
        name: "decision procedure robustness",
        status: Status::of(wrong == 0 && frac >= 1.0 - 60.0 * eps),
        details: json!({
            "promise_instances_checked": checked,
            "misclassified": wrong,
            "adversarial_classes": classes,
            "adversarial_promise_instances": promise,
            "adversarial_correct_fraction": frac,
        }),
    })
}

/// `(1, 0)` for a correctly classified promise instance, `(1, 1)` for a
/// misclassified one, `(0, 0)` otherwise.
fn classify_one(f: &Poly3) -> Result<(usize, usize)> {
    let label = sgap_label_from_gap(f.gap_bruteforce()?.0, f.n());
    if label == SgapLabel::NonPromise {
        return Ok((0, 0));
    }
    let v = algorithm_a(f, &mut ExactProvider)?;
    Ok((1, usize::from(v.accepted() != (label == SgapLabel::Yes))))
}
