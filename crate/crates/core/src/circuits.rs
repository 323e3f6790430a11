//! IQP and QAOA circuits whose amplitudes encode the gap of a polynomial,
//! the promise-gap decision procedure built on them, and distance measures
//! between output distributions.
//!
//! For the QAOA encoding, qubits `0..n` carry the polynomial's variables and
//! qubits `n..2n` are the ancillas that receive the teleported final
//! Hadamards. Each gadget contributes a factor `1/√2` to the all-zero
//! amplitude, so the acceptance probability is `gap² · 2^{−3n}`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly3::Poly3;
use crate::statevector::{Circuit, Gate, StateVector};

/// `C_f`: Hadamards, one Z/CZ/CCZ per monomial, Hadamards.
pub fn build_iqp(f: &Poly3) -> Circuit {
    let n = f.n();
    let mut c = Circuit::new(n);
    for k in 0..n {
        c.push(Gate::H(k));
    }
    for t in f.terms() {
        c.push(match t[..] {
            [a] => Gate::Z(a),
            [a, b] => Gate::CZ(a, b),
            [a, b, d] => Gate::CCZ(a, b, d),
            _ => unreachable!("degree 1..=3"),
        });
    }
    for k in 0..n {
        c.push(Gate::H(k));
    }
    c
}

/// `⟨0̄|C_f|0̄⟩`, which equals `gap(f)/2^n`.
pub fn iqp_gap_amplitude(f: &Poly3) -> Result<Complex64> {
    build_iqp(f).run()?.amplitude(0)
}

/// Amplitude of `C_{f̄}` at the output `δ^f`; also `gap(f)/2^n`.
pub fn iqp_shifted_amplitude(f: &Poly3) -> Result<Complex64> {
    build_iqp(&f.strip_linear())
        .run()?
        .amplitude(f.linear_mask() as usize)
}

/// A projector constraint: satisfied when `qubits` read `pattern`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    pub qubits: Vec<usize>,
    pub pattern: Vec<bool>,
    pub multiplicity: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QaoaSpec {
    pub qubits: usize,
    pub constraints: Vec<Constraint>,
    pub gamma: f64,
    pub beta: f64,
    pub rounds: u32,
}

impl QaoaSpec {
    /// Total number of constraints counted with multiplicity.
    pub fn constraint_count(&self) -> u64 {
        self.constraints.iter().map(|c| u64::from(c.multiplicity)).sum()
    }

    /// Hadamard layer, `exp(−iγC)` as diagonal phases, `exp(−iβB)`.
    pub fn circuit(&self) -> Circuit {
        let mut c = Circuit::new(self.qubits);
        for k in 0..self.qubits {
            c.push(Gate::H(k));
        }
        for con in &self.constraints {
            c.push(Gate::DiagPhase {
                theta: self.gamma * f64::from(con.multiplicity),
                targets: con.qubits.clone(),
                pattern: con.pattern.clone(),
            });
        }
        for k in 0..self.qubits {
            c.push(Gate::XRot {
                beta: self.beta,
                target: k,
            });
        }
        c
    }
}

/// `g₂(q)` for `q = 2n` qubits: `(n³ + 20n)/3`.
pub fn qaoa_constraint_bound(n: u64) -> u64 {
    (n * n * n + 20 * n) / 3
}

/// The QAOA encoding of `f` on `2n` qubits.
pub fn build_qaoa(f: &Poly3) -> (QaoaSpec, Circuit) {
    let n = f.n();
    let mut constraints = Vec::new();
    for t in f.terms() {
        constraints.push(Constraint {
            pattern: vec![true; t.len()],
            qubits: t,
            multiplicity: 2,
        });
    }
    for k in 0..n {
        let anc = n + k;
        // Phase that turns the teleported H followed by H̃ back into H.
        constraints.push(Constraint {
            qubits: vec![k],
            pattern: vec![true],
            multiplicity: 1,
        });
        // Q = diag(1, i, 1, −i) over (ancilla, original).
        constraints.push(Constraint {
            qubits: vec![anc, k],
            pattern: vec![false, true],
            multiplicity: 3,
        });
        constraints.push(Constraint {
            qubits: vec![anc, k],
            pattern: vec![true, true],
            multiplicity: 1,
        });
    }
    let spec = QaoaSpec {
        qubits: 2 * n,
        constraints,
        gamma: FRAC_PI_2,
        beta: FRAC_PI_4,
        rounds: 1,
    };
    let circuit = spec.circuit();
    (spec, circuit)
}

/// Probability of reading all zeros on the `2n` QAOA qubits.
pub fn qaoa_acceptance(f: &Poly3) -> Result<f64> {
    let (_, c) = build_qaoa(f);
    Ok(c.run()?.amplitude(0)?.norm_sqr())
}

/// `κ(n)` with `acceptance = κ(n)·gap(f)²`.
pub fn qaoa_kappa(n: usize) -> f64 {
    (-3.0 * n as f64).exp2()
}

/// The two-qubit gadget on basis input `|b⟩` of the original qubit: ancilla
/// in `|+⟩`, apply `Q`, apply `H̃` to the original, project it onto `⟨0|`.
/// Returns the ancilla state, which should be `H|b⟩/√2`.
pub fn teleport_gadget_column(b: bool) -> Result<[Complex64; 2]> {
    // Qubit 0 is the original, qubit 1 the ancilla.
    let mut amps = vec![Complex64::new(0.0, 0.0); 4];
    amps[usize::from(b)] = Complex64::new(1.0, 0.0);
    let mut s = StateVector::from_amplitudes(amps)?;
    s.apply(&Gate::H(1))?;
    s.apply(&Gate::DiagPhase {
        theta: 3.0 * FRAC_PI_2,
        targets: vec![1, 0],
        pattern: vec![false, true],
    })?;
    s.apply(&Gate::DiagPhase {
        theta: FRAC_PI_2,
        targets: vec![1, 0],
        pattern: vec![true, true],
    })?;
    s.apply(&Gate::XRot {
        beta: FRAC_PI_4,
        target: 0,
    })?;
    Ok([s.amplitude(0)?, s.amplitude(2)?])
}

/// Additive (ℓ₁) and multiplicative distance between distributions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistributionError {
    pub additive: f64,
    /// `max |P−Q|/Q` over `Q > 0`; infinite when `P` has mass where `Q` has none.
    pub multiplicative: f64,
    pub unbounded: bool,
}

pub fn distribution_error(p: &[f64], q: &[f64]) -> Result<DistributionError> {
    if p.len() != q.len() {
        return Err(Error::Dimension(format!(
            "distributions of length {} and {}",
            p.len(),
            q.len()
        )));
    }
    for (name, d) in [("P", p), ("Q", q)] {
        let s: f64 = d.iter().sum();
        if (s - 1.0).abs() > 1e-6 {
            return Err(Error::InvalidArgument(format!("{name} sums to {s}, not 1")));
        }
    }
    let mut additive = 0.0;
    let mut mult: f64 = 0.0;
    let mut unbounded = false;
    for (&a, &b) in p.iter().zip(q) {
        additive += (a - b).abs();
        if b > 0.0 {
            mult = mult.max((a - b).abs() / b);
        } else if a > 0.0 {
            unbounded = true;
        }
    }
    Ok(DistributionError {
        additive,
        multiplicative: if unbounded { f64::INFINITY } else { mult },
        unbounded,
    })
}

/// Thresholds on `P_{f̄}(δ^f) = (gap/2^n)²` for the promise-gap problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SgapThresholds {
    pub n: usize,
    pub upper: f64,
    pub lower: f64,
    pub accept: f64,
    pub reject: f64,
}

impl SgapThresholds {
    pub fn new(n: usize) -> Self {
        let upper = (-(n as f64) - 1.0).exp2();
        SgapThresholds {
            n,
            upper,
            lower: upper / 2.0,
            accept: upper * 5.0 / 6.0,
            reject: upper * 2.0 / 3.0,
        }
    }

    pub fn is_ordered(&self) -> bool {
        self.lower < self.reject && self.reject < self.accept && self.accept < self.upper
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Accept,
    /// `indeterminate` marks probabilities strictly between the two
    /// thresholds.
    Reject { indeterminate: bool },
}

impl Verdict {
    pub fn accepted(self) -> bool {
        matches!(self, Verdict::Accept)
    }
}

/// Source of `P_{f̄}(δ)` for the decision procedure.
pub trait ProbabilityProvider {
    fn probability(&mut self, fbar: &Poly3, delta: u64) -> Result<f64>;
}

/// Reads `|⟨δ|C_{f̄}|0̄⟩|²` from the exact simulator.
#[derive(Debug, Default, Clone, Copy)]
pub struct ExactProvider;

impl ProbabilityProvider for ExactProvider {
    fn probability(&mut self, fbar: &Poly3, delta: u64) -> Result<f64> {
        Ok(build_iqp(fbar)
            .run()?
            .amplitude(delta as usize)?
            .norm_sqr())
    }
}

/// Serves a fixed table of probabilities for one class `[f̄]`.
#[derive(Debug, Clone)]
pub struct TableProvider {
    pub fbar: Poly3,
    pub table: Vec<f64>,
}

impl ProbabilityProvider for TableProvider {
    fn probability(&mut self, fbar: &Poly3, delta: u64) -> Result<f64> {
        if *fbar != self.fbar {
            return Err(Error::Oracle("table serves a different class".into()));
        }
        self.table
            .get(delta as usize)
            .copied()
            .ok_or_else(|| Error::Oracle(format!("no entry for outcome {delta}")))
    }
}

/// Decide the promise-gap problem for `f` from one output probability.
pub fn algorithm_a<P: ProbabilityProvider + ?Sized>(f: &Poly3, provider: &mut P) -> Result<Verdict> {
    let th = SgapThresholds::new(f.n());
    let p = provider.probability(&f.strip_linear(), f.linear_mask())?;
    Ok(if p >= th.accept {
        Verdict::Accept
    } else {
        Verdict::Reject {
            indeterminate: p > th.reject,
        }
    })
}

/// Outcome of the adversarial robustness experiment on one class `[f̄]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RobustnessReport {
    pub promise_instances: usize,
    pub correct: usize,
    pub flipped: usize,
    pub l1_used: f64,
}

/// Spend an ℓ₁ budget `epsilon` on the output distribution of `C_{f̄}` so as
/// to misclassify as many promise instances of `[f̄]` as possible, then run
/// the decision procedure on every member of the class.
///
/// Flips are bought cheapest first. Lowering YES outcomes frees mass `D`,
/// raising NO outcomes needs mass `I`; the remainder is balanced against
/// non-promise outcomes, so the ℓ₁ cost of a set of flips is `2·max(D, I)`.
pub fn adversarial_robustness(fbar: &Poly3, epsilon: f64) -> Result<RobustnessReport> {
    let n = fbar.n();
    let fbar = fbar.strip_linear();
    let exact = build_iqp(&fbar).run()?.full_distribution()?;
    let th = SgapThresholds::new(n);
    let gaps: Vec<i64> = (0..1u64 << n)
        .map(|d| fbar.with_linear_mask(d).and_then(|g| g.gap_bruteforce()).map(|v| v.0))
        .collect::<Result<_>>()?;
    let label = |g: i64| crate::gap_stats::sgap_label_from_gap(g, n);

    // (cost, outcome, is_yes)
    let mut candidates: Vec<(f64, usize, bool)> = Vec::new();
    for (d, &g) in gaps.iter().enumerate() {
        match label(g) {
            crate::gap_stats::SgapLabel::Yes => {
                let target = th.accept * (1.0 - 1e-9);
                candidates.push(((exact[d] - target).max(0.0), d, true));
            }
            crate::gap_stats::SgapLabel::No => {
                candidates.push(((th.accept - exact[d]).max(0.0), d, false));
            }
            crate::gap_stats::SgapLabel::NonPromise => {}
        }
    }
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut table = exact.clone();
    let (mut dec, mut inc) = (0.0f64, 0.0f64);
    let mut flipped = 0;
    for &(cost, d, yes) in &candidates {
        let (nd, ni) = if yes { (dec + cost, inc) } else { (dec, inc + cost) };
        if 2.0 * nd.max(ni) > epsilon {
            continue;
        }
        dec = nd;
        inc = ni;
        flipped += 1;
        if yes {
            table[d] -= cost;
        } else {
            table[d] += cost;
        }
    }
    rebalance(&mut table, &exact, &gaps, n, inc - dec);

    let mut provider = TableProvider {
        fbar: fbar.clone(),
        table,
    };
    let mut correct = 0;
    let mut promise = 0;
    for (d, &g) in gaps.iter().enumerate() {
        let truth = label(g);
        if truth == crate::gap_stats::SgapLabel::NonPromise {
            continue;
        }
        promise += 1;
        let f = fbar.with_linear_mask(d as u64)?;
        let v = algorithm_a(&f, &mut provider)?;
        if v.accepted() == (truth == crate::gap_stats::SgapLabel::Yes) {
            correct += 1;
        }
    }
    let l1_used = provider
        .table
        .iter()
        .zip(&exact)
        .map(|(a, b)| (a - b).abs())
        .sum();
    Ok(RobustnessReport {
        promise_instances: promise,
        correct,
        flipped,
        l1_used,
    })
}

/// Restore unit total by moving `excess` mass off (or onto) outcomes that
/// are not promise instances, falling back to the largest outcomes.
fn rebalance(table: &mut [f64], exact: &[f64], gaps: &[i64], n: usize, excess: f64) {
    use crate::gap_stats::{sgap_label_from_gap, SgapLabel};
    let mut order: Vec<usize> = (0..table.len())
        .filter(|&d| sgap_label_from_gap(gaps[d], n) == SgapLabel::NonPromise)
        .collect();
    let mut rest: Vec<usize> = (0..table.len())
        .filter(|&d| sgap_label_from_gap(gaps[d], n) != SgapLabel::NonPromise)
        .collect();
    rest.sort_by(|&a, &b| exact[b].total_cmp(&exact[a]));
    order.extend(rest);
    let mut left = excess;
    if left > 0.0 {
        // Take mass away, never below zero.
        for &d in &order {
            let take = left.min(table[d]);
            table[d] -= take;
            left -= take;
            if left <= 0.0 {
                break;
            }
        }
    } else if left < 0.0 {
        if let Some(&d) = order.first() {
            table[d] -= left;
        }
    }
}
