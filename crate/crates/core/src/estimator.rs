//! Qubit and photon counts implied by conjectured exponential lower bounds.
//!
//! Each model pairs a circuit size `q` with an element count `g(q)` and a
//! lower bound `2^{b(q)}` on classical simulation cost. The calculator finds
//! the smallest admissible `q` whose bound reaches a hardware budget.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Operations per second of the reference machine.
pub const DEFAULT_FLOPS: f64 = 1e18;
/// One century of 365-day years, in seconds.
pub const CENTURY_SECONDS: f64 = 100.0 * 365.0 * 24.0 * 3600.0;
pub const DEFAULT_BUDGET: u64 = 500;
const SEARCH_LIMIT: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    IqpMult,
    QaoaMult,
    BosonMult,
    IqpAdd,
    QaoaAdd,
}

impl Model {
    pub const ALL: [Model; 5] = [Model::IqpMult, Model::QaoaMult, Model::BosonMult, Model::IqpAdd, Model::QaoaAdd];

    pub fn name(self) -> &'static str {
        match self {
            Model::IqpMult => "iqp-mult",
            Model::QaoaMult => "qaoa-mult",
            Model::BosonMult => "boson-mult",
            Model::IqpAdd => "iqp-add",
            Model::QaoaAdd => "qaoa-add",
        }
    }

    /// Conjecture constant used by default.
    pub fn default_constant(self) -> f64 {
        match self {
            Model::BosonMult => 0.999,
            _ => 0.5,
        }
    }

    /// QAOA instances use `2n` qubits.
    pub fn even_only(self) -> bool {
        matches!(self, Model::QaoaMult | Model::QaoaAdd)
    }

    fn step(self) -> u64 {
        if self.even_only() {
            2
        } else {
            1
        }
    }

    pub fn element_name(self) -> &'static str {
        match self {
            Model::IqpMult | Model::IqpAdd => "gates",
            Model::QaoaMult | Model::QaoaAdd => "constraints",
            Model::BosonMult => "optical elements",
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            Model::BosonMult => "photons",
            _ => "qubits",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace('_', "-");
        Model::ALL
            .into_iter()
            .find(|m| m.name() == key || m.name().strip_suffix("-mult") == Some(key.as_str()))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown model {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Criterion {
    /// Bound exceeds `flops · horizon`.
    Horizon,
    /// Bound divided by element count exceeds `flops · horizon / budget`.
    PerElement,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateParams {
    pub model: Model,
    pub constant: f64,
    pub flops: f64,
    pub horizon_seconds: f64,
    pub criterion: Criterion,
    pub budget: u64,
}

impl EstimateParams {
    pub fn new(model: Model) -> Self {
        EstimateParams {
            model,
            constant: model.default_constant(),
            flops: DEFAULT_FLOPS,
            horizon_seconds: CENTURY_SECONDS,
            criterion: Criterion::Horizon,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn per_element(mut self) -> Self {
        self.criterion = Criterion::PerElement;
        self
    }

    pub fn with_constant(mut self, c: f64) -> Self {
        self.constant = c;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.constant > 0.0 && self.constant <= 1.0) {
            return Err(Error::InvalidArgument(format!("constant {} outside (0, 1]", self.constant)));
        }
        if !(self.flops > 0.0 && self.horizon_seconds > 0.0) {
            return Err(Error::InvalidArgument("flops and horizon must be positive".into()));
        }
        if self.criterion == Criterion::PerElement && self.budget == 0 {
            return Err(Error::InvalidArgument("element budget must be positive".into()));
        }
        Ok(())
    }

    /// `log₂` of the operation budget the bound has to reach.
    pub fn log2_target(&self) -> f64 {
        let base = self.flops.log2() + self.horizon_seconds.log2();
        match self.criterion {
            Criterion::Horizon => base,
            Criterion::PerElement => base - (self.budget as f64).log2(),
        }
    }

    /// `log₂` of the quantity compared with the target at size `q`.
    pub fn log2_score(&self, q: u64) -> Result<f64> {
        let b = log2_bound(self.model, self.constant, q)?;
        Ok(match self.criterion {
            Criterion::Horizon => b,
            Criterion::PerElement => b - (gate_count(self.model, q)? as f64).log2(),
        })
    }
}

fn check_parity(model: Model, q: u64) -> Result<()> {
    if q == 0 {
        return Err(Error::InvalidArgument("size must be at least 1".into()));
    }
    if model.even_only() && q % 2 == 1 {
        return Err(Error::InvalidArgument(format!("{model} needs an even qubit count, got {q}")));
    }
    Ok(())
}

/// `g₁(q) = (q³+5q)/6`, `g₂(2n) = (n³+20n)/3`, `g₃(q) = 2q²+q`.
pub fn gate_count(model: Model, q: u64) -> Result<u128> {
    check_parity(model, q)?;
    let q = q as u128;
    Ok(match model {
        Model::IqpMult | Model::IqpAdd => (q * q * q + 5 * q) / 6,
        Model::QaoaMult | Model::QaoaAdd => {
            let n = q / 2;
            (n * n * n + 20 * n) / 3
        }
        Model::BosonMult => 2 * q * q + q,
    })
}

/// `c·q − 1`, or `c·q/2 − 1` for QAOA.
pub fn log2_bound(model: Model, constant: f64, q: u64) -> Result<f64> {
    check_parity(model, q)?;
    let q = q as f64;
    Ok(if model.even_only() {
        constant * q / 2.0 - 1.0
    } else {
        constant * q - 1.0
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub model: Model,
    pub constant: f64,
    pub criterion: Criterion,
    pub q: u64,
    pub elements: u128,
    pub log2_bound: f64,
    pub log2_score: f64,
    pub log2_target: f64,
}

/// Smallest admissible `q` whose score reaches the target.
pub fn estimate(params: &EstimateParams) -> Result<Estimate> {
    params.validate()?;
    let target = params.log2_target();
    let step = params.model.step();
    let mut q = step;
    while params.log2_score(q)? < target {
        q += step;
        if q > SEARCH_LIMIT {
            return Err(Error::InvalidArgument("no size within search range reaches the target".into()));
        }
    }
    Ok(Estimate {
        model: params.model,
        constant: params.constant,
        criterion: params.criterion,
        q,
        elements: gate_count(params.model, q)?,
        log2_bound: log2_bound(params.model, params.constant, q)?,
        log2_score: params.log2_score(q)?,
        log2_target: target,
    })
}

pub fn qubits_for_horizon(params: &EstimateParams) -> Result<Estimate> {
    estimate(&EstimateParams {
        criterion: Criterion::Horizon,
        ..*params
    })
}

pub fn qubits_for_gate_linear(params: &EstimateParams) -> Result<Estimate> {
    estimate(&EstimateParams {
        criterion: Criterion::PerElement,
        ..*params
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Weakening {
    /// Exponent constant divided by `d`.
    DivideConstant,
    /// Bound divided by `d`, i.e. `log₂ d` fewer operations.
    DividePrefactor,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeakeningDelta {
    pub before: Estimate,
    pub after: Estimate,
    pub extra: i64,
}

/// Re-run the estimate under a conjecture weakened by factor `d ≥ 1`.
pub fn conjecture_weakening(params: &EstimateParams, d: f64, mode: Weakening) -> Result<WeakeningDelta> {
    if !(d >= 1.0) {
        return Err(Error::InvalidArgument(format!("weakening factor {d} must be at least 1")));
    }
    let before = estimate(params)?;
    let weaker = match mode {
        Weakening::DivideConstant => EstimateParams {
            constant: params.constant / d,
            ..*params
        },
        // Dividing the bound by d is the same as multiplying the budget by d.
        Weakening::DividePrefactor => EstimateParams {
            flops: params.flops * d,
            ..*params
        },
    };
    let after = estimate(&weaker)?;
    Ok(WeakeningDelta {
        before,
        after,
        extra: after.q as i64 - before.q as i64,
    })
}

/// Round to `sig` significant figures.
pub fn round_sig(x: u128, sig: u32) -> u128 {
    let digits = x.checked_ilog10().map_or(1, |d| d + 1);
    if digits <= sig {
        return x;
    }
    let p = 10u128.pow(digits - sig);
    (x + p / 2) / p * p
}

/// Decimal with thousands separators.
pub fn with_commas(x: u128) -> String {
    let s = x.to_string();
    let mut out = String::new();
    for (i, ch) in s.chars().enumerate() {
        if i > 0 && (s.len() - i) % 3 == 0 {
            out.push(',');
        }
        out.push(ch);
    }
    out
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HeadlineRow {
    pub model: Model,
    pub constant: f64,
    pub horizon: Estimate,
    pub per_element: Estimate,
    pub elements_rounded: u128,
}

/// Both criteria for the three multiplicative models plus the two additive ones.
pub fn headline_table(flops: f64, horizon_seconds: f64, budget: u64, constant: Option<f64>) -> Result<Vec<HeadlineRow>> {
    Model::ALL
        .into_iter()
        .map(|model| {
            let mut p = EstimateParams::new(model);
            p.flops = flops;
            p.horizon_seconds = horizon_seconds;
            p.budget = budget;
            if let Some(c) = constant {
                p.constant = c;
            }
            let horizon = qubits_for_horizon(&p)?;
            let per_element = qubits_for_gate_linear(&p)?;
            Ok(HeadlineRow {
                model,
                constant: p.constant,
                elements_rounded: round_sig(horizon.elements, 3),
                horizon,
                per_element,
            })
        })
        .collect()
}

pub fn format_table(rows: &[HeadlineRow]) -> String {
    let mut s = format!(
        "{:<11} {:>8} {:>8} {:>14} {:>14} {:>9}\n",
        "model", "constant", "century", "elements", "(3 sig. fig.)", "per-500"
    );
    for r in rows {
        s += &format!(
            "{:<11} {:>8} {:>8} {:>14} {:>14} {:>9}\n",
            r.model.name(),
            r.constant,
            r.horizon.q,
            with_commas(r.horizon.elements),
            with_commas(r.elements_rounded),
            r.per_element.q
        );
    }
    s
}
