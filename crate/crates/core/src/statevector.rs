//! Dense state-vector simulation for the small gate set used by the IQP and
//! QAOA encodings.
//!
//! Basis states are little-endian: qubit `k` is bit `k` of the index.

use num_complex::Complex64;
use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_cap, Error, Result};
use crate::limits::Limits;

/// States at least this large are updated in parallel chunks.
const PAR_THRESHOLD: usize = 1 << 14;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GateRecord", into = "GateRecord")]
pub enum Gate {
    H(usize),
    Z(usize),
    CZ(usize, usize),
    CCZ(usize, usize, usize),
    /// Multiplies by `e^{−iθ}` the basis states whose target bits equal
    /// `pattern` (one entry per target, at most three).
    DiagPhase {
        theta: f64,
        targets: Vec<usize>,
        pattern: Vec<bool>,
    },
    /// `exp(−iβX)` on one qubit.
    XRot { beta: f64, target: usize },
}

impl Gate {
    pub fn targets(&self) -> Vec<usize> {
        match self {
            Gate::H(a) | Gate::Z(a) => vec![*a],
            Gate::CZ(a, b) => vec![*a, *b],
            Gate::CCZ(a, b, c) => vec![*a, *b, *c],
            Gate::DiagPhase { targets, .. } => targets.clone(),
            Gate::XRot { target, .. } => vec![*target],
        }
    }

    pub fn is_diagonal(&self) -> bool {
        !matches!(self, Gate::H(_) | Gate::XRot { .. })
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Gate::H(_) => "H",
            Gate::Z(_) => "Z",
            Gate::CZ(..) => "CZ",
            Gate::CCZ(..) => "CCZ",
            Gate::DiagPhase { .. } => "DiagPhase",
            Gate::XRot { .. } => "XRot",
        }
    }

    /// Check arity, distinctness and range against `q` qubits.
    pub fn validate(&self, q: usize) -> Result<()> {
        let t = self.targets();
        if let Gate::DiagPhase { pattern, .. } = self {
            if t.is_empty() || t.len() > 3 || pattern.len() != t.len() {
                return Err(Error::InvalidArgument(format!(
                    "DiagPhase needs 1..=3 targets and a matching pattern, got {} and {}",
                    t.len(),
                    pattern.len()
                )));
            }
        }
        for (i, &a) in t.iter().enumerate() {
            if a >= q {
                return Err(Error::IndexOutOfRange { index: a, n: q });
            }
            if t[..i].contains(&a) {
                return Err(Error::InvalidArgument(format!(
                    "{} repeats qubit {a}",
                    self.kind_name()
                )));
            }
        }
        Ok(())
    }

    /// Diagonal entry at basis index `x` (diagonal gates only).
    fn phase_at(&self, x: usize) -> Option<Complex64> {
        let bit = |k: usize| (x >> k) & 1 == 1;
        let flip = |b: bool| {
            if b {
                Complex64::new(-1.0, 0.0)
            } else {
                Complex64::new(1.0, 0.0)
            }
        };
        match self {
            Gate::Z(a) => Some(flip(bit(*a))),
            Gate::CZ(a, b) => Some(flip(bit(*a) && bit(*b))),
            Gate::CCZ(a, b, c) => Some(flip(bit(*a) && bit(*b) && bit(*c))),
            Gate::DiagPhase {
                theta,
                targets,
                pattern,
            } => {
                let hit = targets.iter().zip(pattern).all(|(&k, &p)| bit(k) == p);
                Some(if hit {
                    Complex64::from_polar(1.0, -theta)
                } else {
                    Complex64::new(1.0, 0.0)
                })
            }
            _ => None,
        }
    }
}

/// Wire form: `{"kind": "...", "targets": [...], "params": {...}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct GateRecord {
    kind: String,
    targets: Vec<usize>,
    #[serde(default, skip_serializing_if = "GateParams::is_empty")]
    params: GateParams,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
struct GateParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pattern: Option<Vec<u8>>,
}

impl GateParams {
    fn is_empty(&self) -> bool {
        self.theta.is_none() && self.beta.is_none() && self.pattern.is_none()
    }
}

impl TryFrom<GateRecord> for Gate {
    type Error = Error;

    fn try_from(r: GateRecord) -> Result<Self> {
        let want = |k: usize| -> Result<()> {
            if r.targets.len() == k {
                Ok(())
            } else {
                Err(Error::InvalidArgument(format!(
                    "{} takes {k} targets, got {}",
                    r.kind,
                    r.targets.len()
                )))
            }
        };
        let t = &r.targets;
        match r.kind.to_ascii_uppercase().as_str() {
            "H" => want(1).map(|_| Gate::H(t[0])),
            "Z" => want(1).map(|_| Gate::Z(t[0])),
            "CZ" => want(2).map(|_| Gate::CZ(t[0], t[1])),
            "CCZ" => want(3).map(|_| Gate::CCZ(t[0], t[1], t[2])),
            "XROT" => {
                want(1)?;
                let beta = r.params.beta.ok_or_else(|| {
                    Error::InvalidArgument("XRot needs params.beta".into())
                })?;
                Ok(Gate::XRot { beta, target: t[0] })
            }
            "DIAGPHASE" => {
                let theta = r.params.theta.ok_or_else(|| {
                    Error::InvalidArgument("DiagPhase needs params.theta".into())
                })?;
                let pattern = r
                    .params
                    .pattern
                    .clone()
                    .unwrap_or_else(|| vec![1; t.len()])
                    .into_iter()
                    .map(|b| b != 0)
                    .collect();
                Ok(Gate::DiagPhase {
                    theta,
                    targets: t.clone(),
                    pattern,
                })
            }
            other => Err(Error::InvalidArgument(format!("unknown gate kind '{other}'"))),
        }
    }
}

impl From<Gate> for GateRecord {
    fn from(g: Gate) -> Self {
        let kind = g.kind_name().to_string();
        let targets = g.targets();
        let params = match &g {
            Gate::DiagPhase { theta, pattern, .. } => GateParams {
                theta: Some(*theta),
                pattern: Some(pattern.iter().map(|&b| u8::from(b)).collect()),
                ..Default::default()
            },
            Gate::XRot { beta, .. } => GateParams {
                beta: Some(*beta),
                ..Default::default()
            },
            _ => GateParams::default(),
        };
        GateRecord {
            kind,
            targets,
            params,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Circuit {
    pub qubits: usize,
    pub gates: Vec<Gate>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CircuitFile {
    Full { qubits: usize, gates: Vec<Gate> },
    Bare(Vec<Gate>),
}

impl<'de> Deserialize<'de> for Circuit {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(match CircuitFile::deserialize(d)? {
            CircuitFile::Full { qubits, gates } => Circuit { qubits, gates },
            CircuitFile::Bare(gates) => {
                let qubits = gates
                    .iter()
                    .flat_map(|g| g.targets())
                    .max()
                    .map_or(0, |m| m + 1);
                Circuit { qubits, gates }
            }
        })
    }
}

impl Circuit {
    pub fn new(qubits: usize) -> Self {
        Circuit {
            qubits,
            gates: Vec::new(),
        }
    }

    pub fn push(&mut self, g: Gate) -> &mut Self {
        self.gates.push(g);
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.gates.iter().try_for_each(|g| g.validate(self.qubits))
    }

    /// Simulate from `|0…0⟩`.
    pub fn run(&self) -> Result<StateVector> {
        self.validate()?;
        let mut s = StateVector::zero_state(self.qubits)?;
        for g in &self.gates {
            s.apply_unchecked(g);
        }
        Ok(s)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let c: Circuit = serde_json::from_str(s)?;
        c.validate()?;
        Ok(c)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("circuit serialises")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    q: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩` on `q` qubits.
    pub fn zero_state(q: usize) -> Result<Self> {
        check_cap("state-vector qubits", q, Limits::current().statevector_qubits)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << q];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(StateVector { q, amps })
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if !len.is_power_of_two() {
            return Err(Error::Dimension(format!(
                "{len} amplitudes is not a power of two"
            )));
        }
        let q = len.trailing_zeros() as usize;
        check_cap("state-vector qubits", q, Limits::current().statevector_qubits)?;
        Ok(StateVector { q, amps })
    }

    pub fn qubits(&self) -> usize {
        self.q
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Result<Complex64> {
        self.amps.get(index).copied().ok_or(Error::IndexOutOfRange {
            index,
            n: self.amps.len(),
        })
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn apply(&mut self, g: &Gate) -> Result<()> {
        g.validate(self.q)?;
        self.apply_unchecked(g);
        Ok(())
    }

    fn apply_unchecked(&mut self, g: &Gate) {
        match g {
            Gate::H(k) => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                self.butterfly(*k, |a, b| ((a + b) * s, (a - b) * s));
            }
            Gate::XRot { beta, target } => {
                let c = Complex64::new(beta.cos(), 0.0);
                let ms = Complex64::new(0.0, -beta.sin());
                self.butterfly(*target, |a, b| (c * a + ms * b, ms * a + c * b));
            }
            diag => {
                let apply = |(x, a): (usize, &mut Complex64)| {
                    if let Some(p) = diag.phase_at(x) {
                        *a *= p;
                    }
                };
                if self.amps.len() >= PAR_THRESHOLD {
                    self.amps.par_iter_mut().enumerate().for_each(apply);
                } else {
                    self.amps.iter_mut().enumerate().for_each(apply);
                }
            }
        }
    }

    /// Apply a 2×2 map to every amplitude pair differing in bit `k`.
    fn butterfly<F>(&mut self, k: usize, op: F)
    where
        F: Fn(Complex64, Complex64) -> (Complex64, Complex64) + Sync,
    {
        let stride = 1usize << k;
        let block = |chunk: &mut [Complex64]| {
            let (lo, hi) = chunk.split_at_mut(stride);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = op(*a, *b);
                *a = x;
                *b = y;
            }
        };
        if self.amps.len() >= PAR_THRESHOLD {
            self.amps.par_chunks_mut(2 * stride).for_each(block);
        } else {
            self.amps.chunks_mut(2 * stride).for_each(block);
        }
    }

    /// Probability of every basis state.
    pub fn full_distribution(&self) -> Result<Vec<f64>> {
        check_cap("distribution qubits", self.q, Limits::current().distribution_qubits)?;
        Ok(self.amps.iter().map(|a| a.norm_sqr()).collect())
    }

    /// One basis index drawn from the Born distribution.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<usize> {
        Ok(self.sample_many(1, rng)?[0])
    }

    pub fn sample_many<R: Rng + ?Sized>(&self, k: usize, rng: &mut R) -> Result<Vec<usize>> {
        let probs = self.full_distribution()?;
        let dist = WeightedIndex::new(&probs)
            .map_err(|e| Error::InvalidArgument(format!("cannot sample: {e}")))?;
        Ok((0..k).map(|_| dist.sample(rng)).collect())
    }
}
