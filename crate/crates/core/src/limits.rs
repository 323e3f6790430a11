//! Size caps for every exponential-cost routine.
//!
//! Each routine refuses inputs above its cap instead of running for hours.
//! Caps are process-wide: they start from [`Limits::default`], environment
//! variables (`QCS_CAP_BRUTE`, `QCS_CAP_EVAL`, `QCS_CAP_QUBITS`,
//! `QCS_CAP_DIST_QUBITS`, `QCS_CAP_RYSER`, `QCS_CAP_NAIVE`) override them on
//! first use, and [`Limits::install`] replaces them explicitly. Requests above
//! the hard ceilings are clamped.

use std::sync::{OnceLock, RwLock};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Variables for a full `2^n` truth-table scan.
    pub brute_force_vars: usize,
    /// Variables for a dense multilinear evaluation table.
    pub eval_vars: usize,
    /// Qubits for state-vector simulation.
    pub statevector_qubits: usize,
    /// Qubits for materialising a full probability table.
    pub distribution_qubits: usize,
    /// Matrix dimension for Ryser's formula.
    pub ryser_dim: usize,
    /// Matrix dimension for the `d!` expansion.
    pub naive_dim: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            brute_force_vars: 28,
            eval_vars: 26,
            statevector_qubits: 26,
            distribution_qubits: 24,
            ryser_dim: 30,
            naive_dim: 10,
        }
    }
}

impl Limits {
    pub const HARD: Limits = Limits {
        brute_force_vars: 34,
        eval_vars: 30,
        statevector_qubits: 30,
        distribution_qubits: 28,
        ryser_dim: 40,
        naive_dim: 12,
    };

    fn from_env() -> Self {
        let mut l = Limits::default();
        let read = |key: &str, slot: &mut usize| {
            if let Some(v) = std::env::var(key).ok().and_then(|s| s.parse().ok()) {
                *slot = v;
            }
        };
        read("QCS_CAP_BRUTE", &mut l.brute_force_vars);
        read("QCS_CAP_EVAL", &mut l.eval_vars);
        read("QCS_CAP_QUBITS", &mut l.statevector_qubits);
        read("QCS_CAP_DIST_QUBITS", &mut l.distribution_qubits);
        read("QCS_CAP_RYSER", &mut l.ryser_dim);
        read("QCS_CAP_NAIVE", &mut l.naive_dim);
        l.clamped()
    }

    /// Clamp every cap to the hard ceiling.
    pub fn clamped(self) -> Self {
        let h = Self::HARD;
        Limits {
            brute_force_vars: self.brute_force_vars.min(h.brute_force_vars),
            eval_vars: self.eval_vars.min(h.eval_vars),
            statevector_qubits: self.statevector_qubits.min(h.statevector_qubits),
            distribution_qubits: self.distribution_qubits.min(h.distribution_qubits),
            ryser_dim: self.ryser_dim.min(h.ryser_dim),
            naive_dim: self.naive_dim.min(h.naive_dim),
        }
    }

    fn cell() -> &'static RwLock<Limits> {
        static CELL: OnceLock<RwLock<Limits>> = OnceLock::new();
        CELL.get_or_init(|| RwLock::new(Limits::from_env()))
    }

    /// The caps currently in force.
    pub fn current() -> Limits {
        *Self::cell().read().expect("limits lock poisoned")
    }

    /// Replace the process-wide caps (clamped to [`Limits::HARD`]).
    pub fn install(limits: Limits) {
        *Self::cell().write().expect("limits lock poisoned") = limits.clamped();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clamping_respects_hard_ceiling() {
        let l = Limits {
            brute_force_vars: 100,
            ..Limits::default()
        }
        .clamped();
        assert_eq!(l.brute_force_vars, Limits::HARD.brute_force_vars);
        assert_eq!(l.ryser_dim, 30);
    }
}
