//! Cycle-cover reduction from degree-3 polynomials to integer permanents.
//!
//! Each term becomes a 4-node term gadget, each variable with `t ≥ 1`
//! occurrences a `(t+1)`-node variable gadget, and every (term slot, variable
//! occurrence) pair of dashed placeholder edges is replaced by a 4-node XOR
//! gadget. The permanent of the resulting adjacency matrix is
//! `4^{3m}·Σ_z (−1)^{f(z)}` summed over the variables that occur in `f`.
//!
//! Terms with fewer than three variables are padded by repeating their last
//! variable. Each repeated occurrence gets its own dashed edge in the variable
//! gadget, so a variable occurring `t` times across all padded slots has
//! exactly `t` dashed edges.
//!
//! Node order: term gadgets, then variable gadgets in variable order, then XOR
//! internals in (term, slot) order.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::linops::{permanent_ryser_int, IntMatrix};
use crate::poly3::Poly3;

/// Cap on DP states when the graph is too large for Ryser.
pub const SPARSE_STATE_CAP: usize = 1 << 22;

/// Term gadget edges `(from, to, weight)` on local nodes 0..4, solid only.
const TERM_SOLID: [(usize, usize, i64); 8] = [
    (0, 1, 1),
    (1, 0, 1),
    (1, 3, 1),
    (1, 1, -1),
    (1, 2, 1),
    (2, 1, 1),
    (2, 3, 1),
    (3, 2, 1),
];
/// The extra weight-2 edge of the term gadget.
const TERM_HEAVY: (usize, usize, i64) = (3, 1, 2);
/// Dashed edges `(v, v′)` of the term gadget, one per slot.
const TERM_DASHED: [(usize, usize); 3] = [(2, 0), (0, 3), (3, 2)];

/// XOR gadget internal weights over local nodes `(a, b, c, d)`.
pub const XOR_MATRIX: [[i64; 4]; 4] = [[0, 1, -1, -1], [1, -1, 1, 1], [0, 1, 1, 2], [0, 1, 3, 0]];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct XorWiring {
    pub term: usize,
    pub slot: usize,
    pub variable: usize,
    /// Variable-gadget dashed edge `u → u′`.
    pub u: usize,
    pub u_prime: usize,
    /// Term-gadget dashed edge `v → v′`.
    pub v: usize,
    pub v_prime: usize,
    /// First of four internal nodes `a, b, c, d`.
    pub internal: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableGadget {
    pub variable: usize,
    pub occurrences: usize,
    /// First node index; the gadget occupies `occurrences + 1` nodes.
    pub start: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GadgetGraph {
    pub nodes: usize,
    pub terms: usize,
    /// `[x, y, z]` of each padded term.
    pub padded_terms: Vec<[usize; 3]>,
    pub term_starts: Vec<usize>,
    pub variables: Vec<VariableGadget>,
    pub xors: Vec<XorWiring>,
    pub adjacency: IntMatrix,
}

impl GadgetGraph {
    /// Variables of `f` that occur in at least one term.
    pub fn used_variables(&self) -> usize {
        self.variables.len()
    }

    /// Copy with the four external edges of XOR gadget `k` removed.
    pub fn without_xor_edges(&self, k: usize) -> IntMatrix {
        let x = &self.xors[k];
        let (a, d) = (x.internal, x.internal + 3);
        let mut m = self.adjacency.clone();
        m[(x.u, a)] = 0;
        m[(a, x.v_prime)] = 0;
        m[(x.v, d)] = 0;
        m[(d, x.u_prime)] = 0;
        m
    }
}

fn pad(term: &[usize]) -> [usize; 3] {
    match *term {
        [x] => [x, x, x],
        [x, y] => [x, y, y],
        [x, y, z] => [x, y, z],
        _ => unreachable!("terms have one to three variables"),
    }
}

/// Build the gadget graph of `f`.
pub fn build_graph(f: &Poly3) -> Result<GadgetGraph> {
    let padded: Vec<[usize; 3]> = f.terms().map(|t| pad(&t)).collect();
    let m = padded.len();
    if m == 0 {
        return Err(Error::InvalidArgument("polynomial has no terms".into()));
    }
    let n = f.n();
    // occurrences[v] lists (term, slot) in term-major order.
    let mut occurrences: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (ti, t) in padded.iter().enumerate() {
        for (slot, &v) in t.iter().enumerate() {
            occurrences[v].push((ti, slot));
        }
    }
    let term_starts: Vec<usize> = (0..m).map(|i| 4 * i).collect();
    let mut next = 4 * m;
    let mut variables = Vec::new();
    let mut var_start = vec![usize::MAX; n];
    for (v, occ) in occurrences.iter().enumerate() {
        if occ.is_empty() {
            continue;
        }
        var_start[v] = next;
        variables.push(VariableGadget {
            variable: v,
            occurrences: occ.len(),
            start: next,
        });
        next += occ.len() + 1;
    }
    let xor_base = next;
    let nodes = xor_base + 12 * m;
    let mut adj = IntMatrix::zeros(nodes);

    for &s in &term_starts {
        for (i, j, w) in TERM_SOLID.into_iter().chain([TERM_HEAVY]) {
            adj[(s + i, s + j)] += w;
        }
    }
    for g in &variables {
        let (s, t) = (g.start, g.occurrences);
        adj[(s, s + t)] += 1;
        adj[(s + t, s)] += 1;
        for k in 1..t {
            adj[(s + k, s + k)] += 1;
        }
    }

    // Occurrence counter per variable, to pick the next dashed edge.
    let mut used = vec![0usize; n];
    let mut xors = Vec::with_capacity(3 * m);
    for (ti, t) in padded.iter().enumerate() {
        for (slot, &var) in t.iter().enumerate() {
            let k = used[var];
            used[var] += 1;
            let (u, u_prime) = (var_start[var] + k, var_start[var] + k + 1);
            let (dv, dv2) = TERM_DASHED[slot];
            let (v, v_prime) = (term_starts[ti] + dv, term_starts[ti] + dv2);
            let internal = xor_base + 4 * xors.len();
            for (i, row) in XOR_MATRIX.iter().enumerate() {
                for (j, &w) in row.iter().enumerate() {
                    adj[(internal + i, internal + j)] += w;
                }
            }
            let (a, d) = (internal, internal + 3);
            adj[(u, a)] += 1;
            adj[(a, v_prime)] += 1;
            adj[(v, d)] += 1;
            adj[(d, u_prime)] += 1;
            xors.push(XorWiring {
                term: ti,
                slot,
                variable: var,
                u,
                u_prime,
                v,
                v_prime,
                internal,
            });
        }
    }

    Ok(GadgetGraph {
        nodes,
        terms: m,
        padded_terms: padded,
        term_starts,
        variables,
        xors,
        adjacency: adj,
    })
}

/// Breadth-first node order on the underlying undirected graph. Used only to
/// keep the sparse permanent's frontier small.
fn locality_order(a: &IntMatrix) -> Vec<usize> {
    let d = a.dim();
    let mut seen = vec![false; d];
    let mut order = Vec::with_capacity(d);
    for root in 0..d {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(i) = queue.pop_front() {
            order.push(i);
            for j in 0..d {
                if !seen[j] && (a[(i, j)] != 0 || a[(j, i)] != 0) {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
    }
    order
}

/// Exact permanent by row DP with dead-state pruning: once every row that can
/// reach column `j` has been processed, states without `j` are dropped.
pub fn permanent_frontier(a: &IntMatrix, max_states: usize) -> Result<BigInt> {
    use num_traits::{One, Zero};
    use std::collections::HashMap;

    let order = locality_order(a);
    let m = a.permuted(&order, &order);
    let d = m.dim();
    if d > 128 {
        return Err(Error::CapExceeded {
            what: "frontier permanent dimension",
            requested: d,
            cap: 128,
        });
    }
    let mut last_row = vec![None; d];
    for i in 0..d {
        for (j, slot) in last_row.iter_mut().enumerate() {
            if m[(i, j)] != 0 {
                *slot = Some(i);
            }
        }
    }
    if last_row.iter().any(Option::is_none) {
        return Ok(BigInt::zero());
    }
    let mut states: HashMap<u128, BigInt> = HashMap::from([(0u128, BigInt::one())]);
    let mut required: u128 = 0;
    for i in 0..d {
        for (j, lr) in last_row.iter().enumerate() {
            if *lr == Some(i) {
                required |= 1u128 << j;
            }
        }
        let entries: Vec<(usize, i64)> = (0..d).filter(|&j| m[(i, j)] != 0).map(|j| (j, m[(i, j)])).collect();
        let mut next: HashMap<u128, BigInt> = HashMap::with_capacity(states.len() * 2);
        for (mask, val) in &states {
            for &(j, w) in &entries {
                let bit = 1u128 << j;
                let nm = mask | bit;
                if mask & bit == 0 && nm & required == required {
                    *next.entry(nm).or_insert_with(BigInt::zero) += val * w;
                }
            }
        }
        next.retain(|_, v| !v.is_zero());
        if next.len() > max_states {
            return Err(Error::CapExceeded {
                what: "frontier permanent states",
                requested: next.len(),
                cap: max_states,
            });
        }
        if next.is_empty() {
            return Ok(BigInt::zero());
        }
        states = next;
    }
    Ok(states.into_values().sum())
}

/// Permanent of a gadget matrix: Ryser within its cap, the frontier DP above.
pub fn gadget_permanent(a: &IntMatrix) -> Result<(BigInt, PermanentMethod)> {
    if a.dim() <= Limits::current().ryser_dim {
        Ok((permanent_ryser_int(a)?, PermanentMethod::Ryser))
    } else {
        Ok((permanent_frontier(a, SPARSE_STATE_CAP)?, PermanentMethod::Frontier))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PermanentMethod {
    Ryser,
    Frontier,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionCheck {
    pub nodes: usize,
    pub terms: usize,
    pub perm: BigInt,
    pub expected: BigInt,
    pub gap: i64,
    pub unused_variables: usize,
    pub method: PermanentMethod,
    pub ok: bool,
}

/// Compare `Per(G_f)` against `4^{3m}·gap(f)`, dividing out the factor `2`
/// contributed to the gap by each variable absent from every term.
pub fn verify_reduction(f: &Poly3) -> Result<ReductionCheck> {
    let g = build_graph(f)?;
    let gap = f.gap_bruteforce()?.0;
    let unused = f.n() - g.used_variables();
    let expected = BigInt::from(4).pow(3 * g.terms as u32) * BigInt::from(gap) / BigInt::from(2).pow(unused as u32);
    let (perm, method) = gadget_permanent(&g.adjacency)?;
    Ok(ReductionCheck {
        nodes: g.nodes,
        terms: g.terms,
        ok: perm == expected,
        perm,
        expected,
        gap,
        unused_variables: unused,
        method,
    })
}
