//! Circuit representation: Clifford gates plus tagged Pauli rotations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::Axis;

/// Clifford gate over physical qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Gate {
    H(usize),
    S(usize),
    Sdg(usize),
    X(usize),
    Y(usize),
    Z(usize),
    Cnot(usize, usize),
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q) | Gate::S(q) | Gate::Sdg(q) | Gate::X(q) | Gate::Y(q) | Gate::Z(q) => vec![q],
            Gate::Cnot(c, t) => vec![c, t],
        }
    }

    pub fn inverse(&self) -> Gate {
        match *self {
            Gate::S(q) => Gate::Sdg(q),
            Gate::Sdg(q) => Gate::S(q),
            g => g,
        }
    }

    pub fn is_cnot(&self) -> bool {
        matches!(self, Gate::Cnot(..))
    }

    /// Relabel qubit indices through `map`.
    pub fn relabeled(&self, map: &[usize]) -> Gate {
        match *self {
            Gate::H(q) => Gate::H(map[q]),
            Gate::S(q) => Gate::S(map[q]),
            Gate::Sdg(q) => Gate::Sdg(map[q]),
            Gate::X(q) => Gate::X(map[q]),
            Gate::Y(q) => Gate::Y(map[q]),
            Gate::Z(q) => Gate::Z(map[q]),
            Gate::Cnot(c, t) => Gate::Cnot(map[c], map[t]),
        }
    }
}

/// Rotation angle: a literal value or a reference to symbolic parameter
/// `theta[index]` scaled by a constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Angle {
    Literal(f64),
    Symbolic { index: usize, scale: f64 },
}

impl Angle {
    pub fn value(&self, thetas: &[f64]) -> Result<f64> {
        match *self {
            Angle::Literal(v) => Ok(v),
            Angle::Symbolic { index, scale } => thetas
                .get(index)
                .map(|t| t * scale)
                .ok_or_else(|| Error::InvalidInput(format!("missing angle binding theta_{index}"))),
        }
    }
}

/// Single-qubit Pauli rotation exp(i * sign * angle * P_q), tagged with the
/// index of the target it implements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rotation {
    pub axis: Axis,
    pub qubit: usize,
    pub angle: Angle,
    pub sign: i8,
    pub implements: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Op {
    Gate(Gate),
    Rotation(Rotation),
}

/// Ordered list of Clifford gates and tagged Pauli rotations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub n: usize,
    pub ops: Vec<Op>,
}

impl Circuit {
    pub fn new(n: usize) -> Self {
        Circuit { n, ops: Vec::new() }
    }

    pub fn push_gate(&mut self, gate: Gate) {
        debug_assert!(gate.qubits().iter().all(|&q| q < self.n));
        self.ops.push(Op::Gate(gate));
    }

    pub fn push_gates(&mut self, gates: &[Gate]) {
        for &g in gates {
            self.push_gate(g);
        }
    }

    pub fn push_rotation(&mut self, rot: Rotation) {
        debug_assert!(rot.qubit < self.n);
        self.ops.push(Op::Rotation(rot));
    }

    pub fn gates(&self) -> impl Iterator<Item = &Gate> {
        self.ops.iter().filter_map(|op| match op {
            Op::Gate(g) => Some(g),
            Op::Rotation(_) => None,
        })
    }

    pub fn is_clifford_only(&self) -> bool {
        self.ops.iter().all(|op| matches!(op, Op::Gate(_)))
    }

    pub fn cnot_count(&self) -> usize {
        self.gates().filter(|g| g.is_cnot()).count()
    }

    /// CNOT count up to and including the last rotation; the remainder is the
    /// final Clifford block.
    pub fn cnot_count_excluding_final_clifford(&self) -> usize {
        let boundary = self.final_clifford_boundary();
        self.ops[..boundary]
            .iter()
            .filter(|op| matches!(op, Op::Gate(g) if g.is_cnot()))
            .count()
    }

    /// Index just past the last rotation (0 when there are none).
    pub fn final_clifford_boundary(&self) -> usize {
        self.ops
            .iter()
            .rposition(|op| matches!(op, Op::Rotation(_)))
            .map_or(0, |i| i + 1)
    }

    /// Circuit depth with every op counted as one layer on its qubits.
    pub fn depth(&self) -> usize {
        let mut level = vec![0usize; self.n];
        let mut depth = 0;
        for op in &self.ops {
            let qubits = match op {
                Op::Gate(g) => g.qubits(),
                Op::Rotation(r) => vec![r.qubit],
            };
            let at = qubits.iter().map(|&q| level[q]).max().unwrap_or(0) + 1;
            for q in qubits {
                level[q] = at;
            }
            depth = depth.max(at);
        }
        depth
    }

    /// Clifford-only inverse: reversed order, each gate inverted.
    pub fn inverse_gates(gates: &[Gate]) -> Vec<Gate> {
        gates.iter().rev().map(Gate::inverse).collect()
    }

    pub fn rotations(&self) -> impl Iterator<Item = &Rotation> {
        self.ops.iter().filter_map(|op| match op {
            Op::Rotation(r) => Some(r),
            Op::Gate(_) => None,
        })
    }
}

/// Uniform random walk over the supported gate set, for tests and bound
/// checks. CNOTs are drawn with the same weight as each 1-qubit gate kind.
pub fn random_clifford_gates(n: usize, len: usize, rng: &mut impl rand::Rng) -> Vec<Gate> {
    let mut gates = Vec::with_capacity(len);
    for _ in 0..len {
        let kind = if n >= 2 { rng.gen_range(0..7) } else { rng.gen_range(0..6) };
        let q = rng.gen_range(0..n);
        gates.push(match kind {
            0 => Gate::H(q),
            1 => Gate::S(q),
            2 => Gate::Sdg(q),
            3 => Gate::X(q),
            4 => Gate::Y(q),
            5 => Gate::Z(q),
            _ => {
                let mut t = rng.gen_range(0..n);
                if t == q {
                    t = (t + 1) % n;
                }
                Gate::Cnot(q, t)
            }
        });
    }
    gates
}

/// Cancel adjacent inverse gate pairs (H-H, S-Sdg, Pauli-Pauli, identical
/// CNOT-CNOT), treating gates on disjoint qubits as commuting. Runs to a
/// fixpoint.
pub fn peephole(circuit: &Circuit) -> Circuit {
    let mut ops = circuit.ops.clone();
    loop {
        let mut cancelled = false;
        let mut i = 0;
        while i < ops.len() {
            let Op::Gate(g) = ops[i] else {
                i += 1;
                continue;
            };
            let qubits = g.qubits();
            // Find the next op touching any of this gate's qubits.
            let mut j = i + 1;
            while j < ops.len() {
                let other_qubits = match &ops[j] {
                    Op::Gate(h) => h.qubits(),
                    Op::Rotation(r) => vec![r.qubit],
                };
                if other_qubits.iter().any(|q| qubits.contains(q)) {
                    break;
                }
                j += 1;
            }
            if j < ops.len() {
                if let Op::Gate(h) = ops[j] {
                    if h == g.inverse() && h.qubits() == qubits {
                        ops.remove(j);
                        ops.remove(i);
                        cancelled = true;
                        continue;
                    }
                }
            }
            i += 1;
        }
        if !cancelled {
            break;
        }
    }
    Circuit { n: circuit.n, ops }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_boundary() {
        let mut c = Circuit::new(2);
        c.push_gate(Gate::H(0));
        c.push_gate(Gate::Cnot(0, 1));
        c.push_rotation(Rotation {
            axis: Axis::Z,
            qubit: 1,
            angle: Angle::Literal(0.3),
            sign: 1,
            implements: 0,
        });
        c.push_gate(Gate::Cnot(0, 1));
        assert_eq!(c.cnot_count(), 2);
        assert_eq!(c.cnot_count_excluding_final_clifford(), 1);
        assert_eq!(c.depth(), 4);
    }

    #[test]
    fn inverse_gates_reverse_and_invert() {
        let gates = vec![Gate::H(0), Gate::S(1), Gate::Cnot(0, 1)];
        assert_eq!(
            Circuit::inverse_gates(&gates),
            vec![Gate::Cnot(0, 1), Gate::Sdg(1), Gate::H(0)]
        );
    }

    #[test]
    fn peephole_cancels_through_disjoint_gates() {
        let mut c = Circuit::new(3);
        c.push_gate(Gate::Cnot(0, 1));
        c.push_gate(Gate::H(2));
        c.push_gate(Gate::Cnot(0, 1));
        c.push_gate(Gate::S(2));
        let out = peephole(&c);
        assert_eq!(out.cnot_count(), 0);
        assert_eq!(out.ops.len(), 2);
    }

    #[test]
    fn peephole_keeps_blocking_gates() {
        let mut c = Circuit::new(2);
        c.push_gate(Gate::Cnot(0, 1));
        c.push_gate(Gate::H(1));
        c.push_gate(Gate::Cnot(0, 1));
        let out = peephole(&c);
        assert_eq!(out.cnot_count(), 2);
    }
}
