//! Independent correctness oracles: dense-matrix simulation at small qubit
//! counts, tableau equivalence, and Pauli-network soundness replay.
//!
//! The dense simulator is deliberately naive so it stays independent of the
//! synthesis path it checks.

use serde::{Deserialize, Serialize};

use crate::cer::Cer;
use crate::circuit::{Circuit, Op};
use crate::error::{Error, Result};
use crate::synth::Target;

pub const DENSE_MAX_QUBITS: usize = 12;
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EquivalenceKind {
    DenseUpToGlobalPhase,
    TableauExact,
    TableauUpToPermutation,
    PauliNetworkSound,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub kind: EquivalenceKind,
    pub pass: bool,
    pub max_deviation: f64,
    /// Failing op position or target index, when one exists.
    pub witness: Option<usize>,
}

pub mod dense {
    use num_complex::Complex64;

    use crate::circuit::{Circuit, Gate, Op};
    use crate::error::{Error, Result};
    use crate::pauli::PauliString;

    use super::DENSE_MAX_QUBITS;

    pub type Matrix = Vec<Complex64>;

    pub fn dim_of(n: usize) -> usize {
        1 << n
    }

    pub fn identity(n: usize) -> Matrix {
        let d = dim_of(n);
        let mut m = vec![Complex64::ZERO; d * d];
        for i in 0..d {
            m[i * d + i] = Complex64::ONE;
        }
        m
    }

    /// Matrix of a signed Pauli string; qubit 0 is the most significant bit.
    pub fn pauli_matrix(p: &PauliString) -> Matrix {
        let n = p.n();
        let d = dim_of(n);
        let mut x_mask = 0usize;
        let mut z_mask = 0usize;
        let mut y_count = 0u32;
        for q in 0..n {
            let bit = 1 << (n - 1 - q);
            if p.x_bit(q) {
                x_mask |= bit;
            }
            if p.z_bit(q) {
                z_mask |= bit;
            }
            if p.x_bit(q) && p.z_bit(q) {
                y_count += 1;
            }
        }
        let base = Complex64::i().powu(u32::from(p.phase()) + y_count);
        let mut m = vec![Complex64::ZERO; d * d];
        for col in 0..d {
            let row = col ^ x_mask;
            let minus = (col & z_mask).count_ones() % 2 == 1;
            m[row * d + col] = if minus { -base } else { base };
        }
        m
    }

    pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
        let d = (a.len() as f64).sqrt() as usize;
        let mut out = vec![Complex64::ZERO; d * d];
        for i in 0..d {
            for k in 0..d {
                let aik = a[i * d + k];
                if aik == Complex64::ZERO {
                    continue;
                }
                for j in 0..d {
                    out[i * d + j] += aik * b[k * d + j];
                }
            }
        }
        out
    }

    pub fn adjoint(a: &Matrix) -> Matrix {
        let d = (a.len() as f64).sqrt() as usize;
        let mut out = vec![Complex64::ZERO; d * d];
        for i in 0..d {
            for j in 0..d {
                out[j * d + i] = a[i * d + j].conj();
            }
        }
        out
    }

    pub fn mat_close(a: &Matrix, b: &Matrix, tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol)
    }

    fn apply_one_qubit(m: &mut Matrix, n: usize, q: usize, g: [[Complex64; 2]; 2]) {
        let d = dim_of(n);
        let bit = 1 << (n - 1 - q);
        for r0 in 0..d {
            if r0 & bit != 0 {
                continue;
            }
            let r1 = r0 | bit;
            for j in 0..d {
                let a = m[r0 * d + j];
                let b = m[r1 * d + j];
                m[r0 * d + j] = g[0][0] * a + g[0][1] * b;
                m[r1 * d + j] = g[1][0] * a + g[1][1] * b;
            }
        }
    }

    fn apply_cnot(m: &mut Matrix, n: usize, c: usize, t: usize) {
        let d = dim_of(n);
        let cbit = 1 << (n - 1 - c);
        let tbit = 1 << (n - 1 - t);
        for r in 0..d {
            if r & cbit != 0 && r & tbit == 0 {
                let r2 = r | tbit;
                for j in 0..d {
                    m.swap(r * d + j, r2 * d + j);
                }
            }
        }
    }

    pub(super) fn apply_gate_left(m: &mut Matrix, n: usize, gate: Gate) {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let zero = Complex64::ZERO;
        let one = Complex64::ONE;
        let i = Complex64::i();
        match gate {
            Gate::H(q) => apply_one_qubit(m, n, q, [[h, h], [h, -h]]),
            Gate::S(q) => apply_one_qubit(m, n, q, [[one, zero], [zero, i]]),
            Gate::Sdg(q) => apply_one_qubit(m, n, q, [[one, zero], [zero, -i]]),
            Gate::X(q) => apply_one_qubit(m, n, q, [[zero, one], [one, zero]]),
            Gate::Y(q) => apply_one_qubit(m, n, q, [[zero, -i], [i, zero]]),
            Gate::Z(q) => apply_one_qubit(m, n, q, [[one, zero], [zero, -one]]),
            Gate::Cnot(c, t) => apply_cnot(m, n, c, t),
        }
    }

    /// exp(i * angle * P) for a Hermitian Pauli, via cos/sin split.
    pub fn pauli_exponential(p: &PauliString, angle: f64) -> Matrix {
        let d = dim_of(p.n());
        let mut m = pauli_matrix(p);
        let (s, c) = angle.sin_cos();
        let is = Complex64::new(0.0, s);
        for v in m.iter_mut() {
            *v *= is;
        }
        for k in 0..d {
            m[k * d + k] += Complex64::new(c, 0.0);
        }
        m
    }

    /// Exact gate-by-gate unitary of a circuit; rotations use
    /// exp(i * sign * angle * P_q).
    pub fn unitary(circuit: &Circuit, thetas: &[f64]) -> Result<Matrix> {
        if circuit.n > DENSE_MAX_QUBITS {
            return Err(Error::DenseTooLarge {
                n: circuit.n,
                max: DENSE_MAX_QUBITS,
            });
        }
        let n = circuit.n;
        let mut m = identity(n);
        for op in &circuit.ops {
            match op {
                Op::Gate(g) => apply_gate_left(&mut m, n, *g),
                Op::Rotation(r) => {
                    let theta = r.angle.value(thetas)? * f64::from(r.sign);
                    let p = PauliString::from_axis(n, r.qubit, r.axis)?;
                    let rot = pauli_exponential(&p, theta);
                    m = mat_mul(&rot, &m);
                }
            }
        }
        Ok(m)
    }

    /// Unitary permuting qubit labels: qubit q of the input becomes qubit
    /// perm[q] of the output.
    pub fn permutation_matrix(n: usize, perm: &[usize]) -> Matrix {
        let d = dim_of(n);
        let mut m = vec![Complex64::ZERO; d * d];
        for col in 0..d {
            let mut row = 0usize;
            for q in 0..n {
                if col & (1 << (n - 1 - q)) != 0 {
                    row |= 1 << (n - 1 - perm[q]);
                }
            }
            m[row * d + col] = Complex64::ONE;
        }
        m
    }
}

/// Unitary of the reference Pauli network prod_l exp(i theta_l S_l), with the
/// first target applied first in time.
pub fn target_product_unitary(n: usize, targets: &[Target], thetas: &[f64]) -> Result<dense::Matrix> {
    if n > DENSE_MAX_QUBITS {
        return Err(Error::DenseTooLarge { n, max: DENSE_MAX_QUBITS });
    }
    let mut u = dense::identity(n);
    for t in targets {
        if t.pauli.n() != n {
            return Err(Error::DimensionMismatch(t.pauli.n(), n));
        }
        let theta = t.angle.value(thetas)?;
        let e = dense::pauli_exponential(&t.pauli, theta);
        u = dense::mat_mul(&e, &u);
    }
    Ok(u)
}

/// Pass iff |trace(U† V)| / dim >= 1 - tol.
pub fn equivalent_up_to_phase(u: &dense::Matrix, v: &dense::Matrix, tol: f64) -> Result<EquivalenceReport> {
    if u.len() != v.len() {
        return Err(Error::InvalidInput("dimension mismatch in dense comparison".into()));
    }
    let d = (u.len() as f64).sqrt() as usize;
    let mut trace = num_complex::Complex64::ZERO;
    for i in 0..d {
        for k in 0..d {
            trace += u[k * d + i].conj() * v[k * d + i];
        }
    }
    let fidelity = trace.norm() / d as f64;
    let deviation = (1.0 - fidelity).max(0.0);
    Ok(EquivalenceReport {
        kind: EquivalenceKind::DenseUpToGlobalPhase,
        pass: deviation <= tol,
        max_deviation: deviation,
        witness: None,
    })
}

/// Dense equivalence of a synthesized circuit against the target product.
pub fn circuit_matches_targets(
    circuit: &Circuit,
    targets: &[Target],
    thetas: &[f64],
    tol: f64,
) -> Result<EquivalenceReport> {
    let u = dense::unitary(circuit, thetas)?;
    let v = target_product_unitary(circuit.n, targets, thetas)?;
    equivalent_up_to_phase(&u, &v, tol)
}

/// Tableau equality of two Clifford-only circuits.
pub fn tableau_equal(a: &Circuit, b: &Circuit) -> Result<EquivalenceReport> {
    let ca = Cer::from_circuit(a)?;
    let cb = Cer::from_circuit(b)?;
    Ok(EquivalenceReport {
        kind: EquivalenceKind::TableauExact,
        pass: ca == cb,
        max_deviation: if ca == cb { 0.0 } else { 1.0 },
        witness: None,
    })
}

/// Replay a circuit through the register tableau and check that every
/// rotation's register equals ± its target with the sign folded into the
/// rotation, every target is implemented exactly once, and the implementation
/// order respects commutation among pending targets.
pub fn pauli_network_sound(circuit: &Circuit, targets: &[Target]) -> Result<EquivalenceReport> {
    let fail = |witness| EquivalenceReport {
        kind: EquivalenceKind::PauliNetworkSound,
        pass: false,
        max_deviation: 1.0,
        witness: Some(witness),
    };
    let mut cer = Cer::identity(circuit.n);
    let mut done = vec![false; targets.len()];
    for (pos, op) in circuit.ops.iter().enumerate() {
        match op {
            Op::Gate(g) => cer.apply_gate_mut(*g)?,
            Op::Rotation(r) => {
                let Some(target) = targets.get(r.implements) else {
                    return Ok(fail(pos));
                };
                if done[r.implements] {
                    return Ok(fail(pos));
                }
                // Earlier pending targets must commute with this one.
                for (j, t) in targets.iter().enumerate().take(r.implements) {
                    if !done[j] && !t.pauli.commutes(&target.pauli)? {
                        return Ok(fail(pos));
                    }
                }
                if !matches!((r.angle, target.angle), (a, b) if angle_eq(a, b)) {
                    return Ok(fail(pos));
                }
                let register = cer.register(r.qubit, r.axis)?;
                if !register.same_letters(&target.pauli) {
                    return Ok(fail(pos));
                }
                let b = register.sign()? != target.pauli.sign()?;
                let expected_sign = if b { -1 } else { 1 };
                if r.sign != expected_sign {
                    return Ok(fail(pos));
                }
                done[r.implements] = true;
            }
        }
    }
    if let Some(missing) = done.iter().position(|d| !d) {
        return Ok(fail(missing));
    }
    Ok(EquivalenceReport {
        kind: EquivalenceKind::PauliNetworkSound,
        pass: true,
        max_deviation: 0.0,
        witness: None,
    })
}

fn angle_eq(a: crate::circuit::Angle, b: crate::circuit::Angle) -> bool {
    use crate::circuit::Angle;
    match (a, b) {
        (Angle::Literal(x), Angle::Literal(y)) => x == y,
        (Angle::Symbolic { index: i, scale: s }, Angle::Symbolic { index: j, scale: t }) => i == j && s == t,
        _ => false,
    }
}

/// Every CNOT must lie on an edge of the coupling graph.
pub fn respects_connectivity(circuit: &Circuit, graph: &crate::arch::CouplingGraph) -> bool {
    circuit.gates().all(|g| match *g {
        crate::circuit::Gate::Cnot(c, t) => graph.has_edge(c, t),
        _ => true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Angle, Gate, Rotation};
    use crate::pauli::{Axis, PauliString};

    #[test]
    fn empty_circuit_is_identity() {
        let c = Circuit::new(2);
        let u = dense::unitary(&c, &[]).unwrap();
        assert!(dense::mat_close(&u, &dense::identity(2), 1e-14));
    }

    #[test]
    fn h_squared_is_identity() {
        let mut c = Circuit::new(1);
        c.push_gate(Gate::H(0));
        c.push_gate(Gate::H(0));
        let u = dense::unitary(&c, &[]).unwrap();
        assert!(dense::mat_close(&u, &dense::identity(1), 1e-14));
    }

    #[test]
    fn cnot_matrix_is_canonical_permutation() {
        let mut c = Circuit::new(2);
        c.push_gate(Gate::Cnot(0, 1));
        let u = dense::unitary(&c, &[]).unwrap();
        // Basis order |00>, |01>, |10>, |11> with qubit 0 most significant.
        let mut expect = dense::identity(2);
        expect.swap(2 * 4 + 2, 2 * 4 + 3);
        expect.swap(3 * 4 + 3, 3 * 4 + 2);
        assert!(dense::mat_close(&u, &expect, 1e-14));
    }

    #[test]
    fn phase_equivalence_accepts_global_phase_only() {
        let u = dense::identity(2);
        let mut v = u.clone();
        let phase = num_complex::Complex64::from_polar(1.0, 0.7);
        for x in v.iter_mut() {
            *x *= phase;
        }
        assert!(equivalent_up_to_phase(&u, &v, 1e-9).unwrap().pass);
        let x: PauliString = "XI".parse().unwrap();
        assert!(!equivalent_up_to_phase(&u, &dense::pauli_matrix(&x), 1e-9).unwrap().pass);
    }

    #[test]
    fn rotation_sign_flip_detected_by_soundness() {
        let target = Target {
            pauli: "Z".parse().unwrap(),
            angle: Angle::Symbolic { index: 0, scale: 1.0 },
        };
        let mut good = Circuit::new(1);
        good.push_rotation(Rotation {
            axis: Axis::Z,
            qubit: 0,
            angle: Angle::Symbolic { index: 0, scale: 1.0 },
            sign: 1,
            implements: 0,
        });
        assert!(pauli_network_sound(&good, std::slice::from_ref(&target)).unwrap().pass);
        let mut bad = good.clone();
        if let Op::Rotation(r) = &mut bad.ops[0] {
            r.sign = -1;
        }
        let report = pauli_network_sound(&bad, &[target]).unwrap();
        assert!(!report.pass);
        assert_eq!(report.witness, Some(0));
    }
}
