//! Register tableau tracking, per qubit, the Pauli that a single-qubit Z/X/Y
//! rotation would implement at the current point of a Clifford circuit.
//!
//! Rows store the backwards conjugation C† P_q C of the circuit applied so
//! far, so that inserting exp(i·theta·P_q) into a circuit whose Clifford part
//! is eventually undone implements exp(i·theta·row). The Y row is always
//! derived from Z·X and never stored.

use std::collections::HashSet;
use std::fmt;

use crate::circuit::{Circuit, Gate, Op};
use crate::error::{Error, Result};
use crate::pauli::{Axis, PauliString};

#[derive(Clone, PartialEq, Eq)]
pub struct Cer {
    n: usize,
    z_rows: Vec<PauliString>,
    x_rows: Vec<PauliString>,
}

/// Decomposition of a Pauli over the rows of a tableau: per qubit at most one
/// of the Z/X/Y registers, together with an overall sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub axes: Vec<Option<Axis>>,
    pub sign: i8,
}

impl Decomposition {
    /// Qubits over which the decomposition acts nontrivially.
    pub fn support(&self) -> Vec<usize> {
        self.axes
            .iter()
            .enumerate()
            .filter_map(|(q, a)| a.map(|_| q))
            .collect()
    }
}

/// A target found verbatim in some register, up to sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegisterMatch {
    pub target: usize,
    pub qubit: usize,
    pub axis: Axis,
    /// True when the register equals minus the target.
    pub flipped: bool,
}

impl Cer {
    /// Tableau of the empty circuit: row (q, P) holds P_q with a plus sign.
    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "tableau needs at least one qubit");
        let z_rows = (0..n)
            .map(|q| PauliString::from_axis(n, q, Axis::Z).expect("in range"))
            .collect();
        let x_rows = (0..n)
            .map(|q| PauliString::from_axis(n, q, Axis::X).expect("in range"))
            .collect();
        Cer { n, z_rows, x_rows }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn z_row(&self, q: usize) -> &PauliString {
        &self.z_rows[q]
    }

    pub fn x_row(&self, q: usize) -> &PauliString {
        &self.x_rows[q]
    }

    /// Derived Y register: the Hermitian representative of Z·X with the
    /// mandatory factor of i divided out exactly once.
    pub fn y_register(&self, q: usize) -> PauliString {
        let mut y = self.z_rows[q].multiply(&self.x_rows[q]).expect("same n");
        y.mul_i_power(3);
        debug_assert!(y.is_hermitian());
        y
    }

    pub fn register(&self, q: usize, axis: Axis) -> Result<PauliString> {
        if q >= self.n {
            return Err(Error::QubitOutOfRange { index: q, n: self.n });
        }
        Ok(match axis {
            Axis::Z => self.z_rows[q].clone(),
            Axis::X => self.x_rows[q].clone(),
            Axis::Y => self.y_register(q),
        })
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n {
            return Err(Error::QubitOutOfRange { index: q, n: self.n });
        }
        Ok(())
    }

    /// Register update rules for the supported gate set.
    pub fn apply_gate_mut(&mut self, gate: Gate) -> Result<()> {
        match gate {
            Gate::H(q) => {
                self.check_qubit(q)?;
                std::mem::swap(&mut self.z_rows[q], &mut self.x_rows[q]);
            }
            Gate::S(q) => {
                self.check_qubit(q)?;
                self.x_rows[q] = self.y_register(q).negated();
            }
            Gate::Sdg(q) => {
                self.check_qubit(q)?;
                self.x_rows[q] = self.y_register(q);
            }
            Gate::X(q) => {
                self.check_qubit(q)?;
                self.z_rows[q].negate();
            }
            Gate::Y(q) => {
                self.check_qubit(q)?;
                self.z_rows[q].negate();
                self.x_rows[q].negate();
            }
            Gate::Z(q) => {
                self.check_qubit(q)?;
                self.x_rows[q].negate();
            }
            Gate::Cnot(c, t) => {
                self.check_qubit(c)?;
                self.check_qubit(t)?;
                if c == t {
                    return Err(Error::InvalidInput("cnot control equals target".into()));
                }
                self.z_rows[t] = self.z_rows[t].multiply(&self.z_rows[c])?;
                self.x_rows[c] = self.x_rows[c].multiply(&self.x_rows[t])?;
            }
        }
        Ok(())
    }

    pub fn apply_gate(mut self, gate: Gate) -> Result<Cer> {
        self.apply_gate_mut(gate)?;
        Ok(self)
    }

    pub fn apply_gates_mut(&mut self, gates: &[Gate]) -> Result<()> {
        for &g in gates {
            self.apply_gate_mut(g)?;
        }
        Ok(())
    }

    /// Fold of the gate rules over a Clifford-only circuit.
    pub fn from_circuit(circuit: &Circuit) -> Result<Cer> {
        let mut cer = Cer::identity(circuit.n);
        for (i, op) in circuit.ops.iter().enumerate() {
            match op {
                Op::Gate(g) => cer.apply_gate_mut(*g)?,
                Op::Rotation(_) => return Err(Error::NonCliffordGate(i)),
            }
        }
        Ok(cer)
    }

    pub fn from_gates(n: usize, gates: &[Gate]) -> Result<Cer> {
        let mut cer = Cer::identity(n);
        cer.apply_gates_mut(gates)?;
        Ok(cer)
    }

    /// Build a tableau from explicit rows, checking symplectic validity.
    pub fn from_rows(z_rows: Vec<PauliString>, x_rows: Vec<PauliString>) -> Result<Cer> {
        let n = z_rows.len();
        if n == 0 || x_rows.len() != n {
            return Err(Error::InvalidInput("need equal, nonempty Z and X row lists".into()));
        }
        for row in z_rows.iter().chain(&x_rows) {
            if row.n() != n {
                return Err(Error::DimensionMismatch(row.n(), n));
            }
        }
        let cer = Cer { n, z_rows, x_rows };
        if !cer.is_valid() {
            return Err(Error::InvalidInput(
                "rows do not form a valid stabilizer/destabilizer family".into(),
            ));
        }
        Ok(cer)
    }

    /// Fold over the Clifford gates of a mixed circuit, skipping rotations.
    pub fn from_circuit_ignoring_rotations(circuit: &Circuit) -> Result<Cer> {
        let mut cer = Cer::identity(circuit.n);
        for op in &circuit.ops {
            if let Op::Gate(g) = op {
                cer.apply_gate_mut(*g)?;
            }
        }
        Ok(cer)
    }

    /// Symplectic validity of the row family plus the ±1 sign condition.
    pub fn is_valid(&self) -> bool {
        for q in 0..self.n {
            if !self.z_rows[q].is_hermitian() || !self.x_rows[q].is_hermitian() {
                return false;
            }
            if self.z_rows[q].commutes(&self.x_rows[q]).unwrap_or(true) {
                return false;
            }
            for p in 0..self.n {
                if p == q {
                    continue;
                }
                let ok = self.z_rows[q].commutes(&self.z_rows[p]).unwrap_or(false)
                    && self.z_rows[q].commutes(&self.x_rows[p]).unwrap_or(false)
                    && self.x_rows[q].commutes(&self.x_rows[p]).unwrap_or(false);
                if !ok {
                    return false;
                }
            }
        }
        true
    }

    /// Decompose a ±Pauli over the rows: the Z/X exponents come from
    /// anticommutation with the X/Z rows, a joint Z·X pair collapses to Y,
    /// and the sign makes the reconstruction exact.
    pub fn decompose(&self, s: &PauliString) -> Result<Decomposition> {
        if s.n() != self.n {
            return Err(Error::DimensionMismatch(s.n(), self.n));
        }
        s.sign()?;
        let mut axes = vec![None; self.n];
        for q in 0..self.n {
            let on_x = s.symplectic(&self.z_rows[q])? == 1;
            let on_z = s.symplectic(&self.x_rows[q])? == 1;
            axes[q] = match (on_z, on_x) {
                (false, false) => None,
                (true, false) => Some(Axis::Z),
                (false, true) => Some(Axis::X),
                (true, true) => Some(Axis::Y),
            };
        }
        let mut d = Decomposition { axes, sign: 1 };
        let rebuilt = self.reconstruct(&d)?;
        debug_assert!(rebuilt.same_letters(s), "row basis must span every Pauli");
        if rebuilt.sign()? != s.sign()? {
            d.sign = -1;
        }
        Ok(d)
    }

    /// Product of the selected registers in ascending qubit order, times the
    /// decomposition sign.
    pub fn reconstruct(&self, d: &Decomposition) -> Result<PauliString> {
        let mut acc = PauliString::identity(self.n);
        for (q, axis) in d.axes.iter().enumerate() {
            if let Some(a) = axis {
                acc = acc.multiply(&self.register(q, *a)?)?;
            }
        }
        if d.sign < 0 {
            acc.negate();
        }
        Ok(acc)
    }

    /// First register equal to ±target, scanning qubits ascending and axes
    /// in Z, X, Y order. Avoids materializing Y rows unless they match.
    pub fn find_register(&self, target: &PauliString) -> Result<Option<(usize, Axis, bool)>> {
        if target.n() != self.n {
            return Err(Error::DimensionMismatch(target.n(), self.n));
        }
        let t_sign = target.sign()?;
        for q in 0..self.n {
            for axis in Axis::ALL {
                let hit = match axis {
                    Axis::Z => self.z_rows[q].same_letters(target),
                    Axis::X => self.x_rows[q].same_letters(target),
                    Axis::Y => target.same_letters_as_product(&self.z_rows[q], &self.x_rows[q]),
                };
                if hit {
                    let sign = match axis {
                        Axis::Z => self.z_rows[q].sign()?,
                        Axis::X => self.x_rows[q].sign()?,
                        Axis::Y => self.y_register(q).sign()?,
                    };
                    return Ok(Some((q, axis, sign != t_sign)));
                }
            }
        }
        Ok(None)
    }

    /// Report every register equal to ±target, for each target.
    pub fn find_implemented(&self, targets: &[PauliString]) -> Result<Vec<RegisterMatch>> {
        let mut found = Vec::new();
        for (i, t) in targets.iter().enumerate() {
            if t.n() != self.n {
                return Err(Error::DimensionMismatch(t.n(), self.n));
            }
            let t_sign = t.sign()?;
            for q in 0..self.n {
                for axis in Axis::ALL {
                    let reg = self.register(q, axis)?;
                    if reg.same_letters(t) {
                        found.push(RegisterMatch {
                            target: i,
                            qubit: q,
                            axis,
                            flipped: reg.sign()? != t_sign,
                        });
                    }
                }
            }
        }
        Ok(found)
    }

    /// Debug dump, one line per qubit.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for q in 0..self.n {
            out.push_str(&format!(
                "{q} | Z: {} | X: {} | Y: {}\n",
                self.z_rows[q],
                self.x_rows[q],
                self.y_register(q)
            ));
        }
        out
    }

    /// Conjugation C p C† where C is the unitary of `gates`: substitute each
    /// letter of `p` by the corresponding register of the inverse circuit.
    pub fn conjugate_by_gates(n: usize, gates: &[Gate], p: &PauliString) -> Result<PauliString> {
        let inverse = Circuit::inverse_gates(gates);
        let cer = Cer::from_gates(n, &inverse)?;
        let mut axes = vec![None; n];
        for q in 0..n {
            axes[q] = p.letter(q).axis();
        }
        let d = Decomposition {
            axes,
            sign: p.sign()?,
        };
        cer.reconstruct(&d)
    }
}

impl fmt::Debug for Cer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.dump())
    }
}

/// Number of distinct unsigned Paulis appearing in any register across a
/// replayed tableau trace.
pub fn distinct_pauli_count<'a>(trace: impl IntoIterator<Item = &'a Cer>) -> usize {
    let mut seen: HashSet<String> = HashSet::new();
    for cer in trace {
        for q in 0..cer.n() {
            seen.insert(cer.z_row(q).pattern_text());
            seen.insert(cer.x_row(q).pattern_text());
            seen.insert(cer.y_register(q).pattern_text());
        }
    }
    seen.len()
}

/// Replay a circuit gate-by-gate, returning the tableau after every prefix
/// (the empty prefix included).
pub fn replay_trace(n: usize, gates: &[Gate]) -> Result<Vec<Cer>> {
    let mut cer = Cer::identity(n);
    let mut trace = vec![cer.clone()];
    for &g in gates {
        cer.apply_gate_mut(g)?;
        trace.push(cer.clone());
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::dense;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn identity_tableau_rows() {
        let cer = Cer::identity(1);
        assert_eq!(cer.z_row(0), &p("Z"));
        assert_eq!(cer.x_row(0), &p("X"));
        let cer3 = Cer::identity(3);
        assert_eq!(cer3.y_register(1), p("IYI"));
        for n in 1..=8 {
            assert!(Cer::identity(n).is_valid());
        }
    }

    #[test]
    fn hadamard_swaps_rows_and_flips_y() {
        let cer = Cer::identity(1).apply_gate(Gate::H(0)).unwrap();
        assert_eq!(cer.z_row(0), &p("X"));
        assert_eq!(cer.x_row(0), &p("Z"));
        assert_eq!(cer.y_register(0), p("-Y"));
    }

    #[test]
    fn s_gate_maps_x_to_minus_y_and_y_to_x() {
        let cer = Cer::identity(1).apply_gate(Gate::S(0)).unwrap();
        assert_eq!(cer.z_row(0), &p("Z"));
        assert_eq!(cer.x_row(0), &p("-Y"));
        assert_eq!(cer.y_register(0), p("X"));
        let back = cer.apply_gate(Gate::Sdg(0)).unwrap();
        assert_eq!(back, Cer::identity(1));
    }

    #[test]
    fn cnot_on_identity_matches_gate_rules() {
        let cer = Cer::identity(2).apply_gate(Gate::Cnot(0, 1)).unwrap();
        assert_eq!(cer.z_row(0), &p("ZI"));
        assert_eq!(cer.z_row(1), &p("ZZ"));
        assert_eq!(cer.x_row(0), &p("XX"));
        assert_eq!(cer.x_row(1), &p("IX"));
    }

    #[test]
    fn table_rule_for_cnot_y_rows_follows_from_z_and_x() {
        // On an arbitrary tableau the derived Y rows must obey
        // Y_c -> Y_c * X_t and Y_t -> Y_t * Z_c.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let n = rng.gen_range(2..=5);
            let gates = crate::circuit::random_clifford_gates(n, 20, &mut rng);
            let cer = Cer::from_gates(n, &gates).unwrap();
            let c = rng.gen_range(0..n);
            let mut t = rng.gen_range(0..n);
            if t == c {
                t = (t + 1) % n;
            }
            let y_c = cer.y_register(c);
            let y_t = cer.y_register(t);
            let x_t = cer.x_row(t).clone();
            let z_c = cer.z_row(c).clone();
            let after = cer.apply_gate(Gate::Cnot(c, t)).unwrap();
            assert_eq!(after.y_register(c), y_c.multiply(&x_t).unwrap());
            assert_eq!(after.y_register(t), y_t.multiply(&z_c).unwrap());
        }
    }

    #[test]
    fn from_circuit_fold_and_inverse() {
        let mut c = Circuit::new(2);
        c.push_gate(Gate::H(0));
        c.push_gate(Gate::Cnot(0, 1));
        let cer = Cer::from_circuit(&c).unwrap();
        assert_eq!(cer.z_row(1), &p("XZ"));
        let gates: Vec<Gate> = c.gates().copied().collect();
        let mut full = gates.clone();
        full.extend(Circuit::inverse_gates(&gates));
        assert_eq!(Cer::from_gates(2, &full).unwrap(), Cer::identity(2));
    }

    #[test]
    fn conjugation_direction_matches_dense_oracle() {
        // Rows track C† P_q C; this test pins the direction once and for all.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let n = rng.gen_range(1..=4);
            let gates = crate::circuit::random_clifford_gates(n, 15, &mut rng);
            let cer = Cer::from_gates(n, &gates).unwrap();
            let mut circ = Circuit::new(n);
            circ.push_gates(&gates);
            let u = dense::unitary(&circ, &[]).unwrap();
            let udag = dense::adjoint(&u);
            for q in 0..n {
                for axis in Axis::ALL {
                    let local = PauliString::from_axis(n, q, axis).unwrap();
                    let conj = dense::mat_mul(&udag, &dense::mat_mul(&dense::pauli_matrix(&local), &u));
                    let row = cer.register(q, axis).unwrap();
                    assert!(
                        dense::mat_close(&conj, &dense::pauli_matrix(&row), 1e-12),
                        "axis {axis:?} qubit {q}"
                    );
                }
            }
        }
    }

    #[test]
    fn validity_preserved_under_random_walks() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let n = rng.gen_range(2..=16);
            let gates = crate::circuit::random_clifford_gates(n, 60, &mut rng);
            let cer = Cer::from_gates(n, &gates).unwrap();
            assert!(cer.is_valid());
        }
    }

    #[test]
    fn decompose_identity_cases() {
        let cer = Cer::identity(1);
        let d = cer.decompose(&p("Z")).unwrap();
        assert_eq!(d.axes, vec![Some(Axis::Z)]);
        assert_eq!(d.sign, 1);

        let cer5 = Cer::identity(5);
        let d = cer5.decompose(&p("-IIYII")).unwrap();
        assert_eq!(d.support(), vec![2]);
        assert_eq!(d.axes[2], Some(Axis::Y));
        assert_eq!(d.sign, -1);

        let d = cer5.decompose(&p("ZIIZI")).unwrap();
        assert_eq!(d.support(), vec![0, 3]);
    }

    #[test]
    fn decompose_after_cnot() {
        let cer = Cer::identity(2).apply_gate(Gate::Cnot(0, 1)).unwrap();
        let d = cer.decompose(&p("ZZ")).unwrap();
        assert_eq!(d.axes, vec![None, Some(Axis::Z)]);
        assert_eq!(d.sign, 1);
    }

    #[test]
    fn decompose_reconstruct_round_trip_on_random_tableaus() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..60 {
            let n = rng.gen_range(1..=12);
            let gates = crate::circuit::random_clifford_gates(n, 40, &mut rng);
            let cer = Cer::from_gates(n, &gates).unwrap();
            let mut s = PauliString::identity(n);
            for q in 0..n {
                use crate::pauli::Letter;
                s.set_letter(q, [Letter::I, Letter::X, Letter::Y, Letter::Z][rng.gen_range(0..4)]);
            }
            if rng.gen_bool(0.5) {
                s.negate();
            }
            let d = cer.decompose(&s).unwrap();
            assert_eq!(cer.reconstruct(&d).unwrap(), s);
        }
    }

    #[test]
    fn find_implemented_reports_registers() {
        let cer = Cer::identity(2);
        let hits = cer.find_implemented(&[p("IX")]).unwrap();
        assert_eq!(
            hits,
            vec![RegisterMatch {
                target: 0,
                qubit: 1,
                axis: Axis::X,
                flipped: false
            }]
        );
        assert!(cer.find_implemented(&[p("ZZ")]).unwrap().is_empty());
        let cer = cer.apply_gate(Gate::Cnot(0, 1)).unwrap();
        let hits = cer.find_implemented(&[p("ZZ")]).unwrap();
        assert_eq!(hits.len(), 1);
        assert_eq!((hits[0].qubit, hits[0].axis, hits[0].flipped), (1, Axis::Z, false));
    }

    #[test]
    fn distinct_count_examples() {
        let trace = replay_trace(3, &[]).unwrap();
        assert_eq!(distinct_pauli_count(&trace), 9);
        let trace = replay_trace(2, &[Gate::Cnot(0, 1)]).unwrap();
        let count = distinct_pauli_count(&trace);
        assert_eq!(count, 10);
        assert!(count <= 3 * 2 + 4);
    }
}
