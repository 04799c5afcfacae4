//! General compression of M Paulis into M designated qubits, by induction:
//! localize the first M-1, then fold the remainder of the last one into its
//! destination without touching the already-settled qubits.

use std::collections::BTreeSet;

use crate::arch::CouplingGraph;
use crate::cer::Cer;
use crate::circuit::Gate;
use crate::error::{Error, Result};
use crate::pauli::PauliString;
use crate::synth::{basis_gates_to_z, z_fold_gates};

/// Build a Clifford circuit C with C P_m C† supported inside `dest` for every
/// m. Requires fewer Paulis than qubits and a connected destination set whose
/// settled prefix never disconnects the rest of the graph from the remaining
/// supports.
pub fn compress_general(
    paulis: &[PauliString],
    graph: &CouplingGraph,
    dest: &[usize],
) -> Result<Vec<Gate>> {
    let n = graph.n_phys();
    if paulis.is_empty() {
        return Ok(Vec::new());
    }
    if paulis.len() != dest.len() {
        return Err(Error::InvalidInput(
            "need exactly one destination qubit per Pauli".into(),
        ));
    }
    if paulis.len() >= n {
        return Err(Error::InvalidInput(format!(
            "cannot compress {} Paulis over {n} qubits",
            paulis.len()
        )));
    }
    let dest_set: BTreeSet<usize> = dest.iter().copied().collect();
    if dest_set.len() != dest.len() {
        return Err(Error::InvalidInput("destination qubits must be distinct".into()));
    }
    if !graph.connected_within(&dest_set) {
        return Err(Error::InvalidInput("destination set must be connected".into()));
    }
    for p in paulis {
        if p.n() != n {
            return Err(Error::DimensionMismatch(p.n(), n));
        }
        p.sign()?;
    }

    let mut cer = Cer::identity(n);
    let mut gates: Vec<Gate> = Vec::new();
    let emit = |cer: &mut Cer, gs: &[Gate], gates: &mut Vec<Gate>| -> Result<()> {
        for &g in gs {
            cer.apply_gate_mut(g)?;
            gates.push(g);
        }
        Ok(())
    };

    for (m, p) in paulis.iter().enumerate() {
        let settled: BTreeSet<usize> = dest[..m].iter().copied().collect();
        let allowed: BTreeSet<usize> = (0..n).filter(|q| !settled.contains(q)).collect();
        let q_m = dest[m];
        let d = cer.decompose(p)?;
        let residue: Vec<usize> = d
            .support()
            .into_iter()
            .filter(|q| !settled.contains(q))
            .collect();
        if residue.is_empty() || residue == [q_m] {
            continue;
        }
        for &u in &residue {
            let gs = basis_gates_to_z(d.axes[u].expect("support"), u);
            emit(&mut cer, &gs, &mut gates)?;
        }
        let tree = graph.steiner_tree_within(Some(&allowed), &residue)?;
        let root = if residue.contains(&q_m) {
            q_m
        } else {
            *residue.iter().min().expect("nonempty")
        };
        let gs = z_fold_gates(&tree, root);
        emit(&mut cer, &gs, &mut gates)?;
        if root != q_m {
            let path = graph.path_between(Some(&allowed), root, q_m)?;
            for w in path.windows(2) {
                for g in [Gate::Cnot(w[0], w[1]), Gate::Cnot(w[1], w[0]), Gate::Cnot(w[0], w[1])] {
                    emit(&mut cer, &[g], &mut gates)?;
                }
            }
        }
        // The induction needs this Pauli inside the settled prefix plus its
        // own destination, so later steps cannot disturb it.
        let check = cer.decompose(p)?;
        if check
            .support()
            .into_iter()
            .any(|q| !settled.contains(&q) && q != q_m)
        {
            return Err(Error::InvalidInput(format!(
                "compression step {m} failed to localize the Pauli"
            )));
        }
    }
    for p in paulis {
        debug_assert!(cer
            .decompose(p)
            .map(|d| d.support().iter().all(|q| dest_set.contains(q)))
            .unwrap_or(false));
    }
    Ok(gates)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    fn localized(gates: &[Gate], n: usize, pauli: &PauliString, dest: &[usize]) -> bool {
        let conj = Cer::conjugate_by_gates(n, gates, pauli).expect("conjugation");
        conj.support().iter().all(|q| dest.contains(q))
    }

    #[test]
    fn single_zz_into_one_qubit() {
        let g = CouplingGraph::path(2);
        let gates = compress_general(&[p("ZZ")], &g, &[1]).unwrap();
        assert_eq!(gates.iter().filter(|g| g.is_cnot()).count(), 1);
        assert!(localized(&gates, 2, &p("ZZ"), &[1]));
    }

    #[test]
    fn already_local_paulis_need_nothing() {
        let g = CouplingGraph::path(4);
        let gates = compress_general(&[p("IIZI"), p("IIIX")], &g, &[2, 3]).unwrap();
        assert!(gates.is_empty());
    }

    #[test]
    fn preconditions_rejected() {
        let g = CouplingGraph::path(3);
        assert!(compress_general(&[p("ZII"), p("IZI"), p("IIZ")], &g, &[0, 1, 2]).is_err());
        assert!(compress_general(&[p("ZII")], &g, &[0, 1]).is_err());
        let g5 = CouplingGraph::path(5);
        assert!(compress_general(&[p("ZIIII"), p("IZIII")], &g5, &[0, 4]).is_err());
    }

    #[test]
    fn random_lists_localize_into_destinations() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..40 {
            let n = rng.gen_range(3..=6);
            let g = CouplingGraph::path(n);
            let m = rng.gen_range(1..=3.min(n - 1));
            // Destination: a suffix interval settled end-first, so the
            // settled prefix never disconnects the remaining path.
            let dest: Vec<usize> = (n - m..n).rev().collect();
            let paulis: Vec<PauliString> = (0..m)
                .map(|_| {
                    use crate::pauli::Letter;
                    loop {
                        let mut q = PauliString::identity(n);
                        for i in 0..n {
                            q.set_letter(
                                i,
                                [Letter::I, Letter::X, Letter::Y, Letter::Z][rng.gen_range(0..4)],
                            );
                        }
                        if q.weight() > 0 {
                            break q;
                        }
                    }
                })
                .collect();
            let gates = compress_general(&paulis, &g, &dest).unwrap();
            let cer = Cer::from_gates(n, &gates).unwrap();
            for p in &paulis {
                let d = cer.decompose(p).unwrap();
                assert!(d.support().iter().all(|q| dest.contains(q)), "pauli {p}");
            }
        }
    }
}
