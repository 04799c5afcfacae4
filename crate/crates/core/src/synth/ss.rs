//! Steiner synthesis: per-target basis changes, a parity cascade along the
//! support's Steiner tree, one rotation at the root, and exact uncomputation.

use crate::arch::CouplingGraph;
use crate::circuit::{peephole, Circuit, Gate};
use crate::error::Result;
use crate::pauli::Axis;
use crate::synth::{
    basis_gates_to_z, z_fold_gates, Builder, SynthesisReport, Target,
};

/// Synthesize each target independently with full state reset in between.
/// Targets acting trivially are skipped and reported.
pub fn steiner_synthesize(targets: &[Target], graph: &CouplingGraph) -> Result<(Circuit, SynthesisReport)> {
    let mut builder = Builder::new(graph);
    for (l, target) in targets.iter().enumerate() {
        if target.pauli.weight() == 0 {
            continue;
        }
        target.pauli.sign()?;
        let (span, root) = target_gates(graph, target)?;
        builder.apply_all(&span)?;
        builder.rotate(l, target, root, Axis::Z)?;
        builder.apply_all(&Circuit::inverse_gates(&span))?;
        debug_assert_eq!(builder.cer, crate::cer::Cer::identity(graph.n_phys()));
    }
    let circuit = peephole(&builder.circuit);
    let report = SynthesisReport::from_circuit(&circuit, targets.len());
    Ok((circuit, report))
}

/// Basis changes plus the Z-register cascade for one target; returns the
/// gates and the cascade root carrying the rotation.
fn target_gates(graph: &CouplingGraph, target: &Target) -> Result<(Vec<Gate>, usize)> {
    let mut gates = Vec::new();
    let support = target.pauli.support();
    for &q in &support {
        gates.extend(basis_gates_to_z(target.pauli.letter(q).axis().expect("support"), q));
    }
    let tree = graph.steiner_tree(&support)?;
    let root = *support.iter().min().expect("nonempty");
    gates.extend(z_fold_gates(&tree, root));
    Ok((gates, root))
}

/// Greedy nearest-neighbor ordering of commuting terms so consecutive
/// Steiner-synthesis subcircuits cancel as many CNOTs as possible. Distance
/// between two terms is the CNOT count that survives a peephole pass over the
/// seam between their subcircuits. Ties break toward the lower index; the
/// path starts at index 0.
pub fn order_for_cancellation(terms: &[Target], graph: &CouplingGraph) -> Result<Vec<usize>> {
    if terms.len() <= 1 {
        return Ok((0..terms.len()).collect());
    }
    for a in terms {
        for b in terms {
            if !a.pauli.commutes(&b.pauli)? {
                return Err(crate::error::Error::InvalidInput(
                    "cancellation ordering needs commuting terms".into(),
                ));
            }
        }
    }
    let spans: Vec<Vec<Gate>> = terms
        .iter()
        .map(|t| {
            if t.pauli.weight() == 0 {
                Ok(Vec::new())
            } else {
                target_gates(graph, t).map(|(gates, _)| gates)
            }
        })
        .collect::<Result<_>>()?;
    let n = graph.n_phys();
    let seam_cost = |a: usize, b: usize| -> usize {
        let mut c = Circuit::new(n);
        c.push_gates(&Circuit::inverse_gates(&spans[a]));
        c.push_gates(&spans[b]);
        peephole(&c).cnot_count()
    };
    let count = terms.len();
    let mut order = vec![0usize];
    let mut used = vec![false; count];
    used[0] = true;
    while order.len() < count {
        let last = *order.last().expect("nonempty");
        let next = (0..count)
            .filter(|&i| !used[i])
            .min_by_key(|&i| (seam_cost(last, i), i))
            .expect("some term left");
        used[next] = true;
        order.push(next);
    }
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Angle;
    use crate::pauli::PauliString;
    use crate::verify;

    fn t(s: &str, index: usize) -> Target {
        Target::symbolic(s.parse().unwrap(), index)
    }

    #[test]
    fn single_z_costs_nothing() {
        let g = CouplingGraph::path(3);
        let (c, report) = steiner_synthesize(&[t("ZII", 0)], &g).unwrap();
        assert_eq!(report.total_cnots, 0);
        assert_eq!(c.rotations().count(), 1);
    }

    #[test]
    fn adjacent_zz_costs_two_cnots() {
        let g = CouplingGraph::path(2);
        let (_, report) = steiner_synthesize(&[t("ZZ", 0)], &g).unwrap();
        assert_eq!(report.total_cnots, 2);
    }

    #[test]
    fn distant_zz_uses_steiner_path_fold() {
        // Z0 Z4 over a path of five: the cascade must route through three
        // intermediate qubits without absorbing them, costing 7 CNOTs each
        // way.
        let g = CouplingGraph::path(5);
        let (c, report) = steiner_synthesize(&[t("ZIIIZ", 0)], &g).unwrap();
        assert_eq!(report.total_cnots, 14);
        let thetas = [0.37];
        assert!(verify::circuit_matches_targets(&c, &[t("ZIIIZ", 0)], &thetas, 1e-9)
            .unwrap()
            .pass);
    }

    #[test]
    fn dense_equivalence_on_mixed_targets() {
        let g = CouplingGraph::path(4);
        let targets = vec![t("XXYI", 0), t("-IZZY", 1), t("YIXZ", 2)];
        let (c, report) = steiner_synthesize(&targets, &g).unwrap();
        let thetas = [0.3, -0.8, 1.1];
        assert!(verify::circuit_matches_targets(&c, &targets, &thetas, 1e-9).unwrap().pass);
        assert!(verify::pauli_network_sound(&c, &targets).unwrap().pass);
        assert!(verify::respects_connectivity(&c, &g));
        assert!(report.skipped.is_empty());
    }

    #[test]
    fn identity_target_skipped_with_warning_slot() {
        let g = CouplingGraph::path(2);
        let targets = vec![
            Target {
                pauli: PauliString::identity(2),
                angle: Angle::Literal(0.5),
            },
            t("ZZ", 1),
        ];
        let (_, report) = steiner_synthesize(&targets, &g).unwrap();
        assert_eq!(report.skipped, vec![0]);
    }

    #[test]
    fn cancellation_order_examples() {
        let g = CouplingGraph::path(3);
        let terms = vec![t("ZZI", 0), t("ZZI", 1)];
        assert_eq!(order_for_cancellation(&terms, &g).unwrap(), vec![0, 1]);
        let two = vec![t("ZZI", 0), t("IZZ", 1)];
        assert_eq!(order_for_cancellation(&two, &g).unwrap(), vec![0, 1]);
    }
}
