//! Lazy synthesis: diagonalize each target against the running tableau,
//! rotate, and keep going without uncomputing.

use crate::arch::CouplingGraph;
use crate::circuit::Circuit;
use crate::db::CliffordDb;
use crate::error::Result;
use crate::synth::{
    reduce_to_z_register, Builder, ResetPolicy, ResetSynth, SynthesisReport, Target,
};

pub fn lazy_synthesize(
    targets: &[Target],
    graph: &CouplingGraph,
    reset_policy: ResetPolicy,
    reset_synth: ResetSynth,
    db: &CliffordDb,
    seed: u64,
) -> Result<(Circuit, SynthesisReport)> {
    let mut builder = Builder::new(graph);
    for (l, target) in targets.iter().enumerate() {
        if target.pauli.weight() == 0 {
            continue;
        }
        target.pauli.sign()?;
        let span_start = builder.circuit.ops.len();
        let hits = builder.cer.find_implemented(std::slice::from_ref(&target.pauli))?;
        match hits.first() {
            Some(hit) => {
                let (q, axis) = (hit.qubit, hit.axis);
                builder.rotate(l, target, q, axis)?;
            }
            None => {
                let root = reduce_to_z_register(&mut builder, None, &target.pauli)?;
                builder.rotate(l, target, root, crate::pauli::Axis::Z)?;
            }
        }
        if reset_policy == ResetPolicy::PerList {
            // Per-target resetting: exact uncomputation of this span.
            let span: Vec<_> = builder.circuit.ops[span_start..]
                .iter()
                .filter_map(|op| match op {
                    crate::circuit::Op::Gate(g) => Some(*g),
                    _ => None,
                })
                .collect();
            builder.apply_all(&Circuit::inverse_gates(&span))?;
        }
    }
    if reset_policy == ResetPolicy::AtEnd {
        let reset = match reset_synth {
            ResetSynth::ExactInverse => {
                let gates: Vec<_> = builder.circuit.gates().copied().collect();
                Circuit::inverse_gates(&gates)
            }
            _ => crate::clifford_synth::reset_gates(&builder.cer, graph, reset_synth, db, seed)?,
        };
        builder.apply_all(&reset)?;
    }
    if reset_policy != ResetPolicy::None {
        debug_assert_eq!(builder.cer, crate::cer::Cer::identity(graph.n_phys()));
    }
    let report = SynthesisReport::from_circuit(&builder.circuit, targets.len());
    Ok((builder.circuit, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cer::Cer;
    use crate::verify;

    fn t(s: &str, index: usize) -> Target {
        Target::symbolic(s.parse().unwrap(), index)
    }

    fn db() -> CliffordDb {
        CliffordDb::new(0)
    }

    #[test]
    fn already_implemented_target_costs_nothing() {
        let g = CouplingGraph::path(2);
        let (c, report) = lazy_synthesize(
            &[t("IX", 0)],
            &g,
            ResetPolicy::None,
            ResetSynth::ExactInverse,
            &db(),
            0,
        )
        .unwrap();
        assert_eq!(report.total_cnots, 0);
        assert_eq!(c.ops.len(), 1);
    }

    #[test]
    fn repeated_target_reuses_the_register() {
        let g = CouplingGraph::path(3);
        let targets = vec![t("ZZI", 0), t("ZZI", 1)];
        let (c, _) = lazy_synthesize(
            &targets,
            &g,
            ResetPolicy::None,
            ResetSynth::ExactInverse,
            &db(),
            0,
        )
        .unwrap();
        // The second rotation must not add CNOTs beyond the first reduction.
        let first_rot = c
            .ops
            .iter()
            .position(|op| matches!(op, crate::circuit::Op::Rotation(_)))
            .unwrap();
        let cnots_before: usize = c.ops[..first_rot]
            .iter()
            .filter(|op| matches!(op, crate::circuit::Op::Gate(g) if g.is_cnot()))
            .count();
        assert_eq!(c.cnot_count(), cnots_before);
        assert!(verify::pauli_network_sound(&c, &targets).unwrap().pass);
    }

    #[test]
    fn lazy_with_exact_reset_is_dense_equivalent() {
        let g = CouplingGraph::path(5);
        let targets = vec![t("XXYIZ", 0), t("YYYXZ", 1), t("IZIIX", 2)];
        let (c, _) = lazy_synthesize(
            &targets,
            &g,
            ResetPolicy::AtEnd,
            ResetSynth::ExactInverse,
            &db(),
            0,
        )
        .unwrap();
        assert_eq!(Cer::from_circuit_ignoring_rotations(&c).unwrap(), Cer::identity(5));
        let thetas = [0.21, -0.73, 0.5];
        assert!(verify::circuit_matches_targets(&c, &targets, &thetas, 1e-9).unwrap().pass);
        assert!(verify::pauli_network_sound(&c, &targets).unwrap().pass);
        assert!(verify::respects_connectivity(&c, &g));
    }

    #[test]
    fn per_target_reset_keeps_tableau_clean() {
        let g = CouplingGraph::path(4);
        let targets = vec![t("ZZII", 0), t("IXXI", 1)];
        let (c, _) = lazy_synthesize(
            &targets,
            &g,
            ResetPolicy::PerList,
            ResetSynth::ExactInverse,
            &db(),
            0,
        )
        .unwrap();
        let thetas = [0.4, 0.9];
        assert!(verify::circuit_matches_targets(&c, &targets, &thetas, 1e-9).unwrap().pass);
    }
}
