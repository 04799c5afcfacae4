//! Multi-Pauli resetted synthesis of a single double excitation: compress the
//! four generator monomials into four qubits with windowed database steps,
//! implement all eight commuting terms in batches of three, resynthesize the
//! implementation Clifford, and undo the compression exactly.

use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use crate::arch::CouplingGraph;
use crate::cer::Cer;
use crate::circuit::{Circuit, Gate, Op};
use crate::clifford_synth::{synthesize_clifford, CliffordSpec, CliffordVariant};
use crate::db::CliffordDb;
use crate::error::{Error, Result};
use crate::mapping::FermionMapping;
use crate::circuit::Angle;
use crate::synth::mpls::Engine;
use crate::synth::{LeafChoice, SynthesisReport, Target};

/// Targets for one double excitation with evolution parameter theta[index]:
/// eight commuting ±Pauli monomials, each rotated by -coeff/8 * theta.
pub fn double_excitation_targets(
    mapping: &FermionMapping,
    modes: (usize, usize, usize, usize),
    theta_index: usize,
    n_phys: usize,
    layout: Option<&[usize]>,
) -> Result<Vec<Target>> {
    let terms = mapping.double_excitation_terms(modes)?;
    let identity: Vec<usize> = (0..mapping.n_modes).collect();
    let map = layout.unwrap_or(&identity);
    if map.len() < mapping.n_modes {
        return Err(Error::InvalidInput("layout shorter than the mode count".into()));
    }
    terms
        .into_iter()
        .map(|(p, coeff)| {
            Ok(Target {
                pauli: p.embed(n_phys, &map[..mapping.n_modes])?,
                angle: Angle::Symbolic {
                    index: theta_index,
                    scale: -f64::from(coeff) / 8.0,
                },
            })
        })
        .collect()
}

pub fn mpr_synthesize(
    excitation: (usize, usize, usize, usize),
    mapping: &FermionMapping,
    graph: &CouplingGraph,
    layout: Option<&[usize]>,
    db: &CliffordDb,
    seed: u64,
) -> Result<(Circuit, SynthesisReport, Vec<Target>)> {
    let n = graph.n_phys();
    let targets = double_excitation_targets(mapping, excitation, 0, n, layout)?;
    let circuit = mpr_from_targets(&targets, graph, db, seed)?;
    let report = SynthesisReport::from_circuit(&circuit, targets.len());
    Ok((circuit, report, targets))
}

/// MPR over a precomputed commuting 8-term list.
pub fn mpr_from_targets(
    targets: &[Target],
    graph: &CouplingGraph,
    db: &CliffordDb,
    seed: u64,
) -> Result<Circuit> {
    let n = graph.n_phys();
    let mut engine = Engine::new(
        graph,
        db,
        targets,
        Cer::identity(n),
        (0..targets.len()).collect(),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Compression of the generator monomials into rank-many (four) qubits;
    // windows shift information from five active qubits onto four.
    while engine.compress_step(4, LeafChoice::Random, false, &mut rng)? {}
    let compression: Vec<Gate> = engine
        .ops
        .iter()
        .filter_map(|op| match op {
            Op::Gate(g) => Some(*g),
            _ => None,
        })
        .collect();
    let compression_end = engine.ops.len();

    // Batched implementation over the compressed subgraph.
    engine.implement_remaining(3)?;
    let implementation: Vec<Gate> = engine.ops[compression_end..]
        .iter()
        .filter_map(|op| match op {
            Op::Gate(g) => Some(*g),
            _ => None,
        })
        .collect();

    let mut circuit = Circuit::new(n);
    for op in &engine.ops {
        circuit.ops.push(op.clone());
    }

    // Resynthesize the implementation Clifford on its subgraph, append its
    // inverse, then undo the compression exactly.
    if !implementation.is_empty() {
        let mut nodes: std::collections::BTreeSet<usize> = std::collections::BTreeSet::new();
        for g in &implementation {
            nodes.extend(g.qubits());
        }
        let window: Vec<usize> = nodes.iter().copied().collect();
        let (local_graph, map) = graph.induced_subgraph(&window)?;
        let mut to_local = vec![usize::MAX; n];
        for (i, &q) in map.iter().enumerate() {
            to_local[q] = i;
        }
        let local_gates: Vec<Gate> = implementation.iter().map(|g| g.relabeled(&to_local)).collect();
        let local_cer = Cer::from_gates(local_graph.n_phys(), &local_gates)?;
        let spec = CliffordSpec {
            source: local_cer,
            graph: &local_graph,
            variant: CliffordVariant::Mpcs,
            k: 1,
            seed,
        };
        let resynth = synthesize_clifford(&spec, db)?;
        for g in &resynth.reset {
            circuit.push_gate(g.relabeled(&map));
        }
    }
    circuit.push_gates(&Circuit::inverse_gates(&compression));

    debug_assert_eq!(
        Cer::from_circuit_ignoring_rotations(&circuit)?,
        Cer::identity(n)
    );
    Ok(circuit)
}
