//! Pauli-network synthesizers and their shared routing machinery.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::arch::{CouplingGraph, SteinerResult};
use crate::cer::Cer;
use crate::circuit::{Angle, Circuit, Gate, Op, Rotation};
use crate::error::{Error, Result};
use crate::pauli::{Axis, PauliString};

pub mod compress;
pub mod ls;
pub mod mpls;
pub mod mpr;
pub mod ss;

pub use compress::compress_general;
pub use ls::lazy_synthesize;
pub use mpls::{mpls_synthesize, select_sublist};
pub use mpr::mpr_synthesize;
pub use ss::{order_for_cancellation, steiner_synthesize};

/// One Pauli exponential to implement: exp(i * angle * pauli).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Target {
    pub pauli: PauliString,
    pub angle: Angle,
}

impl Target {
    pub fn symbolic(pauli: PauliString, index: usize) -> Self {
        Target {
            pauli,
            angle: Angle::Symbolic { index, scale: 1.0 },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    Ss,
    Ls,
    Mpls,
    Mpr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ResetPolicy {
    AtEnd,
    PerList,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LeafChoice {
    Random,
    MinCnot,
}

/// Resynthesis used for the trailing Clifford when resetting at the end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ResetSynth {
    ExactInverse,
    PauliPair,
    Mpcs,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SynthesisConfig {
    pub method: Method,
    /// Generator cap for sublist selection (<= 4, the database limit).
    pub k_max: usize,
    /// Sublist length cap.
    pub k_prime_max: usize,
    pub reset_policy: ResetPolicy,
    pub leaf_choice: LeafChoice,
    pub immediate_implement: bool,
    /// Subgraph size at which compression stops and implementation database
    /// circuits take over; `None` stops at the rank of the committed prefix.
    pub implement_at: Option<usize>,
    pub reset_synth: ResetSynth,
    pub seed: u64,
}

impl SynthesisConfig {
    pub fn new(method: Method) -> Self {
        SynthesisConfig {
            method,
            k_max: 3,
            k_prime_max: 8,
            reset_policy: ResetPolicy::AtEnd,
            leaf_choice: LeafChoice::Random,
            immediate_implement: true,
            implement_at: None,
            reset_synth: match method {
                Method::Ss => ResetSynth::ExactInverse,
                Method::Ls => ResetSynth::PauliPair,
                Method::Mpls | Method::Mpr => ResetSynth::Mpcs,
            },
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k_max == 0 || self.k_max > 4 {
            return Err(Error::InvalidInput("k_max must be in 1..=4".into()));
        }
        if self.k_prime_max < self.k_max {
            return Err(Error::InvalidInput("k_prime_max must be >= k_max".into()));
        }
        if let Some(at) = self.implement_at {
            if at == 0 || at > 4 {
                return Err(Error::InvalidInput("implement_at must be in 1..=4".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SynthesisReport {
    pub total_cnots: usize,
    pub cnots_excluding_final_clifford: usize,
    pub depth: usize,
    /// Op index of each target's rotation; None for skipped identity targets.
    pub implementation_positions: Vec<Option<usize>>,
    /// Targets skipped because they act trivially (global phase only).
    pub skipped: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_time_ms: Option<f64>,
}

impl SynthesisReport {
    pub fn from_circuit(circuit: &Circuit, n_targets: usize) -> Self {
        let mut positions = vec![None; n_targets];
        for (i, op) in circuit.ops.iter().enumerate() {
            if let Op::Rotation(r) = op {
                positions[r.implements] = Some(i);
            }
        }
        let skipped = positions
            .iter()
            .enumerate()
            .filter(|(_, p)| p.is_none())
            .map(|(i, _)| i)
            .collect();
        SynthesisReport {
            total_cnots: circuit.cnot_count(),
            cnots_excluding_final_clifford: circuit.cnot_count_excluding_final_clifford(),
            depth: circuit.depth(),
            implementation_positions: positions,
            skipped,
            wall_time_ms: None,
        }
    }
}

/// Dispatch over the Pauli-network methods. MPR takes an excitation, not a
/// target list; see [`mpr::mpr_synthesize`].
pub fn synthesize(
    targets: &[Target],
    graph: &CouplingGraph,
    db: &crate::db::CliffordDb,
    cfg: &SynthesisConfig,
) -> Result<(Circuit, SynthesisReport)> {
    cfg.validate()?;
    match cfg.method {
        Method::Ss => steiner_synthesize(targets, graph),
        Method::Ls => lazy_synthesize(targets, graph, cfg.reset_policy, cfg.reset_synth, db, cfg.seed),
        Method::Mpls => mpls_synthesize(targets, graph, db, cfg),
        Method::Mpr => Err(Error::InvalidInput(
            "mpr synthesizes a double excitation; call mpr_synthesize".into(),
        )),
    }
}

/// Embed logical targets onto physical qubits. `layout[q]` is the physical
/// qubit hosting logical qubit q; identity when absent.
pub fn place_targets(targets: &[Target], n_phys: usize, layout: Option<&[usize]>) -> Result<Vec<Target>> {
    targets
        .iter()
        .map(|t| {
            let pauli = match layout {
                None => {
                    if t.pauli.n() != n_phys {
                        t.pauli.embed(n_phys, &(0..t.pauli.n()).collect::<Vec<_>>())?
                    } else {
                        t.pauli.clone()
                    }
                }
                Some(map) => {
                    if map.len() < t.pauli.n() {
                        return Err(Error::InvalidInput("layout shorter than target width".into()));
                    }
                    t.pauli.embed(n_phys, &map[..t.pauli.n()])?
                }
            };
            Ok(Target {
                pauli,
                angle: t.angle,
            })
        })
        .collect()
}

/// Mutable synthesis state: the running tableau plus the emitted circuit.
pub(crate) struct Builder<'g> {
    pub graph: &'g CouplingGraph,
    pub cer: Cer,
    pub circuit: Circuit,
}

impl<'g> Builder<'g> {
    pub fn new(graph: &'g CouplingGraph) -> Self {
        let n = graph.n_phys();
        Builder {
            graph,
            cer: Cer::identity(n),
            circuit: Circuit::new(n),
        }
    }

    pub fn apply(&mut self, gate: Gate) -> Result<()> {
        self.cer.apply_gate_mut(gate)?;
        self.circuit.push_gate(gate);
        Ok(())
    }

    pub fn apply_all(&mut self, gates: &[Gate]) -> Result<()> {
        for &g in gates {
            self.apply(g)?;
        }
        Ok(())
    }

    /// Emit the rotation implementing `target` from register (q, axis),
    /// folding a register sign mismatch into the rotation sign.
    pub fn rotate(&mut self, index: usize, target: &Target, q: usize, axis: Axis) -> Result<()> {
        let register = self.cer.register(q, axis)?;
        if !register.same_letters(&target.pauli) {
            return Err(Error::InvalidInput(format!(
                "register ({q}, {axis:?}) holds {register}, expected ±{}",
                target.pauli
            )));
        }
        let flipped = register.sign()? != target.pauli.sign()?;
        self.circuit.push_rotation(Rotation {
            axis,
            qubit: q,
            angle: target.angle,
            sign: if flipped { -1 } else { 1 },
            implements: index,
        });
        Ok(())
    }
}

/// Gates turning the Z register of `q` into its current `axis` register, with
/// a plus sign.
pub(crate) fn basis_gates_to_z(axis: Axis, q: usize) -> Vec<Gate> {
    match axis {
        Axis::Z => vec![],
        Axis::X => vec![Gate::H(q)],
        Axis::Y => vec![Gate::Sdg(q), Gate::H(q)],
    }
}

/// Gates turning the X register of `q` into its current `axis` register
/// (sign possibly flipped; callers fold signs later). The Z register of `q`
/// is preserved when axis is X or Y.
pub(crate) fn basis_gates_to_x(axis: Axis, q: usize) -> Vec<Gate> {
    match axis {
        Axis::X => vec![],
        Axis::Z => vec![Gate::H(q)],
        Axis::Y => vec![Gate::S(q)],
    }
}

pub(crate) struct RootedTree {
    pub parent: BTreeMap<usize, usize>,
    /// Non-root nodes in BFS order from the root.
    pub top_down: Vec<usize>,
}

pub(crate) fn root_tree(tree: &SteinerResult, root: usize) -> RootedTree {
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(u, v) in &tree.tree_edges {
        adj.entry(u).or_default().push(v);
        adj.entry(v).or_default().push(u);
    }
    for a in adj.values_mut() {
        a.sort_unstable();
    }
    let mut parent = BTreeMap::new();
    let mut top_down = Vec::new();
    let mut seen = BTreeSet::from([root]);
    let mut queue = std::collections::VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        if let Some(neigh) = adj.get(&u) {
            for &v in neigh {
                if seen.insert(v) {
                    parent.insert(v, u);
                    top_down.push(v);
                    queue.push_back(v);
                }
            }
        }
    }
    RootedTree { parent, top_down }
}

/// CNOT cascade folding the Z registers of `terminals` into the root's Z
/// register along the tree. Non-terminal tree nodes are pre-planted into
/// their parent so their own contribution cancels during the upward merge.
pub(crate) fn z_fold_gates(tree: &SteinerResult, root: usize) -> Vec<Gate> {
    let rooted = root_tree(tree, root);
    let mut gates = Vec::new();
    for &v in &rooted.top_down {
        if !tree.terminals.contains(&v) {
            gates.push(Gate::Cnot(v, rooted.parent[&v]));
        }
    }
    for &v in rooted.top_down.iter().rev() {
        gates.push(Gate::Cnot(v, rooted.parent[&v]));
    }
    gates
}

/// Mirror cascade folding X registers into the root (control side
/// accumulates X rows).
pub(crate) fn x_fold_gates(tree: &SteinerResult, root: usize) -> Vec<Gate> {
    let rooted = root_tree(tree, root);
    let mut gates = Vec::new();
    for &v in &rooted.top_down {
        if !tree.terminals.contains(&v) {
            gates.push(Gate::Cnot(rooted.parent[&v], v));
        }
    }
    for &v in rooted.top_down.iter().rev() {
        gates.push(Gate::Cnot(rooted.parent[&v], v));
    }
    gates
}

/// Reduce the decomposition support of `pauli` to a single qubit: per-qubit
/// basis changes onto the Z register, then a Steiner-tree cascade to the
/// lowest-id support qubit. Returns the root; afterwards the root's Z
/// register equals ±pauli.
pub(crate) fn reduce_to_z_register(
    builder: &mut Builder,
    allowed: Option<&BTreeSet<usize>>,
    pauli: &PauliString,
) -> Result<usize> {
    let d = builder.cer.decompose(pauli)?;
    let support = d.support();
    if support.is_empty() {
        return Err(Error::InvalidInput("cannot place an identity operator".into()));
    }
    for &q in &support {
        let gates = basis_gates_to_z(d.axes[q].expect("support"), q);
        builder.apply_all(&gates)?;
    }
    let tree = builder.graph.steiner_tree_within(allowed, &support)?;
    let root = *support.iter().min().expect("nonempty");
    let gates = z_fold_gates(&tree, root);
    builder.apply_all(&gates)?;
    let register = builder.cer.register(root, Axis::Z)?;
    debug_assert!(register.same_letters(pauli), "fold must land the target on the root");
    Ok(root)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z_fold_collects_terminals_only() {
        // Path of 5, terminals {0, 4}: after the fold the root's Z register
        // holds Z...Z only over the terminals.
        let g = CouplingGraph::path(5);
        let tree = g.steiner_tree(&[0, 4]).unwrap();
        let gates = z_fold_gates(&tree, 0);
        let cer = Cer::from_gates(5, &gates).unwrap();
        assert_eq!(cer.z_row(0), &"ZIIIZ".parse().unwrap());
    }

    #[test]
    fn z_fold_on_star_with_steiner_center() {
        let g = CouplingGraph::new(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let tree = g.steiner_tree(&[1, 2, 3]).unwrap();
        let gates = z_fold_gates(&tree, 1);
        let cer = Cer::from_gates(4, &gates).unwrap();
        assert_eq!(cer.z_row(1), &"IZZZ".parse().unwrap());
    }

    #[test]
    fn x_fold_mirrors_z_fold() {
        let g = CouplingGraph::path(5);
        let tree = g.steiner_tree(&[1, 3]).unwrap();
        let gates = x_fold_gates(&tree, 3);
        let cer = Cer::from_gates(5, &gates).unwrap();
        assert_eq!(cer.x_row(3), &"IXIXI".parse().unwrap());
    }

    #[test]
    fn basis_changes_expose_requested_register() {
        for axis in Axis::ALL {
            let gates = basis_gates_to_z(axis, 0);
            let cer = Cer::from_gates(1, &gates).unwrap();
            let expect = PauliString::from_axis(1, 0, axis).unwrap();
            assert_eq!(cer.z_row(0), &expect, "to_z {axis:?}");

            let gates = basis_gates_to_x(axis, 0);
            let cer = Cer::from_gates(1, &gates).unwrap();
            assert!(cer.x_row(0).same_letters(&expect), "to_x {axis:?}");
            if axis != Axis::X {
                // Z register untouched when coming from X or Y.
                if axis == Axis::Y {
                    assert_eq!(cer.z_row(0), &PauliString::from_axis(1, 0, Axis::Z).unwrap());
                }
            }
        }
    }
}
