//! Architecture-aware Clifford resynthesis: the pauli-pair baseline and
//! multi-Pauli Clifford synthesis, each ordered and up to an output
//! permutation of the logical qubits.
//!
//! The synthesis appends gates to the source tableau until it becomes the
//! tableau of a qubit relabeling (the identity for ordered variants), one
//! settled physical qubit at a time. The returned circuit is the inverse of
//! those gates and therefore realizes the source tableau itself.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arch::CouplingGraph;
use crate::cer::Cer;
use crate::circuit::{Circuit, Gate};
use crate::db::{local_clifford_on, local_clifford_words, CliffordDb, DbTask};
use crate::error::{Error, Result};
use crate::pauli::{Axis, PauliString};
use crate::synth::{basis_gates_to_x, basis_gates_to_z, x_fold_gates, z_fold_gates, ResetSynth};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CliffordVariant {
    PauliPair,
    PauliPairUnordered,
    Mpcs,
    MpcsUnordered,
}

impl CliffordVariant {
    fn ordered(self) -> bool {
        matches!(self, CliffordVariant::PauliPair | CliffordVariant::Mpcs)
    }

    fn multi_pauli(self) -> bool {
        matches!(self, CliffordVariant::Mpcs | CliffordVariant::MpcsUnordered)
    }
}

#[derive(Debug, Clone)]
pub struct CliffordSpec<'a> {
    pub source: Cer,
    pub graph: &'a CouplingGraph,
    pub variant: CliffordVariant,
    /// Logical qubits settled per round (1 or 2; 2 needs 4-pattern database
    /// tasks).
    pub k: usize,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct CliffordSynthesis {
    /// Circuit realizing the source tableau (up to the permutation).
    pub circuit: Circuit,
    /// Gates that, appended to the source tableau, reset it to the
    /// permutation tableau; the exact inverse of `circuit`.
    pub reset: Vec<Gate>,
    /// permutation[logical] = physical output qubit.
    pub permutation: Vec<usize>,
}

/// Gates resetting `cer` to the identity tableau via an ordered resynthesis.
pub fn reset_gates(
    cer: &Cer,
    graph: &CouplingGraph,
    synth: ResetSynth,
    db: &CliffordDb,
    seed: u64,
) -> Result<Vec<Gate>> {
    let variant = match synth {
        ResetSynth::ExactInverse => {
            return Err(Error::InvalidInput(
                "exact inverse resetting needs the original gate list".into(),
            ))
        }
        ResetSynth::PauliPair => CliffordVariant::PauliPair,
        ResetSynth::Mpcs => CliffordVariant::Mpcs,
    };
    let spec = CliffordSpec {
        source: cer.clone(),
        graph,
        variant,
        k: 1,
        seed,
    };
    Ok(synthesize_clifford(&spec, db)?.reset)
}

pub fn synthesize_clifford(spec: &CliffordSpec, db: &CliffordDb) -> Result<CliffordSynthesis> {
    let n = spec.graph.n_phys();
    if spec.source.n() != n {
        return Err(Error::DimensionMismatch(spec.source.n(), n));
    }
    if !spec.graph.is_connected() {
        return Err(Error::DisconnectedGraph);
    }
    if !(1..=2).contains(&spec.k) {
        return Err(Error::InvalidInput("k must be 1 or 2".into()));
    }
    if !spec.source.is_valid() {
        return Err(Error::InvalidInput("source tableau is not symplectically valid".into()));
    }
    let mut cer = spec.source.clone();
    let mut gates: Vec<Gate> = Vec::new();
    let mut remaining: BTreeSet<usize> = (0..n).collect();
    let mut logical_remaining: BTreeSet<usize> = (0..n).collect();
    let mut permutation = vec![usize::MAX; n];
    let mut round = 0usize;

    while !remaining.is_empty() {
        round += 1;
        let mut committed = false;
        if spec.k == 2 && remaining.len() >= 2 {
            if let Some((pair_logical, pair_physical, ops)) =
                best_pair_round(spec, db, &cer, &remaining, &logical_remaining, round)?
            {
                apply_all(&mut cer, &mut gates, &ops)?;
                for (q, q_phys) in pair_logical.iter().zip(&pair_physical) {
                    logical_remaining.remove(q);
                    remaining.remove(q_phys);
                    permutation[*q] = *q_phys;
                }
                committed = true;
            }
            // No valid pair: fall back to settling a single qubit this round.
        }
        if !committed {
            let (q, q_phys, ops) =
                best_single_round(spec, db, &cer, &remaining, &logical_remaining, round)?;
            apply_all(&mut cer, &mut gates, &ops)?;
            logical_remaining.remove(&q);
            remaining.remove(&q_phys);
            permutation[q] = q_phys;
        }
    }

    // The tableau must now be the relabeling tableau with plus signs.
    for (q, &q_phys) in permutation.iter().enumerate() {
        let z = PauliString::from_axis(n, q, Axis::Z)?;
        let x = PauliString::from_axis(n, q, Axis::X)?;
        if cer.z_row(q_phys) != &z || cer.x_row(q_phys) != &x {
            return Err(Error::InvalidInput(format!(
                "synthesis did not settle logical {q} on physical {q_phys}"
            )));
        }
    }
    let mut circuit = Circuit::new(n);
    circuit.push_gates(&Circuit::inverse_gates(&gates));
    Ok(CliffordSynthesis {
        circuit,
        reset: gates,
        permutation,
    })
}

fn apply_all(cer: &mut Cer, sink: &mut Vec<Gate>, ops: &[Gate]) -> Result<()> {
    for &g in ops {
        cer.apply_gate_mut(g)?;
        sink.push(g);
    }
    Ok(())
}

/// Pick the cheapest (logical, physical) settlement this round, comparing the
/// pauli-pair route and (for multi-Pauli variants) the database-compression
/// route per candidate. Dominated candidates are skipped early via a support
/// lower bound that never exceeds the true cost.
fn best_single_round(
    spec: &CliffordSpec,
    db: &CliffordDb,
    cer: &Cer,
    remaining: &BTreeSet<usize>,
    logical_remaining: &BTreeSet<usize>,
    round: usize,
) -> Result<(usize, usize, Vec<Gate>)> {
    let physical: Vec<usize> = spec.graph.non_cut_within(remaining);
    let mut best: Option<(usize, usize, usize, Vec<Gate>)> = None;
    for &q_phys in &physical {
        let logicals: Vec<usize> = if spec.variant.ordered() {
            vec![q_phys]
        } else {
            logical_remaining.iter().copied().collect()
        };
        for q in logicals {
            if let Some((cost, _, _, _)) = &best {
                if settle_lower_bound(cer, q)? >= *cost {
                    continue;
                }
            }
            let route_a = pauli_pair_route(cer, spec.graph, remaining, q, q_phys)?;
            consider(&mut best, route_a, q, q_phys);
            if spec.variant.multi_pauli() {
                let mut route_rng =
                    ChaCha8Rng::seed_from_u64(spec.seed ^ hash3(round, q, q_phys));
                match compress_route(cer, spec.graph, db, remaining, &[q], &[q_phys], &mut route_rng)
                {
                    Ok(route_b) => consider(&mut best, route_b, q, q_phys),
                    Err(Error::DbSearchExhausted { .. }) => {}
                    Err(e) => return Err(e),
                }
            }
        }
    }
    let (_, q, q_phys, ops) =
        best.ok_or_else(|| Error::InvalidInput("no settleable qubit found".into()))?;
    Ok((q, q_phys, ops))
}

fn consider(best: &mut Option<(usize, usize, usize, Vec<Gate>)>, ops: Vec<Gate>, q: usize, q_phys: usize) {
    let cost = ops.iter().filter(|g| g.is_cnot()).count();
    let replace = match best {
        None => true,
        Some((c, bq, bq_phys, _)) => (cost, q, q_phys) < (*c, *bq, *bq_phys),
    };
    if replace {
        *best = Some((cost, q, q_phys, ops));
    }
}

/// Sound lower bound on settling cost: a CNOT changes the decomposition of a
/// fixed Pauli only at its two endpoints, so shrinking the Z row's support
/// from s qubits to one takes at least ceil((s - 1) / 2) CNOTs.
fn settle_lower_bound(cer: &Cer, q: usize) -> Result<usize> {
    let z = PauliString::from_axis(cer.n(), q, Axis::Z)?;
    let support = cer.decompose(&z)?.support();
    Ok(support.len().saturating_sub(1).div_ceil(2))
}

/// Settle logical q on physical q_phys by implementing Z then X, Pauli by
/// Pauli: diagonalize the decomposition support, cascade to the destination,
/// and fix residual signs with local Paulis.
fn pauli_pair_route(
    cer: &Cer,
    graph: &CouplingGraph,
    remaining: &BTreeSet<usize>,
    q: usize,
    q_phys: usize,
) -> Result<Vec<Gate>> {
    let n = cer.n();
    let mut cer = cer.clone();
    let mut gates = Vec::new();
    let emit = |cer: &mut Cer, gs: &[Gate], gates: &mut Vec<Gate>| -> Result<()> {
        for &g in gs {
            cer.apply_gate_mut(g)?;
            gates.push(g);
        }
        Ok(())
    };

    // Z phase: land ±Z_q on the Z register of q_phys.
    let zq = PauliString::from_axis(n, q, Axis::Z)?;
    let d = cer.decompose(&zq)?;
    let support = d.support();
    debug_assert!(!support.is_empty());
    for &u in &support {
        let gs = basis_gates_to_z(d.axes[u].expect("support"), u);
        emit(&mut cer, &gs, &mut gates)?;
    }
    let root = if support.contains(&q_phys) {
        q_phys
    } else {
        *support.iter().min().expect("nonempty")
    };
    let fold_tree = graph.steiner_tree_within(Some(remaining), &support)?;
    let gs = z_fold_gates(&fold_tree, root);
    emit(&mut cer, &gs, &mut gates)?;
    if root != q_phys {
        // Move the settled register to the destination with a swap chain.
        let path = graph.path_between(Some(remaining), root, q_phys)?;
        for w in path.windows(2) {
            for g in [Gate::Cnot(w[0], w[1]), Gate::Cnot(w[1], w[0]), Gate::Cnot(w[0], w[1])] {
                emit(&mut cer, &[g], &mut gates)?;
            }
        }
    }
    debug_assert!(cer.z_row(q_phys).same_letters(&zq));

    // X phase: land ±X_q on the X register of q_phys without disturbing the
    // settled Z row.
    let xq = PauliString::from_axis(n, q, Axis::X)?;
    let d = cer.decompose(&xq)?;
    debug_assert!(matches!(d.axes[q_phys], Some(Axis::X) | Some(Axis::Y)));
    for &u in &d.support() {
        let axis = d.axes[u].expect("support");
        let gs = if u == q_phys {
            match axis {
                Axis::X => vec![],
                Axis::Y => vec![Gate::S(u)],
                Axis::Z => unreachable!("X_q anticommutes with the settled Z row"),
            }
        } else {
            basis_gates_to_x(axis, u)
        };
        emit(&mut cer, &gs, &mut gates)?;
    }
    let support = cer.decompose(&xq)?.support();
    let tree_x = graph.steiner_tree_within(Some(remaining), &support)?;
    let gs = x_fold_gates(&tree_x, q_phys);
    emit(&mut cer, &gs, &mut gates)?;

    // Residual sign fixes are free of CNOTs.
    if cer.z_row(q_phys).sign()? < 0 {
        emit(&mut cer, &[Gate::X(q_phys)], &mut gates)?;
    }
    if cer.x_row(q_phys).sign()? < 0 {
        emit(&mut cer, &[Gate::Z(q_phys)], &mut gates)?;
    }
    if cer.z_row(q_phys) != &zq || cer.x_row(q_phys) != &xq {
        return Err(Error::InvalidInput(format!(
            "pauli-pair settlement failed for logical {q} on physical {q_phys}"
        )));
    }
    Ok(gates)
}

/// Settle one or two logical qubits by compressing their Z/X rows onto the
/// destination nodes with database windows, then fixing registers locally
/// (one qubit) or with a simultaneous-implementation entry (two qubits).
fn compress_route(
    cer: &Cer,
    graph: &CouplingGraph,
    db: &CliffordDb,
    remaining: &BTreeSet<usize>,
    logicals: &[usize],
    destinations: &[usize],
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Gate>> {
    let n = cer.n();
    let mut cer = cer.clone();
    let mut gates: Vec<Gate> = Vec::new();
    let paulis: Vec<PauliString> = logicals
        .iter()
        .flat_map(|&q| {
            [
                PauliString::from_axis(n, q, Axis::Z).expect("range"),
                PauliString::from_axis(n, q, Axis::X).expect("range"),
            ]
        })
        .collect();
    let dest: BTreeSet<usize> = destinations.iter().copied().collect();
    let window_size = paulis.len() + 1;
    let mut allowed = remaining.clone();
    loop {
        let mut terminals: BTreeSet<usize> = dest.clone();
        for p in &paulis {
            terminals.extend(cer.decompose(p)?.support());
        }
        let tree = graph.steiner_tree_within(
            Some(&allowed),
            &terminals.iter().copied().collect::<Vec<_>>(),
        )?;
        let active = tree.nodes;
        if active.len() <= dest.len() {
            break;
        }
        allowed = active.clone();
        let candidates: Vec<usize> = graph
            .non_cut_within(&active)
            .into_iter()
            .filter(|v| !dest.contains(v))
            .collect();
        if candidates.is_empty() {
            return Err(Error::InvalidInput("no removable node in active subgraph".into()));
        }
        let decomps: Vec<crate::cer::Decomposition> = paulis
            .iter()
            .map(|p| cer.decompose(p))
            .collect::<Result<_>>()?;
        // Random leaf selection, matching the experiment protocols.
        let v = candidates[rng.gen_range(0..candidates.len())];
        match build_compress_task(graph, &active, v, &decomps, window_size)? {
            None => {
                // Nothing decomposes over v: dropping it from the active set
                // is free.
            }
            Some(task) => {
                let ops = db.lookup_or_generate(&task)?;
                for &g in &ops {
                    cer.apply_gate_mut(g)?;
                }
                gates.extend(ops);
            }
        }
        allowed.remove(&v);
    }

    // Registers now carry the pair(s) on the destination nodes.
    if logicals.len() == 1 {
        let fix = local_fix(&cer, logicals[0], destinations[0])?;
        for &g in &fix {
            cer.apply_gate_mut(g)?;
        }
        gates.extend(fix);
    } else {
        let dvec: Vec<usize> = dest.iter().copied().collect();
        let decomps: Vec<crate::cer::Decomposition> = paulis
            .iter()
            .map(|p| cer.decompose(p))
            .collect::<Result<_>>()?;
        let window: Vec<usize> = dvec.clone();
        let edges = index_edges(graph, &window);
        let patterns: Vec<PauliString> = decomps
            .iter()
            .map(|d| pattern_over(d, &window))
            .collect::<Result<_>>()?;
        let required: Vec<usize> = destinations
            .iter()
            .map(|d| window.iter().position(|w| w == d).expect("dest in window"))
            .collect();
        let task = DbTask::simultaneous(window, edges, patterns, required);
        let ops = db.lookup_or_generate(&task)?;
        for &g in &ops {
            cer.apply_gate_mut(g)?;
        }
        gates.extend(ops);
        for (q, d) in logicals.iter().zip(destinations) {
            let fix = local_fix(&cer, *q, *d)?;
            for &g in &fix {
                cer.apply_gate_mut(g)?;
            }
            gates.extend(fix);
        }
    }
    for (q, d) in logicals.iter().zip(destinations) {
        let z = PauliString::from_axis(n, *q, Axis::Z)?;
        let x = PauliString::from_axis(n, *q, Axis::X)?;
        if cer.z_row(*d) != &z || cer.x_row(*d) != &x {
            return Err(Error::InvalidInput(format!(
                "compression settlement failed for logical {q} on physical {d}"
            )));
        }
    }
    Ok(gates)
}

/// Local-window compress task clearing node `v`: the window is v plus its
/// BFS-closest connected neighborhood, sized so the theorem guarantees a
/// solution (patterns + 1 nodes when available).
fn build_compress_task(
    graph: &CouplingGraph,
    active: &BTreeSet<usize>,
    v: usize,
    decomps: &[crate::cer::Decomposition],
    window_size: usize,
) -> Result<Option<DbTask>> {
    let mut rest: BTreeSet<usize> = active.clone();
    rest.remove(&v);
    let seed = graph
        .neighbors(v)
        .iter()
        .copied()
        .find(|u| rest.contains(u))
        .ok_or_else(|| Error::InvalidInput("removal candidate has no active neighbor".into()))?;
    let mut window: Vec<usize> = vec![v];
    let mut seen = BTreeSet::from([seed]);
    let mut queue = std::collections::VecDeque::from([seed]);
    let mut collected = vec![seed];
    while let Some(u) = queue.pop_front() {
        if collected.len() >= window_size - 1 {
            break;
        }
        for &w in graph.neighbors(u) {
            if rest.contains(&w) && seen.insert(w) {
                collected.push(w);
                queue.push_back(w);
                if collected.len() >= window_size - 1 {
                    break;
                }
            }
        }
    }
    window.extend(collected);
    window.sort_unstable();
    let patterns: Vec<PauliString> = decomps
        .iter()
        .map(|d| pattern_over(d, &window))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|p| p.weight() > 0)
        .collect();
    if patterns.iter().all(|p| {
        let vi = window.iter().position(|&w| w == v).expect("v in window");
        p.letter(vi) == crate::pauli::Letter::I
    }) {
        return Ok(None);
    }
    let vi = window.iter().position(|&w| w == v).expect("v in window");
    let edges = index_edges(graph, &window);
    Ok(Some(DbTask::compress(window, edges, patterns, vi)))
}

/// The axis pattern of a decomposition restricted to `window`, as a local
/// sign-free Pauli.
fn pattern_over(d: &crate::cer::Decomposition, window: &[usize]) -> Result<PauliString> {
    let mut p = PauliString::identity(window.len());
    for (i, &q) in window.iter().enumerate() {
        if let Some(axis) = d.axes[q] {
            p.set_letter(i, axis.into());
        }
    }
    Ok(p)
}

fn index_edges(graph: &CouplingGraph, window: &[usize]) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for (i, &u) in window.iter().enumerate() {
        for (j, &v) in window.iter().enumerate().skip(i + 1) {
            if graph.has_edge(u, v) {
                edges.push((i, j));
            }
        }
    }
    edges
}

/// Find the (unique) local Clifford putting +Z_q on the Z register and +X_q
/// on the X register of the destination.
fn local_fix(cer: &Cer, q: usize, dest: usize) -> Result<Vec<Gate>> {
    let n = cer.n();
    let z = PauliString::from_axis(n, q, Axis::Z)?;
    let x = PauliString::from_axis(n, q, Axis::X)?;
    for idx in 0..local_clifford_words().len() {
        let word = local_clifford_on(idx, dest);
        let mut probe = cer.clone();
        for &g in &word {
            probe.apply_gate_mut(g)?;
        }
        if probe.z_row(dest) == &z && probe.x_row(dest) == &x {
            return Ok(word);
        }
        // The {H, S} words cover the group only up to signs; append Pauli
        // fixes when the letters match.
        if probe.z_row(dest).same_letters(&z) && probe.x_row(dest).same_letters(&x) {
            let mut fixed = word.clone();
            if probe.z_row(dest).sign()? < 0 {
                fixed.push(Gate::X(dest));
                probe.apply_gate_mut(Gate::X(dest))?;
            }
            if probe.x_row(dest).sign()? < 0 {
                fixed.push(Gate::Z(dest));
                probe.apply_gate_mut(Gate::Z(dest))?;
            }
            if probe.z_row(dest) == &z && probe.x_row(dest) == &x {
                return Ok(fixed);
            }
        }
    }
    Err(Error::InvalidInput(format!(
        "no local fix settles logical {q} on physical {dest}"
    )))
}

fn hash3(a: usize, b: usize, c: usize) -> u64 {
    use std::hash::{Hash, Hasher};
    let mut h = std::collections::hash_map::DefaultHasher::new();
    (a, b, c).hash(&mut h);
    h.finish()
}

/// Candidate pair settlements for k = 2; `None` when no adjacent physical
/// pair keeps the remaining graph connected.
#[allow(clippy::type_complexity)]
fn best_pair_round(
    spec: &CliffordSpec,
    db: &CliffordDb,
    cer: &Cer,
    remaining: &BTreeSet<usize>,
    logical_remaining: &BTreeSet<usize>,
    round: usize,
) -> Result<Option<(Vec<usize>, Vec<usize>, Vec<Gate>)>> {
    let mut physical_pairs = Vec::new();
    for u in remaining {
        for v in remaining {
            if u < v && spec.graph.has_edge(*u, *v) {
                let rest: BTreeSet<usize> =
                    remaining.iter().copied().filter(|w| w != u && w != v).collect();
                if rest.is_empty() || spec.graph.connected_within(&rest) {
                    physical_pairs.push((*u, *v));
                }
            }
        }
    }
    if physical_pairs.is_empty() {
        return Ok(None);
    }
    let mut best: Option<(usize, Vec<usize>, Vec<usize>, Vec<Gate>)> = None;
    for &(pu, pv) in &physical_pairs {
        let logical_pairs: Vec<(usize, usize)> = if spec.variant.ordered() {
            vec![(pu, pv)]
        } else {
            let ls: Vec<usize> = logical_remaining.iter().copied().collect();
            let mut pairs = Vec::new();
            for &a in &ls {
                for &b in &ls {
                    if a != b {
                        pairs.push((a, b));
                    }
                }
            }
            pairs
        };
        for (a, b) in logical_pairs {
            let mut route_rng = ChaCha8Rng::seed_from_u64(spec.seed ^ hash3(round, a * 131 + b, pu * 131 + pv));
            match compress_route(cer, spec.graph, db, remaining, &[a, b], &[pu, pv], &mut route_rng) {
                Ok(ops) => {
                    let cost = ops.iter().filter(|g| g.is_cnot()).count();
                    let replace = match &best {
                        None => true,
                        Some((c, ..)) => cost < *c,
                    };
                    if replace {
                        best = Some((cost, vec![a, b], vec![pu, pv], ops));
                    }
                }
                Err(Error::DbSearchExhausted { .. }) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(best.map(|(_, l, p, ops)| (l, p, ops)))
}

/// Random Clifford circuit from the benchmark generator: K repetitions of a
/// random ordered qubit pair, an independent random 1-qubit Clifford on each,
/// then a CNOT across the pair. Deterministic for a fixed seed.
pub fn random_clifford_circuit(n: usize, k_cnots: usize, seed: u64) -> Circuit {
    assert!(n >= 2, "generator needs at least two qubits");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut circuit = Circuit::new(n);
    for _ in 0..k_cnots {
        let c = rng.gen_range(0..n);
        let mut t = rng.gen_range(0..n);
        if t == c {
            t = (t + 1) % n;
        }
        for q in [c, t] {
            let idx = rng.gen_range(0..24);
            circuit.push_gates(&local_clifford_on(idx, q));
        }
        circuit.push_gate(Gate::Cnot(c, t));
    }
    circuit
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{self, dense};

    fn db() -> CliffordDb {
        CliffordDb::new(1)
    }

    #[test]
    fn identity_source_needs_no_gates() {
        let g = CouplingGraph::path(4);
        let spec = CliffordSpec {
            source: Cer::identity(4),
            graph: &g,
            variant: CliffordVariant::PauliPair,
            k: 1,
            seed: 0,
        };
        let out = synthesize_clifford(&spec, &db()).unwrap();
        assert_eq!(out.circuit.cnot_count(), 0);
        assert_eq!(out.permutation, vec![0, 1, 2, 3]);
    }

    #[test]
    fn swap_source_unordered_costs_nothing() {
        let g = CouplingGraph::path(2);
        let swap = [Gate::Cnot(0, 1), Gate::Cnot(1, 0), Gate::Cnot(0, 1)];
        let source = Cer::from_gates(2, &swap).unwrap();
        let spec = CliffordSpec {
            source,
            graph: &g,
            variant: CliffordVariant::PauliPairUnordered,
            k: 1,
            seed: 0,
        };
        let out = synthesize_clifford(&spec, &db()).unwrap();
        assert_eq!(out.circuit.cnot_count(), 0);
        assert_eq!(out.permutation, vec![1, 0]);
    }

    #[test]
    fn ordered_synthesis_reproduces_the_tableau_exactly() {
        let g = CouplingGraph::path(5);
        let shared = db();
        for seed in 0..6 {
            let original = random_clifford_circuit(5, 12, seed);
            let source = Cer::from_circuit(&original).unwrap();
            for variant in [CliffordVariant::PauliPair, CliffordVariant::Mpcs] {
                let spec = CliffordSpec {
                    source: source.clone(),
                    graph: &g,
                    variant,
                    k: 1,
                    seed,
                };
                let out = synthesize_clifford(&spec, &shared).unwrap();
                let resynth = Cer::from_circuit(&out.circuit).unwrap();
                assert_eq!(resynth, source, "variant {variant:?} seed {seed}");
                assert!(verify::respects_connectivity(&out.circuit, &g));
                let u = dense::unitary(&original, &[]).unwrap();
                let v = dense::unitary(&out.circuit, &[]).unwrap();
                assert!(verify::equivalent_up_to_phase(&u, &v, 1e-9).unwrap().pass);
            }
        }
    }

    #[test]
    fn unordered_synthesis_matches_up_to_permutation() {
        let g = CouplingGraph::path(4);
        let shared = db();
        for seed in 0..6 {
            let original = random_clifford_circuit(4, 10, seed);
            let source = Cer::from_circuit(&original).unwrap();
            for variant in [CliffordVariant::PauliPairUnordered, CliffordVariant::MpcsUnordered] {
                let spec = CliffordSpec {
                    source: source.clone(),
                    graph: &g,
                    variant,
                    k: 1,
                    seed,
                };
                let out = synthesize_clifford(&spec, &shared).unwrap();
                // Appending the reset gates to the original circuit must give
                // exactly the qubit relabeling unitary.
                let mut composed = original.clone();
                composed.push_gates(&out.reset);
                let u = dense::unitary(&composed, &[]).unwrap();
                let p = dense::permutation_matrix(4, &out.permutation);
                assert!(
                    verify::equivalent_up_to_phase(&u, &p, 1e-9).unwrap().pass,
                    "variant {variant:?} seed {seed}"
                );
            }
        }
    }

    #[test]
    fn pair_compression_settles_two_qubits() {
        let g = CouplingGraph::path(4);
        let shared = db();
        let original = random_clifford_circuit(4, 6, 3);
        let source = Cer::from_circuit(&original).unwrap();
        let spec = CliffordSpec {
            source: source.clone(),
            graph: &g,
            variant: CliffordVariant::Mpcs,
            k: 2,
            seed: 9,
        };
        let out = synthesize_clifford(&spec, &shared).unwrap();
        assert_eq!(Cer::from_circuit(&out.circuit).unwrap(), source);
    }

    #[test]
    fn generator_produces_exact_cnot_count() {
        let c = random_clifford_circuit(5, 0, 1);
        assert_eq!(c.cnot_count(), 0);
        for k in [1, 5, 20] {
            let c = random_clifford_circuit(5, k, 42);
            assert_eq!(c.cnot_count(), k);
            assert!(Cer::from_circuit(&c).unwrap().is_valid());
        }
    }
}
