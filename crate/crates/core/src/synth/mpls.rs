//! Multi-Pauli lazy synthesis: sublist selection by rank, database-driven
//! compression of the generator patterns into a small subgraph, batched
//! implementation, and a min-CNOTs-per-Pauli commit rule.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arch::CouplingGraph;
use crate::cer::Cer;
use crate::circuit::{Circuit, Gate, Op, Rotation};
use crate::db::{CliffordDb, DbTask};
use crate::error::{Error, Result};
use crate::pauli::{gf2_generators, gf2_rank, PauliString};
use crate::synth::{
    Builder, LeafChoice, ResetPolicy, ResetSynth, SynthesisConfig, SynthesisReport, Target,
};

/// Longest prefix of `remaining` whose GF(2) rank stays within `k`, capped at
/// `k_prime` entries; also returns the in-prefix indices of a generating
/// subset (first occurrences of independent rows).
pub fn select_sublist(remaining: &[Target], k: usize, k_prime: usize) -> (usize, Vec<usize>) {
    let cap = remaining.len().min(k_prime);
    let mut len = 0;
    for next in 1..=cap {
        let paulis: Vec<PauliString> = remaining[..next].iter().map(|t| t.pauli.clone()).collect();
        if gf2_rank(&paulis) > k {
            break;
        }
        len = next;
    }
    let len = len.max(1.min(cap));
    let paulis: Vec<PauliString> = remaining[..len].iter().map(|t| t.pauli.clone()).collect();
    (len, gf2_generators(&paulis))
}

/// Shared compression/implementation engine over a cloned tableau. Ops are
/// recorded so a winning trial can be replayed onto the real state.
pub(crate) struct Engine<'a> {
    pub graph: &'a CouplingGraph,
    pub db: &'a CliffordDb,
    pub targets: &'a [Target],
    pub cer: Cer,
    pub ops: Vec<Op>,
    pub pending: Vec<usize>,
    allowed: Option<BTreeSet<usize>>,
}

impl<'a> Engine<'a> {
    pub fn new(
        graph: &'a CouplingGraph,
        db: &'a CliffordDb,
        targets: &'a [Target],
        cer: Cer,
        pending: Vec<usize>,
    ) -> Self {
        Engine {
            graph,
            db,
            targets,
            cer,
            ops: Vec::new(),
            pending,
            allowed: None,
        }
    }

    fn apply_gates(&mut self, gates: &[Gate]) -> Result<()> {
        for &g in gates {
            self.cer.apply_gate_mut(g)?;
            self.ops.push(Op::Gate(g));
        }
        Ok(())
    }

    pub fn cnots(&self) -> usize {
        self.ops
            .iter()
            .filter(|op| matches!(op, Op::Gate(g) if g.is_cnot()))
            .count()
    }

    /// Emit rotations for every pending target that sits in a register and
    /// whose pending predecessors all commute with it. Runs to a fixpoint.
    pub fn fire_implemented(&mut self) -> Result<usize> {
        let mut fired = 0;
        loop {
            let mut hit_at = None;
            'scan: for (pos, &t) in self.pending.iter().enumerate() {
                for &e in &self.pending[..pos] {
                    if !self.targets[e].pauli.commutes(&self.targets[t].pauli)? {
                        continue 'scan;
                    }
                }
                if let Some((qubit, axis, flipped)) = self.cer.find_register(&self.targets[t].pauli)? {
                    hit_at = Some((pos, t, qubit, axis, flipped));
                    break;
                }
            }
            let Some((pos, t, qubit, axis, flipped)) = hit_at else {
                return Ok(fired);
            };
            self.ops.push(Op::Rotation(Rotation {
                axis,
                qubit,
                angle: self.targets[t].angle,
                sign: if flipped { -1 } else { 1 },
                implements: t,
            }));
            self.pending.remove(pos);
            fired += 1;
        }
    }

    fn generator_decompositions(&self) -> Result<Vec<crate::cer::Decomposition>> {
        let paulis: Vec<PauliString> = self
            .pending
            .iter()
            .map(|&t| self.targets[t].pauli.clone())
            .collect();
        let generators = gf2_generators(&paulis);
        generators
            .iter()
            .map(|&gi| self.cer.decompose(&paulis[gi]))
            .collect()
    }

    /// Active subgraph: nodes of the Steiner tree over the union support of
    /// the pending generators (restricted to previously active nodes).
    fn active_subgraph(&self) -> Result<Option<BTreeSet<usize>>> {
        let decomps = self.generator_decompositions()?;
        let mut union: BTreeSet<usize> = BTreeSet::new();
        for d in &decomps {
            union.extend(d.support());
        }
        if union.is_empty() {
            return Ok(None);
        }
        let terminals: Vec<usize> = union.iter().copied().collect();
        let tree = self
            .graph
            .steiner_tree_within(self.allowed.as_ref(), &terminals)?;
        Ok(Some(tree.nodes))
    }

    /// Remove one node from the active subgraph via a compress-database
    /// window around it. Returns false when the active subgraph is already at
    /// or below `stop` nodes.
    pub fn compress_step(
        &mut self,
        stop: usize,
        leaf_choice: LeafChoice,
        immediate: bool,
        rng: &mut ChaCha8Rng,
    ) -> Result<bool> {
        if immediate {
            self.fire_implemented()?;
        }
        let Some(active) = self.active_subgraph()? else {
            return Ok(false);
        };
        if active.len() <= stop {
            self.allowed = Some(active);
            return Ok(false);
        }
        let candidates: Vec<usize> = self.graph.non_cut_within(&active);
        if candidates.is_empty() {
            return Err(Error::InvalidInput("active subgraph has no removable node".into()));
        }
        let decomps = self.generator_decompositions()?;
        let window_size = decomps.len() + 1;
        let v = match leaf_choice {
            LeafChoice::Random => candidates[rng.gen_range(0..candidates.len())],
            LeafChoice::MinCnot => {
                let mut best: Option<(usize, usize)> = None;
                for &cand in &candidates {
                    let cost = match build_window_task(self.graph, &active, cand, &decomps, window_size)? {
                        None => 0,
                        Some(task) => self.db.cost_of(&task)?,
                    };
                    if best.is_none_or(|(c, b)| (cost, cand) < (c, b)) {
                        best = Some((cost, cand));
                    }
                }
                best.expect("candidates nonempty").1
            }
        };
        if let Some(task) = build_window_task(self.graph, &active, v, &decomps, window_size)? {
            let gates = self.db.lookup_or_generate(&task)?;
            self.apply_gates(&gates)?;
        }
        let mut next_allowed = active;
        next_allowed.remove(&v);
        self.allowed = Some(next_allowed);
        if immediate {
            self.fire_implemented()?;
        }
        Ok(true)
    }

    /// Implement the remaining pending targets in batches of at most three
    /// via implementation database entries over the active subgraph,
    /// emitting rotations as registers appear during the replay.
    pub fn implement_remaining(&mut self, batch_cap: usize) -> Result<()> {
        loop {
            self.fire_implemented()?;
            if self.pending.is_empty() {
                return Ok(());
            }
            let Some(active) = self.active_subgraph()? else {
                // Pending targets but no support cannot happen for
                // non-identity targets.
                return Err(Error::InvalidInput("pending target without support".into()));
            };
            self.allowed = Some(active.clone());
            let batch: Vec<usize> = self.pending.iter().take(batch_cap).copied().collect();
            let window: Vec<usize> = active.iter().copied().collect();
            let mut patterns = Vec::new();
            for &t in &batch {
                let d = self.cer.decompose(&self.targets[t].pauli)?;
                patterns.push(pattern_over(&d, &window));
            }
            let edges = index_edges(self.graph, &window);
            let task = DbTask::implement(window, edges, patterns);
            let gates = self.db.lookup_or_generate(&task)?;
            let before = self.pending.len();
            for &g in &gates {
                self.cer.apply_gate_mut(g)?;
                self.ops.push(Op::Gate(g));
                self.fire_implemented()?;
            }
            if self.pending.len() >= before {
                return Err(Error::InvalidInput(
                    "implementation entry did not realize its batch".into(),
                ));
            }
        }
    }
}

pub(crate) fn pattern_over(d: &crate::cer::Decomposition, window: &[usize]) -> PauliString {
    let mut p = PauliString::identity(window.len());
    for (i, &q) in window.iter().enumerate() {
        if let Some(axis) = d.axes[q] {
            p.set_letter(i, axis.into());
        }
    }
    p
}

pub(crate) fn index_edges(graph: &CouplingGraph, window: &[usize]) -> Vec<(usize, usize)> {
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

/// Window task clearing node v: v plus its BFS-closest connected
/// neighborhood inside the active set, sized to patterns + 1 nodes. `None`
/// when no pattern decomposes over v (removal is free).
pub(crate) fn build_window_task(
    graph: &CouplingGraph,
    active: &BTreeSet<usize>,
    v: usize,
    decomps: &[crate::cer::Decomposition],
    window_size: usize,
) -> Result<Option<DbTask>> {
    if decomps.iter().all(|d| d.axes[v].is_none()) {
        return Ok(None);
    }
    let mut rest: BTreeSet<usize> = active.clone();
    rest.remove(&v);
    let seed = graph
        .neighbors(v)
        .iter()
        .copied()
        .find(|u| rest.contains(u))
        .ok_or_else(|| Error::InvalidInput("removal candidate has no active neighbor".into()))?;
    let mut collected = vec![seed];
    let mut seen = BTreeSet::from([seed]);
    let mut queue = std::collections::VecDeque::from([seed]);
    'grow: while let Some(u) = queue.pop_front() {
        for &w in graph.neighbors(u) {
            if collected.len() >= window_size - 1 {
                break 'grow;
            }
            if rest.contains(&w) && seen.insert(w) {
                collected.push(w);
                queue.push_back(w);
            }
        }
    }
    let mut window = collected;
    window.push(v);
    window.sort_unstable();
    let patterns: Vec<PauliString> = decomps
        .iter()
        .map(|d| pattern_over(d, &window))
        .filter(|p| p.weight() > 0)
        .collect();
    let vi = window.iter().position(|&w| w == v).expect("v in window");
    if patterns.iter().all(|p| p.letter(vi) == crate::pauli::Letter::I) {
        return Ok(None);
    }
    let edges = index_edges(graph, &window);
    Ok(Some(DbTask::compress(window, edges, patterns, vi)))
}

struct Trial {
    ops: Vec<Op>,
    cnots: usize,
}

fn run_trial(
    cer: &Cer,
    graph: &CouplingGraph,
    db: &CliffordDb,
    targets: &[Target],
    sublist: &[usize],
    cfg: &SynthesisConfig,
    seed: u64,
) -> Result<Trial> {
    let live: Vec<usize> = sublist
        .iter()
        .copied()
        .filter(|&t| targets[t].pauli.weight() > 0)
        .collect();
    let paulis: Vec<PauliString> = live.iter().map(|&t| targets[t].pauli.clone()).collect();
    let rank = gf2_rank(&paulis).max(1);
    let stop = cfg.implement_at.unwrap_or(rank).max(rank);
    let mut engine = Engine::new(graph, db, targets, cer.clone(), live.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if cfg.immediate_implement {
        engine.fire_implemented()?;
    }
    while engine.compress_step(stop, cfg.leaf_choice, cfg.immediate_implement, &mut rng)? {}
    engine.implement_remaining(3)?;
    Ok(Trial {
        cnots: engine.cnots(),
        ops: engine.ops,
    })
}

pub fn mpls_synthesize(
    targets: &[Target],
    graph: &CouplingGraph,
    db: &CliffordDb,
    cfg: &SynthesisConfig,
) -> Result<(Circuit, SynthesisReport)> {
    cfg.validate()?;
    let mut builder = Builder::new(graph);
    let mut next = 0usize;
    let mut round = 0usize;
    while next < targets.len() {
        if targets[next].pauli.weight() == 0 {
            next += 1;
            continue;
        }
        targets[next].pauli.sign()?;
        round += 1;
        let remaining = &targets[next..];
        let (prefix_len, _) = select_sublist(remaining, cfg.k_max, cfg.k_prime_max);
        let sublist: Vec<usize> = (next..next + prefix_len).collect();

        // Trial-synthesize every sublist length on cloned state and commit
        // the one minimizing CNOTs per implemented Pauli (ties toward more
        // Paulis per Clifford).
        let mut best: Option<(usize, usize, Trial)> = None;
        let mut last_err = None;
        for i in 1..=prefix_len {
            let seed = trial_seed(cfg.seed, round, i);
            match run_trial(&builder.cer, graph, db, targets, &sublist[..i], cfg, seed) {
                Ok(trial) => {
                    let replace = match &best {
                        None => true,
                        Some((bc, bi, _)) => {
                            let (lhs, rhs) = (trial.cnots * bi, bc * i);
                            lhs < rhs || (lhs == rhs && i > *bi)
                        }
                    };
                    if replace {
                        best = Some((trial.cnots, i, trial));
                    }
                }
                Err(e @ Error::DbSearchExhausted { .. }) => last_err = Some(e),
                Err(e) => return Err(e),
            }
        }
        let Some((_, i_star, trial)) = best else {
            return Err(last_err.expect("either a trial or an error"));
        };
        let span_start = builder.circuit.ops.len();
        for op in trial.ops {
            match op {
                Op::Gate(g) => builder.apply(g)?,
                Op::Rotation(r) => builder.circuit.push_rotation(r),
            }
        }
        next += i_star;

        if cfg.reset_policy == ResetPolicy::PerList {
            let span: Vec<Gate> = builder.circuit.ops[span_start..]
                .iter()
                .filter_map(|op| match op {
                    Op::Gate(g) => Some(*g),
                    _ => None,
                })
                .collect();
            builder.apply_all(&Circuit::inverse_gates(&span))?;
        }
    }
    if cfg.reset_policy == ResetPolicy::AtEnd {
        let reset = match cfg.reset_synth {
            ResetSynth::ExactInverse => {
                let gates: Vec<Gate> = builder.circuit.gates().copied().collect();
                Circuit::inverse_gates(&gates)
            }
            _ => crate::clifford_synth::reset_gates(&builder.cer, graph, cfg.reset_synth, db, cfg.seed)?,
        };
        builder.apply_all(&reset)?;
    }
    if cfg.reset_policy != ResetPolicy::None {
        debug_assert_eq!(builder.cer, Cer::identity(graph.n_phys()));
    }
    let report = SynthesisReport::from_circuit(&builder.circuit, targets.len());
    Ok((builder.circuit, report))
}

fn trial_seed(seed: u64, round: usize, i: usize) -> u64 {
    use std::hash::{Hash, Hasher};
    let mut h = std::collections::hash_map::DefaultHasher::new();
    (seed, round, i).hash(&mut h);
    h.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::Method;
    use crate::verify;

    fn t(s: &str, index: usize) -> Target {
        Target::symbolic(s.parse().unwrap(), index)
    }

    #[test]
    fn sublist_selection_examples() {
        // Rank-1 cut: only proportional Paulis join a k = 1 sublist.
        let ts = vec![t("ZI", 0), t("-ZI", 1), t("XI", 2)];
        let (len, gens) = select_sublist(&ts, 1, 8);
        assert_eq!(len, 2);
        assert_eq!(gens, vec![0]);

        let ts = vec![t("ZI", 0), t("XI", 1), t("IZ", 2)];
        let (len, gens) = select_sublist(&ts, 2, 8);
        assert_eq!(len, 2);
        assert_eq!(gens, vec![0, 1]);

        // All eight double-excitation terms fit a k = 4 list.
        let jw = crate::mapping::FermionMapping::jordan_wigner(4);
        let terms = jw.double_excitation_terms((0, 1, 2, 3)).unwrap();
        let ts: Vec<Target> = terms
            .into_iter()
            .enumerate()
            .map(|(i, (p, _))| Target::symbolic(p, i))
            .collect();
        let (len, gens) = select_sublist(&ts, 4, 8);
        assert_eq!(len, 8);
        assert_eq!(gens.len(), 4);
    }

    #[test]
    fn empty_and_single_target_cases() {
        let g = CouplingGraph::path(3);
        let db = CliffordDb::new(0);
        let cfg = SynthesisConfig::new(Method::Mpls);
        let (c, report) = mpls_synthesize(&[], &g, &db, &cfg).unwrap();
        assert!(c.ops.is_empty());
        assert_eq!(report.total_cnots, 0);

        let targets = vec![t("ZZI", 0)];
        let (c, _) = mpls_synthesize(&targets, &g, &db, &cfg).unwrap();
        assert!(verify::pauli_network_sound(&c, &targets).unwrap().pass);
        assert!(verify::circuit_matches_targets(&c, &targets, &[0.7], 1e-9).unwrap().pass);
    }

    #[test]
    fn figure_pair_is_equivalent_and_compresses_to_two_qubits() {
        let g = CouplingGraph::path(5);
        let db = CliffordDb::new(0);
        let mut cfg = SynthesisConfig::new(Method::Mpls);
        cfg.k_max = 2;
        let targets = vec![t("XXYIZ", 0), t("YYYXZ", 1)];
        let (c, report) = mpls_synthesize(&targets, &g, &db, &cfg).unwrap();
        let thetas = [0.31, 0.87];
        assert!(verify::circuit_matches_targets(&c, &targets, &thetas, 1e-9).unwrap().pass);
        assert!(verify::pauli_network_sound(&c, &targets).unwrap().pass);
        assert!(report.implementation_positions.iter().all(|p| p.is_some()));

        // Replay to the first rotation: both targets must decompose over at
        // most two qubits there.
        let first_rot = c
            .ops
            .iter()
            .position(|op| matches!(op, Op::Rotation(_)))
            .unwrap();
        let mut cer = Cer::identity(5);
        for op in &c.ops[..first_rot] {
            if let Op::Gate(g) = op {
                cer.apply_gate_mut(*g).unwrap();
            }
        }
        let mut union = BTreeSet::new();
        for target in &targets {
            union.extend(cer.decompose(&target.pauli).unwrap().support());
        }
        assert!(union.len() <= 2, "support confined to {union:?}");
    }

    #[test]
    fn longer_streams_stay_sound() {
        let g = CouplingGraph::path(6);
        let db = CliffordDb::new(0);
        let cfg = SynthesisConfig::new(Method::Mpls);
        let targets = vec![
            t("ZZIIII", 0),
            t("IXXIII", 1),
            t("IIYYII", 2),
            t("ZIIZII", 3),
            t("IIIXXI", 4),
            t("IIIIZZ", 5),
        ];
        let (c, _) = mpls_synthesize(&targets, &g, &db, &cfg).unwrap();
        let thetas: Vec<f64> = (0..6).map(|i| 0.1 + 0.2 * i as f64).collect();
        assert!(verify::circuit_matches_targets(&c, &targets, &thetas, 1e-9).unwrap().pass);
        assert!(verify::pauli_network_sound(&c, &targets).unwrap().pass);
        assert!(verify::respects_connectivity(&c, &g));
        assert_eq!(Cer::from_circuit_ignoring_rotations(&c).unwrap(), Cer::identity(6));
    }
}
