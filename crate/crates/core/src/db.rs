//! Precomputed Clifford databases: canonical keying of small subgraph tasks,
//! entry verification, random-search generation, persistence and lookup.
//!
//! Tasks live on connected subgraphs of at most five nodes. A compress task
//! asks for a circuit after which no tracked pattern decomposes over a
//! designated node; an implement task asks for every pattern to appear as a
//! register at some prefix, respecting order up to commutation; a
//! simultaneous task asks for pattern pairs to land on assigned nodes after
//! the full circuit.

use std::collections::BTreeMap;
use std::sync::RwLock;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arch::CouplingGraph;
use crate::cer::Cer;
use crate::circuit::Gate;
use crate::error::{Error, Result};
use crate::pauli::{Axis, PauliString};

pub const MAX_TASK_NODES: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TaskKind {
    Compress,
    Implement,
    SimultaneousImplement,
}

/// A concrete database task over `window` nodes of a host graph. Patterns are
/// sign-stripped local Paulis aligned with the window order.
#[derive(Debug, Clone)]
pub struct DbTask {
    pub kind: TaskKind,
    /// Host-graph node ids, ascending.
    pub window: Vec<usize>,
    /// Edges among window nodes, as indices into `window`.
    pub edges: Vec<(usize, usize)>,
    /// Local patterns over the window (signs ignored).
    pub patterns: Vec<PauliString>,
    /// Compress: index into `window` of the node to clear.
    pub removed: Option<usize>,
    /// SimultaneousImplement: window index assigned to each pattern pair.
    pub required: Vec<usize>,
}

impl DbTask {
    pub fn compress(window: Vec<usize>, edges: Vec<(usize, usize)>, patterns: Vec<PauliString>, removed: usize) -> Self {
        DbTask {
            kind: TaskKind::Compress,
            window,
            edges,
            patterns,
            removed: Some(removed),
            required: Vec::new(),
        }
    }

    pub fn implement(window: Vec<usize>, edges: Vec<(usize, usize)>, patterns: Vec<PauliString>) -> Self {
        DbTask {
            kind: TaskKind::Implement,
            window,
            edges,
            patterns,
            removed: None,
            required: Vec::new(),
        }
    }

    pub fn simultaneous(
        window: Vec<usize>,
        edges: Vec<(usize, usize)>,
        patterns: Vec<PauliString>,
        required: Vec<usize>,
    ) -> Self {
        DbTask {
            kind: TaskKind::SimultaneousImplement,
            window,
            edges,
            patterns,
            removed: None,
            required,
        }
    }

    fn m(&self) -> usize {
        self.window.len()
    }

    fn validate(&self) -> Result<()> {
        let m = self.m();
        if m == 0 || m > MAX_TASK_NODES {
            return Err(Error::InvalidInput(format!("task window must have 1..=5 nodes, got {m}")));
        }
        if self.patterns.is_empty() {
            return Err(Error::InvalidInput("task needs at least one pattern".into()));
        }
        for p in &self.patterns {
            if p.n() != m {
                return Err(Error::DimensionMismatch(p.n(), m));
            }
        }
        if self.kind == TaskKind::Compress && self.removed.is_none_or(|r| r >= m) {
            return Err(Error::InvalidInput("compress task needs a removed node in range".into()));
        }
        if self.kind == TaskKind::SimultaneousImplement
            && (self.patterns.len() % 2 != 0 || self.required.len() != self.patterns.len() / 2)
        {
            return Err(Error::InvalidInput(
                "simultaneous task needs pattern pairs with one assigned node per pair".into(),
            ));
        }
        Ok(())
    }
}

/// Canonical form of a task under joint subgraph relabeling.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CanonicalKey {
    pub kind: TaskKind,
    pub nodes: usize,
    /// graph6-style code of the canonical edge set.
    pub graph: String,
    pub patterns: Vec<String>,
    pub removed: Option<usize>,
    pub required: Vec<usize>,
}

/// Canonicalize by exhaustive minimization over all node relabelings; returns
/// the map from window index to canonical label alongside the key.
pub fn canonical_key(task: &DbTask) -> Result<(CanonicalKey, Vec<usize>)> {
    task.validate()?;
    let m = task.m();
    let mut best: Option<(u32, Vec<String>, Option<usize>, Vec<usize>, Vec<usize>)> = None;
    for perm in (0..m).permutations(m) {
        let mut mask = 0u32;
        for &(a, b) in &task.edges {
            let (x, y) = (perm[a].min(perm[b]), perm[a].max(perm[b]));
            mask |= 1 << tri_index(x, y);
        }
        let patterns: Vec<String> = task
            .patterns
            .iter()
            .map(|p| {
                let mut letters = vec!['I'; m];
                for (i, &to) in perm.iter().enumerate() {
                    letters[to] = p.letter(i).as_char();
                }
                letters.into_iter().collect()
            })
            .collect();
        let patterns = if task.kind == TaskKind::Compress {
            let mut sorted = patterns;
            sorted.sort();
            sorted
        } else {
            patterns
        };
        let removed = task.removed.map(|r| perm[r]);
        let required: Vec<usize> = task.required.iter().map(|&r| perm[r]).collect();
        let cand = (mask, patterns, removed, required, perm);
        let replace = match &best {
            None => true,
            Some(b) => (cand.0, &cand.1, &cand.2, &cand.3) < (b.0, &b.1, &b.2, &b.3),
        };
        if replace {
            best = Some(cand);
        }
    }
    let (mask, patterns, removed, required, perm) = best.expect("at least one permutation");
    Ok((
        CanonicalKey {
            kind: task.kind,
            nodes: m,
            graph: graph6_code(m, mask),
            patterns,
            removed,
            required,
        },
        perm,
    ))
}

fn tri_index(i: usize, j: usize) -> usize {
    // Upper-triangle bit position in graph6 column order: (i, j), i < j.
    j * (j - 1) / 2 + i
}

fn graph6_code(m: usize, mask: u32) -> String {
    let bits = m * (m - 1) / 2;
    let mut out = String::new();
    out.push(char::from(63 + m as u8));
    let mut chunk = 0u8;
    let mut filled = 0;
    for b in 0..bits {
        chunk = chunk << 1 | u8::from(mask >> b & 1 == 1);
        filled += 1;
        if filled == 6 {
            out.push(char::from(63 + chunk));
            chunk = 0;
            filled = 0;
        }
    }
    if filled > 0 {
        chunk <<= 6 - filled;
        out.push(char::from(63 + chunk));
    }
    out
}

fn graph_from_key(key: &CanonicalKey) -> Result<CouplingGraph> {
    let m = key.nodes;
    let bytes: Vec<u8> = key.graph.bytes().collect();
    if bytes.is_empty() || bytes[0] as usize != 63 + m {
        return Err(Error::InvalidDbEntry("graph code does not match node count".into()));
    }
    let bits = m * (m - 1) / 2;
    let mut mask = 0u32;
    for b in 0..bits {
        let byte = bytes
            .get(1 + b / 6)
            .ok_or_else(|| Error::InvalidDbEntry("graph code too short".into()))?;
        let bit = (byte - 63) >> (5 - b % 6) & 1;
        if bit == 1 {
            mask |= 1 << b;
        }
    }
    let mut edges = Vec::new();
    for j in 1..m {
        for i in 0..j {
            if mask >> tri_index(i, j) & 1 == 1 {
                edges.push((i, j));
            }
        }
    }
    CouplingGraph::new(m, edges)
}

/// Verified circuit for a canonical task.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DbEntry {
    pub key: CanonicalKey,
    pub circuit: Vec<Gate>,
    pub cnots: usize,
    pub found_at_budget: usize,
}

/// Replay-based check that a circuit satisfies its task, with the failing
/// pattern index on rejection.
pub fn verify_entry(key: &CanonicalKey, circuit: &[Gate]) -> std::result::Result<(), String> {
    let m = key.nodes;
    let graph = match graph_from_key(key) {
        Ok(g) => g,
        Err(e) => return Err(e.to_string()),
    };
    for g in circuit {
        match *g {
            Gate::Cnot(c, t) => {
                if !graph.has_edge(c, t) {
                    return Err(format!("cnot ({c},{t}) not on a subgraph edge"));
                }
            }
            ref g1 => {
                if g1.qubits().iter().any(|&q| q >= m) {
                    return Err("gate outside subgraph".into());
                }
            }
        }
    }
    let parsed: Result<Vec<PauliString>> = key.patterns.iter().map(|s| s.parse()).collect();
    let patterns = match parsed {
        Ok(p) => p,
        Err(e) => return Err(e.to_string()),
    };
    match key.kind {
        TaskKind::Compress => {
            let removed = key.removed.expect("validated");
            let mut cer = Cer::identity(m);
            for &g in circuit {
                if cer.apply_gate_mut(g).is_err() {
                    return Err("gate replay failed".into());
                }
            }
            for (i, p) in patterns.iter().enumerate() {
                let d = cer.decompose(p).map_err(|e| e.to_string())?;
                if d.axes[removed].is_some() {
                    return Err(format!("pattern {i} still decomposes over the removed node"));
                }
            }
            Ok(())
        }
        TaskKind::Implement => {
            let mut state = ImplementProgress::new(&patterns);
            let mut cer = Cer::identity(m);
            state.absorb(&cer).map_err(|e| e.to_string())?;
            for &g in circuit {
                cer.apply_gate_mut(g).map_err(|e| e.to_string())?;
                state.absorb(&cer).map_err(|e| e.to_string())?;
            }
            match state.first_pending() {
                None => Ok(()),
                Some(i) => Err(format!("pattern {i} never appeared in a register")),
            }
        }
        TaskKind::SimultaneousImplement => {
            let mut cer = Cer::identity(m);
            for &g in circuit {
                cer.apply_gate_mut(g).map_err(|e| e.to_string())?;
            }
            simultaneous_satisfied(&cer, &patterns, &key.required).map_err(|e| e.to_string())?;
            Ok(())
        }
    }
}

/// Tracks ordered-with-commutation implementation progress over a replay.
pub struct ImplementProgress {
    patterns: Vec<PauliString>,
    commute: Vec<Vec<bool>>,
    pub done: Vec<bool>,
}

impl ImplementProgress {
    pub fn new(patterns: &[PauliString]) -> Self {
        let k = patterns.len();
        let mut commute = vec![vec![true; k]; k];
        for i in 0..k {
            for j in 0..k {
                commute[i][j] = patterns[i].commutes(&patterns[j]).unwrap_or(false);
            }
        }
        ImplementProgress {
            patterns: patterns.to_vec(),
            commute,
            done: vec![false; k],
        }
    }

    /// Mark every pattern that currently sits in a register and whose pending
    /// predecessors all commute with it. Repeats to a fixpoint; returns the
    /// indices newly marked, in firing order.
    pub fn absorb(&mut self, cer: &Cer) -> Result<Vec<usize>> {
        let mut fired = Vec::new();
        loop {
            let mut progressed = false;
            'scan: for i in 0..self.patterns.len() {
                if self.done[i] {
                    continue;
                }
                for j in 0..i {
                    if !self.done[j] && !self.commute[j][i] {
                        continue 'scan;
                    }
                }
                if cer.find_register(&self.patterns[i])?.is_some() {
                    self.done[i] = true;
                    fired.push(i);
                    progressed = true;
                }
            }
            if !progressed {
                return Ok(fired);
            }
        }
    }

    pub fn first_pending(&self) -> Option<usize> {
        self.done.iter().position(|d| !d)
    }

    pub fn all_done(&self) -> bool {
        self.done.iter().all(|&d| d)
    }
}

fn simultaneous_satisfied(cer: &Cer, patterns: &[PauliString], required: &[usize]) -> Result<()> {
    for (pair, &node) in required.iter().enumerate() {
        for k in 0..2 {
            let p = &patterns[2 * pair + k];
            let found = Axis::ALL
                .iter()
                .any(|&axis| cer.register(node, axis).map(|r| r.same_letters(p)).unwrap_or(false));
            if !found {
                return Err(Error::InvalidInput(format!(
                    "pattern {} not on registers of node {node}",
                    2 * pair + k
                )));
            }
        }
    }
    Ok(())
}

/// The 24 single-qubit Clifford actions as shortest {H, S} words, in a fixed
/// deterministic order. Index 0 is the identity (empty word).
pub fn local_clifford_words() -> &'static Vec<Vec<Gate>> {
    use std::sync::OnceLock;
    static WORDS: OnceLock<Vec<Vec<Gate>>> = OnceLock::new();
    WORDS.get_or_init(|| {
        let state_of = |gates: &[Gate]| -> String {
            let cer = Cer::from_gates(1, gates).expect("local word");
            format!("{}|{}", cer.z_row(0), cer.x_row(0))
        };
        let mut seen: BTreeMap<String, Vec<Gate>> = BTreeMap::new();
        let mut frontier: Vec<Vec<Gate>> = vec![Vec::new()];
        seen.insert(state_of(&[]), Vec::new());
        while seen.len() < 24 && !frontier.is_empty() {
            let mut next = Vec::new();
            for word in frontier {
                for g in [Gate::H(0), Gate::S(0)] {
                    let mut w = word.clone();
                    w.push(g);
                    let s = state_of(&w);
                    if !seen.contains_key(&s) {
                        seen.insert(s, w.clone());
                        next.push(w);
                    }
                }
            }
            frontier = next;
        }
        debug_assert_eq!(seen.len(), 24);
        let mut words: Vec<Vec<Gate>> = seen.into_values().collect();
        words.sort_by_key(|w| (w.len(), format!("{w:?}")));
        words
    })
}

/// Gate word for local clifford index `idx` acting on qubit `q`.
pub fn local_clifford_on(idx: usize, q: usize) -> Vec<Gate> {
    local_clifford_words()[idx]
        .iter()
        .map(|g| match g {
            Gate::H(_) => Gate::H(q),
            Gate::S(_) => Gate::S(q),
            _ => unreachable!("words use H and S only"),
        })
        .collect()
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GenConfig {
    /// Random-walk attempts per escalation stage.
    pub attempts_per_stage: usize,
    /// CNOT budget stages are start, 2*start, then capped here.
    pub max_cnots_cap: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            attempts_per_stage: 70_000,
            max_cnots_cap: 10,
        }
    }
}

fn start_budget(nodes: usize) -> usize {
    if nodes <= 3 {
        3
    } else {
        6
    }
}

/// Incremental satisfaction check for the random walk: the tableau is grown
/// gate by gate and only the new state is inspected after each CNOT.
enum WalkState {
    /// Support excludes the removed node iff every pattern commutes with both
    /// of its rows.
    Compress { removed: usize },
    Implement(ImplementProgress),
    Simultaneous,
}

impl WalkState {
    fn fresh(key: &CanonicalKey, patterns: &[PauliString]) -> Self {
        match key.kind {
            TaskKind::Compress => WalkState::Compress {
                removed: key.removed.expect("validated"),
            },
            TaskKind::Implement => WalkState::Implement(ImplementProgress::new(patterns)),
            TaskKind::SimultaneousImplement => WalkState::Simultaneous,
        }
    }

    fn satisfied(&mut self, cer: &Cer, key: &CanonicalKey, patterns: &[PauliString]) -> bool {
        match self {
            WalkState::Compress { removed } => patterns.iter().all(|p| {
                p.symplectic(cer.z_row(*removed)).is_ok_and(|s| s == 0)
                    && p.symplectic(cer.x_row(*removed)).is_ok_and(|s| s == 0)
            }),
            WalkState::Implement(progress) => {
                progress.absorb(cer).is_ok() && progress.all_done()
            }
            WalkState::Simultaneous => simultaneous_satisfied(cer, patterns, &key.required).is_ok(),
        }
    }
}

/// Random-search generation for one canonical key, per the database recipe:
/// repeatedly grow a circuit by a random legal edge with independent random
/// 1-qubit Cliffords on both endpoints followed by a CNOT, verifying every
/// CNOT prefix. Deterministic for a fixed seed. The CNOT budget starts small
/// and doubles on a miss up to the configured cap.
pub fn generate_entry(key: &CanonicalKey, cfg: &GenConfig, seed: u64) -> Result<DbEntry> {
    let graph = graph_from_key(key)?;
    let m = key.nodes;
    let patterns: Vec<PauliString> = key
        .patterns
        .iter()
        .map(|s| s.parse())
        .collect::<Result<_>>()?;
    let edges: Vec<(usize, usize)> = graph.edges().collect();

    {
        let cer = Cer::identity(m);
        let mut state = WalkState::fresh(key, &patterns);
        if state.satisfied(&cer, key, &patterns) {
            return Ok(DbEntry {
                key: key.clone(),
                circuit: Vec::new(),
                cnots: 0,
                found_at_budget: 0,
            });
        }
    }
    if edges.is_empty() {
        return Err(Error::DbSearchExhausted {
            max_cnots: 0,
            attempts: 0,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(usize, Vec<Gate>)> = None;
    let mut k = start_budget(m);
    loop {
        'attempt: for _ in 0..cfg.attempts_per_stage {
            let mut gates: Vec<Gate> = Vec::new();
            let mut cer = Cer::identity(m);
            let mut state = WalkState::fresh(key, &patterns);
            // Absorb patterns already resident at the empty prefix.
            let _ = state.satisfied(&cer, key, &patterns);
            let mut cnots = 0;
            while cnots < k {
                let (a, b) = edges[rng.gen_range(0..edges.len())];
                let (c, t) = if rng.gen_bool(0.5) { (a, b) } else { (b, a) };
                for q in [c, t] {
                    for g in local_clifford_on(rng.gen_range(0..24), q) {
                        cer.apply_gate_mut(g).expect("local gate in range");
                        gates.push(g);
                    }
                }
                cer.apply_gate_mut(Gate::Cnot(c, t)).expect("edge in range");
                gates.push(Gate::Cnot(c, t));
                cnots += 1;
                if best.as_ref().is_some_and(|(bc, _)| cnots >= *bc) {
                    continue 'attempt;
                }
                if state.satisfied(&cer, key, &patterns) {
                    best = Some((cnots, gates));
                    if cnots == 1 {
                        break 'attempt;
                    }
                    continue 'attempt;
                }
            }
        }
        if let Some((cnots, circuit)) = best {
            debug_assert!(verify_entry(key, &circuit).is_ok());
            return Ok(DbEntry {
                key: key.clone(),
                circuit,
                cnots,
                found_at_budget: k,
            });
        }
        if k >= cfg.max_cnots_cap {
            return Err(Error::DbSearchExhausted {
                max_cnots: k,
                attempts: cfg.attempts_per_stage,
            });
        }
        k = (2 * k).min(cfg.max_cnots_cap);
    }
}

fn replayed_ok(key: &CanonicalKey, patterns: &[PauliString], gates: &[Gate]) -> bool {
    let Ok(cer) = Cer::from_gates(key.nodes, gates) else {
        return false;
    };
    match key.kind {
        TaskKind::Implement => {
            let mut progress = ImplementProgress::new(patterns);
            let mut cer = Cer::identity(key.nodes);
            if progress.absorb(&cer).is_err() {
                return false;
            }
            for &g in gates {
                if cer.apply_gate_mut(g).is_err() || progress.absorb(&cer).is_err() {
                    return false;
                }
            }
            progress.all_done()
        }
        _ => WalkState::fresh(key, patterns).satisfied(&cer, key, patterns),
    }
}

/// Exhaustive search over the same circuit family the random generator
/// samples (local Clifford pairs around each CNOT), up to `max_cnots` CNOTs.
/// Returns the minimal CNOT count of a verified circuit, if one exists.
pub fn exhaustive_optimum(key: &CanonicalKey, max_cnots: usize) -> Result<Option<usize>> {
    let graph = graph_from_key(key)?;
    let patterns: Vec<PauliString> = key
        .patterns
        .iter()
        .map(|s| s.parse())
        .collect::<Result<_>>()?;
    if replayed_ok(key, &patterns, &[]) {
        return Ok(Some(0));
    }
    let edges: Vec<(usize, usize)> = graph.edges().collect();
    let mut steps: Vec<Vec<Gate>> = Vec::new();
    for &(a, b) in &edges {
        for (c, t) in [(a, b), (b, a)] {
            for wa in 0..24 {
                for wb in 0..24 {
                    let mut step = local_clifford_on(wa, c);
                    step.extend(local_clifford_on(wb, t));
                    step.push(Gate::Cnot(c, t));
                    steps.push(step);
                }
            }
        }
    }
    let mut frontier: Vec<Vec<Gate>> = vec![Vec::new()];
    for depth in 1..=max_cnots {
        let mut next = Vec::new();
        for prefix in &frontier {
            for step in &steps {
                let mut gates = prefix.clone();
                gates.extend_from_slice(step);
                if replayed_ok(key, &patterns, &gates) {
                    return Ok(Some(depth));
                }
                next.push(gates);
            }
        }
        frontier = next;
    }
    Ok(None)
}

#[derive(Debug, Serialize, Deserialize)]
struct DbFile {
    version: u32,
    cost_metric: String,
    seed: u64,
    entries: Vec<DbEntry>,
}

/// Shared, thread-safe database with deterministic on-demand generation.
pub struct CliffordDb {
    seed: u64,
    gen: GenConfig,
    entries: RwLock<BTreeMap<CanonicalKey, DbEntry>>,
}

impl CliffordDb {
    pub fn new(seed: u64) -> Self {
        CliffordDb {
            seed,
            gen: GenConfig::default(),
            entries: RwLock::new(BTreeMap::new()),
        }
    }

    pub fn with_gen_config(seed: u64, gen: GenConfig) -> Self {
        CliffordDb {
            seed,
            gen,
            entries: RwLock::new(BTreeMap::new()),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.read().expect("lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn entries_snapshot(&self) -> Vec<DbEntry> {
        self.entries.read().expect("lock").values().cloned().collect()
    }

    /// Insert keeping the cheaper verified entry per key (ties break toward
    /// the lexicographically smaller serialized circuit).
    pub fn insert(&self, entry: DbEntry) -> Result<()> {
        verify_entry(&entry.key, &entry.circuit).map_err(Error::InvalidDbEntry)?;
        if entry.circuit.iter().filter(|g| g.is_cnot()).count() != entry.cnots {
            return Err(Error::InvalidDbEntry("cnot count mismatch".into()));
        }
        let mut map = self.entries.write().expect("lock");
        match map.get(&entry.key) {
            Some(existing)
                if (existing.cnots, format!("{:?}", existing.circuit))
                    <= (entry.cnots, format!("{:?}", entry.circuit)) => {}
            _ => {
                map.insert(entry.key.clone(), entry);
            }
        }
        Ok(())
    }

    /// Deterministic per-key seed so on-demand generation does not depend on
    /// lookup order.
    fn key_seed(&self, key: &CanonicalKey) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.seed.hash(&mut h);
        key.hash(&mut h);
        h.finish()
    }

    /// Canonicalize, fetch or generate, and relabel the circuit back to the
    /// concrete window nodes.
    pub fn lookup_or_generate(&self, task: &DbTask) -> Result<Vec<Gate>> {
        let (key, perm) = canonical_key(task)?;
        let hit = self.entries.read().expect("lock").get(&key).cloned();
        let entry = match hit {
            Some(e) => e,
            None => {
                let e = generate_entry(&key, &self.gen, self.key_seed(&key))?;
                self.insert(e.clone())?;
                e
            }
        };
        // canonical label -> concrete node id
        let mut canon_to_concrete = vec![0usize; task.window.len()];
        for (i, &label) in perm.iter().enumerate() {
            canon_to_concrete[label] = task.window[i];
        }
        Ok(entry
            .circuit
            .iter()
            .map(|g| g.relabeled(&canon_to_concrete))
            .collect())
    }

    /// Cost of the entry for a task without materializing the relabeling.
    pub fn cost_of(&self, task: &DbTask) -> Result<usize> {
        let (key, _) = canonical_key(task)?;
        let hit = self.entries.read().expect("lock").get(&key).map(|e| e.cnots);
        match hit {
            Some(c) => Ok(c),
            None => {
                let e = generate_entry(&key, &self.gen, self.key_seed(&key))?;
                let c = e.cnots;
                self.insert(e)?;
                Ok(c)
            }
        }
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        let file = DbFile {
            version: 1,
            cost_metric: "cnot".into(),
            seed: self.seed,
            entries: self.entries_snapshot(),
        };
        std::fs::write(path, serde_json::to_string_pretty(&file)?)?;
        Ok(())
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let file: DbFile = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        if file.version != 1 {
            return Err(Error::InvalidDbEntry(format!("unsupported db version {}", file.version)));
        }
        let db = CliffordDb::new(file.seed);
        for entry in file.entries {
            db.insert(entry)?;
        }
        Ok(db)
    }
}

/// Pre-build the standard seed set: single-pattern compress and implement
/// tasks over the 2- and 3-node shapes (edge, path3, triangle), plus the
/// trivial simultaneous pair on one node. Misses at synthesis time are
/// generated on demand and cached.
pub fn build_database(seed: u64) -> Result<CliffordDb> {
    let db = CliffordDb::new(seed);
    let shapes: Vec<(usize, Vec<(usize, usize)>)> = vec![
        (2, vec![(0, 1)]),
        (3, vec![(0, 1), (1, 2)]),
        (3, vec![(0, 1), (1, 2), (0, 2)]),
    ];
    let letters = ['I', 'X', 'Y', 'Z'];
    for (m, edges) in &shapes {
        let mut patterns = Vec::new();
        for idx in 1..4usize.pow(*m as u32) {
            let mut rem = idx;
            let text: String = (0..*m)
                .map(|_| {
                    let c = letters[rem % 4];
                    rem /= 4;
                    c
                })
                .collect();
            patterns.push(text.parse::<PauliString>().expect("valid letters"));
        }
        let window: Vec<usize> = (0..*m).collect();
        for p in &patterns {
            for removed in 0..*m {
                let task = DbTask::compress(window.clone(), edges.clone(), vec![p.clone()], removed);
                let (key, _) = canonical_key(&task)?;
                if db.entries.read().expect("lock").contains_key(&key) {
                    continue;
                }
                let entry = generate_entry(&key, &db.gen, db.key_seed(&key))?;
                db.insert(entry)?;
            }
            let task = DbTask::implement(window.clone(), edges.clone(), vec![p.clone()]);
            let (key, _) = canonical_key(&task)?;
            if !db.entries.read().expect("lock").contains_key(&key) {
                let entry = generate_entry(&key, &db.gen, db.key_seed(&key))?;
                db.insert(entry)?;
            }
        }
    }
    let zx = DbTask::simultaneous(
        vec![0],
        vec![],
        vec!["Z".parse().unwrap(), "X".parse().unwrap()],
        vec![0],
    );
    let (key, _) = canonical_key(&zx)?;
    let entry = generate_entry(&key, &db.gen, db.key_seed(&key))?;
    db.insert(entry)?;
    Ok(db)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_key_collapses_reflections() {
        let path3 = vec![(0, 1), (1, 2)];
        let a = DbTask::compress(vec![0, 1, 2], path3.clone(), vec![p("ZZI")], 0);
        let b = DbTask::compress(vec![0, 1, 2], path3.clone(), vec![p("IZZ")], 2);
        let (ka, _) = canonical_key(&a).unwrap();
        let (kb, _) = canonical_key(&b).unwrap();
        assert_eq!(ka, kb);

        let tri = vec![(0, 1), (1, 2), (0, 2)];
        let t1 = DbTask::compress(vec![0, 1, 2], tri.clone(), vec![p("ZZZ")], 0);
        let t2 = DbTask::compress(vec![0, 1, 2], tri.clone(), vec![p("ZZZ")], 2);
        assert_eq!(canonical_key(&t1).unwrap().0, canonical_key(&t2).unwrap().0);

        let path = DbTask::implement(vec![0, 1, 2], path3, vec![p("ZZZ")]);
        let tri = DbTask::implement(vec![0, 1, 2], tri, vec![p("ZZZ")]);
        assert_ne!(canonical_key(&path).unwrap().0, canonical_key(&tri).unwrap().0);
    }

    #[test]
    fn local_clifford_words_cover_the_group() {
        let words = local_clifford_words();
        assert_eq!(words.len(), 24);
        assert!(words[0].is_empty());
    }

    #[test]
    fn verify_entry_examples() {
        // Implement {Z} on one node: the empty circuit already works.
        let task = DbTask::implement(vec![5], vec![], vec![p("Z")]);
        let (key, _) = canonical_key(&task).unwrap();
        assert!(verify_entry(&key, &[]).is_ok());

        // Compress {ZZ} removing node 0 via CNOT(0,1).
        let task = DbTask::compress(vec![0, 1], vec![(0, 1)], vec![p("ZZ")], 0);
        let (key, _) = canonical_key(&task).unwrap();
        assert!(verify_entry(&key, &[Gate::Cnot(0, 1)]).is_ok());

        // Compress {Z} removing its own node: empty circuit fails.
        let task = DbTask::compress(vec![0, 1], vec![(0, 1)], vec![p("ZI")], 0);
        let (key, _) = canonical_key(&task).unwrap();
        assert!(verify_entry(&key, &[]).is_err());
    }

    #[test]
    fn generate_entry_examples() {
        let cfg = GenConfig::default();
        let task = DbTask::compress(vec![0, 1], vec![(0, 1)], vec![p("ZZ")], 0);
        let (key, _) = canonical_key(&task).unwrap();
        let entry = generate_entry(&key, &cfg, 12).unwrap();
        assert_eq!(entry.cnots, 1);
        assert_eq!(exhaustive_optimum(&key, 2).unwrap(), Some(1));

        let task = DbTask::implement(vec![0], vec![], vec![p("Z")]);
        let (key, _) = canonical_key(&task).unwrap();
        assert_eq!(generate_entry(&key, &cfg, 0).unwrap().cnots, 0);

        let task = DbTask::simultaneous(vec![0], vec![], vec![p("Z"), p("X")], vec![0]);
        let (key, _) = canonical_key(&task).unwrap();
        assert_eq!(generate_entry(&key, &cfg, 0).unwrap().cnots, 0);
    }

    #[test]
    fn two_commuting_patterns_cannot_share_a_qubit() {
        // {Z0, Z1} into one qubit is impossible; the search must exhaust.
        let cfg = GenConfig {
            attempts_per_stage: 4_000,
            max_cnots_cap: 4,
        };
        let task = DbTask::compress(vec![0, 1], vec![(0, 1)], vec![p("ZI"), p("IZ")], 0);
        let (key, _) = canonical_key(&task).unwrap();
        assert!(matches!(
            generate_entry(&key, &cfg, 3),
            Err(Error::DbSearchExhausted { .. })
        ));
    }

    #[test]
    fn lookup_relabels_back_to_concrete_nodes() {
        let db = CliffordDb::new(99);
        // Same canonical task placed on nodes {4, 7}: the circuit must come
        // back on those labels.
        let task = DbTask::compress(vec![4, 7], vec![(0, 1)], vec![p("ZZ")], 1);
        let gates = db.lookup_or_generate(&task).unwrap();
        assert_eq!(gates.iter().filter(|g| g.is_cnot()).count(), 1);
        for g in &gates {
            for q in g.qubits() {
                assert!(q == 4 || q == 7);
            }
        }
        // Relabeled twin hits the same cached key.
        let twin = DbTask::compress(vec![1, 9], vec![(0, 1)], vec![p("ZZ")], 0);
        let before = db.len();
        db.lookup_or_generate(&twin).unwrap();
        assert_eq!(db.len(), before);
    }

    #[test]
    fn persistence_round_trip() {
        let db = CliffordDb::new(7);
        let task = DbTask::compress(vec![0, 1, 2], vec![(0, 1), (1, 2)], vec![p("ZZZ")], 1);
        db.lookup_or_generate(&task).unwrap();
        let dir = std::env::temp_dir().join("pauliforge-db-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("db.json");
        db.save(&path).unwrap();
        let loaded = CliffordDb::load(&path).unwrap();
        assert_eq!(db.entries_snapshot(), loaded.entries_snapshot());
    }
}
