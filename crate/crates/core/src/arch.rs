//! Coupling-graph model: topology generators, Mehlhorn Steiner trees, induced
//! subgraphs and cut-vertex detection.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};

/// Undirected simple connectivity graph over physical qubits 0..n_phys-1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CouplingGraph {
    n_phys: usize,
    edges: BTreeSet<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    connected: bool,
}

/// Approximate Steiner tree: `tree_edges` form a tree spanning `nodes`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SteinerResult {
    pub nodes: BTreeSet<usize>,
    pub tree_edges: BTreeSet<(usize, usize)>,
    pub terminals: BTreeSet<usize>,
}

fn norm_edge(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

impl CouplingGraph {
    pub fn new(n_phys: usize, edge_list: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut edges = BTreeSet::new();
        for (u, v) in edge_list {
            if u == v {
                return Err(Error::InvalidInput(format!("self-loop at node {u}")));
            }
            if u >= n_phys || v >= n_phys {
                return Err(Error::QubitOutOfRange {
                    index: u.max(v),
                    n: n_phys,
                });
            }
            edges.insert(norm_edge(u, v));
        }
        let mut adj = vec![Vec::new(); n_phys];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in adj.iter_mut() {
            a.sort_unstable();
        }
        let mut g = CouplingGraph {
            n_phys,
            edges,
            adj,
            connected: false,
        };
        g.connected = n_phys > 0 && g.component_from(0, None).len() == n_phys;
        Ok(g)
    }

    /// Linear nearest-neighbor chain.
    pub fn path(n: usize) -> Self {
        CouplingGraph::new(n, (0..n.saturating_sub(1)).map(|i| (i, i + 1))).expect("valid path")
    }

    /// Heavy-hexagonal lattice in the IBM style: `d` horizontal qubit rows
    /// joined by bridge qubits, degree at most 3. Odd `d >= 3`; d = 5 gives
    /// the 65-qubit layout and d = 7 the 127-qubit Eagle-scale layout.
    pub fn heavy_hex(d: usize) -> Result<Self> {
        if d < 3 || d % 2 == 0 {
            return Err(Error::InvalidHeavyHex(d));
        }
        let row_cols = |r: usize| -> (usize, usize) {
            if r == 0 {
                (0, 2 * d - 1)
            } else if r == d - 1 {
                (1, 2 * d)
            } else {
                (0, 2 * d)
            }
        };
        let mut id_of: BTreeMap<(usize, usize, bool), usize> = BTreeMap::new();
        let mut next = 0usize;
        for r in 0..d {
            let (lo, hi) = row_cols(r);
            for c in lo..=hi {
                id_of.insert((r, c, false), next);
                next += 1;
            }
            if r + 1 < d {
                let offset = if r % 2 == 0 { 0 } else { 2 };
                let (alo, ahi) = row_cols(r);
                let (blo, bhi) = row_cols(r + 1);
                for c in (offset..=2 * d).step_by(4) {
                    if c >= alo && c <= ahi && c >= blo && c <= bhi {
                        id_of.insert((r, c, true), next);
                        next += 1;
                    }
                }
            }
        }
        let mut edges = Vec::new();
        for r in 0..d {
            let (lo, hi) = row_cols(r);
            for c in lo..hi {
                edges.push((id_of[&(r, c, false)], id_of[&(r, c + 1, false)]));
            }
        }
        for (&(r, c, bridge), &id) in &id_of {
            if bridge {
                edges.push((id_of[&(r, c, false)], id));
                edges.push((id, id_of[&(r + 1, c, false)]));
            }
        }
        CouplingGraph::new(next, edges)
    }

    pub fn n_phys(&self) -> usize {
        self.n_phys
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.edges.contains(&norm_edge(u, v))
    }

    pub fn neighbors(&self, q: usize) -> &[usize] {
        &self.adj[q]
    }

    pub fn degree(&self, q: usize) -> usize {
        self.adj[q].len()
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }

    fn allowed_contains(allowed: Option<&BTreeSet<usize>>, q: usize) -> bool {
        allowed.is_none_or(|a| a.contains(&q))
    }

    fn component_from(&self, start: usize, allowed: Option<&BTreeSet<usize>>) -> BTreeSet<usize> {
        let mut seen = BTreeSet::new();
        if !Self::allowed_contains(allowed, start) {
            return seen;
        }
        let mut queue = VecDeque::from([start]);
        seen.insert(start);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if Self::allowed_contains(allowed, v) && seen.insert(v) {
                    queue.push_back(v);
                }
            }
        }
        seen
    }

    pub fn connected_within(&self, allowed: &BTreeSet<usize>) -> bool {
        match allowed.first() {
            None => true,
            Some(&start) => self.component_from(start, Some(allowed)).len() == allowed.len(),
        }
    }

    /// BFS distances from `start`, restricted to `allowed` when given.
    pub fn distances_from(&self, start: usize, allowed: Option<&BTreeSet<usize>>) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n_phys];
        if !Self::allowed_contains(allowed, start) {
            return dist;
        }
        dist[start] = Some(0);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if Self::allowed_contains(allowed, v) && dist[v].is_none() {
                    dist[v] = Some(dist[u].unwrap() + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// 2-approximate Steiner tree via Mehlhorn's construction: terminal
    /// Voronoi partition from a multi-source BFS, a terminal-distance graph,
    /// its minimum spanning tree, path expansion, and leaf pruning. Ties
    /// break toward the lowest node id throughout.
    pub fn steiner_tree(&self, terminals: &[usize]) -> Result<SteinerResult> {
        self.steiner_tree_within(None, terminals)
    }

    pub fn steiner_tree_within(
        &self,
        allowed: Option<&BTreeSet<usize>>,
        terminals: &[usize],
    ) -> Result<SteinerResult> {
        if terminals.is_empty() {
            return Err(Error::InvalidInput("steiner tree needs at least one terminal".into()));
        }
        let term_set: BTreeSet<usize> = terminals.iter().copied().collect();
        for &t in &term_set {
            if t >= self.n_phys {
                return Err(Error::QubitOutOfRange { index: t, n: self.n_phys });
            }
            if !Self::allowed_contains(allowed, t) {
                return Err(Error::InvalidInput(format!("terminal {t} outside allowed node set")));
            }
        }
        if term_set.len() == 1 {
            let q = *term_set.first().unwrap();
            return Ok(SteinerResult {
                nodes: BTreeSet::from([q]),
                tree_edges: BTreeSet::new(),
                terminals: term_set,
            });
        }

        // Multi-source BFS seeded in ascending terminal order.
        let mut dist = vec![usize::MAX; self.n_phys];
        let mut near = vec![usize::MAX; self.n_phys];
        let mut pred = vec![usize::MAX; self.n_phys];
        let mut queue = VecDeque::new();
        for &t in &term_set {
            dist[t] = 0;
            near[t] = t;
            queue.push_back(t);
        }
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if Self::allowed_contains(allowed, v) && dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    near[v] = near[u];
                    pred[v] = u;
                    queue.push_back(v);
                }
            }
        }
        for &t in &term_set {
            if term_set.iter().any(|&s| dist[s] == usize::MAX) {
                let _ = t;
                return Err(Error::DisconnectedGraph);
            }
        }

        // Cheapest crossing edge for every terminal pair.
        let mut best: BTreeMap<(usize, usize), (usize, usize, usize)> = BTreeMap::new();
        for &(u, v) in &self.edges {
            if !Self::allowed_contains(allowed, u) || !Self::allowed_contains(allowed, v) {
                continue;
            }
            if near[u] == usize::MAX || near[v] == usize::MAX || near[u] == near[v] {
                continue;
            }
            let key = norm_edge(near[u], near[v]);
            let cand = (dist[u] + dist[v] + 1, u.min(v), u.max(v));
            match best.get(&key) {
                Some(prev) if *prev <= cand => {}
                _ => {
                    best.insert(key, cand);
                }
            }
        }

        // Kruskal over the terminal graph.
        let mut aux: Vec<(usize, usize, usize, usize, usize)> = best
            .iter()
            .map(|(&(a, b), &(w, u, v))| (w, a, b, u, v))
            .collect();
        aux.sort_unstable();
        let idx: BTreeMap<usize, usize> = term_set.iter().enumerate().map(|(i, &t)| (t, i)).collect();
        let mut dsu = Dsu::new(term_set.len());
        let mut expanded_edges: BTreeSet<(usize, usize)> = BTreeSet::new();
        let mut picked = 0;
        for (_, a, b, u, v) in aux {
            if dsu.union(idx[&a], idx[&b]) {
                picked += 1;
                expanded_edges.insert(norm_edge(u, v));
                for mut w in [u, v] {
                    while pred[w] != usize::MAX {
                        expanded_edges.insert(norm_edge(w, pred[w]));
                        w = pred[w];
                    }
                }
                if picked + 1 == term_set.len() {
                    break;
                }
            }
        }
        if picked + 1 != term_set.len() {
            return Err(Error::DisconnectedGraph);
        }

        // Spanning tree of the expanded subgraph, then prune non-terminal
        // leaves.
        let mut sub_adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &(u, v) in &expanded_edges {
            sub_adj.entry(u).or_default().push(v);
            sub_adj.entry(v).or_default().push(u);
        }
        for a in sub_adj.values_mut() {
            a.sort_unstable();
        }
        let root = *term_set.first().unwrap();
        let mut tree_edges: BTreeSet<(usize, usize)> = BTreeSet::new();
        let mut seen = BTreeSet::from([root]);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            if let Some(neigh) = sub_adj.get(&u) {
                for &v in neigh {
                    if seen.insert(v) {
                        tree_edges.insert(norm_edge(u, v));
                        queue.push_back(v);
                    }
                }
            }
        }
        loop {
            let mut degree: BTreeMap<usize, usize> = BTreeMap::new();
            for &(u, v) in &tree_edges {
                *degree.entry(u).or_default() += 1;
                *degree.entry(v).or_default() += 1;
            }
            let prune: Vec<usize> = degree
                .iter()
                .filter(|(q, &d)| d == 1 && !term_set.contains(q))
                .map(|(&q, _)| q)
                .collect();
            if prune.is_empty() {
                break;
            }
            tree_edges.retain(|&(u, v)| !prune.contains(&u) && !prune.contains(&v));
        }
        let mut nodes: BTreeSet<usize> = term_set.clone();
        for &(u, v) in &tree_edges {
            nodes.insert(u);
            nodes.insert(v);
        }
        Ok(SteinerResult {
            nodes,
            tree_edges,
            terminals: term_set,
        })
    }

    /// All graph edges with both endpoints in `nodes`, in original labels.
    pub fn induced_edges(&self, nodes: &BTreeSet<usize>) -> Vec<(usize, usize)> {
        self.edges
            .iter()
            .filter(|(u, v)| nodes.contains(u) && nodes.contains(v))
            .copied()
            .collect()
    }

    /// Induced subgraph relabeled to 0..k-1, with the new-to-old node map.
    /// Keeps strictly more edges than a spanning tree whenever chords exist.
    pub fn induced_subgraph(&self, nodes: &[usize]) -> Result<(CouplingGraph, Vec<usize>)> {
        let sorted: BTreeSet<usize> = nodes.iter().copied().collect();
        for &q in &sorted {
            if q >= self.n_phys {
                return Err(Error::QubitOutOfRange { index: q, n: self.n_phys });
            }
        }
        let map: Vec<usize> = sorted.iter().copied().collect();
        let back: BTreeMap<usize, usize> = map.iter().enumerate().map(|(i, &q)| (q, i)).collect();
        let edges: Vec<(usize, usize)> = self
            .induced_edges(&sorted)
            .into_iter()
            .map(|(u, v)| (back[&u], back[&v]))
            .collect();
        Ok((CouplingGraph::new(map.len(), edges)?, map))
    }

    /// Nodes whose removal keeps the graph connected: the complement of the
    /// articulation points (single nodes count as removable).
    pub fn non_cut_nodes(&self) -> Vec<usize> {
        let allowed: BTreeSet<usize> = (0..self.n_phys).collect();
        self.non_cut_within(&allowed)
    }

    /// Non-cut nodes of the subgraph induced by `allowed` (assumed connected).
    pub fn non_cut_within(&self, allowed: &BTreeSet<usize>) -> Vec<usize> {
        if allowed.len() <= 2 {
            return allowed.iter().copied().collect();
        }
        let cuts = self.articulation_points(allowed);
        allowed.iter().copied().filter(|q| !cuts.contains(q)).collect()
    }

    fn articulation_points(&self, allowed: &BTreeSet<usize>) -> BTreeSet<usize> {
        // Iterative Tarjan lowlink over the induced subgraph.
        let mut index: BTreeMap<usize, usize> = BTreeMap::new();
        let mut low: BTreeMap<usize, usize> = BTreeMap::new();
        let mut cuts = BTreeSet::new();
        let mut counter = 0usize;
        let Some(&root) = allowed.first() else {
            return cuts;
        };
        let mut stack: Vec<(usize, Option<usize>, usize)> = vec![(root, None, 0)];
        let mut root_children = 0usize;
        index.insert(root, 0);
        low.insert(root, 0);
        counter += 1;
        while let Some((u, parent, child_idx)) = stack.pop() {
            let neigh: Vec<usize> = self.adj[u]
                .iter()
                .copied()
                .filter(|v| allowed.contains(v))
                .collect();
            if child_idx < neigh.len() {
                stack.push((u, parent, child_idx + 1));
                let v = neigh[child_idx];
                if Some(v) == parent {
                    continue;
                }
                if let Some(&iv) = index.get(&v) {
                    let lu = low[&u].min(iv);
                    low.insert(u, lu);
                } else {
                    index.insert(v, counter);
                    low.insert(v, counter);
                    counter += 1;
                    if u == root {
                        root_children += 1;
                    }
                    stack.push((v, Some(u), 0));
                }
            } else if let Some(p) = parent {
                let lu = low[&u];
                let lp = low[&p].min(lu);
                low.insert(p, lp);
                if p != root && lu >= index[&p] {
                    cuts.insert(p);
                }
            }
        }
        if root_children > 1 {
            cuts.insert(root);
        }
        cuts
    }

    /// Shortest path between two nodes, restricted to `allowed` when given.
    pub fn path_between(
        &self,
        allowed: Option<&BTreeSet<usize>>,
        from: usize,
        to: usize,
    ) -> Result<Vec<usize>> {
        let mut pred = vec![usize::MAX; self.n_phys];
        let mut seen = BTreeSet::from([from]);
        let mut queue = VecDeque::from([from]);
        if !Self::allowed_contains(allowed, from) {
            return Err(Error::DisconnectedGraph);
        }
        while let Some(u) = queue.pop_front() {
            if u == to {
                let mut path = vec![to];
                let mut cur = to;
                while cur != from {
                    cur = pred[cur];
                    path.push(cur);
                }
                path.reverse();
                return Ok(path);
            }
            for &v in &self.adj[u] {
                if Self::allowed_contains(allowed, v) && seen.insert(v) {
                    pred[v] = u;
                    queue.push_back(v);
                }
            }
        }
        Err(Error::DisconnectedGraph)
    }

    /// Deterministic BFS ordering from node 0, used as the documented layout
    /// for non-path experiments.
    pub fn bfs_layout(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.n_phys);
        let mut seen = vec![false; self.n_phys];
        for start in 0..self.n_phys {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                order.push(u);
                for &v in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
        }
        order
    }

    /// Text format: header "n <count>", then one "u v" line per edge.
    pub fn to_text(&self) -> String {
        let mut out = format!("n {}\n", self.n_phys);
        for (u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::InvalidGraphText("empty file".into()))?;
        let mut parts = header.split_whitespace();
        let (tag, count) = (parts.next(), parts.next());
        if tag != Some("n") {
            return Err(Error::InvalidGraphText("expected header 'n <count>'".into()));
        }
        let n: usize = count
            .and_then(|c| c.parse().ok())
            .ok_or_else(|| Error::InvalidGraphText("bad node count".into()))?;
        let mut edges = Vec::new();
        for line in lines {
            let mut it = line.split_whitespace();
            let (u, v) = (it.next(), it.next());
            let parse = |s: Option<&str>| -> Result<usize> {
                s.and_then(|x| x.parse().ok())
                    .ok_or_else(|| Error::InvalidGraphText(format!("bad edge line {line:?}")))
            };
            edges.push((parse(u)?, parse(v)?));
        }
        CouplingGraph::new(n, edges)
    }

    /// Parse an architecture spec: `path:<n>`, `heavyhex:<d>` or `file:<path>`.
    pub fn from_spec(spec: &str) -> Result<Self> {
        let (kind, arg) = spec
            .split_once(':')
            .ok_or_else(|| Error::InvalidInput(format!("bad arch spec {spec:?}")))?;
        match kind {
            "path" => {
                let n = arg
                    .parse()
                    .map_err(|_| Error::InvalidInput(format!("bad path size {arg:?}")))?;
                Ok(CouplingGraph::path(n))
            }
            "heavyhex" => {
                let d = arg
                    .parse()
                    .map_err(|_| Error::InvalidInput(format!("bad heavy-hex distance {arg:?}")))?;
                CouplingGraph::heavy_hex(d)
            }
            "file" => CouplingGraph::from_text(&std::fs::read_to_string(arg)?),
            _ => Err(Error::InvalidInput(format!("unknown arch kind {kind:?}"))),
        }
    }
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            false
        } else {
            self.parent[ra.max(rb)] = ra.min(rb);
            true
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn path_basics() {
        let g = CouplingGraph::path(1);
        assert_eq!(g.edge_count(), 0);
        let g = CouplingGraph::path(5);
        assert_eq!(g.edge_count(), 4);
        assert!(g.is_connected());
        let dist = g.distances_from(0, None);
        assert_eq!(dist[4], Some(4));
    }

    #[test]
    fn heavy_hex_counts_and_degrees() {
        assert!(CouplingGraph::heavy_hex(2).is_err());
        assert!(CouplingGraph::heavy_hex(4).is_err());
        for (d, n) in [(3, 23), (5, 65), (7, 127)] {
            let g = CouplingGraph::heavy_hex(d).unwrap();
            assert_eq!(g.n_phys(), n, "d = {d}");
            assert!(g.is_connected());
            for q in 0..g.n_phys() {
                assert!(g.degree(q) <= 3, "degree of {q}");
            }
        }
    }

    #[test]
    fn steiner_on_path_is_whole_interval() {
        let g = CouplingGraph::path(4);
        let t = g.steiner_tree(&[0, 3]).unwrap();
        assert_eq!(t.nodes, BTreeSet::from([0, 1, 2, 3]));
        assert_eq!(t.tree_edges.len(), 3);
        let single = g.steiner_tree(&[2]).unwrap();
        assert_eq!(single.nodes, BTreeSet::from([2]));
        assert!(single.tree_edges.is_empty());
    }

    #[test]
    fn steiner_star_includes_center() {
        let g = CouplingGraph::new(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let t = g.steiner_tree(&[1, 2, 3]).unwrap();
        assert!(t.nodes.contains(&0));
        assert_eq!(t.tree_edges.len(), 3);
    }

    fn exhaustive_steiner_optimum(g: &CouplingGraph, terminals: &BTreeSet<usize>) -> usize {
        // Smallest connected node superset of the terminals; tree weight is
        // |nodes| - 1 on unit-weight graphs.
        let n = g.n_phys();
        let mut best = usize::MAX;
        for mask in 0..(1u32 << n) {
            let nodes: BTreeSet<usize> = (0..n).filter(|&q| mask >> q & 1 == 1).collect();
            if !terminals.is_subset(&nodes) || !g.connected_within(&nodes) {
                continue;
            }
            best = best.min(nodes.len() - 1);
        }
        best
    }

    #[test]
    fn steiner_two_approximation_on_small_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..40 {
            let n = rng.gen_range(2..=7);
            // Random connected graph: a random spanning tree plus extras.
            let mut edges = Vec::new();
            for v in 1..n {
                edges.push((rng.gen_range(0..v), v));
            }
            for _ in 0..rng.gen_range(0..=n) {
                let u = rng.gen_range(0..n);
                let v = rng.gen_range(0..n);
                if u != v {
                    edges.push((u, v));
                }
            }
            let g = CouplingGraph::new(n, edges).unwrap();
            let k = rng.gen_range(1..=n);
            let mut terminals: Vec<usize> = (0..n).collect();
            for i in (1..terminals.len()).rev() {
                terminals.swap(i, rng.gen_range(0..=i));
            }
            terminals.truncate(k);
            let t = g.steiner_tree(&terminals).unwrap();
            // Tree validity: spans terminals, edge count = node count - 1,
            // connected.
            assert!(t.terminals.iter().all(|q| t.nodes.contains(q)));
            assert_eq!(t.tree_edges.len() + 1, t.nodes.len());
            assert!(g.connected_within(&t.nodes));
            for &(u, v) in &t.tree_edges {
                assert!(g.has_edge(u, v));
            }
            let opt = exhaustive_steiner_optimum(&g, &t.terminals);
            assert!(
                t.tree_edges.len() <= 2 * opt.max(1),
                "tree {} vs optimum {opt}",
                t.tree_edges.len()
            );
        }
    }

    #[test]
    fn induced_subgraph_keeps_chords() {
        let tri = CouplingGraph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let (sub, map) = tri.induced_subgraph(&[0, 1, 2]).unwrap();
        assert_eq!(sub.edge_count(), 3);
        assert_eq!(map, vec![0, 1, 2]);
        let (empty, _) = tri.induced_subgraph(&[]).unwrap();
        assert_eq!(empty.n_phys(), 0);
        let path = CouplingGraph::path(5);
        let (sub, map) = path.induced_subgraph(&[1, 2, 3]).unwrap();
        assert_eq!(sub.edge_count(), 2);
        assert_eq!(map, vec![1, 2, 3]);
    }

    #[test]
    fn steiner_tree_edges_subset_of_induced() {
        let g = CouplingGraph::heavy_hex(3).unwrap();
        let t = g.steiner_tree(&[0, 10, 20]).unwrap();
        let nodes: Vec<usize> = t.nodes.iter().copied().collect();
        let induced = g.induced_edges(&t.nodes);
        for e in &t.tree_edges {
            assert!(induced.contains(e));
        }
        let _ = nodes;
    }

    #[test]
    fn non_cut_examples() {
        let g = CouplingGraph::path(3);
        assert_eq!(g.non_cut_nodes(), vec![0, 2]);
        let cycle = CouplingGraph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(cycle.non_cut_nodes(), vec![0, 1, 2, 3]);
        let star = CouplingGraph::new(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(star.non_cut_nodes(), vec![1, 2, 3]);
    }

    #[test]
    fn non_cut_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..60 {
            let n = rng.gen_range(2..=12);
            let mut edges = Vec::new();
            for v in 1..n {
                edges.push((rng.gen_range(0..v), v));
            }
            for _ in 0..rng.gen_range(0..=2 * n) {
                let u = rng.gen_range(0..n);
                let v = rng.gen_range(0..n);
                if u != v {
                    edges.push((u, v));
                }
            }
            let g = CouplingGraph::new(n, edges).unwrap();
            let brute: Vec<usize> = (0..n)
                .filter(|&q| {
                    let rest: BTreeSet<usize> = (0..n).filter(|&p| p != q).collect();
                    g.connected_within(&rest)
                })
                .collect();
            assert_eq!(g.non_cut_nodes(), brute);
        }
    }

    #[test]
    fn text_round_trip_and_spec() {
        let g = CouplingGraph::heavy_hex(3).unwrap();
        let text = g.to_text();
        let back = CouplingGraph::from_text(&text).unwrap();
        assert_eq!(g, back);
        let p = CouplingGraph::from_spec("path:6").unwrap();
        assert_eq!(p.n_phys(), 6);
        assert!(CouplingGraph::from_spec("ring:4").is_err());
    }

    #[test]
    fn bfs_layout_visits_everything_once() {
        let g = CouplingGraph::heavy_hex(3).unwrap();
        let layout = g.bfs_layout();
        let set: BTreeSet<usize> = layout.iter().copied().collect();
        assert_eq!(layout.len(), g.n_phys());
        assert_eq!(set.len(), g.n_phys());
        assert_eq!(layout[0], 0);
    }
}
