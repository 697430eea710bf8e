//! Immutable weighted graph with constant-time neighbor sampling.
//!
//! Nodes are identified externally by arbitrary strings and internally by
//! contiguous indices assigned in first-appearance order. Per-node
//! transition distributions `A_uj = w_uj / sum_j w_uj` are materialized as
//! alias tables so that one walk step costs a single uniform draw.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{CoreError, Result};

/// Weighted graph in CSR form plus the per-node sampling tables.
///
/// Invariants established at construction: all weights are positive,
/// neighbor lists are sorted by target index with duplicate arcs merged by
/// weight summation, and undirected graphs store both orientations of every
/// edge. The structure is immutable afterwards, so sharing it across
/// threads for concurrent reads is safe.
#[derive(Debug, Clone)]
pub struct Graph {
    directed: bool,
    offsets: Vec<usize>,
    targets: Vec<usize>,
    weights: Vec<f64>,
    table: TransitionTable,
    ids: Vec<String>,
    index: BTreeMap<String, usize>,
}

impl Graph {
    /// Builds a graph from `(src, dst, weight)` triples.
    ///
    /// Indices are assigned in first-appearance order over `src, dst` of
    /// each edge in turn. Duplicate `(src, dst)` pairs merge by summing
    /// their weights; self-loops are kept. For undirected graphs each edge
    /// is stored in both orientations (self-loops once).
    pub fn from_edge_list<S, I>(edges: I, directed: bool) -> Result<Self>
    where
        S: AsRef<str>,
        I: IntoIterator<Item = (S, S, f64)>,
    {
        let mut ids: Vec<String> = Vec::new();
        let mut index: BTreeMap<String, usize> = BTreeMap::new();
        let mut arcs: Vec<(usize, usize, f64)> = Vec::new();

        let mut intern = |ids: &mut Vec<String>, index: &mut BTreeMap<String, usize>, id: &str| {
            if let Some(&i) = index.get(id) {
                i
            } else {
                let i = ids.len();
                ids.push(id.to_string());
                index.insert(id.to_string(), i);
                i
            }
        };

        for (src, dst, weight) in edges {
            let (src, dst) = (src.as_ref(), dst.as_ref());
            if !(weight > 0.0) || !weight.is_finite() {
                return Err(CoreError::NonPositiveWeight {
                    src: src.to_string(),
                    dst: dst.to_string(),
                    weight,
                });
            }
            let u = intern(&mut ids, &mut index, src);
            let v = intern(&mut ids, &mut index, dst);
            arcs.push((u, v, weight));
            if !directed && u != v {
                arcs.push((v, u, weight));
            }
        }
        if arcs.is_empty() {
            return Err(CoreError::EmptyEdgeList);
        }
        Ok(Self::assemble(ids, index, arcs, directed))
    }

    /// Builds a graph over the index set `[0, node_count)` directly, with
    /// identity string ids (`"0"`, `"1"`, ...). Unlike [`Graph::from_edge_list`]
    /// this can represent isolated nodes.
    pub fn from_index_edges(
        node_count: usize,
        edges: &[(usize, usize, f64)],
        directed: bool,
    ) -> Result<Self> {
        if edges.is_empty() {
            return Err(CoreError::EmptyEdgeList);
        }
        let mut arcs: Vec<(usize, usize, f64)> = Vec::new();
        for &(u, v, weight) in edges {
            for idx in [u, v] {
                if idx >= node_count {
                    return Err(CoreError::NodeOutOfRange { index: idx, node_count });
                }
            }
            if !(weight > 0.0) || !weight.is_finite() {
                return Err(CoreError::NonPositiveWeight {
                    src: u.to_string(),
                    dst: v.to_string(),
                    weight,
                });
            }
            arcs.push((u, v, weight));
            if !directed && u != v {
                arcs.push((v, u, weight));
            }
        }
        let ids: Vec<String> = (0..node_count).map(|i| i.to_string()).collect();
        let index = ids.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Ok(Self::assemble(ids, index, arcs, directed))
    }

    fn assemble(
        ids: Vec<String>,
        index: BTreeMap<String, usize>,
        mut arcs: Vec<(usize, usize, f64)>,
        directed: bool,
    ) -> Self {
        let n = ids.len();
        arcs.sort_unstable_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));

        let mut offsets = vec![0usize; n + 1];
        let mut targets = Vec::with_capacity(arcs.len());
        let mut weights = Vec::with_capacity(arcs.len());
        let mut pos = 0;
        for u in 0..n {
            offsets[u] = targets.len();
            while pos < arcs.len() && arcs[pos].0 == u {
                let (_, v, mut w) = arcs[pos];
                pos += 1;
                while pos < arcs.len() && arcs[pos].0 == u && arcs[pos].1 == v {
                    w += arcs[pos].2;
                    pos += 1;
                }
                targets.push(v);
                weights.push(w);
            }
        }
        offsets[n] = targets.len();

        let table = TransitionTable::build(&offsets, &weights);
        Graph { directed, offsets, targets, weights, table, ids, index }
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn directed(&self) -> bool {
        self.directed
    }

    /// Number of stored arcs (undirected edges count twice, self-loops once).
    pub fn arc_count(&self) -> usize {
        self.targets.len()
    }

    pub fn out_degree(&self, u: usize) -> usize {
        self.check(u);
        self.offsets[u + 1] - self.offsets[u]
    }

    /// Out-neighbors of `u` with their raw weights, sorted by index.
    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.check(u);
        let span = self.offsets[u]..self.offsets[u + 1];
        self.targets[span.clone()].iter().copied().zip(self.weights[span].iter().copied())
    }

    /// The transition distribution `A_u·`: each out-neighbor with probability
    /// `w_uj / sum_j w_uj`. Empty when `u` has no out-neighbors.
    ///
    /// Panics if `u` is out of range.
    pub fn transition_distribution(&self, u: usize) -> Vec<(usize, f64)> {
        self.check(u);
        let span = self.offsets[u]..self.offsets[u + 1];
        let total: f64 = self.weights[span.clone()].iter().sum();
        self.targets[span.clone()]
            .iter()
            .zip(&self.weights[span])
            .map(|(&v, &w)| (v, w / total))
            .collect()
    }

    /// One walk step from `u`: a neighbor drawn with probability `A_uj`, or
    /// `None` when `u` is dangling. Constant time per draw.
    ///
    /// Panics if `u` is out of range.
    #[inline]
    pub fn sample_step<R: Rng + ?Sized>(&self, u: usize, rng: &mut R) -> Option<usize> {
        self.check(u);
        let start = self.offsets[u];
        let deg = self.offsets[u + 1] - start;
        if deg == 0 {
            return None;
        }
        let slot = self.table.sample_slot(start, deg, rng);
        Some(self.targets[start + slot])
    }

    /// Original identifier of node `u`.
    pub fn node_id(&self, u: usize) -> &str {
        &self.ids[u]
    }

    pub fn node_ids(&self) -> &[String] {
        &self.ids
    }

    /// Contiguous index of an original identifier, if present.
    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// Total weight incident to each node (out-weights only), used as the
    /// frequency measure by the degree-biased negative sampler.
    pub fn out_weight(&self, u: usize) -> f64 {
        self.check(u);
        self.weights[self.offsets[u]..self.offsets[u + 1]].iter().sum()
    }

    #[inline]
    fn check(&self, u: usize) {
        assert!(u < self.node_count(), "node index {} out of range ({} nodes)", u, self.node_count());
    }
}

/// Per-node alias tables over out-neighbors.
///
/// Slot layout mirrors the graph's CSR arrays: node `u` owns slots
/// `offsets[u]..offsets[u+1]`. For nodes with at least one out-neighbor the
/// encoded probabilities sum to 1; dangling nodes own no slots.
#[derive(Debug, Clone)]
pub struct TransitionTable {
    accept: Vec<f64>,
    alias: Vec<u32>,
}

impl TransitionTable {
    fn build(offsets: &[usize], weights: &[f64]) -> Self {
        let mut accept = vec![0.0; weights.len()];
        let mut alias = vec![0u32; weights.len()];
        let n = offsets.len() - 1;
        let mut small: Vec<usize> = Vec::new();
        let mut large: Vec<usize> = Vec::new();
        for u in 0..n {
            let span = offsets[u]..offsets[u + 1];
            let deg = span.len();
            if deg == 0 {
                continue;
            }
            let total: f64 = weights[span.clone()].iter().sum();
            // Scaled probabilities: deg * p_j, split into under/overfull slots.
            small.clear();
            large.clear();
            for (local, &w) in weights[span.clone()].iter().enumerate() {
                let scaled = w / total * deg as f64;
                accept[offsets[u] + local] = scaled;
                if scaled < 1.0 {
                    small.push(local);
                } else {
                    large.push(local);
                }
            }
            while let (Some(&s), Some(&l)) = (small.last(), large.last()) {
                small.pop();
                alias[offsets[u] + s] = l as u32;
                accept[offsets[u] + l] -= 1.0 - accept[offsets[u] + s];
                if accept[offsets[u] + l] < 1.0 {
                    large.pop();
                    small.push(l);
                }
            }
            // Leftovers are 1.0 up to rounding.
            for &rest in small.iter().chain(large.iter()) {
                accept[offsets[u] + rest] = 1.0;
                alias[offsets[u] + rest] = rest as u32;
            }
        }
        TransitionTable { accept, alias }
    }

    /// Draws a local slot in `[0, deg)` using a single uniform: the integer
    /// part picks the slot, the fractional part plays the accept/alias coin.
    #[inline]
    fn sample_slot<R: Rng + ?Sized>(&self, start: usize, deg: usize, rng: &mut R) -> usize {
        let scaled = rng.random::<f64>() * deg as f64;
        let slot = (scaled as usize).min(deg - 1);
        let frac = scaled - slot as f64;
        if frac < self.accept[start + slot] {
            slot
        } else {
            self.alias[start + slot] as usize
        }
    }
}

/// Synthetic graphs for tests and benchmarks.
pub mod synthetic {
    use super::Graph;
    use alloc::vec::Vec;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Random connected undirected graph with `edge_count >= node_count - 1`
    /// edges and unit weights: a random attachment tree plus random extra
    /// edges. Every node has degree >= 1, so the graph is dangling-free.
    pub fn random_undirected(node_count: usize, edge_count: usize, seed: u64) -> Graph {
        assert!(node_count >= 2);
        assert!(edge_count >= node_count - 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut edges: Vec<(usize, usize, f64)> = Vec::with_capacity(edge_count);
        let mut present: Vec<(usize, usize)> = Vec::new();
        for v in 1..node_count {
            let u = rng.random_range(0..v);
            edges.push((u, v, 1.0));
            present.push((u.min(v), u.max(v)));
        }
        present.sort_unstable();
        while edges.len() < edge_count {
            let u = rng.random_range(0..node_count);
            let v = rng.random_range(0..node_count);
            if u == v {
                continue;
            }
            let key = (u.min(v), u.max(v));
            if present.binary_search(&key).is_ok() {
                continue;
            }
            let pos = present.binary_search(&key).unwrap_err();
            present.insert(pos, key);
            edges.push((u, v, 1.0));
        }
        Graph::from_index_edges(node_count, &edges, false).expect("valid synthetic edges")
    }

    /// Random `degree`-regular undirected graph (configuration model with
    /// conflict repair). `node_count * degree` must be even.
    pub fn random_regular(node_count: usize, degree: usize, seed: u64) -> Graph {
        assert!(degree >= 1 && degree < node_count);
        assert!(node_count * degree % 2 == 0, "node_count * degree must be even");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut stubs: Vec<usize> = (0..node_count).flat_map(|u| core::iter::repeat(u).take(degree)).collect();
        loop {
            stubs.shuffle(&mut rng);
            if let Some(edges) = try_pair(&stubs, node_count, degree, &mut rng) {
                return Graph::from_index_edges(node_count, &edges, false).expect("valid synthetic edges");
            }
        }
    }

    /// Pairs consecutive stubs, repairing self-loops and duplicates by
    /// swapping with random partners. Gives up (returns None) if repair
    /// stalls so the caller can reshuffle.
    fn try_pair<R: Rng>(
        stubs: &[usize],
        node_count: usize,
        degree: usize,
        rng: &mut R,
    ) -> Option<Vec<(usize, usize, f64)>> {
        let m = stubs.len() / 2;
        let mut pairs: Vec<(usize, usize)> = (0..m).map(|i| (stubs[2 * i], stubs[2 * i + 1])).collect();
        let key = |u: usize, v: usize| u.min(v) * node_count + u.max(v);
        let mut attempts = 0usize;
        loop {
            let mut seen = alloc::collections::BTreeSet::new();
            let mut bad: Vec<usize> = Vec::new();
            for (i, &(u, v)) in pairs.iter().enumerate() {
                if u == v || !seen.insert(key(u, v)) {
                    bad.push(i);
                }
            }
            if bad.is_empty() {
                let edges = pairs.iter().map(|&(u, v)| (u, v, 1.0)).collect();
                return Some(edges);
            }
            attempts += 1;
            if attempts > 20 * degree {
                return None;
            }
            for &i in &bad {
                let j = rng.random_range(0..m);
                let (a, b) = pairs[i];
                let (c, d) = pairs[j];
                pairs[i] = (a, d);
                pairs[j] = (c, b);
            }
        }
    }
}
