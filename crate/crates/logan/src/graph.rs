//! Finite simple graphs and digraphs with deterministic seeded samplers.
//!
//! Vertices are `0..n`. Undirected edges are stored canonically as
//! `(min, max)`; arcs keep their orientation. No self-loops, no parallel
//! edges. The samplers at the bottom of the module produce positive and
//! negative families for each supported property theory; every draw is a
//! pure function of its [`Seed`].

use std::collections::BTreeSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::certificates::PropertyTheory;
use crate::seed::Seed;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {vertex} is not allowed")]
    SelfLoop { vertex: usize },
    #[error("edge ({u}, {v}) already present")]
    DuplicateEdge { u: usize, v: usize },
    #[error("edge ({u}, {v}) not present")]
    MissingEdge { u: usize, v: usize },
    #[error("invalid permutation")]
    InvalidPermutation,
    #[error("parse error on line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TheoryError {
    #[error("{theory} requires n >= {min}, got n = {n}")]
    UnsupportedSize {
        theory: PropertyTheory,
        n: usize,
        min: usize,
    },
    #[error("{theory} cannot be evaluated on a graph with directed = {graph_directed}")]
    WrongDirectedness {
        theory: PropertyTheory,
        graph_directed: bool,
    },
}

/// A finite simple graph (or digraph) on vertices `0..n`.
#[derive(Clone)]
pub struct Graph {
    n: usize,
    directed: bool,
    edges: BTreeSet<(usize, usize)>,
    /// Out-neighbors, sorted ascending. For undirected graphs this is the
    /// full neighborhood.
    out: Vec<Vec<usize>>,
    /// In-neighbors, sorted ascending. Mirrors `out` for undirected graphs.
    inn: Vec<Vec<usize>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.directed == other.directed && self.edges == other.edges
    }
}

impl Eq for Graph {}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Graph {{ n: {}, directed: {}, edges: {:?} }}",
            self.n, self.directed, self.edges
        )
    }
}

impl Graph {
    pub fn new(n: usize, directed: bool) -> Graph {
        Graph {
            n,
            directed,
            edges: BTreeSet::new(),
            out: vec![Vec::new(); n],
            inn: vec![Vec::new(); n],
        }
    }

    pub fn from_edges(
        n: usize,
        directed: bool,
        edges: &[(usize, usize)],
    ) -> Result<Graph, GraphError> {
        let mut g = Graph::new(n, directed);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    /// Edges in canonical ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    fn canonical(&self, u: usize, v: usize) -> (usize, usize) {
        if self.directed || u <= v {
            (u, v)
        } else {
            (v, u)
        }
    }

    fn check_pair(&self, u: usize, v: usize) -> Result<(), GraphError> {
        for w in [u, v] {
            if w >= self.n {
                return Err(GraphError::VertexOutOfRange { vertex: w, n: self.n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop { vertex: u });
        }
        Ok(())
    }

    /// True when the edge (arc, for digraphs) `u -> v` is present.
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        debug_assert!(u < self.n && v < self.n);
        if u == v {
            return false;
        }
        self.edges.contains(&self.canonical(u, v))
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        self.check_pair(u, v)?;
        let key = self.canonical(u, v);
        if !self.edges.insert(key) {
            return Err(GraphError::DuplicateEdge { u, v });
        }
        let (a, b) = key;
        insert_sorted(&mut self.out[a], b);
        insert_sorted(&mut self.inn[b], a);
        if !self.directed {
            insert_sorted(&mut self.out[b], a);
            insert_sorted(&mut self.inn[a], b);
        }
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        self.check_pair(u, v)?;
        let key = self.canonical(u, v);
        if !self.edges.remove(&key) {
            return Err(GraphError::MissingEdge { u, v });
        }
        let (a, b) = key;
        remove_sorted(&mut self.out[a], b);
        remove_sorted(&mut self.inn[b], a);
        if !self.directed {
            remove_sorted(&mut self.out[b], a);
            remove_sorted(&mut self.inn[a], b);
        }
        Ok(())
    }

    /// Flips the pair: removes the edge if present, adds it otherwise.
    /// Returns whether the edge is present afterwards.
    pub fn toggle_edge(&mut self, u: usize, v: usize) -> Result<bool, GraphError> {
        if self.has_edge(u, v) {
            self.remove_edge(u, v)?;
            Ok(false)
        } else {
            self.add_edge(u, v)?;
            Ok(true)
        }
    }

    /// Neighborhood of `v` in an undirected graph, ascending.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        debug_assert!(!self.directed, "use out_neighbors/in_neighbors on digraphs");
        &self.out[v]
    }

    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.inn[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        debug_assert!(!self.directed);
        self.out[v].len()
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out[v].len()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.inn[v].len()
    }

    /// Relabels vertices: vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Graph, GraphError> {
        if perm.len() != self.n {
            return Err(GraphError::InvalidPermutation);
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || seen[p] {
                return Err(GraphError::InvalidPermutation);
            }
            seen[p] = true;
        }
        let edges: Vec<(usize, usize)> = self.edges().map(|(u, v)| (perm[u], perm[v])).collect();
        Graph::from_edges(self.n, self.directed, &edges)
    }

    /// Serializes to the text format: a `n m d` header line followed by one
    /// `u v` line per edge in canonical order. `d` is 1 for digraphs.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "{} {} {}\n",
            self.n,
            self.edges.len(),
            if self.directed { 1 } else { 0 }
        );
        for (u, v) in self.edges() {
            s.push_str(&format!("{} {}\n", u, v));
        }
        s
    }

    /// Parses the text format produced by [`Graph::to_text`].
    pub fn from_text(text: &str) -> Result<Graph, GraphError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (line_no, header) = lines.next().ok_or(GraphError::Parse {
            line: 1,
            reason: "empty input".into(),
        })?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(GraphError::Parse {
                line: line_no,
                reason: "header must be `n m d`".into(),
            });
        }
        let parse_num = |s: &str, line: usize| -> Result<usize, GraphError> {
            s.parse().map_err(|_| GraphError::Parse {
                line,
                reason: format!("invalid number `{}`", s),
            })
        };
        let n = parse_num(parts[0], line_no)?;
        let m = parse_num(parts[1], line_no)?;
        let d = parse_num(parts[2], line_no)?;
        if d > 1 {
            return Err(GraphError::Parse {
                line: line_no,
                reason: "directed flag must be 0 or 1".into(),
            });
        }
        let mut g = Graph::new(n, d == 1);
        let mut count = 0;
        for (line, text) in lines {
            let parts: Vec<&str> = text.split_whitespace().collect();
            if parts.len() != 2 {
                return Err(GraphError::Parse {
                    line,
                    reason: "edge line must be `u v`".into(),
                });
            }
            let u = parse_num(parts[0], line)?;
            let v = parse_num(parts[1], line)?;
            g.add_edge(u, v).map_err(|e| GraphError::Parse {
                line,
                reason: e.to_string(),
            })?;
            count += 1;
        }
        if count != m {
            return Err(GraphError::Parse {
                line: 1,
                reason: format!("header declares {} edges, found {}", m, count),
            });
        }
        Ok(g)
    }
}

fn insert_sorted(v: &mut Vec<usize>, x: usize) {
    if let Err(pos) = v.binary_search(&x) {
        v.insert(pos, x);
    }
}

fn remove_sorted(v: &mut Vec<usize>, x: usize) {
    if let Ok(pos) = v.binary_search(&x) {
        v.remove(pos);
    }
}

// ---------------------------------------------------------------------------
// Seeded samplers
// ---------------------------------------------------------------------------

/// Erdos-Renyi draw: each unordered pair becomes an edge with probability `p`.
pub fn random_graph(n: usize, p: f64, seed: Seed) -> Graph {
    assert!((0.0..=1.0).contains(&p), "edge probability must be in [0, 1]");
    let mut rng = seed.rng();
    let mut g = Graph::new(n, false);
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.random_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

/// Directed counterpart of [`random_graph`]: each ordered pair independently.
pub fn random_digraph(n: usize, p: f64, seed: Seed) -> Graph {
    assert!((0.0..=1.0).contains(&p), "arc probability must be in [0, 1]");
    let mut rng = seed.rng();
    let mut g = Graph::new(n, true);
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.random_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

/// Uniform labeled tree via a random Prufer sequence.
fn random_tree(n: usize, rng: &mut impl Rng) -> Graph {
    let mut g = Graph::new(n, false);
    if n <= 1 {
        return g;
    }
    if n == 2 {
        g.add_edge(0, 1).unwrap();
        return g;
    }
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.random_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &s in &seq {
        degree[s] += 1;
    }
    let mut leaves: BTreeSet<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    for &s in &seq {
        let leaf = *leaves.iter().next().unwrap();
        leaves.remove(&leaf);
        g.add_edge(leaf, s).unwrap();
        degree[s] -= 1;
        if degree[s] == 1 {
            leaves.insert(s);
        }
    }
    let mut it = leaves.iter();
    let (a, b) = (*it.next().unwrap(), *it.next().unwrap());
    g.add_edge(a, b).unwrap();
    g
}

/// Random balanced bipartition plus independent cross edges.
fn random_bipartite(n: usize, p: f64, rng: &mut impl Rng) -> (Graph, Vec<usize>, Vec<usize>) {
    let mut ids: Vec<usize> = (0..n).collect();
    ids.shuffle(rng);
    let mut left: Vec<usize> = ids[..n.div_ceil(2)].to_vec();
    let mut right: Vec<usize> = ids[n.div_ceil(2)..].to_vec();
    left.sort_unstable();
    right.sort_unstable();
    let mut g = Graph::new(n, false);
    for &u in &left {
        for &v in &right {
            if rng.random_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    (g, left, right)
}

fn non_edges(g: &Graph) -> Vec<(usize, usize)> {
    let n = g.n();
    let mut out = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if !g.has_edge(u, v) {
                out.push((u, v));
            }
        }
    }
    out
}

fn require(theory: PropertyTheory, n: usize, min: usize) -> Result<(), TheoryError> {
    if n < min {
        return Err(TheoryError::UnsupportedSize { theory, n, min });
    }
    Ok(())
}

/// Smallest vertex count [`sample_theory`] supports for each property.
pub fn min_positive_size(theory: PropertyTheory) -> usize {
    match theory {
        PropertyTheory::Tree
        | PropertyTheory::Connected
        | PropertyTheory::Planar
        | PropertyTheory::TriangleFree => 1,
        PropertyTheory::Bipartite => 2,
        PropertyTheory::HasTriangle | PropertyTheory::TwoEdgeStrong => 3,
    }
}

/// Smallest vertex count [`sample_negative`] supports for each property.
/// Violations need room: a cycle for the tree and bipartite cases, the
/// smallest nonplanar graph for the planar case.
pub fn min_negative_size(theory: PropertyTheory) -> usize {
    match theory {
        PropertyTheory::Planar => 5,
        _ => 3,
    }
}

/// Draws a graph that satisfies the given theory by construction.
///
/// Tree: uniform labeled tree. Bipartite: random balanced bipartition with
/// cross-edge probability 0.4. Connected: spanning tree plus extra edges at
/// 0.15. Planar: spanning tree plus extra edges kept only when the planarity
/// test still passes. Triangle existence: background noise plus one planted
/// triangle. Triangle-free: a bipartite draw. Two-edge-strong connectivity:
/// a bi-directed cycle plus extra arcs (arc additions preserve the property).
pub fn sample_theory(theory: PropertyTheory, n: usize, seed: Seed) -> Result<Graph, TheoryError> {
    require(theory, n, min_positive_size(theory))?;
    let mut rng = seed.rng();
    match theory {
        PropertyTheory::Tree => {
            Ok(random_tree(n, &mut rng))
        }
        PropertyTheory::Bipartite => {
            Ok(random_bipartite(n, 0.4, &mut rng).0)
        }
        PropertyTheory::Connected => {
            let mut g = random_tree(n, &mut rng);
            for (u, v) in non_edges(&g) {
                if rng.random_bool(0.15) {
                    g.add_edge(u, v).unwrap();
                }
            }
            Ok(g)
        }
        PropertyTheory::Planar => {
            let mut g = random_tree(n, &mut rng);
            let mut candidates = non_edges(&g);
            candidates.shuffle(&mut rng);
            for (u, v) in candidates {
                if rng.random_bool(0.35) {
                    g.add_edge(u, v).unwrap();
                    if !crate::certificates::is_planar(&g) {
                        g.remove_edge(u, v).unwrap();
                    }
                }
            }
            Ok(g)
        }
        PropertyTheory::HasTriangle => {
            let mut g = Graph::new(n, false);
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.random_bool(0.2) {
                        g.add_edge(u, v).unwrap();
                    }
                }
            }
            let picks = rand::seq::index::sample(&mut rng, n, 3);
            let (a, b, c) = (picks.index(0), picks.index(1), picks.index(2));
            for (u, v) in [(a, b), (a, c), (b, c)] {
                if !g.has_edge(u, v) {
                    g.add_edge(u, v).unwrap();
                }
            }
            Ok(g)
        }
        PropertyTheory::TriangleFree => {
            if n == 1 {
                return Ok(Graph::new(1, false));
            }
            Ok(random_bipartite(n, 0.3, &mut rng).0)
        }
        PropertyTheory::TwoEdgeStrong => {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            let mut g = Graph::new(n, true);
            for i in 0..n {
                let (u, v) = (order[i], order[(i + 1) % n]);
                g.add_edge(u, v).unwrap();
                g.add_edge(v, u).unwrap();
            }
            for u in 0..n {
                for v in 0..n {
                    if u != v && !g.has_edge(u, v) && rng.random_bool(0.1) {
                        g.add_edge(u, v).unwrap();
                    }
                }
            }
            Ok(g)
        }
    }
}

/// Draws a graph that violates the given theory by construction.
///
/// Tree: a tree plus one extra edge. Bipartite: a bipartite draw plus one
/// intra-part edge closing an odd cycle (a shared neighbor is inserted first
/// when the chosen pair is disconnected). Planar: K5 or K3,3 plus isolated
/// vertices. Connected: two connected components. Triangle existence fails on
/// a bipartite draw; triangle-freeness fails on a planted triangle.
/// Two-edge-strong connectivity fails on a one-way cycle (degree deficit), on
/// two bi-directed cycles joined by a single bridge pair (unit cut), or on two
/// disconnected bi-directed cycles (no path at all).
pub fn sample_negative(theory: PropertyTheory, n: usize, seed: Seed) -> Result<Graph, TheoryError> {
    require(theory, n, min_negative_size(theory))?;
    let mut rng = seed.rng();
    match theory {
        PropertyTheory::Tree => {
            let mut g = random_tree(n, &mut rng);
            let candidates = non_edges(&g);
            let (u, v) = candidates[rng.random_range(0..candidates.len())];
            g.add_edge(u, v).unwrap();
            Ok(g)
        }
        PropertyTheory::Bipartite => {
            let (mut g, left, right) = random_bipartite(n, 0.4, &mut rng);
            let part = if left.len() >= 2 { &left } else { &right };
            let mut pairs = Vec::new();
            for i in 0..part.len() {
                for j in (i + 1)..part.len() {
                    pairs.push((part[i], part[j]));
                }
            }
            pairs.shuffle(&mut rng);
            for &(u, v) in &pairs {
                if bfs_connected(&g, u, v) {
                    g.add_edge(u, v).unwrap();
                    return Ok(g);
                }
            }
            // No same-part pair is connected yet: wire a shared neighbor so
            // the closing edge forms a triangle.
            let (u, v) = pairs.first().copied().unwrap_or((part[0], part[1]));
            let other = if part == &left { &right } else { &left };
            let w = other[rng.random_range(0..other.len())];
            for x in [u, v] {
                if !g.has_edge(x, w) {
                    g.add_edge(x, w).unwrap();
                }
            }
            g.add_edge(u, v).unwrap();
            Ok(g)
        }
        PropertyTheory::Planar => {
            let use_k33 = n >= 6 && rng.random_bool(0.5);
            let count = if use_k33 { 6 } else { 5 };
            let picks = rand::seq::index::sample(&mut rng, n, count).into_vec();
            let mut g = Graph::new(n, false);
            if use_k33 {
                for i in 0..3 {
                    for j in 3..6 {
                        g.add_edge(picks[i], picks[j]).unwrap();
                    }
                }
            } else {
                for i in 0..5 {
                    for j in (i + 1)..5 {
                        g.add_edge(picks[i], picks[j]).unwrap();
                    }
                }
            }
            Ok(g)
        }
        PropertyTheory::Connected => {
            let mut ids: Vec<usize> = (0..n).collect();
            ids.shuffle(&mut rng);
            let split = rng.random_range(1..n);
            let mut g = Graph::new(n, false);
            for part in [&ids[..split], &ids[split..]] {
                let mut local = random_tree(part.len(), &mut rng);
                for (u, v) in non_edges(&local) {
                    if rng.random_bool(0.15) {
                        local.add_edge(u, v).unwrap();
                    }
                }
                for (u, v) in local.edges() {
                    g.add_edge(part[u], part[v]).unwrap();
                }
            }
            Ok(g)
        }
        PropertyTheory::HasTriangle => {
            Ok(random_bipartite(n, 0.35, &mut rng).0)
        }
        PropertyTheory::TriangleFree => {
            let mut g = Graph::new(n, false);
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.random_bool(0.2) {
                        g.add_edge(u, v).unwrap();
                    }
                }
            }
            let picks = rand::seq::index::sample(&mut rng, n, 3);
            let (a, b, c) = (picks.index(0), picks.index(1), picks.index(2));
            for (u, v) in [(a, b), (a, c), (b, c)] {
                if !g.has_edge(u, v) {
                    g.add_edge(u, v).unwrap();
                }
            }
            Ok(g)
        }
        PropertyTheory::TwoEdgeStrong => {
            let variant = if n >= 6 { rng.random_range(0..3) } else { 0 };
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            let mut g = Graph::new(n, true);
            match variant {
                0 => {
                    // One-way cycle: every vertex has in- and out-degree 1.
                    for i in 0..n {
                        g.add_edge(order[i], order[(i + 1) % n]).unwrap();
                    }
                }
                _ => {
                    // Two bi-directed cycles, optionally joined by a single
                    // bridge pair (a unit cut for every cross pair).
                    let split = rng.random_range(3..=n - 3);
                    let (a, b) = order.split_at(split);
                    for part in [a, b] {
                        for i in 0..part.len() {
                            let (u, v) = (part[i], part[(i + 1) % part.len()]);
                            if !g.has_edge(u, v) {
                                g.add_edge(u, v).unwrap();
                            }
                            if !g.has_edge(v, u) {
                                g.add_edge(v, u).unwrap();
                            }
                        }
                    }
                    if variant == 1 {
                        let (x, y) = (a[rng.random_range(0..a.len())], b[rng.random_range(0..b.len())]);
                        g.add_edge(x, y).unwrap();
                        g.add_edge(y, x).unwrap();
                    }
                }
            }
            Ok(g)
        }
    }
}

fn bfs_connected(g: &Graph, from: usize, to: usize) -> bool {
    let mut seen = vec![false; g.n()];
    let mut queue = std::collections::VecDeque::new();
    seen[from] = true;
    queue.push_back(from);
    while let Some(v) = queue.pop_front() {
        if v == to {
            return true;
        }
        for &w in g.out_neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    false
}

/// Flips `round(fraction * m)` vertex pairs chosen uniformly without
/// replacement, where `m` is the current edge count. A flipped pair loses its
/// edge if present and gains one otherwise.
pub fn perturb(g: &Graph, fraction: f64, seed: Seed) -> Graph {
    assert!(
        (0.0..=1.0).contains(&fraction),
        "perturbation fraction must be in [0, 1]"
    );
    let n = g.n();
    let flips = (fraction * g.edge_count() as f64).round() as usize;
    let total_pairs = if g.is_directed() { n * (n - 1) } else { n * (n - 1) / 2 };
    debug_assert!(flips <= total_pairs);
    let mut rng = seed.rng();
    let mut out = g.clone();
    for idx in rand::seq::index::sample(&mut rng, total_pairs, flips) {
        let (u, v) = decode_pair(n, g.is_directed(), idx);
        out.toggle_edge(u, v).unwrap();
    }
    out
}

fn decode_pair(n: usize, directed: bool, idx: usize) -> (usize, usize) {
    if directed {
        let u = idx / (n - 1);
        let r = idx % (n - 1);
        let v = if r >= u { r + 1 } else { r };
        (u, v)
    } else {
        let mut idx = idx;
        for u in 0..n {
            let row = n - 1 - u;
            if idx < row {
                return (u, u + 1 + idx);
            }
            idx -= row;
        }
        unreachable!("pair index out of range")
    }
}
