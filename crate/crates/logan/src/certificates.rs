//! Exact property checks with refutation certificates and graded losses.
//!
//! Each [`PropertyTheory`] names a decidable graph property. [`check`]
//! decides it and, where the property fails, returns a small concrete
//! witness of the failure (an odd cycle, a cycle-closing edge, a component
//! with no outgoing edges, and so on) that [`verify_witness`] can confirm
//! independently of the decision procedure. [`certificate_loss`] grades how
//! far a graph is from the property on a `[0, 1]` scale that is zero exactly
//! when the property holds, which gives optimization loops a slope to
//! descend rather than a bare yes/no.

mod flow;
mod planarity;

pub use planarity::{is_kuratowski_subdivision, is_planar};

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, TheoryError};

/// The graph properties the toolkit can decide, grade, and repair toward.
///
/// All properties except [`PropertyTheory::TwoEdgeStrong`] are defined on
/// undirected graphs; `TwoEdgeStrong` is defined on digraphs.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum PropertyTheory {
    /// 2-colorable: no odd cycle.
    Bipartite,
    /// Connected and acyclic.
    Tree,
    /// One connected component.
    Connected,
    /// No three pairwise adjacent vertices.
    TriangleFree,
    /// At least three pairwise adjacent vertices.
    HasTriangle,
    /// Drawable in the plane without edge crossings.
    Planar,
    /// Every ordered vertex pair is joined by two edge-disjoint directed
    /// paths.
    TwoEdgeStrong,
}

impl PropertyTheory {
    pub const ALL: [PropertyTheory; 7] = [
        PropertyTheory::Bipartite,
        PropertyTheory::Tree,
        PropertyTheory::Connected,
        PropertyTheory::TriangleFree,
        PropertyTheory::HasTriangle,
        PropertyTheory::Planar,
        PropertyTheory::TwoEdgeStrong,
    ];

    /// Whether the property is defined on digraphs.
    pub fn directed(self) -> bool {
        matches!(self, PropertyTheory::TwoEdgeStrong)
    }

    pub fn name(self) -> &'static str {
        match self {
            PropertyTheory::Bipartite => "bipartite",
            PropertyTheory::Tree => "tree",
            PropertyTheory::Connected => "connected",
            PropertyTheory::TriangleFree => "triangle_free",
            PropertyTheory::HasTriangle => "has_triangle",
            PropertyTheory::Planar => "planar",
            PropertyTheory::TwoEdgeStrong => "two_edge_strong",
        }
    }
}

impl fmt::Display for PropertyTheory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown property {0:?} (expected one of: bipartite, tree, connected, triangle_free, has_triangle, planar, two_edge_strong)")]
pub struct UnknownProperty(pub String);

impl FromStr for PropertyTheory {
    type Err = UnknownProperty;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PropertyTheory::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| UnknownProperty(s.to_string()))
    }
}

/// Concrete evidence attached to a [`check`] outcome.
///
/// For every property except [`PropertyTheory::HasTriangle`] a witness
/// refutes the property. `HasTriangle` is existential, so there its witness
/// is the positive evidence (the triangle) and failing graphs carry none.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// An odd-length cycle, listed in order.
    OddCycle { cycle: Vec<usize> },
    /// An edge together with the cycle it closes; removing the edge breaks
    /// this cycle.
    ExtraCycleEdge {
        edge: (usize, usize),
        cycle: Vec<usize>,
    },
    /// A nonempty proper vertex subset with no edges leaving it (for
    /// digraphs: no outgoing arcs; for undirected graphs: no crossing
    /// edges).
    DisconnectingSplit { side: Vec<usize> },
    /// Three pairwise adjacent vertices.
    Triangle { vertices: [usize; 3] },
    /// Edges forming a subdivision of one of the two minimal nonplanar
    /// graphs. Empty when extraction gave up within its budget; an empty
    /// witness never verifies.
    KuratowskiSubgraph { edges: Vec<(usize, usize)> },
    /// Every directed path from `s` to `t` crosses the single arc `arc`.
    UnitCut {
        s: usize,
        t: usize,
        arc: (usize, usize),
    },
    /// A vertex whose out- or in-degree is too small for two edge-disjoint
    /// paths to exist through it.
    DegreeDeficit {
        vertex: usize,
        outgoing: bool,
        degree: usize,
    },
}

impl Witness {
    pub fn kind(&self) -> &'static str {
        match self {
            Witness::OddCycle { .. } => "odd_cycle",
            Witness::ExtraCycleEdge { .. } => "extra_cycle_edge",
            Witness::DisconnectingSplit { .. } => "disconnecting_split",
            Witness::Triangle { .. } => "triangle",
            Witness::KuratowskiSubgraph { .. } => "kuratowski_subgraph",
            Witness::UnitCut { .. } => "unit_cut",
            Witness::DegreeDeficit { .. } => "degree_deficit",
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::OddCycle { cycle } => {
                write!(f, "odd cycle {}", join_path(cycle))
            }
            Witness::ExtraCycleEdge { edge, cycle } => {
                write!(
                    f,
                    "edge ({}, {}) closes the cycle {}",
                    edge.0,
                    edge.1,
                    join_path(cycle)
                )
            }
            Witness::DisconnectingSplit { side } => {
                let set: Vec<String> = side.iter().map(|v| v.to_string()).collect();
                write!(f, "no edges leave {{{}}}", set.join(", "))
            }
            Witness::Triangle { vertices } => {
                write!(
                    f,
                    "triangle ({}, {}, {})",
                    vertices[0], vertices[1], vertices[2]
                )
            }
            Witness::KuratowskiSubgraph { edges } if edges.is_empty() => {
                write!(f, "nonplanar (subdivision extraction exceeded its budget)")
            }
            Witness::KuratowskiSubgraph { edges } => {
                write!(f, "kuratowski subdivision on {} edges", edges.len())
            }
            Witness::UnitCut { s, t, arc } => {
                write!(
                    f,
                    "every path {} -> {} crosses the arc ({}, {})",
                    s, t, arc.0, arc.1
                )
            }
            Witness::DegreeDeficit {
                vertex,
                outgoing,
                degree,
            } => {
                let dir = if *outgoing { "out" } else { "in" };
                write!(f, "vertex {vertex} has {dir}-degree {degree}, needs 2")
            }
        }
    }
}

fn join_path(vs: &[usize]) -> String {
    vs.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("-")
}

/// Result of deciding a property on a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub holds: bool,
    /// Refutation when the property fails; positive evidence for
    /// [`PropertyTheory::HasTriangle`] when it holds.
    pub witness: Option<Witness>,
}

impl CheckOutcome {
    fn holding() -> CheckOutcome {
        CheckOutcome {
            holds: true,
            witness: None,
        }
    }

    fn failing(witness: Witness) -> CheckOutcome {
        CheckOutcome {
            holds: false,
            witness: Some(witness),
        }
    }
}

fn ensure_directedness(theory: PropertyTheory, g: &Graph) -> Result<(), TheoryError> {
    if g.is_directed() != theory.directed() {
        return Err(TheoryError::WrongDirectedness {
            theory,
            graph_directed: g.is_directed(),
        });
    }
    Ok(())
}

/// Decides `theory` on `g`, attaching a witness where one is defined.
pub fn check(theory: PropertyTheory, g: &Graph) -> Result<CheckOutcome, TheoryError> {
    ensure_directedness(theory, g)?;
    Ok(match theory {
        PropertyTheory::Bipartite => match odd_cycle(g) {
            None => CheckOutcome::holding(),
            Some(cycle) => CheckOutcome::failing(Witness::OddCycle { cycle }),
        },
        PropertyTheory::Tree => check_tree(g),
        PropertyTheory::Connected => {
            if g.n() <= 1 {
                CheckOutcome::holding()
            } else {
                match smallest_component(g) {
                    None => CheckOutcome::holding(),
                    Some(side) => CheckOutcome::failing(Witness::DisconnectingSplit { side }),
                }
            }
        }
        PropertyTheory::TriangleFree => match first_triangle(g) {
            None => CheckOutcome::holding(),
            Some(vertices) => CheckOutcome::failing(Witness::Triangle { vertices }),
        },
        PropertyTheory::HasTriangle => match first_triangle(g) {
            Some(vertices) => CheckOutcome {
                holds: true,
                witness: Some(Witness::Triangle { vertices }),
            },
            None => CheckOutcome {
                holds: false,
                witness: None,
            },
        },
        PropertyTheory::Planar => {
            if is_planar(g) {
                CheckOutcome::holding()
            } else {
                let edges = planarity::kuratowski_edges(g, 20_000);
                CheckOutcome::failing(Witness::KuratowskiSubgraph { edges })
            }
        }
        PropertyTheory::TwoEdgeStrong => check_two_edge_strong(g),
    })
}

fn check_tree(g: &Graph) -> CheckOutcome {
    let n = g.n();
    if n == 0 {
        // Degenerate convention: the empty graph counts as a tree.
        return CheckOutcome::holding();
    }
    if let Some(side) = smallest_component(g) {
        return CheckOutcome::failing(Witness::DisconnectingSplit { side });
    }
    if g.edge_count() > n - 1 {
        let (edge, cycle) =
            undirected_cycle(g).expect("connected graph with >= n edges has a cycle");
        return CheckOutcome::failing(Witness::ExtraCycleEdge { edge, cycle });
    }
    CheckOutcome::holding()
}

fn check_two_edge_strong(g: &Graph) -> CheckOutcome {
    let n = g.n();
    if n <= 1 {
        return CheckOutcome::holding();
    }
    for v in 0..n {
        if g.out_degree(v) < 2 {
            return CheckOutcome::failing(Witness::DegreeDeficit {
                vertex: v,
                outgoing: true,
                degree: g.out_degree(v),
            });
        }
        if g.in_degree(v) < 2 {
            return CheckOutcome::failing(Witness::DegreeDeficit {
                vertex: v,
                outgoing: false,
                degree: g.in_degree(v),
            });
        }
    }
    for s in 0..n {
        for t in 0..n {
            if s == t {
                continue;
            }
            match flow::max_flow_le2(g, s, t) {
                2 => {}
                1 => {
                    let arc = flow::unit_cut_arc(g, s, t)
                        .expect("flow value 1 has a single crossing arc");
                    return CheckOutcome::failing(Witness::UnitCut { s, t, arc });
                }
                _ => {
                    return CheckOutcome::failing(Witness::DisconnectingSplit {
                        side: reachable_from(g, s),
                    });
                }
            }
        }
    }
    CheckOutcome::holding()
}

/// Confirms a witness against a graph without re-running the decision
/// procedure. Returns `false` for any witness that does not refute the
/// theory on this graph (or, for the existential triangle theory, does not
/// prove it).
pub fn verify_witness(theory: PropertyTheory, g: &Graph, witness: &Witness) -> bool {
    if g.is_directed() != theory.directed() {
        return false;
    }
    match (theory, witness) {
        (PropertyTheory::Bipartite, Witness::OddCycle { cycle }) => {
            cycle.len() % 2 == 1 && valid_cycle(g, cycle)
        }
        (PropertyTheory::Tree, Witness::ExtraCycleEdge { edge, cycle }) => {
            valid_cycle(g, cycle)
                && (0..cycle.len()).any(|i| {
                    let a = cycle[i];
                    let b = cycle[(i + 1) % cycle.len()];
                    (a.min(b), a.max(b)) == (edge.0.min(edge.1), edge.0.max(edge.1))
                })
        }
        (
            PropertyTheory::Tree | PropertyTheory::Connected | PropertyTheory::TwoEdgeStrong,
            Witness::DisconnectingSplit { side },
        ) => {
            let inside: BTreeSet<usize> = side.iter().copied().collect();
            inside.len() == side.len()
                && !inside.is_empty()
                && inside.len() < g.n()
                && side.iter().all(|&v| v < g.n())
                && g.edges().all(|(u, v)| {
                    if g.is_directed() {
                        // No arcs may leave the side.
                        !(inside.contains(&u) && !inside.contains(&v))
                    } else {
                        inside.contains(&u) == inside.contains(&v)
                    }
                })
        }
        (
            PropertyTheory::TriangleFree | PropertyTheory::HasTriangle,
            Witness::Triangle { vertices },
        ) => {
            let [a, b, c] = *vertices;
            a != b
                && a != c
                && b != c
                && a < g.n()
                && b < g.n()
                && c < g.n()
                && g.has_edge(a, b)
                && g.has_edge(a, c)
                && g.has_edge(b, c)
        }
        (PropertyTheory::Planar, Witness::KuratowskiSubgraph { edges }) => {
            edges
                .iter()
                .all(|&(u, v)| u < g.n() && v < g.n() && g.has_edge(u, v))
                && is_kuratowski_subdivision(edges)
        }
        (PropertyTheory::TwoEdgeStrong, Witness::UnitCut { s, t, arc }) => {
            if *s == *t || *s >= g.n() || *t >= g.n() || !g.has_edge(arc.0, arc.1) {
                return false;
            }
            let mut cut = g.clone();
            cut.remove_edge(arc.0, arc.1).expect("arc exists");
            !reachable_from(&cut, *s).contains(t)
        }
        (
            PropertyTheory::TwoEdgeStrong,
            Witness::DegreeDeficit {
                vertex,
                outgoing,
                degree,
            },
        ) => {
            g.n() >= 2
                && *vertex < g.n()
                && *degree < 2
                && *degree
                    == if *outgoing {
                        g.out_degree(*vertex)
                    } else {
                        g.in_degree(*vertex)
                    }
        }
        _ => false,
    }
}

/// Graded violation of `theory` on `g`, in `[0, 1]`, zero exactly when the
/// property holds. The gradations count normalized concrete defects:
/// conflicting edges under a greedy 2-coloring, missing connectivity,
/// surplus edges, triangles present or absent, crossings forced by edge
/// count, and vertex pairs without two edge-disjoint paths.
pub fn certificate_loss(theory: PropertyTheory, g: &Graph) -> Result<f64, TheoryError> {
    ensure_directedness(theory, g)?;
    let n = g.n();
    let m = g.edge_count();
    let loss = match theory {
        PropertyTheory::Bipartite => {
            if m == 0 {
                0.0
            } else {
                bipartite_conflicts(g) as f64 / m as f64
            }
        }
        PropertyTheory::Tree => {
            if n == 0 {
                0.0
            } else {
                let comps = components(g).len();
                let extra = m.saturating_sub(n - 1);
                (((comps - 1) + extra) as f64 / n as f64).min(1.0)
            }
        }
        PropertyTheory::Connected => {
            if n <= 1 {
                0.0
            } else {
                let comps = components(g).len();
                ((comps - 1) as f64 / (n - 1) as f64).min(1.0)
            }
        }
        PropertyTheory::TriangleFree => {
            if n < 3 {
                0.0
            } else {
                let possible = n * (n - 1) * (n - 2) / 6;
                (triangle_count(g) as f64 / possible as f64).min(1.0)
            }
        }
        PropertyTheory::HasTriangle => {
            if first_triangle(g).is_some() {
                0.0
            } else if n < 3 {
                1.0
            } else if (0..n).any(|v| g.degree(v) >= 2) {
                // One edge closes an existing wedge.
                1.0 / 3.0
            } else if m >= 1 {
                2.0 / 3.0
            } else {
                1.0
            }
        }
        PropertyTheory::Planar => {
            if is_planar(g) {
                0.0
            } else {
                let excess = m as f64 - (3 * n - 6) as f64;
                if excess > 0.0 {
                    (excess / n as f64).min(1.0)
                } else {
                    // Nonplanar but under the edge bound: a flat penalty,
                    // since no single-edge count expresses the violation.
                    0.5
                }
            }
        }
        PropertyTheory::TwoEdgeStrong => {
            if n <= 1 {
                0.0
            } else {
                let mut failing = 0usize;
                for s in 0..n {
                    for t in 0..n {
                        if s != t && flow::max_flow_le2(g, s, t) < 2 {
                            failing += 1;
                        }
                    }
                }
                failing as f64 / (n * (n - 1)) as f64
            }
        }
    };
    debug_assert!((0.0..=1.0).contains(&loss));
    Ok(loss)
}

/// Whether two edge-disjoint directed paths lead from `s` to `t`.
pub fn two_edge_disjoint(g: &Graph, s: usize, t: usize) -> bool {
    assert!(s < g.n() && t < g.n() && s != t, "need distinct vertices in range");
    flow::max_flow_le2(g, s, t) == 2
}

/// Cheap structural summaries of a digraph used when grading directed
/// properties without full pairwise flow probes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedProxies {
    pub min_out_degree: usize,
    pub min_in_degree: usize,
    /// Arcs lying on at least one directed cycle (endpoints share a
    /// strongly connected component).
    pub cyclic_arcs: usize,
    /// Arcs whose removal leaves their head unreachable from their tail.
    pub bridge_arcs: Vec<(usize, usize)>,
}

pub fn directed_proxies(g: &Graph) -> DirectedProxies {
    assert!(g.is_directed(), "proxies are defined on digraphs");
    let n = g.n();
    let comp = scc_ids(g);
    let cyclic_arcs = g.edges().filter(|&(u, v)| comp[u] == comp[v]).count();
    let bridge_arcs = g
        .edges()
        .filter(|&(u, v)| {
            let mut cut = g.clone();
            cut.remove_edge(u, v).expect("iterating existing arcs");
            !reachable_from(&cut, u).contains(&v)
        })
        .collect();
    DirectedProxies {
        min_out_degree: (0..n).map(|v| g.out_degree(v)).min().unwrap_or(0),
        min_in_degree: (0..n).map(|v| g.in_degree(v)).min().unwrap_or(0),
        cyclic_arcs,
        bridge_arcs,
    }
}

// ---------------------------------------------------------------------------
// Shared helpers
// ---------------------------------------------------------------------------

fn valid_cycle(g: &Graph, cycle: &[usize]) -> bool {
    if cycle.len() < 3 {
        return false;
    }
    let distinct: BTreeSet<usize> = cycle.iter().copied().collect();
    distinct.len() == cycle.len()
        && cycle.iter().all(|&v| v < g.n())
        && (0..cycle.len()).all(|i| g.has_edge(cycle[i], cycle[(i + 1) % cycle.len()]))
}

/// Connected components of an undirected graph, each sorted, in order of
/// their smallest vertex.
fn components(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut comp = vec![root];
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &w in g.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                    queue.push_back(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// The smallest component (ties broken by smallest vertex) when the graph is
/// disconnected; `None` when it is connected or has no vertices.
fn smallest_component(g: &Graph) -> Option<Vec<usize>> {
    let mut comps = components(g);
    if comps.len() <= 1 {
        return None;
    }
    comps.sort_by_key(|c| (c.len(), c[0]));
    Some(comps.remove(0))
}

/// Vertices reachable from `s` along arcs, sorted, `s` included.
fn reachable_from(g: &Graph, s: usize) -> Vec<usize> {
    let mut seen = vec![false; g.n()];
    seen[s] = true;
    let mut out = vec![s];
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        for &w in g.out_neighbors(u) {
            if !seen[w] {
                seen[w] = true;
                out.push(w);
                queue.push_back(w);
            }
        }
    }
    out.sort_unstable();
    out
}

/// An odd cycle found by breadth-first 2-coloring: a same-color edge closes
/// an odd cycle through the endpoints' lowest common search ancestor.
fn odd_cycle(g: &Graph) -> Option<Vec<usize>> {
    let n = g.n();
    let mut color = vec![u8::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![0usize; n];
    for root in 0..n {
        if color[root] != u8::MAX {
            continue;
        }
        color[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &w in g.neighbors(u) {
                if color[w] == u8::MAX {
                    color[w] = 1 - color[u];
                    parent[w] = u;
                    depth[w] = depth[u] + 1;
                    queue.push_back(w);
                } else if color[w] == color[u] {
                    return Some(cycle_through(u, w, &parent, &depth));
                }
            }
        }
    }
    None
}

/// The cycle formed by the tree paths from `u` and `w` to their lowest
/// common ancestor plus the edge `(w, u)`. Equal colors mean equal depth
/// parity, so the length is odd.
fn cycle_through(u: usize, w: usize, parent: &[usize], depth: &[usize]) -> Vec<usize> {
    let mut pu = vec![u];
    let mut pw = vec![w];
    let (mut a, mut b) = (u, w);
    while depth[a] > depth[b] {
        a = parent[a];
        pu.push(a);
    }
    while depth[b] > depth[a] {
        b = parent[b];
        pw.push(b);
    }
    while a != b {
        a = parent[a];
        pu.push(a);
        b = parent[b];
        pw.push(b);
    }
    pw.pop(); // drop the shared ancestor; it closes pu already
    pu.extend(pw.iter().rev());
    pu
}

/// Some cycle of a connected undirected graph with at least `n` edges,
/// returned as the closing (non-tree) edge plus the full vertex cycle.
fn undirected_cycle(g: &Graph) -> Option<((usize, usize), Vec<usize>)> {
    let n = g.n();
    let mut disc = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut pos = vec![usize::MAX; n];
    let mut timer = 0;
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = timer;
        timer += 1;
        let mut path = vec![root];
        pos[root] = 0;
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        while let Some(&(v, i)) = stack.last() {
            let nbrs = g.neighbors(v);
            if i < nbrs.len() {
                stack.last_mut().expect("non-empty stack").1 = i + 1;
                let w = nbrs[i];
                if disc[w] == usize::MAX {
                    disc[w] = timer;
                    timer += 1;
                    parent[w] = v;
                    pos[w] = path.len();
                    path.push(w);
                    stack.push((w, 0));
                } else if w != parent[v] && pos[w] != usize::MAX && disc[w] < disc[v] {
                    let cycle = path[pos[w]..].to_vec();
                    return Some(((v.min(w), v.max(w)), cycle));
                }
            } else {
                stack.pop();
                pos[v] = usize::MAX;
                path.pop();
            }
        }
    }
    None
}

/// Lexicographically first triangle `(a, b, c)` with `a < b < c`.
fn first_triangle(g: &Graph) -> Option<[usize; 3]> {
    if g.is_directed() {
        return None;
    }
    for u in 0..g.n() {
        for &v in g.neighbors(u) {
            if v <= u {
                continue;
            }
            if let Some(w) = common_neighbor_above(g, u, v, v) {
                return Some([u, v, w]);
            }
        }
    }
    None
}

fn triangle_count(g: &Graph) -> usize {
    let mut count = 0;
    for u in 0..g.n() {
        for &v in g.neighbors(u) {
            if v <= u {
                continue;
            }
            // Two-pointer intersection over the sorted adjacency lists,
            // counting only completions above v so each triangle counts once.
            let (mut i, mut j) = (0, 0);
            let (nu, nv) = (g.neighbors(u), g.neighbors(v));
            while i < nu.len() && j < nv.len() {
                match nu[i].cmp(&nv[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        if nu[i] > v {
                            count += 1;
                        }
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
    }
    count
}

fn common_neighbor_above(g: &Graph, u: usize, v: usize, floor: usize) -> Option<usize> {
    let (mut i, mut j) = (0, 0);
    let (nu, nv) = (g.neighbors(u), g.neighbors(v));
    while i < nu.len() && j < nv.len() {
        match nu[i].cmp(&nv[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                if nu[i] > floor {
                    return Some(nu[i]);
                }
                i += 1;
                j += 1;
            }
        }
    }
    None
}

/// Conflicting edges under greedy breadth-first 2-coloring; zero exactly for
/// bipartite graphs.
fn bipartite_conflicts(g: &Graph) -> usize {
    let n = g.n();
    let mut color = vec![u8::MAX; n];
    for root in 0..n {
        if color[root] != u8::MAX {
            continue;
        }
        color[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &w in g.neighbors(u) {
                if color[w] == u8::MAX {
                    color[w] = 1 - color[u];
                    queue.push_back(w);
                }
            }
        }
    }
    g.edges().filter(|&(u, v)| color[u] == color[v]).count()
}

/// Strongly connected component ids, by forward finish order then reverse
/// sweep.
fn scc_ids(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut order = Vec::with_capacity(n);
    let mut state = vec![0u8; n];
    for root in 0..n {
        if state[root] != 0 {
            continue;
        }
        state[root] = 1;
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        while let Some(&(v, i)) = stack.last() {
            let outs = g.out_neighbors(v);
            if i < outs.len() {
                stack.last_mut().expect("non-empty stack").1 = i + 1;
                let w = outs[i];
                if state[w] == 0 {
                    state[w] = 1;
                    stack.push((w, 0));
                }
            } else {
                stack.pop();
                state[v] = 2;
                order.push(v);
            }
        }
    }
    let mut comp = vec![usize::MAX; n];
    let mut next = 0;
    for &root in order.iter().rev() {
        if comp[root] != usize::MAX {
            continue;
        }
        comp[root] = next;
        let mut queue = vec![root];
        while let Some(v) = queue.pop() {
            for &w in g.in_neighbors(v) {
                if comp[w] == usize::MAX {
                    comp[w] = next;
                    queue.push(w);
                }
            }
        }
        next += 1;
    }
    comp
}
