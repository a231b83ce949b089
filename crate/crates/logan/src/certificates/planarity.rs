//! Planarity testing by incremental face embedding.
//!
//! The decision procedure splits the graph into biconnected blocks and grows
//! a planar embedding of each block face by face: starting from any cycle,
//! it repeatedly takes a fragment (a chord, or a component of the unembedded
//! vertices together with its attachment edges), finds the faces whose
//! boundary contains all of the fragment's contact vertices, and embeds a
//! path of the fragment across one such face, splitting it in two. A
//! fragment with no admissible face is a proof of nonplanarity; running out
//! of fragments is a complete embedding. Choosing a fragment with the fewest
//! admissible faces at every step makes the greedy procedure exact.
//!
//! For nonplanar graphs, [`kuratowski_edges`] peels removable edges until
//! every remaining edge is essential; the survivor is always a subdivision
//! of one of the two minimal nonplanar graphs (the complete graph on five
//! vertices or the complete bipartite graph on two triples), which
//! [`is_kuratowski_subdivision`] recognizes structurally.

use std::collections::{BTreeMap, BTreeSet};

use crate::graph::Graph;

/// Exact planarity test for undirected graphs.
pub fn is_planar(g: &Graph) -> bool {
    assert!(!g.is_directed(), "planarity is defined on undirected graphs");
    let n = g.n();
    if n <= 4 {
        return true;
    }
    if g.edge_count() > 3 * n - 6 {
        return false;
    }
    blocks(g).iter().all(|b| block_planar(b))
}

/// Edge-minimal nonplanar subgraph of a nonplanar graph, found by peeling:
/// each edge is removed for good when the remainder is still nonplanar. One
/// pass suffices because an edge that cannot be spared now cannot be spared
/// after further deletions either. Returns an empty list when the number of
/// planarity tests would exceed `test_budget`.
pub(crate) fn kuratowski_edges(g: &Graph, test_budget: usize) -> Vec<(usize, usize)> {
    debug_assert!(!is_planar(g));
    if g.edge_count() > test_budget {
        return Vec::new();
    }
    let mut work = g.clone();
    let snapshot: Vec<(usize, usize)> = work.edges().collect();
    for (u, v) in snapshot {
        work.remove_edge(u, v).expect("edge listed in the snapshot");
        if is_planar(&work) {
            work.add_edge(u, v).expect("restoring a just-removed edge");
        }
    }
    work.edges().collect()
}

/// Structural check that an edge set forms a subdivision of the complete
/// graph on five vertices or of the complete bipartite graph on two triples:
/// branch vertices all of one degree (4 or 3), every other vertex of degree
/// 2, and contracting the degree-2 chains yields the expected pattern with
/// no chain lost, doubled, or closed onto itself.
pub fn is_kuratowski_subdivision(edges: &[(usize, usize)]) -> bool {
    if edges.is_empty() {
        return false;
    }
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut eset: BTreeSet<(usize, usize)> = BTreeSet::new();
    for &(u, v) in edges {
        if u == v {
            return false;
        }
        if !eset.insert((u.min(v), u.max(v))) {
            return false; // duplicate edge
        }
        adj.entry(u).or_default().push(v);
        adj.entry(v).or_default().push(u);
    }
    let branch: Vec<usize> = adj
        .iter()
        .filter(|(_, nb)| nb.len() != 2)
        .map(|(&v, _)| v)
        .collect();
    let branch_degree = match branch.first() {
        None => return false, // only degree-2 vertices: a cycle, not a subdivision
        Some(&b) => adj[&b].len(),
    };
    let shape_ok = match branch_degree {
        4 => branch.len() == 5,
        3 => branch.len() == 6,
        _ => false,
    };
    if !shape_ok || branch.iter().any(|b| adj[b].len() != branch_degree) {
        return false;
    }

    // Walk every chain from both of its branch endpoints, consuming directed
    // half-edges so each chain is traversed exactly twice.
    let mut walked: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut contracted: Vec<(usize, usize)> = Vec::new();
    for &b in &branch {
        for &start in &adj[&b] {
            if walked.contains(&(b, start)) {
                continue;
            }
            let mut prev = b;
            let mut cur = start;
            walked.insert((b, start));
            while adj[&cur].len() == 2 {
                let next = if adj[&cur][0] == prev {
                    adj[&cur][1]
                } else {
                    adj[&cur][0]
                };
                walked.insert((cur, next));
                prev = cur;
                cur = next;
            }
            if cur == b {
                return false; // chain closed onto its own endpoint
            }
            contracted.push((b.min(cur), b.max(cur)));
        }
    }
    if walked.len() != 2 * eset.len() {
        return false; // stray components never reached from a branch vertex
    }
    contracted.sort_unstable();
    let mut simple: BTreeSet<(usize, usize)> = BTreeSet::new();
    for pair in contracted.chunks(2) {
        if pair.len() != 2 || pair[0] != pair[1] {
            return false;
        }
        if !simple.insert(pair[0]) {
            return false; // two parallel chains between the same branches
        }
    }

    match branch_degree {
        4 => simple.len() == 10, // complete on the five branch vertices
        3 => {
            if simple.len() != 9 {
                return false;
            }
            // The contracted graph must be bipartite with triple parts.
            let mut side: BTreeMap<usize, bool> = BTreeMap::new();
            let mut queue = vec![branch[0]];
            side.insert(branch[0], false);
            while let Some(v) = queue.pop() {
                let s = side[&v];
                let nbs: Vec<usize> = simple
                    .iter()
                    .filter_map(|&(a, b)| match v {
                        _ if a == v => Some(b),
                        _ if b == v => Some(a),
                        _ => None,
                    })
                    .collect();
                for w in nbs {
                    match side.get(&w) {
                        None => {
                            side.insert(w, !s);
                            queue.push(w);
                        }
                        Some(&t) if t == s => return false,
                        Some(_) => {}
                    }
                }
            }
            side.len() == 6 && side.values().filter(|&&s| s).count() == 3
        }
        _ => unreachable!(),
    }
}

// ---------------------------------------------------------------------------
// Biconnected blocks
// ---------------------------------------------------------------------------

/// Edge sets of the biconnected blocks, via lowpoint DFS with an edge stack.
fn blocks(g: &Graph) -> Vec<Vec<(usize, usize)>> {
    let n = g.n();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut estack: Vec<(usize, usize)> = Vec::new();
    let mut out = Vec::new();
    let mut timer = 0;
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        while let Some(&(v, i)) = stack.last() {
            let nbrs = g.neighbors(v);
            if i < nbrs.len() {
                stack.last_mut().expect("non-empty stack").1 = i + 1;
                let w = nbrs[i];
                if disc[w] == usize::MAX {
                    estack.push((v, w));
                    parent[w] = v;
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    stack.push((w, 0));
                } else if w != parent[v] && disc[w] < disc[v] {
                    estack.push((v, w));
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(u, _)) = stack.last() {
                    low[u] = low[u].min(low[v]);
                    if low[v] >= disc[u] {
                        // u separates the subtree under v: flush its block.
                        let mut block = Vec::new();
                        while let Some(e) = estack.pop() {
                            block.push(e);
                            if e == (u, v) {
                                break;
                            }
                        }
                        out.push(block);
                    }
                }
            }
        }
    }
    out
}

fn block_planar(block: &[(usize, usize)]) -> bool {
    if block.len() <= 3 {
        return true;
    }
    // Relabel the block onto 0..nb.
    let ids: BTreeSet<usize> = block.iter().flat_map(|&(u, v)| [u, v]).collect();
    let index: BTreeMap<usize, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let nb = ids.len();
    let mb = block.len();
    if nb <= 4 {
        return true;
    }
    if mb > 3 * nb - 6 {
        return false;
    }
    let edges: Vec<(usize, usize)> = block.iter().map(|&(u, v)| (index[&u], index[&v])).collect();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nb];
    for &(u, v) in &edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    for a in &mut adj {
        a.sort_unstable();
    }
    Embedder::new(nb, edges, adj).run()
}

// ---------------------------------------------------------------------------
// Face-by-face embedding of one biconnected block
// ---------------------------------------------------------------------------

#[derive(Debug)]
struct Fragment {
    contacts: BTreeSet<usize>,
    kind: FragmentKind,
}

#[derive(Debug)]
enum FragmentKind {
    /// A single unembedded edge between two embedded vertices.
    Chord(usize, usize),
    /// A connected component of the unembedded vertices.
    Component(Vec<usize>),
}

struct Embedder {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    embedded_v: Vec<bool>,
    embedded_e: BTreeSet<(usize, usize)>,
    /// Face boundaries, each a simple cycle of vertices.
    faces: Vec<Vec<usize>>,
}

fn canon(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

impl Embedder {
    fn new(n: usize, edges: Vec<(usize, usize)>, adj: Vec<Vec<usize>>) -> Embedder {
        Embedder {
            n,
            edges,
            adj,
            embedded_v: vec![false; n],
            embedded_e: BTreeSet::new(),
            faces: Vec::new(),
        }
    }

    fn run(&mut self) -> bool {
        let cycle = find_cycle(self.n, &self.adj)
            .expect("a biconnected block beyond a triangle contains a cycle");
        for i in 0..cycle.len() {
            self.embedded_v[cycle[i]] = true;
            self.embedded_e
                .insert(canon(cycle[i], cycle[(i + 1) % cycle.len()]));
        }
        self.faces.push(cycle.clone());
        self.faces.push(cycle);

        loop {
            let frags = self.fragments();
            if frags.is_empty() {
                return true;
            }
            // Admissible face indices per fragment; the fragment with the
            // fewest options is forced first.
            let mut best: Option<(usize, usize, usize)> = None; // (count, frag idx, face idx)
            for (fi, frag) in frags.iter().enumerate() {
                let admissible: Vec<usize> = self
                    .faces
                    .iter()
                    .enumerate()
                    .filter(|(_, f)| frag.contacts.iter().all(|c| f.contains(c)))
                    .map(|(i, _)| i)
                    .collect();
                match admissible.first() {
                    None => return false,
                    Some(&face) => {
                        if best.map_or(true, |(c, _, _)| admissible.len() < c) {
                            best = Some((admissible.len(), fi, face));
                        }
                    }
                }
            }
            let (_, fi, face) = best.expect("fragments is non-empty");
            let path = self.alpha_path(&frags[fi]);
            self.embed_path(face, &path);
        }
    }

    /// Unembedded chords and unembedded-vertex components, with their
    /// embedded contact vertices.
    fn fragments(&self) -> Vec<Fragment> {
        let mut out = Vec::new();
        for &(u, v) in &self.edges {
            if self.embedded_v[u] && self.embedded_v[v] && !self.embedded_e.contains(&canon(u, v))
            {
                out.push(Fragment {
                    contacts: BTreeSet::from([u, v]),
                    kind: FragmentKind::Chord(u, v),
                });
            }
        }
        let mut seen = self.embedded_v.clone();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            let mut contacts = BTreeSet::new();
            seen[start] = true;
            let mut queue = vec![start];
            while let Some(x) = queue.pop() {
                for &w in &self.adj[x] {
                    if self.embedded_v[w] {
                        contacts.insert(w);
                    } else if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(Fragment {
                contacts,
                kind: FragmentKind::Component(comp),
            });
        }
        out
    }

    /// A path through the fragment between two distinct contact vertices,
    /// with every interior vertex unembedded.
    fn alpha_path(&self, frag: &Fragment) -> Vec<usize> {
        match &frag.kind {
            FragmentKind::Chord(u, v) => vec![*u, *v],
            FragmentKind::Component(comp) => {
                let start = *frag
                    .contacts
                    .iter()
                    .next()
                    .expect("a fragment of a biconnected block has contacts");
                let in_comp: BTreeSet<usize> = comp.iter().copied().collect();
                let mut parent: BTreeMap<usize, usize> = BTreeMap::new();
                let mut queue = std::collections::VecDeque::new();
                // Seed with the component vertices adjacent to the start
                // contact, then search inside the component for any other
                // embedded contact.
                for &w in &self.adj[start] {
                    if in_comp.contains(&w) && !parent.contains_key(&w) {
                        parent.insert(w, start);
                        queue.push_back(w);
                    }
                }
                while let Some(x) = queue.pop_front() {
                    for &w in &self.adj[x] {
                        if self.embedded_v[w] && w != start {
                            let mut path = vec![w, x];
                            let mut cur = x;
                            while cur != start {
                                cur = parent[&cur];
                                path.push(cur);
                            }
                            path.reverse();
                            return path;
                        }
                        if in_comp.contains(&w) && !parent.contains_key(&w) {
                            parent.insert(w, x);
                            queue.push_back(w);
                        }
                    }
                }
                unreachable!("a fragment of a biconnected block has a second contact")
            }
        }
    }

    /// Splits `face` along `path` (whose endpoints lie on the face) into two
    /// faces and marks the path embedded.
    fn embed_path(&mut self, face: usize, path: &[usize]) {
        let f = self.faces.swap_remove(face);
        let a = path[0];
        let b = *path.last().expect("alpha paths have two endpoints");
        let i = f.iter().position(|&x| x == a).expect("endpoint on face");
        let j = f.iter().position(|&x| x == b).expect("endpoint on face");
        let interior = &path[1..path.len() - 1];

        let walk = |from: usize, to: usize| {
            let mut seg = Vec::new();
            let mut p = from;
            loop {
                seg.push(f[p]);
                if p == to {
                    break;
                }
                p = (p + 1) % f.len();
            }
            seg
        };
        let mut face1 = walk(i, j);
        face1.extend(interior.iter().rev());
        let mut face2 = walk(j, i);
        face2.extend(interior.iter());
        self.faces.push(face1);
        self.faces.push(face2);

        for &x in interior {
            self.embedded_v[x] = true;
        }
        for w in path.windows(2) {
            self.embedded_e.insert(canon(w[0], w[1]));
        }
    }
}

/// Any cycle in the graph, as a vertex sequence, via DFS back edges.
fn find_cycle(n: usize, adj: &[Vec<usize>]) -> Option<Vec<usize>> {
    let mut disc = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut pos = vec![usize::MAX; n]; // index on the current DFS path
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
            if i < adj[v].len() {
                stack.last_mut().expect("non-empty stack").1 = i + 1;
                let w = adj[v][i];
                if disc[w] == usize::MAX {
                    disc[w] = timer;
                    timer += 1;
                    parent[w] = v;
                    pos[w] = path.len();
                    path.push(w);
                    stack.push((w, 0));
                } else if w != parent[v] && pos[w] != usize::MAX && disc[w] < disc[v] {
                    return Some(path[pos[w]..].to_vec());
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
