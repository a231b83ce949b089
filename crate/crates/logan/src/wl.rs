//! One-dimensional Weisfeiler-Leman color refinement and per-vertex
//! neighborhood signatures.
//!
//! [`wl_refine`] computes the classical refinement partition with canonical
//! color ids: each round a vertex's signature is its current color plus the
//! sorted multiset of neighbor colors (in- and out-multisets separately for
//! digraphs), and new ids are assigned by signature rank. Ids are therefore
//! stable across graph relabelings.
//!
//! [`wl_signature`] hashes the same iterated-neighborhood information into a
//! 64-bit value with a fixed, seedless FNV-1a chain. Unlike refinement color
//! ids, signature values are comparable across different graphs: vertices
//! whose depth-d neighborhood unfoldings agree receive equal signatures.
//! Signatures are a ranking heuristic for game probes, not a completeness
//! guarantee; refinement-equivalent vertex pairs can be hash-distinct only in
//! the event of a 64-bit collision.

use crate::graph::Graph;

/// Result of color refinement: one canonical color id per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    pub colors: Vec<usize>,
    /// Refinement passes executed; the final pass is the one that detected
    /// the fixed point (or the `max_rounds` cutoff).
    pub rounds: usize,
}

impl Coloring {
    pub fn class_count(&self) -> usize {
        self.colors.iter().copied().max().map_or(0, |c| c + 1)
    }

    /// Vertex classes indexed by color id.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.class_count()];
        for (v, &c) in self.colors.iter().enumerate() {
            out[c].push(v);
        }
        out
    }
}

/// Runs color refinement from the uniform initial coloring until the
/// partition stabilizes or `max_rounds` passes have been executed.
pub fn wl_refine(g: &Graph, max_rounds: usize) -> Coloring {
    let n = g.n();
    let mut colors = vec![0usize; n];
    if n == 0 {
        return Coloring { colors, rounds: 0 };
    }
    let mut class_count = 1usize;
    let mut rounds = 0usize;
    for _ in 0..max_rounds {
        rounds += 1;
        let (next, next_count) = refine_once(g, &colors);
        // Refinement only splits classes, so an unchanged class count means
        // an unchanged partition.
        let stable = next_count == class_count;
        colors = next;
        class_count = next_count;
        if stable {
            break;
        }
    }
    Coloring { colors, rounds }
}

fn refine_once(g: &Graph, colors: &[usize]) -> (Vec<usize>, usize) {
    let n = g.n();
    let mut sigs: Vec<(usize, Vec<usize>, Vec<usize>)> = Vec::with_capacity(n);
    for v in 0..n {
        let mut outc: Vec<usize> = g.out_neighbors(v).iter().map(|&w| colors[w]).collect();
        outc.sort_unstable();
        let innc = if g.is_directed() {
            let mut c: Vec<usize> = g.in_neighbors(v).iter().map(|&w| colors[w]).collect();
            c.sort_unstable();
            c
        } else {
            Vec::new()
        };
        sigs.push((colors[v], outc, innc));
    }
    let mut sorted: Vec<&(usize, Vec<usize>, Vec<usize>)> = sigs.iter().collect();
    sorted.sort();
    sorted.dedup();
    let next: Vec<usize> = sigs
        .iter()
        .map(|s| sorted.binary_search(&s).unwrap())
        .collect();
    (next, sorted.len())
}

/// Per-vertex signature hashes for depths `0..=depth`.
///
/// Row `d` holds the depth-`d` signature of every vertex. Row 0 is constant;
/// row `d + 1` hashes a vertex's row-`d` value together with the sorted
/// multiset of its neighbors' row-`d` values.
pub fn signature_table(g: &Graph, depth: usize) -> Vec<Vec<u64>> {
    let n = g.n();
    let base = fnv1a(&[b"wl-base".as_slice()], &[]);
    let mut table = vec![vec![base; n]];
    for d in 0..depth {
        let prev = &table[d];
        let mut row = Vec::with_capacity(n);
        for v in 0..n {
            let mut outh: Vec<u64> = g.out_neighbors(v).iter().map(|&w| prev[w]).collect();
            outh.sort_unstable();
            let mut words = vec![prev[v]];
            words.extend_from_slice(&outh);
            if g.is_directed() {
                words.push(u64::MAX); // separator between out- and in-multisets
                let mut innh: Vec<u64> = g.in_neighbors(v).iter().map(|&w| prev[w]).collect();
                innh.sort_unstable();
                words.extend_from_slice(&innh);
            }
            row.push(fnv1a(&[b"wl-step".as_slice()], &words));
        }
        table.push(row);
    }
    table
}

/// Depth-bounded neighborhood signature of a single vertex.
pub fn wl_signature(g: &Graph, v: usize, depth: usize) -> u64 {
    assert!(v < g.n(), "vertex out of range");
    signature_table(g, depth)[depth][v]
}

/// Fixed-parameter FNV-1a over a byte tag followed by little-endian words.
fn fnv1a(tags: &[&[u8]], words: &[u64]) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut h = OFFSET;
    for tag in tags {
        for &b in *tag {
            h ^= b as u64;
            h = h.wrapping_mul(PRIME);
        }
    }
    for w in words {
        for b in w.to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(PRIME);
        }
    }
    h
}
