//! Round-resilience of graph pairs under the two-player back-and-forth game.
//!
//! In each round the first player (Spoiler) picks a vertex in either graph
//! and the second player (Duplicator) answers with a vertex in the other
//! graph; Duplicator survives the round when the chosen correspondence is
//! still a partial isomorphism. The round-resilience of a pair is the largest
//! number of rounds Duplicator can always survive. Graphs that agree on every
//! first-order sentence of quantifier depth `r` are exactly the pairs with
//! resilience at least `r`, which makes the value a bounded-logic similarity
//! measure.
//!
//! Two engines are provided. [`exact_round_resilience`] runs a memoized
//! minimax over all partial maps and is intended for small instances and as
//! the reference for tests. [`approx_round_resilience`] explores the same
//! game under explicit budgets: Spoiler moves are ranked by signature rarity,
//! Duplicator replies by signature agreement, both are truncated per round,
//! and the number of distinct positions expanded per round is capped. With
//! exhaustive budgets the budgeted engine degenerates to the exact minimax.
//!
//! When Spoiler wins, [`spoiler_witness`] extracts a winning strategy as an
//! adaptive tree: one Spoiler pick per position, with a child per Duplicator
//! reply. A flat pick sequence is not enough — against a star-versus-path
//! pair, for example, Spoiler's second pick must depend on Duplicator's first
//! answer — so the witness stores the full branching and
//! [`SpoilerWitness::replay`] re-verifies it against an exhaustive Duplicator
//! without consulting the engine that produced it.

use std::collections::{BTreeMap, HashMap};
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::graph::Graph;
use crate::wl::signature_table;

/// Largest vertex count (per graph) accepted by the exact engine.
pub const EXACT_INSTANCE_CAP: usize = 10;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EfError {
    #[error("exact engine accepts at most {cap} vertices per graph, got {n}; use the budgeted engine")]
    InstanceTooLarge { n: usize, cap: usize },
    #[error("cannot play the game between a directed and an undirected graph")]
    DirectednessMismatch,
}

/// Resource limits for the budgeted engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProbeBudget {
    /// Round cap: probes never look deeper than `k` rounds.
    pub k: usize,
    /// Cap on distinct positions expanded per round depth.
    pub start_probes: usize,
    /// Branch cap per side per round: top-ranked Spoiler moves per graph and
    /// top-ranked Duplicator replies per move.
    pub branch_cap: usize,
    /// Wall-clock cutoff for one probe.
    pub timeout_ms: u64,
}

impl Default for ProbeBudget {
    fn default() -> Self {
        ProbeBudget {
            k: 3,
            start_probes: 16,
            branch_cap: 4,
            timeout_ms: 10_000,
        }
    }
}

impl ProbeBudget {
    /// Budget large enough that nothing is truncated for the given pair; the
    /// budgeted engine then reproduces the exact game value.
    pub fn exhaustive(k: usize, g: &Graph, h: &Graph) -> ProbeBudget {
        ProbeBudget {
            k,
            start_probes: usize::MAX,
            branch_cap: g.n().max(h.n()).max(1),
            timeout_ms: u64::MAX / 4,
        }
    }
}

/// Result of a budgeted probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ApproxResilience {
    /// Deepest fully verified round count.
    pub rounds: usize,
    /// Set when the wall clock expired before the probe finished; `rounds`
    /// then reports the deepest round that completed.
    pub timed_out: bool,
}

/// Which graph Spoiler picked in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Side {
    G,
    H,
}

/// One node of a Spoiler strategy: the pick to make at this position and the
/// continuation for every Duplicator reply that is still a partial
/// isomorphism. A leaf (empty reply map) is a position where no reply is
/// valid at all.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategyNode {
    pub side: Side,
    pub vertex: usize,
    pub replies: BTreeMap<usize, StrategyNode>,
}

/// A winning Spoiler strategy of fixed depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpoilerWitness {
    pub depth: usize,
    pub root: StrategyNode,
}

impl SpoilerWitness {
    /// Verifies the strategy against an exhaustive Duplicator: every valid
    /// reply chain must die within `depth` rounds. Pure frontier walk,
    /// independent of the search that produced the witness.
    pub fn replay(&self, g: &Graph, h: &Graph) -> bool {
        if g.is_directed() != h.is_directed() {
            return false;
        }
        let mut map = Vec::new();
        replay_node(g, h, &mut map, &self.root, self.depth)
    }

    /// One concrete line of play: the strategy followed along the smallest
    /// surviving reply at each node.
    pub fn principal_moves(&self) -> Vec<(Side, usize)> {
        let mut out = Vec::new();
        let mut node = Some(&self.root);
        while let Some(cur) = node {
            out.push((cur.side, cur.vertex));
            node = cur.replies.values().next();
        }
        out
    }
}

fn replay_node(
    g: &Graph,
    h: &Graph,
    map: &mut Vec<(usize, usize)>,
    node: &StrategyNode,
    depth_left: usize,
) -> bool {
    if depth_left == 0 {
        return false; // strategy deeper than its declared depth
    }
    let (pick_n, reply_n) = match node.side {
        Side::G => (g.n(), h.n()),
        Side::H => (h.n(), g.n()),
    };
    if node.vertex >= pick_n {
        return false;
    }
    let picked_already = map
        .iter()
        .any(|&(a, b)| node.vertex == if node.side == Side::G { a } else { b });
    if picked_already {
        return false; // a re-pick wastes the round; never part of a minimal witness
    }
    for w in 0..reply_n {
        let pair = match node.side {
            Side::G => (node.vertex, w),
            Side::H => (w, node.vertex),
        };
        if !extension_valid(g, h, map, pair.0, pair.1) {
            continue;
        }
        // Duplicator survived this round with reply `w`; the strategy must
        // say how to continue and must win the remainder.
        let Some(child) = node.replies.get(&w) else {
            return false;
        };
        if depth_left == 1 {
            return false; // Duplicator survived the final round
        }
        map.push(pair);
        let ok = replay_node(g, h, map, child, depth_left - 1);
        map.pop();
        if !ok {
            return false;
        }
    }
    true
}

/// Partial-isomorphism check for extending `map` with the pair `(a, b)`.
/// Injectivity is the caller's responsibility; this checks adjacency
/// agreement (both orientations, so digraphs are covered) against every
/// mapped pair.
fn extension_valid(g: &Graph, h: &Graph, map: &[(usize, usize)], a: usize, b: usize) -> bool {
    for &(x, y) in map {
        if a == x || b == y {
            // Re-picking a mapped vertex is only consistent with its mate.
            if a == x && b == y {
                continue;
            }
            return false;
        }
        if g.has_edge(a, x) != h.has_edge(b, y) || g.has_edge(x, a) != h.has_edge(y, b) {
            return false;
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Position keys
// ---------------------------------------------------------------------------

/// Canonical (order-independent) key for a partial map. Small instances pack
/// into a u128, eight bits per pair.
#[derive(Debug, Clone, Hash, PartialEq, Eq)]
enum MapKey {
    Small(u128, u8),
    Big(Vec<u32>),
}

fn map_key(map: &[(usize, usize)], small: bool) -> MapKey {
    if small && map.len() <= 16 {
        let mut bytes: Vec<u8> = map.iter().map(|&(a, b)| ((a as u8) << 4) | b as u8).collect();
        bytes.sort_unstable();
        let mut packed = 0u128;
        for b in bytes {
            packed = (packed << 8) | b as u128;
        }
        MapKey::Small(packed, map.len() as u8)
    } else {
        let mut words: Vec<u32> = map
            .iter()
            .map(|&(a, b)| ((a as u32) << 16) | b as u32)
            .collect();
        words.sort_unstable();
        MapKey::Big(words)
    }
}

// ---------------------------------------------------------------------------
// Exact engine
// ---------------------------------------------------------------------------

struct Exact<'a> {
    g: &'a Graph,
    h: &'a Graph,
    memo: HashMap<(MapKey, u8), bool>,
}

impl<'a> Exact<'a> {
    fn new(g: &'a Graph, h: &'a Graph) -> Exact<'a> {
        Exact {
            g,
            h,
            memo: HashMap::new(),
        }
    }

    /// True when Duplicator survives `rounds` more rounds from this position.
    fn duplicator_wins(&mut self, map: &mut Vec<(usize, usize)>, rounds: usize) -> bool {
        if rounds == 0 {
            return true;
        }
        let key = (map_key(map, true), rounds as u8);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let result = self.compute(map, rounds);
        self.memo.insert(key, result);
        result
    }

    fn compute(&mut self, map: &mut Vec<(usize, usize)>, rounds: usize) -> bool {
        // Spoiler picks any unmapped vertex on either side. Picking a mapped
        // vertex forces the matching reply and burns the round, so it never
        // helps Spoiler and is skipped.
        for (side, n) in [(Side::G, self.g.n()), (Side::H, self.h.n())] {
            for v in 0..n {
                let mapped = map
                    .iter()
                    .any(|&(a, b)| v == if side == Side::G { a } else { b });
                if mapped {
                    continue;
                }
                if !self.answerable(map, side, v, rounds) {
                    return false;
                }
            }
        }
        true
    }

    fn answerable(
        &mut self,
        map: &mut Vec<(usize, usize)>,
        side: Side,
        v: usize,
        rounds: usize,
    ) -> bool {
        let reply_n = match side {
            Side::G => self.h.n(),
            Side::H => self.g.n(),
        };
        for w in 0..reply_n {
            let (a, b) = match side {
                Side::G => (v, w),
                Side::H => (w, v),
            };
            if map.iter().any(|&(x, y)| x == a || y == b) {
                continue;
            }
            if !extension_valid(self.g, self.h, map, a, b) {
                continue;
            }
            map.push((a, b));
            let ok = self.duplicator_wins(map, rounds - 1);
            map.pop();
            if ok {
                return true;
            }
        }
        false
    }
}

/// Exact round-resilience by memoized minimax: the largest `r <= k_max` such
/// that Duplicator survives `r` rounds. Instances are capped at
/// [`EXACT_INSTANCE_CAP`] vertices per graph.
pub fn exact_round_resilience(g: &Graph, h: &Graph, k_max: usize) -> Result<usize, EfError> {
    check_exact_preconditions(g, h)?;
    let mut engine = Exact::new(g, h);
    let mut map = Vec::new();
    for r in 1..=k_max {
        if !engine.duplicator_wins(&mut map, r) {
            return Ok(r - 1);
        }
    }
    Ok(k_max)
}

/// Extracts a winning Spoiler strategy of depth `r* + 1` when the pair is
/// distinguishable within `k_max` rounds; `None` when Duplicator survives all
/// `k_max` rounds.
pub fn spoiler_witness(
    g: &Graph,
    h: &Graph,
    k_max: usize,
) -> Result<Option<SpoilerWitness>, EfError> {
    let r_star = exact_round_resilience(g, h, k_max)?;
    if r_star >= k_max {
        return Ok(None);
    }
    let depth = r_star + 1;
    let mut engine = Exact::new(g, h);
    let mut map = Vec::new();
    debug_assert!(!engine.duplicator_wins(&mut map, depth));
    let root = extract_strategy(&mut engine, &mut map, depth);
    Ok(Some(SpoilerWitness { depth, root }))
}

/// Builds the strategy tree at a position Spoiler wins with `rounds` to play:
/// find a pick whose every valid reply still loses for Duplicator, then
/// recurse into each reply.
fn extract_strategy(
    engine: &mut Exact<'_>,
    map: &mut Vec<(usize, usize)>,
    rounds: usize,
) -> StrategyNode {
    debug_assert!(rounds >= 1);
    for (side, n) in [(Side::G, engine.g.n()), (Side::H, engine.h.n())] {
        'moves: for v in 0..n {
            let mapped = map
                .iter()
                .any(|&(a, b)| v == if side == Side::G { a } else { b });
            if mapped {
                continue;
            }
            let reply_n = match side {
                Side::G => engine.h.n(),
                Side::H => engine.g.n(),
            };
            let mut valid_replies = Vec::new();
            for w in 0..reply_n {
                let (a, b) = match side {
                    Side::G => (v, w),
                    Side::H => (w, v),
                };
                if map.iter().any(|&(x, y)| x == a || y == b) {
                    continue;
                }
                if !extension_valid(engine.g, engine.h, map, a, b) {
                    continue;
                }
                map.push((a, b));
                let survives = engine.duplicator_wins(map, rounds - 1);
                map.pop();
                if survives {
                    continue 'moves; // not a killer pick
                }
                valid_replies.push((w, (a, b)));
            }
            // Every valid reply loses (or none exists): this pick wins.
            let mut replies = BTreeMap::new();
            for (w, pair) in valid_replies {
                map.push(pair);
                let child = extract_strategy(engine, map, rounds - 1);
                map.pop();
                replies.insert(w, child);
            }
            return StrategyNode {
                side,
                vertex: v,
                replies,
            };
        }
    }
    unreachable!("a losing position must admit a winning Spoiler pick")
}

fn check_exact_preconditions(g: &Graph, h: &Graph) -> Result<(), EfError> {
    if g.is_directed() != h.is_directed() {
        return Err(EfError::DirectednessMismatch);
    }
    for n in [g.n(), h.n()] {
        if n > EXACT_INSTANCE_CAP {
            return Err(EfError::InstanceTooLarge {
                n,
                cap: EXACT_INSTANCE_CAP,
            });
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Budgeted engine
// ---------------------------------------------------------------------------

struct Approx<'a> {
    g: &'a Graph,
    h: &'a Graph,
    budget: ProbeBudget,
    /// Signature rows for depths 0..=k, per graph.
    sig_g: Vec<Vec<u64>>,
    sig_h: Vec<Vec<u64>>,
    /// How many vertices across both graphs share a vertex's deepest
    /// signature; low counts make a vertex a rare, distinguishing pick.
    rarity_g: Vec<usize>,
    rarity_h: Vec<usize>,
    /// The identity reply is preferred when probing a graph against itself.
    same_graph: bool,
    memo: HashMap<(MapKey, u8), bool>,
    /// Distinct positions expanded at each round depth during the current
    /// deepening pass.
    expanded: Vec<usize>,
    small_keys: bool,
    deadline: Instant,
    timed_out: bool,
    tick: u32,
}

impl<'a> Approx<'a> {
    fn new(g: &'a Graph, h: &'a Graph, budget: ProbeBudget) -> Approx<'a> {
        let k = budget.k;
        let sig_g = signature_table(g, k);
        let sig_h = signature_table(h, k);
        let mut counts: HashMap<u64, usize> = HashMap::new();
        for &s in sig_g[k].iter().chain(sig_h[k].iter()) {
            *counts.entry(s).or_insert(0) += 1;
        }
        let rarity_g = sig_g[k].iter().map(|s| counts[s]).collect();
        let rarity_h = sig_h[k].iter().map(|s| counts[s]).collect();
        let timeout = Duration::from_millis(budget.timeout_ms);
        Approx {
            g,
            h,
            budget,
            sig_g,
            sig_h,
            rarity_g,
            rarity_h,
            same_graph: g == h,
            memo: HashMap::new(),
            expanded: vec![0; k + 1],
            small_keys: g.n() <= 16 && h.n() <= 16,
            deadline: Instant::now()
                .checked_add(timeout)
                .unwrap_or_else(|| Instant::now() + Duration::from_secs(86_400)),
            timed_out: false,
            tick: 0,
        }
    }

    fn out_of_time(&mut self) -> bool {
        if self.timed_out {
            return true;
        }
        self.tick = self.tick.wrapping_add(1);
        if self.tick % 1024 == 0 && Instant::now() >= self.deadline {
            self.timed_out = true;
        }
        self.timed_out
    }

    /// Signature agreement depth between a G-vertex and an H-vertex: the
    /// number of leading rows on which their signatures coincide.
    fn match_quality(&self, gv: usize, hv: usize) -> usize {
        let mut q = 0;
        for d in 0..=self.budget.k {
            if self.sig_g[d][gv] != self.sig_h[d][hv] {
                break;
            }
            q += 1;
        }
        q
    }

    fn duplicator_wins(&mut self, map: &mut Vec<(usize, usize)>, rounds: usize) -> bool {
        if rounds == 0 || self.out_of_time() {
            return true;
        }
        let key = (map_key(map, self.small_keys), rounds as u8);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let level = map.len();
        if self.expanded[level] >= self.budget.start_probes {
            // Probe budget for this round exhausted: concede the position to
            // Duplicator rather than inventing faults that deeper search
            // might refute.
            return true;
        }
        self.expanded[level] += 1;
        let result = self.compute(map, rounds);
        if self.timed_out {
            return true;
        }
        self.memo.insert(key, result);
        result
    }

    fn compute(&mut self, map: &mut Vec<(usize, usize)>, rounds: usize) -> bool {
        let moves = self.ranked_moves(map);
        for (side, v) in moves {
            let replies = self.ranked_replies(map, side, v);
            let mut answered = false;
            for (a, b) in replies {
                map.push((a, b));
                let ok = self.duplicator_wins(map, rounds - 1);
                map.pop();
                if ok {
                    answered = true;
                    break;
                }
            }
            if !answered {
                return false;
            }
            if self.out_of_time() {
                return true;
            }
        }
        true
    }

    /// Top `branch_cap` unmapped picks per side, rarest signature first.
    fn ranked_moves(&self, map: &[(usize, usize)]) -> Vec<(Side, usize)> {
        let mut out = Vec::new();
        for side in [Side::G, Side::H] {
            let (n, rarity): (usize, &[usize]) = match side {
                Side::G => (self.g.n(), &self.rarity_g),
                Side::H => (self.h.n(), &self.rarity_h),
            };
            let mut picks: Vec<usize> = (0..n)
                .filter(|&v| {
                    !map.iter()
                        .any(|&(a, b)| v == if side == Side::G { a } else { b })
                })
                .collect();
            picks.sort_by_key(|&v| (rarity[v], v));
            picks.truncate(self.budget.branch_cap);
            out.extend(picks.into_iter().map(|v| (side, v)));
        }
        out
    }

    /// Top `branch_cap` valid replies for a pick, best signature agreement
    /// first; the identity reply is preferred among ties when probing a graph
    /// against itself, which keeps self-probes at full resilience.
    fn ranked_replies(
        &self,
        map: &[(usize, usize)],
        side: Side,
        v: usize,
    ) -> Vec<(usize, usize)> {
        let reply_n = match side {
            Side::G => self.h.n(),
            Side::H => self.g.n(),
        };
        let mut scored: Vec<(usize, bool, usize, (usize, usize))> = Vec::new();
        for w in 0..reply_n {
            let (a, b) = match side {
                Side::G => (v, w),
                Side::H => (w, v),
            };
            if map.iter().any(|&(x, y)| x == a || y == b) {
                continue;
            }
            if !extension_valid(self.g, self.h, map, a, b) {
                continue;
            }
            let quality = self.match_quality(a, b);
            let identity = self.same_graph && a == b;
            scored.push((quality, identity, w, (a, b)));
        }
        scored.sort_by(|x, y| {
            y.0.cmp(&x.0) // higher quality first
                .then(y.1.cmp(&x.1)) // identity preferred
                .then(x.2.cmp(&y.2)) // then lowest vertex id
        });
        scored.truncate(self.budget.branch_cap);
        scored.into_iter().map(|(_, _, _, pair)| pair).collect()
    }
}

/// Budgeted round-resilience probe. Runs iterative deepening up to
/// `budget.k`; each pass explores the game under the branch and probe caps.
/// Restricting Spoiler's picks can only inflate the result and restricting
/// Duplicator's replies can only deflate it, so budgeted values may deviate
/// from the exact game value in either direction; exhaustive budgets remove
/// both truncations and recover it exactly.
///
/// Probing a graph against itself reports the full `budget.k` rounds: the
/// identity reply is always valid and ranks first among equally scored
/// candidates.
pub fn approx_round_resilience(g: &Graph, h: &Graph, budget: ProbeBudget) -> ApproxResilience {
    assert_eq!(
        g.is_directed(),
        h.is_directed(),
        "cannot play the game between a directed and an undirected graph"
    );
    assert!(budget.k >= 1, "probe budget must allow at least one round");
    assert!(budget.start_probes >= 1 && budget.branch_cap >= 1);
    let mut engine = Approx::new(g, h, budget);
    let mut best = 0;
    let mut map = Vec::new();
    for r in 1..=budget.k {
        engine.expanded.iter_mut().for_each(|c| *c = 0);
        let win = engine.duplicator_wins(&mut map, r);
        if engine.timed_out {
            return ApproxResilience {
                rounds: best,
                timed_out: true,
            };
        }
        if !win {
            return ApproxResilience {
                rounds: r - 1,
                timed_out: false,
            };
        }
        best = r;
    }
    ApproxResilience {
        rounds: best,
        timed_out: false,
    }
}
