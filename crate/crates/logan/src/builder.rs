//! Certificate-guided graph construction.
//!
//! The generator starts from a random graph and walks downhill on the
//! composite loss. Whenever the target property fails, its certificate comes
//! with a witness naming the offending structure, and that witness is turned
//! into a single surgical edit: break the odd cycle, join the split, remove
//! the crossing chord. Between witness repairs the walk falls back to seeded
//! single-edge flips, accepted only when they do not increase the loss. The
//! best graph seen is kept, so the result never ends worse than the start.

use std::collections::BTreeSet;

use rand::Rng;

use crate::certificates::{check, PropertyTheory, Witness};
use crate::ef::ProbeBudget;
use crate::graph::{random_digraph, random_graph, Graph, GraphError};
use crate::loss::{logical_loss, LossError, LossWeights, PrototypeBank};
use crate::seed::Seed;

/// One reversible edit, the unit of generator motion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphEdit {
    AddEdge(usize, usize),
    RemoveEdge(usize, usize),
}

impl GraphEdit {
    pub fn apply(&self, g: &mut Graph) -> Result<(), GraphError> {
        match *self {
            GraphEdit::AddEdge(u, v) => g.add_edge(u, v),
            GraphEdit::RemoveEdge(u, v) => g.remove_edge(u, v),
        }
    }
}

/// One step of the build loop, for post-hoc inspection.
#[derive(Debug, Clone, PartialEq)]
pub struct RepairStep {
    pub iteration: usize,
    /// The witness that guided this step, if the property check failed and
    /// produced one; `None` for random-flip steps.
    pub witness: Option<Witness>,
    /// The edit applied, or `None` when a flip was tried and rejected.
    pub edit: Option<GraphEdit>,
    /// Composite loss after the step settled.
    pub loss_after: f64,
}

/// Record of a whole build run.
#[derive(Debug, Clone, PartialEq)]
pub struct RepairTrace {
    pub steps: Vec<RepairStep>,
    pub initial_loss: f64,
    pub final_loss: f64,
    /// Whether the loss reached exactly zero.
    pub converged: bool,
    pub iterations: usize,
}

/// Translates a witness into one edit that removes (or starts removing) the
/// structure it names. Returns `None` when no sensible single edit exists,
/// in which case the caller falls back to a random flip.
///
/// The witness must be fresh for `g`; a stale witness can name edges that no
/// longer exist, and the edit will fail to apply.
pub fn repair(g: &Graph, witness: &Witness, seed: Seed) -> Option<GraphEdit> {
    let mut rng = seed.rng();
    match witness {
        Witness::OddCycle { cycle } => {
            let i = rng.random_range(0..cycle.len());
            Some(GraphEdit::RemoveEdge(cycle[i], cycle[(i + 1) % cycle.len()]))
        }
        Witness::ExtraCycleEdge { edge, .. } => Some(GraphEdit::RemoveEdge(edge.0, edge.1)),
        Witness::DisconnectingSplit { side } => {
            // Any pair from the side to the rest is absent by the witness's
            // meaning (for digraphs, absent in the outgoing direction).
            let inside: BTreeSet<usize> = side.iter().copied().collect();
            let outside: Vec<usize> = g.vertices().filter(|v| !inside.contains(v)).collect();
            if side.is_empty() || outside.is_empty() {
                return None;
            }
            let u = side[rng.random_range(0..side.len())];
            let v = outside[rng.random_range(0..outside.len())];
            Some(GraphEdit::AddEdge(u, v))
        }
        Witness::Triangle { vertices } => {
            let [a, b, c] = *vertices;
            let sides = [(a, b), (b, c), (a, c)];
            let (u, v) = sides[rng.random_range(0..3)];
            Some(GraphEdit::RemoveEdge(u, v))
        }
        Witness::KuratowskiSubgraph { edges } => {
            if !edges.is_empty() {
                let (u, v) = edges[rng.random_range(0..edges.len())];
                return Some(GraphEdit::RemoveEdge(u, v));
            }
            // Extraction gave up; thin the graph anywhere.
            let all: Vec<(usize, usize)> = g.edges().collect();
            if all.is_empty() {
                return None;
            }
            let (u, v) = all[rng.random_range(0..all.len())];
            Some(GraphEdit::RemoveEdge(u, v))
        }
        Witness::UnitCut { s, t, arc } => {
            // Give the source side a second route into `t` that avoids the
            // cut arc: any arc from a vertex still reachable without it.
            let side = reachable_avoiding(g, *s, *arc);
            let candidates: Vec<usize> = side
                .iter()
                .copied()
                .filter(|&u| u != *t && !g.has_edge(u, *t))
                .collect();
            if candidates.is_empty() {
                return None;
            }
            let u = candidates[rng.random_range(0..candidates.len())];
            Some(GraphEdit::AddEdge(u, *t))
        }
        Witness::DegreeDeficit { vertex, outgoing, .. } => {
            let missing: Vec<usize> = g
                .vertices()
                .filter(|&w| {
                    w != *vertex
                        && if *outgoing {
                            !g.has_edge(*vertex, w)
                        } else {
                            !g.has_edge(w, *vertex)
                        }
                })
                .collect();
            if missing.is_empty() {
                return None;
            }
            let w = missing[rng.random_range(0..missing.len())];
            Some(if *outgoing {
                GraphEdit::AddEdge(*vertex, w)
            } else {
                GraphEdit::AddEdge(w, *vertex)
            })
        }
    }
}

fn reachable_avoiding(g: &Graph, s: usize, skip: (usize, usize)) -> Vec<usize> {
    let mut seen = vec![false; g.n()];
    seen[s] = true;
    let mut queue = std::collections::VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        for &v in g.out_neighbors(u) {
            if (u, v) != skip && !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    (0..g.n()).filter(|&v| seen[v]).collect()
}

/// Builds a graph on `n` vertices aimed at `theory`, guided by the composite
/// loss against `bank` under `weights`. Starts from a random graph; see
/// [`refine`] for descending from a caller-chosen start. Runs at most
/// `max_iters` steps and returns the best graph seen together with the full
/// trace; the final loss never exceeds the initial one.
pub fn build(
    theory: PropertyTheory,
    n: usize,
    bank: &PrototypeBank,
    weights: &LossWeights,
    budget: ProbeBudget,
    max_iters: usize,
    seed: Seed,
) -> Result<(Graph, RepairTrace), LossError> {
    let start = if theory.directed() {
        random_digraph(n, 0.25, seed.derive(0))
    } else {
        random_graph(n, 0.25, seed.derive(0))
    };
    refine(start, theory, bank, weights, budget, max_iters, seed)
}

/// Walks the composite loss downhill from `start`: witness-guided edits when
/// the property fails with an explanation, seeded no-worse edge flips
/// otherwise. The returned graph is the best one seen, so its loss never
/// exceeds the starting loss.
pub fn refine(
    start: Graph,
    theory: PropertyTheory,
    bank: &PrototypeBank,
    weights: &LossWeights,
    budget: ProbeBudget,
    max_iters: usize,
    seed: Seed,
) -> Result<(Graph, RepairTrace), LossError> {
    weights.validate()?;
    let mut g = start;
    let n = g.n();
    let mut current = logical_loss(&g, bank, weights, budget)?.total;
    let initial_loss = current;
    let mut best = (g.clone(), current);
    let mut steps = Vec::new();
    let mut rng = seed.derive(1).rng();

    for iteration in 0..max_iters {
        if current == 0.0 {
            break;
        }
        let outcome = check(theory, &g)?;
        let step_seed = seed.derive(2 + iteration as u64);
        let guided = outcome
            .witness
            .as_ref()
            .and_then(|w| repair(&g, w, step_seed).map(|e| (w.clone(), e)));

        if let Some((witness, edit)) = guided {
            edit.apply(&mut g).expect("repair proposed an invalid edit");
            current = logical_loss(&g, bank, weights, budget)?.total;
            steps.push(RepairStep {
                iteration,
                witness: Some(witness),
                edit: Some(edit),
                loss_after: current,
            });
        } else {
            if n < 2 {
                break; // no pair left to flip
            }
            let (u, v) = loop {
                let u = rng.random_range(0..n);
                let v = rng.random_range(0..n);
                if u != v {
                    break (u, v);
                }
            };
            let added = g.toggle_edge(u, v).expect("flip within bounds");
            let candidate = logical_loss(&g, bank, weights, budget)?.total;
            let edit = if candidate <= current {
                current = candidate;
                Some(if added {
                    GraphEdit::AddEdge(u, v)
                } else {
                    GraphEdit::RemoveEdge(u, v)
                })
            } else {
                g.toggle_edge(u, v).expect("undoing a flip");
                None
            };
            steps.push(RepairStep {
                iteration,
                witness: None,
                edit,
                loss_after: current,
            });
        }

        if current < best.1 {
            best = (g.clone(), current);
        }
    }

    if current > best.1 {
        g = best.0;
        current = best.1;
    }
    let trace = RepairTrace {
        iterations: steps.len(),
        steps,
        initial_loss,
        final_loss: current,
        converged: current == 0.0,
    };
    Ok((g, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificates::{certificate_loss, two_edge_disjoint};
    use crate::graph::sample_theory;

    fn cycle(n: usize) -> Graph {
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, false, &edges).unwrap()
    }

    fn complete(n: usize) -> Graph {
        let mut g = Graph::new(n, false);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    }

    fn fresh_witness(theory: PropertyTheory, g: &Graph) -> Witness {
        check(theory, g).unwrap().witness.expect("failing check should explain itself")
    }

    #[test]
    fn odd_cycle_repair_breaks_the_cycle() {
        let g = cycle(5);
        let w = fresh_witness(PropertyTheory::Bipartite, &g);
        let edit = repair(&g, &w, Seed(1)).unwrap();
        assert!(matches!(edit, GraphEdit::RemoveEdge(..)));
        let mut fixed = g.clone();
        edit.apply(&mut fixed).unwrap();
        assert!(check(PropertyTheory::Bipartite, &fixed).unwrap().holds);
    }

    #[test]
    fn extra_cycle_edge_repair_restores_a_tree() {
        let g = cycle(4);
        let w = fresh_witness(PropertyTheory::Tree, &g);
        let edit = repair(&g, &w, Seed(2)).unwrap();
        let mut fixed = g.clone();
        edit.apply(&mut fixed).unwrap();
        assert!(check(PropertyTheory::Tree, &fixed).unwrap().holds);
    }

    #[test]
    fn split_repair_joins_two_components() {
        // Two disjoint paths; joining any cross pair makes one tree.
        let g = Graph::from_edges(6, false, &[(0, 1), (1, 2), (3, 4), (4, 5)]).unwrap();
        let w = fresh_witness(PropertyTheory::Tree, &g);
        assert!(matches!(w, Witness::DisconnectingSplit { .. }));
        let edit = repair(&g, &w, Seed(3)).unwrap();
        let mut fixed = g.clone();
        edit.apply(&mut fixed).unwrap();
        assert!(check(PropertyTheory::Tree, &fixed).unwrap().holds);
    }

    #[test]
    fn triangle_repair_deletes_one_side() {
        let g = complete(3);
        let w = fresh_witness(PropertyTheory::TriangleFree, &g);
        let edit = repair(&g, &w, Seed(4)).unwrap();
        let mut fixed = g.clone();
        edit.apply(&mut fixed).unwrap();
        assert!(check(PropertyTheory::TriangleFree, &fixed).unwrap().holds);
    }

    #[test]
    fn kuratowski_repair_thins_the_obstruction() {
        // One edge off a five-clique is planar, so any witness edge works.
        let g = complete(5);
        let w = fresh_witness(PropertyTheory::Planar, &g);
        let edit = repair(&g, &w, Seed(5)).unwrap();
        let mut fixed = g.clone();
        edit.apply(&mut fixed).unwrap();
        assert!(check(PropertyTheory::Planar, &fixed).unwrap().holds);
    }

    #[test]
    fn empty_kuratowski_witness_still_removes_an_edge() {
        let g = complete(5);
        let w = Witness::KuratowskiSubgraph { edges: vec![] };
        let edit = repair(&g, &w, Seed(6)).unwrap();
        assert!(matches!(edit, GraphEdit::RemoveEdge(..)));
        let empty = Graph::new(4, false);
        assert_eq!(repair(&empty, &w, Seed(6)), None);
    }

    #[test]
    fn unit_cut_repair_opens_a_second_route() {
        // Two bidirected triangles linked by the lone arc 2 -> 3: every
        // route from 0 to 3 crosses it.
        let mut g = Graph::new(6, true);
        for (a, b, c) in [(0, 1, 2), (3, 4, 5)] {
            for (u, v) in [(a, b), (b, c), (a, c)] {
                g.add_edge(u, v).unwrap();
                g.add_edge(v, u).unwrap();
            }
        }
        g.add_edge(2, 3).unwrap();
        let w = fresh_witness(PropertyTheory::TwoEdgeStrong, &g);
        let Witness::UnitCut { s, t, arc } = w else {
            panic!("expected a unit cut, got {w:?}");
        };
        assert_eq!((s, t, arc), (0, 3, (2, 3)));
        for trial in 0..5 {
            let edit = repair(&g, &Witness::UnitCut { s, t, arc }, Seed(trial)).unwrap();
            let mut fixed = g.clone();
            edit.apply(&mut fixed).unwrap();
            assert!(two_edge_disjoint(&fixed, s, t), "trial {trial}: {edit:?}");
        }
    }

    #[test]
    fn degree_deficit_repair_adds_the_missing_arc() {
        // A one-way triangle: vertex 0 has out-degree 1, the only absent
        // out-arc is 0 -> 2.
        let g = Graph::from_edges(3, true, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let w = fresh_witness(PropertyTheory::TwoEdgeStrong, &g);
        assert!(matches!(w, Witness::DegreeDeficit { vertex: 0, outgoing: true, .. }));
        let edit = repair(&g, &w, Seed(7)).unwrap();
        assert_eq!(edit, GraphEdit::AddEdge(0, 2));
    }

    #[test]
    fn certificate_only_builds_converge_by_witness_repair() {
        for theory in [
            PropertyTheory::Tree,
            PropertyTheory::Bipartite,
            PropertyTheory::Connected,
        ] {
            let bank = PrototypeBank::new(
                theory,
                vec![sample_theory(theory, 10, Seed(900)).unwrap()],
            )
            .unwrap();
            let weights = LossWeights::with_certificate(0.0, theory, 1.0);
            let (g, trace) = build(
                theory,
                10,
                &bank,
                &weights,
                ProbeBudget::default(),
                300,
                Seed(42),
            )
            .unwrap();
            assert!(trace.converged, "{theory}: final loss {}", trace.final_loss);
            assert!(check(theory, &g).unwrap().holds, "{theory}");
            assert_eq!(certificate_loss(theory, &g).unwrap(), 0.0);
        }
    }

    #[test]
    fn full_mix_builds_never_end_worse_than_they_start() {
        for s in 0..5 {
            let bank = PrototypeBank::sample(PropertyTheory::Tree, 10, 4, Seed(700 + s)).unwrap();
            let weights = LossWeights::with_certificate(1.0, PropertyTheory::Tree, 1.0);
            let (_, trace) = build(
                PropertyTheory::Tree,
                10,
                &bank,
                &weights,
                ProbeBudget::default(),
                120,
                Seed(s),
            )
            .unwrap();
            assert!(
                trace.final_loss <= trace.initial_loss + 1e-12,
                "seed {s}: {} -> {}",
                trace.initial_loss,
                trace.final_loss
            );
            assert!(trace.iterations <= 120);
        }
    }

    #[test]
    fn refining_a_lightly_perturbed_tree_recovers_the_property() {
        use crate::graph::perturb;
        for s in 0..8 {
            let proto = sample_theory(PropertyTheory::Tree, 8, Seed(300 + s)).unwrap();
            let start = perturb(&proto, 0.2, Seed(400 + s));
            let bank = PrototypeBank::sample(PropertyTheory::Tree, 8, 6, Seed(500)).unwrap();
            let weights = LossWeights::with_certificate(1.0, PropertyTheory::Tree, 1.0);
            let (g, trace) = refine(
                start,
                PropertyTheory::Tree,
                &bank,
                &weights,
                ProbeBudget::default(),
                60,
                Seed(s),
            )
            .unwrap();
            assert!(trace.final_loss <= trace.initial_loss + 1e-12, "seed {s}");
            if trace.converged {
                assert!(check(PropertyTheory::Tree, &g).unwrap().holds);
            }
        }
    }

    #[test]
    fn builds_are_deterministic_in_the_seed() {
        let bank =
            PrototypeBank::sample(PropertyTheory::Bipartite, 9, 3, Seed(55)).unwrap();
        let weights = LossWeights::with_certificate(1.0, PropertyTheory::Bipartite, 1.0);
        let run = || {
            build(
                PropertyTheory::Bipartite,
                9,
                &bank,
                &weights,
                ProbeBudget::default(),
                80,
                Seed(8),
            )
            .unwrap()
        };
        let (g1, t1) = run();
        let (g2, t2) = run();
        assert_eq!(g1.to_text(), g2.to_text());
        assert_eq!(t1, t2);
    }

    #[test]
    fn directed_builds_reach_the_strong_property() {
        let bank = PrototypeBank::sample(PropertyTheory::TwoEdgeStrong, 6, 2, Seed(77)).unwrap();
        let weights = LossWeights::with_certificate(0.0, PropertyTheory::TwoEdgeStrong, 1.0);
        let (g, trace) = build(
            PropertyTheory::TwoEdgeStrong,
            6,
            &bank,
            &weights,
            ProbeBudget::default(),
            400,
            Seed(13),
        )
        .unwrap();
        assert!(g.is_directed());
        assert!(
            trace.final_loss <= trace.initial_loss + 1e-12,
            "{} -> {}",
            trace.initial_loss,
            trace.final_loss
        );
        if trace.converged {
            assert!(check(PropertyTheory::TwoEdgeStrong, &g).unwrap().holds);
        }
    }
}
