//! Composite logical loss: bounded-game distance to a prototype bank plus
//! weighted certificate violations.
//!
//! The game term asks how far a graph is, in round-resilience, from the
//! nearest member of a bank of known-good prototypes: a graph that survives
//! all `k` probe rounds against some prototype contributes nothing, and each
//! round lost costs `1/k`. The certificate terms add the graded violation
//! losses of chosen properties. Both sit in `[0, 1]` before weighting, so
//! the mix stays interpretable, and a zero total means the graph is
//! indistinguishable from the bank at the probe depth and satisfies every
//! weighted property exactly.

use std::collections::{BTreeMap, VecDeque};

use thiserror::Error;

use crate::certificates::{certificate_loss, check, PropertyTheory};
use crate::ef::{approx_round_resilience, ProbeBudget};
use crate::graph::{min_positive_size, sample_theory, Graph, TheoryError};
use crate::seed::Seed;

#[derive(Debug, Error, PartialEq)]
pub enum LossError {
    #[error("prototype {index} does not satisfy {theory}")]
    InvalidPrototype {
        index: usize,
        theory: PropertyTheory,
    },
    #[error("a prototype bank needs at least one prototype")]
    EmptyBank,
    #[error("prototype {index} has directed = {found}, but {theory} graphs have directed = {expected}")]
    MixedDirectedness {
        index: usize,
        theory: PropertyTheory,
        found: bool,
        expected: bool,
    },
    #[error("loss weights must be finite and non-negative with at least one positive entry")]
    InvalidWeights,
    #[error("graph has directed = {graph_directed}, bank prototypes have directed = {bank_directed}")]
    DirectednessMismatch {
        graph_directed: bool,
        bank_directed: bool,
    },
    #[error(transparent)]
    Theory(#[from] TheoryError),
}

/// Known-good reference graphs for one property, used as the far side of
/// round-resilience probes.
#[derive(Debug, Clone)]
pub struct PrototypeBank {
    theory: PropertyTheory,
    prototypes: Vec<Graph>,
}

impl PrototypeBank {
    /// Wraps explicit prototypes, verifying every one satisfies the theory.
    pub fn new(theory: PropertyTheory, prototypes: Vec<Graph>) -> Result<PrototypeBank, LossError> {
        if prototypes.is_empty() {
            return Err(LossError::EmptyBank);
        }
        for (index, g) in prototypes.iter().enumerate() {
            if g.is_directed() != theory.directed() {
                return Err(LossError::MixedDirectedness {
                    index,
                    theory,
                    found: g.is_directed(),
                    expected: theory.directed(),
                });
            }
            if !check(theory, g)?.holds {
                return Err(LossError::InvalidPrototype { index, theory });
            }
        }
        Ok(PrototypeBank { theory, prototypes })
    }

    /// Draws `count` prototypes with sizes spread uniformly over
    /// `target_n - 2 ..= target_n + 2` (floored at the sampler's minimum for
    /// the theory), so probes compare against mild size variety rather than
    /// one fixed order.
    pub fn sample(
        theory: PropertyTheory,
        target_n: usize,
        count: usize,
        seed: Seed,
    ) -> Result<PrototypeBank, LossError> {
        if count == 0 {
            return Err(LossError::EmptyBank);
        }
        let floor = min_positive_size(theory);
        let lo = target_n.saturating_sub(2).max(floor);
        let hi = (target_n + 2).max(lo);
        let mut rng = seed.rng();
        let mut prototypes = Vec::with_capacity(count);
        for i in 0..count {
            let n = rand::Rng::random_range(&mut rng, lo..=hi);
            prototypes.push(sample_theory(theory, n, seed.derive(1 + i as u64))?);
        }
        Ok(PrototypeBank { theory, prototypes })
    }

    pub fn theory(&self) -> PropertyTheory {
        self.theory
    }

    pub fn prototypes(&self) -> &[Graph] {
        &self.prototypes
    }

    pub fn len(&self) -> usize {
        self.prototypes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prototypes.is_empty()
    }
}

/// Round-resilience distance from `g` to the nearest bank prototype:
/// `(k - r) / k` for the best prototype, where `r` is the budgeted
/// resilience of the pair. Zero when some prototype is indistinguishable
/// from `g` within the probe depth.
pub fn ef_loss(g: &Graph, bank: &PrototypeBank, budget: ProbeBudget) -> Result<f64, LossError> {
    Ok(ef_loss_detail(g, bank, budget)?.loss)
}

/// [`ef_loss`] plus how many probes hit the wall clock; timed-out probes
/// report their deepest confirmed round, which can only overstate the loss.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EfLossDetail {
    pub loss: f64,
    pub timed_out_probes: usize,
}

pub fn ef_loss_detail(
    g: &Graph,
    bank: &PrototypeBank,
    budget: ProbeBudget,
) -> Result<EfLossDetail, LossError> {
    if g.is_directed() != bank.theory.directed() {
        return Err(LossError::DirectednessMismatch {
            graph_directed: g.is_directed(),
            bank_directed: bank.theory.directed(),
        });
    }
    let k = budget.k as f64;
    let mut best = f64::INFINITY;
    let mut timed_out_probes = 0;
    for p in &bank.prototypes {
        let probe = approx_round_resilience(g, p, budget);
        if probe.timed_out {
            timed_out_probes += 1;
        }
        best = best.min((budget.k - probe.rounds) as f64 / k);
        if best == 0.0 {
            break; // no prototype can do better
        }
    }
    Ok(EfLossDetail {
        loss: best,
        timed_out_probes,
    })
}

/// Mixing weights for the composite loss: `lambda_ef` scales the game term
/// and each certificate entry scales that property's graded violation.
#[derive(Debug, Clone, PartialEq)]
pub struct LossWeights {
    pub lambda_ef: f64,
    pub certificates: BTreeMap<PropertyTheory, f64>,
}

impl LossWeights {
    /// Game term only.
    pub fn ef_only(lambda_ef: f64) -> LossWeights {
        LossWeights {
            lambda_ef,
            certificates: BTreeMap::new(),
        }
    }

    /// Game term plus a single certificate term, the usual generator setup.
    pub fn with_certificate(lambda_ef: f64, theory: PropertyTheory, weight: f64) -> LossWeights {
        LossWeights {
            lambda_ef,
            certificates: BTreeMap::from([(theory, weight)]),
        }
    }

    /// All weights must be finite and non-negative, with at least one of
    /// them positive; otherwise the loss is identically zero and cannot
    /// guide anything.
    pub fn validate(&self) -> Result<(), LossError> {
        let all = std::iter::once(self.lambda_ef).chain(self.certificates.values().copied());
        let mut any_positive = false;
        for w in all {
            if !w.is_finite() || w < 0.0 {
                return Err(LossError::InvalidWeights);
            }
            any_positive |= w > 0.0;
        }
        if !any_positive {
            return Err(LossError::InvalidWeights);
        }
        Ok(())
    }
}

/// The composite loss, broken into its unweighted parts.
#[derive(Debug, Clone, PartialEq)]
pub struct LossBreakdown {
    /// `lambda_ef * ef + sum(weight * certificate)`.
    pub total: f64,
    /// Unweighted game term; zero when the game term carries no weight.
    pub ef: f64,
    /// Unweighted certificate losses, keyed by property.
    pub certificates: BTreeMap<PropertyTheory, f64>,
    /// Probes that hit the wall clock while computing the game term.
    pub ef_timed_out_probes: usize,
}

/// Evaluates the composite loss of `g` against a bank and weights. The game
/// term is skipped entirely (and reported as zero) when `lambda_ef` is zero,
/// so certificate-only configurations pay nothing for probes.
pub fn logical_loss(
    g: &Graph,
    bank: &PrototypeBank,
    weights: &LossWeights,
    budget: ProbeBudget,
) -> Result<LossBreakdown, LossError> {
    weights.validate()?;
    let (ef, ef_timed_out_probes) = if weights.lambda_ef > 0.0 {
        let detail = ef_loss_detail(g, bank, budget)?;
        (detail.loss, detail.timed_out_probes)
    } else {
        (0.0, 0)
    };
    let mut certificates = BTreeMap::new();
    let mut total = weights.lambda_ef * ef;
    for (&theory, &weight) in &weights.certificates {
        let raw = certificate_loss(theory, g)?;
        total += weight * raw;
        certificates.insert(theory, raw);
    }
    Ok(LossBreakdown {
        total,
        ef,
        certificates,
        ef_timed_out_probes,
    })
}

/// Probe-depth curriculum: the working depth `k` rises by one whenever the
/// recent-loss window fills up below the promotion threshold, up to a cap.
/// Shallow games are cheap and already separate coarse structure; depth is
/// only spent once the generator has mastered the current level.
#[derive(Debug, Clone, PartialEq)]
pub struct CurriculumState {
    k_current: usize,
    k_max: usize,
    threshold: f64,
    window_len: usize,
    window: VecDeque<f64>,
}

impl CurriculumState {
    pub fn new(k_start: usize, k_max: usize, threshold: f64, window_len: usize) -> CurriculumState {
        assert!(k_start >= 1 && k_start <= k_max, "need 1 <= k_start <= k_max");
        assert!(threshold.is_finite() && threshold >= 0.0);
        assert!(window_len >= 1);
        CurriculumState {
            k_current: k_start,
            k_max,
            threshold,
            window_len,
            window: VecDeque::with_capacity(window_len),
        }
    }

    /// The standard schedule: start at depth 2, cap at 5, promote when the
    /// last 50 losses average under 0.1.
    pub fn default_schedule() -> CurriculumState {
        CurriculumState::new(2, 5, 0.1, 50)
    }

    pub fn k(&self) -> usize {
        self.k_current
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    /// Records one observed loss; returns `true` when this observation
    /// triggered a promotion (which also clears the window, so progress at
    /// the new depth is judged fresh).
    pub fn record(&mut self, loss: f64) -> bool {
        if self.window.len() == self.window_len {
            self.window.pop_front();
        }
        self.window.push_back(loss);
        if self.window.len() < self.window_len || self.k_current >= self.k_max {
            return false;
        }
        let mean: f64 = self.window.iter().sum::<f64>() / self.window.len() as f64;
        if mean < self.threshold {
            self.k_current += 1;
            self.window.clear();
            true
        } else {
            false
        }
    }
}

/// Functional form of [`CurriculumState::record`] for callers that thread
/// state by value.
pub fn curriculum_step(mut state: CurriculumState, loss: f64) -> (CurriculumState, bool) {
    let promoted = state.record(loss);
    (state, promoted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ef::exact_round_resilience;
    use crate::graph::random_graph;
    use proptest::prelude::*;

    fn cycle(n: usize) -> Graph {
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, false, &edges).unwrap()
    }

    #[test]
    fn banks_reject_violating_prototypes() {
        let err = PrototypeBank::new(PropertyTheory::Bipartite, vec![cycle(4), cycle(5)]);
        assert_eq!(
            err.unwrap_err(),
            LossError::InvalidPrototype {
                index: 1,
                theory: PropertyTheory::Bipartite
            }
        );
        assert_eq!(
            PrototypeBank::new(PropertyTheory::Tree, vec![]).unwrap_err(),
            LossError::EmptyBank
        );
        let mixed = PrototypeBank::new(PropertyTheory::Tree, vec![Graph::new(3, true)]);
        assert!(matches!(mixed, Err(LossError::MixedDirectedness { .. })));
    }

    #[test]
    fn sampled_banks_hold_their_theory_within_the_size_band() {
        for theory in PropertyTheory::ALL {
            let bank = PrototypeBank::sample(theory, 8, 12, Seed(41)).unwrap();
            assert_eq!(bank.len(), 12);
            for g in bank.prototypes() {
                assert!(check(theory, g).unwrap().holds, "{theory}");
                assert!((6..=10).contains(&g.n()), "{theory}: n = {}", g.n());
            }
        }
        // Tiny targets clamp to the sampler floor instead of failing.
        let tiny = PrototypeBank::sample(PropertyTheory::HasTriangle, 1, 5, Seed(3)).unwrap();
        for g in tiny.prototypes() {
            assert!(g.n() >= 3);
        }
    }

    #[test]
    fn a_graph_in_the_bank_has_zero_game_loss() {
        for s in 0..10 {
            let member = sample_theory(PropertyTheory::Connected, 7, Seed(s)).unwrap();
            let other = sample_theory(PropertyTheory::Connected, 7, Seed(100 + s)).unwrap();
            let bank =
                PrototypeBank::new(PropertyTheory::Connected, vec![other, member.clone()])
                    .unwrap();
            let loss = ef_loss(&member, &bank, ProbeBudget::default()).unwrap();
            assert_eq!(loss, 0.0, "seed {s}");
        }
    }

    #[test]
    fn game_loss_matches_the_exact_engine_on_a_frozen_pair() {
        // The pentagon against a bank of even cycles: three probe rounds,
        // best resilience two, so the loss is exactly one third.
        let bank =
            PrototypeBank::new(PropertyTheory::Bipartite, vec![cycle(4), cycle(6)]).unwrap();
        let g = cycle(5);
        for p in bank.prototypes() {
            assert_eq!(exact_round_resilience(&g, p, 3).unwrap(), 2);
        }
        let budget = ProbeBudget::exhaustive(3, &g, &cycle(6));
        let loss = ef_loss(&g, &bank, budget).unwrap();
        assert!((loss - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn game_loss_rejects_directedness_mismatches() {
        let path = Graph::from_edges(4, false, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let bank = PrototypeBank::new(PropertyTheory::Tree, vec![path]).unwrap();
        let dg = Graph::new(4, true);
        assert!(matches!(
            ef_loss(&dg, &bank, ProbeBudget::default()),
            Err(LossError::DirectednessMismatch { .. })
        ));
    }

    #[test]
    fn weights_validation_rejects_degenerate_mixes() {
        assert!(LossWeights::ef_only(1.0).validate().is_ok());
        assert!(LossWeights::ef_only(0.0).validate().is_err());
        assert!(LossWeights::ef_only(-1.0).validate().is_err());
        assert!(LossWeights::ef_only(f64::NAN).validate().is_err());
        let mut w = LossWeights::with_certificate(0.0, PropertyTheory::Tree, 0.0);
        assert!(w.validate().is_err());
        w.certificates.insert(PropertyTheory::Tree, 2.0);
        assert!(w.validate().is_ok());
        w.certificates.insert(PropertyTheory::Planar, f64::INFINITY);
        assert!(w.validate().is_err());
    }

    #[test]
    fn composite_loss_combines_weighted_terms() {
        let bank =
            PrototypeBank::new(PropertyTheory::Bipartite, vec![cycle(4), cycle(6)]).unwrap();
        let g = cycle(5);
        let weights = LossWeights::with_certificate(1.0, PropertyTheory::Bipartite, 2.0);
        let budget = ProbeBudget {
            k: 3,
            ..Default::default()
        };
        let breakdown = logical_loss(&g, &bank, &weights, budget).unwrap();
        let expected_cert = certificate_loss(PropertyTheory::Bipartite, &g).unwrap();
        assert_eq!(breakdown.certificates[&PropertyTheory::Bipartite], expected_cert);
        let expected_total = 1.0 * breakdown.ef + 2.0 * expected_cert;
        assert!((breakdown.total - expected_total).abs() < 1e-12);
        assert!(breakdown.total > 0.0);
    }

    #[test]
    fn zero_game_weight_skips_probes_entirely() {
        let bank = PrototypeBank::new(
            PropertyTheory::Tree,
            vec![sample_theory(PropertyTheory::Tree, 9, Seed(5)).unwrap()],
        )
        .unwrap();
        let g = random_graph(9, 0.4, Seed(6));
        let weights = LossWeights::with_certificate(0.0, PropertyTheory::Tree, 1.0);
        let breakdown = logical_loss(&g, &bank, &weights, ProbeBudget::default()).unwrap();
        assert_eq!(breakdown.ef, 0.0);
        assert_eq!(breakdown.ef_timed_out_probes, 0);
        assert_eq!(
            breakdown.total,
            certificate_loss(PropertyTheory::Tree, &g).unwrap()
        );
    }

    #[test]
    fn a_satisfying_graph_scores_zero_total() {
        let tree = sample_theory(PropertyTheory::Tree, 8, Seed(11)).unwrap();
        let bank = PrototypeBank::new(PropertyTheory::Tree, vec![tree.clone()]).unwrap();
        let weights = LossWeights::with_certificate(1.0, PropertyTheory::Tree, 1.0);
        let breakdown =
            logical_loss(&tree, &bank, &weights, ProbeBudget::default()).unwrap();
        assert_eq!(breakdown.total, 0.0);
    }

    #[test]
    fn curriculum_promotes_on_sustained_low_loss() {
        let mut c = CurriculumState::new(2, 4, 0.1, 10);
        for _ in 0..9 {
            assert!(!c.record(0.05));
            assert_eq!(c.k(), 2);
        }
        assert!(c.record(0.05));
        assert_eq!(c.k(), 3);
        // The window restarts: nine more low losses are not yet enough.
        for _ in 0..9 {
            assert!(!c.record(0.0));
        }
        assert!(c.record(0.0));
        assert_eq!(c.k(), 4);
        // At the cap nothing moves.
        for _ in 0..30 {
            assert!(!c.record(0.0));
        }
        assert_eq!(c.k(), 4);
    }

    #[test]
    fn curriculum_holds_while_loss_stays_high() {
        let mut c = CurriculumState::new(2, 5, 0.1, 5);
        for _ in 0..40 {
            assert!(!c.record(0.5));
        }
        assert_eq!(c.k(), 2);
        // A sliding window forgets old spikes.
        for _ in 0..4 {
            assert!(!c.record(0.0));
        }
        assert!(c.record(0.0));
        assert_eq!(c.k(), 3);
    }

    #[test]
    fn functional_step_matches_the_method() {
        let mut a = CurriculumState::new(2, 5, 0.2, 3);
        let mut b = a.clone();
        for loss in [0.1, 0.3, 0.05, 0.05, 0.05, 0.0] {
            let promoted_a = a.record(loss);
            let (nb, promoted_b) = curriculum_step(b, loss);
            b = nb;
            assert_eq!(promoted_a, promoted_b);
            assert_eq!(a, b);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn game_loss_is_monotone_under_bank_growth(
            seed in 0u64..5_000,
            n in 3usize..8,
        ) {
            let g = random_graph(n, 0.4, Seed(seed));
            let small = PrototypeBank::sample(PropertyTheory::Connected, n, 3, Seed(seed ^ 0xB0))?;
            let mut grown = small.prototypes().to_vec();
            grown.extend(
                PrototypeBank::sample(PropertyTheory::Connected, n, 3, Seed(seed ^ 0xB1))?
                    .prototypes()
                    .to_vec(),
            );
            let big = PrototypeBank::new(PropertyTheory::Connected, grown).unwrap();
            let budget = ProbeBudget::default();
            let l_small = ef_loss(&g, &small, budget).unwrap();
            let l_big = ef_loss(&g, &big, budget).unwrap();
            prop_assert!(l_big <= l_small + 1e-12);
            prop_assert!((0.0..=1.0).contains(&l_small));
        }
    }
}
