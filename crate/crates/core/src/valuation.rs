//! Additive and ratio-based Shapley valuations.
//!
//! Both schemes average a marginal-contribution measure over all orderings
//! of the players; they differ only in how one player's contribution to its
//! predecessor set is measured:
//!
//! * additive: `v(C ∪ {i}) − v(C)`
//! * ratio: `v(C ∪ {i}) / v(C) − 1`, and `0` when `v(C) = 0`
//!
//! Because either measure depends on the predecessor *set* only, the
//! permutation average collapses to a weighted sum over subsets:
//!
//! ```text
//! φ_i = Σ_{S ⊆ N∖{i}} |S|! (n − |S| − 1)! / n! · Δ(i, S)
//! ```
//!
//! [`shapley_exact`] evaluates that sum in `O(n · 2^n)`;
//! [`shapley_permutation_oracle`] walks all `n!` orderings literally and is
//! kept as an independent cross-check; [`shapley_monte_carlo`] samples
//! orderings.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{CoalitionMask, Game};
use crate::par::Execution;

pub const MAX_EXACT_PLAYERS: usize = 24;
pub const MAX_ORACLE_PLAYERS: usize = 10;

/// Orderings drawn per independent random substream in [`shapley_monte_carlo`].
pub const MONTE_CARLO_CHUNK: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Additive,
    Ratio,
}

impl Scheme {
    pub const ALL: [Scheme; 2] = [Scheme::Additive, Scheme::Ratio];
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Additive => "additive",
            Scheme::Ratio => "ratio",
        })
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "additive" => Ok(Scheme::Additive),
            "ratio" => Ok(Scheme::Ratio),
            other => Err(format!("unknown scheme `{other}` (expected ratio or additive)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Method {
    Exact,
    PermutationOracle,
    MonteCarlo {
        samples: usize,
        seed: u64,
        stderr: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValuationVector {
    pub scheme: Scheme,
    pub method: Method,
    pub phi: Vec<f64>,
}

impl ValuationVector {
    pub fn len(&self) -> usize {
        self.phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phi.is_empty()
    }

    /// `max_i φ_i` (0 for an empty vector).
    pub fn max(&self) -> f64 {
        self.phi.iter().copied().fold(0.0, f64::max)
    }

    /// Largest φ among the members of `c`.
    pub fn max_over(&self, c: CoalitionMask) -> f64 {
        c.members().map(|k| self.phi[k]).fold(0.0, f64::max)
    }

    /// Players attaining the maximum, ascending.
    pub fn argmax(&self) -> Vec<usize> {
        let top = self.max();
        (0..self.phi.len()).filter(|&k| self.phi[k] == top).collect()
    }

    /// `φ_i / φ*`, with every entry 1 when `φ* = 0`.
    pub fn normalized(&self) -> Vec<f64> {
        let top = self.max();
        self.phi
            .iter()
            .map(|&p| if top == 0.0 { 1.0 } else { p / top })
            .collect()
    }

    pub fn stderr(&self) -> Option<&[f64]> {
        match &self.method {
            Method::MonteCarlo { stderr, .. } => Some(stderr),
            _ => None,
        }
    }
}

fn check_join(game: &Game, i: usize, c: CoalitionMask) -> Result<()> {
    game.check_player(i)?;
    game.value(c)?;
    if c.contains(i) {
        return Err(Error::PlayerInCoalition { player: i, mask: c });
    }
    Ok(())
}

/// `v(C ∪ {i}) − v(C)`.
pub fn delta_abs(game: &Game, i: usize, c: CoalitionMask) -> Result<f64> {
    check_join(game, i, c)?;
    Ok(marginal(game, Scheme::Additive, i, c))
}

/// `v(C ∪ {i}) / v(C) − 1`, or 0 when `v(C) = 0`.
pub fn delta_rel(game: &Game, i: usize, c: CoalitionMask) -> Result<f64> {
    check_join(game, i, c)?;
    Ok(marginal(game, Scheme::Ratio, i, c))
}

/// Unchecked marginal contribution of `i` (not in `c`) under `scheme`.
#[inline]
pub(crate) fn marginal(game: &Game, scheme: Scheme, i: usize, c: CoalitionMask) -> f64 {
    let base = game.v(c);
    let joined = game.v(c.with(i));
    match scheme {
        Scheme::Additive => joined - base,
        Scheme::Ratio => {
            if base != 0.0 {
                joined / base - 1.0
            } else {
                0.0
            }
        }
    }
}

/// `|S|! (n − |S| − 1)! / n!` for every `|S|` in `0..n`.
///
/// Equal to `1 / (n · C(n − 1, |S|))`; the binomials are exact integers in
/// `f64` for every supported `n`.
pub fn subset_weights(n: usize) -> Vec<f64> {
    let m = n - 1;
    let mut binom = 1.0f64;
    let mut weights = Vec::with_capacity(n);
    for k in 0..n {
        weights.push(1.0 / (n as f64 * binom));
        binom = binom * (m - k) as f64 / (k + 1) as f64;
    }
    weights
}

/// Exact Shapley values by the subset-weight sum, using the default
/// [`Execution`] strategy.
pub fn shapley_exact(game: &Game, scheme: Scheme) -> Result<ValuationVector> {
    shapley_exact_with(game, scheme, Execution::default())
}

pub fn shapley_exact_with(
    game: &Game,
    scheme: Scheme,
    exec: Execution,
) -> Result<ValuationVector> {
    let n = game.n();
    if n > MAX_EXACT_PLAYERS {
        return Err(Error::PlayerCount {
            n,
            min: 1,
            max: MAX_EXACT_PLAYERS,
        });
    }
    let weights = subset_weights(n);
    let phi = exec.map_range(n, |i| exact_for_player(game, scheme, i, &weights));
    Ok(ValuationVector {
        scheme,
        method: Method::Exact,
        phi,
    })
}

fn exact_for_player(game: &Game, scheme: Scheme, i: usize, weights: &[f64]) -> f64 {
    let n = game.n();
    let low = (1u32 << i) - 1;
    // Sum Δ per predecessor-set size, then weight each bucket once.
    let mut buckets = vec![0.0f64; n];
    for rest in 0..1u32 << (n - 1) {
        let s = CoalitionMask::from_bits((rest & low) | ((rest & !low) << 1));
        buckets[s.len()] += marginal(game, scheme, i, s);
    }
    buckets.iter().zip(weights).map(|(b, w)| b * w).sum()
}

/// Literal average over all `n!` orderings.
pub fn shapley_permutation_oracle(game: &Game, scheme: Scheme) -> Result<ValuationVector> {
    let n = game.n();
    if n > MAX_ORACLE_PLAYERS {
        return Err(Error::PlayerCount {
            n,
            min: 1,
            max: MAX_ORACLE_PLAYERS,
        });
    }
    let mut sums = vec![0.0f64; n];
    let mut count = 0u64;
    for order in (0..n).permutations(n) {
        let mut predecessors = CoalitionMask::EMPTY;
        for &player in &order {
            sums[player] += marginal(game, scheme, player, predecessors);
            predecessors = predecessors.with(player);
        }
        count += 1;
    }
    let phi = sums.into_iter().map(|s| s / count as f64).collect();
    Ok(ValuationVector {
        scheme,
        method: Method::PermutationOracle,
        phi,
    })
}

/// Running per-player moments over a batch of sampled orderings.
#[derive(Debug, Clone)]
struct Moments {
    count: f64,
    mean: Vec<f64>,
    m2: Vec<f64>,
}

impl Moments {
    fn new(n: usize) -> Self {
        Moments {
            count: 0.0,
            mean: vec![0.0; n],
            m2: vec![0.0; n],
        }
    }

    /// Chan et al. pairwise merge.
    fn merge(&mut self, other: &Moments) {
        if other.count == 0.0 {
            return;
        }
        let total = self.count + other.count;
        for k in 0..self.mean.len() {
            let delta = other.mean[k] - self.mean[k];
            self.mean[k] += delta * other.count / total;
            self.m2[k] += other.m2[k] + delta * delta * self.count * other.count / total;
        }
        self.count = total;
    }
}

fn sample_chunk(game: &Game, scheme: Scheme, seed: u64, chunk: usize, draws: usize) -> Moments {
    let n = game.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk as u64);
    let mut order: Vec<usize> = (0..n).collect();
    let mut acc = Moments::new(n);
    for _ in 0..draws {
        order.shuffle(&mut rng);
        acc.count += 1.0;
        let mut predecessors = CoalitionMask::EMPTY;
        for &player in &order {
            let x = marginal(game, scheme, player, predecessors);
            let delta = x - acc.mean[player];
            acc.mean[player] += delta / acc.count;
            acc.m2[player] += delta * (x - acc.mean[player]);
            predecessors = predecessors.with(player);
        }
    }
    acc
}

/// Monte Carlo estimate over `samples` uniformly random orderings.
///
/// Orderings are drawn in chunks of [`MONTE_CARLO_CHUNK`]; chunk `k` uses
/// ChaCha8 stream `k` under `seed`, and chunk moments are merged in chunk
/// order, so the result depends only on `(seed, samples, scheme)` and not on
/// the execution strategy.
pub fn shapley_monte_carlo(
    game: &Game,
    scheme: Scheme,
    samples: usize,
    seed: u64,
) -> Result<ValuationVector> {
    shapley_monte_carlo_with(game, scheme, samples, seed, Execution::default())
}

pub fn shapley_monte_carlo_with(
    game: &Game,
    scheme: Scheme,
    samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<ValuationVector> {
    if samples < 2 {
        return Err(Error::TooFewSamples(samples));
    }
    let n = game.n();
    let chunks = samples.div_ceil(MONTE_CARLO_CHUNK);
    let partials = exec.map_range(chunks, |chunk| {
        let draws = MONTE_CARLO_CHUNK.min(samples - chunk * MONTE_CARLO_CHUNK);
        sample_chunk(game, scheme, seed, chunk, draws)
    });
    let mut total = Moments::new(n);
    for part in &partials {
        total.merge(part);
    }
    let k = samples as f64;
    let stderr = total
        .m2
        .iter()
        .map(|&m2| ((m2 / (k - 1.0)).max(0.0) / k).sqrt())
        .collect();
    Ok(ValuationVector {
        scheme,
        method: Method::MonteCarlo {
            samples,
            seed,
            stderr,
        },
        phi: total.mean,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{random_monotone_game, sqrt_demo_game, weighted_sqrt_game};
    use proptest::prelude::*;

    fn g2() -> Game {
        Game::new(2, vec![0.0, 1.0, 2.0, 4.0]).unwrap()
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn delta_examples() {
        let g = g2();
        let (p1, p2) = (0, 1);
        assert_eq!(delta_abs(&g, p1, CoalitionMask::singleton(p2)).unwrap(), 2.0);
        assert_eq!(delta_abs(&g, p2, CoalitionMask::EMPTY).unwrap(), 2.0);
        assert_eq!(delta_rel(&g, p1, CoalitionMask::EMPTY).unwrap(), 0.0);
        assert_eq!(delta_rel(&g, p2, CoalitionMask::singleton(p1)).unwrap(), 3.0);
        assert_eq!(delta_rel(&g, p1, CoalitionMask::singleton(p2)).unwrap(), 1.0);
        assert!(matches!(
            delta_abs(&g, p1, CoalitionMask::singleton(p1)),
            Err(Error::PlayerInCoalition { .. })
        ));
        assert!(matches!(
            delta_rel(&g, 2, CoalitionMask::EMPTY),
            Err(Error::PlayerOutOfRange { .. })
        ));
    }

    #[test]
    fn null_player_has_zero_marginals() {
        // player 3 never changes any value
        let g = Game::new(3, vec![0.0, 1.0, 2.0, 3.0, 0.0, 1.0, 2.0, 3.0]).unwrap();
        for c in 0..8u32 {
            let c = CoalitionMask::from_bits(c);
            if c.contains(2) {
                continue;
            }
            assert_eq!(delta_abs(&g, 2, c).unwrap(), 0.0);
            assert_eq!(delta_rel(&g, 2, c).unwrap(), 0.0);
        }
    }

    #[test]
    fn subset_weights_sum_to_one_per_size_class() {
        for n in 1..=MAX_EXACT_PLAYERS {
            let w = subset_weights(n);
            // Σ_k C(n−1, k) · w_k = 1/n · n = 1
            let mut binom = 1.0;
            let mut total = 0.0;
            for (k, wk) in w.iter().enumerate() {
                total += binom * wk;
                binom = binom * (n - 1 - k) as f64 / (k + 1) as f64;
            }
            assert!((total - 1.0).abs() < 1e-12, "n = {n}: {total}");
        }
    }

    #[test]
    fn g2_hand_values() {
        let g = g2();
        for method in [shapley_exact, shapley_permutation_oracle] {
            assert!(close(&method(&g, Scheme::Additive).unwrap().phi, &[1.5, 2.5], 1e-12));
            assert!(close(&method(&g, Scheme::Ratio).unwrap().phi, &[0.5, 1.5], 1e-12));
        }
    }

    #[test]
    fn ratio_ignores_standalone_only_null_player() {
        // player 1 adds nothing to any nonempty coalition but has v({1}) > 0
        let g = Game::new(2, vec![0.0, 1.0, 2.0, 2.0]).unwrap();
        let phi = shapley_exact(&g, Scheme::Ratio).unwrap().phi;
        assert_eq!(phi[0], 0.0);
    }

    #[test]
    fn bounds_are_enforced() {
        let big = random_monotone_game(11, 0).unwrap();
        assert!(matches!(
            shapley_permutation_oracle(&big, Scheme::Ratio),
            Err(Error::PlayerCount { max: 10, .. })
        ));
        assert!(matches!(
            shapley_monte_carlo(&g2(), Scheme::Ratio, 1, 0),
            Err(Error::TooFewSamples(1))
        ));
    }

    #[test]
    fn monte_carlo_g2() {
        let mc = shapley_monte_carlo(&g2(), Scheme::Ratio, 10_000, 7).unwrap();
        let se = mc.stderr().unwrap();
        for (k, exact) in [0.5, 1.5].into_iter().enumerate() {
            assert!((mc.phi[k] - exact).abs() <= 4.0 * se[k], "{mc:?}");
        }
        assert_eq!(mc, shapley_monte_carlo(&g2(), Scheme::Ratio, 10_000, 7).unwrap());
    }

    #[test]
    fn monte_carlo_zero_game() {
        let g = Game::new(3, vec![0.0; 8]).unwrap();
        let mc = shapley_monte_carlo(&g, Scheme::Ratio, 500, 3).unwrap();
        assert_eq!(mc.phi, vec![0.0; 3]);
        assert_eq!(mc.stderr().unwrap(), &[0.0; 3]);
    }

    #[test]
    fn execution_strategies_agree_bitwise() {
        let g = sqrt_demo_game();
        for scheme in Scheme::ALL {
            let a = shapley_exact_with(&g, scheme, Execution::Sequential).unwrap();
            let b = shapley_exact_with(&g, scheme, Execution::Parallel).unwrap();
            assert_eq!(a, b);
            let a = shapley_monte_carlo_with(&g, scheme, 5000, 11, Execution::Sequential).unwrap();
            let b = shapley_monte_carlo_with(&g, scheme, 5000, 11, Execution::Parallel).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn symmetric_players_get_equal_values() {
        let g = weighted_sqrt_game(&[1.0, 1.0, 2.0]);
        for scheme in Scheme::ALL {
            let phi = shapley_exact(&g, scheme).unwrap().phi;
            assert!((phi[0] - phi[1]).abs() <= 1e-12);
        }
    }

    #[test]
    fn normalized_handles_all_zero() {
        let v = ValuationVector {
            scheme: Scheme::Ratio,
            method: Method::Exact,
            phi: vec![0.0, 0.0],
        };
        assert_eq!(v.normalized(), vec![1.0, 1.0]);
        assert_eq!(v.argmax(), vec![0, 1]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn exact_matches_oracle(n in 1usize..=6, seed in any::<u64>()) {
            let g = random_monotone_game(n, seed).unwrap();
            for scheme in Scheme::ALL {
                let exact = shapley_exact(&g, scheme).unwrap();
                let oracle = shapley_permutation_oracle(&g, scheme).unwrap();
                prop_assert!(close(&exact.phi, &oracle.phi, 1e-10));
            }
        }

        #[test]
        fn valuations_are_non_negative(n in 1usize..=8, seed in any::<u64>()) {
            let g = random_monotone_game(n, seed).unwrap();
            for scheme in Scheme::ALL {
                prop_assert!(shapley_exact(&g, scheme).unwrap().phi.iter().all(|&p| p >= 0.0));
            }
        }

        #[test]
        fn additive_is_efficient(n in 1usize..=8, seed in any::<u64>()) {
            let g = random_monotone_game(n, seed).unwrap();
            let total: f64 = shapley_exact(&g, Scheme::Additive).unwrap().phi.iter().sum();
            prop_assert!((total - g.grand_value()).abs() <= 1e-10);
        }
    }
}
