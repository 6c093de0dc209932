//! Monotone characteristic-function games over a dense coalition table.
//!
//! A game on `n` players stores one value per coalition, indexed by the
//! coalition's bitmask: bit `k` set means player `k + 1` is a member.
//! Players are 0-indexed in the API and 1-indexed whenever they are shown
//! to a person (`Display`, reports, CSV).

use std::fmt;
use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest player count a [`Game`] will hold (the value table has `2^n` entries).
pub const MAX_PLAYERS: usize = 30;

/// Player-count bound for [`random_monotone_game`].
pub const MAX_GENERATED_PLAYERS: usize = 12;

/// A subset of players encoded as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CoalitionMask(u32);

impl CoalitionMask {
    pub const EMPTY: CoalitionMask = CoalitionMask(0);

    pub const fn from_bits(bits: u32) -> Self {
        CoalitionMask(bits)
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn singleton(player: usize) -> Self {
        CoalitionMask(1 << player)
    }

    /// The grand coalition of `n` players.
    pub fn grand(n: usize) -> Self {
        debug_assert!(n <= MAX_PLAYERS);
        CoalitionMask(((1u64 << n) - 1) as u32)
    }

    pub fn from_players<I: IntoIterator<Item = usize>>(players: I) -> Self {
        CoalitionMask(players.into_iter().fold(0, |acc, p| acc | (1 << p)))
    }

    pub fn contains(self, player: usize) -> bool {
        self.0 >> player & 1 == 1
    }

    pub fn with(self, player: usize) -> Self {
        CoalitionMask(self.0 | (1 << player))
    }

    pub fn without(self, player: usize) -> Self {
        CoalitionMask(self.0 & !(1 << player))
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset_of(self, other: CoalitionMask) -> bool {
        self.0 & !other.0 == 0
    }

    /// Members in ascending (0-based) order.
    pub fn members(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..32).filter(move |&k| bits >> k & 1 == 1)
    }

    /// Members as 1-based labels, for reports.
    pub fn labels(self) -> Vec<usize> {
        self.members().map(|k| k + 1).collect()
    }
}

impl fmt::Display for CoalitionMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (pos, label) in self.labels().into_iter().enumerate() {
            if pos > 0 {
                f.write_str(",")?;
            }
            write!(f, "{label}")?;
        }
        f.write_str("}")
    }
}

/// A single-player extension that lowers the coalition value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityViolation {
    pub subset: CoalitionMask,
    pub superset: CoalitionMask,
    pub v_subset: f64,
    pub v_superset: f64,
}

impl fmt::Display for MonotonicityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "v{} = {} > v{} = {}",
            self.subset, self.v_subset, self.superset, self.v_superset
        )
    }
}

/// A validated monotone game with `v(∅) = 0` and non-negative values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GameFile", into = "GameFile")]
pub struct Game {
    n: usize,
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GameFile {
    n: usize,
    values: Vec<f64>,
}

impl TryFrom<GameFile> for Game {
    type Error = Error;

    fn try_from(file: GameFile) -> Result<Self> {
        Game::new(file.n, file.values)
    }
}

impl From<Game> for GameFile {
    fn from(game: Game) -> Self {
        GameFile {
            n: game.n,
            values: game.values,
        }
    }
}

fn check_player_count(n: usize, max: usize) -> Result<()> {
    if n == 0 || n > max {
        return Err(Error::PlayerCount { n, min: 1, max });
    }
    Ok(())
}

impl Game {
    /// Validates and wraps a value table of length `2^n`.
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        check_player_count(n, MAX_PLAYERS)?;
        let expected = 1usize << n;
        if values.len() != expected {
            return Err(Error::ValueCount {
                n,
                expected,
                got: values.len(),
            });
        }
        for (mask, &value) in values.iter().enumerate() {
            let mask = CoalitionMask(mask as u32);
            if !value.is_finite() {
                return Err(Error::NonFiniteValue { mask, value });
            }
            if value < 0.0 {
                return Err(Error::NegativeValue { mask, value });
            }
        }
        if values[0] != 0.0 {
            return Err(Error::EmptyCoalitionValue(values[0]));
        }
        if let Some(first) = first_violation(n, &values) {
            return Err(Error::NotMonotone(first));
        }
        Ok(Game { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn grand(&self) -> CoalitionMask {
        CoalitionMask::grand(self.n)
    }

    pub fn coalition_count(&self) -> usize {
        self.values.len()
    }

    /// `v(C)`, checked against the player count.
    pub fn value(&self, c: CoalitionMask) -> Result<f64> {
        self.values.get(c.index()).copied().ok_or(Error::MaskOutOfRange {
            mask: c.bits(),
            n: self.n,
        })
    }

    /// `v(C)` without the range check; panics if `c` is out of range.
    #[inline]
    pub fn v(&self, c: CoalitionMask) -> f64 {
        self.values[c.index()]
    }

    /// Standalone value `v({i})`.
    pub fn standalone(&self, player: usize) -> f64 {
        self.v(CoalitionMask::singleton(player))
    }

    pub fn grand_value(&self) -> f64 {
        self.v(self.grand())
    }

    pub fn check_player(&self, player: usize) -> Result<()> {
        if player >= self.n {
            return Err(Error::PlayerOutOfRange { player, n: self.n });
        }
        Ok(())
    }

    /// The game restricted to all players except `player`, re-indexed so
    /// that the remaining players keep their relative order.
    pub fn without_player(&self, player: usize) -> Result<Game> {
        self.check_player(player)?;
        if self.n == 1 {
            return Err(Error::PlayerCount { n: 0, min: 1, max: MAX_PLAYERS });
        }
        let low = (1u32 << player) - 1;
        let values = (0..1u32 << (self.n - 1))
            .map(|reduced| {
                let full = (reduced & low) | ((reduced & !low) << 1);
                self.values[full as usize]
            })
            .collect();
        Game::new(self.n - 1, values)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Game> {
        let text = fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string(self).expect("game serialization is infallible");
        text.push('\n');
        text
    }
}

/// All single-player extensions `C ⊂ C ∪ {i}` with `v(C) > v(C ∪ {i})`,
/// ordered by superset mask, then by the added player.
pub fn check_monotone(n: usize, values: &[f64]) -> Vec<MonotonicityViolation> {
    violations(n, values).collect()
}

fn first_violation(n: usize, values: &[f64]) -> Option<MonotonicityViolation> {
    violations(n, values).next()
}

fn violations(n: usize, values: &[f64]) -> impl Iterator<Item = MonotonicityViolation> + '_ {
    (1..values.len() as u32).flat_map(move |sup| {
        (0..n)
            .filter(move |&k| sup >> k & 1 == 1)
            .filter_map(move |k| {
                let sub = sup & !(1 << k);
                let (lo, hi) = (values[sub as usize], values[sup as usize]);
                (lo > hi).then_some(MonotonicityViolation {
                    subset: CoalitionMask(sub),
                    superset: CoalitionMask(sup),
                    v_subset: lo,
                    v_superset: hi,
                })
            })
    })
}

/// Seven players with `v(C) = sqrt(sum of member labels)`, labels 1..=7.
pub fn sqrt_demo_game() -> Game {
    weighted_sqrt_game(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0])
}

/// `v(C) = sqrt(sum of member weights)` for non-negative weights.
pub fn weighted_sqrt_game(weights: &[f64]) -> Game {
    let n = weights.len();
    let values = (0..1u32 << n)
        .map(|mask| {
            CoalitionMask(mask)
                .members()
                .map(|k| weights[k])
                .sum::<f64>()
                .sqrt()
        })
        .collect();
    Game::new(n, values).expect("sqrt of a non-negative additive weight is monotone")
}

/// Deterministic random strictly-monotone game.
///
/// Coalitions are visited by ascending size; each value is the largest value
/// among its one-smaller subsets plus a uniform increment from `[0, 1)`.
pub fn random_monotone_game(n: usize, seed: u64) -> Result<Game> {
    check_player_count(n, MAX_GENERATED_PLAYERS)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<u32> = (1..1u32 << n).collect();
    order.sort_by_key(|m| (m.count_ones(), *m));
    let mut values = vec![0.0; 1 << n];
    for mask in order {
        let floor = CoalitionMask(mask)
            .members()
            .map(|k| values[(mask & !(1 << k)) as usize])
            .fold(0.0, f64::max);
        values[mask as usize] = floor + rng.gen::<f64>();
    }
    Game::new(n, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g2() -> Game {
        Game::new(2, vec![0.0, 1.0, 2.0, 4.0]).unwrap()
    }

    #[test]
    fn single_player_game_is_valid() {
        let g = Game::new(1, vec![0.0, 5.0]).unwrap();
        assert_eq!(g.grand_value(), 5.0);
    }

    #[test]
    fn rejects_non_monotone_table() {
        match Game::new(2, vec![0.0, 1.0, 2.0, 1.5]) {
            Err(Error::NotMonotone(v)) => {
                assert_eq!(v.subset, CoalitionMask(0b10));
                assert_eq!(v.superset, CoalitionMask(0b11));
                assert_eq!((v.v_subset, v.v_superset), (2.0, 1.5));
            }
            other => panic!("expected monotonicity error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(matches!(
            Game::new(2, vec![0.0, 1.0, 2.0]),
            Err(Error::ValueCount { expected: 4, got: 3, .. })
        ));
        assert!(matches!(
            Game::new(1, vec![0.1, 1.0]),
            Err(Error::EmptyCoalitionValue(_))
        ));
        assert!(matches!(
            Game::new(1, vec![0.0, -1.0]),
            Err(Error::NegativeValue { .. })
        ));
        assert!(matches!(
            Game::new(1, vec![0.0, f64::NAN]),
            Err(Error::NonFiniteValue { .. })
        ));
        assert!(matches!(Game::new(0, vec![0.0]), Err(Error::PlayerCount { .. })));
    }

    #[test]
    fn check_monotone_examples() {
        assert!(check_monotone(2, &[0.0, 1.0, 2.0, 4.0]).is_empty());
        assert!(check_monotone(2, &[0.0; 4]).is_empty());
        let found = check_monotone(2, &[0.0, 1.0, 2.0, 1.5]);
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].subset.bits(), 0b10);
        assert_eq!(found[0].superset.bits(), 0b11);
    }

    #[test]
    fn check_monotone_order_is_superset_then_player() {
        // v({1,2}) = 0 is below both singletons.
        let found = check_monotone(2, &[0.0, 1.0, 2.0, 0.0]);
        let pairs: Vec<_> = found.iter().map(|v| (v.superset.bits(), v.subset.bits())).collect();
        assert_eq!(pairs, vec![(0b11, 0b10), (0b11, 0b01)]);
    }

    #[test]
    fn value_lookup() {
        let g = g2();
        assert_eq!(g.value(CoalitionMask::EMPTY).unwrap(), 0.0);
        assert_eq!(g.value(CoalitionMask(0b11)).unwrap(), 4.0);
        assert!(matches!(
            g.value(CoalitionMask(0b100)),
            Err(Error::MaskOutOfRange { .. })
        ));
    }

    #[test]
    fn sqrt_demo_values() {
        let g = sqrt_demo_game();
        assert_eq!(g.n(), 7);
        assert_eq!(g.standalone(0), 1.0);
        assert_eq!(g.standalone(3), 2.0);
        assert!((g.v(CoalitionMask(0b11)) - 3f64.sqrt()).abs() < 1e-15);
        assert!((g.grand_value() - 5.291_502_622_129_181).abs() < 1e-12);
    }

    #[test]
    fn random_games_are_deterministic_and_monotone() {
        for n in 1..=MAX_GENERATED_PLAYERS {
            let a = random_monotone_game(n, 42).unwrap();
            let b = random_monotone_game(n, 42).unwrap();
            assert_eq!(a, b);
            assert_eq!(a.values()[0], 0.0);
            assert!(check_monotone(n, a.values()).is_empty());
        }
        assert_ne!(random_monotone_game(4, 1).unwrap(), random_monotone_game(4, 2).unwrap());
        assert!(random_monotone_game(0, 1).is_err());
        assert!(random_monotone_game(13, 1).is_err());
    }

    #[test]
    fn removing_a_player_reindexes() {
        let g = sqrt_demo_game();
        let reduced = g.without_player(2).unwrap();
        // remaining labels 1,2,4,5,6,7
        assert_eq!(reduced.n(), 6);
        assert_eq!(reduced.standalone(2), 2.0);
        assert!((reduced.grand_value() - 25f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn mask_display_is_one_based() {
        assert_eq!(CoalitionMask(0b101).to_string(), "{1,3}");
        assert_eq!(CoalitionMask::EMPTY.to_string(), "{}");
    }

    #[test]
    fn json_round_trip_and_schema_errors() {
        let g = random_monotone_game(5, 9).unwrap();
        let back: Game = serde_json::from_str(&g.to_json()).unwrap();
        assert_eq!(g, back);
        for (a, b) in g.values().iter().zip(back.values()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
        assert!(serde_json::from_str::<Game>(r#"{"n":2,"values":[0,1,2]}"#).is_err());
        assert!(serde_json::from_str::<Game>(r#"{"n":1,"values":[0.1,1]}"#).is_err());
        assert!(serde_json::from_str::<Game>(r#"{"values":[0,1]}"#).is_err());
    }
}
