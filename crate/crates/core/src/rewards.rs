//! ρ-scaled model rewards and the ρ ranges that keep them individually
//! rational and the grand coalition stable.
//!
//! Every member of a coalition `C` receives `r_i = (φ_i / φ*_C)^ρ · v(C)`
//! where `φ*_C` is the largest valuation among the members. The same rule is
//! applied to additive and ratio valuations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{CoalitionMask, Game};
use crate::par::Execution;
use crate::valuation::{Scheme, ValuationVector};

/// Slack on every `≥` comparison made by the checkers.
pub const CHECK_TOL: f64 = 1e-12;

/// Valuations within `PHI_TIE_REL · φ*` of each other count as tied.
pub const PHI_TIE_REL: f64 = 1e-12;

/// Player bound for the exhaustive stability scan.
pub const MAX_STABILITY_PLAYERS: usize = 20;

const SCAN_CHUNK: u32 = 1 << 12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RewardAllocation {
    pub coalition: CoalitionMask,
    pub rho: f64,
    pub scheme: Scheme,
    /// `v(coalition)`.
    pub value: f64,
    pub phi_star: f64,
    /// One reward per member, in ascending player order.
    pub rewards: Vec<f64>,
}

impl RewardAllocation {
    pub fn members(&self) -> impl Iterator<Item = usize> {
        self.coalition.members()
    }

    /// `(player, reward)` pairs in ascending player order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.coalition.members().zip(self.rewards.iter().copied())
    }

    pub fn reward_of(&self, player: usize) -> Option<f64> {
        self.iter().find(|&(p, _)| p == player).map(|(_, r)| r)
    }
}

pub(crate) fn check_rho(rho: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::RhoOutOfRange(rho));
    }
    Ok(())
}

pub(crate) fn check_valuation(game: &Game, valuation: &ValuationVector) -> Result<()> {
    if valuation.len() != game.n() {
        return Err(Error::ValuationLength {
            expected: game.n(),
            got: valuation.len(),
        });
    }
    Ok(())
}

/// `(φ_i / φ*)^ρ · v`, with `0/0 := 1` and `0^0 := 1`.
#[inline]
pub fn scaled_reward(phi: f64, phi_star: f64, rho: f64, value: f64) -> f64 {
    if phi_star == 0.0 {
        return value;
    }
    let ratio = phi / phi_star;
    if ratio == 0.0 {
        return if rho == 0.0 { value } else { 0.0 };
    }
    ratio.powf(rho) * value
}

pub fn allocate(
    game: &Game,
    valuation: &ValuationVector,
    coalition: CoalitionMask,
    rho: f64,
) -> Result<RewardAllocation> {
    check_rho(rho)?;
    check_valuation(game, valuation)?;
    let value = game.value(coalition)?;
    if coalition.is_empty() {
        return Err(Error::EmptyCoalition);
    }
    let phi_star = valuation.max_over(coalition);
    let rewards = coalition
        .members()
        .map(|k| scaled_reward(valuation.phi[k], phi_star, rho, value))
        .collect();
    Ok(RewardAllocation {
        coalition,
        rho,
        scheme: valuation.scheme,
        value,
        phi_star,
        rewards,
    })
}

/// Allocation of `v(N)` over the grand coalition.
pub fn allocate_grand(game: &Game, valuation: &ValuationVector, rho: f64) -> Result<RewardAllocation> {
    allocate(game, valuation, game.grand(), rho)
}

/// Why a player does or does not constrain ρ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "bound", rename_all = "kebab-case")]
pub enum Constraint {
    /// `ρ ≤ log(target / v_N) / log(φ_i / φ*)`.
    Bound(f64),
    /// `φ_i = φ*`: the reward is `v_N` for every ρ, which covers any target.
    TopValued,
    /// Target value is 0, met by every non-negative reward.
    ZeroTarget,
    /// `φ_i = 0` with a positive target: no ρ > 0 works.
    Unattainable,
}

impl Constraint {
    fn limit(self) -> Option<f64> {
        match self {
            Constraint::Bound(b) => Some(b),
            Constraint::Unattainable => Some(0.0),
            Constraint::TopValued | Constraint::ZeroTarget => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlayerConstraint {
    pub player: usize,
    /// `{i}` for individual rationality, `C_i` for stability.
    pub coalition: CoalitionMask,
    pub target: f64,
    pub phi_ratio: f64,
    pub constraint: Constraint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RhoBound {
    /// Minimum over constraining players; `+∞` when none constrains.
    pub raw: f64,
    /// `min(raw, 1)`.
    pub clamped: f64,
    /// Players whose constraint attains `raw`.
    pub binding: Vec<usize>,
    pub constraints: Vec<PlayerConstraint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RhoBounds {
    pub ir: RhoBound,
    pub stability: RhoBound,
}

fn is_top(phi: f64, phi_star: f64) -> bool {
    phi >= phi_star - PHI_TIE_REL * phi_star
}

fn constraint_for(phi: f64, phi_star: f64, target: f64, grand: f64) -> Constraint {
    if is_top(phi, phi_star) {
        Constraint::TopValued
    } else if target == 0.0 {
        Constraint::ZeroTarget
    } else if phi == 0.0 {
        Constraint::Unattainable
    } else {
        // both logs are ≤ 0; target ≤ v_N by monotonicity
        Constraint::Bound((target / grand).ln() / (phi / phi_star).ln())
    }
}

fn summarize(constraints: Vec<PlayerConstraint>) -> RhoBound {
    let raw = constraints
        .iter()
        .filter_map(|c| c.constraint.limit())
        .fold(f64::INFINITY, f64::min);
    let binding = constraints
        .iter()
        .filter(|c| c.constraint.limit() == Some(raw))
        .map(|c| c.player)
        .collect();
    RhoBound {
        raw,
        clamped: raw.min(1.0),
        binding,
        constraints,
    }
}

/// Largest ρ for which every `r_i ≥ v({i})` in the grand coalition.
pub fn rho_ir_bound(game: &Game, valuation: &ValuationVector) -> Result<RhoBound> {
    check_valuation(game, valuation)?;
    let phi_star = valuation.max();
    let grand = game.grand_value();
    let constraints = (0..game.n())
        .map(|i| {
            let phi = valuation.phi[i];
            let target = game.standalone(i);
            PlayerConstraint {
                player: i,
                coalition: CoalitionMask::singleton(i),
                target,
                phi_ratio: if phi_star == 0.0 { 1.0 } else { phi / phi_star },
                constraint: constraint_for(phi, phi_star, target, grand),
            }
        })
        .collect();
    Ok(summarize(constraints))
}

/// `C_i = { j : φ_j ≤ φ_i }`, ties included.
pub fn weaker_or_equal_set(valuation: &ValuationVector, player: usize) -> CoalitionMask {
    let tie = PHI_TIE_REL * valuation.max();
    let own = valuation.phi[player];
    CoalitionMask::from_players((0..valuation.len()).filter(|&j| valuation.phi[j] <= own + tie))
}

/// Largest ρ for which every `r_i ≥ v(C_i)`, which makes the grand coalition
/// stable: any coalition whose top-valued member is `i` lies inside `C_i`.
pub fn rho_stability_bound(game: &Game, valuation: &ValuationVector) -> Result<RhoBound> {
    check_valuation(game, valuation)?;
    let phi_star = valuation.max();
    let grand = game.grand_value();
    let constraints = (0..game.n())
        .map(|j| {
            let phi = valuation.phi[j];
            let coalition = weaker_or_equal_set(valuation, j);
            let target = game.v(coalition);
            PlayerConstraint {
                player: j,
                coalition,
                target,
                phi_ratio: if phi_star == 0.0 { 1.0 } else { phi / phi_star },
                constraint: constraint_for(phi, phi_star, target, grand),
            }
        })
        .collect();
    Ok(summarize(constraints))
}

pub fn rho_bounds(game: &Game, valuation: &ValuationVector) -> Result<RhoBounds> {
    Ok(RhoBounds {
        ir: rho_ir_bound(game, valuation)?,
        stability: rho_stability_bound(game, valuation)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IrViolation {
    pub player: usize,
    pub reward: f64,
    pub standalone: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityViolation {
    pub coalition: CoalitionMask,
    pub player: usize,
    pub value: f64,
    pub reward: f64,
}

/// Outcome of a checker: passes iff there are no violations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome<W> {
    pub violations: Vec<W>,
}

impl<W> CheckOutcome<W> {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Individual rationality of a grand-coalition allocation.
pub fn check_ir(game: &Game, allocation: &RewardAllocation) -> Result<CheckOutcome<IrViolation>> {
    if allocation.coalition != game.grand() {
        return Err(Error::NotGrandCoalition(allocation.coalition));
    }
    let violations = allocation
        .iter()
        .filter_map(|(player, reward)| {
            let standalone = game.standalone(player);
            (reward < standalone - CHECK_TOL).then_some(IrViolation {
                player,
                reward,
                standalone,
            })
        })
        .collect();
    Ok(CheckOutcome { violations })
}

/// Exhaustive grand-coalition stability scan at `rho`.
///
/// For every nonempty `C` and every top-valued member `i` of `C`, the grand
/// coalition reward must cover what `C` could achieve alone: `r_i ≥ v(C)`.
pub fn check_stability(
    game: &Game,
    valuation: &ValuationVector,
    rho: f64,
) -> Result<CheckOutcome<StabilityViolation>> {
    check_stability_with(game, valuation, rho, Execution::default())
}

pub fn check_stability_with(
    game: &Game,
    valuation: &ValuationVector,
    rho: f64,
    exec: Execution,
) -> Result<CheckOutcome<StabilityViolation>> {
    let n = game.n();
    if n > MAX_STABILITY_PLAYERS {
        return Err(Error::PlayerCount {
            n,
            min: 1,
            max: MAX_STABILITY_PLAYERS,
        });
    }
    let rewards = allocate_grand(game, valuation, rho)?.rewards;
    let tie = PHI_TIE_REL * valuation.max();
    let total = 1u32 << n;
    let chunks = total.div_ceil(SCAN_CHUNK) as usize;
    let found = exec.map_range(chunks, |chunk| {
        let start = (chunk as u32 * SCAN_CHUNK).max(1);
        let end = ((chunk as u32 + 1) * SCAN_CHUNK).min(total);
        let mut out = Vec::new();
        for bits in start..end {
            let c = CoalitionMask::from_bits(bits);
            let value = game.v(c);
            let top = valuation.max_over(c);
            for i in c.members() {
                if valuation.phi[i] >= top - tie && rewards[i] < value - CHECK_TOL {
                    out.push(StabilityViolation {
                        coalition: c,
                        player: i,
                        value,
                        reward: rewards[i],
                    });
                }
            }
        }
        out
    });
    Ok(CheckOutcome {
        violations: found.into_iter().flatten().collect(),
    })
}
