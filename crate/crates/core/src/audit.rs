//! Executable checks of the fairness axioms (uselessness, symmetry, strict
//! desirability, strict monotonicity) and the incentive axioms, with a
//! numeric witness for every failure.
//!
//! Detectors find the players or pairs an axiom's hypothesis applies to; the
//! checkers then test the axiom's conclusion on the actual valuations and
//! rewards. Strict monotonicity quantifies over pairs of games, so
//! [`make_monotonicity_pair`] builds such pairs constructively.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{CoalitionMask, Game};
use crate::par::Execution;
use crate::rewards::{
    allocate_grand, check_ir, check_rho, check_stability, rho_ir_bound, rho_stability_bound,
    RewardAllocation, MAX_STABILITY_PLAYERS,
};
use crate::valuation::{shapley_exact, Scheme, ValuationVector};

pub const DEFAULT_TOL: f64 = 1e-12;

/// Multiplier applied to a ρ bound before re-checking it.
pub const BOUND_MARGIN: f64 = 1.0 - 1e-9;

/// Subsets of `N ∖ exclude`, ascending.
fn subsets_without(n: usize, exclude: CoalitionMask) -> impl Iterator<Item = CoalitionMask> {
    (0..1u32 << n)
        .map(CoalitionMask::from_bits)
        .filter(move |c| c.bits() & exclude.bits() == 0)
}

/// Players whose joining leaves every nonempty coalition's value unchanged
/// (within `tol`).
///
/// A one-player game has no nonempty coalition to join, so it reports no
/// useless players.
pub fn find_useless_players(game: &Game, tol: f64) -> Vec<usize> {
    let n = game.n();
    if n < 2 {
        return Vec::new();
    }
    (0..n)
        .filter(|&i| {
            subsets_without(n, CoalitionMask::singleton(i))
                .filter(|c| !c.is_empty())
                .all(|c| (game.v(c.with(i)) - game.v(c)).abs() <= tol)
        })
        .collect()
}

/// Unordered pairs `(i, j)`, `i < j`, with `v(C ∪ {i}) = v(C ∪ {j})` (within
/// `tol`) for every `C ⊆ N ∖ {i, j}`, the empty set included.
pub fn find_symmetric_pairs(game: &Game, tol: f64) -> Vec<(usize, usize)> {
    let n = game.n();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let both = CoalitionMask::from_players([i, j]);
            if subsets_without(n, both).all(|c| (game.v(c.with(i)) - game.v(c.with(j))).abs() <= tol) {
                pairs.push((i, j));
            }
        }
    }
    pairs
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "relation", rename_all = "kebab-case")]
pub enum Desirability {
    /// `i` is weakly better everywhere and strictly better on `witness ≠ ∅`.
    IDominates { witness: CoalitionMask },
    JDominates { witness: CoalitionMask },
    /// No nonempty coalition separates the two players.
    Symmetric,
    Incomparable,
}

/// Strict desirability relation between `i` and `j`, with strictness only
/// witnessed by nonempty coalitions.
pub fn check_desirability(game: &Game, i: usize, j: usize, tol: f64) -> Result<Desirability> {
    game.check_player(i)?;
    game.check_player(j)?;
    if i == j {
        return Err(Error::SamePlayer(i));
    }
    let n = game.n();
    let both = CoalitionMask::from_players([i, j]);
    let mut i_weakly = true;
    let mut j_weakly = true;
    let mut i_witness = None;
    let mut j_witness = None;
    for c in subsets_without(n, both) {
        let (vi, vj) = (game.v(c.with(i)), game.v(c.with(j)));
        i_weakly &= vi >= vj - tol;
        j_weakly &= vj >= vi - tol;
        if !c.is_empty() {
            if i_witness.is_none() && vi > vj + tol {
                i_witness = Some(c);
            }
            if j_witness.is_none() && vj > vi + tol {
                j_witness = Some(c);
            }
        }
    }
    Ok(match (i_witness, j_witness) {
        (Some(witness), _) if i_weakly => Desirability::IDominates { witness },
        (_, Some(witness)) if j_weakly => Desirability::JDominates { witness },
        (None, None) => Desirability::Symmetric,
        _ => Desirability::Incomparable,
    })
}

/// A game and an improved copy that differs only on coalitions containing
/// the focal player.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GamePair {
    pub base: Game,
    pub modified: Game,
    pub focal: usize,
}

impl GamePair {
    pub fn new(base: Game, modified: Game, focal: usize) -> Result<Self> {
        if base.n() != modified.n() {
            return Err(Error::InvalidPair(format!(
                "player counts differ ({} vs {})",
                base.n(),
                modified.n()
            )));
        }
        base.check_player(focal)?;
        let mut improved = false;
        for (bits, (&before, &after)) in base.values().iter().zip(modified.values()).enumerate() {
            let c = CoalitionMask::from_bits(bits as u32);
            if !c.contains(focal) {
                if before != after {
                    return Err(Error::InvalidPair(format!(
                        "coalition {c} does not contain player {} but changed",
                        focal + 1
                    )));
                }
            } else if after < before {
                return Err(Error::InvalidPair(format!("coalition {c} lost value")));
            } else if after > before {
                improved = true;
            }
        }
        if !improved {
            return Err(Error::InvalidPair("no coalition improved".into()));
        }
        Ok(GamePair {
            base,
            modified,
            focal,
        })
    }
}

/// Raises a random nonempty selection of coalitions containing `focal` by
/// random positive amounts, then restores monotonicity by raising further
/// coalitions containing `focal`. Coalitions without `focal` are never
/// touched: none of them is a superset of a coalition containing `focal`.
pub fn make_monotonicity_pair(game: &Game, focal: usize, seed: u64) -> Result<GamePair> {
    game.check_player(focal)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = game.values().to_vec();
    let with_focal: Vec<u32> = (0..1u32 << game.n())
        .filter(|&bits| CoalitionMask::from_bits(bits).contains(focal))
        .collect();
    let mut chosen: Vec<u32> = with_focal.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
    if chosen.is_empty() {
        chosen.push(with_focal[rng.gen_range(0..with_focal.len())]);
    }
    for bits in chosen {
        // (0, 1]
        values[bits as usize] += 1.0 - rng.gen::<f64>();
    }
    // ascending masks visit every subset before its supersets
    for &bits in &with_focal {
        let c = CoalitionMask::from_bits(bits);
        let floor = c
            .members()
            .filter(|&k| k != focal)
            .map(|k| values[c.without(k).index()])
            .fold(values[bits as usize], f64::max);
        values[bits as usize] = floor;
    }
    let modified = Game::new(game.n(), values)?;
    GamePair::new(game.clone(), modified, focal)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Vacuous,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Vacuous => "vacuous",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct F4Outcome {
    pub status: Status,
    pub focal: usize,
    pub reward_before: f64,
    pub reward_after: f64,
    pub grand_value_after: f64,
}

/// Strict monotonicity on one pair: if `v'(N) > r_i` then `r'_i > r_i`.
pub fn check_f4(pair: &GamePair, scheme: Scheme, rho: f64) -> Result<F4Outcome> {
    check_rho(rho)?;
    let i = pair.focal;
    let reward_of = |game: &Game| -> Result<f64> {
        let phi = shapley_exact(game, scheme)?;
        Ok(allocate_grand(game, &phi, rho)?.rewards[i])
    };
    let before = reward_of(&pair.base)?;
    let after = reward_of(&pair.modified)?;
    let grand_after = pair.modified.grand_value();
    let status = if grand_after <= before + DEFAULT_TOL {
        Status::Vacuous
    } else if after > before {
        Status::Pass
    } else {
        Status::Fail
    };
    Ok(F4Outcome {
        status,
        focal: i,
        reward_before: before,
        reward_after: after,
        grand_value_after: grand_after,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartyMonotonicityOutcome {
    pub passed: bool,
    /// `φ'_k − φ_k` per player.
    pub gains: Vec<f64>,
    /// Player with the largest gain other than the focal one.
    pub strongest_other: Option<usize>,
}

/// Whether the focal player's valuation gain is at least every other
/// player's gain.
pub fn check_party_monotonicity(pair: &GamePair, scheme: Scheme) -> Result<PartyMonotonicityOutcome> {
    let before = shapley_exact(&pair.base, scheme)?;
    let after = shapley_exact(&pair.modified, scheme)?;
    let gains: Vec<f64> = after.phi.iter().zip(&before.phi).map(|(a, b)| a - b).collect();
    let strongest_other = (0..gains.len())
        .filter(|&k| k != pair.focal)
        .max_by(|&a, &b| gains[a].total_cmp(&gains[b]));
    let passed = strongest_other.is_none_or(|k| gains[pair.focal] >= gains[k] - DEFAULT_TOL);
    Ok(PartyMonotonicityOutcome {
        passed,
        gains,
        strongest_other,
    })
}

/// Numeric evidence attached to an audit entry. Players and coalition
/// members are 1-based labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    Reward {
        player: usize,
        reward: f64,
        coalition_value: f64,
    },
    Efficiency {
        max_reward: f64,
        coalition_value: f64,
    },
    IndividualRationality {
        player: usize,
        reward: f64,
        standalone: f64,
    },
    Stability {
        coalition: Vec<usize>,
        player: usize,
        coalition_value: f64,
        reward: f64,
    },
    RhoBound {
        raw: f64,
        rho_checked: f64,
        binding: Vec<usize>,
        violations: usize,
    },
    Useless {
        player: usize,
        phi: f64,
        reward: f64,
        standalone: f64,
    },
    Removal {
        removed: usize,
        player: usize,
        reward_full: f64,
        reward_reduced: f64,
    },
    Symmetric {
        players: [usize; 2],
        phi: [f64; 2],
        rewards: [f64; 2],
    },
    Dominance {
        dominant: usize,
        dominated: usize,
        coalition: Vec<usize>,
        phi: [f64; 2],
        rewards: [f64; 2],
    },
    StrictMonotonicity {
        pair: usize,
        focal: usize,
        reward_before: f64,
        reward_after: f64,
        grand_value_after: f64,
        modified_values: Vec<f64>,
    },
    PartyMonotonicity {
        pair: usize,
        focal: usize,
        other: usize,
        gain_focal: f64,
        gain_other: f64,
    },
    Argmax {
        additive: Vec<usize>,
        ratio: Vec<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditEntry {
    pub axiom: String,
    pub status: Status,
    /// Whether a failure of this entry fails the audit.
    pub asserted: bool,
    pub witnesses: Vec<Witness>,
    pub notes: Vec<String>,
}

impl AuditEntry {
    fn new(axiom: &str) -> Self {
        AuditEntry {
            axiom: axiom.to_string(),
            status: Status::Vacuous,
            asserted: true,
            witnesses: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn informational(mut self) -> Self {
        self.asserted = false;
        self
    }

    fn note(mut self, text: impl Into<String>) -> Self {
        self.notes.push(text.into());
        self
    }

    /// Status from counts: any failure fails, otherwise any checked
    /// instance passes, otherwise vacuous.
    fn settle(mut self, checked: usize) -> Self {
        self.status = if !self.witnesses.is_empty() {
            Status::Fail
        } else if checked > 0 {
            Status::Pass
        } else {
            Status::Vacuous
        };
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AuditReport {
    pub entries: Vec<AuditEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct AuditSummary {
    pub pass: usize,
    pub fail: usize,
    pub vacuous: usize,
    pub asserted_failures: usize,
}

impl AuditReport {
    pub fn entry(&self, axiom: &str) -> Option<&AuditEntry> {
        self.entries.iter().find(|e| e.axiom == axiom)
    }

    pub fn summary(&self) -> AuditSummary {
        let mut s = AuditSummary::default();
        for e in &self.entries {
            match e.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::Vacuous => s.vacuous += 1,
            }
            if e.asserted && e.status == Status::Fail {
                s.asserted_failures += 1;
            }
        }
        s
    }

    pub fn passed(&self) -> bool {
        self.summary().asserted_failures == 0
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serialization is infallible");
        text.push('\n');
        text
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuditConfig {
    pub scheme: Scheme,
    pub rho: f64,
    pub seed: u64,
    /// Number of generated game pairs for the strict-monotonicity checks.
    pub pairs: usize,
    pub tol: f64,
}

impl AuditConfig {
    pub fn new(scheme: Scheme, rho: f64) -> Self {
        AuditConfig {
            scheme,
            rho,
            seed: 0,
            pairs: 32,
            tol: DEFAULT_TOL,
        }
    }
}

/// Seed of the `index`-th generated pair (SplitMix64 of the audit seed).
pub fn pair_seed(seed: u64, index: usize) -> u64 {
    let mut z = seed.wrapping_add((index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

struct Context<'a> {
    game: &'a Game,
    config: AuditConfig,
    phi: ValuationVector,
    allocation: RewardAllocation,
}

/// Runs every checker on `game` and returns entries sorted by axiom id.
pub fn full_audit(game: &Game, config: AuditConfig) -> Result<AuditReport> {
    check_rho(config.rho)?;
    let phi = shapley_exact(game, config.scheme)?;
    let allocation = allocate_grand(game, &phi, config.rho)?;
    let cx = Context {
        game,
        config,
        phi,
        allocation,
    };
    let mut entries = vec![
        audit_r1(&cx),
        audit_r2(&cx),
        audit_r3(&cx),
        audit_r4(&cx)?,
        audit_r4_bound(&cx)?,
        audit_r6(&cx)?,
        audit_r6_bound(&cx)?,
        audit_f1(&cx),
        audit_f1_removal(&cx)?,
        audit_f1_standalone(&cx),
        audit_f2(&cx),
        audit_f3(&cx)?,
        audit_argmax(&cx)?,
    ];
    entries.extend(audit_f4(&cx)?);
    entries.sort_by(|a, b| a.axiom.cmp(&b.axiom));
    Ok(AuditReport { entries })
}

fn audit_r1(cx: &Context) -> AuditEntry {
    let mut e = AuditEntry::new("R1-non-negativity");
    for (p, r) in cx.allocation.iter() {
        if r < -cx.config.tol {
            e.witnesses.push(Witness::Reward {
                player: p + 1,
                reward: r,
                coalition_value: cx.allocation.value,
            });
        }
    }
    e.settle(cx.game.n())
}

fn audit_r2(cx: &Context) -> AuditEntry {
    let mut e = AuditEntry::new("R2-feasibility");
    for (p, r) in cx.allocation.iter() {
        if r > cx.allocation.value + cx.config.tol {
            e.witnesses.push(Witness::Reward {
                player: p + 1,
                reward: r,
                coalition_value: cx.allocation.value,
            });
        }
    }
    e.settle(cx.game.n())
}

fn audit_r3(cx: &Context) -> AuditEntry {
    let mut e = AuditEntry::new("R3-weak-efficiency");
    let best = cx.allocation.rewards.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if (best - cx.allocation.value).abs() > cx.config.tol {
        e.witnesses.push(Witness::Efficiency {
            max_reward: best,
            coalition_value: cx.allocation.value,
        });
    }
    e.settle(1)
}

fn audit_r4(cx: &Context) -> Result<AuditEntry> {
    let mut e = AuditEntry::new("R4-individual-rationality");
    for v in check_ir(cx.game, &cx.allocation)?.violations {
        e.witnesses.push(Witness::IndividualRationality {
            player: v.player + 1,
            reward: v.reward,
            standalone: v.standalone,
        });
    }
    Ok(e.settle(cx.game.n()))
}

fn audit_r4_bound(cx: &Context) -> Result<AuditEntry> {
    let bound = rho_ir_bound(cx.game, &cx.phi)?;
    let rho = bound.clamped * BOUND_MARGIN;
    let alloc = allocate_grand(cx.game, &cx.phi, rho)?;
    let out = check_ir(cx.game, &alloc)?;
    let mut e = AuditEntry::new("R4-rho-bound").note(format!(
        "rho_r raw = {}, clamped = {}",
        bound.raw, bound.clamped
    ));
    if !out.passed() {
        e.witnesses.push(Witness::RhoBound {
            raw: bound.raw,
            rho_checked: rho,
            binding: bound.binding.iter().map(|p| p + 1).collect(),
            violations: out.violations.len(),
        });
    }
    Ok(e.settle(1))
}

fn audit_r6(cx: &Context) -> Result<AuditEntry> {
    let e = AuditEntry::new("R6-stability");
    if cx.game.n() > MAX_STABILITY_PLAYERS {
        return Ok(e.note("too many players for the exhaustive coalition scan").settle(0));
    }
    let mut e = e;
    for v in check_stability(cx.game, &cx.phi, cx.config.rho)?.violations {
        e.witnesses.push(Witness::Stability {
            coalition: v.coalition.labels(),
            player: v.player + 1,
            coalition_value: v.value,
            reward: v.reward,
        });
    }
    Ok(e.settle(1))
}

fn audit_r6_bound(cx: &Context) -> Result<AuditEntry> {
    let bound = rho_stability_bound(cx.game, &cx.phi)?;
    let e = AuditEntry::new("R6-rho-bound").note(format!(
        "rho_s raw = {}, clamped = {}",
        bound.raw, bound.clamped
    ));
    if cx.game.n() > MAX_STABILITY_PLAYERS {
        return Ok(e.note("too many players for the exhaustive coalition scan").settle(0));
    }
    let rho = bound.clamped * BOUND_MARGIN;
    let out = check_stability(cx.game, &cx.phi, rho)?;
    let mut e = e;
    if !out.passed() {
        e.witnesses.push(Witness::RhoBound {
            raw: bound.raw,
            rho_checked: rho,
            binding: bound.binding.iter().map(|p| p + 1).collect(),
            violations: out.violations.len(),
        });
    }
    Ok(e.settle(1))
}

/// At ρ = 0 every member receives `v(N)`, so the strict reward conclusions
/// of uselessness and desirability are reported without being asserted.
fn rho_zero_caveat(e: AuditEntry, rho: f64) -> AuditEntry {
    if rho == 0.0 {
        e.informational()
            .note("rho = 0 pays every member v(N); reward conclusion reported only")
    } else {
        e
    }
}

fn audit_f1(cx: &Context) -> AuditEntry {
    let useless = find_useless_players(cx.game, cx.config.tol);
    let mut e = rho_zero_caveat(AuditEntry::new("F1-uselessness"), cx.config.rho);
    for &u in &useless {
        let reward = cx.allocation.rewards[u];
        if reward > cx.config.tol {
            e.witnesses.push(Witness::Useless {
                player: u + 1,
                phi: cx.phi.phi[u],
                reward,
                standalone: cx.game.standalone(u),
            });
        }
    }
    e.settle(useless.len())
}

/// Dropping a useless player with zero standalone value leaves everybody
/// else's reward unchanged.
fn audit_f1_removal(cx: &Context) -> Result<AuditEntry> {
    let mut e = AuditEntry::new("F1-removal-invariance");
    let mut checked = 0;
    for u in find_useless_players(cx.game, cx.config.tol) {
        if cx.game.standalone(u) > cx.config.tol {
            continue;
        }
        let reduced = cx.game.without_player(u)?;
        let phi = shapley_exact(&reduced, cx.config.scheme)?;
        let alloc = allocate_grand(&reduced, &phi, cx.config.rho)?;
        for (p, full) in cx.allocation.iter().filter(|&(p, _)| p != u) {
            let reduced_reward = alloc.rewards[if p > u { p - 1 } else { p }];
            checked += 1;
            if (full - reduced_reward).abs() > cx.config.tol {
                e.witnesses.push(Witness::Removal {
                    removed: u + 1,
                    player: p + 1,
                    reward_full: full,
                    reward_reduced: reduced_reward,
                });
            }
        }
    }
    Ok(e.settle(checked))
}

/// Useless players with a positive standalone value: uselessness forces
/// their reward to 0 while individual rationality asks for at least v({i}).
fn audit_f1_standalone(cx: &Context) -> AuditEntry {
    let mut e = AuditEntry::new("F1-vs-R4-standalone").informational();
    let useless = find_useless_players(cx.game, cx.config.tol);
    for &u in &useless {
        let standalone = cx.game.standalone(u);
        if standalone > cx.config.tol {
            e.witnesses.push(Witness::Useless {
                player: u + 1,
                phi: cx.phi.phi[u],
                reward: cx.allocation.rewards[u],
                standalone,
            });
        }
    }
    e.settle(useless.len())
}

fn audit_f2(cx: &Context) -> AuditEntry {
    let pairs = find_symmetric_pairs(cx.game, cx.config.tol);
    let mut e = AuditEntry::new("F2-symmetry");
    let (phi, r) = (&cx.phi.phi, &cx.allocation.rewards);
    for &(i, j) in &pairs {
        if (phi[i] - phi[j]).abs() > cx.config.tol || (r[i] - r[j]).abs() > cx.config.tol {
            e.witnesses.push(Witness::Symmetric {
                players: [i + 1, j + 1],
                phi: [phi[i], phi[j]],
                rewards: [r[i], r[j]],
            });
        }
    }
    e.settle(pairs.len())
}

fn audit_f3(cx: &Context) -> Result<AuditEntry> {
    let mut e = rho_zero_caveat(AuditEntry::new("F3-strict-desirability"), cx.config.rho);
    let (phi, r) = (&cx.phi.phi, &cx.allocation.rewards);
    let n = cx.game.n();
    let mut checked = 0;
    for i in 0..n {
        for j in i + 1..n {
            let (hi, lo, witness) = match check_desirability(cx.game, i, j, cx.config.tol)? {
                Desirability::IDominates { witness } => (i, j, witness),
                Desirability::JDominates { witness } => (j, i, witness),
                _ => continue,
            };
            checked += 1;
            if !(phi[hi] > phi[lo] && r[hi] > r[lo]) {
                e.witnesses.push(Witness::Dominance {
                    dominant: hi + 1,
                    dominated: lo + 1,
                    coalition: witness.labels(),
                    phi: [phi[hi], phi[lo]],
                    rewards: [r[hi], r[lo]],
                });
            }
        }
    }
    Ok(e.settle(checked))
}

fn audit_argmax(cx: &Context) -> Result<AuditEntry> {
    let other = match cx.config.scheme {
        Scheme::Additive => Scheme::Ratio,
        Scheme::Ratio => Scheme::Additive,
    };
    let other_phi = shapley_exact(cx.game, other)?;
    let (additive, ratio) = match cx.config.scheme {
        Scheme::Additive => (cx.phi.argmax(), other_phi.argmax()),
        Scheme::Ratio => (other_phi.argmax(), cx.phi.argmax()),
    };
    let mut e = AuditEntry::new("argmax-agreement").informational();
    if additive != ratio {
        e.witnesses.push(Witness::Argmax {
            additive: additive.iter().map(|p| p + 1).collect(),
            ratio: ratio.iter().map(|p| p + 1).collect(),
        });
    }
    Ok(e.settle(1))
}

/// Strict monotonicity and the party-monotonicity probe over generated pairs.
///
/// Both are reported without being asserted: a base game with zero-valued
/// coalitions outside the focal player gives the focal player a ratio
/// valuation of 0 no matter how much its coalitions improve.
fn audit_f4(cx: &Context) -> Result<[AuditEntry; 2]> {
    let n = cx.game.n();
    let (scheme, rho, seed) = (cx.config.scheme, cx.config.rho, cx.config.seed);
    let results = Execution::default().map_range(cx.config.pairs, |k| -> Result<_> {
        let pair = make_monotonicity_pair(cx.game, k % n, pair_seed(seed, k))?;
        Ok((
            check_f4(&pair, scheme, rho)?,
            check_party_monotonicity(&pair, scheme)?,
            pair.modified,
        ))
    });
    let mut f4 = AuditEntry::new("F4-strict-monotonicity")
        .informational()
        .note(format!("{} generated pairs, seed {}", cx.config.pairs, seed));
    let mut party = AuditEntry::new("F4-party-monotonicity-probe").informational();
    let mut premise_held = 0;
    for (k, result) in results.into_iter().enumerate() {
        let (outcome, probe, modified) = result?;
        if outcome.status != Status::Vacuous {
            premise_held += 1;
        }
        if outcome.status == Status::Fail {
            f4.witnesses.push(Witness::StrictMonotonicity {
                pair: k,
                focal: outcome.focal + 1,
                reward_before: outcome.reward_before,
                reward_after: outcome.reward_after,
                grand_value_after: outcome.grand_value_after,
                modified_values: modified.values().to_vec(),
            });
        }
        if let (false, Some(other)) = (probe.passed, probe.strongest_other) {
            let focal = k % n;
            party.witnesses.push(Witness::PartyMonotonicity {
                pair: k,
                focal: focal + 1,
                other: other + 1,
                gain_focal: probe.gains[focal],
                gain_other: probe.gains[other],
            });
        }
    }
    let pairs = cx.config.pairs;
    Ok([f4.settle(premise_held), party.settle(pairs)])
}
