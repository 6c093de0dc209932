//! ρ sweep comparing ratio-based rewards `R_i` with additive rewards `A_i`
//! on the seven-agent square-root game.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{sqrt_demo_game, Game};
use crate::rewards::allocate_grand;
use crate::valuation::{shapley_exact, Scheme, ValuationVector};

pub const DEFAULT_RHO_STEPS: usize = 21;

pub const CSV_HEADER: [&str; 6] = [
    "rho",
    "player",
    "reward_ratio",
    "reward_additive",
    "phi_ratio",
    "phi_additive",
];

/// `steps` evenly spaced values on `[0, 1]`, both ends included.
pub fn rho_grid(steps: usize) -> Result<Vec<f64>> {
    if steps < 2 {
        return Err(Error::TooFewSteps(steps));
    }
    let last = (steps - 1) as f64;
    Ok((0..steps).map(|k| k as f64 / last).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub rho: f64,
    /// 1-based.
    pub player: usize,
    pub reward_ratio: f64,
    pub reward_additive: f64,
    pub phi_ratio: f64,
    pub phi_additive: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    /// Rows for one 1-based player, in ρ order.
    pub fn player_rows(&self, player: usize) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(move |r| r.player == player)
    }

    pub fn rhos(&self) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        for row in &self.rows {
            if out.last() != Some(&row.rho) {
                out.push(row.rho);
            }
        }
        out
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(out);
        writer.write_record(CSV_HEADER)?;
        for row in &self.rows {
            writer.serialize(row)?;
        }
        writer.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    /// Gnuplot-style series: one block per (scheme, player), blocks
    /// separated by two blank lines, columns `rho reward`.
    pub fn write_plot_data<W: Write>(&self, mut out: W) -> Result<()> {
        let players = self.rows.iter().map(|r| r.player).max().unwrap_or(0);
        let mut first = true;
        for scheme in [Scheme::Ratio, Scheme::Additive] {
            for player in 1..=players {
                if !first {
                    writeln!(out, "\n")?;
                }
                first = false;
                writeln!(out, "# scheme={scheme} player={player}")?;
                for row in self.player_rows(player) {
                    let reward = match scheme {
                        Scheme::Ratio => row.reward_ratio,
                        Scheme::Additive => row.reward_additive,
                    };
                    writeln!(out, "{} {}", row.rho, reward)?;
                }
            }
        }
        Ok(())
    }

    pub fn to_plot_data(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_plot_data(&mut buf)?;
        Ok(String::from_utf8(buf).expect("plot data is utf-8"))
    }
}

/// Grand-coalition rewards under both valuations at each grid ρ.
pub fn sweep(
    game: &Game,
    ratio: &ValuationVector,
    additive: &ValuationVector,
    steps: usize,
) -> Result<SweepTable> {
    let mut rows = Vec::with_capacity(steps * game.n());
    for rho in rho_grid(steps)? {
        let r = allocate_grand(game, ratio, rho)?;
        let a = allocate_grand(game, additive, rho)?;
        for player in 0..game.n() {
            rows.push(SweepRow {
                rho,
                player: player + 1,
                reward_ratio: r.rewards[player],
                reward_additive: a.rewards[player],
                phi_ratio: ratio.phi[player],
                phi_additive: additive.phi[player],
            });
        }
    }
    Ok(SweepTable { rows })
}

/// How fast one player's reward falls off with ρ under each scheme.
///
/// Rewards are `(φ_i / φ*)^ρ · v(N)`, so the scheme with the larger
/// normalized valuation decays more slowly at every interior ρ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DropOff {
    pub player: usize,
    pub normalized_ratio: f64,
    pub normalized_additive: f64,
    pub ratio_drops_slower: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonSummary {
    pub grand_value: f64,
    pub phi_ratio: Vec<f64>,
    pub phi_additive: Vec<f64>,
    pub normalized_ratio: Vec<f64>,
    pub normalized_additive: Vec<f64>,
    pub argmax_ratio: Vec<usize>,
    pub argmax_additive: Vec<usize>,
    pub argmax_agree: bool,
    /// The two lowest-index players.
    pub drop_off: Vec<DropOff>,
}

impl ComparisonSummary {
    pub fn new(game: &Game, ratio: &ValuationVector, additive: &ValuationVector) -> Self {
        let normalized_ratio = ratio.normalized();
        let normalized_additive = additive.normalized();
        let labels = |v: Vec<usize>| v.into_iter().map(|p| p + 1).collect::<Vec<_>>();
        let argmax_ratio = labels(ratio.argmax());
        let argmax_additive = labels(additive.argmax());
        let drop_off = (0..game.n().min(2))
            .map(|p| DropOff {
                player: p + 1,
                normalized_ratio: normalized_ratio[p],
                normalized_additive: normalized_additive[p],
                ratio_drops_slower: normalized_ratio[p] > normalized_additive[p],
            })
            .collect();
        ComparisonSummary {
            grand_value: game.grand_value(),
            phi_ratio: ratio.phi.clone(),
            phi_additive: additive.phi.clone(),
            argmax_agree: argmax_ratio == argmax_additive,
            normalized_ratio,
            normalized_additive,
            argmax_ratio,
            argmax_additive,
            drop_off,
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("summary serialization is infallible");
        text.push('\n');
        text
    }
}

#[derive(Debug, Clone)]
pub struct Comparison {
    pub game: Game,
    pub ratio: ValuationVector,
    pub additive: ValuationVector,
    pub table: SweepTable,
    pub summary: ComparisonSummary,
}

/// Exact valuations once, then the ρ sweep, for any game.
pub fn compare(game: Game, steps: usize) -> Result<Comparison> {
    let ratio = shapley_exact(&game, Scheme::Ratio)?;
    let additive = shapley_exact(&game, Scheme::Additive)?;
    let table = sweep(&game, &ratio, &additive, steps)?;
    let summary = ComparisonSummary::new(&game, &ratio, &additive);
    Ok(Comparison {
        game,
        ratio,
        additive,
        table,
        summary,
    })
}

pub fn sqrt7_comparison(steps: usize) -> Result<Comparison> {
    compare(sqrt_demo_game(), steps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints() {
        assert_eq!(rho_grid(2).unwrap(), vec![0.0, 1.0]);
        let g = rho_grid(DEFAULT_RHO_STEPS).unwrap();
        assert_eq!((g[0], g[20], g[10]), (0.0, 1.0, 0.5));
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert!(matches!(rho_grid(1), Err(Error::TooFewSteps(1))));
    }

    #[test]
    fn two_step_sweep() {
        let cmp = sqrt7_comparison(2).unwrap();
        let root28 = 28f64.sqrt();
        let at_zero: Vec<_> = cmp.table.rows.iter().filter(|r| r.rho == 0.0).collect();
        assert_eq!(at_zero.len(), 7);
        for row in at_zero {
            assert_eq!(row.reward_ratio, root28);
            assert_eq!(row.reward_additive, root28);
        }
        let top = cmp.table.rows.iter().find(|r| r.rho == 1.0 && r.player == 7).unwrap();
        assert_eq!((top.reward_ratio, top.reward_additive), (root28, root28));
    }

    #[test]
    fn csv_layout() {
        let csv = sqrt7_comparison(3).unwrap().table.to_csv().unwrap();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next(),
            Some("rho,player,reward_ratio,reward_additive,phi_ratio,phi_additive")
        );
        assert_eq!(lines.count(), 21);
    }

    #[test]
    fn plot_data_blocks() {
        let data = sqrt7_comparison(3).unwrap().table.to_plot_data().unwrap();
        assert_eq!(data.matches("# scheme=").count(), 14);
        assert!(data.starts_with("# scheme=ratio player=1\n0 "));
    }
}
