//! Monte Carlo estimates with counter-based randomness.
//!
//! Trial `t` under seed `s` draws configuration rank
//! `floor(mix64(mix64(s) + (t + 1) * GAMMA) * q^n / 2^64)`, where `mix64` is
//! the SplitMix64 finaliser and `GAMMA = 0x9E3779B97F4A7C15`. Each draw
//! depends only on `(s, t)`, so reports are identical under any schedule.

use serde::Serialize;

use crate::error::{bail, Result};
use crate::exec::{chunk_for, map_reduce, Execution};
use crate::game::{unrank_configuration, GameSpec};
use crate::strategies::StrategyTable;

pub const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Configuration rank drawn for trial `t`, uniform over `0..total`.
pub fn trial_rank(seed: u64, t: u64, total: u64) -> u64 {
    let x = mix64(mix64(seed).wrapping_add(t.wrapping_add(1).wrapping_mul(GAMMA)));
    ((x as u128 * total as u128) >> 64) as u64
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McReport {
    pub game: GameSpec,
    pub strategy: String,
    pub trials: u64,
    pub seed: u64,
    pub wins: u64,
    pub estimate: f64,
    pub half_width_95: f64,
}

impl McReport {
    /// Does the normal-approximation 95% interval contain `p`?
    pub fn covers(&self, p: f64) -> bool {
        (self.estimate - p).abs() <= self.half_width_95
    }

    pub fn named(mut self, strategy: &str) -> Self {
        self.strategy = strategy.to_string();
        self
    }
}

pub fn evaluate_monte_carlo(game: &GameSpec, strategy: &StrategyTable, trials: u64, seed: u64) -> Result<McReport> {
    evaluate_monte_carlo_with(game, strategy, trials, seed, Execution::default())
}

pub fn evaluate_monte_carlo_with(
    game: &GameSpec,
    strategy: &StrategyTable,
    trials: u64,
    seed: u64,
    exec: Execution,
) -> Result<McReport> {
    if trials == 0 {
        bail!(Domain, "at least one trial is required");
    }
    if strategy.game() != game {
        bail!(Precondition, "strategy was built for {}, not {game}", strategy.game());
    }
    let total = game.total_configurations();
    let (n, q) = (game.n(), game.q());
    let wins = map_reduce(
        exec,
        trials,
        chunk_for(trials),
        0u64,
        |range| {
            range
                .filter(|&t| {
                    let cfg = unrank_configuration(trial_rank(seed, t, total), n, q).expect("rank below q^n");
                    strategy.play_unchecked(&cfg).outcome.is_win()
                })
                .count() as u64
        },
        |a, b| a + b,
    );
    let estimate = wins as f64 / trials as f64;
    let half_width_95 = 1.96 * (estimate * (1.0 - estimate) / trials as f64).sqrt();
    Ok(McReport {
        game: *game,
        strategy: "table".to_string(),
        trials,
        seed,
        wins,
        estimate,
        half_width_95,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategies::gray_strategy;

    #[test]
    fn mix_is_splitmix() {
        // first output of SplitMix64 seeded with 0
        assert_eq!(mix64(GAMMA), 0xE220_A839_7B1D_CDAF);
    }

    #[test]
    fn deterministic_and_schedule_free() {
        let s = gray_strategy(3, 2).unwrap();
        let a = evaluate_monte_carlo_with(s.game(), &s, 10_000, 42, Execution::Sequential).unwrap();
        let b = evaluate_monte_carlo(s.game(), &s, 10_000, 42).unwrap();
        assert_eq!(a, b);
        let c = evaluate_monte_carlo(s.game(), &s, 10_000, 43).unwrap();
        assert_ne!(a.wins, c.wins);
    }

    #[test]
    fn single_trial() {
        let s = gray_strategy(3, 2).unwrap();
        let r = evaluate_monte_carlo(s.game(), &s, 1, 7).unwrap();
        assert!(r.wins <= 1);
        let p = r.estimate;
        assert_eq!(r.half_width_95, 1.96 * (p * (1.0 - p)).sqrt());
        assert!(evaluate_monte_carlo(s.game(), &s, 0, 7).is_err());
    }

    #[test]
    fn draws_are_roughly_uniform() {
        let mut counts = [0u64; 8];
        for t in 0..80_000 {
            counts[trial_rank(9, t, 8) as usize] += 1;
        }
        assert!(counts.iter().all(|&c| (9_400..10_600).contains(&c)), "{counts:?}");
    }
}
