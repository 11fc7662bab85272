//! Exact evaluation over every configuration, Monte Carlo estimates and
//! trace tables.

mod montecarlo;
mod rational;
mod render;

pub use montecarlo::{evaluate_monte_carlo, evaluate_monte_carlo_with, mix64, trial_rank, McReport, GAMMA};
pub use rational::Rational;
pub use render::{render_csv, render_table};

use serde::Serialize;

use crate::error::{bail, Result};
use crate::exec::{chunk_for, map_reduce, Execution};
use crate::game::{unrank_configuration, GameSpec, Objective, Trace};
use crate::strategies::StrategyTable;

/// Largest `q^n` swept by [`evaluate_exact`].
pub const MAX_EXACT_CONFIGURATIONS: u64 = 100_000_000;
/// Largest `q^n` rendered by [`trace_table`].
pub const MAX_TRACE_CONFIGURATIONS: u64 = 4096;

/// Exact result of playing a strategy on every configuration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EvalReport {
    pub game: GameSpec,
    pub strategy: String,
    pub wins: u64,
    pub total: u64,
    pub probability: Rational,
    /// Mean number of correct guesses; reported for the count-correct objective.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_correct: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub traces: Option<Vec<Trace>>,
}

impl EvalReport {
    pub fn named(mut self, strategy: &str) -> Self {
        self.strategy = strategy.to_string();
        self
    }

    /// Single-line JSON object.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialises")
    }
}

fn check_strategy(game: &GameSpec, strategy: &StrategyTable) -> Result<()> {
    if strategy.game() != game {
        bail!(Precondition, "strategy was built for {}, not {game}", strategy.game());
    }
    Ok(())
}

fn report(game: &GameSpec, wins: u64, correct: u64, traces: Option<Vec<Trace>>) -> EvalReport {
    let total = game.total_configurations();
    EvalReport {
        game: *game,
        strategy: "table".to_string(),
        wins,
        total,
        probability: Rational::new(wins, total),
        mean_correct: (game.objective() == Objective::CountCorrect).then(|| Rational::new(correct, total)),
        traces,
    }
}

pub fn evaluate_exact(game: &GameSpec, strategy: &StrategyTable) -> Result<EvalReport> {
    evaluate_exact_with(game, strategy, Execution::default())
}

/// Play every configuration in rank order and tally wins and correct
/// guesses. Tallies merge by addition, so every execution mode agrees.
pub fn evaluate_exact_with(game: &GameSpec, strategy: &StrategyTable, exec: Execution) -> Result<EvalReport> {
    check_strategy(game, strategy)?;
    let total = game.total_configurations();
    if total > MAX_EXACT_CONFIGURATIONS {
        bail!(Capacity, "{game} has {total} configurations, above the exact limit of {MAX_EXACT_CONFIGURATIONS}");
    }
    let (n, q) = (game.n(), game.q());
    let (wins, correct) = map_reduce(
        exec,
        total,
        chunk_for(total),
        (0u64, 0u64),
        |range| {
            range.fold((0, 0), |(w, c), k| {
                let cfg = unrank_configuration(k, n, q).expect("rank below q^n");
                let t = strategy.play_unchecked(&cfg);
                (w + t.outcome.is_win() as u64, c + t.correct_count as u64)
            })
        },
        |a, b| (a.0 + b.0, a.1 + b.1),
    );
    Ok(report(game, wins, correct, None))
}

/// Exact evaluation that also keeps every trace, in rank order.
pub fn trace_table(game: &GameSpec, strategy: &StrategyTable) -> Result<EvalReport> {
    check_strategy(game, strategy)?;
    let total = game.total_configurations();
    if total > MAX_TRACE_CONFIGURATIONS {
        bail!(Capacity, "{game} has {total} configurations, above the trace limit of {MAX_TRACE_CONFIGURATIONS}");
    }
    let traces: Vec<Trace> = (0..total)
        .map(|k| strategy.play_unchecked(&unrank_configuration(k, game.n(), game.q()).expect("rank below q^n")))
        .collect();
    let wins = traces.iter().filter(|t| t.outcome.is_win()).count() as u64;
    let correct = traces.iter().map(|t| t.correct_count as u64).sum();
    Ok(report(game, wins, correct, Some(traces)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::hamming_code;
    use crate::game::{Configuration, Outcome, Response};
    use crate::strategies::*;

    #[test]
    fn ebert_three_quarters() {
        let s = ebert_three_player().unwrap();
        let r = evaluate_exact(s.game(), &s).unwrap();
        assert_eq!((r.wins, r.total), (6, 8));
        assert_eq!(r.probability, Rational::new(3, 4));
        assert_eq!(r.mean_correct, None);
    }

    #[test]
    fn gray_and_hamming_values() {
        let s = gray_strategy(3, 2).unwrap();
        assert_eq!(evaluate_exact(s.game(), &s).unwrap().probability, Rational::new(7, 8));
        let s = covering_code_strategy(&hamming_code(3).unwrap()).unwrap();
        let r = evaluate_exact(s.game(), &s).unwrap();
        assert_eq!((r.total, r.probability), (128, Rational::new(7, 8)));
    }

    #[test]
    fn line_sum_mean_correct() {
        let s = line_sum_strategy(4, 3).unwrap();
        let r = evaluate_exact(s.game(), &s).unwrap();
        assert_eq!(r.mean_correct, Some(Rational::new(10, 3)));
        // everyone right exactly when the first guess lands
        assert_eq!(r.probability, Rational::new(1, 3));
    }

    #[test]
    fn gray_formula_sweep() {
        for n in 1..=5u32 {
            for q in 2..=4u64 {
                let s = gray_strategy(n as usize, q as u32).unwrap();
                let r = evaluate_exact(s.game(), &s).unwrap();
                let total = q.pow(n);
                assert_eq!(r.probability, Rational::new(total - (q - 1).pow(n), total));
            }
        }
    }

    #[test]
    fn execution_modes_agree() {
        let s = covering_code_strategy(&hamming_code(3).unwrap()).unwrap();
        let a = evaluate_exact_with(s.game(), &s, Execution::Sequential).unwrap();
        let b = evaluate_exact_with(s.game(), &s, Execution::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn trace_rows() {
        let s = gray_strategy(1, 2).unwrap();
        let r = trace_table(s.game(), &s).unwrap();
        let traces = r.traces.unwrap();
        assert_eq!(traces.len(), 2);
        assert_eq!(traces[0].responses, vec![Response::guess(0)]);
        assert_eq!(traces[0].outcome, Outcome::Win);
        assert_eq!(traces[1].responses, vec![Response::guess(0)]);
        assert_eq!(traces[1].outcome, Outcome::Lose);

        let s = line_sum_strategy(3, 3).unwrap();
        let traces = trace_table(s.game(), &s).unwrap().traces.unwrap();
        assert_eq!(traces.len(), 27);
        for (k, t) in traces.iter().enumerate() {
            assert_eq!(t.configuration, Configuration::unrank(k as u64, 3, 3).unwrap());
        }
    }

    #[test]
    fn guards() {
        let big = gray_strategy(3, 2).unwrap();
        assert!(evaluate_exact(&GameSpec::new_line(3, 3).unwrap(), &big).is_err());
        let s = covering_code_strategy(&hamming_code(4).unwrap()).unwrap();
        assert!(matches!(trace_table(s.game(), &s), Err(crate::HatError::Capacity(_))));
    }

    #[test]
    fn json_shape() {
        let s = line_sum_strategy(2, 2).unwrap();
        let json = trace_table(s.game(), &s).unwrap().named("line-sum").to_json();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["game"]["objective"], "count-correct");
        assert_eq!(v["game"]["visibility"], "ahead-only");
        assert_eq!(v["strategy"], "line-sum");
        assert_eq!(v["probability"]["den"], 2);
        assert_eq!(v["mean_correct"]["num"], 3);
        assert_eq!(v["traces"][0]["configuration"], "00");
        assert_eq!(v["traces"][0]["responses"][0], "0");
    }
}
