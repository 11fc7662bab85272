//! Brute-force searches over deterministic strategy spaces of small games.

mod sequential;
mod simultaneous;

use serde::{Serialize, Serializer};

use crate::error::{bail, Result};
use crate::eval::{Rational, MAX_EXACT_CONFIGURATIONS};
use crate::exec::Execution;
use crate::game::{unrank_configuration, GameSpec, Objective, Response, Visibility};
use crate::strategies::StrategyTable;

use sequential::{search_full, search_restricted, SeqSpace};
use simultaneous::SimSpace;

/// Most profiles a single search will visit.
pub const MAX_SEARCH_PROFILES: u64 = 1_000_000_000;

fn witness_text<S: Serializer>(table: &StrategyTable, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&table.to_text())
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchResult {
    pub game: GameSpec,
    pub optimum: Rational,
    pub wins: u64,
    pub total: u64,
    /// Lexicographically least profile reaching the optimum.
    #[serde(serialize_with = "witness_text")]
    pub witness: StrategyTable,
    pub strategies_examined: u64,
    /// Profiles of the full space skipped by pruning.
    pub pruned: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BetaResult {
    pub n: usize,
    pub q: u32,
    pub beta: usize,
    pub bound: u64,
    pub optimum: Rational,
    pub strategies_examined: u64,
}

impl SearchResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("result serialises")
    }
}

impl BetaResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("result serialises")
    }
}

pub fn search_optimal_sequential(n: usize, q: u32, prune: bool) -> Result<SearchResult> {
    search_optimal_sequential_with(n, q, prune, Execution::default())
}

/// Best win probability of the new hats-on-a-line game over every
/// sequential profile. With `prune`, only restricted profiles are visited.
pub fn search_optimal_sequential_with(n: usize, q: u32, prune: bool, exec: Execution) -> Result<SearchResult> {
    let game = GameSpec::new_line(n, q)?;
    let space = SeqSpace::new(n, q);
    let best = if prune {
        search_restricted(&space, MAX_SEARCH_PROFILES, exec)?
    } else {
        search_full(&space, MAX_SEARCH_PROFILES, exec)?
    };
    let total = game.total_configurations();
    let pruned = space.full_size().map_or(u128::MAX, |full| full - best.examined as u128);
    Ok(SearchResult {
        game,
        optimum: Rational::new(best.wins, total),
        wins: best.wins,
        total,
        witness: space.to_table(game, &best.profile)?,
        strategies_examined: best.examined,
        pruned,
    })
}

pub fn search_optimal_simultaneous(n: usize, q: u32, objective: Objective) -> Result<SearchResult> {
    search_optimal_simultaneous_with(n, q, objective, Execution::default())
}

/// Best win probability over simultaneous profiles with full sight of the
/// other hats, for the Ebert or majority objective.
pub fn search_optimal_simultaneous_with(n: usize, q: u32, objective: Objective, exec: Execution) -> Result<SearchResult> {
    let game = match objective {
        Objective::AtLeastOneCorrectNoneWrong => GameSpec::ebert(n, q)?,
        Objective::MajorityCorrect => GameSpec::majority(n, q)?,
        Objective::CountCorrect => bail!(Unsupported, "simultaneous search covers the Ebert and majority objectives"),
    };
    let space = SimSpace::new(game)?;
    let best = simultaneous::search(&space, MAX_SEARCH_PROFILES, exec)?;
    let total = game.total_configurations();
    Ok(SearchResult {
        game,
        optimum: Rational::new(best.wins, total),
        wins: best.wins,
        total,
        witness: space.to_table(&best.profile)?,
        strategies_examined: best.examined,
        pruned: 0,
    })
}

pub fn max_first_player_passes(n: usize, q: u32) -> Result<BetaResult> {
    max_first_player_passes_with(n, q, Execution::default())
}

/// Most first-player views mapped to a pass among optimal restricted
/// profiles, next to the bound `q^(n-1) - (q-1)^(n-1)`.
pub fn max_first_player_passes_with(n: usize, q: u32, exec: Execution) -> Result<BetaResult> {
    let game = GameSpec::new_line(n, q)?;
    let space = SeqSpace::new(n, q);
    let best = search_restricted(&space, MAX_SEARCH_PROFILES, exec)?;
    let q64 = q as u64;
    Ok(BetaResult {
        n,
        q,
        beta: best.max_first_passes,
        bound: q64.pow(n as u32 - 1) - (q64 - 1).pow(n as u32 - 1),
        optimum: Rational::new(best.wins, game.total_configurations()),
        strategies_examined: best.examined,
    })
}

/// True when no player after the first ever guesses wrong.
pub fn verify_restricted(strategy: &StrategyTable) -> Result<bool> {
    let game = strategy.game();
    if game.visibility() != Visibility::AheadOnly || game.objective() != Objective::AtLeastOneCorrectNoneWrong {
        bail!(Precondition, "restricted strategies are defined for the new line game, not {game}");
    }
    let total = game.total_configurations();
    if total > MAX_EXACT_CONFIGURATIONS {
        bail!(Capacity, "{game} has {total} configurations, above the exact limit of {MAX_EXACT_CONFIGURATIONS}");
    }
    for k in 0..total {
        let cfg = unrank_configuration(k, game.n(), game.q()).expect("rank below q^n");
        let t = strategy.play_unchecked(&cfg);
        let wrong_later = t.responses[1..]
            .iter()
            .zip(&t.correct[1..])
            .any(|(r, &ok)| *r != Response::Pass && !ok);
        if wrong_later {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::min_covering_code;
    use crate::eval::evaluate_exact;
    use crate::strategies::gray_strategy;

    fn gray_value(n: u32, q: u64) -> Rational {
        let total = q.pow(n);
        Rational::new(total - (q - 1).pow(n), total)
    }

    #[test]
    fn sequential_optima() {
        for (n, q) in [(1, 2), (2, 2), (3, 2), (4, 2), (2, 3), (2, 4)] {
            let r = search_optimal_sequential(n, q, true).unwrap();
            assert_eq!(r.optimum, gray_value(n as u32, q as u64), "n={n} q={q}");
            assert_eq!(evaluate_exact(&r.game, &r.witness).unwrap().probability, r.optimum);
            assert!(verify_restricted(&r.witness).unwrap());
        }
    }

    #[test]
    fn pruning_keeps_optimum() {
        for (n, q) in [(2, 2), (3, 2), (2, 3)] {
            let full = search_optimal_sequential(n, q, false).unwrap();
            let pruned = search_optimal_sequential(n, q, true).unwrap();
            assert_eq!(full.optimum, pruned.optimum);
            assert_eq!(full.pruned, 0);
            assert_eq!(
                pruned.strategies_examined as u128 + pruned.pruned,
                (q as u128 + 1).pow(SeqSpace::new(n, q).digits as u32)
            );
            assert_eq!(evaluate_exact(&full.game, &full.witness).unwrap().probability, full.optimum);
        }
    }

    #[test]
    fn execution_modes_agree() {
        let a = search_optimal_sequential_with(3, 2, true, Execution::Sequential).unwrap();
        let b = search_optimal_sequential_with(3, 2, true, Execution::default()).unwrap();
        assert_eq!(a.witness, b.witness);
        assert_eq!(a.strategies_examined, b.strategies_examined);
        let a = search_optimal_sequential_with(2, 3, false, Execution::Sequential).unwrap();
        let b = search_optimal_sequential_with(2, 3, false, Execution::default()).unwrap();
        assert_eq!(a.witness, b.witness);
    }

    #[test]
    fn beta_meets_bound() {
        for (n, q, beta) in [(2, 2, 1), (3, 2, 3), (2, 3, 1)] {
            let r = max_first_player_passes(n, q).unwrap();
            assert_eq!((r.beta, r.bound), (beta, beta as u64));
        }
    }

    #[test]
    fn simultaneous_optima() {
        let ebert = search_optimal_simultaneous(3, 2, Objective::AtLeastOneCorrectNoneWrong).unwrap();
        assert_eq!(ebert.optimum, Rational::new(3, 4));
        let cover = min_covering_code(3, 1).unwrap();
        assert_eq!(ebert.optimum, Rational::new(8 - cover.size as u64, 8));
        let majority = search_optimal_simultaneous(3, 2, Objective::MajorityCorrect).unwrap();
        assert_eq!(majority.optimum, Rational::new(3, 4));
        for r in [&ebert, &majority] {
            assert_eq!(evaluate_exact(&r.game, &r.witness).unwrap().probability, r.optimum);
        }
        let single = search_optimal_simultaneous(1, 2, Objective::AtLeastOneCorrectNoneWrong).unwrap();
        assert_eq!(single.optimum, Rational::new(1, 2));
    }

    #[test]
    fn ebert_matches_covering_for_small_n() {
        for n in 1..=3 {
            let r = search_optimal_simultaneous(n, 2, Objective::AtLeastOneCorrectNoneWrong).unwrap();
            let cover = min_covering_code(n, 1).unwrap();
            let total = 1u64 << n;
            assert_eq!(r.optimum, Rational::new(total - cover.size as u64, total), "n={n}");
        }
    }

    #[test]
    fn guards() {
        assert!(matches!(search_optimal_sequential(5, 3, false), Err(crate::HatError::Capacity(_))));
        assert!(matches!(search_optimal_simultaneous(4, 2, Objective::AtLeastOneCorrectNoneWrong), Err(crate::HatError::Capacity(_))));
        assert!(matches!(search_optimal_simultaneous(3, 2, Objective::CountCorrect), Err(crate::HatError::Unsupported(_))));
    }

    #[test]
    fn restricted_examples() {
        for (n, q) in [(1, 2), (3, 2), (3, 3), (4, 4)] {
            assert!(verify_restricted(&gray_strategy(n, q).unwrap()).unwrap());
        }
        let game = GameSpec::new_line(3, 2).unwrap();
        let reckless = StrategyTable::from_fn(game, |v| if v.observer == 2 { Response::guess(0) } else { Response::Pass }).unwrap();
        assert!(!verify_restricted(&reckless).unwrap());
        let single = StrategyTable::from_fn(GameSpec::new_line(1, 3).unwrap(), |_| Response::guess(2)).unwrap();
        assert!(verify_restricted(&single).unwrap());
        let ebert = crate::strategies::ebert_three_player().unwrap();
        assert!(verify_restricted(&ebert).is_err());
    }
}
