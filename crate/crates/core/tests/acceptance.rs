//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the process exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use hatlab_core::codes::{hamming_code, min_covering_code, Code};
use hatlab_core::eval::{evaluate_exact, evaluate_monte_carlo, evaluate_monte_carlo_with, trace_table, Rational};
use hatlab_core::search::{max_first_player_passes, search_optimal_sequential, search_optimal_simultaneous};
use hatlab_core::strategies::{
    berlekamp_orientation, covering_code_strategy, cyclic_majority_strategy, ebert_three_player, gray_strategy,
    line_sum_strategy, orientation_majority_strategy,
};
use hatlab_core::{Configuration, Execution, Objective, Outcome, Response, StrategyTable};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check, Duration);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fail<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn responses(text: &str) -> Vec<Response> {
    text.chars()
        .map(|c| match c {
            '-' => Response::Pass,
            d => Response::guess(d.to_digit(10).unwrap() as u8),
        })
        .collect()
}

/// Rows of (configuration, responses, win), brown = 1 and gray = 0, in the
/// order they are usually printed.
fn check_rows(strategy: &StrategyTable, rows: &[(&str, &str, bool)]) -> Check {
    let report = trace_table(strategy.game(), strategy).map_err(fail)?;
    let traces = report.traces.as_ref().unwrap();
    ensure(traces.len() == rows.len(), || format!("{} rows, expected {}", traces.len(), rows.len()))?;
    for &(cfg, resp, win) in rows {
        let cfg = Configuration::parse(cfg, 2).map_err(fail)?;
        let t = traces.iter().find(|t| t.configuration == cfg).ok_or(format!("no row for {cfg}"))?;
        ensure(t.responses == responses(resp), || format!("row {cfg}: responses {:?}", t.responses))?;
        let outcome = if win { Outcome::Win } else { Outcome::Lose };
        ensure(t.outcome == outcome, || format!("row {cfg}: outcome {}", t.outcome.word()))?;
    }
    ensure(report.probability == Rational::new(6, 8), || format!("probability {}", report.probability))?;
    Ok(format!("8 rows match, probability {}", report.probability))
}

fn ebert_table() -> Check {
    let rows = [
        ("111", "000", false),
        ("110", "--0", true),
        ("101", "-0-", true),
        ("100", "1--", true),
        ("011", "0--", true),
        ("010", "-1-", true),
        ("001", "--1", true),
        ("000", "111", false),
    ];
    check_rows(&ebert_three_player().map_err(fail)?, &rows)
}

fn majority_table() -> Check {
    let rows = [
        ("111", "000", false),
        ("110", "010", true),
        ("101", "100", true),
        ("100", "110", true),
        ("011", "001", true),
        ("010", "011", true),
        ("001", "101", true),
        ("000", "111", false),
    ];
    check_rows(&cyclic_majority_strategy().map_err(fail)?, &rows)
}

fn hamming_sweep() -> Check {
    for m in 2..=4 {
        let n = (1u64 << m) - 1;
        let s = covering_code_strategy(&hamming_code(m).map_err(fail)?).map_err(fail)?;
        let r = evaluate_exact(s.game(), &s).map_err(fail)?;
        ensure(r.total == 1 << n && r.probability == Rational::new(n, n + 1), || {
            format!("n={n}: {} over {} configurations", r.probability, r.total)
        })?;
    }
    Ok("3/4, 7/8, 15/16 at n = 3, 7, 15".into())
}

fn orientation() -> Check {
    for m in 2..=3 {
        let o = berlekamp_orientation(m).map_err(fail)?;
        let n = o.n() as u64;
        for v in 0..1u64 << n {
            let expected = if o.codewords().contains(&v) { 0 } else { (n as usize).div_ceil(2) };
            ensure(o.indegree(v) == expected, || format!("n={n}: indegree({v}) = {}", o.indegree(v)))?;
        }
        let s = orientation_majority_strategy(&o).map_err(fail)?;
        let r = evaluate_exact(s.game(), &s).map_err(fail)?;
        ensure(r.probability == Rational::new(n, n + 1), || format!("n={n}: probability {}", r.probability))?;
    }
    Ok("indegrees 0 and (n+1)/2, probabilities 3/4 and 7/8".into())
}

fn line_sum() -> Check {
    for n in 1..=5usize {
        for q in 2..=4u32 {
            let s = line_sum_strategy(n, q).map_err(fail)?;
            let r = trace_table(s.game(), &s).map_err(fail)?;
            for t in r.traces.as_ref().unwrap() {
                ensure(t.correct[1..].iter().all(|&c| c), || format!("n={n} q={q}: {} has a later miss", t.configuration))?;
            }
            let q64 = q as u64;
            let mean = Rational::new((n as u64 - 1) * q64 + 1, q64);
            ensure(r.mean_correct == Some(mean), || format!("n={n} q={q}: mean {:?}", r.mean_correct))?;
        }
    }
    Ok("15 sweeps, later players always right, mean (n-1)+1/q".into())
}

fn gray() -> Check {
    let mut sweeps = 0;
    for n in 1..=5u32 {
        for q in 2..=4u64 {
            let s = gray_strategy(n as usize, q as u32).map_err(fail)?;
            let r = evaluate_exact(s.game(), &s).map_err(fail)?;
            let total = q.pow(n);
            ensure(r.probability == Rational::new(total - (q - 1).pow(n), total), || {
                format!("n={n} q={q}: {}", r.probability)
            })?;
            sweeps += 1;
        }
    }
    Ok(format!("{sweeps} exact sweeps"))
}

fn sequential_optima() -> Check {
    for (n, q, num, den) in [(2, 2, 3, 4), (3, 2, 7, 8), (4, 2, 15, 16), (2, 3, 5, 9)] {
        let r = search_optimal_sequential(n, q, true).map_err(fail)?;
        ensure(r.optimum == Rational::new(num, den), || format!("({n},{q}) pruned: {}", r.optimum))?;
    }
    for (n, q) in [(2, 2), (3, 2), (2, 3)] {
        let full = search_optimal_sequential(n, q, false).map_err(fail)?;
        let pruned = search_optimal_sequential(n, q, true).map_err(fail)?;
        ensure(full.optimum == pruned.optimum, || format!("({n},{q}): {} vs {}", full.optimum, pruned.optimum))?;
    }
    let start = Instant::now();
    let r = search_optimal_sequential(3, 3, true).map_err(fail)?;
    let took = start.elapsed();
    ensure(r.optimum == Rational::new(19, 27), || format!("(3,3) pruned: {}", r.optimum))?;
    ensure(took < Duration::from_secs(300), || format!("(3,3) took {took:?}"))?;
    let check = evaluate_exact(&r.game, &r.witness).map_err(fail)?;
    ensure(check.probability == r.optimum, || "(3,3) witness disagrees".into())?;
    Ok(format!("all optima exact, pruning agrees; (3,3) in {took:.2?} over {} profiles", r.strategies_examined))
}

fn beta() -> Check {
    for (n, q) in [(2, 2), (3, 2), (2, 3)] {
        let r = max_first_player_passes(n, q).map_err(fail)?;
        ensure(r.beta as u64 == r.bound, || format!("({n},{q}): beta {} bound {}", r.beta, r.bound))?;
    }
    Ok("beta = bound at (2,2), (3,2), (2,3)".into())
}

fn simultaneous() -> Check {
    let ebert = search_optimal_simultaneous(3, 2, Objective::AtLeastOneCorrectNoneWrong).map_err(fail)?;
    let majority = search_optimal_simultaneous(3, 2, Objective::MajorityCorrect).map_err(fail)?;
    let cover = min_covering_code(3, 1).map_err(fail)?;
    ensure(ebert.optimum == Rational::new(3, 4), || format!("ebert {}", ebert.optimum))?;
    ensure(majority.optimum == Rational::new(3, 4), || format!("majority {}", majority.optimum))?;
    ensure(ebert.optimum == Rational::new(8 - cover.size as u64, 8), || "covering mismatch".into())?;
    Ok(format!("ebert {} majority {} = 1 - {}/8", ebert.optimum, majority.optimum, cover.size))
}

/// Smallest covering set found by trying every subset of `{0,1}^n`.
fn subset_oracle(n: usize) -> usize {
    let words = 1u32 << n;
    (1u64..1 << words)
        .filter(|set| {
            let code = Code::from_ranks(n, 2, (0..words as u64).filter(|w| set >> w & 1 == 1)).unwrap();
            code.clone().verify_covering(1).unwrap().covered
        })
        .map(|set| set.count_ones() as usize)
        .min()
        .unwrap()
}

fn covering() -> Check {
    for (n, size) in [(3, 2), (4, 4)] {
        let mut r = min_covering_code(n, 1).map_err(fail)?;
        ensure(r.size == size, || format!("n={n}: size {}", r.size))?;
        ensure(r.witness.len() == size, || format!("n={n}: witness has {} words", r.witness.len()))?;
        ensure(r.witness.verify_covering(1).map_err(fail)?.covered, || format!("n={n}: witness fails"))?;
        let oracle = subset_oracle(n);
        ensure(oracle == size, || format!("n={n}: oracle says {oracle}"))?;
    }
    Ok("sizes 2 and 4, witnesses cover, subset oracle agrees".into())
}

fn monte_carlo() -> Check {
    let s = gray_strategy(3, 2).map_err(fail)?;
    let game = *s.game();
    let mut covering = 0;
    for seed in 1..=20 {
        if evaluate_monte_carlo(&game, &s, 100_000, seed).map_err(fail)?.covers(7.0 / 8.0) {
            covering += 1;
        }
    }
    ensure(covering >= 18, || format!("only {covering}/20 intervals cover 7/8"))?;
    let reference = evaluate_monte_carlo_with(&game, &s, 100_000, 7, Execution::Sequential).map_err(fail)?;
    ensure(evaluate_monte_carlo(&game, &s, 100_000, 7).map_err(fail)? == reference, || "repeat differs".into())?;
    #[cfg(feature = "parallel")]
    for workers in [1, 2, 4, 8] {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build().map_err(fail)?;
        let r = pool.install(|| evaluate_monte_carlo_with(&game, &s, 100_000, 7, Execution::Parallel)).map_err(fail)?;
        ensure(r == reference, || format!("{workers} workers differ"))?;
    }
    Ok(format!("{covering}/20 intervals cover 7/8, reports identical across runs and workers"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("ebert three-player table", ebert_table, Duration::from_secs(1)),
        ("cyclic majority table", majority_table, Duration::from_secs(1)),
        ("hamming sweep", hamming_sweep, Duration::from_secs(10)),
        ("orientation strategy", orientation, Duration::from_secs(5)),
        ("line-sum strategy", line_sum, Duration::from_secs(10)),
        ("gray strategy values", gray, Duration::from_secs(10)),
        ("sequential optima", sequential_optima, Duration::from_secs(330)),
        ("first-player pass bound", beta, Duration::from_secs(60)),
        ("simultaneous optima", simultaneous, Duration::from_secs(120)),
        ("covering search", covering, Duration::from_secs(60)),
        ("monte carlo consistency", monte_carlo, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let took = start.elapsed();
        let result = result.and_then(|msg| {
            if took <= *limit {
                Ok(msg)
            } else {
                Err(format!("{msg}; took {took:.2?}, limit {limit:?}"))
            }
        });
        match result {
            Ok(msg) => println!("[PASS] criterion {}: {name} ({took:.2?}) {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("[FAIL] criterion {}: {name} ({took:.2?}) {msg}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
