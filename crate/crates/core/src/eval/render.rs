use std::fmt::Write as _;

use crate::game::{Response, Trace};

use super::EvalReport;

const CELL: usize = 6;

fn cell(out: &mut String, text: &str) {
    let _ = write!(out, "{text:<CELL$} ");
}

/// Plain-text table in rank order. Passes show as `-`; a `*` marks a
/// correct guess.
pub fn render_table(report: &EvalReport) -> String {
    let n = report.game.n();
    let mut out = format!("{} strategy {}\n", report.game, report.strategy);
    let width = (CELL + 1) * n;
    let _ = writeln!(out, "{:<width$}| {:<width$}| outcome", "configuration", "guesses");
    for t in report.traces.as_deref().unwrap_or_default() {
        for c in t.configuration.colours() {
            cell(&mut out, &c.name());
        }
        out.push_str("| ");
        for (r, ok) in t.responses.iter().zip(&t.correct) {
            let text = match r {
                Response::Pass => "-".to_string(),
                Response::Guess(c) if *ok => format!("*{}", c.name()),
                Response::Guess(c) => c.name(),
            };
            cell(&mut out, &text);
        }
        let _ = writeln!(out, "| {}", t.outcome.word());
    }
    let _ = write!(out, "wins {} / {} = {}", report.wins, report.total, report.probability);
    if let Some(mean) = report.mean_correct {
        let _ = write!(out, ", mean correct {mean}");
    }
    out.push('\n');
    out
}

fn csv_row(t: &Trace) -> String {
    let mut fields = vec![t.configuration.to_string()];
    fields.extend(t.responses.iter().map(|r| r.symbol().to_string()));
    fields.extend(t.correct.iter().map(|&b| (b as u8).to_string()));
    fields.push(t.outcome.word().to_string());
    fields.join(",")
}

/// CSV with header `configuration,r1..rn,correct1..correctn,outcome`.
pub fn render_csv(report: &EvalReport) -> String {
    let n = report.game.n();
    let mut header = vec!["configuration".to_string()];
    header.extend((1..=n).map(|i| format!("r{i}")));
    header.extend((1..=n).map(|i| format!("correct{i}")));
    header.push("outcome".to_string());
    let mut out = header.join(",");
    out.push('\n');
    for t in report.traces.as_deref().unwrap_or_default() {
        out.push_str(&csv_row(t));
        out.push('\n');
    }
    out
}
