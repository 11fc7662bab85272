//! Strategy generators for every named strategy, plus the table type they
//! produce.

pub mod orientation;
pub mod table;

pub use orientation::{berlekamp_orientation, orientation_from_code, Orientation};
pub use table::{play, StrategyTable};

use crate::codes::{hamming_code, Code};
use crate::error::{bail, Result};
use crate::game::{Colour, GameSpec, Response, View};

/// Rank of the binary word seen by `view` with the observer's own hat set
/// to `own`.
fn completion_rank(view: &View, n: usize, own: u8) -> u64 {
    let mut k = 0u64;
    for p in 1..=n {
        let c = if p == view.observer { own } else { view.colour_of(p).map_or(0, |c| c.0) };
        k = (k << 1) | c as u64;
    }
    k
}

/// Three players, two colours: guess the opposite colour on seeing two equal
/// hats, otherwise pass.
pub fn ebert_three_player() -> Result<StrategyTable> {
    StrategyTable::from_fn(GameSpec::ebert(3, 2)?, |v| match v.visible[..] {
        [(_, a), (_, b)] if a == b => Response::guess(1 - a.0),
        _ => Response::Pass,
    })
}

/// Ebert's game driven by a binary covering code of radius 1: a player whose
/// hat could complete a codeword guesses the other colour.
pub fn covering_code_strategy(code: &Code) -> Result<StrategyTable> {
    if code.q() != 2 {
        bail!(Precondition, "covering-code strategies need a binary code");
    }
    if !code.radius().is_some_and(|r| r <= 1) {
        bail!(Precondition, "the code's covering radius 1 has not been verified");
    }
    let n = code.n();
    StrategyTable::from_fn(GameSpec::ebert(n, 2)?, |v| {
        let zero = code.contains_rank(completion_rank(v, n, 0));
        let one = code.contains_rank(completion_rank(v, n, 1));
        match (zero, one) {
            (true, false) => Response::guess(1),
            (false, true) => Response::guess(0),
            _ => Response::Pass,
        }
    })
}

/// Hats-on-a-line: the first player announces the sum of the hats ahead mod
/// `q`; everyone after recovers their own colour from it.
pub fn line_sum_strategy(n: usize, q: u32) -> Result<StrategyTable> {
    let game = GameSpec::line(n, q)?;
    let q = q as u64;
    StrategyTable::from_fn(game, move |v| {
        let ahead: u64 = v.visible.iter().map(|&(_, c)| c.0 as u64).sum();
        if v.observer == 1 {
            return Response::guess((ahead % q) as u8);
        }
        let heard: Vec<u64> = v
            .heard
            .iter()
            .map(|r| match r {
                Response::Guess(c) => c.0 as u64,
                Response::Pass => 0,
            })
            .collect();
        // heard[0] is the announced sum, heard[1..] are c_2..c_{j-1}
        let behind: u64 = heard[1..].iter().sum();
        let own = (heard[0] + q - (behind + ahead) % q) % q;
        Response::guess(own as u8)
    })
}

/// Pass on seeing a gray hat ahead, otherwise guess gray. Once someone has
/// guessed, the game is settled and everyone after passes.
pub fn gray_strategy(n: usize, q: u32) -> Result<StrategyTable> {
    StrategyTable::from_fn(GameSpec::new_line(n, q)?, |v| {
        if v.sees(Colour::GRAY) || v.heard.iter().any(|&r| r != Response::Pass) {
            Response::Pass
        } else {
            Response::Guess(Colour::GRAY)
        }
    })
}

/// Majority game, three players: each votes the opposite of the next
/// player's hat, cyclically.
pub fn cyclic_majority_strategy() -> Result<StrategyTable> {
    StrategyTable::from_fn(GameSpec::majority(3, 2)?, |v| {
        let next = v.observer % 3 + 1;
        let seen = v.colour_of(next).expect("all others are visible");
        Response::guess(1 - seen.0)
    })
}

/// Majority game from a cube orientation: each view is an edge of the cube
/// and the player votes for their coordinate of the edge's head.
pub fn orientation_majority_strategy(orientation: &Orientation) -> Result<StrategyTable> {
    let n = orientation.n();
    StrategyTable::from_fn(GameSpec::majority(n, 2)?, |v| {
        let low = completion_rank(v, n, 0);
        let head = orientation.head(low, v.observer);
        Response::guess(((head >> (n - v.observer)) & 1) as u8)
    })
}

/// Built-in strategy names and what they need.
pub const BUILTIN_STRATEGIES: &[(&str, &str)] = &[
    ("ebert3", "ebert, n=3, q=2: guess the opposite of two equal hats, else pass"),
    ("hamming", "ebert, n=3|7|15, q=2: Hamming-code covering strategy"),
    ("line-sum", "line, any n, q: announce the sum ahead mod q"),
    ("gray", "newline, any n, q: pass on seeing gray, else guess gray"),
    ("cyclic", "majority, n=3, q=2: vote the opposite of the next player's hat"),
    ("berlekamp", "majority, n=3|7, q=2: Hamming-code cube orientation"),
];

/// Build the named strategy for `game`.
pub fn builtin(name: &str, game: &GameSpec) -> Result<StrategyTable> {
    let (n, q) = (game.n(), game.q());
    let hamming_m = || match n {
        3 => Ok(2),
        7 => Ok(3),
        15 => Ok(4),
        _ => Err(crate::HatError::Unsupported(format!("no Hamming code of length {n}"))),
    };
    let table = match name {
        "ebert3" => ebert_three_player()?,
        "hamming" => covering_code_strategy(&hamming_code(hamming_m()?)?)?,
        "line-sum" => line_sum_strategy(n, q)?,
        "gray" => gray_strategy(n, q)?,
        "cyclic" => cyclic_majority_strategy()?,
        "berlekamp" => orientation_majority_strategy(&berlekamp_orientation(hamming_m()?)?)?,
        other => bail!(Domain, "unknown strategy {other:?}"),
    };
    if table.game() != game {
        bail!(Precondition, "strategy {name:?} plays {}, not {game}", table.game());
    }
    Ok(table)
}
