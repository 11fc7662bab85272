//! Exhaustive search over simultaneous profiles where everyone sees all
//! other hats.
//!
//! A profile is a digit vector with player 1's `q^(n-1)` views first. Under
//! the Ebert objective digit 0 passes and `c + 1` guesses `c`; under the
//! majority objective digit `c` guesses `c`.

use crate::error::{bail, Result};
use crate::exec::{chunk_for, map_reduce, Execution};
use crate::game::{decide, GameSpec, Objective, Response};
use crate::strategies::StrategyTable;

use super::sequential::{decode, increment, Best};

pub(crate) struct SimSpace {
    pub game: GameSpec,
    n: usize,
    q: usize,
    views: usize,
    pub radix: u64,
    pub digits: usize,
    /// `view_of[k * n + p]`: view index of player `p` at configuration `k`.
    view_of: Vec<usize>,
    /// Own colour of player `p` at configuration `k`.
    colour_of: Vec<u8>,
}

impl SimSpace {
    pub fn new(game: GameSpec) -> Result<Self> {
        let radix = match game.objective() {
            Objective::AtLeastOneCorrectNoneWrong => game.q() as u64 + 1,
            Objective::MajorityCorrect => game.q() as u64,
            Objective::CountCorrect => bail!(Unsupported, "simultaneous search covers the Ebert and majority objectives"),
        };
        let (n, q) = (game.n(), game.q() as usize);
        let views = q.pow(n as u32 - 1);
        let total = game.total_configurations();
        let mut view_of = Vec::with_capacity(total as usize * n);
        let mut colour_of = Vec::with_capacity(total as usize * n);
        for k in 0..total {
            let c = decode(k, q as u64, n);
            for p in 0..n {
                let v = (0..n).filter(|&i| i != p).fold(0usize, |a, i| a * q + c[i] as usize);
                view_of.push(v);
                colour_of.push(c[p]);
            }
        }
        Ok(SimSpace { game, n, q, views, radix, digits: n * views, view_of, colour_of })
    }

    fn response(&self, digit: u8) -> Option<u8> {
        match self.game.objective() {
            Objective::AtLeastOneCorrectNoneWrong => digit.checked_sub(1),
            _ => Some(digit),
        }
    }

    pub fn wins(&self, profile: &[u8]) -> u64 {
        let objective = self.game.objective();
        let mut wins = 0;
        for (views, colours) in self.view_of.chunks_exact(self.n).zip(self.colour_of.chunks_exact(self.n)) {
            let (mut right, mut wrong) = (0, 0);
            for p in 0..self.n {
                if let Some(g) = self.response(profile[p * self.views + views[p]]) {
                    if g == colours[p] {
                        right += 1;
                    } else {
                        wrong += 1;
                    }
                }
            }
            wins += decide(objective, self.n, right, wrong).is_win() as u64;
        }
        wins
    }

    pub fn to_table(&self, profile: &[u8]) -> Result<StrategyTable> {
        StrategyTable::from_fn(self.game, |v| {
            let idx = v.visible.iter().fold(0usize, |a, &(_, c)| a * self.q + c.0 as usize);
            match self.response(profile[(v.observer - 1) * self.views + idx]) {
                Some(g) => Response::guess(g),
                None => Response::Pass,
            }
        })
    }

    pub fn size(&self) -> Option<u128> {
        (self.radix as u128).checked_pow(self.digits as u32)
    }
}

pub(crate) fn search(space: &SimSpace, limit: u64, exec: Execution) -> Result<Best> {
    let total = match space.size() {
        Some(t) if t <= limit as u128 => t as u64,
        _ => bail!(
            Capacity,
            "{} has {}^{} simultaneous profiles, above the limit of {limit}",
            space.game,
            space.radix,
            space.digits
        ),
    };
    let best = map_reduce(
        exec,
        total,
        chunk_for(total),
        None,
        |range| {
            let mut profile = decode(range.start, space.radix, space.digits);
            let mut best: Option<Best> = None;
            for _ in range.clone() {
                let wins = space.wins(&profile);
                if best.as_ref().is_none_or(|b| wins > b.wins) {
                    best = Some(Best { wins, profile: profile.clone(), max_first_passes: 0, examined: 0 });
                }
                increment(&mut profile, space.radix as u8);
            }
            if let Some(b) = best.as_mut() {
                b.examined = range.end - range.start;
            }
            best
        },
        Best::merge,
    );
    Ok(best.expect("the profile space is never empty"))
}
