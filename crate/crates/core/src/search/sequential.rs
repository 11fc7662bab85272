//! Exhaustive search over sequential profiles of the new hats-on-a-line game.
//!
//! A profile gives each player `j` a map from the `q^(n-j)` hats ahead to a
//! pass or a guess. Heard responses carry no extra information: until the
//! first guess everyone has heard only passes, and the first guess settles
//! the game. Profiles are digit vectors, player 1's views first and each
//! player's views in rank order, with digit 0 for a pass and `c + 1` for a
//! guess of colour `c`. Vector order is the lexicographic profile order.

use crate::error::{bail, Result};
use crate::exec::{chunk_for, map_reduce, Execution};
use crate::game::{GameSpec, Response};
use crate::strategies::StrategyTable;

/// Shape of the profile space for `(n, q)`.
#[derive(Clone, Debug)]
pub(crate) struct SeqSpace {
    pub n: usize,
    pub q: u64,
    /// Views per player, `q^(n-1-p)` for 0-based player `p`.
    pub views: Vec<usize>,
    pub offsets: Vec<usize>,
    pub digits: usize,
}

impl SeqSpace {
    pub fn new(n: usize, q: u32) -> Self {
        let q = q as u64;
        let views: Vec<usize> = (0..n).map(|p| q.pow((n - 1 - p) as u32) as usize).collect();
        let offsets = views
            .iter()
            .scan(0usize, |acc, &v| {
                let o = *acc;
                *acc += v;
                Some(o)
            })
            .collect();
        let digits = views.iter().sum();
        SeqSpace { n, q, views, offsets, digits }
    }

    /// Size of the unrestricted space, `(q+1)^digits`, if it fits.
    pub fn full_size(&self) -> Option<u128> {
        (self.q as u128 + 1).checked_pow(self.digits as u32)
    }

    /// Winning configurations under `profile`, computed from the last player
    /// backwards: a suffix of hats wins if its first guesser is right.
    pub fn wins(&self, profile: &[u8], scratch: &mut Scratch) -> u64 {
        let q = self.q as usize;
        scratch.next.clear();
        scratch.next.push(0);
        for p in (1..self.n).rev() {
            let views = self.views[p];
            let row = &profile[self.offsets[p]..self.offsets[p] + views];
            scratch.cur.clear();
            scratch.cur.resize(q * views, 0);
            for (rest, &d) in row.iter().enumerate() {
                for c in 0..q {
                    scratch.cur[c * views + rest] = if d == 0 { scratch.next[rest] } else { (d as usize == c + 1) as u8 };
                }
            }
            std::mem::swap(&mut scratch.cur, &mut scratch.next);
        }
        // player 1: a guess wins on exactly one of the q extensions of its view
        profile[..self.views[0]]
            .iter()
            .zip(&scratch.next)
            .map(|(&d, &later)| if d == 0 { self.q * later as u64 } else { 1 })
            .sum()
    }

    /// Strategy table playing `profile`: the first player to guess decides,
    /// so players respond only while every earlier response was a pass.
    pub fn to_table(&self, game: GameSpec, profile: &[u8]) -> Result<StrategyTable> {
        StrategyTable::from_fn(game, |v| {
            if v.heard.iter().any(|&r| r != Response::Pass) {
                return Response::Pass;
            }
            let idx = v.visible.iter().fold(0usize, |acc, &(_, c)| acc * self.q as usize + c.0 as usize);
            match profile[self.offsets[v.observer - 1] + idx] {
                0 => Response::Pass,
                d => Response::guess(d - 1),
            }
        })
    }
}

#[derive(Default)]
pub(crate) struct Scratch {
    cur: Vec<u8>,
    next: Vec<u8>,
}

/// Best profile seen so far, with lexicographic tie-breaking.
#[derive(Clone, Debug)]
pub(crate) struct Best {
    pub wins: u64,
    pub profile: Vec<u8>,
    /// Most first-player passes among profiles reaching `wins`.
    pub max_first_passes: usize,
    pub examined: u64,
}

impl Best {
    fn offer(slot: &mut Option<Best>, wins: u64, profile: &[u8], first_passes: usize) {
        match slot {
            Some(b) if wins < b.wins => {}
            Some(b) if wins == b.wins => b.max_first_passes = b.max_first_passes.max(first_passes),
            _ => {
                *slot = Some(Best { wins, profile: profile.to_vec(), max_first_passes: first_passes, examined: 0 })
            }
        }
    }

    pub fn merge(a: Option<Best>, b: Option<Best>) -> Option<Best> {
        match (a, b) {
            (None, x) | (x, None) => x,
            (Some(a), Some(b)) => {
                let examined = a.examined + b.examined;
                let mut keep = match a.wins.cmp(&b.wins) {
                    std::cmp::Ordering::Greater => a,
                    std::cmp::Ordering::Less => b,
                    std::cmp::Ordering::Equal => {
                        let passes = a.max_first_passes.max(b.max_first_passes);
                        let mut lower = if a.profile <= b.profile { a } else { b };
                        lower.max_first_passes = passes;
                        lower
                    }
                };
                keep.examined = examined;
                Some(keep)
            }
        }
    }
}

/// Mixed-radix digits of `index`, most significant first.
pub(crate) fn decode(mut index: u64, radix: u64, len: usize) -> Vec<u8> {
    let mut digits = vec![0u8; len];
    for d in digits.iter_mut().rev() {
        *d = (index % radix) as u8;
        index /= radix;
    }
    digits
}

/// Step to the next digit vector in lexicographic order.
pub(crate) fn increment(digits: &mut [u8], radix: u8) {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < radix {
            return;
        }
        *d = 0;
    }
}

/// Visit every profile.
pub(crate) fn search_full(space: &SeqSpace, limit: u64, exec: Execution) -> Result<Best> {
    let total = match space.full_size() {
        Some(t) if t <= limit as u128 => t as u64,
        _ => bail!(
            Capacity,
            "the full profile space for n={}, q={} has (q+1)^{} profiles, above the limit of {limit}",
            space.n,
            space.q,
            space.digits
        ),
    };
    let radix = space.q + 1;
    let best = map_reduce(
        exec,
        total,
        chunk_for(total),
        None,
        |range| {
            let mut scratch = Scratch::default();
            let mut profile = decode(range.start, radix, space.digits);
            let mut best = None;
            for _ in range.clone() {
                let wins = space.wins(&profile, &mut scratch);
                let passes = profile[..space.views[0]].iter().filter(|&&d| d == 0).count();
                Best::offer(&mut best, wins, &profile, passes);
                increment(&mut profile, radix as u8);
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

/// Upper bound on the restricted enumeration: every first-player choice,
/// and at most two options per view for each later player.
pub(crate) fn restricted_bound(space: &SeqSpace) -> Option<u128> {
    let first = (space.q as u128 + 1).checked_pow(space.views[0] as u32)?;
    let later: usize = space.views[1..].iter().sum();
    first.checked_mul(2u128.checked_pow(later as u32)?)
}

struct Restricted<'a> {
    space: &'a SeqSpace,
    profile: Vec<u8>,
    first_passes: usize,
    scratch: Scratch,
    best: Option<Best>,
    examined: u64,
}

impl Restricted<'_> {
    /// Enumerate players `p..n` given `reach`, the hat suffixes
    /// `(c_p, ..., c_n)` on which everyone before `p` passed.
    ///
    /// A later player may guess at a view only when exactly one own colour
    /// is reachable there, and then must guess it; views that cannot be
    /// reached are fixed to pass.
    fn descend(&mut self, p: usize, reach: &[bool]) {
        let space = self.space;
        if p == space.n {
            let wins = space.wins(&self.profile, &mut self.scratch);
            self.examined += 1;
            Best::offer(&mut self.best, wins, &self.profile, self.first_passes);
            return;
        }
        let views = space.views[p];
        let q = space.q as usize;
        let off = space.offsets[p];
        let mut free: Vec<(usize, u8)> = Vec::new();
        for t in 0..views {
            let mut reachable = (0..q).filter(|&x| reach[x * views + t]);
            if let (Some(x), None) = (reachable.next(), reachable.next()) {
                free.push((t, x as u8 + 1));
            }
            self.profile[off + t] = 0;
        }
        let combos = 1u64 << free.len();
        let mut next = vec![false; views];
        for mask in 0..combos {
            for (i, &(t, guess)) in free.iter().enumerate() {
                let bit = mask >> (free.len() - 1 - i) & 1;
                self.profile[off + t] = if bit == 1 { guess } else { 0 };
            }
            for (t, slot) in next.iter_mut().enumerate() {
                *slot = self.profile[off + t] == 0 && (0..q).any(|x| reach[x * views + t]);
            }
            self.descend(p + 1, &next);
        }
    }
}

/// Visit every restricted profile: players after the first only ever guess
/// correctly.
pub(crate) fn search_restricted(space: &SeqSpace, limit: u64, exec: Execution) -> Result<Best> {
    match restricted_bound(space) {
        Some(b) if b <= limit as u128 => {}
        _ => bail!(
            Capacity,
            "the restricted profile space for n={}, q={} exceeds the limit of {limit}",
            space.n,
            space.q
        ),
    }
    let radix = space.q + 1;
    let first_views = space.views[0];
    let first_total = radix.pow(first_views as u32);
    let best = map_reduce(
        exec,
        first_total,
        chunk_for(first_total),
        None,
        |range| {
            let mut walk = Restricted {
                space,
                profile: vec![0u8; space.digits],
                first_passes: 0,
                scratch: Scratch::default(),
                best: None,
                examined: 0,
            };
            let mut first = decode(range.start, radix, first_views);
            for _ in range {
                walk.profile[..first_views].copy_from_slice(&first);
                let reach: Vec<bool> = first.iter().map(|&d| d == 0).collect();
                walk.first_passes = reach.iter().filter(|&&b| b).count();
                walk.descend(1, &reach);
                increment(&mut first, radix as u8);
            }
            let examined = walk.examined;
            walk.best.map(|mut b| {
                b.examined = examined;
                b
            })
        },
        Best::merge,
    );
    Ok(best.expect("the profile space is never empty"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::evaluate_exact;
    use crate::strategies::gray_strategy;

    /// Oracle: play a profile configuration by configuration.
    fn brute_wins(space: &SeqSpace, profile: &[u8]) -> u64 {
        let (n, q) = (space.n, space.q);
        let mut wins = 0;
        for k in 0..q.pow(n as u32) {
            let c = decode(k, q, n);
            for p in 0..n {
                let view = c[p + 1..].iter().fold(0usize, |a, &x| a * q as usize + x as usize);
                let d = profile[space.offsets[p] + view];
                if d != 0 {
                    wins += (d - 1 == c[p]) as u64;
                    break;
                }
            }
        }
        wins
    }

    #[test]
    fn layout() {
        let s = SeqSpace::new(3, 2);
        assert_eq!(s.views, vec![4, 2, 1]);
        assert_eq!(s.offsets, vec![0, 4, 6]);
        assert_eq!(s.full_size(), Some(3u128.pow(7)));
    }

    #[test]
    fn wins_match_brute_force_everywhere() {
        for (n, q) in [(1, 2), (2, 2), (3, 2), (2, 3)] {
            let space = SeqSpace::new(n, q);
            let radix = q as u64 + 1;
            let mut profile = vec![0u8; space.digits];
            let mut scratch = Scratch::default();
            for _ in 0..radix.pow(space.digits as u32) {
                assert_eq!(space.wins(&profile, &mut scratch), brute_wins(&space, &profile), "{profile:?}");
                increment(&mut profile, radix as u8);
            }
        }
    }

    #[test]
    fn table_conversion_preserves_wins() {
        let space = SeqSpace::new(3, 3);
        let game = GameSpec::new_line(3, 3).unwrap();
        // gray as a profile: guess gray (digit 1) exactly when no gray is ahead
        let mut profile = vec![0u8; space.digits];
        for p in 0..3 {
            for t in 0..space.views[p] {
                let ahead = decode(t as u64, 3, 2 - p);
                profile[space.offsets[p] + t] = if ahead.contains(&0) { 0 } else { 1 };
            }
        }
        let table = space.to_table(game, &profile).unwrap();
        let wins = space.wins(&profile, &mut Scratch::default());
        assert_eq!(evaluate_exact(&game, &table).unwrap().wins, wins);
        assert_eq!(table, gray_strategy(3, 3).unwrap());
    }

    #[test]
    fn odometer() {
        let mut d = decode(5, 3, 3);
        assert_eq!(d, vec![0, 1, 2]);
        increment(&mut d, 3);
        assert_eq!(d, vec![0, 2, 0]);
    }
}
