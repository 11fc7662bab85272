//! Hamming codes, covering-radius checks and minimal binary covering codes.
//!
//! Words are stored by their configuration rank, so position 1 is the most
//! significant digit.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use crate::error::{bail, HatError, Result};
use crate::game::{space_size, Configuration, MAX_COLOURS};

/// Largest word space `verify_covering` will sweep.
pub const MAX_COVERING_SPACE: u64 = 1 << 26;

/// A set of length-`n` words over a `q`-ary alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Code {
    n: usize,
    q: u32,
    words: BTreeSet<u64>,
    radius: Option<usize>,
    hamming: Option<u32>,
}

/// Result of a covering check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coverage {
    pub covered: bool,
    /// Exact covering radius, `None` for the empty code.
    pub radius: Option<usize>,
    /// The least-rank word farthest from the code, reported on failure.
    pub witness: Option<Configuration>,
}

/// `0` for a codeword, otherwise the 1-based position whose flip reaches one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Syndrome(pub usize);

impl Syndrome {
    pub fn is_codeword(self) -> bool {
        self.0 == 0
    }
}

impl Code {
    pub fn new<I>(n: usize, q: u32, words: I) -> Result<Self>
    where
        I: IntoIterator<Item = Configuration>,
    {
        if n == 0 {
            bail!(Domain, "word length must be positive");
        }
        if !(2..=MAX_COLOURS).contains(&q) {
            bail!(Domain, "alphabet size must lie in 2..={MAX_COLOURS}, got {q}");
        }
        let mut set = BTreeSet::new();
        for w in words {
            if w.len() != n {
                bail!(Domain, "word {w} has length {}, expected {n}", w.len());
            }
            if !set.insert(w.rank(q)?) {
                bail!(Domain, "duplicate codeword {w}");
            }
        }
        Ok(Code { n, q, words: set, radius: None, hamming: None })
    }

    pub fn from_ranks<I: IntoIterator<Item = u64>>(n: usize, q: u32, ranks: I) -> Result<Self> {
        let total = space_size(n, q).ok_or_else(|| HatError::Domain(format!("{q}^{n} is too large")))?;
        let mut set = BTreeSet::new();
        for k in ranks {
            if k >= total {
                bail!(Domain, "rank {k} is outside [0, {total})");
            }
            if !set.insert(k) {
                bail!(Domain, "duplicate codeword rank {k}");
            }
        }
        Code::new(n, q, std::iter::empty()).map(|c| Code { words: set, ..c })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Verified covering radius, if `verify_covering` has succeeded.
    pub fn radius(&self) -> Option<usize> {
        self.radius
    }

    /// Parameter `m` when the code came from [`hamming_code`].
    pub fn hamming_parameter(&self) -> Option<u32> {
        self.hamming
    }

    pub fn contains_rank(&self, k: u64) -> bool {
        self.words.contains(&k)
    }

    pub fn contains(&self, word: &Configuration) -> bool {
        word.len() == self.n && word.rank(self.q).is_ok_and(|k| self.contains_rank(k))
    }

    pub fn ranks(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().copied()
    }

    pub fn words(&self) -> impl Iterator<Item = Configuration> + '_ {
        self.words
            .iter()
            .map(|&k| Configuration::unrank(k, self.n, self.q).expect("stored ranks are in range"))
    }

    fn total(&self) -> u64 {
        space_size(self.n, self.q).expect("validated at construction")
    }

    /// Distance from every word of the space to the nearest codeword.
    fn distances(&self) -> Result<Vec<u8>> {
        let total = self.total();
        if total > MAX_COVERING_SPACE {
            bail!(Capacity, "{} words exceed the covering sweep limit of {MAX_COVERING_SPACE}", total);
        }
        let q = self.q as u64;
        let mut dist = vec![u8::MAX; total as usize];
        let mut queue: VecDeque<u64> = VecDeque::new();
        for &k in &self.words {
            dist[k as usize] = 0;
            queue.push_back(k);
        }
        while let Some(k) = queue.pop_front() {
            let d = dist[k as usize];
            let mut weight = 1u64;
            for _ in 0..self.n {
                let digit = (k / weight) % q;
                for e in 0..q {
                    if e != digit {
                        let nb = k - digit * weight + e * weight;
                        if dist[nb as usize] == u8::MAX {
                            dist[nb as usize] = d + 1;
                            queue.push_back(nb);
                        }
                    }
                }
                weight *= q;
            }
        }
        Ok(dist)
    }

    /// Check that every word lies within Hamming distance `r` of the code.
    /// On success the radius `r` is recorded on the code.
    pub fn verify_covering(&mut self, r: usize) -> Result<Coverage> {
        let dist = self.distances()?;
        let (far_rank, far) = dist
            .iter()
            .enumerate()
            .fold((0usize, 0u8), |best, (k, &d)| if d > best.1 { (k, d) } else { best });
        let radius = (!self.is_empty()).then_some(far as usize);
        let covered = radius.is_some_and(|rad| rad <= r);
        if covered {
            self.radius = Some(r);
        }
        let witness = (!covered)
            .then(|| Configuration::unrank(far_rank as u64, self.n, self.q).expect("rank in range"));
        Ok(Coverage { covered, radius, witness })
    }

    fn is_perfect_single_error(&self) -> bool {
        self.q == 2 && self.radius == Some(1) && (self.len() as u64) * (self.n as u64 + 1) == self.total()
    }

    /// Decode `word` against a perfect binary single-error-correcting code.
    pub fn syndrome_decode(&self, word: &Configuration) -> Result<Syndrome> {
        if !self.is_perfect_single_error() {
            bail!(Unsupported, "syndrome decoding needs a verified perfect binary code of radius 1");
        }
        if word.len() != self.n {
            bail!(Domain, "word {word} has length {}, expected {}", word.len(), self.n);
        }
        let k = word.rank(2)?;
        if self.hamming.is_some() {
            return Ok(Syndrome(parity_syndrome(k, self.n)));
        }
        if self.contains_rank(k) {
            return Ok(Syndrome(0));
        }
        let pos = (1..=self.n)
            .find(|&i| self.contains_rank(k ^ (1u64 << (self.n - i))))
            .expect("perfect codes cover every word");
        Ok(Syndrome(pos))
    }

    /// Text form: header `n q`, then one base-`q` word per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.q);
        for w in self.words() {
            let _ = writeln!(out, "{w}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        let (_, header) = lines.next().ok_or_else(|| HatError::Format("empty code file".into()))?;
        let nums: Vec<&str> = header.split_whitespace().collect();
        let (n, q) = match nums[..] {
            [n, q] => match (n.parse::<usize>(), q.parse::<u32>()) {
                (Ok(n), Ok(q)) => (n, q),
                _ => bail!(Format, "line 1: expected 'n q', found {header:?}"),
            },
            _ => bail!(Format, "line 1: expected 'n q', found {header:?}"),
        };
        let mut words = Vec::new();
        for (lno, line) in lines {
            let w = Configuration::parse(line, q).map_err(|e| HatError::Format(format!("line {}: {e}", lno + 1)))?;
            if w.len() != n {
                bail!(Format, "line {}: word {w} has length {}, expected {n}", lno + 1, w.len());
            }
            words.push(w);
        }
        Code::new(n, q, words).map_err(|e| HatError::Format(e.to_string()))
    }
}

/// XOR of the 1-based positions holding a 1 in the binary word of rank `k`.
fn parity_syndrome(k: u64, n: usize) -> usize {
    (1..=n).filter(|&i| k >> (n - i) & 1 == 1).fold(0, |acc, i| acc ^ i)
}

/// The binary Hamming code of length `2^m - 1`.
///
/// Position `i` has parity-check column equal to the binary form of `i`, so a
/// word is a codeword exactly when the XOR of its set positions is zero.
pub fn hamming_code(m: u32) -> Result<Code> {
    if !(2..=4).contains(&m) {
        bail!(Unsupported, "Hamming codes are built for 2 <= m <= 4, got m = {m}");
    }
    let n = (1usize << m) - 1;
    let ranks = (0..1u64 << n).filter(|&k| parity_syndrome(k, n) == 0);
    let mut code = Code::from_ranks(n, 2, ranks)?;
    code.hamming = Some(m);
    let check = code.verify_covering(1)?;
    debug_assert!(check.covered);
    Ok(code)
}

/// Result of the minimal covering-code search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinCover {
    pub size: usize,
    /// Lexicographically least minimum code, radius verified.
    pub witness: Code,
    /// Search nodes visited while establishing the size.
    pub nodes: u64,
}

/// Largest length accepted by [`min_covering_code`].
pub const MAX_COVER_SEARCH_LEN: usize = 6;

struct CoverSearch {
    full: u64,
    balls: Vec<u64>,
    ball_size: u32,
    nodes: u64,
}

impl CoverSearch {
    fn new(n: usize, r: usize) -> Self {
        let words = 1usize << n;
        let full = if words == 64 { u64::MAX } else { (1u64 << words) - 1 };
        let balls: Vec<u64> = (0..words as u64)
            .map(|c| {
                (0..words as u64)
                    .filter(|&w| (c ^ w).count_ones() as usize <= r)
                    .fold(0u64, |m, w| m | 1 << w)
            })
            .collect();
        let ball_size = balls[0].count_ones();
        CoverSearch { full, balls, ball_size, nodes: 0 }
    }

    /// Can `budget` more codewords, all of rank `>= floor`, finish the cover?
    /// Branches on the codewords able to cover the least uncovered word.
    fn feasible(&mut self, covered: u64, budget: usize, floor: usize) -> bool {
        self.nodes += 1;
        let open = self.full & !covered;
        if open == 0 {
            return true;
        }
        if budget == 0 || open.count_ones() > budget as u32 * self.ball_size {
            return false;
        }
        let target = open.trailing_zeros() as usize;
        let mut coverers = self.balls[target] & u64::MAX.checked_shl(floor as u32).unwrap_or(0);
        while coverers != 0 {
            let c = coverers.trailing_zeros() as usize;
            coverers &= coverers - 1;
            if self.feasible(covered | self.balls[c], budget - 1, c + 1) {
                return true;
            }
        }
        false
    }
}

/// Smallest binary code of length `n <= 6` with covering radius `r`, and the
/// lexicographically least such code.
pub fn min_covering_code(n: usize, r: usize) -> Result<MinCover> {
    if n == 0 {
        bail!(Domain, "word length must be positive");
    }
    if n > MAX_COVER_SEARCH_LEN {
        bail!(Capacity, "exhaustive covering search is limited to n <= {MAX_COVER_SEARCH_LEN}, got {n}");
    }
    let words = 1usize << n;
    let mut search = CoverSearch::new(n, r);
    let lower = words.div_ceil(search.ball_size as usize);

    // Translating a cover keeps it a cover, so some minimum code holds 0.
    let mut size = lower;
    while !search.feasible(search.balls[0], size - 1, 1) {
        size += 1;
    }

    // Fix the least possible next codeword one slot at a time.
    let mut chosen = Vec::with_capacity(size);
    let mut covered = 0u64;
    let mut floor = 0usize;
    for slot in 0..size {
        let pick = (floor..words)
            .find(|&x| search.feasible(covered | search.balls[x], size - slot - 1, x + 1))
            .expect("a cover of this size exists");
        chosen.push(pick as u64);
        covered |= search.balls[pick];
        floor = pick + 1;
    }

    let mut witness = Code::from_ranks(n, 2, chosen)?;
    let check = witness.verify_covering(r)?;
    assert!(check.covered, "search produced a non-covering code");
    Ok(MinCover { size, witness, nodes: search.nodes })
}
