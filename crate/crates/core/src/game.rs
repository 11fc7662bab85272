//! Configurations, views, responses and the deterministic play engine.
//!
//! Players are numbered `1..=n` in every public API and text format. A
//! configuration ranks lexicographically with player 1 as the most
//! significant base-`q` digit.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{bail, HatError, Result};

/// Largest supported colour count. Colours are written as single decimal
/// digits and `p` marks a pass in view keys.
pub const MAX_COLOURS: u32 = 10;

/// A hat colour in `[0, q)`. Colour 0 is gray and colour 1 is brown.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Colour(pub u8);

impl Colour {
    pub const GRAY: Colour = Colour(0);
    pub const BROWN: Colour = Colour(1);

    pub fn value(self) -> u8 {
        self.0
    }

    /// Human name used in trace tables: gray, brown, c2, c3, ...
    pub fn name(self) -> String {
        match self.0 {
            0 => "gray".to_string(),
            1 => "brown".to_string(),
            c => format!("c{c}"),
        }
    }

    pub fn digit(self) -> char {
        char::from_digit(self.0 as u32, MAX_COLOURS).expect("colour below MAX_COLOURS")
    }
}

impl fmt::Display for Colour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The complete hat assignment `(c_1, ..., c_n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration(Vec<Colour>);

impl Configuration {
    pub fn new(colours: Vec<Colour>) -> Self {
        Configuration(colours)
    }

    pub fn from_digits(digits: &[u8]) -> Self {
        Configuration(digits.iter().map(|&d| Colour(d)).collect())
    }

    /// Parse the text form: a digit string in base `q`, player 1 leftmost.
    pub fn parse(text: &str, q: u32) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            bail!(Format, "empty configuration");
        }
        let mut colours = Vec::with_capacity(text.len());
        for ch in text.chars() {
            match ch.to_digit(MAX_COLOURS) {
                Some(d) if d < q => colours.push(Colour(d as u8)),
                _ => bail!(Format, "'{ch}' in configuration {text:?} is not a base-{q} digit"),
            }
        }
        Ok(Configuration(colours))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn colours(&self) -> &[Colour] {
        &self.0
    }

    /// Colour worn by `player` (1-based).
    pub fn colour(&self, player: usize) -> Colour {
        self.0[player - 1]
    }

    pub fn rank(&self, q: u32) -> Result<u64> {
        rank_configuration(self, q)
    }

    pub fn unrank(k: u64, n: usize, q: u32) -> Result<Self> {
        unrank_configuration(k, n, q)
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.0 {
            write!(f, "{}", c.digit())?;
        }
        Ok(())
    }
}

impl Serialize for Configuration {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// `q^n`, or `None` when it does not fit in a `u64`.
pub fn space_size(n: usize, q: u32) -> Option<u64> {
    u32::try_from(n).ok().and_then(|n| (q as u64).checked_pow(n))
}

/// Lexicographic rank with player 1 most significant.
pub fn rank_configuration(cfg: &Configuration, q: u32) -> Result<u64> {
    if q < 2 {
        bail!(Domain, "colour count must be at least 2, got {q}");
    }
    if space_size(cfg.len(), q).is_none() {
        bail!(Domain, "{q}^{} configurations do not fit in 64 bits", cfg.len());
    }
    let mut k = 0u64;
    for (i, c) in cfg.colours().iter().enumerate() {
        if c.0 as u32 >= q {
            bail!(Domain, "colour {} of player {} is out of range for q = {q}", c.0, i + 1);
        }
        k = k * q as u64 + c.0 as u64;
    }
    Ok(k)
}

pub fn unrank_configuration(k: u64, n: usize, q: u32) -> Result<Configuration> {
    if q < 2 {
        bail!(Domain, "colour count must be at least 2, got {q}");
    }
    let total = match space_size(n, q) {
        Some(t) => t,
        None => bail!(Domain, "{q}^{n} configurations do not fit in 64 bits"),
    };
    if k >= total {
        bail!(Domain, "rank {k} is outside [0, {total})");
    }
    Ok(Configuration::from_digits(&digits_of(k, n, q)))
}

/// Base-`q` digits of `k`, most significant first, padded to `n`.
pub(crate) fn digits_of(mut k: u64, n: usize, q: u32) -> Vec<u8> {
    let mut digits = vec![0u8; n];
    for slot in digits.iter_mut().rev() {
        *slot = (k % q as u64) as u8;
        k /= q as u64;
    }
    digits
}

/// Which hats a player can see.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Visibility {
    AllOthers,
    AheadOnly,
}

/// How responses are collected.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Protocol {
    Simultaneous,
    /// Players respond in order `1..=n` and each hears every earlier response.
    Sequential,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    AtLeastOneCorrectNoneWrong,
    MajorityCorrect,
    /// Maximise the number of correct guesses. A configuration counts as a
    /// win only when every player is correct.
    CountCorrect,
}

impl Objective {
    pub fn allows_pass(self) -> bool {
        matches!(self, Objective::AtLeastOneCorrectNoneWrong)
    }
}

macro_rules! keyword_enum {
    ($ty:ty { $($variant:ident => $word:literal),+ $(,)? }) => {
        impl $ty {
            pub fn keyword(self) -> &'static str {
                match self { $(Self::$variant => $word),+ }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.keyword())
            }
        }

        impl FromStr for $ty {
            type Err = HatError;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($word => Ok(Self::$variant),)+
                    other => Err(HatError::Format(format!(
                        "unknown {} {other:?}", stringify!($ty).to_lowercase()
                    ))),
                }
            }
        }
    };
}

keyword_enum!(Visibility { AllOthers => "all-others", AheadOnly => "ahead-only" });
keyword_enum!(Protocol { Simultaneous => "simultaneous", Sequential => "sequential" });
keyword_enum!(Objective {
    AtLeastOneCorrectNoneWrong => "at-least-one-correct-none-wrong",
    MajorityCorrect => "majority",
    CountCorrect => "count-correct",
});

/// One of the hat games: player count, colour count and rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GameSpec {
    n: usize,
    q: u32,
    visibility: Visibility,
    protocol: Protocol,
    objective: Objective,
}

impl GameSpec {
    pub fn new(
        n: usize,
        q: u32,
        visibility: Visibility,
        protocol: Protocol,
        objective: Objective,
    ) -> Result<Self> {
        if n == 0 {
            bail!(Domain, "a game needs at least one player");
        }
        if !(2..=MAX_COLOURS).contains(&q) {
            bail!(Domain, "colour count must lie in 2..={MAX_COLOURS}, got {q}");
        }
        if space_size(n, q).is_none() {
            bail!(Domain, "{q}^{n} configurations do not fit in 64 bits");
        }
        Ok(GameSpec { n, q, visibility, protocol, objective })
    }

    /// Everyone sees everyone else, simultaneous guesses or passes.
    pub fn ebert(n: usize, q: u32) -> Result<Self> {
        Self::new(n, q, Visibility::AllOthers, Protocol::Simultaneous, Objective::AtLeastOneCorrectNoneWrong)
    }

    pub fn majority(n: usize, q: u32) -> Result<Self> {
        Self::new(n, q, Visibility::AllOthers, Protocol::Simultaneous, Objective::MajorityCorrect)
    }

    /// Classic hats-on-a-line: mandatory sequential guesses, count correct.
    pub fn line(n: usize, q: u32) -> Result<Self> {
        Self::new(n, q, Visibility::AheadOnly, Protocol::Sequential, Objective::CountCorrect)
    }

    /// Line visibility and sequential voting with passes, won when someone
    /// is right and nobody is wrong.
    pub fn new_line(n: usize, q: u32) -> Result<Self> {
        Self::new(n, q, Visibility::AheadOnly, Protocol::Sequential, Objective::AtLeastOneCorrectNoneWrong)
    }

    /// Look a preset up by its CLI name.
    pub fn by_name(name: &str, n: usize, q: u32) -> Result<Self> {
        match name {
            "ebert" => Self::ebert(n, q),
            "majority" => Self::majority(n, q),
            "line" => Self::line(n, q),
            "newline" => Self::new_line(n, q),
            other => bail!(Domain, "unknown game {other:?} (expected ebert, majority, line or newline)"),
        }
    }

    /// Preset name, if the rules match one.
    pub fn preset_name(&self) -> Option<&'static str> {
        use Objective::*;
        use Protocol::*;
        use Visibility::*;
        match (self.visibility, self.protocol, self.objective) {
            (AllOthers, Simultaneous, AtLeastOneCorrectNoneWrong) => Some("ebert"),
            (AllOthers, Simultaneous, MajorityCorrect) => Some("majority"),
            (AheadOnly, Sequential, CountCorrect) => Some("line"),
            (AheadOnly, Sequential, AtLeastOneCorrectNoneWrong) => Some("newline"),
            _ => None,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn visibility(&self) -> Visibility {
        self.visibility
    }

    pub fn protocol(&self) -> Protocol {
        self.protocol
    }

    pub fn objective(&self) -> Objective {
        self.objective
    }

    /// `q^n`; always representable for a constructed spec.
    pub fn total_configurations(&self) -> u64 {
        space_size(self.n, self.q).expect("validated at construction")
    }

    /// Players visible to `player` (1-based), in increasing order.
    pub fn visible_players(&self, player: usize) -> Vec<usize> {
        match self.visibility {
            Visibility::AllOthers => (1..=self.n).filter(|&p| p != player).collect(),
            Visibility::AheadOnly => (player + 1..=self.n).collect(),
        }
    }

    /// Number of earlier responses heard by `player`.
    pub fn heard_len(&self, player: usize) -> usize {
        match self.protocol {
            Protocol::Simultaneous => 0,
            Protocol::Sequential => player - 1,
        }
    }

    pub(crate) fn check_configuration(&self, cfg: &Configuration) -> Result<()> {
        if cfg.len() != self.n {
            bail!(Domain, "configuration {cfg} has {} hats, game has {} players", cfg.len(), self.n);
        }
        if let Some(c) = cfg.colours().iter().find(|c| c.0 as u32 >= self.q) {
            bail!(Domain, "colour {} in {cfg} is out of range for q = {}", c.0, self.q);
        }
        Ok(())
    }

    pub(crate) fn check_response(&self, response: Response) -> Result<()> {
        match response {
            Response::Pass if !self.objective.allows_pass() => {
                bail!(Strategy, "pass is not a legal response under the {} objective", self.objective)
            }
            Response::Guess(c) if c.0 as u32 >= self.q => {
                bail!(Strategy, "guess {} is out of range for q = {}", c.0, self.q)
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for GameSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.preset_name() {
            Some(name) => write!(f, "{name}(n={}, q={})", self.n, self.q),
            None => write!(
                f,
                "game(n={}, q={}, {}, {}, {})",
                self.n, self.q, self.visibility, self.protocol, self.objective
            ),
        }
    }
}

/// A player's answer: pass or a colour guess.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Response {
    Pass,
    Guess(Colour),
}

impl Response {
    pub fn guess(colour: u8) -> Self {
        Response::Guess(Colour(colour))
    }

    /// `p` for a pass, otherwise the colour digit.
    pub fn symbol(self) -> char {
        match self {
            Response::Pass => 'p',
            Response::Guess(c) => c.digit(),
        }
    }

    pub fn from_symbol(ch: char, q: u32) -> Result<Self> {
        if ch == 'p' {
            return Ok(Response::Pass);
        }
        match ch.to_digit(MAX_COLOURS) {
            Some(d) if d < q => Ok(Response::Guess(Colour(d as u8))),
            _ => bail!(Format, "{ch:?} is neither 'p' nor a base-{q} digit"),
        }
    }
}

impl fmt::Display for Response {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Response::Pass => f.write_str("pass"),
            Response::Guess(c) => write!(f, "{c}"),
        }
    }
}

impl Serialize for Response {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(&self.symbol())
    }
}

/// Everything a player knows when responding.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct View {
    /// 1-based index of the responding player.
    pub observer: usize,
    /// `(player, colour)` pairs in increasing player order.
    pub visible: Vec<(usize, Colour)>,
    /// Responses of players `1..observer`, empty when voting is simultaneous.
    pub heard: Vec<Response>,
}

impl View {
    /// Canonical key: visible colour digits, `|`, heard symbols.
    pub fn key(&self) -> String {
        let mut key: String = self.visible.iter().map(|(_, c)| c.digit()).collect();
        key.push('|');
        key.extend(self.heard.iter().map(|r| r.symbol()));
        key
    }

    pub fn sees(&self, colour: Colour) -> bool {
        self.visible.iter().any(|&(_, c)| c == colour)
    }

    /// Colour visible on `player`, if the observer can see them.
    pub fn colour_of(&self, player: usize) -> Option<Colour> {
        self.visible.iter().find(|&&(p, _)| p == player).map(|&(_, c)| c)
    }
}

/// Build the view of `player` (1-based) given the responses already heard.
pub fn view_of(game: &GameSpec, cfg: &Configuration, player: usize, heard: &[Response]) -> Result<View> {
    game.check_configuration(cfg)?;
    if player == 0 || player > game.n() {
        bail!(Domain, "player {player} is outside 1..={}", game.n());
    }
    let expected = game.heard_len(player);
    if heard.len() != expected {
        bail!(
            Protocol,
            "player {player} must hear {expected} earlier responses under the {} protocol, got {}",
            game.protocol(),
            heard.len()
        );
    }
    for &r in heard {
        game.check_response(r).map_err(|e| HatError::Protocol(e.to_string()))?;
    }
    let visible = game
        .visible_players(player)
        .into_iter()
        .map(|p| (p, cfg.colour(p)))
        .collect();
    Ok(View { observer: player, visible, heard: heard.to_vec() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    Win,
    Lose,
}

impl Outcome {
    pub fn is_win(self) -> bool {
        self == Outcome::Win
    }

    pub fn word(self) -> &'static str {
        match self {
            Outcome::Win => "win",
            Outcome::Lose => "lose",
        }
    }
}

impl Serialize for Outcome {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.word())
    }
}

/// Decide the outcome from the tally of correct and incorrect guesses.
pub fn decide(objective: Objective, n: usize, correct: usize, wrong: usize) -> Outcome {
    let win = match objective {
        Objective::AtLeastOneCorrectNoneWrong => correct >= 1 && wrong == 0,
        Objective::MajorityCorrect => 2 * correct > n,
        Objective::CountCorrect => correct == n,
    };
    if win {
        Outcome::Win
    } else {
        Outcome::Lose
    }
}

/// The record of one play.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Trace {
    pub configuration: Configuration,
    pub responses: Vec<Response>,
    pub correct: Vec<bool>,
    pub correct_count: usize,
    pub outcome: Outcome,
}

impl Trace {
    pub(crate) fn new(objective: Objective, configuration: Configuration, responses: Vec<Response>) -> Self {
        let correct: Vec<bool> = responses
            .iter()
            .zip(configuration.colours())
            .map(|(r, &c)| *r == Response::Guess(c))
            .collect();
        let correct_count = correct.iter().filter(|&&b| b).count();
        let wrong = responses.iter().filter(|r| **r != Response::Pass).count() - correct_count;
        let outcome = decide(objective, configuration.len(), correct_count, wrong);
        Trace { configuration, responses, correct, correct_count, outcome }
    }

    pub fn wrong_count(&self) -> usize {
        self.responses.iter().filter(|r| **r != Response::Pass).count() - self.correct_count
    }
}

pub use crate::strategies::table::play;
