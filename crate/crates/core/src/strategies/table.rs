//! Dense strategy tables and their text format.
//!
//! Each player owns a flat vector indexed by view. A view index is
//! `heard_index * q^visible_len + visible_index`: the visible colours rank
//! in base `q` (lowest player most significant) and the heard responses
//! rank in base `q + 1` (base `q` when passing is illegal), with a pass
//! encoded as digit `q`.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{bail, HatError, Result};
use crate::game::{Colour, Configuration, GameSpec, Response, Trace, View};

#[derive(Clone, Debug, PartialEq, Eq)]
struct PlayerLayout {
    visible: Vec<usize>,
    heard_len: usize,
    heard_radix: u64,
    visible_span: u64,
    size: usize,
}

impl PlayerLayout {
    fn new(game: &GameSpec, player: usize) -> Result<Self> {
        let q = game.q() as u64;
        let visible = game.visible_players(player);
        let heard_len = game.heard_len(player);
        let heard_radix = if game.objective().allows_pass() { q + 1 } else { q };
        let visible_span = q.checked_pow(visible.len() as u32);
        let size = visible_span
            .and_then(|v| heard_radix.checked_pow(heard_len as u32).and_then(|h| h.checked_mul(v)))
            .filter(|&s| s <= MAX_VIEWS_PER_PLAYER);
        match (visible_span, size) {
            (Some(visible_span), Some(size)) => Ok(PlayerLayout {
                visible,
                heard_len,
                heard_radix,
                visible_span,
                size: size as usize,
            }),
            _ => bail!(Capacity, "player {player} of {game} has more than {MAX_VIEWS_PER_PLAYER} views"),
        }
    }

    fn heard_digit(&self, r: Response) -> u64 {
        match r {
            Response::Pass => self.heard_radix - 1,
            Response::Guess(c) => c.0 as u64,
        }
    }

    fn index(&self, q: u64, cfg: &[Colour], heard: &[Response]) -> usize {
        let vis = self.visible.iter().fold(0u64, |acc, &p| acc * q + cfg[p - 1].0 as u64);
        let hrd = heard.iter().fold(0u64, |acc, &r| acc * self.heard_radix + self.heard_digit(r));
        (hrd * self.visible_span + vis) as usize
    }

    fn view_at(&self, q: u64, observer: usize, index: usize) -> View {
        let mut vis = index as u64 % self.visible_span;
        let mut hrd = index as u64 / self.visible_span;
        let mut visible = vec![(0, Colour(0)); self.visible.len()];
        for (slot, &p) in visible.iter_mut().zip(&self.visible).rev() {
            *slot = (p, Colour((vis % q) as u8));
            vis /= q;
        }
        let mut heard = vec![Response::Pass; self.heard_len];
        for slot in heard.iter_mut().rev() {
            let d = hrd % self.heard_radix;
            hrd /= self.heard_radix;
            *slot = if d == q { Response::Pass } else { Response::Guess(Colour(d as u8)) };
        }
        View { observer, visible, heard }
    }
}

/// Upper bound on the views a single player may have in a table.
pub const MAX_VIEWS_PER_PLAYER: u64 = 1 << 24;

/// A deterministic strategy: one response for every view of every player.
///
/// Tables are total and legal by construction; every constructor validates
/// each entry against the game.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrategyTable {
    game: GameSpec,
    layouts: Vec<PlayerLayout>,
    entries: Vec<Vec<Response>>,
}

impl StrategyTable {
    /// Tabulate `rule` over every view of every player.
    pub fn from_fn<F>(game: GameSpec, mut rule: F) -> Result<Self>
    where
        F: FnMut(&View) -> Response,
    {
        Self::try_from_fn(game, |v| Ok(rule(v)))
    }

    pub fn try_from_fn<F>(game: GameSpec, mut rule: F) -> Result<Self>
    where
        F: FnMut(&View) -> Result<Response>,
    {
        let q = game.q() as u64;
        let layouts = (1..=game.n())
            .map(|p| PlayerLayout::new(&game, p))
            .collect::<Result<Vec<_>>>()?;
        let mut entries = Vec::with_capacity(game.n());
        for (i, layout) in layouts.iter().enumerate() {
            let mut row = Vec::with_capacity(layout.size);
            for idx in 0..layout.size {
                let view = layout.view_at(q, i + 1, idx);
                let r = rule(&view)?;
                game.check_response(r)
                    .map_err(|e| HatError::Strategy(format!("player {} view {:?}: {e}", i + 1, view.key())))?;
                row.push(r);
            }
            entries.push(row);
        }
        Ok(StrategyTable { game, layouts, entries })
    }

    pub fn game(&self) -> &GameSpec {
        &self.game
    }

    /// Number of views player `player` (1-based) can face.
    pub fn view_count(&self, player: usize) -> usize {
        self.layouts[player - 1].size
    }

    /// Response of the player who sees `view`.
    pub fn respond(&self, view: &View) -> Result<Response> {
        let layout = self
            .layouts
            .get(view.observer.wrapping_sub(1))
            .ok_or_else(|| HatError::Domain(format!("no player {}", view.observer)))?;
        let players: Vec<usize> = view.visible.iter().map(|&(p, _)| p).collect();
        if players != layout.visible || view.heard.len() != layout.heard_len {
            bail!(Protocol, "view {:?} does not fit player {} of {}", view.key(), view.observer, self.game);
        }
        let mut cfg = vec![Colour(0); self.game.n()];
        for &(p, c) in &view.visible {
            cfg[p - 1] = c;
        }
        Ok(self.entries[view.observer - 1][layout.index(self.game.q() as u64, &cfg, &view.heard)])
    }

    /// Responses of player `player` in view-index order.
    pub fn responses_of(&self, player: usize) -> &[Response] {
        &self.entries[player - 1]
    }

    /// Play one configuration. The configuration must already be validated.
    pub(crate) fn play_unchecked(&self, cfg: &Configuration) -> Trace {
        let q = self.game.q() as u64;
        let colours = cfg.colours();
        let mut responses = Vec::with_capacity(self.game.n());
        for (layout, row) in self.layouts.iter().zip(&self.entries) {
            let heard = &responses[..layout.heard_len];
            let r = row[layout.index(q, colours, heard)];
            responses.push(r);
        }
        Trace::new(self.game.objective(), cfg.clone(), responses)
    }

    /// Serialise in the strategy file format.
    pub fn to_text(&self) -> String {
        let g = &self.game;
        let q = g.q() as u64;
        let mut out = format!("game {} {} {} {} {}\n", g.n(), g.q(), g.visibility(), g.protocol(), g.objective());
        for (i, (layout, row)) in self.layouts.iter().zip(&self.entries).enumerate() {
            for (idx, r) in row.iter().enumerate() {
                let view = layout.view_at(q, i + 1, idx);
                let answer = match r {
                    Response::Pass => "pass".to_string(),
                    Response::Guess(c) => c.to_string(),
                };
                let _ = writeln!(out, "player {} view {} -> {answer}", i + 1, view.key());
            }
        }
        out
    }

    /// Parse the strategy file format, requiring a table for `game`.
    ///
    /// Every view must appear exactly once; the first problem is reported
    /// with its line number or the missing view key.
    pub fn from_text(text: &str, game: &GameSpec) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        });
        let (hno, header) = lines.next().ok_or_else(|| HatError::Format("empty strategy file".into()))?;
        let parsed = parse_header(header).map_err(|e| HatError::Format(format!("line {}: {e}", hno + 1)))?;
        if parsed != *game {
            bail!(Format, "line {}: strategy is for {parsed}, expected {game}", hno + 1);
        }

        let q = game.q() as u64;
        let layouts = (1..=game.n())
            .map(|p| PlayerLayout::new(game, p))
            .collect::<Result<Vec<_>>>()?;
        let mut slots: Vec<Vec<Option<Response>>> = layouts.iter().map(|l| vec![None; l.size]).collect();
        let key_index: Vec<HashMap<String, usize>> = layouts
            .iter()
            .enumerate()
            .map(|(i, l)| (0..l.size).map(|idx| (l.view_at(q, i + 1, idx).key(), idx)).collect())
            .collect();

        for (lno, line) in lines {
            let lno = lno + 1;
            let (player, key, answer) =
                parse_entry(line).map_err(|e| HatError::Format(format!("line {lno}: {e}")))?;
            if player == 0 || player > game.n() {
                bail!(Format, "line {lno}: player {player} is outside 1..={}", game.n());
            }
            let idx = match key_index[player - 1].get(key) {
                Some(&idx) => idx,
                None => bail!(Format, "line {lno}: {key:?} is not a view of player {player}"),
            };
            let response = match answer {
                "pass" => Response::Pass,
                digit => match digit.parse::<u32>() {
                    Ok(c) if c < game.q() => Response::Guess(Colour(c as u8)),
                    _ => bail!(Format, "line {lno}: response {digit:?} is neither pass nor a colour below {}", game.q()),
                },
            };
            game.check_response(response).map_err(|e| HatError::Format(format!("line {lno}: {e}")))?;
            if slots[player - 1][idx].replace(response).is_some() {
                bail!(Format, "line {lno}: duplicate entry for player {player} view {key:?}");
            }
        }

        let mut entries = Vec::with_capacity(game.n());
        for (i, row) in slots.into_iter().enumerate() {
            let mut filled = Vec::with_capacity(row.len());
            for (idx, slot) in row.into_iter().enumerate() {
                match slot {
                    Some(r) => filled.push(r),
                    None => {
                        let key = layouts[i].view_at(q, i + 1, idx).key();
                        bail!(Format, "missing entry for player {} view {key:?}", i + 1)
                    }
                }
            }
            entries.push(filled);
        }
        Ok(StrategyTable { game: *game, layouts, entries })
    }
}

fn parse_header(line: &str) -> Result<GameSpec> {
    let words: Vec<&str> = line.split_whitespace().collect();
    let [tag, n, q, vis, proto, obj] = words[..] else {
        bail!(Format, "expected header 'game <n> <q> <visibility> <protocol> <objective>'");
    };
    if tag != "game" {
        bail!(Format, "expected header to start with 'game', found {tag:?}");
    }
    let n = n.parse().map_err(|_| HatError::Format(format!("bad player count {n:?}")))?;
    let q = q.parse().map_err(|_| HatError::Format(format!("bad colour count {q:?}")))?;
    GameSpec::new(n, q, vis.parse()?, proto.parse()?, obj.parse()?)
        .map_err(|e| HatError::Format(e.to_string()))
}

fn parse_entry(line: &str) -> Result<(usize, &str, &str)> {
    let words: Vec<&str> = line.split_whitespace().collect();
    match words[..] {
        ["player", p, "view", key, "->", answer] => {
            let p = p.parse().map_err(|_| HatError::Format(format!("bad player index {p:?}")))?;
            Ok((p, key, answer))
        }
        _ => bail!(Format, "expected 'player <i> view <key> -> pass|<colour>'"),
    }
}

/// Play `cfg` under `strategy`, which must have been built for `game`.
pub fn play(game: &GameSpec, strategy: &StrategyTable, cfg: &Configuration) -> Result<Trace> {
    if strategy.game() != game {
        bail!(Precondition, "strategy was built for {}, not {game}", strategy.game());
    }
    game.check_configuration(cfg)?;
    Ok(strategy.play_unchecked(cfg))
}
