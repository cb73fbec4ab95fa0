use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::play::{play, Duplicator, Move, Position, Spoiler, Transcript};
use super::{EfError, Game, Player, Side};
use crate::structures::{Point, PresentedStructure, SuccKind};

fn shift(p: Point, d: i128) -> Option<Point> {
    match p {
        Point::Std(n) => u64::try_from(n as i128 + d).ok().map(Point::Std),
        Point::Chain { chain, pos } => i64::try_from(pos as i128 + d).ok().map(|pos| Point::Chain { chain, pos }),
    }
}

fn threshold(r: usize) -> i128 {
    1i128 << r.min(100)
}

/// Anchors (each part's zero) and pebbles, oriented as `(side, other)`.
fn points(game: &Game<PresentedStructure>, pairs: &[(u64, u64)], side: Side) -> Vec<(u64, u64)> {
    let (x, y) = (game.structure(side), game.structure(side.other()));
    let mut out: Vec<(u64, u64)> = (0..x.parts().len()).map(|i| (x.zero(i), y.zero(i))).collect();
    out.extend(pairs.iter().map(|&(a, b)| if side == Side::A { (a, b) } else { (b, a) }));
    out
}

/// Element of `part` farther than `t` from every listed point.
fn far_element(s: &PresentedStructure, part: usize, pts: impl Iterator<Item = u64>, t: i128) -> u64 {
    let max = pts
        .filter_map(|c| match s.point(c) {
            (p, Point::Std(n)) if p == part => Some(n as i128),
            _ => None,
        })
        .max()
        .unwrap_or(0);
    s.code_of(part, Point::Std((max + t + 1) as u64))
}

/// Duplicator for successor structures: with `r` rounds left, copy the
/// signed distance to a point within `2^(r-1)` of the spoiler's element,
/// otherwise answer with an element beyond `2^(r-1)` of every point in the
/// same part.
pub struct DistanceDuplicator;

impl DistanceDuplicator {
    pub fn new(game: &Game<PresentedStructure>) -> Result<Self, EfError> {
        if game.a.parts().len() != game.b.parts().len() {
            return Err(EfError::Unsupported("both structures need the same successor layout".into()));
        }
        Ok(DistanceDuplicator)
    }
}

impl Duplicator<PresentedStructure> for DistanceDuplicator {
    fn respond(&mut self, game: &Game<PresentedStructure>, pos: &Position<u64>, side: Side, e: u64) -> Result<u64, EfError> {
        let (x, y) = (game.structure(side), game.structure(side.other()));
        let t = threshold(pos.remaining.saturating_sub(1));
        let (part, _) = x.point(e);
        let pts = points(game, pos.pairs, side);
        for &(px, py) in &pts {
            if x.point(px).0 != part {
                continue;
            }
            if let Some(d) = x.distance(px, e).signed() {
                if d.abs() <= t {
                    let (ypart, yp) = y.point(py);
                    if let Some(target) = shift(yp, d) {
                        return Ok(y.code_of(ypart, target));
                    }
                }
            }
        }
        Ok(far_element(y, part, pts.iter().map(|p| p.1), t))
    }
}

/// Spoiler for the unbounded game: pebble a ℤ-chain element of the
/// nonstandard structure, then keep pebbling the predecessor of its own
/// last pebble until the duplicator runs out of predecessors.
pub struct OmegaSpoiler {
    side: Side,
    part: usize,
    last: Option<u64>,
}

impl OmegaSpoiler {
    pub fn new(game: &Game<PresentedStructure>) -> Result<Self, EfError> {
        for side in [Side::B, Side::A] {
            let (s, other) = (game.structure(side), game.structure(side.other()));
            if s.parts().len() != other.parts().len() {
                break;
            }
            for (part, (&k, &o)) in s.parts().iter().zip(other.parts()).enumerate() {
                if matches!(k, SuccKind::Nonstandard(_)) && o == SuccKind::Standard {
                    return Ok(OmegaSpoiler { side, part, last: None });
                }
            }
        }
        Err(EfError::Precondition("no part is a ℤ-chain extension on one side and standard on the other".into()))
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn part(&self) -> usize {
        self.part
    }
}

impl Spoiler<PresentedStructure> for OmegaSpoiler {
    fn choose(&mut self, game: &Game<PresentedStructure>, _pos: &Position<u64>) -> Result<(Side, u64), EfError> {
        let s = game.structure(self.side);
        let e = match self.last {
            None => s.code_of(self.part, Point::Chain { chain: 0, pos: 0 }),
            Some(prev) => s.pred(self.part, prev).expect("ℤ-chain elements have predecessors"),
        };
        self.last = Some(e);
        Ok((self.side, e))
    }
}

/// Random moves near anchors and pebbles, or deep in a random part.
pub struct RandomSpoiler {
    rng: ChaCha8Rng,
}

impl RandomSpoiler {
    pub fn new(seed: u64) -> Self {
        RandomSpoiler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

impl Spoiler<PresentedStructure> for RandomSpoiler {
    fn choose(&mut self, game: &Game<PresentedStructure>, pos: &Position<u64>) -> Result<(Side, u64), EfError> {
        let side = if self.rng.gen() { Side::A } else { Side::B };
        let s = game.structure(side);
        let t = threshold(pos.remaining) as i64;
        loop {
            let candidate = if self.rng.gen_bool(0.75) {
                let pts = points(game, pos.pairs, side);
                let (base, _) = pts[self.rng.gen_range(0..pts.len())];
                let (part, p) = s.point(base);
                shift(p, self.rng.gen_range(-t..=t) as i128).map(|q| s.code_of(part, q))
            } else {
                let part = self.rng.gen_range(0..s.parts().len());
                let p = match s.parts()[part] {
                    SuccKind::Nonstandard(k) if self.rng.gen() => {
                        Point::Chain { chain: self.rng.gen_range(0..k), pos: self.rng.gen_range(-8 * t..=8 * t) }
                    }
                    _ => Point::Std(self.rng.gen_range(0..=16 * t as u64)),
                };
                Some(s.code_of(part, p))
            };
            if let Some(c) = candidate {
                return Ok((side, c));
            }
        }
    }
}

/// Duplicator for ω-game tests: answers the first move with standard
/// position `m` in the matching part, then mostly with the predecessor of
/// its previous answer, sometimes at random.
pub struct RandomDuplicator {
    rng: ChaCha8Rng,
    m: u64,
    sensible: f64,
    last: Option<u64>,
}

impl RandomDuplicator {
    pub fn new(seed: u64, m: u64, sensible: f64) -> Self {
        RandomDuplicator { rng: ChaCha8Rng::seed_from_u64(seed), m, sensible, last: None }
    }

    pub fn m(&self) -> u64 {
        self.m
    }
}

impl Duplicator<PresentedStructure> for RandomDuplicator {
    fn respond(&mut self, game: &Game<PresentedStructure>, _pos: &Position<u64>, side: Side, e: u64) -> Result<u64, EfError> {
        let (x, y) = (game.structure(side), game.structure(side.other()));
        let part = x.point(e).0;
        let reply = match self.last {
            None => y.code_of(part, Point::Std(self.m)),
            Some(prev) if self.rng.gen_bool(self.sensible) => y.pred(part, prev).unwrap_or(prev),
            Some(_) => self.rng.gen_range(0..4 * (self.m + 4)),
        };
        self.last = Some(reply);
        Ok(reply)
    }
}

#[derive(Clone, Debug, Default)]
pub struct PlayoutReport {
    pub lines: u64,
    pub losses: u64,
    pub first_loss: Option<Vec<Move<u64>>>,
}

/// Plays `count` games of `n` rounds against random spoilers.
pub fn random_playouts(
    game: &Game<PresentedStructure>,
    n: usize,
    count: u64,
    seed: u64,
    duplicator: &mut dyn Duplicator<PresentedStructure>,
) -> Result<PlayoutReport, EfError> {
    let mut report = PlayoutReport::default();
    let mut seeds = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..count {
        let mut spoiler = RandomSpoiler::new(seeds.gen());
        let t: Transcript<u64> = play(game, n, &mut spoiler, duplicator)?;
        report.lines += 1;
        if t.winner == Player::Spoiler {
            report.losses += 1;
            report.first_loss.get_or_insert(t.moves);
        }
    }
    Ok(report)
}

/// Spoiler moves considered by the restricted search: everything within
/// `2^n` of an anchor or pebble, plus one deep element per chain.
fn arena(game: &Game<PresentedStructure>, pairs: &[(u64, u64)], side: Side, n: usize) -> BTreeSet<u64> {
    let s = game.structure(side);
    let t = threshold(n);
    let pts: Vec<u64> = points(game, pairs, side).into_iter().map(|p| p.0).collect();
    let mut out = BTreeSet::new();
    for &c in &pts {
        let (part, p) = s.point(c);
        for d in -t..=t {
            if let Some(q) = shift(p, d) {
                out.insert(s.code_of(part, q));
            }
        }
    }
    for (part, &kind) in s.parts().iter().enumerate() {
        out.insert(far_element(s, part, pts.iter().copied(), 2 * t));
        if let SuccKind::Nonstandard(k) = kind {
            for chain in 0..k {
                let far = pts
                    .iter()
                    .filter_map(|&c| match s.point(c) {
                        (p, Point::Chain { chain: ch, pos }) if p == part && ch == chain => Some(pos.unsigned_abs() as i128),
                        _ => None,
                    })
                    .max()
                    .map(|m| m + 2 * t + 1)
                    .unwrap_or(0);
                out.insert(s.code_of(part, Point::Chain { chain, pos: far as i64 }));
            }
        }
    }
    out
}

/// Every spoiler line over the restricted arena, against one duplicator.
pub fn restricted_exhaustive(
    game: &Game<PresentedStructure>,
    n: usize,
    duplicator: &mut dyn Duplicator<PresentedStructure>,
) -> Result<PlayoutReport, EfError> {
    let mut report = PlayoutReport::default();
    let mut pairs = Vec::new();
    let mut moves = Vec::new();
    if !game.is_partial_iso(&pairs) {
        report.losses = 1;
        report.first_loss = Some(moves);
        return Ok(report);
    }
    explore(game, n, 1, &mut pairs, &mut moves, duplicator, &mut report)?;
    Ok(report)
}

fn explore(
    game: &Game<PresentedStructure>,
    n: usize,
    round: usize,
    pairs: &mut Vec<(u64, u64)>,
    moves: &mut Vec<Move<u64>>,
    duplicator: &mut dyn Duplicator<PresentedStructure>,
    report: &mut PlayoutReport,
) -> Result<(), EfError> {
    if round > n {
        report.lines += 1;
        return Ok(());
    }
    for side in [Side::A, Side::B] {
        for e in arena(game, pairs, side, n) {
            let pos = Position { pairs, round, remaining: n - round + 1 };
            let reply = duplicator.respond(game, &pos, side, e)?;
            pairs.push(if side == Side::A { (e, reply) } else { (reply, e) });
            moves.push(Move { round, player: Player::Spoiler, side, element: e });
            moves.push(Move { round, player: Player::Duplicator, side: side.other(), element: reply });
            if game.is_partial_iso(pairs) {
                explore(game, n, round + 1, pairs, moves, duplicator, report)?;
            } else {
                report.lines += 1;
                report.losses += 1;
                report.first_loss.get_or_insert_with(|| moves.clone());
            }
            moves.truncate(moves.len() - 2);
            pairs.pop();
        }
    }
    Ok(())
}
