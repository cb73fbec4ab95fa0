use std::collections::{BTreeMap, HashMap};

use super::play::{play, Duplicator, Position, Spoiler, Transcript};
use super::{EfError, Game, Player, Side};
use crate::structures::FiniteStructure;

type Pairs = Vec<(usize, usize)>;

fn normalize(pairs: &[(usize, usize)]) -> Pairs {
    let mut p = pairs.to_vec();
    p.sort_unstable();
    p.dedup();
    p
}

/// Exact n-round EF solver for finite structures, memoized on the pebble
/// set and the number of rounds left.
pub struct Solver<'a> {
    game: Game<'a, FiniteStructure>,
    memo: HashMap<(Pairs, usize), bool>,
    iso: HashMap<Pairs, bool>,
}

impl<'a> Solver<'a> {
    pub fn new(a: &'a FiniteStructure, b: &'a FiniteStructure) -> Result<Self, EfError> {
        Ok(Solver { game: Game::new(a, b)?, memo: HashMap::new(), iso: HashMap::new() })
    }

    pub fn game(&self) -> &Game<'a, FiniteStructure> {
        &self.game
    }

    /// Distinct positions evaluated so far.
    pub fn positions(&self) -> usize {
        self.memo.len()
    }

    fn partial_iso(&mut self, key: &Pairs) -> bool {
        if let Some(&v) = self.iso.get(key) {
            return v;
        }
        let v = self.game.is_partial_iso(key);
        self.iso.insert(key.clone(), v);
        v
    }

    fn size(&self, side: Side) -> usize {
        self.game.structure(side).size()
    }

    fn extend(pairs: &[(usize, usize)], side: Side, x: usize, y: usize) -> Pairs {
        let mut p = pairs.to_vec();
        p.push(if side == Side::A { (x, y) } else { (y, x) });
        normalize(&p)
    }

    fn pebbled(pairs: &[(usize, usize)], side: Side, x: usize) -> bool {
        pairs.iter().any(|&(a, b)| if side == Side::A { a == x } else { b == x })
    }

    /// Whether the duplicator wins from `pairs` with `r` rounds left.
    pub fn duplicator_wins(&mut self, pairs: &[(usize, usize)], r: usize) -> bool {
        let key = normalize(pairs);
        if let Some(&v) = self.memo.get(&(key.clone(), r)) {
            return v;
        }
        let v = self.partial_iso(&key) && (r == 0 || self.spoiler_winning_move(&key, r).is_none());
        self.memo.insert((key, r), v);
        v
    }

    fn spoiler_winning_move(&mut self, key: &Pairs, r: usize) -> Option<(Side, usize)> {
        for side in [Side::A, Side::B] {
            for x in 0..self.size(side) {
                // Re-pebbling an element gives the duplicator a free copy.
                if Self::pebbled(key, side, x) {
                    continue;
                }
                if self.winning_response(key, r, side, x).is_none() {
                    return Some((side, x));
                }
            }
        }
        None
    }

    fn winning_response(&mut self, key: &Pairs, r: usize, side: Side, x: usize) -> Option<usize> {
        (0..self.size(side.other())).find(|&y| self.duplicator_wins(&Self::extend(key, side, x, y), r - 1))
    }

    /// A spoiler move that wins from this position, if one exists.
    pub fn best_spoiler_move(&mut self, pairs: &[(usize, usize)], r: usize) -> Option<(Side, usize)> {
        let key = normalize(pairs);
        if r == 0 || !self.partial_iso(&key) {
            return None;
        }
        self.spoiler_winning_move(&key, r)
    }

    /// A duplicator reply that keeps a winning position, if one exists.
    pub fn best_response(&mut self, pairs: &[(usize, usize)], r: usize, side: Side, x: usize) -> Option<usize> {
        let key = normalize(pairs);
        if let Some(&(a, b)) = key.iter().find(|&&(a, b)| if side == Side::A { a == x } else { b == x }) {
            let copy = if side == Side::A { b } else { a };
            if self.duplicator_wins(&key, r.saturating_sub(1)) {
                return Some(copy);
            }
        }
        if r == 0 {
            return None;
        }
        self.winning_response(&key, r, side, x)
    }
}

/// Winning strategy extracted from a solved game, keyed by normalized
/// position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// Spoiler move at each reachable position.
    Spoiler(BTreeMap<(Pairs, usize), (Side, usize)>),
    /// Duplicator reply for each reachable position and spoiler move.
    Duplicator(BTreeMap<(Pairs, usize, Side, usize), usize>),
}

impl Certificate {
    pub fn len(&self) -> usize {
        match self {
            Certificate::Spoiler(m) => m.len(),
            Certificate::Duplicator(m) => m.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn winner(&self) -> Player {
        match self {
            Certificate::Spoiler(_) => Player::Spoiler,
            Certificate::Duplicator(_) => Player::Duplicator,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GameResult {
    pub winner: Player,
    pub certificate: Certificate,
    /// Both sides playing the extracted optimal strategies.
    pub transcript: Transcript<usize>,
    pub positions: usize,
}

pub fn solve_game(a: &FiniteStructure, b: &FiniteStructure, n: usize) -> Result<GameResult, EfError> {
    let mut solver = Solver::new(a, b)?;
    let dup_wins = solver.duplicator_wins(&[], n);
    let certificate = if dup_wins {
        let mut m = BTreeMap::new();
        build_dup(&mut solver, Vec::new(), n, &mut m);
        Certificate::Duplicator(m)
    } else {
        let mut m = BTreeMap::new();
        build_spoiler(&mut solver, Vec::new(), n, &mut m);
        Certificate::Spoiler(m)
    };
    let positions = solver.positions();
    let game = Game::new(a, b)?;
    let mut s = SolverSpoiler::new(a, b)?;
    let mut d = SolverDuplicator::new(a, b)?;
    let transcript = play(&game, n, &mut s, &mut d)?;
    Ok(GameResult {
        winner: if dup_wins { Player::Duplicator } else { Player::Spoiler },
        certificate,
        transcript,
        positions,
    })
}

fn build_dup(solver: &mut Solver, key: Pairs, r: usize, out: &mut BTreeMap<(Pairs, usize, Side, usize), usize>) {
    if r == 0 {
        return;
    }
    for side in [Side::A, Side::B] {
        for x in 0..solver.size(side) {
            if out.contains_key(&(key.clone(), r, side, x)) {
                continue;
            }
            let y = solver.best_response(&key, r, side, x).expect("winning position has a winning reply");
            out.insert((key.clone(), r, side, x), y);
            build_dup(solver, Solver::extend(&key, side, x, y), r - 1, out);
        }
    }
}

fn build_spoiler(solver: &mut Solver, key: Pairs, r: usize, out: &mut BTreeMap<(Pairs, usize), (Side, usize)>) {
    if !solver.partial_iso(&key) || out.contains_key(&(key.clone(), r)) {
        return;
    }
    let (side, x) = solver.spoiler_winning_move(&key, r).expect("losing position for the duplicator");
    out.insert((key.clone(), r), (side, x));
    for y in 0..solver.size(side.other()) {
        build_spoiler(solver, Solver::extend(&key, side, x, y), r - 1, out);
    }
}

/// Replays a certificate against every opponent line, without the solver.
pub fn verify_certificate(a: &FiniteStructure, b: &FiniteStructure, n: usize, cert: &Certificate) -> Result<bool, EfError> {
    let game = Game::new(a, b)?;
    let size = |side: Side| game.structure(side).size();
    fn check_dup(
        game: &Game<FiniteStructure>,
        size: &dyn Fn(Side) -> usize,
        m: &BTreeMap<(Pairs, usize, Side, usize), usize>,
        key: Pairs,
        r: usize,
        seen: &mut std::collections::HashSet<(Pairs, usize)>,
    ) -> bool {
        if !game.is_partial_iso(&key) {
            return false;
        }
        if r == 0 || !seen.insert((key.clone(), r)) {
            return true;
        }
        for side in [Side::A, Side::B] {
            for x in 0..size(side) {
                let y = match m.get(&(key.clone(), r, side, x)) {
                    Some(&y) => y,
                    None if Solver::pebbled(&key, side, x) => {
                        *key.iter().find(|p| if side == Side::A { p.0 == x } else { p.1 == x }).map(|p| if side == Side::A { &p.1 } else { &p.0 }).unwrap()
                    }
                    None => return false,
                };
                if !check_dup(game, size, m, Solver::extend(&key, side, x, y), r - 1, seen) {
                    return false;
                }
            }
        }
        true
    }
    fn check_spoiler(
        game: &Game<FiniteStructure>,
        size: &dyn Fn(Side) -> usize,
        m: &BTreeMap<(Pairs, usize), (Side, usize)>,
        key: Pairs,
        r: usize,
        seen: &mut std::collections::HashSet<(Pairs, usize)>,
    ) -> bool {
        if !game.is_partial_iso(&key) {
            return true;
        }
        if r == 0 {
            return false;
        }
        if !seen.insert((key.clone(), r)) {
            return true;
        }
        let Some(&(side, x)) = m.get(&(key.clone(), r)) else { return false };
        (0..size(side.other())).all(|y| check_spoiler(game, size, m, Solver::extend(&key, side, x, y), r - 1, seen))
    }
    let mut seen = std::collections::HashSet::new();
    Ok(match cert {
        Certificate::Duplicator(m) => check_dup(&game, &size, m, Vec::new(), n, &mut seen),
        Certificate::Spoiler(m) => check_spoiler(&game, &size, m, Vec::new(), n, &mut seen),
    })
}

/// Plays a winning spoiler move whenever one exists.
pub struct SolverSpoiler<'a> {
    solver: Solver<'a>,
}

impl<'a> SolverSpoiler<'a> {
    pub fn new(a: &'a FiniteStructure, b: &'a FiniteStructure) -> Result<Self, EfError> {
        Ok(SolverSpoiler { solver: Solver::new(a, b)? })
    }
}

impl Spoiler<FiniteStructure> for SolverSpoiler<'_> {
    fn choose(&mut self, _game: &Game<FiniteStructure>, pos: &Position<usize>) -> Result<(Side, usize), EfError> {
        Ok(self.solver.best_spoiler_move(pos.pairs, pos.remaining).unwrap_or((Side::A, 0)))
    }
}

/// Plays a reply that keeps a winning position whenever one exists.
pub struct SolverDuplicator<'a> {
    solver: Solver<'a>,
}

impl<'a> SolverDuplicator<'a> {
    pub fn new(a: &'a FiniteStructure, b: &'a FiniteStructure) -> Result<Self, EfError> {
        Ok(SolverDuplicator { solver: Solver::new(a, b)? })
    }
}

impl Duplicator<FiniteStructure> for SolverDuplicator<'_> {
    fn respond(&mut self, _game: &Game<FiniteStructure>, pos: &Position<usize>, side: Side, x: usize) -> Result<usize, EfError> {
        Ok(self.solver.best_response(pos.pairs, pos.remaining, side, x).unwrap_or(0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::linear_order;

    #[test]
    fn l2_vs_l3() {
        let (l2, l3) = (linear_order(2, "<"), linear_order(3, "<"));
        let one = solve_game(&l2, &l3, 1).unwrap();
        assert_eq!(one.winner, Player::Duplicator);
        assert!(verify_certificate(&l2, &l3, 1, &one.certificate).unwrap());
        let two = solve_game(&l2, &l3, 2).unwrap();
        assert_eq!(two.winner, Player::Spoiler);
        assert_eq!(two.transcript.winner, Player::Spoiler);
        assert!(verify_certificate(&l2, &l3, 2, &two.certificate).unwrap());
        // a spoiler certificate is not a duplicator win at a shorter length
        assert!(!verify_certificate(&l2, &l3, 1, &two.certificate).unwrap());
    }

    #[test]
    fn identical_structures() {
        let l4 = linear_order(4, "<");
        for n in 0..=5 {
            let r = solve_game(&l4, &l4, n).unwrap();
            assert_eq!(r.winner, Player::Duplicator);
            assert!(verify_certificate(&l4, &l4, n, &r.certificate).unwrap());
        }
    }

    #[test]
    fn tampered_certificate_fails() {
        let (l2, l3) = (linear_order(2, "<"), linear_order(3, "<"));
        let r = solve_game(&l2, &l3, 1).unwrap();
        let Certificate::Duplicator(mut m) = r.certificate else { panic!() };
        let k = m.keys().next().unwrap().clone();
        m.remove(&k);
        assert!(!verify_certificate(&l2, &l3, 1, &Certificate::Duplicator(m)).unwrap());
    }
}
