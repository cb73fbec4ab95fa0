//! Ehrenfeucht–Fraïssé games: an exact solver for finite structures, the
//! distance strategy and the ω-game spoiler on presented successor
//! structures, and a play loop with transcripts and interactive sides.

mod play;
mod solver;
mod strategies;

use std::fmt::Debug;
use std::hash::Hash;

use thiserror::Error;

use crate::formula::Vocabulary;
use crate::structures::{FiniteStructure, Point, PresentedStructure};

pub use play::{
    play, Duplicator, Interactive, Move, Position, ScriptedDuplicator, ScriptedSpoiler, Spoiler, Transcript,
    TranscriptMove,
};
pub use solver::{solve_game, verify_certificate, Certificate, GameResult, Solver, SolverDuplicator, SolverSpoiler};
pub use strategies::{
    random_playouts, restricted_exhaustive, DistanceDuplicator, OmegaSpoiler, PlayoutReport, RandomDuplicator,
    RandomSpoiler,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EfError {
    #[error("vocabulary mismatch: {0}")]
    VocabMismatch(String),
    #[error("unsupported vocabulary: {0}")]
    Unsupported(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("at most one side may be interactive")]
    TwoInteractive,
    #[error("interactive input ended")]
    InputClosed,
    #[error("I/O: {0}")]
    Io(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", if *self == Side::A { "A" } else { "B" })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    Spoiler,
    Duplicator,
}

impl std::fmt::Display for Player {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", if *self == Player::Spoiler { "spoiler" } else { "duplicator" })
    }
}

/// What the game needs from a structure. Symbol indices follow the
/// structure's own vocabulary order per kind.
pub trait GameStructure {
    type Elem: Copy + Eq + Hash + Ord + Debug;

    fn vocab(&self) -> &Vocabulary;
    fn constant_elems(&self) -> Vec<Self::Elem>;
    fn rel_holds(&self, rel: usize, args: &[Self::Elem]) -> bool;
    fn fun_apply(&self, fun: usize, args: &[Self::Elem]) -> Self::Elem;
    fn render(&self, e: Self::Elem) -> String;
    fn parse_elem(&self, s: &str) -> Option<Self::Elem>;
}

impl GameStructure for FiniteStructure {
    type Elem = usize;

    fn vocab(&self) -> &Vocabulary {
        FiniteStructure::vocab(self)
    }
    fn constant_elems(&self) -> Vec<usize> {
        self.const_values().to_vec()
    }
    fn rel_holds(&self, rel: usize, args: &[usize]) -> bool {
        self.holds(rel, args)
    }
    fn fun_apply(&self, fun: usize, args: &[usize]) -> usize {
        self.apply(fun, args)
    }
    fn render(&self, e: usize) -> String {
        self.name(e).to_string()
    }
    fn parse_elem(&self, s: &str) -> Option<usize> {
        self.element(s)
    }
}

impl GameStructure for PresentedStructure {
    type Elem = u64;

    fn vocab(&self) -> &Vocabulary {
        PresentedStructure::vocab(self)
    }
    fn constant_elems(&self) -> Vec<u64> {
        self.vocab().constants().map(|c| self.constant(&c.name).expect("own constant")).collect()
    }
    fn rel_holds(&self, rel: usize, args: &[u64]) -> bool {
        let name = &self.vocab().relations().nth(rel).expect("relation index").name;
        self.holds(name, args[0]).expect("own relation")
    }
    fn fun_apply(&self, fun: usize, args: &[u64]) -> u64 {
        let name = &self.vocab().functions().nth(fun).expect("function index").name;
        self.apply(name, args[0]).expect("own function")
    }
    fn render(&self, e: u64) -> String {
        self.describe(e)
    }
    /// Accepts a raw code or the rendered form (`7`, `z0[-3]`, `R:z0[+2]`).
    fn parse_elem(&self, s: &str) -> Option<u64> {
        let s = s.trim();
        let (part, rest) = if self.is_sum() {
            match s.split_once(':') {
                Some(("L", r)) => (0, r),
                Some(("R", r)) => (1, r),
                Some(_) => return None,
                None => return s.parse().ok(),
            }
        } else {
            if let Ok(code) = s.parse() {
                return Some(code);
            }
            (0, s)
        };
        let point = if let Ok(n) = rest.parse::<u64>() {
            Point::Std(n)
        } else {
            let inner = rest.strip_prefix('z')?;
            let (chain, pos) = inner.split_once('[')?;
            let pos = pos.strip_suffix(']')?;
            Point::Chain { chain: chain.parse().ok()?, pos: pos.parse().ok()? }
        };
        match (self.parts()[part], point) {
            (crate::structures::SuccKind::Nonstandard(k), Point::Chain { chain, .. }) if chain >= k => None,
            (crate::structures::SuccKind::Standard, Point::Chain { .. }) => None,
            _ => Some(self.code_of(part, point)),
        }
    }
}

/// Two structures over the same vocabulary, with B's symbol indices
/// aligned to A's.
pub struct Game<'a, G: GameStructure> {
    pub a: &'a G,
    pub b: &'a G,
    rel_map: Vec<usize>,
    fun_map: Vec<usize>,
    rel_arity: Vec<usize>,
    fun_arity: Vec<usize>,
    consts_a: Vec<G::Elem>,
    consts_b: Vec<G::Elem>,
}

impl<'a, G: GameStructure> Game<'a, G> {
    pub fn new(a: &'a G, b: &'a G) -> Result<Self, EfError> {
        let (va, vb) = (a.vocab(), b.vocab());
        if va.len() != vb.len() || !va.is_subset_of(vb) {
            return Err(EfError::VocabMismatch(format!("{va} vs {vb}")));
        }
        let index_in_b = |name: &str| vb.kind_index(name).expect("same symbols").1;
        let rel_map = va.relations().map(|r| index_in_b(&r.name)).collect();
        let fun_map = va.functions().map(|f| index_in_b(&f.name)).collect();
        let rel_arity = va.relations().map(|r| r.arity).collect();
        let fun_arity = va.functions().map(|f| f.arity).collect();
        let consts_a = a.constant_elems();
        let all_b = b.constant_elems();
        let consts_b = va.constants().map(|c| all_b[index_in_b(&c.name)]).collect();
        Ok(Game { a, b, rel_map, fun_map, rel_arity, fun_arity, consts_a, consts_b })
    }

    pub fn structure(&self, side: Side) -> &'a G {
        match side {
            Side::A => self.a,
            Side::B => self.b,
        }
    }

    /// Whether pebbles plus constants form a partial isomorphism: equality,
    /// relation atoms and function graphs (`f(x̄) = y`) over those points
    /// agree on both sides.
    pub fn is_partial_iso(&self, pairs: &[(G::Elem, G::Elem)]) -> bool {
        let mut xs: Vec<G::Elem> = self.consts_a.clone();
        let mut ys: Vec<G::Elem> = self.consts_b.clone();
        xs.extend(pairs.iter().map(|p| p.0));
        ys.extend(pairs.iter().map(|p| p.1));
        let k = xs.len();
        for i in 0..k {
            for j in i + 1..k {
                if (xs[i] == xs[j]) != (ys[i] == ys[j]) {
                    return false;
                }
            }
        }
        let mut args_a = Vec::new();
        let mut args_b = Vec::new();
        for (r, &arity) in self.rel_arity.iter().enumerate() {
            if !for_tuples(k, arity, |t| {
                args_a.clear();
                args_b.clear();
                args_a.extend(t.iter().map(|&i| xs[i]));
                args_b.extend(t.iter().map(|&i| ys[i]));
                self.a.rel_holds(r, &args_a) == self.b.rel_holds(self.rel_map[r], &args_b)
            }) {
                return false;
            }
        }
        for (f, &arity) in self.fun_arity.iter().enumerate() {
            if !for_tuples(k, arity, |t| {
                args_a.clear();
                args_b.clear();
                args_a.extend(t.iter().map(|&i| xs[i]));
                args_b.extend(t.iter().map(|&i| ys[i]));
                let va = self.a.fun_apply(f, &args_a);
                let vb = self.b.fun_apply(self.fun_map[f], &args_b);
                (0..k).all(|j| (va == xs[j]) == (vb == ys[j]))
            }) {
                return false;
            }
        }
        true
    }
}

/// Calls `f` on every tuple over `0..k` of the given arity; stops at the
/// first `false`.
fn for_tuples(k: usize, arity: usize, mut f: impl FnMut(&[usize]) -> bool) -> bool {
    if k == 0 && arity > 0 {
        return true;
    }
    let mut t = vec![0; arity];
    loop {
        if !f(&t) {
            return false;
        }
        let mut i = arity;
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            t[i] += 1;
            if t[i] < k {
                break;
            }
            t[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::linear_order;

    #[test]
    fn partial_iso_on_orders() {
        let (l2, l3) = (linear_order(2, "<"), linear_order(3, "<"));
        let g = Game::new(&l2, &l3).unwrap();
        assert!(g.is_partial_iso(&[(0, 0), (1, 2)]));
        assert!(!g.is_partial_iso(&[(0, 2), (1, 0)]));
        assert!(!g.is_partial_iso(&[(0, 1), (1, 1)]));
    }

    #[test]
    fn successor_graph_atoms() {
        let p = PresentedStructure::standard();
        let q = PresentedStructure::nonstandard(1).unwrap();
        let g = Game::new(&p, &q).unwrap();
        // 0 ↦ 0, 1 ↦ 2 (standard 1 in the nonstandard layout)
        assert!(g.is_partial_iso(&[(1, 2)]));
        // 1 ↦ chain element: S(0)=1 fails on the right
        assert!(!g.is_partial_iso(&[(1, 1)]));
        assert_eq!(q.parse_elem("z0[-1]"), Some(q.code_of(0, Point::Chain { chain: 0, pos: -1 })));
        assert_eq!(q.render(q.parse_elem("z0[+4]").unwrap()), "z0[+4]");
    }

    #[test]
    fn vocabularies_must_agree() {
        let p = PresentedStructure::standard();
        let m = PresentedStructure::sum(crate::structures::SuccKind::Standard, crate::structures::SuccKind::Standard);
        assert!(matches!(Game::new(&p, &m), Err(EfError::VocabMismatch(_))));
    }
}
