use std::io::{BufRead, Write};

use serde::Serialize;

use super::{EfError, Game, GameStructure, Player, Side};

/// State shown to a strategy before it moves.
#[derive(Clone, Copy, Debug)]
pub struct Position<'p, E> {
    pub pairs: &'p [(E, E)],
    /// 1-based number of the round being played.
    pub round: usize,
    /// Rounds left, this one included.
    pub remaining: usize,
}

pub trait Spoiler<G: GameStructure> {
    fn choose(&mut self, game: &Game<G>, pos: &Position<G::Elem>) -> Result<(Side, G::Elem), EfError>;
    fn is_interactive(&self) -> bool {
        false
    }
}

pub trait Duplicator<G: GameStructure> {
    /// Answer in the structure opposite to `side`.
    fn respond(&mut self, game: &Game<G>, pos: &Position<G::Elem>, side: Side, e: G::Elem) -> Result<G::Elem, EfError>;
    fn is_interactive(&self) -> bool {
        false
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Move<E> {
    pub round: usize,
    pub player: Player,
    pub side: Side,
    pub element: E,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript<E> {
    pub rounds: usize,
    pub moves: Vec<Move<E>>,
    pub final_map: Vec<(E, E)>,
    pub winner: Player,
    /// Round after which the map stopped being a partial isomorphism.
    pub decided_at: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TranscriptMove {
    pub round: usize,
    pub side: Player,
    pub structure: Side,
    pub element: String,
}

#[derive(Serialize)]
struct TranscriptJson {
    rounds: usize,
    moves: Vec<TranscriptMove>,
    final_map: Vec<(String, String)>,
    winner: Player,
    #[serde(skip_serializing_if = "Option::is_none")]
    decided_at: Option<usize>,
}

impl<E: Copy> Transcript<E> {
    pub fn rendered_moves<G: GameStructure<Elem = E>>(&self, game: &Game<G>) -> Vec<TranscriptMove> {
        self.moves
            .iter()
            .map(|m| TranscriptMove {
                round: m.round,
                side: m.player,
                structure: m.side,
                element: game.structure(m.side).render(m.element),
            })
            .collect()
    }

    pub fn to_json<G: GameStructure<Elem = E>>(&self, game: &Game<G>) -> serde_json::Value {
        let t = TranscriptJson {
            rounds: self.rounds,
            moves: self.rendered_moves(game),
            final_map: self.final_map.iter().map(|&(a, b)| (game.a.render(a), game.b.render(b))).collect(),
            winner: self.winner,
            decided_at: self.decided_at,
        };
        serde_json::to_value(t).expect("serializable")
    }

    pub fn to_text<G: GameStructure<Elem = E>>(&self, game: &Game<G>) -> String {
        let mut out = String::new();
        for m in self.rendered_moves(game) {
            out.push_str(&format!("round {} {} {} {}\n", m.round, m.side, m.structure, m.element));
        }
        let map: Vec<String> =
            self.final_map.iter().map(|&(a, b)| format!("{}->{}", game.a.render(a), game.b.render(b))).collect();
        out.push_str(&format!("map {{{}}}\nwinner {}\n", map.join(", "), self.winner));
        out
    }
}

/// Plays `rounds` rounds. Play stops early once the map fails to be a
/// partial isomorphism; the spoiler has then won.
pub fn play<G: GameStructure>(
    game: &Game<G>,
    rounds: usize,
    spoiler: &mut dyn Spoiler<G>,
    duplicator: &mut dyn Duplicator<G>,
) -> Result<Transcript<G::Elem>, EfError> {
    if spoiler.is_interactive() && duplicator.is_interactive() {
        return Err(EfError::TwoInteractive);
    }
    let mut pairs: Vec<(G::Elem, G::Elem)> = Vec::new();
    let mut moves = Vec::new();
    if !game.is_partial_iso(&pairs) {
        return Ok(Transcript { rounds, moves, final_map: pairs, winner: Player::Spoiler, decided_at: Some(0) });
    }
    for round in 1..=rounds {
        let pos = Position { pairs: &pairs, round, remaining: rounds - round + 1 };
        let (side, e) = spoiler.choose(game, &pos)?;
        moves.push(Move { round, player: Player::Spoiler, side, element: e });
        let reply = duplicator.respond(game, &pos, side, e)?;
        moves.push(Move { round, player: Player::Duplicator, side: side.other(), element: reply });
        pairs.push(if side == Side::A { (e, reply) } else { (reply, e) });
        if !game.is_partial_iso(&pairs) {
            return Ok(Transcript { rounds, moves, final_map: pairs, winner: Player::Spoiler, decided_at: Some(round) });
        }
    }
    Ok(Transcript { rounds, moves, final_map: pairs, winner: Player::Duplicator, decided_at: None })
}

/// Fixed spoiler moves, in order.
pub struct ScriptedSpoiler<E> {
    moves: Vec<(Side, E)>,
    next: usize,
}

impl<E> ScriptedSpoiler<E> {
    pub fn new(moves: Vec<(Side, E)>) -> Self {
        ScriptedSpoiler { moves, next: 0 }
    }
}

impl<G: GameStructure> Spoiler<G> for ScriptedSpoiler<G::Elem> {
    fn choose(&mut self, _game: &Game<G>, _pos: &Position<G::Elem>) -> Result<(Side, G::Elem), EfError> {
        let m = *self.moves.get(self.next).ok_or_else(|| EfError::Precondition("script exhausted".into()))?;
        self.next += 1;
        Ok(m)
    }
}

/// Duplicator given by a closure.
pub struct ScriptedDuplicator<F>(pub F);

impl<G, F> Duplicator<G> for ScriptedDuplicator<F>
where
    G: GameStructure,
    F: FnMut(&Position<G::Elem>, Side, G::Elem) -> G::Elem,
{
    fn respond(&mut self, _game: &Game<G>, pos: &Position<G::Elem>, side: Side, e: G::Elem) -> Result<G::Elem, EfError> {
        Ok((self.0)(pos, side, e))
    }
}

/// A human side over a line protocol: each move is `move <A|B> <element>`.
/// Illegal lines are logged and re-prompted.
pub struct Interactive<R, W> {
    input: R,
    output: W,
    pub log: Vec<String>,
}

impl<R: BufRead, W: Write> Interactive<R, W> {
    pub fn new(input: R, output: W) -> Self {
        Interactive { input, output, log: Vec::new() }
    }

    fn ask<G: GameStructure>(
        &mut self,
        game: &Game<G>,
        prompt: &str,
        forced: Option<Side>,
    ) -> Result<(Side, G::Elem), EfError> {
        let io = |e: std::io::Error| EfError::Io(e.to_string());
        loop {
            write!(self.output, "{prompt}> ").map_err(io)?;
            self.output.flush().map_err(io)?;
            let mut line = String::new();
            if self.input.read_line(&mut line).map_err(io)? == 0 {
                return Err(EfError::InputClosed);
            }
            match parse_move(game, line.trim(), forced) {
                Ok(m) => return Ok(m),
                Err(reason) => {
                    let entry = format!("illegal move '{}': {reason}", line.trim());
                    writeln!(self.output, "{entry}").map_err(io)?;
                    self.log.push(entry);
                }
            }
        }
    }
}

fn parse_move<G: GameStructure>(game: &Game<G>, line: &str, forced: Option<Side>) -> Result<(Side, G::Elem), String> {
    let mut parts = line.split_whitespace();
    if parts.next() != Some("move") {
        return Err("expected 'move <A|B> <element>'".into());
    }
    let side = match parts.next() {
        Some("A") => Side::A,
        Some("B") => Side::B,
        _ => return Err("structure must be A or B".into()),
    };
    let elem = parts.next().ok_or("missing element")?;
    if parts.next().is_some() {
        return Err("trailing input".into());
    }
    if let Some(f) = forced {
        if f != side {
            return Err(format!("this reply must be played in {f}"));
        }
    }
    let e = game.structure(side).parse_elem(elem).ok_or_else(|| format!("'{elem}' is not an element of {side}"))?;
    Ok((side, e))
}

impl<G: GameStructure, R: BufRead, W: Write> Spoiler<G> for Interactive<R, W> {
    fn choose(&mut self, game: &Game<G>, pos: &Position<G::Elem>) -> Result<(Side, G::Elem), EfError> {
        self.ask(game, &format!("round {} spoiler", pos.round), None)
    }
    fn is_interactive(&self) -> bool {
        true
    }
}

impl<G: GameStructure, R: BufRead, W: Write> Duplicator<G> for Interactive<R, W> {
    fn respond(&mut self, game: &Game<G>, pos: &Position<G::Elem>, side: Side, e: G::Elem) -> Result<G::Elem, EfError> {
        let prompt = format!("round {} spoiler played {} {}; duplicator", pos.round, side, game.structure(side).render(e));
        Ok(self.ask(game, &prompt, Some(side.other()))?.1)
    }
    fn is_interactive(&self) -> bool {
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::linear_order;

    #[test]
    fn scripted_play_is_deterministic() {
        let (l2, l3) = (linear_order(2, "<"), linear_order(3, "<"));
        let g = Game::new(&l2, &l3).unwrap();
        let run = || {
            let mut s = ScriptedSpoiler::new(vec![(Side::B, 1), (Side::B, 2)]);
            let mut d = ScriptedDuplicator(|_: &Position<usize>, _: Side, e: usize| e.min(1));
            play(&g, 2, &mut s, &mut d).unwrap()
        };
        let t = run();
        assert_eq!(t, run());
        assert_eq!(t.winner, Player::Spoiler);
        assert_eq!(t.decided_at, Some(2));
    }

    #[test]
    fn interactive_spoiler_reprompts() {
        let (l2, l3) = (linear_order(2, "<"), linear_order(3, "<"));
        let g = Game::new(&l2, &l3).unwrap();
        let input = b"move C 1\nmove A 7\nmove A 0\nmove B 2\n".as_slice();
        let mut out = Vec::new();
        let mut human = Interactive::new(input, &mut out);
        let mut d = ScriptedDuplicator(|_: &Position<usize>, side: Side, e: usize| if side == Side::A { e } else { e.min(1) });
        let t = play(&g, 2, &mut human, &mut d).unwrap();
        assert_eq!(t.moves.len(), 4);
        assert_eq!(human.log.len(), 2);
        assert_eq!(t.winner, Player::Duplicator);
    }

    #[test]
    fn closed_input() {
        let l2 = linear_order(2, "<");
        let g = Game::new(&l2, &l2).unwrap();
        let mut human = Interactive::new(b"".as_slice(), Vec::new());
        let mut d = ScriptedDuplicator(|_: &Position<usize>, _: Side, e: usize| e);
        assert_eq!(play(&g, 1, &mut human, &mut d), Err(EfError::InputClosed));
    }
}
