//! Pairing and sequence codes, the coded partial isomorphism ψ(x, u, v) and
//! its witnesses, and the clause check for the induced map F.

use std::collections::HashMap;

use dashu_int::ops::{BitTest, SquareRoot};
use dashu_int::{UBig, Word};
use serde::Serialize;

use crate::structures::{Fuel, Presentation, StructureError};
use crate::DEFAULT_STEP_BUDGET;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodingError {
    #[error(transparent)]
    Presentation(#[from] StructureError),
    #[error("{0} is not in the carrier of {1}")]
    NotInCarrier(u64, String),
    #[error("step budget of {0} exhausted")]
    Budget(u64),
}

/// Cantor pairing `(a+b)(a+b+1)/2 + b`.
pub fn pair(a: &UBig, b: &UBig) -> UBig {
    let s = a + b;
    ((&s * (&s + UBig::ONE)) >> 1) + b
}

pub fn unpair(n: &UBig) -> (UBig, UBig) {
    let w = (((n << 3) + UBig::ONE).sqrt() - UBig::ONE) >> 1;
    let t = (&w * (&w + UBig::ONE)) >> 1;
    let b = n - t;
    let a = w - &b;
    (a, b)
}

/// `⟨⟩ = 0`, `s⌢a = pair(code(s), a) + 1`.
pub fn encode_seq(s: &[UBig]) -> UBig {
    s.iter().fold(UBig::ZERO, |acc, a| pair(&acc, a) + UBig::ONE)
}

pub fn decode_seq(n: &UBig) -> Vec<UBig> {
    let mut out = Vec::new();
    let mut n = n.clone();
    while n != UBig::ZERO {
        let (rest, a) = unpair(&(n - UBig::ONE));
        out.push(a);
        n = rest;
    }
    out.reverse();
    out
}

/// Sequence codec. `Iterated` is [`encode_seq`]; its codes square in size
/// with each entry. `Digits` is `pair(pair(len, w), body)` with entry `i`
/// in bits `[w·i, w·(i+1))` of `body`, linear in size.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum SeqCodec {
    Iterated,
    #[default]
    Digits,
}

pub const MAX_DECODE_LEN: usize = 1 << 20;

/// Cantor pairing plus a sequence codec.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Coder {
    pub seq: SeqCodec,
}

impl Coder {
    pub fn iterated() -> Self {
        Coder { seq: SeqCodec::Iterated }
    }

    pub fn digits() -> Self {
        Coder { seq: SeqCodec::Digits }
    }

    pub fn encode(&self, s: &[UBig]) -> UBig {
        match self.seq {
            SeqCodec::Iterated => encode_seq(s),
            SeqCodec::Digits => {
                let w = s.iter().map(|a| a.bit_len()).max().unwrap_or(0);
                let mut words: Vec<Word> = vec![0; (s.len() * w).div_ceil(WORD_BITS)];
                for (i, a) in s.iter().enumerate() {
                    write_bits(&mut words, i * w, a.as_words());
                }
                pair(&pair(&UBig::from(s.len()), &UBig::from(w)), &UBig::from_words(&words))
            }
        }
    }

    /// Total: every natural number decodes to some sequence.
    pub fn decode(&self, n: &UBig) -> Vec<UBig> {
        match self.seq {
            SeqCodec::Iterated => decode_seq(n),
            SeqCodec::Digits => {
                let (header, body) = unpair(n);
                let (len, w) = unpair(&header);
                let (Ok(len), Ok(w)) = (usize::try_from(&len), usize::try_from(&w)) else {
                    return Vec::new();
                };
                // longer lists are read as empty
                if len > MAX_DECODE_LEN {
                    return Vec::new();
                }
                if w == 0 {
                    return vec![UBig::ZERO; len];
                }
                let words = body.as_words();
                (0..len).map(|i| UBig::from_words(&read_bits(words, i * w, w))).collect()
            }
        }
    }

    pub fn encode_u64(&self, s: &[u64]) -> UBig {
        self.encode(&s.iter().map(|&a| UBig::from(a)).collect::<Vec<_>>())
    }
}

const WORD_BITS: usize = Word::BITS as usize;

/// ORs `src` into `dst` starting at bit `pos`.
fn write_bits(dst: &mut [Word], pos: usize, src: &[Word]) {
    let (q, r) = (pos / WORD_BITS, pos % WORD_BITS);
    for (k, &x) in src.iter().enumerate() {
        dst[q + k] |= x << r;
        if r > 0 && x >> (WORD_BITS - r) != 0 {
            dst[q + k + 1] |= x >> (WORD_BITS - r);
        }
    }
}

/// Bits `[pos, pos + w)` of `src`, zero past its end.
fn read_bits(src: &[Word], pos: usize, w: usize) -> Vec<Word> {
    // nothing past the end of `src` is set
    let w = w.min((src.len() * WORD_BITS).saturating_sub(pos));
    if w == 0 {
        return Vec::new();
    }
    let at = |i: usize| src.get(i).copied().unwrap_or(0);
    let (q, r) = (pos / WORD_BITS, pos % WORD_BITS);
    let n = w.div_ceil(WORD_BITS);
    let mut out: Vec<Word> = (0..n)
        .map(|k| if r == 0 { at(q + k) } else { at(q + k) >> r | at(q + k + 1) << (WORD_BITS - r) })
        .collect();
    if !w.is_multiple_of(WORD_BITS) {
        out[n - 1] &= (1 << (w % WORD_BITS)) - 1;
    }
    out
}

fn op_fuel() -> Fuel {
    Fuel::new(DEFAULT_STEP_BUDGET)
}

/// One step along the segment: `z + 1` when the presentation has
/// arithmetic, the successor otherwise.
fn step(p: &dyn Presentation, z: u64) -> Result<u64, CodingError> {
    if p.has_arithmetic() {
        let one = p.one(&mut op_fuel())?;
        Ok(p.add(z, one, &mut op_fuel())?)
    } else {
        Ok(p.succ(z, &mut op_fuel())?)
    }
}

/// A decoded witness: `f(domain[i]) = image[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodedIso {
    pub x: String,
    pub u: u64,
    pub v: u64,
    pub domain: Vec<u64>,
    pub image: Vec<u64>,
}

impl CodedIso {
    /// Reads `x` as the list `a₀, b₀, a₁, b₁, …`. `None` when the list has
    /// odd length or an entry beyond `u64`.
    pub fn decode(coder: &Coder, x: &UBig) -> Option<(Vec<u64>, Vec<u64>)> {
        let s = coder.decode(x);
        if s.len() % 2 == 1 {
            return None;
        }
        let mut domain = Vec::with_capacity(s.len() / 2);
        let mut image = Vec::with_capacity(s.len() / 2);
        for c in s.chunks(2) {
            domain.push(u64::try_from(&c[0]).ok()?);
            image.push(u64::try_from(&c[1]).ok()?);
        }
        Some((domain, image))
    }

    pub fn read(coder: &Coder, x: &UBig, u: u64, v: u64) -> Option<CodedIso> {
        let (domain, image) = Self::decode(coder, x)?;
        Some(CodedIso { x: x.to_string(), u, v, domain, image })
    }
}

/// ψ on an already decoded list.
pub fn psi_pairs(domain: &[u64], image: &[u64], u: u64, v: u64, p1: &dyn Presentation, p2: &dyn Presentation) -> Result<bool, CodingError> {
    if domain.is_empty() || domain.len() != image.len() {
        return Ok(false);
    }
    if domain[0] != p1.base(&mut op_fuel())? || image[0] != p2.base(&mut op_fuel())? {
        return Ok(false);
    }
    for i in 0..domain.len() {
        if !p1.contains(domain[i]) || !p2.contains(image[i]) {
            return Ok(false);
        }
        // the segment ends at the first occurrence of u
        if domain[i] == u && i + 1 != domain.len() {
            return Ok(false);
        }
        if i > 0 && (domain[i] != step(p1, domain[i - 1])? || image[i] != step(p2, image[i - 1])?) {
            return Ok(false);
        }
    }
    Ok(*domain.last().unwrap() == u && *image.last().unwrap() == v)
}

/// ψ(x, u, v): `x` codes `f: I₁ → I₂` on initial segments ending at `u`
/// and `v` with `f(0₁) = 0₂` and `f(z +₁ 1₁) = f(z) +₂ 1₂`.
pub fn psi_check(coder: &Coder, x: &UBig, u: u64, v: u64, p1: &dyn Presentation, p2: &dyn Presentation) -> Result<bool, CodingError> {
    match CodedIso::decode(coder, x) {
        Some((d, i)) => psi_pairs(&d, &i, u, v, p1, p2),
        None => Ok(false),
    }
}

/// The value `v` with φ(u, v) and a witness `x`, by walking both segments
/// in step. `budget` bounds the number of steps.
pub fn phi_witness(
    coder: &Coder,
    u: u64,
    p1: &dyn Presentation,
    p2: &dyn Presentation,
    budget: u64,
) -> Result<(u64, UBig), CodingError> {
    if !p1.contains(u) {
        return Err(CodingError::NotInCarrier(u, p1.id()));
    }
    let (domain, image) = walk(u, p1, p2, budget)?;
    let v = *image.last().unwrap();
    let flat: Vec<u64> = domain.iter().zip(&image).flat_map(|(&a, &b)| [a, b]).collect();
    Ok((v, coder.encode_u64(&flat)))
}

fn walk(u: u64, p1: &dyn Presentation, p2: &dyn Presentation, budget: u64) -> Result<(Vec<u64>, Vec<u64>), CodingError> {
    let mut a = p1.base(&mut op_fuel())?;
    let mut b = p2.base(&mut op_fuel())?;
    let mut domain = vec![a];
    let mut image = vec![b];
    let mut steps = 0u64;
    while a != u {
        steps += 1;
        if steps > budget {
            return Err(CodingError::Budget(budget));
        }
        a = step(p1, a)?;
        b = step(p2, b)?;
        domain.push(a);
        image.push(b);
    }
    Ok((domain, image))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UniquenessReport {
    pub u_max: u64,
    pub entry_bound: u64,
    pub length_bound: usize,
    pub lists_checked: u64,
    /// `(u, v, v′)` with a witness for `v′ ≠ v`.
    pub violations: Vec<(u64, u64, u64)>,
}

/// For each `u` in the first `u_max + 1` elements of `p1`, searches every
/// decoded witness list with entries `≤ entry_bound` and at most
/// `length_bound` pairs, pruning by prefix, and records any that witness
/// φ(u, v′) for `v′` other than the constructed `v`. The bound defaults to
/// twice the largest entry of the constructed witness plus 16.
pub fn check_uniqueness(u_max: u64, p1: &dyn Presentation, p2: &dyn Presentation, budget: u64) -> Result<UniquenessReport, CodingError> {
    let mut us = vec![p1.base(&mut op_fuel())?];
    for _ in 0..u_max {
        us.push(step(p1, *us.last().unwrap())?);
    }
    let (d_max, i_max) = walk(*us.last().unwrap(), p1, p2, budget)?;
    let entry_bound = 2 * d_max.iter().chain(&i_max).copied().max().unwrap_or(0) + 16;
    let length_bound = us.len() + 2;
    let mut report = UniquenessReport { u_max, entry_bound, length_bound, lists_checked: 0, violations: Vec::new() };
    for &u in &us {
        let (_, image) = walk(u, p1, p2, budget)?;
        let v = *image.last().unwrap();
        let mut domain = Vec::new();
        let mut image = Vec::new();
        extend(u, v, p1, p2, &mut domain, &mut image, &mut report)?;
    }
    Ok(report)
}

fn extend(
    u: u64,
    v: u64,
    p1: &dyn Presentation,
    p2: &dyn Presentation,
    domain: &mut Vec<u64>,
    image: &mut Vec<u64>,
    report: &mut UniquenessReport,
) -> Result<(), CodingError> {
    if !domain.is_empty() {
        report.lists_checked += 1;
        let last = *image.last().unwrap();
        if psi_pairs(domain, image, u, last, p1, p2)? && last != v {
            report.violations.push((u, v, last));
        }
    }
    if domain.len() >= report.length_bound {
        return Ok(());
    }
    for a in 0..=report.entry_bound {
        domain.push(a);
        let ok = prefix_ok(domain, image, u, p1, p2, true)?;
        if ok {
            for b in 0..=report.entry_bound {
                image.push(b);
                if prefix_ok(domain, image, u, p1, p2, false)? {
                    extend(u, v, p1, p2, domain, image, report)?;
                }
                image.pop();
            }
        }
        domain.pop();
    }
    Ok(())
}

/// The ψ clauses restricted to the last entry added.
fn prefix_ok(domain: &[u64], image: &[u64], u: u64, p1: &dyn Presentation, p2: &dyn Presentation, left: bool) -> Result<bool, CodingError> {
    let i = if left { domain.len() - 1 } else { image.len() - 1 };
    if left {
        let a = domain[i];
        if !p1.contains(a) || (i > 0 && domain[i - 1] == u) {
            return Ok(false);
        }
        Ok(if i == 0 { a == p1.base(&mut op_fuel())? } else { a == step(p1, domain[i - 1])? })
    } else {
        let b = image[i];
        if !p2.contains(b) {
            return Ok(false);
        }
        Ok(if i == 0 { b == p2.base(&mut op_fuel())? } else { b == step(p2, image[i - 1])? })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum ClauseStatus {
    Ok,
    Failed { witness: String },
    Skipped { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClauseResult {
    pub clause: &'static str,
    #[serde(flatten)]
    pub status: ClauseStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsoClauseReport {
    pub source: String,
    pub target: String,
    pub n: usize,
    /// `(z, F(z))` over the first `n + 1` elements of the source.
    pub values: Vec<(u64, u64)>,
    pub clauses: Vec<ClauseResult>,
}

impl IsoClauseReport {
    pub fn ok(&self) -> bool {
        self.clauses.iter().all(|c| !matches!(c.status, ClauseStatus::Failed { .. }))
    }

    pub fn clause(&self, name: &str) -> Option<&ClauseStatus> {
        self.clauses.iter().find(|c| c.clause == name).map(|c| &c.status)
    }

    pub fn render(&self) -> String {
        let mut out = format!("F: {} -> {}, n={}\n", self.source, self.target, self.n);
        let vals: Vec<String> = self.values.iter().map(|(a, b)| format!("{a}->{b}")).collect();
        out.push_str(&format!("values {}\n", vals.join(" ")));
        for c in &self.clauses {
            match &c.status {
                ClauseStatus::Ok => out.push_str(&format!("ok      {}\n", c.clause)),
                ClauseStatus::Failed { witness } => out.push_str(&format!("FAIL    {} [{witness}]\n", c.clause)),
                ClauseStatus::Skipped { reason } => out.push_str(&format!("skipped {} ({reason})\n", c.clause)),
            }
        }
        out
    }
}

struct FMap<'a> {
    coder: Coder,
    p1: &'a dyn Presentation,
    p2: &'a dyn Presentation,
    budget: u64,
    cache: HashMap<u64, u64>,
    bad_witness: Option<u64>,
}

impl FMap<'_> {
    /// `F(u)` via a witness, re-checked with ψ.
    fn get(&mut self, u: u64) -> Result<u64, CodingError> {
        if let Some(&v) = self.cache.get(&u) {
            return Ok(v);
        }
        let (v, x) = phi_witness(&self.coder, u, self.p1, self.p2, self.budget)?;
        if !psi_check(&self.coder, &x, u, v, self.p1, self.p2)? && self.bad_witness.is_none() {
            self.bad_witness = Some(u);
        }
        self.cache.insert(u, v);
        Ok(v)
    }
}

/// Checks the defining clauses of `F(u) = the v with φ(u, v)` on the first
/// `n + 1` elements of `p1`. Clauses needing arithmetic one side lacks are
/// skipped.
pub fn verify_iso_clauses(n: usize, p1: &dyn Presentation, p2: &dyn Presentation, coder: &Coder, budget: u64) -> Result<IsoClauseReport, CodingError> {
    let mut f = FMap { coder: *coder, p1, p2, budget, cache: HashMap::new(), bad_witness: None };
    let mut seg1 = vec![p1.base(&mut op_fuel())?];
    let mut seg2 = vec![p2.base(&mut op_fuel())?];
    for _ in 0..n {
        seg1.push(p1.succ(*seg1.last().unwrap(), &mut op_fuel())?);
        seg2.push(p2.succ(*seg2.last().unwrap(), &mut op_fuel())?);
    }
    let mut values = Vec::new();
    for &z in &seg1 {
        values.push((z, f.get(z)?));
    }
    let mut clauses = Vec::new();
    let mut push = |clause, status| clauses.push(ClauseResult { clause, status });
    let check = |cond: bool, w: String| if cond { ClauseStatus::Ok } else { ClauseStatus::Failed { witness: w } };

    push("zero", check(values[0].1 == seg2[0], format!("F({})={}", values[0].0, values[0].1)));

    let arith = p1.has_arithmetic() && p2.has_arithmetic();
    let missing = |op: &str| {
        let who: Vec<String> =
            [p1, p2].iter().filter(|p| !p.has_arithmetic()).map(|p| p.id()).collect();
        ClauseStatus::Skipped { reason: format!("no {op} in {}", who.join(", ")) }
    };
    if arith {
        let one1 = p1.one(&mut op_fuel())?;
        let one2 = p2.one(&mut op_fuel())?;
        let fo = f.get(one1)?;
        push("one", check(fo == one2, format!("F({one1})={fo}, 1={one2}")));
    } else {
        push("one", missing("1"));
    }

    let mut succ = ClauseStatus::Ok;
    for w in values.windows(2) {
        let s = p2.succ(w[0].1, &mut op_fuel())?;
        if p1.succ(w[0].0, &mut op_fuel())? != w[1].0 || s != w[1].1 {
            succ = ClauseStatus::Failed { witness: format!("F(S{})={} but S F({})={s}", w[0].0, w[1].1, w[0].0) };
            break;
        }
    }
    push("successor", succ);

    if arith {
        for (clause, is_add) in [("additivity", true), ("multiplicativity", false)] {
            let mut status = ClauseStatus::Ok;
            'outer: for &(x, fx) in &values {
                for &(y, fy) in &values {
                    let (lhs_arg, rhs) = if is_add {
                        (p1.add(x, y, &mut op_fuel())?, p2.add(fx, fy, &mut op_fuel())?)
                    } else {
                        (p1.mul(x, y, &mut op_fuel())?, p2.mul(fx, fy, &mut op_fuel())?)
                    };
                    let lhs = f.get(lhs_arg)?;
                    if lhs != rhs {
                        let op = if is_add { '+' } else { '*' };
                        status = ClauseStatus::Failed { witness: format!("F({x}{op}{y})={lhs}, F({x}){op}F({y})={rhs}") };
                        break 'outer;
                    }
                }
            }
            push(clause, status);
        }
    } else {
        push("additivity", missing("+"));
        push("multiplicativity", missing("*"));
    }

    let mut seen = HashMap::new();
    let mut inj = ClauseStatus::Ok;
    for &(z, fz) in &values {
        if let Some(prev) = seen.insert(fz, z) {
            inj = ClauseStatus::Failed { witness: format!("F({prev})=F({z})={fz}") };
            break;
        }
    }
    push("injectivity", inj);
    let surj = match seg2.iter().find(|t| !seen.contains_key(t)) {
        None => ClauseStatus::Ok,
        Some(t) => ClauseStatus::Failed { witness: format!("{t} not hit") },
    };
    push("surjectivity", surj);
    let wit = match f.bad_witness {
        None => ClauseStatus::Ok,
        Some(u) => ClauseStatus::Failed { witness: format!("psi rejects the witness for u={u}") },
    };
    push("witness", wit);

    Ok(IsoClauseReport { source: p1.id(), target: p2.id(), n, values, clauses })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::{Offset, Scaled, Standard};

    fn big(n: u64) -> UBig {
        UBig::from(n)
    }

    #[test]
    fn cantor_values() {
        assert_eq!(pair(&big(0), &big(0)), big(0));
        assert_eq!(pair(&big(1), &big(2)), big(8));
        assert_eq!(unpair(&big(8)), (big(1), big(2)));
        assert_eq!(encode_seq(&[]), big(0));
        assert_eq!(encode_seq(&[big(0)]), big(1));
        assert_eq!(decode_seq(&big(1)), vec![big(0)]);
        assert_eq!(Coder::digits().encode(&[]), big(0));
    }

    #[test]
    fn digits_round_trip() {
        let c = Coder::digits();
        for s in [vec![], vec![0], vec![0, 0, 0], vec![5, 0, 1 << 40, 3]] {
            let s: Vec<UBig> = s.into_iter().map(big).collect();
            assert_eq!(c.decode(&c.encode(&s)), s);
        }
        // body agrees with the arithmetic definition across word boundaries
        let wide: Vec<UBig> = [3u64, 0, u64::MAX, 1 << 63, 77].iter().map(|&a| big(a) * big(a) + big(1)).collect();
        let w = wide.iter().map(|a| a.bit_len()).max().unwrap();
        let body = wide.iter().enumerate().fold(UBig::ZERO, |acc, (i, a)| acc + (a.clone() << (w * i)));
        let expected = pair(&pair(&big(wide.len() as u64), &big(w as u64)), &body);
        assert_eq!(c.encode(&wide), expected);
        assert_eq!(c.decode(&expected), wide);
    }

    #[test]
    fn evens_witness() {
        for coder in [Coder::digits(), Coder::iterated()] {
            let (v, x) = phi_witness(&coder, 2, &Standard, &Scaled(2), 100).unwrap();
            assert_eq!(v, 4);
            assert!(psi_check(&coder, &x, 2, 4, &Standard, &Scaled(2)).unwrap());
            assert!(!psi_check(&coder, &x, 2, 6, &Standard, &Scaled(2)).unwrap());
        }
        let c = Coder::digits();
        let (v, _) = phi_witness(&c, 3, &Standard, &Scaled(2), 100).unwrap();
        assert_eq!(v, 6);
        assert!(!psi_check(&c, &UBig::ZERO, 0, 0, &Standard, &Scaled(2)).unwrap());
        let bumped = c.encode_u64(&[0, 0, 1, 2, 2, 6]);
        assert!(!psi_check(&c, &bumped, 2, 6, &Standard, &Scaled(2)).unwrap());
        let (v0, x0) = phi_witness(&c, 0, &Standard, &Scaled(2), 100).unwrap();
        assert_eq!((v0, x0), (0, c.encode_u64(&[0, 0])));
        assert!(matches!(phi_witness(&c, 3, &Scaled(2), &Standard, 100), Err(CodingError::NotInCarrier(3, _))));
        assert_eq!(phi_witness(&c, 500, &Standard, &Standard, 10), Err(CodingError::Budget(10)));
    }

    #[test]
    fn clause_reports() {
        let r = verify_iso_clauses(5, &Standard, &Scaled(2), &Coder::default(), 1000).unwrap();
        assert!(r.ok(), "{}", r.render());
        assert_eq!(r.values[5], (5, 10));
        assert_eq!(r.clause("additivity"), Some(&ClauseStatus::Ok));
        let id = verify_iso_clauses(5, &Standard, &Standard, &Coder::default(), 1000).unwrap();
        assert!(id.values.iter().all(|(a, b)| a == b));
        let off = verify_iso_clauses(5, &Standard, &Offset(7), &Coder::default(), 1000).unwrap();
        assert!(off.ok());
        assert!(matches!(off.clause("additivity"), Some(ClauseStatus::Skipped { .. })));
        assert_eq!(off.clause("successor"), Some(&ClauseStatus::Ok));
        assert_eq!(off.values[2], (2, 9));
    }

    #[test]
    fn uniqueness_small() {
        let r = check_uniqueness(6, &Standard, &Scaled(2), 1000).unwrap();
        assert!(r.violations.is_empty());
        assert!(r.lists_checked > 0);
    }
}
