//! Finite binary words, Q-words, the length-lex enumeration and
//! eventually periodic points of Cantor space.
//!
//! A [`Word`] orders lexicographically with a strict prefix counted as
//! strictly smaller (`"0" < "01"`), which is exactly the derived `Ord`.
//! The length-lex order `≤_l` is exposed separately through [`le_l`] and
//! [`cmp_l`].

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;

use crate::error::{Error, Result};

/// Maximum number of bits in a [`Word`] (and in each half of a [`Point`]).
pub const WORD_CAP: usize = 4096;

/// A finite binary sequence.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    bits: Vec<bool>,
}

impl Word {
    pub fn empty() -> Self {
        Word { bits: Vec::new() }
    }

    pub fn from_bits(bits: impl Into<Vec<bool>>) -> Result<Self> {
        let bits = bits.into();
        if bits.len() > WORD_CAP {
            return Err(Error::CapExceeded { len: bits.len(), cap: WORD_CAP });
        }
        Ok(Word { bits })
    }

    /// `n` zeros.
    pub fn zeros(n: usize) -> Result<Self> {
        Word::from_bits(vec![false; n])
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        self.bits.get(i).copied()
    }

    pub fn last(&self) -> Option<bool> {
        self.bits.last().copied()
    }

    /// The first `n` bits. Panics if `n > len`.
    pub fn prefix(&self, n: usize) -> Word {
        Word { bits: self.bits[..n].to_vec() }
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.bits.starts_with(&self.bits)
    }

    pub fn concat(&self, other: &Word) -> Result<Word> {
        let mut bits = self.bits.clone();
        bits.extend_from_slice(&other.bits);
        Word::from_bits(bits)
    }

    pub fn push(&mut self, bit: bool) -> Result<()> {
        if self.bits.len() >= WORD_CAP {
            return Err(Error::CapExceeded { len: self.bits.len() + 1, cap: WORD_CAP });
        }
        self.bits.push(bit);
        Ok(())
    }

    /// The first `n` bits of `self·0^∞`.
    pub fn padded(&self, n: usize) -> Result<Word> {
        let mut bits: Vec<bool> = self.bits.iter().copied().take(n).collect();
        bits.resize(n, false);
        Word::from_bits(bits)
    }

    /// Bits as a plain `0`/`1` string; the empty word gives `""`.
    pub fn to_bitstring(&self) -> String {
        self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    pub fn is_q(&self) -> bool {
        self.bits.last() != Some(&false)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bits.is_empty() {
            f.write_str("e")
        } else {
            f.write_str(&self.to_bitstring())
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Accepts a `0`/`1` string; `"e"` and `""` both denote the empty word.
    fn from_str(s: &str) -> Result<Self> {
        if s == "e" {
            return Ok(Word::empty());
        }
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Parse(format!("{s:?} is not a binary word"))),
            })
            .collect::<Result<Vec<bool>>>()?;
        Word::from_bits(bits)
    }
}

/// A word that is empty or ends in 1: the canonical name of the point `w0^∞`.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QWord(Word);

impl QWord {
    pub fn new(w: Word) -> Result<Self> {
        if w.is_q() {
            Ok(QWord(w))
        } else {
            Err(Error::Domain(format!("{w} ends in 0, so it is not a Q-word")))
        }
    }

    pub fn empty() -> Self {
        QWord(Word::empty())
    }

    pub fn word(&self) -> &Word {
        &self.0
    }

    pub fn into_word(self) -> Word {
        self.0
    }
}

impl std::ops::Deref for QWord {
    type Target = Word;

    fn deref(&self) -> &Word {
        &self.0
    }
}

impl fmt::Display for QWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Debug for QWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QWord({})", self.0)
    }
}

impl FromStr for QWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        QWord::new(s.parse()?)
    }
}

/// Strips trailing zeros; `w0^∞` and the result denote the same point.
pub fn q_normalize(w: &Word) -> QWord {
    let end = w.bits.iter().rposition(|&b| b).map_or(0, |i| i + 1);
    QWord(w.prefix(end))
}

/// Length-lex order: shorter first, then lexicographic.
pub fn cmp_l(s: &Word, t: &Word) -> Ordering {
    s.len().cmp(&t.len()).then_with(|| s.bits.cmp(&t.bits))
}

/// `s ≤_l t`.
pub fn le_l(s: &Word, t: &Word) -> bool {
    cmp_l(s, t) != Ordering::Greater
}

/// The `n`-th word in `≤_l` order: with `L = ⌊log₂(n+1)⌋`, the `L`-bit
/// binary expansion of `n + 1 - 2^L`.
pub fn b(n: u64) -> Word {
    let m = n as u128 + 1;
    let len = 127 - m.leading_zeros() as usize;
    let rest = m - (1u128 << len);
    let bits = (0..len).rev().map(|i| (rest >> i) & 1 == 1).collect();
    Word { bits }
}

/// Inverse of [`b`]. Words of 64 bits or more have no `u64` index.
pub fn b_inverse(w: &Word) -> Result<u64> {
    if w.len() >= 64 {
        return Err(Error::Domain(format!(
            "index of a {}-bit word does not fit in 64 bits",
            w.len()
        )));
    }
    let value = w.bits.iter().fold(0u64, |acc, &bit| (acc << 1) | bit as u64);
    Ok((1u64 << w.len()) - 1 + value)
}

/// Inverse of [`b`] without a size limit.
pub fn b_inverse_big(w: &Word) -> BigUint {
    let mut value = BigUint::from(0u32);
    for &bit in &w.bits {
        value <<= 1;
        if bit {
            value += 1u32;
        }
    }
    (BigUint::from(1u32) << w.len()) - 1u32 + value
}

/// Longest proper prefix of `z` that is a Q-word.
pub fn q_predecessor(z: &QWord) -> Result<QWord> {
    if z.is_empty() {
        return Err(Error::Domain("the empty word has no Q-predecessor".into()));
    }
    let len = q_predecessor_len(z.bits(), z.len());
    Ok(QWord(z.prefix(len)))
}

/// Length of the Q-predecessor of `bits[..len]`, for `len > 0`.
pub(crate) fn q_predecessor_len(bits: &[bool], len: usize) -> usize {
    (1..len).rev().find(|&l| bits[l - 1]).unwrap_or(0)
}

/// True iff the first disagreement below `min(|z|,|t|)` has `z`-bit 0.
pub fn perp_less(z: &Word, t: &Word) -> bool {
    perp_less_bits(z.bits(), t.bits())
}

pub(crate) fn perp_less_bits(z: &[bool], t: &[bool]) -> bool {
    z.iter().zip(t).find(|(a, b)| a != b).is_some_and(|(a, _)| !a)
}

/// All words of length `len`, in lexicographic order.
pub fn words_of_len(len: usize) -> impl Iterator<Item = Word> {
    assert!(len < 64, "refusing to enumerate 2^{len} words");
    (0..1u64 << len).map(move |v| Word {
        bits: (0..len).rev().map(|i| (v >> i) & 1 == 1).collect(),
    })
}

/// All words of length at most `max_len`, in `≤_l` order.
pub fn words_up_to(max_len: usize) -> impl Iterator<Item = Word> {
    (0..=max_len).flat_map(words_of_len)
}

/// All Q-words of length at most `max_len`, in `≤_l` order.
pub fn qwords_up_to(max_len: usize) -> Vec<QWord> {
    words_up_to(max_len).filter(Word::is_q).map(QWord).collect()
}

/// Membership class of a point of Cantor space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PointClass {
    /// Eventually zero.
    Pf,
    /// Infinitely many ones.
    Pinfty,
}

/// An eventually periodic point `prefix·period^∞` of Cantor space, kept in
/// canonical form: primitive period and shortest prefix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Point {
    prefix: Word,
    period: Word,
}

impl Point {
    pub fn new(prefix: Word, period: Word) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Domain("a point needs a nonempty period".into()));
        }
        let mut period = primitive_root(&period.bits);
        let mut prefix = prefix.bits;
        while let Some(&last) = prefix.last() {
            if last != *period.last().unwrap() {
                break;
            }
            prefix.pop();
            period.rotate_right(1);
        }
        Ok(Point { prefix: Word { bits: prefix }, period: Word { bits: period } })
    }

    /// `0^∞`.
    pub fn zero() -> Self {
        Point { prefix: Word::empty(), period: Word { bits: vec![false] } }
    }

    /// The point `q0^∞`. A Q-word is already a canonical prefix.
    pub fn from_qword(q: &QWord) -> Self {
        Point { prefix: q.word().clone(), period: Word { bits: vec![false] } }
    }

    pub fn prefix(&self) -> &Word {
        &self.prefix
    }

    pub fn period(&self) -> &Word {
        &self.period
    }

    pub fn bit(&self, n: usize) -> bool {
        let p = self.prefix.len();
        if n < p {
            self.prefix.bits[n]
        } else {
            self.period.bits[(n - p) % self.period.len()]
        }
    }

    /// The first `n` bits.
    pub fn truncate(&self, n: usize) -> Result<Word> {
        Word::from_bits((0..n).map(|i| self.bit(i)).collect::<Vec<_>>())
    }

    /// Whether the point lies in the cylinder `N_s`.
    pub fn in_cylinder(&self, s: &Word) -> bool {
        s.bits.iter().enumerate().all(|(i, &b)| self.bit(i) == b)
    }

    pub fn classify(&self) -> PointClass {
        if self.period.bits == [false] {
            PointClass::Pf
        } else {
            PointClass::Pinfty
        }
    }

    pub fn is_pf(&self) -> bool {
        self.classify() == PointClass::Pf
    }

    /// The Q-word naming this point, if it is eventually zero.
    pub fn qword(&self) -> Option<QWord> {
        self.is_pf().then(|| QWord(self.prefix.clone()))
    }

    /// Lexicographic comparison of the infinite sequences.
    pub fn lex_cmp(&self, other: &Point) -> Ordering {
        let horizon = self.prefix.len().max(other.prefix.len())
            + lcm(self.period.len(), other.period.len());
        (0..horizon)
            .map(|i| self.bit(i).cmp(&other.bit(i)))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    }

    /// Drops the first bit.
    pub fn tail(&self) -> Point {
        if self.prefix.is_empty() {
            let mut period = self.period.bits.clone();
            period.rotate_left(1);
            Point { prefix: Word::empty(), period: Word { bits: period } }
        } else {
            Point {
                prefix: Word { bits: self.prefix.bits[1..].to_vec() },
                period: self.period.clone(),
            }
        }
    }

    /// Prepends one bit.
    pub fn cons(&self, bit: bool) -> Result<Point> {
        let mut prefix = Vec::with_capacity(self.prefix.len() + 1);
        prefix.push(bit);
        prefix.extend_from_slice(&self.prefix.bits);
        Point::new(Word::from_bits(prefix)?, self.period.clone())
    }

    /// The involution that flips the first bit and keeps the others.
    pub fn flip_first(&self) -> Point {
        let tail = self.tail();
        let mut prefix = vec![!self.bit(0)];
        prefix.extend_from_slice(&tail.prefix.bits);
        Point::new(Word { bits: prefix }, tail.period)
            .expect("canonical tail has a nonempty period")
    }
}

impl Ord for Point {
    fn cmp(&self, other: &Self) -> Ordering {
        self.lex_cmp(other)
    }
}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.prefix.to_bitstring(), self.period.to_bitstring())
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Point({self})")
    }
}

impl FromStr for Point {
    type Err = Error;

    /// Grammar: `<word>(<word>)` with a nonempty period, e.g. `1(0)`, `(01)`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("{s:?} is not a point literal like 1(0) or (01)"));
        let open = s.find('(').ok_or_else(bad)?;
        let inner = s[open + 1..].strip_suffix(')').ok_or_else(bad)?;
        if inner.is_empty() || inner == "e" {
            return Err(bad());
        }
        Point::new(s[..open].parse()?, inner.parse()?)
    }
}

/// The `n`-th eventually-zero point: `α_0 = 0^∞`, `α_{n+1} = b(n)1·0^∞`.
pub fn alpha(n: u64) -> Point {
    if n == 0 {
        return Point::zero();
    }
    let mut w = b(n - 1);
    w.bits.push(true);
    Point::from_qword(&QWord(w))
}

/// Inverse of [`alpha`].
pub fn alpha_index(p: &Point) -> Result<u64> {
    let q = eventually_zero(p)?;
    match q.len() {
        0 => Ok(0),
        len => Ok(b_inverse(&q.prefix(len - 1))? + 1),
    }
}

/// Inverse of [`alpha`] without a size limit.
pub fn alpha_index_big(p: &Point) -> Result<BigUint> {
    let q = eventually_zero(p)?;
    match q.len() {
        0 => Ok(BigUint::from(0u32)),
        len => Ok(b_inverse_big(&q.prefix(len - 1)) + 1u32),
    }
}

fn eventually_zero(p: &Point) -> Result<QWord> {
    p.qword()
        .ok_or_else(|| Error::Domain(format!("{p} has infinitely many ones")))
}

fn primitive_root(p: &[bool]) -> Vec<bool> {
    let n = p.len();
    let d = (1..=n)
        .find(|&d| n.is_multiple_of(d) && (d..n).all(|i| p[i] == p[i - d]))
        .unwrap_or(n);
    p[..d].to_vec()
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}
