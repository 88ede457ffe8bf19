//! The pair invariant `i` on Q-words, the classical oscillation map, and
//! the checker for substitution tables that are supposed to preserve `i`.
//!
//! `i(z, t)` is defined by a seven-case recursion on `max(|z|, |t|)`. Every
//! step replaces `z`, `t` or both by their Q-predecessors and adds 0, 1 or 2,
//! so the recursion is evaluated as a loop with an accumulator. The case
//! dispatcher insists that exactly one case applies; anything else is
//! reported as [`Error::Defect`].

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{OnceLock, RwLock};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::words::{cmp_l, perp_less_bits, q_predecessor_len, qwords_up_to, QWord, Word};

/// The seven branches of the recursion, numbered as usual.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Case {
    /// `z = t`, value 0.
    Equal,
    /// `i(z, t⁻)`.
    DropRight,
    /// `i(z, t⁻) + 1`.
    DropRightPlusOne,
    /// `i(z⁻, t)`.
    DropLeft,
    /// `i(z⁻, t) + 1`.
    DropLeftPlusOne,
    /// `i(z⁻, t⁻) + 1`.
    DropBothPlusOne,
    /// `i(z⁻, t⁻) + 2`.
    DropBothPlusTwo,
}

impl Case {
    const ALL: [Case; 7] = [
        Case::Equal,
        Case::DropRight,
        Case::DropRightPlusOne,
        Case::DropLeft,
        Case::DropLeftPlusOne,
        Case::DropBothPlusOne,
        Case::DropBothPlusTwo,
    ];

    /// 1-based case number.
    pub fn number(self) -> u8 {
        Case::ALL.iter().position(|&c| c == self).unwrap() as u8 + 1
    }

    fn increment(self) -> u64 {
        match self {
            Case::Equal | Case::DropRight | Case::DropLeft => 0,
            Case::DropRightPlusOne | Case::DropLeftPlusOne | Case::DropBothPlusOne => 1,
            Case::DropBothPlusTwo => 2,
        }
    }
}

/// What the dispatcher needs from a Q-word representation.
trait View: Copy + PartialEq + std::fmt::Display {
    fn len(self) -> usize;
    /// Q-predecessor; only called on nonempty words.
    fn pred(self) -> Self;
    /// First disagreement below the common length has `self`-bit 0.
    fn perp_less(self, other: Self) -> bool;
    /// Lexicographic, strict prefix smaller.
    fn lex_lt(self, other: Self) -> bool;
}

#[derive(Clone, Copy, PartialEq)]
struct Slice<'a>(&'a [bool]);

impl View for Slice<'_> {
    fn len(self) -> usize {
        self.0.len()
    }

    fn pred(self) -> Self {
        Slice(&self.0[..q_predecessor_len(self.0, self.0.len())])
    }

    fn perp_less(self, other: Self) -> bool {
        perp_less_bits(self.0, other.0)
    }

    fn lex_lt(self, other: Self) -> bool {
        self.0 < other.0
    }
}

impl std::fmt::Display for Slice<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        Word::from_bits(self.0).map_err(|_| std::fmt::Error)?.fmt(f)
    }
}

/// A Q-word of at most 63 bits; bit `k` of the word is bit `k` of `v`.
///
/// For a nonempty Q-word the top set bit is the last letter, so `v` alone
/// determines the word and the words of length `≤ L` are exactly
/// `0..2^L`.
#[derive(Clone, Copy, PartialEq, Eq)]
struct Packed {
    v: u64,
}

impl Packed {
    fn from_bits(bits: &[bool]) -> Self {
        debug_assert!(bits.len() < 64 && bits.last() != Some(&false));
        Packed { v: bits.iter().rev().fold(0, |acc, &b| (acc << 1) | b as u64) }
    }

    fn to_word(self) -> Word {
        Word::from_bits((0..self.len()).map(|k| (self.v >> k) & 1 == 1).collect::<Vec<_>>())
            .expect("63 bits fit")
    }

    fn low(n: usize) -> u64 {
        if n >= 64 {
            u64::MAX
        } else {
            (1u64 << n) - 1
        }
    }

    /// Lowest differing position below the common length, if any.
    fn first_diff(self, other: Self) -> Option<u32> {
        let x = (self.v ^ other.v) & Packed::low(self.len().min(other.len()));
        (x != 0).then(|| x.trailing_zeros())
    }
}

impl View for Packed {
    fn len(self) -> usize {
        64 - self.v.leading_zeros() as usize
    }

    fn pred(self) -> Self {
        Packed { v: self.v & Packed::low(self.len() - 1) }
    }

    fn perp_less(self, other: Self) -> bool {
        self.first_diff(other).is_some_and(|k| (self.v >> k) & 1 == 0)
    }

    fn lex_lt(self, other: Self) -> bool {
        match self.first_diff(other) {
            Some(k) => (self.v >> k) & 1 == 0,
            None => self.len() < other.len(),
        }
    }
}

impl std::fmt::Display for Packed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.to_word().fmt(f)
    }
}

fn dispatch<V: View>(z: V, t: V) -> Result<Case> {
    if z == t {
        return Ok(Case::Equal);
    }
    let (lz, lt) = (z.len(), t.len());
    let mut hits = [false; 7];
    if lt > 0 {
        let tm = t.pred();
        let ltm = tm.len();
        hits[1] = lz < ltm || (lz == ltm && z.perp_less(tm));
        hits[2] = (ltm < lz && lz < lt) || (lz == ltm && !z.perp_less(tm));
    }
    if lz > 0 {
        let zm = z.pred();
        let lzm = zm.len();
        hits[3] = lt < lzm || (lt == lzm && t.perp_less(zm));
        hits[4] = (lzm < lt && lt < lz) || (lt == lzm && !t.perp_less(zm));
    }
    if lz == lt {
        let (zm, tm) = (z.pred(), t.pred());
        let (lzm, ltm) = (zm.len(), tm.len());
        hits[5] = (lzm < ltm && tm.lex_lt(zm)) || (ltm < lzm && zm.lex_lt(tm));
        hits[6] = (lzm < ltm && zm.lex_lt(tm))
            || (ltm < lzm && tm.lex_lt(zm))
            || (lzm == ltm && zm != tm);
    }
    let mut matched = (0..7).filter(|&k| hits[k]);
    match (matched.next(), matched.next()) {
        (Some(k), None) => Ok(Case::ALL[k]),
        _ => Err(Error::Defect(format!(
            "i({z}, {t}): expected exactly one case, matched {:?}",
            (0..7).filter(|&k| hits[k]).map(|k| k + 1).collect::<Vec<_>>()
        ))),
    }
}

fn advance<V: View>(z: V, t: V, case: Case) -> (V, V) {
    match case {
        Case::Equal => (z, t),
        Case::DropRight | Case::DropRightPlusOne => (z, t.pred()),
        Case::DropLeft | Case::DropLeftPlusOne => (z.pred(), t),
        Case::DropBothPlusOne | Case::DropBothPlusTwo => (z.pred(), t.pred()),
    }
}

fn run<V: View>(mut z: V, mut t: V, mut on_step: impl FnMut(V, V, Case)) -> Result<u64> {
    let mut acc = 0;
    loop {
        let case = dispatch(z, t)?;
        on_step(z, t, case);
        if case == Case::Equal {
            return Ok(acc);
        }
        acc += case.increment();
        (z, t) = advance(z, t, case);
    }
}

fn fits_packed(z: &QWord, t: &QWord) -> bool {
    z.len() < 64 && t.len() < 64
}

/// The case that applies at the top of the recursion for `(z, t)`.
pub fn select_case(z: &QWord, t: &QWord) -> Result<Case> {
    dispatch(Slice(z.bits()), Slice(t.bits()))
}

/// `i(z, t)` recomputed from scratch, bypassing the shared cache.
pub fn invariant_i_uncached(z: &QWord, t: &QWord) -> Result<u64> {
    if fits_packed(z, t) {
        run(Packed::from_bits(z.bits()), Packed::from_bits(t.bits()), |_, _, _| {})
    } else {
        run(Slice(z.bits()), Slice(t.bits()), |_, _, _| {})
    }
}

/// Same as [`invariant_i_uncached`] but always on the general word
/// representation; used to cross-check the packed fast path.
pub fn invariant_i_reference(z: &QWord, t: &QWord) -> Result<u64> {
    run(Slice(z.bits()), Slice(t.bits()), |_, _, _| {})
}

/// Every step of the recursion: the pair visited and the case applied.
pub fn trace_i(z: &QWord, t: &QWord) -> Result<Vec<(QWord, QWord, Case)>> {
    let mut steps = Vec::new();
    run(Slice(z.bits()), Slice(t.bits()), |a, b, case| {
        let a = QWord::new(Word::from_bits(a.0).unwrap()).unwrap();
        let b = QWord::new(Word::from_bits(b.0).unwrap()).unwrap();
        steps.push((a, b, case));
    })?;
    Ok(steps)
}

const CACHE_LIMIT: usize = 1 << 20;

type Cache = RwLock<HashMap<(QWord, QWord), u64>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `i(z, t)`, memoized in a process-wide cache.
///
/// The cache stops growing at about a million entries; later pairs are
/// computed but not stored.
pub fn invariant_i(z: &QWord, t: &QWord) -> Result<u64> {
    let key = (z.clone(), t.clone());
    if let Some(&v) = cache().read().unwrap().get(&key) {
        return Ok(v);
    }
    let v = invariant_i_uncached(z, t)?;
    let mut guard = cache().write().unwrap();
    if guard.len() < CACHE_LIMIT {
        guard.insert(key, v);
    }
    Ok(v)
}

/// Number of memoized pairs.
pub fn cache_len() -> usize {
    cache().read().unwrap().len()
}

/// `i` on arbitrary words, rejecting anything outside Q.
pub fn invariant_i_words(z: &Word, t: &Word) -> Result<u64> {
    invariant_i(&QWord::new(z.clone())?, &QWord::new(t.clone())?)
}

/// `i` tabulated on all pairs of Q-words of length at most `max_len`.
///
/// Filling the table runs the case dispatcher once on every pair, and every
/// recursion step out of the range stays inside it, so a successful build
/// certifies one-case totality on the whole range.
pub struct ITable {
    max_len: usize,
    values: Vec<u8>,
}

impl ITable {
    pub const MAX_LEN: usize = 13;

    pub fn build(max_len: usize) -> Result<Self> {
        if max_len > Self::MAX_LEN {
            return Err(Error::Domain(format!(
                "table length {max_len} exceeds {}",
                Self::MAX_LEN
            )));
        }
        let n = 1usize << max_len;
        let mut values = vec![0u8; n * n];
        // Every step shortens z or t, so pairs with equal |z| + |t| never
        // depend on each other: fill the blocks of one sum in parallel.
        let lens = |l: usize| if l == 0 { 0..1 } else { 1 << (l - 1)..1 << l };
        for sum in 0..=2 * max_len {
            let blocks: Vec<(usize, usize)> = (sum.saturating_sub(max_len)..=sum.min(max_len))
                .map(|lz| (lz, sum - lz))
                .collect();
            // One run of a row per item: (offset of its first entry, values).
            let filled: Vec<(usize, Vec<u8>)> = blocks
                .par_iter()
                .flat_map_iter(|&(lz, lt)| lens(lz).map(move |zi| (zi, lt)))
                .map(|(zi, lt)| {
                    let row = lens(lt)
                        .map(|ti| {
                            let (z, t) = (Packed { v: zi as u64 }, Packed { v: ti as u64 });
                            let case = dispatch(z, t)?;
                            if case == Case::Equal {
                                return Ok(0);
                            }
                            let (z2, t2) = advance(z, t, case);
                            let below = values[z2.v as usize * n + t2.v as usize];
                            Ok(below + case.increment() as u8)
                        })
                        .collect::<Result<Vec<u8>>>()?;
                    Ok((zi * n + lens(lt).start, row))
                })
                .collect::<Result<_>>()?;
            for (start, row) in filled {
                values[start..start + row.len()].copy_from_slice(&row);
            }
        }
        Ok(ITable { max_len, values })
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    fn side(&self) -> usize {
        1 << self.max_len
    }

    pub fn get(&self, z: &QWord, t: &QWord) -> Option<u64> {
        if z.len() > self.max_len || t.len() > self.max_len {
            return None;
        }
        let (zi, ti) = (Packed::from_bits(z.bits()).v, Packed::from_bits(t.bits()).v);
        Some(self.values[zi as usize * self.side() + ti as usize] as u64)
    }

    fn qword(v: usize) -> QWord {
        QWord::new(Packed { v: v as u64 }.to_word()).expect("packed words are Q-words")
    }

    /// First pair (in index order) with `i(z,t) ≠ i(t,z)`.
    pub fn asymmetric_pair(&self) -> Option<(QWord, QWord)> {
        let n = self.side();
        (0..n)
            .flat_map(|z| (z + 1..n).map(move |t| (z, t)))
            .find(|&(z, t)| self.values[z * n + t] != self.values[t * n + z])
            .map(|(z, t)| (Self::qword(z), Self::qword(t)))
    }

    /// Values attained on pairs of distinct words.
    pub fn attained_distinct(&self) -> BTreeSet<u64> {
        let n = self.side();
        let mut seen = [false; 256];
        for z in 0..n {
            for t in 0..n {
                if z != t {
                    seen[self.values[z * n + t] as usize] = true;
                }
            }
        }
        (0..256).filter(|&v| seen[v]).map(|v| v as u64).collect()
    }
}

/// The oscillation of two finite sets of naturals, given by characteristic
/// words: the number of maximal runs of `z∆t` lying on one side.
pub fn osc(z: &Word, t: &Word) -> u64 {
    let len = z.len().max(t.len());
    let mut count = 0;
    let mut side = None;
    for k in 0..len {
        let (a, b) = (z.get(k).unwrap_or(false), t.get(k).unwrap_or(false));
        if a != b && side != Some(a) {
            count += 1;
            side = Some(a);
        }
    }
    count
}

/// A substitution `t ↦ s_t` on all Q-words of length at most `depth`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuffAssignment {
    depth: usize,
    table: BTreeMap<QWord, QWord>,
}

impl SuffAssignment {
    /// The keys must be exactly the Q-words of length at most `depth`.
    pub fn new(depth: usize, table: BTreeMap<QWord, QWord>) -> Result<Self> {
        if depth >= 24 {
            return Err(Error::Domain(format!("depth {depth} is too large to check exhaustively")));
        }
        let domain = qwords_up_to(depth);
        if domain.len() != table.len() || domain.iter().any(|t| !table.contains_key(t)) {
            return Err(Error::Domain(format!(
                "table must map exactly the {} Q-words of length <= {depth}",
                domain.len()
            )));
        }
        Ok(SuffAssignment { depth, table })
    }

    /// Builds from `(t, s_t)` literal pairs.
    pub fn from_pairs(depth: usize, pairs: &[(&str, &str)]) -> Result<Self> {
        let table = pairs
            .iter()
            .map(|(t, s)| Ok((t.parse()?, s.parse()?)))
            .collect::<Result<BTreeMap<QWord, QWord>>>()?;
        SuffAssignment::new(depth, table)
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn get(&self, t: &QWord) -> Option<&QWord> {
        self.table.get(t)
    }

    /// Domain in `≤_l` order.
    pub fn domain(&self) -> Vec<QWord> {
        let mut keys: Vec<QWord> = self.table.keys().cloned().collect();
        keys.sort_by(|a, b| cmp_l(a, b));
        keys
    }

    /// Checks the two structural clauses, naming the first that fails:
    /// (a) `|s_z| < |s_t|` whenever `z <_l t`; (b) `s_t ⊊ s_{t1}`.
    pub fn check_clauses(&self) -> Result<()> {
        let domain = self.domain();
        for pair in domain.windows(2) {
            let (sz, st) = (&self.table[&pair[0]], &self.table[&pair[1]]);
            if sz.len() >= st.len() {
                return Err(Error::Precondition {
                    clause: "a".into(),
                    detail: format!(
                        "{} <_l {} but |s| = {} and {}",
                        pair[0],
                        pair[1],
                        sz.len(),
                        st.len()
                    ),
                });
            }
        }
        for t in &domain {
            if t.len() >= self.depth {
                continue;
            }
            let mut t1 = t.word().clone();
            t1.push(true)?;
            let st1 = &self.table[&QWord::new(t1)?];
            let st = &self.table[t];
            if !(st.is_prefix_of(st1) && st.len() < st1.len()) {
                return Err(Error::Precondition {
                    clause: "b".into(),
                    detail: format!("s_{t} = {st} is not a proper prefix of s_{t}1 = {st1}"),
                });
            }
        }
        Ok(())
    }
}

/// Result of [`suff_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum SuffVerdict {
    Pass { pairs: usize },
    Counterexample { z: String, t: String, i_zt: u64, i_s: u64 },
}

impl SuffVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, SuffVerdict::Pass { .. })
    }
}

/// Checks `i(z, t) = i(s_z, s_t)` on every ordered pair of the domain,
/// after checking clauses (a) and (b).
pub fn suff_check(a: &SuffAssignment) -> Result<SuffVerdict> {
    a.check_clauses()?;
    let domain = a.domain();
    let mut pairs = 0;
    for z in &domain {
        for t in &domain {
            let lhs = invariant_i(z, t)?;
            let rhs = invariant_i(&a.table[z], &a.table[t])?;
            pairs += 1;
            if lhs != rhs {
                return Ok(SuffVerdict::Counterexample {
                    z: z.to_string(),
                    t: t.to_string(),
                    i_zt: lhs,
                    i_s: rhs,
                });
            }
        }
    }
    Ok(SuffVerdict::Pass { pairs })
}
