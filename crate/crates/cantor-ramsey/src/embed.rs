//! A finite-depth Cantor scheme `(n_t, z_t, s_t)` embedding `2^ω` into a
//! set `H` of eventually-zero points so that the coloring `c` is preserved
//! on the eventually-zero points.
//!
//! Nodes are indexed by binary words `t` of length at most `depth`. The
//! open set `U_t` of the construction is represented by the word `z_t`
//! alone (its cylinder), and `s_t` is the Q-word of the point `α_{n_t}`.
//! Every condition of the construction is restated on words and checked by
//! [`verify_conditions`].

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use serde::Serialize;

use crate::coloring::color_c;
use crate::error::{Error, Result};
use crate::oscillation::{invariant_i, suff_check, SuffAssignment, SuffVerdict};
use crate::words::{alpha, alpha_index_big, b, b_inverse, cmp_l, Point, QWord, Word};

/// A set `H` of eventually-zero points, given by the Q-words naming them.
pub trait HSpec: Send + Sync {
    fn name(&self) -> String;

    /// `w ∈ H` iff `w0^∞ ∈ H`.
    fn member(&self, w: &QWord) -> bool;

    /// The first member of the form `prefix·u·1`, `u` running through all
    /// words in `≤_l` order, that is not in `exclude`. At most `bound`
    /// candidates are tried.
    fn search(&self, prefix: &Word, exclude: &[QWord], bound: u64) -> Result<QWord> {
        for n in 0..bound {
            let mut w = prefix.concat(&b(n))?;
            w.push(true)?;
            let w = QWord::new(w)?;
            if self.member(&w) && !exclude.contains(&w) {
                return Ok(w);
            }
        }
        Err(Error::SearchExhausted { prefix: prefix.to_string(), bound })
    }
}

/// All of P_f.
#[derive(Clone, Copy, Debug, Default)]
pub struct PfH;

impl HSpec for PfH {
    fn name(&self) -> String {
        "pf".into()
    }

    fn member(&self, _: &QWord) -> bool {
        true
    }
}

/// `P_f ∩ N_u`.
#[derive(Clone, Debug)]
pub struct CylinderH(pub Word);

impl HSpec for CylinderH {
    fn name(&self) -> String {
        format!("cyl:{}", self.0)
    }

    fn member(&self, w: &QWord) -> bool {
        w.padded(self.0.len()).is_ok_and(|p| p == self.0)
    }
}

/// The image of P_f under bit doubling `x ↦ x₀x₀x₁x₁…`.
#[derive(Clone, Copy, Debug, Default)]
pub struct DoubledH;

impl HSpec for DoubledH {
    fn name(&self) -> String {
        "double".into()
    }

    fn member(&self, w: &QWord) -> bool {
        w.len().is_multiple_of(2) && w.bits().chunks(2).all(|p| p[0] == p[1])
    }
}

/// A finite set of points. Not dense in itself, so the construction is
/// expected to fail on it; useful for exercising the error path.
#[derive(Clone, Debug)]
pub struct FiniteH(pub Vec<QWord>);

impl HSpec for FiniteH {
    fn name(&self) -> String {
        let names: Vec<String> = self.0.iter().map(|w| w.to_string()).collect();
        format!("finite:{}", names.join(","))
    }

    fn member(&self, w: &QWord) -> bool {
        self.0.contains(w)
    }
}

/// Parses `pf`, `cyl:<word>`, `double` or `finite:<word>,<word>,…`.
pub fn preset(name: &str) -> Result<Box<dyn HSpec>> {
    if name == "pf" {
        return Ok(Box::new(PfH));
    }
    if name == "double" {
        return Ok(Box::new(DoubledH));
    }
    if let Some(u) = name.strip_prefix("cyl:") {
        return Ok(Box::new(CylinderH(u.parse()?)));
    }
    if let Some(list) = name.strip_prefix("finite:") {
        let words = list.split(',').map(str::parse).collect::<Result<Vec<QWord>>>()?;
        return Ok(Box::new(FiniteH(words)));
    }
    Err(Error::Parse(format!("unknown H preset {name:?}; expected pf, cyl:<word> or double")))
}

/// One node of the scheme.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingNode {
    pub t: Word,
    /// Index of the point `s_t0^∞` in the enumeration `α`.
    pub n: BigUint,
    pub z: Word,
    pub s: QWord,
}

/// The nodes for all `t` with `|t| ≤ depth`, stored in `≤_l` order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingScheme {
    depth: usize,
    nodes: Vec<EmbeddingNode>,
}

impl EmbeddingScheme {
    pub const MAX_DEPTH: usize = 16;

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn nodes(&self) -> &[EmbeddingNode] {
        &self.nodes
    }

    pub fn node(&self, t: &Word) -> Option<&EmbeddingNode> {
        if t.len() > self.depth {
            return None;
        }
        self.nodes.get(b_inverse(t).ok()? as usize)
    }

    /// Mutable access, for building deliberately broken schemes.
    pub fn node_mut(&mut self, t: &Word) -> Option<&mut EmbeddingNode> {
        if t.len() > self.depth {
            return None;
        }
        self.nodes.get_mut(b_inverse(t).ok()? as usize)
    }

    fn at(&self, t: &Word) -> &EmbeddingNode {
        self.node(t).expect("word within the scheme's depth")
    }

    /// The Q-word nodes in `≤_l` order.
    fn q_nodes(&self) -> impl Iterator<Item = &EmbeddingNode> {
        self.nodes.iter().filter(|n| n.t.is_q())
    }

    /// The interior nodes, those with children.
    fn inner_nodes(&self) -> impl Iterator<Item = &EmbeddingNode> {
        self.nodes.iter().filter(move |n| n.t.len() < self.depth)
    }

    /// `t ↦ s_t` on the Q-words of the domain.
    pub fn s_table(&self) -> Result<SuffAssignment> {
        let table: BTreeMap<QWord, QWord> = self
            .q_nodes()
            .map(|n| Ok((QWord::new(n.t.clone())?, n.s.clone())))
            .collect::<Result<_>>()?;
        SuffAssignment::new(self.depth, table)
    }

    /// `{depth, entries: [{t, n_t, z_t, s_t}]}` with `n_t` as a decimal
    /// string, since it can exceed 64 bits.
    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = self
            .nodes
            .iter()
            .map(|n| {
                serde_json::json!({
                    "t": n.t.to_string(),
                    "n_t": n.n.to_string(),
                    "z_t": n.z.to_string(),
                    "s_t": n.s.to_string(),
                })
            })
            .collect();
        serde_json::json!({ "depth": self.depth, "entries": entries })
    }
}

/// How far to deviate from the least choice at one step of the
/// construction. The default is the least choice.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Choice {
    /// Extra zeros appended to the forced prefix before searching.
    pub extra_len: usize,
    /// Number of admissible members to pass over.
    pub skip: usize,
}

/// The least-choice scheme of the given depth.
pub fn build_embedding(h: &dyn HSpec, depth: usize, bound: u64) -> Result<EmbeddingScheme> {
    build_embedding_with(h, depth, bound, |_| Choice::default())
}

fn nth_member(h: &dyn HSpec, prefix: &Word, avoid: &QWord, skip: usize, bound: u64) -> Result<QWord> {
    let mut exclude = vec![avoid.clone()];
    loop {
        let w = h.search(prefix, &exclude, bound)?;
        if exclude.len() > skip {
            return Ok(w);
        }
        exclude.push(w);
    }
}

/// The scheme, with every free choice delegated to `choose`, which is shown
/// the word `s_t` about to be extended (the empty word for the root).
///
/// Level by level and, within a level, in lexicographic order of `t`:
/// `s_{t0} = s_t`; `s_{t1}` is a member of `H` other than `s_t` extending a
/// prefix of `s_t0^∞` long enough to contain `z_t`, to be longer than every
/// `s_u` chosen so far, and to leave the cylinder of every `α_n`, `n ≤ |t|`,
/// other than `s_t0^∞`; `z_{t1} = s_{t1}` and `z_{t0}` is the prefix of
/// `s_t0^∞` of the same length.
pub fn build_embedding_with(
    h: &dyn HSpec,
    depth: usize,
    bound: u64,
    mut choose: impl FnMut(&Word) -> Choice,
) -> Result<EmbeddingScheme> {
    if depth == 0 || depth > EmbeddingScheme::MAX_DEPTH {
        return Err(Error::Domain(format!(
            "depth must lie in 1..={}, got {depth}",
            EmbeddingScheme::MAX_DEPTH
        )));
    }
    let size = (1usize << (depth + 1)) - 1;
    let mut slots: Vec<Option<(Word, QWord)>> = vec![None; size];

    let root = nth_member(h, &Word::empty(), &QWord::empty(), choose(&Word::empty()).skip, bound)?;
    let mut longest = root.len();
    slots[0] = Some((root.word().clone(), root));

    for level in 0..depth {
        let first = (1usize << level) - 1;
        let avoid: Vec<Point> = (0..=level as u64).map(alpha).collect();
        for idx in first..first + (1 << level) {
            let (z_t, s_t) = slots[idx].clone().expect("parent level is filled");
            let here = Point::from_qword(&s_t);
            let mut len = z_t.len().max(s_t.len()).max(level + 1).max(longest + 1);
            let choice = choose(&s_t);
            len += choice.extra_len;
            let mut prefix = s_t.padded(len)?;
            while avoid.iter().any(|a| *a != here && a.in_cylinder(&prefix)) {
                prefix.push(false)?;
            }
            let s1 = nth_member(h, &prefix, &s_t, choice.skip, bound)?;
            longest = s1.len();
            let z0 = s_t.padded(s1.len())?;
            // Children of the word at index idx sit at 2·idx+1 and 2·idx+2.
            slots[2 * idx + 1] = Some((z0, s_t));
            slots[2 * idx + 2] = Some((s1.word().clone(), s1));
        }
    }

    let nodes = slots
        .into_iter()
        .enumerate()
        .map(|(i, slot)| {
            let (z, s) = slot.expect("every slot is filled");
            let n = alpha_index_big(&Point::from_qword(&s))?;
            Ok(EmbeddingNode { t: b(i as u64), n, z, s })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EmbeddingScheme { depth, nodes })
}

/// Outcome of one condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionResult {
    pub id: u8,
    pub passed: bool,
    /// Number of instances examined.
    pub checked: usize,
    /// The first failing instance.
    pub failure: Option<String>,
}

/// Per-condition outcome of [`verify_conditions`], ids 1 to 9.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub conditions: Vec<ConditionResult>,
}

impl ConditionReport {
    pub fn passed(&self) -> bool {
        self.conditions.iter().all(|c| c.passed)
    }

    pub fn get(&self, id: u8) -> Option<&ConditionResult> {
        self.conditions.iter().find(|c| c.id == id)
    }
}

struct Tally {
    id: u8,
    checked: usize,
    failure: Option<String>,
}

impl Tally {
    fn new(id: u8) -> Self {
        Tally { id, checked: 0, failure: None }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(what());
        }
    }

    fn finish(self) -> ConditionResult {
        ConditionResult { id: self.id, passed: self.failure.is_none(), checked: self.checked, failure: self.failure }
    }
}

fn child(t: &Word, bit: bool) -> Word {
    let mut c = t.clone();
    c.push(bit).expect("scheme words are short");
    c
}

/// Checks conditions (1)–(9) over the whole domain:
///
/// 1. `z_t ⊆ z_{tε}`;
/// 2. `z_t ⊆ s_t0^∞`, `s_t ∈ H` and `n_t ≥ 1`;
/// 3. `|z_t| ≥ |t|`;
/// 4. `|z_{t0}| = |z_{t1}|` and `z_{t0} <_lex z_{t1}`;
/// 5. `n_{t0} = n_t`;
/// 6. `α_n ∉ N_{z_{t1}}` for `n ≤ |t|`;
/// 7. `|s_z| < |s_t|` for Q-words `z <_l t`;
/// 8. `s_t ⊊ s_{t1}`;
/// 9. `i(z, t) = i(s_z, s_t)` for Q-words, both directly and through
///    [`suff_check`].
pub fn verify_conditions(e: &EmbeddingScheme, h: &dyn HSpec) -> Result<ConditionReport> {
    let mut c: Vec<Tally> = (1..=9).map(Tally::new).collect();

    for node in e.nodes() {
        let (t, z, s) = (&node.t, &node.z, &node.s);
        c[1].check(
            Point::from_qword(s).in_cylinder(z) && h.member(s) && !s.is_empty(),
            || format!("t = {t}: z_t = {z}, s_t = {s}"),
        );
        c[2].check(z.len() >= t.len(), || format!("t = {t}: |z_t| = {} < {}", z.len(), t.len()));
    }

    for node in e.inner_nodes() {
        let t = &node.t;
        let (n0, n1) = (e.at(&child(t, false)), e.at(&child(t, true)));
        for n in [n0, n1] {
            c[0].check(node.z.is_prefix_of(&n.z), || {
                format!("z_{t} = {} is not a prefix of z_{} = {}", node.z, n.t, n.z)
            });
        }
        c[3].check(n0.z.len() == n1.z.len() && n0.z < n1.z, || {
            format!("t = {t}: z_t0 = {}, z_t1 = {}", n0.z, n1.z)
        });
        c[4].check(n0.n == node.n, || format!("n_{t} = {} but n_{}0 = {}", node.n, t, n0.n));
        for n in 0..=t.len() as u64 {
            c[5].check(!alpha(n).in_cylinder(&n1.z), || {
                format!("alpha_{n} lies in the cylinder of z_{} = {}", n1.t, n1.z)
            });
        }
        c[7].check(node.s.is_prefix_of(&n1.s) && node.s.len() < n1.s.len(), || {
            format!("s_{t} = {} is not a proper prefix of s_{} = {}", node.s, n1.t, n1.s)
        });
    }

    let q: Vec<&EmbeddingNode> = e.q_nodes().collect();
    for pair in q.windows(2) {
        c[6].check(pair[0].s.len() < pair[1].s.len(), || {
            format!(
                "{} <_l {} but |s| = {} and {}",
                pair[0].t,
                pair[1].t,
                pair[0].s.len(),
                pair[1].s.len()
            )
        });
    }

    let qwords: Vec<QWord> =
        q.iter().map(|n| QWord::new(n.t.clone())).collect::<Result<_>>()?;
    for (a, za) in q.iter().zip(&qwords) {
        for (bn, zb) in q.iter().zip(&qwords) {
            let (lhs, rhs) = (invariant_i(za, zb)?, invariant_i(&a.s, &bn.s)?);
            c[8].check(lhs == rhs, || {
                format!("i({za}, {zb}) = {lhs} but i({}, {}) = {rhs}", a.s, bn.s)
            });
        }
    }
    let via_suff = match e.s_table().and_then(|table| suff_check(&table)) {
        Ok(SuffVerdict::Pass { .. }) => None,
        Ok(SuffVerdict::Counterexample { z, t, i_zt, i_s }) => {
            Some(format!("suff_check: i({z}, {t}) = {i_zt} but the images give {i_s}"))
        }
        Err(err) => Some(format!("suff_check: {err}")),
    };
    c[8].check(via_suff.is_none(), || via_suff.clone().unwrap_or_default());

    Ok(ConditionReport { conditions: c.into_iter().map(Tally::finish).collect() })
}

/// Result of [`check_color_preservation`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ColorVerdict {
    /// Every pair preserved; `colors` are the values seen.
    Pass { pairs: usize, colors: BTreeSet<u64> },
    Counterexample { z: String, t: String, color: u64, image_color: u64 },
}

impl ColorVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, ColorVerdict::Pass { .. })
    }
}

/// Compares `c(z0^∞, t0^∞)` with `c(s_z0^∞, s_t0^∞)` on every pair of
/// distinct Q-words of the domain. The structural clauses (7) and (8) are
/// checked first and reported as a precondition error.
pub fn check_color_preservation(e: &EmbeddingScheme) -> Result<ColorVerdict> {
    e.s_table()?.check_clauses()?;
    let mut q: Vec<&EmbeddingNode> = e.q_nodes().collect();
    q.sort_by(|a, b| cmp_l(&a.t, &b.t));
    let mut pairs = 0;
    let mut colors = BTreeSet::new();
    for (k, a) in q.iter().enumerate() {
        for bn in &q[k + 1..] {
            let (x, y) = (QWord::new(a.t.clone())?, QWord::new(bn.t.clone())?);
            let color = color_c(&Point::from_qword(&x), &Point::from_qword(&y))?;
            let image_color = color_c(&Point::from_qword(&a.s), &Point::from_qword(&bn.s))?;
            pairs += 1;
            if color != image_color {
                return Ok(ColorVerdict::Counterexample {
                    z: a.t.to_string(),
                    t: bn.t.to_string(),
                    color,
                    image_color,
                });
            }
            colors.insert(image_color);
        }
    }
    Ok(ColorVerdict::Pass { pairs, colors })
}
