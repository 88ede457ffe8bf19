//! Code tuples naming the members of the antichain bases, exhaustive
//! enumeration of every code family, and the 13-entry catalog of
//! uncountable relations.
//!
//! Families are enumerated by filtering the full product space (256, 64 or
//! 64⁴ candidates), so the counts do not depend on any hand counting.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::coloring::{Digraph, GammaClass};
use crate::error::{Error, Result};
use crate::relations::{Profile, RelationSpec, Space};

/// A map `2² → 4`, stored in the order `(0,0), (0,1), (1,0), (1,1)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CodeTuple4(pub [u8; 4]);

impl CodeTuple4 {
    pub fn get(&self, e: bool, n: bool) -> u8 {
        self.0[2 * e as usize + n as usize]
    }

    fn all() -> impl Iterator<Item = CodeTuple4> {
        (0..256u16).map(|v| {
            CodeTuple4([(v >> 6) as u8 & 3, (v >> 4) as u8 & 3, (v >> 2) as u8 & 3, v as u8 & 3])
        })
    }
}

impl fmt::Display for CodeTuple4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|d| write!(f, "{d}"))
    }
}

impl FromStr for CodeTuple4 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let digits: Vec<u8> = s
            .chars()
            .map(|c| c.to_digit(4).map(|d| d as u8))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Parse(format!("{s:?} is not a 4-digit code over 0..3")))?;
        let arr: [u8; 4] = digits
            .try_into()
            .map_err(|_| Error::Parse(format!("{s:?} is not a 4-digit code over 0..3")))?;
        Ok(CodeTuple4(arr))
    }
}

/// A map `6 → 2`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CodeTuple6(pub [bool; 6]);

impl CodeTuple6 {
    pub const ZERO: CodeTuple6 = CodeTuple6([false; 6]);

    pub fn get(&self, j: usize) -> bool {
        self.0[j]
    }

    /// `t(0)` is the most significant bit, so index order is lex order.
    pub fn from_index(v: u8) -> Self {
        CodeTuple6(std::array::from_fn(|j| (v >> (5 - j)) & 1 == 1))
    }

    pub fn all() -> impl Iterator<Item = CodeTuple6> {
        (0..64u8).map(CodeTuple6::from_index)
    }

    fn lit(s: &str) -> Self {
        s.parse().expect("literal code")
    }
}

impl fmt::Display for CodeTuple6 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|&b| f.write_str(if b { "1" } else { "0" }))
    }
}

impl FromStr for CodeTuple6 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits: Vec<bool> = s
            .chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Parse(format!("{s:?} is not a 6-bit code")))?;
        let arr: [bool; 6] =
            bits.try_into().map_err(|_| Error::Parse(format!("{s:?} is not a 6-bit code")))?;
        Ok(CodeTuple6(arr))
    }
}

/// A map `2² → 2⁶`, in the same index order as [`CodeTuple4`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CodeTuple6x4(pub [CodeTuple6; 4]);

impl CodeTuple6x4 {
    pub fn get(&self, e: bool, n: bool) -> CodeTuple6 {
        self.0[2 * e as usize + n as usize]
    }

    fn lit(parts: [&str; 4]) -> Self {
        CodeTuple6x4(parts.map(CodeTuple6::lit))
    }
}

impl fmt::Display for CodeTuple6x4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.0[0], self.0[1], self.0[2], self.0[3])
    }
}

impl FromStr for CodeTuple6x4 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .split(',')
            .map(str::parse)
            .collect::<Result<Vec<CodeTuple6>>>()?;
        let arr: [CodeTuple6; 4] = parts
            .try_into()
            .map_err(|_| Error::Parse(format!("{s:?} needs four comma-separated 6-bit groups")))?;
        Ok(CodeTuple6x4(arr))
    }
}

pub fn in_p(t: &CodeTuple4) -> bool {
    let [a, b, c, d] = t.0;
    a != 0 && d != 0 && b == 0 && (c != 0 || a <= d)
}

pub fn in_a(t: &CodeTuple4) -> bool {
    let [a, b, c, d] = t.0;
    a < 2 && (b == 0 || c == 0) && d != 0
}

/// The second part of the Π⁰₂ acyclic basis: codes of `A` whose three
/// first entries are bits.
pub fn in_cpi02_second(t: &CodeTuple4) -> bool {
    let [a, b, c, _] = t.0;
    in_a(t) && a < 2 && b < 2 && c < 2
}

/// The code set `N`, reading the clause on `1^6` as "not the zero tuple".
pub fn in_n(t: &CodeTuple6) -> bool {
    let x = t.0;
    (*t != CodeTuple6::ZERO && !x[5]) || (x[2] && !x[3]) || (x[0] && !x[4])
}

/// The code set `C`: `t0 ⇒ t4 ⇒ t5` and `t2 ⇒ t3 ⇒ t5`, links conjoined.
pub fn in_c(t: &CodeTuple6) -> bool {
    let x = t.0;
    (!x[0] || x[4]) && (!x[4] || x[5]) && (!x[2] || x[3]) && (!x[3] || x[5])
}

fn only_bits(t: &CodeTuple6, allowed: &[usize]) -> bool {
    (0..6).all(|j| !t.0[j] || allowed.contains(&j))
}

pub fn in_v(t: &CodeTuple6x4) -> bool {
    only_bits(&t.0[0], &[5])
        && t.0[1] == CodeTuple6::lit("000010")
        && only_bits(&t.0[2], &[3, 5])
        && !in_n(&t.0[3])
}

pub fn in_h(t: &CodeTuple6x4) -> bool {
    !in_n(&t.0[0])
        && t.0[1] == CodeTuple6::lit("000100")
        && only_bits(&t.0[2], &[4, 5])
        && t.0[2] != CodeTuple6::lit("000010")
        && only_bits(&t.0[3], &[5])
}

pub fn in_s(t: &CodeTuple6x4) -> bool {
    let special = CodeTuple6::lit("010000");
    !in_n(&t.0[0])
        && !in_n(&t.0[3])
        && t.0[1] == special
        && in_c(&t.0[2])
        && (t.0[2] != special || t.0[0] <= t.0[3])
}

pub fn enum_p() -> Vec<CodeTuple4> {
    CodeTuple4::all().filter(in_p).collect()
}

pub fn enum_a() -> Vec<CodeTuple4> {
    CodeTuple4::all().filter(in_a).collect()
}

pub fn enum_cpi02_second() -> Vec<CodeTuple4> {
    CodeTuple4::all().filter(in_cpi02_second).collect()
}

pub fn enum_n() -> Vec<CodeTuple6> {
    CodeTuple6::all().filter(in_n).collect()
}

pub fn enum_c() -> Vec<CodeTuple6> {
    CodeTuple6::all().filter(in_c).collect()
}

fn enum_6x4(filter: fn(&CodeTuple6x4) -> bool) -> Vec<CodeTuple6x4> {
    (0..64u8)
        .into_par_iter()
        .flat_map_iter(|a| {
            let first = CodeTuple6::from_index(a);
            (0..64u32 * 64 * 64).filter_map(move |rest| {
                let t = CodeTuple6x4([
                    first,
                    CodeTuple6::from_index((rest >> 12) as u8),
                    CodeTuple6::from_index((rest >> 6) as u8 & 63),
                    CodeTuple6::from_index(rest as u8 & 63),
                ]);
                filter(&t).then_some(t)
            })
        })
        .collect()
}

pub fn enum_v() -> Vec<CodeTuple6x4> {
    enum_6x4(in_v)
}

pub fn enum_h() -> Vec<CodeTuple6x4> {
    enum_6x4(in_h)
}

pub fn enum_s() -> Vec<CodeTuple6x4> {
    enum_6x4(in_s)
}

/// Named code families.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum Family {
    P,
    A,
    /// `{Δ(ℂ)}` together with the `P`-relations.
    Agamma,
    /// `𝒜^{Π⁰₂}` plus the restricted `A`-codes on `𝕊`.
    Cpi02,
    N,
    V,
    H,
    S,
    C,
    Ac,
}

impl Family {
    pub const ALL: [Family; 10] = [
        Family::P,
        Family::A,
        Family::Agamma,
        Family::Cpi02,
        Family::N,
        Family::V,
        Family::H,
        Family::S,
        Family::C,
        Family::Ac,
    ];
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.to_string() == s)
            .ok_or_else(|| Error::Parse(format!("unknown family {s:?}")))
    }
}

/// A code of any arity.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Code {
    /// The lone member `(2^ω, Δ(ℂ))`.
    DeltaC,
    T4(CodeTuple4),
    T6(CodeTuple6),
    T6x4(CodeTuple6x4),
    /// Index into the catalog of [`catalog_ac`].
    Catalog(usize),
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Code::DeltaC => f.write_str("Delta(C)"),
            Code::T4(t) => t.fmt(f),
            Code::T6(t) => t.fmt(f),
            Code::T6x4(t) => t.fmt(f),
            Code::Catalog(i) => write!(f, "E{i}"),
        }
    }
}

/// A code together with the family whose relation builder applies to it.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Member {
    pub family: Family,
    pub code: Code,
}

impl Member {
    fn new(family: Family, code: Code) -> Self {
        Member { family, code }
    }
}

/// Every member of a family, in a fixed order.
pub fn enumerate(f: Family) -> Vec<Member> {
    let t4 = |fam, codes: Vec<CodeTuple4>| {
        codes.into_iter().map(move |t| Member::new(fam, Code::T4(t))).collect::<Vec<_>>()
    };
    let t6 = |fam, codes: Vec<CodeTuple6>| {
        codes.into_iter().map(move |t| Member::new(fam, Code::T6(t))).collect::<Vec<_>>()
    };
    let t6x4 = |fam, codes: Vec<CodeTuple6x4>| {
        codes.into_iter().map(move |t| Member::new(fam, Code::T6x4(t))).collect::<Vec<_>>()
    };
    match f {
        Family::P => t4(Family::P, enum_p()),
        Family::A => t4(Family::A, enum_a()),
        Family::Agamma => {
            let mut out = vec![Member::new(Family::Agamma, Code::DeltaC)];
            out.extend(t4(Family::P, enum_p()));
            out
        }
        Family::Cpi02 => {
            let mut out = enumerate(Family::Agamma);
            out.extend(t4(Family::Cpi02, enum_cpi02_second()));
            out
        }
        Family::N => t6(Family::N, enum_n()),
        Family::C => t6(Family::C, enum_c()),
        Family::V => t6x4(Family::V, enum_v()),
        Family::H => t6x4(Family::H, enum_h()),
        Family::S => t6x4(Family::S, enum_s()),
        Family::Ac => (0..13).map(|i| Member::new(Family::Ac, Code::Catalog(i))).collect(),
    }
}

/// Whether `code` passes the filter of `family`.
pub fn is_member(code: &Code, family: Family) -> bool {
    match (family, code) {
        (Family::Agamma, Code::DeltaC) => true,
        (Family::P | Family::Agamma, Code::T4(t)) => in_p(t),
        (Family::A, Code::T4(t)) => in_a(t),
        (Family::Cpi02, Code::T4(t)) => in_cpi02_second(t),
        (Family::Cpi02, Code::DeltaC) => true,
        (Family::N, Code::T6(t)) => in_n(t),
        (Family::C, Code::T6(t)) => in_c(t),
        (Family::V, Code::T6x4(t)) => in_v(t),
        (Family::H, Code::T6x4(t)) => in_h(t),
        (Family::S, Code::T6x4(t)) => in_s(t),
        (Family::Ac, Code::Catalog(i)) => *i < 13,
        _ => false,
    }
}

/// The relation a code names. `gamma` is used by the rank-two families;
/// `complement` (the Σ⁰₁ reading) only by the rank-one families.
pub fn instantiate(
    code: &Code,
    family: Family,
    complement: bool,
    gamma: &GammaClass,
) -> Result<RelationSpec> {
    if !is_member(code, family) {
        return Err(Error::Domain(format!("{code} is not in family {family}")));
    }
    let rank_one = matches!(family, Family::N | Family::C | Family::V | Family::H | Family::S);
    if complement && !rank_one {
        return Err(Error::Domain(format!("family {family} has no complemented reading")));
    }
    let g = gamma.clone();
    Ok(match (family, *code) {
        (_, Code::DeltaC) => RelationSpec::RD { gamma: g, digraph: Digraph::Empty },
        (Family::P | Family::Agamma, Code::T4(t)) => {
            match t.to_string().as_str() {
                "3003" => RelationSpec::E3(g),
                "1001" => RelationSpec::Gm(g),
                _ => RelationSpec::RtP { gamma: g, t },
            }
        }
        (Family::A | Family::Cpi02, Code::T4(t)) => match t.to_string().as_str() {
            "0001" => RelationSpec::GmA(g),
            _ => RelationSpec::RtA { gamma: g, t },
        },
        (Family::N | Family::C, Code::T6(t)) => RelationSpec::Rank1N { t, complement },
        (Family::V, Code::T6x4(t)) => RelationSpec::Rank1V { t, complement },
        (Family::H, Code::T6x4(t)) => RelationSpec::Rank1H { t, complement },
        (Family::S, Code::T6x4(t)) => RelationSpec::Rank1S { t, complement },
        (Family::Ac, Code::Catalog(i)) => RelationSpec::Ac(i),
        _ => return Err(Error::Defect(format!("no builder for {code} in {family}"))),
    })
}

/// One member of a graph sub-basis.
#[derive(Clone, Debug)]
pub struct SubbaseEntry {
    pub spec: RelationSpec,
    /// The code, when the entry is named by one.
    pub member: Option<Member>,
    /// The code passes its family filter (always true for code-less entries).
    pub in_family: bool,
    /// The entry is stated to be acyclic.
    pub marked_acyclic: bool,
}

/// The three fixed lists of graph codes for the open and closed classes.
#[derive(Clone, Debug)]
pub struct GraphSubbases {
    /// Π⁰₁, continuous reducibility: 5 entries.
    pub pi01_le: Vec<SubbaseEntry>,
    /// Π⁰₁, injective continuous reducibility: 6 entries.
    pub pi01_sqsubseteq: Vec<SubbaseEntry>,
    /// Σ⁰₁, both reducibilities: 10 entries.
    pub sigma01: Vec<SubbaseEntry>,
}

fn coded_entry(family: Family, code: Code, complement: bool, marked_acyclic: bool) -> SubbaseEntry {
    let in_family = is_member(&code, family);
    let spec = instantiate(&code, family, complement, &GammaClass::Pi02)
        .expect("listed graph codes instantiate");
    SubbaseEntry { spec, member: Some(Member::new(family, code)), in_family, marked_acyclic }
}

/// The `ε`-shaped 6-bit code `(ε₀,1,ε₀,ε₁,ε₁,1)`.
fn eps_code(e0: bool, e1: bool) -> CodeTuple6 {
    CodeTuple6([e0, true, e0, e1, e1, true])
}

pub fn graph_subbases() -> GraphSubbases {
    let n = |s: &str| Code::T6(CodeTuple6::lit(s));
    let pi01_le = vec![
        coded_entry(Family::N, n("000110"), false, true),
        coded_entry(Family::N, n("101000"), false, false),
        coded_entry(Family::N, n("101110"), false, false),
        coded_entry(
            Family::V,
            Code::T6x4(CodeTuple6x4::lit(["000000", "000010", "000100", "000000"])),
            false,
            true,
        ),
        coded_entry(
            Family::S,
            Code::T6x4(CodeTuple6x4::lit(["000000", "010000", "010000", "000000"])),
            false,
            true,
        ),
    ];
    let mut pi01_sqsubseteq = pi01_le.clone();
    pi01_sqsubseteq.push(SubbaseEntry {
        spec: RelationSpec::R01_1 { complement: false },
        member: None,
        in_family: true,
        marked_acyclic: true,
    });

    let eps = [(false, false), (false, true), (true, true)];
    let mut sigma01 = vec![coded_entry(Family::N, n("111001"), true, true)];
    for &(e0, e1) in &eps {
        let t = CodeTuple6x4([
            CodeTuple6::lit("000001"),
            CodeTuple6::lit("000010"),
            CodeTuple6::lit("000100"),
            eps_code(e0, e1),
        ]);
        sigma01.push(coded_entry(Family::V, Code::T6x4(t), true, e0 && e1));
    }
    for (i, &(a0, a1)) in eps.iter().enumerate() {
        for &(b0, b1) in &eps[i..] {
            let (lo, hi) = (eps_code(a0, a1), eps_code(b0, b1));
            let special = CodeTuple6::lit("010000");
            let t = CodeTuple6x4([lo.min(hi), special, special, lo.max(hi)]);
            sigma01.push(coded_entry(Family::S, Code::T6x4(t), true, false));
        }
    }
    GraphSubbases { pi01_le, pi01_sqsubseteq, sigma01 }
}

/// Borel complexity of a catalog entry, as a subset of the square.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Topology {
    Clopen,
    OpenNotClosed,
    ClosedNotOpen,
}

/// One entry `𝓔_i` of the catalog of uncountable relations.
#[derive(Clone, Debug, Serialize)]
pub struct AcEntry {
    pub index: usize,
    pub label: &'static str,
    pub space: Space,
    pub topology: Topology,
    /// The structural properties the entry is known to have.
    pub flags: Profile,
}

const fn flags(
    reflexive: bool,
    irreflexive: bool,
    symmetric: bool,
    antisymmetric: bool,
    transitive: bool,
) -> Profile {
    Profile { reflexive, irreflexive, symmetric, antisymmetric, transitive }
}

/// The 13-element catalog `𝓔_0 … 𝓔_12`, in its fixed order.
pub fn catalog_ac() -> Vec<AcEntry> {
    use Topology::*;
    let rows: [(&str, Space, Topology, Profile); 13] = [
        ("(2^w, (2^w)^2)", Space::Cantor, Clopen, flags(true, false, true, false, true)),
        ("(S, H)", Space::Sseq, Clopen, flags(false, true, false, true, true)),
        ("(S, V)", Space::Sseq, Clopen, flags(false, true, false, true, true)),
        ("(S, L)", Space::Sseq, Clopen, flags(false, true, true, false, false)),
        ("(S, H+)", Space::Sseq, Clopen, flags(false, false, false, true, true)),
        ("(S, V+)", Space::Sseq, Clopen, flags(false, false, false, true, true)),
        ("(S, L+)", Space::Sseq, Clopen, flags(false, false, true, false, false)),
        ("(2^w, !=)", Space::Cantor, OpenNotClosed, flags(false, true, true, false, false)),
        ("(2^w, <lex)", Space::Cantor, OpenNotClosed, flags(false, true, false, true, true)),
        ("(2^w, =)", Space::Cantor, ClosedNotOpen, flags(true, false, true, true, true)),
        ("(2^w, <=lex)", Space::Cantor, ClosedNotOpen, flags(true, false, false, true, true)),
        ("(2^w, Graph(o))", Space::Cantor, ClosedNotOpen, flags(false, true, true, false, false)),
        (
            "(2^w, Graph(o|N_0))",
            Space::Cantor,
            ClosedNotOpen,
            flags(false, true, false, true, true),
        ),
    ];
    rows.into_iter()
        .enumerate()
        .map(|(index, (label, space, topology, flags))| AcEntry { index, label, space, topology, flags })
        .collect()
}

/// The graphs of the catalog's companion basis for graphs.
pub fn graph_catalog() -> Vec<(&'static str, RelationSpec)> {
    vec![
        ("(D, G_m) with C = 2^w", RelationSpec::Gm(GammaClass::Full)),
        ("(S, G_m^a) with C = 2^w", RelationSpec::GmA(GammaClass::Full)),
        ("(2^w, !=)", RelationSpec::Ac(7)),
    ]
}

/// CSV listing with a header row, one member per line.
pub fn to_csv(members: &[Member]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["family", "code"]).map_err(csv_err)?;
    for m in members {
        w.write_record([m.family.to_string(), m.code.to_string()]).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Defect(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Defect(e.to_string()))
}

fn csv_err(e: csv::Error) -> Error {
    Error::Defect(format!("csv: {e}"))
}

/// `{family, count, codes}`.
pub fn to_json(family: Family, members: &[Member]) -> serde_json::Value {
    serde_json::json!({
        "family": family.to_string(),
        "count": members.len(),
        "codes": members.iter().map(|m| m.code.to_string()).collect::<Vec<_>>(),
    })
}
