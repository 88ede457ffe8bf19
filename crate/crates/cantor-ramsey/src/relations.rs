//! Membership evaluators for the concrete relations, on their ambient
//! spaces, plus finite structural profiling and an acyclicity checker.
//!
//! Two unrelated families share the name `S_j` in the literature:
//! [`diag_class`] handles the four sets `ℂ, ∅, ¬ℂ, 2^ω` used by the rank-two
//! relations, and [`kcell`] the six-cell partition of `𝕂²`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::antichains::{CodeTuple4, CodeTuple6, CodeTuple6x4};
use crate::coloring::{
    g_beta_bipartite_contains, g_beta_diagfree_contains, r_beta_contains, r_d_contains,
    BetaParam, Digraph, GammaClass,
};
use crate::error::{Error, Result};
use crate::words::{alpha, Point};

/// A point of `𝕂 = {0} ∪ {2^-k | k ∈ ω}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum KPoint {
    Zero,
    /// `2^-k`.
    Dyadic(u32),
}

impl KPoint {
    /// Membership in ℂ = 𝕂 \ {0}.
    pub fn in_c(self) -> bool {
        matches!(self, KPoint::Dyadic(_))
    }
}

/// Numeric order: `0 < … < 2^-1 < 2^0`.
impl Ord for KPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (KPoint::Zero, KPoint::Zero) => Ordering::Equal,
            (KPoint::Zero, _) => Ordering::Less,
            (_, KPoint::Zero) => Ordering::Greater,
            (KPoint::Dyadic(a), KPoint::Dyadic(b)) => b.cmp(a),
        }
    }
}

impl PartialOrd for KPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for KPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KPoint::Zero => f.write_str("0"),
            KPoint::Dyadic(k) => write!(f, "2^-{k}"),
        }
    }
}

impl FromStr for KPoint {
    type Err = Error;

    /// `0` or `2^-<k>`.
    fn from_str(s: &str) -> Result<Self> {
        if s == "0" {
            return Ok(KPoint::Zero);
        }
        s.strip_prefix("2^-")
            .and_then(|k| k.parse().ok())
            .map(KPoint::Dyadic)
            .ok_or_else(|| Error::Parse(format!("{s:?} is not 0 or 2^-<k>")))
    }
}

/// Ambient spaces.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum Space {
    /// `2^ω`.
    Cantor,
    /// `𝔻 = 2 × 2^ω`.
    D2xCantor,
    /// `𝕊 = {0^∞} ∪ N_1`.
    Sseq,
    /// `𝕂`.
    Kspace,
    /// `2 × 𝕂`.
    D2xK,
    /// `(¬ℂ) ⊕ 𝕂`: side 0 holds only the point 0.
    Lspace,
    /// `𝕂 ⊕ (¬ℂ)`: side 1 holds only the point 0.
    Mspace,
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A point of one of the ambient spaces.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum SpacePoint {
    Cantor(Point),
    D2xCantor(bool, Point),
    Sseq(Point),
    Kspace(KPoint),
    D2xK(bool, KPoint),
    Lspace(bool, KPoint),
    Mspace(bool, KPoint),
}

impl SpacePoint {
    pub fn space(&self) -> Space {
        match self {
            SpacePoint::Cantor(_) => Space::Cantor,
            SpacePoint::D2xCantor(..) => Space::D2xCantor,
            SpacePoint::Sseq(_) => Space::Sseq,
            SpacePoint::Kspace(_) => Space::Kspace,
            SpacePoint::D2xK(..) => Space::D2xK,
            SpacePoint::Lspace(..) => Space::Lspace,
            SpacePoint::Mspace(..) => Space::Mspace,
        }
    }

    /// Checks the per-space domain constraints.
    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            SpacePoint::Sseq(p) => *p == Point::zero() || p.bit(0),
            SpacePoint::Lspace(false, k) => *k == KPoint::Zero,
            SpacePoint::Mspace(true, k) => *k == KPoint::Zero,
            _ => true,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!("{self} is not a point of {}", self.space())))
        }
    }

    /// Parses a point of `space`: a point or K-point literal, prefixed
    /// with `<bit>:` for the two-sided spaces.
    pub fn parse(space: Space, s: &str) -> Result<Self> {
        let tagged = || -> Result<(bool, &str)> {
            match s.split_once(':') {
                Some(("0", rest)) => Ok((false, rest)),
                Some(("1", rest)) => Ok((true, rest)),
                _ => Err(Error::Parse(format!("{s:?} needs a 0: or 1: side tag"))),
            }
        };
        let pt = match space {
            Space::Cantor => SpacePoint::Cantor(s.parse()?),
            Space::Sseq => SpacePoint::Sseq(s.parse()?),
            Space::Kspace => SpacePoint::Kspace(s.parse()?),
            Space::D2xCantor => {
                let (e, rest) = tagged()?;
                SpacePoint::D2xCantor(e, rest.parse()?)
            }
            Space::D2xK => {
                let (e, rest) = tagged()?;
                SpacePoint::D2xK(e, rest.parse()?)
            }
            Space::Lspace => {
                let (e, rest) = tagged()?;
                SpacePoint::Lspace(e, rest.parse()?)
            }
            Space::Mspace => {
                let (e, rest) = tagged()?;
                SpacePoint::Mspace(e, rest.parse()?)
            }
        };
        pt.validate()?;
        Ok(pt)
    }
}

impl fmt::Display for SpacePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpacePoint::Cantor(p) | SpacePoint::Sseq(p) => p.fmt(f),
            SpacePoint::Kspace(k) => k.fmt(f),
            SpacePoint::D2xCantor(e, p) => write!(f, "{}:{p}", *e as u8),
            SpacePoint::D2xK(e, k) | SpacePoint::Lspace(e, k) | SpacePoint::Mspace(e, k) => {
                write!(f, "{}:{k}", *e as u8)
            }
        }
    }
}

/// A concrete relation together with whatever parameters it needs.
#[derive(Clone)]
pub enum RelationSpec {
    /// `(ε,x) = (η,y)` or `x = y ∈ ℂ`, on 𝔻.
    E3(GammaClass),
    /// `E3` minus the diagonal of 𝔻.
    Gm(GammaClass),
    /// The graph joining `0^∞` to every `1α` with `α ∈ ℂ`, on 𝕊.
    GmA(GammaClass),
    /// `((0,x),(1,x))` for `x ∈ ℂ`, on 𝔻.
    Om(GammaClass),
    /// `((ε,x),(η,x))` with `x ∈ S_{t(ε,η)}`, on 𝔻.
    RtP { gamma: GammaClass, t: CodeTuple4 },
    /// The four-clause relation on 𝕊 coded by `t`.
    RtA { gamma: GammaClass, t: CodeTuple4 },
    Rbeta { gamma: GammaClass, beta: BetaParam },
    GbetaBip { beta: BetaParam },
    GbetaDiag { beta: BetaParam },
    /// `Δ(ℂ) ∪ {(s0^∞, t0^∞) | (s,t) ∈ 𝒟}`.
    RD { gamma: GammaClass, digraph: Digraph },
    /// `ℂ² \ Δ`.
    Cne(GammaClass),
    Rank1N { t: CodeTuple6, complement: bool },
    Rank1V { t: CodeTuple6x4, complement: bool },
    Rank1H { t: CodeTuple6x4, complement: bool },
    Rank1S { t: CodeTuple6x4, complement: bool },
    /// `{(2^{-2k-j0}, 2^{-2k-j1}) | k ∈ ω}`.
    Tj { j: (bool, bool) },
    /// `T_{01}`, or its complement in `𝕂²`.
    R01_0 { complement: bool },
    /// `T_{01} ∪ T_{10}`, or its complement in `𝕂²`.
    R01_1 { complement: bool },
    /// Entry `i` of the catalog of uncountable relations.
    Ac(usize),
}

impl RelationSpec {
    pub fn id(&self) -> &'static str {
        match self {
            RelationSpec::E3(_) => "E3",
            RelationSpec::Gm(_) => "Gm",
            RelationSpec::GmA(_) => "GmA",
            RelationSpec::Om(_) => "Om",
            RelationSpec::RtP { .. } => "Rt_P",
            RelationSpec::RtA { .. } => "RtA_A",
            RelationSpec::Rbeta { .. } => "Rbeta",
            RelationSpec::GbetaBip { .. } => "GbetaBip",
            RelationSpec::GbetaDiag { .. } => "GbetaDiag",
            RelationSpec::RD { .. } => "R_D",
            RelationSpec::Cne(_) => "Cne",
            RelationSpec::Rank1N { .. } => "Rank1_N",
            RelationSpec::Rank1V { .. } => "Rank1_V",
            RelationSpec::Rank1H { .. } => "Rank1_H",
            RelationSpec::Rank1S { .. } => "Rank1_S",
            RelationSpec::Tj { .. } => "Tj",
            RelationSpec::R01_0 { .. } => "R01_0",
            RelationSpec::R01_1 { .. } => "R01_1",
            RelationSpec::Ac(_) => "Ac",
        }
    }

    pub fn space(&self) -> Space {
        match self {
            RelationSpec::E3(_)
            | RelationSpec::Gm(_)
            | RelationSpec::Om(_)
            | RelationSpec::RtP { .. }
            | RelationSpec::GbetaBip { .. } => Space::D2xCantor,
            RelationSpec::GmA(_) | RelationSpec::RtA { .. } => Space::Sseq,
            RelationSpec::Rbeta { .. }
            | RelationSpec::GbetaDiag { .. }
            | RelationSpec::RD { .. }
            | RelationSpec::Cne(_) => Space::Cantor,
            RelationSpec::Rank1N { .. }
            | RelationSpec::Tj { .. }
            | RelationSpec::R01_0 { .. }
            | RelationSpec::R01_1 { .. } => Space::Kspace,
            RelationSpec::Rank1V { .. } => Space::Lspace,
            RelationSpec::Rank1H { .. } => Space::Mspace,
            RelationSpec::Rank1S { .. } => Space::D2xK,
            RelationSpec::Ac(i) => {
                if (1..=6).contains(i) {
                    Space::Sseq
                } else {
                    Space::Cantor
                }
            }
        }
    }

    fn params(&self) -> Vec<(&'static str, String)> {
        let flag = |c: bool| c.then(|| ("complement", "1".to_string()));
        let mut out = Vec::new();
        match self {
            RelationSpec::E3(g)
            | RelationSpec::Gm(g)
            | RelationSpec::GmA(g)
            | RelationSpec::Om(g)
            | RelationSpec::Cne(g) => out.push(("gamma", g.to_string())),
            RelationSpec::RtP { gamma, t } | RelationSpec::RtA { gamma, t } => {
                out.push(("gamma", gamma.to_string()));
                out.push(("t", t.to_string()));
            }
            RelationSpec::Rbeta { gamma, beta } => {
                out.push(("gamma", gamma.to_string()));
                out.push(("beta", beta.to_string()));
            }
            RelationSpec::GbetaBip { beta } | RelationSpec::GbetaDiag { beta } => {
                out.push(("beta", beta.to_string()))
            }
            RelationSpec::RD { gamma, digraph } => {
                out.push(("gamma", gamma.to_string()));
                out.push(("d", digraph.to_string()));
            }
            RelationSpec::Rank1N { t, complement } => {
                out.push(("t", t.to_string()));
                out.extend(flag(*complement));
            }
            RelationSpec::Rank1V { t, complement }
            | RelationSpec::Rank1H { t, complement }
            | RelationSpec::Rank1S { t, complement } => {
                out.push(("t", t.to_string()));
                out.extend(flag(*complement));
            }
            RelationSpec::Tj { j } => out.push(("j", format!("{}{}", j.0 as u8, j.1 as u8))),
            RelationSpec::R01_0 { complement } | RelationSpec::R01_1 { complement } => {
                out.extend(flag(*complement))
            }
            RelationSpec::Ac(i) => out.push(("i", i.to_string())),
        }
        out
    }
}

impl fmt::Display for RelationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())?;
        let params = self.params();
        if !params.is_empty() {
            let joined: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            write!(f, ":{}", joined.join(","))?;
        }
        Ok(())
    }
}

impl fmt::Debug for RelationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RelationSpec({self})")
    }
}

/// Splits `k=v,k=v` where a value may itself contain commas (as the
/// four-group rank-one codes do): a piece without `=` continues the value
/// before it.
fn split_params(s: &str) -> Result<BTreeMap<String, String>> {
    let mut out: Vec<(String, String)> = Vec::new();
    for piece in s.split(',') {
        match piece.split_once('=') {
            Some((k, v)) => out.push((k.to_string(), v.to_string())),
            None => match out.last_mut() {
                Some((_, v)) => {
                    v.push(',');
                    v.push_str(piece);
                }
                None => return Err(Error::Parse(format!("parameter {piece:?} has no name"))),
            },
        }
    }
    let mut map = BTreeMap::new();
    for (k, v) in out {
        if map.insert(k.clone(), v).is_some() {
            return Err(Error::Parse(format!("parameter {k} given twice")));
        }
    }
    Ok(map)
}

struct Params(BTreeMap<String, String>);

impl Params {
    fn take(&mut self, key: &str) -> Result<String> {
        self.0
            .remove(key)
            .ok_or_else(|| Error::Parse(format!("missing parameter {key}")))
    }

    fn take_parsed<T: FromStr<Err = Error>>(&mut self, key: &str) -> Result<T> {
        self.take(key)?.parse()
    }

    fn complement(&mut self) -> Result<bool> {
        match self.0.remove("complement").as_deref() {
            None | Some("0") => Ok(false),
            Some("1") => Ok(true),
            Some(v) => Err(Error::Parse(format!("complement must be 0 or 1, got {v:?}"))),
        }
    }

    fn finish(self, spec: RelationSpec) -> Result<RelationSpec> {
        match self.0.keys().next() {
            Some(k) => Err(Error::Parse(format!("{} takes no parameter {k}", spec.id()))),
            None => Ok(spec),
        }
    }
}

impl FromStr for RelationSpec {
    type Err = Error;

    /// `<id>[:<param>=<value>,…]`, e.g. `Gm:gamma=Sigma02` or `Tj:j=01`.
    fn from_str(s: &str) -> Result<Self> {
        let (id, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut p = Params(if rest.is_empty() { BTreeMap::new() } else { split_params(rest)? });
        let spec = match id {
            "E3" => RelationSpec::E3(p.take_parsed("gamma")?),
            "Gm" => RelationSpec::Gm(p.take_parsed("gamma")?),
            "GmA" => RelationSpec::GmA(p.take_parsed("gamma")?),
            "Om" => RelationSpec::Om(p.take_parsed("gamma")?),
            "Cne" => RelationSpec::Cne(p.take_parsed("gamma")?),
            "Rt_P" => RelationSpec::RtP { gamma: p.take_parsed("gamma")?, t: p.take_parsed("t")? },
            "RtA_A" => RelationSpec::RtA { gamma: p.take_parsed("gamma")?, t: p.take_parsed("t")? },
            "Rbeta" => RelationSpec::Rbeta {
                gamma: p.take_parsed("gamma")?,
                beta: p.take_parsed("beta")?,
            },
            "GbetaBip" => RelationSpec::GbetaBip { beta: p.take_parsed("beta")? },
            "GbetaDiag" => RelationSpec::GbetaDiag { beta: p.take_parsed("beta")? },
            "R_D" => RelationSpec::RD { gamma: p.take_parsed("gamma")?, digraph: p.take_parsed("d")? },
            "Rank1_N" => RelationSpec::Rank1N { t: p.take_parsed("t")?, complement: p.complement()? },
            "Rank1_V" => RelationSpec::Rank1V { t: p.take_parsed("t")?, complement: p.complement()? },
            "Rank1_H" => RelationSpec::Rank1H { t: p.take_parsed("t")?, complement: p.complement()? },
            "Rank1_S" => RelationSpec::Rank1S { t: p.take_parsed("t")?, complement: p.complement()? },
            "Tj" => {
                let j = p.take("j")?;
                let j = match j.as_str() {
                    "00" => (false, false),
                    "01" => (false, true),
                    "10" => (true, false),
                    "11" => (true, true),
                    _ => return Err(Error::Parse(format!("j must be two bits, got {j:?}"))),
                };
                RelationSpec::Tj { j }
            }
            "R01_0" => RelationSpec::R01_0 { complement: p.complement()? },
            "R01_1" => RelationSpec::R01_1 { complement: p.complement()? },
            "Ac" => {
                let i: usize = p
                    .take("i")?
                    .parse()
                    .map_err(|_| Error::Parse("catalog index must be a number".into()))?;
                if i >= 13 {
                    return Err(Error::Parse(format!("catalog index {i} is out of range 0..13")));
                }
                RelationSpec::Ac(i)
            }
            _ => return Err(Error::Parse(format!("unknown relation id {id:?}"))),
        };
        p.finish(spec)
    }
}

/// Which of `ℂ` (0) or `¬ℂ` (2) contains `x`.
pub fn diag_class(g: &GammaClass, x: &Point) -> Result<u8> {
    Ok(if g.contains(x)? { 0 } else { 2 })
}

/// `x ∈ S_j` for `S_0 = ℂ, S_1 = ∅, S_2 = ¬ℂ, S_3 = 2^ω`.
pub fn in_sj(g: &GammaClass, j: u8, x: &Point) -> Result<bool> {
    match j {
        0 => g.contains(x),
        1 => Ok(false),
        2 => Ok(!g.contains(x)?),
        3 => Ok(true),
        _ => Err(Error::Domain(format!("no set S_{j}"))),
    }
}

/// The cell of `𝕂²` containing `(x, y)`: 0 for `x < y` in ℂ, 1 for
/// `x = y ∈ ℂ`, 2 for `x > y` in ℂ, 3 for only `x ∈ ℂ`, 4 for only `y ∈ ℂ`,
/// 5 for neither.
pub fn kcell(x: KPoint, y: KPoint) -> u8 {
    match (x.in_c(), y.in_c()) {
        (true, true) => match x.cmp(&y) {
            Ordering::Less => 0,
            Ordering::Equal => 1,
            Ordering::Greater => 2,
        },
        (true, false) => 3,
        (false, true) => 4,
        (false, false) => 5,
    }
}

fn in_t(j: (bool, bool), x: KPoint, y: KPoint) -> bool {
    match (x, y) {
        (KPoint::Dyadic(a), KPoint::Dyadic(b)) => {
            let (a, b, j0, j1) = (a as i64, b as i64, j.0 as i64, j.1 as i64);
            a >= j0 && (a - j0) % 2 == 0 && b - a == j1 - j0
        }
        _ => false,
    }
}

fn mismatch(r: &RelationSpec, u: &SpacePoint) -> Error {
    Error::Domain(format!("{u} is a point of {}, but {r} lives on {}", u.space(), r.space()))
}

/// Decides `(u, v) ∈ r`.
pub fn eval(r: &RelationSpec, u: &SpacePoint, v: &SpacePoint) -> Result<bool> {
    for w in [u, v] {
        if w.space() != r.space() {
            return Err(mismatch(r, w));
        }
        w.validate()?;
    }
    use SpacePoint as P;
    match (r, u, v) {
        (RelationSpec::E3(g), P::D2xCantor(e, x), P::D2xCantor(n, y)) => {
            Ok((e == n && x == y) || (x == y && g.contains(x)?))
        }
        (RelationSpec::Gm(g), P::D2xCantor(e, x), P::D2xCantor(n, y)) => {
            Ok(e != n && x == y && g.contains(x)?)
        }
        (RelationSpec::Om(g), P::D2xCantor(e, x), P::D2xCantor(n, y)) => {
            Ok(!e && *n && x == y && g.contains(x)?)
        }
        (RelationSpec::RtP { gamma, t }, P::D2xCantor(e, x), P::D2xCantor(n, y)) => {
            Ok(x == y && in_sj(gamma, t.get(*e, *n), x)?)
        }
        (RelationSpec::GmA(g), P::Sseq(x), P::Sseq(y)) => {
            eval_rta(g, &"0001".parse().expect("code literal"), x, y)
        }
        (RelationSpec::RtA { gamma, t }, P::Sseq(x), P::Sseq(y)) => eval_rta(gamma, t, x, y),
        (RelationSpec::Rbeta { gamma, beta }, P::Cantor(x), P::Cantor(y)) => {
            r_beta_contains(gamma, beta, x, y)
        }
        (RelationSpec::GbetaBip { beta }, P::D2xCantor(e, x), P::D2xCantor(n, y)) => {
            Ok(g_beta_bipartite_contains(beta, (*e, x), (*n, y)))
        }
        (RelationSpec::GbetaDiag { beta }, P::Cantor(x), P::Cantor(y)) => {
            Ok(g_beta_diagfree_contains(beta, x, y))
        }
        (RelationSpec::RD { gamma, digraph }, P::Cantor(x), P::Cantor(y)) => {
            r_d_contains(gamma, digraph, x, y)
        }
        (RelationSpec::Cne(g), P::Cantor(x), P::Cantor(y)) => {
            Ok(x != y && g.contains(x)? && g.contains(y)?)
        }
        (RelationSpec::Rank1N { t, complement }, P::Kspace(x), P::Kspace(y)) => {
            Ok(t.get(kcell(*x, *y) as usize) != *complement)
        }
        (RelationSpec::Rank1V { t, complement }, P::Lspace(e, x), P::Lspace(n, y))
        | (RelationSpec::Rank1H { t, complement }, P::Mspace(e, x), P::Mspace(n, y))
        | (RelationSpec::Rank1S { t, complement }, P::D2xK(e, x), P::D2xK(n, y)) => {
            Ok(t.get(*e, *n).get(kcell(*x, *y) as usize) != *complement)
        }
        (RelationSpec::Tj { j }, P::Kspace(x), P::Kspace(y)) => Ok(in_t(*j, *x, *y)),
        (RelationSpec::R01_0 { complement }, P::Kspace(x), P::Kspace(y)) => {
            Ok(in_t((false, true), *x, *y) != *complement)
        }
        (RelationSpec::R01_1 { complement }, P::Kspace(x), P::Kspace(y)) => {
            Ok((in_t((false, true), *x, *y) || in_t((true, false), *x, *y)) != *complement)
        }
        (RelationSpec::Ac(i), P::Cantor(x) | P::Sseq(x), P::Cantor(y) | P::Sseq(y)) => {
            Ok(eval_catalog(*i, x, y))
        }
        _ => Err(Error::Defect(format!("no evaluator for {r} on ({u}, {v})"))),
    }
}

/// The relation on 𝕊 coded by `t`: the loop at `0^∞` when `t(0,0) = 1`,
/// `(0^∞, 1α)` for `α ∈ S_{t(0,1)}`, `(1α, 0^∞)` for `α ∈ S_{t(1,0)}`, and
/// `(1α, 1α)` for `α ∈ S_{t(1,1)}`.
fn eval_rta(g: &GammaClass, t: &CodeTuple4, x: &Point, y: &Point) -> Result<bool> {
    let zero = Point::zero();
    match (*x == zero, *y == zero) {
        (true, true) => Ok(t.get(false, false) == 1),
        (true, false) => in_sj(g, t.get(false, true), &y.tail()),
        (false, true) => in_sj(g, t.get(true, false), &x.tail()),
        (false, false) => Ok(x == y && in_sj(g, t.get(true, true), &x.tail())?),
    }
}

fn eval_catalog(i: usize, x: &Point, y: &Point) -> bool {
    let zero = Point::zero();
    let h = x.bit(0) && *y == zero;
    let v = *x == zero && y.bit(0);
    let both_zero = *x == zero && *y == zero;
    match i {
        0 => true,
        1 => h,
        2 => v,
        3 => h || v,
        4 => h || both_zero,
        5 => v || both_zero,
        6 => h || v || both_zero,
        7 => x != y,
        8 => x < y,
        9 => x == y,
        10 => x <= y,
        11 => *y == x.flip_first(),
        12 => !x.bit(0) && *y == x.flip_first(),
        _ => false,
    }
}

/// The five structural properties, evaluated on a finite vertex set.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct Profile {
    pub reflexive: bool,
    pub irreflexive: bool,
    pub symmetric: bool,
    pub antisymmetric: bool,
    pub transitive: bool,
}

fn matrix(r: &RelationSpec, vertices: &[SpacePoint]) -> Result<Vec<Vec<bool>>> {
    vertices
        .iter()
        .map(|u| vertices.iter().map(|v| eval(r, u, v)).collect())
        .collect()
}

/// Exhaustive verdicts over `vertices`. A `false` is a certificate; a
/// `true` only speaks for the sample.
pub fn structural_profile(r: &RelationSpec, vertices: &[SpacePoint]) -> Result<Profile> {
    let m = matrix(r, vertices)?;
    let n = vertices.len();
    let idx = || (0..n).flat_map(|i| (0..n).map(move |j| (i, j)));
    Ok(Profile {
        reflexive: (0..n).all(|i| m[i][i]),
        irreflexive: (0..n).all(|i| !m[i][i]),
        symmetric: idx().all(|(i, j)| m[i][j] == m[j][i]),
        antisymmetric: idx().all(|(i, j)| i == j || !(m[i][j] && m[j][i])),
        transitive: idx().all(|(i, j)| !m[i][j] || (0..n).all(|k| !m[j][k] || m[i][k])),
    })
}

/// Looks for a cycle of length at least 3 in the simple graph of
/// `s(r) \ Δ` on `vertices`, by depth-first search that never walks back
/// along the edge it came from. Returns the cycle's vertices in order.
pub fn acyclicity_check(r: &RelationSpec, vertices: &[SpacePoint]) -> Result<Option<Vec<SpacePoint>>> {
    let m = matrix(r, vertices)?;
    let n = vertices.len();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| j != i && (m[i][j] || m[j][i])).collect())
        .collect();
    let mut visited = vec![false; n];
    let mut on_path = vec![false; n];
    for root in 0..n {
        if visited[root] {
            continue;
        }
        // (vertex, parent, next neighbour to try)
        let mut stack: Vec<(usize, Option<usize>, usize)> = vec![(root, None, 0)];
        visited[root] = true;
        on_path[root] = true;
        while let Some(top) = stack.last_mut() {
            let (v, parent, next) = *top;
            if next == adj[v].len() {
                on_path[v] = false;
                stack.pop();
                continue;
            }
            top.2 += 1;
            let w = adj[v][next];
            if Some(w) == parent {
                continue;
            }
            if on_path[w] {
                let start = stack.iter().position(|f| f.0 == w).expect("w is on the path");
                let cycle = stack[start..].iter().map(|f| vertices[f.0].clone()).collect();
                return Ok(Some(cycle));
            }
            if !visited[w] {
                visited[w] = true;
                on_path[w] = true;
                stack.push((w, Some(v), 0));
            }
        }
    }
    Ok(None)
}

/// `{α_n | n ≤ 20} ∪ {(01)^∞, (10)^∞, 1^∞}`: three distinct points of P_∞.
pub fn standard_points() -> Vec<Point> {
    let mut pts: Vec<Point> = (0..=20).map(alpha).collect();
    for lit in ["(01)", "(10)", "(1)"] {
        pts.push(lit.parse().expect("fixture literal"));
    }
    pts
}

/// The standard vertex set of a space: [`standard_points`] (restricted to
/// 𝕊 or tagged as needed) for the Cantor-type spaces, and `0` with
/// `2^-k`, `k ≤ 20`, for the 𝕂-type spaces.
pub fn standard_vertices(space: Space) -> Vec<SpacePoint> {
    vertices_from(space, standard_points(), 20)
}

/// At least `size` vertices of `space`: the first `size` eventually-zero
/// points plus three points of P_∞ on the Cantor side, `0` and `2^-k` for
/// `k < size` on the 𝕂 side (both tags where the space has two sides).
pub fn truncation(space: Space, size: usize) -> Vec<SpacePoint> {
    let mut pts: Vec<Point> = match space {
        // Half of the eventually-zero points fall outside 𝕊.
        Space::Sseq => (0..2 * size as u64 + 2).map(alpha).collect(),
        _ => (0..size as u64).map(alpha).collect(),
    };
    for lit in ["(01)", "(10)", "(1)"] {
        pts.push(lit.parse().expect("fixture literal"));
    }
    vertices_from(space, pts, size as u32)
}

fn vertices_from(space: Space, pts: Vec<Point>, max_k: u32) -> Vec<SpacePoint> {
    let ks: Vec<KPoint> =
        std::iter::once(KPoint::Zero).chain((0..=max_k).map(KPoint::Dyadic)).collect();
    let both = [false, true];
    match space {
        Space::Cantor => pts.into_iter().map(SpacePoint::Cantor).collect(),
        Space::Sseq => pts
            .into_iter()
            .map(SpacePoint::Sseq)
            .filter(|p| p.validate().is_ok())
            .collect(),
        Space::D2xCantor => both
            .iter()
            .flat_map(|&e| pts.iter().map(move |p| SpacePoint::D2xCantor(e, p.clone())))
            .collect(),
        Space::Kspace => ks.into_iter().map(SpacePoint::Kspace).collect(),
        Space::D2xK => both
            .iter()
            .flat_map(|&e| ks.iter().map(move |&k| SpacePoint::D2xK(e, k)))
            .collect(),
        Space::Lspace => std::iter::once(SpacePoint::Lspace(false, KPoint::Zero))
            .chain(ks.iter().map(|&k| SpacePoint::Lspace(true, k)))
            .collect(),
        Space::Mspace => ks
            .iter()
            .map(|&k| SpacePoint::Mspace(false, k))
            .chain(std::iter::once(SpacePoint::Mspace(true, KPoint::Zero)))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::antichains::catalog_ac;

    fn spec(s: &str) -> RelationSpec {
        s.parse().unwrap()
    }

    fn d(e: bool, s: &str) -> SpacePoint {
        SpacePoint::D2xCantor(e, s.parse().unwrap())
    }

    fn k(x: KPoint) -> SpacePoint {
        SpacePoint::Kspace(x)
    }

    fn c(s: &str) -> SpacePoint {
        SpacePoint::Cantor(s.parse().unwrap())
    }

    #[test]
    fn diag_class_examples() {
        let p = |s: &str| s.parse::<Point>().unwrap();
        assert_eq!(diag_class(&GammaClass::Sigma02, &p("(01)")).unwrap(), 0);
        assert_eq!(diag_class(&GammaClass::Pi02, &p("(01)")).unwrap(), 2);
        assert_eq!(diag_class(&GammaClass::Sigma02, &p("1(0)")).unwrap(), 2);
        assert!(!in_sj(&GammaClass::Pi02, 1, &p("1(0)")).unwrap());
        assert!(in_sj(&GammaClass::Pi02, 3, &p("(01)")).unwrap());
    }

    #[test]
    fn kcell_examples() {
        use KPoint::*;
        assert_eq!(kcell(Dyadic(3), Dyadic(1)), 0);
        assert_eq!(kcell(Dyadic(1), Dyadic(1)), 1);
        assert_eq!(kcell(Dyadic(1), Dyadic(3)), 2);
        assert_eq!(kcell(Dyadic(1), Zero), 3);
        assert_eq!(kcell(Zero, Dyadic(2)), 4);
        assert_eq!(kcell(Zero, Zero), 5);
    }

    #[test]
    fn eval_examples() {
        let gm = spec("Gm:gamma=Sigma02");
        assert!(eval(&gm, &d(false, "(01)"), &d(true, "(01)")).unwrap());
        assert!(!eval(&gm, &d(false, "1(0)"), &d(true, "1(0)")).unwrap());
        let n = spec("Rank1_N:t=000110");
        assert!(eval(&n, &k(KPoint::Dyadic(1)), &k(KPoint::Zero)).unwrap());
        let tj = spec("Tj:j=01");
        assert!(eval(&tj, &k(KPoint::Dyadic(0)), &k(KPoint::Dyadic(1))).unwrap());
        assert!(!eval(&tj, &k(KPoint::Dyadic(1)), &k(KPoint::Dyadic(2))).unwrap());
        assert!(eval(&tj, &k(KPoint::Dyadic(2)), &k(KPoint::Dyadic(3))).unwrap());
        let o = spec("Ac:i=11");
        let x: Point = "(01)".parse().unwrap();
        assert!(eval(&o, &SpacePoint::Cantor(x.clone()), &SpacePoint::Cantor(x.flip_first()))
            .unwrap());
    }

    #[test]
    fn space_mismatch_is_an_error() {
        let gm = spec("Gm:gamma=Sigma02");
        assert!(matches!(eval(&gm, &c("(01)"), &c("(01)")), Err(Error::Domain(_))));
        let v = spec("Rank1_V:t=000000,000010,000100,000000");
        let bad = SpacePoint::Lspace(false, KPoint::Dyadic(2));
        let ok = SpacePoint::Lspace(true, KPoint::Zero);
        assert!(matches!(eval(&v, &bad, &ok), Err(Error::Domain(_))));
        let s = spec("GmA:gamma=Sigma02");
        let outside = SpacePoint::Sseq("01(0)".parse().unwrap());
        assert!(eval(&s, &outside, &outside).is_err());
    }

    #[test]
    fn spec_text_round_trips() {
        for s in [
            "Gm:gamma=Sigma02",
            "Rank1_N:t=000110",
            "Rbeta:gamma=Pi02,beta=01(0)",
            "Tj:j=01",
            "Ac:i=8",
            "Rank1_S:t=000000,010000,010000,000000,complement=1",
            "R_D:gamma=Pi02,d=beta:01(0)",
            "R01_1",
            "RtA_A:gamma=Pi02,t=1031",
        ] {
            assert_eq!(spec(s).to_string(), s);
        }
        for bad in ["Nope", "Gm", "Gm:gamma=Delta", "Ac:i=13", "Tj:j=2", "Gm:gamma=Pi02,x=1"] {
            assert!(bad.parse::<RelationSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn point_literals_per_space() {
        assert_eq!(SpacePoint::parse(Space::D2xK, "1:2^-3").unwrap(), SpacePoint::D2xK(true, KPoint::Dyadic(3)));
        assert!(SpacePoint::parse(Space::Lspace, "0:2^-3").is_err());
        assert!(SpacePoint::parse(Space::D2xCantor, "(01)").is_err());
        assert!(SpacePoint::parse(Space::Sseq, "01(0)").is_err());
        assert_eq!("2^-7".parse::<KPoint>().unwrap(), KPoint::Dyadic(7));
        assert!("2^7".parse::<KPoint>().is_err());
    }

    #[test]
    fn om_symmetrizes_to_gm() {
        let vs = standard_vertices(Space::D2xCantor);
        for g in ["Sigma02", "Pi02"] {
            let om = spec(&format!("Om:gamma={g}"));
            let gm = spec(&format!("Gm:gamma={g}"));
            for u in &vs {
                for v in &vs {
                    let sym = eval(&om, u, v).unwrap() || eval(&om, v, u).unwrap();
                    assert_eq!(sym, eval(&gm, u, v).unwrap(), "{u} {v}");
                }
            }
        }
    }

    #[test]
    fn profile_examples() {
        let vs = standard_vertices(Space::Cantor);
        let eq = structural_profile(&spec("Ac:i=9"), &vs).unwrap();
        assert!(eq.reflexive && eq.symmetric && eq.transitive);
        let ne = structural_profile(&spec("Ac:i=7"), &vs).unwrap();
        assert!(ne.irreflexive && !ne.reflexive);
        let lt = structural_profile(&spec("Ac:i=8"), &vs[..3]).unwrap();
        assert!(lt.antisymmetric && lt.transitive && !lt.symmetric);
    }

    #[test]
    fn catalog_table_matches_standard_vertices() {
        for entry in catalog_ac() {
            let vs = standard_vertices(entry.space);
            let got = structural_profile(&RelationSpec::Ac(entry.index), &vs).unwrap();
            assert_eq!(got, entry.flags, "entry {}", entry.index);
        }
    }

    #[test]
    fn acyclicity_examples() {
        let tri: Vec<SpacePoint> = crate::coloring::cycle_witness(1)
            .unwrap()
            .into_iter()
            .map(SpacePoint::Cantor)
            .collect();
        let cyc = acyclicity_check(&spec("GbetaDiag:beta=01(0)"), &tri).unwrap();
        assert_eq!(cyc.map(|c| c.len()), Some(3));

        let mut vs: Vec<SpacePoint> = Vec::new();
        for e in [false, true] {
            for n in 0..=20 {
                vs.push(SpacePoint::D2xCantor(e, alpha(n)));
            }
            vs.push(d(e, "(01)"));
        }
        assert_eq!(acyclicity_check(&spec("Gm:gamma=Sigma02"), &vs).unwrap(), None);

        let pinf = vec![c("(01)"), c("(10)"), c("(1)")];
        let cyc = acyclicity_check(&spec("Cne:gamma=Sigma02"), &pinf).unwrap();
        assert_eq!(cyc.map(|c| c.len()), Some(3));
    }

    #[test]
    fn dfs_finds_long_cycles_and_ignores_trees() {
        let ks: Vec<SpacePoint> = (0..5).map(|i| k(KPoint::Dyadic(i))).collect();
        // Cell 0 (x < y) joins every pair of distinct dyadics: a clique.
        let clique = spec("Rank1_N:t=100000");
        assert!(acyclicity_check(&clique, &ks).unwrap().is_some());
        // T_01 is a matching.
        assert!(acyclicity_check(&spec("Tj:j=01"), &ks).unwrap().is_none());
        // Cells 3 and 4: a star around 0.
        let mut star = ks.clone();
        star.push(k(KPoint::Zero));
        assert!(acyclicity_check(&spec("Rank1_N:t=000110"), &star).unwrap().is_none());
    }
}
