//! The coloring `c` of pairs of eventually-zero points, the relations
//! `ℝ_β` and `𝔾_β`, and the explicit witnesses that `c` is onto and that
//! `ℝ_β` has cycles.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::oscillation::invariant_i;
use crate::words::{q_normalize, Point, QWord, Word};

/// Membership test for an abstract ℂ.
pub type Oracle = Arc<dyn Fn(&Point) -> bool + Send + Sync>;

/// The Borel class `Γ`, through the set ℂ it selects.
#[derive(Clone)]
pub enum GammaClass {
    /// ℂ = P_∞.
    Sigma02,
    /// ℂ = P_f.
    Pi02,
    /// Rank three or more: ℂ is only known through an oracle.
    OracleRank3(Option<Oracle>),
    /// The class `{∅}`: ℂ is the whole space.
    Full,
}

impl GammaClass {
    pub fn tag(&self) -> &'static str {
        match self {
            GammaClass::Sigma02 => "Sigma02",
            GammaClass::Pi02 => "Pi02",
            GammaClass::OracleRank3(_) => "OracleRank3",
            GammaClass::Full => "Full",
        }
    }

    pub fn with_oracle(f: impl Fn(&Point) -> bool + Send + Sync + 'static) -> Self {
        GammaClass::OracleRank3(Some(Arc::new(f)))
    }

    /// `x ∈ ℂ`.
    pub fn contains(&self, x: &Point) -> Result<bool> {
        match self {
            GammaClass::Sigma02 => Ok(!x.is_pf()),
            GammaClass::Pi02 => Ok(x.is_pf()),
            GammaClass::OracleRank3(Some(f)) => Ok(f(x)),
            GammaClass::OracleRank3(None) => {
                Err(Error::Config("OracleRank3 needs a membership oracle".into()))
            }
            GammaClass::Full => Ok(true),
        }
    }
}

impl fmt::Debug for GammaClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl fmt::Display for GammaClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for GammaClass {
    type Err = Error;

    /// `OracleRank3` parses without an oracle; evaluating with it fails.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Sigma02" => Ok(GammaClass::Sigma02),
            "Pi02" => Ok(GammaClass::Pi02),
            "OracleRank3" => Ok(GammaClass::OracleRank3(None)),
            "Full" => Ok(GammaClass::Full),
            _ => Err(Error::Parse(format!("unknown class {s:?}"))),
        }
    }
}

/// The parameter `β`, read as the set `{p | β(p) = 1}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BetaParam(pub Point);

impl BetaParam {
    pub fn enabled(&self, p: u64) -> bool {
        usize::try_from(p).is_ok_and(|p| self.0.bit(p))
    }
}

impl FromStr for BetaParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(BetaParam(s.parse()?))
    }
}

impl fmt::Display for BetaParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn eventually_zero(x: &Point) -> Result<QWord> {
    x.qword()
        .ok_or_else(|| Error::Domain(format!("{x} is not eventually zero")))
}

/// `c({x, y}) = i(z, t)` where `x = z0^∞`, `y = t0^∞`.
pub fn color_c(x: &Point, y: &Point) -> Result<u64> {
    let (z, t) = (eventually_zero(x)?, eventually_zero(y)?);
    if z == t {
        return Err(Error::Domain(format!("c is defined on distinct points, got {x} twice")));
    }
    invariant_i(&z, &t)
}

fn qpoint(w: &str) -> Point {
    let word: Word = w.parse().expect("generated words are binary");
    Point::from_qword(&q_normalize(&word))
}

/// Two distinct eventually-zero points in `N_s` with color `p`.
///
/// With `p = 2k + 1` this is `(s1(10)^{k+1}1, s1(01)^k)`; with `p = 2k` it
/// is `(s1(10)^k, s1(01)^k)`, both normalized. Color 0 on distinct pairs
/// is never attained in the checked range, so `p = 0` is rejected.
pub fn witness_pair(p: u64, s: &QWord) -> Result<(Point, Point)> {
    if p == 0 {
        return Err(Error::Domain("no witness pair is known for color 0".into()));
    }
    let k = (p / 2) as usize;
    let head = format!("{}1", s.to_bitstring());
    let z = if p % 2 == 1 {
        format!("{head}{}1", "10".repeat(k + 1))
    } else {
        format!("{head}{}", "10".repeat(k))
    };
    let t = format!("{head}{}", "01".repeat(k));
    Ok((qpoint(&z), qpoint(&t)))
}

/// `(x, y) ∈ ℝ_β`: the diagonal of ℂ plus the distinct eventually-zero
/// pairs whose color is enabled in `β`.
pub fn r_beta_contains(g: &GammaClass, b: &BetaParam, x: &Point, y: &Point) -> Result<bool> {
    if x == y {
        return g.contains(x);
    }
    if x.is_pf() && y.is_pf() {
        return Ok(b.enabled(color_c(x, y)?));
    }
    Ok(false)
}

/// The bipartite graph `𝔾_β` on `2 × 2^ω` (with ℂ = P_∞): the two sides
/// are joined when the side-0 point is `ℝ_β`-related to the side-1 point.
pub fn g_beta_bipartite_contains(b: &BetaParam, u: (bool, &Point), v: (bool, &Point)) -> bool {
    if u.0 == v.0 {
        return false;
    }
    let (zero, one) = if u.0 { (v.1, u.1) } else { (u.1, v.1) };
    r_beta_contains(&GammaClass::Sigma02, b, zero, one).expect("Sigma02 is decidable")
}

/// `ℝ_β` with ℂ = P_f, minus the diagonal.
pub fn g_beta_diagfree_contains(b: &BetaParam, x: &Point, y: &Point) -> bool {
    x != y && r_beta_contains(&GammaClass::Pi02, b, x, y).expect("Pi02 is decidable")
}

/// The three words of the `p`-th cycle family, before normalization.
pub fn cycle_witness_raw(p: u64) -> Result<[String; 3]> {
    let k = p.saturating_sub(3) as usize / 2;
    match p {
        0 => Err(Error::Domain("cycle families start at p = 1".into())),
        1 => Ok(["".into(), "1".into(), "11".into()]),
        2 => Ok(["1".into(), "01".into(), "001".into()]),
        _ if p % 2 == 1 => Ok([
            format!("10{}", "1".repeat(k + 1)),
            "1".repeat(k + 3),
            format!("010{}", "1".repeat(k)),
        ]),
        _ => {
            let k = (p - 4) as usize / 2;
            Ok([
                format!("010110{}", "110".repeat(k)),
                format!("101000{}", "100".repeat(k)),
                format!("010011{}", "101".repeat(k)),
            ])
        }
    }
}

/// Three distinct eventually-zero points with pairwise color `p`; an
/// `s(ℝ_β)`-cycle whenever `β(p) = 1`.
pub fn cycle_witness(p: u64) -> Result<[Point; 3]> {
    let raw = cycle_witness_raw(p)?;
    Ok([qpoint(&raw[0]), qpoint(&raw[1]), qpoint(&raw[2])])
}

/// Edge predicate of a custom digraph.
pub type EdgeFn = Arc<dyn Fn(&QWord, &QWord) -> bool + Send + Sync>;

/// A decidable digraph on Q-words.
#[derive(Clone)]
pub enum Digraph {
    Empty,
    /// Every pair, loops included.
    Full,
    /// Every pair of distinct words.
    Neq,
    /// `(z, t)` with `z ≠ t` and `β(i(z,t)) = 1`.
    Beta(BetaParam),
    Custom(EdgeFn),
}

impl Digraph {
    pub fn contains(&self, z: &QWord, t: &QWord) -> Result<bool> {
        Ok(match self {
            Digraph::Empty => false,
            Digraph::Full => true,
            Digraph::Neq => z != t,
            Digraph::Beta(b) => z != t && b.enabled(invariant_i(z, t)?),
            Digraph::Custom(f) => f(z, t),
        })
    }
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Digraph::Empty => f.write_str("empty"),
            Digraph::Full => f.write_str("full"),
            Digraph::Neq => f.write_str("neq"),
            Digraph::Beta(b) => write!(f, "beta:{b}"),
            Digraph::Custom(_) => f.write_str("custom"),
        }
    }
}

impl FromStr for Digraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "empty" => Ok(Digraph::Empty),
            "full" => Ok(Digraph::Full),
            "neq" => Ok(Digraph::Neq),
            _ => match s.strip_prefix("beta:") {
                Some(b) => Ok(Digraph::Beta(b.parse()?)),
                None => Err(Error::Parse(format!("unknown digraph {s:?}"))),
            },
        }
    }
}

/// `(x, y) ∈ ℛ_𝒟 = Δ(ℂ) ∪ {(s0^∞, t0^∞) | (s, t) ∈ 𝒟}`.
pub fn r_d_contains(g: &GammaClass, d: &Digraph, x: &Point, y: &Point) -> Result<bool> {
    if x == y && g.contains(x)? {
        return Ok(true);
    }
    match (x.qword(), y.qword()) {
        (Some(z), Some(t)) => d.contains(&z, &t),
        _ => Ok(false),
    }
}

/// A sample pair breaking one of the two clauses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DcViolation {
    pub clause: u8,
    pub x: String,
    pub y: String,
}

/// Checks, on all pairs of samples, that `ℛ_𝒟` meets the diagonal exactly
/// in `Δ(ℂ)` (clause 1) and lies inside `Δ(ℂ) ∪ P_f²` (clause 2).
pub fn diagonally_complex_check(
    g: &GammaClass,
    d: &Digraph,
    samples: &[Point],
) -> Result<Vec<DcViolation>> {
    let mut violations = Vec::new();
    for x in samples {
        for y in samples {
            let related = r_d_contains(g, d, x, y)?;
            let in_delta_c = x == y && g.contains(x)?;
            if x == y && related != in_delta_c {
                violations.push(DcViolation { clause: 1, x: x.to_string(), y: y.to_string() });
            }
            if related && !in_delta_c && !(x.is_pf() && y.is_pf()) {
                violations.push(DcViolation { clause: 2, x: x.to_string(), y: y.to_string() });
            }
        }
    }
    Ok(violations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::alpha;

    fn p(s: &str) -> Point {
        s.parse().unwrap()
    }

    fn beta(s: &str) -> BetaParam {
        s.parse().unwrap()
    }

    #[test]
    fn color_examples() {
        assert_eq!(color_c(&p("1(0)"), &p("01(0)")).unwrap(), 2);
        assert_eq!(color_c(&p("(0)"), &p("1(0)")).unwrap(), 1);
        assert_eq!(color_c(&p("11(0)"), &p("1(0)")).unwrap(), 1);
        assert!(color_c(&p("1(0)"), &p("1(0)")).is_err());
        assert!(color_c(&p("(01)"), &p("1(0)")).is_err());
    }

    #[test]
    fn witness_examples() {
        let e = QWord::empty();
        assert_eq!(witness_pair(1, &e).unwrap(), (p("1101(0)"), p("1(0)")));
        assert_eq!(witness_pair(2, &e).unwrap(), (p("11(0)"), p("101(0)")));
        let one: QWord = "1".parse().unwrap();
        assert_eq!(witness_pair(3, &one).unwrap(), (p("1110101(0)"), p("1101(0)")));
        assert_eq!(color_c(&p("1110101(0)"), &p("1101(0)")).unwrap(), 3);
        assert!(witness_pair(0, &e).is_err());
    }

    #[test]
    fn r_beta_examples() {
        assert!(r_beta_contains(&GammaClass::Sigma02, &beta("(1)"), &p("(01)"), &p("(01)")).unwrap());
        assert!(r_beta_contains(&GammaClass::Pi02, &beta("01(0)"), &p("(0)"), &p("1(0)")).unwrap());
        assert!(!r_beta_contains(&GammaClass::Pi02, &beta("01(0)"), &p("1(0)"), &p("01(0)")).unwrap());
        assert!(!r_beta_contains(&GammaClass::Pi02, &beta("(1)"), &p("(01)"), &p("(01)")).unwrap());
        let missing = GammaClass::OracleRank3(None);
        assert!(matches!(
            r_beta_contains(&missing, &beta("(1)"), &p("(01)"), &p("(01)")),
            Err(Error::Config(_))
        ));
        let oracle = GammaClass::with_oracle(|x: &Point| x.bit(0));
        assert!(r_beta_contains(&oracle, &beta("(0)"), &p("1(0)"), &p("1(0)")).unwrap());
    }

    #[test]
    fn bipartite_examples() {
        let b = beta("01(0)");
        assert!(g_beta_bipartite_contains(&b, (false, &p("(01)")), (true, &p("(01)"))));
        assert!(!g_beta_bipartite_contains(&b, (false, &p("(0)")), (false, &p("1(0)"))));
        assert!(g_beta_bipartite_contains(&b, (true, &p("1(0)")), (false, &p("(0)"))));
    }

    #[test]
    fn diagfree_examples() {
        let b = beta("01(0)");
        assert!(!g_beta_diagfree_contains(&b, &p("(0)"), &p("(0)")));
        assert!(g_beta_diagfree_contains(&b, &p("(0)"), &p("1(0)")));
        assert!(!g_beta_diagfree_contains(&beta("(0)"), &p("(0)"), &p("1(0)")));
    }

    #[test]
    fn cycle_examples() {
        assert_eq!(cycle_witness(1).unwrap(), [p("(0)"), p("1(0)"), p("11(0)")]);
        assert_eq!(cycle_witness(2).unwrap(), [p("1(0)"), p("01(0)"), p("001(0)")]);
        assert_eq!(cycle_witness(4).unwrap(), [p("01011(0)"), p("101(0)"), p("010011(0)")]);
        assert_eq!(cycle_witness_raw(4).unwrap()[1], "101000");
        assert!(cycle_witness(0).is_err());
    }

    #[test]
    fn diagonally_complex_examples() {
        let mut samples: Vec<Point> = (0..10).map(alpha).collect();
        samples.push(p("(01)"));
        samples.push(p("(10)"));
        for g in [GammaClass::Sigma02, GammaClass::Pi02] {
            assert!(diagonally_complex_check(&g, &Digraph::Empty, &samples).unwrap().is_empty());
            assert!(diagonally_complex_check(&g, &Digraph::Neq, &samples).unwrap().is_empty());
            let rb = Digraph::Beta(beta("01(0)"));
            assert!(diagonally_complex_check(&g, &rb, &samples).unwrap().is_empty());
        }
        assert!(diagonally_complex_check(&GammaClass::Pi02, &Digraph::Full, &samples)
            .unwrap()
            .is_empty());
        // With ℂ = P_∞ the loops of the full digraph put P_f points on the diagonal.
        let bad = diagonally_complex_check(&GammaClass::Sigma02, &Digraph::Full, &samples).unwrap();
        assert_eq!(bad.len(), 10);
        assert!(bad.iter().all(|v| v.clause == 1));
    }

    #[test]
    fn r_d_agrees_with_r_beta() {
        let b = beta("0110(1)");
        let pts: Vec<Point> = (0..30).map(alpha).chain([p("(01)"), p("1(10)")]).collect();
        let d = Digraph::Beta(b.clone());
        for g in [GammaClass::Sigma02, GammaClass::Pi02] {
            for x in &pts {
                for y in &pts {
                    assert_eq!(
                        r_d_contains(&g, &d, x, y).unwrap(),
                        r_beta_contains(&g, &b, x, y).unwrap()
                    );
                }
            }
        }
    }
}
