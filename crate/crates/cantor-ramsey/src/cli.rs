//! Command-line front end.
//!
//! Every command prints one JSON object
//! `{"command", "inputs", "result", "details"}` unless a raw export was
//! requested (`--csv`, or `--json` on the enumeration and embedding
//! commands). Exit codes: 0 on success or a passing suite, 1 on a failing
//! suite, 2 on usage or domain errors.

use std::collections::BTreeSet;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;
use serde_json::{json, Value};

use crate::antichains::{self, catalog_ac, enumerate, graph_catalog, graph_subbases, Family};
use crate::coloring::{color_c, cycle_witness, cycle_witness_raw, witness_pair, BetaParam, GammaClass};
use crate::embed::{
    build_embedding, build_embedding_with, check_color_preservation, preset, verify_conditions, Choice,
    HSpec,
};
use crate::error::{Error, Result};
use crate::oscillation::{invariant_i, osc, suff_check, ITable, SuffVerdict};
use crate::relations::{
    acyclicity_check, eval, standard_vertices, structural_profile, truncation, RelationSpec, SpacePoint,
};
use crate::words::{alpha, q_normalize, qwords_up_to, Point, QWord, Word};

#[derive(Parser, Debug)]
#[command(name = "cantor-ramsey", about = "Oscillation invariant, Ramsey coloring and Borel relation tools")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Pair invariants of Q-words.
    Invariant {
        #[command(subcommand)]
        which: InvariantCmd,
    },
    /// Oscillation of two words read as characteristic functions.
    Osc { z: String, t: String },
    /// The coloring of pairs of eventually-zero points.
    Color {
        #[command(subcommand)]
        which: ColorCmd,
    },
    /// Relation evaluation.
    Relation {
        #[command(subcommand)]
        which: RelationCmd,
    },
    /// Code family enumeration.
    Antichain {
        #[command(subcommand)]
        which: AntichainCmd,
    },
    /// Embedding schemes.
    Embed {
        #[command(subcommand)]
        which: EmbedCmd,
    },
    /// Runs a verification suite.
    Verify(VerifyArgs),
}

#[derive(Subcommand, Debug)]
enum InvariantCmd {
    /// `i(z, t)`.
    I { z: String, t: String },
}

#[derive(Subcommand, Debug)]
enum ColorCmd {
    /// `c({x, y})` for two distinct eventually-zero points.
    Pair { x: String, y: String },
    /// `c({α_m, α_n})` for `1 ≤ m < n ≤ N`.
    Table {
        #[arg(long)]
        max_index: u64,
        #[arg(long)]
        csv: bool,
    },
}

#[derive(Subcommand, Debug)]
enum RelationCmd {
    /// Whether `(u, v)` belongs to the relation.
    Eval { spec: String, u: String, v: String },
}

#[derive(Subcommand, Debug)]
enum AntichainCmd {
    /// Lists the members of a family.
    Enum {
        #[arg(long)]
        family: String,
        #[arg(long, conflicts_with_all = ["csv", "json"])]
        count: bool,
        #[arg(long, conflicts_with = "json")]
        csv: bool,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand, Debug)]
enum EmbedCmd {
    /// Builds the least-choice scheme.
    Build {
        #[arg(long = "h")]
        h: String,
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value_t = 100_000)]
        bound: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Suite {
    Cardinalities,
    IVectors,
    Cycles,
    Surjectivity,
    Suff,
    Embed,
    Acyclic,
    AcProfile,
}

#[derive(Args, Debug, Serialize)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    /// Largest color or cycle family checked.
    #[arg(long)]
    max_p: Option<u64>,
    /// Longest word in exhaustive ranges.
    #[arg(long)]
    max_len: Option<usize>,
    #[arg(long)]
    depth: Option<usize>,
    /// Randomized embedding runs (suff suite).
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// H presets; repeatable.
    #[arg(long = "h")]
    h: Vec<String>,
    #[arg(long)]
    relation: Option<String>,
    /// Truncation size for graph checks.
    #[arg(long)]
    vertices: Option<usize>,
    #[arg(long, default_value_t = 100_000)]
    bound: u64,
}

#[derive(Serialize)]
struct CommandResult {
    command: String,
    inputs: Value,
    result: Value,
    details: Vec<Value>,
}

enum Output {
    Json { result: CommandResult, passed: bool },
    Raw(String),
}

/// Runs one invocation; `argv[0]` is the program name. Returns the exit
/// code and the text to print.
pub fn run<I, S>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.render().to_string());
        }
    };
    match dispatch(cli.command) {
        Ok(Output::Json { result, passed }) => {
            let text = serde_json::to_string_pretty(&result).expect("plain JSON values serialize");
            (if passed { 0 } else { 1 }, text + "\n")
        }
        Ok(Output::Raw(text)) => (0, text),
        Err(e) => (2, format!("error: {e}\n")),
    }
}

fn done(command: &str, inputs: Value, result: Value) -> Output {
    Output::Json {
        result: CommandResult { command: command.into(), inputs, result, details: Vec::new() },
        passed: true,
    }
}

fn qword(s: &str) -> Result<QWord> {
    s.parse()
}

fn dispatch(cmd: Command) -> Result<Output> {
    match cmd {
        Command::Invariant { which: InvariantCmd::I { z, t } } => {
            let v = invariant_i(&qword(&z)?, &qword(&t)?)?;
            Ok(done("invariant i", json!({"z": z, "t": t}), json!(v)))
        }
        Command::Osc { z, t } => {
            let v = osc(&z.parse::<Word>()?, &t.parse::<Word>()?);
            Ok(done("osc", json!({"z": z, "t": t}), json!(v)))
        }
        Command::Color { which: ColorCmd::Pair { x, y } } => {
            let v = color_c(&x.parse::<Point>()?, &y.parse::<Point>()?)?;
            Ok(done("color pair", json!({"x": x, "y": y}), json!(v)))
        }
        Command::Color { which: ColorCmd::Table { max_index, csv } } => color_table(max_index, csv),
        Command::Relation { which: RelationCmd::Eval { spec, u, v } } => {
            let r: RelationSpec = spec.parse()?;
            let (pu, pv) = (SpacePoint::parse(r.space(), &u)?, SpacePoint::parse(r.space(), &v)?);
            let value = eval(&r, &pu, &pv)?;
            Ok(done(
                "relation eval",
                json!({"spec": r.to_string(), "space": r.space().to_string(), "u": u, "v": v}),
                json!(value),
            ))
        }
        Command::Antichain { which: AntichainCmd::Enum { family, count, csv, json } } => {
            let fam: Family = family.parse()?;
            let members = enumerate(fam);
            if csv {
                return Ok(Output::Raw(antichains::to_csv(&members)?));
            }
            let export = antichains::to_json(fam, &members);
            if json {
                return Ok(Output::Raw(format!("{}\n", pretty(&export))));
            }
            let result = if count { json!(members.len()) } else { export };
            Ok(done("antichain enum", json!({"family": fam.to_string(), "count": count}), result))
        }
        Command::Embed { which: EmbedCmd::Build { h, depth, bound, json } } => {
            let hs = preset(&h)?;
            let e = build_embedding(hs.as_ref(), depth, bound)?;
            if json {
                return Ok(Output::Raw(format!("{}\n", pretty(&e.to_json()))));
            }
            let longest = e.nodes().iter().map(|n| n.s.len()).max().unwrap_or(0);
            let root = e.nodes()[0].s.to_string();
            Ok(done(
                "embed build",
                json!({"h": hs.name(), "depth": depth, "bound": bound}),
                json!({"nodes": e.nodes().len(), "s_root": root, "longest_s": longest}),
            ))
        }
        Command::Verify(args) => verify(args),
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("plain JSON values serialize")
}

fn color_table(max_index: u64, csv: bool) -> Result<Output> {
    if max_index > 4096 {
        return Err(Error::Domain(format!("--max-index {max_index} is above the limit 4096")));
    }
    let mut rows = Vec::new();
    for m in 1..=max_index {
        for n in m + 1..=max_index {
            rows.push((m, n, color_c(&alpha(m), &alpha(n))?));
        }
    }
    if csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Defect(format!("csv: {e}"));
        w.write_record(["m", "n", "color"]).map_err(io)?;
        for (m, n, c) in &rows {
            w.write_record([m.to_string(), n.to_string(), c.to_string()]).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Defect(e.to_string()))?;
        return String::from_utf8(bytes).map(Output::Raw).map_err(|e| Error::Defect(e.to_string()));
    }
    let table: Vec<Value> = rows.iter().map(|(m, n, c)| json!({"m": m, "n": n, "color": c})).collect();
    Ok(done("color table", json!({"max_index": max_index}), json!(table)))
}

/// Collects per-item outcomes of a suite.
struct Report {
    passed: bool,
    details: Vec<Value>,
}

impl Report {
    fn new() -> Self {
        Report { passed: true, details: Vec::new() }
    }

    /// Records a failing item. Only the first few are kept, the first being
    /// the smallest in the suite's enumeration order.
    fn fail(&mut self, item: Value) {
        self.passed = false;
        if self.details.len() < 20 {
            self.details.push(item);
        }
    }

    fn check(&mut self, ok: bool, item: impl FnOnce() -> Value) {
        if !ok {
            self.fail(item());
        }
    }
}

fn verify(args: VerifyArgs) -> Result<Output> {
    let inputs = serde_json::to_value(&args).expect("flags serialize");
    let mut report = Report::new();
    let summary = match args.suite {
        Suite::Cardinalities => suite_cardinalities(&mut report),
        Suite::IVectors => suite_i_vectors(&mut report, args.max_len.unwrap_or(12)),
        Suite::Cycles => suite_cycles(&mut report, args.max_p.unwrap_or(24)),
        Suite::Surjectivity => {
            suite_surjectivity(&mut report, args.max_p.unwrap_or(16), args.max_len.unwrap_or(6))
        }
        Suite::Suff => suite_suff(&mut report, &args),
        Suite::Embed => suite_embed(&mut report, &args),
        Suite::Acyclic => suite_acyclic(&mut report, &args),
        Suite::AcProfile => suite_ac_profile(&mut report, args.vertices.unwrap_or(100)),
    }?;
    let verdict = if report.passed { "pass" } else { "fail" };
    let mut result = json!({"verdict": verdict});
    if let (Value::Object(r), Value::Object(s)) = (&mut result, summary) {
        r.extend(s);
    }
    let command = format!("verify {}", serde_json::to_value(args.suite).expect("suite serializes").as_str().unwrap_or(""));
    Ok(Output::Json {
        result: CommandResult { command, inputs, result, details: report.details },
        passed: report.passed,
    })
}

fn default_presets(args: &VerifyArgs) -> Vec<String> {
    if args.h.is_empty() {
        vec!["pf".into(), "cyl:01".into(), "double".into()]
    } else {
        args.h.clone()
    }
}

/// The claimed family sizes, in a fixed order.
pub fn cardinality_table() -> Vec<(&'static str, usize, usize)> {
    let size = |f| enumerate(f).len();
    let (p, a, agamma) = (size(Family::P), size(Family::A), size(Family::Agamma));
    let (n, v, h, s) = (size(Family::N), size(Family::V), size(Family::H), size(Family::S));
    let sub = graph_subbases();
    vec![
        ("P", p, 33),
        ("A^Gamma", agamma, 34),
        ("A", a, 42),
        ("A^Gamma + A", agamma + a, 76),
        ("C^Pi02", size(Family::Cpi02), 52),
        ("A^c", size(Family::Ac), 13),
        ("N", n, 45),
        ("V", v, 152),
        ("H", h, 114),
        ("C", size(Family::C), 20),
        ("S", s, 7049),
        ("N + V + H + S", n + v + h + s, 7360),
        ("graph sub-basis Pi01 <=c", sub.pi01_le.len(), 5),
        ("graph sub-basis Pi01 sqsubseteq_c", sub.pi01_sqsubseteq.len(), 6),
        ("graph sub-basis Sigma01", sub.sigma01.len(), 10),
    ]
}

fn suite_cardinalities(report: &mut Report) -> Result<Value> {
    let table = cardinality_table();
    for &(name, got, want) in &table {
        report.check(got == want, || json!({"item": name, "computed": got, "expected": want}));
    }
    let counts: Vec<usize> = table.iter().map(|r| r.1).collect();
    Ok(json!({"counts": counts}))
}

/// The fixed `i` values: `(z, t, expected)`.
pub fn i_vectors() -> Vec<(String, String, u64)> {
    let mut out: Vec<(String, String, u64)> = vec![
        ("e".into(), "1".into(), 1),
        ("1".into(), "01".into(), 2),
        ("1101".into(), "101".into(), 2),
    ];
    for p in 3..=24 {
        let raw = cycle_witness_raw(p).expect("p >= 1");
        let norm: Vec<String> = raw
            .iter()
            .map(|w| q_normalize(&w.parse::<Word>().expect("binary")).to_string())
            .collect();
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            out.push((norm[a].clone(), norm[b].clone(), p));
        }
    }
    out
}

fn suite_i_vectors(report: &mut Report, max_len: usize) -> Result<Value> {
    let vectors = i_vectors();
    for (z, t, want) in &vectors {
        let got = invariant_i(&qword(z)?, &qword(t)?)?;
        report.check(got == *want, || json!({"z": z, "t": t, "computed": got, "expected": want}));
    }
    let table = match ITable::build(max_len) {
        Ok(table) => Some(table),
        Err(e @ Error::Defect(_)) => {
            report.fail(json!({"totality": e.to_string()}));
            None
        }
        Err(e) => return Err(e),
    };
    if let Some((z, t)) = table.as_ref().and_then(ITable::asymmetric_pair) {
        report.fail(json!({"symmetry": {"z": z.to_string(), "t": t.to_string()}}));
    }
    Ok(json!({"vectors": vectors.len(), "exhaustive_max_len": max_len}))
}

fn suite_cycles(report: &mut Report, max_p: u64) -> Result<Value> {
    let beta: BetaParam = "(1)".parse()?;
    let rbeta = RelationSpec::Rbeta { gamma: GammaClass::Sigma02, beta };
    for p in 1..=max_p {
        let pts = cycle_witness(p)?;
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            let c = color_c(&pts[a], &pts[b])?;
            report.check(c == p, || {
                json!({"p": p, "x": pts[a].to_string(), "y": pts[b].to_string(), "color": c})
            });
        }
        let vs: Vec<SpacePoint> = pts.iter().cloned().map(SpacePoint::Cantor).collect();
        let cycle = acyclicity_check(&rbeta, &vs)?;
        report.check(cycle.is_some(), || json!({"p": p, "cycle": "none found"}));
    }
    Ok(json!({"max_p": max_p}))
}

fn suite_surjectivity(report: &mut Report, max_p: u64, max_len: usize) -> Result<Value> {
    let mut attained = BTreeSet::new();
    let words = qwords_up_to(max_len);
    for p in 1..=max_p {
        for s in &words {
            let (x, y) = witness_pair(p, s)?;
            let c = color_c(&x, &y)?;
            attained.insert(c);
            report.check(c == p, || {
                json!({"p": p, "s": s.to_string(), "x": x.to_string(), "y": y.to_string(), "color": c})
            });
        }
    }
    Ok(json!({"attained": attained, "prefixes": words.len()}))
}

/// A seeded random deviation from the least choice.
pub fn random_choice(rng: &mut StdRng) -> Choice {
    Choice { extra_len: rng.gen_range(0..4), skip: rng.gen_range(0..4) }
}

fn suite_suff(report: &mut Report, args: &VerifyArgs) -> Result<Value> {
    let depth = args.depth.unwrap_or(6);
    let presets = default_presets(args);
    let hs: Vec<Box<dyn HSpec>> = presets.iter().map(|p| preset(p)).collect::<Result<_>>()?;
    let mut pairs = 0;
    let mut record = |report: &mut Report, name: &str, verdict: SuffVerdict| {
        match verdict {
            SuffVerdict::Pass { pairs: n } => pairs += n,
            other => report.fail(json!({"h": name, "verdict": other})),
        }
    };
    for h in &hs {
        let e = build_embedding(h.as_ref(), depth, args.bound)?;
        record(report, &h.name(), suff_check(&e.s_table()?)?);
    }
    let trials = args.trials.unwrap_or(0);
    let mut rng = StdRng::seed_from_u64(args.seed.unwrap_or(0));
    for _ in 0..trials {
        let h = &hs[rng.gen_range(0..hs.len())];
        let d = rng.gen_range(1..=depth);
        let mut sub = StdRng::seed_from_u64(rng.gen());
        let e = build_embedding_with(h.as_ref(), d, args.bound, |_| random_choice(&mut sub))?;
        record(report, &h.name(), suff_check(&e.s_table()?)?);
    }
    Ok(json!({"depth": depth, "trials": trials, "pairs": pairs}))
}

fn suite_embed(report: &mut Report, args: &VerifyArgs) -> Result<Value> {
    let depth = args.depth.unwrap_or(6);
    let mut colors_by_h = serde_json::Map::new();
    for name in default_presets(args) {
        let h = preset(&name)?;
        let e = build_embedding(h.as_ref(), depth, args.bound)?;
        let conditions = verify_conditions(&e, h.as_ref())?;
        for c in conditions.conditions.iter().filter(|c| !c.passed) {
            report.fail(json!({"h": name, "condition": c}));
        }
        match check_color_preservation(&e)? {
            crate::embed::ColorVerdict::Pass { colors, .. } => {
                if depth >= 6 {
                    let missing: Vec<u64> = (1..=8).filter(|c| !colors.contains(c)).collect();
                    report.check(missing.is_empty(), || json!({"h": name, "missing_colors": missing}));
                }
                colors_by_h.insert(name.clone(), json!(colors));
            }
            other => report.fail(json!({"h": name, "colors": other})),
        }
        let again = build_embedding(h.as_ref(), depth, args.bound)?;
        report.check(again.to_json() == e.to_json(), || json!({"h": name, "determinism": "rebuild differs"}));
    }
    Ok(json!({"depth": depth, "colors": colors_by_h}))
}

fn suite_acyclic(report: &mut Report, args: &VerifyArgs) -> Result<Value> {
    let size = args.vertices.unwrap_or(100);
    // (relation, expected to be acyclic)
    let items: Vec<(RelationSpec, bool)> = match &args.relation {
        Some(r) => vec![(r.parse()?, true)],
        None => {
            let mut v = vec![("Gm:gamma=Sigma02".parse()?, true)];
            let sub = graph_subbases();
            let mut seen = BTreeSet::new();
            for e in sub.pi01_sqsubseteq.iter().chain(&sub.sigma01).filter(|e| e.marked_acyclic) {
                if seen.insert(e.spec.to_string()) {
                    v.push((e.spec.clone(), true));
                }
            }
            v.push(("Cne:gamma=Sigma02".parse()?, false));
            v
        }
    };
    let mut checked = Vec::new();
    for (r, want_acyclic) in &items {
        let vs = truncation(r.space(), size);
        let cycle = acyclicity_check(r, &vs)?;
        report.check(cycle.is_none() == *want_acyclic, || {
            json!({
                "relation": r.to_string(),
                "expected_acyclic": want_acyclic,
                "cycle": cycle.as_ref().map(|c| c.iter().map(|p| p.to_string()).collect::<Vec<_>>()),
            })
        });
        checked.push(json!({"relation": r.to_string(), "vertices": vs.len(), "acyclic": cycle.is_none()}));
    }
    Ok(json!({"checked": checked}))
}

fn suite_ac_profile(report: &mut Report, size: usize) -> Result<Value> {
    for entry in catalog_ac() {
        let got = structural_profile(&RelationSpec::Ac(entry.index), &standard_vertices(entry.space))?;
        report.check(got == entry.flags, || {
            json!({"entry": entry.index, "label": entry.label, "expected": entry.flags, "computed": got})
        });
    }
    for gamma in ["Sigma02", "Pi02", "Full"] {
        let g: GammaClass = gamma.parse()?;
        let (gm, om) = (RelationSpec::Gm(g.clone()), RelationSpec::Om(g));
        let vs = standard_vertices(gm.space());
        for u in &vs {
            for v in &vs {
                let lhs = eval(&gm, u, v)?;
                let rhs = eval(&om, u, v)? || eval(&om, v, u)?;
                report.check(lhs == rhs, || {
                    json!({"symmetrization": gamma, "u": u.to_string(), "v": v.to_string()})
                });
            }
        }
    }
    for (label, r) in graph_catalog() {
        let p = structural_profile(&r, &truncation(r.space(), size))?;
        report.check(p.symmetric && p.irreflexive, || json!({"graph": label, "profile": p}));
    }
    Ok(json!({"catalog": 13, "graphs": graph_catalog().len()}))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(args: &str) -> (i32, String) {
        run(std::iter::once("cantor-ramsey").chain(args.split_whitespace()))
    }

    fn result(out: &str) -> Value {
        serde_json::from_str::<Value>(out).unwrap()["result"].clone()
    }

    #[test]
    fn invariant_and_osc() {
        let (code, out) = go("invariant i 1 01");
        assert_eq!(code, 0);
        assert_eq!(result(&out), json!(2));
        let (code, out) = go("osc 1 01");
        assert_eq!(code, 0);
        assert_eq!(result(&out), json!(2));
    }

    #[test]
    fn usage_and_domain_errors_exit_2() {
        assert_eq!(go("invariant i 10 1").0, 2);
        assert_eq!(go("frobnicate").0, 2);
        assert_eq!(go("color pair (01) 1(0)").0, 2);
        assert_eq!(go("relation eval Gm:gamma=Sigma02 1(0) 1(0)").0, 2);
    }

    #[test]
    fn antichain_count_and_csv() {
        let (code, out) = go("antichain enum --family P --count");
        assert_eq!(code, 0);
        assert_eq!(result(&out), json!(33));
        let (_, csv) = go("antichain enum --family A --csv");
        assert!(csv.starts_with("family,code\n"));
        assert_eq!(csv.lines().count(), 43);
    }

    #[test]
    fn relation_eval_uses_the_spec_space() {
        let (code, out) = go("relation eval Rank1_N:t=000110 2^-1 0");
        assert_eq!(code, 0);
        assert_eq!(result(&out), json!(true));
    }

    #[test]
    fn color_table_csv() {
        let (code, out) = go("color table --max-index 3 --csv");
        assert_eq!(code, 0);
        assert_eq!(out, "m,n,color\n1,2,2\n1,3,1\n2,3,3\n");
    }

    #[test]
    fn cycles_suite_passes() {
        let (code, out) = go("verify cycles --max-p 24");
        assert_eq!(code, 0, "{out}");
    }

    #[test]
    fn surjectivity_suite_reports_range() {
        let (code, out) = go("verify surjectivity --max-p 16");
        assert_eq!(code, 0, "{out}");
        assert_eq!(result(&out)["attained"], json!((1..=16).collect::<Vec<u64>>()));
    }

    #[test]
    fn output_is_deterministic() {
        assert_eq!(go("embed build --h cyl:01 --depth 4 --json"), go("embed build --h cyl:01 --depth 4 --json"));
    }
}
