//! Acceptance run: one line per criterion, `criterion N: PASS` or
//! `criterion N: FAIL`, followed by the measured time and, on failure, the
//! first offending items. Every comparison is exact; each criterion also
//! has a wall-clock budget that counts towards its verdict.
//!
//! Runs without the libtest harness so the lines are always printed.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use cantor_ramsey::antichains::{
    catalog_ac, enum_a, enum_c, enum_cpi02_second, enum_h, enum_n, enum_p, enum_s, enum_v, enumerate,
    graph_catalog, graph_subbases, Family,
};
use cantor_ramsey::coloring::{color_c, cycle_witness, cycle_witness_raw, witness_pair, BetaParam, GammaClass};
use cantor_ramsey::embed::{
    build_embedding, build_embedding_with, check_color_preservation, preset, verify_conditions, Choice,
    ColorVerdict, HSpec,
};
use cantor_ramsey::oscillation::{
    invariant_i, invariant_i_reference, invariant_i_uncached, suff_check, ITable,
};
use cantor_ramsey::relations::{
    acyclicity_check, eval, standard_vertices, structural_profile, truncation, RelationSpec, SpacePoint,
};
use cantor_ramsey::words::{q_normalize, qwords_up_to, Point, QWord, Word};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Failures of one criterion; only the first few are printed.
#[derive(Default)]
struct Findings(Vec<String>);

impl Findings {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.0.push(what());
        }
    }
}

fn q(s: &str) -> QWord {
    s.parse().unwrap()
}

fn qn(s: &str) -> QWord {
    q_normalize(&s.parse::<Word>().unwrap())
}

fn criterion_1(f: &mut Findings) {
    let exact = |f: &mut Findings, name: &str, got: usize, want: usize| {
        f.check(got == want, || format!("|{name}| = {got}, expected {want}"));
    };
    let (p, a) = (enum_p().len(), enum_a().len());
    let agamma = enumerate(Family::Agamma).len();
    let (n, v, h, s) = (enum_n().len(), enum_v().len(), enum_h().len(), enum_s().len());
    exact(f, "P", p, 33);
    exact(f, "A^Gamma", agamma, 34);
    exact(f, "A", a, 42);
    exact(f, "A^Gamma + A", agamma + a, 76);
    exact(f, "C^Pi02", agamma + enum_cpi02_second().len(), 52);
    exact(f, "N", n, 45);
    exact(f, "V", v, 152);
    exact(f, "H", h, 114);
    exact(f, "C", enum_c().len(), 20);
    exact(f, "S", s, 7049);
    exact(f, "N + V + H + S", n + v + h + s, 7360);
    exact(f, "A^c", catalog_ac().len(), 13);
    let sub = graph_subbases();
    exact(f, "Pi01 graph sub-basis (<=c)", sub.pi01_le.len(), 5);
    exact(f, "Pi01 graph sub-basis (sqsubseteq_c)", sub.pi01_sqsubseteq.len(), 6);
    exact(f, "Sigma01 graph sub-basis", sub.sigma01.len(), 10);
}

fn criterion_2(f: &mut Findings) {
    let mut vectors: Vec<(QWord, QWord, u64)> =
        vec![(q("e"), q("1"), 1), (q("1"), q("01"), 2), (q("1101"), q("101"), 2)];
    for k in 0..=10u64 {
        for p in [2 * k + 3, 2 * k + 4] {
            let raw = cycle_witness_raw(p).unwrap();
            for (a, b) in [(0, 1), (0, 2), (1, 2)] {
                vectors.push((qn(&raw[a]), qn(&raw[b]), p));
            }
        }
    }
    for (z, t, want) in &vectors {
        let got = invariant_i(z, t).unwrap();
        f.check(got == *want, || format!("i({z}, {t}) = {got}, expected {want}"));
    }
    match ITable::build(12) {
        Ok(table) => {
            if let Some((z, t)) = table.asymmetric_pair() {
                f.0.push(format!("i({z}, {t}) != i({t}, {z})"));
            }
        }
        Err(e) => f.0.push(format!("one-case totality on |z|, |t| <= 12: {e}")),
    }
}

fn criterion_3(f: &mut Findings) {
    for p in 1..=50 {
        for s in qwords_up_to(6) {
            let (x, y) = witness_pair(p, &s).unwrap();
            let c = color_c(&x, &y).unwrap();
            f.check(c == p && x.in_cylinder(&s) && y.in_cylinder(&s), || {
                format!("witness_pair({p}, {s}) = ({x}, {y}) has color {c}")
            });
        }
    }
}

fn criterion_4(f: &mut Findings) {
    for p in 1..=24u64 {
        let pts = cycle_witness(p).unwrap();
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            let c = color_c(&pts[a], &pts[b]).unwrap();
            f.check(c == p, || format!("cycle_witness({p}): c({}, {}) = {c}", pts[a], pts[b]));
        }
        // β with β(p) = 1 and nothing else.
        let mut bits = vec![false; p as usize];
        bits.push(true);
        let beta = BetaParam(Point::from_qword(&QWord::new(Word::from_bits(bits).unwrap()).unwrap()));
        let r = RelationSpec::Rbeta { gamma: GammaClass::Sigma02, beta };
        let vs: Vec<SpacePoint> = pts.iter().cloned().map(SpacePoint::Cantor).collect();
        let cycle = acyclicity_check(&r, &vs).unwrap();
        f.check(cycle.as_ref().is_some_and(|c| c.len() == 3), || {
            format!("cycle_witness({p}) is not an s(R_beta)-cycle")
        });
    }
    let gm: RelationSpec = "Gm:gamma=Sigma02".parse().unwrap();
    let vs = truncation(gm.space(), 100);
    f.check(vs.len() >= 100, || format!("truncation has only {} vertices", vs.len()));
    let cycle = acyclicity_check(&gm, &vs).unwrap();
    f.check(cycle.is_none(), || format!("G_m (Sigma02) has a cycle: {cycle:?}"));

    let cne: RelationSpec = "Cne:gamma=Sigma02".parse().unwrap();
    let cycle = acyclicity_check(&cne, &truncation(cne.space(), 100)).unwrap();
    f.check(cycle.as_ref().is_some_and(|c| c.len() == 3), || {
        format!("C^2 minus the diagonal: expected a triangle, got {cycle:?}")
    });
}

fn scheme_json(h: &dyn HSpec) -> String {
    build_embedding(h, 6, 100_000).unwrap().to_json().to_string()
}

fn criterion_5(f: &mut Findings) {
    for name in ["pf", "cyl:01", "double"] {
        let h = preset(name).unwrap();
        let e = match build_embedding(h.as_ref(), 6, 100_000) {
            Ok(e) => e,
            Err(err) => {
                f.0.push(format!("{name}: build failed: {err}"));
                continue;
            }
        };
        let report = verify_conditions(&e, h.as_ref()).unwrap();
        for c in report.conditions.iter().filter(|c| !c.passed) {
            f.0.push(format!("{name}: condition ({}) fails: {:?}", c.id, c.failure));
        }
        f.check(report.conditions.len() == 9, || format!("{name}: {} conditions", report.conditions.len()));
        match check_color_preservation(&e) {
            Ok(ColorVerdict::Pass { pairs, .. }) => {
                f.check(pairs >= 300, || format!("{name}: only {pairs} pairs checked"))
            }
            other => f.0.push(format!("{name}: colors not preserved: {other:?}")),
        }
        match suff_check(&e.s_table().unwrap()) {
            Ok(v) if v.passed() => {}
            other => f.0.push(format!("{name}: suff_check: {other:?}")),
        }
        let (again, first) = (scheme_json(h.as_ref()), e.to_json().to_string());
        f.check(again == first, || {
            format!("{name}: rebuild is not byte-identical")
        });
    }
}

fn criterion_6(f: &mut Findings) {
    for entry in catalog_ac() {
        let got = structural_profile(&RelationSpec::Ac(entry.index), &standard_vertices(entry.space)).unwrap();
        f.check(got == entry.flags, || {
            format!("E{} {}: profile {got:?}, table says {:?}", entry.index, entry.label, entry.flags)
        });
    }
    for gamma in ["Sigma02", "Pi02"] {
        let g: GammaClass = gamma.parse().unwrap();
        let (gm, om) = (RelationSpec::Gm(g.clone()), RelationSpec::Om(g));
        let vs = standard_vertices(gm.space());
        for u in &vs {
            for v in &vs {
                let lhs = eval(&gm, u, v).unwrap();
                let rhs = eval(&om, u, v).unwrap() || eval(&om, v, u).unwrap();
                f.check(lhs == rhs, || format!("G_m != s(O_m) ({gamma}) at ({u}, {v})"));
            }
        }
    }
    let mut graphs: Vec<(String, RelationSpec)> =
        graph_catalog().into_iter().map(|(l, r)| (l.to_string(), r)).collect();
    for entry in catalog_ac().into_iter().filter(|e| e.flags.symmetric && e.flags.irreflexive) {
        graphs.push((format!("E{} {}", entry.index, entry.label), RelationSpec::Ac(entry.index)));
    }
    for (label, r) in &graphs {
        let p = structural_profile(r, &truncation(r.space(), 100)).unwrap();
        f.check(p.symmetric && p.irreflexive, || format!("{label} is not a graph: {p:?}"));
    }
}

fn random_qword(rng: &mut StdRng, max_len: usize) -> QWord {
    let len = rng.gen_range(0..=max_len);
    let mut bits: Vec<bool> = (0..len).map(|_| rng.gen()).collect();
    if let Some(last) = bits.last_mut() {
        *last = true;
    }
    QWord::new(Word::from_bits(bits).unwrap()).unwrap()
}

fn criterion_7(f: &mut Findings) {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let table = ITable::build(10).unwrap();
    for _ in 0..10_000 {
        let max_len = if rng.gen_bool(0.5) { 10 } else { 80 };
        let (z, t) = (random_qword(&mut rng, max_len), random_qword(&mut rng, max_len));
        let v = invariant_i(&z, &t).unwrap();
        f.check(v == invariant_i(&t, &z).unwrap(), || format!("i({z}, {t}) is not symmetric"));
        f.check(v == invariant_i_uncached(&z, &t).unwrap(), || format!("memo differs at ({z}, {t})"));
        f.check(v == invariant_i_reference(&z, &t).unwrap(), || format!("packed path differs at ({z}, {t})"));
        // Second lookup hits the cache.
        f.check(v == invariant_i(&z, &t).unwrap(), || format!("cache unstable at ({z}, {t})"));
        if let Some(tv) = table.get(&z, &t) {
            f.check(tv == v, || format!("table gives {tv} at ({z}, {t}), recursion {v}"));
        }
    }

    let mut passed = 0;
    let mut distinct = BTreeSet::new();
    for trial in 0..1000 {
        let h: Box<dyn HSpec> = match rng.gen_range(0..3) {
            0 => preset("pf").unwrap(),
            1 => {
                let len = rng.gen_range(0..=4);
                let u: String = (0..len).map(|_| if rng.gen() { '1' } else { '0' }).collect();
                preset(&format!("cyl:{}", if u.is_empty() { "e" } else { &u })).unwrap()
            }
            _ => preset("double").unwrap(),
        };
        let depth = rng.gen_range(1..=5);
        let mut sub = StdRng::seed_from_u64(rng.gen());
        let choose = |_: &Word| Choice { extra_len: sub.gen_range(0..4), skip: sub.gen_range(0..4) };
        let e = match build_embedding_with(h.as_ref(), depth, 100_000, choose) {
            Ok(e) => e,
            Err(err) => {
                f.0.push(format!("trial {trial} ({}): build failed: {err}", h.name()));
                continue;
            }
        };
        let a = e.s_table().unwrap();
        distinct.insert(e.to_json().to_string());
        match suff_check(&a) {
            Ok(v) if v.passed() => passed += 1,
            other => f.0.push(format!("trial {trial} ({}, depth {depth}): {other:?}", h.name())),
        }
    }
    f.check(passed == 1000, || format!("{passed}/1000 random tables pass suff_check"));
    // The random choices must actually move the tables away from one another.
    f.check(distinct.len() > 500, || format!("only {} distinct random tables", distinct.len()));
}

type Criterion = (u32, fn(&mut Findings), Duration, &'static str);

fn main() {
    let criteria: [Criterion; 7] = [
        (1, criterion_1, Duration::from_secs(5), "family cardinalities"),
        (2, criterion_2, Duration::from_secs(1), "invariant i vectors, symmetry, totality"),
        (3, criterion_3, Duration::from_secs(1), "surjectivity of witness pairs"),
        (4, criterion_4, Duration::from_secs(5), "cycles and acyclicity"),
        (5, criterion_5, Duration::from_secs(30), "embedding end to end"),
        (6, criterion_6, Duration::from_secs(5), "structural profiles"),
        (7, criterion_7, Duration::from_secs(30), "randomized properties"),
    ];
    let mut failed = Vec::new();
    for (n, run, budget, what) in criteria {
        let mut findings = Findings::default();
        let start = Instant::now();
        run(&mut findings);
        let elapsed = start.elapsed();
        if elapsed > budget {
            findings.0.push(format!("took {elapsed:.2?}, budget {budget:?}"));
        }
        let verdict = if findings.0.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {n}: {verdict} ({what}; {elapsed:.2?} of {budget:?})");
        for item in findings.0.iter().take(5) {
            println!("    {item}");
        }
        if findings.0.len() > 5 {
            println!("    ... {} more", findings.0.len() - 5);
        }
        if !findings.0.is_empty() {
            failed.push(n);
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
