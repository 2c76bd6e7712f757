//! Acceptance harness: one PASS/FAIL line per criterion, with the sub-items
//! underneath. Runs without the libtest harness so the lines print in
//! order; exits nonzero when any criterion fails.

mod common;

use std::collections::{BTreeSet, HashMap};
use std::process::ExitCode;

use gentle_core::dsl::parse_bound_quiver;
use gentle_core::forbidden::{finitistic_dimension, global_dimension, DimValue};
use gentle_core::homology::{
    check_bound_hypotheses, hb_dim, verify_bound, HbMode, HbResult, HomologyEngine, ModuleRef,
};
use gentle_core::oracle::{
    check_agreement, id_oracle, lambda_independence, pd_oracle, resolve, string_rep, FieldSpec, OracleDim,
    DEFAULT_PRIME, SECOND_PRIME,
};
use gentle_core::quasi_tilted::{is_quasi_tilted, qt_cross_check, scan, QtVerdict};
use gentle_core::quiver::{opposite, random_gentle, validate_gentle, BoundQuiver, ViolationCode};
use gentle_core::walks::{enumerate_bands, enumerate_strings, StringWord};
use serde_json::Value;

const RANDOM_BOUND_PAIRS: u64 = 500;
const RANDOM_QT_PAIRS: usize = 200;

struct Criterion {
    number: u8,
    title: &'static str,
    items: Vec<(bool, String)>,
}

impl Criterion {
    fn new(number: u8, title: &'static str) -> Self {
        Criterion { number, title, items: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        self.items.push((ok, what.into()));
    }

    fn passed(&self) -> bool {
        self.items.iter().all(|(ok, _)| *ok)
    }

    fn print(&self) {
        let tag = if self.passed() { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {tag}: {}", self.number, self.title);
        for (ok, what) in &self.items {
            println!("    [{}] {what}", if *ok { "ok" } else { "FAIL" });
        }
    }
}

fn fields() -> [FieldSpec; 2] {
    [FieldSpec::new(DEFAULT_PRIME).unwrap(), FieldSpec::new(SECOND_PRIME).unwrap()]
}

fn engine(name: &str) -> Result<(BoundQuiver, HomologyEngine), String> {
    let bq = common::fixture(name);
    let e = HomologyEngine::new(&bq).map_err(|e| format!("{name}: {e}"))?;
    Ok((bq, e))
}

fn oracle_dims(bq: &BoundQuiver, w: &StringWord, f: FieldSpec) -> (OracleDim, OracleDim) {
    let rep = string_rep(bq, w, f).unwrap();
    (pd_oracle(bq, &rep, 10, f).unwrap(), id_oracle(bq, &rep, 10, f).unwrap())
}

fn gentle_validation() -> Criterion {
    let mut c = Criterion::new(1, "gentle validation of fixtures and curated mutations");
    for name in common::FIXTURES {
        let report = validate_gentle(&common::fixture(name));
        let codes: Vec<String> = report.violations.iter().map(|v| format!("{}: {}", v.code, v.message)).collect();
        c.check(report.is_gentle(), format!("{name} validates gentle {codes:?}"));
    }
    let text = |name: &str| std::fs::read_to_string(common::fixture_path(name)).unwrap();
    let mutations = [
        (
            "extra arrows out of a new vertex",
            text("a5-two-rel") + "vertices 0\narrow e 0 1\narrow f 0 2\narrow g 0 4\n",
            ViolationCode::G1,
        ),
        ("shared left factor", text("kron-bridge") + "rel a b2\n", ViolationCode::G3),
        ("two relation-free continuations", text("kron-bridge").replace("rel a b1\n", ""), ViolationCode::G2),
        ("length-3 generator", text("a5-one-rel").replace("rel b c", "rel a b c"), ViolationCode::G4),
        ("relation-free cycle", text("a5-two-rel") + "arrow e 5 4\n", ViolationCode::FD),
    ];
    for (what, src, expected) in mutations {
        let codes = parse_bound_quiver(&src).map(|bq| validate_gentle(&bq).codes());
        let ok = codes.as_ref().is_ok_and(|cs| *cs == BTreeSet::from([expected]));
        c.check(ok, format!("{what}: expected {{{expected}}}, got {codes:?}"));
    }
    let src = text("a5-two-rel").replace("rel c d", "rel b a");
    let err = parse_bound_quiver(&src).err().map(|e| e.to_string());
    let ok = err.as_deref().is_some_and(|e| e.contains("relation not composable"));
    c.check(ok, format!("non-composable rel is a parse error: {err:?}"));
    c
}

fn global_dimensions() -> Criterion {
    let mut c = Criterion::new(2, "global dimension");
    let expected = [
        ("a5-two-rel", DimValue::Finite(2)),
        ("kron-bridge", DimValue::Finite(2)),
        ("fan", DimValue::Finite(2)),
        ("a5-one-rel", DimValue::Finite(2)),
        ("pinwheel-9", DimValue::Infinite),
        ("pinwheel-ext", DimValue::Infinite),
    ];
    for (name, want) in expected {
        let got = global_dimension(&common::fixture(name));
        c.check(got == want, format!("{name}: {got} (want {want})"));
    }
    c
}

fn finitistic_dimensions() -> Criterion {
    let mut c = Criterion::new(3, "finitistic dimension");
    for name in ["pinwheel-9", "pinwheel-ext", "a5-two-rel"] {
        let got = finitistic_dimension(&common::fixture(name));
        c.check(got == 2, format!("{name}: {got} (want 2)"));
    }
    c
}

fn named_dimensions() -> Criterion {
    let mut c = Criterion::new(4, "projective and injective dimensions of named modules");
    let items = [
        ("a5-two-rel", "e(3)", (2, 2)),
        ("pinwheel-9", "e(4)", (1, 1)),
        ("pinwheel-9", "a41 a31^-1", (1, 1)),
        ("pinwheel-ext", "a31 a41^-1", (1, 2)),
    ];
    for (name, text, (pd, id)) in items {
        let (bq, e) = engine(name).unwrap();
        let w = common::word(&bq, text);
        let got = (e.string_proj_dim(&w), e.string_inj_dim(&w));
        let want = (DimValue::Finite(pd), DimValue::Finite(id));
        c.check(got == want, format!("{name} M({text}): combinatorial ({}, {}) (want ({pd}, {id}))", got.0, got.1));
        for f in fields() {
            let o = oracle_dims(&bq, &w, f);
            let ok = o == (OracleDim::Finite(pd), OracleDim::Finite(id));
            c.check(ok, format!("{name} M({text}): oracle p={} {o:?} (want ({pd}, {id}))", f.prime()));
        }
    }
    let bq = common::fixture("pinwheel-ext");
    let rep = string_rep(&bq, &common::word(&bq, "a31 a41^-1"), FieldSpec::default()).unwrap();
    let support: Vec<&str> = bq.vertex_ids().filter(|&v| rep.dim_at(v) > 0).map(|v| bq.vertex_name(v)).collect();
    c.check(support == ["1", "3", "4"], format!("pinwheel-ext M(a31 a41^-1) has composition factors {support:?}"));
    c
}

fn hb_both(name: &str) -> Result<(BoundQuiver, HbResult, HbResult), String> {
    let (bq, e) = engine(name)?;
    let exact = hb_dim(&e, HbMode::EndpointExact).unwrap();
    let exhaustive = hb_dim(&e, HbMode::Exhaustive { max_len: 10 }).unwrap();
    Ok((bq, exhaustive, exact))
}

fn hb_values() -> Criterion {
    let mut c = Criterion::new(5, "hb.dim values (exhaustive to length 10, endpoint-exact agrees)");
    type Pred = fn(usize) -> bool;
    let items: [(&str, &str, Pred); 5] = [
        ("pinwheel-9", "== 2 and < 2 f.dim - 1 = 3", |v| v == 2),
        ("a5-two-rel", "== 4 = 2 gl.dim", |v| v == 4),
        ("fan", "<= 3", |v| v <= 3),
        ("a5-one-rel", "<= 3", |v| v <= 3),
        ("double-a5", "<= 3", |v| v <= 3),
    ];
    for (name, want, pred) in items {
        match hb_both(name) {
            Err(e) => c.check(false, e),
            Ok((bq, exhaustive, exact)) => {
                let v = exhaustive.value.finite().unwrap();
                let witness = exhaustive.witness.as_ref().map(|m| m.display(&bq)).unwrap_or_default();
                c.check(pred(v), format!("{name}: {v} with witness {witness} (want {want})"));
                c.check(exact.value == exhaustive.value, format!("{name}: endpoint-exact {}", exact.value));
            }
        }
    }
    if let Ok((bq, exhaustive, _)) = hb_both("a5-two-rel") {
        let simple = exhaustive.witness == Some(ModuleRef::StringModule(StringWord::Trivial(bq.vertex("3").unwrap())));
        c.check(simple, "a5-two-rel: the witness is S(3)");
    }
    c
}

fn bound_harness() -> Criterion {
    let mut c = Criterion::new(6, "hb.dim bounds under the strong source / sink hypotheses");
    for name in common::FIXTURES {
        match engine(name) {
            Ok((_, e)) => {
                let b = verify_bound(&e);
                c.check(b.holds, format!("{name}: hb {} against {:?}", b.hb.value, b.asserted));
            }
            Err(err) => {
                // the bounds are only claimed for gentle pairs satisfying a hypothesis
                let hyp = check_bound_hypotheses(&common::fixture(name));
                c.check(!hyp.either(), format!("{err}; hypotheses hold: {}", hyp.either()));
            }
        }
    }
    let (mut asserted, mut violations) = (0, Vec::new());
    for seed in 0..RANDOM_BOUND_PAIRS {
        let bq = random_gentle(seed, 8, 11).unwrap();
        let b = verify_bound(&HomologyEngine::new(&bq).unwrap());
        asserted += usize::from(b.asserted.is_some());
        if !b.holds {
            violations.push(seed);
        }
    }
    c.check(
        violations.is_empty(),
        format!("{RANDOM_BOUND_PAIRS} random pairs, {asserted} with an applicable bound, violations at seeds {violations:?}"),
    );
    c
}

fn band_rule() -> Criterion {
    let mut c = Criterion::new(7, "band modules have pd = id = 1 (n in {1,2}, three eigenvalues, two primes)");
    for name in common::FIXTURES {
        let bq = common::fixture(name);
        let bands = enumerate_bands(&bq, 8).unwrap();
        let mut bad = Vec::new();
        for b in &bands {
            for f in fields() {
                let report = lambda_independence(&bq, b, f).unwrap();
                if !report.all_one() {
                    let run = report.runs.iter().find(|r| (r.pd, r.id) != (OracleDim::Finite(1), OracleDim::Finite(1)));
                    bad.push(format!("{} p={} {run:?}", b.display(&bq), f.prime()));
                }
            }
        }
        let gentle = validate_gentle(&bq).is_gentle();
        let ok = bad.is_empty() && gentle;
        c.check(ok, format!("{name}: {} bands, gentle {gentle}, mismatches {bad:?}", bands.len()));
    }
    c
}

fn oracle_equivalence() -> Criterion {
    let mut c = Criterion::new(8, "combinatorial (pd, id) equals the oracle on strings up to length 6");
    let mut total = 0;
    for name in common::FIXTURES {
        match engine(name) {
            Err(e) => c.check(false, e),
            Ok((bq, e)) => {
                let s = check_agreement(&e, 6, 10, &fields()).unwrap();
                total += s.checked;
                let shown: Vec<String> = s.mismatches.iter().map(|m| m.module.display(&bq)).collect();
                c.check(
                    s.mismatches.is_empty() && s.non_minimal == 0,
                    format!(
                        "{name}: {} modules, mismatches {shown:?}, non-minimal covers {}",
                        s.checked, s.non_minimal
                    ),
                );
            }
        }
    }
    c.check(total > 0, format!("{total} modules compared in total"));
    c
}

fn adjudication() -> Criterion {
    let mut c = Criterion::new(9, "kron-bridge M(b2 b1^-1 b2) resolved by the oracle");
    let bq = common::fixture("kron-bridge");
    let w = common::word(&bq, "b2 b1^-1 b2");
    let golden: Value =
        serde_json::from_str(&std::fs::read_to_string(common::golden_path("kron-adjudication")).unwrap()).unwrap();
    let v2 = bq.vertex("2").unwrap();
    let v3 = bq.vertex("3").unwrap();
    for f in fields() {
        let rep = string_rep(&bq, &w, f).unwrap();
        let proj = resolve(&bq, &rep, 10, f).unwrap();
        let inj = resolve(&opposite(&bq), &rep.dual(), 10, f).unwrap();
        let p = f.prime();
        c.check(proj.all_minimal() && inj.all_minimal(), format!("p={p}: every cover is minimal"));
        let top = &proj.steps[0].cover_multiplicities;
        let top_ok = top[v2.0] == 2 && top.iter().sum::<usize>() == 2;
        c.check(top_ok, format!("p={p}: projective cover P(2)^2, multiplicities {top:?}"));
        let soc = &inj.steps[0].cover_multiplicities;
        let soc_ok = soc[v3.0] == 2 && soc.iter().sum::<usize>() == 2;
        c.check(soc_ok, format!("p={p}: injective envelope E(3)^2, multiplicities {soc:?}"));
        let (pd, id) = (proj.dim().finite_value(), inj.dim().finite_value());
        let frozen = (golden["pd"].as_u64().map(|x| x as usize), golden["id"].as_u64().map(|x| x as usize));
        c.check(
            (pd, id) == frozen,
            format!("p={p}: oracle (pd, id) = {pd:?}, {id:?} matches the golden file {frozen:?}"),
        );
    }
    c
}

fn qt_decision() -> Criterion {
    let mut c = Criterion::new(10, "quasi-tilted decision");
    let fan = common::fixture("fan");
    let hyp = check_bound_hypotheses(&fan);
    c.check(
        is_quasi_tilted(&fan) == QtVerdict::QuasiTilted && hyp.either(),
        format!("fan: {} via hypotheses (sources {}, sinks {})", is_quasi_tilted(&fan), hyp.sources_ok, hyp.sinks_ok),
    );
    let (bq, e) = engine("a5-two-rel").unwrap();
    match is_quasi_tilted(&bq) {
        QtVerdict::NotQuasiTilted(w) => {
            let dims = (e.string_proj_dim(&w), e.string_inj_dim(&w));
            let ok = dims == (DimValue::Finite(2), DimValue::Finite(2));
            c.check(
                ok,
                format!("a5-two-rel: NotQuasiTilted, witness {} with ({}, {})", w.display(&bq), dims.0, dims.1),
            );
        }
        other => c.check(false, format!("a5-two-rel: {other}")),
    }
    for name in ["a5-one-rel", "double-a5"] {
        match engine(name) {
            Err(err) => c.check(false, err),
            Ok((bq, e)) => {
                let by_scan = !check_bound_hypotheses(&bq).either() && scan(&bq).is_none();
                let cross = qt_cross_check(&e, 8).unwrap();
                let ok = is_quasi_tilted(&bq) == QtVerdict::QuasiTilted
                    && by_scan
                    && cross.consistent
                    && cross.witness.is_none();
                c.check(
                    ok,
                    format!(
                        "{name}: {} via scan {by_scan}, cross-check over {} strings",
                        is_quasi_tilted(&bq),
                        cross.checked
                    ),
                );
            }
        }
    }
    for name in common::FIXTURES {
        let bq = common::fixture(name);
        if let Ok(e) = HomologyEngine::new(&bq) {
            if global_dimension(&bq) == DimValue::Finite(2) {
                let cross = qt_cross_check(&e, 8).unwrap();
                c.check(cross.consistent, format!("{name}: scan and pd + id <= 3 agree ({})", cross.verdict));
            }
        }
    }
    let (mut seen, mut disagreements, mut seed) = (0, Vec::new(), 0u64);
    while seen < RANDOM_QT_PAIRS {
        let bq = random_gentle(seed, 8, 11).unwrap();
        if global_dimension(&bq) == DimValue::Finite(2) {
            seen += 1;
            let e = HomologyEngine::new(&bq).unwrap();
            let reach = match is_quasi_tilted(&bq) {
                QtVerdict::NotQuasiTilted(w) => w.len().max(8),
                _ => 8,
            };
            if !qt_cross_check(&e, reach).unwrap().consistent {
                disagreements.push(seed);
            }
        }
        seed += 1;
    }
    c.check(
        disagreements.is_empty(),
        format!("{RANDOM_QT_PAIRS} random gl.dim 2 pairs (seeds below {seed}), disagreements at {disagreements:?}"),
    );
    c
}

fn duality_and_locality() -> Criterion {
    let mut c = Criterion::new(11, "duality, end-letter locality and hb.dim mode agreement");
    for name in common::FIXTURES {
        let (bq, e) = match engine(name) {
            Ok(x) => x,
            Err(err) => {
                c.check(false, err);
                continue;
            }
        };
        let op = HomologyEngine::new(&opposite(&bq)).unwrap();
        let strings = enumerate_strings(&bq, 8).unwrap();
        let dual_bad = strings.iter().filter(|w| e.string_inj_dim(w) != op.string_proj_dim(&w.transport())).count();
        c.check(dual_bad == 0, format!("{name}: id = opposite pd on {} strings, {dual_bad} violations", strings.len()));

        let mut by_ends: HashMap<_, (DimValue, DimValue, &StringWord)> = HashMap::new();
        let mut counterexample = None;
        for w in strings.iter().filter(|w| w.len() >= 2) {
            let dims = (e.string_proj_dim(w), e.string_inj_dim(w));
            let prev = by_ends.entry((w.first(), w.last())).or_insert((dims.0, dims.1, w));
            if (prev.0, prev.1) != dims && counterexample.is_none() {
                counterexample = Some(format!(
                    "{} has ({}, {}) but {} has ({}, {})",
                    prev.2.display(&bq),
                    prev.0,
                    prev.1,
                    w.display(&bq),
                    dims.0,
                    dims.1
                ));
            }
        }
        c.check(
            counterexample.is_none(),
            format!("{name}: (pd, id) determined by the end letters: {}", counterexample.as_deref().unwrap_or("yes")),
        );

        let exact = hb_dim(&e, HbMode::EndpointExact).unwrap();
        let exhaustive = hb_dim(&e, HbMode::Exhaustive { max_len: 8 }).unwrap();
        c.check(
            exact.value == exhaustive.value,
            format!("{name}: hb exact {} vs exhaustive {}", exact.value, exhaustive.value),
        );
    }
    c
}

fn main() -> ExitCode {
    let criteria = [
        gentle_validation(),
        global_dimensions(),
        finitistic_dimensions(),
        named_dimensions(),
        hb_values(),
        bound_harness(),
        band_rule(),
        oracle_equivalence(),
        adjudication(),
        qt_decision(),
        duality_and_locality(),
    ];
    for c in &criteria {
        c.print();
    }
    let failed: Vec<u8> = criteria.iter().filter(|c| !c.passed()).map(|c| c.number).collect();
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed.len(), criteria.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failing: {failed:?}");
        ExitCode::FAILURE
    }
}
