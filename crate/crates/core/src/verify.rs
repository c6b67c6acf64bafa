//! Named verification suites over a range of lattice sizes, with structured
//! pass/fail reports.
//!
//! A suite never aborts on first failure: every check runs, and failing
//! checks carry their fully reduced residual so a discrepancy can be traced
//! to the relation it came from. Reports serialize deterministically; two
//! runs of the same suite produce byte-identical JSON. Wall times are shown
//! in the text rendering only, since timings would break byte determinism of
//! the JSON artifact (its `ms` field is fixed at zero).

use crate::algebra::{Element, Generator, Lattice, TensorElement, Word};
use crate::hopf::{
    antipode_candidate_n1, coassoc_defect, commutativity_defect, counit_defects,
    group_generators, hom_defect, invariance_defect,
};
use crate::relations::{
    build_group_rules, build_oscillator_rules, g, glpq_identification_report, RewriteSystem,
};
use crate::rewrite::normal_order;
use crate::scalar::LaurentScalar;
use serde_json::{json, Value};
use std::fmt;
use std::time::{Duration, Instant};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("lattice size must be at least 1")]
    EmptyLattice,
    #[error("suite `{suite}` requires lattice size 1, got {n}")]
    UnsupportedLattice { suite: SuiteName, n: u32 },
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SuiteName {
    Compatibility,
    Invariance,
    Homomorphism,
    Coassociativity,
    Counit,
    StarClosure,
    ClassicalLimit,
    Glpq,
    AntipodeN1,
}

impl SuiteName {
    pub const ALL: [SuiteName; 9] = [
        SuiteName::Compatibility,
        SuiteName::Invariance,
        SuiteName::Homomorphism,
        SuiteName::Coassociativity,
        SuiteName::Counit,
        SuiteName::StarClosure,
        SuiteName::ClassicalLimit,
        SuiteName::Glpq,
        SuiteName::AntipodeN1,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            SuiteName::Compatibility => "compatibility",
            SuiteName::Invariance => "invariance",
            SuiteName::Homomorphism => "homomorphism",
            SuiteName::Coassociativity => "coassociativity",
            SuiteName::Counit => "counit",
            SuiteName::StarClosure => "star_closure",
            SuiteName::ClassicalLimit => "classical_limit",
            SuiteName::Glpq => "glpq",
            SuiteName::AntipodeN1 => "antipode_n1",
        }
    }

    pub fn parse(name: &str) -> Result<SuiteName, VerifyError> {
        SuiteName::ALL
            .iter()
            .find(|s| s.as_str() == name)
            .copied()
            .ok_or_else(|| VerifyError::UnknownSuite(name.to_string()))
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{}", self.as_str())
    }
}

/// Residual carried by a failing check.
#[derive(Debug, Clone)]
pub enum Residual {
    Element(Element),
    Tensor(TensorElement),
    Note(String),
}

impl Residual {
    fn to_json(&self) -> Value {
        match self {
            Residual::Element(e) => e.to_json(),
            Residual::Tensor(t) => t.to_json(),
            Residual::Note(s) => json!(s),
        }
    }
}

impl fmt::Display for Residual {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Residual::Element(e) => write!(out, "{e}"),
            Residual::Tensor(t) => write!(out, "{t}"),
            Residual::Note(s) => write!(out, "{s}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckRecord {
    pub id: String,
    pub pass: bool,
    pub residual: Option<Residual>,
    pub wall: Duration,
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: SuiteName,
    pub lattice: u32,
    pub checks: Vec<CheckRecord>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite.as_str(),
            "lattice": self.lattice,
            "checks": self
                .checks
                .iter()
                .map(|c| {
                    json!({
                        "id": c.id,
                        "status": if c.pass { "pass" } else { "fail" },
                        "residual": c.residual.as_ref().map(|r| r.to_json()).unwrap_or(Value::Null),
                        "ms": 0,
                    })
                })
                .collect::<Vec<_>>(),
            "status": if self.passed() { "pass" } else { "fail" },
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "suite {} (n={}): {} [{} checks]\n",
            self.suite,
            self.lattice,
            if self.passed() { "pass" } else { "FAIL" },
            self.checks.len()
        ));
        for c in &self.checks {
            out.push_str(&format!(
                "  {} {} ({:.3} ms)\n",
                if c.pass { "ok  " } else { "FAIL" },
                c.id,
                c.wall.as_secs_f64() * 1e3,
            ));
            if let Some(residual) = &c.residual {
                out.push_str(&format!("       residual: {residual}\n"));
            }
        }
        out
    }
}

struct SuiteRun {
    checks: Vec<CheckRecord>,
}

impl SuiteRun {
    fn new() -> Self {
        SuiteRun { checks: Vec::new() }
    }

    fn record<F>(&mut self, id: impl Into<String>, body: F)
    where
        F: FnOnce() -> Option<Residual>,
    {
        let start = Instant::now();
        let residual = body();
        self.checks.push(CheckRecord {
            id: id.into(),
            pass: residual.is_none(),
            residual,
            wall: start.elapsed(),
        });
    }

    fn tensor_check(&mut self, id: impl Into<String>, defect: impl FnOnce() -> TensorElement) {
        self.record(id, || {
            let d = defect();
            if d.is_zero() {
                None
            } else {
                Some(Residual::Tensor(d))
            }
        });
    }

    fn element_check(&mut self, id: impl Into<String>, defect: impl FnOnce() -> Element) {
        self.record(id, || {
            let d = defect();
            if d.is_zero() {
                None
            } else {
                Some(Residual::Element(d))
            }
        });
    }
}

/// Systems used by a verification pass; the classical limit swaps in the
/// `q = 1` specializations.
struct Systems {
    group: RewriteSystem,
    osc: RewriteSystem,
}

impl Systems {
    fn symbolic(n: u32) -> Self {
        Systems {
            group: build_group_rules(n),
            osc: build_oscillator_rules(n),
        }
    }

    fn classical(n: u32) -> Self {
        let symbolic = Systems::symbolic(n);
        Systems {
            group: symbolic.group.specialized_at_one(),
            osc: symbolic.osc.specialized_at_one(),
        }
    }
}

fn compatibility_suite(run: &mut SuiteRun, n: u32) {
    let lat = Lattice::new(n);
    for i in lat.points() {
        for j in lat.points() {
            run.record(format!("g-compat/i={i},j={j}"), || {
                if check_pair_compatibility(i, j) {
                    None
                } else {
                    Some(Residual::Note(format!(
                        "g({i},{j}) differs from (q-1)*delta + 1"
                    )))
                }
            });
        }
    }
}

fn check_pair_compatibility(i: u32, j: u32) -> bool {
    let delta = if i == j {
        LaurentScalar::one()
    } else {
        LaurentScalar::zero()
    };
    let discrete =
        &(&(&LaurentScalar::q() - &LaurentScalar::one()) * &delta) + &LaurentScalar::one();
    g(i, j) == discrete
}

fn invariance_suite(run: &mut SuiteRun, systems: &Systems, prefix: &str) {
    let lat = systems.group.lattice();
    for p in lat.points() {
        for pp in lat.points() {
            run.tensor_check(format!("{prefix}invariance/p={p},p'={pp}"), || {
                invariance_defect(&systems.group, &systems.osc, p, pp)
            });
        }
    }
    for p in lat.points() {
        for pp in lat.points() {
            run.tensor_check(format!("{prefix}commutativity/p={p},p'={pp}"), || {
                commutativity_defect(&systems.group, &systems.osc, p, pp)
            });
        }
    }
}

fn homomorphism_suite(run: &mut SuiteRun, systems: &Systems, prefix: &str) {
    for (pattern, info) in systems.group.rules() {
        let id = format!("{prefix}hom/{}*{}", pattern.0, pattern.1);
        let replacement = info.replacement.clone();
        let group = &systems.group;
        run.tensor_check(id, || {
            hom_defect(group, pattern, &replacement).expect("group rule")
        });
    }
}

fn coassociativity_suite(run: &mut SuiteRun, systems: &Systems, prefix: &str) {
    for gen in group_generators(systems.group.lattice()) {
        run.tensor_check(format!("{prefix}coassoc/{gen}"), || {
            coassoc_defect(&systems.group, &gen).expect("group generator")
        });
    }
}

fn counit_suite(run: &mut SuiteRun, systems: &Systems, prefix: &str) {
    for gen in group_generators(systems.group.lattice()) {
        let (left, right) = counit_defects(&systems.group, &gen).expect("group generator");
        run.element_check(format!("{prefix}counit-left/{gen}"), || left.clone());
        run.element_check(format!("{prefix}counit-right/{gen}"), || right.clone());
    }
}

fn star_closure_suite(run: &mut SuiteRun, systems: &Systems, prefix: &str) {
    for (label, sys) in [("osc", &systems.osc), ("group", &systems.group)] {
        for (pattern, info) in sys.rules() {
            let id = format!("{prefix}star/{label}/{}*{}", pattern.0, pattern.1);
            let relation = &Element::from_word(Word::from_factors(vec![pattern.0, pattern.1]))
                - &info.replacement;
            run.element_check(id, || normal_order(&relation.star(), sys));
        }
    }
}

fn classical_limit_suite(run: &mut SuiteRun, n: u32) {
    let systems = Systems::classical(n);

    // undeformed commutation relation holds at q = 1
    run.element_check("classical/ccr", || {
        let ccr = &(&Element::from_word(Word::from_factors(vec![
            Generator::a(1),
            Generator::adag(1),
        ])) - &Element::from_word(Word::from_factors(vec![
            Generator::adag(1),
            Generator::a(1),
        ]))) - &Element::one();
        normal_order(&ccr, &systems.osc)
    });

    // every specialized coefficient is +-1
    for (label, sys) in [("osc", &systems.osc), ("group", &systems.group)] {
        run.record(format!("classical/coeffs/{label}"), || {
            for (pattern, info) in sys.rules() {
                for (w, c) in info.replacement.terms() {
                    let unit = c
                        .as_unit_monomial()
                        .filter(|(r, k)| *k == 0 && r.abs().is_one())
                        .is_some();
                    if !unit {
                        return Some(Residual::Note(format!(
                            "rule {}*{} keeps coefficient {c} on {w}",
                            pattern.0, pattern.1
                        )));
                    }
                }
            }
            None
        });
    }

    invariance_suite(run, &systems, "classical/");
    homomorphism_suite(run, &systems, "classical/");
    coassociativity_suite(run, &systems, "classical/");
    counit_suite(run, &systems, "classical/");
    star_closure_suite(run, &systems, "classical/");
}

fn glpq_suite(run: &mut SuiteRun, n: u32) {
    let report = glpq_identification_report(n);
    for entry in report.entries {
        let id = format!(
            "glpq/p={},p'={},k={},l={}",
            entry.p, entry.pp, entry.k, entry.l
        );
        run.record(id, || {
            if entry.ok {
                None
            } else {
                Some(Residual::Note(format!(
                    "parameters ({}, {}): {}",
                    entry.param_first,
                    entry.param_second,
                    entry.mismatches.join("; ")
                )))
            }
        });
    }
}

fn antipode_suite(run: &mut SuiteRun, systems: &Systems) {
    match antipode_candidate_n1(&systems.group) {
        Err(err) => {
            run.record("antipode/adjugate-search", || {
                Some(Residual::Note(err.to_string()))
            });
        }
        Ok(report) => {
            run.record("antipode/adjugate-search", || None);
            for (gen, mu) in &report.mu {
                let id = format!("antipode/mu/{gen}");
                let ok = mu.as_unit_monomial().is_some();
                let note = format!("derived exchange scalar {mu}");
                run.record(id, move || {
                    if ok {
                        None
                    } else {
                        Some(Residual::Note(note))
                    }
                });
            }
            for (id, check) in &report.det_inverse_checks {
                let check = check.clone();
                run.element_check(format!("antipode/{id}"), move || check);
            }
            for (id, defect) in &report.axiom_defects {
                let defect = defect.clone();
                run.element_check(format!("antipode/axiom/{id}"), move || defect);
            }
        }
    }
}

/// Run one named suite at lattice size `n`. The antipode suite is defined
/// for `n = 1` only.
pub fn run_suite(name: SuiteName, n: u32) -> Result<SuiteReport, VerifyError> {
    if n == 0 {
        return Err(VerifyError::EmptyLattice);
    }
    if name == SuiteName::AntipodeN1 && n != 1 {
        return Err(VerifyError::UnsupportedLattice { suite: name, n });
    }
    let mut run = SuiteRun::new();
    match name {
        SuiteName::Compatibility => compatibility_suite(&mut run, n),
        SuiteName::Invariance => invariance_suite(&mut run, &Systems::symbolic(n), ""),
        SuiteName::Homomorphism => homomorphism_suite(&mut run, &Systems::symbolic(n), ""),
        SuiteName::Coassociativity => {
            coassociativity_suite(&mut run, &Systems::symbolic(n), "")
        }
        SuiteName::Counit => counit_suite(&mut run, &Systems::symbolic(n), ""),
        SuiteName::StarClosure => star_closure_suite(&mut run, &Systems::symbolic(n), ""),
        SuiteName::ClassicalLimit => classical_limit_suite(&mut run, n),
        SuiteName::Glpq => glpq_suite(&mut run, n),
        SuiteName::AntipodeN1 => antipode_suite(&mut run, &Systems::symbolic(n)),
    }
    Ok(SuiteReport {
        suite: name,
        lattice: n,
        checks: run.checks,
    })
}

/// All suites for every lattice size `1..=n_max`; the antipode suite runs at
/// size one only.
pub fn run_all(n_max: u32) -> Result<Vec<SuiteReport>, VerifyError> {
    if n_max == 0 {
        return Err(VerifyError::EmptyLattice);
    }
    let mut reports = Vec::new();
    for n in 1..=n_max {
        for suite in SuiteName::ALL {
            if suite == SuiteName::AntipodeN1 && n != 1 {
                continue;
            }
            reports.push(run_suite(suite, n)?);
        }
    }
    Ok(reports)
}

/// Serialize a batch of reports as one JSON array.
pub fn reports_to_json(reports: &[SuiteReport]) -> Value {
    Value::Array(reports.iter().map(SuiteReport::to_json).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for suite in SuiteName::ALL {
            assert_eq!(SuiteName::parse(suite.as_str()).unwrap(), suite);
        }
        assert!(matches!(
            SuiteName::parse("nope"),
            Err(VerifyError::UnknownSuite(_))
        ));
    }

    #[test]
    fn invariance_check_census() {
        let report = run_suite(SuiteName::Invariance, 2).unwrap();
        assert!(report.passed());
        assert_eq!(report.checks.len(), 8); // 2 * n^2
    }

    #[test]
    fn counit_check_census() {
        for n in 1..=2u32 {
            let report = run_suite(SuiteName::Counit, n).unwrap();
            assert!(report.passed());
            assert_eq!(report.checks.len(), (2 * (4 * n * n + 2 * n)) as usize);
        }
    }

    #[test]
    fn compatibility_suite_passes_up_to_three() {
        for n in 1..=3 {
            let report = run_suite(SuiteName::Compatibility, n).unwrap();
            assert!(report.passed());
            assert_eq!(report.checks.len(), (n * n) as usize);
        }
    }

    #[test]
    fn antipode_suite_guards_lattice_size() {
        assert!(matches!(
            run_suite(SuiteName::AntipodeN1, 2),
            Err(VerifyError::UnsupportedLattice { .. })
        ));
        let report = run_suite(SuiteName::AntipodeN1, 1).unwrap();
        assert!(report.passed());
    }

    #[test]
    fn run_all_census_and_determinism() {
        assert!(matches!(run_all(0), Err(VerifyError::EmptyLattice)));
        let reports = run_all(1).unwrap();
        assert_eq!(reports.len(), 9);
        assert!(reports.iter().all(SuiteReport::passed));

        let again = run_all(1).unwrap();
        assert_eq!(
            serde_json::to_string(&reports_to_json(&reports)).unwrap(),
            serde_json::to_string(&reports_to_json(&again)).unwrap()
        );
    }

    #[test]
    fn classical_limit_passes() {
        let report = run_suite(SuiteName::ClassicalLimit, 1).unwrap();
        assert!(report.passed(), "{}", report.to_text());
    }

    #[test]
    fn failing_checks_carry_residuals() {
        // A handmade failing record renders its residual in text and JSON.
        let mut run = SuiteRun::new();
        run.element_check("demo", || Element::one());
        let report = SuiteReport {
            suite: SuiteName::Invariance,
            lattice: 1,
            checks: run.checks,
        };
        assert!(!report.passed());
        let text = report.to_text();
        assert!(text.contains("residual: 1"));
        let js = report.to_json();
        assert_eq!(js["status"], "fail");
        assert_eq!(js["checks"][0]["status"], "fail");
    }
}
