use std::fs;
use std::io::Read;
use std::path::Path;

use serde_json::{json, Value};
use symtrop::witness::{border_matrix, duplicate_matrix, verify, WitnessRecord, CATALOG_NAMES};
use symtrop::*;

use crate::report::Report;

/// A command that ran to completion; `negative` selects exit code 1.
pub struct Outcome {
    pub report: Report,
    pub negative: bool,
}

impl Outcome {
    fn ok(report: Report) -> Self {
        Outcome { report, negative: false }
    }

    fn judged(report: Report, passed: bool) -> Self {
        Outcome { report, negative: !passed }
    }
}

/// Usage or precondition failure, reported on stderr with exit code 2.
pub type Failure = String;

pub type CmdResult = Result<Outcome, Failure>;

fn fail(e: impl std::fmt::Display) -> Failure {
    e.to_string()
}

fn read_source(source: &str) -> Result<String, Failure> {
    if source == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text).map_err(|e| format!("stdin: {e}"))?;
        Ok(text)
    } else {
        fs::read_to_string(source).map_err(|e| format!("{source}: {e}"))
    }
}

/// Resolve `catalog:<name>`, a path, or `-` to a matrix.
pub fn load_matrix(source: &str) -> Result<Matrix, Failure> {
    if let Some(name) = source.strip_prefix("catalog:") {
        return catalog(name).map(|w| w.matrix).map_err(fail);
    }
    let text = read_source(source)?;
    Matrix::parse(&text).map_err(|e| format!("{source}: {e}"))
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

fn require_symmetric(a: &Matrix) -> Result<(), Failure> {
    a.require_symmetric().map_err(fail)
}

pub fn det(source: &str) -> CmdResult {
    let a = load_matrix(source)?;
    if !a.is_square() {
        return Err(fail(MatrixError::NotSquare { rows: a.n_rows(), cols: a.n_cols() }));
    }
    let all: Vec<usize> = (0..a.n_rows()).collect();
    let det = det_report(&a, &all, &all).map_err(fail)?;
    let monomial = |b: &Bijection| {
        b.as_permutation(a.n_rows()).map(|p| p.to_string()).unwrap_or_else(|| format!("{:?}", b.cols))
    };
    let mut report = Report::new(det.value.to_string())
        .digest_of(&a.to_text())
        .field("value", det.value.to_string())
        .field("singular", det.is_singular())
        .field("optimal_permutations", det.standard_witnesses.iter().map(monomial).collect::<Vec<_>>());
    if let Some(sym) = det.is_sym_singular() {
        report = report
            .field("symmetrically_singular", sym)
            .field("optimal_classes", det.symmetric_witnesses.iter().map(monomial).collect::<Vec<_>>());
    }
    Ok(Outcome::ok(report))
}

pub fn rank(source: &str, symmetric: bool, exhaustive: bool) -> CmdResult {
    let a = load_matrix(source)?;
    let opts = RankOptions { exhaustive };
    let report = if symmetric {
        symmetric_tropical_rank_with(&a, opts)
    } else {
        tropical_rank_with(&a, opts)
    }
    .map_err(fail)?;
    let kind = if symmetric { "symmetric tropical rank" } else { "tropical rank" };
    Ok(Outcome::ok(
        Report::new(report.rank.to_string())
            .digest_of(&a.to_text())
            .field("kind", kind)
            .field("rank", report.rank)
            .field("witness_rows", one_based(&report.witness.0))
            .field("witness_cols", one_based(&report.witness.1))
            .field("exhaustive", report.exhaustive),
    ))
}

fn scaling_json(c: &ScalingVector<Rational>) -> Value {
    json!(c.0.iter().map(ToString::to_string).collect::<Vec<_>>())
}

pub fn normalize(source: &str) -> CmdResult {
    let a = load_matrix(source)?;
    let (b, c) = a.normalize().map_err(fail)?;
    Ok(Outcome::ok(
        Report::new("normalized").digest_of(&a.to_text()).field("scaling", scaling_json(&c)).field("matrix", b.to_text()),
    ))
}

pub fn decompose(source: &str) -> CmdResult {
    let a = load_matrix(source)?;
    let (b, c) = a.normalize().map_err(fail)?;
    let dec = block_decompose(&b, true).map_err(fail)?;
    let lay = &dec.layout;
    let blocks = [("zero", &lay.zero), ("b1", &lay.b1), ("b2", &lay.b2), ("k", &lay.k), ("l", &lay.l)];
    let layout: serde_json::Map<String, Value> =
        blocks.iter().map(|(name, range)| (name.to_string(), json!(one_based(&dec.indices(range))))).collect();
    Ok(Outcome::ok(
        Report::new(format!("permutation {}", dec.sigma))
            .digest_of(&a.to_text())
            .field("permutation", dec.sigma.to_string())
            .field("layout", Value::Object(layout))
            .field("scaling", scaling_json(&c))
            .field("permuted", dec.permuted.to_text()),
    ))
}

fn checks_json(c: &LiftChecks) -> Value {
    json!({
        "degree_match": c.degree_match,
        "symmetric": c.symmetric,
        "max_minor_residual": c.max_minor_residual,
        "witness_minor": c.witness_minor.as_ref().map(|w| json!({
            "rows": one_based(&w.rows),
            "cols": one_based(&w.cols),
            "relative_magnitude": w.relative_magnitude,
        })),
        "passed": c.passed(),
    })
}

pub fn lift(source: &str, rank: usize, seed: u64, trunc: Option<Rational>, output: Option<&Path>) -> CmdResult {
    let a = load_matrix(source)?;
    let result = match rank {
        1 => rank1_lift(&a),
        2 => rank2_symmetric_lift(&a, &LiftOptions { seed, trunc, ..LiftOptions::default() }),
        r => return Err(format!("lifts are constructed for rank 1 and 2 only, got {r}")),
    };
    let cert = match result {
        Ok(cert) => cert,
        Err(LiftError::LiftFailed(msg)) => {
            let report = Report::new("lift failed").digest_of(&a.to_text()).field("reason", msg);
            return Ok(Outcome::judged(report, false));
        }
        Err(e) => return Err(fail(e)),
    };
    if let Some(path) = output {
        fs::write(path, cert.matrix.to_text()).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    let valid = cert.is_valid();
    let report = Report::new(if valid { "lift verified" } else { "lift failed verification" })
        .digest_of(&a.to_text())
        .field("rank", cert.target_rank)
        .field("seed", cert.seed)
        .field("attempts", cert.attempts)
        .field("trunc", cert.matrix.trunc().to_string())
        .field("checks", checks_json(&cert.checks))
        .field("lift", cert.matrix.to_text());
    Ok(Outcome::judged(report, valid))
}

pub fn verify_lift(source: &str, series_path: &str, rank: usize) -> CmdResult {
    let a = load_matrix(source)?;
    let text = read_source(series_path)?;
    let l = SeriesMatrix::parse(&text).map_err(|e| format!("{series_path}: {e}"))?;
    if (l.n_rows(), l.n_cols()) != (a.n_rows(), a.n_cols()) {
        return Err(format!(
            "lift is {}x{} but the matrix is {}x{}",
            l.n_rows(),
            l.n_cols(),
            a.n_rows(),
            a.n_cols()
        ));
    }
    let checks = symtrop::verify_lift(&a, &l, rank);
    let passed = checks.passed();
    let report = Report::new(if passed { "valid lift" } else { "invalid lift" })
        .digest_of(&format!("{}{}", a.to_text(), l.to_text()))
        .field("rank", rank)
        .field("checks", checks_json(&checks));
    Ok(Outcome::judged(report, passed))
}

fn record_report(w: &WitnessRecord, summary: String) -> Report {
    Report::new(summary)
        .digest_of(&w.matrix.to_text())
        .field("n", w.matrix.n_rows())
        .field("provenance", w.provenance_string())
        .field("claimed_trop_rank", w.claimed_trop_rank)
        .field("claimed_sym_trop_rank", w.claimed_sym_trop_rank)
        .field("kapranov_gap", if w.claimed_kapranov_gap { "imported from the catalog base" } else { "none claimed" })
        .field("matrix", w.matrix.to_text())
}

fn with_verification(report: Report, w: &WitnessRecord) -> (Report, bool) {
    let v = verify(w);
    let report = report.field(
        "verification",
        json!({ "trop_rank": v.trop_rank, "sym_trop_rank": v.sym_trop_rank, "mismatch": v.mismatch }),
    );
    (report, !v.mismatch)
}

pub fn witness_cmd(r: usize, n: usize, check: bool) -> CmdResult {
    let w = witness(r, n).map_err(fail)?;
    let report = record_report(&w, format!("witness for r = {r}, n = {n}"));
    if check {
        let (report, ok) = with_verification(report, &w);
        Ok(Outcome::judged(report, ok))
    } else {
        Ok(Outcome::ok(report))
    }
}

pub fn extend(source: &str, border: bool, p: Option<Rational>, m: Option<Rational>) -> CmdResult {
    let a = load_matrix(source)?;
    require_symmetric(&a)?;
    let before = symmetric_tropical_rank(&a).map_err(fail)?.rank;
    let one = Rational::from_integer(1);
    let extended = if border {
        let p = p.unwrap_or(*a.max_entry() + one);
        let m = m.unwrap_or(*a.min_entry() - one);
        border_matrix(&a, &p, &m)
    } else {
        duplicate_matrix(&a)
    }
    .map_err(fail)?;
    let after = symmetric_tropical_rank(&extended).map_err(fail)?.rank;
    Ok(Outcome::ok(
        Report::new(format!("{} extension", if border { "border" } else { "duplicate" }))
            .digest_of(&a.to_text())
            .field("sym_trop_rank_before", before)
            .field("sym_trop_rank_after", after)
            .field("matrix", extended.to_text()),
    ))
}

pub fn conic(coeffs: &[Rational]) -> CmdResult {
    let coeffs: [Rational; 6] = coeffs.try_into().map_err(|_| "a conic takes exactly 6 coefficients".to_string())?;
    let class = classify_conic(coeffs);
    let [a, b, c, d, e, f] = coeffs;
    let m = Matrix::from_rows(vec![vec![a, b, d], vec![b, c, e], vec![d, e, f]]).map_err(fail)?;
    let summary = match class {
        ConicClass::TwoLines => "singular: union of two tropical lines",
        ConicClass::Nonsingular => "nonsingular: not a union of two tropical lines",
    };
    Ok(Outcome::ok(
        Report::new(summary)
            .digest_of(&m.to_text())
            .field("singular", class == ConicClass::TwoLines)
            .field("sym_trop_rank", symmetric_tropical_rank(&m).map_err(fail)?.rank)
            .field("matrix", m.to_text()),
    ))
}

pub fn catalog_cmd(name: Option<&str>) -> CmdResult {
    match name {
        None => {
            let entries: Vec<Value> = CATALOG_NAMES
                .iter()
                .map(|name| {
                    let w = catalog(name).expect("catalog names resolve");
                    json!({ "name": name, "size": w.matrix.n_rows(), "symmetric": w.matrix.is_symmetric() })
                })
                .collect();
            Ok(Outcome::ok(Report::new(CATALOG_NAMES.join(" ")).field("entries", entries)))
        }
        Some(name) => {
            let w = catalog(name).map_err(fail)?;
            Ok(Outcome::ok(record_report(&w, format!("catalog:{name}"))))
        }
    }
}

pub fn selftest(seed: u64) -> CmdResult {
    let mut checks: Vec<(String, bool)> = Vec::new();
    for name in CATALOG_NAMES {
        let w = catalog(name).expect("catalog names resolve");
        checks.push((format!("catalog:{name} ranks"), !verify(&w).mismatch));
    }
    for (r, n) in [(5, 6), (5, 7), (6, 7), (4, 13)] {
        let ok = witness(r, n).is_ok_and(|w| !verify(&w).mismatch && w.claimed_sym_trop_rank == Some(r - 1));
        checks.push((format!("witness({r}, {n})"), ok));
    }
    let c1 = catalog("c1").expect("c1").matrix;
    let c2 = catalog("c2").expect("c2").matrix;
    let opts = LiftOptions { seed, ..LiftOptions::default() };
    checks.push(("c1 symmetric lift".into(), rank2_symmetric_lift(&c1, &opts).is_ok_and(|c| c.is_valid())));
    checks.push((
        "c2 rejected".into(),
        matches!(rank2_symmetric_lift(&c2, &opts), Err(LiftError::Precondition(_))),
    ));
    let g1 = [1, 0, 1, 0, 0, 0].map(Rational::from_integer);
    checks.push(("conic of c2 is two lines".into(), classify_conic(g1) == ConicClass::TwoLines));
    let failed = checks.iter().filter(|(_, ok)| !ok).count();
    let rows: Vec<Value> = checks.iter().map(|(name, ok)| json!({ "check": name, "passed": ok })).collect();
    let report = Report::new(format!("{} checks, {failed} failed", checks.len())).field("checks", rows);
    Ok(Outcome::judged(report, failed == 0))
}
