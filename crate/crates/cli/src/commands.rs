use std::path::{Path, PathBuf};

use num_traits::Zero;
use serde_json::{json, Map, Value};

use rrl::algebra::{
    parse_point_list, parse_poly, write_point_list, write_poly, ComplexScalar, Monomial, Rational,
};
use rrl::chern::{
    c2_closed_form, c2_number, chern_character_sym2, chern_classes, degree_v2, sos_obstruction,
    CurveBundleParams,
};
use rrl::claims::{bracket_identities, hessian_survey, sample_zero_points};
use rrl::sampling::{nonnegativity_sweep, primitive_integer_vector};
use rrl::sections::{build_rho, exact_zero_family, BundleSpec, Flavor, RhoPolynomial};
use rrl::sos::{
    certify, verify_certificate, Certificate, CertifyMode, CertifyOptions, ExactWitness, SdpOptions,
};

use crate::output::{check, emit_json, emit_text, read_file, status, CliError, CliResult, Outcome};

/// Rank the Hessian is expected to have at a generic zero.
const EXPECTED_HESSIAN_RANK: usize = 4;
const CUBIC_TERM_COUNT: usize = 224;

fn parse_bundle(s: &str) -> CliResult<BundleSpec> {
    s.parse::<BundleSpec>().map_err(CliError::from)
}

fn is_cubic_pair(spec: &BundleSpec) -> bool {
    spec.flavor == Flavor::OddDiag && spec.m == 3
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn monomial_json(m: &Monomial) -> Value {
    json!(m.exponents())
}

fn rho_metadata(rho: &RhoPolynomial) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("bundle".into(), rho.spec.to_string().into());
    m.insert("flavor".into(), json!(rho.spec.flavor));
    m.insert("degrees".into(), json!([rho.spec.m, rho.spec.n]));
    m.insert("real_dim".into(), rho.spec.real_dim().into());
    m.insert("variables".into(), json!(rho.var_names()));
    m.insert("degree".into(), json!(rho.poly.degree().finite()));
    m.insert("homogeneous".into(), rho.poly.is_homogeneous().into());
    m.insert("term_count".into(), rho.poly.term_count().into());
    m.insert(
        "normalization".into(),
        json!({
            "negated": rho.negated,
            "scale": rho.scale.to_string(),
            "probe": strings(&rho.probe),
        }),
    );
    m
}

pub fn construct(bundle: &str, poly: Option<&Path>, out: Option<&Path>) -> CliResult<Outcome> {
    let spec = parse_bundle(bundle)?;
    let rho = build_rho(spec)?;
    let text = write_poly(&rho.poly, &rho.var_names());
    let mut body = rho_metadata(&rho);
    match poly {
        Some(p) => {
            emit_text(&text, Some(p))?;
            body.insert("polynomial_file".into(), p.display().to_string().into());
        }
        None => {
            body.insert("polynomial".into(), text.into());
        }
    }
    let degree_ok =
        rho.poly.is_homogeneous() && rho.poly.degree().finite() == Some(spec.total_degree());
    let mut checks = vec![check(
        "degree",
        "rho is homogeneous of degree m+n in m+n+2 real variables",
        status(degree_ok && rho.poly.var_count() == spec.real_dim()),
        json!({"degree": rho.poly.degree().finite(), "variables": rho.poly.var_count()}),
    )];
    let mut failed = !degree_ok;
    if is_cubic_pair(&spec) {
        let ok = rho.poly.term_count() == CUBIC_TERM_COUNT;
        failed |= !ok;
        checks.push(check(
            "term-count",
            "rho for O(3)+O(3) has 224 terms",
            status(ok),
            json!({"expected": CUBIC_TERM_COUNT, "observed": rho.poly.term_count()}),
        ));
    }
    body.insert("checks".into(), checks.into());
    emit_json("construct", body, out)?;
    Ok(if failed {
        Outcome::ClaimFailed("construction check failed".into())
    } else {
        Outcome::Pass
    })
}

pub fn verify(
    bundle: &str,
    samples: usize,
    zero_count: usize,
    seed: u64,
    out: Option<&Path>,
) -> CliResult<Outcome> {
    let spec = parse_bundle(bundle)?;
    let rho = build_rho(spec)?;
    let mut checks = Vec::new();
    let mut failed = Vec::new();

    let sweep = nonnegativity_sweep(&rho.poly, samples, seed)?;
    if !sweep.passed {
        failed.push("nonnegativity");
    }
    checks.push(check(
        "nonnegativity",
        "rho is nonnegative",
        status(sweep.passed),
        serde_json::to_value(&sweep).expect("serializable"),
    ));

    if is_cubic_pair(&spec) {
        let ids = bracket_identities(&rho)?;
        for (anchor, claim, ok) in [
            (
                "closed-form",
                "rho equals its closed form in the bracket invariants r, s, u, v",
                ids.closed_form,
            ),
            ("bracket-identity", "r s = |u|^2 + |v|^2", ids.rs_identity),
            (
                "rational-form",
                "r rho = (r^2 - |v|^2)^2 + |r conj(u) + u conj(v)|^2",
                ids.rational_form,
            ),
        ] {
            if !ok {
                failed.push(anchor);
            }
            checks.push(check(anchor, claim, status(ok), json!({"exact": true})));
        }
    }

    let zeros = sample_zero_points(&rho.chart, zero_count, seed)?;
    let survey = hessian_survey(&rho.poly, &zeros, EXPECTED_HESSIAN_RANK)?;
    if !survey.all_vanish {
        failed.push("zero-vanishing");
    }
    if !survey.all_psd {
        failed.push("hessian-psd");
    }
    checks.push(check(
        "zero-vanishing",
        "rho vanishes on every section with a zero",
        status(survey.all_vanish),
        json!({"zeros": survey.zeros}),
    ));
    checks.push(check(
        "hessian-psd",
        "the Hessian of rho is positive semidefinite at its zeros",
        status(survey.all_psd),
        json!({"zeros": survey.zeros}),
    ));
    // rank deviations are findings about genericity, not identity failures
    let finding = |ok: bool| if ok { "pass" } else { "finding" };
    checks.push(check(
        "hessian-rank",
        "the Hessian of rho has rank 4 at a generic zero",
        finding(survey.rank_exceptions.is_empty() && survey.zeros > 0),
        json!({
            "expected_rank": survey.expected_rank,
            "rank_histogram": survey.rank_histogram,
            "exceptions": survey.rank_exceptions.len(),
        }),
    ));
    checks.push(check(
        "hessian-minors",
        "at each zero all 5x5 Hessian minors vanish and some 4x4 minor does not",
        finding(
            survey.all_5x5_minors_vanish
                && survey.some_4x4_minor_nonzero_everywhere
                && survey.zeros > 0,
        ),
        json!({
            "all_5x5_minors_vanish": survey.all_5x5_minors_vanish,
            "some_4x4_minor_nonzero_everywhere": survey.some_4x4_minor_nonzero_everywhere,
        }),
    ));

    let mut body = Map::new();
    body.insert("bundle".into(), spec.to_string().into());
    body.insert("seed".into(), seed.into());
    body.insert("checks".into(), checks.into());
    emit_json("verify", body, out)?;
    Ok(if failed.is_empty() {
        Outcome::Pass
    } else {
        Outcome::ClaimFailed(format!("failed checks: {}", failed.join(", ")))
    })
}

pub struct SosArgs {
    pub poly: PathBuf,
    pub mode: String,
    pub zeros: Option<PathBuf>,
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

fn witness_json(w: &ExactWitness) -> Value {
    let mut m = Map::new();
    m.insert("type".into(), w.label().into());
    match w {
        ExactWitness::TrivialFace => {}
        ExactWitness::Functional(ell) => {
            m.insert(
                "functional".into(),
                ell.iter()
                    .map(|(g, v)| json!({"monomial": monomial_json(g), "value": v.to_string()}))
                    .collect(),
            );
        }
        ExactWitness::ModularFunctional {
            prime,
            functional,
            product_rank,
        } => {
            m.insert("prime".into(), (*prime).into());
            m.insert("product_rank".into(), (*product_rank).into());
            m.insert(
                "functional".into(),
                functional
                    .iter()
                    .map(|(g, v)| json!({"monomial": monomial_json(g), "value": v}))
                    .collect(),
            );
        }
        ExactWitness::IndefiniteGram {
            face,
            gram,
            direction,
        } => {
            m.insert(
                "face".into(),
                face.iter().map(|v| json!(strings(v))).collect(),
            );
            m.insert(
                "gram".into(),
                (0..gram.rows())
                    .map(|i| json!(strings(gram.row(i))))
                    .collect(),
            );
            m.insert("direction".into(), json!(strings(direction)));
        }
    }
    Value::Object(m)
}

pub fn sos(args: &SosArgs) -> CliResult<Outcome> {
    let (p, names) = parse_poly(&read_file(&args.poly)?)?;
    let zeros = match &args.zeros {
        Some(path) => parse_point_list(&read_file(path)?)?,
        None => Vec::new(),
    };
    if let Some(z) = zeros.iter().find(|z| z.len() != p.var_count()) {
        return Err(CliError::Usage(format!(
            "zero list has dimension {}, polynomial has {} variables",
            z.len(),
            p.var_count()
        )));
    }
    let mode: CertifyMode = args.mode.parse()?;
    let opts = CertifyOptions {
        sdp: SdpOptions {
            tol: args.tol,
            max_iter: args.max_iter,
        },
        seed: args.seed,
        ..CertifyOptions::default()
    };
    let report = certify(&p, mode, &zeros, &opts)?;
    let verification = verify_certificate(&p, &zeros, &report.certificate, args.tol)?;

    let mut body = Map::new();
    body.insert("poly_file".into(), args.poly.display().to_string().into());
    body.insert("kind".into(), report.certificate.kind().into());
    body.insert("branch".into(), json!(report.branch));
    body.insert("mode".into(), json!(report.mode));
    body.insert("seed".into(), args.seed.into());
    body.insert("variables".into(), p.var_count().into());
    body.insert("basis_size".into(), report.basis_size.into());
    body.insert("face_dim".into(), report.face_dim.into());
    body.insert("zero_count".into(), report.zero_count.into());
    if let Some(t) = &report.trace {
        body.insert("face_batches".into(), json!(t));
    }
    body.insert("notes".into(), json!(report.notes));
    match &report.certificate {
        Certificate::SosWitness {
            squares,
            residual,
            exact,
        } => {
            body.insert("exact".into(), (*exact).into());
            body.insert("residual".into(), json!(residual));
            body.insert("square_count".into(), squares.len().into());
            body.insert(
                "squares".into(),
                squares
                    .iter()
                    .map(|s| json!({"weight": s.weight.to_string(), "poly": write_poly(&s.poly, &names)}))
                    .collect(),
            );
        }
        Certificate::NonSosExact { witness, .. } => {
            body.insert("witness".into(), witness_json(witness));
        }
        Certificate::NonSosNumeric {
            margin, functional, ..
        } => {
            body.insert("margin".into(), json!(margin));
            body.insert(
                "functional".into(),
                functional
                    .iter()
                    .map(|(g, v)| json!({"monomial": monomial_json(g), "value": v}))
                    .collect(),
            );
        }
        Certificate::Undecided { reason } => {
            body.insert("reason".into(), reason.clone().into());
        }
    }
    body.insert("verification".into(), json!(verification));
    emit_json("sos", body, args.out.as_deref())?;
    Ok(match (&report.certificate, verification.valid) {
        (Certificate::Undecided { reason }, _) => {
            Outcome::ClaimFailed(format!("undecided: {reason}"))
        }
        (_, false) => Outcome::ClaimFailed(format!(
            "certificate failed verification: {}",
            verification.detail
        )),
        _ => Outcome::Pass,
    })
}

fn parse_range(s: &str) -> CliResult<(i64, i64)> {
    let bad = || CliError::Usage(format!("bad range '{s}' (expected a..b)"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let a: i64 = a.trim().parse().map_err(|_| bad())?;
    let b: i64 = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

fn invariant_record(d: i64, g: i64, r: i64) -> CliResult<(Value, bool)> {
    if g < 0 || r < 1 {
        return Err(CliError::Usage(format!(
            "need g >= 0 and r >= 1, got g={g}, r={r}"
        )));
    }
    let params = CurveBundleParams { d, g, r };
    let (c1, _) = chern_classes(&chern_character_sym2(params));
    let c2 = c2_number(params);
    let closed = c2_closed_form(params);
    let mut ok = c2 == closed;
    let mut rec = json!({
        "d": d,
        "g": g,
        "r": r,
        "c1": {"x": c1.cx.to_string(), "delta": c1.cdelta.to_string()},
        "c2": c2.to_string(),
        "c2_closed_form_matches": c2 == closed,
    });
    if r == 2 {
        let obs = sos_obstruction(d, g);
        ok &= Rational::from_integer(degree_v2(d, g).into()) == c2;
        rec["degree_v2"] = json!(obs.deg_v2);
        rec["sos_bound"] = json!(obs.bound);
        rec["obstructed"] = json!(obs.obstructed);
        rec["degree_hypothesis"] = json!(obs.degree_hypothesis);
    }
    Ok((rec, ok))
}

pub fn invariants(
    d: Option<i64>,
    g: Option<i64>,
    r: i64,
    d_range: Option<&str>,
    g_range: Option<&str>,
    out: Option<&Path>,
) -> CliResult<Outcome> {
    let (d0, d1) = match (d, d_range) {
        (Some(d), None) => (d, d),
        (None, Some(s)) => parse_range(s)?,
        _ => return Err(CliError::Usage("give --d or --d-range".into())),
    };
    let (g0, g1) = match (g, g_range) {
        (Some(g), None) => (g, g),
        (None, Some(s)) => parse_range(s)?,
        _ => return Err(CliError::Usage("give --g or --g-range".into())),
    };
    let mut rows = Vec::new();
    let mut all_ok = true;
    for d in d0..=d1 {
        for g in g0..=g1 {
            let (rec, ok) = invariant_record(d, g, r)?;
            all_ok &= ok;
            rows.push(rec);
        }
    }
    let mut body = Map::new();
    if rows.len() == 1 {
        body.insert("record".into(), rows.pop().expect("one row"));
    } else {
        body.insert("table".into(), rows.into());
    }
    body.insert(
        "checks".into(),
        json!([check(
            "c2-formula",
            "the c2 number of the secant bundle matches its closed form (and the degree of V2 at r = 2)",
            status(all_ok),
            json!({}),
        )]),
    );
    emit_json("invariants", body, out)?;
    Ok(if all_ok {
        Outcome::Pass
    } else {
        Outcome::ClaimFailed("c2 formula mismatch".into())
    })
}

fn parse_z0(s: &str) -> CliResult<ComplexScalar> {
    let bad = || CliError::Usage(format!("bad point '{s}' (expected re,im)"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    let a: Rational = a.trim().parse().map_err(|_| bad())?;
    let b: Rational = b.trim().parse().map_err(|_| bad())?;
    Ok(ComplexScalar::new(a, b))
}

pub fn zeros(
    bundle: &str,
    count: usize,
    z0: Option<&str>,
    seed: u64,
    out: Option<&Path>,
) -> CliResult<Outcome> {
    let spec = parse_bundle(bundle)?;
    let rho = build_rho(spec)?;
    let points: Vec<Vec<Rational>> = match z0 {
        Some(s) => exact_zero_family(&rho.chart, &parse_z0(s)?)?
            .iter()
            .map(|v| primitive_integer_vector(v))
            .collect(),
        None => sample_zero_points(&rho.chart, count, seed)?,
    };
    for (i, p) in points.iter().enumerate() {
        if !rho.poly.evaluate(p)?.is_zero() {
            return Err(rrl::Error::Internal(format!("sampled point #{i} is not a zero")).into());
        }
    }
    emit_text(&write_point_list(&points, spec.real_dim()), out)?;
    Ok(Outcome::Pass)
}

fn summarize(doc: &Value, lines: &mut Vec<String>, checks: &mut Vec<Value>) {
    let command = doc["command"].as_str().unwrap_or("?");
    let subject = doc["bundle"]
        .as_str()
        .or(doc["poly_file"].as_str())
        .map(|b| format!(" {b}"))
        .unwrap_or_default();
    if let Some(cs) = doc["checks"].as_array() {
        for c in cs {
            lines.push(format!(
                "[{}] {command}{subject} {}: {}",
                c["status"].as_str().unwrap_or("?"),
                c["anchor"].as_str().unwrap_or("?"),
                c["claim"].as_str().unwrap_or("")
            ));
            let mut c = c.clone();
            c["source"] = json!(format!("{command}{subject}"));
            checks.push(c);
        }
    }
    match command {
        "sos" => {
            let kind = doc["kind"].as_str().unwrap_or("?");
            let valid = doc["verification"]["valid"].as_bool().unwrap_or(false);
            let status = match (kind, valid) {
                ("Undecided", _) | (_, false) => "fail",
                _ => "pass",
            };
            let claim = match kind {
                "SOSWitness" => format!(
                    "sum of {} squares, residual {}",
                    doc["square_count"], doc["residual"]
                ),
                "NonSOSExact" => format!(
                    "not a sum of squares (exact, {} witness, face dimension {}, {} zeros)",
                    doc["witness"]["type"].as_str().unwrap_or("?"),
                    doc["face_dim"],
                    doc["zero_count"]
                ),
                "NonSOSNumeric" => format!(
                    "not a sum of squares (numeric, dual margin {})",
                    doc["margin"]
                ),
                _ => format!("undecided: {}", doc["reason"].as_str().unwrap_or("")),
            };
            lines.push(format!(
                "[{status}] sos{subject} {kind} via {}: {claim}",
                doc["branch"].as_str().unwrap_or("?")
            ));
            checks.push(json!({
                "anchor": "sos-verdict",
                "claim": claim,
                "status": status,
                "source": format!("sos{subject}"),
                "detail": {"kind": kind, "branch": doc["branch"], "verified": valid},
            }));
        }
        "invariants" => {
            let rows: Vec<Value> = match (&doc["table"], &doc["record"]) {
                (Value::Array(t), _) => t.clone(),
                (_, r @ Value::Object(_)) => vec![r.clone()],
                _ => Vec::new(),
            };
            for r in rows {
                lines.push(format!(
                    "    d={} g={} r={}  c2={}  degree_v2={}  obstructed={}",
                    r["d"],
                    r["g"],
                    r["r"],
                    r["c2"].as_str().unwrap_or("?"),
                    r["degree_v2"],
                    r["obstructed"]
                ));
            }
        }
        _ => {}
    }
}

pub fn report(inputs: &[PathBuf], out: Option<&Path>) -> CliResult<Outcome> {
    let mut lines = Vec::new();
    let mut checks = Vec::new();
    let mut sources = Vec::new();
    for path in inputs {
        let text = read_file(path)?;
        let doc: Value = serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("{} is not JSON: {e}", path.display())))?;
        if doc["schema_version"].as_u64().is_none() {
            return Err(CliError::Usage(format!(
                "{} is not an rrl report",
                path.display()
            )));
        }
        sources.push(json!({"path": path.display().to_string(), "command": doc["command"]}));
        summarize(&doc, &mut lines, &mut checks);
    }
    let failed = checks.iter().filter(|c| c["status"] == "fail").count();
    let findings = checks.iter().filter(|c| c["status"] == "finding").count();
    let overall = if failed == 0 { "pass" } else { "fail" };
    lines.push(format!(
        "overall: {overall} ({} checks, {failed} failed, {findings} findings)",
        checks.len()
    ));
    let mut body = Map::new();
    body.insert("inputs".into(), sources.into());
    body.insert("overall".into(), overall.into());
    body.insert("checks".into(), checks.into());
    body.insert("summary".into(), json!(lines));
    emit_json("report", body, out)?;
    if out.is_some() {
        println!("{}", lines.join("\n"));
    }
    Ok(if failed == 0 {
        Outcome::Pass
    } else {
        Outcome::ClaimFailed(format!("{failed} checks failed"))
    })
}
