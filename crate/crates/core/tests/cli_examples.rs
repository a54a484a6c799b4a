use odeseries::cli::document::OdeDocument;
use odeseries::cli::run;
use serde_json::{json, Value};
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};

static COUNTER: AtomicUsize = AtomicUsize::new(0);

fn write_doc(doc: &Value) -> PathBuf {
    let n = COUNTER.fetch_add(1, Ordering::SeqCst);
    let path = std::env::temp_dir().join(format!("odeseries-cli-{}-{n}.json", std::process::id()));
    std::fs::write(&path, serde_json::to_string(doc).unwrap()).unwrap();
    path
}

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Outcome {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("{e}: {}\n{}", self.stdout, self.stderr))
    }
}

fn invoke(args: &[&str]) -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("odeseries").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Outcome { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

fn on(cmd: &str, doc: &Value, extra: &[&str]) -> Outcome {
    let path = write_doc(doc);
    let mut args = vec![cmd, path.to_str().unwrap()];
    args.extend_from_slice(extra);
    invoke(&args)
}

fn divergent_second_order() -> Value {
    json!({"format": 1, "order": 2, "coeffs": [["0", "0", "1"], ["-1"], ["-1/2"]]})
}

fn euler() -> Value {
    json!({"format": 1, "order": 2, "coeffs": [[0, 0, 1], [], [1]], "options": {"trunc": 8}})
}

fn frobenius(a: &[&str], b: &[&str], c: &[&str], trunc: usize) -> Value {
    json!({"format": 1, "order": 3, "form": "frobenius", "coeffs": [a, b, c], "options": {"trunc": trunc}})
}

#[test]
fn classify_reports() {
    let r = on("classify", &divergent_second_order(), &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.json()["point"]["kind"], "IrregularSingular");

    let r = on("classify", &euler(), &[]).json();
    assert_eq!(r["point"]["kind"], "RegularSingular");
    assert_eq!(r["infinity"]["kind"], "RegularSingular");
    assert_eq!(r["euler"]["is_euler"], true);

    let r = on("classify", &euler(), &["--at-infinity"]).json();
    assert_eq!(r["point"]["kind"], "RegularSingular");
    let r = on("classify", &euler(), &["--point", "2"]).json();
    assert_eq!(r["point"]["kind"], "Ordinary");
}

#[test]
fn validation_failures_exit_with_two() {
    let r = on("classify", &json!({"format": 1, "order": 2, "coeffs": []}), &[]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("coeffs"), "{}", r.stderr);
    let r = on("classify", &json!({"format": 1, "order": 2, "coeffs": [["1/0"], [], ["1"]]}), &[]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("coeffs[0][0]"), "{}", r.stderr);
    let r = on("classify", &json!({"format": 1, "order": 4, "coeffs": [[1], [], [], [], []]}), &[]);
    assert_eq!(r.code, 2);
    let path = std::env::temp_dir().join(format!("odeseries-cli-{}-broken.json", std::process::id()));
    std::fs::write(&path, "{\"format\": 1,\n \"order\": 2,\n \"coeffs\": [[1] [2]]}").unwrap();
    let r = invoke(&["classify", path.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("line 3"), "{}", r.stderr);
    assert_eq!(invoke(&["no-such-command"]).code, 2);
}

#[test]
fn solve_complex_roots() {
    let r = on("solve", &frobenius(&["1"], &["1"], &["0", "0", "0", "1"], 12), &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = r.json();
    assert_eq!(v["solutions"].as_array().unwrap().len(), 3);
    let roots = v["indicial"]["roots"].as_array().unwrap();
    assert!(roots.contains(&json!(["1", "1"])) && roots.contains(&json!(["1", "-1"])) && roots.contains(&json!("0")), "{roots:?}");
    for res in v["residuals"].as_array().unwrap() {
        assert!(res["valuation"].as_i64().unwrap() >= 12 - 3);
    }
}

#[test]
fn solve_logarithmic_case() {
    let v = on("solve", &frobenius(&["1"], &["0", "1"], &["0", "1"], 10), &[]).json();
    assert_eq!(v["case"], json!({"CaseII": 1}));
    let logs = |i: usize| v["solutions"][i]["terms"].as_array().unwrap().iter().map(|t| t["log_power"].as_u64().unwrap()).max().unwrap();
    assert_eq!(logs(0), 0);
    assert!(logs(1) >= 1 && logs(2) >= 1);
}

#[test]
fn solve_at_ordinary_point() {
    let doc = json!({"format": 1, "order": 2, "point": "1", "coeffs": [["1"], [], ["1"]], "options": {"trunc": 10}});
    let v = on("solve", &doc, &[]).json();
    let sols = v["solutions"].as_array().unwrap();
    assert_eq!(sols.len(), 2);
    assert!(sols.iter().all(|s| s["terms"].as_array().unwrap().iter().all(|t| t["log_power"] == 0)));
}

#[test]
fn solve_refuses_irregular_point() {
    let r = on("solve", &divergent_second_order(), &[]);
    assert_eq!(r.code, 3);
    assert!(r.stderr.contains("probe"), "{}", r.stderr);
}

#[test]
fn probe_echoes_recurrence() {
    let doc = json!({"format": 1, "order": 3, "coeffs": [["0", "0", "0", "1"], ["0", "0", "-1"], ["-1"], ["-1/2"]], "options": {"trunc": 30}});
    let v = on("probe", &doc, &[]).json();
    assert_eq!(v["status"], "DivergentFormal");
    assert_eq!(v["recurrence"], json!([["-1", "-1"], ["-1/2", "3", "-4", "1"]]));
    assert!(v["radius_estimate"].as_f64().unwrap() < 1e-3);
}

#[test]
fn euler_closed_form() {
    let doc = json!({"format": 1, "order": 3, "coeffs": [["0", "0", "0", "1"], [], ["0", "-3"], ["3"]], "options": {"trunc": 6}});
    let v = on("euler", &doc, &[]).json();
    assert_eq!(v["roots"], json!(["3", "1", "-1"]));
    let r = on("euler", &divergent_second_order(), &[]);
    assert_eq!(r.code, 3);
}

#[test]
fn holonomy_of_euler_equation() {
    let v = on("holonomy", &euler(), &[]).json();
    let gens = v["generators"].as_array().unwrap();
    assert_eq!(gens.len(), 1);
    let big = (2.0 * std::f64::consts::PI * 3f64.sqrt()).exp();
    let mut mods: Vec<f64> = gens[0]["multipliers"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| m[0].as_f64().unwrap().hypot(m[1].as_f64().unwrap()))
        .collect();
    mods.sort_by(f64::total_cmp);
    assert!((mods[0] * big - 1.0).abs() < 1e-4 && (mods[1] / big - 1.0).abs() < 1e-4, "{mods:?}");
    let w = on("holonomy", &euler(), &["--inverse", "--base", "0.6,0.8"]).json();
    assert_eq!(w["variable"], "u/u'");
    assert_eq!(w["base"], json!([0.6, 0.8]));
}

/// `Σ (−1)^k (x/3)^{3k} / (k!)³`.
fn bessel_zero_oracle(x: f64) -> f64 {
    let mut term = 1.0;
    let mut total = 0.0;
    for k in 0..40 {
        total += term;
        let k1 = (k + 1) as f64;
        term *= -(x / 3.0).powi(3) / (k1 * k1 * k1);
    }
    total
}

#[test]
fn eval_table_matches_independent_summation() {
    let doc = frobenius(&["3"], &["1"], &["0", "0", "0", "1"], 30);
    let v = on("eval", &doc, &["--from", "0", "--to", "3", "--points", "31"]).json();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 31);
    for row in rows {
        let x = row["x"].as_f64().unwrap();
        let value = &row["value"];
        let (re, im) = (value[0].as_f64().unwrap(), value[1].as_f64().unwrap());
        assert!((re - bessel_zero_oracle(x)).abs() < 1e-12 && im == 0.0, "x = {x}: {re} vs {}", bessel_zero_oracle(x));
        assert!(row["tail"].as_f64().unwrap() < 1e-6);
    }
    let text = on("eval", &doc, &["--to", "3", "--points", "4", "--table"]).stdout;
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines.iter().all(|l| l.split('\t').count() == 2));
}

#[test]
fn bundles_revalidate() {
    for doc in [frobenius(&["3"], &["1"], &["0", "0", "0", "1"], 12), frobenius(&["1"], &["0", "1"], &["0", "1"], 10), euler()] {
        let bundle = on("solve", &doc, &[]).json();
        let r = on("residual", &bundle, &[]);
        assert_eq!(r.code, 0, "{}", r.stderr);
        assert_eq!(r.json()["reproduced"], true);

        let mut tampered = bundle.clone();
        let coeffs = tampered["solutions"][0]["terms"][0]["coeffs"].as_array_mut().unwrap();
        if coeffs.len() > 1 {
            coeffs[1] = json!("7");
        } else {
            coeffs.push(json!("7"));
        }
        assert_eq!(on("residual", &tampered, &[]).code, 3);
    }
}

#[test]
fn particular_solution_bundle() {
    let doc = json!({"format": 1, "order": 3, "coeffs": [["0", "0", "0", "1"], [], [], []], "rhs": ["0", "0", "0", "1"], "options": {"trunc": 8}});
    let v = on("particular", &doc, &[]).json();
    let terms = v["particular"]["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 1);
    assert_eq!(terms[0]["exponent"], "3");
    assert_eq!(terms[0]["coeffs"], json!(["1/6"]));
    assert_eq!(on("residual", &v, &[]).json()["reproduced"], true);
    assert_eq!(on("particular", &euler(), &[]).code, 2);
}

#[test]
fn documents_round_trip_canonically() {
    let docs = [
        euler(),
        divergent_second_order(),
        frobenius(&["1"], &["0", "1"], &["0", "1"], 10),
        json!({"format": 1, "order": 2, "point": 0.5, "coeffs": [[[1.0, 2.0]], [0.25], ["1/3"]], "rhs": [["1", "-2"]], "options": {"mode": "float", "trunc": 5}}),
    ];
    for raw in docs {
        let doc = OdeDocument::parse(&raw.to_string()).unwrap();
        let canon = doc.canonical().unwrap();
        let text = serde_json::to_string(&canon).unwrap();
        let again = OdeDocument::parse(&text).unwrap();
        assert_eq!(again, canon);
        assert_eq!(again.canonical().unwrap(), canon);
        assert_eq!(again.to_ode().unwrap(), doc.to_ode().unwrap());
    }
}

#[test]
fn batches_produce_arrays() {
    let (a, b) = (write_doc(&euler()), write_doc(&divergent_second_order()));
    let r = invoke(&["classify", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    let v = r.json();
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert_eq!(v[1]["point"]["kind"], "IrregularSingular");
    let r = invoke(&["solve", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(r.code, 3);
    assert!(r.json().is_object());
}
