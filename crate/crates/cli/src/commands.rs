use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde_json::{json, Value};

use qgenocchi::closed::{s_poly_closed, s_poly_exact, ClosedVariant};
use qgenocchi::identities::{
    all_identities_pass, run_audit_selected, verify_q1_limit, IdentityGroup, LimitParams, LimitTarget, LIMIT_TOL,
};
use qgenocchi::report::{complex_value, exact_value, float_value, format_float};
use qgenocchi::{s_poly_series, zeta_eval, EvalPoint, ExactParams, ExactScalar, ModelParams, SeriesConfig};

use crate::args::{
    EvalArgs, FormatArg, GridId, IdentityArg, LimitArgs, MethodArg, ModelArgs, Scalar, SeriesArgs, TableArgs,
    TargetArg, VariantArg, VerifyArgs, ZetaArgs,
};
use crate::envelope::{ErrorRecord, Exit, OutputEnvelope};

/// What a command writes to stdout, and how it exits.
pub struct Outcome {
    pub stdout: String,
    pub exit: Exit,
    /// Human-readable diagnostics for stderr.
    pub diagnostics: Vec<String>,
}

impl Outcome {
    fn from_envelope(env: OutputEnvelope) -> Self {
        let diagnostics = env.errors.iter().map(|e| format!("error: {}", e.message)).collect();
        Outcome { stdout: env.render(), exit: env.exit(), diagnostics }
    }

    pub fn usage(msg: String) -> Self {
        Outcome { stdout: String::new(), exit: Exit::Usage, diagnostics: vec![format!("error: {msg}")] }
    }
}

fn closed_variant(v: VariantArg) -> ClosedVariant {
    match v {
        VariantArg::Printed => ClosedVariant::Printed,
        VariantArg::Corrected => ClosedVariant::Corrected,
    }
}

fn variant_str(v: VariantArg) -> &'static str {
    closed_variant(v).as_str()
}

fn model_params_json(m: &ModelArgs) -> serde_json::Map<String, Value> {
    let mut p = serde_json::Map::new();
    p.insert("q".into(), Value::String(m.q.text.clone()));
    p.insert("beta".into(), Value::String(m.beta.text.clone()));
    p.insert("a".into(), Value::String(m.a.text.clone()));
    p.insert("b".into(), json!(m.b));
    p.insert("k".into(), json!(m.k));
    p
}

fn series_config(s: &SeriesArgs) -> qgenocchi::Result<SeriesConfig> {
    SeriesConfig::new(s.tol, s.max_terms)
}

enum Evaluator {
    Series(ModelParams, SeriesConfig),
    Closed(ModelParams, ClosedVariant),
    Exact(ExactParams, ClosedVariant),
}

struct Cell {
    value: Complex64,
    exact: Option<ExactScalar>,
    bound: f64,
    method: &'static str,
    terms_used: u64,
    converged: bool,
}

impl Evaluator {
    fn new(m: &ModelArgs, method: MethodArg, variant: VariantArg, s: &SeriesArgs) -> qgenocchi::Result<Self> {
        let variant = closed_variant(variant);
        if method == MethodArg::Exact {
            let p = ExactParams::new(m.q.exact.clone(), m.beta.exact(), m.a.exact.clone(), m.b, m.k)?;
            return Ok(Evaluator::Exact(p, variant));
        }
        let p = ModelParams::new(m.q.f64(), m.beta.c64(), m.a.f64(), m.b, m.k)?;
        Ok(match method {
            MethodArg::Series => Evaluator::Series(p, series_config(s)?),
            _ => Evaluator::Closed(p, variant),
        })
    }

    fn eval(&self, n: u32, x: &Scalar) -> qgenocchi::Result<Cell> {
        match self {
            Evaluator::Series(p, cfg) => {
                let r = s_poly_series(p, &EvalPoint::new(n, x.f64())?, cfg)?;
                Ok(Cell {
                    value: r.value.value,
                    exact: None,
                    bound: r.value.abs_error_bound,
                    method: r.value.method.as_str(),
                    terms_used: r.value.terms_used,
                    converged: r.converged,
                })
            }
            Evaluator::Closed(p, v) => {
                let r = s_poly_closed(p, &EvalPoint::new(n, x.f64())?, *v)?;
                Ok(Cell {
                    value: r.value,
                    exact: None,
                    bound: r.abs_error_bound,
                    method: r.method.as_str(),
                    terms_used: r.terms_used,
                    converged: true,
                })
            }
            Evaluator::Exact(p, v) => {
                let xi = integer_x(&x.exact)?;
                let e = s_poly_exact(p, n, xi, *v)?;
                let value = e.to_complex64();
                Ok(Cell {
                    value,
                    bound: f64::EPSILON * value.norm(),
                    exact: Some(e),
                    method: "exact",
                    terms_used: n.saturating_sub(p.k) as u64 + 1,
                    converged: true,
                })
            }
        }
    }
}

fn integer_x(x: &BigRational) -> qgenocchi::Result<u32> {
    if !x.is_integer() || x.is_negative() {
        return Err(qgenocchi::Error::Domain(format!("exact method needs integer x >= 0, got {x}")));
    }
    x.to_integer()
        .to_u32()
        .ok_or_else(|| qgenocchi::Error::Domain(format!("x = {x} too large")))
}

fn cell_json(n: u32, x: &Scalar, c: &Cell) -> Value {
    let mut m = serde_json::Map::new();
    m.insert("n".into(), json!(n));
    m.insert("x".into(), float_value(x.f64()));
    m.insert("value".into(), complex_value(c.value));
    m.insert("abs_error_bound".into(), float_value(c.bound));
    m.insert("method".into(), Value::String(c.method.into()));
    m.insert("terms_used".into(), json!(c.terms_used));
    m.insert("converged".into(), Value::Bool(c.converged));
    if let Some(e) = &c.exact {
        m.insert("exact".into(), exact_value(e));
    }
    Value::Object(m)
}

fn budget_error(at: Value) -> ErrorRecord {
    ErrorRecord {
        kind: "budget_exceeded",
        message: "series term budget exhausted before the tail bound met tol".into(),
        at: Some(at),
    }
}

pub fn eval(args: &EvalArgs) -> Outcome {
    let mut params = model_params_json(&args.model);
    params.insert("n".into(), json!(args.n));
    params.insert("x".into(), Value::String(args.x.text.clone()));
    params.insert("method".into(), Value::String(args.method.as_str().into()));
    params.insert("variant".into(), Value::String(variant_str(args.variant).into()));
    params.insert("tol".into(), float_value(args.series.tol));
    params.insert("max_terms".into(), json!(args.series.max_terms));
    let mut env = OutputEnvelope::new("eval", Value::Object(params));
    let cell = Evaluator::new(&args.model, args.method, args.variant, &args.series)
        .and_then(|ev| ev.eval(args.n, &args.x));
    match cell {
        Ok(c) => {
            if !c.converged {
                env.errors.push(budget_error(json!({"n": args.n})));
            }
            env.results = cell_json(args.n, &args.x, &c);
        }
        Err(e) => env.errors.push(ErrorRecord::from_core(&e, None)),
    }
    Outcome::from_envelope(env)
}

pub fn table(args: &TableArgs) -> Outcome {
    let xs: Vec<Scalar> = args
        .x_grid
        .points()
        .into_iter()
        .map(|x| {
            let exact = BigRational::from_float(x).expect("grid points are finite");
            Scalar { text: format_float(x), exact }
        })
        .collect();
    let mut params = model_params_json(&args.model);
    params.insert("n_max".into(), json!(args.n_max));
    params.insert(
        "x_grid".into(),
        json!({
            "start": float_value(args.x_grid.start),
            "stop": float_value(args.x_grid.stop),
            "step": float_value(args.x_grid.step),
        }),
    );
    params.insert("method".into(), Value::String(args.method.as_str().into()));
    params.insert("variant".into(), Value::String(variant_str(args.variant).into()));
    params.insert("format".into(), Value::String(if args.format == FormatArg::Csv { "csv" } else { "json" }.into()));
    params.insert("tol".into(), float_value(args.series.tol));
    params.insert("max_terms".into(), json!(args.series.max_terms));
    let mut env = OutputEnvelope::new("table", Value::Object(params));

    let mut csv = String::from("n,x,value_re,value_im,err_bound,method\n");
    let mut rows = Vec::new();
    match Evaluator::new(&args.model, args.method, args.variant, &args.series) {
        Err(e) => env.errors.push(ErrorRecord::from_core(&e, None)),
        Ok(ev) => {
            for n in 0..=args.n_max {
                for x in &xs {
                    let at = json!({"n": n, "x": float_value(x.f64())});
                    match ev.eval(n, x) {
                        Ok(c) => {
                            if !c.converged {
                                env.errors.push(budget_error(at));
                            }
                            csv.push_str(&format!(
                                "{n},{},{},{},{},{}\n",
                                format_float(x.f64()),
                                format_float(c.value.re),
                                format_float(c.value.im),
                                format_float(c.bound),
                                c.method
                            ));
                            rows.push(cell_json(n, x, &c));
                        }
                        Err(e) => {
                            csv.push_str(&format!("{n},{},,,,\n", format_float(x.f64())));
                            env.errors.push(ErrorRecord::from_core(&e, Some(at)));
                            rows.push(json!({"n": n, "x": float_value(x.f64())}));
                        }
                    }
                }
            }
        }
    }
    env.results = json!({ "rows": rows });
    if args.format == FormatArg::Json {
        return Outcome::from_envelope(env);
    }
    let mut out = Outcome::from_envelope(env);
    out.stdout = csv;
    out
}

pub fn verify(args: &VerifyArgs) -> Outcome {
    let grid = match args.grid {
        GridId::Smoke => "smoke",
        GridId::Full => "full",
    };
    let groups: Vec<IdentityGroup> = match args.identity {
        IdentityArg::All => IdentityGroup::ALL.to_vec(),
        IdentityArg::Expansion => vec![IdentityGroup::Expansion],
        IdentityArg::Symmetry => vec![IdentityGroup::Symmetry],
        IdentityArg::Difference => vec![IdentityGroup::Difference],
        IdentityArg::Distribution => vec![IdentityGroup::Distribution],
        IdentityArg::Specialization => vec![IdentityGroup::Specialization],
        IdentityArg::Limit => vec![IdentityGroup::Limit],
        IdentityArg::Interpolation => vec![IdentityGroup::Interpolation],
    };
    let identity = format!("{:?}", args.identity).to_lowercase();
    let params = json!({"identity": identity, "grid": grid, "report": "json"});
    let mut env = OutputEnvelope::new("verify", params);
    match run_audit_selected(grid, &groups) {
        Ok(report) => {
            if !all_identities_pass(&report) {
                let failing: Vec<&str> = report
                    .identities()
                    .into_iter()
                    .filter(|id| report.passing_variants(*id).is_empty())
                    .map(|id| id.as_str())
                    .collect();
                env.errors.push(ErrorRecord {
                    kind: "audit_failure",
                    message: format!("no fully passing variant for: {}", failing.join(", ")),
                    at: None,
                });
            }
            env.results = report.to_json();
        }
        Err(e) => env.errors.push(ErrorRecord::from_core(&e, None)),
    }
    Outcome::from_envelope(env)
}

pub fn zeta(args: &ZetaArgs) -> Outcome {
    let s_values: Vec<Complex64> = match &args.s_grid {
        Some(g) => g.points().into_iter().map(|s| Complex64::new(s, 0.0)).collect(),
        None => args.s.iter().map(|s| s.c64()).collect(),
    };
    let mut params = model_params_json(&args.model);
    params.insert("s".into(), Value::Array(s_values.iter().map(|&s| complex_value(s)).collect()));
    params.insert("x".into(), Value::String(args.x.text.clone()));
    params.insert("tol".into(), float_value(args.series.tol));
    params.insert("max_terms".into(), json!(args.series.max_terms));
    let mut env = OutputEnvelope::new("zeta", Value::Object(params));
    let setup = ModelParams::new(args.model.q.f64(), args.model.beta.c64(), args.model.a.f64(), args.model.b, args.model.k)
        .and_then(|p| series_config(&args.series).map(|cfg| (p, cfg)));
    let mut points = Vec::new();
    match setup {
        Err(e) => env.errors.push(ErrorRecord::from_core(&e, None)),
        Ok((p, cfg)) => {
            for &s in &s_values {
                match zeta_eval(&p, s, args.x.f64(), &cfg) {
                    Ok(z) => {
                        if !z.converged {
                            env.errors.push(budget_error(json!({"s": complex_value(s)})));
                        }
                        points.push(json!({
                            "s": complex_value(s),
                            "value": complex_value(z.value),
                            "abs_error_bound": float_value(z.abs_error_bound),
                            "terms_used": z.terms_used,
                            "converged": z.converged,
                        }));
                    }
                    Err(e) => env.errors.push(ErrorRecord::from_core(&e, Some(json!({"s": complex_value(s)})))),
                }
            }
        }
    }
    env.results = json!({ "points": points });
    Outcome::from_envelope(env)
}

pub fn limit(args: &LimitArgs) -> Outcome {
    let (target, lp) = match args.target {
        TargetArg::Ozden => {
            let (Some(beta), Some(a), Some(b), Some(k)) = (&args.beta, &args.a, args.b, args.k) else {
                return Outcome::usage("--target ozden needs --beta, --a, --b and --k".into());
            };
            (LimitTarget::Ozden, LimitParams { beta: beta.exact.clone(), a: a.exact.clone(), b, k })
        }
        TargetArg::Euler | TargetArg::Genocchi => {
            if args.beta.is_some() || args.a.is_some() || args.b.is_some() || args.k.is_some() {
                return Outcome::usage("model flags apply to --target ozden only".into());
            }
            let t = if args.target == TargetArg::Euler { LimitTarget::Euler } else { LimitTarget::Genocchi };
            (t, LimitParams::genocchi())
        }
    };
    let target_str = match target {
        LimitTarget::Ozden => "ozden",
        LimitTarget::Euler => "euler",
        LimitTarget::Genocchi => "genocchi",
    };
    let params = json!({
        "target": target_str,
        "beta": lp.beta.to_string(),
        "a": lp.a.to_string(),
        "b": lp.b,
        "k": lp.k,
        "n": args.n,
        "x": args.x,
        "variant": variant_str(args.variant),
    });
    let mut env = OutputEnvelope::new("limit", params);
    match verify_q1_limit(target, args.n, args.x, &lp, closed_variant(args.variant)) {
        Ok(out) => {
            let to_f = |r: &BigRational| r.to_f64().unwrap_or(f64::NAN);
            let diff = to_f(&(&out.extrapolant - &out.reference)).abs();
            if !out.verdict.passed {
                env.errors.push(ErrorRecord {
                    kind: "limit_mismatch",
                    message: format!("extrapolant differs from reference by {diff:e}"),
                    at: None,
                });
            }
            env.results = json!({
                "extrapolant": float_value(to_f(&out.extrapolant)),
                "reference": float_value(to_f(&out.reference)),
                "reference_exact": out.reference.to_string(),
                "difference": float_value(diff),
                "error_estimate": float_value(to_f(&out.error_estimate)),
                "tol": float_value(LIMIT_TOL),
                "passed": out.verdict.passed,
                "ladder": ladder_json(),
            });
        }
        Err(e) => env.errors.push(ErrorRecord::from_core(&e, None)),
    }
    Outcome::from_envelope(env)
}

fn ladder_json() -> Value {
    let (lo, hi) = qgenocchi::identities::LIMIT_LADDER;
    let qs: Vec<String> = (lo..=hi)
        .map(|j| {
            let d = BigInt::from(1u64 << j);
            BigRational::new(&d - 1, d).to_string()
        })
        .collect();
    json!({ "q": qs, "order": qgenocchi::identities::RICHARDSON_ORDER })
}
