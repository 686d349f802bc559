//! Committed parameter grids and the audit runner.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use super::verdict::{IdentityId, IdentityVerdict, PointDesc, VariantId, VerdictValue};
use super::{
    exact_point, float_point, verify_closed_form, verify_difference, verify_distribution, verify_expansion,
    verify_expansion_float, verify_q1_limit, verify_specialization, verify_symmetry, verify_umbral_difference,
    verify_umbral_expansion, FormVariant, IndexVariant, LimitParams, LimitTarget,
};
use crate::closed::{ClosedVariant, ExpansionVariant};
use crate::error::{Error, Result};
use crate::exact::{rational, ExactParams, ExactScalar};
use crate::qcore::{EvalPoint, ModelParams};
use crate::report::{complex_value, exact_value, float_value};
use crate::series::SeriesConfig;
use crate::zeta::verify_interpolation;

pub const GRID_IDS: [&str; 2] = ["smoke", "full"];

/// Groups of identities selectable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdentityGroup {
    Expansion,
    Symmetry,
    Difference,
    Distribution,
    Specialization,
    Limit,
    Interpolation,
}

impl IdentityGroup {
    pub const ALL: [IdentityGroup; 7] = [
        IdentityGroup::Expansion,
        IdentityGroup::Symmetry,
        IdentityGroup::Difference,
        IdentityGroup::Distribution,
        IdentityGroup::Specialization,
        IdentityGroup::Limit,
        IdentityGroup::Interpolation,
    ];
}

/// A point whose evaluation failed (typically a pole); excluded from the
/// pass-rate denominators.
#[derive(Debug, Clone, PartialEq)]
pub struct AuditError {
    pub identity: IdentityId,
    pub variant: VariantId,
    pub point: PointDesc,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub identity: IdentityId,
    pub variant: VariantId,
    pub total: usize,
    pub passed: usize,
    pub errors: usize,
    pub max_abs_diff: f64,
}

impl SummaryRow {
    pub fn pass_rate(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.passed as f64 / self.total as f64
        }
    }

    pub fn full_pass(&self) -> bool {
        self.total > 0 && self.passed == self.total
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    pub grid_id: String,
    /// The closed-form variant that agreed with the series everywhere, used
    /// for every subsequent evaluation of `S`.
    pub closed_variant: Option<ClosedVariant>,
    pub verdicts: Vec<IdentityVerdict>,
    pub summary: Vec<SummaryRow>,
    pub errors: Vec<AuditError>,
}

impl AuditReport {
    pub fn row(&self, identity: IdentityId, variant: VariantId) -> Option<&SummaryRow> {
        self.summary.iter().find(|r| r.identity == identity && r.variant == variant)
    }

    /// Variants of `identity` passing at every evaluated point.
    pub fn passing_variants(&self, identity: IdentityId) -> Vec<VariantId> {
        self.summary
            .iter()
            .filter(|r| r.identity == identity && r.full_pass())
            .map(|r| r.variant)
            .collect()
    }

    pub fn identities(&self) -> Vec<IdentityId> {
        let mut ids: Vec<_> = self.summary.iter().map(|r| r.identity).collect();
        ids.dedup();
        ids
    }

    pub fn to_json(&self) -> Value {
        let summary: Vec<Value> = self
            .summary
            .iter()
            .map(|r| {
                json!({
                    "identity": r.identity.as_str(),
                    "variant": r.variant.as_str(),
                    "total": r.total,
                    "passed": r.passed,
                    "errors": r.errors,
                    "pass_rate": float_value(r.pass_rate()),
                    "full_pass": r.full_pass(),
                    "max_abs_diff": float_value(r.max_abs_diff),
                })
            })
            .collect();
        let verdicts: Vec<Value> = self.verdicts.iter().map(verdict_json).collect();
        let errors: Vec<Value> = self
            .errors
            .iter()
            .map(|e| {
                json!({
                    "identity": e.identity.as_str(),
                    "variant": e.variant.as_str(),
                    "point": serde_json::to_value(&e.point).expect("point serializes"),
                    "error": e.error,
                })
            })
            .collect();
        let mut m = Map::new();
        m.insert("grid_id".into(), Value::String(self.grid_id.clone()));
        m.insert(
            "closed_variant".into(),
            self.closed_variant.map(|v| Value::String(v.as_str().into())).unwrap_or(Value::Null),
        );
        m.insert("summary".into(), Value::Array(summary));
        m.insert("verdicts".into(), Value::Array(verdicts));
        m.insert("errors".into(), Value::Array(errors));
        Value::Object(m)
    }
}

fn verdict_value_json(v: &VerdictValue) -> Value {
    match v {
        VerdictValue::Exact(e) => exact_value(e),
        VerdictValue::Float(z) => complex_value(*z),
    }
}

fn verdict_json(v: &IdentityVerdict) -> Value {
    json!({
        "identity": v.identity.as_str(),
        "variant": v.variant.as_str(),
        "mode": match v.mode { super::Mode::Exact => "exact", super::Mode::Float => "float" },
        "point": serde_json::to_value(&v.point).expect("point serializes"),
        "lhs": verdict_value_json(&v.lhs),
        "rhs": verdict_value_json(&v.rhs),
        "abs_diff": float_value(v.abs_diff),
        "passed": v.passed,
        "tol": v.tol.map(float_value).unwrap_or(Value::Null),
    })
}

/// True when a closed-form variant was adjudicated and every audited
/// identity has at least one variant passing at every point.
pub fn all_identities_pass(report: &AuditReport) -> bool {
    report.closed_variant.is_some()
        && report.identities().into_iter().all(|id| !report.passing_variants(id).is_empty())
}

struct Grid {
    oracle: Vec<(ModelParams, EvalPoint)>,
    exact_params: Vec<ExactParams>,
    exact_n: u32,
    exact_x: Vec<u32>,
    dist_d: Vec<u32>,
    expansion_float: Vec<(ModelParams, EvalPoint)>,
    spec_q: Vec<f64>,
    spec_n: u32,
    spec_x: Vec<f64>,
    interp: Vec<(ModelParams, u32, f64)>,
    limit_params: Vec<(LimitParams, u32)>,
    limit_n: u32,
    classical_x: Vec<u32>,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn oracle_grid(qs: &[f64], ks: &[u32], bs: &[i32], as_: &[f64], cs: &[Complex64], n_max: u32, xs: &[f64]) -> Vec<(ModelParams, EvalPoint)> {
    let mut out = Vec::new();
    for &q in qs {
        for &k in ks {
            for &b in bs {
                for &a in as_ {
                    for &cc in cs {
                        // beta = a c^sign(b) keeps |(beta/a)^b| = |c|^|b| < 1
                        let beta = if b > 0 { cc * a } else { cc.inv() * a };
                        let p = ModelParams::new(q, beta, a, b, k).expect("grid params are admissible");
                        for n in 0..=n_max {
                            for &x in xs {
                                out.push((p, EvalPoint { n, x }));
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

fn exact_sets(qs: &[(i64, i64)], sets: &[((i64, i64), (i64, i64), (i64, i64), i32)], ks: &[u32]) -> Vec<ExactParams> {
    let mut out = Vec::new();
    for &(qn, qd) in qs {
        for &(re, im, a, b) in sets {
            for &k in ks {
                let beta = ExactScalar::new(rational(re.0, re.1), rational(im.0, im.1));
                out.push(ExactParams::new(rational(qn, qd), beta, rational(a.0, a.1), b, k).expect("grid params are admissible"));
            }
        }
    }
    out
}

fn limit_set(list: &[((i64, i64), (i64, i64), i32, u32, u32)]) -> Vec<(LimitParams, u32)> {
    list.iter()
        .map(|&(beta, a, b, k, x)| (LimitParams { beta: rational(beta.0, beta.1), a: rational(a.0, a.1), b, k }, x))
        .collect()
}

const Z: (i64, i64) = (0, 1);

const EXACT_SETS: [((i64, i64), (i64, i64), (i64, i64), i32); 8] = [
    ((1, 3), Z, (1, 1), 1),
    ((1, 5), Z, (2, 1), 1),
    ((1, 3), Z, (1, 1), 2),
    ((-1, 2), Z, (3, 2), 1),
    ((1, 4), (1, 4), (1, 1), 1),
    ((3, 1), Z, (2, 1), -1),
    ((5, 2), Z, (1, 1), 1),
    ((2, 3), Z, (-1, 1), 3),
];

const LIMIT_SET: [((i64, i64), (i64, i64), i32, u32, u32); 20] = [
    ((1, 3), (1, 1), 1, 1, 0),
    ((1, 3), (1, 1), 1, 1, 1),
    ((1, 5), (2, 1), 1, 1, 0),
    ((1, 5), (2, 1), 1, 2, 1),
    ((1, 3), (1, 1), 2, 1, 0),
    ((1, 3), (1, 1), 2, 2, 2),
    ((-1, 2), (3, 2), 1, 1, 0),
    ((-1, 2), (3, 2), 1, 3, 1),
    ((4, 1), (1, 1), -1, 1, 0),
    ((3, 1), (2, 1), -1, 2, 1),
    ((5, 2), (1, 1), 1, 1, 0),
    ((5, 2), (1, 1), 1, 2, 2),
    ((2, 3), (-1, 1), 3, 1, 0),
    ((2, 3), (-1, 1), 3, 3, 1),
    ((1, 1), (-1, 1), 1, 1, 0),
    ((1, 1), (-1, 1), 1, 2, 1),
    ((1, 2), (1, 1), -1, 1, 0),
    ((-3, 1), (1, 1), 1, 1, 1),
    ((1, 4), (1, 2), 2, 2, 0),
    ((3, 4), (-1, 1), 1, 3, 2),
];

fn interp_grid(params: &[(f64, Complex64, f64, i32)], ks: &[u32], n_max: u32, xs: &[f64]) -> Vec<(ModelParams, u32, f64)> {
    let mut out = Vec::new();
    for &(q, beta, a, b) in params {
        for &k in ks {
            let p = ModelParams::new(q, beta, a, b, k).expect("grid params are admissible");
            for n in k..=n_max {
                for &x in xs {
                    out.push((p, n, x));
                }
            }
        }
    }
    out
}

fn grid(grid_id: &str) -> Result<Grid> {
    let interp_params = [
        (0.5, c(1.0 / 3.0, 0.0), 1.0, 1),
        (0.3, c(-0.4, 0.0), 1.5, 2),
        (0.8, c(0.5, 0.2), 2.0, 1),
        (0.6, c(3.0, 0.0), 2.0, -1),
    ];
    let expansion_params = [
        ModelParams::new(0.5, c(0.3, 0.0), 1.0, 1, 1).expect("admissible"),
        ModelParams::new(0.3, c(-0.2, 0.0), 1.5, 2, 2).expect("admissible"),
        ModelParams::new(0.8, c(0.4, 0.3), 2.0, 1, 3).expect("admissible"),
    ];
    match grid_id {
        "smoke" => Ok(Grid {
            oracle: oracle_grid(&[0.5], &[1, 2], &[-1, 1, 2], &[1.0, 2.0], &[c(0.4, 0.0), c(0.5, 0.3)], 5, &[0.0, 0.25, 1.0]),
            exact_params: exact_sets(&[(1, 2)], &EXACT_SETS[..5], &[1, 2]),
            exact_n: 4,
            exact_x: vec![0, 1],
            dist_d: vec![1, 2],
            expansion_float: expansion_params[..1]
                .iter()
                .flat_map(|p| (0..=4).flat_map(move |n| [0.25, 2.5].map(|x| (*p, EvalPoint { n, x }))))
                .collect(),
            spec_q: vec![0.5],
            spec_n: 3,
            spec_x: vec![0.0, 0.5],
            interp: interp_grid(&interp_params[..1], &[1, 2], 4, &[1.0]),
            limit_params: limit_set(&LIMIT_SET[..4]),
            limit_n: 4,
            classical_x: vec![0],
        }),
        "full" => Ok(Grid {
            oracle: oracle_grid(
                &[0.2, 0.5, 0.9],
                &[1, 2, 3],
                &[-2, -1, 1, 2, 3],
                &[0.5, 1.0, 2.0, -1.5],
                &[c(0.4, 0.0), c(-0.6, 0.0), c(0.5, 0.3)],
                8,
                &[0.0, 0.25, 1.0, 2.5],
            ),
            exact_params: exact_sets(&[(1, 2), (1, 3), (3, 4)], &EXACT_SETS, &[1, 2, 3]),
            exact_n: 6,
            exact_x: vec![0, 1, 2],
            dist_d: vec![1, 2, 3],
            expansion_float: expansion_params
                .iter()
                .flat_map(|p| (0..=6).flat_map(move |n| [0.25, 2.5].map(|x| (*p, EvalPoint { n, x }))))
                .collect(),
            spec_q: vec![0.3, 0.5, 0.8],
            spec_n: 6,
            spec_x: vec![0.0, 0.5, 1.0],
            interp: interp_grid(&interp_params, &[1, 2, 3], 6, &[0.5, 1.0, 2.0]),
            limit_params: limit_set(&LIMIT_SET),
            limit_n: 6,
            classical_x: vec![0, 1, 2],
        }),
        other => Err(Error::domain(format!("unknown grid '{other}' (expected one of {GRID_IDS:?})"))),
    }
}

struct Collector {
    verdicts: Vec<IdentityVerdict>,
    errors: Vec<AuditError>,
    // identities registered even if every point errored
    seen: BTreeMap<(IdentityId, VariantId), ()>,
}

impl Collector {
    fn push(&mut self, identity: IdentityId, variant: VariantId, point: impl FnOnce() -> PointDesc, r: Result<IdentityVerdict>) {
        self.seen.insert((identity, variant), ());
        match r {
            Ok(v) => self.verdicts.push(v),
            Err(e) => self.errors.push(AuditError { identity, variant, point: point(), error: e.to_string() }),
        }
    }
}

pub fn run_audit(grid_id: &str) -> Result<AuditReport> {
    run_audit_selected(grid_id, &IdentityGroup::ALL)
}

/// Runs the closed-form adjudication and then the selected identity groups.
pub fn run_audit_selected(grid_id: &str, groups: &[IdentityGroup]) -> Result<AuditReport> {
    let g = grid(grid_id)?;
    let cfg = SeriesConfig::default();
    let mut col = Collector { verdicts: Vec::new(), errors: Vec::new(), seen: BTreeMap::new() };

    for v in ClosedVariant::ALL {
        for (p, pt) in &g.oracle {
            col.push(IdentityId::ClosedFormThm3, v.into(), || float_point(p, pt.n, pt.x), verify_closed_form(p, pt, v, &cfg));
        }
    }
    let closed_variant = {
        let partial = summarize(&col);
        let winners: Vec<ClosedVariant> = ClosedVariant::ALL
            .into_iter()
            .filter(|&v| partial.iter().any(|r| r.identity == IdentityId::ClosedFormThm3 && r.variant == v.into() && r.full_pass()))
            .collect();
        if winners.len() == 1 {
            Some(winners[0])
        } else {
            None
        }
    };

    if let Some(cv) = closed_variant {
        let has = |grp| groups.contains(&grp);
        if has(IdentityGroup::Expansion) {
            audit_expansion(&g, cv, &cfg, &mut col);
        }
        if has(IdentityGroup::Symmetry) {
            for v in FormVariant::ALL {
                for_exact(&g, |p, n, x| {
                    col.push(IdentityId::SymmetryThm4, v.id(), || exact_point(p, n, x), verify_symmetry(p, n, x, cv, v))
                });
            }
        }
        if has(IdentityGroup::Difference) {
            for v in FormVariant::ALL {
                for p in &g.exact_params {
                    for n in 0..=g.exact_n {
                        col.push(IdentityId::DifferenceThm5, v.id(), || exact_point(p, n, 0), verify_difference(p, n, cv, v));
                    }
                }
            }
            for v in FormVariant::ALL {
                for p in &g.exact_params {
                    for n in 0..=g.exact_n {
                        col.push(IdentityId::UmbralCor2, v.id(), || exact_point(p, n, 0), verify_umbral_difference(p, n, cv, v));
                    }
                }
            }
        }
        if has(IdentityGroup::Distribution) {
            for v in FormVariant::ALL {
                for &d in &g.dist_d {
                    for_exact(&g, |p, n, x| {
                        let point = || {
                            let mut pd = exact_point(p, n, x);
                            pd.d = Some(d);
                            pd
                        };
                        col.push(IdentityId::DistributionThm6, v.id(), point, verify_distribution(p, n, x, d, cv, v))
                    });
                }
            }
        }
        if has(IdentityGroup::Specialization) {
            for h in [None, Some(2), Some(3), Some(4)] {
                let id = if h.is_none() { IdentityId::SpecializationQ } else { IdentityId::SpecializationHq };
                for v in FormVariant::ALL {
                    for &q in &g.spec_q {
                        for n in 0..=g.spec_n {
                            for &x in &g.spec_x {
                                let point = || PointDesc { q: q.to_string(), n, x: x.to_string(), h, ..PointDesc::default() };
                                col.push(id, v.id(), point, verify_specialization(q, h, n, x, v, &cfg));
                            }
                        }
                    }
                }
            }
        }
        if has(IdentityGroup::Limit) {
            audit_limits(&g, cv, &mut col);
        }
        if has(IdentityGroup::Interpolation) {
            for v in IndexVariant::ALL {
                for (p, n, x) in &g.interp {
                    col.push(IdentityId::InterpolationThm8, v.id(), || float_point(p, *n, *x), verify_interpolation(p, *n, *x, v, cv, &cfg));
                }
            }
        }
    }

    // stable: generation order within each (identity, variant) is canonical
    col.verdicts.sort_by_key(|v| (v.identity, v.variant));
    col.errors.sort_by_key(|e| (e.identity, e.variant));
    let summary = summarize(&col);
    Ok(AuditReport {
        grid_id: grid_id.to_string(),
        closed_variant,
        verdicts: col.verdicts,
        summary,
        errors: col.errors,
    })
}

fn for_exact(g: &Grid, mut f: impl FnMut(&ExactParams, u32, u32)) {
    for p in &g.exact_params {
        for n in 0..=g.exact_n {
            for &x in &g.exact_x {
                f(p, n, x);
            }
        }
    }
}

fn audit_expansion(g: &Grid, cv: ClosedVariant, cfg: &SeriesConfig, col: &mut Collector) {
    for v in ExpansionVariant::ALL {
        for_exact(g, |p, n, x| {
            col.push(IdentityId::ExpansionThm1, v.into(), || exact_point(p, n, x), verify_expansion(p, n, x, cv, v))
        });
        for (p, pt) in &g.expansion_float {
            col.push(IdentityId::ExpansionThm1, v.into(), || float_point(p, pt.n, pt.x), verify_expansion_float(p, pt, cv, v, cfg));
        }
    }
    for v in FormVariant::ALL {
        for_exact(g, |p, n, x| {
            col.push(IdentityId::UmbralCor1, v.id(), || exact_point(p, n, x), verify_umbral_expansion(p, n, x, cv, v))
        });
    }
}

fn audit_limits(g: &Grid, cv: ClosedVariant, col: &mut Collector) {
    let id = VariantId::Printed;
    for (lp, x) in &g.limit_params {
        for n in 0..=g.limit_n {
            let point = || limit_point(lp, n, *x);
            col.push(IdentityId::LimitOzden, id, point, verify_q1_limit(LimitTarget::Ozden, n, *x, lp, cv).map(|o| o.verdict));
        }
    }
    for target in [LimitTarget::Euler, LimitTarget::Genocchi] {
        let lp = LimitParams::genocchi();
        for &x in &g.classical_x {
            for n in 0..=g.limit_n {
                let point = || limit_point(&lp, n, x);
                col.push(target.identity(), id, point, verify_q1_limit(target, n, x, &lp, cv).map(|o| o.verdict));
            }
        }
    }
}

fn limit_point(lp: &LimitParams, n: u32, x: u32) -> PointDesc {
    PointDesc {
        q: "1".into(),
        beta: lp.beta.to_string(),
        a: lp.a.to_string(),
        b: lp.b,
        k: lp.k,
        n,
        x: x.to_string(),
        ..PointDesc::default()
    }
}

fn summarize(col: &Collector) -> Vec<SummaryRow> {
    let mut rows: BTreeMap<(IdentityId, VariantId), SummaryRow> = BTreeMap::new();
    for &(identity, variant) in col.seen.keys() {
        rows.insert(
            (identity, variant),
            SummaryRow { identity, variant, total: 0, passed: 0, errors: 0, max_abs_diff: 0.0 },
        );
    }
    for v in &col.verdicts {
        let row = rows.get_mut(&(v.identity, v.variant)).expect("registered");
        row.total += 1;
        row.passed += v.passed as usize;
        if v.abs_diff > row.max_abs_diff || v.abs_diff.is_nan() {
            row.max_abs_diff = v.abs_diff;
        }
    }
    for e in &col.errors {
        rows.get_mut(&(e.identity, e.variant)).expect("registered").errors += 1;
    }
    rows.into_values().collect()
}

