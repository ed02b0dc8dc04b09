//! Seeded empirical audits of survival paths and projections.
//!
//! Each audit draws its sample from a `ChaCha8Rng` stream per item, evaluates
//! items in parallel and reduces in item order, so a configuration always
//! produces the same report. Inequalities are only reported as violated when
//! certified bounds contradict them; everything else lands in the metrics.

use std::collections::BTreeMap;

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::{distance, Budget, ComplexKind};
use crate::normal::NormalCurve;
use crate::samples::{random_curve, random_surviving, rng, witness_pair, witness_pool};
use crate::surface::Surface;
use crate::survival::{candidate_witnesses, main_geodesic, survival_path, survival_path_between, SurvivalPath};
use crate::witness::{project, projection_distance, set_diameter, Witness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AuditKind {
    Slim,
    Qg,
    Bgit,
    Triples,
}

impl std::str::FromStr for AuditKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<AuditKind> {
        match s {
            "slim" => Ok(AuditKind::Slim),
            "qg" => Ok(AuditKind::Qg),
            "bgit" => Ok(AuditKind::Bgit),
            "triples" => Ok(AuditKind::Triples),
            other => Err(Error::Invalid(format!("unknown audit `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AuditConfig {
    pub seed: u64,
    pub n: usize,
    pub budget: Budget,
    pub m: u32,
    /// Twist-word length for random curves.
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub audit: AuditKind,
    pub surface: String,
    pub config: AuditConfig,
    pub sampled: usize,
    pub skipped: usize,
    pub metrics: BTreeMap<String, Value>,
    pub violations: Vec<String>,
}

impl AuditReport {
    fn new(audit: AuditKind, surface: &Surface, config: AuditConfig) -> AuditReport {
        AuditReport {
            audit,
            surface: surface.id().to_string(),
            config,
            sampled: 0,
            skipped: 0,
            metrics: BTreeMap::new(),
            violations: Vec::new(),
        }
    }
}

pub fn run_audit(surface: &Surface, kind: AuditKind, config: AuditConfig) -> Result<AuditReport> {
    match kind {
        AuditKind::Slim => audit_slim(surface, config),
        AuditKind::Qg => audit_quasigeodesic(surface, config),
        AuditKind::Bgit => audit_bgit(surface, config),
        AuditKind::Triples => audit_triple_uniqueness(surface, config),
    }
}

fn item_rng(seed: u64, i: usize) -> ChaCha8Rng {
    let mut r = rng(seed);
    r.set_stream(i as u64);
    r
}

/// Runs `f` on every item; `Ok(None)` and budget errors count as skipped.
fn sweep<T: Send>(n: usize, f: impl Fn(usize) -> Result<Option<T>> + Sync) -> Result<(Vec<T>, usize)> {
    let results: Vec<Result<Option<T>>> = (0..n).into_par_iter().map(&f).collect();
    let mut out = Vec::new();
    let mut skipped = 0;
    for r in results {
        match r {
            Ok(Some(x)) => out.push(x),
            Ok(None)
            | Err(Error::Undecided(_))
            | Err(Error::WitnessGeodesicUndecided(_))
            | Err(Error::BudgetTooLarge(_)) => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    Ok((out, skipped))
}

fn ratio_json(r: Ratio<u64>) -> Value {
    Value::String(r.to_string())
}

fn histogram(values: impl IntoIterator<Item = u32>) -> Value {
    let mut h: BTreeMap<u32, usize> = BTreeMap::new();
    for v in values {
        *h.entry(v).or_default() += 1;
    }
    json!(h)
}

struct SlimItem {
    epsilon: u32,
    exact: bool,
    invalid: Vec<String>,
}

/// Smallest `ε` with every vertex of `side` within `ε` of `others` in the
/// surviving graph (upper bounds).
fn side_epsilon(surface: &Surface, side: &[NormalCurve], others: &[&NormalCurve], budget: Budget) -> Result<(u32, bool)> {
    let mut eps = 0;
    let mut exact = true;
    for v in side {
        let mut best: Option<(u32, bool)> = None;
        for w in others {
            let d = distance(surface, v, w, &ComplexKind::Surviving, budget)?;
            if best.is_none_or(|(b, _)| d.value < b) {
                best = Some((d.value, d.exact));
            }
            if d.value == 0 {
                break;
            }
        }
        let (b, e) = best.unwrap_or((0, true));
        if b > eps {
            eps = b;
            exact = e;
        } else if b == eps {
            exact &= e;
        }
    }
    Ok((eps, exact))
}

/// Thinness of survival-path triangles.
pub fn audit_slim(surface: &Surface, config: AuditConfig) -> Result<AuditReport> {
    let (items, skipped) = sweep(config.n, |i| {
        let mut r = item_rng(config.seed, i);
        let x = random_surviving(surface, &mut r, config.steps)?;
        let y = random_surviving(surface, &mut r, config.steps)?;
        let z = random_surviving(surface, &mut r, config.steps)?;
        let sides = [
            survival_path_between(surface, &x, &y, config.budget)?,
            survival_path_between(surface, &y, &z, config.budget)?,
            survival_path_between(surface, &z, &x, config.budget)?,
        ];
        let mut invalid = Vec::new();
        for (k, s) in sides.iter().enumerate() {
            if let Err(e) = s.validate(surface) {
                invalid.push(format!("item {i} side {k}: {e}"));
            }
        }
        let mut epsilon = 0;
        let mut exact = true;
        for k in 0..3 {
            let others: Vec<&NormalCurve> =
                sides.iter().enumerate().filter(|(j, _)| *j != k).flat_map(|(_, s)| s.flattened.iter()).collect();
            let (e, ex) = side_epsilon(surface, &sides[k].flattened, &others, config.budget)?;
            if e > epsilon {
                epsilon = e;
                exact = ex;
            } else if e == epsilon {
                exact &= ex;
            }
        }
        Ok(Some(SlimItem { epsilon, exact, invalid }))
    })?;
    let mut report = AuditReport::new(AuditKind::Slim, surface, config);
    report.sampled = items.len();
    report.skipped = skipped;
    let max = items.iter().map(|t| t.epsilon).max().unwrap_or(0);
    report.metrics.insert("max_epsilon".into(), json!(max));
    report.metrics.insert("max_epsilon_exact".into(), json!(items.iter().filter(|t| t.epsilon == max).all(|t| t.exact)));
    report.metrics.insert("epsilon_histogram".into(), histogram(items.iter().map(|t| t.epsilon)));
    report.violations = items.into_iter().flat_map(|t| t.invalid).collect();
    Ok(report)
}

struct QgItem {
    /// (flattened length, lower bound on d^s) per subsegment.
    spans: Vec<(u32, u32)>,
    /// (main-index length, lower bound on the full-graph distance) per pair of kept main vertices.
    reparam: Vec<(u32, u32)>,
    /// Largest certified lower and upper projection diameters to a witness not on the main geodesic.
    projection: Option<(u32, u32)>,
    violations: Vec<String>,
}

fn qg_pair(surface: &Surface, r: &mut ChaCha8Rng, i: usize, config: AuditConfig) -> Result<Option<SurvivalPath>> {
    if i.is_multiple_of(2) {
        let x = random_surviving(surface, r, config.steps)?;
        let y = random_surviving(surface, r, config.steps)?;
        return survival_path_between(surface, &x, &y, config.budget).map(Some);
    }
    let Some(p) = witness_pair(surface, r, 2)? else { return Ok(None) };
    let main = crate::graph::GeodesicPath {
        vertices: vec![p.a.clone(), p.witness.boundary().clone(), p.b.clone()],
        complex: ComplexKind::Full,
    };
    survival_path(surface, &p.a, &p.b, &main, config.budget).map(Some)
}

/// Diameter of the union of the projections of `curves` to `w`.
pub fn projected_diameter(surface: &Surface, w: &Witness, curves: &[NormalCurve], budget: Budget) -> Result<crate::witness::ProjectionDistance> {
    let mut all: Vec<NormalCurve> = Vec::new();
    for c in curves {
        for p in project(surface, w, c)?.curves() {
            if !all.contains(p) {
                all.push(p.clone());
            }
        }
    }
    all.sort_by(|x, y| x.code().cmp(y.code()));
    set_diameter(surface, w, &all, budget)
}

/// Quasi-geodesic constants of survival paths.
pub fn audit_quasigeodesic(surface: &Surface, config: AuditConfig) -> Result<AuditReport> {
    let pool = witness_pool(surface)?;
    let (items, skipped) = sweep(config.n, |i| {
        let mut r = item_rng(config.seed, i);
        let Some(path) = qg_pair(surface, &mut r, i, config)? else { return Ok(None) };
        let mut violations = Vec::new();
        if let Err(e) = path.validate(surface) {
            violations.push(format!("item {i}: flattened path invalid: {e}"));
        }
        let f = &path.flattened;
        let mut spans = Vec::new();
        for a in 0..f.len() {
            for b in a + 1..f.len() {
                let d = distance(surface, &f[a], &f[b], &ComplexKind::Surviving, config.budget)?;
                spans.push(((b - a) as u32, d.lower));
            }
        }
        let kept: Vec<usize> = (0..path.positions.len()).filter(|&j| path.positions[j].is_some()).collect();
        let mut reparam = Vec::new();
        for (x, &a) in kept.iter().enumerate() {
            for &b in &kept[x + 1..] {
                let d = distance(surface, &path.main.vertices[a], &path.main.vertices[b], &ComplexKind::Full, config.budget)?;
                reparam.push(((b - a) as u32, d.lower));
            }
        }
        // One witness whose boundary is not on the main geodesic.
        let off: Vec<&Witness> = pool.iter().filter(|w| !path.main.vertices.contains(w.boundary())).collect();
        let mut projection = None;
        if let Some(w) = off.choose(&mut r) {
            if !f.contains(w.boundary()) {
                let d = projected_diameter(surface, w, f, config.budget)?;
                if d.lower > config.m + 4 {
                    violations.push(format!("item {i}: projection diameter {} exceeds M + 4 = {}", d.lower, config.m + 4));
                }
                projection = Some((d.lower, d.value));
            }
        }
        Ok(Some(QgItem { spans, reparam, projection, violations }))
    })?;
    let mut report = AuditReport::new(AuditKind::Qg, surface, config);
    report.sampled = items.len();
    report.skipped = skipped;
    let fit = |pairs: &mut dyn Iterator<Item = (u32, u32)>| {
        let mut c1 = 0i64;
        let mut k0 = Ratio::from_integer(1u64);
        let mut unbounded_k0 = false;
        for (len, d) in pairs {
            c1 = c1.max(i64::from(len) - i64::from(d));
            if d == 0 {
                unbounded_k0 |= len > 0;
            } else {
                k0 = k0.max(Ratio::new(u64::from(len), u64::from(d)));
            }
        }
        json!({
            "additive_at_k1": c1,
            "multiplicative_at_c0": if unbounded_k0 { Value::Null } else { ratio_json(k0) },
        })
    };
    report.metrics.insert("survival_fit".into(), fit(&mut items.iter().flat_map(|t| t.spans.iter().copied())));
    report.metrics.insert("reparametrized_fit".into(), fit(&mut items.iter().flat_map(|t| t.reparam.iter().copied())));
    let proj: Vec<(u32, u32)> = items.iter().filter_map(|t| t.projection).collect();
    report.metrics.insert("projection_checks".into(), json!(proj.len()));
    report.metrics.insert("max_projection_diameter".into(), json!(proj.iter().map(|p| p.1).max().unwrap_or(0)));
    report.metrics.insert("max_projection_diameter_lower".into(), json!(proj.iter().map(|p| p.0).max().unwrap_or(0)));
    report.metrics.insert("max_path_length".into(), json!(items.iter().flat_map(|t| t.spans.iter().map(|s| s.0)).max().unwrap_or(0)));
    report.violations = items.into_iter().flat_map(|t| t.violations).collect();
    Ok(report)
}

/// Projection diameters of geodesics that avoid a witness boundary.
pub fn audit_bgit(surface: &Surface, config: AuditConfig) -> Result<AuditReport> {
    let pool = witness_pool(surface)?;
    let (items, skipped) = sweep(config.n, |i| {
        let mut r = item_rng(config.seed, i);
        let x = random_curve(surface, &mut r, config.steps)?;
        let y = random_curve(surface, &mut r, config.steps)?;
        let w = pool.choose(&mut r).expect("witness pool is nonempty");
        let g = main_geodesic(surface, &x, &y, &ComplexKind::Full, config.budget)?;
        if g.vertices.contains(w.boundary()) {
            return Ok(None);
        }
        let d = projected_diameter(surface, w, &g.vertices, config.budget)?;
        Ok(Some((g.len() as u32, d)))
    })?;
    let mut report = AuditReport::new(AuditKind::Bgit, surface, config);
    report.sampled = items.len();
    report.skipped = skipped;
    let max_upper = items.iter().map(|t| t.1.value).max().unwrap_or(0);
    let max_lower = items.iter().map(|t| t.1.lower).max().unwrap_or(0);
    report.metrics.insert("max_diameter".into(), json!(max_upper));
    report.metrics.insert("max_diameter_lower".into(), json!(max_lower));
    report.metrics.insert("geodesic_length_histogram".into(), histogram(items.iter().map(|t| t.0)));
    let over: Vec<usize> = (0..items.len()).filter(|&j| items[j].1.lower >= config.m).collect();
    report.metrics.insert("uncertified_at_m".into(), json!(items.iter().filter(|t| t.1.value >= config.m && t.1.lower < config.m).count()));
    if over.is_empty() {
        report.metrics.insert("recalibrated_m".into(), Value::Null);
    } else {
        report.metrics.insert("exceedances_at_m".into(), json!(over.len()));
        report.metrics.insert("recalibrated_m".into(), json!(max_lower + 1));
    }
    Ok(report)
}

/// Witnesses with large projection for all three pairs of a triple.
pub fn audit_triple_uniqueness(surface: &Surface, config: AuditConfig) -> Result<AuditReport> {
    let threshold = config.m;
    let (items, skipped) = sweep(config.n, |i| {
        let mut r = item_rng(config.seed, i);
        let x = random_surviving(surface, &mut r, config.steps)?;
        let y = random_surviving(surface, &mut r, config.steps)?;
        let z = random_surviving(surface, &mut r, config.steps)?;
        let mut certain: Vec<Vec<Witness>> = Vec::new();
        let mut possible: Vec<Vec<Witness>> = Vec::new();
        let mut exhaustive = true;
        for (a, b) in [(&x, &y), (&x, &z), (&y, &z)] {
            let cands = candidate_witnesses(surface, a, b, config.budget)?;
            exhaustive &= cands.exhaustive;
            let (mut c, mut p) = (Vec::new(), Vec::new());
            for w in cands.witnesses {
                let d = projection_distance(surface, Some(&w), a, b, config.budget)?;
                if d.lower >= threshold {
                    c.push(w.clone());
                }
                if d.value >= threshold {
                    p.push(w);
                }
            }
            certain.push(c);
            possible.push(p);
        }
        let common = |sets: &[Vec<Witness>]| sets[0].iter().filter(|w| sets[1].contains(w) && sets[2].contains(w)).count();
        Ok(Some((common(&certain), common(&possible), exhaustive)))
    })?;
    let mut report = AuditReport::new(AuditKind::Triples, surface, config);
    report.sampled = items.len();
    report.skipped = skipped;
    report.metrics.insert("threshold".into(), json!(threshold));
    report.metrics.insert("max_common_certified".into(), json!(items.iter().map(|t| t.0).max().unwrap_or(0)));
    report.metrics.insert("max_common_possible".into(), json!(items.iter().map(|t| t.1).max().unwrap_or(0)));
    report.metrics.insert("non_exhaustive".into(), json!(items.iter().filter(|t| !t.2).count()));
    report.violations = items
        .iter()
        .enumerate()
        .filter(|(_, t)| t.0 > 1)
        .map(|(i, t)| format!("sample {i}: {} witnesses are large for all three pairs", t.0))
        .collect();
    Ok(report)
}
