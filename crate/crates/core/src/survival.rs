//! Survival paths, the distance formula, and the order on witnesses with
//! large projection.
//!
//! A survival path starts from a geodesic in the full curve graph and replaces
//! every interior vertex that bounds a witness by a geodesic in that witness's
//! curve graph joining the two neighbouring vertices. The result only visits
//! surviving curves.
//!
//! Every bound computed here is certified: projection distances and graph
//! distances come with an upper value and a lower value, and an inequality is
//! reported as holding or failing only when the two bounds agree on it.

use std::collections::BTreeSet;

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{distance, geodesics, Budget, ComplexKind, DistanceResult, GeodesicPath, GeodesicSet};
use crate::normal::{CanonicalCode, NormalCurve};
use crate::surface::Surface;
use crate::witness::{apply_cutoff, is_surviving, project, projection_distance, set_diameter, witness_of, ProjectionDistance, Witness};

/// Default bound on the diameter of the projection of a geodesic that misses
/// a witness boundary.
pub const DEFAULT_M: u32 = 8;
/// Smallest cutoff accepted by the distance formula, before comparing with `M`.
pub const FORMULA_MIN_K: u32 = 24;
/// Smallest cutoff for which the relation on large witnesses is an order.
pub const ORDER_MIN_K: u32 = 20;
/// Cap on the number of geodesics listed per query.
pub const MAX_GEODESICS: usize = 4096;

/// Outcome of checking an implication `premise ⇒ conclusion` with bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Holds,
    NotApplicable,
    Violation,
    Undecided,
}

fn surviving_endpoint(surface: &Surface, c: &NormalCurve) -> Result<()> {
    c.check_surface(surface)?;
    if !c.is_essential(surface) || !is_surviving(surface, c)? {
        return Err(Error::NotSurvivingEndpoint);
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct CandidateWitnesses {
    /// Sorted by boundary code.
    pub witnesses: Vec<Witness>,
    /// False when the geodesics found may not be all of them.
    pub exhaustive: bool,
    pub geodesics: GeodesicSet,
}

/// Witnesses whose boundary is an interior vertex of some geodesic from `a`
/// to `b` in the full curve graph.
pub fn candidate_witnesses(surface: &Surface, a: &NormalCurve, b: &NormalCurve, budget: Budget) -> Result<CandidateWitnesses> {
    surviving_endpoint(surface, a)?;
    surviving_endpoint(surface, b)?;
    let set = geodesics(surface, a, b, &ComplexKind::Full, budget, MAX_GEODESICS)?;
    let mut seen = BTreeSet::new();
    let mut witnesses = Vec::new();
    for p in &set.paths {
        let n = p.vertices.len();
        for v in p.vertices.iter().take(n.saturating_sub(1)).skip(1) {
            if seen.insert(v.code().clone()) {
                if let Some(w) = witness_of(surface, v)? {
                    witnesses.push(w);
                }
            }
        }
    }
    witnesses.sort_by(|x, y| x.code().cmp(y.code()));
    Ok(CandidateWitnesses { witnesses, exhaustive: set.exhaustive && !set.truncated, geodesics: set })
}

/// Lexicographically smallest geodesic found from `a` to `b` in `kind`.
pub fn main_geodesic(surface: &Surface, a: &NormalCurve, b: &NormalCurve, kind: &ComplexKind, budget: Budget) -> Result<GeodesicPath> {
    let set = geodesics(surface, a, b, kind, budget, MAX_GEODESICS)?;
    set.paths.into_iter().next().ok_or(Error::Undecided(budget.weight as u32))
}

/// A witness vertex of the main geodesic and the geodesic that replaces it.
#[derive(Debug, Clone)]
pub struct WitnessSegment {
    /// Position of the boundary in the main geodesic.
    pub index: usize,
    pub witness: Witness,
    /// From the predecessor to the successor of the boundary.
    pub geodesic: GeodesicPath,
    pub exact: bool,
}

#[derive(Debug, Clone)]
pub struct SurvivalPath {
    pub main: GeodesicPath,
    pub segments: Vec<WitnessSegment>,
    pub flattened: Vec<NormalCurve>,
    /// For every main vertex, its position in `flattened` (`None` for the
    /// replaced boundaries).
    pub positions: Vec<Option<usize>>,
}

impl SurvivalPath {
    pub fn len(&self) -> usize {
        self.flattened.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.flattened.is_empty()
    }

    pub fn flattened_codes(&self) -> Vec<CanonicalCode> {
        self.flattened.iter().map(|c| c.code().clone()).collect()
    }

    /// Checks that the flattened path is a path in the surviving graph.
    pub fn validate(&self, surface: &Surface) -> Result<()> {
        GeodesicPath { vertices: self.flattened.clone(), complex: ComplexKind::Surviving }.validate(surface)
    }

    /// The flattened stretch between main vertices `i` and `j`.
    pub fn between(&self, i: usize, j: usize) -> Option<&[NormalCurve]> {
        let (x, y) = (self.positions.get(i).copied().flatten()?, self.positions.get(j).copied().flatten()?);
        (x <= y).then(|| &self.flattened[x..=y])
    }
}

/// Builds the survival path over a given geodesic of the full curve graph.
///
/// Only the path structure is checked; a longer path in the full curve graph
/// is flattened the same way.
pub fn survival_path(surface: &Surface, a: &NormalCurve, b: &NormalCurve, main: &GeodesicPath, budget: Budget) -> Result<SurvivalPath> {
    surviving_endpoint(surface, a)?;
    surviving_endpoint(surface, b)?;
    if main.complex != ComplexKind::Full {
        return Err(Error::NotAGeodesic("main path must live in the full curve graph".into()));
    }
    main.validate(surface)?;
    if main.vertices.first() != Some(a) || main.vertices.last() != Some(b) {
        return Err(Error::NotAGeodesic("endpoints do not match".into()));
    }

    let vs = &main.vertices;
    let mut segments = Vec::new();
    let mut flattened = vec![vs[0].clone()];
    let mut positions = vec![Some(0)];
    let mut i = 1;
    while i < vs.len() {
        let w = if i + 1 < vs.len() { witness_of(surface, &vs[i])? } else { None };
        match w {
            Some(w) => {
                let kind = ComplexKind::Witness(w.clone());
                let set = geodesics(surface, &vs[i - 1], &vs[i + 1], &kind, budget, MAX_GEODESICS)
                    .map_err(|e| match e {
                        Error::Undecided(x) => Error::WitnessGeodesicUndecided(x),
                        e => e,
                    })?;
                let geodesic =
                    set.paths.into_iter().next().ok_or(Error::WitnessGeodesicUndecided(budget.weight as u32))?;
                flattened.extend(geodesic.vertices[1..].iter().cloned());
                positions.push(None);
                positions.push(Some(flattened.len() - 1));
                segments.push(WitnessSegment { index: i, witness: w, geodesic, exact: set.distance.exact });
                i += 2;
            }
            None => {
                flattened.push(vs[i].clone());
                positions.push(Some(flattened.len() - 1));
                i += 1;
            }
        }
    }
    Ok(SurvivalPath { main: main.clone(), segments, flattened, positions })
}

/// The survival path over the lexicographically smallest main geodesic.
pub fn survival_path_between(surface: &Surface, a: &NormalCurve, b: &NormalCurve, budget: Budget) -> Result<SurvivalPath> {
    surviving_endpoint(surface, a)?;
    surviving_endpoint(surface, b)?;
    let main = main_geodesic(surface, a, b, &ComplexKind::Full, budget)?;
    survival_path(surface, a, b, &main, budget)
}

fn ratio_string<S: Serializer>(r: &Ratio<u64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessTerm {
    pub boundary: CanonicalCode,
    pub paired_puncture: usize,
    pub distance: ProjectionDistance,
}

/// Both sides of the distance formula at one pair, together with the
/// measured distance in the surviving graph.
#[derive(Debug, Clone, Serialize)]
pub struct FormulaBounds {
    pub k: u32,
    pub m: u32,
    pub terms: Vec<WitnessTerm>,
    pub full_term: ProjectionDistance,
    /// Cut-off sum over the witnesses and the whole surface, from upper values.
    pub witness_sum: u64,
    /// The same sum from lower values.
    pub witness_sum_lower: u64,
    /// `witness_sum / 96`.
    #[serde(serialize_with = "ratio_string")]
    pub lower: Ratio<u64>,
    /// `2k² + 2k · witness_sum_lower`.
    pub upper: u64,
    pub ds: DistanceResult,
    /// True when the sum provably covers every witness.
    pub exhaustive: bool,
    /// Whether `lower ≤ d^s ≤ upper` is certified.
    pub verdict: Verdict,
}

/// Evaluates the distance formula at `a`, `b`.
///
/// When `2 · d^s(a, b) < k` every projection distance is below the cutoff
/// (projections are 2-Lipschitz), so the sum vanishes whether or not the
/// candidate list is complete.
pub fn distance_formula(surface: &Surface, a: &NormalCurve, b: &NormalCurve, k: u32, m: u32, budget: Budget) -> Result<FormulaBounds> {
    let min = m.max(FORMULA_MIN_K);
    if k < min {
        return Err(Error::KTooSmall { k, min });
    }
    let cands = candidate_witnesses(surface, a, b, budget)?;
    let ds = distance(surface, a, b, &ComplexKind::Surviving, budget)?;
    let full = &cands.geodesics.distance;
    let full_term = ProjectionDistance { value: full.value, lower: full.lower, exact: full.exact };
    let mut terms = Vec::new();
    for w in &cands.witnesses {
        let d = projection_distance(surface, Some(w), a, b, budget)?;
        terms.push(WitnessTerm { boundary: w.code().clone(), paired_puncture: w.paired_puncture(), distance: d });
    }
    let uppers: Vec<u32> = terms.iter().map(|t| t.distance.value).chain([full_term.value]).collect();
    let lowers: Vec<u32> = terms.iter().map(|t| t.distance.lower).chain([full_term.lower]).collect();
    let negligible = 2 * u64::from(ds.value) < u64::from(k);
    let (witness_sum, witness_sum_lower) =
        if negligible { (0, 0) } else { (apply_cutoff(&uppers, k), apply_cutoff(&lowers, k)) };
    let exhaustive = negligible || cands.exhaustive;
    let lower = Ratio::new(witness_sum, 96);
    let k64 = u64::from(k);
    let upper = 2 * k64 * k64 + 2 * k64 * witness_sum_lower;

    let lower_true_max = Ratio::new(witness_sum, 96);
    let lower_true_min = Ratio::new(witness_sum_lower, 96);
    let ds_lo = Ratio::from_integer(u64::from(ds.lower));
    let ds_hi = Ratio::from_integer(u64::from(ds.value));
    let verdict = if lower_true_min > ds_hi || u64::from(ds.lower) > 2 * k64 * k64 + 2 * k64 * witness_sum {
        if exhaustive {
            Verdict::Violation
        } else {
            Verdict::Undecided
        }
    } else if lower_true_max <= ds_lo && u64::from(ds.value) <= upper && exhaustive {
        Verdict::Holds
    } else {
        Verdict::Undecided
    };
    Ok(FormulaBounds { k, m, terms, full_term, witness_sum, witness_sum_lower, lower, upper, ds, exhaustive, verdict })
}

#[derive(Debug, Clone, Serialize)]
pub struct BehrstockCheck {
    /// `d_W(u, ∂W')`.
    pub premise: ProjectionDistance,
    /// `d_W'(u, ∂W)`.
    pub conclusion: ProjectionDistance,
    pub verdict: Verdict,
}

fn boundary_distance(surface: &Surface, w: &Witness, u: &NormalCurve, c: &NormalCurve, budget: Budget) -> Result<ProjectionDistance> {
    let mut all: Vec<NormalCurve> = project(surface, w, u)?.curves().to_vec();
    all.extend(project(surface, w, c)?.curves().iter().cloned());
    all.sort_by(|x, y| x.code().cmp(y.code()));
    all.dedup();
    set_diameter(surface, w, &all, budget)
}

/// Evaluates `d_W(u, ∂W') ≥ 10 ⇒ d_W'(u, ∂W) ≤ 4`.
pub fn check_behrstock(surface: &Surface, u: &NormalCurve, w: &Witness, w2: &Witness, budget: Budget) -> Result<BehrstockCheck> {
    if w == w2 {
        return Err(Error::Invalid("the two witnesses coincide".into()));
    }
    let premise = boundary_distance(surface, w, u, w2.boundary(), budget)?;
    let conclusion = boundary_distance(surface, w2, u, w.boundary(), budget)?;
    let verdict = implication(premise, 10, conclusion, 4);
    Ok(BehrstockCheck { premise, conclusion, verdict })
}

/// `p ≥ at_least ⇒ q ≤ at_most` from bounds on `p` and `q`.
fn implication(p: ProjectionDistance, at_least: u32, q: ProjectionDistance, at_most: u32) -> Verdict {
    if p.value < at_least {
        Verdict::NotApplicable
    } else if p.lower < at_least {
        Verdict::Undecided
    } else if q.value <= at_most {
        Verdict::Holds
    } else if q.lower > at_most {
        Verdict::Violation
    } else {
        Verdict::Undecided
    }
}

/// Tri-state `d ≥ t` and `d ≤ t`.
fn at_least(d: ProjectionDistance, t: u32) -> Option<bool> {
    if d.lower >= t {
        Some(true)
    } else if d.value < t {
        Some(false)
    } else {
        None
    }
}

fn at_most(d: ProjectionDistance, t: u32) -> Option<bool> {
    at_least(d, t + 1).map(|x| !x)
}

/// The four equivalent conditions for `W < W'`, each certified true, certified
/// false, or undecided.
#[derive(Debug, Clone, Serialize)]
pub struct OrderEvidence {
    pub lesser: CanonicalCode,
    pub greater: CanonicalCode,
    /// Conditions (1) to (4) in order.
    pub conditions: [Option<bool>; 4],
}

impl OrderEvidence {
    pub fn certified(&self) -> Vec<usize> {
        (0..4).filter(|&i| self.conditions[i] == Some(true)).map(|i| i + 1).collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OrderedWitnesses {
    pub k: u32,
    /// Boundary codes, sorted by the order.
    pub witnesses: Vec<CanonicalCode>,
    /// One entry per adjacent pair.
    pub evidence: Vec<OrderEvidence>,
    /// Candidates whose projection distance straddles `k`.
    pub undecided: Vec<CanonicalCode>,
    pub exhaustive: bool,
}

/// Conditions for `W < W'` relative to the pair `x`, `y`:
/// `d_W'(y, ∂W) ≥ 10`, `d_W(y, ∂W') ≤ 4`, `d_W(x, ∂W') ≥ 10`, `d_W'(x, ∂W) ≤ 4`.
pub fn order_conditions(
    surface: &Surface,
    x: &NormalCurve,
    y: &NormalCurve,
    w: &Witness,
    w2: &Witness,
    budget: Budget,
) -> Result<OrderEvidence> {
    let c1 = at_least(boundary_distance(surface, w2, y, w.boundary(), budget)?, 10);
    let c2 = at_most(boundary_distance(surface, w, y, w2.boundary(), budget)?, 4);
    let c3 = at_least(boundary_distance(surface, w, x, w2.boundary(), budget)?, 10);
    let c4 = at_most(boundary_distance(surface, w2, x, w.boundary(), budget)?, 4);
    Ok(OrderEvidence { lesser: w.code().clone(), greater: w2.code().clone(), conditions: [c1, c2, c3, c4] })
}

/// Sorts the witnesses with projection distance at least `k` between `a` and
/// `b`, checking that the relation is a strict total order on them.
pub fn behrstock_order(surface: &Surface, a: &NormalCurve, b: &NormalCurve, k: u32, budget: Budget) -> Result<OrderedWitnesses> {
    if k < ORDER_MIN_K {
        return Err(Error::KTooSmall { k, min: ORDER_MIN_K });
    }
    let cands = candidate_witnesses(surface, a, b, budget)?;
    let mut members = Vec::new();
    let mut undecided = Vec::new();
    for w in &cands.witnesses {
        let d = projection_distance(surface, Some(w), a, b, budget)?;
        match at_least(d, k) {
            Some(true) => members.push(w.clone()),
            Some(false) => {}
            None => undecided.push(w.code().clone()),
        }
    }
    let n = members.len();
    let mut less = vec![vec![false; n]; n];
    let mut evidence = vec![vec![None; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let ev = order_conditions(surface, a, b, &members[i], &members[j], budget)?;
            let yes = ev.conditions.contains(&Some(true));
            if yes && ev.conditions.contains(&Some(false)) {
                return Err(Error::OrderViolation(format!("conditions disagree for {} < {}", ev.lesser, ev.greater)));
            }
            less[i][j] = yes;
            evidence[i][j] = Some(ev);
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            match (less[i][j], less[j][i]) {
                (true, true) => {
                    return Err(Error::OrderViolation(format!("{} and {} precede each other", members[i].code(), members[j].code())))
                }
                (false, false) => {
                    return Err(Error::OrderViolation(format!("{} and {} are incomparable", members[i].code(), members[j].code())))
                }
                _ => {}
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                if less[i][j] && less[j][l] && !less[i][l] {
                    return Err(Error::OrderViolation(format!(
                        "{} < {} < {} is not transitive",
                        members[i].code(),
                        members[j].code(),
                        members[l].code()
                    )));
                }
            }
        }
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by_key(|&i| (0..n).filter(|&j| less[j][i]).count());
    let evidence = idx.windows(2).map(|p| evidence[p[0]][p[1]].clone().expect("ordered pair")).collect();
    Ok(OrderedWitnesses {
        k,
        witnesses: idx.iter().map(|&i| members[i].code().clone()).collect(),
        evidence,
        undecided,
        exhaustive: cands.exhaustive,
    })
}

/// For `W < W'` in the order attached to `x`, `y`: `d_W(u, y) ≥ 14 ⇒ d_W'(u, x) ≤ 8`.
pub fn check_aux(
    surface: &Surface,
    x: &NormalCurve,
    y: &NormalCurve,
    u: &NormalCurve,
    w: &Witness,
    w2: &Witness,
    budget: Budget,
) -> Result<Verdict> {
    let p = projection_distance(surface, Some(w), u, y, budget)?;
    let q = projection_distance(surface, Some(w2), u, x, budget)?;
    Ok(implication(p, 14, q, 8))
}
