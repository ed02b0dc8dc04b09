//! Curve graphs: enumeration by normal weight, distances and geodesics.
//!
//! Vertices are essential curves; edges join distinct disjoint curves. Three
//! graphs are supported: the full curve graph, the surviving subgraph, and the
//! curve graph of a witness. Distances up to two are decided exactly from the
//! boundary of a neighbourhood of the two curves. Beyond that, a bidirectional
//! breadth-first search runs over every curve of bounded total weight, which
//! yields certified upper bounds.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cut::cut_along;
use crate::diagram::{arc_surgeries, boundary_of_union, geometric_intersection};
use crate::error::{Error, Result};
use crate::normal::{disjoint, CanonicalCode, Classification, NormalCurve};
use crate::registry::generator;
use crate::surface::Surface;
use crate::twist::dehn_twist;
use crate::witness::{is_surviving, Witness};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComplexKind {
    Full,
    Surviving,
    Witness(Witness),
}

impl fmt::Display for ComplexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComplexKind::Full => write!(f, "full"),
            ComplexKind::Surviving => write!(f, "surv"),
            ComplexKind::Witness(w) => write!(f, "witness:{}", w.code()),
        }
    }
}

impl ComplexKind {
    pub fn contains(&self, surface: &Surface, curve: &NormalCurve) -> bool {
        if !curve.is_essential(surface) {
            return false;
        }
        match self {
            ComplexKind::Full => true,
            ComplexKind::Surviving => is_surviving(surface, curve).unwrap_or(false),
            ComplexKind::Witness(w) => curve != w.boundary() && disjoint(surface, curve, w.boundary()),
        }
    }

    fn check(&self, surface: &Surface, curve: &NormalCurve) -> Result<()> {
        curve.check_surface(surface)?;
        if self.contains(surface, curve) {
            Ok(())
        } else {
            Err(Error::NotAVertex(self.to_string()))
        }
    }
}

/// Limits on the search: the total edge weight of enumerated curves, and a
/// guard on how many curves may be held in memory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub weight: u64,
    pub max_curves: usize,
}

impl Budget {
    pub const DEFAULT_MAX_CURVES: usize = 2_000_000;

    pub fn new(weight: u64) -> Budget {
        Budget { weight, max_curves: Self::DEFAULT_MAX_CURVES }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceResult {
    /// The distance when `exact`, otherwise an upper bound.
    pub value: u32,
    pub exact: bool,
    /// Certified lower bound.
    pub lower: u32,
    pub weight_budget: u64,
    pub certificate: Option<Vec<CanonicalCode>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeodesicPath {
    pub vertices: Vec<NormalCurve>,
    pub complex: ComplexKind,
}

impl GeodesicPath {
    pub fn len(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn codes(&self) -> Vec<CanonicalCode> {
        self.vertices.iter().map(|c| c.code().clone()).collect()
    }

    /// Checks that this is a path in its complex: every vertex belongs and
    /// consecutive vertices are distinct and disjoint.
    pub fn validate(&self, surface: &Surface) -> Result<()> {
        if self.vertices.is_empty() {
            return Err(Error::NotAGeodesic("empty path".into()));
        }
        for v in &self.vertices {
            self.complex.check(surface, v)?;
        }
        for (i, pair) in self.vertices.windows(2).enumerate() {
            if pair[0] == pair[1] || !disjoint(surface, &pair[0], &pair[1]) {
                return Err(Error::NotAGeodesic(format!("step {i} is not an edge")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct GeodesicSet {
    pub distance: DistanceResult,
    /// Sorted lexicographically by vertex codes.
    pub paths: Vec<GeodesicPath>,
    /// True when every geodesic is listed.
    pub exhaustive: bool,
    /// True when listing stopped at the path cap.
    pub truncated: bool,
}

/// All essential curves of total weight at most `bound`, with lazily computed
/// disjointness lists. Shared between queries through [`enumeration`].
pub struct Enumeration {
    curves: Vec<NormalCurve>,
    index: HashMap<CanonicalCode, usize>,
    neighbours: Vec<OnceLock<Arc<[u32]>>>,
    surviving: OnceLock<Vec<bool>>,
    bound: u64,
}

impl Enumeration {
    pub fn curves(&self) -> &[NormalCurve] {
        &self.curves
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn index_of(&self, code: &CanonicalCode) -> Option<usize> {
        self.index.get(code).copied()
    }

    /// Indices of enumerated curves disjoint from and distinct to curve `v`.
    pub fn neighbours(&self, surface: &Surface, v: usize) -> Arc<[u32]> {
        self.neighbours[v]
            .get_or_init(|| {
                let c = &self.curves[v];
                let list: Vec<u32> = (0..self.curves.len())
                    .into_par_iter()
                    .filter(|&u| u != v && disjoint(surface, c, &self.curves[u]))
                    .map(|u| u as u32)
                    .collect();
                list.into()
            })
            .clone()
    }

    fn surviving(&self, surface: &Surface) -> &[bool] {
        self.surviving
            .get_or_init(|| self.curves.par_iter().map(|c| is_surviving(surface, c).unwrap_or(false)).collect())
    }

    fn members(&self, surface: &Surface, kind: &ComplexKind) -> Vec<bool> {
        match kind {
            ComplexKind::Full => vec![true; self.curves.len()],
            ComplexKind::Surviving => self.surviving(surface).to_vec(),
            ComplexKind::Witness(w) => {
                let wi = self.index_of(w.code());
                match wi {
                    Some(wi) => {
                        let mut m = vec![false; self.curves.len()];
                        for &u in self.neighbours(surface, wi).iter() {
                            m[u as usize] = true;
                        }
                        m
                    }
                    None => self
                        .curves
                        .par_iter()
                        .map(|c| c != w.boundary() && disjoint(surface, c, w.boundary()))
                        .collect(),
                }
            }
        }
    }
}

type CacheKey = (String, u64);

fn cache() -> &'static Mutex<HashMap<CacheKey, Arc<Enumeration>>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Arc<Enumeration>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The shared enumeration of all essential curves within `budget`.
pub fn enumeration(surface: &Surface, budget: Budget) -> Result<Arc<Enumeration>> {
    let key = (surface.id().to_string(), budget.weight);
    if let Some(e) = cache().lock().expect("cache poisoned").get(&key) {
        if e.curves.len() <= budget.max_curves {
            return Ok(e.clone());
        }
        return Err(Error::BudgetTooLarge(format!("more than {} curves", budget.max_curves)));
    }
    let curves = enumerate_essential(surface, budget.weight, budget.max_curves)?;
    let index = curves.iter().enumerate().map(|(i, c)| (c.code().clone(), i)).collect();
    let neighbours = (0..curves.len()).map(|_| OnceLock::new()).collect();
    let e = Arc::new(Enumeration { curves, index, neighbours, surviving: OnceLock::new(), bound: budget.weight });
    cache().lock().expect("cache poisoned").entry(key).or_insert(e.clone());
    Ok(e)
}

/// Every vertex of `kind` with total edge weight at most `budget.weight`, in
/// canonical-code order.
pub fn enumerate_curves(surface: &Surface, budget: Budget, kind: &ComplexKind) -> Result<Vec<NormalCurve>> {
    if budget.weight == 0 {
        return Ok(Vec::new());
    }
    let e = enumeration(surface, budget)?;
    let members = e.members(surface, kind);
    Ok(e.curves.iter().zip(members).filter(|(_, m)| *m).map(|(c, _)| c.clone()).collect())
}

/// All essential curves of total edge weight at most `bound`, sorted by
/// canonical code.
pub fn enumerate_essential(surface: &Surface, bound: u64, max_curves: usize) -> Result<Vec<NormalCurve>> {
    let ne = surface.num_edges();
    let nt = surface.num_triangles();
    // Fix edges triangle by triangle so each triangle is checked as soon as
    // its last edge gets a weight.
    let mut order = Vec::with_capacity(ne);
    let mut placed = vec![false; ne];
    for h in 0..3 * nt {
        let e = surface.edge(h);
        if !placed[e] {
            placed[e] = true;
            order.push(e);
        }
    }
    let mut pos = vec![0; ne];
    for (i, &e) in order.iter().enumerate() {
        pos[e] = i;
    }
    let tri_edges: Vec<[usize; 3]> =
        (0..nt).map(|t| [surface.edge(3 * t), surface.edge(3 * t + 1), surface.edge(3 * t + 2)]).collect();
    let mut closes: Vec<Vec<usize>> = vec![Vec::new(); ne];
    for (t, te) in tri_edges.iter().enumerate() {
        let last = te.iter().map(|&e| pos[e]).max().unwrap();
        closes[last].push(t);
    }
    let search = WeightSearch { surface, order: &order, closes: &closes, tri_edges: &tri_edges };
    // Split on the first edge's weight for parallelism.
    let first = order[0];
    let parts: Vec<Vec<NormalCurve>> = (0..=bound as u32)
        .into_par_iter()
        .map(|x| {
            let mut w = vec![0u32; ne];
            w[first] = x;
            let mut out = Vec::new();
            if search.triangles_ok(0, &w) {
                search.run(1, bound - x as u64, &mut w, &mut out, max_curves);
            }
            out
        })
        .collect();
    let total: usize = parts.iter().map(Vec::len).sum();
    if total > max_curves {
        return Err(Error::BudgetTooLarge(format!("more than {max_curves} curves")));
    }
    let mut out: Vec<NormalCurve> = parts.into_iter().flatten().collect();
    out.sort_by(|a, b| a.code().cmp(b.code()));
    Ok(out)
}

struct WeightSearch<'a> {
    surface: &'a Surface,
    order: &'a [usize],
    closes: &'a [Vec<usize>],
    tri_edges: &'a [[usize; 3]],
}

impl WeightSearch<'_> {
    fn triangles_ok(&self, i: usize, w: &[u32]) -> bool {
        self.closes[i].iter().all(|&t| {
            let [a, b, c] = self.tri_edges[t].map(|e| w[e]);
            (a + b + c) % 2 == 0 && a <= b + c && b <= a + c && c <= a + b
        })
    }

    fn run(&self, i: usize, left: u64, w: &mut [u32], out: &mut Vec<NormalCurve>, cap: usize) {
        if out.len() > cap {
            return;
        }
        if i == self.order.len() {
            if w.iter().all(|&x| x == 0) {
                return;
            }
            let corners: Vec<[u32; 3]> = self
                .tri_edges
                .iter()
                .map(|te| {
                    let x = te.map(|e| w[e]);
                    [0, 1, 2].map(|k| (x[(k + 2) % 3] + x[k] - x[(k + 1) % 3]) / 2)
                })
                .collect();
            if let Ok(c) = NormalCurve::from_corners(self.surface, corners) {
                if c.classify(self.surface) == Classification::Essential {
                    out.push(c);
                }
            }
            return;
        }
        let e = self.order[i];
        for x in 0..=left as u32 {
            w[e] = x;
            if self.triangles_ok(i, w) {
                self.run(i + 1, left - x as u64, w, out, cap);
            }
        }
        w[e] = 0;
    }
}

/// Upper bound on curve-graph distance from the intersection number:
/// `d ≤ 2·log2(i) + 2`, evaluated exactly as `floor(log2(i²)) + 2`.
pub fn intersection_upper_bound(i: u64) -> u32 {
    if i == 0 {
        return 1;
    }
    let sq = (i as u128) * (i as u128);
    (127 - sq.leading_zeros()) + 2
}

/// What is known about two distinct, intersecting vertices before searching.
struct Elementary {
    /// Vertices of the complex disjoint from both, found on the boundary of a
    /// neighbourhood of their union.
    middles: Vec<NormalCurve>,
    intersection: u64,
}

fn elementary(surface: &Surface, a: &NormalCurve, b: &NormalCurve, kind: &ComplexKind) -> Result<Elementary> {
    let intersection = geometric_intersection(surface, a, b)?;
    let mut middles: Vec<NormalCurve> =
        boundary_of_union(surface, a, b)?.into_iter().filter(|c| kind.contains(surface, c)).collect();
    middles.sort_by(|x, y| x.code().cmp(y.code()));
    middles.dedup();
    Ok(Elementary { middles, intersection })
}

/// Vertex ids: enumerated curves first, then any query curve that is not
/// enumerated.
struct Search<'a> {
    surface: &'a Surface,
    enumr: &'a Enumeration,
    members: Vec<bool>,
    extras: Vec<NormalCurve>,
    extra_nbrs: Vec<Vec<u32>>,
}

impl<'a> Search<'a> {
    fn new(surface: &'a Surface, enumr: &'a Enumeration, kind: &ComplexKind) -> Search<'a> {
        Search { surface, enumr, members: enumr.members(surface, kind), extras: Vec::new(), extra_nbrs: Vec::new() }
    }

    fn n(&self) -> usize {
        self.enumr.curves.len()
    }

    fn id_of(&mut self, c: &NormalCurve) -> u32 {
        if let Some(i) = self.enumr.index_of(c.code()) {
            if self.members[i] {
                return i as u32;
            }
        }
        if let Some(j) = self.extras.iter().position(|x| x == c) {
            return (self.n() + j) as u32;
        }
        let n = self.n();
        let nbrs: Vec<u32> = (0..n)
            .into_par_iter()
            .filter(|&u| self.members[u] && disjoint(self.surface, c, &self.enumr.curves[u]))
            .map(|u| u as u32)
            .collect();
        self.extras.push(c.clone());
        self.extra_nbrs.push(nbrs);
        (n + self.extras.len() - 1) as u32
    }

    /// Adds every vertex obtained by surgering `x` with a light curve: the
    /// boundary components of a neighbourhood of `x ∪ y`, which miss `x`.
    fn add_surgeries(&mut self, x: &NormalCurve, kind: &ComplexKind) -> Result<()> {
        let light = light_curves(self.surface)?;
        for y in light.curves().iter() {
            if disjoint(self.surface, x, y) {
                continue;
            }
            for c in boundary_of_union(self.surface, x, y)? {
                if kind.contains(self.surface, &c) {
                    self.id_of(&c);
                }
            }
        }
        Ok(())
    }

    /// Adds a chain of vertices from `from` toward `to`: each is obtained from
    /// the previous one by closing an arc of `to` along it, which gives a
    /// disjoint curve meeting `to` fewer times. Stops once `to` is reached or
    /// no surgery lowers the intersection.
    fn add_chain(&mut self, from: &NormalCurve, to: &NormalCurve, kind: &ComplexKind) -> Result<()> {
        let mut x = from.clone();
        let mut ix = geometric_intersection(self.surface, &x, to)?;
        while ix > 0 {
            let mut best: Option<(u64, u64, NormalCurve)> = None;
            for c in arc_surgeries(self.surface, to, &x)? {
                if &c == to || !kind.contains(self.surface, &c) || !disjoint(self.surface, &c, &x) {
                    continue;
                }
                let i = geometric_intersection(self.surface, &c, to)?;
                let key = (i, c.total_weight());
                if best.as_ref().is_none_or(|(bi, bw, _)| key < (*bi, *bw)) {
                    best = Some((key.0, key.1, c));
                }
            }
            match best {
                Some((i, _, c)) if i < ix => {
                    self.id_of(&c);
                    x = c;
                    ix = i;
                }
                _ => break,
            }
        }
        Ok(())
    }

    fn curve(&self, v: u32) -> &NormalCurve {
        let v = v as usize;
        if v < self.n() {
            &self.enumr.curves[v]
        } else {
            &self.extras[v - self.n()]
        }
    }

    fn neighbours(&self, v: u32) -> Vec<u32> {
        let n = self.n();
        let vu = v as usize;
        let mut out: Vec<u32> = if vu < n {
            self.enumr.neighbours(self.surface, vu).iter().copied().filter(|&u| self.members[u as usize]).collect()
        } else {
            self.extra_nbrs[vu - n].clone()
        };
        let c = self.curve(v);
        for (j, x) in self.extras.iter().enumerate() {
            let id = (n + j) as u32;
            if id != v && x != c && disjoint(self.surface, c, x) {
                out.push(id);
            }
        }
        out.sort_unstable();
        out
    }

    /// Breadth-first layers from `start` up to `depth`.
    fn layers(&self, start: u32, depth: u32) -> HashMap<u32, u32> {
        let mut dist = HashMap::from([(start, 0u32)]);
        let mut frontier = vec![start];
        for k in 1..=depth {
            let lists: Vec<Vec<u32>> = frontier.par_iter().map(|&v| self.neighbours(v)).collect();
            let mut next = Vec::new();
            for list in lists {
                for u in list {
                    if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(u) {
                        e.insert(k);
                        next.push(u);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            next.sort_unstable();
            frontier = next;
        }
        dist
    }

    /// Shortest path from `a` to `b`, if one exists within the enumeration.
    fn shortest(&self, a: u32, b: u32, max_depth: u32) -> Option<Vec<u32>> {
        let mut parent_a: HashMap<u32, u32> = HashMap::from([(a, a)]);
        let mut parent_b: HashMap<u32, u32> = HashMap::from([(b, b)]);
        let mut front_a = vec![a];
        let mut front_b = vec![b];
        let mut depth = 0;
        while !front_a.is_empty() && !front_b.is_empty() && depth < max_depth {
            depth += 1;
            let expand_a = front_a.len() <= front_b.len();
            let (front, parents, others) = if expand_a {
                (&mut front_a, &mut parent_a, &parent_b)
            } else {
                (&mut front_b, &mut parent_b, &parent_a)
            };
            let lists: Vec<Vec<u32>> = front.par_iter().map(|&v| self.neighbours(v)).collect();
            let mut next = Vec::new();
            let mut meet: Option<(u32, u32)> = None;
            for (&v, list) in front.iter().zip(lists) {
                for u in list {
                    if others.contains_key(&u) && meet.is_none() {
                        meet = Some((v, u));
                    }
                    if let std::collections::hash_map::Entry::Vacant(e) = parents.entry(u) {
                        e.insert(v);
                        next.push(u);
                    }
                }
            }
            if let Some((v, u)) = meet {
                // Walk back to both roots.
                let (pa, pb, va, vb) =
                    if expand_a { (&parent_a, &parent_b, v, u) } else { (&parent_a, &parent_b, u, v) };
                let mut left = vec![va];
                let mut x = va;
                while pa[&x] != x {
                    x = pa[&x];
                    left.push(x);
                }
                left.reverse();
                let mut x = vb;
                left.push(x);
                while pb[&x] != x {
                    x = pb[&x];
                    left.push(x);
                }
                return Some(left);
            }
            next.sort_unstable();
            *front = next;
        }
        None
    }
}

const MAX_DEPTH: u32 = 64;

/// Total weight of the curves used for surgery near query endpoints. Fixed,
/// so that enlarging the budget only ever adds vertices.
pub const SURGERY_WEIGHT: u64 = 10;

fn light_curves(surface: &Surface) -> Result<Arc<Enumeration>> {
    enumeration(surface, Budget::new(SURGERY_WEIGHT))
}

/// A product of twists about named generators, used to carry a query to a
/// lighter position. Distances, geodesics and witnesses move along with it.
struct Frame {
    moves: Vec<(NormalCurve, i64)>,
}

impl Frame {
    fn is_identity(&self) -> bool {
        self.moves.is_empty()
    }

    fn push(&self, surface: &Surface, c: &NormalCurve) -> Result<NormalCurve> {
        let mut c = c.clone();
        for (along, power) in &self.moves {
            c = dehn_twist(surface, along, *power, &c)?;
        }
        Ok(c)
    }

    fn pull(&self, surface: &Surface, c: &NormalCurve) -> Result<NormalCurve> {
        let mut c = c.clone();
        for (along, power) in self.moves.iter().rev() {
            c = dehn_twist(surface, along, -power, &c)?;
        }
        Ok(c)
    }

    fn push_kind(&self, surface: &Surface, kind: &ComplexKind) -> Result<ComplexKind> {
        Ok(match kind {
            ComplexKind::Witness(w) => ComplexKind::Witness(Witness::from_boundary(surface, &self.push(surface, w.boundary())?)?),
            k => k.clone(),
        })
    }
}

const MAX_LIGHTEN_STEPS: usize = 64;

/// Greedily applies single twists about generators while they lower the total
/// weight of the query curves (and of the witness boundary, if any).
fn lighten(surface: &Surface, curves: &[&NormalCurve], kind: &ComplexKind) -> Result<Frame> {
    let gens: Vec<NormalCurve> = surface
        .generator_names()
        .map(|n| generator(surface, n))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|g| g.is_essential(surface))
        .collect();
    let mut current: Vec<NormalCurve> = curves.iter().map(|&c| c.clone()).collect();
    if let ComplexKind::Witness(w) = kind {
        current.push(w.boundary().clone());
    }
    let total = |cs: &[NormalCurve]| cs.iter().map(NormalCurve::total_weight).sum::<u64>();
    let mut moves = Vec::new();
    for _ in 0..MAX_LIGHTEN_STEPS {
        let base = total(&current);
        let candidates: Vec<(u64, usize, i64, Vec<NormalCurve>)> = gens
            .par_iter()
            .enumerate()
            .flat_map_iter(|(i, g)| [-1i64, 1].into_iter().map(move |p| (i, g, p)))
            .filter_map(|(i, g, p)| {
                let moved: Result<Vec<NormalCurve>> = current.iter().map(|c| dehn_twist(surface, g, p, c)).collect();
                moved.ok().map(|m| (total(&m), i, p, m))
            })
            .collect();
        let Some(best) = candidates.into_iter().min_by_key(|(w, i, p, _)| (*w, *i, *p)) else { break };
        if best.0 >= base {
            break;
        }
        moves.push((gens[best.1].clone(), best.2));
        current = best.3;
    }
    Ok(Frame { moves })
}

fn pull_codes(surface: &Surface, frame: &Frame, codes: Vec<CanonicalCode>) -> Result<Vec<CanonicalCode>> {
    codes
        .iter()
        .map(|c| Ok(frame.pull(surface, &NormalCurve::from_weights(surface, &c.0)?)?.code().clone()))
        .collect()
}

/// Distance between two vertices of `kind`.
pub fn distance(
    surface: &Surface,
    a: &NormalCurve,
    b: &NormalCurve,
    kind: &ComplexKind,
    budget: Budget,
) -> Result<DistanceResult> {
    kind.check(surface, a)?;
    kind.check(surface, b)?;
    let done = |value: u32, certificate: Vec<&NormalCurve>| DistanceResult {
        value,
        exact: true,
        lower: value,
        weight_budget: budget.weight,
        certificate: Some(certificate.into_iter().map(|c| c.code().clone()).collect()),
    };
    if a == b {
        return Ok(done(0, vec![a]));
    }
    if disjoint(surface, a, b) {
        return Ok(done(1, vec![a, b]));
    }
    let el = elementary(surface, a, b, kind)?;
    if let Some(m) = el.middles.first() {
        return Ok(done(2, vec![a, m, b]));
    }
    let frame = lighten(surface, &[a, b], kind)?;
    if !frame.is_identity() {
        let (a2, b2, kind2) = (frame.push(surface, a)?, frame.push(surface, b)?, frame.push_kind(surface, kind)?);
        let mut r = distance(surface, &a2, &b2, &kind2, budget)?;
        r.certificate = r.certificate.map(|codes| pull_codes(surface, &frame, codes)).transpose()?;
        return Ok(r);
    }
    let enumr = enumeration(surface, budget)?;
    let mut search = Search::new(surface, &enumr, kind);
    let (ia, ib) = (search.id_of(a), search.id_of(b));
    search.add_surgeries(a, kind)?;
    search.add_surgeries(b, kind)?;
    search.add_chain(a, b, kind)?;
    search.add_chain(b, a, kind)?;
    let found = search.shortest(ia, ib, MAX_DEPTH);
    let fallback = match kind {
        ComplexKind::Surviving => None,
        _ => Some(intersection_upper_bound(el.intersection)),
    };
    match (found, fallback) {
        (Some(path), fb) => {
            let value = (path.len() - 1) as u32;
            if let Some(f) = fb.filter(|&f| f < value) {
                return Ok(DistanceResult { value: f, exact: f == 3, lower: 3, weight_budget: budget.weight, certificate: None });
            }
            Ok(DistanceResult {
                value,
                exact: value == 3,
                lower: 3,
                weight_budget: budget.weight,
                certificate: Some(path.iter().map(|&v| search.curve(v).code().clone()).collect()),
            })
        }
        (None, Some(f)) => {
            Ok(DistanceResult { value: f.max(3), exact: f <= 3, lower: 3, weight_budget: budget.weight, certificate: None })
        }
        (None, None) => Err(Error::Undecided(budget.weight as u32)),
    }
}

/// Geodesics between two vertices whose interior vertices are enumerated or,
/// at distance two, lie on the boundary of a neighbourhood of `a ∪ b`.
pub fn geodesics(
    surface: &Surface,
    a: &NormalCurve,
    b: &NormalCurve,
    kind: &ComplexKind,
    budget: Budget,
    max_paths: usize,
) -> Result<GeodesicSet> {
    let dist = distance(surface, a, b, kind, budget)?;
    let path = |vs: Vec<NormalCurve>| GeodesicPath { vertices: vs, complex: kind.clone() };
    match dist.value {
        0 => {
            return Ok(GeodesicSet { distance: dist, paths: vec![path(vec![a.clone()])], exhaustive: true, truncated: false })
        }
        1 => {
            return Ok(GeodesicSet {
                distance: dist,
                paths: vec![path(vec![a.clone(), b.clone()])],
                exhaustive: true,
                truncated: false,
            })
        }
        _ => {}
    }
    let frame = lighten(surface, &[a, b], kind)?;
    if !frame.is_identity() {
        let (a2, b2, kind2) = (frame.push(surface, a)?, frame.push(surface, b)?, frame.push_kind(surface, kind)?);
        let set = geodesics(surface, &a2, &b2, &kind2, budget, max_paths)?;
        let mut paths = Vec::with_capacity(set.paths.len());
        for p in set.paths {
            let vertices = p.vertices.iter().map(|v| frame.pull(surface, v)).collect::<Result<Vec<_>>>()?;
            paths.push(path(vertices));
        }
        paths.sort_by_cached_key(GeodesicPath::codes);
        return Ok(GeodesicSet { distance: dist, paths, exhaustive: set.exhaustive, truncated: set.truncated });
    }
    let enumr = enumeration(surface, budget)?;
    let mut search = Search::new(surface, &enumr, kind);
    let (ia, ib) = (search.id_of(a), search.id_of(b));
    search.add_surgeries(a, kind)?;
    search.add_surgeries(b, kind)?;
    search.add_chain(a, b, kind)?;
    search.add_chain(b, a, kind)?;
    let mut paths = Vec::new();
    let mut truncated = false;
    let mut exhaustive = false;
    if dist.value == 2 {
        let el = elementary(surface, a, b, kind)?;
        let mut middles: Vec<NormalCurve> = el.middles.clone();
        let na: std::collections::HashSet<u32> = search.neighbours(ia).into_iter().collect();
        for u in search.neighbours(ib) {
            if na.contains(&u) {
                let c = search.curve(u).clone();
                if !middles.contains(&c) {
                    middles.push(c);
                }
            }
        }
        middles.sort_by(|x, y| x.code().cmp(y.code()));
        if middles.len() > max_paths {
            middles.truncate(max_paths);
            truncated = true;
        }
        exhaustive = !truncated && complement_is_finite(surface, a, b)?;
        paths = middles.into_iter().map(|m| path(vec![a.clone(), m, b.clone()])).collect();
    } else if dist.certificate.is_some() {
        let d = dist.value;
        let ha = d.div_ceil(2);
        let hb = d - ha;
        let da = search.layers(ia, ha);
        let db = search.layers(ib, hb);
        let mut stack = vec![ia];
        let walk = PathWalk { search: &search, da: &da, db: &db, ha, hb, d, target: ib, cap: max_paths };
        let mut raw: Vec<Vec<u32>> = Vec::new();
        walk.run(&mut stack, &mut raw, &mut truncated);
        raw.sort_by(|x, y| {
            let cx: Vec<&CanonicalCode> = x.iter().map(|&v| search.curve(v).code()).collect();
            let cy: Vec<&CanonicalCode> = y.iter().map(|&v| search.curve(v).code()).collect();
            cx.cmp(&cy)
        });
        let out = raw.into_iter().map(|p| path(p.iter().map(|&v| search.curve(v).clone()).collect())).collect();
        return Ok(GeodesicSet { distance: dist, paths: out, exhaustive: false, truncated });
    }
    Ok(GeodesicSet { distance: dist, paths, exhaustive, truncated })
}

struct PathWalk<'a> {
    search: &'a Search<'a>,
    da: &'a HashMap<u32, u32>,
    db: &'a HashMap<u32, u32>,
    ha: u32,
    hb: u32,
    d: u32,
    target: u32,
    cap: usize,
}

impl PathWalk<'_> {
    /// Vertex `u` can sit at step `k` of a geodesic only if it is at distance
    /// `k` from the start and `d - k` from the end; each of these is known
    /// exactly within its search radius and known to exceed it otherwise.
    fn fits(&self, u: u32, k: u32) -> bool {
        let on = |layers: &HashMap<u32, u32>, r: u32, want: u32| match layers.get(&u) {
            Some(&x) => x == want,
            None => want > r,
        };
        on(self.da, self.ha, k) && on(self.db, self.hb, self.d - k)
    }

    fn run(&self, stack: &mut Vec<u32>, out: &mut Vec<Vec<u32>>, truncated: &mut bool) {
        if out.len() >= self.cap {
            *truncated = true;
            return;
        }
        let i = (stack.len() - 1) as u32;
        let v = *stack.last().unwrap();
        if i == self.d {
            if v == self.target {
                out.push(stack.clone());
            }
            return;
        }
        for u in self.search.neighbours(v) {
            if self.fits(u, i + 1) {
                stack.push(u);
                self.run(stack, out, truncated);
                stack.pop();
            }
        }
    }
}

/// Whether only finitely many curves are disjoint from both `a` and `b`.
///
/// Cutting along the essential boundary curves of a neighbourhood of `a ∪ b`
/// leaves the piece filled by `a ∪ b`, which has positive complexity, and the
/// complementary pieces. Any further piece of positive complexity carries
/// infinitely many curves missing both.
fn complement_is_finite(surface: &Surface, a: &NormalCurve, b: &NormalCurve) -> Result<bool> {
    let mut comps: Vec<NormalCurve> =
        boundary_of_union(surface, a, b)?.into_iter().filter(|c| c.is_essential(surface)).collect();
    comps.sort_by(|x, y| x.code().cmp(y.code()));
    comps.dedup();
    let pieces = cut_along(surface, &comps)?.pieces;
    let big = pieces
        .iter()
        .filter(|p| 3 * p.genus as i64 - 3 + p.punctures.len() as i64 + p.boundaries as i64 > 0)
        .count();
    Ok(big <= 1)
}
