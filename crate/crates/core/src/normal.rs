//! Simple closed curves in normal position with respect to the triangulation.
//!
//! A normal curve is stored by its corner counts together with the closed walk
//! it traces: the cyclic sequence of sides it leaves triangles through, each with
//! the index of the strand on the crossed edge. Strand indices count along the
//! edge as seen counter-clockwise from the edge's representative half-edge.
//!
//! Ideal edges run between punctures, so a normal curve never cobounds a bigon
//! with an edge. Normal coordinates are therefore already tight, and the walk is
//! the cyclically reduced closed path in the dual ribbon graph.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::surface::{half_edge, side, tri, HalfEdge, Surface};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Step {
    pub exit: HalfEdge,
    pub strand: u32,
}

/// Edge weights of a tightened curve in edge order. Equal codes mean isotopic.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CanonicalCode(pub Vec<u32>);

impl CanonicalCode {
    /// Little-endian u32 edge weights.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.0.iter().flat_map(|w| w.to_le_bytes()).collect()
    }

    pub fn total_weight(&self) -> u64 {
        self.0.iter().map(|&w| w as u64).sum()
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, w) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{w}")?;
        }
        write!(f, "]")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    Trivial,
    Peripheral(usize),
    Essential,
}

/// Input to [`tighten`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawCurve {
    Corners(Vec<[u32; 3]>),
    /// Closed walk of exit half-edges; backtracks are allowed.
    Walk(Vec<HalfEdge>),
}

#[derive(Debug, Clone)]
pub struct NormalCurve {
    surface: Arc<str>,
    corners: Vec<[u32; 3]>,
    code: CanonicalCode,
    walk: Vec<Step>,
}

impl PartialEq for NormalCurve {
    fn eq(&self, other: &Self) -> bool {
        self.surface == other.surface && self.code == other.code
    }
}

impl Eq for NormalCurve {}

impl NormalCurve {
    pub fn from_corners(surface: &Surface, corners: Vec<[u32; 3]>) -> Result<NormalCurve> {
        let weights = edge_weights(surface, &corners)?;
        if weights.iter().all(|&w| w == 0) {
            return Err(Error::NullCurve);
        }
        let mut comps = trace_components(surface, &corners, &weights);
        if comps.len() != 1 {
            return Err(Error::Disconnected(comps.len()));
        }
        Ok(NormalCurve {
            surface: Arc::from(surface.id()),
            corners,
            code: CanonicalCode(weights),
            walk: comps.pop().unwrap(),
        })
    }

    /// The curve with the given edge weights, one per edge in edge order.
    pub fn from_weights(surface: &Surface, weights: &[u32]) -> Result<NormalCurve> {
        if weights.len() != surface.num_edges() {
            return Err(Error::Matching(format!("{} edges expected, got {}", surface.num_edges(), weights.len())));
        }
        let mut corners = Vec::with_capacity(surface.num_triangles());
        for t in 0..surface.num_triangles() {
            let x = [0, 1, 2].map(|s| weights[surface.edge(3 * t + s)]);
            let (sum, max) = (x[0] + x[1] + x[2], x[0].max(x[1]).max(x[2]));
            if sum % 2 != 0 || 2 * max > sum {
                return Err(Error::Matching(format!("triangle {t} has weights {x:?}")));
            }
            corners.push([0, 1, 2].map(|k| (x[(k + 2) % 3] + x[k] - x[(k + 1) % 3]) / 2));
        }
        NormalCurve::from_corners(surface, corners)
    }

    /// Tightens a closed walk in the dual graph and returns the curve it
    /// represents, provided that curve is simple.
    pub fn from_walk(surface: &Surface, walk: &[HalfEdge]) -> Result<NormalCurve> {
        check_walk(surface, walk)?;
        let reduced = reduce_walk(surface, walk);
        if reduced.is_empty() {
            return Err(Error::NullCurve);
        }
        let corners = walk_corners(surface, &reduced);
        let curve = match NormalCurve::from_corners(surface, corners) {
            Ok(c) => c,
            Err(Error::Disconnected(_)) => return Err(Error::NotSimple),
            Err(e) => return Err(e),
        };
        let exits: Vec<HalfEdge> = curve.walk.iter().map(|s| s.exit).collect();
        if !same_cycle(surface, &exits, &reduced) {
            return Err(Error::NotSimple);
        }
        Ok(curve)
    }

    pub fn surface_id(&self) -> &str {
        &self.surface
    }

    pub fn corners(&self) -> &[[u32; 3]] {
        &self.corners
    }

    pub fn code(&self) -> &CanonicalCode {
        &self.code
    }

    pub fn weights(&self) -> &[u32] {
        &self.code.0
    }

    pub fn total_weight(&self) -> u64 {
        self.code.total_weight()
    }

    pub fn walk(&self) -> &[Step] {
        &self.walk
    }

    pub fn len(&self) -> usize {
        self.walk.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walk.is_empty()
    }

    pub fn exits(&self) -> Vec<HalfEdge> {
        self.walk.iter().map(|s| s.exit).collect()
    }

    /// The puncture this curve encircles, if it is the link of a puncture.
    pub fn peripheral_puncture(&self, surface: &Surface) -> Option<usize> {
        let t0 = self.corners.iter().position(|c| c.iter().any(|&x| x > 0))?;
        let k0 = (0..3).find(|&k| self.corners[t0][k] > 0)?;
        let p = surface.corner_puncture(t0, k0);
        let link_only = self.corners.iter().enumerate().all(|(t, c)| {
            (0..3).all(|k| c[k] == u32::from(surface.corner_puncture(t, k) == p))
        });
        link_only.then_some(p)
    }

    pub fn classify(&self, surface: &Surface) -> Classification {
        match self.peripheral_puncture(surface) {
            Some(p) => Classification::Peripheral(p),
            None => Classification::Essential,
        }
    }

    pub fn is_essential(&self, surface: &Surface) -> bool {
        self.classify(surface) == Classification::Essential
    }

    pub fn check_surface(&self, surface: &Surface) -> Result<()> {
        if &*self.surface != surface.id() {
            return Err(Error::SurfaceMismatch(self.surface.to_string(), surface.id().to_string()));
        }
        Ok(())
    }
}

/// Returns the isotopy-minimal normal representative of `raw`.
pub fn tighten(surface: &Surface, raw: &RawCurve) -> Result<NormalCurve> {
    match raw {
        RawCurve::Corners(c) => {
            if c.len() != surface.num_triangles() {
                return Err(Error::Matching(format!(
                    "{} triangles expected, got {}",
                    surface.num_triangles(),
                    c.len()
                )));
            }
            NormalCurve::from_corners(surface, c.clone())
        }
        RawCurve::Walk(w) => NormalCurve::from_walk(surface, w),
    }
}

pub fn canonical(curve: &NormalCurve) -> CanonicalCode {
    curve.code.clone()
}

/// Per-edge weights; fails when the two sides of an edge disagree.
pub fn edge_weights(surface: &Surface, corners: &[[u32; 3]]) -> Result<Vec<u32>> {
    if corners.len() != surface.num_triangles() {
        return Err(Error::Matching(format!(
            "{} triangles expected, got {}",
            surface.num_triangles(),
            corners.len()
        )));
    }
    let mut out = Vec::with_capacity(surface.num_edges());
    for e in 0..surface.num_edges() {
        let h = surface.edge_rep(e);
        let g = surface.glue(h);
        let (wh, wg) = (side_weight(corners, h), side_weight(corners, g));
        if wh != wg {
            return Err(Error::Matching(format!("edge {e}: {wh} != {wg}")));
        }
        out.push(wh);
    }
    Ok(out)
}

#[inline]
pub(crate) fn side_weight(corners: &[[u32; 3]], h: HalfEdge) -> u32 {
    let (t, s) = (tri(h), side(h));
    corners[t][s] + corners[t][(s + 1) % 3]
}

/// Follows a strand one step: from exit `h` at position `p` (in the
/// coordinates of `h`'s triangle) to the next exit and its position.
#[inline]
pub(crate) fn next_exit(surface: &Surface, corners: &[[u32; 3]], h: HalfEdge, p: u32) -> (HalfEdge, u32) {
    let g = surface.glue(h);
    let w = side_weight(corners, h);
    let p2 = w - 1 - p;
    let (t, s) = (tri(g), side(g));
    let c = corners[t];
    if p2 < c[s] {
        let ns = (s + 2) % 3;
        let nh = half_edge(t, ns);
        (nh, side_weight(corners, nh) - 1 - p2)
    } else {
        (half_edge(t, s + 1), w - 1 - p2)
    }
}

#[inline]
pub(crate) fn to_canonical(surface: &Surface, h: HalfEdge, p: u32, w: u32) -> u32 {
    if surface.is_rep(h) {
        p
    } else {
        w - 1 - p
    }
}

/// Traces every component of the normal multicurve with the given coordinates.
pub fn trace_components(surface: &Surface, corners: &[[u32; 3]], weights: &[u32]) -> Vec<Vec<Step>> {
    let mut offset = Vec::with_capacity(weights.len() + 1);
    let mut acc = 0usize;
    for &w in weights {
        offset.push(acc);
        acc += w as usize;
    }
    offset.push(acc);
    let mut visited = vec![false; acc];
    let mut comps = Vec::new();
    for e in 0..weights.len() {
        for idx in 0..weights[e] {
            if visited[offset[e] + idx as usize] {
                continue;
            }
            let start = surface.edge_rep(e);
            let comp = trace_from(surface, corners, start, idx);
            for s in &comp {
                visited[offset[surface.edge(s.exit)] + s.strand as usize] = true;
            }
            comps.push(comp);
        }
    }
    comps
}

/// Traces the component through exit `h` at position `p` (in `h`'s coordinates).
pub(crate) fn trace_from(surface: &Surface, corners: &[[u32; 3]], h: HalfEdge, p: u32) -> Vec<Step> {
    let mut comp = Vec::new();
    let (mut ch, mut cp) = (h, p);
    loop {
        let w = side_weight(corners, ch);
        comp.push(Step { exit: ch, strand: to_canonical(surface, ch, cp, w) });
        let (nh, np) = next_exit(surface, corners, ch, cp);
        ch = nh;
        cp = np;
        if ch == h && cp == p {
            return comp;
        }
    }
}

/// True when `a` and `b` admit disjoint representatives (including `a == b`).
///
/// The normal multicurve with coordinates `a + b` is `a ⊔ b` exactly when the
/// curves are disjoint, so it is enough to trace one component of the sum.
pub fn disjoint(surface: &Surface, a: &NormalCurve, b: &NormalCurve) -> bool {
    if a.code == b.code {
        return true;
    }
    let sum: Vec<[u32; 3]> = a
        .corners
        .iter()
        .zip(&b.corners)
        .map(|(x, y)| [x[0] + y[0], x[1] + y[1], x[2] + y[2]])
        .collect();
    let e0 = (0..surface.num_edges())
        .find(|&e| a.code.0[e] + b.code.0[e] > 0)
        .expect("curves are nonempty");
    let start = surface.edge_rep(e0);
    let limit = a.len().max(b.len());
    let mut counts = vec![0u32; surface.num_edges()];
    let (mut h, mut p) = (start, 0u32);
    let mut len = 0usize;
    loop {
        counts[surface.edge(h)] += 1;
        len += 1;
        if len > limit {
            return false;
        }
        let (nh, np) = next_exit(surface, &sum, h, p);
        h = nh;
        p = np;
        if h == start && p == 0 {
            break;
        }
    }
    counts == a.code.0 || counts == b.code.0
}

pub fn check_walk(surface: &Surface, walk: &[HalfEdge]) -> Result<()> {
    let n = walk.len();
    for i in 0..n {
        let h = walk[i];
        if h >= surface.num_half_edges() {
            return Err(Error::Invalid(format!("half-edge {h} out of range")));
        }
        let next = walk[(i + 1) % n];
        if next >= surface.num_half_edges() || tri(next) != tri(surface.glue(h)) {
            return Err(Error::Invalid(format!("walk breaks after step {i}")));
        }
    }
    Ok(())
}

/// Free and cyclic reduction of a closed walk of exits.
pub fn reduce_walk(surface: &Surface, walk: &[HalfEdge]) -> Vec<HalfEdge> {
    let mut st: Vec<HalfEdge> = Vec::with_capacity(walk.len());
    for &h in walk {
        if let Some(&top) = st.last() {
            if h == surface.glue(top) {
                st.pop();
                continue;
            }
        }
        st.push(h);
    }
    let (mut i, mut j) = (0usize, st.len());
    while j - i >= 2 && st[i] == surface.glue(st[j - 1]) {
        i += 1;
        j -= 1;
    }
    st[i..j].to_vec()
}

/// Reverses a walk: same closed path traversed backwards.
pub fn reverse_walk(surface: &Surface, walk: &[HalfEdge]) -> Vec<HalfEdge> {
    walk.iter().rev().map(|&h| surface.glue(h)).collect()
}

/// Corner counts of a cyclically reduced walk.
pub fn walk_corners(surface: &Surface, walk: &[HalfEdge]) -> Vec<[u32; 3]> {
    let mut corners = vec![[0u32; 3]; surface.num_triangles()];
    let n = walk.len();
    for i in 0..n {
        let entry = surface.glue(walk[(i + n - 1) % n]);
        let exit = walk[i];
        debug_assert_eq!(tri(entry), tri(exit));
        let (si, k) = (side(entry), side(exit));
        debug_assert_ne!(si, k, "walk is not reduced");
        let corner = if k == (si + 1) % 3 { k } else { si };
        corners[tri(exit)][corner] += 1;
    }
    corners
}

/// Equality of closed walks up to rotation and reversal.
pub fn same_cycle(surface: &Surface, a: &[HalfEdge], b: &[HalfEdge]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    let rev = reverse_walk(surface, b);
    [b, rev.as_slice()].iter().any(|cand| {
        let n = cand.len();
        (0..n).any(|r| cand[r] == a[0] && (0..n).all(|i| cand[(r + i) % n] == a[i]))
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveFile {
    pub surface: String,
    pub corner_counts: Vec<[u32; 3]>,
}

impl CurveFile {
    pub fn from_curve(curve: &NormalCurve) -> CurveFile {
        CurveFile { surface: curve.surface_id().to_string(), corner_counts: curve.corners().to_vec() }
    }

    pub fn to_curve(&self, surface: &Surface) -> Result<NormalCurve> {
        if self.surface != surface.id() {
            return Err(Error::SurfaceMismatch(self.surface.clone(), surface.id().to_string()));
        }
        NormalCurve::from_corners(surface, self.corner_counts.clone())
    }
}
