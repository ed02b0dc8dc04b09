//! Minimal-position diagrams of two normal curves.
//!
//! Strands of both curves are merged along every edge. Two strands that share
//! a stretch of path are followed in both directions until they split; at each
//! end, whichever turns toward the lower corner lies lower. The order on an edge
//! is the one seen at the nearer end of the stretch, as for geodesics: along a
//! shared stretch the nearer end switches once, in the middle, so two strands
//! cross at most once there and only when the two ends disagree. The resulting
//! diagram has no bigons and its crossing count is the geometric intersection
//! number.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::normal::{reduce_walk, NormalCurve, Step};
use crate::surface::{side, tri, HalfEdge, Surface};

/// A transverse crossing inside `triangle` between arc `a_arc` of the first
/// curve and arc `b_arc` of the second. Arc `n` of a curve is the piece inside
/// the triangle it leaves through step `n` of its walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crossing {
    pub triangle: usize,
    pub a_arc: usize,
    pub b_arc: usize,
}

/// Piece of a curve between two consecutive crossings, following the curve
/// forward from crossing `from` to crossing `to`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub from: usize,
    pub to: usize,
    pub exits: Vec<HalfEdge>,
}

#[derive(Debug, Clone)]
pub struct IntersectionDiagram {
    crossings: Vec<Crossing>,
    /// Crossings along each arc, in forward order, per curve.
    along: [Vec<Vec<usize>>; 2],
    /// Index of each crossing within its arc list, per curve.
    rank: Vec<[usize; 2]>,
    /// Boundary coordinates of the prongs at each crossing:
    /// a forward, a backward, b forward, b backward.
    prongs: Vec<[u64; 4]>,
    perim: u64,
    /// Exits of each curve, and the glued exits used when walking backward.
    walks: [Vec<HalfEdge>; 2],
    back: [Vec<HalfEdge>; 2],
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Dir {
    Fwd,
    Bwd,
}

struct Ray<'a> {
    walk: &'a [Step],
    idx: usize,
    dir: Dir,
}

impl Ray<'_> {
    fn next(&mut self, surface: &Surface) -> HalfEdge {
        let n = self.walk.len();
        match self.dir {
            Dir::Fwd => {
                self.idx = (self.idx + 1) % n;
                self.walk[self.idx].exit
            }
            Dir::Bwd => {
                self.idx = (self.idx + n - 1) % n;
                surface.glue(self.walk[self.idx].exit)
            }
        }
    }
}

/// Order of two rays entering a triangle side by side through side `entered`,
/// measured counter-clockwise along the entry side, together with the number
/// of triangles they share before splitting.
fn compare_rays(surface: &Surface, mut ra: Ray, mut rb: Ray, mut entered: usize, limit: usize) -> (Ordering, usize) {
    for k in 0..limit {
        let (xa, xb) = (ra.next(surface), rb.next(surface));
        if xa != xb {
            let ord = if side(xa) == (entered + 2) % 3 { Ordering::Less } else { Ordering::Greater };
            return (ord, k);
        }
        entered = side(surface.glue(xa));
    }
    (Ordering::Equal, limit)
}

/// Canonical order of strand `n` of `a` and strand `m` of `b` on their
/// common edge: the order seen at whichever end of their shared stretch is
/// nearer, or the far side of the edge's representative on a tie.
fn compare_strands(surface: &Surface, a: &NormalCurve, n: usize, b: &NormalCurve, m: usize) -> Ordering {
    let h0 = surface.edge_rep(surface.edge(a.walk()[n].exit));
    let limit = a.len() + b.len() + 2;
    let into_t1 = |c: &NormalCurve, i: usize| if c.walk()[i].exit == h0 { Dir::Fwd } else { Dir::Bwd };
    let flip = |d: Dir| if d == Dir::Fwd { Dir::Bwd } else { Dir::Fwd };
    let (da, db) = (into_t1(a, n), into_t1(b, m));
    let (up, lu) = compare_rays(
        surface,
        Ray { walk: a.walk(), idx: n, dir: da },
        Ray { walk: b.walk(), idx: m, dir: db },
        side(surface.glue(h0)),
        limit,
    );
    let (down, ld) = compare_rays(
        surface,
        Ray { walk: a.walk(), idx: n, dir: flip(da) },
        Ray { walk: b.walk(), idx: m, dir: flip(db) },
        side(h0),
        limit,
    );
    // Coordinates beyond the edge run opposite to the canonical ones.
    if up != Ordering::Equal && lu <= ld {
        up.reverse()
    } else if down != Ordering::Equal {
        down
    } else {
        Ordering::Less
    }
}

/// Merged canonical strand positions of both curves on every edge.
pub fn merge_positions(surface: &Surface, a: &NormalCurve, b: &NormalCurve) -> ([Vec<u32>; 2], Vec<u32>) {
    let ne = surface.num_edges();
    let mut per_edge: [Vec<Vec<(u32, usize)>>; 2] = [vec![Vec::new(); ne], vec![Vec::new(); ne]];
    for (c, curve) in [a, b].iter().enumerate() {
        for (i, s) in curve.walk().iter().enumerate() {
            per_edge[c][surface.edge(s.exit)].push((s.strand, i));
        }
    }
    let mut pos = [vec![0u32; a.len()], vec![0u32; b.len()]];
    let mut totals = vec![0u32; ne];
    for e in 0..ne {
        per_edge[0][e].sort_unstable();
        per_edge[1][e].sort_unstable();
        let (la, lb) = (&per_edge[0][e], &per_edge[1][e]);
        let (mut i, mut j, mut k) = (0usize, 0usize, 0u32);
        while i < la.len() || j < lb.len() {
            let take_a = if i == la.len() {
                false
            } else if j == lb.len() {
                true
            } else {
                compare_strands(surface, a, la[i].1, b, lb[j].1) == Ordering::Less
            };
            if take_a {
                pos[0][la[i].1] = k;
                i += 1;
            } else {
                pos[1][lb[j].1] = k;
                j += 1;
            }
            k += 1;
        }
        totals[e] = k;
    }
    (pos, totals)
}

#[inline]
fn between_ccw(from: u64, x: u64, to: u64, perim: u64) -> bool {
    let dx = (x + perim - from) % perim;
    let dt = (to + perim - from) % perim;
    dx > 0 && dx < dt
}

impl IntersectionDiagram {
    /// Builds the bigon-free diagram of `a` and `b`. Isotopic curves are pushed
    /// off each other and give an empty diagram.
    pub fn new(surface: &Surface, a: &NormalCurve, b: &NormalCurve) -> Result<IntersectionDiagram> {
        a.check_surface(surface)?;
        if a.surface_id() != b.surface_id() {
            return Err(Error::SurfaceMismatch(a.surface_id().to_string(), b.surface_id().to_string()));
        }
        b.check_surface(surface)?;
        let walks = [a.exits(), b.exits()];
        let back = [
            walks[0].iter().map(|&h| surface.glue(h)).collect(),
            walks[1].iter().map(|&h| surface.glue(h)).collect(),
        ];
        let mut diagram = IntersectionDiagram {
            crossings: Vec::new(),
            along: [vec![Vec::new(); a.len()], vec![Vec::new(); b.len()]],
            rank: Vec::new(),
            prongs: Vec::new(),
            perim: 3,
            walks,
            back,
        };
        if a.code() == b.code() {
            return Ok(diagram);
        }
        let (pos, totals) = merge_positions(surface, a, b);
        let big = totals.iter().copied().max().unwrap_or(0) as u64 + 1;
        let perim = 3 * big;
        let coord = |h: HalfEdge, q: u32| -> u64 {
            let w = totals[surface.edge(h)];
            let p = if surface.is_rep(h) { q } else { w - 1 - q };
            side(h) as u64 * big + p as u64
        };
        // Chord endpoints (arc, entry, exit), grouped by triangle.
        let nt = surface.num_triangles();
        let mut chords: [Vec<Vec<(usize, u64, u64)>>; 2] = [vec![Vec::new(); nt], vec![Vec::new(); nt]];
        for (c, curve) in [a, b].iter().enumerate() {
            let w = curve.walk();
            let l = w.len();
            for n in 0..l {
                let prev = (n + l - 1) % l;
                let entry = coord(surface.glue(w[prev].exit), pos[c][prev]);
                let exit = coord(w[n].exit, pos[c][n]);
                chords[c][tri(w[n].exit)].push((n, entry, exit));
            }
        }
        let mut crossings = Vec::new();
        let mut prongs = Vec::new();
        for t in 0..nt {
            for &(n, ua, va) in &chords[0][t] {
                let (lo, hi) = (ua.min(va), ua.max(va));
                let inside = |x: u64| x > lo && x < hi;
                for &(m, ub, vb) in &chords[1][t] {
                    if inside(ub) != inside(vb) {
                        crossings.push(Crossing { triangle: t, a_arc: n, b_arc: m });
                        prongs.push([va, ua, vb, ub]);
                    }
                }
            }
        }
        let mut along = [vec![Vec::new(); a.len()], vec![Vec::new(); b.len()]];
        for (x, cr) in crossings.iter().enumerate() {
            along[0][cr.a_arc].push(x);
            along[1][cr.b_arc].push(x);
        }
        let mut rank = vec![[0usize; 2]; crossings.len()];
        for (c, lists) in along.iter_mut().enumerate() {
            for list in lists.iter_mut() {
                if list.len() > 1 {
                    // Crossings come in the order in which the crossing chords'
                    // endpoints on the left-hand side follow the entry point.
                    let key = |x: usize| {
                        let p = prongs[x];
                        let (u, v) = (p[2 * c + 1], p[2 * c]);
                        let o = 2 - 2 * c;
                        let e = if between_ccw(u, p[o], v, perim) { p[o] } else { p[o + 1] };
                        (e + perim - u) % perim
                    };
                    list.sort_by_key(|&x| key(x));
                }
                for (k, &x) in list.iter().enumerate() {
                    rank[x][c] = k;
                }
            }
        }
        diagram.crossings = crossings;
        diagram.along = along;
        diagram.rank = rank;
        diagram.prongs = prongs;
        diagram.perim = perim;
        Ok(diagram)
    }

    pub fn count(&self) -> usize {
        self.crossings.len()
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    /// Crossings met along arc `arc` of curve `curve` (0 = first, 1 = second),
    /// in the curve's forward direction.
    pub fn crossings_on_arc(&self, curve: usize, arc: usize) -> &[usize] {
        &self.along[curve][arc]
    }

    /// True if, travelling along the second curve through crossing `x`, the
    /// first curve's forward direction turns left.
    pub fn a_forward_is_left_of_b(&self, x: usize) -> bool {
        let p = self.prongs[x];
        // The second curve runs entry p[3] -> exit p[2]; its left-hand side
        // is the counter-clockwise stretch of boundary from exit to entry.
        between_ccw(p[2], p[0], p[3], self.perim)
    }

    /// Pieces of curve `c` between consecutive crossings, followed forward.
    pub fn segments(&self, c: usize) -> Vec<Segment> {
        let mut out = Vec::new();
        for list in &self.along[c] {
            for &x in list {
                let (to, exits) = self.travel(x, c, Dir::Fwd);
                out.push(Segment { from: x, to, exits });
            }
        }
        out
    }

    /// Exits met following curve `c` from crossing `x` onward to crossing
    /// `y`, forward or backward along the curve. With `x == y` this is the
    /// whole curve.
    pub fn path_between(&self, c: usize, x: usize, y: usize, forward: bool) -> Vec<HalfEdge> {
        let d = if forward { Dir::Fwd } else { Dir::Bwd };
        let mut out = Vec::new();
        let mut cur = x;
        loop {
            let (next, exits) = self.travel(cur, c, d);
            out.extend(exits);
            cur = next;
            if cur == y {
                return out;
            }
        }
    }

    fn arc_of(&self, x: usize, c: usize) -> usize {
        let cr = self.crossings[x];
        if c == 0 {
            cr.a_arc
        } else {
            cr.b_arc
        }
    }

    /// Moves from crossing `x` along curve `c` to the next crossing, returning
    /// it together with the exits passed on the way.
    fn travel(&self, x: usize, c: usize, d: Dir) -> (usize, Vec<HalfEdge>) {
        let l = self.walks[c].len();
        let n = self.arc_of(x, c);
        let list = &self.along[c][n];
        let k = self.rank[x][c];
        let mut exits = Vec::new();
        match d {
            Dir::Fwd => {
                if k + 1 < list.len() {
                    return (list[k + 1], exits);
                }
                let mut m = n;
                loop {
                    exits.push(self.walks[c][m]);
                    m = (m + 1) % l;
                    if let Some(&y) = self.along[c][m].first() {
                        return (y, exits);
                    }
                }
            }
            Dir::Bwd => {
                if k > 0 {
                    return (list[k - 1], exits);
                }
                let mut m = n;
                loop {
                    let prev = (m + l - 1) % l;
                    exits.push(self.back[c][prev]);
                    m = prev;
                    if let Some(&y) = self.along[c][m].last() {
                        return (y, exits);
                    }
                }
            }
        }
    }

    /// Closed walks tracing the boundary of a regular neighbourhood of the
    /// union of both curves, one per complementary face of the diagram.
    /// Requires at least one crossing.
    pub fn boundary_walks(&self) -> Vec<Vec<HalfEdge>> {
        let nd = 4 * self.crossings.len();
        let mut seen = vec![false; nd];
        let mut faces = Vec::new();
        for start in 0..nd {
            if seen[start] {
                continue;
            }
            let mut walk = Vec::new();
            let mut dart = start;
            while !seen[dart] {
                seen[dart] = true;
                let (x, prong) = (dart / 4, dart % 4);
                let c = prong / 2;
                let d = if prong % 2 == 0 { Dir::Fwd } else { Dir::Bwd };
                let (y, exits) = self.travel(x, c, d);
                walk.extend(exits);
                // Arrive at `y` through the prong pointing back along the move,
                // then turn to the next prong counter-clockwise.
                let arrival = 2 * c + if d == Dir::Fwd { 1 } else { 0 };
                dart = 4 * y + self.next_prong(y, arrival);
            }
            faces.push(walk);
        }
        faces
    }

    fn next_prong(&self, x: usize, prong: usize) -> usize {
        let p = self.prongs[x];
        let from = p[prong];
        (0..4)
            .filter(|&q| q != prong)
            .min_by_key(|&q| (p[q] + self.perim - from) % self.perim)
            .expect("four prongs")
    }
}

/// Curves bounding a neighbourhood of `a ∪ b`, after tightening. Null and
/// repeated components are dropped.
pub fn boundary_of_union(surface: &Surface, a: &NormalCurve, b: &NormalCurve) -> Result<Vec<NormalCurve>> {
    let diagram = IntersectionDiagram::new(surface, a, b)?;
    if diagram.count() == 0 {
        let mut out = vec![a.clone()];
        if b != a {
            out.push(b.clone());
        }
        return Ok(out);
    }
    let mut out: Vec<NormalCurve> = Vec::new();
    for walk in diagram.boundary_walks() {
        let reduced = reduce_walk(surface, &walk);
        if reduced.is_empty() {
            continue;
        }
        let curve = NormalCurve::from_walk(surface, &reduced)?;
        if !out.contains(&curve) {
            out.push(curve);
        }
    }
    Ok(out)
}

/// Curves made by closing each arc of `y` between consecutive crossings with
/// `x` by one of the two arcs of `x` joining its ends. Only essential curves
/// are kept, each once, sorted by code. Empty when the curves are disjoint.
pub fn arc_surgeries(surface: &Surface, y: &NormalCurve, x: &NormalCurve) -> Result<Vec<NormalCurve>> {
    let diagram = IntersectionDiagram::new(surface, y, x)?;
    let mut curves: Vec<NormalCurve> = Vec::new();
    if diagram.count() == 0 {
        return Ok(curves);
    }
    for seg in diagram.segments(0) {
        for forward in [true, false] {
            let mut walk = seg.exits.clone();
            walk.extend(diagram.path_between(1, seg.to, seg.from, forward));
            let reduced = reduce_walk(surface, &walk);
            if reduced.is_empty() {
                continue;
            }
            let c = match NormalCurve::from_walk(surface, &reduced) {
                Ok(c) => c,
                Err(Error::NotSimple) => continue,
                Err(e) => return Err(e),
            };
            if c.is_essential(surface) && !curves.contains(&c) {
                curves.push(c);
            }
        }
    }
    curves.sort_by(|p, q| p.code().cmp(q.code()));
    Ok(curves)
}

/// Geometric intersection number of two curves on the same surface.
pub fn geometric_intersection(surface: &Surface, a: &NormalCurve, b: &NormalCurve) -> Result<u64> {
    Ok(IntersectionDiagram::new(surface, a, b)?.count() as u64)
}
