//! Complementary pieces of a multicurve.
//!
//! The normal arcs of the multicurve split every triangle into a central
//! region and a stack of thin regions at each corner. Regions are glued across
//! the gaps between consecutive strands on every edge; each class of the
//! resulting union-find is one piece. The topology of a piece follows from an
//! Euler-characteristic count of the cell structure it inherits.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::normal::{disjoint, edge_weights, trace_components, NormalCurve};
use crate::surface::{side, tri, HalfEdge, Surface, UnionFind};

/// One complementary component: its genus, the punctures it contains (by
/// index) and the number of boundary circles it gets from the cut.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Piece {
    pub genus: u32,
    pub punctures: Vec<usize>,
    pub boundaries: u32,
}

impl Piece {
    /// Euler characteristic of the piece with its punctures removed.
    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.punctures.len() as i64 - self.boundaries as i64
    }

    pub fn is_disk_around(&self, punctures: &[usize]) -> bool {
        self.genus == 0 && self.boundaries == 1 && self.punctures == punctures
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplementDecomposition {
    pub pieces: Vec<Piece>,
}

impl ComplementDecomposition {
    pub fn euler_sum(&self) -> i64 {
        self.pieces.iter().map(Piece::euler_characteristic).sum()
    }
}

struct Regions<'a> {
    corners: &'a [[u32; 3]],
    /// First region index of each triangle; the central region comes first,
    /// followed by the corner stacks of corners 0, 1, 2.
    offset: Vec<usize>,
}

impl Regions<'_> {
    /// Region between arcs `m - 1` and `m` at corner `k` of `t`, counting arcs
    /// outward from the vertex; `m == c_k` is the central region.
    fn corner(&self, t: usize, k: usize, m: u32) -> usize {
        let c = self.corners[t];
        if m == c[k] {
            return self.offset[t];
        }
        let before: u32 = c[..k].iter().sum();
        self.offset[t] + 1 + (before + m) as usize
    }

    /// Region touching gap `g` of side `h`, in the coordinates of `h`'s triangle.
    fn gap(&self, h: HalfEdge, g: u32) -> usize {
        let (t, i) = (tri(h), side(h));
        let c = self.corners[t];
        let w = c[i] + c[(i + 1) % 3];
        if g <= c[i] {
            self.corner(t, i, g)
        } else {
            self.corner(t, (i + 1) % 3, w - g)
        }
    }

    fn total(&self) -> usize {
        *self.offset.last().unwrap()
    }
}

/// Cuts the surface along pairwise disjoint, pairwise non-isotopic curves.
pub fn cut_along(surface: &Surface, curves: &[NormalCurve]) -> Result<ComplementDecomposition> {
    for c in curves {
        c.check_surface(surface)?;
    }
    for (i, a) in curves.iter().enumerate() {
        for b in &curves[i + 1..] {
            if a == b {
                return Err(Error::DuplicateComponent);
            }
            if !disjoint(surface, a, b) {
                return Err(Error::NotDisjoint);
            }
        }
    }
    let nt = surface.num_triangles();
    let mut corners = vec![[0u32; 3]; nt];
    for c in curves {
        for (acc, x) in corners.iter_mut().zip(c.corners()) {
            for k in 0..3 {
                acc[k] += x[k];
            }
        }
    }
    let weights = edge_weights(surface, &corners)?;
    let mut offset = Vec::with_capacity(nt + 1);
    let mut acc = 0usize;
    for c in &corners {
        offset.push(acc);
        acc += 1 + c.iter().map(|&x| x as usize).sum::<usize>();
    }
    offset.push(acc);
    let regions = Regions { corners: &corners, offset };
    let n = regions.total();

    let mut uf = UnionFind::new(n);
    for e in 0..surface.num_edges() {
        let h = surface.edge_rep(e);
        let g = surface.glue(h);
        let w = weights[e];
        for q in 0..=w {
            uf.union(regions.gap(h, q), regions.gap(g, w - q));
        }
    }

    // Cell counts per root: vertices, edges, faces, boundary circles.
    let mut v = vec![0i64; n];
    let mut ed = vec![0i64; n];
    let mut f = vec![0i64; n];
    let mut b = vec![0u32; n];
    let mut punctures: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for r in 0..n {
        let root = uf.find(r);
        f[root] += 1;
    }
    for t in 0..nt {
        for k in 0..3 {
            for m in 0..corners[t][k] {
                let (x, y) = (uf.find(regions.corner(t, k, m)), uf.find(regions.corner(t, k, m + 1)));
                ed[x] += 1;
                ed[y] += 1;
            }
            let root = uf.find(regions.corner(t, k, 0));
            punctures[root].insert(surface.corner_puncture(t, k));
        }
    }
    for e in 0..surface.num_edges() {
        let h = surface.edge_rep(e);
        let w = weights[e];
        for q in 0..=w {
            ed[uf.find(regions.gap(h, q))] += 1;
        }
        for q in 0..w {
            v[uf.find(regions.gap(h, q))] += 1;
            v[uf.find(regions.gap(h, q + 1))] += 1;
        }
    }
    for comp in trace_components(surface, &corners, &weights) {
        let s = comp[0];
        let h = surface.edge_rep(surface.edge(s.exit));
        b[uf.find(regions.gap(h, s.strand))] += 1;
        b[uf.find(regions.gap(h, s.strand + 1))] += 1;
    }

    let mut pieces = Vec::new();
    for r in 0..n {
        if uf.find(r) != r {
            continue;
        }
        let chi = v[r] + punctures[r].len() as i64 - ed[r] + f[r];
        let twice_genus = 2 - b[r] as i64 - chi;
        debug_assert!(twice_genus >= 0 && twice_genus % 2 == 0, "bad Euler count");
        pieces.push(Piece {
            genus: (twice_genus / 2) as u32,
            punctures: punctures[r].iter().copied().collect(),
            boundaries: b[r],
        });
    }
    pieces.sort_by(|x, y| (&x.punctures, x.genus, x.boundaries).cmp(&(&y.punctures, y.genus, y.boundaries)));
    Ok(ComplementDecomposition { pieces })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::{generator, load_surface};

    #[test]
    fn empty_cut_is_whole_surface() {
        let s = load_surface("S13").unwrap();
        let d = cut_along(&s, &[]).unwrap();
        assert_eq!(d.pieces, vec![Piece { genus: 1, punctures: vec![0, 1, 2], boundaries: 0 }]);
    }

    #[test]
    fn duplicate_and_crossing_components() {
        let s = load_surface("S06").unwrap();
        let a = generator(&s, "c_{p1,p2}").unwrap();
        let b = generator(&s, "c_{p2,p3}").unwrap();
        assert_eq!(cut_along(&s, &[a.clone(), a.clone()]), Err(Error::DuplicateComponent));
        assert_eq!(cut_along(&s, &[a, b]), Err(Error::NotDisjoint));
    }
}
