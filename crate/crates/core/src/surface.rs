//! Marked punctured surfaces carried by a fixed ideal triangulation.
//!
//! Triangles list their vertices counter-clockwise. Side `i` of a triangle runs
//! from vertex `i` to vertex `i + 1`, and corner `k` sits at vertex `k`, between
//! sides `k - 1` and `k`. A half-edge is a (triangle, side) pair encoded as
//! `3 * triangle + side`; every half-edge is glued to exactly one other with the
//! orientation reversed, so vertex `i` of `t` meets vertex `j + 1` of `t'` when
//! side `i` of `t` is glued to side `j` of `t'`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type HalfEdge = usize;

#[inline]
pub fn tri(h: HalfEdge) -> usize {
    h / 3
}

#[inline]
pub fn side(h: HalfEdge) -> usize {
    h % 3
}

#[inline]
pub fn half_edge(t: usize, s: usize) -> HalfEdge {
    3 * t + (s % 3)
}

/// On-disk description of a surface.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceDescriptor {
    pub id: String,
    pub genus: u32,
    pub punctures: Vec<String>,
    pub marked: String,
    /// Vertex labels of each triangle, counter-clockwise.
    pub triangles: Vec<[String; 3]>,
    /// `[t, s, t', s']`: side `s` of `t` is glued to side `s'` of `t'`.
    pub gluings: Vec<[usize; 4]>,
    /// Named curves as corner counts.
    #[serde(default)]
    pub generators: BTreeMap<String, Vec<[u32; 3]>>,
}

#[derive(Debug, Clone)]
pub struct Surface {
    id: String,
    genus: u32,
    punctures: Vec<String>,
    marked: usize,
    glue: Vec<HalfEdge>,
    edge_of: Vec<usize>,
    /// Canonical (smaller) half-edge of each edge.
    edge_rep: Vec<HalfEdge>,
    /// Puncture index at each corner `3 * t + k`.
    corner_puncture: Vec<usize>,
    generators: BTreeMap<String, Vec<[u32; 3]>>,
}

impl Surface {
    pub fn from_descriptor(desc: &SurfaceDescriptor) -> Result<Surface> {
        let n_tri = desc.triangles.len();
        let malformed = |msg: String| Error::MalformedTriangulation(msg);
        if n_tri == 0 {
            return Err(malformed("no triangles".into()));
        }
        let n_half = 3 * n_tri;
        let mut glue = vec![usize::MAX; n_half];
        for g in &desc.gluings {
            let [t, s, t2, s2] = *g;
            if t >= n_tri || t2 >= n_tri || s > 2 || s2 > 2 {
                return Err(malformed(format!("gluing {g:?} out of range")));
            }
            let (h, h2) = (half_edge(t, s), half_edge(t2, s2));
            if h == h2 {
                return Err(malformed(format!("side {s} of triangle {t} glued to itself")));
            }
            if glue[h] != usize::MAX || glue[h2] != usize::MAX {
                return Err(malformed(format!("gluing {g:?} reuses a side")));
            }
            glue[h] = h2;
            glue[h2] = h;
        }
        if let Some(h) = glue.iter().position(|&g| g == usize::MAX) {
            return Err(malformed(format!(
                "side {} of triangle {} has no partner",
                side(h),
                tri(h)
            )));
        }

        let mut edge_of = vec![usize::MAX; n_half];
        let mut edge_rep = Vec::new();
        for h in 0..n_half {
            if edge_of[h] == usize::MAX {
                edge_of[h] = edge_rep.len();
                edge_of[glue[h]] = edge_rep.len();
                edge_rep.push(h);
            }
        }

        // Corners meet across each glued side: vertex i of t with vertex j+1 of t',
        // and vertex i+1 of t with vertex j of t'.
        let mut uf = UnionFind::new(n_half);
        for h in 0..n_half {
            let g = glue[h];
            let (t, i) = (tri(h), side(h));
            let (t2, j) = (tri(g), side(g));
            uf.union(half_edge(t, i), half_edge(t2, j + 1));
            uf.union(half_edge(t, i + 1), half_edge(t2, j));
        }
        let mut class_label: BTreeMap<usize, String> = BTreeMap::new();
        for (t, labels) in desc.triangles.iter().enumerate() {
            for (k, label) in labels.iter().enumerate() {
                let root = uf.find(half_edge(t, k));
                match class_label.get(&root) {
                    Some(l) if l != label => {
                        return Err(malformed(format!(
                            "corner {k} of triangle {t} labelled {label} but glued to {l}"
                        )))
                    }
                    _ => {
                        class_label.insert(root, label.clone());
                    }
                }
            }
        }
        let distinct: BTreeSet<&String> = class_label.values().collect();
        if distinct.len() != class_label.len() {
            return Err(malformed("one label names several vertices".into()));
        }
        let declared: BTreeSet<&String> = desc.punctures.iter().collect();
        if declared.len() != desc.punctures.len() || declared != distinct {
            return Err(malformed(format!(
                "vertices {:?} do not match punctures {:?}",
                distinct, desc.punctures
            )));
        }
        let marked = desc
            .punctures
            .iter()
            .position(|p| *p == desc.marked)
            .ok_or_else(|| malformed(format!("marked point {} is not a puncture", desc.marked)))?;
        let corner_puncture = (0..n_half)
            .map(|c| {
                let label = &class_label[&uf.find(c)];
                desc.punctures.iter().position(|p| p == label).unwrap()
            })
            .collect();

        // Euler count with punctures filled in.
        let v = desc.punctures.len() as i64;
        let e = edge_rep.len() as i64;
        let f = n_tri as i64;
        if 3 * f != 2 * e {
            return Err(malformed("3 * triangles != 2 * edges".into()));
        }
        if v - e + f != 2 - 2 * desc.genus as i64 {
            return Err(malformed(format!(
                "Euler characteristic {} disagrees with genus {}",
                v - e + f,
                desc.genus
            )));
        }

        let mut seen = vec![false; n_tri];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(t) = stack.pop() {
            for s in 0..3 {
                let u = tri(glue[half_edge(t, s)]);
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(malformed("triangulation is disconnected".into()));
        }

        let xi = 3 * desc.genus as i64 - 3 + (v - 1);
        if xi < 2 {
            return Err(Error::ComplexityTooLow(xi));
        }

        Ok(Surface {
            id: desc.id.clone(),
            genus: desc.genus,
            punctures: desc.punctures.clone(),
            marked,
            glue,
            edge_of,
            edge_rep,
            corner_puncture,
            generators: desc.generators.clone(),
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn punctures(&self) -> &[String] {
        &self.punctures
    }

    pub fn puncture_label(&self, p: usize) -> &str {
        &self.punctures[p]
    }

    pub fn puncture_index(&self, label: &str) -> Option<usize> {
        self.punctures.iter().position(|p| p == label)
    }

    /// Index of the marked point z.
    pub fn marked(&self) -> usize {
        self.marked
    }

    pub fn num_triangles(&self) -> usize {
        self.glue.len() / 3
    }

    pub fn num_edges(&self) -> usize {
        self.edge_rep.len()
    }

    pub fn num_half_edges(&self) -> usize {
        self.glue.len()
    }

    #[inline]
    pub fn glue(&self, h: HalfEdge) -> HalfEdge {
        self.glue[h]
    }

    #[inline]
    pub fn edge(&self, h: HalfEdge) -> usize {
        self.edge_of[h]
    }

    #[inline]
    pub fn edge_rep(&self, e: usize) -> HalfEdge {
        self.edge_rep[e]
    }

    #[inline]
    pub fn is_rep(&self, h: HalfEdge) -> bool {
        self.edge_rep[self.edge_of[h]] == h
    }

    #[inline]
    pub fn corner_puncture(&self, t: usize, k: usize) -> usize {
        self.corner_puncture[half_edge(t, k)]
    }

    /// Complexity of the surface with z filled in.
    pub fn complexity(&self) -> i64 {
        3 * self.genus as i64 - 3 + (self.punctures.len() as i64 - 1)
    }

    /// Euler characteristic of the punctured surface.
    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.punctures.len() as i64
    }

    pub fn generator_names(&self) -> impl Iterator<Item = &str> {
        self.generators.keys().map(|s| s.as_str())
    }

    pub fn generator_corners(&self, name: &str) -> Option<&[[u32; 3]]> {
        self.generators.get(name).map(|v| v.as_slice())
    }

    /// Corners around puncture `p`, in counter-clockwise order, starting from
    /// the lowest-numbered one. Each corner is `(triangle, k)`.
    pub fn link(&self, p: usize) -> Vec<(usize, usize)> {
        let start = (0..self.num_half_edges())
            .find(|&c| self.corner_puncture[c] == p)
            .expect("every puncture has a corner");
        self.link_from(tri(start), side(start))
    }

    /// The cycle of corners around the vertex of corner `(t, k)`, starting there.
    /// Moving from corner `(t, k)` crosses side `k`.
    pub fn link_from(&self, t: usize, k: usize) -> Vec<(usize, usize)> {
        let mut out = vec![(t, k)];
        let (mut ct, mut ck) = (t, k);
        loop {
            let g = self.glue[half_edge(ct, ck)];
            ct = tri(g);
            ck = (side(g) + 1) % 3;
            if (ct, ck) == (t, k) {
                return out;
            }
            out.push((ct, ck));
        }
    }

    pub fn descriptor_summary(&self) -> SurfaceSummary {
        SurfaceSummary {
            id: self.id.clone(),
            genus: self.genus,
            punctures: self.punctures.clone(),
            marked: self.punctures[self.marked].clone(),
            triangles: self.num_triangles(),
            edges: self.num_edges(),
            complexity: self.complexity(),
            generators: self.generators.keys().cloned().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceSummary {
    pub id: String,
    pub genus: u32,
    pub punctures: Vec<String>,
    pub marked: String,
    pub triangles: usize,
    pub edges: usize,
    pub complexity: i64,
    pub generators: Vec<String>,
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tetrahedron() -> SurfaceDescriptor {
        // Boundary of a tetrahedron on vertices a, b, c, d.
        let t = |x: &str, y: &str, z: &str| [x.to_string(), y.to_string(), z.to_string()];
        SurfaceDescriptor {
            id: "S04".into(),
            genus: 0,
            punctures: vec!["z".into(), "a".into(), "b".into(), "c".into()],
            marked: "z".into(),
            triangles: vec![t("z", "a", "b"), t("z", "b", "c"), t("z", "c", "a"), t("a", "c", "b")],
            gluings: vec![
                [0, 2, 1, 0],
                [1, 2, 2, 0],
                [2, 2, 0, 0],
                [0, 1, 3, 2],
                [1, 1, 3, 1],
                [2, 1, 3, 0],
            ],
            generators: BTreeMap::new(),
        }
    }

    #[test]
    fn four_punctured_sphere_is_too_simple() {
        match Surface::from_descriptor(&tetrahedron()) {
            Err(Error::ComplexityTooLow(xi)) => assert_eq!(xi, 0),
            other => panic!("expected ComplexityTooLow, got {other:?}"),
        }
    }

    #[test]
    fn missing_gluing_is_malformed() {
        let mut d = tetrahedron();
        d.gluings.pop();
        assert!(matches!(
            Surface::from_descriptor(&d),
            Err(Error::MalformedTriangulation(_))
        ));
    }

    #[test]
    fn mislabelled_corner_is_malformed() {
        let mut d = tetrahedron();
        d.triangles[3][0] = "b".into();
        assert!(matches!(
            Surface::from_descriptor(&d),
            Err(Error::MalformedTriangulation(_))
        ));
    }
}
