//! Built-in surfaces and their named curves.
//!
//! `S06` is the six-punctured sphere glued from two hexagons with vertices
//! z, p1, ..., p5: the upper hexagon is fanned from z and the lower one from p1.
//! `S13` is the thrice-punctured torus made of three unit squares in a row, each
//! cut along its diagonal; the punctures z, p1, p2 sit at x = 0, 1, 2.
//!
//! Named curves `c_{x,y}` bound a neighbourhood of a straight arc from x to y in
//! the planar picture (the upper hexagon for S06, the bottom row for S13). The
//! torus additionally carries the vertical loops `a0`, `a1`, `a2` through the
//! three squares and the horizontal loop `b`.

use std::collections::BTreeMap;

use crate::arcs::{arc_boundary, IdealArc};
use crate::error::{Error, Result};
use crate::normal::NormalCurve;
use crate::surface::{half_edge, HalfEdge, Surface, SurfaceDescriptor};

const S06_JSON: &str = include_str!("../data/S06.json");
const S13_JSON: &str = include_str!("../data/S13.json");

pub const BUILTIN: [&str; 2] = ["S06", "S13"];

pub fn descriptor(id: &str) -> Result<SurfaceDescriptor> {
    let text = match id {
        "S06" => S06_JSON,
        "S13" => S13_JSON,
        other => return Err(Error::UnknownSurface(other.to_string())),
    };
    serde_json::from_str(text).map_err(|e| Error::MalformedTriangulation(e.to_string()))
}

/// Loads a registered surface by id.
pub fn load_surface(id: &str) -> Result<Surface> {
    Surface::from_descriptor(&descriptor(id)?)
}

/// Parses an explicit descriptor.
pub fn load_surface_json(text: &str) -> Result<Surface> {
    let desc: SurfaceDescriptor =
        serde_json::from_str(text).map_err(|e| Error::MalformedTriangulation(e.to_string()))?;
    Surface::from_descriptor(&desc)
}

pub fn generator(surface: &Surface, name: &str) -> Result<NormalCurve> {
    let corners = surface
        .generator_corners(name)
        .ok_or_else(|| Error::UnknownCurve(name.to_string()))?;
    NormalCurve::from_corners(surface, corners.to_vec())
}

/// Name of the round curve around punctures `x` and `y`.
pub fn pair_name(x: &str, y: &str) -> String {
    format!("c_{{{x},{y}}}")
}

#[derive(Debug, Clone)]
pub enum GeneratorSpec {
    Arc(IdealArc),
    Walk(Vec<HalfEdge>),
}

fn labels(names: [&str; 3]) -> [String; 3] {
    names.map(|s| s.to_string())
}

fn glue_by_labels(triangles: &[[String; 3]]) -> Vec<[usize; 4]> {
    let mut pending: BTreeMap<(String, String), (usize, usize)> = BTreeMap::new();
    let mut out = Vec::new();
    for (t, tr) in triangles.iter().enumerate() {
        for s in 0..3 {
            let (a, b) = (tr[s].clone(), tr[(s + 1) % 3].clone());
            if let Some((t2, s2)) = pending.remove(&(b.clone(), a.clone())) {
                out.push([t2, s2, t, s]);
            } else {
                pending.insert((a, b), (t, s));
            }
        }
    }
    assert!(pending.is_empty(), "unmatched sides");
    out.sort();
    out
}

fn s06_base() -> (SurfaceDescriptor, Vec<(String, GeneratorSpec)>) {
    let triangles = vec![
        labels(["z", "p1", "p2"]),
        labels(["z", "p2", "p3"]),
        labels(["z", "p3", "p4"]),
        labels(["z", "p4", "p5"]),
        labels(["p1", "z", "p5"]),
        labels(["p1", "p5", "p4"]),
        labels(["p1", "p4", "p3"]),
        labels(["p1", "p3", "p2"]),
    ];
    let gluings = glue_by_labels(&triangles);
    let punctures: Vec<String> = ["z", "p1", "p2", "p3", "p4", "p5"].iter().map(|s| s.to_string()).collect();
    let mut gens = Vec::new();
    for i in 0..punctures.len() {
        for j in i + 1..punctures.len() {
            let (x, y) = (&punctures[i], &punctures[j]);
            let arc = triangles
                .iter()
                .enumerate()
                .find_map(|(t, tr)| {
                    (0..3).find_map(|s| {
                        let (a, b) = (&tr[s], &tr[(s + 1) % 3]);
                        ((a == x && b == y) || (a == y && b == x)).then(|| IdealArc::along_side(t, s))
                    })
                })
                .unwrap_or_else(|| match (x.as_str(), y.as_str()) {
                    ("p2", "p4") => IdealArc { start: (1, 1), exits: vec![half_edge(1, 2)], end: (2, 2) },
                    ("p3", "p5") => IdealArc { start: (2, 1), exits: vec![half_edge(2, 2)], end: (3, 2) },
                    ("p2", "p5") => IdealArc {
                        start: (1, 1),
                        exits: vec![half_edge(1, 2), half_edge(2, 2)],
                        end: (3, 2),
                    },
                    _ => unreachable!("pair {x},{y} has no arc"),
                });
            gens.push((pair_name(x, y), GeneratorSpec::Arc(arc)));
        }
    }
    let desc = SurfaceDescriptor {
        id: "S06".into(),
        genus: 0,
        punctures,
        marked: "z".into(),
        triangles,
        gluings,
        generators: BTreeMap::new(),
    };
    (desc, gens)
}

fn s13_base() -> (SurfaceDescriptor, Vec<(String, GeneratorSpec)>) {
    let col = ["z", "p1", "p2"];
    let mut triangles = Vec::new();
    let mut gluings = Vec::new();
    for i in 0..3 {
        let (left, right) = (col[i], col[(i + 1) % 3]);
        triangles.push(labels([left, right, right]));
        triangles.push(labels([left, right, left]));
        let (lo, up) = (2 * i, 2 * i + 1);
        gluings.push([lo, 2, up, 0]);
        gluings.push([lo, 1, 2 * ((i + 1) % 3) + 1, 2]);
        gluings.push([up, 1, lo, 0]);
    }
    gluings.sort();
    let mut gens = Vec::new();
    for i in 0..3 {
        gens.push((
            format!("a{i}"),
            GeneratorSpec::Walk(vec![half_edge(2 * i, 2), half_edge(2 * i + 1, 1)]),
        ));
    }
    gens.push((
        "b".to_string(),
        GeneratorSpec::Walk(vec![
            half_edge(1, 0),
            half_edge(0, 1),
            half_edge(3, 0),
            half_edge(2, 1),
            half_edge(5, 0),
            half_edge(4, 1),
        ]),
    ));
    gens.push((pair_name("z", "p1"), GeneratorSpec::Arc(IdealArc::along_side(0, 0))));
    gens.push((pair_name("p1", "p2"), GeneratorSpec::Arc(IdealArc::along_side(2, 0))));
    gens.push((pair_name("z", "p2"), GeneratorSpec::Arc(IdealArc::along_side(4, 0))));
    let desc = SurfaceDescriptor {
        id: "S13".into(),
        genus: 1,
        punctures: col.iter().map(|s| s.to_string()).collect(),
        marked: "z".into(),
        triangles,
        gluings,
        generators: BTreeMap::new(),
    };
    (desc, gens)
}

/// Rebuilds a registry descriptor, computing generator coordinates from their
/// arcs and walks.
pub fn construct(id: &str) -> Result<SurfaceDescriptor> {
    let (mut desc, gens) = match id {
        "S06" => s06_base(),
        "S13" => s13_base(),
        other => return Err(Error::UnknownSurface(other.to_string())),
    };
    let surface = Surface::from_descriptor(&desc)?;
    for (name, spec) in gens {
        let curve = match spec {
            GeneratorSpec::Arc(arc) => arc_boundary(&surface, &arc)?,
            GeneratorSpec::Walk(w) => NormalCurve::from_walk(&surface, &w)?,
        };
        desc.generators.insert(name, curve.corners().to_vec());
    }
    Ok(desc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    #[ignore = "regenerates the shipped data files"]
    fn write_data_files() {
        for id in BUILTIN {
            let desc = construct(id).unwrap();
            let path = format!("{}/data/{id}.json", env!("CARGO_MANIFEST_DIR"));
            std::fs::write(path, serde_json::to_string_pretty(&desc).unwrap() + "\n").unwrap();
        }
    }

    #[test]
    fn shipped_data_matches_construction() {
        for id in BUILTIN {
            assert_eq!(descriptor(id).unwrap(), construct(id).unwrap(), "{id}");
        }
    }

    #[test]
    fn euler_counts() {
        let s = load_surface("S06").unwrap();
        assert_eq!((s.genus(), s.punctures().len(), s.num_triangles(), s.num_edges()), (0, 6, 8, 12));
        let t = load_surface("S13").unwrap();
        assert_eq!((t.genus(), t.punctures().len(), t.num_triangles(), t.num_edges()), (1, 3, 6, 9));
        assert_eq!(s.complexity(), 2);
        assert_eq!(t.complexity(), 2);
    }

    #[test]
    fn unknown_surface() {
        assert!(matches!(load_surface("S99"), Err(Error::UnknownSurface(_))));
    }
}
