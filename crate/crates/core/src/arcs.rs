//! Curves built as boundaries of regular neighbourhoods of ideal arcs.

use crate::error::{Error, Result};
use crate::normal::{reverse_walk, NormalCurve};
use crate::surface::{half_edge, HalfEdge, Surface};

/// An arc between two punctures: it leaves corner `start`, crosses the listed
/// exits, and arrives at corner `end`. With no exits both corners lie in the
/// same triangle and the arc runs parallel to the side joining them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealArc {
    pub start: (usize, usize),
    pub exits: Vec<HalfEdge>,
    pub end: (usize, usize),
}

impl IdealArc {
    /// The arc along side `s` of triangle `t`.
    pub fn along_side(t: usize, s: usize) -> IdealArc {
        IdealArc { start: (t, s), exits: Vec::new(), end: (t, (s + 1) % 3) }
    }
}

fn link_path(surface: &Surface, corner: (usize, usize)) -> Vec<HalfEdge> {
    surface.link_from(corner.0, corner.1).into_iter().map(|(t, k)| half_edge(t, k)).collect()
}

/// The curve bounding a neighbourhood of the arc and its two end punctures.
pub fn arc_boundary(surface: &Surface, arc: &IdealArc) -> Result<NormalCurve> {
    let px = link_path(surface, arc.start);
    let py = link_path(surface, arc.end);
    let px_rev = reverse_walk(surface, &px);
    let py_rev = reverse_walk(surface, &py);
    let back = reverse_walk(surface, &arc.exits);
    let mut found: Vec<NormalCurve> = Vec::new();
    for x in [&px, &px_rev] {
        for y in [&py, &py_rev] {
            let mut walk = x.clone();
            walk.extend_from_slice(&arc.exits);
            walk.extend_from_slice(y);
            walk.extend_from_slice(&back);
            if let Ok(c) = NormalCurve::from_walk(surface, &walk) {
                if c.is_essential(surface) && !found.contains(&c) {
                    found.push(c);
                }
            }
        }
    }
    match found.len() {
        1 => Ok(found.pop().unwrap()),
        0 => Err(Error::NotEssential),
        _ => Err(Error::Invalid("arc neighbourhood is ambiguous".into())),
    }
}

/// The peripheral curve around puncture `p`.
pub fn puncture_link(surface: &Surface, p: usize) -> Result<NormalCurve> {
    let walk: Vec<HalfEdge> = surface.link(p).into_iter().map(|(t, k)| half_edge(t, k)).collect();
    NormalCurve::from_walk(surface, &walk)
}
