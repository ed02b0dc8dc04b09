//! Witnesses, the surviving test, and subsurface projection.
//!
//! A proper witness is the complement of a disk containing `z` and exactly one
//! other puncture `p`; it is recorded by its boundary curve and by `p`.

use serde::{Deserialize, Serialize};

use crate::cut::cut_along;
use crate::diagram::arc_surgeries;
use crate::error::{Error, Result};
use crate::graph::{distance, Budget, ComplexKind};
use crate::normal::{disjoint, CanonicalCode, CurveFile, NormalCurve};
use crate::surface::Surface;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    boundary: NormalCurve,
    paired: usize,
}

impl Witness {
    /// The witness bounded by `curve`, if `curve` cuts off a disk around `z`
    /// and one other puncture.
    pub fn from_boundary(surface: &Surface, curve: &NormalCurve) -> Result<Witness> {
        witness_of(surface, curve)?.ok_or_else(|| Error::Invalid("curve is not a witness boundary".into()))
    }

    pub fn boundary(&self) -> &NormalCurve {
        &self.boundary
    }

    pub fn code(&self) -> &CanonicalCode {
        self.boundary.code()
    }

    pub fn paired_puncture(&self) -> usize {
        self.paired
    }

    pub fn to_file(&self, surface: &Surface) -> WitnessFile {
        WitnessFile {
            boundary: CurveFile::from_curve(&self.boundary),
            paired_puncture: surface.puncture_label(self.paired).to_string(),
        }
    }
}

/// Interchange form of a witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessFile {
    pub boundary: CurveFile,
    pub paired_puncture: String,
}

impl WitnessFile {
    pub fn to_witness(&self, surface: &Surface) -> Result<Witness> {
        let w = Witness::from_boundary(surface, &self.boundary.to_curve(surface)?)?;
        if surface.puncture_label(w.paired) != self.paired_puncture {
            return Err(Error::Invalid(format!(
                "boundary pairs z with {}, not {}",
                surface.puncture_label(w.paired),
                self.paired_puncture
            )));
        }
        Ok(w)
    }
}

/// The witness bounded by `curve`, if any.
pub fn witness_of(surface: &Surface, curve: &NormalCurve) -> Result<Option<Witness>> {
    if !curve.is_essential(surface) {
        return Err(Error::NotEssential);
    }
    let z = surface.marked();
    let pieces = cut_along(surface, std::slice::from_ref(curve))?.pieces;
    Ok(pieces.iter().find_map(|piece| {
        let other = match piece.punctures.as_slice() {
            [x, y] if *x == z => *y,
            [x, y] if *y == z => *x,
            _ => return None,
        };
        (piece.genus == 0 && piece.boundaries == 1).then(|| Witness { boundary: curve.clone(), paired: other })
    }))
}

/// True unless the curve bounds a disk containing `z` and one other puncture.
pub fn is_surviving(surface: &Surface, curve: &NormalCurve) -> Result<bool> {
    Ok(witness_of(surface, curve)?.is_none())
}

/// A projection to a witness: a nonempty set of curves in it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionSet {
    curves: Vec<NormalCurve>,
}

impl ProjectionSet {
    /// Curves sorted by canonical code.
    pub fn curves(&self) -> &[NormalCurve] {
        &self.curves
    }

    pub fn codes(&self) -> Vec<CanonicalCode> {
        self.curves.iter().map(|c| c.code().clone()).collect()
    }
}

/// Projection of a surviving curve to a witness.
pub fn subsurface_projection(surface: &Surface, w: &Witness, curve: &NormalCurve) -> Result<ProjectionSet> {
    if curve == w.boundary() {
        return Err(Error::EmptyProjection);
    }
    if !is_surviving(surface, curve)? {
        return Err(Error::NotSurviving);
    }
    project(surface, w, curve)
}

/// Projection of any essential curve other than the boundary.
///
/// A curve missing the boundary already lies in the witness. Otherwise each
/// arc of the curve between consecutive crossings with the boundary is banded
/// to the boundary: together with either of the two boundary arcs joining its
/// endpoints it closes up to a curve, and the essential results that are not
/// the boundary itself make up the projection. Arcs outside the witness only
/// produce curves around a single puncture and drop out.
pub fn project(surface: &Surface, w: &Witness, curve: &NormalCurve) -> Result<ProjectionSet> {
    curve.check_surface(surface)?;
    w.boundary.check_surface(surface)?;
    if curve == w.boundary() {
        return Err(Error::EmptyProjection);
    }
    if !curve.is_essential(surface) {
        return Err(Error::NotEssential);
    }
    if disjoint(surface, curve, w.boundary()) {
        return Ok(ProjectionSet { curves: vec![curve.clone()] });
    }
    let curves: Vec<NormalCurve> =
        arc_surgeries(surface, curve, w.boundary())?.into_iter().filter(|c| c != w.boundary()).collect();
    if curves.is_empty() {
        return Err(Error::EmptyProjection);
    }
    Ok(ProjectionSet { curves })
}

/// Bounds on a projection distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectionDistance {
    /// Upper bound; the distance itself when `exact`.
    pub value: u32,
    pub lower: u32,
    pub exact: bool,
}

/// `d_W(a, b)`: the diameter of `π_W(a) ∪ π_W(b)` in the curve graph of `W`.
/// With `w = None` this is the distance in the full curve graph.
pub fn projection_distance(
    surface: &Surface,
    w: Option<&Witness>,
    a: &NormalCurve,
    b: &NormalCurve,
    budget: Budget,
) -> Result<ProjectionDistance> {
    let Some(w) = w else {
        let r = distance(surface, a, b, &ComplexKind::Full, budget)?;
        return Ok(ProjectionDistance { value: r.value, lower: r.lower, exact: r.exact });
    };
    let pa = project(surface, w, a)?;
    let pb = project(surface, w, b)?;
    let mut all: Vec<NormalCurve> = pa.curves.iter().chain(&pb.curves).cloned().collect();
    all.sort_by(|x, y| x.code().cmp(y.code()));
    all.dedup();
    set_diameter(surface, w, &all, budget)
}

/// Diameter of a finite set of curves in the curve graph of `w`.
pub fn set_diameter(surface: &Surface, w: &Witness, curves: &[NormalCurve], budget: Budget) -> Result<ProjectionDistance> {
    let kind = ComplexKind::Witness(w.clone());
    let mut out = ProjectionDistance { value: 0, lower: 0, exact: true };
    for (i, x) in curves.iter().enumerate() {
        for y in &curves[i + 1..] {
            let r = distance(surface, x, y, &kind, budget)?;
            out.value = out.value.max(r.value);
            out.lower = out.lower.max(r.lower);
        }
    }
    out.exact = out.lower == out.value;
    Ok(out)
}

/// `Σ {{v}}_k`: the sum of the values that reach `k`.
pub fn apply_cutoff<'a>(values: impl IntoIterator<Item = &'a u32>, k: u32) -> u64 {
    values.into_iter().filter(|&&v| v >= k).map(|&v| v as u64).sum()
}
