//! Dehn twists.
//!
//! The image of `b` under a twist about `a` is read off the minimal-position
//! diagram: walk along `b`, and at every crossing with `a` go once around `a`
//! per unit of the power before carrying on. Positive powers turn left.

use crate::diagram::IntersectionDiagram;
use crate::error::{Error, Result};
use crate::normal::{reduce_walk, NormalCurve};
use crate::surface::{HalfEdge, Surface};

/// `T_a^power(b)`.
pub fn dehn_twist(surface: &Surface, a: &NormalCurve, power: i64, b: &NormalCurve) -> Result<NormalCurve> {
    a.check_surface(surface)?;
    b.check_surface(surface)?;
    if !a.is_essential(surface) {
        return Err(Error::NotEssential);
    }
    let diagram = IntersectionDiagram::new(surface, a, b)?;
    if power == 0 || diagram.count() == 0 {
        return Ok(b.clone());
    }
    let a_exits = a.exits();
    let la = a_exits.len();
    let b_exits = b.exits();
    let reps = power.unsigned_abs() as usize;
    let mut walk: Vec<HalfEdge> = Vec::with_capacity(b_exits.len() + reps * la * diagram.count());
    for (m, &exit) in b_exits.iter().enumerate() {
        for &x in diagram.crossings_on_arc(1, m) {
            let k = diagram.crossings()[x].a_arc;
            let forward = diagram.a_forward_is_left_of_b(x) == (power > 0);
            for _ in 0..reps {
                if forward {
                    walk.extend((0..la).map(|j| a_exits[(k + j) % la]));
                } else {
                    walk.extend((1..=la).map(|j| surface.glue(a_exits[(k + la - j) % la])));
                }
            }
        }
        walk.push(exit);
    }
    let reduced = reduce_walk(surface, &walk);
    NormalCurve::from_walk(surface, &reduced)
}
