//! Seeded generation of curves, witnesses and pairs from words in Dehn twists
//! about the named generators.
//!
//! All randomness comes from a `ChaCha8Rng` seeded with a `u64`, so a seed
//! reproduces the same samples on every platform.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::graph::ComplexKind;
use crate::normal::{disjoint, NormalCurve};
use crate::registry::generator;
use crate::surface::Surface;
use crate::twist::dehn_twist;
use crate::witness::{is_surviving, witness_of, Witness};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Named generators, in registry order.
pub fn generators(surface: &Surface) -> Result<Vec<NormalCurve>> {
    surface.generator_names().map(|n| generator(surface, n)).collect()
}

/// Curves produced by twist words are kept below this total weight.
pub const MAX_SAMPLE_WEIGHT: u64 = 48;

const POWERS: [i64; 4] = [-2, -1, 1, 2];

/// A generator moved by up to `steps` random twists about generators.
pub fn random_curve(surface: &Surface, rng: &mut ChaCha8Rng, steps: usize) -> Result<NormalCurve> {
    let gens = generators(surface)?;
    let mut c = gens.choose(rng).expect("registry has generators").clone();
    let n = rng.gen_range(0..=steps);
    for _ in 0..n {
        let along = gens.choose(rng).expect("registry has generators");
        let power = *POWERS.choose(rng).expect("nonempty");
        let next = dehn_twist(surface, along, power, &c)?;
        if next.total_weight() <= MAX_SAMPLE_WEIGHT {
            c = next;
        }
    }
    Ok(c)
}

/// A surviving curve from a twist word.
pub fn random_surviving(surface: &Surface, rng: &mut ChaCha8Rng, steps: usize) -> Result<NormalCurve> {
    loop {
        let c = random_curve(surface, rng, steps)?;
        if is_surviving(surface, &c)? {
            return Ok(c);
        }
    }
}

/// Witnesses bounded by the generators and by their images under one twist
/// about a generator, sorted by boundary code.
pub fn witness_pool(surface: &Surface) -> Result<Vec<Witness>> {
    let gens = generators(surface)?;
    let mut out: Vec<Witness> = Vec::new();
    let mut push = |w: Witness| {
        if !out.contains(&w) {
            out.push(w);
        }
    };
    for c in &gens {
        if let Some(w) = witness_of(surface, c)? {
            for t in &gens {
                for power in [-1, 1] {
                    let moved = dehn_twist(surface, t, power, c)?;
                    push(witness_of(surface, &moved)?.expect("twists preserve witness boundaries"));
                }
            }
            push(w);
        }
    }
    out.sort_by(|x, y| x.code().cmp(y.code()));
    Ok(out)
}

/// Curves of the witness's curve graph among the generators and their images
/// under one twist about another such generator, sorted by code.
pub fn curves_in(surface: &Surface, w: &Witness) -> Result<Vec<NormalCurve>> {
    let kind = ComplexKind::Witness(w.clone());
    let base: Vec<NormalCurve> = generators(surface)?.into_iter().filter(|c| kind.contains(surface, c)).collect();
    let mut inside = base.clone();
    for x in &base {
        for y in &base {
            if !disjoint(surface, x, y) {
                let t = dehn_twist(surface, y, 1, x)?;
                if !inside.contains(&t) {
                    inside.push(t);
                }
            }
        }
    }
    inside.sort_by(|x, y| x.code().cmp(y.code()));
    Ok(inside)
}

/// A pair inside one witness: `a` and `b = T_c^n(a)` for crossing curves `a`,
/// `c` of the witness, so that `[a, ∂W, b]` is a geodesic. The whole picture
/// is then moved by a random twist about a generator.
#[derive(Debug, Clone)]
pub struct WitnessPair {
    pub witness: Witness,
    pub a: NormalCurve,
    pub b: NormalCurve,
    pub twist_curve: NormalCurve,
    pub power: i64,
}

pub fn witness_pair(surface: &Surface, rng: &mut ChaCha8Rng, max_power: i64) -> Result<Option<WitnessPair>> {
    let gens = generators(surface)?;
    let mut base = Vec::new();
    for c in &gens {
        if let Some(w) = witness_of(surface, c)? {
            base.push(w);
        }
    }
    let w = base.choose(rng).expect("registry has witness boundaries").clone();
    let inside = curves_in(surface, &w)?;
    let Some(a) = inside.choose(rng).cloned() else { return Ok(None) };
    let crossing: Vec<&NormalCurve> = inside.iter().filter(|c| !disjoint(surface, c, &a)).collect();
    let Some(&c) = crossing.choose(rng) else { return Ok(None) };
    let mag = rng.gen_range(1..=max_power);
    let power = if rng.gen_bool(0.5) { mag } else { -mag };
    let b = dehn_twist(surface, c, power, &a)?;
    let along = gens.choose(rng).expect("registry has generators");
    let shift = rng.gen_range(-1..=1);
    let move_by = |x: &NormalCurve| dehn_twist(surface, along, shift, x);
    let moved = Witness::from_boundary(surface, &move_by(w.boundary())?)?;
    Ok(Some(WitnessPair { witness: moved, a: move_by(&a)?, b: move_by(&b)?, twist_curve: move_by(c)?, power }))
}
