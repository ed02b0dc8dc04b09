//! Independent reference implementations used to cross-check the library.
#![allow(dead_code)]

use ccsurvive::normal::NormalCurve;
use ccsurvive::surface::{half_edge, side, tri, Surface};

/// Crossings of two chord families inside one triangle, with endpoints given
/// as counter-clockwise boundary coordinates.
fn chord_crossings(a: &[(u64, u64)], b: &[(u64, u64)]) -> u64 {
    let mut n = 0;
    for &(u, v) in a {
        let (lo, hi) = (u.min(v), u.max(v));
        for &(x, y) in b {
            if (x > lo && x < hi) != (y > lo && y < hi) {
                n += 1;
            }
        }
    }
    n
}

/// Minimum crossing count over every way of interleaving the strands of `a`
/// and `b` on every edge, keeping each curve's own strand order. Exponential;
/// intended for curves of weight at most a dozen or so per edge.
pub fn brute_force_intersection(surface: &Surface, a: &NormalCurve, b: &NormalCurve) -> u64 {
    if a.code() == b.code() {
        return 0;
    }
    best_interleaving(surface, a, b).0
}

/// The smallest crossing count and an interleaving achieving it, as one
/// bitmask per edge marking the canonical positions of `a`-strands.
fn best_interleaving(surface: &Surface, a: &NormalCurve, b: &NormalCurve) -> (u64, Vec<u64>) {
    let ne = surface.num_edges();
    let wa: Vec<u32> = a.weights().to_vec();
    let wb: Vec<u32> = b.weights().to_vec();
    let choices: Vec<Vec<u64>> = (0..ne)
        .map(|e| {
            let total = wa[e] + wb[e];
            (0u64..(1u64 << total)).filter(|m| m.count_ones() == wa[e]).collect()
        })
        .collect();
    let mut idx = vec![0usize; ne];
    let mut best = (u64::MAX, Vec::new());
    loop {
        let masks: Vec<u64> = (0..ne).map(|e| choices[e][idx[e]]).collect();
        let n = chords(surface, a, b, &masks, &wa, &wb).crossings();
        if n < best.0 {
            best = (n, masks);
        }
        let mut e = 0;
        loop {
            if e == ne {
                return best;
            }
            idx[e] += 1;
            if idx[e] < choices[e].len() {
                break;
            }
            idx[e] = 0;
            e += 1;
        }
    }
}

/// Normal arcs of both curves in every triangle, as pairs of boundary
/// coordinates. Side `s` occupies `[s * big, (s + 1) * big)`, strands sit at
/// odd offsets and the gaps between them at even ones.
struct Chords {
    big: u64,
    per_triangle: [Vec<Vec<(u64, u64)>>; 2],
}

impl Chords {
    fn crossings(&self) -> u64 {
        self.per_triangle[0].iter().zip(&self.per_triangle[1]).map(|(x, y)| chord_crossings(x, y)).sum()
    }
}

fn chords(surface: &Surface, a: &NormalCurve, b: &NormalCurve, masks: &[u64], wa: &[u32], wb: &[u32]) -> Chords {
    let ne = surface.num_edges();
    // Merged canonical position of the k-th a-strand / b-strand on each edge.
    let mut pa = vec![Vec::new(); ne];
    let mut pb = vec![Vec::new(); ne];
    for e in 0..ne {
        for bit in 0..(wa[e] + wb[e]) {
            if masks[e] >> bit & 1 == 1 {
                pa[e].push(bit);
            } else {
                pb[e].push(bit);
            }
        }
    }
    let big = 2 * ((0..ne).map(|e| wa[e] + wb[e]).max().unwrap_or(0) as u64 + 1);
    let coord = |h: usize, q: u32| -> u64 {
        let e = surface.edge(h);
        let w = wa[e] + wb[e];
        let p = if surface.is_rep(h) { q } else { w - 1 - q };
        side(h) as u64 * big + 2 * p as u64 + 1
    };
    let nt = surface.num_triangles();
    let mut per_triangle = [vec![Vec::new(); nt], vec![Vec::new(); nt]];
    for (c, (curve, pos)) in [(a, &pa), (b, &pb)].into_iter().enumerate() {
        let w = curve.walk();
        let l = w.len();
        for n in 0..l {
            let prev = w[(n + l - 1) % l];
            let entry_h = surface.glue(prev.exit);
            let entry = coord(entry_h, pos[surface.edge(prev.exit)][prev.strand as usize]);
            let exit = coord(w[n].exit, pos[surface.edge(w[n].exit)][w[n].strand as usize]);
            per_triangle[c][tri(w[n].exit)].push((entry, exit));
        }
    }
    Chords { big, per_triangle }
}

/// Puncture sets of the complementary regions of `a ∪ b` in minimal position
/// that contain at least one puncture.
///
/// Inside a triangle the arcs are straight chords, so two boundary gaps lie in
/// the same face exactly when no chord separates them. Faces touching the
/// boundary are then glued across edges; faces cut off in the interior of a
/// triangle hold no puncture and are irrelevant.
pub fn complementary_punctures(surface: &Surface, a: &NormalCurve, b: &NormalCurve) -> Vec<Vec<usize>> {
    let (_, masks) = best_interleaving(surface, a, b);
    let ne = surface.num_edges();
    let w: Vec<u32> = (0..ne).map(|e| a.weights()[e] + b.weights()[e]).collect();
    let ch = chords(surface, a, b, &masks, a.weights(), b.weights());
    let nt = surface.num_triangles();
    // Node for every (half-edge, local gap index).
    let mut base = vec![0usize; surface.num_half_edges() + 1];
    for h in 0..surface.num_half_edges() {
        base[h + 1] = base[h] + w[surface.edge(h)] as usize + 1;
    }
    let mut parent: Vec<usize> = (0..base[surface.num_half_edges()]).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    fn union(p: &mut [usize], x: usize, y: usize) {
        let (rx, ry) = (find(p, x), find(p, y));
        p[rx] = ry;
    }
    for t in 0..nt {
        let all: Vec<(u64, u64)> = ch.per_triangle[0][t].iter().chain(&ch.per_triangle[1][t]).copied().collect();
        let signs = |x: u64| -> Vec<bool> {
            all.iter().map(|&(u, v)| x > u.min(v) && x < u.max(v)).collect()
        };
        let mut gaps = Vec::new();
        for s in 0..3 {
            let h = half_edge(t, s);
            for g in 0..=w[surface.edge(h)] {
                gaps.push((base[h] + g as usize, signs(s as u64 * ch.big + 2 * g as u64)));
            }
        }
        for i in 0..gaps.len() {
            for j in i + 1..gaps.len() {
                if gaps[i].1 == gaps[j].1 {
                    union(&mut parent, gaps[i].0, gaps[j].0);
                }
            }
        }
    }
    for h in 0..surface.num_half_edges() {
        if !surface.is_rep(h) {
            continue;
        }
        let o = surface.glue(h);
        let n = w[surface.edge(h)] as usize;
        for g in 0..=n {
            union(&mut parent, base[h] + g, base[o] + n - g);
        }
    }
    let mut regions: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for t in 0..nt {
        for k in 0..3 {
            // Corner k is where side k begins.
            let root = find(&mut parent, base[half_edge(t, k)]);
            let p = surface.corner_puncture(t, k);
            let list = regions.entry(root).or_default();
            if !list.contains(&p) {
                list.push(p);
            }
        }
    }
    regions
        .into_values()
        .map(|mut v| {
            v.sort();
            v
        })
        .collect()
}

/// Distance in the surviving curve graph of a punctured sphere when it is at
/// most 2, from the complement of the two curves. For crossing curves the
/// union is connected, so every complementary region is a punctured disk and
/// carries a curve around any subset of its punctures.
pub fn surviving_distance_at_most_two(surface: &Surface, a: &NormalCurve, b: &NormalCurve) -> Option<u32> {
    assert_eq!(surface.genus(), 0, "planar oracle");
    if a.code() == b.code() {
        return Some(0);
    }
    if brute_force_intersection(surface, a, b) == 0 {
        return Some(1);
    }
    let n = surface.punctures().len();
    let z = surface.marked();
    let twice_with_z = |x: &[usize]| x.len() == 2 && x.contains(&z);
    for region in complementary_punctures(surface, a, b) {
        for mask in 0u32..(1 << region.len()) {
            let inside: Vec<usize> = (0..region.len()).filter(|&i| mask >> i & 1 == 1).map(|i| region[i]).collect();
            let outside: Vec<usize> = (0..n).filter(|p| !inside.contains(p)).collect();
            if inside.len() >= 2 && outside.len() >= 2 && !twice_with_z(&inside) && !twice_with_z(&outside) {
                return Some(2);
            }
        }
    }
    None
}

