//! Small hand-checkable cases for each operation.

use ccsurvive::cut::cut_along;
use ccsurvive::diagram::geometric_intersection;
use ccsurvive::graph::{distance, enumerate_curves, geodesics, Budget, ComplexKind};
use ccsurvive::normal::{disjoint, tighten, Classification, NormalCurve, RawCurve};
use ccsurvive::registry::{descriptor, generator, load_surface};
use ccsurvive::surface::{half_edge, tri, Surface};
use ccsurvive::survival::{check_behrstock, distance_formula, survival_path, Verdict};
use ccsurvive::twist::dehn_twist;
use ccsurvive::witness::{apply_cutoff, is_surviving, project, projection_distance, witness_of, Witness};
use ccsurvive::Error;

fn s06() -> Surface {
    load_surface("S06").unwrap()
}

fn g(s: &Surface, name: &str) -> NormalCurve {
    generator(s, name).unwrap()
}

fn budget() -> Budget {
    Budget::new(20)
}

#[test]
fn builtin_surfaces() {
    let s = s06();
    assert_eq!((s.genus(), s.punctures().len(), s.num_triangles(), s.num_edges()), (0, 6, 8, 12));
    let t = load_surface("S13").unwrap();
    assert_eq!((t.genus(), t.punctures().len(), t.num_triangles(), t.num_edges()), (1, 3, 6, 9));
}

#[test]
fn four_punctured_sphere_is_rejected() {
    let mut desc = descriptor("S06").unwrap();
    desc.genus = 0;
    desc.punctures.truncate(4);
    let err = ccsurvive::surface::Surface::from_descriptor(&desc).unwrap_err();
    assert!(matches!(err, Error::ComplexityTooLow(_) | Error::MalformedTriangulation(_)), "{err:?}");
}

#[test]
fn tighten_is_idempotent_and_removes_wiggles() {
    let s = s06();
    let c = g(&s, "c_{p1,p2}");
    let again = tighten(&s, &RawCurve::Corners(c.corners().to_vec())).unwrap();
    assert_eq!(again.code(), c.code());

    // Detour across an extra edge and straight back at every step.
    let exits: Vec<usize> = c.walk().iter().map(|st| st.exit).collect();
    for n in 0..exits.len() {
        let here = tri(s.glue(exits[(n + exits.len() - 1) % exits.len()]));
        for k in 0..3 {
            let h = half_edge(here, k);
            if h == exits[n] {
                continue;
            }
            let mut walk = exits.clone();
            walk.splice(n..n, [h, s.glue(h)]);
            let wiggled = tighten(&s, &RawCurve::Walk(walk)).unwrap();
            assert_eq!(wiggled.code(), c.code());
        }
    }
}

#[test]
fn zero_coordinates_are_null() {
    let s = s06();
    let zero = vec![[0u32; 3]; s.num_triangles()];
    assert_eq!(tighten(&s, &RawCurve::Corners(zero)).unwrap_err(), Error::NullCurve);
}

#[test]
fn canonical_codes() {
    let s = s06();
    let a = g(&s, "c_{p1,p2}");
    let b = g(&s, "c_{p2,p3}");
    assert_eq!(dehn_twist(&s, &a, 0, &b).unwrap().code(), b.code());
    assert_ne!(a.code(), b.code());
    // The two curves cut off different puncture pairs.
    let pa = cut_along(&s, &[a]).unwrap();
    let pb = cut_along(&s, &[b]).unwrap();
    assert_ne!(pa, pb);
}

#[test]
fn named_intersections() {
    let s = s06();
    let i = |x: &str, y: &str| geometric_intersection(&s, &g(&s, x), &g(&s, y)).unwrap();
    assert_eq!(i("c_{p1,p2}", "c_{p1,p2}"), 0);
    assert_eq!(i("c_{p1,p2}", "c_{p3,p4}"), 0);
    assert_eq!(i("c_{p1,p2}", "c_{p2,p3}"), 2);
}

#[test]
fn cut_examples() {
    let s = s06();
    let p = |l: &str| s.puncture_index(l).unwrap();
    let d = cut_along(&s, &[g(&s, "c_{p1,p2}")]).unwrap();
    assert_eq!(d.pieces.len(), 2);
    assert!(d.pieces.iter().any(|x| x.is_disk_around(&[p("p1"), p("p2")])));
    assert!(d.pieces.iter().any(|x| x.is_disk_around(&[p("z"), p("p3"), p("p4"), p("p5")])));
    assert_eq!(d.euler_sum(), s.euler_characteristic());

    let whole = cut_along(&s, &[]).unwrap();
    assert_eq!(whole.pieces.len(), 1);
    assert_eq!((whole.pieces[0].genus, whole.pieces[0].punctures.len(), whole.pieces[0].boundaries), (0, 6, 0));

    let t = load_surface("S13").unwrap();
    let d = cut_along(&t, &[g(&t, "a0")]).unwrap();
    assert_eq!(d.pieces.len(), 1);
    assert_eq!((d.pieces[0].genus, d.pieces[0].punctures.len(), d.pieces[0].boundaries), (0, 3, 2));
}

#[test]
fn classification() {
    let s = s06();
    let p1 = s.puncture_index("p1").unwrap();
    let mut corners = vec![[0u32; 3]; s.num_triangles()];
    for (t, k) in s.link(p1) {
        corners[t][k] = 1;
    }
    let small = NormalCurve::from_corners(&s, corners).unwrap();
    assert_eq!(small.classify(&s), Classification::Peripheral(p1));
    assert_eq!(g(&s, "c_{p1,p2}").classify(&s), Classification::Essential);
}

#[test]
fn twist_examples() {
    let s = s06();
    let a = g(&s, "c_{p1,p2}");
    let b = g(&s, "c_{p2,p3}");
    let i0 = geometric_intersection(&s, &b, &a).unwrap();
    for n in -3..=3 {
        let moved = dehn_twist(&s, &a, n, &b).unwrap();
        assert_eq!(geometric_intersection(&s, &moved, &a).unwrap(), i0);
    }
    let there = dehn_twist(&s, &a, 3, &b).unwrap();
    assert_eq!(dehn_twist(&s, &a, -3, &there).unwrap().code(), b.code());
}

#[test]
fn surviving_filter() {
    let s = s06();
    let heaviest = s.generator_names().map(|n| g(&s, n).total_weight()).max().unwrap();
    let b = Budget::new(heaviest);
    let found = enumerate_curves(&s, b, &ComplexKind::Surviving).unwrap();
    for name in s.generator_names() {
        let c = g(&s, name);
        let present = found.iter().any(|x| x.code() == c.code());
        assert_eq!(present, !name.starts_with("c_{z,"), "{name}");
    }
    assert!(enumerate_curves(&s, Budget::new(0), &ComplexKind::Surviving).unwrap().is_empty());
    assert_eq!(found, enumerate_curves(&s, b, &ComplexKind::Surviving).unwrap());
}

#[test]
fn surviving_and_witnesses() {
    let s = s06();
    assert!(!is_surviving(&s, &g(&s, "c_{z,p1}")).unwrap());
    assert!(is_surviving(&s, &g(&s, "c_{p1,p2}")).unwrap());
    let t = load_surface("S13").unwrap();
    assert!(is_surviving(&t, &g(&t, "a0")).unwrap());

    let p1 = s.puncture_index("p1").unwrap();
    assert_eq!(witness_of(&s, &g(&s, "c_{z,p1}")).unwrap().unwrap().paired_puncture(), p1);
    assert!(witness_of(&s, &g(&s, "c_{p1,p2}")).unwrap().is_none());
    let moved = dehn_twist(&s, &g(&s, "c_{p2,p3}"), 4, &g(&s, "c_{z,p1}")).unwrap();
    assert_eq!(witness_of(&s, &moved).unwrap().unwrap().paired_puncture(), p1);
    // A twist that actually moves the boundary keeps the pairing too.
    let moved = dehn_twist(&s, &g(&s, "c_{p1,p2}"), 4, &g(&s, "c_{z,p1}")).unwrap();
    assert_ne!(moved.code(), g(&s, "c_{z,p1}").code());
    assert_eq!(witness_of(&s, &moved).unwrap().unwrap().paired_puncture(), p1);
}

#[test]
fn distance_examples() {
    let s = s06();
    let a = g(&s, "c_{p1,p2}");
    for kind in [ComplexKind::Full, ComplexKind::Surviving] {
        let d = distance(&s, &a, &a.clone(), &kind, budget()).unwrap();
        assert_eq!((d.value, d.exact), (0, true));
    }
    let d = distance(&s, &a, &g(&s, "c_{p3,p4}"), &ComplexKind::Surviving, budget()).unwrap();
    assert_eq!((d.value, d.exact), (1, true));
    let d = distance(&s, &a, &g(&s, "c_{p2,p3}"), &ComplexKind::Surviving, budget()).unwrap();
    assert_eq!((d.value, d.exact), (2, true));
}

#[test]
fn not_a_vertex() {
    let s = s06();
    let z = g(&s, "c_{z,p1}");
    let a = g(&s, "c_{p1,p2}");
    assert!(matches!(distance(&s, &z, &a, &ComplexKind::Surviving, budget()), Err(Error::NotAVertex(_))));
    let w = Witness::from_boundary(&s, &z).unwrap();
    assert!(matches!(distance(&s, &z, &a, &ComplexKind::Witness(w), budget()), Err(Error::NotAVertex(_))));
}

#[test]
fn geodesic_examples() {
    let s = s06();
    let a = g(&s, "c_{p1,p2}");
    let set = geodesics(&s, &a, &a.clone(), &ComplexKind::Full, budget(), 64).unwrap();
    assert_eq!(set.paths.len(), 1);
    assert_eq!(set.paths[0].len(), 0);

    let c = g(&s, "c_{p3,p4}");
    let set = geodesics(&s, &a, &c, &ComplexKind::Full, budget(), 64).unwrap();
    assert_eq!(set.paths.len(), 1);
    assert_eq!(set.paths[0].codes(), vec![a.code().clone(), c.code().clone()]);

    let b = g(&s, "c_{p2,p3}");
    let set = geodesics(&s, &a, &b, &ComplexKind::Full, budget(), 4096).unwrap();
    assert!(!set.paths.is_empty());
    for p in &set.paths {
        assert_eq!(p.len(), 2);
        let m = &p.vertices[1];
        assert!(disjoint(&s, m, &a) && disjoint(&s, m, &b));
        p.validate(&s).unwrap();
    }
    // The boundary of the twice-punctured disk containing both curves, and the
    // curve around the other three punctures' complement, are both middles.
    let middles: Vec<_> = set.paths.iter().map(|p| p.vertices[1].code().clone()).collect();
    assert!(middles.contains(g(&s, "c_{p4,p5}").code()));
    assert!(middles.contains(g(&s, "c_{z,p4}").code()));
}

#[test]
fn cutoff_examples() {
    assert_eq!(apply_cutoff(&[3, 5, 23], 24), 0);
    assert_eq!(apply_cutoff(&[25, 3], 24), 25);
    for x in 0..60 {
        assert!(apply_cutoff(&[x], 24) <= apply_cutoff(&[x + 1], 24));
    }
}

#[test]
fn projection_examples() {
    let s = s06();
    let w = Witness::from_boundary(&s, &g(&s, "c_{z,p1}")).unwrap();
    let inside = g(&s, "c_{p2,p3}");
    assert_eq!(project(&s, &w, &inside).unwrap().codes(), vec![inside.code().clone()]);
    assert_eq!(project(&s, &w, w.boundary()).unwrap_err(), Error::EmptyProjection);

    let x = g(&s, "c_{p1,p2}");
    assert_eq!(geometric_intersection(&s, &x, w.boundary()).unwrap(), 2);
    let proj = project(&s, &w, &x).unwrap();
    assert_eq!(proj.curves().len(), 1);
    let y = &proj.curves()[0];
    assert!(disjoint(&s, y, w.boundary()) && y.is_essential(&s) && y != w.boundary());
    // The surgered curve encloses {z, p1, p2}, so its other side is a disk
    // around the three remaining punctures.
    let pieces = cut_along(&s, std::slice::from_ref(y)).unwrap();
    let rest: Vec<usize> = ["p3", "p4", "p5"].iter().map(|l| s.puncture_index(l).unwrap()).collect();
    assert!(pieces.pieces.iter().any(|p| p.is_disk_around(&rest)));
}

#[test]
fn projection_distance_examples() {
    let s = s06();
    let w = Witness::from_boundary(&s, &g(&s, "c_{z,p1}")).unwrap();
    let a = g(&s, "c_{p2,p3}");
    let d = projection_distance(&s, Some(&w), &a, &a.clone(), budget()).unwrap();
    assert!(d.value <= 2);
    let d = projection_distance(&s, Some(&w), &a, &g(&s, "c_{p4,p5}"), budget()).unwrap();
    assert_eq!((d.value, d.exact), (1, true));
}

#[test]
fn survival_path_examples() {
    let s = s06();
    let a = g(&s, "c_{p1,p2}");
    let b = g(&s, "c_{p3,p4}");
    let main = geodesics(&s, &a, &b, &ComplexKind::Full, budget(), 1).unwrap().paths.remove(0);
    let sp = survival_path(&s, &a, &b, &main, budget()).unwrap();
    assert!(sp.segments.is_empty());
    assert_eq!(sp.flattened, main.vertices);

    // [a, ∂W, b] with a, b in C(W) and disjoint.
    let z = g(&s, "c_{z,p1}");
    let b = g(&s, "c_{p4,p5}");
    let a = g(&s, "c_{p2,p3}");
    let main = ccsurvive::graph::GeodesicPath { vertices: vec![a.clone(), z, b.clone()], complex: ComplexKind::Full };
    let sp = survival_path(&s, &a, &b, &main, budget()).unwrap();
    assert_eq!(sp.segments.len(), 1);
    assert_eq!(sp.flattened, vec![a, b]);
    assert_eq!(sp.positions, vec![Some(0), None, Some(1)]);
    sp.validate(&s).unwrap();
}

#[test]
fn formula_examples() {
    let s = s06();
    let a = g(&s, "c_{p1,p2}");
    let b = g(&s, "c_{p3,p4}");
    let f = distance_formula(&s, &a, &b, 24, 8, budget()).unwrap();
    assert_eq!((f.witness_sum, f.upper, f.ds.value, f.verdict), (0, 1152, 1, Verdict::Holds));
    assert_eq!(distance_formula(&s, &a, &b, 23, 8, budget()).unwrap_err(), Error::KTooSmall { k: 23, min: 24 });
    assert_eq!(distance_formula(&s, &a, &b, 24, 30, budget()).unwrap_err(), Error::KTooSmall { k: 24, min: 30 });
}

#[test]
fn behrstock_not_applicable() {
    let s = s06();
    let w = Witness::from_boundary(&s, &g(&s, "c_{z,p1}")).unwrap();
    let w2 = Witness::from_boundary(&s, &g(&s, "c_{z,p2}")).unwrap();
    let u = g(&s, "c_{p3,p4}");
    let check = check_behrstock(&s, &u, &w, &w2, budget()).unwrap();
    assert_eq!(check.verdict, Verdict::NotApplicable);
}
