mod common;

use ccsurvive::diagram::geometric_intersection;
use ccsurvive::registry::{generator, load_surface};

#[test]
fn generators_match_brute_force() {
    for id in ["S06", "S13"] {
        let s = load_surface(id).unwrap();
        let names: Vec<String> = s.generator_names().map(String::from).collect();
        for x in &names {
            for y in &names {
                let a = generator(&s, x).unwrap();
                let b = generator(&s, y).unwrap();
                let total: u32 = a.weights().iter().zip(b.weights()).map(|(p, q)| p + q).max().unwrap();
                if total > 6 {
                    continue;
                }
                let fast = geometric_intersection(&s, &a, &b).unwrap();
                let slow = common::brute_force_intersection(&s, &a, &b);
                assert_eq!(fast, slow, "{id}: i({x}, {y})");
            }
        }
    }
}
