//! Independent brute-force checks of the local machinery against full
//! group enumeration.

use std::collections::HashSet;

use binquad::densities::{e_v, orbital_volume_bruteforce};
use binquad::orbits::{group_order, orbit_size, stabilizer_order, standard_representatives, GroupElement, IntForm};
use binquad::residue::{Residue, ResidueRing, Scalars};
use proptest::prelude::*;

fn full_orbit(x: &IntForm, ring: &ResidueRing) -> (HashSet<[u64; 3]>, u128) {
    let m = ring.modulus();
    let units: Vec<Residue> = ring.units().collect();
    let target = x.reduce(ring);
    let mut orbit = HashSet::new();
    let mut group = 0u128;
    let mut fixed = 0u128;
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                for d in 0..m {
                    let g2 = [[Residue(a), Residue(b)], [Residue(c), Residue(d)]];
                    let det = ring.sub(ring.mul(g2[0][0], g2[1][1]), ring.mul(g2[0][1], g2[1][0]));
                    if !ring.is_unit(det) {
                        continue;
                    }
                    for &t in &units {
                        let y = GroupElement::new(t, g2).act(ring, &target);
                        group += 1;
                        if y == target {
                            fixed += 1;
                        }
                        orbit.insert([y.x0.0, y.x1.0, y.x2.0]);
                    }
                }
            }
        }
    }
    assert_eq!(group, fixed * orbit.len() as u128);
    (orbit, group)
}

#[test]
fn orbits_match_full_enumeration() {
    for (p, n) in [(2u64, 1u32), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (7, 1)] {
        let ring = ResidueRing::new(p, n).unwrap();
        for rep in standard_representatives(p).unwrap() {
            let (orbit, group) = full_orbit(&rep.form, &ring);
            assert_eq!(group, group_order(p, n));
            assert_eq!(orbit_size(&rep.form, &ring).unwrap(), orbit.len() as u64, "{} at {p}^{n}", rep.label());
        }
    }
}

#[test]
fn orbits_of_one_level_are_disjoint() {
    // distinct algebras give disjoint orbits at the working level of the
    // finest representative
    for (p, n) in [(3u64, 2u32), (2, 3)] {
        let ring = ResidueRing::new(p, n).unwrap();
        let reps = standard_representatives(p).unwrap();
        let orbits: Vec<_> = reps.iter().map(|r| full_orbit(&r.form, &ring).0).collect();
        for i in 0..orbits.len() {
            for j in i + 1..orbits.len() {
                if reps[i].n <= n && reps[j].n <= n {
                    assert!(orbits[i].is_disjoint(&orbits[j]), "{} / {}", reps[i].label(), reps[j].label());
                }
            }
        }
    }
}

#[test]
fn unramified_volumes_at_level_one() {
    for p in [3u64, 5, 7, 11] {
        for rep in standard_representatives(p).unwrap().iter().filter(|r| !r.is_ramified()) {
            assert_eq!(orbital_volume_bruteforce(rep, 1).unwrap(), e_v(&rep.algebra, p), "{}", rep.label());
        }
    }
}

#[test]
fn dyadic_unramified_volumes() {
    for rep in standard_representatives(2).unwrap().iter().filter(|r| !r.is_ramified()) {
        assert_eq!(orbital_volume_bruteforce(rep, rep.n).unwrap(), e_v(&rep.algebra, 2), "{}", rep.label());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn stabilizer_is_level_stable(
        p in prop_oneof![Just(2u64), Just(3u64)],
        x0 in 1i64..40, x1 in -40i64..40, x2 in -40i64..40,
    ) {
        // past the working level the group grows by p^5 and the orbit by p^3
        let x = IntForm::new(x0, x1, x2);
        prop_assume!(x.disc() != 0);
        prop_assume!([x0, x1, x2].iter().any(|c| c % p as i64 != 0));
        let d = x.disc();
        let v = binquad::residue::ord_p(d, p);
        let n = v + 2 * u32::from(p == 2) + 1;
        prop_assume!((p as u128).pow(3 * (n + 1)) <= 1 << 22);
        let r1 = ResidueRing::new(p, n).unwrap();
        let r2 = ResidueRing::new(p, n + 1).unwrap();
        let s1 = stabilizer_order(&x, &r1).unwrap();
        let s2 = stabilizer_order(&x, &r2).unwrap();
        prop_assert_eq!(s2, s1 * (p as u128).pow(2));
    }
}
