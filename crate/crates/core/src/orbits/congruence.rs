//! The structure of the stabilizer of a ramified representative at its
//! working level: the coset normal form `(1, [[1, 0], [u, s]])` modulo `N_x`,
//! the congruence system it must satisfy, and the containment of the
//! residue disc `{ y ≡ x mod p^n }` in the orbit.

use std::collections::{BTreeSet, HashMap};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orbits::form::{BinaryQF, GroupElement, IntForm};
use crate::orbits::nx::{nx_element, nx_order};
use crate::orbits::orbit::{stabilizer_elements, OrbitSet};
use crate::orbits::standard::StandardRep;
use crate::residue::{ord_p, Residue, ResidueRing, Scalars};

/// `(u, s)` solves `a1 s + 2u ≡ a1` and `u^2 + a1 u s + a2 s^2 ≡ a2`.
fn solves(ring: &ResidueRing, a1: Residue, a2: Residue, u: Residue, s: Residue) -> bool {
    let two = ring.from_i64(2);
    let lin = ring.add(ring.mul(a1, s), ring.mul(two, u));
    if lin != a1 {
        return false;
    }
    let quad = ring.add(
        ring.add(ring.mul(u, u), ring.mul(a1, ring.mul(u, s))),
        ring.mul(a2, ring.mul(s, s)),
    );
    quad == a2
}

/// Every `(u, s) ∈ Z/p^N × (Z/p^N)^×` solving the congruence system.
pub fn congruence_solutions(x: &IntForm, ring: &ResidueRing) -> Result<BTreeSet<(Residue, Residue)>> {
    let (a1, a2) = x.monic_coeffs().ok_or(Error::NotMonic)?;
    let (a1, a2) = (ring.from_i64(a1), ring.from_i64(a2));
    let mut out = BTreeSet::new();
    for u in ring.elements() {
        for s in ring.units() {
            if solves(ring, a1, a2, u, s) {
                out.insert((u, s));
            }
        }
    }
    Ok(out)
}

pub fn congruence_solution_count(x: &IntForm, ring: &ResidueRing) -> Result<u64> {
    Ok(congruence_solutions(x, ring)?.len() as u64)
}

/// `2 p^delta`.
pub fn congruence_count_formula(p: u64, delta: u32) -> u128 {
    2 * (p as u128).pow(delta)
}

/// Reduces a rational with denominator prime to `p`.
fn rational_mod(ring: &ResidueRing, r: Ratio<i128>) -> Residue {
    let den = ring.reduce(*r.denom());
    let inv = ring.inv(den).expect("denominator prime to p");
    ring.mul(ring.reduce(*r.numer()), inv)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterizationVerdict {
    pub brute_force: usize,
    pub predicted: usize,
    /// Sizes of the closed-form pieces: one for `delta = 2m + 1`, the two
    /// branches `(A)` and `(B)` otherwise.
    pub branch_sizes: Vec<usize>,
    pub branches_disjoint: bool,
    pub equal: bool,
    /// Points in exactly one of the two sets, at most a handful.
    pub witnesses: Vec<(u64, u64)>,
}

/// Compares the brute-force solution set with its closed-form description:
/// for `delta = 2m + 1` (with `a1 = 0`) it is `u ≡ 0 mod p^(3m+2)`,
/// `s^2 ≡ 1 mod p^(4m+1)`; for `delta = 2l <= 2m` it is the disjoint union of
/// `(A) u ≡ 0` and `(B) u ≡ -b π`, with `s ≡ 1 - 2u/a1`, all mod `p^(l+2m+1)`.
pub fn solution_set_characterization(rep: &StandardRep) -> Result<CharacterizationVerdict> {
    if !rep.is_ramified() {
        return Err(Error::NotRamified);
    }
    let (a1, a2) = rep.a1_a2().ok_or(Error::NotMonic)?;
    let ring = rep.working_ring();
    let p = rep.p;
    let m = rep.m;
    let brute = congruence_solutions(&rep.form, &ring)?;

    let pieces: Vec<BTreeSet<(Residue, Residue)>> = if rep.delta == 2 * m + 1 {
        if a1 != 0 {
            return Err(Error::NotMonic);
        }
        let u_mod = p.pow(3 * m + 2);
        let s_mod = p.pow(4 * m + 1);
        let set = ring
            .elements()
            .filter(|u| u.0 % u_mod == 0)
            .flat_map(|u| {
                ring.units()
                    .filter(move |s| (s.0 as u128 * s.0 as u128) % s_mod as u128 == 1 % s_mod as u128)
                    .map(move |s| (u, s))
            })
            .collect();
        vec![set]
    } else {
        let l = rep.delta / 2;
        let k = l + 2 * m + 1;
        let modk = p.pow(k);
        let pi = Ratio::from_integer(a2 as i128);
        let a1r = Ratio::from_integer(a1 as i128);
        let four = Ratio::from_integer(4);
        let b1 = four * pi * pi / (a1r * a1r) - pi;
        let b2 = a1r - four * pi / a1r;
        let b = b2 / b1;
        debug_assert_eq!(ord_p(*b1.numer(), p) as i64 - ord_p(*b1.denom(), p) as i64, 1);
        let two_over_a1 = rational_mod(&ring, Ratio::new(2, a1 as i128));
        let minus_b_pi = rational_mod(&ring, -b * pi);
        let branch = |u0: Residue| -> BTreeSet<(Residue, Residue)> {
            ring.elements()
                .filter(|u| ring.sub(*u, u0).0 % modk == 0)
                .flat_map(|u| {
                    let s0 = ring.sub(ring.one(), ring.mul(two_over_a1, u));
                    ring.units()
                        .filter(move |s| ring.sub(*s, s0).0 % modk == 0)
                        .map(move |s| (u, s))
                })
                .collect()
        };
        vec![branch(ring.zero()), branch(minus_b_pi)]
    };

    let branch_sizes = pieces.iter().map(BTreeSet::len).collect();
    let branches_disjoint = pieces.len() < 2 || pieces[0].is_disjoint(&pieces[1]);
    let predicted: BTreeSet<_> = pieces.into_iter().flatten().collect();
    let witnesses = brute
        .symmetric_difference(&predicted)
        .take(8)
        .map(|(u, s)| (u.0, s.0))
        .collect();
    Ok(CharacterizationVerdict {
        brute_force: brute.len(),
        predicted: predicted.len(),
        branch_sizes,
        branches_disjoint,
        equal: brute == predicted,
        witnesses,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetVerdict {
    pub stabilizer: u64,
    pub nx: u64,
    pub representatives: u64,
    pub pass: bool,
}

fn in_nx(ring: &ResidueRing, a1: i64, a2: i64, g: &GroupElement<Residue>) -> bool {
    let [[c, d], _] = g.g2;
    match nx_element(&IntForm::new(1, a1, a2), ring, c, d) {
        Ok(Some(n)) => &n == g,
        _ => false,
    }
}

/// Checks that every stabilizer element is `n · (1, [[1, 0], [u, s]])` with
/// `n ∈ N_x`, each coset meeting the normal form exactly once.
pub fn coset_normal_form_check(x: &IntForm, ring: &ResidueRing) -> Result<CosetVerdict> {
    let (a1, a2) = x.monic_coeffs().ok_or(Error::NotMonic)?;
    let stab = stabilizer_elements(x, ring)?;
    let nx = nx_order(x, ring)?;
    let target = x.reduce(ring);
    let one = ring.one();
    let mut fibres: HashMap<(Residue, Residue), u64> = HashMap::new();
    let mut ok = true;
    for g in &stab {
        let [[_, g212], [_, g222]] = g.g2;
        let Some(n1) = nx_element(x, ring, g222, ring.neg(g212))? else {
            ok = false;
            continue;
        };
        let g1 = n1.compose(ring, g);
        let Some(scale) = ring.inv(g1.g2[0][0]) else {
            ok = false;
            continue;
        };
        let n2 = nx_element(x, ring, scale, ring.zero())?.expect("unit scalar");
        let r = n2.compose(ring, &g1);
        let normal = r.t == one && r.g2[0] == [one, ring.zero()] && ring.is_unit(r.g2[1][1]);
        // g r^-1 must lie in N_x, and the representative must fix x.
        let back = g.compose(ring, &r.inverse(ring).expect("invertible"));
        if !normal || !in_nx(ring, a1, a2, &back) || r.act(ring, &target) != target {
            ok = false;
            continue;
        }
        *fibres.entry((r.g2[1][0], r.g2[1][1])).or_default() += 1;
    }
    let reps = fibres.len() as u64;
    let pass = ok && fibres.values().all(|&c| c == nx) && reps * nx == stab.len() as u64;
    Ok(CosetVerdict {
        stabilizer: stab.len() as u64,
        nx,
        representatives: reps,
        pass,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftVerdict {
    pub lifts: u64,
    pub in_orbit: u64,
    pub pass: bool,
}

/// Every `y ∈ V(Z/p^N)` with `y ≡ x mod p^n` lies in the level-`N` orbit of `x`.
pub fn dx_subset_orbit_check(x: &IntForm, p: u64, n: u32, level: u32) -> Result<LiftVerdict> {
    if level <= n {
        return Err(Error::ZeroLevel);
    }
    let ring = ResidueRing::new(p, level)?;
    let orbit = OrbitSet::compute(x, &ring)?;
    let base = x.reduce(&ring);
    let step = p.pow(n);
    let count = p.pow(level - n);
    let mut in_orbit = 0u64;
    for i in 0..count {
        for j in 0..count {
            for k in 0..count {
                let lift = |c: Residue, t: u64| ring.add(c, Residue(t * step % ring.modulus()));
                let y = BinaryQF::new(lift(base.x0, i), lift(base.x1, j), lift(base.x2, k));
                if orbit.contains(&y) {
                    in_orbit += 1;
                }
            }
        }
    }
    let lifts = count.pow(3);
    Ok(LiftVerdict {
        lifts,
        in_orbit,
        pass: in_orbit == lifts,
    })
}
