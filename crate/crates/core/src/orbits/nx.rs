//! The subgroup `N_x = { (det A^-1, A) : A = A_x(c, d) invertible }` of the
//! stabilizer of a monic form, `A_x(c, d) = [[c, d], [-a2 d, c + a1 d]]`.

use crate::error::{Error, Result};
use crate::orbits::form::{GroupElement, IntForm};
use crate::residue::{Residue, ResidueRing, Scalars};

/// `A_x(c, d)` for `x = v1^2 + a1 v1 v2 + a2 v2^2`.
pub fn a_matrix(ring: &ResidueRing, a1: i64, a2: i64, c: Residue, d: Residue) -> [[Residue; 2]; 2] {
    let (a1, a2) = (ring.from_i64(a1), ring.from_i64(a2));
    [
        [c, d],
        [ring.neg(ring.mul(a2, d)), ring.add(c, ring.mul(a1, d))],
    ]
}

/// `n_x(c, d)`, or `Ok(None)` when `det A_x(c, d)` is not a unit.
pub fn nx_element(
    x: &IntForm,
    ring: &ResidueRing,
    c: Residue,
    d: Residue,
) -> Result<Option<GroupElement<Residue>>> {
    let (a1, a2) = x.monic_coeffs().ok_or(Error::NotMonic)?;
    let a = a_matrix(ring, a1, a2, c, d);
    let det = GroupElement::new(ring.one(), a).chi2(ring);
    Ok(ring.inv(det).map(|t| GroupElement::new(t, a)))
}

/// `#N_x(Z/p^N)`: the pairs `(c, d)` with `x(c, d)` a unit.
pub fn nx_order(x: &IntForm, ring: &ResidueRing) -> Result<u64> {
    x.monic_coeffs().ok_or(Error::NotMonic)?;
    let f = x.reduce(ring);
    let mut count = 0u64;
    for c in ring.elements() {
        for d in ring.elements() {
            if ring.is_unit(f.eval(ring, c, d)) {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// `p^(2N-1) (p - 1)`.
pub fn nx_order_formula(p: u64, level: u32) -> u128 {
    (p as u128).pow(2 * level - 1) * (p as u128 - 1)
}
