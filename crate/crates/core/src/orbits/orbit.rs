//! Orbits of `G(Z/p^N) = GL1 × GL2` on `V(Z/p^N)` by breadth-first closure,
//! and stabilizer orders by orbit–stabilizer.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::orbits::form::{BinaryQF, GroupElement, IntForm};
use crate::residue::{Residue, ResidueRing, Scalars};

/// Largest `p^(3N)` for which a dense orbit bit-set is built.
pub const MAX_ORBIT_POINTS: u128 = 1 << 26;

/// Largest `p^(4N)` scanned when listing a stabilizer.
pub const MAX_STABILIZER_SCAN: u128 = 1 << 26;

/// `#G(Z/p^N) = p^(N-1)(p-1) · p^(4(N-1))(p^2-1)(p^2-p)`.
pub fn group_order(p: u64, level: u32) -> u128 {
    let p = p as u128;
    let gl1 = p.pow(level - 1) * (p - 1);
    let gl2 = p.pow(4 * (level - 1)) * (p * p - 1) * (p * p - p);
    gl1 * gl2
}

/// Generators of `G(Z/p^N)`: `E12(1)`, `E21(1)`, `diag(u, 1)` and the scalars
/// `(u, I)` for `u` running over unit-group generators.
pub fn group_generators(ring: &ResidueRing) -> Vec<GroupElement<Residue>> {
    let (o, z) = (ring.one(), ring.zero());
    let mut gens = vec![
        GroupElement::new(o, [[o, o], [z, o]]),
        GroupElement::new(o, [[o, z], [o, o]]),
    ];
    for u in ring.unit_group_generators() {
        gens.push(GroupElement::new(o, [[u, z], [z, o]]));
        gens.push(GroupElement::new(u, [[o, z], [z, o]]));
    }
    gens
}

/// A `G(Z/p^N)`-orbit stored as a dense bit-set over `(Z/p^N)^3`.
#[derive(Debug, Clone)]
pub struct OrbitSet {
    ring: ResidueRing,
    bits: Vec<u64>,
    size: u64,
}

impl OrbitSet {
    pub fn compute(x: &IntForm, ring: &ResidueRing) -> Result<Self> {
        let m = ring.modulus() as u128;
        let points = m.pow(3);
        if points > MAX_ORBIT_POINTS {
            return Err(Error::Capacity {
                what: "orbit bit-set",
                requested: points,
                limit: MAX_ORBIT_POINTS,
            });
        }
        let gens = group_generators(ring);
        let mut set = OrbitSet {
            ring: *ring,
            bits: vec![0u64; (points as usize).div_ceil(64)],
            size: 0,
        };
        let start = x.reduce(ring);
        let mut queue = VecDeque::new();
        set.insert(&start);
        queue.push_back(start);
        while let Some(y) = queue.pop_front() {
            for g in &gens {
                let z = g.act(ring, &y);
                if set.insert(&z) {
                    queue.push_back(z);
                }
            }
        }
        Ok(set)
    }

    fn index(&self, y: &BinaryQF<Residue>) -> usize {
        let m = self.ring.modulus();
        (y.x0.0 + m * (y.x1.0 + m * y.x2.0)) as usize
    }

    fn insert(&mut self, y: &BinaryQF<Residue>) -> bool {
        let i = self.index(y);
        let (w, b) = (i / 64, 1u64 << (i % 64));
        let fresh = self.bits[w] & b == 0;
        if fresh {
            self.bits[w] |= b;
            self.size += 1;
        }
        fresh
    }

    pub fn contains(&self, y: &BinaryQF<Residue>) -> bool {
        let i = self.index(y);
        self.bits[i / 64] & (1u64 << (i % 64)) != 0
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn ring(&self) -> &ResidueRing {
        &self.ring
    }
}

pub fn orbit_size(x: &IntForm, ring: &ResidueRing) -> Result<u64> {
    Ok(OrbitSet::compute(x, ring)?.size())
}

/// `#G(Z/p^N) / #(G(Z/p^N) x)`.
pub fn stabilizer_order(x: &IntForm, ring: &ResidueRing) -> Result<u128> {
    let orbit = orbit_size(x, ring)? as u128;
    let group = group_order(ring.p(), ring.level());
    debug_assert_eq!(group % orbit, 0);
    Ok(group / orbit)
}

/// Every element of the stabilizer of `x` in `G(Z/p^N)`, found by scanning
/// `GL2(Z/p^N)`: for each `g2` the scalar `t` is forced by the `v1^2`
/// coefficient when `x` is monic.
pub fn stabilizer_elements(x: &IntForm, ring: &ResidueRing) -> Result<Vec<GroupElement<Residue>>> {
    x.monic_coeffs().ok_or(Error::NotMonic)?;
    let m = ring.modulus();
    let scan = (m as u128).pow(4);
    if scan > MAX_STABILIZER_SCAN {
        return Err(Error::Capacity {
            what: "stabilizer scan",
            requested: scan,
            limit: MAX_STABILIZER_SCAN,
        });
    }
    let target = x.reduce(ring);
    let one = ring.one();
    let mut out = Vec::new();
    for a in 0..m {
        for b in 0..m {
            let lead = target.eval(ring, Residue(a), Residue(b));
            let Some(t) = ring.inv(lead) else { continue };
            for c in 0..m {
                for d in 0..m {
                    let g = GroupElement::new(t, [[Residue(a), Residue(b)], [Residue(c), Residue(d)]]);
                    if !ring.is_unit(g.chi2(ring)) {
                        continue;
                    }
                    if g.act(ring, &target) == target {
                        debug_assert_eq!(ring.mul(t, lead), one);
                        out.push(g);
                    }
                }
            }
        }
    }
    Ok(out)
}
