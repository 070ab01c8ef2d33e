use std::fmt;

use serde::{Deserialize, Serialize};

use crate::residue::{Integers, Residue, ResidueRing, Scalars};

/// `x(v) = x0 v1^2 + x1 v1 v2 + x2 v2^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BinaryQF<T> {
    pub x0: T,
    pub x1: T,
    pub x2: T,
}

pub type IntForm = BinaryQF<i64>;

impl<T: Copy> BinaryQF<T> {
    pub const fn new(x0: T, x1: T, x2: T) -> Self {
        Self { x0, x1, x2 }
    }

    pub fn coeffs(&self) -> [T; 3] {
        [self.x0, self.x1, self.x2]
    }
}

impl<T: Copy> BinaryQF<T> {
    /// `P(x) = x1^2 - 4 x0 x2`.
    pub fn discriminant<R: Scalars<Elem = T>>(&self, ring: &R) -> T {
        let four = ring.from_i64(4);
        ring.sub(
            ring.mul(self.x1, self.x1),
            ring.mul(four, ring.mul(self.x0, self.x2)),
        )
    }

    pub fn eval<R: Scalars<Elem = T>>(&self, ring: &R, v1: T, v2: T) -> T {
        let a = ring.mul(self.x0, ring.mul(v1, v1));
        let b = ring.mul(self.x1, ring.mul(v1, v2));
        let c = ring.mul(self.x2, ring.mul(v2, v2));
        ring.add(ring.add(a, b), c)
    }
}

impl IntForm {
    pub fn disc(&self) -> i128 {
        self.to_integers().discriminant(&Integers)
    }

    pub fn to_integers(&self) -> BinaryQF<i128> {
        BinaryQF::new(self.x0 as i128, self.x1 as i128, self.x2 as i128)
    }

    pub fn reduce(&self, ring: &ResidueRing) -> BinaryQF<Residue> {
        BinaryQF::new(
            ring.from_i64(self.x0),
            ring.from_i64(self.x1),
            ring.from_i64(self.x2),
        )
    }

    /// Leading coefficient one: returns `(a1, a2)` with `x = v1^2 + a1 v1 v2 + a2 v2^2`.
    pub fn monic_coeffs(&self) -> Option<(i64, i64)> {
        (self.x0 == 1).then_some((self.x1, self.x2))
    }
}

impl fmt::Display for IntForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (c, mono) in [(self.x0, "v1^2"), (self.x1, "v1v2"), (self.x2, "v2^2")] {
            if c == 0 {
                continue;
            }
            if out.is_empty() {
                if c < 0 {
                    out.push('-');
                }
            } else {
                out.push_str(if c < 0 { " - " } else { " + " });
            }
            if c.unsigned_abs() != 1 {
                out.push_str(&c.unsigned_abs().to_string());
            }
            out.push_str(mono);
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

/// `g = (t, g2)` acting by `x(v) ↦ t x(v g2)`, `v` a row vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupElement<T> {
    pub t: T,
    /// Row-major `[[g211, g212], [g221, g222]]`.
    pub g2: [[T; 2]; 2],
}

impl<T: Copy> GroupElement<T> {
    pub fn new(t: T, g2: [[T; 2]; 2]) -> Self {
        Self { t, g2 }
    }

    pub fn identity<R: Scalars<Elem = T>>(ring: &R) -> Self {
        let (o, z) = (ring.one(), ring.zero());
        Self::new(o, [[o, z], [z, o]])
    }

    /// `χ1(g) = t`.
    pub fn chi1(&self) -> T {
        self.t
    }

    /// `χ2(g) = det g2`.
    pub fn chi2<R: Scalars<Elem = T>>(&self, ring: &R) -> T {
        let [[a, b], [c, d]] = self.g2;
        ring.sub(ring.mul(a, d), ring.mul(b, c))
    }

    /// `χ = χ1 χ2`.
    pub fn chi<R: Scalars<Elem = T>>(&self, ring: &R) -> T {
        ring.mul(self.t, self.chi2(ring))
    }

    /// Group law: `(g h) x = g (h x)`.
    pub fn compose<R: Scalars<Elem = T>>(&self, ring: &R, h: &Self) -> Self {
        let [[a, b], [c, d]] = self.g2;
        let [[e, f], [g, k]] = h.g2;
        let m = |x, y, z, w| ring.add(ring.mul(x, y), ring.mul(z, w));
        Self::new(
            ring.mul(self.t, h.t),
            [
                [m(a, e, b, g), m(a, f, b, k)],
                [m(c, e, d, g), m(c, f, d, k)],
            ],
        )
    }

    pub fn act<R: Scalars<Elem = T>>(&self, ring: &R, x: &BinaryQF<T>) -> BinaryQF<T> {
        let [[g11, g12], [g21, g22]] = self.g2;
        let two = ring.from_i64(2);
        let y0 = x.eval(ring, g11, g12);
        let y2 = x.eval(ring, g21, g22);
        let y1 = ring.add(
            ring.add(
                ring.mul(two, ring.mul(x.x0, ring.mul(g11, g21))),
                ring.mul(x.x1, ring.add(ring.mul(g11, g22), ring.mul(g21, g12))),
            ),
            ring.mul(two, ring.mul(x.x2, ring.mul(g12, g22))),
        );
        BinaryQF::new(
            ring.mul(self.t, y0),
            ring.mul(self.t, y1),
            ring.mul(self.t, y2),
        )
    }
}

impl GroupElement<Residue> {
    pub fn is_invertible(&self, ring: &ResidueRing) -> bool {
        ring.is_unit(self.t) && ring.is_unit(self.chi2(ring))
    }

    pub fn inverse(&self, ring: &ResidueRing) -> Option<Self> {
        let t = ring.inv(self.t)?;
        let det_inv = ring.inv(self.chi2(ring))?;
        let [[a, b], [c, d]] = self.g2;
        let s = |v| ring.mul(det_inv, v);
        Some(Self::new(
            t,
            [[s(d), s(ring.neg(b))], [s(ring.neg(c)), s(a)]],
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn discriminant_examples() {
        assert_eq!(IntForm::new(0, 1, 0).disc(), 1);
        assert_eq!(IntForm::new(1, 2, 2).disc(), -4);
        assert_eq!(IntForm::new(1, 0, -3).disc(), 12);
    }

    #[test]
    fn action_examples() {
        let z = Integers;
        let x = IntForm::new(1, 0, -3).to_integers();
        assert_eq!(GroupElement::identity(&z).act(&z, &x), x);
        let scalar = GroupElement::new(5, [[1, 0], [0, 1]]);
        let y = scalar.act(&z, &x);
        assert_eq!(y, BinaryQF::new(5, 0, -15));
        assert_eq!(y.discriminant(&z), 25 * x.discriminant(&z));
        let swap = GroupElement::new(1, [[0, 1], [1, 0]]);
        assert_eq!(swap.act(&z, &x), BinaryQF::new(-3, 0, 1));
    }

    #[test]
    fn coset_representative_action() {
        // (1, [[1,0],[u,s]]) sends v1^2 + a1 v1v2 + a2 v2^2 to
        // v1^2 + (a1 s + 2u) v1v2 + (u^2 + a1 u s + a2 s^2) v2^2.
        let z = Integers;
        for (a1, a2, u, s) in [(2i128, 2i128, 3i128, 5i128), (0, -3, 1, 2), (7, 11, -4, 9)] {
            let g = GroupElement::new(1, [[1, 0], [u, s]]);
            let y = g.act(&z, &BinaryQF::new(1, a1, a2));
            assert_eq!(y, BinaryQF::new(1, a1 * s + 2 * u, u * u + a1 * u * s + a2 * s * s));
        }
    }

    fn random_element(ring: &ResidueRing, rng: &mut impl Rng) -> GroupElement<Residue> {
        loop {
            let mut r = || Residue(rng.gen_range(0..ring.modulus()));
            let g = GroupElement::new(r(), [[r(), r()], [r(), r()]]);
            if g.is_invertible(ring) {
                return g;
            }
        }
    }

    #[test]
    fn relative_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (p, n) in [(2, 1), (2, 4), (2, 6), (3, 1), (3, 4), (5, 2), (7, 2)] {
            let ring = ResidueRing::new(p, n).unwrap();
            for _ in 0..1000 {
                let g = random_element(&ring, &mut rng);
                let m = ring.modulus();
                let x = BinaryQF::new(
                    Residue(rng.gen_range(0..m)),
                    Residue(rng.gen_range(0..m)),
                    Residue(rng.gen_range(0..m)),
                );
                let chi = g.chi(&ring);
                assert_eq!(
                    g.act(&ring, &x).discriminant(&ring),
                    ring.mul(ring.mul(chi, chi), x.discriminant(&ring))
                );
            }
        }
    }

    #[test]
    fn action_is_a_left_action() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let ring = ResidueRing::new(3, 3).unwrap();
        for _ in 0..500 {
            let g = random_element(&ring, &mut rng);
            let h = random_element(&ring, &mut rng);
            let x = IntForm::new(1, 3, 6).reduce(&ring);
            assert_eq!(g.compose(&ring, &h).act(&ring, &x), g.act(&ring, &h.act(&ring, &x)));
            let gi = g.inverse(&ring).unwrap();
            assert_eq!(g.compose(&ring, &gi), GroupElement::identity(&ring));
        }
    }

    #[test]
    fn display() {
        assert_eq!(IntForm::new(1, 2, 2).to_string(), "v1^2 + 2v1v2 + 2v2^2");
        assert_eq!(IntForm::new(1, 0, -3).to_string(), "v1^2 - 3v2^2");
        assert_eq!(IntForm::new(0, 1, 0).to_string(), "v1v2");
        assert_eq!(IntForm::new(-3, 0, 1).to_string(), "-3v1^2 + v2^2");
    }
}
