//! Arithmetic in `Z/p^n` and the p-adic classification helpers built on it:
//! valuations, unit-group generators, Kronecker symbols and square classes
//! of `Q_p^×`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest modulus accepted by [`ResidueRing::new`]; products of two
/// residues then fit in a `u64`.
pub const MAX_MODULUS: u64 = 1 << 32;

/// Commutative ring interface shared by `Z` (as [`Integers`]) and `Z/p^n`.
#[allow(clippy::wrong_self_convention)]
pub trait Scalars {
    type Elem: Copy + Eq + fmt::Debug;

    fn from_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn sub(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn mul(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;

    fn zero(&self) -> Self::Elem {
        self.from_i64(0)
    }

    fn one(&self) -> Self::Elem {
        self.from_i64(1)
    }
}

/// The rational integers with `i128` elements. Overflow panics.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Integers;

impl Scalars for Integers {
    type Elem = i128;

    fn from_i64(&self, v: i64) -> i128 {
        v as i128
    }
    fn add(&self, a: i128, b: i128) -> i128 {
        a.checked_add(b).expect("integer overflow")
    }
    fn sub(&self, a: i128, b: i128) -> i128 {
        a.checked_sub(b).expect("integer overflow")
    }
    fn mul(&self, a: i128, b: i128) -> i128 {
        a.checked_mul(b).expect("integer overflow")
    }
}

/// A residue class, stored as its canonical representative in `[0, p^n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Residue(pub u64);

impl Residue {
    pub fn value(self) -> u64 {
        self.0
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The ring `Z/p^n` for a rational prime `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ResidueRing {
    p: u64,
    n: u32,
    modulus: u64,
}

impl ResidueRing {
    pub fn new(p: u64, n: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n == 0 {
            return Err(Error::ZeroLevel);
        }
        let modulus = p
            .checked_pow(n)
            .filter(|&m| m <= MAX_MODULUS)
            .ok_or(Error::RingTooLarge { p, n })?;
        Ok(Self { p, n, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Number of units, `p^(n-1) (p - 1)`.
    pub fn unit_count(&self) -> u64 {
        self.modulus / self.p * (self.p - 1)
    }

    pub fn reduce(&self, v: i128) -> Residue {
        Residue(v.rem_euclid(self.modulus as i128) as u64)
    }

    pub fn neg(&self, a: Residue) -> Residue {
        if a.0 == 0 {
            a
        } else {
            Residue(self.modulus - a.0)
        }
    }

    pub fn pow(&self, a: Residue, mut e: u64) -> Residue {
        let mut base = a;
        let mut acc = Residue(1 % self.modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn is_unit(&self, a: Residue) -> bool {
        !a.0.is_multiple_of(self.p)
    }

    /// Multiplicative inverse of a unit; `None` for non-units.
    pub fn inv(&self, a: Residue) -> Option<Residue> {
        if !self.is_unit(a) {
            return None;
        }
        let (mut old_r, mut r) = (a.0 as i128, self.modulus as i128);
        let (mut old_s, mut s) = (1i128, 0i128);
        while r != 0 {
            let q = old_r / r;
            (old_r, r) = (r, old_r - q * r);
            (old_s, s) = (s, old_s - q * s);
        }
        debug_assert_eq!(old_r, 1);
        Some(self.reduce(old_s))
    }

    /// Largest `e <= n` with `p^e` dividing the representative; `n` for zero.
    pub fn valuation(&self, a: Residue) -> u32 {
        if a.0 == 0 {
            return self.n;
        }
        let mut v = 0;
        let mut x = a.0;
        while x.is_multiple_of(self.p) {
            x /= self.p;
            v += 1;
        }
        v
    }

    /// Reduction of this ring modulo `p^level` for `level <= n`.
    pub fn project(&self, a: Residue, level: u32) -> Residue {
        debug_assert!(level <= self.n);
        Residue(a.0 % self.p.pow(level))
    }

    pub fn elements(&self) -> impl Iterator<Item = Residue> + '_ {
        (0..self.modulus).map(Residue)
    }

    pub fn units(&self) -> impl Iterator<Item = Residue> + '_ {
        let p = self.p;
        (0..self.modulus).filter(move |v| v % p != 0).map(Residue)
    }

    /// A generating set of `(Z/p^n)^×`: a single primitive root for odd
    /// `p`, `{-1, 5}` for `p = 2, n >= 3`.
    pub fn unit_group_generators(&self) -> Vec<Residue> {
        if self.p == 2 {
            return match self.n {
                1 => vec![Residue(1)],
                2 => vec![Residue(3)],
                _ => vec![self.neg(Residue(1)), Residue(5)],
            };
        }
        let order = self.unit_count();
        let factors = distinct_prime_factors(order);
        let is_generator = |g: Residue| {
            self.is_unit(g) && factors.iter().all(|&f| self.pow(g, order / f).0 != 1)
        };
        (2..self.modulus)
            .map(Residue)
            .find(|&g| is_generator(g))
            .map(|g| vec![g])
            .unwrap_or_else(|| vec![Residue(1 % self.modulus)])
    }
}

impl Scalars for ResidueRing {
    type Elem = Residue;

    fn from_i64(&self, v: i64) -> Residue {
        self.reduce(v as i128)
    }
    fn add(&self, a: Residue, b: Residue) -> Residue {
        let s = a.0 + b.0;
        Residue(if s >= self.modulus { s - self.modulus } else { s })
    }
    fn sub(&self, a: Residue, b: Residue) -> Residue {
        Residue(if a.0 >= b.0 {
            a.0 - b.0
        } else {
            a.0 + self.modulus - b.0
        })
    }
    fn mul(&self, a: Residue, b: Residue) -> Residue {
        Residue(a.0 * b.0 % self.modulus)
    }
}

impl fmt::Display for ResidueRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z/{}^{}", self.p, self.n)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// If `q = p^f` for a prime `p` and `f >= 1`, returns `(p, f)`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    let p = *distinct_prime_factors(q).first()?;
    let mut rest = q;
    let mut f = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        f += 1;
    }
    (rest == 1).then_some((p, f))
}

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Exponent of `p` in a nonzero integer.
pub fn ord_p(a: i128, p: u64) -> u32 {
    assert!(a != 0, "valuation of zero");
    let p = p as i128;
    let mut a = a;
    let mut v = 0;
    while a % p == 0 {
        a /= p;
        v += 1;
    }
    v
}

pub fn mod_pow(base: u64, mut exp: u64, m: u64) -> u64 {
    let m128 = m as u128;
    let mut b = base as u128 % m128;
    let mut acc = 1u128 % m128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Kronecker symbol `(d | p)` for a prime `p`, with `(d | 2)` equal to 0 for
/// even `d`, `+1` for `d ≡ ±1 (mod 8)` and `-1` for `d ≡ ±3 (mod 8)`.
pub fn kronecker(d: i64, p: u64) -> i32 {
    debug_assert!(is_prime(p));
    if p == 2 {
        return match d.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        };
    }
    let r = (d as i128).rem_euclid(p as i128) as u64;
    if r == 0 {
        return 0;
    }
    if mod_pow(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Kronecker symbol `(a | n)` for arbitrary `n >= 1`; this is the quadratic
/// character `χ_D(n)` when `a = D` is a discriminant.
pub fn kronecker_symbol(a: i64, n: u64) -> i32 {
    assert!(n >= 1);
    let mut n = n;
    let mut result = 1i32;
    let twos = n.trailing_zeros();
    if twos > 0 {
        let k2 = kronecker(a, 2);
        if k2 == 0 {
            return 0;
        }
        if twos % 2 == 1 {
            result *= k2;
        }
        n >>= twos;
    }
    if n == 1 {
        return result;
    }
    // Jacobi symbol (a | n) with n odd.
    let mut a = (a as i128).rem_euclid(n as i128) as u64;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Smallest positive quadratic non-residue modulo an odd prime.
pub fn least_nonresidue(p: u64) -> u64 {
    assert!(p > 2 && is_prime(p));
    (2..p).find(|&a| kronecker(a as i64, p) == -1).unwrap()
}

/// A class of `Q_p^× / (Q_p^×)^2`, named by a fixed integer representative:
/// `{1, u, p, u p}` for odd `p` (with `u` the least non-residue) and
/// `{±1, ±2, ±5, ±10}` for `p = 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SquareClassLabel {
    pub p: u64,
    pub label: i64,
}

impl SquareClassLabel {
    /// All square classes of `Q_p^×`, trivial class first.
    pub fn all(p: u64) -> Vec<SquareClassLabel> {
        let labels: Vec<i64> = if p == 2 {
            vec![1, -1, 5, -5, 2, -2, 10, -10]
        } else {
            let u = least_nonresidue(p) as i64;
            let p = p as i64;
            vec![1, u, p, u * p]
        };
        labels
            .into_iter()
            .map(|label| SquareClassLabel { p, label })
            .collect()
    }

    /// Parses a label, accepting only canonical representatives for `p`.
    pub fn parse(p: u64, label: i64) -> Option<SquareClassLabel> {
        Self::all(p).into_iter().find(|c| c.label == label)
    }

    pub fn is_trivial(&self) -> bool {
        self.label == 1
    }

    /// Valuation of the discriminant of `Q_p(sqrt(label))` over `Q_p`:
    /// 0 when unramified (or trivial), positive when ramified.
    pub fn disc_valuation(&self) -> u32 {
        let d = self.label as i128;
        let field_disc = if d.rem_euclid(4) == 1 { d } else { 4 * d };
        ord_p(field_disc, self.p)
    }
}

impl fmt::Display for SquareClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label)
    }
}

/// Square class of a nonzero integer in `Q_p^×`.
pub fn square_class(a: i128, p: u64) -> Result<SquareClassLabel> {
    if a == 0 {
        return Err(Error::ZeroSquareClass);
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let v = ord_p(a, p);
    let unit = a / (p as i128).pow(v);
    let label = if p == 2 {
        let unit_label = match unit.rem_euclid(8) {
            1 => 1,
            3 => -5,
            5 => 5,
            7 => -1,
            _ => unreachable!("odd unit"),
        };
        if v % 2 == 1 {
            2 * unit_label
        } else {
            unit_label
        }
    } else {
        let residue = unit.rem_euclid(p as i128) as i64;
        let unit_label = if kronecker(residue, p) == 1 {
            1
        } else {
            least_nonresidue(p) as i64
        };
        if v % 2 == 1 {
            unit_label * p as i64
        } else {
            unit_label
        }
    };
    Ok(SquareClassLabel { p, label })
}

/// Square class of `num / den`; the class of `num * den` since `den^2` is a square.
pub fn square_class_rational(num: i128, den: i128, p: u64) -> Result<SquareClassLabel> {
    if den == 0 {
        return Err(Error::ZeroSquareClass);
    }
    square_class(num.checked_mul(den).ok_or(Error::ZeroSquareClass)?, p)
}
