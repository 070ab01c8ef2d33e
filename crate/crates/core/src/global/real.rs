//! Real quadratic fields: the regulator from the continued fraction of the
//! integral generator `ω`, and the class number from cycles of reduced
//! indefinite forms.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Zero};

fn isqrt(d: i64) -> i64 {
    (d as u64).sqrt() as i64
}

/// Complete quotients `(P + sqrt(D)) / Q` of the continued fraction of
/// `ω = (1 + sqrt(D))/2` (`D ≡ 1 mod 4`) or `sqrt(D/4)`, over one period.
pub fn omega_period(d: i64) -> Vec<(i64, i64)> {
    assert!(d > 0 && d.rem_euclid(4) <= 1, "positive discriminant expected");
    let r = isqrt(d);
    assert!(r * r != d, "square discriminant");
    let (mut p, mut q) = if d % 4 == 1 { (1i64, 2i64) } else { (0, 2) };
    let mut seen: HashMap<(i64, i64), usize> = HashMap::new();
    let mut states = Vec::new();
    loop {
        if let Some(&start) = seen.get(&(p, q)) {
            return states.split_off(start);
        }
        seen.insert((p, q), states.len());
        states.push((p, q));
        debug_assert!(q > 0);
        let a = (p + r).div_euclid(q);
        p = a * q - p;
        q = (d - p * p) / q;
    }
}

/// `R_F = log ε` in nats, with `ε > 1` the fundamental unit of the maximal
/// order, accumulated as the sum of the logs of the periodic complete quotients.
pub fn regulator_real(d: i64) -> f64 {
    let sd = (d as f64).sqrt();
    omega_period(d)
        .iter()
        .map(|&(p, q)| ((p as f64 + sd) / q as f64).ln())
        .sum()
}

/// `N(ε) = (-1)^period`.
pub fn fundamental_unit_norm(d: i64) -> i32 {
    if omega_period(d).len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// The fundamental unit exactly as `(t, u)` with `ε = (t + u sqrt(D)) / 2`.
pub fn fundamental_unit(d: i64) -> (BigInt, BigInt) {
    let dd = BigInt::from(d);
    let (mut x, mut y, mut z) = (BigInt::one(), BigInt::zero(), BigInt::one());
    for (p, q) in omega_period(d) {
        let p = BigInt::from(p);
        let nx = &x * &p + &y * &dd;
        let ny = &x + &y * &p;
        x = nx;
        y = ny;
        z *= q;
        let g = x.gcd(&y).gcd(&z);
        if !g.is_one() {
            x /= &g;
            y /= &g;
            z /= &g;
        }
    }
    let two = BigInt::from(2);
    let (t, rt) = (&x * &two).div_rem(&z);
    let (u, ru) = (&y * &two).div_rem(&z);
    assert!(rt.is_zero() && ru.is_zero(), "unit not integral for D={d}");
    (t, u)
}

/// A reduced indefinite form `(a, b, c)` of positive discriminant:
/// `0 < b < sqrt(D)` and `sqrt(D) - b < 2|a| < sqrt(D) + b`.
fn is_reduced(d: i64, a: i64, b: i64) -> bool {
    let two_a = 2 * a.abs();
    b > 0 && b * b < d && (two_a + b) * (two_a + b) > d && (two_a <= b || (two_a - b) * (two_a - b) < d)
}

/// All reduced forms `(a, b)` of discriminant `d` (the third coefficient is
/// `(b^2 - d) / 4a`), both signs of `a`.
pub fn reduced_indefinite_forms(d: i64) -> Vec<(i64, i64)> {
    let r = isqrt(d);
    let mut out = Vec::new();
    let mut b = if (r - d).rem_euclid(2) == 0 { r } else { r - 1 };
    while b > 0 {
        let n = (d - b * b) / 4;
        let mut a = ((r - b) / 2).max(1);
        while (2 * a + b) * (2 * a + b) <= d {
            a += 1;
        }
        while 2 * a <= b || (2 * a - b) * (2 * a - b) < d {
            if n % a == 0 {
                out.push((a, b));
                out.push((-a, b));
            }
            a += 1;
        }
        b -= 2;
    }
    debug_assert!(out.iter().all(|&(a, b)| is_reduced(d, a, b)));
    out
}

/// One reduction step `(a, b, c) ↦ (c, b', c')` with `b' ≡ -b mod 2|c|`
/// the largest such value below `sqrt(D)`.
pub fn rho(d: i64, a: i64, b: i64) -> (i64, i64) {
    let r = isqrt(d);
    let c = (b * b - d) / (4 * a);
    let m = 2 * c.abs();
    let b2 = r - (r + b).rem_euclid(m);
    (c, b2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CycleCount {
    /// Reduced forms of both signs.
    pub reduced_forms: usize,
    /// Cycles under `rho`: the narrow class number.
    pub cycles: usize,
    /// Whether `(-a, b, -c)` lies on the cycle of the principal form.
    pub principal_self_opposite: bool,
}

impl CycleCount {
    /// `h = h+` when the principal cycle contains its negative, else `h+ / 2`.
    pub fn class_number(&self) -> u64 {
        if self.principal_self_opposite {
            self.cycles as u64
        } else {
            self.cycles as u64 / 2
        }
    }
}

pub fn reduced_cycles(d: i64) -> CycleCount {
    let forms = reduced_indefinite_forms(d);
    let index: HashMap<(i64, i64), usize> = forms.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let mut visited = vec![false; forms.len()];
    let mut cycles = 0;
    for start in 0..forms.len() {
        if visited[start] {
            continue;
        }
        cycles += 1;
        let mut i = start;
        while !visited[i] {
            visited[i] = true;
            let (a, b) = forms[i];
            i = index[&rho(d, a, b)];
        }
    }
    // Principal form (1, b0, .) with b0 the largest admissible b.
    let r = isqrt(d);
    let b0 = if (r - d).rem_euclid(2) == 0 { r } else { r - 1 };
    let mut f = (1, b0);
    let mut principal_self_opposite = false;
    loop {
        f = rho(d, f.0, f.1);
        if f == (-1, b0) {
            principal_self_opposite = true;
        }
        if f == (1, b0) {
            break;
        }
    }
    CycleCount {
        reduced_forms: forms.len(),
        cycles,
        principal_self_opposite,
    }
}

/// Class number of `Q(sqrt(D))` for fundamental `D > 0`.
pub fn class_number_real(d: i64) -> u64 {
    reduced_cycles(d).class_number()
}
