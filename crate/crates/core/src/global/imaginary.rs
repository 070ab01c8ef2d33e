//! Class numbers of imaginary quadratic fields by counting reduced forms.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Default ceiling for [`imaginary_batch`].
pub const DEFAULT_BATCH_LIMIT: u64 = 10_000_000;

/// Number of reduced forms `(a, b, c)` with `b^2 - 4ac = D`, `|b| <= a <= c`
/// and `b >= 0` when `|b| = a` or `a = c`.
pub fn class_number_imaginary(d: i64) -> u64 {
    assert!(d < 0 && d.rem_euclid(4) <= 1, "negative discriminant expected");
    let n = -d;
    let mut h = 0;
    let mut a = 1i64;
    while 3 * a * a <= n {
        for b in -a + 1..=a {
            if (b - d).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            h += 1;
        }
        a += 1;
    }
    h
}

/// Reduced-form counts for every negative discriminant down to `-x`, indexed
/// by `|D|`. Values at fundamental `D` are class numbers.
#[derive(Debug, Clone)]
pub struct ImaginaryClassNumbers {
    counts: Vec<u32>,
}

impl ImaginaryClassNumbers {
    pub fn bound(&self) -> u64 {
        self.counts.len() as u64 - 1
    }

    pub fn get(&self, d: i64) -> Option<u64> {
        self.counts.get(d.unsigned_abs() as usize).map(|&h| h as u64)
    }
}

fn accumulate(a: u64, x: u64, counts: &mut [u32]) {
    for b in 0..=a {
        let b2 = b * b;
        // c ranges over a.. with 4ac - b^2 <= x
        let c_max = (x + b2) / (4 * a);
        let mut c = a;
        while c <= c_max {
            let n = (4 * a * c - b2) as usize;
            let w = if b == 0 || b == a || c == a { 1 } else { 2 };
            counts[n] += w;
            c += 1;
        }
    }
}

/// One pass over all reduced triples with `4ac - b^2 <= x`.
pub fn imaginary_batch(x: u64) -> Result<ImaginaryClassNumbers> {
    imaginary_batch_with_limit(x, DEFAULT_BATCH_LIMIT)
}

pub fn imaginary_batch_with_limit(x: u64, limit: u64) -> Result<ImaginaryClassNumbers> {
    if x > limit {
        return Err(Error::Capacity {
            what: "imaginary batch",
            requested: x as u128,
            limit: limit as u128,
        });
    }
    let len = x as usize + 1;
    let a_max = ((x / 3) as f64).sqrt() as u64 + 1;
    let counts = (1..=a_max)
        .into_par_iter()
        .filter(|a| 3 * a * a <= x)
        .fold(
            || vec![0u32; len],
            |mut acc, a| {
                accumulate(a, x, &mut acc);
                acc
            },
        )
        .reduce(
            || vec![0u32; len],
            |mut a, b| {
                a.iter_mut().zip(&b).for_each(|(s, t)| *s += t);
                a
            },
        );
    Ok(ImaginaryClassNumbers { counts })
}
