//! Class number formula evaluated with floating point, as an independent
//! check on the exact methods.

use std::f64::consts::PI;

use crate::residue::kronecker_symbol;

/// Largest `|D|` accepted by [`analytic_crosscheck`].
pub const ANALYTIC_LIMIT: i64 = 100_000;

fn roots_of_unity(d: i64) -> f64 {
    match d {
        -3 => 6.0,
        -4 => 4.0,
        _ => 2.0,
    }
}

/// `h·R` for `D > 0` and `h` for `D < 0` from the Dirichlet class number
/// formula with the finite character sums
///
/// ```text
/// D > 0:  hR = -1/2 Σ χ(a) log sin(πa/D)
/// D < 0:  h  = -w/(2|D|) Σ χ(a) a
/// ```
pub fn analytic_crosscheck(d: i64) -> f64 {
    assert!(d.abs() <= ANALYTIC_LIMIT && d.abs() >= 3);
    let n = d.unsigned_abs();
    if d > 0 {
        let s: f64 = (1..n)
            .map(|a| {
                let chi = kronecker_symbol(d, a) as f64;
                if chi == 0.0 {
                    0.0
                } else {
                    chi * (PI * a as f64 / n as f64).sin().ln()
                }
            })
            .sum();
        -0.5 * s
    } else {
        let s: i64 = (1..n).map(|a| kronecker_symbol(d, a) as i64 * a as i64).sum();
        -roots_of_unity(d) * s as f64 / (2.0 * n as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::global::discriminant::{fundamental_discriminants, Sign};
    use crate::global::imaginary::class_number_imaginary;
    use crate::global::real::{class_number_real, regulator_real};

    #[test]
    fn examples() {
        assert!((analytic_crosscheck(5) - 0.4812118).abs() < 1e-7);
        assert!((analytic_crosscheck(-23) - 3.0).abs() < 1e-9);
        assert!((analytic_crosscheck(-3) - 1.0).abs() < 1e-9);
        assert!((analytic_crosscheck(-4) - 1.0).abs() < 1e-9);
        let hr40 = 2.0 * (3.0 + 10f64.sqrt()).ln();
        assert!((analytic_crosscheck(40) - hr40).abs() < 1e-9);
        assert!((hr40 - 3.6368).abs() < 1e-4);
    }

    #[test]
    fn agrees_with_exact_methods() {
        for d in fundamental_discriminants(2000, Sign::Negative) {
            let h = class_number_imaginary(d) as f64;
            assert!((analytic_crosscheck(d) - h).abs() < 1e-6 * h, "D={d}");
        }
        for d in fundamental_discriminants(2000, Sign::Positive) {
            let hr = class_number_real(d) as f64 * regulator_real(d);
            assert!((analytic_crosscheck(d) - hr).abs() < 1e-6 * hr, "D={d}");
        }
    }
}
