//! Local densities `e_v(L_v)`, closed-form and brute-force orbital volumes,
//! the census of quadratic extensions and the aggregate identities they
//! satisfy.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{ArchimedeanAlgebra, QuadraticAlgebraDescriptor};
use crate::error::{Error, Result};
use crate::orbits::{orbit_size, standard_representatives, StandardRep};
use crate::residue::{is_prime, ResidueRing, SquareClassLabel};

/// An exact number `coeff · π^pi_power`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiRational {
    pub coeff: BigRational,
    pub pi_power: i32,
}

impl PiRational {
    pub fn rational(coeff: BigRational) -> Self {
        Self { coeff, pi_power: 0 }
    }

    pub fn one() -> Self {
        Self::rational(BigRational::one())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            coeff: &self.coeff * &other.coeff,
            pi_power: self.pi_power + other.pi_power,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.coeff.to_f64().expect("finite") * std::f64::consts::PI.powi(self.pi_power)
    }
}

impl fmt::Display for PiRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (num, den) = (self.coeff.numer(), self.coeff.denom());
        let pi = match self.pi_power {
            0 => String::new(),
            1 | -1 => "π".to_string(),
            k => format!("π^{}", k.abs()),
        };
        let num_str = match (num.is_one(), self.pi_power > 0) {
            (true, true) => pi.clone(),
            (_, true) => format!("{num}{pi}"),
            _ => num.to_string(),
        };
        let den_str = match (den.is_one(), self.pi_power < 0) {
            (true, false) => String::new(),
            (true, true) => pi,
            (false, true) => format!("({den}{pi})"),
            (false, false) => den.to_string(),
        };
        if den_str.is_empty() {
            f.write_str(&num_str)
        } else {
            write!(f, "{num_str}/{den_str}")
        }
    }
}

pub(crate) fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn q_pow(q: u64, k: i32) -> BigRational {
    let base = BigRational::from_integer(BigInt::from(q));
    if k >= 0 {
        num_traits::pow(base, k as usize)
    } else {
        num_traits::pow(base.recip(), (-k) as usize)
    }
}

/// `e_v(L_v)` at a finite place with residue field of size `q`:
/// split `(1 - q^-2)/2`, unramified `(1 - q^-1)^2/2`, ramified with
/// discriminant exponent `delta` `q^-delta (1 - q^-1)(1 - q^-2)/2`.
pub fn e_v(algebra: &QuadraticAlgebraDescriptor, q: u64) -> BigRational {
    let half = ratio(1, 2);
    let one = BigRational::one();
    let inv_q = q_pow(q, -1);
    let inv_q2 = q_pow(q, -2);
    match algebra {
        QuadraticAlgebraDescriptor::Split => half * (one - inv_q2),
        QuadraticAlgebraDescriptor::Unramified { .. } => {
            let t = one - inv_q;
            half * &t * &t
        }
        QuadraticAlgebraDescriptor::Ramified { delta, .. } => {
            half * q_pow(q, -(*delta as i32)) * (&one - inv_q) * (one - inv_q2)
        }
    }
}

/// `e_v` at an archimedean place: `1/4` for `R × R`, `1/(2π)` for `C` at a
/// real place, `1/(4π^2)` at a complex place.
pub fn e_v_archimedean(algebra: ArchimedeanAlgebra) -> PiRational {
    match algebra {
        ArchimedeanAlgebra::RealSplit => PiRational::rational(ratio(1, 4)),
        ArchimedeanAlgebra::Complex => PiRational {
            coeff: ratio(1, 2),
            pi_power: -1,
        },
        ArchimedeanAlgebra::ComplexPlace => PiRational {
            coeff: ratio(1, 4),
            pi_power: -2,
        },
    }
}

/// `e_v(L_v)` together with the data it was evaluated at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalDensity {
    pub q: u64,
    pub algebra: QuadraticAlgebraDescriptor,
    pub value: BigRational,
}

impl LocalDensity {
    pub fn new(algebra: QuadraticAlgebraDescriptor, q: u64) -> Self {
        Self {
            q,
            algebra,
            value: e_v(&algebra, q),
        }
    }

    /// `|Δ|_v = q^-delta`.
    pub fn disc_absolute_value(&self) -> BigRational {
        q_pow(self.q, -(self.algebra.disc_valuation() as i32))
    }
}

/// `q^-delta (1 - q^-1)(1 - q^-2) / 2` for a ramified representative.
pub fn orbital_volume_closed(rep: &StandardRep) -> Result<BigRational> {
    if !rep.is_ramified() {
        return Err(Error::NotRamified);
    }
    Ok(e_v(&rep.algebra, rep.p))
}

/// `#(G(Z/p^N) x) / p^(3N)`, the orbit's share of `V(Z/p^N)`.
pub fn orbital_volume_bruteforce(rep: &StandardRep, level: u32) -> Result<BigRational> {
    let ring = ResidueRing::new(rep.p, level)?;
    let size = orbit_size(&rep.form, &ring)?;
    let total = BigInt::from(ring.modulus()).pow(3);
    Ok(BigRational::new(BigInt::from(size), total))
}

/// Number of ramified quadratic extensions of `Q_p` per discriminant
/// exponent, read off from the square classes.
pub fn extension_census(p: u64) -> Result<BTreeMap<u32, u64>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let mut out = BTreeMap::new();
    for class in SquareClassLabel::all(p) {
        if class.is_trivial() {
            continue;
        }
        let delta = class.disc_valuation();
        if delta > 0 {
            *out.entry(delta).or_insert(0) += 1;
        }
    }
    Ok(out)
}

/// The count of ramified extensions with exponent `delta`:
/// `2 q^(l-1)(q-1)` for `delta = 2l <= 2m`, `2 q^m` for `delta = 2m + 1`.
pub fn census_formula(q: u64, m: u32, delta: u32) -> Option<u64> {
    if delta == 2 * m + 1 {
        Some(2 * q.pow(m))
    } else if delta.is_multiple_of(2) && (2..=2 * m).contains(&delta) {
        let l = delta / 2;
        Some(2 * q.pow(l - 1) * (q - 1))
    } else {
        None
    }
}

/// Aggregate ramified volume for exponent `delta`:
/// `q^-l (1-q^-1)^2 (1-q^-2)` for `delta = 2l`, `q^-(m+1)(1-q^-1)(1-q^-2)` for `2m+1`.
pub fn aggregate_volume_formula(q: u64, m: u32, delta: u32) -> Option<BigRational> {
    let one = BigRational::one();
    let a = &one - q_pow(q, -1);
    let b = &one - q_pow(q, -2);
    if delta == 2 * m + 1 {
        Some(q_pow(q, -(m as i32 + 1)) * a * b)
    } else if delta.is_multiple_of(2) && (2..=2 * m).contains(&delta) {
        let l = (delta / 2) as i32;
        Some(q_pow(q, -l) * &a * &a * b)
    } else {
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AggregateVolume {
    pub delta: u32,
    pub reps: usize,
    pub sum: BigRational,
    pub formula: BigRational,
}

impl AggregateVolume {
    pub fn pass(&self) -> bool {
        self.sum == self.formula
    }
}

/// Sums the closed-form volumes of the ramified representatives per
/// exponent and pairs each sum with its aggregate formula.
pub fn aggregate_volume_check(p: u64) -> Result<Vec<AggregateVolume>> {
    let reps = standard_representatives(p)?;
    let m = u32::from(p == 2);
    let mut sums: BTreeMap<u32, (usize, BigRational)> = BTreeMap::new();
    for rep in reps.iter().filter(|r| r.is_ramified()) {
        let entry = sums.entry(rep.delta).or_insert((0, BigRational::zero()));
        entry.0 += 1;
        entry.1 += orbital_volume_closed(rep)?;
    }
    Ok(sums
        .into_iter()
        .map(|(delta, (reps, sum))| AggregateVolume {
            delta,
            reps,
            sum,
            formula: aggregate_volume_formula(p, m, delta).expect("delta in range"),
        })
        .collect())
}

/// `1 - q^-2 - q^-3 + q^-4`.
pub fn euler_factor(q: u64) -> BigRational {
    BigRational::one() - q_pow(q, -2) - q_pow(q, -3) + q_pow(q, -4)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MassIdentity {
    pub q: u64,
    pub sum: BigRational,
    pub euler_factor: BigRational,
}

impl MassIdentity {
    pub fn pass(&self) -> bool {
        self.sum == self.euler_factor
    }
}

/// `Σ_L e_v(L)` over every quadratic algebra of `Q_p`, against the Euler factor.
pub fn mass_identity_check(q: u64) -> Result<MassIdentity> {
    let sum = QuadraticAlgebraDescriptor::all(q)
        .iter()
        .map(|a| e_v(a, q))
        .fold(BigRational::zero(), |acc, v| acc + v);
    Ok(MassIdentity {
        q,
        sum,
        euler_factor: euler_factor(q),
    })
}

/// Exact-rational rendering, `n/d` or `n`.
pub fn fmt_rational(r: &BigRational) -> String {
    r.to_string()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityRow {
    pub algebra: String,
    pub delta: u32,
    pub e_v: String,
}

/// `e_v` for every algebra of `Q_p`, in descriptor order.
pub fn density_table(p: u64) -> Vec<DensityRow> {
    QuadraticAlgebraDescriptor::all(p)
        .into_iter()
        .map(|a| DensityRow {
            algebra: a.syntax(),
            delta: a.disc_valuation(),
            e_v: fmt_rational(&e_v(&a, p)),
        })
        .collect()
}
