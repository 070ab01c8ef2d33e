//! Predicted constants for the conditioned mean of `h_F R_F` over quadratic
//! fields, and their comparison with sweep data.

use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::algebra::{ArchimedeanAlgebra, QuadraticAlgebraDescriptor};
use crate::densities::{e_v, e_v_archimedean, ratio, PiRational};
use crate::error::{Error, Result};
use crate::global::{ClassDataCache, ConditionSet, LocalCondition, Sign};

pub use crate::densities::euler_factor;

/// Default prime cutoff for [`euler_product`].
pub const DEFAULT_P_CUT: u64 = 1_000_000;

/// Primes up to `n` by the sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

fn log_factor(p: u64) -> f64 {
    let a = 1.0 / p as f64;
    let a2 = a * a;
    let l = (-a2 - a2 * a + a2 * a2).ln_1p();
    // |log(1 - a^2 - a^3 + a^4)| <= 2a^2 for a <= 1/2
    debug_assert!(l.abs() <= 2.0 * a2);
    l
}

/// `∏_{p <= p_cut, p ∉ excluded} (1 - p^-2 - p^-3 + p^-4)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EulerProduct {
    pub value: f64,
    /// Bound on `|log|` of the omitted tail `p > p_cut`: `2 / (p_cut - 1)`.
    pub tail_bound: f64,
    pub p_cut: u64,
    pub excluded: Vec<u64>,
}

impl EulerProduct {
    /// The interval `value · exp(±tail_bound)` containing the full product.
    pub fn interval(&self) -> (f64, f64) {
        (self.value * (-self.tail_bound).exp(), self.value * self.tail_bound.exp())
    }
}

pub fn euler_product(exclude: &[u64], p_cut: u64) -> Result<EulerProduct> {
    if p_cut < 100 {
        return Err(Error::InvalidArgument(format!("P_cut = {p_cut} is below 100")));
    }
    let mut excluded: Vec<u64> = exclude.iter().copied().filter(|&p| p <= p_cut).collect();
    excluded.sort_unstable();
    excluded.dedup();
    // small terms first
    let log: f64 = primes_up_to(p_cut)
        .iter()
        .rev()
        .filter(|p| excluded.binary_search(p).is_err())
        .map(|&p| log_factor(p))
        .sum();
    Ok(EulerProduct {
        value: log.exp(),
        tail_bound: 2.0 / (p_cut - 1) as f64,
        p_cut,
        excluded,
    })
}

/// `e_k 𝔠_k^2 ζ_k(2) / (3 · 2^(r1 + r2 - 1))` for `k = Q`: `π^2/9`.
pub fn prefactor() -> PiRational {
    PiRational {
        coeff: ratio(1, 9),
        pi_power: 2,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalFactor {
    pub p: u64,
    pub algebra: QuadraticAlgebraDescriptor,
    pub value: BigRational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PredictedConstant {
    pub conditions: ConditionSet,
    pub prefactor: PiRational,
    pub archimedean: ArchimedeanAlgebra,
    pub archimedean_factor: PiRational,
    pub local_factors: Vec<LocalFactor>,
    /// `prefactor · archimedean_factor · ∏ local_factors`, exact.
    pub exact_part: PiRational,
    pub euler_product: EulerProduct,
    pub total: f64,
}

pub fn predicted_constant(set: &ConditionSet) -> Result<PredictedConstant> {
    predicted_constant_with_cut(set, DEFAULT_P_CUT)
}

pub fn predicted_constant_with_cut(set: &ConditionSet, p_cut: u64) -> Result<PredictedConstant> {
    let arch: Vec<ArchimedeanAlgebra> = set
        .conditions()
        .iter()
        .filter_map(|c| match c {
            LocalCondition::Archimedean(a) => Some(*a),
            _ => None,
        })
        .collect();
    let archimedean = match arch.as_slice() {
        [a @ (ArchimedeanAlgebra::RealSplit | ArchimedeanAlgebra::Complex)] => *a,
        [ArchimedeanAlgebra::ComplexPlace] => {
            return Err(Error::InvalidCondition("Q has no complex place".into()));
        }
        _ => {
            return Err(Error::InvalidCondition(format!(
                "exactly one archimedean condition required, got {}",
                arch.len()
            )))
        }
    };
    let local_factors: Vec<LocalFactor> = set
        .conditions()
        .iter()
        .filter_map(|c| match *c {
            LocalCondition::Finite { p, algebra } => Some(LocalFactor {
                p,
                algebra,
                value: e_v(&algebra, p),
            }),
            _ => None,
        })
        .collect();
    let archimedean_factor = e_v_archimedean(archimedean);
    let finite = local_factors
        .iter()
        .fold(BigRational::one(), |acc, f| acc * &f.value);
    let exact_part = prefactor()
        .mul(&archimedean_factor)
        .mul(&PiRational::rational(finite));
    let euler_product = euler_product(&set.finite_places(), p_cut)?;
    let total = exact_part.to_f64() * euler_product.value;
    Ok(PredictedConstant {
        conditions: set.clone(),
        prefactor: prefactor(),
        archimedean,
        archimedean_factor,
        local_factors,
        exact_part,
        euler_product,
        total,
    })
}

fn signs(set: &ConditionSet) -> Vec<Sign> {
    match set.archimedean() {
        Some(ArchimedeanAlgebra::RealSplit) => vec![Sign::Positive],
        Some(_) => vec![Sign::Negative],
        None => vec![Sign::Negative, Sign::Positive],
    }
}

/// `Σ h_F R_F` over fundamental `D` with `|D| <= x` satisfying every
/// condition; missing sweep data is computed into the cache.
pub fn empirical_sum(cache: &mut ClassDataCache, x: u64, set: &ConditionSet) -> Result<f64> {
    let mut total = 0.0;
    for sign in signs(set) {
        cache.ensure(sign, x)?;
        total += crate::global::sum_hr(cache.records(sign, x), x, set);
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub x: u64,
    pub empirical_sum: f64,
    pub normalized: f64,
    pub predicted: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub conditions: String,
    pub predicted: f64,
    pub checkpoints: Vec<Checkpoint>,
}

impl ConvergenceReport {
    /// Whether `|ratio - 1|` decreases weakly along the checkpoints.
    pub fn approaches_one(&self) -> bool {
        self.checkpoints
            .windows(2)
            .all(|w| (w[1].ratio - 1.0).abs() <= (w[0].ratio - 1.0).abs())
    }
}

pub fn convergence_report(cache: &mut ClassDataCache, xs: &[u64], set: &ConditionSet) -> Result<ConvergenceReport> {
    if xs.is_empty() || xs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("checkpoints must be nonempty and increasing".into()));
    }
    let predicted = predicted_constant(set)?.total;
    let mut checkpoints = Vec::with_capacity(xs.len());
    // one sweep at the largest bound serves every checkpoint
    empirical_sum(cache, *xs.last().unwrap(), set)?;
    for &x in xs {
        let empirical_sum = empirical_sum(cache, x, set)?;
        let normalized = empirical_sum / (x as f64).powf(1.5);
        checkpoints.push(Checkpoint {
            x,
            empirical_sum,
            normalized,
            predicted,
            ratio: normalized / predicted,
        });
    }
    Ok(ConvergenceReport {
        conditions: set.to_string(),
        predicted,
        checkpoints,
    })
}
