//! Sweeps over fundamental discriminants collecting `(D, h, R)` and local
//! types, with an optional CSV cache.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::algebra::QuadraticAlgebraDescriptor;
use crate::error::{Error, Result};
use crate::global::discriminant::{fundamental_discriminants, local_type, ConditionSet, LocalCondition, Sign};
use crate::global::imaginary::imaginary_batch;
use crate::global::real::{class_number_real, regulator_real};

/// Primes whose local type is stored with every record.
pub const FINGERPRINT_PRIMES: [u64; 3] = [2, 3, 5];

/// Default sweep bounds.
pub const DEFAULT_IMAGINARY_BOUND: u64 = 1_000_000;
pub const DEFAULT_REAL_BOUND: u64 = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub struct ClassDataRecord {
    pub d: i64,
    pub h: u64,
    /// Regulator in nats; `1` for imaginary fields.
    pub r: f64,
    pub fingerprint: [QuadraticAlgebraDescriptor; 3],
}

impl ClassDataRecord {
    pub fn compute(d: i64, h: u64) -> Self {
        let r = if d > 0 { regulator_real(d) } else { 1.0 };
        ClassDataRecord {
            d,
            h,
            r,
            fingerprint: FINGERPRINT_PRIMES.map(|p| local_type(d, p)),
        }
    }

    pub fn hr(&self) -> f64 {
        self.h as f64 * self.r
    }

    pub fn norm_disc(&self) -> u64 {
        self.d.unsigned_abs()
    }

    pub fn local_type(&self, p: u64) -> QuadraticAlgebraDescriptor {
        match FINGERPRINT_PRIMES.iter().position(|&q| q == p) {
            Some(i) => self.fingerprint[i],
            None => local_type(self.d, p),
        }
    }

    pub fn satisfies(&self, c: &LocalCondition) -> bool {
        match *c {
            LocalCondition::Finite { p, algebra } => self.local_type(p) == algebra,
            LocalCondition::Archimedean(_) => c.holds(self.d),
        }
    }

    pub fn matches(&self, set: &ConditionSet) -> bool {
        set.conditions().iter().all(|c| self.satisfies(c))
    }
}

/// Upper bounds on `|D|` accepted by [`sweep`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepLimits {
    pub imaginary: u64,
    pub real: u64,
}

impl Default for SweepLimits {
    fn default() -> Self {
        SweepLimits {
            imaginary: DEFAULT_IMAGINARY_BOUND,
            real: DEFAULT_REAL_BOUND,
        }
    }
}

fn check_limit(sign: Sign, x: u64, limits: SweepLimits) -> Result<()> {
    let (what, limit) = match sign {
        Sign::Negative => ("imaginary sweep", limits.imaginary),
        Sign::Positive => ("real sweep", limits.real),
    };
    if x > limit {
        return Err(Error::Capacity {
            what,
            requested: x as u128,
            limit: limit as u128,
        });
    }
    Ok(())
}

/// Records for every fundamental `D` of the given sign with `|D| <= x`, by
/// increasing `|D|`.
pub fn sweep(sign: Sign, x: u64) -> Result<Vec<ClassDataRecord>> {
    sweep_with_limits(sign, x, SweepLimits::default())
}

pub fn sweep_with_limits(sign: Sign, x: u64, limits: SweepLimits) -> Result<Vec<ClassDataRecord>> {
    check_limit(sign, x, limits)?;
    let ds = fundamental_discriminants(x, sign);
    sweep_discriminants(sign, x, &ds)
}

fn sweep_discriminants(sign: Sign, x: u64, ds: &[i64]) -> Result<Vec<ClassDataRecord>> {
    match sign {
        Sign::Negative => {
            let batch = imaginary_batch(x)?;
            Ok(ds
                .par_iter()
                .map(|&d| ClassDataRecord::compute(d, batch.get(d).expect("within batch bound")))
                .collect())
        }
        Sign::Positive => Ok(ds
            .par_iter()
            .map(|&d| ClassDataRecord::compute(d, class_number_real(d)))
            .collect()),
    }
}

/// Sweep results keyed by `D`, optionally backed by a CSV file with columns
/// `D,h,R,L2,L3,L5`.
#[derive(Debug, Clone, Default)]
pub struct ClassDataCache {
    path: Option<PathBuf>,
    records: BTreeMap<i64, ClassDataRecord>,
    limits: Option<SweepLimits>,
}

const HEADER: [&str; 6] = ["D", "h", "R", "L2", "L3", "L5"];

impl ClassDataCache {
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Opens (or starts) a cache file; existing records are loaded.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut cache = ClassDataCache {
            path: Some(path.clone()),
            ..Default::default()
        };
        if path.exists() {
            let mut rdr = csv::Reader::from_path(&path)?;
            for row in rdr.records() {
                let rec = parse_record(&row?)?;
                cache.records.insert(rec.d, rec);
            }
        }
        Ok(cache)
    }

    pub fn with_limits(mut self, limits: SweepLimits) -> Self {
        self.limits = Some(limits);
        self
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Computes any missing records with `|D| <= x` and rewrites the file.
    /// Returns the number of records added.
    pub fn ensure(&mut self, sign: Sign, x: u64) -> Result<usize> {
        check_limit(sign, x, self.limits.unwrap_or_default())?;
        let missing: Vec<i64> = fundamental_discriminants(x, sign)
            .into_iter()
            .filter(|d| !self.records.contains_key(d))
            .collect();
        if missing.is_empty() {
            return Ok(0);
        }
        let fresh = sweep_discriminants(sign, x, &missing)?;
        let added = fresh.len();
        for r in fresh {
            self.records.insert(r.d, r);
        }
        self.save()?;
        Ok(added)
    }

    /// Records of the given sign with `|D| <= x`, by increasing `|D|`.
    pub fn records(&self, sign: Sign, x: u64) -> Vec<&ClassDataRecord> {
        let x = x as i64;
        match sign {
            Sign::Negative => self.records.range(-x..0).rev().map(|(_, r)| r).collect(),
            Sign::Positive => self.records.range(1..=x).map(|(_, r)| r).collect(),
        }
    }

    pub fn save(&self) -> Result<()> {
        let Some(path) = &self.path else { return Ok(()) };
        let tmp = path.with_extension("tmp");
        {
            let mut w = csv::Writer::from_path(&tmp)?;
            w.write_record(HEADER)?;
            for r in self.records.values() {
                let mut row = vec![r.d.to_string(), r.h.to_string(), format!("{:.16e}", r.r)];
                row.extend(r.fingerprint.iter().map(|f| f.syntax()));
                w.write_record(&row)?;
            }
            w.flush()?;
        }
        fs::rename(&tmp, path)?;
        Ok(())
    }
}

fn parse_record(row: &csv::StringRecord) -> Result<ClassDataRecord> {
    let bad = || Error::Cache(format!("{:?}", row));
    if row.len() != HEADER.len() {
        return Err(bad());
    }
    let d: i64 = row[0].parse().map_err(|_| bad())?;
    let h: u64 = row[1].parse().map_err(|_| bad())?;
    let r: f64 = row[2].parse().map_err(|_| bad())?;
    let mut fingerprint = [QuadraticAlgebraDescriptor::Split; 3];
    for (i, p) in FINGERPRINT_PRIMES.iter().enumerate() {
        fingerprint[i] = QuadraticAlgebraDescriptor::parse_at(*p, &row[3 + i]).map_err(|_| bad())?;
    }
    Ok(ClassDataRecord { d, h, r, fingerprint })
}

/// `Σ h·R` over the records with `|D| <= x` matching every condition.
pub fn sum_hr<'a>(records: impl IntoIterator<Item = &'a ClassDataRecord>, x: u64, set: &ConditionSet) -> f64 {
    records
        .into_iter()
        .filter(|r| r.norm_disc() <= x && r.matches(set))
        .map(ClassDataRecord::hr)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::global::imaginary::class_number_imaginary;

    #[test]
    fn imaginary_records() {
        let recs = sweep(Sign::Negative, 100).unwrap();
        assert_eq!(recs.len(), 31);
        assert_eq!(recs[0].d, -3);
        let total: u64 = recs.iter().map(|r| r.h).sum();
        assert_eq!(total, 89);
        assert!(recs.iter().all(|r| r.r == 1.0 && r.h == class_number_imaginary(r.d)));
    }

    #[test]
    fn real_records() {
        let recs = sweep(Sign::Positive, 100).unwrap();
        assert_eq!(recs.iter().map(|r| r.d).take(4).collect::<Vec<_>>(), vec![5, 8, 12, 13]);
        let r40 = recs.iter().find(|r| r.d == 40).unwrap();
        assert_eq!(r40.h, 2);
        assert!((r40.hr() - 3.6368).abs() < 1e-4);
    }

    #[test]
    fn sweep_limit() {
        let limits = SweepLimits { imaginary: 10, real: 10 };
        assert!(matches!(
            sweep_with_limits(Sign::Positive, 11, limits),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn conditioned_sums() {
        let recs = sweep(Sign::Negative, 100).unwrap();
        let c = |s: &str| s.parse::<ConditionSet>().unwrap();
        assert_eq!(sum_hr(&recs, 100, &c("inf=C")), 89.0);
        assert_eq!(sum_hr(&recs, 15, &c("inf=C,2=split")), 3.0);
        assert_eq!(sum_hr(&recs, 4, &c("inf=RxR")), 0.0);
        // 2-adic types partition the records
        let parts: f64 = QuadraticAlgebraDescriptor::all(2)
            .into_iter()
            .map(|a| sum_hr(&recs, 100, &c("inf=C").with(LocalCondition::Finite { p: 2, algebra: a }).unwrap()))
            .sum();
        assert_eq!(parts, 89.0);
    }

    #[test]
    fn cache_round_trip_and_resume() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.csv");
        let mut cache = ClassDataCache::open(&path).unwrap();
        assert_eq!(cache.ensure(Sign::Positive, 500).unwrap(), fundamental_discriminants(500, Sign::Positive).len());
        assert_eq!(cache.ensure(Sign::Negative, 300).unwrap(), fundamental_discriminants(300, Sign::Negative).len());
        let mut reopened = ClassDataCache::open(&path).unwrap();
        assert_eq!(reopened.len(), cache.len());
        assert_eq!(reopened.ensure(Sign::Positive, 500).unwrap(), 0);
        let added = reopened.ensure(Sign::Positive, 1000).unwrap();
        assert_eq!(added, fundamental_discriminants(1000, Sign::Positive).len() - fundamental_discriminants(500, Sign::Positive).len());
        for (a, b) in cache.records(Sign::Positive, 500).into_iter().zip(reopened.records(Sign::Positive, 500)) {
            assert_eq!(a, b);
        }
        let fresh = sweep(Sign::Positive, 1000).unwrap();
        let cached: Vec<ClassDataRecord> = reopened.records(Sign::Positive, 1000).into_iter().cloned().collect();
        assert_eq!(fresh, cached);
    }
}
