use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::{ArchimedeanAlgebra, QuadraticAlgebraDescriptor};
use crate::error::{Error, Result};
use crate::residue::{is_prime, kronecker, ord_p, square_class};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Negative,
    Positive,
}

impl Sign {
    pub fn of(d: i64) -> Sign {
        if d < 0 {
            Sign::Negative
        } else {
            Sign::Positive
        }
    }
}

fn is_squarefree(mut n: u64) -> bool {
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p * p) {
            return false;
        }
        if n.is_multiple_of(p) {
            n /= p;
        }
        p += 1;
    }
    true
}

/// `D ≡ 1 mod 4` squarefree, or `D = 4m` with `m ≡ 2, 3 mod 4` squarefree.
pub fn is_fundamental(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => is_squarefree(d.unsigned_abs()),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m.unsigned_abs())
        }
        _ => false,
    }
}

/// Squarefree flags for `0..=x` by sieving out multiples of `p^2`.
pub fn squarefree_sieve(x: u64) -> Vec<bool> {
    let len = x as usize + 1;
    let mut flags = vec![true; len];
    if len > 0 {
        flags[0] = false;
    }
    let mut k = 2usize;
    while k * k < len {
        let sq = k * k;
        let mut j = sq;
        while j < len {
            flags[j] = false;
            j += sq;
        }
        k += 1;
    }
    flags
}

/// Every fundamental discriminant with `|D| <= x` and the given sign, by
/// increasing `|D|`.
pub fn fundamental_discriminants(x: u64, sign: Sign) -> Vec<i64> {
    let sf = squarefree_sieve(x);
    let s: i64 = match sign {
        Sign::Negative => -1,
        Sign::Positive => 1,
    };
    (3..=x as i64)
        .filter_map(|a| {
            let d = s * a;
            let ok = match d.rem_euclid(4) {
                1 => sf[a as usize],
                0 => matches!((d / 4).rem_euclid(4), 2 | 3) && sf[a as usize / 4],
                _ => false,
            };
            ok.then_some(d)
        })
        .collect()
}

/// `F ⊗ Q_p` for `F = Q(sqrt(D))`, `D` fundamental.
pub fn local_type(d: i64, p: u64) -> QuadraticAlgebraDescriptor {
    debug_assert!(is_fundamental(d) && is_prime(p));
    match kronecker(d, p) {
        1 => QuadraticAlgebraDescriptor::Split,
        -1 => QuadraticAlgebraDescriptor::unramified(p),
        _ => QuadraticAlgebraDescriptor::Ramified {
            class: square_class(d as i128, p).expect("nonzero"),
            delta: ord_p(d as i128, p),
        },
    }
}

pub fn archimedean_type(d: i64) -> ArchimedeanAlgebra {
    if d > 0 {
        ArchimedeanAlgebra::RealSplit
    } else {
        ArchimedeanAlgebra::Complex
    }
}

/// A required local behaviour at one place of `Q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LocalCondition {
    Archimedean(ArchimedeanAlgebra),
    Finite {
        p: u64,
        algebra: QuadraticAlgebraDescriptor,
    },
}

impl LocalCondition {
    pub fn place(&self) -> Option<u64> {
        match self {
            LocalCondition::Archimedean(_) => None,
            LocalCondition::Finite { p, .. } => Some(*p),
        }
    }

    pub fn holds(&self, d: i64) -> bool {
        match *self {
            LocalCondition::Archimedean(a) => archimedean_type(d) == a,
            LocalCondition::Finite { p, algebra } => local_type(d, p) == algebra,
        }
    }
}

impl fmt::Display for LocalCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalCondition::Archimedean(a) => write!(f, "inf={a}"),
            LocalCondition::Finite { p, algebra } => write!(f, "{p}={}", algebra.syntax()),
        }
    }
}

impl FromStr for LocalCondition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (place, desc) = s
            .trim()
            .split_once('=')
            .ok_or_else(|| Error::InvalidCondition(format!("expected place=descriptor, got '{s}'")))?;
        if place == "inf" {
            return Ok(LocalCondition::Archimedean(desc.parse()?));
        }
        let p: u64 = place
            .parse()
            .map_err(|_| Error::InvalidCondition(format!("unknown place '{place}'")))?;
        Ok(LocalCondition::Finite {
            p,
            algebra: QuadraticAlgebraDescriptor::parse_at(p, desc)?,
        })
    }
}

/// Local conditions at pairwise distinct places, archimedean first and the
/// finite places in increasing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct ConditionSet {
    conditions: Vec<LocalCondition>,
}

impl ConditionSet {
    pub fn new(mut conditions: Vec<LocalCondition>) -> Result<Self> {
        conditions.sort();
        for w in conditions.windows(2) {
            if w[0].place() == w[1].place() {
                return Err(Error::InvalidCondition(format!(
                    "two conditions at the same place: {} and {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(Self { conditions })
    }

    pub fn conditions(&self) -> &[LocalCondition] {
        &self.conditions
    }

    pub fn archimedean(&self) -> Option<ArchimedeanAlgebra> {
        self.conditions.iter().find_map(|c| match c {
            LocalCondition::Archimedean(a) => Some(*a),
            _ => None,
        })
    }

    pub fn finite_places(&self) -> Vec<u64> {
        self.conditions.iter().filter_map(LocalCondition::place).collect()
    }

    /// Adds a condition at a new place.
    pub fn with(&self, c: LocalCondition) -> Result<Self> {
        let mut v = self.conditions.clone();
        v.push(c);
        Self::new(v)
    }

    pub fn matches(&self, d: i64) -> bool {
        matches(d, &self.conditions)
    }
}

impl fmt::Display for ConditionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.conditions.iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for ConditionSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim().is_empty() {
            return Ok(ConditionSet::default());
        }
        let conds = s.split(',').map(str::parse).collect::<Result<Vec<_>>>()?;
        ConditionSet::new(conds)
    }
}

/// `F = Q(sqrt(D))` has the required local type at every listed place.
pub fn matches(d: i64, conditions: &[LocalCondition]) -> bool {
    conditions.iter().all(|c| c.holds(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::residue::SquareClassLabel;
    use proptest::prelude::*;

    #[test]
    fn discriminant_examples() {
        assert_eq!(fundamental_discriminants(15, Sign::Negative), vec![-3, -4, -7, -8, -11, -15]);
        assert_eq!(fundamental_discriminants(15, Sign::Positive), vec![5, 8, 12, 13]);
        assert!(fundamental_discriminants(2, Sign::Negative).is_empty());
        assert!(fundamental_discriminants(2, Sign::Positive).is_empty());
        assert_eq!(fundamental_discriminants(100, Sign::Negative).len(), 31);
    }

    #[test]
    fn sieve_agrees_with_definition() {
        for sign in [Sign::Negative, Sign::Positive] {
            let sieved = fundamental_discriminants(5000, sign);
            let direct: Vec<i64> = (3..=5000i64)
                .map(|a| if sign == Sign::Negative { -a } else { a })
                .filter(|&d| is_fundamental(d))
                .collect();
            assert_eq!(sieved, direct);
        }
    }

    #[test]
    fn local_type_examples() {
        let minus5 = SquareClassLabel { p: 2, label: -5 };
        assert_eq!(
            local_type(-20, 2),
            QuadraticAlgebraDescriptor::Ramified { class: minus5, delta: 2 }
        );
        assert_eq!(local_type(17, 2), QuadraticAlgebraDescriptor::Split);
        assert_eq!(
            local_type(40, 2),
            QuadraticAlgebraDescriptor::Ramified {
                class: SquareClassLabel { p: 2, label: 10 },
                delta: 3
            }
        );
        assert_eq!(local_type(-3, 2), QuadraticAlgebraDescriptor::unramified(2));
        assert_eq!(local_type(-4, 3), QuadraticAlgebraDescriptor::unramified(3));
    }

    #[test]
    fn matches_examples() {
        let c = |s: &str| s.parse::<ConditionSet>().unwrap();
        assert!(c("2=ram:-5").matches(-20));
        assert!(!c("inf=RxR").matches(-20));
        assert!(c("2=split,inf=RxR").matches(17));
    }

    #[test]
    fn condition_parsing() {
        let set: ConditionSet = "2=ram:-1,inf=C,3=unram".parse().unwrap();
        assert_eq!(set.to_string(), "inf=C,2=ram:-1,3=unram");
        assert_eq!(set.archimedean(), Some(ArchimedeanAlgebra::Complex));
        assert_eq!(set.finite_places(), vec![2, 3]);
        assert!("2=split,2=unram".parse::<ConditionSet>().is_err());
        assert!("inf=C,inf=RxR".parse::<ConditionSet>().is_err());
        assert!("2=inert".parse::<ConditionSet>().is_err());
        assert!("4=split".parse::<ConditionSet>().is_err());
        assert!("2=ram:1".parse::<ConditionSet>().is_err());
        assert!("x".parse::<ConditionSet>().is_err());
    }

    #[test]
    fn ramified_iff_divides() {
        for d in fundamental_discriminants(3000, Sign::Negative)
            .into_iter()
            .chain(fundamental_discriminants(3000, Sign::Positive))
        {
            for p in [2u64, 3, 5, 7, 11, 13] {
                let t = local_type(d, p);
                assert_eq!(t.is_ramified(), d % p as i64 == 0, "D={d} p={p}");
                if t.is_ramified() {
                    // the field discriminant has the label's discriminant exponent
                    assert_eq!(t.class().unwrap().disc_valuation(), t.disc_valuation());
                }
            }
        }
    }

    fn any_condition() -> impl Strategy<Value = LocalCondition> {
        let arch = prop_oneof![Just(ArchimedeanAlgebra::RealSplit), Just(ArchimedeanAlgebra::Complex)]
            .prop_map(LocalCondition::Archimedean);
        let fin = (prop_oneof![Just(2u64), Just(3), Just(5), Just(7)], 0usize..8).prop_map(|(p, i)| {
            let all = QuadraticAlgebraDescriptor::all(p);
            LocalCondition::Finite { p, algebra: all[i % all.len()] }
        });
        prop_oneof![arch, fin]
    }

    proptest! {
        #[test]
        fn condition_syntax_round_trips(conds in proptest::collection::vec(any_condition(), 0..5)) {
            if let Ok(set) = ConditionSet::new(conds) {
                let text = set.to_string();
                prop_assert_eq!(text.parse::<ConditionSet>().unwrap(), set);
            }
        }
    }
}
