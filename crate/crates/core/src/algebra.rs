//! Descriptors of separable quadratic algebras over the completions of `Q`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::residue::{is_prime, least_nonresidue, SquareClassLabel};

/// A separable quadratic algebra over `Q_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum QuadraticAlgebraDescriptor {
    /// `Q_p × Q_p`.
    Split,
    /// The unramified quadratic extension, `Q_p(sqrt(class))`.
    Unramified { class: SquareClassLabel },
    /// A ramified extension `Q_p(sqrt(class))` with discriminant `p^delta`.
    Ramified { class: SquareClassLabel, delta: u32 },
}

impl QuadraticAlgebraDescriptor {
    pub fn unramified(p: u64) -> Self {
        let label = if p == 2 { 5 } else { least_nonresidue(p) as i64 };
        QuadraticAlgebraDescriptor::Unramified {
            class: SquareClassLabel { p, label },
        }
    }

    /// Descriptor of `Q_p(sqrt(class))`; the trivial class gives the split algebra.
    pub fn from_class(class: SquareClassLabel) -> Self {
        match class.disc_valuation() {
            _ if class.is_trivial() => QuadraticAlgebraDescriptor::Split,
            0 => QuadraticAlgebraDescriptor::Unramified { class },
            delta => QuadraticAlgebraDescriptor::Ramified { class, delta },
        }
    }

    /// Every separable quadratic algebra of `Q_p`: split, unramified, then
    /// the ramified extensions in label order.
    pub fn all(p: u64) -> Vec<Self> {
        SquareClassLabel::all(p)
            .into_iter()
            .map(Self::from_class)
            .collect()
    }

    pub fn class(&self) -> Option<SquareClassLabel> {
        match *self {
            QuadraticAlgebraDescriptor::Split => None,
            QuadraticAlgebraDescriptor::Unramified { class }
            | QuadraticAlgebraDescriptor::Ramified { class, .. } => Some(class),
        }
    }

    pub fn disc_valuation(&self) -> u32 {
        match *self {
            QuadraticAlgebraDescriptor::Ramified { delta, .. } => delta,
            _ => 0,
        }
    }

    pub fn is_ramified(&self) -> bool {
        matches!(self, QuadraticAlgebraDescriptor::Ramified { .. })
    }

    /// Condition-syntax spelling: `split`, `unram` or `ram:<label>`.
    pub fn syntax(&self) -> String {
        match self {
            QuadraticAlgebraDescriptor::Split => "split".into(),
            QuadraticAlgebraDescriptor::Unramified { .. } => "unram".into(),
            QuadraticAlgebraDescriptor::Ramified { class, .. } => format!("ram:{}", class.label),
        }
    }

    /// Inverse of [`syntax`](Self::syntax) at the prime `p`.
    pub fn parse_at(p: u64, s: &str) -> Result<Self, Error> {
        if !is_prime(p) {
            return Err(Error::InvalidCondition(format!("{p} is not a prime")));
        }
        match s {
            "split" => Ok(QuadraticAlgebraDescriptor::Split),
            "unram" => Ok(Self::unramified(p)),
            _ => {
                let label = s
                    .strip_prefix("ram:")
                    .and_then(|l| l.parse::<i64>().ok())
                    .ok_or_else(|| Error::InvalidCondition(format!("unknown descriptor '{s}'")))?;
                let class = SquareClassLabel::parse(p, label).ok_or_else(|| {
                    Error::InvalidCondition(format!("{label} is not a square-class label at {p}"))
                })?;
                match Self::from_class(class) {
                    d @ QuadraticAlgebraDescriptor::Ramified { .. } => Ok(d),
                    _ => Err(Error::InvalidCondition(format!(
                        "Q_{p}(sqrt({label})) is not ramified"
                    ))),
                }
            }
        }
    }
}

impl fmt::Display for QuadraticAlgebraDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.syntax())
    }
}

/// The algebra `F ⊗ R` at the real place of `Q`, plus the complex-place case
/// used by base fields with complex embeddings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ArchimedeanAlgebra {
    /// `R × R` at a real place.
    RealSplit,
    /// `C` at a real place.
    Complex,
    /// `C × C` at a complex place.
    ComplexPlace,
}

impl fmt::Display for ArchimedeanAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ArchimedeanAlgebra::RealSplit => "RxR",
            ArchimedeanAlgebra::Complex => "C",
            ArchimedeanAlgebra::ComplexPlace => "CxC",
        })
    }
}

impl FromStr for ArchimedeanAlgebra {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "RxR" => Ok(ArchimedeanAlgebra::RealSplit),
            "C" => Ok(ArchimedeanAlgebra::Complex),
            _ => Err(Error::InvalidCondition(format!(
                "unknown archimedean descriptor '{s}'"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn census_of_algebras() {
        let ramified = |p| {
            QuadraticAlgebraDescriptor::all(p)
                .iter()
                .filter(|d| d.is_ramified())
                .count()
        };
        assert_eq!(ramified(2), 6);
        assert_eq!(ramified(3), 2);
        assert_eq!(ramified(7), 2);
        assert_eq!(QuadraticAlgebraDescriptor::all(2).len(), 8);
        assert_eq!(QuadraticAlgebraDescriptor::all(5).len(), 4);
    }

    #[test]
    fn syntax_round_trip() {
        for p in [2u64, 3, 5, 7] {
            for d in QuadraticAlgebraDescriptor::all(p) {
                assert_eq!(QuadraticAlgebraDescriptor::parse_at(p, &d.syntax()).unwrap(), d);
            }
        }
    }

    #[test]
    fn rejects_bad_descriptors() {
        assert!(QuadraticAlgebraDescriptor::parse_at(2, "ram:5").is_err());
        assert!(QuadraticAlgebraDescriptor::parse_at(2, "ram:3").is_err());
        assert!(QuadraticAlgebraDescriptor::parse_at(3, "inert").is_err());
        assert!(QuadraticAlgebraDescriptor::parse_at(4, "split").is_err());
        assert!("R".parse::<ArchimedeanAlgebra>().is_err());
    }
}
