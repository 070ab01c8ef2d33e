use serde::{Deserialize, Serialize};

use crate::algebra::QuadraticAlgebraDescriptor;
use crate::error::{Error, Result};
use crate::orbits::form::IntForm;
use crate::residue::{is_prime, kronecker, least_nonresidue, ord_p, square_class, ResidueRing};

/// A fixed representative of one `G(Q_p)`-orbit of non-degenerate forms,
/// together with the numbers that govern its orbital volume.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StandardRep {
    pub p: u64,
    pub algebra: QuadraticAlgebraDescriptor,
    pub form: IntForm,
    /// Valuation of the relative discriminant.
    pub delta: u32,
    /// `ord_p(2)`.
    pub m: u32,
    /// Working level `delta + 2m + 1`.
    pub n: u32,
}

impl StandardRep {
    fn new(p: u64, algebra: QuadraticAlgebraDescriptor, form: IntForm) -> Self {
        let m = u32::from(p == 2);
        let delta = algebra.disc_valuation();
        Self {
            p,
            algebra,
            form,
            delta,
            m,
            n: delta + 2 * m + 1,
        }
    }

    /// `(a1, a2)` for the monic representatives.
    pub fn a1_a2(&self) -> Option<(i64, i64)> {
        self.form.monic_coeffs()
    }

    pub fn is_ramified(&self) -> bool {
        self.algebra.is_ramified()
    }

    /// The ring `Z/p^n` at the working level.
    pub fn working_ring(&self) -> ResidueRing {
        ResidueRing::new(self.p, self.n).expect("working level fits")
    }

    /// `x(v1, 1)` is Eisenstein: `p | a1` and `ord_p(a2) = 1`.
    pub fn is_eisenstein(&self) -> bool {
        match self.a1_a2() {
            Some((a1, a2)) => {
                a1 as i128 % self.p as i128 == 0 && a2 != 0 && ord_p(a2 as i128, self.p) == 1
            }
            None => false,
        }
    }

    /// Discriminant exponent predicted by the Eisenstein coefficients:
    /// `2 ord(a1)` when `1 <= ord(a1) <= m`, otherwise `2m + 1`.
    pub fn eisenstein_delta(&self) -> Option<u32> {
        if !self.is_eisenstein() {
            return None;
        }
        let (a1, _) = self.a1_a2()?;
        let v = if a1 == 0 { u32::MAX } else { ord_p(a1 as i128, self.p) };
        Some(if (1..=self.m).contains(&v) {
            2 * v
        } else {
            2 * self.m + 1
        })
    }

    pub fn label(&self) -> String {
        format!("{} [{}]", self.form, self.algebra)
    }
}

/// Ramified representatives over `Q_2`, keyed by square-class label.
const DYADIC_RAMIFIED: [(i64, IntForm); 6] = [
    (-1, IntForm::new(1, 2, 2)),
    (-5, IntForm::new(1, 2, 6)),
    (2, IntForm::new(1, 0, -2)),
    (-2, IntForm::new(1, 0, 2)),
    (10, IntForm::new(1, 0, -10)),
    (-10, IntForm::new(1, 0, 10)),
];

/// One representative per quadratic algebra of `Q_p`: split first, then
/// unramified, then the ramified extensions.
pub fn standard_representatives(p: u64) -> Result<Vec<StandardRep>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let mut reps = vec![StandardRep::new(
        p,
        QuadraticAlgebraDescriptor::Split,
        IntForm::new(0, 1, 0),
    )];
    let class_of = |f: &IntForm| square_class(f.disc(), p).expect("nondegenerate");
    let unram_form = if p == 2 {
        IntForm::new(1, 1, 1)
    } else {
        // Norm form of (1 + sqrt(1 - 4c)) / 2 for the least c giving a non-residue.
        let c = (1i64..)
            .find(|&c| kronecker(1 - 4 * c, p) == -1)
            .expect("non-residues exist");
        IntForm::new(1, 1, c)
    };
    reps.push(StandardRep::new(
        p,
        QuadraticAlgebraDescriptor::from_class(class_of(&unram_form)),
        unram_form,
    ));
    let ramified: Vec<IntForm> = if p == 2 {
        DYADIC_RAMIFIED.iter().map(|&(_, f)| f).collect()
    } else {
        let (p, u) = (p as i64, least_nonresidue(p) as i64);
        vec![IntForm::new(1, 0, -p), IntForm::new(1, 0, -u * p)]
    };
    for form in ramified {
        let algebra = QuadraticAlgebraDescriptor::from_class(class_of(&form));
        reps.push(StandardRep::new(p, algebra, form));
    }
    Ok(reps)
}

/// The ramified standard representatives of `Q_p`.
pub fn ramified_representatives(p: u64) -> Result<Vec<StandardRep>> {
    Ok(standard_representatives(p)?
        .into_iter()
        .filter(StandardRep::is_ramified)
        .collect())
}

/// The standard representative of the given algebra.
pub fn representative_for(p: u64, algebra: &QuadraticAlgebraDescriptor) -> Result<StandardRep> {
    standard_representatives(p)?
        .into_iter()
        .find(|r| &r.algebra == algebra)
        .ok_or_else(|| Error::InvalidCondition(format!("no representative for {algebra} at {p}")))
}
