//! Quadratic fields over `Q`: fundamental discriminants, local types, class
//! numbers and regulators.

pub mod analytic;
pub mod discriminant;
pub mod imaginary;
pub mod real;
pub mod sweep;

pub use analytic::analytic_crosscheck;
pub use discriminant::{
    archimedean_type, fundamental_discriminants, is_fundamental, local_type, matches, ConditionSet,
    LocalCondition, Sign,
};
pub use imaginary::{class_number_imaginary, imaginary_batch, ImaginaryClassNumbers};
pub use real::{class_number_real, fundamental_unit, fundamental_unit_norm, regulator_real};
pub use sweep::{sum_hr, sweep, ClassDataCache, ClassDataRecord, SweepLimits};
