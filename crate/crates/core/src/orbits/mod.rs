//! The representation `GL1 × GL2` on binary quadratic forms over `Z/p^n`:
//! the action, standard representatives, the subgroup `N_x`, orbits and
//! stabilizers.

pub mod congruence;
pub mod form;
pub mod nx;
pub mod orbit;
pub mod standard;

pub use congruence::{
    congruence_count_formula, congruence_solution_count, congruence_solutions,
    coset_normal_form_check, dx_subset_orbit_check, solution_set_characterization,
    CharacterizationVerdict, CosetVerdict, LiftVerdict,
};
pub use form::{BinaryQF, GroupElement, IntForm};
pub use nx::{a_matrix, nx_element, nx_order, nx_order_formula};
pub use orbit::{group_order, orbit_size, stabilizer_elements, stabilizer_order, OrbitSet};
pub use standard::{ramified_representatives, representative_for, standard_representatives, StandardRep};
