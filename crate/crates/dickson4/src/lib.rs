//! Reversed Dickson polynomials of the fourth kind over finite fields.
//!
//! The family D_{n,3}(a, x) is studied here with the variable role reversed:
//! the first argument is a fixed parameter and the second ranges over F_q,
//! q = p^e with p > 3. The crate provides
//!
//! * exact integer coefficients and several independent evaluation routes
//!   (recursion, closed form through the quadratic extension, generating
//!   function, defining sum),
//! * every permutation-polynomial test the theory offers (direct table
//!   check, power sums, an index congruence, a two-to-one criterion on a
//!   twisted subset of F_{q^2}, and an auxiliary-polynomial equivalence),
//! * the first-moment recurrence machinery with both published coefficient
//!   conventions, checked against a brute-force oracle,
//! * a consistency battery wiring all of the above together.
//!
//! The `dickson4` binary exposes the same functionality on the command line.

pub mod binomial;
pub mod cli;
pub mod dickson;
pub mod error;
pub mod field;
pub mod moment;
pub mod perm;
pub mod poly;
pub mod quad;
pub mod verify;

pub use dickson::{
    classical_eval, frobenius_power_identity, genfun_series, rdp4_eval_closed, rdp4_eval_recursive,
    rdp4_special_value, rdp4_value_table, rdp_coeffs_exact, rdp_eval_param, FrobeniusPowerCheck,
    DEFAULT_N_MAX,
};
pub use error::{Error, Result};
pub use field::{Field, FieldCtx, FieldSpec, FqElem, MAX_FIELD_ORDER};
pub use moment::{Convention, Divergence, MomentEngine, MomentTable};
pub use perm::{
    aux_identity_and_equiv, aux_poly, hermite_check, is_pp_direct, pp_scan, two_to_one_detail,
    AuxPoly, PpReport, TwoToOneDetail,
};
pub use poly::DensePoly;
pub use quad::{Fq2Elem, QuadExtCtx};
pub use verify::{run_all, CheckReport};
