//! Default numerical tolerances.
//!
//! Every predicate that compares floating point quantities takes its
//! tolerance as an argument; these are the values used when callers do not
//! override them.

/// Relative tolerance for closed-form data (distances, normalized triples).
pub const EPS_REL: f64 = 1e-9;

/// Minimum increase of `arg(p)` between consecutive curve samples, in radians.
pub const EPS_ARG: f64 = 1e-10;

/// Default truncation parameter for boundary limits in the glued space.
pub const T_MAX: f64 = 40.0;

/// Default tolerance on the seam parameter of the glued-space minimization.
pub const SEAM_TOL: f64 = 1e-12;

/// Successive-difference threshold for Gromov-product limits.
pub const GROMOV_CONVERGENCE: f64 = 1e-7;
