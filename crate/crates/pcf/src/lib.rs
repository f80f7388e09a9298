//! Exact arithmetic for periodic continued fractions over Z[1/p] and their
//! p-adic convergence.
//!
//! The crate decides whether a periodic continued fraction with partial
//! quotients in Z[1/p] converges p-adically, computes the limit (an exact
//! rational, the point at infinity, or a truncated p-adic number), and
//! enumerates the p-adically convergent loci of the quadratic varieties
//! attached to small preperiod/period types. A Pell-equation toolbox backs
//! the search for pure-radical expansions of sqrt(d).
//!
//! Start with [`cf::Pcf`] and [`convergence::check_convergence`]; the
//! narrative guide lives in the `book/` directory of the repository and is
//! mirrored (and doc-tested) in [`guide`].

pub mod cf;
pub mod convergence;
pub mod error;
pub mod exact;
pub mod families13;
pub mod guide;
pub mod loci;
pub mod pell;
pub mod quad;
pub mod radical03;

pub use cf::{Mat2, Membership, Pcf};
pub use convergence::{
    check_convergence, limit, oracle_converges, ConvergenceReport, FailedCondition, Limit,
};
pub use error::{Error, Result};
pub use exact::{PAdicApprox, ProjPoint, Rational, Valuation};
pub use quad::QuadPoly;
