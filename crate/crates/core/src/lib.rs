//! Root selection, root tracking and obstruction certificates for families of
//! monic polynomials.
//!
//! The crate is organised bottom-up:
//!
//! * [`poly`]: monic polynomials as ascending coefficient tuples.
//! * [`solver`]: Aberth–Ehrlich simultaneous root finder and Newton polish.
//! * [`assign`]: minimal-cost perfect matching used to continue root orderings.
//! * [`quad`]: the four continuous root selectors of the real quadratic family.
//! * [`path`] and [`track`]: coefficient paths and continuous root tracking.
//! * [`monodromy`]: loop permutations and branch-elimination certificates.
//! * [`stability`]: spectral abscissa, Hurwitz test and the exponential bound
//!   on solutions of constant-coefficient linear ODEs.

pub mod assign;
pub mod certificate;
mod error;
pub mod gauge;
pub mod monodromy;
pub mod path;
pub mod poly;
pub mod quad;
pub mod solver;
pub mod stability;
pub mod track;

pub use error::{Error, Result};
pub use num_complex::Complex64 as Complex;
pub use poly::{FieldTag, MonicPoly, RootMultiset};
pub use solver::SolveControls;
pub use track::{TrackControls, TrajectoryBundle};
