//! Upper bounds on the minimum (and lower bounds on the maximum) of a
//! polynomial over a simple set, computed from the moments of the
//! pushforward of a reference measure under the polynomial.
//!
//! The bounds at order `r` are the extreme eigenvalues of the Jacobi matrix
//! of the pushforward, equivalently of the Hankel pencil
//! `(H_r(x; #λ), H_r(#λ))`.

pub mod driver;
pub mod error;
pub mod jacobi;
pub mod measures;
pub mod mvbounds;
pub mod pencil;
pub mod poly;
pub mod scalar;

pub use error::{Error, Result};
pub use jacobi::{monic_recurrence_from_moments, tau_bounds_jacobi, MonicRecurrence, TriDiag};
pub use measures::{pushforward_moments, MeasureKind, MeasureSpec, MomentSequence};
pub use mvbounds::theta_bounds;
pub use pencil::{tau_bounds_pencil, PencilOptions, Precision};
pub use poly::{Monomial, Poly};
