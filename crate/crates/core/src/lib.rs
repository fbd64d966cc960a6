//! Numerical toolkit for the Kac–Baker spin chain with finitely many
//! exponentially decaying interactions.
//!
//! The chain's periodic partition functions are tied to a Ruelle transfer
//! operator acting on entire functions, and that operator is spectrally
//! equivalent to an integral operator whose matrix in the Hermite basis is
//! known in closed form. The modules follow that chain:
//!
//! * [`model`] — parameters, periodic energies, brute-force partition functions;
//! * [`ruelle`] — trace formulas and functional-equation residuals for the transfer operator;
//! * [`specialfns`] — Hermite functions, Laguerre polynomials, Mehler's kernel;
//! * [`kacgutz`] — the Hermite-basis matrix and the Gaussian kernel identities behind it;
//! * [`spectral`] — eigenvalues, Fredholm determinants, zeta functions, roots, asymptotics;
//! * [`verify`] — the identity suite replayed by `kaczeta verify`;
//! * [`cli`] — the command-line front end.

pub mod cli;
pub mod error;
pub mod kacgutz;
pub mod model;
pub mod quadrature;
pub mod ruelle;
pub mod spectral;
pub mod specialfns;
pub mod verify;

pub use error::{Error, Result};
pub use model::ModelParams;
pub use num_complex::Complex64;
pub use specialfns::MultiIndex;
