//! Exact computations in the multiplicative (K-theoretic) Kostant–Kumar and
//! Soergel theory of an adjoint root datum, over `Q` and prime fields.
//!
//! * [`rootdata`]: Weyl group combinatorics of adjoint root data.
//! * [`laurent`]: the group algebra `k[X_*(T)]` and its fractions and jets.
//! * [`kkring`]: the smash product `Q_W` and Demazure elements `y_w`.
//! * [`structalg`]: functions on `W`, the dual basis `psi_w`, the map `tau`
//!   and its congruence image, Steinberg bases.
//! * [`soergelmod`]: Bott–Samelson modules and their Krull–Schmidt
//!   decompositions, characters, coinvariant algebras.
//! * [`cli`]: command parsing and JSON reports; [`acceptance`]: the
//!   end-to-end property suite shared by the `accept` command and tests.

pub mod acceptance;
pub mod cli;
pub mod error;
pub mod field;
pub mod kkring;
pub mod laurent;
pub mod linalg;
pub mod rootdata;
pub mod soergelmod;
pub mod structalg;

pub use error::{Error, Result};
pub use field::{FieldSpec, Scalar};
pub use laurent::{BinomialQuotient, Jet, LaurentPoly, RootRational};
pub use rootdata::{Lattice, RootDatum, WeylElt};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
