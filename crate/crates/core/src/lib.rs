//! Numerical Lie theory for the deformed homogeneous spaces `(G/K, g_s)`
//! fibered over compact symmetric spaces `G/H`.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`], [`algebra`] and [`subspace`] form the dense-matrix kernel:
//!   classical compact Lie algebras in a real encoding, subspaces with an
//!   inner-product form, bracket closures, kernels and commutants.
//! * [`isotropy`] holds the named isotropy constructions used by the corpus.
//! * [`bundle`] builds the symmetric pair, the ideal split `h = k ⊕ p2`, the
//!   deformed metric `g_s` and the enlarged model `ḡ = g ⊕ h/k`.
//! * [`holonomy`] covers the canonical connection: `Λ` operators, natural
//!   reductivity, holonomy closure and irreducibility, transvections, fixed
//!   sets and centers.
//! * [`polar`] checks the lifting criterion for polar actions by sampling
//!   points on the candidate section.

pub mod algebra;
pub mod bundle;
pub mod error;
pub mod holonomy;
pub mod isotropy;
pub mod linalg;
pub mod polar;
pub mod subspace;

pub use algebra::{AlgebraElement, Family, LieAlgebra};
pub use bundle::{BarModel, BundleSplit, MetricGs, SymmetricPair};
pub use error::{Error, Result};
pub use subspace::{LinearEndo, Subspace};
