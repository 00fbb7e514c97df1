//! Exact-arithmetic workbench for monomial ideals, standard sets, Stanley
//! decompositions and rational Hilbert series, together with the linear
//! algebra needed to test freeness of `I^i/I^{i+1}` over `S/I` and to bound
//! the Hilbert-Samuel multiplicity of weighted-graded quotient rings.
//!
//! Module map:
//!
//! * [`monom`] monomials, monomial ideals, standard sets, scaling, box filtrations
//! * [`stanley`] Stanley decompositions and the dimension/multiplicity of a standard set
//! * [`series`] rational series with `(1 - z^t)` denominators
//! * [`galg`] weighted-graded algebras `k[y]/K` and their ideal-theoretic invariants
//! * [`bounds`] multiplicity bounds assembled from the pieces above

pub mod bounds;
pub mod error;
pub mod field;
pub mod galg;
pub mod linalg;
pub mod monom;
pub mod poly;
pub mod series;
pub mod stanley;

pub use error::{Error, Result};
pub use field::{Field, PrimeField, Rationals};
pub use monom::{BoxFiltration, Monomial, MonomialIdeal, StandardSet};
pub use series::RationalSeries;
pub use stanley::{GammaAnalysis, StanleyDecomposition};
