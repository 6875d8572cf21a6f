//! Discrete commutative hypergroups: structure tables, characters, Fourier
//! algebra and multiplier norms, amenability witnesses and fusion rings.
//!
//! Tables are generic over the scalar type. Group-derived tables are exact
//! over [`Rational`]; the spectral and norm layers work in `f64`.

pub mod amenability;
pub mod axioms;
pub mod builders;
pub mod error;
pub mod function;
pub mod group;
pub mod io;
pub mod norms;
pub mod quantum;
pub mod scalar;
pub mod spectral;
pub mod table;

pub use axioms::{verify_axioms, Axiom, AxiomCheck, AxiomReport};
pub use builders::{conjugacy_hypergroup, family, irr_hypergroup, product, FamilySpec};
pub use error::{HypergroupError, Result};
pub use function::{
    convolve_functions, convolve_point, haar_weights, involute, translate, HFunction,
};
pub use group::FiniteGroup;
pub use quantum::{CentralFunction, FusionRing};
pub use scalar::{Rational, Scalar};
pub use spectral::{characters, CharacterTable};
pub use table::{HypergroupTable, TableSpec};

/// Exact table over arbitrary-precision rationals.
pub type ExactTable = HypergroupTable<Rational>;
/// Double-precision table.
pub type FloatTable = HypergroupTable<f64>;
/// Single-precision table.
pub type SingleTable = HypergroupTable<f32>;
