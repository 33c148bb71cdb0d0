//! Exact-arithmetic Hochschild homology for finite-dimensional algebras,
//! finite linear categories and groupoids, computed through truncated bar
//! complexes.
//!
//! The crate is organized around a few layers:
//!
//! - [`field`] and [`matrix`]: exact scalars (rationals, prime fields) and
//!   deterministic sparse echelon-form linear algebra;
//! - [`chains`]: chain complexes, simplicial vector spaces, normalized
//!   chains, Eilenberg-Zilber shuffle maps and identity verification;
//! - [`algebra`]: finite-dimensional algebras, bimodules, group and twisted
//!   group algebras, Drinfeld doubles, Hochschild complexes and symbolic
//!   bar-resolution simplices;
//! - [`lincat`]: finite linear categories, Hochschild-Mitchell complexes,
//!   the agreement map onto categories of projectives, Yoneda and Fubini
//!   harnesses, and reversal;
//! - [`gpd`]: finite groupoids, loop groupoids, nerves, the loop-to-bar
//!   isomorphism, commuting pairs and the SL(2,Z) action;
//! - [`hca`]: homotopy coherent projective actions descending along rank-one
//!   central extensions, lift normalization and twist-insertion homotopies;
//! - [`verlinde`]: graded desk tensor categories, loop spaces, the nerve
//!   level braid action, shuffle products and equivariant twisted sectors;
//! - [`schema`]: the JSON input/output schemas used by the CLI.
//!
//! Every complex here is a truncation of an a priori infinite bar complex.
//! A complex carries a validity window `D`: levels `0..=D` and differentials
//! through degree `D` are authoritative, hence homology is authoritative in
//! degrees `<= D-1`. Every homology answer carries its window.

pub mod algebra;
pub mod chains;
pub mod error;
pub mod field;
pub mod gpd;
pub mod hca;
pub mod lincat;
pub mod matrix;
pub mod schema;
pub mod verlinde;

pub use error::{Error, Result};
pub use field::{Scalar, ScalarField};
pub use matrix::{Matrix, SparseVec};
