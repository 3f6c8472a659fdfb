//! Plumbing graphs and exact lattice arithmetic for Brieskorn homology
//! spheres: minimal resolutions, intersection forms, `-E8` recognition,
//! blow-down calculus on configurations, the invariants `μ`, `μ̄`, `d`, and
//! the searches and tables built on top of them.
//!
//! All arithmetic is exact. Quadratic forms are [`lattice::SymmetricMatrix`]
//! over any [`lattice::ExactInteger`]; the crate-level alias
//! [`IntegerSymmetricMatrix`] fixes the scalar to [`num_bigint::BigInt`].

pub mod graph;
pub mod invariants;
pub mod lattice;
pub mod moves;
pub mod search;
pub mod seifert;
pub mod tables;

pub use graph::{Configuration, Shape, StarGraph, TorusKnot, VertexId};
pub use invariants::{InvariantReport, Violation, WuClass};
pub use lattice::{E8Certificate, SymmetricMatrix};
pub use moves::{MoveError, MoveTrace};
pub use search::{DiophantineFamily, FamilySolution};
pub use seifert::{BrieskornSpec, SeifertData};
pub use tables::Edition;

/// Arbitrary-precision symmetric integer matrix.
pub type IntegerSymmetricMatrix = lattice::SymmetricMatrix<num_bigint::BigInt>;

/// Machine-word matrix for callers that know their entries stay small.
pub type SmallSymmetricMatrix = lattice::SymmetricMatrix<i64>;
