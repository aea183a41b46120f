//! Internal tangent spaces of pointed diffeological spaces, computed exactly
//! from finite presentations of their germ categories.
//!
//! A presentation lists plots as objects (with the dimension of their
//! domain), germs as morphisms (with their Jacobian at 0) and the
//! composition table. From it this crate computes the tangent space as the
//! colimit `F/R`, decides zero vectors with explicit relation
//! decompositions, decides weak filteredness, filteredness and
//! 1-representability, and checks exactness of the tangent sequence of a
//! bundle.
//!
//! The crate is `no_std` and only needs `alloc`. Parsing, file formats and
//! the command line live in the companion `tangent` crate.

#![no_std]

extern crate alloc;

pub mod bundle;
pub mod category;
pub mod colimit;
pub mod diagram;
pub mod linalg;
pub mod matrix;
pub mod presentation;
#[cfg(feature = "testgen")]
pub mod testgen;

/// Exact scalars: arbitrary-precision, always-reduced fractions.
pub type Rational = num_rational::BigRational;

pub use bundle::{
    verify_bundle, verify_group_quotient, BundleError, BundlePresentation, ExactnessReport, SequenceKind, Verdict,
    ViolationKind,
};
pub use category::{
    CategoryError, FilterednessReport, FilterednessWitness, FiniteCategory, InjectiveGeneration, MorphismId, ObjectId,
};
pub use colimit::{
    induced_map, is_zero, single_plot_witness, tangent_space, ColimitError, FormalTangentVector, RelationDecomposition,
    SinglePlotWitness, TangentSpace, ZeroDecision,
};
pub use diagram::{product_diagram, DiagramError, DiagramMorphism, FunctorError, TangentDiagram};
pub use matrix::RationalMatrix;
pub use presentation::{RawComposite, RawFunctor, RawMorphism, RawObject, RawPresentation};
