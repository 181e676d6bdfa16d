//! Exact graph calculus for modified twisted MMM classes of disc bundles.

pub mod basis;
pub mod brauer;
pub mod chi;
pub mod compare;
pub mod dsl;
pub mod error;
pub mod graph;
pub mod label;
pub mod linalg;
pub mod random;
pub mod rewrite;
pub mod trivalent;
pub mod vector;

pub use basis::{corolla_basis, hilbert_series, independence_check};
pub use brauer::{act, compose, BrauerMorphism};
pub use chi::{ChiScalar, Poly, Rational};
pub use compare::{augment_external, blue_to_red, project_labels, pushforward};
pub use error::{ChiError, Error, Result};
pub use graph::{Draft, End, Flavor, LegName, MarkedGraph};
pub use label::LabelMonomial;
pub use rewrite::{contract_legs, reduce, reduce_to_corollas, CorollaVector, LabeledPartition, Part, Strategy};
pub use trivalent::{phi, trivalize, UndecoratedGraph};
pub use vector::{GraphVector, Term};
