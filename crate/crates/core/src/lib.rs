//! Symbolic computation in Leavitt path algebras of finite directed graphs.
//!
//! Elements are held in the normal form given by a specialization (a choice
//! of one special outgoing edge per non-sink vertex). On top of exact
//! arithmetic the crate provides the filtration by the order statistic,
//! truncated arithmetic in the graded completion, the idempotents `e(W)` and
//! `e_v`, and finite-precision checks of the structure theory.
//!
//! ```
//! use leavitt::{parse, Algebra, Field, Graph, Specialization};
//!
//! let g = Graph::from_json(r#"{"vertices":["v","w"],"edges":[
//!     {"name":"e","src":"v","dst":"v"},{"name":"f","src":"v","dst":"w"}]}"#).unwrap();
//! let gamma = Specialization::from_names(&g, [("v", "e")]).unwrap();
//! let alg = Algebra::new(g, gamma, Field::Rational).unwrap();
//! assert_eq!(parse(&alg, "e e*").unwrap().to_string(), "v - f f*");
//! ```

pub mod algebra;
pub mod cli;
pub mod completion;
pub mod error;
pub mod expr;
pub mod filtration;
pub mod graph;
pub mod scalar;
pub mod specialization;
pub mod structure;

pub use algebra::{monomial_product, Algebra, Element, Monomial};
pub use completion::{arrival_paths, e_of, e_vertex, Congruence, TruncatedElement};
pub use error::{Error, Result};
pub use expr::{parse, render, ParseError};
pub use filtration::{min_ord, ord, product_precision, required_precision, FiltrationParams, Order};
pub use graph::{EdgeId, Graph, Path, VertexId, VertexSet};
pub use scalar::{Field, Scalar};
pub use specialization::{Specialization, SpecializationReport};
pub use structure::{decompose, verify, DecompositionReport, Report, Status, Suite, Verdict};
