pub mod banchoff;
pub mod bloch;
pub mod complex;
pub mod corpus;
pub mod error;
pub mod forman;
pub mod geometry;
pub mod io;
pub mod persistence;
pub mod serde_rational;

pub use complex::{Simplex, SimplicialComplex, StarKind, VertexId};
pub use error::{Error, ErrorClass, Result};
