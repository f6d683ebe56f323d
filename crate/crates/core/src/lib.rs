//! Non-adaptive combinatorial group testing with structure-aware cover-free
//! families.
//!
//! Items are columns and pooled tests are rows of a [`BinaryMatrix`]. A
//! classical d-CFF identifies up to `d` defectives anywhere; the structured
//! designs in [`scff`] exploit a community [`Hypergraph`] so that many more
//! defectives can be identified as long as they fit inside `r` edges.
//!
//! Module map:
//! - [`binmat`]: bit-packed test matrices and the Kronecker / stacking operators.
//! - [`gf`]: small finite fields and bounded-degree polynomials.
//! - [`cff`]: classical d-CFF constructions and the ingredient registry.
//! - [`hypergraph`]: community structure, defect covers, edge colourings, generators.
//! - [`scff`]: structure-aware constructions producing [`StructuredDesign`]s.
//! - [`verify`]: exhaustive and sampled property checkers.
//! - [`decode`]: outcome simulation and the vertex / edge decoders.
//! - [`harness`]: seeded scenario sweeps over a design.
//! - [`io`]: file formats shared with the command-line tool.

pub mod binmat;
pub mod bits;
pub mod cff;
pub mod decode;
mod error;
pub mod gf;
pub mod harness;
pub mod hypergraph;
pub mod io;
pub mod scff;
pub mod verify;

pub use binmat::BinaryMatrix;
pub use bits::Bits;
pub use cff::{CffMatrix, Provenance};
pub use decode::{OutcomeVector, Status, StatusVector};
pub use error::{Error, Result};
pub use gf::{Field, Poly};
pub use hypergraph::{DefectCover, EdgeColouring, Hypergraph};
pub use scff::{DesignKind, RowOrigin, StructuredDesign};
pub use verify::{CheckMode, Property, VerifyReport};
