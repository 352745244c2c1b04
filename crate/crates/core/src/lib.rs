//! Diffusion on network sheaves valued in quantale-enriched categories.

pub mod error;
pub mod qcat;
pub mod quantale;
pub mod report;
pub mod wlattice;
pub mod adjunction;
pub mod apps;
pub mod cli;
pub mod fixpoint;
pub mod gen;
pub mod oracle;
pub mod io;
pub mod sheaf;
pub mod stalk;

pub use error::{Error, Result};
pub use qcat::{FiniteQCategory, QCategory};
pub use quantale::{Elem, Quantale, QuantaleKind, TNorm, INF};
pub use report::LawReport;
pub use wlattice::{PresheafPower, UnderlineQ, WeightedDiagram, WeightedLattice};
