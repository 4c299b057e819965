//! Chip-firing divisor theory on finite multigraphs.
//!
//! The crate covers divisor equivalence, q-reduction, rank and exact
//! higher divisorial gonality, together with the gadget that ties the
//! gonality of a graph to the independence number of another, its explicit
//! witness divisor and the extraction of independent sets from good
//! divisors.

pub mod acceptance;
pub mod budget;
pub mod decide;
pub mod divisor;
pub mod error;
pub mod exec;
pub mod generate;
pub mod gonality;
pub mod graph;
pub mod io;
pub mod reduction;

pub use budget::Budget;
pub use divisor::{Divisor, FiringScript, RankCheck};
pub use error::{Error, Result};
pub use exec::{Exec, SearchConfig};
pub use gonality::GonalityResult;
pub use graph::{build_graph, MultiGraph, VertexSet};
pub use reduction::{OrientedIndependentData, ReductionInstance, Role};
