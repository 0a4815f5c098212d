pub mod enumerate;
pub mod error;
pub mod graph;
pub mod lognum;
pub mod mcmc;
pub mod multiplicity;
pub mod cli;
pub mod output;
pub mod params;
pub mod partition;
pub mod phase;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{ClassGroup, DyadClass, Graph, VertexKind};
pub use lognum::{LogAccumulator, LogNumber};
pub use multiplicity::MultiplicityTable;
pub use params::{ModelParams, PhysicalParams};
