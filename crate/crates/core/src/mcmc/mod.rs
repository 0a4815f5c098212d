//! Samplers for the model and the simulation experiments built on them.

mod events;
mod experiment;
mod sampler;
mod trajectory;

pub use events::*;
pub use experiment::*;
pub use sampler::*;
pub use trajectory::*;
