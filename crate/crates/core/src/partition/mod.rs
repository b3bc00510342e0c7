//! Random partitions: parameters, frequency counts, the EPPF, samplers and
//! exhaustive enumeration.

mod counts;
mod enumerate;
mod eppf;
mod params;
mod sampler;

pub use counts::*;
pub use enumerate::*;
pub use eppf::*;
pub use params::*;
pub use sampler::*;
