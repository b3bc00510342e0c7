//! Rate functions for the block-frequency and block-count proportions.

mod block_count;
mod block_frequency;
mod closed_form;
mod curve;
mod legendre;

pub use block_count::*;
pub use block_frequency::*;
pub use closed_form::*;
pub use curve::*;
pub use legendre::LdpConfig;
