//! Special functions and exact arithmetic shared by the rest of the crate.

mod gamma;
mod gen_fact;
mod log_value;
mod stirling;

pub use gamma::*;
pub use gen_fact::*;
pub use log_value::*;
pub use stirling::*;
