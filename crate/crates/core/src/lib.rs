#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod inference;
pub mod ldp;
pub mod moments;
pub mod numkit;
pub mod partition;
pub mod verify;

pub use error::{Error, Result};
pub use numkit::LogValue;
pub use partition::{Dataset, FrequencyCounts, Params};
