pub mod channel;
pub mod error;
pub mod harness;
pub mod receiver;
pub mod selection;
pub mod shaping;

pub use error::{Error, Result};
