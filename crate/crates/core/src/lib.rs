//! Beam-space MIMO with a single radio: reactive load synthesis for a
//! mirror-symmetric three-port radiator and ergodic capacity of the
//! resulting beam-space channel.

pub mod channel;
pub mod cli;
pub mod error;
pub mod multiport;
pub mod numfmt;
pub mod symmetric3;
pub mod synthesis;

pub use error::{Error, Result};
