//! File formats, command-line front end and floating-point oracles on top of
//! [`ggc_core`].

pub mod cli;
pub mod formats;
pub mod numeric;
