//! The `pph` command-line front end.

pub mod run;
pub mod script;
