//! TPTP CNF input, SZS result output and the command-line driver.

pub mod cli;
pub mod szs;
pub mod tptp;
