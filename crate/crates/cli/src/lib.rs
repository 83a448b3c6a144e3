//! Stable file formats, report serialization, and argument parsing shared
//! by the `zaremba` binary and its tests.

pub mod bitset_file;
pub mod report;
pub mod theta;
