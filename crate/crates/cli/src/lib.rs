//! Output records and formatting shared by the `obzcp` binary and its tests.

pub mod record;
