pub mod b1_synthesis;
pub mod cli;
pub mod dsl;
pub mod encodings;
pub mod error;
pub mod exact_real;
pub mod oracle_reductions;
pub mod signals;
pub mod toy_machine;
pub mod zw_hierarchy;
