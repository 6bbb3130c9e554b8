pub mod algebra;
pub mod cli;
pub mod examplesuite;
pub mod grading;
pub mod hochschild;
pub mod kernel;
pub mod structure;
