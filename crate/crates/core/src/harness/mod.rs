//! File formats, instance generators and the command-line driver.

pub mod bench;
pub mod cli;
pub mod csv_io;
pub mod generate;
pub mod graph;
pub mod json;

pub use csv_io::{read_dataset, write_dataset, CsvOptions};
pub use generate::{gen_mixture, Mixture, MixtureSpec};
pub use graph::{graph_to_instance, read_edge_list, Graph};
pub use json::SolveOutput;
