fn main() {
    std::process::exit(missing_kmeans::harness::cli::main_with_args(std::env::args_os()));
}
