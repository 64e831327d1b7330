fn main() {
    std::process::exit(hiergraph::cli::run(std::env::args_os()));
}
