fn main() {
    std::process::exit(phylokit::cli::dispatch(std::env::args_os()));
}
