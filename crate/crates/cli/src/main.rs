fn main() {
    std::process::exit(sparselab_cli::run(std::env::args_os()));
}
