fn main() {
    std::process::exit(rieszflow::cli::dispatch(std::env::args_os()));
}
