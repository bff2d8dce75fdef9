fn main() {
    std::process::exit(disclab::cli::dispatch(std::env::args_os()));
}
