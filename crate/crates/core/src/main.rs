fn main() {
    std::process::exit(bwlab::cli::run_command(std::env::args_os()));
}
