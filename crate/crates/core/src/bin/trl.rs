fn main() {
    std::process::exit(trl_core::cli::run(std::env::args_os()));
}
