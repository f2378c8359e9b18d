fn main() {
    std::process::exit(dqsolve::cli::run(std::env::args_os()));
}
