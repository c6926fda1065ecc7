fn main() {
    std::process::exit(stochastic_pendulum::cli::run(std::env::args_os()));
}
