fn main() {
    std::process::exit(frobstrat::cli::run(std::env::args_os()));
}
