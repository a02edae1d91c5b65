fn main() {
    std::process::exit(traceforms::cli::run(std::env::args_os()));
}
