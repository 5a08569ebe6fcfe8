fn main() {
    std::process::exit(ksat_smj::cli::main_with_args(std::env::args_os()));
}
