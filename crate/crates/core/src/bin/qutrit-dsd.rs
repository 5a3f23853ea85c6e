fn main() {
    std::process::exit(qutrit_dsd::cli::main_with_args(std::env::args_os()));
}
