fn main() {
    std::process::exit(qtherm_cli::app::main_with_args(std::env::args_os()));
}
