fn main() {
    std::process::exit(zealot_cli::run_command(std::env::args_os()));
}
