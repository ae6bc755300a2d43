fn main() {
    std::process::exit(hk_cli::run(std::env::args_os()));
}
