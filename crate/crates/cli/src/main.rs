fn main() {
    std::process::exit(vortex_cli::run(std::env::args_os()));
}
