fn main() {
    std::process::exit(conifold_cli::run(std::env::args_os().skip(1)));
}
