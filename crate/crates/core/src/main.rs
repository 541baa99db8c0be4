fn main() {
    std::process::exit(sl2lnd::cli::run(std::env::args_os()));
}
