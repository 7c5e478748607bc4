fn main() {
    std::process::exit(ffradon::cli::run(std::env::args_os()));
}
