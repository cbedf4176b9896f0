fn main() {
    std::process::exit(chunklz::cli::run(std::env::args_os()));
}
