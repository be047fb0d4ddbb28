fn main() {
    std::process::exit(heisenberg_ids::cli::run(std::env::args_os()));
}
