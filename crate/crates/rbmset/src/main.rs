fn main() {
    std::process::exit(rbmset::cli::run(std::env::args_os()));
}
