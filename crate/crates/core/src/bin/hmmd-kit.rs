fn main() {
    std::process::exit(hmmd_kit::cli::run(std::env::args_os()));
}
