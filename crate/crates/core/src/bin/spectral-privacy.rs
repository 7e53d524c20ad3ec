fn main() {
    std::process::exit(spectral_privacy::cli::run(std::env::args_os()));
}
