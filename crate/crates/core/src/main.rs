fn main() {
    std::process::exit(bpd_core::cli::run(std::env::args_os()));
}
