fn main() {
    std::process::exit(majorant_lab::cli::parse_and_dispatch(std::env::args_os()));
}
