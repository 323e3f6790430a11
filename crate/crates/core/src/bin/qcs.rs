fn main() {
    std::process::exit(qcs_core::cli::dispatch(std::env::args_os()));
}
