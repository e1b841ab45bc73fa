fn main() {
    std::process::exit(meteocorr::cli::main());
}
