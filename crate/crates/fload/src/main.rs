fn main() {
    std::process::exit(fload::cli::run());
}
