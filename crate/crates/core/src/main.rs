fn main() {
    std::process::exit(qboson::cli::run());
}
