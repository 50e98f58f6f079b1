fn main() {
    std::process::exit(dilatkit::cli::run());
}
