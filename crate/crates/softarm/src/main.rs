fn main() {
    std::process::exit(softarm::cli::run());
}
