fn main() {
    std::process::exit(stabrbm::cli::main());
}
