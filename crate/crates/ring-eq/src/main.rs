fn main() {
    std::process::exit(ring_eq::cli::main());
}
