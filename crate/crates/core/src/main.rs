fn main() {
    std::process::exit(qsheaf::cli::main());
}
