fn main() {
    std::process::exit(balword::cli::main_with_io());
}
