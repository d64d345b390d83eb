fn main() {
    let args: Vec<String> = std::env::args().collect();
    std::process::exit(ffdiag::cli::main_with_args(&args));
}
