fn main() {
    std::process::exit(groundtex::bench::cli::main_with_args(std::env::args_os()));
}
