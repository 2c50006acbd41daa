fn main() {
    std::process::exit(ipldpc::cli::main_with_args(std::env::args_os()));
}
