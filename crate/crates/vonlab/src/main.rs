fn main() {
    std::process::exit(vonlab::main_with_args(std::env::args_os()));
}
