fn main() {
    std::process::exit(softsort::cli::run(std::env::args_os()) as i32);
}
