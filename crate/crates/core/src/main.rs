fn main() {
    std::process::exit(qmengine::cli::run(std::env::args_os()));
}
