fn main() {
    std::process::exit(syzlab_cli::run(std::env::args_os()));
}
