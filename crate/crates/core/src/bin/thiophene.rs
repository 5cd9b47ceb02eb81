fn main() {
    std::process::exit(thiophene_iv::cli::run(std::env::args_os()));
}
