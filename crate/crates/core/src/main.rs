fn main() {
    let code = gconway::cli::run(std::env::args_os(), &mut std::io::stdout().lock());
    std::process::exit(code);
}
