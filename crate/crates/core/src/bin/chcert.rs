fn main() {
    let code = chcert::io_cli::cli_dispatch(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
