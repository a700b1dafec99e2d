use clap::Parser;

fn main() {
    let cli = match entbound_cli::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version requests are not errors; anything else is bad input
            let code = if e.use_stderr() {
                entbound_cli::EXIT_INPUT
            } else {
                entbound_cli::EXIT_OK
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let code = entbound_cli::run(
        &cli,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    std::process::exit(code);
}
