use clap::Parser;

fn main() {
    let cli = spdp_cli::cli::Cli::parse();
    match spdp_cli::run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(1);
        }
    }
}
