use clap::Parser;

use chevron_cli::args::Cli;
use chevron_cli::commands::{exit_code, run};

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(exit_code(&e));
        }
    }
}
