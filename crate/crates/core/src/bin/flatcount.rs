use clap::Parser;

use flatcount::cli::{error_record, exit_code, run, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(&cli) {
        eprintln!("{}", error_record(&e));
        std::process::exit(exit_code(&e));
    }
}
