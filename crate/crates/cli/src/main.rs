use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = freereg_cli::Cli::parse();
    let result = freereg_cli::init_threads().and_then(|()| freereg_cli::run(cli));
    match result {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}
