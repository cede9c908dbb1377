use clap::Parser;

use bookstat::cli::Cli;
use bookstat::Error;

fn main() {
    // clap exits with 2 on usage errors
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(e) = bookstat::cli::run(cli) {
        eprintln!("error: {e}");
        let code = match e {
            Error::NumericalBreakdown(_) => 4,
            _ => 3,
        };
        std::process::exit(code);
    }
}
