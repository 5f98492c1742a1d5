use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use womkit::cli::{exit_code, run, Cli};
use womkit::output::write_tables;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let tables = match run(&cli) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("womkit: {e}");
            return ExitCode::from(exit_code(&e) as u8);
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    if let Err(e) =
        write_tables(&mut out, &tables, cli.format, cli.precision as usize).and_then(|_| {
            out.flush()
                .map_err(|e| womkit::Error::Output(e.to_string()))
        })
    {
        eprintln!("womkit: {e}");
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}
