use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use hermite_lab::cli::{max_bits_from_env, run, Cli};
use hermite_lab_core::numeric::set_max_bits;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let result = max_bits_from_env().and_then(|bits| {
        if let Some(b) = bits {
            set_max_bits(b);
        }
        run(cli, &mut out)
    });
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hermite-lab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
