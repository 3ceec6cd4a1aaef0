use std::process::ExitCode;

use clap::Parser;
use switchstab_cli::{configure_threads, run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let threads = std::env::var("SWITCHSTAB_THREADS").ok();
    let echo = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    let result = configure_threads(threads.as_deref()).and_then(|()| run(&cli, &echo));
    match result {
        Ok(report) => {
            println!("{}", report.to_json());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
