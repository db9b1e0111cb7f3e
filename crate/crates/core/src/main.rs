use std::process::ExitCode;

use stirling_identities::cli::{run, Campaign, EXIT_USAGE};

fn main() -> ExitCode {
    let campaign = match Campaign::parse(std::env::args().skip(1)) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    match run(&campaign) {
        Ok(outcome) => {
            if matches!(campaign.command, stirling_identities::cli::Command::Report(_)) {
                print!("{}", outcome.output);
            } else if let Some(summary) = outcome.output.lines().last() {
                println!("{summary}");
            }
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE as u8)
        }
    }
}
