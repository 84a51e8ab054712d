use clap::Parser;
use rcvv_cli::commands::{run, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("rcvv: {e}");
        std::process::exit(e.exit_code());
    }
}
