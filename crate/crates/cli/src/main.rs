use clap::Parser;
use trendskew_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => print!("{out}"),
        Err(e) => {
            eprintln!("trendskew: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
