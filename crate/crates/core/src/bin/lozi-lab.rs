use clap::Parser;
use lozi_lab::cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
