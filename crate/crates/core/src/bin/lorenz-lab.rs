use clap::Parser;
use lorenz_lab::cli::{run, Cli};

fn main() {
    std::process::exit(run(&Cli::parse()));
}
