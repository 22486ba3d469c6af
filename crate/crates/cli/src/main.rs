use clap::Parser;

fn main() {
    std::process::exit(homeocomm_cli::run(homeocomm_cli::Cli::parse()));
}
