use clap::Parser;

fn main() {
    let cli = stellar::cli::Cli::parse();
    std::process::exit(stellar::cli::run(cli));
}
