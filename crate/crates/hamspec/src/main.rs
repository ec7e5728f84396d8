use clap::Parser;

fn main() {
    let cli = hamspec::cli::Cli::parse();
    std::process::exit(hamspec::cli::run(cli));
}
