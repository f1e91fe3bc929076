use clap::Parser;

fn main() {
    let cli = gitstab::Cli::parse();
    std::process::exit(gitstab::run(cli));
}
