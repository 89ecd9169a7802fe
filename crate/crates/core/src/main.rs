use clap::Parser;

fn main() {
    let cli = latcov::app::Cli::parse();
    std::process::exit(latcov::app::main_with(cli));
}
