use clap::Parser;

fn main() {
    let cli = ncgraph_cli::Cli::parse();
    std::process::exit(ncgraph_cli::main_with(&cli));
}
