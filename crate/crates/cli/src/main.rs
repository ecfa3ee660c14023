use clap::Parser;

fn main() {
    let cli = opconvex_cli::Cli::parse();
    std::process::exit(opconvex_cli::run(&cli));
}
