use clap::Parser;

fn main() {
    let cli = antipode_bridge::cli::Cli::parse();
    std::process::exit(antipode_bridge::cli::dispatch(cli));
}
