use clap::Parser;

fn main() {
    let cli = lmcf_cli::Cli::parse();
    if let Err(e) = lmcf_cli::run(cli) {
        eprintln!("lmcf: {e}");
        std::process::exit(e.exit_code());
    }
}
