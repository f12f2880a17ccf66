use clap::Parser;

fn main() {
    let cli = tabfeat::cli::Cli::parse();
    if let Err(e) = tabfeat::cli::run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
