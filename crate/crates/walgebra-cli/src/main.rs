use clap::Parser;

use walgebra_cli::{run, threads_from_env, Cli};

fn main() {
    if let Some(n) = threads_from_env() {
        // only fails if a pool already exists, which cannot happen this early
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{}", out.report);
            std::process::exit(out.code);
        }
        Err(e) => {
            eprintln!("walg: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
