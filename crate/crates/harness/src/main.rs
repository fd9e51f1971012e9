use clap::Parser;
use qtopt_harness::cli::{run, threads_from_env, Cli};

fn main() {
    let cli = Cli::parse();
    let status = threads_from_env()
        .and_then(|threads| {
            if let Some(n) = threads {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global()
                    .map_err(|e| qtopt_harness::HarnessError::Config(e.to_string()))?;
            }
            run(&cli)
        })
        .unwrap_or_else(|e| {
            eprintln!("error: {e}");
            e.exit_code()
        });
    std::process::exit(status);
}
