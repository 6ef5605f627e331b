//! Runs a bundled experiment configuration through the command-line driver,
//! writing CSV, summary and plot data to a directory.
//!
//! cargo run --example run_config -- configs/roots.toml /tmp/roots
use cornerlab::cli::main_with_args;

fn main() {
    let mut args = std::env::args().skip(1);
    let config = args.next().unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/configs/roots.toml").into());
    let out = args.next().unwrap_or_else(|| std::env::temp_dir().join("cornerlab-example").display().to_string());
    let code = main_with_args(["cornerlab", "run", "--config", &config, "--out", &out, "--verbose"]);
    println!("exit status {code}; artifacts in {out}");
    std::process::exit(code);
}
