//! Driving the command layer from code: build a RunConfig, run a command,
//! and render the table as JSON or CSV exactly as `kaczeta` would.
//!
//!     cargo run --example run_config

use kaczeta::cli::{cmd_partition, cmd_spectrum, BetaSpec, OutputFormat, RunConfig};

fn main() -> kaczeta::Result<()> {
    let config = RunConfig {
        lambda: vec![0.3, 0.2],
        coupling: vec![1.0, 0.5],
        beta: BetaSpec::List(vec![0.0, 1.0]),
        n: 3,
        ..RunConfig::default()
    };
    println!("config file form:\n{}", config.to_json());
    let params = config.params()?;

    let mut out = std::io::stdout();
    cmd_partition(&params, &config)?
        .write(OutputFormat::Csv, &config, &mut out)
        .expect("stdout");
    let spec = RunConfig {
        beta: BetaSpec::Single(1.0),
        degree: Some(12),
        ..config.clone()
    };
    cmd_spectrum(&params, &spec, Some(3))?
        .write(OutputFormat::Json, &spec, &mut out)
        .expect("stdout");
    Ok(())
}
