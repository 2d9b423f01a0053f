//! Command-line driver: config parsing, mode dispatch and file output.

pub mod config;
pub mod output;
pub mod run;

pub use config::{parse_config, parse_with_overrides, ConfigError, Mode, RunConfig};
pub use run::{run, ComparisonRow, RunError};

/// Entry point shared by the binary and the tests: `args` excludes the
/// program name. Returns the exit status.
pub fn main_with_args<S: AsRef<str>>(args: &[S]) -> i32 {
    match execute(args) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            0
        }
        Err(e) => {
            eprintln!("error: {}: {e}", e.name());
            e.exit_code()
        }
    }
}

fn execute<S: AsRef<str>>(args: &[S]) -> Result<Vec<std::path::PathBuf>, RunError> {
    let (text, rest) = match args.first().map(|a| a.as_ref()) {
        Some(first) if !first.starts_with("--") => {
            let text = std::fs::read_to_string(first).map_err(|e| ConfigError {
                line: None,
                message: format!("cannot read {first}: {e}"),
            })?;
            (text, &args[1..])
        }
        _ => (String::new(), args),
    };
    let config = parse_with_overrides(&text, rest)?;
    run(&config)
}
