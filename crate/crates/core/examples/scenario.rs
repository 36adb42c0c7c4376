//! Runs a built-in scenario and prints where its CSV files went.
//!
//! `cargo run --example scenario -- mexican-hat-small-a`

use std::path::Path;

use cwt_asymptotics::scenario::{builtin_scenario, list_builtins, parse_scenario, run_scenario};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let name = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "mexican-hat-large-a".into());
    let Some(text) = builtin_scenario(&name) else {
        eprintln!("no built-in scenario '{name}'\n\n{}", list_builtins());
        std::process::exit(2);
    };
    let scenario = parse_scenario(text, Path::new(&name))?;
    let out = std::env::temp_dir().join("cwt-asymptotics-example");
    let report = run_scenario(&scenario, &out)?;
    print!("{}", report.summary());
    Ok(())
}
