//! Declarative experiments: parse a TOML spec, run its sweep lattice and
//! print the CSV. With no argument a small built-in spec is used.

use uav_udn::harness::{parse_spec, run_experiment_jobs};

const BUILT_IN: &str = r#"
scenario = "cache"
seed = 42
trials = 3

[cache]
users = 200
duration = 120.0
popularity = "zipf"
zipf_exponent = 0.8

[[sweep]]
key = "d2d_radius"
values = [25.0, 50.0, 100.0]
"#;

fn main() {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}")),
        None => BUILT_IN.to_string(),
    };
    let spec = match parse_spec(&text) {
        Ok(s) => s,
        Err(errors) => {
            eprintln!("{errors}");
            std::process::exit(1);
        }
    };
    println!("{} scenario, {} lattice points, {} trials each", spec.scenario.name(), spec.lattice().len(), spec.trials);
    let report = run_experiment_jobs(&spec, 2).expect("thread pool");
    print!("{}", report.to_csv());
}
