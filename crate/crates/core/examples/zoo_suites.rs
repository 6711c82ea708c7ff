//! Runs every zoo suite and prints a summary line per entry.
//!
//! `cargo run --release --example zoo_suites [suite...]`

use orbitlab::zoo::{run_suite, SUITES};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let names: Vec<&str> = if args.is_empty() { SUITES.to_vec() } else { args.iter().map(String::as_str).collect() };
    let mut all_ok = true;
    for name in names {
        let report = run_suite(name)?;
        println!("== {} ({} ms)", report.suite, report.elapsed_ms);
        for r in &report.results {
            println!("{} {:<55} {:>4} checks", if r.passed { "ok  " } else { "FAIL" }, r.id, r.checked);
            for d in &r.detail {
                println!("       {d}");
            }
        }
        all_ok &= report.passed();
    }
    if !all_ok {
        std::process::exit(1);
    }
    Ok(())
}
