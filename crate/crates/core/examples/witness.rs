//! Searches for a multiplicative function other than the identity that is
//! 2-additive on positive squares up to a bound, and checks it.
//!
//! ```text
//! cargo run --release --example witness -- 10000 20
//! ```

use ksquares::engine::{search_nonidentity, verify_assignment, EngineConfig, WitnessSearch};

fn main() {
    let mut args = std::env::args()
        .skip(1)
        .map(|a| a.parse::<u64>().expect("integer argument"));
    let bound = args.next().unwrap_or(2000);
    let sites = args.next().unwrap_or(20);
    match search_nonidentity(2, bound, sites, &EngineConfig::default()) {
        Ok(WitnessSearch::Found {
            table,
            path,
            differs,
            attempts,
        }) => {
            println!("found after {attempts} attempts on branch {path:?}");
            let shown: Vec<String> = differs
                .iter()
                .take(20)
                .map(|q| format!("f({q}) = {}", table[q]))
                .collect();
            println!(
                "differs from the identity at {} sites: {} ...",
                differs.len(),
                shown.join(", ")
            );
            let report = verify_assignment(&table, 2, bound).expect("table covers every site");
            println!(
                "verified {} equations up to {bound}: ok = {}",
                report.checked, report.ok
            );
        }
        Ok(WitnessSearch::NoneFound { attempts }) => {
            println!("none found after {attempts} attempts")
        }
        Err(e) => println!("{e}"),
    }
}
