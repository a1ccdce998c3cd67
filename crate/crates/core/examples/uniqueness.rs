//! Runs the uniqueness search for several k and prints each verdict.
//!
//! ```text
//! cargo run --release --example uniqueness -- 200 3 4 5 6
//! ```

use std::time::Instant;

use ksquares::engine::{run_uniqueness, EngineConfig, Outcome, Output};

fn main() {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("integer argument"))
        .collect();
    let (bound, ks) = match args.split_first() {
        Some((&n, ks)) if !ks.is_empty() => (n, ks.to_vec()),
        Some((&n, _)) => (n, vec![2, 3, 4, 5, 6]),
        None => (60, vec![2, 3, 4, 5, 6]),
    };
    for k in ks {
        let start = Instant::now();
        let verdict = match run_uniqueness(k as usize, bound, &EngineConfig::default()) {
            Ok(v) => v,
            Err(e) => {
                println!("k={k} N={bound}: {e}");
                continue;
            }
        };
        let elapsed = start.elapsed();
        println!(
            "k={k} N={bound} horizon={} -> {} in {:.2?} ({} trace steps)",
            verdict.horizon,
            verdict.outcome.name(),
            elapsed,
            verdict.trace.len()
        );
        for r in &verdict.trace.records {
            if let Output::Split { site, roots, .. } = &r.output {
                println!(
                    "  split at {:?} on f({site}) with roots {roots:?}",
                    r.branch
                );
            }
        }
        for r in verdict
            .trace
            .records
            .iter()
            .filter(|r| matches!(r.output, Output::Contradiction { .. }))
        {
            println!(
                "  branch {:?} contradicted by equations {:?}",
                r.branch, r.inputs.equations
            );
        }
        if let Outcome::Underdetermined {
            free_sites,
            witness_count,
            forced_prefix,
            first_free,
            notes,
        } = &verdict.outcome
        {
            let free: Vec<String> = free_sites.iter().map(|s| s.to_string()).collect();
            println!("  survivors {witness_count}, forced prefix {forced_prefix}, first free {first_free:?}");
            println!("  free sites {}", free.join(" "));
            for n in notes {
                println!("  note: {n}");
            }
        }
    }
}
