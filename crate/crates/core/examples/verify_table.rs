//! Checks candidate functions against the additivity equations: the
//! identity passes, and changing a single prime value is caught.
//!
//! ```text
//! cargo run --example verify_table
//! ```

use ksquares::arith::int;
use ksquares::engine::{identity_table, verify_assignment};

fn main() {
    for k in 2..=6 {
        let report = verify_assignment(&identity_table(2000), k, 2000).unwrap();
        println!(
            "identity, k={k}, N=2000: ok = {} over {} equations",
            report.ok, report.checked
        );
    }
    for (site, value) in [(3, 1), (5, 1), (7, 0)] {
        let mut table = identity_table(100);
        table.insert(site, int(value));
        let report = verify_assignment(&table, 3, 100).unwrap();
        match report.first_violation {
            Some(v) => println!(
                "f({site}) = {value}: fails at {} ({} vs {})",
                v.provenance, v.lhs, v.rhs
            ),
            None => println!("f({site}) = {value}: passes"),
        }
    }
}
