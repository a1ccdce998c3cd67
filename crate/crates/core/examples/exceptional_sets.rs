//! Compares the exceptional sets found by the sieve with the closed forms:
//! the finite lists for four or more squares, and `4^s`, `25 * 4^s` for the
//! squares that are not sums of three positive squares.
//!
//! ```text
//! cargo run --release --example exceptional_sets -- 10000
//! ```

use ksquares::repr::{
    dubouis_reference_set, exceptional_set, hurwitz_closed_form, hurwitz_exceptions,
};

fn main() {
    let bound: u64 = std::env::args()
        .nth(1)
        .map_or(10_000, |a| a.parse().expect("integer bound"));
    for k in 4..=12 {
        let found = exceptional_set(k, bound).members;
        let expect = dubouis_reference_set(k, bound).expect("closed form exists for k >= 4");
        let status = if found == expect { "agrees" } else { "DIFFERS" };
        let shown: Vec<String> = found.iter().take(14).map(u64::to_string).collect();
        let more = if found.len() > 14 { ", ..." } else { "" };
        println!(
            "k={k:>2}: {} exceptions [{}{more}] {status}",
            found.len(),
            shown.join(", ")
        );
    }
    let squares = hurwitz_exceptions(bound);
    let closed = hurwitz_closed_form(bound);
    println!("squares up to {bound} that need more than three squares: {squares:?}");
    println!("closed form agrees: {}", squares == closed);
}
