//! Lists the representations of `n` as a sum of `k` positive squares.
//!
//! ```text
//! cargo run --example representations -- 28 4
//! ```

use ksquares::repr::{enumerate_representations, is_expressible};

fn main() {
    let mut args = std::env::args()
        .skip(1)
        .map(|a| a.parse::<u64>().expect("integer argument"));
    let n = args.next().unwrap_or(28);
    let k = args.next().unwrap_or(4) as usize;
    let reps = enumerate_representations(n, k, None);
    println!("{n} as a sum of {k} positive squares: {} ways", reps.len());
    for r in &reps {
        let squares: Vec<String> = r.parts.iter().map(|a| format!("{a}^2")).collect();
        println!("  {r}  {n} = {}", squares.join(" + "));
    }
    let misses: Vec<u64> = (1..=n).filter(|&m| !is_expressible(m, k)).collect();
    println!("not expressible up to {n}: {misses:?}");
}
