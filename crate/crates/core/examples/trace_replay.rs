//! Runs a uniqueness search, writes its trace as JSON lines, reads it back
//! and replays every step against a freshly generated system.
//!
//! ```text
//! cargo run --release --example trace_replay -- 6 60
//! ```

use ksquares::engine::{replay, run_uniqueness, EngineConfig, Rule, Trace};

fn main() {
    let mut args = std::env::args()
        .skip(1)
        .map(|a| a.parse::<u64>().expect("integer argument"));
    let k = args.next().unwrap_or(6) as usize;
    let bound = args.next().unwrap_or(60);
    let verdict = run_uniqueness(k, bound, &EngineConfig::default()).expect("run within budget");
    let text = verdict.trace.to_jsonl();
    println!(
        "verdict {}; {} steps, {} bytes of trace",
        verdict.outcome.name(),
        verdict.trace.len(),
        text.len()
    );
    for line in text
        .lines()
        .filter(|l| !l.contains("\"linear-solve\"") && !l.contains("\"coprime-division\""))
    {
        println!("  {line}");
    }
    let parsed = Trace::read_jsonl(text.as_bytes()).expect("trace parses");
    let summary = replay(&parsed).expect("every step replays");
    println!(
        "replayed: {} surviving branch(es), {} contradicted",
        summary.survivors.len(),
        summary.contradicted.len()
    );
    let solves = parsed
        .records
        .iter()
        .filter(|r| matches!(r.rule, Rule::LinearSolve | Rule::CoprimeDivision))
        .count();
    println!("{solves} values solved from single equations");
}
