//! Builds an expressibility sieve through the on-disk cache, loads it back
//! and shows that a damaged file is rebuilt.
//!
//! ```text
//! cargo run --example sieve_cache
//! ```

use ksquares::cli::cache::{cache_path, load_or_build};
use ksquares::repr::ExceptionalSet;

fn main() -> std::io::Result<()> {
    let dir = std::env::temp_dir().join(format!("ksquares-example-{}", std::process::id()));
    let (built, first) = load_or_build(&dir, 4, 10_000)?;
    let (loaded, second) = load_or_build(&dir, 4, 10_000)?;
    println!(
        "first call: {first:?}, second call: {second:?}, identical: {}",
        built == loaded
    );
    let path = cache_path(&dir, 4, 10_000);
    let bytes = std::fs::read(&path)?;
    std::fs::write(&path, &bytes[..bytes.len() / 3])?;
    let (rebuilt, third) = load_or_build(&dir, 4, 10_000)?;
    println!(
        "after truncation: {third:?}, identical: {}",
        rebuilt == built
    );
    let set = ExceptionalSet::from_sieve(&loaded, 4);
    println!(
        "exceptions for four squares up to 10^4: {} values, largest {:?}",
        set.members.len(),
        set.members.last()
    );
    std::fs::remove_dir_all(&dir)
}
