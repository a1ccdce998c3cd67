//! On-disk cache of expressibility sieves.
//!
//! Layout, little endian: magic `KSQSIEVE`, format version (u32), parts k
//! (u32), bound N (u64), SHA-256 of the payload (32 bytes), then the
//! payload: for each layer `j = 1..=k`, the bitset words (u64).

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::repr::{BitSet, ExpressibilitySieve};

pub const MAGIC: &[u8; 8] = b"KSQSIEVE";
pub const FORMAT_VERSION: u32 = 1;
const HEADER_LEN: usize = 8 + 4 + 4 + 8 + 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CacheHeader {
    pub version: u32,
    pub parts: u32,
    pub bound: u64,
    pub checksum: [u8; 32],
}

/// How a cached sieve was obtained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CacheOutcome {
    Loaded,
    Built,
    /// The file was unusable; the sieve was rebuilt and rewritten.
    Rebuilt {
        reason: String,
    },
}

pub fn cache_path(dir: &Path, parts: usize, bound: u64) -> PathBuf {
    dir.join(format!("sieve-k{parts}-n{bound}.bin"))
}

fn payload(sieve: &ExpressibilitySieve) -> Vec<u8> {
    let mut out = Vec::new();
    for layer in sieve.layers() {
        for w in layer.words() {
            out.extend_from_slice(&w.to_le_bytes());
        }
    }
    out
}

pub fn encode(sieve: &ExpressibilitySieve) -> Vec<u8> {
    let body = payload(sieve);
    let mut out = Vec::with_capacity(HEADER_LEN + body.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&(sieve.max_parts() as u32).to_le_bytes());
    out.extend_from_slice(&sieve.bound().to_le_bytes());
    out.extend_from_slice(&Sha256::digest(&body));
    out.extend_from_slice(&body);
    out
}

pub fn read_header(bytes: &[u8]) -> Result<CacheHeader, String> {
    if bytes.len() < HEADER_LEN {
        return Err("file shorter than its header".into());
    }
    if &bytes[..8] != MAGIC {
        return Err("bad magic".into());
    }
    let u32_at = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().unwrap());
    Ok(CacheHeader {
        version: u32_at(8),
        parts: u32_at(12),
        bound: u64::from_le_bytes(bytes[16..24].try_into().unwrap()),
        checksum: bytes[24..56].try_into().unwrap(),
    })
}

/// Parses a cache file, checking version, shape and checksum.
pub fn decode(bytes: &[u8], parts: usize, bound: u64) -> Result<ExpressibilitySieve, String> {
    let header = read_header(bytes)?;
    if header.version != FORMAT_VERSION {
        return Err(format!(
            "format version {} (expected {FORMAT_VERSION})",
            header.version
        ));
    }
    if header.parts as usize != parts || header.bound != bound {
        return Err(format!("holds k = {}, N = {}", header.parts, header.bound));
    }
    let body = &bytes[HEADER_LEN..];
    if Sha256::digest(body).as_slice() != header.checksum {
        return Err("checksum mismatch".into());
    }
    let len = bound as usize + 1;
    let words_per_layer = len.div_ceil(64);
    if body.len() != parts * words_per_layer * 8 {
        return Err("payload size mismatch".into());
    }
    let mut layers = Vec::with_capacity(parts);
    for chunk in body.chunks_exact(words_per_layer * 8) {
        let words = chunk
            .chunks_exact(8)
            .map(|w| u64::from_le_bytes(w.try_into().unwrap()))
            .collect();
        layers.push(BitSet::from_words(len, words).ok_or("layer does not fit the bound")?);
    }
    ExpressibilitySieve::from_layers(bound, layers)
        .ok_or_else(|| "layers do not fit the bound".into())
}

/// Loads the sieve for `(parts, bound)` from `dir`, building and storing
/// it when absent or unusable. Write failures are returned as errors only
/// when the sieve could not be stored at all.
pub fn load_or_build(
    dir: &Path,
    parts: usize,
    bound: u64,
) -> io::Result<(ExpressibilitySieve, CacheOutcome)> {
    let path = cache_path(dir, parts, bound);
    let reason = match fs::read(&path) {
        Ok(bytes) => match decode(&bytes, parts, bound) {
            Ok(sieve) => return Ok((sieve, CacheOutcome::Loaded)),
            Err(reason) => Some(reason),
        },
        Err(e) if e.kind() == io::ErrorKind::NotFound => None,
        Err(e) => Some(e.to_string()),
    };
    let sieve = ExpressibilitySieve::build(parts, bound);
    fs::create_dir_all(dir)?;
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, encode(&sieve))?;
    fs::rename(&tmp, &path)?;
    let outcome = match reason {
        Some(reason) => CacheOutcome::Rebuilt { reason },
        None => CacheOutcome::Built,
    };
    Ok((sieve, outcome))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let sieve = ExpressibilitySieve::build(4, 1000);
        assert_eq!(decode(&encode(&sieve), 4, 1000).unwrap(), sieve);
    }

    #[test]
    fn rejects_damage() {
        let sieve = ExpressibilitySieve::build(3, 200);
        let bytes = encode(&sieve);
        assert!(decode(&bytes[..bytes.len() - 1], 3, 200).is_err());
        let mut flipped = bytes.clone();
        *flipped.last_mut().unwrap() ^= 1;
        assert!(decode(&flipped, 3, 200).unwrap_err().contains("checksum"));
        let mut bumped = bytes.clone();
        bumped[8] = 2;
        assert!(decode(&bumped, 3, 200).unwrap_err().contains("version"));
        assert!(decode(&bytes, 4, 200).is_err());
        assert!(decode(&bytes[..10], 3, 200).is_err());
    }

    #[test]
    fn rebuilds_on_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let (a, first) = load_or_build(dir.path(), 4, 500).unwrap();
        assert_eq!(first, CacheOutcome::Built);
        let (b, second) = load_or_build(dir.path(), 4, 500).unwrap();
        assert_eq!(second, CacheOutcome::Loaded);
        assert_eq!(a, b);
        let path = cache_path(dir.path(), 4, 500);
        let bytes = fs::read(&path).unwrap();
        fs::write(&path, &bytes[..bytes.len() / 2]).unwrap();
        let (c, third) = load_or_build(dir.path(), 4, 500).unwrap();
        assert!(matches!(third, CacheOutcome::Rebuilt { .. }));
        assert_eq!(a, c);
    }
}
