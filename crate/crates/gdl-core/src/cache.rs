//! Binary coefficient-table cache.
//!
//! Layout: magic "DCLT1", spec hash (u64 LE), N (u64 LE), then N values
//! as i64 LE. Readers validate the magic, the advertised length against
//! the actual payload, the capacity cap, and — when the caller knows
//! which spec it wants — the spec hash.

use crate::error::{Error, Result};
use crate::local::FunctionSpec;
use crate::table::{CoefficientTable, TABLE_CAP};
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

pub const MAGIC: &[u8; 5] = b"DCLT1";

pub fn write_cache(table: &CoefficientTable, w: &mut impl Write) -> Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&table.spec_hash().to_le_bytes())?;
    w.write_all(&table.n().to_le_bytes())?;
    for &v in table.values() {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_cache(r: &mut impl Read, expected_hash: Option<u64>) -> Result<CoefficientTable> {
    let mut magic = [0u8; 5];
    read_exact(r, &mut magic, "magic")?;
    if &magic != MAGIC {
        return Err(Error::CorruptCache(format!("bad magic {magic:02x?}")));
    }
    let mut word = [0u8; 8];
    read_exact(r, &mut word, "spec hash")?;
    let hash = u64::from_le_bytes(word);
    if let Some(expected) = expected_hash {
        if hash != expected {
            return Err(Error::StaleCache { found: hash, expected });
        }
    }
    read_exact(r, &mut word, "length")?;
    let n = u64::from_le_bytes(word);
    if n == 0 || n > TABLE_CAP {
        return Err(Error::CorruptCache(format!("unreasonable length {n}")));
    }
    let mut values = Vec::with_capacity(n as usize);
    for _ in 0..n {
        read_exact(r, &mut word, "value")?;
        values.push(i64::from_le_bytes(word));
    }
    // exactly-consumed check is the caller's concern for streams; for the
    // file/slice paths `decode_cache` enforces it
    CoefficientTable::from_values(hash, values)
        .map_err(|e| Error::CorruptCache(format!("invalid table: {e}")))
}

fn read_exact(r: &mut impl Read, buf: &mut [u8], what: &str) -> Result<()> {
    r.read_exact(buf)
        .map_err(|_| Error::CorruptCache(format!("truncated file while reading {what}")))
}

/// Strict in-memory decode: trailing bytes are corruption.
pub fn decode_cache(bytes: &[u8], expected_hash: Option<u64>) -> Result<CoefficientTable> {
    let mut cursor = bytes;
    let table = read_cache(&mut cursor, expected_hash)?;
    if !cursor.is_empty() {
        return Err(Error::CorruptCache(format!("{} trailing bytes", cursor.len())));
    }
    Ok(table)
}

pub fn cache_file_name(spec_hash: u64, n: u64) -> String {
    format!("gdl-{spec_hash:016x}-{n}.tbl")
}

/// Atomic store: write a temp sibling, then rename into place.
pub fn store(dir: &Path, table: &CoefficientTable) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let name = cache_file_name(table.spec_hash(), table.n());
    let final_path = dir.join(&name);
    let tmp_path = dir.join(format!(".{name}.tmp-{}", std::process::id()));
    {
        let mut f = fs::File::create(&tmp_path)?;
        write_cache(table, &mut f)?;
        f.sync_all()?;
    }
    fs::rename(&tmp_path, &final_path)?;
    Ok(final_path)
}

pub fn load(dir: &Path, spec: &FunctionSpec, n: u64) -> Result<CoefficientTable> {
    let path = dir.join(cache_file_name(spec.hash(), n));
    let bytes = fs::read(path)?;
    decode_cache(&bytes, Some(spec.hash()))
}

/// Write-then-read-back; the result must be bit-identical.
pub fn cache_roundtrip(table: &CoefficientTable, dir: &Path) -> Result<CoefficientTable> {
    let path = store(dir, table)?;
    let bytes = fs::read(path)?;
    decode_cache(&bytes, Some(table.spec_hash()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::coefficients_sieve;

    fn tmpdir(tag: &str) -> PathBuf {
        let d = std::env::temp_dir().join(format!("gdl-cache-test-{tag}-{}", std::process::id()));
        let _ = fs::remove_dir_all(&d);
        d
    }

    #[test]
    fn roundtrip_is_identical() {
        let dir = tmpdir("rt");
        let t = coefficients_sieve(&FunctionSpec::f1(), 10_000).unwrap();
        let back = cache_roundtrip(&t, &dir).unwrap();
        assert_eq!(t, back);
        let _ = fs::remove_dir_all(&dir);
    }

    #[test]
    fn tampered_magic_rejected() {
        let t = coefficients_sieve(&FunctionSpec::f1(), 16).unwrap();
        let mut bytes = Vec::new();
        write_cache(&t, &mut bytes).unwrap();
        bytes[0] ^= 0xff;
        assert!(matches!(
            decode_cache(&bytes, None),
            Err(Error::CorruptCache(_))
        ));
    }

    #[test]
    fn stale_hash_rejected() {
        let t = coefficients_sieve(&FunctionSpec::f1(), 16).unwrap();
        let mut bytes = Vec::new();
        write_cache(&t, &mut bytes).unwrap();
        let other = FunctionSpec::fstar().hash();
        assert!(matches!(
            decode_cache(&bytes, Some(other)),
            Err(Error::StaleCache { .. })
        ));
        assert!(decode_cache(&bytes, Some(t.spec_hash())).is_ok());
    }

    #[test]
    fn truncation_and_trailing_rejected() {
        let t = coefficients_sieve(&FunctionSpec::f1(), 16).unwrap();
        let mut bytes = Vec::new();
        write_cache(&t, &mut bytes).unwrap();
        assert!(matches!(
            decode_cache(&bytes[..bytes.len() - 3], None),
            Err(Error::CorruptCache(_))
        ));
        bytes.push(0);
        assert!(matches!(decode_cache(&bytes, None), Err(Error::CorruptCache(_))));
    }

    #[test]
    fn absurd_length_rejected() {
        let mut bytes = Vec::new();
        bytes.extend_from_slice(MAGIC);
        bytes.extend_from_slice(&0u64.to_le_bytes());
        bytes.extend_from_slice(&u64::MAX.to_le_bytes());
        assert!(matches!(decode_cache(&bytes, None), Err(Error::CorruptCache(_))));
    }
}
