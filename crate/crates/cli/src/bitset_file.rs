//! The on-disk continuant-set format.
//!
//! Layout, all little-endian:
//!
//! ```text
//! offset  size  field
//! 0       8     magic "ZBSET1\0" plus one zero pad byte
//! 8       8     A (digit bound) as u64
//! 16      8     N (limit) as u64
//! 24      8*W   W = ceil((N+1)/64) words; bit q of the stream is set
//!               iff q is a continuant in [1, N]
//! ```
//!
//! Bit 0 and bits above `N` must be clear; the reader rejects anything else,
//! as well as a wrong magic or a byte count that does not match `N`.

use std::io::{Read, Write};
use std::path::Path;
use thiserror::Error;
use zaremba_core::ContinuantSet;

pub const MAGIC: [u8; 8] = *b"ZBSET1\0\0";
const HEADER_LEN: usize = 24;

#[derive(Debug, Error)]
pub enum BitsetFileError {
    #[error("bad magic: expected {MAGIC:?}, got {got:?}")]
    BadMagic { got: [u8; 8] },

    #[error("file holds {actual} payload words, header implies {expected}")]
    WordCount { expected: usize, actual: usize },

    #[error("truncated header: {len} bytes, need {HEADER_LEN}")]
    TruncatedHeader { len: usize },

    #[error("payload is {len} bytes, not a whole number of words")]
    RaggedPayload { len: usize },

    #[error(transparent)]
    Invalid(#[from] zaremba_core::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Serialize a set to the on-disk layout. Deterministic: equal sets produce
/// equal bytes.
pub fn to_bytes(set: &ContinuantSet) -> Vec<u8> {
    let words = set.words();
    let mut out = Vec::with_capacity(HEADER_LEN + words.len() * 8);
    out.extend_from_slice(&MAGIC);
    out.extend_from_slice(&set.a_max().to_le_bytes());
    out.extend_from_slice(&set.limit().to_le_bytes());
    for w in words {
        out.extend_from_slice(&w.to_le_bytes());
    }
    out
}

/// Parse and validate the on-disk layout.
pub fn from_bytes(bytes: &[u8]) -> Result<ContinuantSet, BitsetFileError> {
    if bytes.len() < HEADER_LEN {
        return Err(BitsetFileError::TruncatedHeader { len: bytes.len() });
    }
    let mut magic = [0u8; 8];
    magic.copy_from_slice(&bytes[0..8]);
    if magic != MAGIC {
        return Err(BitsetFileError::BadMagic { got: magic });
    }
    let a_max = u64::from_le_bytes(bytes[8..16].try_into().unwrap());
    let limit = u64::from_le_bytes(bytes[16..24].try_into().unwrap());
    if a_max == 0 {
        return Err(BitsetFileError::Invalid(
            zaremba_core::Error::InvalidBound { bound: a_max },
        ));
    }
    if limit == 0 || limit > zaremba_core::orbit::MAX_LIMIT {
        return Err(BitsetFileError::Invalid(
            zaremba_core::Error::InvalidLimit { limit },
        ));
    }
    let payload = &bytes[HEADER_LEN..];
    if !payload.len().is_multiple_of(8) {
        return Err(BitsetFileError::RaggedPayload { len: payload.len() });
    }
    let actual = payload.len() / 8;
    let expected = ContinuantSet::word_count(limit);
    if actual != expected {
        return Err(BitsetFileError::WordCount { expected, actual });
    }
    let words: Vec<u64> = payload
        .chunks_exact(8)
        .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(ContinuantSet::from_words(a_max, limit, words)?)
}

pub fn save(set: &ContinuantSet, path: &Path) -> Result<(), BitsetFileError> {
    let mut file = std::fs::File::create(path)?;
    file.write_all(&to_bytes(set))?;
    Ok(())
}

pub fn load(path: &Path) -> Result<ContinuantSet, BitsetFileError> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut bytes)?;
    from_bytes(&bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use zaremba_core::continuant_bitset;

    #[test]
    fn round_trip_identity() {
        let set = continuant_bitset(2, 10).unwrap();
        let bytes = to_bytes(&set);
        // header + one word
        assert_eq!(bytes.len(), 32);
        assert_eq!(&bytes[0..8], &MAGIC);
        // {1,2,3,4,5,7,8,10} -> word 0b0101_1011_1110
        let word = u64::from_le_bytes(bytes[24..32].try_into().unwrap());
        assert_eq!(word, 0b0101_1011_1110);
        let back = from_bytes(&bytes).unwrap();
        assert_eq!(back, set);
    }

    #[test]
    fn rejects_bad_magic() {
        let set = continuant_bitset(2, 10).unwrap();
        let mut bytes = to_bytes(&set);
        bytes[3] ^= 0xff;
        assert!(matches!(
            from_bytes(&bytes),
            Err(BitsetFileError::BadMagic { .. })
        ));
    }

    #[test]
    fn rejects_truncation_naming_word_counts() {
        let set = continuant_bitset(2, 200).unwrap();
        let bytes = to_bytes(&set);
        let err = from_bytes(&bytes[..bytes.len() - 8]).unwrap_err();
        match err {
            BitsetFileError::WordCount { expected, actual } => {
                assert_eq!(expected, 4);
                assert_eq!(actual, 3);
            }
            other => panic!("wrong error: {other:?}"),
        }
        // ragged payload
        assert!(matches!(
            from_bytes(&bytes[..bytes.len() - 3]),
            Err(BitsetFileError::RaggedPayload { .. })
        ));
        // short header
        assert!(matches!(
            from_bytes(&bytes[..10]),
            Err(BitsetFileError::TruncatedHeader { .. })
        ));
    }

    #[test]
    fn rejects_out_of_range_bits() {
        let set = continuant_bitset(2, 10).unwrap();
        let mut bytes = to_bytes(&set);
        bytes[24] |= 1; // bit 0
        assert!(from_bytes(&bytes).is_err());
        let mut bytes = to_bytes(&set);
        bytes[25] |= 0x80; // bit 15 > limit 10
        assert!(from_bytes(&bytes).is_err());
    }
}
