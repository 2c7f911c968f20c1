//! Positional codes for designated lists and remarkable-point costs on
//! bounded domains.
//!
//! A list element is designated by its position in the enumeration
//! `(empty), 0, 1, 00, 01, 10, 11, 000, ...`: the first element is free and
//! the word at index `i >= 1` has `floor(log2(i + 1))` bits, so the elements
//! of a list of size `N` cost about `log2 N` bits each on average. The codes
//! are not self-delimited; each one measures the description of a single
//! object, not a stream.
//!
//! A bounded domain of cells additionally gets an ends-inward code: the two
//! extremities are free, and an interior cell pays one bit to pick the nearer
//! end plus the positional code of its inward offset. Frontiers come out
//! cheaper than ordinary interior cells.

use thiserror::Error;

/// Errors from remarkable-point queries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("position {position} is outside a domain of {domain_size} cells")]
    PositionOutOfDomain { position: u64, domain_size: u64 },
}

/// Bit length of the word at `index` in the positional enumeration.
///
/// Index 0 is the free first element and costs nothing. For `i >= 1` the
/// length is `floor(log2(i + 1))`: words of length `b` occupy indices
/// `2^b - 1 ..= 2^(b+1) - 2`.
pub fn code_length(index: u64) -> u32 {
    (index + 1).ilog2()
}

/// The word at `index`, most-significant bit first, as a '0'/'1' string.
///
/// The free first element is the empty string.
pub fn code_word(index: u64) -> String {
    let bits = code_length(index);
    if bits == 0 {
        return String::new();
    }
    let offset = index + 1 - (1u64 << bits);
    (0..bits)
        .rev()
        .map(|b| if offset >> b & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// A list position together with its code word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositionalCode {
    pub index: u64,
    pub bits: String,
}

impl PositionalCode {
    pub fn new(index: u64) -> Self {
        Self {
            index,
            bits: code_word(index),
        }
    }

    /// Code length in bits.
    pub fn len(&self) -> u32 {
        self.bits.len() as u32
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

/// Mean bits per element over the first `n` codes.
///
/// Stays within 2 bits of `log2 n` for every `n >= 2`.
pub fn average_code_length(n: u64) -> f64 {
    assert!(n >= 1, "average code length over an empty list");
    // sum_{j=1}^{n} floor(log2 j), closed form
    let b = u64::from(n.ilog2());
    let sum = (n + 1) * b + 2 - (1u64 << (b + 1));
    sum as f64 / n as f64
}

/// Ends-inward rank and cost of a cell in a bounded domain of `domain_size`
/// cells.
#[derive(Debug, Clone, PartialEq)]
pub struct RemarkableRank {
    pub position: u64,
    pub domain_size: u64,
    /// Position in the ends-inward enumeration (0, N-1, 1, N-2, ...).
    pub rank: u64,
    /// Description cost in bits.
    pub bits: f64,
}

/// Rank a cell by the ends-inward enumeration.
///
/// The two extremities take ranks 0 and 1 and cost nothing; an interior cell
/// at inward distance `d` costs `1 + code_length(d)` bits (one bit for the
/// nearer end, the rest for the offset).
pub fn remarkable_rank(position: u64, domain_size: u64) -> Result<RemarkableRank, CodecError> {
    if domain_size == 0 || position >= domain_size {
        return Err(CodecError::PositionOutOfDomain {
            position,
            domain_size,
        });
    }
    let mirror = domain_size - 1 - position;
    let d = position.min(mirror);
    let rank = if position <= mirror { 2 * d } else { 2 * d + 1 };
    let bits = if d == 0 {
        0.0
    } else {
        1.0 + f64::from(code_length(d))
    };
    Ok(RemarkableRank {
        position,
        domain_size,
        rank,
        bits,
    })
}

/// Description cost in bits of a cell under the ends-inward convention.
pub fn remarkable_complexity(position: u64, domain_size: u64) -> Result<f64, CodecError> {
    remarkable_rank(position, domain_size).map(|r| r.bits)
}

/// '0'/'1' code of a cell under the ends-inward scheme.
///
/// Extremities get the empty word; an interior cell gets a side bit
/// ('0' = counted from the start, '1' = from the end) followed by the
/// positional code of the inward offset.
pub fn remarkable_code(position: u64, domain_size: u64) -> Result<String, CodecError> {
    let rank = remarkable_rank(position, domain_size)?;
    let mirror = domain_size - 1 - position;
    let d = position.min(mirror);
    if d == 0 {
        return Ok(String::new());
    }
    let side = if position <= mirror { '0' } else { '1' };
    let mut word = String::new();
    word.push(side);
    word.push_str(&code_word(d));
    debug_assert_eq!(word.len() as f64, rank.bits);
    Ok(word)
}
