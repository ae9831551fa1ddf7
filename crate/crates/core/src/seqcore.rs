//! Packed binary sequences, the hexadecimal codec and aperiodic correlation kernels.
//!
//! A sequence `a = (a_0, ..., a_{n-1})` over `{0, 1}` is stored with bit `i` of the
//! packed integer holding `a_i`, so `a_0` is the least significant bit and `a_{n-1}`
//! the most significant one. Correlations use the `(-1)^bit` mapping, so one shift
//! costs a XOR, a mask and a popcount per word:
//!
//! `rho_{a,b}(tau) = (n - tau) - 2 * popcount((a ^ (b >> tau)) & mask(n - tau))`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Number of 64-bit words backing a [`BinarySequence`].
pub const WORDS: usize = 4;

/// Longest sequence the packed representation can hold.
pub const MAX_LEN: usize = WORDS * 64 - 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeqError {
    #[error("empty hex string")]
    EmptyHex,
    #[error("invalid hex digit {ch:?} at position {pos}")]
    InvalidHexDigit { ch: char, pos: usize },
    #[error("value {hex} needs {bits} bits but the sequence length is {n}")]
    TooWide { hex: String, bits: usize, n: usize },
    #[error("invalid sequence length {0}: must be odd and between {min} and {max}", min = 1, max = MAX_LEN)]
    InvalidLength(usize),
    #[error("hex-encoded sequences must have odd length >= 3, got {0}")]
    HexLength(usize),
    #[error("bit {bit} is set beyond sequence length {n}")]
    StrayBits { bit: usize, n: usize },
    #[error("malformed pair {0:?}: expected A,B")]
    MalformedPair(String),
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
}

/// An odd-length binary sequence packed little-endian into machine words.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct BinarySequence {
    len: u16,
    words: [u64; WORDS],
}

#[inline]
fn low_mask(bits: usize) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

fn shr_words(words: &[u64; WORDS], shift: usize) -> [u64; WORDS] {
    let mut out = [0u64; WORDS];
    let (ws, bs) = (shift / 64, shift % 64);
    for (i, slot) in out.iter_mut().enumerate().take(WORDS.saturating_sub(ws)) {
        let src = i + ws;
        let mut w = words[src] >> bs;
        if bs != 0 && src + 1 < WORDS {
            w |= words[src + 1] << (64 - bs);
        }
        *slot = w;
    }
    out
}

/// `sum_{i < len} (-1)^{x_i ^ y_i}` for packed words.
fn signed_agreement(x: &[u64; WORDS], y: &[u64; WORDS], len: usize) -> i64 {
    let mut disagree = 0u32;
    let mut left = len;
    for i in 0..WORDS {
        if left == 0 {
            break;
        }
        let take = left.min(64);
        disagree += ((x[i] ^ y[i]) & low_mask(take)).count_ones();
        left -= take;
    }
    len as i64 - 2 * disagree as i64
}

/// Single-word AACF at a nonnegative shift `tau < n`.
#[inline]
pub fn aacf_word(bits: u64, n: usize, tau: usize) -> i32 {
    debug_assert!(n <= 64 && tau < n);
    let span = n - tau;
    span as i32 - 2 * ((bits ^ (bits >> tau)) & low_mask(span)).count_ones() as i32
}

impl BinarySequence {
    fn check_len(n: usize) -> Result<(), SeqError> {
        if n == 0 || n.is_multiple_of(2) || n > MAX_LEN {
            return Err(SeqError::InvalidLength(n));
        }
        Ok(())
    }

    /// Builds a sequence from a packed integer; bit `i` is `a_i`.
    pub fn from_u64(n: usize, bits: u64) -> Result<Self, SeqError> {
        let mut words = [0u64; WORDS];
        words[0] = bits;
        Self::from_words(n, words)
    }

    pub fn from_words(n: usize, words: [u64; WORDS]) -> Result<Self, SeqError> {
        Self::check_len(n)?;
        for (i, w) in words.iter().enumerate() {
            let base = i * 64;
            let stray = if base >= n { *w } else if n - base < 64 { *w & !low_mask(n - base) } else { 0 };
            if stray != 0 {
                return Err(SeqError::StrayBits { bit: base + stray.trailing_zeros() as usize, n });
            }
        }
        Ok(BinarySequence { len: n as u16, words })
    }

    /// Builds a sequence from `a_0, a_1, ...`; any nonzero entry counts as 1.
    pub fn from_bits(bits: &[u8]) -> Result<Self, SeqError> {
        Self::check_len(bits.len())?;
        let mut words = [0u64; WORDS];
        for (i, &b) in bits.iter().enumerate() {
            if b != 0 {
                words[i / 64] |= 1 << (i % 64);
            }
        }
        Ok(BinarySequence { len: bits.len() as u16, words })
    }

    /// Parses the hexadecimal notation used in the published tables: most significant
    /// digit first, bit `i` of the value is `a_i`.
    pub fn from_hex(text: &str, n: usize) -> Result<Self, SeqError> {
        if n < 3 || n.is_multiple_of(2) || n > MAX_LEN {
            return Err(SeqError::HexLength(n));
        }
        let text = text.trim();
        let text = text.strip_prefix("0x").or_else(|| text.strip_prefix("0X")).unwrap_or(text);
        if text.is_empty() {
            return Err(SeqError::EmptyHex);
        }
        let mut words = [0u64; WORDS];
        let digits = text.len();
        for (pos, ch) in text.chars().enumerate() {
            let d = ch.to_digit(16).ok_or(SeqError::InvalidHexDigit { ch, pos })? as u64;
            if d == 0 {
                continue;
            }
            let nibble = digits - 1 - pos;
            let top = nibble * 4 + (64 - d.leading_zeros() as usize);
            if top > n {
                return Err(SeqError::TooWide { hex: text.to_string(), bits: top, n });
            }
            let shift = nibble * 4;
            words[shift / 64] |= d << (shift % 64);
        }
        Ok(BinarySequence { len: n as u16, words })
    }

    /// Uppercase hex without leading zeros (`"0"` for the all-zero sequence).
    pub fn to_hex(&self) -> String {
        let nibbles = self.len().div_ceil(4);
        let mut out = String::with_capacity(nibbles);
        for nib in (0..nibbles).rev() {
            let shift = nib * 4;
            let d = (self.words[shift / 64] >> (shift % 64)) & 0xF;
            if out.is_empty() && d == 0 {
                continue;
            }
            out.push(char::from_digit(d as u32, 16).unwrap().to_ascii_uppercase());
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    /// Always false: sequences have odd, hence nonzero, length.
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn bit(&self, i: usize) -> u8 {
        assert!(i < self.len(), "bit index {i} out of range for length {}", self.len);
        ((self.words[i / 64] >> (i % 64)) & 1) as u8
    }

    pub fn words(&self) -> &[u64; WORDS] {
        &self.words
    }

    /// The packed value when it fits in one word.
    pub fn as_u64(&self) -> Option<u64> {
        (self.len() <= 64).then_some(self.words[0])
    }

    pub fn bits(&self) -> Vec<u8> {
        (0..self.len()).map(|i| self.bit(i)).collect()
    }

    /// `+1` / `-1` rendering of the sequence, `a_0` first.
    pub fn signs(&self) -> Vec<i8> {
        (0..self.len()).map(|i| 1 - 2 * self.bit(i) as i8).collect()
    }

    /// Number of ones.
    pub fn weight(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    /// MSB-first rendering, `a_{n-1}` leftmost.
    pub fn to_binary_string(&self) -> String {
        (0..self.len()).rev().map(|i| if self.bit(i) == 1 { '1' } else { '0' }).collect()
    }

    /// Every bit flipped.
    pub fn negate(&self) -> Self {
        let n = self.len();
        let mut words = [0u64; WORDS];
        for (i, w) in words.iter_mut().enumerate() {
            let base = i * 64;
            if base < n {
                *w = !self.words[i] & low_mask(n - base);
            }
        }
        BinarySequence { len: self.len, words }
    }

    /// `(a_{n-1}, ..., a_1, a_0)`.
    pub fn reverse(&self) -> Self {
        let n = self.len();
        if let Some(bits) = self.as_u64() {
            return BinarySequence { len: self.len, words: [bits.reverse_bits() >> (64 - n), 0, 0, 0] };
        }
        let mut words = [0u64; WORDS];
        for i in 0..n {
            if self.bit(i) == 1 {
                let j = n - 1 - i;
                words[j / 64] |= 1 << (j % 64);
            }
        }
        BinarySequence { len: self.len, words }
    }

    /// Aperiodic auto-correlation `rho_a(tau)`; symmetric in `tau`, zero for `|tau| >= n`.
    pub fn aacf(&self, tau: isize) -> i64 {
        let n = self.len();
        let shift = tau.unsigned_abs();
        if shift >= n {
            return 0;
        }
        if let Some(bits) = self.as_u64() {
            return aacf_word(bits, n, shift) as i64;
        }
        signed_agreement(&self.words, &shr_words(&self.words, shift), n - shift)
    }

    /// Aperiodic cross-correlation `rho_{a,b}(tau)`, including the negative-shift branch.
    pub fn accf(&self, other: &Self, tau: isize) -> Result<i64, SeqError> {
        let n = self.len();
        if other.len() != n {
            return Err(SeqError::LengthMismatch { left: n, right: other.len() });
        }
        let shift = tau.unsigned_abs();
        if shift >= n {
            return Ok(0);
        }
        // tau >= 0 pairs a_i with b_{i+tau}; tau < 0 pairs a_{i+|tau|} with b_i.
        let (lo, hi) = if tau >= 0 { (self, other) } else { (other, self) };
        if let (Some(x), Some(y)) = (lo.as_u64(), hi.as_u64()) {
            let span = n - shift;
            return Ok(span as i64 - 2 * ((x ^ (y >> shift)) & low_mask(span)).count_ones() as i64);
        }
        Ok(signed_agreement(&lo.words, &shr_words(&hi.words, shift), n - shift))
    }

    /// `rho_a(tau)` for `tau = 0 .. n-1`.
    pub fn aacf_vector(&self) -> Vec<i64> {
        (0..self.len()).map(|t| self.aacf(t as isize)).collect()
    }

    /// The meet-in-the-middle key `(rho(1), ..., rho((n-3)/2))`.
    pub fn rho_vector(&self) -> RhoVector {
        let k = (self.len().saturating_sub(3)) / 2;
        RhoVector {
            n: self.len(),
            values: (1..=k).map(|t| self.aacf(t as isize) as i32).collect(),
        }
    }
}

impl Ord for BinarySequence {
    /// Length first, then the packed value as an unsigned integer.
    fn cmp(&self, other: &Self) -> Ordering {
        self.len
            .cmp(&other.len)
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl PartialOrd for BinarySequence {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BinarySequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl fmt::Debug for BinarySequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinarySequence({}; n={})", self.to_hex(), self.len)
    }
}

/// Truncated AACF vector, the key of the search map.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RhoVector {
    pub n: usize,
    /// `values[t - 1] == rho(t)`.
    pub values: Vec<i32>,
}

impl RhoVector {
    /// Entry-wise negation, the lookup key for a complementary partner.
    pub fn negated(&self) -> Self {
        RhoVector { n: self.n, values: self.values.iter().map(|v| -v).collect() }
    }

    /// `rho(tau) == n - tau (mod 2)` for every entry.
    pub fn parity_ok(&self) -> bool {
        self.values
            .iter()
            .enumerate()
            .all(|(i, v)| (v - (self.n as i32 - (i as i32 + 1))).rem_euclid(2) == 0)
    }
}

/// An ordered pair of equal-length sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SequencePair {
    pub a: BinarySequence,
    pub b: BinarySequence,
}

impl SequencePair {
    pub fn new(a: BinarySequence, b: BinarySequence) -> Result<Self, SeqError> {
        if a.len() != b.len() {
            return Err(SeqError::LengthMismatch { left: a.len(), right: b.len() });
        }
        Ok(SequencePair { a, b })
    }

    pub fn from_hex(a: &str, b: &str, n: usize) -> Result<Self, SeqError> {
        Self::new(BinarySequence::from_hex(a, n)?, BinarySequence::from_hex(b, n)?)
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn swap(&self) -> Self {
        SequencePair { a: self.b, b: self.a }
    }

    /// `rho_a(tau) + rho_b(tau)` for `tau = 0 .. n-1`.
    pub fn aacf_sum_vector(&self) -> Vec<i64> {
        (0..self.len() as isize).map(|t| self.a.aacf(t) + self.b.aacf(t)).collect()
    }
}

impl fmt::Display for SequencePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

/// Parses `"A,B"` or `"(A, B)"` with the length supplied separately.
pub fn parse_pair(text: &str, n: usize) -> Result<SequencePair, SeqError> {
    let inner = text.trim().trim_start_matches('(').trim_end_matches(')');
    let (a, b) = inner.split_once(',').ok_or_else(|| SeqError::MalformedPair(text.to_string()))?;
    SequencePair::from_hex(a.trim(), b.trim(), n)
}

impl FromStr for RhoVector {
    type Err = std::num::ParseIntError;

    /// `n:v1,v2,...`
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (n, rest) = s.split_once(':').unwrap_or((s, ""));
        let values = rest
            .split(',')
            .filter(|t| !t.is_empty())
            .map(|t| t.trim().parse())
            .collect::<Result<_, _>>()?;
        Ok(RhoVector { n: n.trim().parse()?, values })
    }
}
