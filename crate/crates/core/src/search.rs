//! Chunked meet-in-the-middle search for Z-optimal pairs.
//!
//! Both sequences are normalized to `a_{n-1} = b_{n-1} = 1` and, by the end parity
//! condition, `a_0 = b_0`. The remaining freedom is split as follows:
//!
//! * a *case* fixes `(a_0, a_mid, b_mid)`, eight in total;
//! * a *chunk* `c` fixes the XOR pattern `c_r = a_r ^ a_{n-1-r}` for `1 <= r <= k`,
//!   `k = (n-3)/2`. The mirrored parity condition then forces `b` into the
//!   complementary chunk, so once `b`'s lower half is chosen its upper half follows.
//!
//! Per chunk, all `2^k` candidates for `a` go into a [`RhoMap`] keyed by
//! `(rho_a(1), ..., rho_a(k))`. The `2^k` candidates for `b` are then walked in Gray
//! order, with `rho_b` maintained across the two-bit change of each step, and each `b`
//! looks up `-rho_b`. Every hit is re-verified on the full correlation vector.
//! Total work is `O(2^k * 2^k) = O(2^n)`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::Range;
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;

use thiserror::Error;

use crate::equivalence::canonical;
use crate::seqcore::{BinarySequence, RhoVector, SeqError, SequencePair};

/// Longest length the single-word search kernel handles.
pub const MAX_SEARCH_LEN: usize = 63;
const MAX_K: usize = (MAX_SEARCH_LEN - 3) / 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("search length must be odd and in 5..={max}, got {0}", max = MAX_SEARCH_LEN)]
    InvalidLength(usize),
    #[error("max-acc must be even and >= 2, got {0}")]
    InvalidMaxAcc(u32),
    #[error("chunk range {lo}..{hi} is empty or exceeds {total} chunks")]
    InvalidChunkRange { lo: u64, hi: u64, total: u64 },
    #[error("case mask selects no case")]
    EmptyCaseMask,
    #[error("gray counter {j} has no successor among {bits}-bit codewords")]
    GrayOverflow { j: u64, bits: u32 },
    #[error("could not allocate {bytes} bytes for the map of chunk {chunk}; resume from chunk {resume_from}")]
    ResourceExhausted { chunk: u64, bytes: usize, resume_from: u64 },
    #[error(transparent)]
    Sequence(#[from] SeqError),
}

/// `(a_0 = b_0, a_mid, b_mid)`; the index packs them as `lsb << 2 | mid_a << 1 | mid_b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Case {
    pub lsb: u8,
    pub mid_a: u8,
    pub mid_b: u8,
}

impl Case {
    pub fn from_index(i: u8) -> Case {
        assert!(i < 8, "case index {i} out of range");
        Case { lsb: (i >> 2) & 1, mid_a: (i >> 1) & 1, mid_b: i & 1 }
    }

    pub fn index(&self) -> u8 {
        (self.lsb << 2) | (self.mid_a << 1) | self.mid_b
    }
}

/// Subset of the eight cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CaseMask(pub u8);

impl CaseMask {
    pub const ALL: CaseMask = CaseMask(0xFF);

    pub fn single(case: Case) -> Self {
        CaseMask(1 << case.index())
    }

    pub fn contains(&self, case: Case) -> bool {
        self.0 & (1 << case.index()) != 0
    }

    pub fn cases(&self) -> impl Iterator<Item = Case> + '_ {
        (0..8).map(Case::from_index).filter(|c| self.contains(*c))
    }

    pub fn count(&self) -> u32 {
        self.0.count_ones()
    }
}

impl FromStr for CaseMask {
    type Err = String;

    /// `all`, or a comma list of indices and inclusive ranges: `0,3,5-7`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim().eq_ignore_ascii_case("all") {
            return Ok(CaseMask::ALL);
        }
        let mut mask = 0u8;
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (lo, hi) = match part.split_once('-') {
                Some((lo, hi)) => (lo.trim(), hi.trim()),
                None => (part, part),
            };
            let lo: u8 = lo.parse().map_err(|_| format!("bad case index {lo:?}"))?;
            let hi: u8 = hi.parse().map_err(|_| format!("bad case index {hi:?}"))?;
            if lo > hi || hi > 7 {
                return Err(format!("case range {part:?} outside 0-7"));
            }
            for i in lo..=hi {
                mask |= 1 << i;
            }
        }
        Ok(CaseMask(mask))
    }
}

impl fmt::Display for CaseMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.cases().map(|c| c.index().to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// How `rho_b` is maintained along the Gray walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RhoTracking {
    /// Two single-bit updates per step.
    #[default]
    Incremental,
    /// Recompute every entry after each step; for cross-checking.
    Recompute,
}

/// Optional pruning on the weights `(p, q)` of `a` and `b`. Returning `false` skips the
/// candidate before verification.
pub type WeightFilter = fn(p: u32, q: u32) -> bool;

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub n: usize,
    pub max_acc: u32,
    pub cases: CaseMask,
    pub chunks: Range<u64>,
    pub workers: usize,
    pub rho_tracking: RhoTracking,
    pub weight_filter: Option<WeightFilter>,
    /// Refuse to allocate a map larger than this many bytes.
    pub map_budget: Option<usize>,
}

impl SearchConfig {
    /// Optimal-pair search over every chunk and case on one worker.
    pub fn new(n: usize) -> Self {
        let k = n.saturating_sub(3) / 2;
        SearchConfig {
            n,
            max_acc: 2,
            cases: CaseMask::ALL,
            chunks: 0..(1u64 << k.min(63)),
            workers: 1,
            rho_tracking: RhoTracking::Incremental,
            weight_filter: None,
            map_budget: None,
        }
    }

    pub fn with_max_acc(mut self, max_acc: u32) -> Self {
        self.max_acc = max_acc;
        self
    }

    pub fn with_cases(mut self, cases: CaseMask) -> Self {
        self.cases = cases;
        self
    }

    pub fn with_chunks(mut self, chunks: Range<u64>) -> Self {
        self.chunks = chunks;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    pub fn with_rho_tracking(mut self, mode: RhoTracking) -> Self {
        self.rho_tracking = mode;
        self
    }

    pub fn with_map_budget(mut self, bytes: usize) -> Self {
        self.map_budget = Some(bytes);
        self
    }

    pub fn half_len(&self) -> usize {
        (self.n - 3) / 2
    }

    pub fn chunk_count(&self) -> u64 {
        1 << self.half_len()
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        if self.n < 5 || self.n.is_multiple_of(2) || self.n > MAX_SEARCH_LEN {
            return Err(SearchError::InvalidLength(self.n));
        }
        if self.max_acc < 2 || !self.max_acc.is_multiple_of(2) {
            return Err(SearchError::InvalidMaxAcc(self.max_acc));
        }
        let total = self.chunk_count();
        if self.chunks.start >= self.chunks.end || self.chunks.end > total {
            return Err(SearchError::InvalidChunkRange { lo: self.chunks.start, hi: self.chunks.end, total });
        }
        if self.cases.0 == 0 {
            return Err(SearchError::EmptyCaseMask);
        }
        Ok(())
    }
}

/// XOR pattern of mirrored interior positions: bit `r-1` is `a_r ^ a_{n-1-r}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chunk(pub u64);

impl Chunk {
    pub fn of(seq: &BinarySequence) -> Chunk {
        let n = seq.len();
        let k = n.saturating_sub(3) / 2;
        Chunk((1..=k).fold(0, |acc, r| acc | (((seq.bit(r) ^ seq.bit(n - 1 - r)) as u64) << (r - 1))))
    }
}

#[inline]
fn mask_bits(k: usize) -> u64 {
    if k == 0 {
        0
    } else {
        u64::MAX >> (64 - k)
    }
}

/// Reverses the low `k` bits.
#[inline]
fn reverse_low(v: u64, k: usize) -> u64 {
    if k == 0 {
        0
    } else {
        v.reverse_bits() >> (64 - k)
    }
}

/// Packs `(lsb, lower, mid, upper, 1)`. Bit `r-1` of `lower` is `x_r` and bit `r-1` of
/// `upper` is `x_{n-1-r}`, for `1 <= r <= (n-3)/2`.
#[inline]
pub fn assemble(n: usize, lsb: u8, lower: u64, mid: u8, upper: u64) -> u64 {
    let k = (n - 3) / 2;
    let m = (n - 1) / 2;
    (lsb as u64 & 1)
        | ((lower & mask_bits(k)) << 1)
        | ((mid as u64 & 1) << m)
        | (reverse_low(upper & mask_bits(k), k) << (m + 1))
        | (1 << (n - 1))
}

/// The `a` candidate of chunk `c` with lower half `g`: `a_{n-1-r} = g_r ^ c_r`.
pub fn build_a(n: usize, g: u64, c: Chunk, lsb: u8, mid: u8) -> BinarySequence {
    BinarySequence::from_u64(n, assemble(n, lsb, g, mid, g ^ c.0)).expect("assembled bits fit n")
}

/// Upper half of `b` forced by the mirrored parity condition against chunk `c`:
/// `b_{n-1-r} = 1 ^ c_r ^ b_r`, in the same bit layout as `assemble`'s `upper`.
#[inline]
pub fn derive_b_upper(b_lower: u64, c: Chunk, k: usize) -> u64 {
    !(c.0 ^ b_lower) & mask_bits(k)
}

#[inline]
pub fn gray_code(j: u64) -> u64 {
    j ^ (j >> 1)
}

/// Codeword `j` of the reflected `bits`-bit Gray code and the bit that changes on the
/// way to codeword `j + 1`.
pub fn gray_next(j: u64, bits: u32) -> Result<(u64, u32), SearchError> {
    if bits >= 64 || j + 1 >= (1u64 << bits) {
        return Err(SearchError::GrayOverflow { j, bits });
    }
    Ok((gray_code(j), (j + 1).trailing_zeros()))
}

/// Updates `rho[t]` (`1 <= t < rho.len()`) of the length-`n` sequence `bits` for a flip
/// of bit `pos`. `bits` is the state before the flip.
///
/// Flipping `x_pos` negates the two terms `x_{pos-t} x_pos` and `x_pos x_{pos+t}`, so
/// `rho(t)` moves by `-2 x_pos (x_{pos-t} + x_{pos+t})`, dropping out-of-range terms.
#[inline]
pub fn flip_update_rho(bits: u64, n: usize, rho: &mut [i32], pos: usize) {
    debug_assert!(pos < n);
    let sign = |i: usize| 1 - 2 * ((bits >> i) & 1) as i32;
    let xp = sign(pos);
    for (t, r) in rho.iter_mut().enumerate().skip(1) {
        let mut s = 0;
        if t <= pos {
            s += sign(pos - t);
        }
        if pos + t < n {
            s += sign(pos + t);
        }
        *r -= 2 * xp * s;
    }
}

/// `SPREAD[x]` places bit `j` of `x` in the low bit of byte `j`.
const SPREAD: [u64; 256] = {
    let mut out = [0u64; 256];
    let mut x = 0;
    while x < 256 {
        let mut j = 0;
        while j < 8 {
            if (x >> j) & 1 == 1 {
                out[x] |= 1 << (8 * j);
            }
            j += 1;
        }
        x += 1;
    }
    out
};

const KEY_WORDS: usize = MAX_K.div_ceil(8);

/// Words of packed key needed for `k` shifts.
#[inline]
pub fn key_words(k: usize) -> usize {
    k.div_ceil(8).max(1)
}

/// Disagreement count `#{i : x_i != x_{i+t}}`, i.e. `(n - t - rho(t)) / 2`.
#[inline]
fn disagreements(bits: u64, n: usize, t: usize) -> u64 {
    ((bits ^ (bits >> t)) & mask_bits(n - t)).count_ones() as u64
}

/// Packs the disagreement counts for `t = 1..=k`, one byte each, into `words`.
#[inline]
fn pack_counts(bits: u64, n: usize, k: usize, words: &mut [u64]) {
    words.fill(0);
    for t in 1..=k {
        words[(t - 1) / 8] |= disagreements(bits, n, t) << (8 * ((t - 1) % 8));
    }
}

#[inline(always)]
fn fingerprint_words(words: &[u64]) -> u64 {
    let mut h = 0x243F_6A88_85A3_08D3u64;
    for &w in words {
        h = (h ^ w).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        h ^= h >> 29;
    }
    h.wrapping_mul(0xBF58_476D_1CE4_E5B9)
}

/// Map key for the truncated AACF vector `(rho(1), ..., rho(k))`.
///
/// Entry `t` is stored as the byte `(n - t - rho(t)) / 2`, the number of disagreeing
/// positions at shift `t`. This is a bijection on admissible values (they all have the
/// parity of `n - t`), so equal keys mean equal vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RhoKey {
    n: u8,
    k: u8,
    words: [u64; KEY_WORDS],
}

impl RhoKey {
    pub fn new(rho: &RhoVector) -> Self {
        let k = rho.values.len();
        assert!(k <= MAX_K, "rho vector too long for a map key");
        let mut words = [0u64; KEY_WORDS];
        for (i, &v) in rho.values.iter().enumerate() {
            let span = (rho.n - i - 1) as i32;
            assert!(v.abs() <= span && (span - v) % 2 == 0, "rho({}) = {v} impossible for n = {}", i + 1, rho.n);
            words[i / 8] |= (((span - v) / 2) as u64) << (8 * (i % 8));
        }
        RhoKey { n: rho.n as u8, k: k as u8, words }
    }

    /// Key of a packed search sequence (`n <= 63`).
    pub fn of_bits(n: usize, bits: u64) -> Self {
        let k = (n - 3) / 2;
        let mut words = [0u64; KEY_WORDS];
        pack_counts(bits, n, k, &mut words);
        RhoKey { n: n as u8, k: k as u8, words }
    }

    /// Key of `-rho`: byte `t` becomes `(n - t) - byte`.
    pub fn negated(&self) -> Self {
        let mut words = self.words;
        for (w, full) in words.iter_mut().zip(span_words(self.n as usize, self.k as usize)) {
            *w = full - *w;
        }
        RhoKey { words, ..*self }
    }

    pub fn to_rho(&self) -> RhoVector {
        let n = self.n as usize;
        let values = (0..self.k as usize)
            .map(|i| {
                let c = ((self.words[i / 8] >> (8 * (i % 8))) & 0xFF) as i32;
                (n - i - 1) as i32 - 2 * c
            })
            .collect();
        RhoVector { n, values }
    }

    pub fn as_words(&self) -> &[u64] {
        &self.words[..key_words(self.k as usize)]
    }

    pub fn fingerprint(&self) -> u64 {
        fingerprint_words(self.as_words())
    }
}

/// Packed bytes `n - t` for `t = 1..=k`: the key of a sequence disagreeing everywhere.
fn span_words(n: usize, k: usize) -> [u64; KEY_WORDS] {
    let mut words = [0u64; KEY_WORDS];
    for t in 1..=k {
        words[(t - 1) / 8] |= ((n - t) as u64) << (8 * ((t - 1) % 8));
    }
    words
}

/// Per-length tables for the packed flip update.
struct FlipTables<const W: usize> {
    n: usize,
    /// Shifts `t` with `0 <= p - t`, as a bit mask over `t - 1`.
    lo_valid: [u64; 64],
    /// Shifts `t` with `p + t < n`.
    hi_valid: [u64; 64],
    /// `spread(lo_valid) + spread(hi_valid)` per word.
    toggled: [[u64; W]; 64],
    span: [u64; W],
}

impl<const W: usize> FlipTables<W> {
    fn new(n: usize) -> Self {
        let k = (n - 3) / 2;
        debug_assert_eq!(W, key_words(k));
        let mut t = FlipTables { n, lo_valid: [0; 64], hi_valid: [0; 64], toggled: [[0; W]; 64], span: [0; W] };
        for p in 0..n {
            t.lo_valid[p] = mask_bits(k.min(p));
            t.hi_valid[p] = mask_bits(k.min(n - 1 - p));
            for w in 0..W {
                t.toggled[p][w] = SPREAD[((t.lo_valid[p] >> (8 * w)) & 0xFF) as usize]
                    + SPREAD[((t.hi_valid[p] >> (8 * w)) & 0xFF) as usize];
            }
        }
        t.span.copy_from_slice(&span_words(n, k)[..W]);
        t
    }
}

/// A sequence together with its packed key, updated one bit flip at a time.
///
/// Flipping `x_p` toggles agreement of the pairs `(p - t, p)` and `(p, p + t)`, so each
/// byte moves by `+1` for a toggled agreeing pair and `-1` for a toggled disagreeing one.
/// Both pair sets are read off as bit masks over `t` (the low side from the reversed
/// word) and spread to bytes, which updates all shifts with a few word operations.
#[derive(Debug, Clone, Copy)]
struct PackedWalk<const W: usize> {
    bits: u64,
    rev: u64,
    counts: [u64; W],
}

impl<const W: usize> PackedWalk<W> {
    fn new(n: usize, bits: u64) -> Self {
        let mut counts = [0u64; W];
        pack_counts(bits, n, (n - 3) / 2, &mut counts);
        PackedWalk { bits, rev: bits.reverse_bits() >> (64 - n), counts }
    }

    #[inline(always)]
    fn flip(&mut self, t: &FlipTables<W>, p: usize) {
        let n = t.n;
        let own = 0u64.wrapping_sub((self.bits >> p) & 1);
        let lo = ((self.rev >> (n - p)) ^ own) & t.lo_valid[p];
        let hi = ((self.bits >> (p + 1)) ^ own) & t.hi_valid[p];
        for w in 0..W {
            let dis = SPREAD[((lo >> (8 * w)) & 0xFF) as usize] + SPREAD[((hi >> (8 * w)) & 0xFF) as usize];
            // never borrows across bytes: each byte of `counts` covers its own `dis`
            self.counts[w] = (self.counts[w] + t.toggled[p][w]).wrapping_sub(dis << 1);
        }
        self.bits ^= 1 << p;
        self.rev ^= 1 << (n - 1 - p);
    }

    #[inline(always)]
    fn recount(&mut self, n: usize) {
        pack_counts(self.bits, n, (n - 3) / 2, &mut self.counts);
        self.rev = self.bits.reverse_bits() >> (64 - n);
    }

    #[inline(always)]
    fn fingerprint(&self) -> u64 {
        fingerprint_words(&self.counts)
    }

    /// Fingerprint of the key a complementary partner must have.
    #[inline(always)]
    fn partner_fingerprint(&self, t: &FlipTables<W>) -> u64 {
        let target: [u64; W] = std::array::from_fn(|w| t.span[w] - self.counts[w]);
        fingerprint_words(&target)
    }
}

/// Open-addressing multimap from key fingerprint to packed `a` sequences.
///
/// Only the sequence and the 64-bit fingerprint of its key are stored; [`RhoMap::lookup`]
/// confirms the exact key by recomputing it from the stored sequence.
pub struct RhoMap {
    n: usize,
    shift: u32,
    mask: usize,
    slots: Vec<(u64, u64)>,
    len: usize,
}

impl RhoMap {
    /// Bytes of slot storage [`RhoMap::for_length`] allocates.
    pub fn bytes_for_length(n: usize) -> usize {
        (1usize << ((n - 3) / 2 + 1)) * std::mem::size_of::<(u64, u64)>()
    }

    /// Map for length-`n` sequences sized for `2^((n-3)/2)` entries at load factor 1/2.
    pub fn for_length(n: usize) -> Result<Self, usize> {
        let k = (n - 3) / 2;
        let cap = 1usize << (k + 1);
        let bytes = Self::bytes_for_length(n);
        let mut slots = Vec::new();
        slots.try_reserve_exact(cap).map_err(|_| bytes)?;
        slots.resize(cap, (0, 0));
        Ok(RhoMap { n, shift: 64 - (k as u32 + 1), mask: cap - 1, slots, len: 0 })
    }

    pub fn clear(&mut self) {
        self.slots.fill((0, 0));
        self.len = 0;
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Inserts a packed sequence under a precomputed fingerprint. `bits` must be nonzero.
    #[inline]
    pub fn insert_raw(&mut self, fingerprint: u64, bits: u64) {
        debug_assert!(bits != 0);
        assert!(self.len < self.slots.len() - 1, "rho map overfull");
        let mut i = (fingerprint >> self.shift) as usize;
        while self.slots[i].1 != 0 {
            i = (i + 1) & self.mask;
        }
        self.slots[i] = (fingerprint, bits);
        self.len += 1;
    }

    pub fn insert(&mut self, seq: &BinarySequence) {
        let bits = seq.as_u64().expect("search sequences fit one word");
        self.insert_raw(RhoKey::of_bits(self.n, bits).fingerprint(), bits);
    }

    /// Stored sequences whose key fingerprint equals `fingerprint`.
    #[inline]
    pub fn candidates(&self, fingerprint: u64) -> Candidates<'_> {
        Candidates { map: self, pos: (fingerprint >> self.shift) as usize, fingerprint }
    }

    /// Stored sequences whose key is exactly `key`.
    pub fn lookup(&self, key: &RhoKey) -> Vec<u64> {
        self.candidates(key.fingerprint()).filter(|&bits| RhoKey::of_bits(self.n, bits) == *key).collect()
    }
}

pub struct Candidates<'a> {
    map: &'a RhoMap,
    pos: usize,
    fingerprint: u64,
}

impl Iterator for Candidates<'_> {
    type Item = u64;

    #[inline]
    fn next(&mut self) -> Option<u64> {
        loop {
            let (fp, bits) = self.map.slots[self.pos];
            if bits == 0 {
                return None;
            }
            self.pos = (self.pos + 1) & self.map.mask;
            if fp == self.fingerprint {
                return Some(bits);
            }
        }
    }
}

/// Full check of a candidate: zero sums for `1 <= tau <= (n-1)/2`, magnitude at most
/// `max_acc` beyond.
#[inline]
pub fn verify_pair(a: u64, b: u64, n: usize, max_acc: u32) -> bool {
    let m = (n - 1) / 2;
    for t in 1..n {
        let span = (n - t) as i32;
        let mask = (1u64 << (n - t)) - 1;
        let d = ((a ^ (a >> t)) & mask).count_ones() + ((b ^ (b >> t)) & mask).count_ones();
        let sum = 2 * span - 2 * d as i32;
        if t <= m {
            if sum != 0 {
                return false;
            }
        } else if sum.unsigned_abs() > max_acc {
            return false;
        }
    }
    true
}

/// Counters for one or more chunk runs.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub chunks: u64,
    pub map_inserts: u64,
    pub lookups: u64,
    pub candidates: u64,
    pub verified: u64,
    pub emitted: u64,
}

impl SearchStats {
    fn absorb(&mut self, o: &SearchStats) {
        self.chunks += o.chunks;
        self.map_inserts += o.map_inserts;
        self.lookups += o.lookups;
        self.candidates += o.candidates;
        self.verified += o.verified;
        self.emitted += o.emitted;
    }
}

/// A surviving `(a, b)` with `a >= b`, as raw packed words.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hit {
    pub case: Case,
    pub a: u64,
    pub b: u64,
}

/// Per-worker state: one map, reused across chunks and across the two `b` middle bits
/// sharing an `(a_0, a_mid)` choice.
pub struct ChunkSearcher {
    inner: SearcherImpl,
}

#[allow(clippy::large_enum_variant)]
enum SearcherImpl {
    W1(Searcher<1>),
    W2(Searcher<2>),
    W3(Searcher<3>),
    W4(Searcher<4>),
}

impl ChunkSearcher {
    /// Searcher for `cfg.n`, or the map size in bytes if it exceeds `cfg.map_budget` or
    /// cannot be allocated.
    pub fn for_config(cfg: &SearchConfig) -> Result<Self, usize> {
        let bytes = RhoMap::bytes_for_length(cfg.n);
        if cfg.map_budget.is_some_and(|b| bytes > b) {
            return Err(bytes);
        }
        Self::new(cfg.n)
    }

    pub fn new(n: usize) -> Result<Self, usize> {
        let inner = match key_words((n - 3) / 2) {
            1 => SearcherImpl::W1(Searcher::new(n)?),
            2 => SearcherImpl::W2(Searcher::new(n)?),
            3 => SearcherImpl::W3(Searcher::new(n)?),
            _ => SearcherImpl::W4(Searcher::new(n)?),
        };
        Ok(ChunkSearcher { inner })
    }

    /// Runs every selected case of one chunk, appending surviving pairs to `out`.
    pub fn search(&mut self, c: Chunk, cfg: &SearchConfig, out: &mut Vec<Hit>) -> SearchStats {
        match &mut self.inner {
            SearcherImpl::W1(s) => s.search(c, cfg, out),
            SearcherImpl::W2(s) => s.search(c, cfg, out),
            SearcherImpl::W3(s) => s.search(c, cfg, out),
            SearcherImpl::W4(s) => s.search(c, cfg, out),
        }
    }
}

struct Searcher<const W: usize> {
    n: usize,
    k: usize,
    map: RhoMap,
    tables: FlipTables<W>,
}

impl<const W: usize> Searcher<W> {
    fn new(n: usize) -> Result<Self, usize> {
        Ok(Searcher { n, k: (n - 3) / 2, map: RhoMap::for_length(n)?, tables: FlipTables::new(n) })
    }

    /// Gray step `j -> j + 1` flips lower bit `x` and its mirror, for either sequence.
    #[inline(always)]
    fn step(&self, walk: &mut PackedWalk<W>, j: u64, mode: RhoTracking) -> (usize, usize) {
        let x = (j + 1).trailing_zeros() as usize;
        let (lo, hi) = (x + 1, self.n - 2 - x);
        match mode {
            RhoTracking::Incremental => {
                walk.flip(&self.tables, lo);
                walk.flip(&self.tables, hi);
            }
            RhoTracking::Recompute => {
                walk.bits ^= (1 << lo) | (1 << hi);
                walk.recount(self.n);
            }
        }
        (lo, hi)
    }

    fn fill_map(&mut self, c: Chunk, lsb: u8, mid: u8, mode: RhoTracking, stats: &mut SearchStats) {
        let (n, k) = (self.n, self.k);
        self.map.clear();
        let mut walk = PackedWalk::<W>::new(n, assemble(n, lsb, 0, mid, c.0));
        let steps = 1u64 << k;
        for j in 0..steps {
            self.map.insert_raw(walk.fingerprint(), walk.bits);
            if j + 1 < steps {
                self.step(&mut walk, j, mode);
            }
        }
        stats.map_inserts += steps;
    }

    fn walk_b(&self, c: Chunk, case: Case, cfg: &SearchConfig, stats: &mut SearchStats, out: &mut Vec<Hit>) {
        let (n, k) = (self.n, self.k);
        let mut walk = PackedWalk::<W>::new(n, assemble(n, case.lsb, 0, case.mid_b, derive_b_upper(0, c, k)));
        let mut weight = walk.bits.count_ones();
        let steps = 1u64 << k;
        for j in 0..steps {
            let b = walk.bits;
            for a in self.map.candidates(walk.partner_fingerprint(&self.tables)) {
                stats.candidates += 1;
                if a < b {
                    continue;
                }
                if let Some(filter) = cfg.weight_filter {
                    if !filter(a.count_ones(), weight) {
                        continue;
                    }
                }
                stats.verified += 1;
                if verify_pair(a, b, n, cfg.max_acc) {
                    stats.emitted += 1;
                    out.push(Hit { case, a, b });
                }
            }
            if j + 1 == steps {
                break;
            }
            let (lo, hi) = self.step(&mut walk, j, cfg.rho_tracking);
            // each flipped bit moves the weight by one; together -2, 0 or +2
            weight = weight + 2 * ((walk.bits >> lo) & 1) as u32 + 2 * ((walk.bits >> hi) & 1) as u32 - 2;
            debug_assert_eq!(weight, walk.bits.count_ones());
        }
        stats.lookups += steps;
    }

    fn search(&mut self, c: Chunk, cfg: &SearchConfig, out: &mut Vec<Hit>) -> SearchStats {
        let mut stats = SearchStats { chunks: 1, ..Default::default() };
        for lsb in 0..2u8 {
            for mid_a in 0..2u8 {
                let cases = [0u8, 1].map(|mid_b| Case { lsb, mid_a, mid_b });
                if !cases.iter().any(|case| cfg.cases.contains(*case)) {
                    continue;
                }
                self.fill_map(c, lsb, mid_a, cfg.rho_tracking, &mut stats);
                for case in cases.into_iter().filter(|case| cfg.cases.contains(*case)) {
                    self.walk_b(c, case, cfg, &mut stats, out);
                }
            }
        }
        stats
    }
}

pub fn search_chunk(c: Chunk, cfg: &SearchConfig, case: Case) -> Result<Vec<SequencePair>, SearchError> {
    let cfg = SearchConfig { cases: CaseMask::single(case), chunks: c.0..c.0 + 1, ..cfg.clone() };
    cfg.validate()?;
    let mut searcher = ChunkSearcher::for_config(&cfg)
        .map_err(|bytes| SearchError::ResourceExhausted { chunk: c.0, bytes, resume_from: c.0 })?;
    let mut hits = Vec::new();
    searcher.search(c, &cfg, &mut hits);
    hits.iter().map(|h| hit_pair(cfg.n, h)).collect()
}

fn hit_pair(n: usize, h: &Hit) -> Result<SequencePair, SearchError> {
    Ok(SequencePair { a: BinarySequence::from_u64(n, h.a)?, b: BinarySequence::from_u64(n, h.b)? })
}

/// One canonical class in the search output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FoundPair {
    pub pair: SequencePair,
    /// Lowest chunk index in which a member of the class was emitted.
    pub chunk: u64,
}

/// Progress notification delivered after each completed chunk.
#[derive(Debug, Clone)]
pub struct ChunkReport {
    pub chunk: u64,
    pub hits: Vec<SequencePair>,
    pub completed: u64,
    pub total: u64,
    /// Every chunk in `[range.start, resume_from)` has completed.
    pub resume_from: u64,
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    /// Canonical classes, sorted by canonical pair.
    pub pairs: Vec<FoundPair>,
    pub stats: SearchStats,
}

pub fn run_search(cfg: &SearchConfig) -> Result<SearchOutcome, SearchError> {
    run_search_observed(cfg, |_| {})
}

/// [`run_search`] with a callback invoked from worker threads after each chunk.
pub fn run_search_observed<F>(cfg: &SearchConfig, on_chunk: F) -> Result<SearchOutcome, SearchError>
where
    F: Fn(&ChunkReport) + Sync,
{
    cfg.validate()?;
    let n = cfg.n;
    let next = AtomicU64::new(cfg.chunks.start);
    let failed = AtomicBool::new(false);
    let total = cfg.chunks.end - cfg.chunks.start;
    let progress = Mutex::new(Progress { done: BTreeSet::new(), low: cfg.chunks.start, count: 0 });
    let workers = cfg.workers.clamp(1, total.min(1 << 16) as usize);

    type WorkerResult = Result<(Vec<(u64, Hit)>, SearchStats), SearchError>;
    let results: Vec<WorkerResult> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                scope.spawn(|| -> WorkerResult {
                    let mut found = Vec::new();
                    let mut stats = SearchStats::default();
                    let mut searcher: Option<ChunkSearcher> = None;
                    let mut hits = Vec::new();
                    loop {
                        if failed.load(Ordering::Relaxed) {
                            break;
                        }
                        let chunk = next.fetch_add(1, Ordering::Relaxed);
                        if chunk >= cfg.chunks.end {
                            break;
                        }
                        if searcher.is_none() {
                            match ChunkSearcher::for_config(cfg) {
                                Ok(s) => searcher = Some(s),
                                Err(bytes) => {
                                    failed.store(true, Ordering::Relaxed);
                                    let resume_from = progress.lock().unwrap().low;
                                    return Err(SearchError::ResourceExhausted { chunk, bytes, resume_from });
                                }
                            }
                        }
                        let s = searcher.as_mut().unwrap();
                        hits.clear();
                        stats.absorb(&s.search(Chunk(chunk), cfg, &mut hits));
                        found.extend(hits.iter().map(|h| (chunk, *h)));
                        let (completed, resume_from) = progress.lock().unwrap().complete(chunk);
                        let report = ChunkReport {
                            chunk,
                            hits: hits.iter().map(|h| hit_pair(n, h)).collect::<Result<_, _>>()?,
                            completed,
                            total,
                            resume_from,
                        };
                        on_chunk(&report);
                    }
                    Ok((found, stats))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("search worker panicked")).collect()
    });

    let mut stats = SearchStats::default();
    let mut classes: HashMap<SequencePair, u64> = HashMap::new();
    for r in results {
        let (found, s) = r?;
        stats.absorb(&s);
        for (chunk, hit) in found {
            let canon = canonical(&hit_pair(n, &hit)?);
            classes.entry(canon).and_modify(|c| *c = (*c).min(chunk)).or_insert(chunk);
        }
    }
    let mut pairs: Vec<FoundPair> = classes.into_iter().map(|(pair, chunk)| FoundPair { pair, chunk }).collect();
    pairs.sort_by_key(|x| x.pair);
    Ok(SearchOutcome { pairs, stats })
}

struct Progress {
    done: BTreeSet<u64>,
    low: u64,
    count: u64,
}

impl Progress {
    fn complete(&mut self, chunk: u64) -> (u64, u64) {
        self.count += 1;
        self.done.insert(chunk);
        while self.done.remove(&self.low) {
            self.low += 1;
        }
        (self.count, self.low)
    }
}
