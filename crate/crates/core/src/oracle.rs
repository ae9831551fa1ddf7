//! Brute-force reference implementations for cross-checking the fast paths.
//!
//! Nothing here touches the packed kernels, the map or the Gray walk: correlations are
//! elementwise sums over `+1/-1` vectors, pairs are enumerated exhaustively and the
//! equivalence orbit is rebuilt from per-bit loops.

use thiserror::Error;

use crate::seqcore::{BinarySequence, SequencePair};

pub const ORACLE_MAX_LEN: usize = 13;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("brute force supports odd n in 5..={max}, got {0}", max = ORACLE_MAX_LEN)]
    OutOfRange(usize),
}

/// `(-1)^{a_i}` of the low `n` bits of `v`, `a_0` first.
pub fn signs_of(v: u64, n: usize) -> Vec<i32> {
    (0..n).map(|i| if (v >> i) & 1 == 1 { -1 } else { 1 }).collect()
}

/// Elementwise AACF, `tau = 0 .. n-1`.
pub fn naive_rho_signs(x: &[i32]) -> Vec<i64> {
    let n = x.len();
    (0..n).map(|t| (0..n - t).map(|i| (x[i] * x[i + t]) as i64).sum()).collect()
}

pub fn naive_rho(a: &BinarySequence) -> Vec<i64> {
    let x: Vec<i32> = a.bits().iter().map(|&b| if b == 1 { -1 } else { 1 }).collect();
    naive_rho_signs(&x)
}

/// Elementwise cross-correlation at any shift.
pub fn naive_cross(a: &BinarySequence, b: &BinarySequence, tau: isize) -> i64 {
    let (x, y) = (a.bits(), b.bits());
    let n = x.len() as isize;
    let s = |v: u8| if v == 1 { -1i64 } else { 1 };
    if tau.abs() >= n {
        return 0;
    }
    if tau >= 0 {
        (0..n - tau).map(|i| s(x[i as usize]) * s(y[(i + tau) as usize])).sum()
    } else {
        (0..n + tau).map(|i| s(x[(i - tau) as usize]) * s(y[i as usize])).sum()
    }
}

fn reverse_bits_naive(v: u64, n: usize) -> u64 {
    let mut out = 0;
    for i in 0..n {
        if (v >> i) & 1 == 1 {
            out |= 1 << (n - 1 - i);
        }
    }
    out
}

/// Orbit minimum under `(max, min)` ordering, larger element first.
pub fn naive_canonical(a: u64, b: u64, n: usize) -> (u64, u64) {
    let full = (1u64 << n) - 1;
    let mut best = (u64::MAX, u64::MAX);
    for ra in [false, true] {
        for rb in [false, true] {
            for na in [false, true] {
                for nb in [false, true] {
                    let mut x = if ra { reverse_bits_naive(a, n) } else { a };
                    let mut y = if rb { reverse_bits_naive(b, n) } else { b };
                    if na {
                        x ^= full;
                    }
                    if nb {
                        y ^= full;
                    }
                    // swap is absorbed by ordering the tuple
                    let key = (x.max(y), x.min(y));
                    if key < best {
                        best = key;
                    }
                }
            }
        }
    }
    best
}

/// Every pair over all `2^{2n}` candidates with maximal zone and out-of-zone sums of
/// magnitude at most `max_acc`, reduced to sorted canonical representatives.
pub fn brute_force_pairs(n: usize, max_acc: u32) -> Result<Vec<SequencePair>, OracleError> {
    if !(5..=ORACLE_MAX_LEN).contains(&n) || n.is_multiple_of(2) {
        return Err(OracleError::OutOfRange(n));
    }
    let zone = n.div_ceil(2);
    let count = 1u64 << n;
    let rhos: Vec<Vec<i64>> = (0..count).map(|v| naive_rho_signs(&signs_of(v, n))).collect();
    let mut classes = std::collections::BTreeSet::new();
    for x in 0..count {
        let rx = &rhos[x as usize];
        for y in 0..count {
            let ry = &rhos[y as usize];
            let ok = (1..n).all(|t| {
                let s = rx[t] + ry[t];
                if t < zone {
                    s == 0
                } else {
                    s.unsigned_abs() <= max_acc as u64
                }
            });
            if ok {
                classes.insert(naive_canonical(x, y, n));
            }
        }
    }
    Ok(classes
        .into_iter()
        .map(|(a, b)| SequencePair {
            a: BinarySequence::from_u64(n, a).expect("fits"),
            b: BinarySequence::from_u64(n, b).expect("fits"),
        })
        .collect())
}

/// Every pair of length `n` as raw integers, for exhaustive property checks.
pub fn all_pairs(n: usize) -> impl Iterator<Item = (u64, u64)> {
    let count = 1u64 << n;
    (0..count).flat_map(move |x| (0..count).map(move |y| (x, y)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn naive_rho_basics() {
        let a = BinarySequence::from_hex("1E", 5).unwrap();
        assert_eq!(naive_rho(&a), vec![5, 2, 1, 0, -1]);
        let x = signs_of(0b1011001, 7);
        let r = naive_rho_signs(&x);
        assert_eq!(r[0], 7);
    }

    #[test]
    fn naive_cross_symmetry() {
        let a = BinarySequence::from_hex("7", 3).unwrap();
        let b = BinarySequence::from_hex("5", 3).unwrap();
        for t in -3..=3 {
            assert_eq!(naive_cross(&a, &b, -t), naive_cross(&b, &a, t));
        }
        assert_eq!(naive_cross(&a, &b, 5), 0);
    }

    #[test]
    fn range_checks() {
        assert_eq!(brute_force_pairs(3, 2), Err(OracleError::OutOfRange(3)));
        assert_eq!(brute_force_pairs(15, 2), Err(OracleError::OutOfRange(15)));
        assert_eq!(brute_force_pairs(8, 2), Err(OracleError::OutOfRange(8)));
    }

    #[test]
    fn length_five_has_classes() {
        let out = brute_force_pairs(5, 2).unwrap();
        assert!(!out.is_empty());
    }
}
