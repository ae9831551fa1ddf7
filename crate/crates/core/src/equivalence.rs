//! Interchange, negation and reversal of pairs, their orbits and canonical representatives.

use std::collections::HashSet;

use crate::seqcore::{SeqError, SequencePair};

/// One element of the order-32 group generated by per-sequence reversal and negation
/// and interchange. Applied as: reverse each flagged sequence, negate each flagged
/// sequence, then swap.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct PairTransform {
    pub swap: bool,
    pub negate_a: bool,
    pub negate_b: bool,
    pub reverse_a: bool,
    pub reverse_b: bool,
}

impl PairTransform {
    pub const IDENTITY: PairTransform =
        PairTransform { swap: false, negate_a: false, negate_b: false, reverse_a: false, reverse_b: false };

    /// All 32 transforms, identity first.
    pub fn all() -> impl Iterator<Item = PairTransform> {
        (0u8..32).map(|m| PairTransform {
            swap: m & 1 != 0,
            negate_a: m & 2 != 0,
            negate_b: m & 4 != 0,
            reverse_a: m & 8 != 0,
            reverse_b: m & 16 != 0,
        })
    }

    pub fn apply(&self, p: &SequencePair) -> SequencePair {
        let mut a = p.a;
        let mut b = p.b;
        if self.reverse_a {
            a = a.reverse();
        }
        if self.reverse_b {
            b = b.reverse();
        }
        if self.negate_a {
            a = a.negate();
        }
        if self.negate_b {
            b = b.negate();
        }
        if self.swap {
            SequencePair { a: b, b: a }
        } else {
            SequencePair { a, b }
        }
    }

    /// The transform equal to applying `self` and then `next`.
    pub fn then(&self, next: &PairTransform) -> PairTransform {
        // Negation and reversal commute and are involutions, so per-sequence flags
        // combine by XOR once `next`'s flags are routed to the slot each input landed in.
        let (na, nb, ra, rb) = if self.swap {
            (next.negate_b, next.negate_a, next.reverse_b, next.reverse_a)
        } else {
            (next.negate_a, next.negate_b, next.reverse_a, next.reverse_b)
        };
        PairTransform {
            swap: self.swap ^ next.swap,
            negate_a: self.negate_a ^ na,
            negate_b: self.negate_b ^ nb,
            reverse_a: self.reverse_a ^ ra,
            reverse_b: self.reverse_b ^ rb,
        }
    }
}

/// Every pair reachable from `p`, sorted and without duplicates.
pub fn orbit(p: &SequencePair) -> Vec<SequencePair> {
    let set: HashSet<SequencePair> = PairTransform::all().map(|t| t.apply(p)).collect();
    let mut out: Vec<_> = set.into_iter().collect();
    out.sort();
    out
}

/// Canonical representative of the orbit of `p`: the member whose `(max, min)` tuple is
/// smallest, returned with the larger sequence first.
pub fn canonical(p: &SequencePair) -> SequencePair {
    PairTransform::all()
        .map(|t| {
            let q = t.apply(p);
            if q.a >= q.b {
                q
            } else {
                q.swap()
            }
        })
        .min()
        .expect("transform group is nonempty")
}

pub fn are_equivalent(p1: &SequencePair, p2: &SequencePair) -> Result<bool, SeqError> {
    if p1.len() != p2.len() {
        return Err(SeqError::LengthMismatch { left: p1.len(), right: p2.len() });
    }
    Ok(canonical(p1) == canonical(p2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqcore::BinarySequence;

    fn pair(a: &str, b: &str, n: usize) -> SequencePair {
        SequencePair::from_hex(a, b, n).unwrap()
    }

    #[test]
    fn negate_and_reverse_basics() {
        let a = BinarySequence::from_hex("7", 3).unwrap();
        assert_eq!(a.negate().bits(), vec![0, 0, 0]);
        let pal = BinarySequence::from_bits(&[1, 0, 1, 1, 1, 0, 1]).unwrap();
        assert_eq!(pal.reverse(), pal);
        let s = BinarySequence::from_hex("1E", 5).unwrap();
        assert_eq!(s.reverse().bits(), vec![1, 1, 1, 1, 0]);
    }

    #[test]
    fn orbit_contains_named_members() {
        let p = pair("6AC2984", "42265F0", 27);
        let orb = orbit(&p);
        assert!(orb.contains(&p.swap()));
        let (a, b) = (p.a, p.b);
        assert!(orb.contains(&SequencePair { a: b.negate(), b: a.negate().reverse() }));
        assert_eq!(32 % orb.len(), 0);
        let sums = p.aacf_sum_vector();
        assert!(orb.iter().all(|q| q.aacf_sum_vector() == sums));
    }

    #[test]
    fn composition_matches_sequential_application() {
        let p = pair("1E", "16", 5);
        for t1 in PairTransform::all() {
            for t2 in PairTransform::all() {
                assert_eq!(t1.then(&t2).apply(&p), t2.apply(&t1.apply(&p)));
            }
        }
    }

    #[test]
    fn canonical_is_idempotent_and_swap_invariant() {
        let p = pair("6AC2984", "42265F0", 27);
        let c = canonical(&p);
        assert_eq!(canonical(&c), c);
        assert_eq!(canonical(&p.swap()), c);
        assert!(c.a >= c.b);
        for q in orbit(&p) {
            assert_eq!(canonical(&q), c);
        }
    }

    #[test]
    fn equivalence_examples() {
        let p = pair("6AC2984", "42265F0", 27);
        assert!(are_equivalent(&p, &p.swap()).unwrap());
        assert!(are_equivalent(&p, &SequencePair { a: p.a.negate(), b: p.b }).unwrap());
        let q = pair("419B094", "4038DAA", 27);
        assert!(!are_equivalent(&p, &q).unwrap());
        let r = pair("7", "5", 3);
        assert!(are_equivalent(&p, &r).is_err());
    }

    #[test]
    fn table_vi_rows_are_distinct() {
        let p = pair("1D29F4D110", "11273940E8", 37);
        let q = pair("17B506C9C4", "144430A7C2", 37);
        assert!(!are_equivalent(&p, &q).unwrap());
    }
}
