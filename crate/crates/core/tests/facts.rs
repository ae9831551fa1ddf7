use obzcp::oracle::all_pairs;
use obzcp::{check_end_parity, classify, psc, zcz_width, BinarySequence, Category, SequencePair};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn pair(n: usize, a: u64, b: u64) -> SequencePair {
    SequencePair { a: BinarySequence::from_u64(n, a).unwrap(), b: BinarySequence::from_u64(n, b).unwrap() }
}

/// Every pair of length `n` whose zone reaches `(n+1)/2`.
fn z_optimal_pairs(n: usize) -> Vec<SequencePair> {
    all_pairs(n).map(|(a, b)| pair(n, a, b)).filter(|p| zcz_width(p) == n.div_ceil(2)).collect()
}

#[test]
fn zone_never_exceeds_half_length() {
    for n in [5, 7] {
        let mut widest = 0;
        for (a, b) in all_pairs(n) {
            let z = zcz_width(&pair(n, a, b));
            assert!(z <= n.div_ceil(2), "n {n}: ({a:x}, {b:x}) has zone {z}");
            widest = widest.max(z);
        }
        assert_eq!(widest, n.div_ceil(2));
    }
}

#[test]
fn out_of_zone_sums_are_at_least_two() {
    for n in [5, 7, 9] {
        let found = z_optimal_pairs(n);
        assert!(!found.is_empty());
        for p in &found {
            let sums = p.aacf_sum_vector();
            for (t, s) in sums.iter().enumerate().skip(n.div_ceil(2)) {
                assert!(s.abs() >= 2, "n {n} {p} tau {t}");
            }
            let c = classify(p);
            assert_ne!(c.category, Category::SubOptimal);
            assert!(c.max_out_of_zone >= 2);
        }
    }
}

#[test]
fn z_optimal_pairs_satisfy_parity() {
    for n in [5, 7, 9] {
        for p in z_optimal_pairs(n) {
            assert!(check_end_parity(&p), "n {n} {p}");
        }
    }
}

#[test]
fn pursley_sarwate_bound_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for n in [5usize, 15, 31] {
        let mut lowest = f64::INFINITY;
        for _ in 0..100_000 {
            let mask = (1u64 << n) - 1;
            let r = psc(&pair(n, rng.gen::<u64>() & mask, rng.gen::<u64>() & mask));
            lowest = lowest.min(r.psc);
        }
        assert!(lowest >= 1.0 - 1e-12, "n {n}: psc {lowest}");
    }
}
