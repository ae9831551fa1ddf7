use obzcp::equivalence::PairTransform;
use obzcp::oracle::{naive_cross, naive_rho, naive_rho_signs, signs_of};
use obzcp::search::flip_update_rho;
use obzcp::seqcore::aacf_word;
use obzcp::{adf, canonical, cdf, classify, orbit, BinarySequence, SequencePair};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn seq_strategy(max_len: usize) -> impl Strategy<Value = BinarySequence> {
    (1..=max_len).prop_flat_map(|n| proptest::collection::vec(0u8..2, n)).prop_map(|bits| {
        // from_bits wants odd lengths; pad even ones with a trailing 1
        let mut bits = bits;
        if bits.len() % 2 == 0 {
            bits.push(1);
        }
        BinarySequence::from_bits(&bits).unwrap()
    })
}

fn pair_strategy(max_len: usize) -> impl Strategy<Value = SequencePair> {
    (1..=max_len / 2)
        .prop_flat_map(|h| {
            let n = 2 * h + 1;
            (proptest::collection::vec(0u8..2, n), proptest::collection::vec(0u8..2, n))
        })
        .prop_map(|(a, b)| SequencePair {
            a: BinarySequence::from_bits(&a).unwrap(),
            b: BinarySequence::from_bits(&b).unwrap(),
        })
}

#[test]
fn packed_kernel_matches_naive_exhaustively() {
    for n in 1..=17usize {
        for v in 0..(1u64 << n) {
            let naive = naive_rho_signs(&signs_of(v, n));
            for (t, &want) in naive.iter().enumerate() {
                assert_eq!(aacf_word(v, n, t) as i64, want, "n {n} v {v:x} tau {t}");
            }
            if n % 2 == 1 {
                let s = BinarySequence::from_u64(n, v).unwrap();
                assert_eq!(s.aacf_vector(), naive);
            }
        }
    }
}

#[test]
fn packed_kernel_matches_naive_on_random_long_sequences() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
    for i in 0..10_000 {
        let n = 2 * rng.gen_range(9..=127) + 1;
        let bits: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2)).collect();
        let s = BinarySequence::from_bits(&bits).unwrap();
        let naive = naive_rho(&s);
        assert_eq!(s.aacf_vector(), naive, "sample {i}, n {n}");
        if i % 100 == 0 {
            let other: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2)).collect();
            let o = BinarySequence::from_bits(&other).unwrap();
            for t in [-(n as isize) + 1, -3, 0, 5, n as isize - 1] {
                assert_eq!(s.accf(&o, t).unwrap(), naive_cross(&s, &o, t));
            }
        }
    }
}

#[test]
fn incremental_updates_track_random_flip_walks() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in [5usize, 13, 27, 35, 49, 63] {
        let mut bits = rng.gen::<u64>() >> (64 - n);
        let mut rho: Vec<i32> = (0..n).map(|t| aacf_word(bits, n, t)).collect();
        for step in 0..10_000 {
            let pos = rng.gen_range(0..n);
            flip_update_rho(bits, n, &mut rho, pos);
            bits ^= 1 << pos;
            if step % 97 == 0 || step == 9_999 {
                let full: Vec<i32> = naive_rho_signs(&signs_of(bits, n)).iter().map(|&v| v as i32).collect();
                assert_eq!(rho[1..], full[1..], "n {n} step {step}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn aacf_is_symmetric(s in seq_strategy(101)) {
        for t in 0..s.len() as isize {
            prop_assert_eq!(s.aacf(t), s.aacf(-t));
        }
    }

    #[test]
    fn accf_swaps_with_shift_sign(p in pair_strategy(41), t in -45isize..45) {
        prop_assert_eq!(p.a.accf(&p.b, t).unwrap(), p.b.accf(&p.a, -t).unwrap());
    }

    #[test]
    fn hex_round_trip(s in seq_strategy(255)) {
        prop_assume!(s.len() >= 3);
        let n = s.len();
        let hex = s.to_hex();
        prop_assert_eq!(BinarySequence::from_hex(&hex, n).unwrap(), s);
        let padded = format!("000{}", hex.to_lowercase());
        let back = BinarySequence::from_hex(&padded, n).unwrap();
        prop_assert_eq!(back.to_hex(), hex.clone());
        prop_assert!(!hex.starts_with('0') || hex == "0");
    }

    #[test]
    fn aacf_parity(s in seq_strategy(99)) {
        let n = s.len() as i64;
        for t in 0..n {
            prop_assert_eq!((s.aacf(t as isize) - (n - t)).rem_euclid(2), 0);
        }
    }

    #[test]
    fn sum_vector_is_even(p in pair_strategy(63)) {
        prop_assert!(p.aacf_sum_vector().iter().all(|v| v % 2 == 0));
    }

    #[test]
    fn negation_and_reversal_keep_rho(s in seq_strategy(99)) {
        let v = s.aacf_vector();
        prop_assert_eq!(s.negate().aacf_vector(), v.clone());
        prop_assert_eq!(s.reverse().aacf_vector(), v);
        prop_assert_eq!(s.rho_vector(), s.negate().rho_vector());
    }

    #[test]
    fn transforms_keep_sums_and_class(p in pair_strategy(49), i in 0usize..32) {
        let t = PairTransform::all().nth(i).unwrap();
        let q = t.apply(&p);
        prop_assert_eq!(q.aacf_sum_vector(), p.aacf_sum_vector());
        prop_assert_eq!(classify(&q), classify(&p));
        prop_assert_eq!(canonical(&q), canonical(&p));
    }

    #[test]
    fn canonical_is_an_orbit_member_and_idempotent(p in pair_strategy(49)) {
        let c = canonical(&p);
        prop_assert!(orbit(&p).contains(&c));
        prop_assert_eq!(canonical(&c), c);
        prop_assert!(c.a >= c.b);
    }

    #[test]
    fn cdf_invariant_subgroup(p in pair_strategy(41)) {
        let base = cdf(&p.a, &p.b).unwrap();
        let (na, nb) = (p.a.negate(), p.b.negate());
        let (ra, rb) = (p.a.reverse(), p.b.reverse());
        prop_assert_eq!(cdf(&na, &p.b).unwrap(), base);
        prop_assert_eq!(cdf(&p.a, &nb).unwrap(), base);
        prop_assert_eq!(cdf(&p.b, &p.a).unwrap(), base);
        prop_assert_eq!(cdf(&ra, &rb).unwrap(), base);
        prop_assert_eq!(adf(&ra), adf(&p.a));
        prop_assert_eq!(adf(&na), adf(&p.a));
    }
}
