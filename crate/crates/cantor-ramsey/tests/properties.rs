//! Property tests against simple oracles.

use cantor_ramsey::oscillation::{invariant_i, invariant_i_reference, osc};
use cantor_ramsey::words::{alpha, alpha_index, b, b_inverse, cmp_l, q_normalize, Point, QWord, Word};
use proptest::prelude::*;

fn word(max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(any::<bool>(), 0..=max).prop_map(|v| Word::from_bits(v).unwrap())
}

fn qword(max: usize) -> impl Strategy<Value = QWord> {
    word(max).prop_map(|w| q_normalize(&w))
}

/// The first `n` bits of `prefix·period^∞`, by plain unfolding.
fn unfold(prefix: &Word, period: &Word, n: usize) -> Vec<bool> {
    prefix.bits().iter().chain(period.bits().iter().cycle()).take(n).copied().collect()
}

proptest! {
    #[test]
    fn canonical_point_denotes_the_same_sequence(p in word(8), q in word(6).prop_filter("nonempty", |w| !w.is_empty())) {
        let pt = Point::new(p.clone(), q.clone()).unwrap();
        let n = 3 * (p.len() + q.len()) + 8;
        prop_assert_eq!(pt.truncate(n).unwrap().bits().to_vec(), unfold(&p, &q, n));
        // Other names of the same sequence canonicalize identically.
        let longer = Point::new(p.concat(&q).unwrap(), q.clone()).unwrap();
        let doubled = Point::new(p.clone(), q.concat(&q).unwrap()).unwrap();
        prop_assert_eq!(&pt, &longer);
        prop_assert_eq!(&pt, &doubled);
        prop_assert_eq!(pt.to_string().parse::<Point>().unwrap(), pt);
    }

    #[test]
    fn q_normalize_is_idempotent(w in word(20)) {
        let q = q_normalize(&w);
        prop_assert_eq!(q_normalize(q.word()), q.clone());
        prop_assert!(q.is_prefix_of(&w));
        prop_assert_eq!(w.padded(w.len()).unwrap(), q.padded(w.len()).unwrap());
    }

    #[test]
    fn b_is_increasing_and_inverted(n in 0u64..1_000_000) {
        prop_assert_eq!(cmp_l(&b(n), &b(n + 1)), std::cmp::Ordering::Less);
        prop_assert_eq!(b_inverse(&b(n)).unwrap(), n);
        prop_assert_eq!(alpha_index(&alpha(n)).unwrap(), n);
    }

    #[test]
    fn i_is_symmetric_and_zero_only_on_the_diagonal(z in qword(24), t in qword(24)) {
        let v = invariant_i(&z, &t).unwrap();
        prop_assert_eq!(v, invariant_i(&t, &z).unwrap());
        prop_assert_eq!(v, invariant_i_reference(&z, &t).unwrap());
        prop_assert_eq!(v == 0, z == t);
    }

    #[test]
    fn osc_is_symmetric(z in word(24), t in word(24)) {
        prop_assert_eq!(osc(&z, &t), osc(&t, &z));
        prop_assert_eq!(osc(&z, &z), 0);
    }

    #[test]
    fn lex_order_matches_long_truncations(a in word(6), p in word(4).prop_filter("nonempty", |w| !w.is_empty()),
                                          c in word(6), q in word(4).prop_filter("nonempty", |w| !w.is_empty())) {
        let (x, y) = (Point::new(a, p).unwrap(), Point::new(c, q).unwrap());
        let n = 64;
        prop_assert_eq!(x.lex_cmp(&y), x.truncate(n).unwrap().cmp(&y.truncate(n).unwrap()));
    }
}
