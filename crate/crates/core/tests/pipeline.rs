use algbits::bits::make_root_handle;
use algbits::isolate::{real_roots, RealRoot};
use algbits::oracle::bits_via_bisection;
use algbits::prep::preprocess;
use algbits::rat::rat;
use algbits::IntPoly;
use proptest::prelude::*;

/// Bits 1..=n of every irrational real root of `p`, checked against bisection.
fn check_all_roots(p: &IntPoly, n: u64) -> usize {
    let mut irrational = 0;
    for r in real_roots(p).unwrap() {
        if let RealRoot::Irrational(g) = r {
            let h = make_root_handle(&g).unwrap();
            for k in 1..=n {
                assert_eq!(h.nth_bit(k).unwrap(), bits_via_bisection(&g, &h.liouville, k), "{p}, bit {k}");
            }
            irrational += 1;
        }
    }
    irrational
}

#[test]
fn repeated_and_rational_roots() {
    // (x - 1/2)^2 (x^2 - 3)^3 (x + 2)
    let half = IntPoly::from_i64(&[-1, 2]);
    let q = IntPoly::from_i64(&[-3, 0, 1]);
    let lin = IntPoly::from_i64(&[2, 1]);
    let p = &(&(&half * &half) * &(&(&q * &q) * &q)) * &lin;

    let report = preprocess(&p).unwrap();
    let mut rational = report.rational_roots.clone();
    rational.sort();
    assert_eq!(rational, vec![rat(-2, 1), rat(1, 2)]);
    assert_eq!(report.factors.len(), 1);
    assert_eq!(report.factors[0].factor, q);

    let roots = real_roots(&p).unwrap();
    assert_eq!(roots.len(), 4);
    assert_eq!(check_all_roots(&p, 96), 2);
}

#[test]
fn several_irreducible_factors() {
    // (x^2 - 2)(x^3 - x - 1)(x^2 - x - 1)
    let p = &(&IntPoly::from_i64(&[-2, 0, 1]) * &IntPoly::from_i64(&[-1, -1, 0, 1])) * &IntPoly::from_i64(&[-1, -1, 1]);
    assert_eq!(check_all_roots(&p, 64), 5);
}

#[test]
fn no_real_roots() {
    assert!(real_roots(&IntPoly::from_i64(&[1, 0, 1])).unwrap().is_empty());
    assert!(real_roots(&IntPoly::from_i64(&[5, 0, 3, 0, 1])).unwrap().is_empty());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn quadratic_bits_match_bisection(a in 1i64..6, b in -12i64..12, c in -12i64..12) {
        check_all_roots(&IntPoly::from_i64(&[c, b, a]), 48);
    }

    #[test]
    fn cubic_root_counts_are_stable(c0 in -9i64..9, c1 in -9i64..9, c2 in -9i64..9) {
        let p = IntPoly::from_i64(&[c0, c1, c2, 1]);
        let roots = real_roots(&p).unwrap();
        prop_assert!((1..=3).contains(&roots.len()));
        check_all_roots(&p, 24);
    }
}
