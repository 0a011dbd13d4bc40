//! Property tests for the structural invariants that hold at every
//! parameter choice, not just the worked examples.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use rabi_core::poly::{factorial, kus_polynomial, rational_to_f64};
use rabi_core::tridiag::{a_matrix_rational, build_a, charpoly_eval, det_oracle_s, next_up};

fn rational() -> impl Strategy<Value = BigRational> {
    (-24i64..=24, 1i64..=12)
        .prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn sturm_counts_are_monotone(n in 1usize..60, y in 0.0f64..10.0, a in -5.0f64..120.0, b in -5.0f64..120.0) {
        let t = build_a(n, y).unwrap();
        let (lo, hi) = (a.min(b), a.max(b));
        prop_assert!(t.sturm_count(lo) <= t.sturm_count(hi));
        let (glo, ghi) = t.gershgorin();
        prop_assert_eq!(t.sturm_count(glo), 0);
        prop_assert_eq!(t.sturm_count(ghi), n);
    }

    #[test]
    fn eval_matches_naive_term_sum(n in 1u32..8, x in rational(), y in rational()) {
        let p = kus_polynomial(n);
        let mut naive = BigRational::zero();
        for (&(i, j), c) in p.terms() {
            let mut term = BigRational::from(c.clone());
            for _ in 0..i {
                term *= &x;
            }
            for _ in 0..j {
                term *= &y;
            }
            naive += term;
        }
        prop_assert_eq!(p.eval_exact(&x, &y), naive);
    }

    #[test]
    fn oracle_triangle_at_random_rationals(n in 1usize..8, x in rational(), y in rational()) {
        let p = kus_polynomial(n as u32);
        let exact = p.eval_exact(&x, &y);
        let fact = BigRational::from(factorial(n as u64));
        prop_assert_eq!(&exact, &(fact * charpoly_eval(&a_matrix_rational(n, &y), &x)));
        prop_assert_eq!(exact, det_oracle_s(n, &x, &y));
    }

    #[test]
    fn restrictions_agree_with_eval(n in 1u32..8, x in rational()) {
        let p = kus_polynomial(n);
        let zero = BigRational::zero();
        prop_assert_eq!(p.restrict_x_axis().eval(&x), p.eval_exact(&x, &zero));
        prop_assert_eq!(p.restrict_y_axis().eval(&x), p.eval_exact(&zero, &x));
    }

    #[test]
    fn eigenvalue_interval_counts_are_consistent(y in 0.0f64..4.0, a in 0.0f64..6.0, w in 0.1f64..6.0) {
        let t = build_a(25, y).unwrap();
        let b = a + w;
        let vals = t.eigenvalues_in(a, b, 0.0).unwrap();
        let expect = t.sturm_count(next_up(b)) - t.sturm_count(next_up(a));
        prop_assert_eq!(vals.len(), expect);
        for v in &vals {
            prop_assert!(*v > a - 1e-10 && *v <= b + 1e-10);
        }
        for pair in vals.windows(2) {
            prop_assert!(pair[0] < pair[1]);
        }
    }

    #[test]
    fn physical_map_roundtrips(g in 1e-3f64..3.0, delta in 1e-3f64..3.0) {
        let x = (2.0 * g) * (2.0 * g);
        let y = delta * delta;
        let (g2, d2) = rabi_core::juddian::to_physical(x, y).unwrap();
        prop_assert!((g2 - g).abs() <= 1e-14 * g);
        prop_assert!((d2 - delta).abs() <= 1e-14 * delta);
    }

    #[test]
    fn isolation_finds_every_simple_rational_root(roots in proptest::collection::btree_set(-6i64..=6, 1..4)) {
        // Build ∏ (4x − r) with distinct integer r, so the roots are r/4.
        let mut coeffs = vec![BigRational::from_integer(1.into())];
        for &r in &roots {
            let mut next = vec![BigRational::zero(); coeffs.len() + 1];
            for (k, c) in coeffs.iter().enumerate() {
                next[k + 1] += c * BigRational::from_integer(4.into());
                next[k] -= c * BigRational::from_integer(r.into());
            }
            coeffs = next;
        }
        let p = rabi_core::poly::UnivariatePoly::from_coeffs(coeffs);
        let lo = BigRational::from_integer((-2).into());
        let hi = BigRational::from_integer(2.into());
        let width = BigRational::new(BigInt::from(1), BigInt::from(1i64 << 40));
        let found = p.isolate_roots(&lo, &hi, &width).unwrap();
        prop_assert_eq!(found.len(), roots.len());
        for (f, &r) in found.iter().zip(roots.iter()) {
            let err = rational_to_f64(f) - r as f64 / 4.0;
            prop_assert!(err.abs() < 1e-9, "root {} vs {}", rational_to_f64(f), r as f64 / 4.0);
        }
    }
}

#[test]
fn branch_endpoints_at_order_fifty() {
    // Branch m of the order-n locus runs from (λ_{n,m}, 0) to (0, m²).
    let n = 50;
    let lag = rabi_core::laguerre::zeros_newton(n, 1e-12).unwrap().zeros;
    for m in [1usize, 7, 25, 50] {
        let b = rabi_core::juddian::trace_branch(n, m, 16).unwrap();
        let first = b.points.first().unwrap();
        let last = b.points.last().unwrap();
        assert!((first.0 - lag[m - 1]).abs() < 1e-6, "m={m}: {first:?}");
        assert!(first.1 == 0.0);
        assert!(last.0.abs() < 1e-6, "m={m}: {last:?}");
        assert!((last.1 - (m * m) as f64).abs() < 1e-12);
    }
}
