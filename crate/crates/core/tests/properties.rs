use num_rational::BigRational;
use proptest::prelude::*;

use etfforge::certify::{kernel_dim, InequalityBounds};
use etfforge::frames::{assemble_2circulant, rephase, triple_product, CirculantPair};
use etfforge::io::{matrix_from_json, matrix_to_json, pair_from_json, pair_to_json};
use etfforge::rigor::{iv_add, iv_mul, iv_sqr, iv_sub, Interval};
use etfforge::solver::system::{constraint_count, variable_count};
use etfforge::C64;

fn rat(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap()
}

fn interval() -> impl Strategy<Value = (Interval, f64)> {
    (-1e6f64..1e6, 0f64..1e3, 0f64..=1.0).prop_map(|(a, w, t)| {
        let iv = Interval::new(a, a + w);
        (iv, (a + t * w).clamp(iv.lo, iv.hi))
    })
}

fn generators(d: usize) -> impl Strategy<Value = CirculantPair> {
    prop::collection::vec(-2f64..2.0, 4 * d).prop_map(move |v| CirculantPair::from_real(&v, d))
}

fn contains(iv: Interval, x: &BigRational) -> bool {
    &rat(iv.lo) <= x && x <= &rat(iv.hi)
}

proptest! {
    #[test]
    fn interval_ops_contain_exact_results((a, x) in interval(), (b, y) in interval()) {
        let (x, y) = (rat(x), rat(y));
        prop_assert!(contains(iv_add(a, b), &(&x + &y)));
        prop_assert!(contains(iv_sub(a, b), &(&x - &y)));
        prop_assert!(contains(iv_mul(a, b), &(&x * &y)));
        prop_assert!(contains(iv_sqr(a), &(&x * &x)));
    }

    #[test]
    fn real_coordinates_round_trip(p in (1usize..12).prop_flat_map(generators)) {
        let d = p.d();
        prop_assert_eq!(CirculantPair::from_real(&p.to_real(), d), p);
    }

    #[test]
    fn pair_json_round_trip_is_exact(p in (1usize..9).prop_flat_map(generators)) {
        let back = pair_from_json(&pair_to_json(&p).unwrap()).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn matrix_json_round_trip_is_exact(p in (1usize..6).prop_flat_map(generators)) {
        let m = assemble_2circulant(&p);
        let back = matrix_from_json(&matrix_to_json(&m).unwrap()).unwrap();
        prop_assert_eq!(back.max_abs_diff(&m), 0.0);
    }

    #[test]
    fn rephasing_keeps_triple_products(
        p in (2usize..6).prop_flat_map(generators),
        angles in prop::collection::vec(0f64..6.3, 12),
    ) {
        let g = assemble_2circulant(&p).gram();
        let c: Vec<C64> = (0..g.rows()).map(|i| C64::from_polar(1.0, angles[i])).collect();
        let h = rephase(&g, &c);
        let n = g.rows();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (a, b) = (triple_product(&g, i, j, k), triple_product(&h, i, j, k));
                    prop_assert!((a - b).norm() <= 1e-10 * (1.0 + a.norm()));
                }
            }
        }
    }

    #[test]
    fn kernel_dim_is_ceil_three_halves(d in 1usize..500) {
        prop_assert_eq!(kernel_dim(d), (3 * d).div_ceil(2));
        prop_assert_eq!(variable_count(d), constraint_count(d) + kernel_dim(d));
    }

    #[test]
    fn looser_bounds_never_help(
        a in 0f64..1e-3, bt in 1f64..100.0, c0 in 0f64..1e-10,
        eps in 1e-8f64..1e-2, bump in 1f64..4.0,
    ) {
        let base = InequalityBounds { st_minus_i: a, t_norm: bt, f_x0: c0, x0_norm: 0.5, delta: 1e-10, f_abs: 64.0 };
        let worse = InequalityBounds { st_minus_i: a * bump, t_norm: bt * bump, f_x0: c0 * bump, ..base };
        let (l0, r0) = base.evaluate(eps, 0);
        let (l1, r1) = worse.evaluate(eps, 0);
        prop_assert!(l1 >= l0 && r1 <= r0);
        prop_assert!(!worse.holds(eps) || base.holds(eps));
    }
}
