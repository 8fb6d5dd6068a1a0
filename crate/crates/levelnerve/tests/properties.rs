use levelnerve::arith::{hermite_normal_form, invariant_factors};
use levelnerve::covers::CoverSpec;
use levelnerve::decomp::{leq, seed};
use levelnerve::io::{decode, encode};
use levelnerve::surface::graph::enumerate_stable_graphs;
use levelnerve::symplectic::{SympMatrix, SympSpace};
use proptest::prelude::*;

fn rows() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..5).prop_flat_map(|c| prop::collection::vec(prop::collection::vec(-9i64..10, c), 1..5))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hnf_is_invariant_under_row_operations(m in rows(), i in 0usize..5, j in 0usize..5, k in -4i64..5) {
        let c = m[0].len();
        let h = hermite_normal_form(&m, c);
        let mut n = m.clone();
        let (i, j) = (i % n.len(), j % n.len());
        if i != j {
            let r = n[j].clone();
            for (x, y) in n[i].iter_mut().zip(r) {
                *x += k * y;
            }
        }
        n.swap(0, j);
        n[i].iter_mut().for_each(|x| *x = -*x);
        prop_assert_eq!(hermite_normal_form(&n, c), h.clone());
        prop_assert_eq!(invariant_factors(&n, c), invariant_factors(&m, c));
        // Idempotent.
        if !h.is_empty() {
            prop_assert_eq!(hermite_normal_form(&h, c), h);
        }
    }

    #[test]
    fn transvections_preserve_the_pairing(g in 1usize..4, m in 2i64..8, seed in prop::collection::vec(-20i64..20, 24)) {
        let s = SympSpace::new(g, m).unwrap();
        let r = s.rank();
        let v = s.reduce_vec(&seed[..r]);
        let x = s.reduce_vec(&seed[r..2 * r]);
        let y = s.reduce_vec(&seed[2 * r..3 * r]);
        let t = SympMatrix::transvection(s, &v);
        prop_assert!(t.is_symplectic());
        prop_assert_eq!(s.pair(&t.apply(&x), &t.apply(&y)), s.pair(&x, &y));
        let ti = t.symplectic_inverse();
        prop_assert_eq!(ti.mul(&t), SympMatrix::identity(s));
        prop_assert!(t.mul(&t).mul(&ti).is_symplectic());
    }

    #[test]
    fn symplectic_images_of_seeds_stay_valid(
        k in 0usize..3,
        which in 0usize..8,
        m in prop::sample::select(vec![2i64, 3]),
        word in prop::collection::vec((0usize..4, 0usize..4), 1..6),
    ) {
        let ts = enumerate_stable_graphs(2, 0, k).unwrap();
        let t = &ts[which % ts.len()];
        let (_, d) = seed(t, m).unwrap();
        let s = d.space;
        let mut f = SympMatrix::identity(s);
        for (a, b) in word {
            let mut v = s.zero();
            v[a] = 1;
            v[b] = (v[b] + 1) % m;
            f = f.mul(&SympMatrix::transvection(s, &v));
        }
        let e = d.sp_action(&f).unwrap();
        prop_assert!(e.validate().unwrap().is_valid());
        prop_assert_eq!(e.derived_type().canonical(), t.canonical());
        prop_assert!(leq(&e.unframed(), &e.unframed()).unwrap());
    }

    #[test]
    fn cover_specs_round_trip(g in 1usize..4, n in 0usize..3, m in 2i64..9) {
        prop_assume!(2 * g + n > 2);
        let s = CoverSpec::homology_cover(g, n, m);
        let b = encode(&s).unwrap();
        let t: CoverSpec = decode(&b).unwrap();
        prop_assert_eq!(encode(&t).unwrap(), b);
        prop_assert_eq!(t, s);
    }
}
