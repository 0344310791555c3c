mod common;

use std::cmp::Ordering;

use mcf_core::convergents::{aux_stream, conv_stream, int_det, matrix_form, step_matrix};
use mcf_core::engine::{check_admissible, PartialQuotients};
use mcf_core::exact::{NumberField, PrecisionBudget, RationalInterval, RealValue};
use mcf_core::periodic::{x_matrix, x_matrix_direct, PeriodicSpec};
use mcf_core::transcendence::{
    build_quasiperiodic, construct_liouville, scan_repetitions, verify_liouville, EntryRule, LiouvilleSpec,
    QuasiPeriodicSpec, ScheduleEntry,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// `Q(2^{1/3})` and the field of `x³ - x - 1`.
fn fields() -> Vec<NumberField> {
    vec![
        NumberField::new(vec![(-2).into(), 0.into(), 0.into(), 1.into()], RationalInterval::new(q(1, 1), q(2, 1)).unwrap())
            .unwrap(),
        NumberField::new(vec![(-1).into(), (-1).into(), 0.into(), 1.into()], RationalInterval::new(q(1, 1), q(2, 1)).unwrap())
            .unwrap(),
    ]
}

fn coords() -> impl Strategy<Value = Vec<BigRational>> {
    prop::collection::vec((-50i64..50, 1i64..20).prop_map(|(n, d)| q(n, d)), 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_ring_axioms(k in 0usize..2, x in coords(), y in coords(), z in coords()) {
        let f = &fields()[k];
        let (x, y, z) = (f.element(x).unwrap(), f.element(y).unwrap(), f.element(z).unwrap());
        prop_assert_eq!(x.add(&y).unwrap(), y.add(&x).unwrap());
        prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
        prop_assert_eq!(x.mul(&y).unwrap().mul(&z).unwrap(), x.mul(&y.mul(&z).unwrap()).unwrap());
        prop_assert_eq!(x.mul(&y.add(&z).unwrap()).unwrap(), x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap());
        prop_assert!(x.sub(&x).unwrap().is_zero());
        if !x.is_zero() {
            let one = x.mul(&x.inv().unwrap()).unwrap();
            prop_assert_eq!(one.as_rational(), Some(&BigRational::one()));
        }
    }

    #[test]
    fn floor_agrees_with_enclosure(k in 0usize..2, x in coords(), n in -1000i64..1000, d in 1i64..1000) {
        let f = &fields()[k];
        let budget = PrecisionBudget::default();
        for v in [RealValue::Algebraic(f.element(x.clone()).unwrap()), RealValue::rational(n, d)] {
            let (fl, _) = v.floor_certified(budget).unwrap();
            let iv = v.enclosure(&q(1, 1 << 20), budget).unwrap();
            let lo = BigRational::from_integer(fl.clone());
            prop_assert!(iv.hi() >= &lo);
            prop_assert!(iv.lo() < &(lo.clone() + BigRational::one()));
            prop_assert_ne!(v.cmp_rational(&lo, budget).unwrap(), Ordering::Less);
            prop_assert_eq!(v.cmp_rational(&(lo + BigRational::one()), budget).unwrap(), Ordering::Less);
        }
    }

    #[test]
    fn convergents_match_matrix_products(m in 1usize..=4, seed in any::<u64>(), depth in 1usize..60) {
        let pq = common::admissible(&mut common::rng(seed), m, depth, 6, false);
        let cols: Vec<_> = conv_stream(&pq).collect();
        let oracle = common::oracle_columns(&pq, depth);
        let mut prod = common::factor(&pq.column(0).unwrap());
        for n in 0..depth {
            if n > 0 {
                prod = common::mat_mul(&prod, &common::factor(&pq.column(n).unwrap()));
            }
            let mut v = cols[n].a.clone();
            v.push(cols[n].c.clone());
            prop_assert_eq!(&v, &oracle[n]);
            let first: Vec<BigInt> = prod.iter().map(|row| row[0].clone()).collect();
            prop_assert_eq!(&v, &first);
            prop_assert_eq!(common::det(&prod).abs(), BigInt::one());
        }
        prop_assert_eq!(matrix_form(&pq, depth - 1).unwrap(), prod);
        prop_assert_eq!(int_det(&step_matrix(&pq.column(0).unwrap())).abs(), BigInt::one());
    }

    #[test]
    fn dimension_two_admissibility_matches_the_direct_rule(
        a in prop::collection::vec(0i64..4, 2..12),
        b in prop::collection::vec(0i64..4, 2..12),
    ) {
        let len = a.len().min(b.len());
        let (a, b) = (&a[..len], &b[..len]);
        let pq = PartialQuotients::from_i64(&[a, b]);
        // a_n >= 1, a_n >= b_n, and a_n = b_n forces b_{n+1} >= 1
        let mut direct = true;
        for n in 1..len {
            if a[n] < 1 || a[n] < b[n] || b[n] < 0 {
                direct = false;
            }
            if a[n] == b[n] && n + 1 < len && b[n + 1] < 1 {
                direct = false;
            }
        }
        prop_assert_eq!(check_admissible(&pq).is_admissible(), direct);
    }

    #[test]
    fn tilde_recursion_and_bounds(seed in any::<u64>()) {
        let pq = common::admissible(&mut common::rng(seed), 2, 40, 5, true);
        let aux = aux_stream(&pq).unwrap();
        let cols = common::oracle_columns(&pq, 40);
        for (n, x) in aux.iter().enumerate() {
            let c = &cols[n][2];
            for t in [&x.a_t, &x.b_t, &x.a_tt, &x.b_tt] {
                prop_assert!(&t.abs() <= c, "n = {}", n);
            }
        }
    }

    #[test]
    fn x_matrix_matches_direct_product(seed in any::<u64>(), k in 1usize..=4, h in 1usize..=4) {
        use rand::Rng;
        let mut r = common::rng(seed);
        let spec = loop {
            let zero = r.gen_bool(0.5);
            let pq = common::admissible(&mut r, 2, k + h, 4, zero);
            let (a, b) = (pq.seq(0), pq.seq(1));
            if let Ok(s) = PeriodicSpec::new(a[..k].to_vec(), b[..k].to_vec(), a[k..].to_vec(), b[k..].to_vec()) {
                break s;
            }
        };
        prop_assert_eq!(x_matrix(&spec).unwrap(), x_matrix_direct(&spec));
    }

    #[test]
    fn quasiperiodic_rebuild_is_idempotent(seed in any::<u64>(), n0 in 1usize..5, r0 in 1usize..4, l0 in 2u32..5, r1 in 1usize..4, l1 in 2u32..4) {
        let n1 = n0 + l0 as usize * r0 + 2;
        let schedule = vec![ScheduleEntry::new(n0, r0, l0), ScheduleEntry::new(n1, r1, l1)];
        let base = vec![
            EntryRule::Random { seed, lo: 2, hi: 5 },
            EntryRule::Random { seed: seed ^ 1, lo: 0, hi: 1 },
        ];
        let spec = QuasiPeriodicSpec { m: 2, schedule: schedule.clone(), base };
        let depth = n1 + l1 as usize * r1 + 5;
        let pq = build_quasiperiodic(&spec, depth).unwrap();
        prop_assert_eq!(scan_repetitions(&pq, &schedule), None);
        let again = QuasiPeriodicSpec {
            m: 2,
            schedule,
            base: pq.seqs().iter().map(|s| EntryRule::Explicit(s.clone())).collect(),
        };
        prop_assert_eq!(build_quasiperiodic(&again, depth).unwrap(), pq);
    }

    #[test]
    fn liouville_constructions_verify(seed in any::<u64>(), m in 2usize..=3, dq in 0usize..4, depth in 2usize..6) {
        let delta = [q(1, 1), q(1, 2), q(2, 1), q(3, 2)][dq].clone();
        let rules = (1..m).map(|j| EntryRule::Random { seed: seed.wrapping_add(j as u64), lo: 0, hi: 3 }).collect();
        let spec = LiouvilleSpec { m, delta: delta.clone(), a0: BigInt::zero(), rules, depth };
        let pq = construct_liouville(&spec).unwrap();
        prop_assert!(check_admissible(&pq).is_admissible());
        let rep = verify_liouville(&pq, &delta, depth).unwrap();
        prop_assert!(rep.holds(), "{:?}", rep);
    }
}
