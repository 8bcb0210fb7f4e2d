use hermite_lab_core::cf::{cf_expand, convergents, reduce_theta, tail_value};
use hermite_lab_core::dynamics::{
    contraction_check, invariance_residual, step_t, step_t_inv, DomainPoint,
};
use hermite_lab_core::hermite::{envelope, flags_via_criterion, flags_via_envelope};
use hermite_lab_core::lattice::{check_basis, complete_sequence, intrinsic_coords, Lattice};
use hermite_lab_core::numeric::{compare, Comparison, QuadraticReal, RealSpec};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = RealSpec> {
    (-1_000_000i64..1_000_000, 2i64..10_000)
        .prop_filter("not an integer", |(n, d)| n % d != 0)
        .prop_map(|(n, d)| RealSpec::ratio(n, d).unwrap())
}

fn quadratic() -> impl Strategy<Value = RealSpec> {
    (
        -30i64..30,
        prop_oneof![-4i64..=-1, 1i64..=4],
        1i64..25,
        2i64..80,
    )
        .prop_filter_map("irrational", |(a, b, c, d)| {
            match RealSpec::quadratic(a, b, c, d) {
                Ok(q @ RealSpec::Quadratic(_)) => Some(q),
                _ => None,
            }
        })
}

fn exact_theta() -> impl Strategy<Value = RealSpec> {
    prop_oneof![rational(), quadratic()]
}

fn unit_ratio() -> impl Strategy<Value = BigRational> {
    (1i64..1_000_000, 1_000_001i64..2_000_000)
        .prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

/// `[0; a_1, ..., a_k]` evaluated from the innermost quotient outward.
fn fold(quotients: &[BigInt]) -> BigRational {
    let mut acc = BigRational::zero();
    for a in quotients.iter().rev() {
        acc = (BigRational::from_integer(a.clone()) + acc).recip();
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn intervals_nest(theta in exact_theta(), b1 in 16u32..200, extra in 1u32..200) {
        let coarse = theta.eval_interval(b1).unwrap();
        let fine = theta.eval_interval(b1 + extra).unwrap();
        prop_assert!(coarse.contains(&fine));
    }

    #[test]
    fn compare_is_antisymmetric(a in exact_theta(), b in exact_theta(), bits in 16u32..128) {
        let (x, y) = (a.eval_interval(bits).unwrap(), b.eval_interval(bits).unwrap());
        prop_assert_eq!(compare(&x, &y), compare(&y, &x).reverse());
        if compare(&x, &y) == Comparison::Less {
            prop_assert!(a.to_f64() <= b.to_f64());
        }
    }

    #[test]
    fn quadratic_sign_is_exact(theta in quadratic()) {
        let q = theta.exact().unwrap();
        let f = q.to_f64();
        prop_assert_eq!(i32::from(q.signum()), if f > 0.0 { 1 } else { -1 });
        prop_assert!(q.to_interval(64).signum().is_some());
    }

    #[test]
    fn mirror_identity(theta in exact_theta()) {
        let reduced = reduce_theta(&theta).unwrap();
        let pq = cf_expand(&reduced.x0, 100).unwrap();
        let conv = convergents(&pq);
        let a: Vec<BigInt> = pq.quotients.iter().map(|a| BigInt::from(a.clone())).collect();
        for n in 0..a.len() {
            let lhs = BigRational::new(conv[n].q.clone(), conv[n + 1].q.clone());
            let reversed: Vec<BigInt> = a[..=n].iter().rev().cloned().collect();
            prop_assert_eq!(lhs, fold(&reversed));
        }
    }

    #[test]
    fn determinant_and_last_convergent(theta in rational()) {
        let reduced = reduce_theta(&theta).unwrap();
        let pq = cf_expand(&reduced.x0, 200).unwrap();
        prop_assert!(pq.terminated);
        let conv = convergents(&pq);
        for w in conv.windows(2) {
            let det = &w[1].p * &w[0].q - &w[0].p * &w[1].q;
            prop_assert!(det.abs().is_one());
        }
        let RealSpec::Rational(x0) = &reduced.x0 else { unreachable!() };
        let last = conv.last().unwrap();
        prop_assert_eq!((&last.p, &last.q), (x0.numer(), x0.denom()));
        if pq.len() > 1 {
            prop_assert!(pq.quotients.last().unwrap() >= &2u32.into());
        }
    }

    #[test]
    fn gauss_consistency(theta in quadratic(), n in 0usize..30) {
        let reduced = reduce_theta(&theta).unwrap();
        let pq = cf_expand(&reduced.x0, n + 3).unwrap();
        let t0 = tail_value(&theta, &pq, n, 128).unwrap().value.midpoint_f64();
        let t1 = tail_value(&theta, &pq, n + 1, 128).unwrap().value.midpoint_f64();
        let g = 1.0 / t0 - (1.0 / t0).floor();
        prop_assert!((g - t1).abs() < 1e-9 * (1.0 + 1.0 / t0));
    }

    #[test]
    fn sequence_structure(theta in exact_theta()) {
        let lattice = Lattice::new(theta.clone());
        let seq = lattice.complete_sequence(40).unwrap();
        for w in seq.windows(2) {
            prop_assert!(check_basis(&w[0], &w[1]));
            prop_assert!(w[0].q < w[1].q);
            let (a, b) = (w[0].exact.as_ref().unwrap(), w[1].exact.as_ref().unwrap());
            prop_assert!(a.abs().cmp_value(&b.abs()).is_gt());
        }
        // signs alternate from X_1 on while v1 != 0
        for w in seq[1..].windows(2) {
            let (a, b) = (w[0].sign().unwrap(), w[1].sign().unwrap());
            if b != 0 {
                prop_assert_eq!(a, -b);
            }
        }
    }

    #[test]
    fn intrinsic_coordinates_follow_t(theta in rational()) {
        let seq = complete_sequence(&theta, 60).unwrap();
        let coords: Vec<_> = seq
            .windows(2)
            .take_while(|w| !w[1].exact.as_ref().unwrap().is_zero())
            .map(|w| intrinsic_coords(&w[0], &w[1]).unwrap())
            .collect();
        for w in coords.windows(2) {
            prop_assert_eq!(w[1].eps, -w[0].eps);
            let x = w[0].x_exact.as_ref().unwrap();
            let x = BigRational::new(x.a().clone(), x.c().clone());
            let next = step_t(&DomainPoint::new(x, w[0].y.clone())).unwrap();
            let x1 = w[1].x_exact.as_ref().unwrap();
            prop_assert_eq!(next.x, BigRational::new(x1.a().clone(), x1.c().clone()));
            prop_assert_eq!(&next.y, &w[1].y);
        }
    }

    #[test]
    fn t_is_a_bijection(x in unit_ratio(), y in unit_ratio()) {
        let p = DomainPoint::new(x, y);
        prop_assert_eq!(step_t_inv(&step_t(&p).unwrap()).unwrap(), p.clone());
        prop_assert_eq!(step_t(&step_t_inv(&p).unwrap()).unwrap(), p.clone());
        // T^-1 = s T s
        prop_assert_eq!(step_t_inv(&p).unwrap(), step_t(&p.swap()).unwrap().swap());
    }

    #[test]
    fn density_is_invariant(x in unit_ratio(), y in unit_ratio(), xf in 1e-9f64..1.0, yf in 0.0f64..1.0) {
        prop_assert!(invariance_residual(&DomainPoint::new(x, y)).unwrap().is_zero());
        prop_assert!(invariance_residual(&DomainPoint::new(xf, yf)).unwrap() < 1e-12);
    }

    #[test]
    fn contraction(x in unit_ratio(), y in unit_ratio(), z in unit_ratio()) {
        prop_assume!(step_t(&DomainPoint::new(x.clone(), y.clone())).is_ok_and(|p| !p.x.is_zero()));
        let (d1, d2) = contraction_check(&x, &y, &z).unwrap();
        let d0 = (&z - &y).abs();
        prop_assert!(d1 <= d0);
        prop_assert!(d2 * BigRational::from_integer(2.into()) <= d0);
    }

    #[test]
    fn criterion_matches_envelope(theta in exact_theta()) {
        let seq = complete_sequence(&theta, 40).unwrap();
        let env = flags_via_envelope(&theta, &seq).unwrap();
        let crit = flags_via_criterion(&theta, 40).unwrap();
        prop_assert!(crit.mismatches(&env).is_empty());
        prop_assert_eq!(crit.consecutive_false(), None);
        prop_assert_eq!(env.consecutive_false(), None);
        prop_assert_eq!(env.flags[0], Some(true));
        if seq.last().unwrap().exact.as_ref().unwrap().is_zero() {
            prop_assert_eq!(env.flags.last().copied().flatten(), Some(true));
        }
    }

    #[test]
    fn skipped_vectors_have_unit_successor(theta in exact_theta()) {
        let seq = complete_sequence(&theta, 40).unwrap();
        let crit = flags_via_criterion(&theta, 40).unwrap();
        for (k, f) in crit.flags.iter().enumerate() {
            if *f == Some(false) && k + 1 < seq.len() {
                prop_assert_eq!(&seq[k + 1].q, &(&seq[k - 1].q + &seq[k].q));
                prop_assert_eq!(&seq[k + 1].p, &(&seq[k - 1].p + &seq[k].p));
            }
        }
    }

    #[test]
    fn breakpoints_increase(theta in exact_theta()) {
        let seq = complete_sequence(&theta, 30).unwrap();
        let env = envelope(&theta, &seq).unwrap();
        // exact crossing of the lines delta * v1^2 + q^2 at consecutive hull points
        let delta = |l: usize, r: usize| {
            let (vl, vr) = (seq[l].exact.as_ref().unwrap(), seq[r].exact.as_ref().unwrap());
            let rise = QuadraticReal::from_int(&seq[r].q * &seq[r].q - &seq[l].q * &seq[l].q);
            rise.checked_div(&(&(vl * vl) - &(vr * vr))).unwrap()
        };
        for w in env.breakpoints.windows(2) {
            prop_assert_eq!(w[0].right_index, w[1].left_index);
            prop_assert!(w[0].s_value <= w[1].s_value);
            let (d0, d1) = (delta(w[0].left_index, w[0].right_index), delta(w[1].left_index, w[1].right_index));
            prop_assert!(d0.cmp_value(&d1).is_lt());
        }
    }
}
