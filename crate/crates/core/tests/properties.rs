use proptest::prelude::*;

use manin::arith::divisors;
use manin::characters::{enumerate_chars, FiniteFieldChar};
use manin::dataset::{parse_record, MeasuredRecord};
use manin::ext::{q, ExtRational};
use manin::gauss::{finite_field_gauss, gauss_bruteforce, gauss_closed_form, root_of_unity_certificate, stickelberger_val};
use manin::manin::{integrality_check, localglobal_combine, newform_cusp_bound, weight2_bound, FactoredInt};
use manin::modcurve::{cusp_count, integrality_threshold, total_cusps, width};
use manin::padic::valuation_of_cyc;
use manin::reps::representatives;
use manin::whittaker::atkin_lehner_reflect;

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7, 11, 13])
}

fn levels() -> impl Strategy<Value = (u64, u32, u32)> {
    (prime(), 0..12u32).prop_flat_map(|(p, n)| (Just(p), Just(n), 0..=n))
}

proptest! {
    #[test]
    fn ext_rational_round_trip(n in -1000i64..1000, d in 1i64..1000) {
        let x = ExtRational::frac(n, d);
        prop_assert_eq!(x.to_string().parse::<ExtRational>().unwrap(), x);
    }

    #[test]
    fn factored_round_trip(n in 1u64..1_000_000) {
        let f = FactoredInt::from_u64(n).unwrap();
        prop_assert_eq!(f.value(), n as u128);
        prop_assert_eq!(f.to_string().parse::<FactoredInt>().unwrap(), f);
    }

    #[test]
    fn weight2_matches_general((p, n, l) in levels()) {
        prop_assert_eq!(weight2_bound(p, n, l).unwrap(), newform_cusp_bound(p, 2, n, l).unwrap());
    }

    #[test]
    fn bound_symmetry((p, n, l) in levels(), k in prop::sample::select(vec![2u32, 4, 6, 8])) {
        let shifted = |l: u32| {
            let w = n as i64 - (2 * l).min(n) as i64;
            newform_cusp_bound(p, k, n, l).unwrap() + ExtRational::frac(k as i64 * w, 2)
        };
        prop_assert_eq!(shifted(l), shifted(n - l));
    }

    #[test]
    fn bound_dominates_threshold((p, n, l) in levels()) {
        prop_assert!(weight2_bound(p, n, l).unwrap() >= integrality_threshold(p, n, l).unwrap());
        prop_assert!(integrality_threshold(p, n, l).unwrap() <= ExtRational::zero());
        prop_assert!(integrality_check(p, n).unwrap().holds);
    }

    #[test]
    fn cusps_partition(n in 1u64..200_000) {
        let divs = divisors(n);
        prop_assert_eq!(divs.iter().map(|&l| cusp_count(n, l).unwrap()).sum::<u64>(), total_cusps(n));
        for &l in &divs {
            prop_assert_eq!(n % width(n, l).unwrap(), 0);
        }
    }

    #[test]
    fn reflection_involution(a in 1u32..10, t in -25i64..6, l in 0u32..10) {
        prop_assume!(l <= a);
        let (t2, l2) = atkin_lehner_reflect(t, l, a);
        prop_assert_eq!(l2, a - l);
        prop_assert_eq!(atkin_lehner_reflect(t2, l2, a), (t, l));
    }

    #[test]
    fn record_round_trip(label in "[0-9]{1,4}[a-z]", e in 0u32..8, vl in 0u32..8, num in -20i64..20, den in 1i64..5) {
        prop_assume!(vl <= e);
        let n = 3u64.pow(e) * 5;
        let rec = MeasuredRecord { label, n, k: 2, p: 3, val_l: vl, measured: ExtRational::Fin(q(num, den)) };
        let line = rec.to_json_line();
        let back = parse_record(&line).unwrap();
        prop_assert_eq!(&back, &rec);
        prop_assert_eq!(back.to_json_line(), line);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn local_global_dominates(p in prop::sample::select(vec![2u64, 3, 5, 7]), n in 1u32..9, k in prop::sample::select(vec![2u32, 4, 6])) {
        let svs = [Some(q(0, 1)), Some(q(k as i64 - 1, 2))];
        for pi in representatives(p, n, &svs).unwrap() {
            for l in 0..=n {
                prop_assert!(localglobal_combine(&pi, k, n, l).unwrap() >= newform_cusp_bound(p, k, n, l).unwrap());
            }
        }
    }

    #[test]
    fn wild_gauss_sums(p in prop::sample::select(vec![2u64, 3, 5]), a in 2u32..4, idx in any::<prop::sample::Index>()) {
        let chars: Vec<_> = enumerate_chars(p, a).into_iter().filter(|c| c.conductor() == a).collect();
        let chi = idx.get(&chars);
        prop_assert_eq!(gauss_closed_form(chi).unwrap().value, gauss_bruteforce(chi, -(a as i64)).value);
        prop_assert!(root_of_unity_certificate(chi).is_ok());
        let v = gauss_bruteforce(chi, -(a as i64)).valuation().unwrap();
        prop_assert_eq!(v, ExtRational::frac(2 - a as i64, 2));
    }

    #[test]
    fn conductors_are_submultiplicative(p in prop::sample::select(vec![2u64, 3, 5]), n in 1u32..4, i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let chars = enumerate_chars(p, n);
        let (x, y) = (i.get(&chars), j.get(&chars));
        prop_assert!(x.mul(y).conductor() <= x.conductor().max(y.conductor()));
        prop_assert_eq!(x.conductor(), x.conductor_by_scan());
        prop_assert_eq!(x.inv().conductor(), x.conductor());
    }

    #[test]
    fn stickelberger(p in prop::sample::select(vec![2u64, 3, 5]), f in 1u32..3, alpha in any::<u64>()) {
        let chi = FiniteFieldChar::new(p, f, alpha % (p.pow(f) - 1)).unwrap();
        let g = finite_field_gauss(&chi).unwrap();
        prop_assert_eq!(valuation_of_cyc(p, &g).unwrap(), stickelberger_val(&chi));
    }
}
