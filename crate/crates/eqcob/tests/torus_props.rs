use eqcob::lazard::{q, qf};
use eqcob::torus::reduce_mod;
use eqcob::{Character, FormalGroupLaw, LazardCoefficient, LocalizedElement, TMono, TruncatedSeries};
use proptest::prelude::*;

const D: usize = 6;

fn law() -> &'static FormalGroupLaw {
    use std::sync::OnceLock;
    static L: OnceLock<FormalGroupLaw> = OnceLock::new();
    L.get_or_init(|| FormalGroupLaw::universal(D))
}

/// Rational characters of rank 2 with denominators at most 2.
fn character() -> impl Strategy<Value = Character> {
    (-4i64..=4, -4i64..=4, 1i64..=2, 1i64..=2)
        .prop_filter("nonzero", |(a, b, _, _)| *a != 0 || *b != 0)
        .prop_map(|(a, b, x, y)| Character::new(vec![qf(a, x), qf(b, y)]))
}

fn integral_character() -> impl Strategy<Value = Character> {
    (-3i64..=3, -3i64..=3)
        .prop_filter("nonzero", |(a, b)| *a != 0 || *b != 0)
        .prop_map(|(a, b)| Character::from_ints(&[a, b]))
}

fn series() -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec((0u8..3, 0u8..3, -3i64..=3, any::<bool>()), 0..5).prop_map(|raw| {
        let mut s = TruncatedSeries::zero(2, D);
        for (i, j, c, m) in raw {
            let lz = if m { LazardCoefficient::m(1).scale(&q(c)) } else { LazardCoefficient::constant(q(c)) };
            s.add_term(&TMono::new(vec![i, j]), &lz);
        }
        s
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn chern_is_a_homomorphism(a in character(), b in character()) {
        let f = law();
        prop_assume!(!a.add(&b).is_zero());
        prop_assert_eq!(f.chern(&a.add(&b)), f.fgl_sum(&f.chern(&a), &f.chern(&b)).unwrap());
        prop_assert_eq!(f.chern(&a.neg()), f.fgl_inverse(&f.chern(&a)).unwrap());
    }

    #[test]
    fn multiples_of_chern_powers_reduce_to_zero(chi in integral_character(), g in series(), k in 1u8..=2) {
        let f = law();
        let c = f.chern(&chi);
        let h = g.mul(&c.pow(k as usize));
        let r = reduce_mod(f, &h, &chi, k).unwrap();
        prop_assert!(r.vanishes());
    }

    #[test]
    fn rho_identity(
        chi in character(),
        nm in prop::sample::select(vec![(1i64, 2i64), (3, 2), (-3, 2), (2, 1)]),
    ) {
        let f = law();
        let (n, m) = nm;
        let c = f.chern(&chi);
        let left = f.rho(n, m, &c).unwrap().mul(&c);
        prop_assert_eq!(left, f.chern(&chi.scale(&qf(n, m))));
        let add = FormalGroupLaw::additive(D);
        prop_assert_eq!(add.rho(n, m, &add.chern(&chi)).unwrap(), TruncatedSeries::rational(qf(n, m), 2, D));
    }

    #[test]
    fn loc_eq_is_an_equivalence(x in series(), u in integral_character(), v in integral_character(), w in integral_character()) {
        let f = law();
        // a = x/c(u), b = x c(v)/(c(u) c(v)), c = x c(w)/(c(u) c(w))
        let a = LocalizedElement::new(x.clone(), vec![u.clone()]).unwrap();
        let b = LocalizedElement::new(x.mul(&f.chern(&v)), vec![u.clone(), v.clone()]).unwrap();
        let c = LocalizedElement::new(x.mul(&f.chern(&w)), vec![u.clone(), w.clone()]).unwrap();
        prop_assert!(a.loc_eq(f, &a).unwrap());
        prop_assert_eq!(a.loc_eq(f, &b).unwrap(), b.loc_eq(f, &a).unwrap());
        prop_assert!(a.loc_eq(f, &b).unwrap() && b.loc_eq(f, &c).unwrap() && a.loc_eq(f, &c).unwrap());
        let shifted = LocalizedElement::new(x.add(&TruncatedSeries::one(2, D)), vec![u.clone()]).unwrap();
        prop_assert!(!a.loc_eq(f, &shifted).unwrap());
    }

    #[test]
    fn clearing_a_multiple_recovers_it(x in series(), u in integral_character(), v in integral_character()) {
        let f = law();
        let num = x.mul(&f.chern(&u)).mul(&f.chern(&v));
        let e = LocalizedElement::new(num, vec![u, v]).unwrap();
        let back = e.clear_denominators(f).unwrap();
        prop_assert!(back.eq_through(&x, D - 2));
    }
}
