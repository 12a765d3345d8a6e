use eqcob::lazard::qf;
use eqcob::{LazardCoefficient, MMono, TMono, TruncatedSeries};
use proptest::prelude::*;

type RawTerm = (Vec<u8>, i64, i64, u8);

fn build(nvars: usize, order: usize, raw: &[RawTerm], homogeneous: Option<i64>) -> TruncatedSeries {
    let mut s = TruncatedSeries::zero(nvars, order);
    for (e, n, d, m) in raw {
        let exps: Vec<u8> = e.iter().take(nvars).copied().collect();
        let t = TMono::new(exps);
        if t.degree() > order {
            continue;
        }
        // m = 0 means a rational coefficient, otherwise a power of m_1 or m_k
        let mono = match homogeneous {
            Some(deg) => {
                let w = t.degree() as i64 - deg;
                if w < 0 {
                    continue;
                }
                if w == 0 { MMono::one() } else { MMono::var(w as usize, 1) }
            }
            None if *m == 0 => MMono::one(),
            None => MMono::var(*m as usize, 1),
        };
        s.add_term(&t, &LazardCoefficient::monomial(mono, qf(*n, *d)));
    }
    s
}

fn raw_terms() -> impl Strategy<Value = Vec<RawTerm>> {
    prop::collection::vec((prop::collection::vec(0u8..4, 4), -5i64..=5, 1i64..=3, 0u8..3), 0..6)
}

fn case() -> impl Strategy<Value = (usize, usize, Vec<RawTerm>, Vec<RawTerm>, Vec<RawTerm>)> {
    (1usize..=4, 3usize..=8, raw_terms(), raw_terms(), raw_terms())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_axioms((r, d, a, b, c) in case()) {
        let (a, b, c) = (build(r, d, &a, None), build(r, d, &b, None), build(r, d, &c, None));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.sub(&a), TruncatedSeries::zero(r, d));
        prop_assert_eq!(a.mul(&TruncatedSeries::one(r, d)), a);
    }

    #[test]
    fn grading((r, d, a, b, _c) in case(), n in 0i64..3, m in 0i64..3) {
        let x = build(r, d, &a, Some(n));
        let y = build(r, d, &b, Some(m));
        prop_assert!(x.is_homogeneous(n) && y.is_homogeneous(m));
        prop_assert!(x.mul(&y).is_homogeneous(n + m));
    }

    #[test]
    fn compositional_inverse_round_trip(
        lin in prop::sample::select(vec![-3i64, -2, -1, 1, 2, 3]),
        rest in prop::collection::vec((-4i64..=4, 0u8..3), 0..7),
        d in 3usize..=8,
    ) {
        let mut coeffs = vec![LazardCoefficient::zero(), LazardCoefficient::constant(qf(lin, 1))];
        for (c, m) in rest {
            let mono = if m == 0 { MMono::one() } else { MMono::var(m as usize, 1) };
            coeffs.push(LazardCoefficient::monomial(mono, qf(c, 1)));
        }
        let f = TruncatedSeries::univariate(coeffs, d);
        let g = TruncatedSeries::compositional_inverse(&f).unwrap();
        let u = TruncatedSeries::var(0, 1, d);
        prop_assert_eq!(TruncatedSeries::compose_univariate(&g, &f).unwrap(), u.clone());
        prop_assert_eq!(TruncatedSeries::compose_univariate(&f, &g).unwrap(), u);
    }

    #[test]
    fn json_round_trip((r, d, a, _b, _c) in case()) {
        let s = build(r, d, &a, None);
        prop_assert_eq!(TruncatedSeries::from_json(&s.to_json(), r, d).unwrap(), s);
    }
}
