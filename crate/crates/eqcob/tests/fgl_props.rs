use eqcob::{FormalGroupLaw, TruncatedSeries};
use proptest::prelude::*;

const D: usize = 8;

fn law() -> &'static FormalGroupLaw {
    use std::sync::OnceLock;
    static L: OnceLock<FormalGroupLaw> = OnceLock::new();
    L.get_or_init(|| FormalGroupLaw::universal(D))
}

#[test]
fn commutativity_and_unit() {
    let f = law();
    let u = TruncatedSeries::var(0, 2, D);
    let v = TruncatedSeries::var(1, 2, D);
    assert_eq!(f.fgl_sum(&u, &v).unwrap(), f.fgl_sum(&v, &u).unwrap());
    assert_eq!(f.fgl_sum(&u, &TruncatedSeries::zero(2, D)).unwrap(), u);
    let w = TruncatedSeries::var(0, 1, D);
    assert!(f.fgl_sum(&w, &f.fgl_inverse(&w).unwrap()).unwrap().is_zero());
}

#[test]
fn rational_division_inverts_multiples() {
    let f = law();
    let u = TruncatedSeries::var(0, 1, D);
    for b in 2..=4 {
        let g = f.fgl_divide(b, &f.fgl_multiple(b, &u).unwrap()).unwrap();
        assert_eq!(g, u, "b = {b}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn multiples_compose(a in -4i64..=4, b in -4i64..=4) {
        let f = law();
        let u = TruncatedSeries::var(0, 1, D);
        let ab = f.fgl_multiple(a * b, &u).unwrap();
        prop_assert_eq!(f.fgl_multiple(a, &f.fgl_multiple(b, &u).unwrap()).unwrap(), ab);
    }

    #[test]
    fn multiples_are_homomorphisms(a in -4i64..=4) {
        let f = law();
        let u = TruncatedSeries::var(0, 2, D);
        let v = TruncatedSeries::var(1, 2, D);
        let left = f.fgl_multiple(a, &f.fgl_sum(&u, &v).unwrap()).unwrap();
        let right = f.fgl_sum(&f.fgl_multiple(a, &u).unwrap(), &f.fgl_multiple(a, &v).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn rho_times_u(
        n in prop::sample::select(vec![-3i64, -2, -1, 1, 2, 3]),
        m in prop::sample::select(vec![1i64, 2, 3]),
    ) {
        let f = law();
        let u = TruncatedSeries::var(0, 1, D);
        let left = f.rho_series(n, m).unwrap().mul(&u);
        let right = f.fgl_multiple(n, &f.fgl_divide(m, &u).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }
}
