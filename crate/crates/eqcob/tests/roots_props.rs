use std::collections::BTreeSet;

use eqcob::lazard::{q, QExt};
use eqcob::roots::{pairing, reflect, CartanType, RootSystem};

fn small_types() -> Vec<CartanType> {
    vec![
        CartanType::A(2),
        CartanType::A(3),
        CartanType::B(2),
        CartanType::B(3),
        CartanType::B(4),
        CartanType::C(2),
        CartanType::C(3),
        CartanType::C(4),
        CartanType::F4,
        CartanType::G2,
    ]
}

#[test]
fn reflections_are_involutions_fixing_exactly_the_orthogonal_weights() {
    for ty in small_types() {
        let rs = RootSystem::new(ty).unwrap();
        for a in rs.positive_roots() {
            for w in rs.fundamental_weights() {
                let s = reflect(a, w);
                assert_eq!(reflect(a, &s), *w, "{ty}");
                assert_eq!(s == *w, pairing(a, w).unwrap().is_zero(), "{ty}");
            }
            assert_eq!(reflect(a, a), a.iter().map(|x| -x).collect::<Vec<_>>());
        }
    }
}

#[test]
fn curves_join_reflected_points() {
    for (ty, i) in [
        (CartanType::G2, vec![1]),
        (CartanType::G2, vec![2]),
        (CartanType::C(3), vec![1, 2]),
        (CartanType::B(3), vec![2]),
        (CartanType::A(3), vec![]),
    ]
    .map(|(t, i)| (t, i.into_iter().collect::<BTreeSet<usize>>()))
    {
        let rs = RootSystem::new(ty).unwrap();
        let (pts, curves) = rs.curves(&i).unwrap();
        for c in &curves {
            assert_eq!(reflect(&c.root, &pts[c.u].vector), pts[c.v].vector);
            let k = pairing(&c.root, &pts[c.u].vector).unwrap();
            assert!(!k.is_zero());
            let expect: Vec<_> = c.root.iter().map(|x| x * &k).collect();
            assert_eq!(c.weight, expect);
            assert!(c.total_degree() > q(0));
        }
        // every point has dim G/P curves through it
        let dim = rs.positive_roots().len() - (rs.positive_roots().iter().filter(|r| {
            rs.simple_coords(r).iter().enumerate().all(|(k, x)| x.is_zero() || i.contains(&(k + 1)))
        }).count());
        for u in 0..pts.len() {
            assert_eq!(curves.iter().filter(|c| c.u == u || c.v == u).count(), dim, "{ty}");
        }
    }
}

#[test]
fn g2_points_are_pairwise_adjacent() {
    let rs = RootSystem::new(CartanType::G2).unwrap();
    let (pts, curves) = rs.curves(&[1].into()).unwrap();
    assert_eq!(curves.len(), pts.len() * (pts.len() - 1) / 2);
}

#[test]
fn degrees_are_levi_invariant() {
    let rs = RootSystem::new(CartanType::C(3)).unwrap();
    let i: BTreeSet<usize> = [2, 3].into();
    for a in rs.positive_roots() {
        let Ok(d) = rs.curve_degree(a, &i) else { continue };
        for k in &i {
            let mut b = reflect(&rs.simple_roots()[k - 1], a);
            if !rs.is_positive(&b) {
                b = b.iter().map(|x| -x).collect();
            }
            assert_eq!(rs.curve_degree(&b, &i).unwrap(), d);
        }
    }
}
