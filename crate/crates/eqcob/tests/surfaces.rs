use eqcob::gkm::{
    check_membership, surface_combine, surface_decompose, surface_generators, CobordismTuple, GkmDatum, P2Model,
    SurfaceComponent, SurfaceKind,
};
use eqcob::lazard::q;
use eqcob::{Character, FormalGroupLaw, LazardCoefficient, TMono, TruncatedSeries};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn kinds() -> Vec<SurfaceKind> {
    let mut k = vec![SurfaceKind::P2(P2Model::V0V1), SurfaceKind::P2(P2Model::V2), SurfaceKind::F0];
    k.extend((1..=4).map(SurfaceKind::Fn));
    k
}

fn component(kind: SurfaceKind, alpha: &Character) -> SurfaceComponent {
    let names = if kind.num_points() == 3 { vec!["x", "y", "z"] } else { vec!["w", "x", "y", "z"] };
    SurfaceComponent { kind, points: names.into_iter().map(String::from).collect(), alpha: alpha.clone() }
}

fn random_coeff(rng: &mut ChaCha8Rng, order: usize) -> TruncatedSeries {
    let mut s = TruncatedSeries::zero(2, order);
    for d in 0..=3u8 {
        for i in 0..=d {
            let c: i64 = rng.gen_range(-3..=3);
            if c == 0 {
                continue;
            }
            let lz = if rng.gen_bool(0.2) {
                LazardCoefficient::m(1).scale(&q(c))
            } else {
                LazardCoefficient::constant(q(c))
            };
            s.add_term(&TMono::new(vec![i, d - i]), &lz);
        }
    }
    s
}

#[test]
fn generators_are_members() {
    let law = FormalGroupLaw::universal(6);
    let alpha = Character::from_ints(&[1, -1]);
    for kind in kinds() {
        let s = component(kind, &alpha);
        let d = GkmDatum::from_component(2, &s).unwrap();
        for g in surface_generators(&law, kind, &alpha) {
            let f = CobordismTuple(s.points.iter().cloned().zip(g).collect());
            assert!(check_membership(&law, &d, &f).unwrap().is_member(), "{kind}");
        }
    }
}

#[test]
fn decomposition_round_trip() {
    let order = 8;
    let law = FormalGroupLaw::universal(order + 3);
    let alpha = Character::from_ints(&[1, 0]);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for kind in kinds() {
        let s = component(kind, &alpha);
        for _ in 0..5 {
            let coeffs: Vec<_> = (0..kind.num_points()).map(|_| random_coeff(&mut rng, law.order())).collect();
            let f = surface_combine(&law, kind, &alpha, &coeffs).unwrap();
            let dec = surface_decompose(&law, &s, &f).unwrap();
            assert!(dec.certified_order >= order);
            for (a, b) in dec.coefficients.iter().zip(&coeffs) {
                assert!(a.eq_through(b, order), "{kind}");
            }
        }
    }
}

#[test]
fn non_member_is_rejected() {
    let law = FormalGroupLaw::universal(6);
    let alpha = Character::from_ints(&[1, 0]);
    let s = component(SurfaceKind::Fn(2), &alpha);
    let t = TruncatedSeries::var(0, 2, 6);
    let one = TruncatedSeries::one(2, 6);
    let z = TruncatedSeries::zero(2, 6);
    assert!(surface_decompose(&law, &s, &[t.clone(), z.clone(), z.clone(), z.clone()]).is_err());
    assert!(surface_decompose(&law, &s, &[one, z.clone(), z.clone(), z]).is_err());
}
