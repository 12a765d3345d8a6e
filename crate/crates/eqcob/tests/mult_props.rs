use std::collections::BTreeMap;

use eqcob::mult::{singular_class_pullback, subvariety_class, TangentData, WeightTag};
use eqcob::{Character, FormalGroupLaw};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn weight(rng: &mut ChaCha8Rng) -> Character {
    loop {
        let c = Character::from_ints(&[rng.gen_range(-2..=2), rng.gen_range(-2..=2)]);
        if !c.is_zero() {
            return c;
        }
    }
}

/// A smooth class at a point, once from its normal weights and once as a
/// one-point fiber of the identity resolution.
#[test]
fn smooth_and_fiber_routes_agree() {
    let law = FormalGroupLaw::universal(6);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let sub: Vec<Character> = (0..rng.gen_range(0..=2)).map(|_| weight(&mut rng)).collect();
        let normal: Vec<Character> = (0..rng.gen_range(1..=3)).map(|_| weight(&mut rng)).collect();
        let mut amb = sub.clone();
        amb.extend(normal.iter().cloned());
        let ambient = TangentData::new(WeightTag::Tangent, 2, BTreeMap::from([("x".to_string(), amb)])).unwrap();
        let n = TangentData::new(WeightTag::Normal, 2, BTreeMap::from([("x".to_string(), normal)])).unwrap();
        let fiber = TangentData::new(WeightTag::Fiber, 2, BTreeMap::from([("y".to_string(), sub)])).unwrap();
        let smooth = subvariety_class(&law, &n, &["x".to_string()]).unwrap();
        let p = singular_class_pullback(&law, "x", &ambient, &fiber).unwrap();
        assert_eq!(&p.cleared.unwrap(), smooth.get("x").unwrap());
    }
}

#[test]
fn tangent_data_json_round_trip() {
    let t = eqcob::fixtures::ig25_tangent().unwrap();
    assert_eq!(TangentData::from_json(&t.to_json()).unwrap(), t);
    assert!(t.weights.values().all(|w| w.len() == 5));
}
