use std::time::Instant;

use eqcob::{FormalGroupLaw, TruncatedSeries};

#[test]
fn associativity_d8() {
    let start = Instant::now();
    let f = FormalGroupLaw::universal(8);
    let x = TruncatedSeries::var(0, 3, 8);
    let y = TruncatedSeries::var(1, 3, 8);
    let z = TruncatedSeries::var(2, 3, 8);
    let left = f.fgl_sum(&x, &f.fgl_sum(&y, &z).unwrap()).unwrap();
    let right = f.fgl_sum(&f.fgl_sum(&x, &y).unwrap(), &z).unwrap();
    assert_eq!(left, right);
    eprintln!("assoc: {:?}, terms {}", start.elapsed(), left.num_terms());
}
