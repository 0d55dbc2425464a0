mod common;

use common::*;
use fracop_core::OperatorContext;
use rand::rngs::StdRng;
use rand::SeedableRng;

const SAMPLES: usize = 50;
const TOL: f64 = 1e-10;

fn check_fold(n: usize, seed: u64) {
    let mut rng = StdRng::seed_from_u64(seed);
    for triple in catalog_triples() {
        let label = triple.label.clone();
        let ctx = OperatorContext::new(triple);
        for _ in 0..SAMPLES {
            let f = random_function(&mut rng, n as f64);
            let (first, second) = fundamental_theorem_gaps(&ctx, &f, n);
            assert!(first <= TOL, "{label}, n={n}: D I f - f = {first:e} for {f:?}");
            assert!(
                second <= TOL,
                "{label}, n={n}: I D f - (f - P f) = {second:e} for {f:?}"
            );
        }
    }
}

#[test]
fn single_fold() {
    check_fold(1, 11);
}

#[test]
fn two_fold() {
    check_fold(2, 12);
}

#[test]
fn three_fold() {
    check_fold(3, 13);
}

#[test]
fn projector_of_polynomial_data() {
    // RL type: (I_k y)(0) picks the h_alpha coefficient
    let ctx = OperatorContext::new(triple(fracop_core::TripleKind::RlType { pair: power(0.4) }));
    let y = fracop_core::GeneralizedPowerSeries::h(0.4)
        .scale(3.0)
        .add(&fracop_core::GeneralizedPowerSeries::h(2.0));
    let p = ctx.projector(&y).unwrap();
    assert!((p.values[0] - 3.0).abs() < 1e-14);
    assert!(
        p.function
            .max_abs_diff(&fracop_core::GeneralizedPowerSeries::h(0.4).scale(3.0))
            < 1e-14
    );
}
