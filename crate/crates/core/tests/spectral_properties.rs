use proptest::prelude::*;

use crowdperm::model::ResponseMatrix;
use crowdperm::scenarios::{build, ScenarioKind, ScenarioSpec, TruthMode};
use crowdperm::spectral::{
    gram, ordering_from_vector, top_eigenvector, DEFAULT_MAX_ITER, DEFAULT_TOL,
};
use crowdperm::{sample_responses, Error};

fn response_matrix() -> impl Strategy<Value = ResponseMatrix> {
    (1usize..7, 1usize..10).prop_flat_map(|(n, d)| {
        prop::collection::vec(-1i8..=1, n * d)
            .prop_map(move |e| ResponseMatrix::new(n, d, e).unwrap())
    })
}

proptest! {
    #[test]
    fn postconditions_hold(y in response_matrix()) {
        let top = match top_eigenvector(&y, DEFAULT_TOL, DEFAULT_MAX_ITER) {
            Ok(t) => t,
            // Repeated top eigenvalues are legitimate non-convergence cases.
            Err(Error::EigenNotConverged { .. }) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let u = &top.vector;
        let norm: f64 = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        prop_assert!((norm - 1.0).abs() <= 1e-12);
        let pos: f64 = u.iter().filter(|&&x| x > 0.0).map(|x| x * x).sum();
        let neg: f64 = u.iter().filter(|&&x| x < 0.0).map(|x| x * x).sum();
        prop_assert!(pos >= neg);
        if !top.degenerate {
            let n = y.n();
            let g = gram(&y);
            let lambda = top.eigenvalue;
            let res: f64 = (0..n)
                .map(|a| {
                    let gu: f64 = (0..n).map(|b| g[a * n + b] * u[b]).sum();
                    (gu - lambda * u[a]).powi(2)
                })
                .sum::<f64>()
                .sqrt();
            prop_assert!(res <= DEFAULT_TOL * lambda.max(1.0) * 1.01);
        }
    }

    #[test]
    fn ordering_ignores_positive_scale(u in prop::collection::vec(-5.0f64..5.0, 1..20), c in 0.01f64..100.0) {
        let scaled: Vec<f64> = u.iter().map(|x| x * c).collect();
        prop_assert_eq!(ordering_from_vector(&u), ordering_from_vector(&scaled));
    }
}

#[test]
fn tight_tolerance_converges_on_scenarios() {
    for kind in [
        ScenarioKind::Easy,
        ScenarioKind::FewSmart,
        ScenarioKind::Adversarial,
    ] {
        let inst = build(&ScenarioSpec::new(
            kind,
            300,
            150,
            1.0,
            TruthMode::Random(3),
        ))
        .unwrap();
        let y = sample_responses(&inst, 4);
        let loose = top_eigenvector(&y, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        let tight = top_eigenvector(&y, 1e-12, DEFAULT_MAX_ITER).unwrap();
        let dev = loose
            .vector
            .iter()
            .zip(&tight.vector)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(dev < 1e-8, "{kind}: {dev}");
    }
}

#[test]
fn gram_is_thread_count_independent() {
    let inst = build(&ScenarioSpec::new(
        ScenarioKind::Easy,
        400,
        60,
        0.7,
        TruthMode::Random(1),
    ))
    .unwrap();
    let y = sample_responses(&inst, 2);
    let one = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let many = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap();
    let a = one.install(|| top_eigenvector(&y, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap());
    let b = many.install(|| top_eigenvector(&y, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap());
    assert_eq!(a, b);
}
