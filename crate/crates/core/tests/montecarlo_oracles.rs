use majorant_lab::montecarlo::{
    check_lower_bound_pap, check_lower_bound_product, check_selector_moment, run_trials, ExperimentSpec, Statistic,
};
use majorant_lab::randsets::{CurveKind, RandomSetModel};
use majorant_lab::trigpoly::{FrequencySet, NormPolicy};

/// `E Σ ξ_{n₁}ξ_{n₂}ξ_{n₃}ξ_{n₄}` over `n₁+n₂ = n₃+n₄` (componentwise) for
/// independent selectors of mean `tau` on `points`: each solution contributes
/// `tau^{#distinct points}`.
fn quadruple_expectation(points: &[Vec<i64>], tau: f64) -> f64 {
    let m = points.len();
    let mut total = 0.0;
    for i1 in 0..m {
        for i2 in 0..m {
            for i3 in 0..m {
                let target: Vec<i64> = (0..points[0].len())
                    .map(|c| points[i1][c] + points[i2][c] - points[i3][c])
                    .collect();
                let Some(i4) = points.iter().position(|p| *p == target) else { continue };
                let mut ids = vec![i1, i2, i3, i4];
                ids.sort_unstable();
                ids.dedup();
                total += tau.powi(ids.len() as i32);
            }
        }
    }
    total
}

fn assert_close_in_se(mean: f64, exact: f64, se: f64, what: &str) {
    assert!((mean - exact).abs() <= 4.0 * se, "{what}: mc {mean} vs exact {exact} (s.e. {se})");
}

#[test]
fn quartic_moment_matches_quadruple_count_in_1d() {
    let n = 64;
    let model = RandomSetModel::BernoulliSelector { n, delta: 0.5 };
    let c = check_lower_bound_product(&model, 4.0, 3000, 21, NormPolicy::ExactEven).unwrap();
    let points: Vec<Vec<i64>> = (1..=n as i64).map(|k| vec![k]).collect();
    let exact = quadruple_expectation(&points, 0.125);
    assert_close_in_se(c.report.mean, exact, c.report.std_error(), "1-d");
    assert!((0.1..=10.0).contains(&c.fitted_constant()));
}

#[test]
fn quartic_moment_matches_quadruple_count_on_the_parabola() {
    let n = 32;
    let delta = 0.5;
    let model = RandomSetModel::CurveEmbedding {
        base: Box::new(RandomSetModel::BernoulliSelector { n, delta }),
        kind: CurveKind::Parabola,
    };
    let c = check_lower_bound_product(&model, 4.0, 3000, 22, NormPolicy::ExactEven).unwrap();
    let points: Vec<Vec<i64>> = (1..=n as i64).map(|k| vec![k, k * k]).collect();
    let exact = quadruple_expectation(&points, (n as f64).powf(-delta));
    assert_close_in_se(c.report.mean, exact, c.report.std_error(), "parabola");
    assert!((0.05..=20.0).contains(&c.fitted_constant()));
}

#[test]
fn parabola_bound_at_n64_is_in_band() {
    let model = RandomSetModel::CurveEmbedding {
        base: Box::new(RandomSetModel::BernoulliSelector { n: 64, delta: 0.5 }),
        kind: CurveKind::Parabola,
    };
    let c = check_lower_bound_product(&model, 4.0, 200, 23, NormPolicy::ExactEven).unwrap();
    assert!((0.05..=20.0).contains(&c.fitted_constant()), "{}", c.fitted_constant());
}

/// Exact `E I_{4}` for a perturbed progression by enumerating every joint
/// choice of the window elements.
fn pap_quartic_expectation(l: u64, s: u64, a: u64, b: u64) -> f64 {
    let width = 2 * s + 1;
    let configs = width.pow(l as u32);
    let mut total = 0.0;
    for code in 0..configs {
        let mut c = code;
        let pts: Vec<Vec<i64>> = (1..=l)
            .map(|j| {
                let off = (c % width) as i64 - s as i64;
                c /= width;
                vec![(b + a * j) as i64 + off]
            })
            .collect();
        total += quadruple_expectation(&pts, 1.0);
    }
    total / configs as f64
}

#[test]
fn pap_quartic_moment_matches_enumeration() {
    let (l, s, a, b) = (4, 2, 6, 3);
    let model = RandomSetModel::PerturbedAp { n: b + a * l + s, l, s, a, b };
    let c = check_lower_bound_pap(&model, 4.0, 4000, 24, NormPolicy::ExactEven).unwrap();
    let exact = pap_quartic_expectation(l, s, a, b);
    assert_close_in_se(c.report.mean, exact, c.report.std_error(), "pap");
}

#[test]
fn selector_moments_match_binomial_oracle() {
    for (l, s, q) in [(4u64, 4u64, 2.0), (16, 8, 3.0), (8, 2, 5.0), (64, 16, 8.0)] {
        let n = l * s;
        let model = RandomSetModel::BlockUniform { n, l };
        let targets = FrequencySet::one_dim(n, (0..l).map(|j| (j * s + s) as i64)).unwrap();
        let c = check_selector_moment(&model, &targets, q, 5000, 25).unwrap();
        assert!(
            (c.empirical_root - c.exact_root).abs() <= 3.0 * c.std_error_root,
            "({l},{s},{q}): {} vs {}",
            c.empirical_root,
            c.exact_root
        );
        if (l, s, q) == (64, 16, 8.0) {
            assert!((c.empirical_root - c.exact_root).abs() <= 0.05 * c.exact_root);
        }
    }
}

#[test]
fn ci99_covers_tau_n_in_most_meta_runs() {
    let model = RandomSetModel::BernoulliSelector { n: 256, delta: 0.5 };
    let covered = (0..100u64)
        .filter(|&meta| {
            let r = run_trials(&ExperimentSpec::new(model.clone(), 2.0, Statistic::SetSize, 400, 1000 + meta)).unwrap();
            (r.mean - 16.0).abs() <= r.ci99_halfwidth
        })
        .count();
    assert!(covered >= 95, "{covered} of 100");
}
