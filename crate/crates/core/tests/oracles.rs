//! Closed forms against sampling and against independent formulas.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use rgg_core::graph::EdgeVector;
use rgg_core::montecarlo::outcome_counts;
use rgg_core::{
    bound_chain, entropy, estimate_entropy, estimate_pmf, pmf_n2, pmf_n3, Disk, EntropyOptions, McSettings,
    MeasuredEntropy, Model, Provenance, Quad,
};

fn quad() -> Quad {
    Quad::with_tolerances(1e-8, 0.0)
}

/// CDF of the distance between two uniform points in the unit-diameter disk.
fn pair_cdf(x: f64) -> f64 {
    let s = (1.0 - x * x).sqrt();
    2.0 / std::f64::consts::PI * (-2.0 * x.powi(3) * s + 4.0 * x * x * x.acos() - x * s + x.asin())
}

fn rejection_point(rng: &mut ChaCha8Rng) -> (f64, f64) {
    loop {
        let (x, y) = (rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
        if x * x + y * y <= 0.25 {
            return (x, y);
        }
    }
}

#[test]
fn hard_disk_edge_probability_is_the_distance_cdf() {
    let disk = Disk::unit();
    for r0 in [0.05, 0.2, 0.5, 0.77, 0.99] {
        let p = pmf_n2(&Model::hard_disk(r0).unwrap(), &disk, &quad()).unwrap().probs[1];
        assert!((p - pair_cdf(r0)).abs() < 1e-8, "r0 = {r0}: {p} vs {}", pair_cdf(r0));
    }
}

#[test]
fn soft_three_node_pmf_matches_rejection_sampling() {
    let disk = Disk::unit();
    let model = Model::exponential_soft(0.35, 2.0).unwrap();
    let exact = pmf_n3(&model, &disk, &quad()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let n = 400_000;
    let mut counts = [0u64; 8];
    for _ in 0..n {
        let p = [0; 3].map(|_| rejection_point(&mut rng));
        let mut code = 0;
        for (k, (i, j)) in [(0, 1), (0, 2), (1, 2)].into_iter().enumerate() {
            let r = (p[i].0 - p[j].0).hypot(p[i].1 - p[j].1);
            let prob = (-(r / 0.35f64).powi(2)).exp();
            if rng.random::<f64>() < prob {
                code |= 1 << k;
            }
        }
        counts[code] += 1;
    }
    for (code, (&p, &c)) in exact.probs.iter().zip(&counts).enumerate() {
        let se = (p * (1.0 - p) / n as f64).sqrt();
        let z = (c as f64 / n as f64 - p).abs() / se;
        assert!(
            z < 4.5,
            "outcome {code}: exact {p}, sampled {}, {z:.2} sigma",
            c as f64 / n as f64
        );
    }
}

#[test]
fn library_sampler_agrees_with_quadrature() {
    let disk = Disk::unit();
    let model = Model::hard_disk(0.45).unwrap();
    let exact = pmf_n3(&model, &disk, &quad()).unwrap();
    let mc = McSettings::new(400_000, 3, 2).unwrap();
    let est = estimate_pmf(3, &model, &disk, &mc).unwrap();
    for (&p, &q) in exact.probs.iter().zip(&est.probs) {
        let se = (p * (1.0 - p) / mc.samples as f64).sqrt();
        assert!((p - q).abs() < 4.5 * se, "{p} vs {q}");
    }
    let h_exact = entropy(&exact);
    let h_mc = estimate_entropy(3, &model, &disk, &mc, &EntropyOptions::default()).unwrap();
    assert!(
        (h_mc.bits - h_exact).abs() < 4.5 * h_mc.std_error,
        "{} vs {h_exact}",
        h_mc.bits
    );
}

#[test]
fn counts_are_deterministic_and_worker_splits_are_homogeneous() {
    let disk = Disk::unit();
    let model = Model::hard_disk(0.5).unwrap();
    let one = McSettings::new(200_000, 17, 1).unwrap();
    let four = McSettings::new(200_000, 17, 4).unwrap();
    let a = outcome_counts(4, &model, &disk, &one).unwrap();
    assert_eq!(a, outcome_counts(4, &model, &disk, &one).unwrap());
    let b = outcome_counts(4, &model, &disk, &four).unwrap();
    assert_eq!(b, outcome_counts(4, &model, &disk, &four).unwrap());
    assert_ne!(a, b);

    // Two-sample chi-square over outcomes seen at least 20 times in total.
    let mut stat = 0.0;
    let mut cells = 0;
    for (&x, &y) in a.iter().zip(&b) {
        let t = (x + y) as f64;
        if t >= 20.0 {
            let e = t / 2.0;
            stat += (x as f64 - e).powi(2) / e + (y as f64 - e).powi(2) / e;
            cells += 1;
        }
    }
    let p = 1.0 - ChiSquared::new((cells - 1) as f64).unwrap().cdf(stat);
    assert!(p > 1e-4, "chi2 = {stat} on {} dof, p = {p}", cells - 1);
}

#[test]
fn entropy_standard_error_shrinks_like_root_n() {
    let disk = Disk::unit();
    let model = Model::hard_disk(0.5).unwrap();
    let opts = EntropyOptions {
        miller_madow: true,
        bootstrap: 400,
    };
    let small = estimate_entropy(4, &model, &disk, &McSettings::new(100_000, 5, 1).unwrap(), &opts).unwrap();
    let large = estimate_entropy(4, &model, &disk, &McSettings::new(200_000, 5, 1).unwrap(), &opts).unwrap();
    let ratio = large.std_error / small.std_error;
    assert!((ratio - 0.5f64.sqrt()).abs() < 0.2 * 0.5f64.sqrt(), "ratio {ratio}");
}

#[test]
fn sampled_four_node_pmf_is_relabelling_symmetric() {
    let disk = Disk::unit();
    let model = Model::hard_disk(0.5).unwrap();
    let mc = McSettings::new(500_000, 8, 1).unwrap();
    let pmf = estimate_pmf(4, &model, &disk, &mc).unwrap();
    let n = mc.samples as f64;
    let perms = [[1, 0, 2, 3], [0, 2, 1, 3], [0, 1, 3, 2], [3, 1, 2, 0]];
    for code in 0..64u64 {
        let g = EdgeVector::from_code(4, code).unwrap();
        for perm in perms {
            let h = g.relabel(&perm).unwrap().code().unwrap();
            let (p, q) = (pmf.probs[code as usize], pmf.probs[h as usize]);
            let m = (p + q) / 2.0;
            // Difference of two (nearly independent) proportions.
            let se = (2.0 * m * (1.0 - m) / n).sqrt().max(1.0 / n);
            assert!((p - q).abs() < 5.0 * se, "{code} vs {h}: {p} {q}");
        }
    }
}

#[test]
fn five_node_entropy_respects_the_three_node_bound() {
    let disk = Disk::unit();
    for r0 in [0.3, 0.7] {
        let model = Model::hard_disk(r0).unwrap();
        let mut values = std::collections::BTreeMap::new();
        values.insert(
            2,
            MeasuredEntropy::new(
                entropy(&pmf_n2(&model, &disk, &quad()).unwrap()),
                Provenance::Quadrature,
                1e-6,
            ),
        );
        values.insert(
            3,
            MeasuredEntropy::new(
                entropy(&pmf_n3(&model, &disk, &quad()).unwrap()),
                Provenance::Quadrature,
                1e-6,
            ),
        );
        let h5 = estimate_entropy(
            5,
            &model,
            &disk,
            &McSettings::new(300_000, 2, 1).unwrap(),
            &EntropyOptions::default(),
        )
        .unwrap();
        values.insert(
            5,
            MeasuredEntropy::new(h5.bits, Provenance::MonteCarlo, 3.0 * h5.std_error),
        );
        let chain = bound_chain(5, &values).unwrap();
        assert!(chain.warnings.is_empty(), "{:?}", chain.warnings);
        assert_eq!(chain.tightest().unwrap().m, 5);
        assert!(chain.entry(3).unwrap().bound <= chain.entry(2).unwrap().bound);
    }
}
