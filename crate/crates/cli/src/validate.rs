//! Oracle comparisons behind `rgg validate`.

use serde_json::{json, Value};

use rgg_core::distance::joint_pdf3_box_mass;
use rgg_core::graph::EdgeVector;
use rgg_core::quadrature::integrate_1d;
use rgg_core::{
    distance_histogram3, estimate_pmf, joint_pdf3, joint_pdf3_via_conditioning, pair_distance_histogram, pair_pdf,
    pmf_n3, triangle_quantities, Disk, McSettings, Model, Quad, Result, Sides,
};

/// Cells with at least this many expected samples take part in histogram checks.
pub const MIN_EXPECTED: f64 = 100.0;
/// Allowed deviation in standard deviations, `|O - E| <= 4 sqrt(E)`.
pub const SIGMAS: f64 = 4.0;
/// Fraction of tested cells that must be within [`SIGMAS`].
pub const REQUIRED_FRACTION: f64 = 0.99;
pub const CONDITIONING_REL_TOL: f64 = 1e-6;
pub const PMF_SUM_TOL: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub worst_deviation: f64,
    pub detail: Value,
}

impl Check {
    fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "pass": self.pass,
            "worst_deviation": self.worst_deviation,
            "detail": self.detail,
        })
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub target: &'static str,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self, settings: Value) -> Value {
        json!({
            "target": self.target,
            "pass": self.pass(),
            "checks": self.checks.iter().map(Check::to_json).collect::<Vec<_>>(),
            "settings": settings,
        })
    }
}

/// Observed against expected counts, for the cells with enough expected mass.
#[derive(Debug, Clone, Copy, Default)]
pub struct CountComparison {
    pub tested: usize,
    pub within: usize,
    pub worst_sigmas: f64,
}

impl CountComparison {
    pub fn add(&mut self, observed: u64, expected: f64) {
        if expected < MIN_EXPECTED {
            return;
        }
        let z = (observed as f64 - expected).abs() / expected.sqrt();
        self.tested += 1;
        self.within += usize::from(z <= SIGMAS);
        self.worst_sigmas = self.worst_sigmas.max(z);
    }

    pub fn fraction(&self) -> f64 {
        if self.tested == 0 {
            0.0
        } else {
            self.within as f64 / self.tested as f64
        }
    }

    pub fn pass(&self) -> bool {
        self.tested > 0 && self.fraction() >= REQUIRED_FRACTION
    }

    fn into_check(self, name: &'static str) -> Check {
        Check {
            name,
            pass: self.pass(),
            worst_deviation: self.worst_sigmas,
            detail: json!({
                "cells_tested": self.tested,
                "cells_within": self.within,
                "fraction_within": self.fraction(),
                "required_fraction": REQUIRED_FRACTION,
                "sigmas": SIGMAS,
                "min_expected": MIN_EXPECTED,
            }),
        }
    }
}

/// Probability of each `bins^3` cell of `[0, D]^3` under the joint side-length density.
pub fn expected_cell_masses(domain: &Disk, bins: usize, quad: &Quad) -> Result<Vec<f64>> {
    let h = domain.diameter() / bins as f64;
    let mut mass = vec![0.0; bins * bins * bins];
    for i in 0..bins {
        for j in i..bins {
            for k in j..bins {
                let lo = [i, j, k].map(|b| b as f64 * h);
                let est = joint_pdf3_box_mass(domain, lo, lo.map(|x| x + h), quad)?;
                // The density is symmetric in its arguments.
                for [a, b, c] in [[i, j, k], [i, k, j], [j, i, k], [j, k, i], [k, i, j], [k, j, i]] {
                    mass[(a * bins + b) * bins + c] = est.value;
                }
            }
        }
    }
    Ok(mass)
}

pub fn validate_pdf3(domain: &Disk, mc: &McSettings, bins: usize, quad: &Quad) -> Result<Report> {
    let hist = distance_histogram3(domain, mc, bins, false)?;
    let mass = expected_cell_masses(domain, bins, quad)?;
    let mut cmp = CountComparison::default();
    for (&observed, &m) in hist.counts.iter().zip(&mass) {
        cmp.add(observed, m * hist.total as f64);
    }
    let total: f64 = mass.iter().sum();
    Ok(Report {
        target: "pdf3",
        checks: vec![
            cmp.into_check("histogram_cells"),
            Check {
                name: "cell_masses_sum_to_one",
                pass: (total - 1.0).abs() <= 1e-3,
                worst_deviation: (total - 1.0).abs(),
                detail: json!({ "total": total }),
            },
        ],
    })
}

pub fn validate_pair(domain: &Disk, mc: &McSettings, bins: usize, quad: &Quad) -> Result<Report> {
    let hist = pair_distance_histogram(domain, mc, bins)?;
    let mut cmp = CountComparison::default();
    for (b, &observed) in hist.counts.iter().enumerate() {
        let (lo, hi) = hist.edges(b);
        let m = integrate_1d(|r| pair_pdf(r, domain).unwrap_or(0.0), lo, hi, quad)?.value;
        cmp.add(observed, m * hist.total as f64);
    }
    Ok(Report {
        target: "pair",
        checks: vec![cmp.into_check("histogram_bins")],
    })
}

/// Triples on the `points^3` grid of cell centres that form a proper triangle.
pub fn conditioning_grid(domain: &Disk, points: usize) -> Vec<Sides> {
    let h = domain.diameter() / points as f64;
    let axis: Vec<f64> = (0..points).map(|k| (k as f64 + 0.5) * h).collect();
    let mut out = Vec::new();
    for &a in &axis {
        for &b in &axis {
            for &c in &axis {
                if let Ok(s) = Sides::new(a, b, c) {
                    if !triangle_quantities(&s).is_degenerate() {
                        out.push(s);
                    }
                }
            }
        }
    }
    out
}

/// Quadrature settings for the one-dimensional conditioning integral.
pub fn conditioning_quad(domain: &Disk) -> Quad {
    Quad::with_tolerances(1e-14 / domain.diameter().powi(3), 1e-11)
}

pub fn validate_condpdf(domain: &Disk) -> Result<Report> {
    let quad = conditioning_quad(domain);
    let grid = conditioning_grid(domain, 10);
    let mut worst = 0.0f64;
    let mut failures = 0usize;
    for s in &grid {
        let closed = joint_pdf3(s, domain).density;
        let via = joint_pdf3_via_conditioning(s, domain, &quad)?;
        let rel = if closed == 0.0 {
            via.abs()
        } else {
            ((via - closed) / closed).abs()
        };
        worst = worst.max(rel);
        failures += usize::from(rel.is_nan() || rel > CONDITIONING_REL_TOL);
    }
    Ok(Report {
        target: "condpdf",
        checks: vec![Check {
            name: "conditioning_equals_closed_form",
            pass: failures == 0,
            worst_deviation: worst,
            detail: json!({
                "triples": grid.len(),
                "failures": failures,
                "relative_tolerance": CONDITIONING_REL_TOL,
            }),
        }],
    })
}

pub fn validate_pmf3(model: &Model, domain: &Disk, mc: &McSettings, quad: &Quad) -> Result<Report> {
    let exact = pmf_n3(model, domain, quad)?;
    let sampled = estimate_pmf(3, model, domain, mc)?;
    let n = mc.samples as f64;

    let mut worst_z = 0.0f64;
    let mut outside = 0usize;
    for (&p, &q) in exact.probs.iter().zip(&sampled.probs) {
        let se = (p * (1.0 - p) / n).sqrt();
        let dev = (q - p).abs() - exact.error_estimate;
        let z = if se > 0.0 {
            dev.max(0.0) / se
        } else if dev > 0.0 {
            f64::INFINITY
        } else {
            0.0
        };
        worst_z = worst_z.max(z);
        outside += usize::from(z > SIGMAS);
    }

    let total = exact.total();
    let mut worst_asym = 0.0f64;
    for code in 0..8u64 {
        let g = EdgeVector::from_code(3, code)?;
        for perm in [[0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
            let h = g.relabel(&perm)?.code().expect("three edges fit a code");
            worst_asym = worst_asym.max((exact.probs[code as usize] - exact.probs[h as usize]).abs());
        }
    }

    Ok(Report {
        target: "pmf3",
        checks: vec![
            Check {
                name: "quadrature_matches_sampling",
                pass: outside == 0,
                worst_deviation: worst_z,
                detail: json!({ "entries_outside": outside, "sigmas": SIGMAS }),
            },
            Check {
                name: "sums_to_one",
                pass: (total - 1.0).abs() <= PMF_SUM_TOL,
                worst_deviation: (total - 1.0).abs(),
                detail: json!({ "total": total, "tolerance": PMF_SUM_TOL }),
            },
            Check {
                name: "relabelling_symmetry",
                pass: worst_asym <= exact.error_estimate,
                worst_deviation: worst_asym,
                detail: json!({ "tolerance": exact.error_estimate }),
            },
        ],
    })
}
