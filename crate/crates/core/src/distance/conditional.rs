//! Conditioning on the largest centred enclosing diameter.
//!
//! Let `S_i` be the diameter of the smallest disk centred at the origin that
//! contains point `i`, and `S = max(S_1, S_2, S_3)`. Given `S = s`, one point
//! lies on the circle of diameter `s` and the other two are uniform inside it,
//! which makes the conditional joint density of the side lengths elementary.
//! Integrating it against the density of `S` recovers [`super::joint_pdf3`].

use crate::error::{Error, Result};
use crate::geometry::{quantities_sorted, DiskDomain, TriangleShape, TriangleSides, DEFAULT_DEGENERACY_EPS};
use crate::quadrature::{integrate_region, AxisLimits, QuadratureSettings, Region};
use crate::scalar::Scalar;

/// The conditioning value `s` of the largest centred enclosing diameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalContext<T> {
    s: T,
}

impl<T: Scalar> ConditionalContext<T> {
    pub fn new(s: T, domain: &DiskDomain<T>) -> Result<Self> {
        if !(s > T::zero() && s <= domain.diameter()) {
            return Err(Error::domain("s", s.as_f64(), "(0, D]"));
        }
        Ok(Self { s })
    }

    pub fn s(&self) -> T {
        self.s
    }
}

/// Density of `S`: `6 s^5 / D^6` on `[0, D]`.
pub fn sbar_pdf<T: Scalar>(s: T, domain: &DiskDomain<T>) -> Result<T> {
    let diam = domain.diameter();
    if !(s >= T::zero() && s <= diam) {
        return Err(Error::domain("s", s.as_f64(), "[0, D]"));
    }
    Ok(T::lit(6.0) * s.powi(5) / diam.powi(6))
}

/// Distribution function of `S`: `(s/D)^6`.
pub fn sbar_cdf<T: Scalar>(s: T, domain: &DiskDomain<T>) -> Result<T> {
    let diam = domain.diameter();
    if !(s >= T::zero() && s <= diam) {
        return Err(Error::domain("s", s.as_f64(), "[0, D]"));
    }
    Ok((s / diam).powi(6))
}

/// Density of the distance from a point on a circle of diameter `s` to a
/// uniform point inside it: `8 r / (π s²) arccos(r/s)` on `[0, s]`.
pub fn pair_pdf_on_circle<T: Scalar>(r: T, s: T) -> Result<T> {
    if !(s > T::zero()) || !s.is_finite() {
        return Err(Error::domain("s", s.as_f64(), "(0, inf)"));
    }
    if !(r >= T::zero()) {
        return Err(Error::domain("distance", r.as_f64(), "[0, inf)"));
    }
    if r > s {
        return Ok(T::zero());
    }
    Ok(T::lit(8.0) * r / (T::PI() * s * s) * (r / s).min(T::one()).acos())
}

/// Density of the difference of two independent uniforms on
/// `(-theta_bar_ij, theta_bar_ij)` and `(-theta_bar_ik, theta_bar_ik)`.
pub fn angle_pdf_trapezoid<T: Scalar>(theta: T, theta_bar_ij: T, theta_bar_ik: T) -> Result<T> {
    let half_pi = T::FRAC_PI_2();
    for (what, tb) in [("theta_bar_ij", theta_bar_ij), ("theta_bar_ik", theta_bar_ik)] {
        if !(tb > T::zero() && tb < half_pi) {
            return Err(Error::domain(what, tb.as_f64(), "(0, pi/2)"));
        }
    }
    let t = theta.abs();
    if !(t < T::PI()) {
        return Err(Error::domain("theta", theta.as_f64(), "(-pi, pi)"));
    }
    let flat = (theta_bar_ij - theta_bar_ik).abs();
    let outer = theta_bar_ij + theta_bar_ik;
    Ok(if t <= flat {
        T::one() / (T::lit(2.0) * theta_bar_ij.max(theta_bar_ik))
    } else if t < outer {
        (outer - t) / (T::lit(4.0) * theta_bar_ij * theta_bar_ik)
    } else {
        T::zero()
    })
}

/// Joint density of the sides given that node `vertex` (1-based) lies on
/// the circle of diameter `s` and the other two are uniform inside it.
pub fn vertex_on_circle_pdf3<T: Scalar>(sides: &TriangleSides<T>, s: T, vertex: usize) -> Result<T> {
    if !(s > T::zero()) {
        return Err(Error::domain("s", s.as_f64(), "(0, inf)"));
    }
    // (adjacent, adjacent, opposite) sides for the vertex.
    let (r_ij, r_ik, r_jk) = match vertex {
        1 => (sides.r12, sides.r13, sides.r23),
        2 => (sides.r12, sides.r23, sides.r13),
        3 => (sides.r13, sides.r23, sides.r12),
        _ => return Err(Error::Argument(format!("vertex {vertex} is not in 1..=3"))),
    };
    let sorted = sides.sorted();
    let q = quantities_sorted(sorted, T::lit(DEFAULT_DEGENERACY_EPS));
    let Some(d) = q.circumdiameter else {
        return Ok(T::zero());
    };
    if q.rbar > s {
        return Ok(T::zero());
    }
    let pi2 = T::PI() * T::PI();
    let s4 = s.powi(4);
    let bar = |r: T| (r / s).min(T::one()).acos();
    if d <= s {
        let cos_i = ((r_ij * r_ij + r_ik * r_ik - r_jk * r_jk) / (T::lit(2.0) * r_ij * r_ik))
            .max(-T::one())
            .min(T::one());
        let theta_i = cos_i.acos();
        let v = T::lit(32.0) * d / (pi2 * s4) * (bar(r_ij) + bar(r_ik) - theta_i);
        return Ok(v.max(T::zero()));
    }
    // With d > s only an obtuse triangle fits, and only with an end of its
    // longest side on the circle.
    if q.shape == TriangleShape::Obtuse && r_jk < q.rbar {
        return Ok(T::lit(64.0) * d / (pi2 * s4) * bar(q.rbar));
    }
    Ok(T::zero())
}

/// Joint density of the sides given `S = s`, averaged over which node is on
/// the circle.
pub fn conditional_joint_pdf3<T: Scalar>(sides: &TriangleSides<T>, ctx: &ConditionalContext<T>) -> T {
    conditional_sorted(sides.sorted(), ctx.s)
}

#[inline]
fn conditional_sorted<T: Scalar>(sorted: [T; 3], s: T) -> T {
    let q = quantities_sorted(sorted, T::lit(DEFAULT_DEGENERACY_EPS));
    let Some(d) = q.circumdiameter else {
        return T::zero();
    };
    if q.rbar > s {
        return T::zero();
    }
    let pi2 = T::PI() * T::PI();
    let s4 = s.powi(4);
    let bar = |r: T| (r / s).min(T::one()).acos();
    if d <= s {
        let sum = bar(sorted[0]) + bar(sorted[1]) + bar(sorted[2]) - T::FRAC_PI_2();
        (T::lit(64.0) * d / (T::lit(3.0) * pi2 * s4) * sum).max(T::zero())
    } else if q.shape == TriangleShape::Obtuse {
        T::lit(128.0) * d / (T::lit(3.0) * pi2 * s4) * bar(q.rbar)
    } else {
        T::zero()
    }
}

struct SbarIntegrand<T> {
    sorted: [T; 3],
    lo: T,
    hi: T,
    breakpoint: Option<T>,
    diam: T,
}

impl<T: Scalar> Region<T> for SbarIntegrand<T> {
    fn dims(&self) -> usize {
        1
    }

    fn limits(&self, _axis: usize, _outer: &[T]) -> AxisLimits<T> {
        // arccos(rbar/s) has a square-root onset at s = rbar.
        AxisLimits::new(self.lo, self.hi)
            .with_breakpoints(self.breakpoint)
            .singular()
    }

    fn eval(&self, x: &[T]) -> T {
        let s = x[0];
        let density = T::lit(6.0) * s.powi(5) / self.diam.powi(6);
        conditional_sorted(self.sorted, s) * density
    }
}

/// The joint density obtained by integrating the conditional density against
/// the density of `S` over `s in [rbar, D]`, split at `s = d`.
pub fn joint_pdf3_via_conditioning<T: Scalar>(
    sides: &TriangleSides<T>,
    domain: &DiskDomain<T>,
    quad: &QuadratureSettings<T>,
) -> Result<T> {
    let sorted = sides.sorted();
    let q = quantities_sorted(sorted, T::lit(DEFAULT_DEGENERACY_EPS));
    let diam = domain.diameter();
    let Some(d) = q.circumdiameter else {
        return Ok(T::zero());
    };
    if q.rbar > diam {
        return Ok(T::zero());
    }
    // Acute triangles only fit once the circle holds the circumcircle.
    let lo = match q.shape {
        TriangleShape::Obtuse => q.rbar,
        TriangleShape::AcuteOrRight => d.max(q.rbar),
    };
    if !(lo < diam) {
        return Ok(T::zero());
    }
    let breakpoint = (d > lo && d < diam).then_some(d);
    let integrand = SbarIntegrand {
        sorted,
        lo,
        hi: diam,
        breakpoint,
        diam,
    };
    Ok(integrate_region(&integrand, quad)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distance::joint_pdf3;
    use crate::geometry::sample_point_in_disk;
    use crate::quadrature::integrate_1d;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn sides(a: f64, b: f64, c: f64) -> TriangleSides<f64> {
        TriangleSides::new(a, b, c).unwrap()
    }

    fn tight() -> QuadratureSettings<f64> {
        QuadratureSettings::with_tolerances(1e-14, 1e-11)
    }

    #[test]
    fn on_circle_pdf_values() {
        assert_eq!(pair_pdf_on_circle(0.0, 0.7).unwrap(), 0.0);
        assert_eq!(pair_pdf_on_circle(0.7, 0.7).unwrap(), 0.0);
        assert_eq!(pair_pdf_on_circle(0.8, 0.7).unwrap(), 0.0);
        assert!(pair_pdf_on_circle(0.1, 0.0).is_err());
        assert!(pair_pdf_on_circle(0.1, -1.0).is_err());
        let s = QuadratureSettings::with_tolerances(1e-13, 0.0);
        let est = integrate_1d(|r: f64| pair_pdf_on_circle(r, 1.0).unwrap(), 0.0, 1.0, &s).unwrap();
        assert!((est.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn trapezoid_values() {
        let q = PI / 4.0;
        assert!((angle_pdf_trapezoid(0.0, q, q).unwrap() - 2.0 / PI).abs() < 1e-15);
        assert_eq!(angle_pdf_trapezoid(2.0 * q, q, q).unwrap(), 0.0);
        assert_eq!(angle_pdf_trapezoid(-2.5 * q, q, q).unwrap(), 0.0);
        assert!(angle_pdf_trapezoid(0.0, 0.0, q).is_err());
        assert!(angle_pdf_trapezoid(0.0, q, PI / 2.0).is_err());
        assert!(angle_pdf_trapezoid(4.0, q, q).is_err());
    }

    #[test]
    fn trapezoid_even_and_normalized() {
        let s = QuadratureSettings::with_tolerances(1e-13, 0.0);
        for (a, b) in [(0.3f64, 1.2f64), (0.7, 0.7), (1.5, 0.1)] {
            for t in [0.05, 0.4, 1.0, 1.4] {
                assert_eq!(
                    angle_pdf_trapezoid(t, a, b).unwrap(),
                    angle_pdf_trapezoid(-t, a, b).unwrap()
                );
            }
            let mut settings = s.clone();
            settings.breakpoints = vec![vec![-(a + b), -(a - b).abs(), (a - b).abs(), a + b]];
            let est = integrate_1d(
                |t| angle_pdf_trapezoid(t, a, b).unwrap(),
                -PI + 1e-12,
                PI - 1e-12,
                &settings,
            )
            .unwrap();
            assert!((est.value - 1.0).abs() < 1e-12, "({a}, {b}): {}", est.value);
        }
    }

    #[test]
    fn sbar_values() {
        let disk = DiskDomain::unit();
        assert_eq!(sbar_pdf(1.0, &disk).unwrap(), 6.0);
        assert_eq!(sbar_pdf(0.0, &disk).unwrap(), 0.0);
        assert!(sbar_pdf(1.1, &disk).is_err());
        assert!(sbar_pdf(-0.1, &disk).is_err());
        assert_eq!(sbar_cdf(0.5, &disk).unwrap(), 0.015625);
    }

    #[test]
    fn sbar_cdf_matches_sampling() {
        let disk = DiskDomain::<f64>::unit();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let n = 1_000_000;
        let mut hits = 0usize;
        for _ in 0..n {
            let s = (0..3)
                .map(|_| 2.0 * sample_point_in_disk(&disk, &mut rng).norm())
                .fold(0.0f64, f64::max);
            if s <= 0.5 {
                hits += 1;
            }
        }
        let p = 0.5f64.powi(6);
        let se = (p * (1.0 - p) / n as f64).sqrt();
        let frac = hits as f64 / n as f64;
        assert!((frac - p).abs() < 3.0 * se, "{frac} vs {p}");
    }

    #[test]
    fn context_validation() {
        let disk = DiskDomain::unit();
        assert!(ConditionalContext::new(0.0, &disk).is_err());
        assert!(ConditionalContext::new(1.1, &disk).is_err());
        assert!(ConditionalContext::new(1.0, &disk).is_ok());
    }

    #[test]
    fn conditional_support() {
        let disk = DiskDomain::unit();
        let ctx = ConditionalContext::new(0.5, &disk).unwrap();
        // rbar > s
        assert_eq!(conditional_joint_pdf3(&sides(0.6, 0.4, 0.4), &ctx), 0.0);
        // acute with d = 0.4/sin(60°) ≈ 0.46 < 0.5 is positive, with s = 0.45 it is not
        assert!(conditional_joint_pdf3(&sides(0.4, 0.4, 0.4), &ctx) > 0.0);
        let ctx = ConditionalContext::new(0.45, &disk).unwrap();
        assert_eq!(conditional_joint_pdf3(&sides(0.4, 0.4, 0.4), &ctx), 0.0);
        assert_eq!(conditional_joint_pdf3(&sides(0.2, 0.2, 0.5), &ctx), 0.0);
    }

    #[test]
    fn vertex_average_is_conditional() {
        let disk = DiskDomain::unit();
        for (a, b, c) in [
            (0.4, 0.4, 0.4),
            (0.3, 0.45, 0.6),
            (0.7, 0.3, 0.5),
            (0.9, 0.5, 0.5),
            (0.2, 0.25, 0.4),
        ] {
            let t = sides(a, b, c);
            for s in [0.6, 0.75, 0.9, 1.0] {
                let ctx = ConditionalContext::new(s, &disk).unwrap();
                let avg: f64 = (1..=3).map(|v| vertex_on_circle_pdf3(&t, s, v).unwrap()).sum::<f64>() / 3.0;
                let cond = conditional_joint_pdf3(&t, &ctx);
                assert!(
                    (avg - cond).abs() <= 1e-12 * cond.max(1.0),
                    "({a},{b},{c}) s={s}: {avg} vs {cond}"
                );
            }
        }
        assert!(vertex_on_circle_pdf3(&sides(0.4, 0.4, 0.4), 0.5, 4).is_err());
    }

    #[test]
    fn conditioning_reproduces_closed_form() {
        let disk = DiskDomain::unit();
        for (a, b, c) in [
            (0.5, 0.5, 0.5),
            (0.9, 0.5, 0.5),
            (0.4, 0.4, 0.4),
            (0.3, 0.45, 0.6),
            (0.1, 0.12, 0.2),
        ] {
            let t = sides(a, b, c);
            let closed = joint_pdf3(&t, &disk).density;
            let via = joint_pdf3_via_conditioning(&t, &disk, &tight()).unwrap();
            assert!(
                (via - closed).abs() <= 1e-6 * closed,
                "({a},{b},{c}): {via} vs {closed}"
            );
        }
    }

    #[test]
    fn conditioning_zero_cases() {
        let disk = DiskDomain::unit();
        assert_eq!(
            joint_pdf3_via_conditioning(&sides(0.3, 0.3, 0.9), &disk, &tight()).unwrap(),
            0.0
        );
        assert_eq!(
            joint_pdf3_via_conditioning(&sides(0.95, 0.95, 0.95), &disk, &tight()).unwrap(),
            0.0
        );
    }
}
