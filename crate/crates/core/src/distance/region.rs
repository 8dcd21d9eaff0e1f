//! Integration of the three-distance joint density over boxes.
//!
//! Axes are ordered `(r12, r13, r23)`. The innermost axis is restricted to the
//! triangle support `|r12 - r13| < r23 < r12 + r13` (and `r23 <= D`) and split
//! where the density changes branch, so the only remaining singularities are
//! the `1/sqrt` blow-ups at the degenerate ends, which the cosine
//! substitution absorbs.

use crate::distance::joint_density_sorted;
use crate::error::Result;
use crate::geometry::DiskDomain;
use crate::quadrature::{integrate_region, AxisLimits, Estimate, QuadratureSettings, Region};
use crate::scalar::Scalar;

/// `joint_pdf3(r) * weight(r)` over a box, as an iterated [`Region`].
pub struct TriangleRegion<T, W> {
    diam: T,
    lower: [T; 3],
    upper: [T; 3],
    /// Values where `weight` is not smooth in any single side, e.g. a hard-disk range.
    special: Vec<T>,
    fixed_r12: Option<T>,
    weight: W,
}

impl<T: Scalar, W: Fn(&[T; 3]) -> T> TriangleRegion<T, W> {
    pub fn new(domain: &DiskDomain<T>, lower: [T; 3], upper: [T; 3], special: Vec<T>, weight: W) -> Self {
        let diam = domain.diameter();
        let clamp = |x: T| x.max(T::zero()).min(diam);
        Self {
            diam,
            lower: lower.map(clamp),
            upper: upper.map(clamp),
            special: special.into_iter().filter(|&v| v > T::zero() && v < diam).collect(),
            fixed_r12: None,
            weight,
        }
    }

    /// Restricts to the slice `r12 = value`, leaving a 2-D region over `(r13, r23)`.
    pub fn with_fixed_r12(mut self, value: T) -> Self {
        self.fixed_r12 = Some(value);
        self
    }

    fn outer_r12(&self) -> AxisLimits<T> {
        let diam = self.diam;
        let half = T::lit(0.5);
        let mut bps = vec![half * diam];
        for &v in &self.special {
            bps.extend([v, diam - v, half * v, v * T::SQRT_2()]);
            // Isosceles (a, v, v) with circumdiameter D.
            let d2 = diam * diam;
            bps.push(T::lit(2.0) * v * (T::one() - v * v / d2).max(T::zero()).sqrt());
        }
        AxisLimits::new(self.lower[0], self.upper[0]).with_breakpoints(bps)
    }

    fn middle_r13(&self, a: T) -> AxisLimits<T> {
        let diam = self.diam;
        let mut bps = vec![a, diam - a];
        for &v in self.special.iter().chain(std::iter::once(&diam)) {
            bps.extend([
                v,
                v - a,
                a - v,
                a + v,
                (a * a + v * v).sqrt(),
                (a * a - v * v).abs().sqrt(),
            ]);
            bps.extend(circumdiameter_crossings(a, v, diam));
        }
        AxisLimits::new(self.lower[1], self.upper[1]).with_breakpoints(bps)
    }

    fn inner_r23(&self, a: T, b: T) -> AxisLimits<T> {
        let lo = self.lower[2].max((a - b).abs());
        let hi = self.upper[2].min(a + b).min(self.diam);
        if !(hi > lo) {
            return AxisLimits::empty();
        }
        let mut bps = vec![(a * a + b * b).sqrt(), (a * a - b * b).abs().sqrt()];
        bps.extend(circumdiameter_crossings(a, b, self.diam));
        bps.extend(self.special.iter().copied());
        AxisLimits::new(lo, hi).with_breakpoints(bps).singular()
    }
}

/// Values of `c` at which the triangle `(a, b, c)` has circumdiameter exactly `diam`.
fn circumdiameter_crossings<T: Scalar>(a: T, b: T, diam: T) -> Vec<T> {
    // 4a²b²u = D² Q(u) with u = c², a quadratic in u.
    let (a2, b2, d2) = (a * a, b * b, diam * diam);
    let two = T::lit(2.0);
    let half_b = d2 * (a2 + b2) - two * a2 * b2;
    let c0 = d2 * d2 * (a2 - b2) * (a2 - b2);
    let disc = half_b * half_b - c0;
    if disc < T::zero() || d2 == T::zero() {
        return Vec::new();
    }
    let root = disc.sqrt();
    [(half_b - root) / d2, (half_b + root) / d2]
        .into_iter()
        .filter(|&u| u > T::zero())
        .map(|u| u.sqrt())
        .collect()
}

impl<T: Scalar, W: Fn(&[T; 3]) -> T> Region<T> for TriangleRegion<T, W> {
    fn dims(&self) -> usize {
        if self.fixed_r12.is_some() {
            2
        } else {
            3
        }
    }

    fn limits(&self, axis: usize, outer: &[T]) -> AxisLimits<T> {
        match (self.fixed_r12, axis) {
            (None, 0) => self.outer_r12(),
            (None, 1) => self.middle_r13(outer[0]),
            (None, _) => self.inner_r23(outer[0], outer[1]),
            (Some(a), 0) => self.middle_r13(a),
            (Some(a), _) => self.inner_r23(a, outer[0]),
        }
    }

    fn eval(&self, x: &[T]) -> T {
        let r = match self.fixed_r12 {
            Some(a) => [a, x[0], x[1]],
            None => [x[0], x[1], x[2]],
        };
        let mut s = r;
        s.sort_by(|p, q| p.partial_cmp(q).unwrap_or(std::cmp::Ordering::Equal));
        let density = joint_density_sorted(s, self.diam);
        if density == T::zero() {
            return density;
        }
        density * (self.weight)(&r)
    }
}

/// Probability mass of the joint density in the box `[lower, upper]`.
pub fn joint_pdf3_box_mass<T: Scalar>(
    domain: &DiskDomain<T>,
    lower: [T; 3],
    upper: [T; 3],
    settings: &QuadratureSettings<T>,
) -> Result<Estimate<T>> {
    let region = TriangleRegion::new(domain, lower, upper, Vec::new(), |_: &[T; 3]| T::one());
    integrate_region(&region, settings)
}

/// `∫ joint_pdf3(r) weight(r) dr` over `[0, D]^3`; `special` lists the values
/// at which `weight` has kinks or jumps along any axis.
pub fn joint_pdf3_weighted_mass<T: Scalar, W: Fn(&[T; 3]) -> T>(
    domain: &DiskDomain<T>,
    special: Vec<T>,
    weight: W,
    settings: &QuadratureSettings<T>,
) -> Result<Estimate<T>> {
    let diam = domain.diameter();
    let region = TriangleRegion::new(domain, [T::zero(); 3], [diam; 3], special, weight);
    integrate_region(&region, settings)
}

/// Marginal density of `R12` obtained by integrating out `r13` and `r23`.
pub fn joint_pdf3_marginal_r12<T: Scalar>(
    r12: T,
    domain: &DiskDomain<T>,
    settings: &QuadratureSettings<T>,
) -> Result<Estimate<T>> {
    let diam = domain.diameter();
    let region =
        TriangleRegion::new(domain, [T::zero(); 3], [diam; 3], Vec::new(), |_: &[T; 3]| T::one()).with_fixed_r12(r12);
    integrate_region(&region, settings)
}
