//! Deterministic adaptive quadrature in one to three dimensions.
//!
//! Every axis is integrated with a globally adaptive 7/15-point
//! Gauss–Kronrod rule. Multi-dimensional integrals are iterated: the
//! integrand of an outer axis is the adaptive integral over the remaining
//! axes, and the error estimates of those inner integrals are integrated
//! alongside their values. Because the limits and breakpoints of an inner
//! axis may depend on the outer coordinates (see [`Region`]), integrands
//! with coordinate-dependent support or kinks (the triangle inequalities,
//! the surface where the circumdiameter equals the disk diameter) get panel
//! boundaries exactly on their non-smooth sets.
//!
//! Axes flagged with `singular_ends` are integrated after the substitution
//! `x = lo + (hi - lo)(1 - cos t)/2`, which removes inverse square root
//! singularities at either end of the interval.

use std::cell::Cell;
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::marker::PhantomData;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Maximum number of axes handled by [`integrate`].
pub const MAX_DIMS: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSettings<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    /// Maximum number of panels for any single one-dimensional integral.
    pub max_subdivisions: usize,
    /// Interior breakpoints per axis for box integrals.
    pub breakpoints: Vec<Vec<T>>,
}

impl<T: Scalar> Default for QuadratureSettings<T> {
    fn default() -> Self {
        Self {
            abs_tol: T::lit(1e-4),
            rel_tol: T::zero(),
            max_subdivisions: 2000,
            breakpoints: Vec::new(),
        }
    }
}

impl<T: Scalar> QuadratureSettings<T> {
    pub fn with_tolerances(abs_tol: T, rel_tol: T) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |t: T| t.is_finite() && t >= T::zero();
        if !ok(self.abs_tol) || !ok(self.rel_tol) {
            return Err(Error::Argument("tolerances must be finite and nonnegative".into()));
        }
        if self.abs_tol <= T::zero() && self.rel_tol <= T::zero() {
            return Err(Error::Argument(
                "at least one of abs_tol and rel_tol must be positive".into(),
            ));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::Argument("max_subdivisions must be at least 1".into()));
        }
        Ok(())
    }

    fn target(&self, value: T) -> T {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// Result of a converged integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub error_estimate: T,
    pub evaluations: usize,
}

/// Integration range of one axis given the values of the outer axes.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisLimits<T> {
    pub lo: T,
    pub hi: T,
    /// Interior points where the integrand (or an inner integral) is not smooth.
    pub breakpoints: Vec<T>,
    /// Cluster nodes at both ends to absorb `1/sqrt` end singularities.
    pub singular_ends: bool,
}

impl<T: Scalar> AxisLimits<T> {
    pub fn new(lo: T, hi: T) -> Self {
        Self {
            lo,
            hi,
            breakpoints: Vec::new(),
            singular_ends: false,
        }
    }

    pub fn empty() -> Self {
        Self::new(T::zero(), T::zero())
    }

    pub fn with_breakpoints(mut self, breakpoints: impl IntoIterator<Item = T>) -> Self {
        self.breakpoints.extend(breakpoints);
        self
    }

    pub fn singular(mut self) -> Self {
        self.singular_ends = true;
        self
    }

    pub fn is_empty(&self) -> bool {
        !(self.hi > self.lo)
    }
}

/// An iterated integration region: axis `k` has limits that may depend on axes `0..k`.
pub trait Region<T: Scalar> {
    fn dims(&self) -> usize;

    /// Limits of `axis`; `outer` holds the coordinates of axes `0..axis`.
    fn limits(&self, axis: usize, outer: &[T]) -> AxisLimits<T>;

    fn eval(&self, x: &[T]) -> T;
}

struct BoxRegion<'a, T, F> {
    lower: &'a [T],
    upper: &'a [T],
    breakpoints: &'a [Vec<T>],
    f: F,
}

impl<T: Scalar, F: Fn(&[T]) -> T> Region<T> for BoxRegion<'_, T, F> {
    fn dims(&self) -> usize {
        self.lower.len()
    }

    fn limits(&self, axis: usize, _outer: &[T]) -> AxisLimits<T> {
        let lim = AxisLimits::new(self.lower[axis], self.upper[axis]);
        match self.breakpoints.get(axis) {
            Some(b) => lim.with_breakpoints(b.iter().copied()),
            None => lim,
        }
    }

    fn eval(&self, x: &[T]) -> T {
        (self.f)(x)
    }
}

/// Integrates `f` over the axis-aligned box `[lower, upper]` (1 to 3 dimensions).
///
/// Interior breakpoints are taken from `settings.breakpoints[axis]`.
pub fn integrate<T, F>(f: F, lower: &[T], upper: &[T], settings: &QuadratureSettings<T>) -> Result<Estimate<T>>
where
    T: Scalar,
    F: Fn(&[T]) -> T,
{
    if lower.len() != upper.len() || lower.is_empty() || lower.len() > MAX_DIMS {
        return Err(Error::Argument(format!(
            "box must have between 1 and {MAX_DIMS} matching bounds"
        )));
    }
    for (&a, &b) in lower.iter().zip(upper) {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::Argument(format!(
                "degenerate box axis [{}, {}]",
                a.as_f64(),
                b.as_f64()
            )));
        }
    }
    let region = BoxRegion {
        lower,
        upper,
        breakpoints: &settings.breakpoints,
        f,
    };
    integrate_region(&region, settings)
}

/// One-dimensional convenience wrapper around [`integrate`].
pub fn integrate_1d<T, F>(f: F, a: T, b: T, settings: &QuadratureSettings<T>) -> Result<Estimate<T>>
where
    T: Scalar,
    F: Fn(T) -> T,
{
    integrate(|x: &[T]| f(x[0]), &[a], &[b], settings)
}

/// Integrates over an iterated [`Region`].
pub fn integrate_region<T: Scalar, R: Region<T> + ?Sized>(
    region: &R,
    settings: &QuadratureSettings<T>,
) -> Result<Estimate<T>> {
    settings.validate()?;
    let dims = region.dims();
    if dims == 0 || dims > MAX_DIMS {
        return Err(Error::Argument(format!("regions must have 1 to {MAX_DIMS} axes")));
    }
    let ctx = Nested {
        region,
        dims,
        max_subdivisions: settings.max_subdivisions,
        evaluations: Cell::new(0),
        converged: Cell::new(true),
        _scalar: PhantomData,
    };
    let mut coords = Vec::with_capacity(dims);
    let (value, error) = ctx.axis(0, &mut coords, settings.abs_tol, settings.rel_tol);
    let evaluations = ctx.evaluations.get();
    if !value.is_finite() || !error.is_finite() {
        return Err(Error::Accuracy {
            value: value.as_f64(),
            error_estimate: error.as_f64(),
        });
    }
    if !ctx.converged.get() && error > settings.target(value) {
        return Err(Error::Accuracy {
            value: value.as_f64(),
            error_estimate: error.as_f64(),
        });
    }
    Ok(Estimate {
        value,
        error_estimate: error,
        evaluations,
    })
}

struct Nested<'a, T, R: ?Sized> {
    region: &'a R,
    dims: usize,
    max_subdivisions: usize,
    evaluations: Cell<usize>,
    converged: Cell<bool>,
    _scalar: PhantomData<T>,
}

impl<T: Scalar, R: Region<T> + ?Sized> Nested<'_, T, R> {
    /// Integral over axes `axis..dims` with the outer coordinates in `coords`.
    fn axis(&self, axis: usize, coords: &mut Vec<T>, abs_tol: T, rel_tol: T) -> (T, T) {
        let lim = self.region.limits(axis, &coords[..axis]);
        if lim.is_empty() {
            return (T::zero(), T::zero());
        }
        let width = lim.hi - lim.lo;
        let last = axis + 1 == self.dims;
        let half = T::lit(0.5);
        let inner_abs = abs_tol * half / width;
        let inner_rel = rel_tol * half;
        let map = AxisMap::new(&lim);
        let mut breaks: Vec<T> = lim
            .breakpoints
            .iter()
            .copied()
            .filter(|&b| b > lim.lo && b < lim.hi)
            .map(|b| map.to_param(b))
            .collect();
        breaks.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
        breaks.dedup();

        let integrand = |t: T| -> (T, T) {
            let (x, jac) = map.to_coord(t);
            coords.truncate(axis);
            coords.push(x);
            if last {
                self.evaluations.set(self.evaluations.get() + 1);
                let v = self.region.eval(coords);
                (v * jac, T::zero())
            } else {
                let (v, e) = self.axis(axis + 1, coords, inner_abs, inner_rel);
                (v * jac, e * jac.abs())
            }
        };
        let out = adaptive(
            integrand,
            map.param_lo(),
            map.param_hi(),
            &breaks,
            abs_tol,
            rel_tol,
            self.max_subdivisions,
        );
        coords.truncate(axis);
        if !out.converged {
            self.converged.set(false);
        }
        (out.value, out.error)
    }
}

/// Identity or cosine substitution for one axis.
struct AxisMap<T> {
    lo: T,
    width: T,
    cosine: bool,
}

impl<T: Scalar> AxisMap<T> {
    fn new(lim: &AxisLimits<T>) -> Self {
        Self {
            lo: lim.lo,
            width: lim.hi - lim.lo,
            cosine: lim.singular_ends,
        }
    }

    fn param_lo(&self) -> T {
        if self.cosine {
            T::zero()
        } else {
            self.lo
        }
    }

    fn param_hi(&self) -> T {
        if self.cosine {
            T::PI()
        } else {
            self.lo + self.width
        }
    }

    fn to_param(&self, x: T) -> T {
        if self.cosine {
            let c = T::one() - T::lit(2.0) * (x - self.lo) / self.width;
            c.max(-T::one()).min(T::one()).acos()
        } else {
            x
        }
    }

    /// Coordinate and Jacobian `dx/dt` at parameter `t`.
    fn to_coord(&self, t: T) -> (T, T) {
        if self.cosine {
            let half = T::lit(0.5) * self.width;
            let (s, c) = t.sin_cos();
            (self.lo + half * (T::one() - c), half * s)
        } else {
            (t, T::one())
        }
    }
}

// 7-point Gauss / 15-point Kronrod abscissae and weights on [-1, 1].
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Panel<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

impl<T: Scalar> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T: Scalar> Eq for Panel<T> {}

impl<T: Scalar> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Scalar> Ord for Panel<T> {
    // Largest error first; ties go to the panel with the smaller origin.
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .as_f64()
            .total_cmp(&other.error.as_f64())
            .then_with(|| other.a.as_f64().total_cmp(&self.a.as_f64()))
    }
}

/// Applies the 15-point Kronrod rule to `[a, b]`.
///
/// `f` returns a value and an error density (the error of an inner integral);
/// the latter is integrated with the Kronrod weights and added to the panel
/// error.
fn kronrod15<T: Scalar, F: FnMut(T) -> (T, T)>(f: &mut F, a: T, b: T) -> Panel<T> {
    let half = T::lit(0.5);
    let centre = half * (a + b);
    let h = half * (b - a);
    let dh = h.abs();

    let (fc, ec) = f(centre);
    let mut res_g = fc * T::lit(WG[3]);
    let mut res_k = fc * T::lit(WGK[7]);
    let mut res_abs = res_k.abs();
    let mut err_k = ec * T::lit(WGK[7]);
    let mut fv1 = [T::zero(); 7];
    let mut fv2 = [T::zero(); 7];

    for j in 0..7 {
        let x = h * T::lit(XGK[j]);
        let (f1, e1) = f(centre - x);
        let (f2, e2) = f(centre + x);
        fv1[j] = f1;
        fv2[j] = f2;
        let w = T::lit(WGK[j]);
        res_k = res_k + w * (f1 + f2);
        res_abs = res_abs + w * (f1.abs() + f2.abs());
        err_k = err_k + w * (e1 + e2);
        if j % 2 == 1 {
            res_g = res_g + T::lit(WG[j / 2]) * (f1 + f2);
        }
    }

    let mean = res_k * half;
    let mut res_asc = T::lit(WGK[7]) * (fc - mean).abs();
    for j in 0..7 {
        res_asc = res_asc + T::lit(WGK[j]) * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * h;
    res_abs = res_abs * dh;
    res_asc = res_asc * dh;
    let mut error = ((res_k - res_g) * h).abs();
    if res_asc != T::zero() && error != T::zero() {
        let ratio = (T::lit(200.0) * error / res_asc).powf(T::lit(1.5));
        error = res_asc * ratio.min(T::one());
    }
    let eps = T::epsilon();
    if res_abs > T::min_positive_value() / (T::lit(50.0) * eps) {
        error = error.max(T::lit(50.0) * eps * res_abs);
    }
    Panel {
        a,
        b,
        value,
        error: error + err_k.abs() * dh,
    }
}

struct Outcome<T> {
    value: T,
    error: T,
    converged: bool,
}

/// Globally adaptive bisection over `[lo, hi]` split first at `breaks`.
fn adaptive<T: Scalar, F: FnMut(T) -> (T, T)>(
    mut f: F,
    lo: T,
    hi: T,
    breaks: &[T],
    abs_tol: T,
    rel_tol: T,
    max_panels: usize,
) -> Outcome<T> {
    let mut heap = BinaryHeap::new();
    let mut frozen = Vec::new();
    let (mut value, mut error) = (T::zero(), T::zero());
    let mut a = lo;
    for &b in breaks.iter().chain(std::iter::once(&hi)) {
        if b > a {
            let p = kronrod15(&mut f, a, b);
            value = value + p.value;
            error = error + p.error;
            heap.push(p);
            a = b;
        }
    }
    let target = |v: T| abs_tol.max(rel_tol * v.abs());
    let mut iterations = 0usize;
    let mut converged = error <= target(value);
    while !converged && heap.len() + frozen.len() < max_panels {
        let Some(worst) = heap.pop() else { break };
        let mid = T::lit(0.5) * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            frozen.push(worst);
            continue;
        }
        let left = kronrod15(&mut f, worst.a, mid);
        let right = kronrod15(&mut f, mid, worst.b);
        value = value + (left.value + right.value - worst.value);
        error = error + (left.error + right.error - worst.error);
        heap.push(left);
        heap.push(right);
        iterations += 1;
        if iterations.is_multiple_of(64) {
            // Refresh the running sums to shed cancellation drift.
            value = heap.iter().chain(&frozen).map(|p| p.value).sum();
            error = heap.iter().chain(&frozen).map(|p| p.error).sum();
        }
        converged = error <= target(value);
    }

    let mut panels: Vec<Panel<T>> = heap.into_vec();
    panels.extend(frozen);
    panels.sort_by(|x, y| x.a.as_f64().total_cmp(&y.a.as_f64()));
    let value: T = panels.iter().map(|p| p.value).sum();
    let error: T = panels.iter().map(|p| p.error).sum();
    Outcome {
        value,
        error,
        converged: converged || error <= target(value),
    }
}
