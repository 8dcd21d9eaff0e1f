//! Disk domain, planar points, triangle quantities and the pair-index codec.

use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Absolute slack tolerated by [`phi`] outside `[0, 1]` before it reports a domain error.
pub const PHI_SLACK: f64 = 1e-12;

/// Default relative degeneracy threshold: `Q <= eps * rbar^4` counts as collinear.
pub const DEFAULT_DEGENERACY_EPS: f64 = 1e-14;

/// A disk of diameter `D` in which nodes are placed uniformly at random.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskDomain<T> {
    diameter: T,
}

impl<T: Scalar> DiskDomain<T> {
    pub fn new(diameter: T) -> Result<Self> {
        if !(diameter.is_finite() && diameter > T::zero()) {
            return Err(Error::domain("diameter", diameter.as_f64(), "(0, inf)"));
        }
        Ok(Self { diameter })
    }

    /// The unit-diameter disk.
    pub fn unit() -> Self {
        Self { diameter: T::one() }
    }

    #[inline]
    pub fn diameter(&self) -> T {
        self.diameter
    }

    #[inline]
    pub fn radius(&self) -> T {
        self.diameter / T::lit(2.0)
    }

    pub fn contains(&self, p: &Point2D<T>) -> bool {
        p.norm() <= self.radius()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2D<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Point2D<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    pub fn norm(&self) -> T {
        (self.x * self.x + self.y * self.y).sqrt()
    }

    pub fn distance(&self, other: &Self) -> T {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        (dx * dx + dy * dy).sqrt()
    }
}

/// Draws a point uniformly from the disk.
///
/// Uses the inverse radius CDF: `rho = (D/2) sqrt(u)` with a uniform angle, so
/// exactly two uniforms are consumed per point.
pub fn sample_point_in_disk<T: Scalar, R: Rng + ?Sized>(domain: &DiskDomain<T>, rng: &mut R) -> Point2D<T> {
    let u: f64 = rng.random();
    let v: f64 = rng.random();
    let rho = domain.radius() * T::lit(u).sqrt();
    let (sin, cos) = (T::lit(v) * T::TAU()).sin_cos();
    Point2D::new(rho * cos, rho * sin)
}

/// `phi(x) = arccos(x) - x sqrt(1 - x^2)` on `[0, 1]`.
///
/// This is twice the area of the circular segment cut off by a chord at
/// distance `x` from the centre of a unit circle. Inputs within [`PHI_SLACK`]
/// of the interval are clamped.
pub fn phi<T: Scalar>(x: T) -> Result<T> {
    let slack = T::lit(PHI_SLACK);
    if x.is_nan() || x < -slack || x > T::one() + slack {
        return Err(Error::domain("phi argument", x.as_f64(), "[0, 1]"));
    }
    Ok(phi_clamped(x))
}

#[inline]
pub(crate) fn phi_clamped<T: Scalar>(x: T) -> T {
    let x = x.max(T::zero()).min(T::one());
    x.acos() - x * (T::one() - x * x).sqrt()
}

/// Three candidate pair distances `(r12, r13, r23)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleSides<T> {
    pub(crate) r12: T,
    pub(crate) r13: T,
    pub(crate) r23: T,
}

impl<T: Scalar> TriangleSides<T> {
    /// Validates that every side is finite and nonnegative.
    pub fn new(r12: T, r13: T, r23: T) -> Result<Self> {
        for (what, r) in [("r12", r12), ("r13", r13), ("r23", r23)] {
            if !(r.is_finite() && r >= T::zero()) {
                return Err(Error::domain(what, r.as_f64(), "[0, inf)"));
            }
        }
        Ok(Self { r12, r13, r23 })
    }

    pub fn r12(&self) -> T {
        self.r12
    }

    pub fn r13(&self) -> T {
        self.r13
    }

    pub fn r23(&self) -> T {
        self.r23
    }

    pub fn as_array(&self) -> [T; 3] {
        [self.r12, self.r13, self.r23]
    }

    /// Sides in ascending order.
    pub fn sorted(&self) -> [T; 3] {
        let mut s = self.as_array();
        if s[0] > s[1] {
            s.swap(0, 1);
        }
        if s[1] > s[2] {
            s.swap(1, 2);
        }
        if s[0] > s[1] {
            s.swap(0, 1);
        }
        s
    }

    /// The same triangle with every side multiplied by `factor`.
    pub fn scaled(&self, factor: T) -> Result<Self> {
        Self::new(self.r12 * factor, self.r13 * factor, self.r23 * factor)
    }

    /// True when all three strict triangle inequalities hold.
    pub fn satisfies_triangle_inequalities(&self) -> bool {
        let [a, b, c] = self.as_array();
        a < b + c && b < a + c && c < a + b
    }
}

/// Obtuse vs acute-or-right classification of a triangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TriangleShape {
    AcuteOrRight,
    Obtuse,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleQuantities<T> {
    /// `Q = 16 * area^2`; positive iff the triangle inequalities hold.
    pub q: T,
    /// Longest side.
    pub rbar: T,
    /// Circumdiameter `2 r12 r13 r23 / sqrt(Q)`; `None` for degenerate triples.
    pub circumdiameter: Option<T>,
    pub shape: TriangleShape,
}

impl<T: Scalar> TriangleQuantities<T> {
    pub fn is_degenerate(&self) -> bool {
        self.circumdiameter.is_none()
    }
}

/// `Q` in product (Heron) form from ascending sides.
#[inline]
pub(crate) fn q_product<T: Scalar>(s: [T; 3]) -> T {
    let [a, b, c] = s;
    // Ascending order keeps every factor a difference of like magnitudes.
    (a + b + c) * (c - b + a) * (c + b - a) * (a + b - c)
}

/// `Q` as the symmetric quartic `2a²b² + 2a²c² + 2b²c² - a⁴ - b⁴ - c⁴`.
pub fn q_quartic<T: Scalar>(sides: &TriangleSides<T>) -> T {
    let [a, b, c] = sides.as_array();
    let (a2, b2, c2) = (a * a, b * b, c * c);
    let two = T::lit(2.0);
    two * a2 * b2 + two * a2 * c2 + two * b2 * c2 - a2 * a2 - b2 * b2 - c2 * c2
}

pub fn triangle_quantities<T: Scalar>(sides: &TriangleSides<T>) -> TriangleQuantities<T> {
    triangle_quantities_with_eps(sides, T::lit(DEFAULT_DEGENERACY_EPS))
}

/// [`triangle_quantities`] with an explicit relative degeneracy threshold.
pub fn triangle_quantities_with_eps<T: Scalar>(sides: &TriangleSides<T>, eps: T) -> TriangleQuantities<T> {
    let s = sides.sorted();
    quantities_sorted(s, eps)
}

#[inline]
pub(crate) fn quantities_sorted<T: Scalar>(s: [T; 3], eps: T) -> TriangleQuantities<T> {
    let rbar = s[2];
    let q = q_product(s);
    let sum_sq = s[0] * s[0] + s[1] * s[1] + s[2] * s[2];
    let shape = if T::lit(2.0) * rbar * rbar > sum_sq {
        TriangleShape::Obtuse
    } else {
        TriangleShape::AcuteOrRight
    };
    let r4 = (rbar * rbar) * (rbar * rbar);
    let circumdiameter = if q > eps * r4 && q > T::zero() {
        Some(T::lit(2.0) * s[0] * s[1] * s[2] / q.sqrt())
    } else {
        None
    };
    TriangleQuantities {
        q,
        rbar,
        circumdiameter,
        shape,
    }
}

/// Number of node pairs `n(n-1)/2`.
#[inline]
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Lexicographic index of the 1-based pair `(i, j)`, `i < j <= n`.
///
/// `(1,2) -> 0, (1,3) -> 1, ..., (1,n) -> n-2, (2,3) -> n-1, ...`
pub fn pair_index(i: usize, j: usize, n: usize) -> Result<usize> {
    if i == 0 || i >= j || j > n {
        return Err(Error::Argument(format!(
            "pair ({i}, {j}) is not a valid 1-based pair with i < j <= {n}"
        )));
    }
    Ok(pair_index_0(i - 1, j - 1, n))
}

/// 0-based variant without validation.
#[inline]
pub(crate) fn pair_index_0(i: usize, j: usize, n: usize) -> usize {
    // Pairs before row i: sum_{k<i} (n-1-k).
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// Inverse of [`pair_index`]: the 1-based pair at `index`.
pub fn pair_from_index(index: usize, n: usize) -> Result<(usize, usize)> {
    if index >= pair_count(n) {
        return Err(Error::Argument(format!("pair index {index} out of range for n = {n}")));
    }
    let mut rest = index;
    for i in 0..n {
        let row = n - 1 - i;
        if rest < row {
            return Ok((i + 1, i + 2 + rest));
        }
        rest -= row;
    }
    unreachable!("index checked against pair_count")
}

/// All 0-based pairs in pair-index order.
pub(crate) fn pairs_0(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(pair_count(n));
    for i in 0..n {
        for j in i + 1..n {
            out.push((i, j));
        }
    }
    out
}
