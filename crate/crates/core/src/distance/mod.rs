//! Closed-form densities of distances between uniform points in a disk.
//!
//! [`joint_pdf3`] is the joint density of the three side lengths of the
//! triangle spanned by three independent uniform points. It has four
//! branches selected by whether the triangle is obtuse and whether its
//! circumdiameter `d` fits inside the disk (`d <= D`):
//!
//! | case | density |
//! |------|---------|
//! | obtuse, `d <= D` | `64d/(π²D⁴) {Σ[φ(r/D) - (d/D)² φ(r/d)] - π/2 (1 - d²/D²) + 2 (d/D)² φ(r̄/d)}` |
//! | acute, `d <= D`  | `64d/(π²D⁴) {Σ[φ(r/D) - (d/D)² φ(r/d)] - π/2 (1 - d²/D²)}` |
//! | obtuse, `d > D`  | `128d/(π²D⁴) φ(r̄/D)` |
//! | acute, `d > D`   | `0` |
//!
//! The [`conditional`] submodule holds the construction it comes from
//! (conditioning on the largest centred enclosing diameter), which is kept as
//! an independent numerical route to the same density.

mod conditional;
mod region;

pub use conditional::{
    angle_pdf_trapezoid, conditional_joint_pdf3, joint_pdf3_via_conditioning, pair_pdf_on_circle, sbar_cdf, sbar_pdf,
    vertex_on_circle_pdf3, ConditionalContext,
};
pub use region::{joint_pdf3_box_mass, joint_pdf3_marginal_r12, joint_pdf3_weighted_mass, TriangleRegion};

use crate::error::{Error, Result};
use crate::geometry::{
    phi_clamped, quantities_sorted, DiskDomain, TriangleQuantities, TriangleShape, TriangleSides,
    DEFAULT_DEGENERACY_EPS,
};
use crate::scalar::Scalar;

/// Density of the distance between two uniform points in the disk:
/// `f(r) = 16 r / (π D²) φ(r/D)` on `[0, D]`.
pub fn pair_pdf<T: Scalar>(r: T, domain: &DiskDomain<T>) -> Result<T> {
    if !(r >= T::zero()) || !r.is_finite() {
        return Err(Error::domain("distance", r.as_f64(), "[0, inf)"));
    }
    let diam = domain.diameter();
    if r > diam {
        return Ok(T::zero());
    }
    Ok(T::lit(16.0) * r / (T::PI() * diam * diam) * phi_clamped(r / diam))
}

/// Branch of the three-distance joint density.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum JointPdfCase {
    ObtuseInscribed,
    AcuteInscribed,
    ObtuseOutscribed,
    /// Outside the support, or acute with `d > D`.
    Zero,
}

impl JointPdfCase {
    pub fn tag(&self) -> &'static str {
        match self {
            JointPdfCase::ObtuseInscribed => "obtuse_inscribed",
            JointPdfCase::AcuteInscribed => "acute_inscribed",
            JointPdfCase::ObtuseOutscribed => "obtuse_outscribed",
            JointPdfCase::Zero => "zero",
        }
    }

    fn select<T: PartialOrd>(shape: TriangleShape, d: Option<T>, diam: T) -> Self {
        match (shape, d) {
            (_, None) => JointPdfCase::Zero,
            (TriangleShape::Obtuse, Some(d)) if d <= diam => JointPdfCase::ObtuseInscribed,
            (TriangleShape::AcuteOrRight, Some(d)) if d <= diam => JointPdfCase::AcuteInscribed,
            (TriangleShape::Obtuse, Some(_)) => JointPdfCase::ObtuseOutscribed,
            (TriangleShape::AcuteOrRight, Some(_)) => JointPdfCase::Zero,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointPdf<T> {
    pub density: T,
    pub case: JointPdfCase,
    pub quantities: TriangleQuantities<T>,
}

/// Joint density of `(R12, R13, R23)` for three uniform points in the disk.
///
/// Sides are sorted before evaluation, so the result is bit-identical under
/// every permutation of the arguments. Degenerate triples and triples with a
/// side longer than `D` have density zero.
pub fn joint_pdf3<T: Scalar>(sides: &TriangleSides<T>, domain: &DiskDomain<T>) -> JointPdf<T> {
    let s = sides.sorted();
    let quantities = quantities_sorted(s, T::lit(DEFAULT_DEGENERACY_EPS));
    let diam = domain.diameter();
    let case = if quantities.rbar > diam {
        JointPdfCase::Zero
    } else {
        JointPdfCase::select(quantities.shape, quantities.circumdiameter, diam)
    };
    let density = match quantities.circumdiameter {
        Some(d) => branch_value(s, d, diam, case),
        None => T::zero(),
    };
    JointPdf {
        density,
        case,
        quantities,
    }
}

/// Density only, from ascending sides; the hot path for integration.
#[inline]
pub(crate) fn joint_density_sorted<T: Scalar>(s: [T; 3], diam: T) -> T {
    if s[2] > diam {
        return T::zero();
    }
    let q = quantities_sorted(s, T::lit(DEFAULT_DEGENERACY_EPS));
    let case = JointPdfCase::select(q.shape, q.circumdiameter, diam);
    match q.circumdiameter {
        Some(d) => branch_value(s, d, diam, case),
        None => T::zero(),
    }
}

/// Evaluates the formula of a chosen branch regardless of which branch the
/// triple falls in. Used to check continuity across the case boundaries.
pub fn joint_pdf3_branch<T: Scalar>(sides: &TriangleSides<T>, domain: &DiskDomain<T>, case: JointPdfCase) -> Result<T> {
    let s = sides.sorted();
    let q = quantities_sorted(s, T::lit(DEFAULT_DEGENERACY_EPS));
    let d = q
        .circumdiameter
        .ok_or_else(|| Error::Argument("branch formulas need a nondegenerate triangle".into()))?;
    Ok(branch_value(s, d, domain.diameter(), case))
}

fn branch_value<T: Scalar>(s: [T; 3], d: T, diam: T, case: JointPdfCase) -> T {
    let pi = T::PI();
    let d4 = diam * diam * diam * diam;
    let rbar = s[2];
    let value = match case {
        JointPdfCase::Zero => return T::zero(),
        JointPdfCase::ObtuseOutscribed => T::lit(128.0) * d / (pi * pi * d4) * phi_clamped(rbar / diam),
        JointPdfCase::AcuteInscribed | JointPdfCase::ObtuseInscribed => {
            let ratio2 = (d / diam) * (d / diam);
            let mut brace = T::zero();
            for &r in &s {
                brace = brace + (phi_clamped(r / diam) - ratio2 * phi_clamped(r / d));
            }
            brace = brace - pi / T::lit(2.0) * (T::one() - ratio2);
            if case == JointPdfCase::ObtuseInscribed {
                brace = brace + T::lit(2.0) * ratio2 * phi_clamped(rbar / d);
            }
            T::lit(64.0) * d / (pi * pi * d4) * brace
        }
    };
    value.max(T::zero())
}
