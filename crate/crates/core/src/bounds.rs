//! Upper bounds on the graph entropy from subgraph entropies.
//!
//! Each edge indicator of the `n`-node graph lies in `C(n-2, m-2)` of the
//! `C(n, m)` induced subgraphs on `m` nodes, so by Shearer's lemma
//! `H(G_n) <= C(n, m) / C(n-2, m-2) * H(G_m) = n(n-1) / (m(m-1)) * H(G_m)`.

use std::collections::BTreeMap;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `C(n, k)`, or `None` on overflow.
pub fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return None;
        }
    }
    Some(acc as u64)
}

/// Factor multiplying `H(G_m)` in the bound on `H(G_n)`, for `2 <= m < n`.
pub fn shearer_factor(n: usize, m: usize) -> Result<Ratio<u64>> {
    if m < 2 || m >= n {
        return Err(Error::Argument(format!("need 2 <= m < n, got n = {n}, m = {m}")));
    }
    let (n, m) = (n as u64, m as u64);
    let num = n
        .checked_mul(n - 1)
        .ok_or_else(|| Error::Argument(format!("n = {n} is too large")))?;
    Ok(Ratio::new(num, m * (m - 1)))
}

/// The same factor from the cover counts `C(n, m) / C(n-2, m-2)`.
pub fn shearer_factor_from_cover(n: usize, m: usize) -> Result<Ratio<u64>> {
    if m < 2 || m >= n {
        return Err(Error::Argument(format!("need 2 <= m < n, got n = {n}, m = {m}")));
    }
    let (n, m) = (n as u64, m as u64);
    let overflow = || Error::Argument(format!("binomial coefficients overflow for n = {n}, m = {m}"));
    let subsets = binomial(n, m).ok_or_else(overflow)?;
    let covering = binomial(n - 2, m - 2).ok_or_else(overflow)?;
    Ok(Ratio::new(subsets, covering))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    Quadrature,
    MonteCarlo,
    ClosedForm,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::Quadrature => "quadrature",
            Provenance::MonteCarlo => "monte_carlo",
            Provenance::ClosedForm => "closed_form",
        }
    }
}

/// An entropy value in bits with its origin and absolute uncertainty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasuredEntropy<T> {
    pub bits: T,
    pub provenance: Provenance,
    pub uncertainty: T,
}

impl<T: Scalar> MeasuredEntropy<T> {
    pub fn new(bits: T, provenance: Provenance, uncertainty: T) -> Self {
        Self {
            bits,
            provenance,
            uncertainty,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundEntry<T> {
    pub m: usize,
    pub h_m: T,
    pub factor: Ratio<u64>,
    /// Upper bound on `H(G_n)`; for `m = n` this is `H(G_n)` itself.
    pub bound: T,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundChain<T> {
    pub n: usize,
    /// Ordered by `m` descending.
    pub entries: Vec<BoundEntry<T>>,
    /// Inputs whose per-edge entropy `H(G_m) / C(m, 2)` increases with `m`
    /// beyond their stated uncertainty.
    pub warnings: Vec<String>,
}

impl<T: Scalar> BoundChain<T> {
    pub fn tightest(&self) -> Option<&BoundEntry<T>> {
        self.entries
            .iter()
            .min_by(|a, b| a.bound.partial_cmp(&b.bound).unwrap_or(std::cmp::Ordering::Equal))
    }

    pub fn entry(&self, m: usize) -> Option<&BoundEntry<T>> {
        self.entries.iter().find(|e| e.m == m)
    }
}

/// Bounds on `H(G_n)` from every supplied `H(G_m)`, `2 <= m <= n`. `H(G_2)` is required.
pub fn bound_chain<T: Scalar>(n: usize, values: &BTreeMap<usize, MeasuredEntropy<T>>) -> Result<BoundChain<T>> {
    if n < 2 {
        return Err(Error::Argument(format!("a graph needs at least two nodes, got {n}")));
    }
    if !values.contains_key(&2) {
        return Err(Error::Argument("the two-node entropy H(G_2) is required".into()));
    }
    if let Some((&m, _)) = values.iter().find(|(&m, _)| m < 2 || m > n) {
        return Err(Error::Argument(format!("subgraph size {m} outside [2, {n}]")));
    }
    let mut entries = Vec::new();
    for (&m, h) in values.iter().rev() {
        if !(h.bits >= T::zero()) {
            return Err(Error::Argument(format!(
                "H(G_{m}) must be a nonnegative number of bits"
            )));
        }
        let factor = if m == n {
            Ratio::from_integer(1)
        } else {
            shearer_factor(n, m)?
        };
        let bound = h.bits * T::lit(*factor.numer() as f64) / T::lit(*factor.denom() as f64);
        entries.push(BoundEntry {
            m,
            h_m: h.bits,
            factor,
            bound,
            provenance: h.provenance,
        });
    }

    let mut warnings = Vec::new();
    let per_edge = |m: usize, x: T| x / T::lit((m * (m - 1) / 2) as f64);
    for pair in values.iter().collect::<Vec<_>>().windows(2) {
        let ((&small, hs), (&large, hl)) = (pair[0], pair[1]);
        let gap = per_edge(large, hl.bits) - per_edge(small, hs.bits);
        let slack = per_edge(large, hl.uncertainty) + per_edge(small, hs.uncertainty);
        if gap > slack {
            warnings.push(format!(
                "per-edge entropy rises from m = {small} ({}) to m = {large} ({}), beyond the stated uncertainty",
                per_edge(small, hs.bits),
                per_edge(large, hl.bits)
            ));
        }
    }
    Ok(BoundChain { n, entries, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_forms_agree() {
        for n in 3..40 {
            for m in 2..n {
                assert_eq!(shearer_factor(n, m).unwrap(), shearer_factor_from_cover(n, m).unwrap());
            }
        }
        assert_eq!(shearer_factor(5, 3).unwrap(), Ratio::new(10, 3));
        assert!(shearer_factor(3, 3).is_err());
        assert!(shearer_factor(4, 1).is_err());
    }

    #[test]
    fn small_chain() {
        let mut v = BTreeMap::new();
        v.insert(2, MeasuredEntropy::new(1.0f64, Provenance::Quadrature, 0.0));
        v.insert(3, MeasuredEntropy::new(2.8, Provenance::Quadrature, 0.0));
        let chain = bound_chain(5, &v).unwrap();
        assert_eq!(chain.entries[0].m, 3);
        assert!((chain.entry(3).unwrap().bound - 28.0 / 3.0).abs() < 1e-12);
        assert_eq!(chain.entry(2).unwrap().bound, 10.0);
        assert_eq!(chain.tightest().unwrap().m, 3);
        assert!(chain.warnings.is_empty());
    }

    #[test]
    fn increasing_per_edge_entropy_warns() {
        let mut v = BTreeMap::new();
        v.insert(2, MeasuredEntropy::new(0.5, Provenance::ClosedForm, 0.0));
        v.insert(3, MeasuredEntropy::new(2.0, Provenance::MonteCarlo, 0.01));
        let chain = bound_chain(4, &v).unwrap();
        assert_eq!(chain.warnings.len(), 1);
    }

    #[test]
    fn missing_two_node_entropy() {
        let mut v = BTreeMap::new();
        v.insert(3, MeasuredEntropy::new(2.0, Provenance::Quadrature, 0.0));
        assert!(bound_chain(5, &v).is_err());
    }
}
