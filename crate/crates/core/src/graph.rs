//! Exact graph distributions for two and three nodes.
//!
//! An outcome is the vector of edge indicators in pair-index order
//! `(1,2), (1,3), ..., (n-1,n)`; its integer code has bit `k` set when the
//! `k`-th pair is an edge. For three nodes the outcome `(x12, x13, x23)` has
//! code `x12 + 2 x13 + 4 x23`.

use rayon::prelude::*;

use crate::connection::ConnectionModel;
use crate::distance::{joint_pdf3_weighted_mass, pair_pdf};
use crate::error::{Error, Result};
use crate::geometry::{pair_count, pair_index, pair_index_0, pairs_0, DiskDomain};
use crate::quadrature::{integrate_1d, QuadratureSettings};
use crate::scalar::Scalar;
use crate::union_find::UnionFind;

/// Largest number of pairs an integer code can hold.
pub const MAX_CODE_EDGES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgeVector {
    n: usize,
    bits: Vec<bool>,
}

impl EdgeVector {
    pub fn new(n: usize, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != pair_count(n) {
            return Err(Error::Argument(format!(
                "{} edge indicators given for {n} nodes, expected {}",
                bits.len(),
                pair_count(n)
            )));
        }
        Ok(Self { n, bits })
    }

    pub fn empty(n: usize) -> Self {
        Self {
            n,
            bits: vec![false; pair_count(n)],
        }
    }

    pub fn complete(n: usize) -> Self {
        Self {
            n,
            bits: vec![true; pair_count(n)],
        }
    }

    pub fn from_code(n: usize, code: u64) -> Result<Self> {
        let m = pair_count(n);
        if m > MAX_CODE_EDGES || (m < 64 && code >> m != 0) {
            return Err(Error::Argument(format!(
                "code {code} does not encode a graph on {n} nodes"
            )));
        }
        Ok(Self {
            n,
            bits: (0..m).map(|k| code >> k & 1 == 1).collect(),
        })
    }

    /// Integer code with bit `k` for pair index `k`; `None` beyond 64 pairs.
    pub fn code(&self) -> Option<u64> {
        if self.bits.len() > MAX_CODE_EDGES {
            return None;
        }
        Some(self.bits.iter().enumerate().map(|(k, &b)| (b as u64) << k).sum())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Edge indicator for the 1-based pair `(i, j)`.
    pub fn has_edge(&self, i: usize, j: usize) -> Result<bool> {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        Ok(self.bits[pair_index(i, j, self.n)?])
    }

    pub fn edge_count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_complete(&self) -> bool {
        self.bits.iter().all(|&b| b)
    }

    pub fn is_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        let mut uf = UnionFind::new(self.n);
        for (k, (i, j)) in pairs_0(self.n).into_iter().enumerate() {
            if self.bits[k] {
                uf.union(i, j);
            }
        }
        uf.components() == 1
    }

    /// The graph after relabelling node `v` (0-based) as `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.n];
        if perm.len() != self.n
            || perm
                .iter()
                .any(|&p| p >= self.n || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::Argument("relabelling must be a permutation of the nodes".into()));
        }
        let mut bits = vec![false; self.bits.len()];
        for (k, (i, j)) in pairs_0(self.n).into_iter().enumerate() {
            let (a, b) = (perm[i].min(perm[j]), perm[i].max(perm[j]));
            bits[pair_index_0(a, b, self.n)] = self.bits[k];
        }
        Ok(Self { n: self.n, bits })
    }

    /// Bit string in pair-index order, e.g. `"110"`.
    pub fn to_bit_string(&self) -> String {
        self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PmfMethod {
    Quadrature,
    MonteCarlo,
}

impl PmfMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            PmfMethod::Quadrature => "quadrature",
            PmfMethod::MonteCarlo => "monte_carlo",
        }
    }
}

/// Probability of every graph on `n` nodes, indexed by outcome code.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphPmf<T> {
    pub n: usize,
    pub probs: Vec<T>,
    pub method: PmfMethod,
    /// Quadrature: sum of per-entry error estimates. Monte Carlo: largest per-entry standard error.
    pub error_estimate: T,
}

impl<T: Scalar> GraphPmf<T> {
    pub fn new(n: usize, probs: Vec<T>, method: PmfMethod, error_estimate: T) -> Result<Self> {
        let m = pair_count(n);
        if m >= usize::BITS as usize || probs.len() != 1usize << m {
            return Err(Error::Argument(format!(
                "a pmf over graphs on {n} nodes needs 2^{m} entries, got {}",
                probs.len()
            )));
        }
        Ok(Self {
            n,
            probs,
            method,
            error_estimate,
        })
    }

    pub fn edges(&self) -> usize {
        pair_count(self.n)
    }

    pub fn total(&self) -> T {
        self.probs.iter().copied().sum()
    }

    pub fn prob(&self, outcome: &EdgeVector) -> Option<T> {
        outcome.code().and_then(|c| self.probs.get(c as usize).copied())
    }
}

/// Exact pmf for `n` nodes; only `n = 2` and `n = 3` have closed-form distance densities.
pub fn pmf_exact<T: Scalar>(
    n: usize,
    model: &ConnectionModel<T>,
    domain: &DiskDomain<T>,
    quad: &QuadratureSettings<T>,
) -> Result<GraphPmf<T>> {
    match n {
        2 => pmf_n2(model, domain, quad),
        3 => pmf_n3(model, domain, quad),
        0 | 1 => Err(Error::Argument(format!("a graph needs at least two nodes, got {n}"))),
        _ => Err(Error::Unsupported(format!(
            "no closed-form joint distance density for n = {n}; use the Monte Carlo estimator"
        ))),
    }
}

fn model_breakpoints<T: Scalar>(model: &ConnectionModel<T>, diam: T) -> Vec<T> {
    model
        .breakpoints()
        .into_iter()
        .filter(|&b| b > T::zero() && b < diam)
        .collect()
}

/// Two-node pmf: `P(edge) = ∫ pair_pdf(r) p(r) dr`.
pub fn pmf_n2<T: Scalar>(
    model: &ConnectionModel<T>,
    domain: &DiskDomain<T>,
    quad: &QuadratureSettings<T>,
) -> Result<GraphPmf<T>> {
    let diam = domain.diameter();
    let mut settings = quad.clone();
    settings.breakpoints = vec![model_breakpoints(model, diam)];
    let est = integrate_1d(
        |r| pair_pdf(r, domain).unwrap_or(T::zero()) * model.prob_unchecked(r),
        T::zero(),
        diam,
        &settings,
    )?;
    let p1 = est.value.max(T::zero()).min(T::one());
    GraphPmf::new(2, vec![T::one() - p1, p1], PmfMethod::Quadrature, est.error_estimate)
}

/// Three-node pmf from the joint side-length density, one integral per outcome.
pub fn pmf_n3<T: Scalar>(
    model: &ConnectionModel<T>,
    domain: &DiskDomain<T>,
    quad: &QuadratureSettings<T>,
) -> Result<GraphPmf<T>> {
    let special = model_breakpoints(model, domain.diameter());
    let entries: Vec<_> = (0u32..8)
        .into_par_iter()
        .map(|code| {
            let weight = |r: &[T; 3]| -> T {
                let mut w = T::one();
                for (k, &rk) in r.iter().enumerate() {
                    let p = model.prob_unchecked(rk);
                    w = w * if code >> k & 1 == 1 { p } else { T::one() - p };
                    if w == T::zero() {
                        break;
                    }
                }
                w
            };
            joint_pdf3_weighted_mass(domain, special.clone(), weight, quad)
        })
        .collect::<Result<_>>()?;
    let error = entries.iter().map(|e| e.error_estimate).sum();
    let probs = entries.into_iter().map(|e| e.value.max(T::zero())).collect();
    GraphPmf::new(3, probs, PmfMethod::Quadrature, error)
}

/// Shannon entropy in bits, with `0 log 0 = 0`.
pub fn entropy<T: Scalar>(pmf: &GraphPmf<T>) -> T {
    entropy_bits(&pmf.probs)
}

pub(crate) fn entropy_bits<T: Scalar>(probs: &[T]) -> T {
    let mut h = T::zero();
    for &p in probs {
        if p > T::zero() {
            h = h - p * p.log2();
        }
    }
    // -p log p rounds to -0.0 for a point mass.
    h.max(T::zero())
}

/// First-order bound on the entropy error implied by `pmf.error_estimate`:
/// `|dH| <= sum |dp| * max (|log2 p| + 1/ln 2)` over the support.
pub fn entropy_error_bound<T: Scalar>(pmf: &GraphPmf<T>) -> T {
    let worst = pmf
        .probs
        .iter()
        .filter(|&&p| p > T::zero())
        .map(|&p| p.log2().abs() + T::LOG2_E())
        .fold(T::zero(), T::max);
    pmf.error_estimate * worst
}

/// Probability that the graph is connected.
pub fn prob_connected<T: Scalar>(pmf: &GraphPmf<T>) -> T {
    pmf.probs
        .iter()
        .enumerate()
        .filter(|(code, _)| {
            EdgeVector::from_code(pmf.n, *code as u64)
                .map(|g| g.is_connected())
                .unwrap_or(false)
        })
        .map(|(_, &p)| p)
        .sum()
}

/// Probability that every edge is present.
pub fn prob_complete<T: Scalar>(pmf: &GraphPmf<T>) -> T {
    pmf.probs[pmf.probs.len() - 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad() -> QuadratureSettings<f64> {
        QuadratureSettings::with_tolerances(1e-7, 0.0)
    }

    #[test]
    fn edge_vector_codec() {
        for n in 2..=8 {
            let m = pair_count(n) as u32;
            for code in [0u64, 1, (1 << m) - 1, 0x5555_5555 & ((1 << m) - 1)] {
                assert_eq!(EdgeVector::from_code(n, code).unwrap().code(), Some(code));
            }
        }
        assert!(EdgeVector::from_code(3, 8).is_err());
        assert!(EdgeVector::new(3, vec![true; 2]).is_err());
    }

    #[test]
    fn connectivity_of_three_node_outcomes() {
        let g = |bits: [bool; 3]| EdgeVector::new(3, bits.to_vec()).unwrap();
        assert!(g([true, true, false]).is_connected());
        assert!(!g([true, false, false]).is_connected());
        assert!(g([false, true, true]).is_connected());
        assert!(!g([false, false, false]).is_connected());
        assert!(g([true, true, true]).is_complete());
    }

    #[test]
    fn connected_codes_for_three_nodes_are_the_four_term_sum() {
        let connected: Vec<u64> = (0..8)
            .filter(|&c| EdgeVector::from_code(3, c).unwrap().is_connected())
            .collect();
        // (0,1,1), (1,0,1), (1,1,0), (1,1,1)
        assert_eq!(connected, vec![3, 5, 6, 7]);
    }

    #[test]
    fn relabel_moves_edges() {
        let g = EdgeVector::new(3, vec![true, false, false]).unwrap();
        // Swap nodes 2 and 3: edge (1,2) becomes (1,3).
        let h = g.relabel(&[0, 2, 1]).unwrap();
        assert_eq!(h.bits(), &[false, true, false]);
        assert!(g.relabel(&[0, 0, 1]).is_err());
    }

    #[test]
    fn entropy_examples() {
        let point = GraphPmf::new(
            3,
            vec![0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
            PmfMethod::Quadrature,
            0.0,
        )
        .unwrap();
        assert_eq!(entropy(&point), 0.0);
        let uniform = GraphPmf::new(3, vec![0.125f64; 8], PmfMethod::Quadrature, 0.0).unwrap();
        assert!((entropy(&uniform) - 3.0).abs() < 1e-15);
        let fair = GraphPmf::new(2, vec![0.5, 0.5], PmfMethod::Quadrature, 0.0).unwrap();
        assert_eq!(entropy(&fair), 1.0);
    }

    #[test]
    fn n2_extremes() {
        let disk = DiskDomain::unit();
        let full = pmf_n2(&ConnectionModel::hard_disk(1.0).unwrap(), &disk, &quad()).unwrap();
        assert!((full.probs[1] - 1.0).abs() < 1e-9);
        let none = pmf_n2(&ConnectionModel::hard_disk(0.0).unwrap(), &disk, &quad()).unwrap();
        assert_eq!(none.probs[1], 0.0);
        assert_eq!(entropy(&none), 0.0);
    }

    #[test]
    fn n3_extremes() {
        let disk = DiskDomain::unit();
        let full = pmf_n3(&ConnectionModel::hard_disk(1.0).unwrap(), &disk, &quad()).unwrap();
        assert!((full.probs[7] - 1.0).abs() < 1e-3);
        assert!(full.probs[..7].iter().all(|&p| p <= 1e-3));
        assert!((prob_connected(&full) - 1.0).abs() < 1e-3);
        assert!((prob_complete(&full) - 1.0).abs() < 1e-3);
        let none = pmf_n3(&ConnectionModel::hard_disk(0.0).unwrap(), &disk, &quad()).unwrap();
        assert!((none.probs[0] - 1.0).abs() < 1e-3);
        assert_eq!(prob_complete(&none), 0.0);
    }

    #[test]
    fn n3_sums_to_one_and_is_symmetric() {
        let disk = DiskDomain::unit();
        for model in [
            ConnectionModel::hard_disk(0.4).unwrap(),
            ConnectionModel::exponential_soft(0.3, 2.0).unwrap(),
        ] {
            let pmf = pmf_n3(&model, &disk, &quad()).unwrap();
            assert!((pmf.total() - 1.0).abs() < 1e-6, "{model}: {}", pmf.total());
            let tol = 1e-6;
            assert!((pmf.probs[1] - pmf.probs[2]).abs() < tol && (pmf.probs[2] - pmf.probs[4]).abs() < tol);
            assert!((pmf.probs[3] - pmf.probs[5]).abs() < tol && (pmf.probs[5] - pmf.probs[6]).abs() < tol);
            assert!(prob_complete(&pmf) <= prob_connected(&pmf));
        }
    }

    #[test]
    fn n3_marginal_edge_probability_matches_n2() {
        let disk = DiskDomain::unit();
        let model = ConnectionModel::hard_disk(0.45).unwrap();
        let p2 = pmf_n2(&model, &disk, &quad()).unwrap().probs[1];
        let p3 = pmf_n3(&model, &disk, &quad()).unwrap();
        let edge12: f64 = (0..8).filter(|c| c & 1 == 1).map(|c| p3.probs[c]).sum();
        assert!((edge12 - p2).abs() < 1e-6);
    }

    #[test]
    fn larger_graphs_are_unsupported() {
        let disk = DiskDomain::unit();
        let m = ConnectionModel::hard_disk(0.4).unwrap();
        assert!(matches!(pmf_exact(4, &m, &disk, &quad()), Err(Error::Unsupported(_))));
        assert!(matches!(pmf_exact(1, &m, &disk, &quad()), Err(Error::Argument(_))));
    }
}
