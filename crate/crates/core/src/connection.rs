//! Pair connection functions `p(r)`: the probability that two nodes at
//! distance `r` share an edge.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub enum ConnectionModel<T> {
    /// Edge iff `r < r0`.
    HardDisk { r0: T },
    /// `p(r) = exp(-(r/r0)^beta)`.
    ExponentialSoft { r0: T, beta: T },
    /// Linear interpolation through `(r, p)` knots, clamped outside them.
    Tabulated { knots: Vec<(T, T)> },
}

impl<T: Scalar> ConnectionModel<T> {
    pub fn hard_disk(r0: T) -> Result<Self> {
        if !(r0 >= T::zero()) || !r0.is_finite() {
            return Err(Error::domain("r0", r0.as_f64(), "[0, inf)"));
        }
        Ok(Self::HardDisk { r0 })
    }

    pub fn exponential_soft(r0: T, beta: T) -> Result<Self> {
        if !(r0 > T::zero()) || !r0.is_finite() {
            return Err(Error::domain("r0", r0.as_f64(), "(0, inf)"));
        }
        if !(beta > T::zero()) || !beta.is_finite() {
            return Err(Error::domain("beta", beta.as_f64(), "(0, inf)"));
        }
        Ok(Self::ExponentialSoft { r0, beta })
    }

    pub fn tabulated(knots: Vec<(T, T)>) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::Argument("a tabulated model needs at least one knot".into()));
        }
        for w in knots.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(Error::Argument(format!(
                    "knot distances must be strictly increasing ({} then {})",
                    w[0].0.as_f64(),
                    w[1].0.as_f64()
                )));
            }
        }
        for &(r, p) in &knots {
            if !r.is_finite() || !(p >= T::zero() && p <= T::one()) {
                return Err(Error::Argument(format!(
                    "knot ({}, {}) must have a finite distance and p in [0, 1]",
                    r.as_f64(),
                    p.as_f64()
                )));
            }
        }
        Ok(Self::Tabulated { knots })
    }

    /// Reads knots from a CSV file with an `r,p` header.
    pub fn from_csv(path: impl AsRef<Path>) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_path(path.as_ref())?;
        let headers = reader.headers()?.clone();
        let col = |name: &str| {
            headers
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::Parse(format!("table: missing `{name}` column")))
        };
        let (ri, pi) = (col("r")?, col("p")?);
        let mut knots = Vec::new();
        for record in reader.records() {
            let record = record?;
            let field = |i: usize| -> Result<T> {
                let raw = record.get(i).unwrap_or("");
                let v: f64 = raw
                    .parse()
                    .map_err(|_| Error::Parse(format!("table: `{raw}` is not a number")))?;
                Ok(T::lit(v))
            };
            knots.push((field(ri)?, field(pi)?));
        }
        Self::tabulated(knots)
    }

    /// Parses `hard:r0=0.3`, `exp:r0=0.3,beta=2` or `table:@path.csv`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (kind, params) = spec
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("model `{spec}`: expected `<kind>:<params>`")))?;
        match kind.trim() {
            "hard" => {
                let kv = key_values(params)?;
                only_keys(&kv, &["r0"], spec)?;
                Self::hard_disk(T::lit(lookup(&kv, "r0", spec)?))
            }
            "exp" => {
                let kv = key_values(params)?;
                only_keys(&kv, &["r0", "beta"], spec)?;
                Self::exponential_soft(T::lit(lookup(&kv, "r0", spec)?), T::lit(lookup(&kv, "beta", spec)?))
            }
            "table" => {
                let path = params
                    .trim()
                    .strip_prefix('@')
                    .ok_or_else(|| Error::Parse(format!("model `{spec}`: expected `table:@path.csv`")))?;
                Self::from_csv(path)
            }
            other => Err(Error::Parse(format!("model `{spec}`: unknown kind `{other}`"))),
        }
    }

    /// `p(r)`.
    pub fn connect_prob(&self, r: T) -> Result<T> {
        if !(r >= T::zero()) {
            return Err(Error::domain("distance", r.as_f64(), "[0, inf)"));
        }
        Ok(self.prob_unchecked(r))
    }

    #[inline]
    pub(crate) fn prob_unchecked(&self, r: T) -> T {
        match self {
            Self::HardDisk { r0 } => {
                if r < *r0 {
                    T::one()
                } else {
                    T::zero()
                }
            }
            Self::ExponentialSoft { r0, beta } => (-(r / *r0).powf(*beta)).exp(),
            Self::Tabulated { knots } => interpolate(knots, r),
        }
    }

    /// Draws an edge indicator with probability `p(r)` from one uniform.
    pub fn sample_edge<R: Rng + ?Sized>(&self, r: T, rng: &mut R) -> Result<bool> {
        let p = self.connect_prob(r)?;
        Ok(edge_from_uniform(p, rng.random()))
    }

    /// Distances where `p` is not smooth; used as quadrature breakpoints.
    pub fn breakpoints(&self) -> Vec<T> {
        match self {
            Self::HardDisk { r0 } => vec![*r0],
            Self::ExponentialSoft { .. } => Vec::new(),
            Self::Tabulated { knots } => knots.iter().map(|k| k.0).collect(),
        }
    }

    /// Kind and parameters in the textual spec format (tables print as `table:<n> knots`).
    pub fn describe(&self) -> String {
        self.to_string()
    }
}

#[inline]
pub(crate) fn edge_from_uniform<T: Scalar>(p: T, u: f64) -> bool {
    u < p.as_f64()
}

fn interpolate<T: Scalar>(knots: &[(T, T)], r: T) -> T {
    let first = knots[0];
    let last = knots[knots.len() - 1];
    if r <= first.0 {
        return first.1;
    }
    if r >= last.0 {
        return last.1;
    }
    let idx = knots.partition_point(|k| k.0 <= r);
    let (r0, p0) = knots[idx - 1];
    let (r1, p1) = knots[idx];
    p0 + (p1 - p0) * (r - r0) / (r1 - r0)
}

fn key_values(params: &str) -> Result<Vec<(String, f64)>> {
    params
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|kv| {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("parameter `{kv}`: expected key=value")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("parameter `{kv}`: not a number")))?;
            Ok((k.trim().to_string(), v))
        })
        .collect()
}

fn only_keys(kv: &[(String, f64)], allowed: &[&str], spec: &str) -> Result<()> {
    match kv.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
        Some((k, _)) => Err(Error::Parse(format!("model `{spec}`: unknown parameter `{k}`"))),
        None => Ok(()),
    }
}

fn lookup(kv: &[(String, f64)], key: &str, spec: &str) -> Result<f64> {
    kv.iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| *v)
        .ok_or_else(|| Error::Parse(format!("model `{spec}`: missing `{key}`")))
}

impl<T: Scalar> FromStr for ConnectionModel<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl<T: Scalar> fmt::Display for ConnectionModel<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::HardDisk { r0 } => write!(f, "hard:r0={r0}"),
            Self::ExponentialSoft { r0, beta } => write!(f, "exp:r0={r0},beta={beta}"),
            Self::Tabulated { knots } => write!(f, "table:{} knots", knots.len()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::io::Write;

    #[test]
    fn hard_disk_boundary() {
        let m = ConnectionModel::hard_disk(0.3).unwrap();
        assert_eq!(m.connect_prob(0.2).unwrap(), 1.0);
        assert_eq!(m.connect_prob(0.3).unwrap(), 0.0);
        assert_eq!(m.connect_prob(0.5).unwrap(), 0.0);
        assert!(m.connect_prob(-0.1).is_err());
    }

    #[test]
    fn exponential_at_zero() {
        let m = ConnectionModel::exponential_soft(1.0, 2.0).unwrap();
        assert_eq!(m.connect_prob(0.0).unwrap(), 1.0);
        assert!((m.connect_prob(1.0).unwrap() - (-1f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn invalid_parameters() {
        assert!(ConnectionModel::hard_disk(-0.1).is_err());
        assert!(ConnectionModel::exponential_soft(0.0, 2.0).is_err());
        assert!(ConnectionModel::exponential_soft(1.0, -2.0).is_err());
        assert!(ConnectionModel::<f64>::tabulated(vec![]).is_err());
        assert!(ConnectionModel::tabulated(vec![(0.1, 0.5), (0.1, 0.4)]).is_err());
        assert!(ConnectionModel::tabulated(vec![(0.1, 1.5)]).is_err());
    }

    #[test]
    fn tabulated_interpolation_and_clamping() {
        let m = ConnectionModel::tabulated(vec![(0.1, 1.0), (0.3, 0.5), (0.5, 0.0)]).unwrap();
        assert_eq!(m.connect_prob(0.0).unwrap(), 1.0);
        assert_eq!(m.connect_prob(0.2).unwrap(), 0.75);
        assert_eq!(m.connect_prob(0.3).unwrap(), 0.5);
        assert_eq!(m.connect_prob(0.9).unwrap(), 0.0);
    }

    #[test]
    fn parse_specs() {
        assert_eq!(
            "hard:r0=0.3".parse::<ConnectionModel<f64>>().unwrap(),
            ConnectionModel::HardDisk { r0: 0.3 }
        );
        assert_eq!(
            ConnectionModel::<f64>::parse("exp:r0=0.3,beta=2").unwrap(),
            ConnectionModel::ExponentialSoft { r0: 0.3, beta: 2.0 }
        );
        for bad in [
            "hard",
            "hard:r0=x",
            "hard:r1=0.3",
            "exp:r0=0.3",
            "disk:r0=1",
            "table:path.csv",
            "hard:r0=-1",
        ] {
            assert!(ConnectionModel::<f64>::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn parse_table_file() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "r,p\n0.0,1.0\n0.5,0.25\n1.0,0.0").unwrap();
        let spec = format!("table:@{}", file.path().display());
        let m = ConnectionModel::<f64>::parse(&spec).unwrap();
        assert_eq!(m.connect_prob(0.25).unwrap(), 0.625);

        let mut headerless = tempfile::NamedTempFile::new().unwrap();
        writeln!(headerless, "0.0,1.0\n0.5,0.25").unwrap();
        assert!(ConnectionModel::<f64>::from_csv(headerless.path()).is_err());
    }

    #[test]
    fn sample_edge_extremes_and_mean() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let hard = ConnectionModel::hard_disk(0.3).unwrap();
        for _ in 0..1000 {
            assert!(hard.sample_edge(0.1, &mut rng).unwrap());
            assert!(!hard.sample_edge(0.5, &mut rng).unwrap());
        }
        let soft = ConnectionModel::exponential_soft(1.0, 2.0).unwrap();
        let n = 1_000_000;
        let hits = (0..n).filter(|_| soft.sample_edge(1.0, &mut rng).unwrap()).count();
        let p = (-1f64).exp();
        let se = (p * (1.0 - p) / n as f64).sqrt();
        assert!((hits as f64 / n as f64 - p).abs() < 3.0 * se);
    }

    fn any_model() -> impl Strategy<Value = ConnectionModel<f64>> {
        prop_oneof![
            (0.0f64..2.0).prop_map(|r0| ConnectionModel::hard_disk(r0).unwrap()),
            (0.01f64..2.0, 0.1f64..8.0).prop_map(|(r0, b)| ConnectionModel::exponential_soft(r0, b).unwrap()),
            proptest::collection::vec((0.001f64..0.5, 0.0f64..=1.0), 1..8).prop_map(|steps| {
                let mut r = 0.0;
                let knots = steps
                    .into_iter()
                    .map(|(dr, p)| {
                        r += dr;
                        (r, p)
                    })
                    .collect();
                ConnectionModel::tabulated(knots).unwrap()
            }),
        ]
    }

    proptest! {
        #[test]
        fn probability_in_unit_interval(m in any_model(), r in 0.0f64..5.0) {
            let p = m.connect_prob(r).unwrap();
            prop_assert!((0.0..=1.0).contains(&p));
        }

        #[test]
        fn hard_disk_nonincreasing(r0 in 0.0f64..2.0, a in 0.0f64..3.0, b in 0.0f64..3.0) {
            let m = ConnectionModel::hard_disk(r0).unwrap();
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            prop_assert!(m.connect_prob(lo).unwrap() >= m.connect_prob(hi).unwrap());
        }

        #[test]
        fn exponential_strictly_decreasing(r0 in 0.5f64..2.0, beta in 0.5f64..4.0, a in 0.01f64..1.0, gap in 0.01f64..0.5) {
            let m = ConnectionModel::exponential_soft(r0, beta).unwrap();
            prop_assert!(m.connect_prob(a).unwrap() > m.connect_prob(a + gap).unwrap());
        }
    }
}
