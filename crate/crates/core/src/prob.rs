//! Probability vectors, stochastic matrices and joint distributions over finite alphabets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Entries at or below this value are treated as outside the support.
pub const SUPPORT_TOL: f64 = 1e-12;
/// Tolerance on the total mass.
pub const SUM_TOL: f64 = 1e-12;
/// Largest alphabet accepted.
pub const MAX_ALPHABET: usize = 64;

fn check_vector(v: &[f64], what: &str) -> Result<()> {
    if v.is_empty() {
        return Err(Error::InvalidPmf(format!("{what}: empty")));
    }
    if v.len() > MAX_ALPHABET {
        return Err(Error::InvalidPmf(format!(
            "{what}: alphabet of size {} exceeds {MAX_ALPHABET}",
            v.len()
        )));
    }
    if let Some(x) = v.iter().find(|x| !x.is_finite() || **x < 0.0) {
        return Err(Error::InvalidPmf(format!("{what}: bad entry {x}")));
    }
    Ok(())
}

/// A probability mass function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Pmf {
    probs: Vec<f64>,
}

impl Pmf {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        check_vector(&probs, "pmf")?;
        let s: f64 = probs.iter().sum();
        if (s - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidPmf(format!("sum is {s}")));
        }
        Ok(Pmf { probs })
    }

    /// Normalises non-negative weights.
    pub fn from_weights(w: Vec<f64>) -> Result<Self> {
        check_vector(&w, "weights")?;
        let s: f64 = w.iter().sum();
        if s <= 0.0 {
            return Err(Error::DegenerateDistribution("all weights are zero".into()));
        }
        Ok(Pmf {
            probs: w.into_iter().map(|x| x / s).collect(),
        })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidPmf("empty alphabet".into()));
        }
        Pmf::new(vec![1.0 / n as f64; n]).or_else(|_| Pmf::from_weights(vec![1.0; n]))
    }

    pub fn point_mass(n: usize, at: usize) -> Result<Self> {
        if at >= n {
            return Err(Error::InvalidPmf(format!("index {at} outside alphabet {n}")));
        }
        let mut p = vec![0.0; n];
        p[at] = 1.0;
        Pmf::new(p)
    }

    #[inline]
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Indices with `p(x) > 1e-12`.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.probs[i] > SUPPORT_TOL)
            .collect()
    }

    pub fn has_full_support(&self) -> bool {
        self.probs.iter().all(|&p| p > SUPPORT_TOL)
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.probs
    }
}

impl TryFrom<Vec<f64>> for Pmf {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Pmf::new(v)
    }
}

impl From<Pmf> for Vec<f64> {
    fn from(p: Pmf) -> Self {
        p.probs
    }
}

/// A stochastic matrix whose rows are indexed by the conditioning variable.
///
/// For a channel `p(g|x)` the rows are indexed by `x` and the columns by `g`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct CondPmf {
    rows: Vec<Vec<f64>>,
}

impl CondPmf {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidPmf("conditional with no rows".into()));
        }
        if rows.len() > MAX_ALPHABET {
            return Err(Error::InvalidPmf("too many rows".into()));
        }
        let n = rows[0].len();
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::ShapeMismatch(format!(
                    "row {i} has length {}, expected {n}",
                    r.len()
                )));
            }
            Pmf::new(r.clone()).map_err(|e| Error::InvalidPmf(format!("row {i}: {e}")))?;
        }
        Ok(CondPmf { rows })
    }

    /// Normalises each row of a non-negative matrix.
    pub fn from_weights(rows: Vec<Vec<f64>>) -> Result<Self> {
        let rows = rows
            .into_iter()
            .map(|r| Pmf::from_weights(r).map(Pmf::into_vec))
            .collect::<Result<Vec<_>>>()?;
        CondPmf::new(rows)
    }

    pub fn identity(n: usize) -> Result<Self> {
        CondPmf::new(
            (0..n)
                .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
                .collect(),
        )
    }

    /// Every row equal to `q`.
    pub fn constant(n_rows: usize, q: &Pmf) -> Result<Self> {
        CondPmf::new(vec![q.probs().to_vec(); n_rows])
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i]
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.rows[i][j]
    }

    /// Number of rows (conditioning alphabet).
    pub fn n_in(&self) -> usize {
        self.rows.len()
    }

    /// Number of columns (output alphabet).
    pub fn n_out(&self) -> usize {
        self.rows[0].len()
    }

    /// Matrix product: post-process the output with `post` (rows indexed by this output).
    pub fn compose(&self, post: &CondPmf) -> Result<CondPmf> {
        if post.n_in() != self.n_out() {
            return Err(Error::ShapeMismatch(format!(
                "post-processing expects {} inputs, got {}",
                post.n_in(),
                self.n_out()
            )));
        }
        let rows = self
            .rows
            .iter()
            .map(|r| {
                (0..post.n_out())
                    .map(|k| r.iter().enumerate().map(|(g, v)| v * post.get(g, k)).sum())
                    .collect()
            })
            .collect();
        CondPmf::from_weights(rows)
    }
}

impl TryFrom<Vec<Vec<f64>>> for CondPmf {
    type Error = Error;

    fn try_from(v: Vec<Vec<f64>>) -> Result<Self> {
        CondPmf::new(v)
    }
}

impl From<CondPmf> for Vec<Vec<f64>> {
    fn from(c: CondPmf) -> Self {
        c.rows
    }
}

/// A joint distribution `p(x, g)`, rows indexed by `x` and columns by `g`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct JointPmf {
    p: Vec<Vec<f64>>,
}

impl JointPmf {
    pub fn new(p: Vec<Vec<f64>>) -> Result<Self> {
        if p.is_empty() || p[0].is_empty() {
            return Err(Error::InvalidPmf("empty joint".into()));
        }
        if p.len() > MAX_ALPHABET || p[0].len() > MAX_ALPHABET {
            return Err(Error::InvalidPmf("joint alphabet too large".into()));
        }
        let n = p[0].len();
        let mut s = 0.0;
        for (i, r) in p.iter().enumerate() {
            if r.len() != n {
                return Err(Error::ShapeMismatch(format!("joint row {i} has wrong length")));
            }
            if let Some(x) = r.iter().find(|x| !x.is_finite() || **x < 0.0) {
                return Err(Error::InvalidPmf(format!("joint has bad entry {x}")));
            }
            s += r.iter().sum::<f64>();
        }
        if (s - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidPmf(format!("joint sums to {s}")));
        }
        Ok(JointPmf { p })
    }

    /// Builds `p(x, g) = p(x) p(g|x)`.
    pub fn from_prior_channel(p_x: &Pmf, p_gx: &CondPmf) -> Result<Self> {
        if p_x.len() != p_gx.n_in() {
            return Err(Error::AlphabetMismatch {
                expected: p_gx.n_in(),
                got: p_x.len(),
            });
        }
        let mut p: Vec<Vec<f64>> = (0..p_x.len())
            .map(|x| p_gx.row(x).iter().map(|w| w * p_x.probs()[x]).collect())
            .collect();
        let s: f64 = p.iter().flatten().sum();
        for r in p.iter_mut() {
            for v in r.iter_mut() {
                *v /= s;
            }
        }
        JointPmf::new(p)
    }

    /// The product distribution `p(x) q(g)`.
    pub fn independent(p_x: &Pmf, q_g: &Pmf) -> Result<Self> {
        JointPmf::from_prior_channel(p_x, &CondPmf::constant(p_x.len(), q_g)?)
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.p
    }

    #[inline]
    pub fn get(&self, x: usize, g: usize) -> f64 {
        self.p[x][g]
    }

    pub fn nx(&self) -> usize {
        self.p.len()
    }

    pub fn ng(&self) -> usize {
        self.p[0].len()
    }

    pub fn marginal_x(&self) -> Pmf {
        Pmf::from_weights(self.p.iter().map(|r| r.iter().sum()).collect())
            .expect("joint has positive mass")
    }

    pub fn marginal_g(&self) -> Pmf {
        Pmf::from_weights(
            (0..self.ng())
                .map(|g| self.p.iter().map(|r| r[g]).sum())
                .collect(),
        )
        .expect("joint has positive mass")
    }

    /// `p(g|x)` with rows indexed by `x`. Rows with zero mass become uniform.
    pub fn condition_on_x(&self) -> CondPmf {
        let ng = self.ng();
        let rows = self
            .p
            .iter()
            .map(|r| {
                let s: f64 = r.iter().sum();
                if s > SUPPORT_TOL {
                    r.iter().map(|v| v / s).collect()
                } else {
                    vec![1.0 / ng as f64; ng]
                }
            })
            .collect();
        CondPmf::from_weights(rows).expect("rows are valid")
    }

    /// `p(x|g)` with rows indexed by `g`. Columns with zero mass become uniform.
    pub fn condition_on_g(&self) -> CondPmf {
        let nx = self.nx();
        let rows = (0..self.ng())
            .map(|g| {
                let col: Vec<f64> = self.p.iter().map(|r| r[g]).collect();
                let s: f64 = col.iter().sum();
                if s > SUPPORT_TOL {
                    col.into_iter().map(|v| v / s).collect()
                } else {
                    vec![1.0 / nx as f64; nx]
                }
            })
            .collect();
        CondPmf::from_weights(rows).expect("rows are valid")
    }

    /// Splits into `(p_X, p_{G|X})` such that `from_prior_channel` reproduces the joint.
    pub fn factorize(&self) -> (Pmf, CondPmf) {
        (self.marginal_x(), self.condition_on_x())
    }

    /// The joint with `x` and `g` exchanged.
    pub fn transpose(&self) -> JointPmf {
        JointPmf {
            p: (0..self.ng())
                .map(|g| self.p.iter().map(|r| r[g]).collect())
                .collect(),
        }
    }
}

impl TryFrom<Vec<Vec<f64>>> for JointPmf {
    type Error = Error;

    fn try_from(v: Vec<Vec<f64>>) -> Result<Self> {
        JointPmf::new(v)
    }
}

impl From<JointPmf> for Vec<Vec<f64>> {
    fn from(j: JointPmf) -> Self {
        j.p
    }
}
