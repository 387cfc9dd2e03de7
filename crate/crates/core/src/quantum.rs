//! Finite-dimensional quantum objects and the Born-rule bridge to classical conditionals.
//!
//! JSON layout: a complex entry is `[re, im]` (a bare number is read as real), a matrix is a
//! row-major nested array, a POVM is a list of matrices, an ensemble is
//! `{"states": [...], "probs": [...]}` and a channel is `{"kraus": [...]}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    c, cholesky_pd, hermitian_eigen, hermitian_part, hermiticity_defect, identity, inv_sqrt,
    lambda_min, max_abs_diff, trace_product_re, trace_re, CMat,
};
use crate::prob::{CondPmf, JointPmf, Pmf, MAX_ALPHABET};

/// Tolerance for Hermiticity, positivity, trace and completeness checks.
pub const QUANTUM_TOL: f64 = 1e-10;
pub const MAX_DIM: usize = 16;

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum EntryRepr {
    Complex([f64; 2]),
    Real(f64),
}

type MatrixRepr = Vec<Vec<EntryRepr>>;

fn to_repr(m: &CMat) -> MatrixRepr {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| EntryRepr::Complex([m[(i, j)].re, m[(i, j)].im]))
                .collect()
        })
        .collect()
}

fn from_repr(r: MatrixRepr) -> Result<CMat> {
    let rows = r.len();
    if rows == 0 {
        return Err(Error::InvalidQuantumObject("empty matrix".into()));
    }
    let cols = r[0].len();
    if r.iter().any(|row| row.len() != cols) {
        return Err(Error::ShapeMismatch("ragged matrix rows".into()));
    }
    let mut m = CMat::zeros(rows, cols);
    for (i, row) in r.into_iter().enumerate() {
        for (j, e) in row.into_iter().enumerate() {
            m[(i, j)] = match e {
                EntryRepr::Complex([re, im]) => c(re, im),
                EntryRepr::Real(re) => c(re, 0.0),
            };
        }
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidQuantumObject("non-finite matrix entry".into()));
    }
    Ok(m)
}

fn check_square(m: &CMat, what: &str) -> Result<usize> {
    if !m.is_square() {
        return Err(Error::ShapeMismatch(format!(
            "{what} is {}x{}, expected square",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.nrows() == 0 || m.nrows() > MAX_DIM {
        return Err(Error::InvalidQuantumObject(format!(
            "{what} has unsupported dimension {}",
            m.nrows()
        )));
    }
    Ok(m.nrows())
}

fn check_psd(m: &CMat, what: &str) -> Result<()> {
    if hermiticity_defect(m) > QUANTUM_TOL {
        return Err(Error::InvalidQuantumObject(format!("{what} is not Hermitian")));
    }
    let l = lambda_min(m);
    if l < -QUANTUM_TOL {
        return Err(Error::InvalidQuantumObject(format!(
            "{what} has negative eigenvalue {l:e}"
        )));
    }
    Ok(())
}

/// A density matrix: Hermitian, positive semidefinite, unit trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct DensityMatrix {
    mat: CMat,
}

impl DensityMatrix {
    pub fn new(mat: CMat) -> Result<Self> {
        check_square(&mat, "state")?;
        check_psd(&mat, "state")?;
        let t = trace_re(&mat);
        if (t - 1.0).abs() > QUANTUM_TOL {
            return Err(Error::InvalidQuantumObject(format!("state has trace {t}")));
        }
        Ok(DensityMatrix {
            mat: hermitian_part(&mat),
        })
    }

    /// `|ψ⟩⟨ψ|` for the normalisation of `psi`.
    pub fn pure(psi: &[num_complex::Complex64]) -> Result<Self> {
        let n: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if psi.is_empty() || n <= 1e-300 || !n.is_finite() {
            return Err(Error::InvalidQuantumObject("zero state vector".into()));
        }
        let d = psi.len();
        let m = CMat::from_fn(d, d, |i, j| psi[i] * psi[j].conj() / (n * n));
        DensityMatrix::new(m)
    }

    /// Computational basis state `|i⟩⟨i|`.
    pub fn basis(d: usize, i: usize) -> Result<Self> {
        if i >= d {
            return Err(Error::InvalidQuantumObject(format!("basis index {i} out of range")));
        }
        let mut m = CMat::zeros(d, d);
        m[(i, i)] = c(1.0, 0.0);
        DensityMatrix::new(m)
    }

    pub fn maximally_mixed(d: usize) -> Result<Self> {
        DensityMatrix::new(identity(d) * c(1.0 / d as f64, 0.0))
    }

    /// Qubit state with Bloch vector `r`, `|r| ≤ 1`.
    pub fn from_bloch(r: [f64; 3]) -> Result<Self> {
        let m = CMat::from_row_slice(
            2,
            2,
            &[
                c(0.5 * (1.0 + r[2]), 0.0),
                c(0.5 * r[0], -0.5 * r[1]),
                c(0.5 * r[0], 0.5 * r[1]),
                c(0.5 * (1.0 - r[2]), 0.0),
            ],
        );
        DensityMatrix::new(m)
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }
}

impl TryFrom<MatrixRepr> for DensityMatrix {
    type Error = Error;
    fn try_from(r: MatrixRepr) -> Result<Self> {
        DensityMatrix::new(from_repr(r)?)
    }
}

impl From<DensityMatrix> for MatrixRepr {
    fn from(s: DensityMatrix) -> Self {
        to_repr(&s.mat)
    }
}

/// A positive operator-valued measure `{M_g}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<MatrixRepr>", into = "Vec<MatrixRepr>")]
pub struct Povm {
    elements: Vec<CMat>,
}

impl Povm {
    pub fn new(elements: Vec<CMat>) -> Result<Self> {
        if elements.is_empty() || elements.len() > MAX_ALPHABET {
            return Err(Error::InvalidQuantumObject(format!(
                "POVM with {} outcomes",
                elements.len()
            )));
        }
        let d = check_square(&elements[0], "POVM element")?;
        let mut sum = CMat::zeros(d, d);
        for (g, m) in elements.iter().enumerate() {
            let dg = check_square(m, "POVM element")?;
            if dg != d {
                return Err(Error::DimensionMismatch { expected: d, got: dg });
            }
            check_psd(m, &format!("POVM element {g}"))?;
            sum += m;
        }
        let defect = max_abs_diff(&sum, &identity(d));
        if defect > QUANTUM_TOL {
            return Err(Error::InvalidQuantumObject(format!(
                "POVM elements sum to identity only within {defect:e}"
            )));
        }
        Ok(Povm {
            elements: elements.iter().map(hermitian_part).collect(),
        })
    }

    /// Normalises a tuple of PSD operators with full-rank sum `S` as `S^{-1/2} A_g S^{-1/2}`.
    pub fn from_unnormalized(ops: Vec<CMat>) -> Result<Self> {
        if ops.is_empty() {
            return Err(Error::InvalidQuantumObject("no operators".into()));
        }
        let d = check_square(&ops[0], "operator")?;
        let mut s = CMat::zeros(d, d);
        for a in &ops {
            if a.shape() != (d, d) {
                return Err(Error::DimensionMismatch { expected: d, got: a.nrows() });
            }
            s += a;
        }
        if !cholesky_pd(&hermitian_part(&s), 0.0) {
            return Err(Error::InvalidQuantumObject("operator sum is singular".into()));
        }
        let r = inv_sqrt(&hermitian_part(&s));
        let els: Vec<CMat> = ops.iter().map(|a| hermitian_part(&(&r * a * &r))).collect();
        Povm::new(els)
    }

    /// Projective measurement in the computational basis.
    pub fn computational(d: usize) -> Result<Self> {
        Povm::new(
            (0..d)
                .map(|i| {
                    let mut m = CMat::zeros(d, d);
                    m[(i, i)] = c(1.0, 0.0);
                    m
                })
                .collect(),
        )
    }

    /// Projective measurement onto the columns of a unitary.
    pub fn projective(u: &CMat) -> Result<Self> {
        let d = check_square(u, "basis")?;
        Povm::new(
            (0..d)
                .map(|k| {
                    let v = u.column(k);
                    &v * v.adjoint()
                })
                .collect(),
        )
    }

    /// Qubit trine: `(2/3)|θ_k⟩⟨θ_k|` with Bloch angles 0°, 120°, 240°.
    pub fn trine() -> Result<Self> {
        let els = (0..3)
            .map(|k| {
                let half = (k as f64) * std::f64::consts::PI / 3.0;
                let v = [half.cos(), half.sin()];
                CMat::from_fn(2, 2, |i, j| c(2.0 / 3.0 * v[i] * v[j], 0.0))
            })
            .collect();
        Povm::new(els)
    }

    /// Uninformative measurement `q(g)·I`.
    pub fn uninformative(d: usize, q: &Pmf) -> Result<Self> {
        Povm::new(q.probs().iter().map(|&p| identity(d) * c(p, 0.0)).collect())
    }

    /// `(1 − v)·q(g)·I + v·M_g`.
    pub fn noisy(&self, v: f64, q: &Pmf) -> Result<Self> {
        if q.len() != self.n_outcomes() {
            return Err(Error::AlphabetMismatch {
                expected: self.n_outcomes(),
                got: q.len(),
            });
        }
        let d = self.dim();
        Povm::new(
            self.elements
                .iter()
                .zip(q.probs())
                .map(|(m, &p)| identity(d) * c((1.0 - v) * p, 0.0) + m * c(v, 0.0))
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.elements[0].nrows()
    }

    pub fn n_outcomes(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[CMat] {
        &self.elements
    }
}

impl TryFrom<Vec<MatrixRepr>> for Povm {
    type Error = Error;
    fn try_from(r: Vec<MatrixRepr>) -> Result<Self> {
        Povm::new(r.into_iter().map(from_repr).collect::<Result<_>>()?)
    }
}

impl From<Povm> for Vec<MatrixRepr> {
    fn from(p: Povm) -> Self {
        p.elements.iter().map(to_repr).collect()
    }
}

/// A finite family of states of a common dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<DensityMatrix>", into = "Vec<DensityMatrix>")]
pub struct StateSet {
    states: Vec<DensityMatrix>,
}

impl StateSet {
    pub fn new(states: Vec<DensityMatrix>) -> Result<Self> {
        if states.is_empty() || states.len() > MAX_ALPHABET {
            return Err(Error::InvalidQuantumObject(format!(
                "state set of size {}",
                states.len()
            )));
        }
        let d = states[0].dim();
        for s in &states {
            if s.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, got: s.dim() });
            }
        }
        Ok(StateSet { states })
    }

    /// The computational basis states.
    pub fn basis(d: usize) -> Result<Self> {
        StateSet::new((0..d).map(|i| DensityMatrix::basis(d, i)).collect::<Result<_>>()?)
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }
}

impl TryFrom<Vec<DensityMatrix>> for StateSet {
    type Error = Error;
    fn try_from(v: Vec<DensityMatrix>) -> Result<Self> {
        StateSet::new(v)
    }
}

impl From<StateSet> for Vec<DensityMatrix> {
    fn from(s: StateSet) -> Self {
        s.states
    }
}

#[derive(Serialize, Deserialize)]
struct EnsembleRepr {
    states: Vec<DensityMatrix>,
    probs: Pmf,
}

/// States `ρ_x` with prior `p(x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "EnsembleRepr", into = "EnsembleRepr")]
pub struct Ensemble {
    states: StateSet,
    probs: Pmf,
}

impl Ensemble {
    pub fn new(states: StateSet, probs: Pmf) -> Result<Self> {
        if states.len() != probs.len() {
            return Err(Error::AlphabetMismatch {
                expected: states.len(),
                got: probs.len(),
            });
        }
        Ok(Ensemble { states, probs })
    }

    pub fn uniform(states: StateSet) -> Result<Self> {
        let p = Pmf::uniform(states.len())?;
        Ensemble::new(states, p)
    }

    pub fn state_set(&self) -> &StateSet {
        &self.states
    }

    pub fn states(&self) -> &[DensityMatrix] {
        self.states.states()
    }

    pub fn priors(&self) -> &Pmf {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states.dim()
    }

    /// Joint `p(x,g) = p(x) tr[M_g ρ_x]`.
    pub fn joint(&self, m: &Povm) -> Result<JointPmf> {
        let w = born_cond_pmf(m, &self.states)?;
        JointPmf::from_prior_channel(&self.probs, &w)
    }

    /// `{N(ρ_x), p(x)}`.
    pub fn through(&self, n: &KrausChannel) -> Result<Ensemble> {
        let out = self
            .states()
            .iter()
            .map(|s| apply_channel(n, s))
            .collect::<Result<Vec<_>>>()?;
        Ensemble::new(StateSet::new(out)?, self.probs.clone())
    }
}

impl TryFrom<EnsembleRepr> for Ensemble {
    type Error = Error;
    fn try_from(r: EnsembleRepr) -> Result<Self> {
        Ensemble::new(StateSet::new(r.states)?, r.probs)
    }
}

impl From<Ensemble> for EnsembleRepr {
    fn from(e: Ensemble) -> Self {
        EnsembleRepr {
            states: e.states.states,
            probs: e.probs,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ChannelRepr {
    kraus: Vec<MatrixRepr>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    subchannel: bool,
}

/// A completely positive map in Kraus form `ρ ↦ Σ K_i ρ K_i†`.
///
/// Trace preserving unless flagged as a subchannel, in which case `Σ K_i†K_i ≤ I`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChannelRepr", into = "ChannelRepr")]
pub struct KrausChannel {
    kraus: Vec<CMat>,
    subchannel: bool,
}

impl KrausChannel {
    fn validate(kraus: &[CMat]) -> Result<(usize, usize, CMat)> {
        if kraus.is_empty() {
            return Err(Error::InvalidQuantumObject("channel without Kraus operators".into()));
        }
        let (dout, din) = kraus[0].shape();
        if din == 0 || dout == 0 || din > MAX_DIM || dout > MAX_DIM {
            return Err(Error::InvalidQuantumObject("unsupported channel dimensions".into()));
        }
        let mut s = CMat::zeros(din, din);
        for k in kraus {
            if k.shape() != (dout, din) {
                return Err(Error::ShapeMismatch(format!(
                    "Kraus operator is {}x{}, expected {dout}x{din}",
                    k.nrows(),
                    k.ncols()
                )));
            }
            s += k.adjoint() * k;
        }
        Ok((din, dout, s))
    }

    /// A CPTP map: `Σ K_i†K_i = I` within [`QUANTUM_TOL`].
    pub fn new(kraus: Vec<CMat>) -> Result<Self> {
        let (din, _, s) = KrausChannel::validate(&kraus)?;
        let defect = max_abs_diff(&s, &identity(din));
        if defect > QUANTUM_TOL {
            return Err(Error::InvalidQuantumObject(format!(
                "Kraus operators are not trace preserving (defect {defect:e})"
            )));
        }
        Ok(KrausChannel {
            kraus,
            subchannel: false,
        })
    }

    /// A trace non-increasing map: `Σ K_i†K_i ≤ I` within [`QUANTUM_TOL`].
    pub fn new_subchannel(kraus: Vec<CMat>) -> Result<Self> {
        let (din, _, s) = KrausChannel::validate(&kraus)?;
        if lambda_min(&(identity(din) - hermitian_part(&s))) < -QUANTUM_TOL {
            return Err(Error::InvalidQuantumObject(
                "Kraus operators increase the trace".into(),
            ));
        }
        Ok(KrausChannel {
            kraus,
            subchannel: true,
        })
    }

    pub fn identity(d: usize) -> Result<Self> {
        KrausChannel::new(vec![identity(d)])
    }

    pub fn unitary(u: &CMat) -> Result<Self> {
        KrausChannel::new(vec![u.clone()])
    }

    /// `ρ ↦ (1 − p)ρ + p·I/d`, with Weyl–Heisenberg Kraus operators.
    pub fn depolarizing(d: usize, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidQuantumObject(format!("depolarising weight {p}")));
        }
        let dd = (d * d) as f64;
        let mut kraus = Vec::with_capacity(d * d);
        for a in 0..d {
            for b in 0..d {
                let weight = if a == 0 && b == 0 {
                    1.0 - p + p / dd
                } else {
                    p / dd
                };
                if weight <= 0.0 {
                    continue;
                }
                let mut w = CMat::zeros(d, d);
                for j in 0..d {
                    let phase = 2.0 * std::f64::consts::PI * (b * j) as f64 / d as f64;
                    w[((j + a) % d, j)] = c(phase.cos(), phase.sin()) * weight.sqrt();
                }
                kraus.push(w);
            }
        }
        KrausChannel::new(kraus)
    }

    /// Replacement channel `ρ ↦ tr[ρ]·σ`.
    pub fn constant(d_in: usize, sigma: &DensityMatrix) -> Result<Self> {
        let (vals, v) = hermitian_eigen(sigma.matrix());
        let d_out = sigma.dim();
        let mut kraus = Vec::new();
        for (k, &lam) in vals.iter().enumerate() {
            if lam <= 0.0 {
                continue;
            }
            for i in 0..d_in {
                let mut kr = CMat::zeros(d_out, d_in);
                for r in 0..d_out {
                    kr[(r, i)] = v[(r, k)] * lam.sqrt();
                }
                kraus.push(kr);
            }
        }
        KrausChannel::new(kraus)
    }

    /// Qubit bit flip `ρ ↦ (1 − p)ρ + p XρX`.
    pub fn bit_flip(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidQuantumObject(format!("flip probability {p}")));
        }
        let x = CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        KrausChannel::new(vec![identity(2) * c((1.0 - p).sqrt(), 0.0), x * c(p.sqrt(), 0.0)])
    }

    pub fn kraus(&self) -> &[CMat] {
        &self.kraus
    }

    pub fn is_subchannel(&self) -> bool {
        self.subchannel
    }

    pub fn d_in(&self) -> usize {
        self.kraus[0].ncols()
    }

    pub fn d_out(&self) -> usize {
        self.kraus[0].nrows()
    }

    /// `Σ K ρ K†` on an arbitrary input matrix.
    pub fn apply_matrix(&self, rho: &CMat) -> CMat {
        let mut out = CMat::zeros(self.d_out(), self.d_out());
        for k in &self.kraus {
            out += k * rho * k.adjoint();
        }
        out
    }

    /// `Σ K† A K` on an arbitrary output-side operator.
    pub fn adjoint_matrix(&self, a: &CMat) -> CMat {
        let mut out = CMat::zeros(self.d_in(), self.d_in());
        for k in &self.kraus {
            out += k.adjoint() * a * k;
        }
        out
    }

    /// Whether the channel maps every input to one fixed output state, within `tol`.
    pub fn is_constant(&self, tol: f64) -> bool {
        let din = self.d_in();
        let mut reference: Option<CMat> = None;
        for i in 0..din {
            for j in 0..din {
                let mut e = CMat::zeros(din, din);
                e[(i, j)] = c(1.0, 0.0);
                let out = self.apply_matrix(&e);
                if i != j {
                    if out.iter().any(|z| z.norm() > tol) {
                        return false;
                    }
                } else if let Some(r) = &reference {
                    if max_abs_diff(r, &out) > tol {
                        return false;
                    }
                } else {
                    reference = Some(out);
                }
            }
        }
        true
    }
}

impl TryFrom<ChannelRepr> for KrausChannel {
    type Error = Error;
    fn try_from(r: ChannelRepr) -> Result<Self> {
        let kraus = r.kraus.into_iter().map(from_repr).collect::<Result<Vec<_>>>()?;
        if r.subchannel {
            KrausChannel::new_subchannel(kraus)
        } else {
            KrausChannel::new(kraus)
        }
    }
}

impl From<KrausChannel> for ChannelRepr {
    fn from(k: KrausChannel) -> Self {
        ChannelRepr {
            kraus: k.kraus.iter().map(to_repr).collect(),
            subchannel: k.subchannel,
        }
    }
}

/// `p(g|x) = tr[M_g ρ_x]`, clipped at the support tolerance and renormalised.
pub fn born_cond_pmf(m: &Povm, states: &StateSet) -> Result<CondPmf> {
    if m.dim() != states.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            got: states.dim(),
        });
    }
    let rows = states
        .states()
        .iter()
        .map(|s| born_row(m, s))
        .collect::<Vec<_>>();
    CondPmf::from_weights(rows)
}

pub(crate) fn born_row(m: &Povm, s: &DensityMatrix) -> Vec<f64> {
    m.elements()
        .iter()
        .map(|e| {
            let v = trace_product_re(e, s.matrix());
            if v > 1e-12 {
                v
            } else {
                0.0
            }
        })
        .collect()
}

/// `N(ρ)` for a trace-preserving channel.
pub fn apply_channel(n: &KrausChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if n.d_in() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: n.d_in(),
            got: rho.dim(),
        });
    }
    if n.is_subchannel() {
        return Err(Error::Unsupported(
            "a subchannel output is not normalised".into(),
        ));
    }
    DensityMatrix::new(n.apply_matrix(rho.matrix()))
}

/// Heisenberg picture `{N†(M_g)}`.
pub fn adjoint_apply(n: &KrausChannel, m: &Povm) -> Result<Povm> {
    if n.d_out() != m.dim() {
        return Err(Error::DimensionMismatch {
            expected: n.d_out(),
            got: m.dim(),
        });
    }
    if n.is_subchannel() {
        return Err(Error::Unsupported(
            "the adjoint of a subchannel is not a POVM".into(),
        ));
    }
    Povm::new(m.elements().iter().map(|e| n.adjoint_matrix(e)).collect())
}

/// Whether every element is within `tol` (entrywise) of `q(g)·I` with `q(g) = tr[M_g]/d`.
///
/// The candidate `q` is returned in both cases.
pub fn is_uninformative(m: &Povm, tol: f64) -> (bool, Pmf) {
    let d = m.dim();
    let q: Vec<f64> = m
        .elements()
        .iter()
        .map(|e| (trace_re(e) / d as f64).max(0.0))
        .collect();
    let ok = m
        .elements()
        .iter()
        .zip(&q)
        .all(|(e, &p)| max_abs_diff(e, &(identity(d) * c(p, 0.0))) <= tol);
    let q = Pmf::from_weights(q).unwrap_or_else(|_| Pmf::uniform(m.n_outcomes()).expect("nonempty"));
    (ok, q)
}

/// `N_x = Σ_a q(x|a) M_a`; `post` has one row per outcome of `m`.
pub fn simulate_measurement(m: &Povm, post: &CondPmf) -> Result<Povm> {
    if post.n_in() != m.n_outcomes() {
        return Err(Error::ShapeMismatch(format!(
            "post-processing has {} rows, POVM has {} outcomes",
            post.n_in(),
            m.n_outcomes()
        )));
    }
    let d = m.dim();
    let els = (0..post.n_out())
        .map(|x| {
            let mut n = CMat::zeros(d, d);
            for (a, e) in m.elements().iter().enumerate() {
                let w = post.get(a, x);
                if w != 0.0 {
                    n += e * c(w, 0.0);
                }
            }
            n
        })
        .collect();
    Povm::new(els)
}
