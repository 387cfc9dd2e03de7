//! Quantum state, noisy state and channel betting games, Arimoto's gaps over free sets, and
//! checkers that compare each information-theoretic quantity with its betting counterpart.
//!
//! Game values use the closed-form strategies of [`crate::betting`]. The checkers compute the
//! betting side with [`numeric_optimal_ice`] only, so the two sides are evaluated independently.

use serde::{Deserialize, Serialize};

use crate::betting::{ice, numeric_optimal_ice, optimal_strategy, Dist, Odds};
use crate::entropy::{arimoto_mi, renyi_entropy};
use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::order::{sgn, Order, OrderClass, RiskParam};
use crate::povm_opt::{maximize_over_povms, AscentOptions, AscentResult};
use crate::prob::{CondPmf, JointPmf, Pmf, SUPPORT_TOL};
use crate::quantum::{
    adjoint_apply, apply_channel, DensityMatrix, Ensemble, KrausChannel, Povm, StateSet,
};

/// Odds magnitude used by the checkers; every ratio is independent of it.
pub const CHECK_ODDS: f64 = 1.5;

/// A quantum state betting game `(o_X, ℰ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QsbGame {
    pub odds: Odds,
    pub ensemble: Ensemble,
}

impl QsbGame {
    pub fn new(odds: Odds, ensemble: Ensemble) -> Result<Self> {
        if odds.len() != ensemble.len() {
            return Err(Error::AlphabetMismatch {
                expected: ensemble.len(),
                got: odds.len(),
            });
        }
        Ok(QsbGame { odds, ensemble })
    }

    /// Constant odds `sgn(α)·c`.
    pub fn constant(c: f64, alpha: Order, ensemble: Ensemble) -> Result<Self> {
        if c <= 0.0 || !c.is_finite() {
            return Err(Error::InvalidOdds(format!("odds magnitude {c}")));
        }
        QsbGame::new(Odds::constant(ensemble.len(), alpha.sgn() * c)?, ensemble)
    }
}

/// A family of free objects.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "items", rename_all = "snake_case")]
pub enum FreeSet {
    UninformativeMeasurements,
    ConstantChannels,
    ExplicitMeasurements(Vec<Povm>),
    ExplicitChannels(Vec<KrausChannel>),
    ExplicitStates(Vec<DensityMatrix>),
}

impl FreeSet {
    fn check_nonempty(&self) -> Result<()> {
        let empty = match self {
            FreeSet::ExplicitMeasurements(v) => v.is_empty(),
            FreeSet::ExplicitChannels(v) => v.is_empty(),
            FreeSet::ExplicitStates(v) => v.is_empty(),
            _ => false,
        };
        if empty {
            Err(Error::EmptyFreeSet)
        } else {
            Ok(())
        }
    }
}

fn wrong_kind(expected: &str, got: &FreeSet) -> Error {
    let name = match got {
        FreeSet::UninformativeMeasurements => "uninformative measurements",
        FreeSet::ConstantChannels => "constant channels",
        FreeSet::ExplicitMeasurements(_) => "explicit measurements",
        FreeSet::ExplicitChannels(_) => "explicit channels",
        FreeSet::ExplicitStates(_) => "explicit states",
    };
    Error::WrongFreeSetKind(format!("expected {expected}, got {name}"))
}

/// `I_α(X;G)` of the joint `p(x) tr[M_g ρ_x]`.
pub fn arimoto_mi_quantum(e: &Ensemble, m: &Povm, alpha: Order) -> Result<f64> {
    arimoto_mi(&e.joint(m)?, alpha)
}

/// `I_α(X;G)` of the joint `p(x) tr[M_g N(ρ_x)]`.
pub fn noisy_arimoto_mi(e: &Ensemble, m: &Povm, n: &KrausChannel, alpha: Order) -> Result<f64> {
    arimoto_mi_quantum(&e.through(n)?, m, alpha)
}

/// Number of POVM outcomes searched when maximising over measurements.
pub fn search_outcomes(nx: usize, d: usize) -> usize {
    nx.max(d * d)
}

/// `I_α` as a function of `p(g|x)` with its partial derivatives, for finite `α ∉ {0}`.
fn arimoto_objective(px: Vec<f64>, alpha: Order) -> impl FnMut(&[Vec<f64>], &mut [Vec<f64>]) -> f64 {
    let a = alpha.value();
    let s = alpha.sgn();
    let hx = renyi_entropy(&Pmf::new(px.clone()).expect("prior"), alpha).unwrap_or(f64::NAN);
    let ln2 = std::f64::consts::LN_2;
    move |p: &[Vec<f64>], grad: &mut [Vec<f64>]| -> f64 {
        let nx = px.len();
        let k = p[0].len();
        let q = |x: usize, g: usize| px[x] * p[x][g];
        let live: Vec<bool> = (0..k)
            .map(|g| (0..nx).map(|x| q(x, g)).sum::<f64>() > SUPPORT_TOL)
            .collect();
        if a == 1.0 {
            let mut h = 0.0;
            for g in 0..k {
                if !live[g] {
                    continue;
                }
                let qg: f64 = (0..nx).map(|x| q(x, g)).sum();
                for x in 0..nx {
                    let v = q(x, g);
                    if v > 0.0 {
                        let l = (v / qg).log2();
                        h -= v * l;
                        grad[x][g] = px[x] * l;
                    } else {
                        grad[x][g] = -1e12 * px[x];
                    }
                }
            }
            return hx - h;
        }
        let mut ag = vec![0.0; k];
        for g in 0..k {
            if !live[g] {
                continue;
            }
            for x in 0..nx {
                let v = q(x, g);
                if v > 0.0 {
                    ag[g] += v.powf(a);
                } else if a < 0.0 && px[x] > 0.0 {
                    return f64::NAN;
                }
            }
        }
        let t: f64 = (0..k).filter(|&g| live[g]).map(|g| ag[g].powf(1.0 / a)).sum();
        let h = a / (1.0 - a) * t.log2();
        let scale = -s * a / ((1.0 - a) * t * ln2);
        for g in 0..k {
            for x in 0..nx {
                grad[x][g] = if !live[g] || px[x] <= 0.0 {
                    0.0
                } else if p[x][g] > 0.0 {
                    scale * ag[g].powf(1.0 / a - 1.0) * px[x].powf(a) * p[x][g].powf(a - 1.0)
                } else if a > 1.0 {
                    0.0
                } else {
                    -sgn(scale) * 1e12
                };
            }
        }
        s * (hx - h)
    }
}

/// Success (`+1`) or error (`−1`) probability of guessing `x` as outcome `x`, as an objective.
fn guess_objective(px: Vec<f64>, direction: f64) -> impl FnMut(&[Vec<f64>], &mut [Vec<f64>]) -> f64 {
    move |p: &[Vec<f64>], grad: &mut [Vec<f64>]| -> f64 {
        let mut v = 0.0;
        for x in 0..px.len() {
            v += px[x] * p[x][x];
            grad[x][x] = direction * px[x];
        }
        direction * v
    }
}

fn matrices(e: &Ensemble) -> Vec<CMat> {
    e.states().iter().map(|s| s.matrix().clone()).collect()
}

/// `max_𝕄 I_α(X;G)_{ℰ,𝕄,N}` by POVM ascent, with the achieving measurement.
///
/// At `α = ±∞` the search runs over `|X|`-outcome guessing (excluding) measurements; `α = 0` is
/// not supported.
pub fn max_noisy_arimoto_mi(
    e: &Ensemble,
    n: &KrausChannel,
    alpha: Order,
    opts: &AscentOptions,
) -> Result<AscentResult> {
    let en = e.through(n)?;
    max_arimoto_mi_over_povms(&en, alpha, opts)
}

/// `max_𝕄 I_α(X;G)_{ℰ,𝕄}` by POVM ascent.
pub fn max_arimoto_mi_over_povms(
    e: &Ensemble,
    alpha: Order,
    opts: &AscentOptions,
) -> Result<AscentResult> {
    let states = matrices(e);
    let px = e.priors().probs().to_vec();
    let mut res = match alpha.classify() {
        OrderClass::Zero => {
            return Err(Error::Unsupported(
                "POVM ascent needs a smooth objective; α = 0 is not supported".into(),
            ))
        }
        OrderClass::PosInf => maximize_over_povms(&states, e.len(), guess_objective(px, 1.0), &[], opts)?,
        OrderClass::NegInf => maximize_over_povms(&states, e.len(), guess_objective(px, -1.0), &[], opts)?,
        _ => {
            let k = search_outcomes(e.len(), e.dim());
            maximize_over_povms(&states, k, arimoto_objective(px, alpha), &[], opts)?
        }
    };
    res.value = match arimoto_mi_quantum(e, &res.povm, alpha) {
        Ok(v) => v,
        Err(Error::DivergentEntropy(_)) if alpha.value() < 0.0 => f64::INFINITY,
        Err(err) => return Err(err),
    };
    Ok(res)
}

fn check_qsb_odds(odds: &Odds, alpha: Order) -> Result<f64> {
    let v = odds.values();
    if v.iter().any(|&o| o != v[0]) {
        return Err(Error::InvalidOdds("QSB games need constant odds".into()));
    }
    if odds.sign() != alpha.sgn() {
        return Err(Error::InvalidOdds(format!(
            "odds sign {} does not match sgn(α) = {}",
            odds.sign(),
            alpha.sgn()
        )));
    }
    Ok(v[0].abs())
}

fn closed_form_value(odds: &Odds, dist: &Dist, r: RiskParam) -> Result<f64> {
    let b = optimal_strategy(odds, dist, r)?;
    Ok(ice(&b, odds, dist, r)?.value)
}

/// Best certainty equivalent of a QSB game under the measurement `m`.
pub fn qsb_value(game: &QsbGame, m: &Povm, alpha: Order) -> Result<f64> {
    check_qsb_odds(&game.odds, alpha)?;
    let dist = Dist::Joint(game.ensemble.joint(m)?);
    closed_form_value(&game.odds, &dist, alpha.risk()?)
}

/// Best certainty equivalent without side information, `sgn(α)·C·p_α(X)`.
pub fn uninformed_qsb_value(game: &QsbGame, alpha: Order) -> Result<f64> {
    check_qsb_odds(&game.odds, alpha)?;
    let dist = Dist::Marginal(game.ensemble.priors().clone());
    closed_form_value(&game.odds, &dist, alpha.risk()?)
}

/// Best QSB value over a set of free measurements.
pub fn best_free_qsb_value(game: &QsbGame, free: &FreeSet, alpha: Order) -> Result<f64> {
    free.check_nonempty()?;
    match free {
        FreeSet::UninformativeMeasurements => uninformed_qsb_value(game, alpha),
        FreeSet::ExplicitMeasurements(ms) => {
            let mut best = f64::NEG_INFINITY;
            for m in ms {
                best = best.max(qsb_value(game, m, alpha)?);
            }
            Ok(best)
        }
        other => Err(wrong_kind("measurements", other)),
    }
}

/// Noisy QSB value, evaluated in the Heisenberg picture as `qsb_value(N†(𝕄))`.
pub fn nqsb_value(game: &QsbGame, m: &Povm, n: &KrausChannel, alpha: Order) -> Result<f64> {
    qsb_value(game, &adjoint_apply(n, m)?, alpha)
}

/// `{Λ_x(ρ), p(x)}`.
pub fn induced_ensemble(prior: &Pmf, channels: &[KrausChannel], rho: &DensityMatrix) -> Result<Ensemble> {
    if channels.len() != prior.len() {
        return Err(Error::AlphabetMismatch {
            expected: prior.len(),
            got: channels.len(),
        });
    }
    let states = channels
        .iter()
        .map(|ch| apply_channel(ch, rho))
        .collect::<Result<Vec<_>>>()?;
    Ensemble::new(StateSet::new(states)?, prior.clone())
}

/// Quantum channel betting value: the QSB value of the induced ensemble.
pub fn qcb_value(
    odds: &Odds,
    prior: &Pmf,
    channels: &[KrausChannel],
    rho: &DensityMatrix,
    m: &Povm,
    alpha: Order,
) -> Result<f64> {
    let e = induced_ensemble(prior, channels, rho)?;
    qsb_value(&QsbGame::new(odds.clone(), e)?, m, alpha)
}

/// `(Σ_g max_x p(x,g), Σ_g min_x p(x,g))`: optimal discrimination success and exclusion error.
pub fn discrimination_exclusion(j: &JointPmf) -> (f64, f64) {
    let mut succ = 0.0;
    let mut err = 0.0;
    for g in 0..j.ng() {
        let col = (0..j.nx()).map(|x| j.get(x, g));
        succ += col.clone().fold(0.0, f64::max);
        err += col.fold(f64::INFINITY, f64::min);
    }
    (succ, err)
}

/// The same pair by exhaustive search over deterministic post-processings `a ↦ x`.
pub fn cpp_brute_force(j: &JointPmf) -> (f64, f64) {
    let (nx, na) = (j.nx(), j.ng());
    let total = nx.pow(na as u32);
    let mut best = f64::NEG_INFINITY;
    let mut worst = f64::INFINITY;
    for code in 0..total {
        let mut c = code;
        let mut v = 0.0;
        for a in 0..na {
            let x = c % nx;
            c /= nx;
            v += j.get(x, a);
        }
        best = best.max(v);
        worst = worst.min(v);
    }
    (best, worst)
}

/// Objects whose Arimoto gap is measured against a free set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GapInstance {
    /// `I_α(ℰ,𝕄) − max_{ℕ∈𝔽} I_α(ℰ,ℕ)`.
    Measurement {
        ensemble: Ensemble,
        povm: Povm,
        free: FreeSet,
    },
    /// `max_𝕄 I_α(ℰ,𝕄,N) − max_{Ñ∈ℱ} max_ℕ I_α(ℰ,ℕ,Ñ)`.
    Channel {
        ensemble: Ensemble,
        channel: KrausChannel,
        free: FreeSet,
    },
    /// `I_α(Λ,𝕄,ρ) − max_{σ∈F} I_α(Λ,𝕄,σ)`.
    State {
        prior: Pmf,
        channels: Vec<KrausChannel>,
        rho: DensityMatrix,
        povm: Povm,
        free: FreeSet,
    },
    /// `I_α(Λ,𝕄,ρ) − max_{σ∈F, ℕ∈𝔽} I_α(Λ,ℕ,σ)`.
    StateMeasurement {
        prior: Pmf,
        channels: Vec<KrausChannel>,
        rho: DensityMatrix,
        povm: Povm,
        free_states: FreeSet,
        free_measurements: FreeSet,
    },
}

fn explicit_states(free: &FreeSet) -> Result<&[DensityMatrix]> {
    free.check_nonempty()?;
    match free {
        FreeSet::ExplicitStates(v) => Ok(v),
        other => Err(wrong_kind("states", other)),
    }
}

/// Arimoto's gap of the given kind.
pub fn arimoto_gap(inst: &GapInstance, alpha: Order, opts: &AscentOptions) -> Result<f64> {
    match inst {
        GapInstance::Measurement { ensemble, povm, free } => {
            free.check_nonempty()?;
            let fixed = arimoto_mi_quantum(ensemble, povm, alpha)?;
            let best = match free {
                FreeSet::UninformativeMeasurements => 0.0,
                FreeSet::ExplicitMeasurements(ms) => {
                    let mut b = f64::NEG_INFINITY;
                    for m in ms {
                        b = b.max(arimoto_mi_quantum(ensemble, m, alpha)?);
                    }
                    b
                }
                other => return Err(wrong_kind("measurements", other)),
            };
            Ok(fixed - best)
        }
        GapInstance::Channel { ensemble, channel, free } => {
            free.check_nonempty()?;
            let fixed = max_noisy_arimoto_mi(ensemble, channel, alpha, opts)?.value;
            let best = match free {
                FreeSet::ConstantChannels => 0.0,
                FreeSet::ExplicitChannels(chs) => {
                    let mut b = f64::NEG_INFINITY;
                    for ch in chs {
                        b = b.max(max_noisy_arimoto_mi(ensemble, ch, alpha, opts)?.value);
                    }
                    b
                }
                other => return Err(wrong_kind("channels", other)),
            };
            Ok(fixed - best)
        }
        GapInstance::State { prior, channels, rho, povm, free } => {
            let fixed = arimoto_mi_quantum(&induced_ensemble(prior, channels, rho)?, povm, alpha)?;
            let mut best = f64::NEG_INFINITY;
            for s in explicit_states(free)? {
                let e = induced_ensemble(prior, channels, s)?;
                best = best.max(arimoto_mi_quantum(&e, povm, alpha)?);
            }
            Ok(fixed - best)
        }
        GapInstance::StateMeasurement {
            prior,
            channels,
            rho,
            povm,
            free_states,
            free_measurements,
        } => {
            let fixed = arimoto_mi_quantum(&induced_ensemble(prior, channels, rho)?, povm, alpha)?;
            free_measurements.check_nonempty()?;
            let mut best = f64::NEG_INFINITY;
            for s in explicit_states(free_states)? {
                let e = induced_ensemble(prior, channels, s)?;
                let v = match free_measurements {
                    FreeSet::UninformativeMeasurements => 0.0,
                    FreeSet::ExplicitMeasurements(ms) => {
                        let mut b = f64::NEG_INFINITY;
                        for m in ms {
                            b = b.max(arimoto_mi_quantum(&e, m, alpha)?);
                        }
                        b
                    }
                    other => return Err(wrong_kind("measurements", other)),
                };
                best = best.max(v);
            }
            Ok(fixed - best)
        }
    }
}

/// Which equality a report certifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ResultKind {
    R1,
    R2,
    R3,
    R4,
    R5,
}

impl std::fmt::Display for ResultKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ResultKind::R1 => "R1",
            ResultKind::R2 => "R2",
            ResultKind::R3 => "R3",
            ResultKind::R4 => "R4",
            ResultKind::R5 => "R5",
        };
        f.write_str(s)
    }
}

/// An instance for one of the information/betting equalities.
#[derive(Debug, Clone, PartialEq)]
pub enum ResultInstance {
    /// Fixed measurement against uninformative measurements.
    Uninformative { ensemble: Ensemble, povm: Povm },
    /// Fixed channel against constant channels, best measurement on both sides.
    NonConstant { ensemble: Ensemble, channel: KrausChannel },
    /// Any gap of [`GapInstance`].
    Gap(GapInstance),
    /// Classical side information against none.
    Classical { joint: JointPmf },
}

impl ResultInstance {
    pub fn kind(&self) -> ResultKind {
        match self {
            ResultInstance::Uninformative { .. } => ResultKind::R1,
            ResultInstance::NonConstant { .. } => ResultKind::R2,
            ResultInstance::Gap(GapInstance::Measurement { .. })
            | ResultInstance::Gap(GapInstance::Channel { .. }) => ResultKind::R3,
            ResultInstance::Gap(_) => ResultKind::R4,
            ResultInstance::Classical { .. } => ResultKind::R5,
        }
    }
}

/// Outcome of one equality check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultReport {
    pub result: String,
    pub alpha: Order,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_err: f64,
    pub pass: bool,
    pub seed: u64,
}

impl ResultReport {
    pub fn new(result: impl Into<String>, alpha: Order, lhs: f64, rhs: f64, tol: f64, seed: u64) -> Self {
        let abs_err = if lhs == rhs { 0.0 } else { (lhs - rhs).abs() };
        ResultReport {
            result: result.into(),
            alpha,
            lhs,
            rhs,
            abs_err,
            pass: abs_err <= tol,
            seed,
        }
    }
}

/// Numeric best certainty equivalent for constant odds `sgn(α)·C`.
struct NumericGame {
    alpha: Order,
    risk: RiskParam,
}

impl NumericGame {
    fn new(alpha: Order) -> Result<Self> {
        Ok(NumericGame {
            alpha,
            risk: alpha.risk()?,
        })
    }

    fn odds(&self, n: usize) -> Result<Odds> {
        Odds::constant(n, self.alpha.sgn() * CHECK_ODDS)
    }

    fn joint(&self, j: &JointPmf) -> Result<f64> {
        let odds = self.odds(j.nx())?;
        Ok(numeric_optimal_ice(&odds, &Dist::Joint(j.clone()), self.risk)?.0)
    }

    fn marginal(&self, p: &Pmf) -> Result<f64> {
        let odds = self.odds(p.len())?;
        Ok(numeric_optimal_ice(&odds, &Dist::Marginal(p.clone()), self.risk)?.0)
    }

    fn ensemble(&self, e: &Ensemble, m: &Povm) -> Result<f64> {
        self.joint(&e.joint(m)?)
    }

    /// `max_𝕄 max_b ICE` by POVM ascent on `sgn(o) log|ICE|`, with envelope gradients.
    fn best_over_povms(&self, e: &Ensemble, opts: &AscentOptions) -> Result<f64> {
        let states = matrices(e);
        let px = e.priors().probs().to_vec();
        let nx = px.len();
        let odds = self.odds(nx)?;
        let so = odds.sign();
        let o = odds.values()[0].abs();
        let rv = self.risk.value();
        let risk = self.risk;
        let objective = |p: &[Vec<f64>], grad: &mut [Vec<f64>]| -> f64 {
            let Ok(w) = CondPmf::from_weights(p.to_vec()) else {
                return f64::NAN;
            };
            let Ok(j) = JointPmf::from_prior_channel(&Pmf::new(px.clone()).expect("prior"), &w) else {
                return f64::NAN;
            };
            let Ok((v, strat)) = numeric_optimal_ice(&odds, &Dist::Joint(j), risk) else {
                return f64::NAN;
            };
            if v == 0.0 {
                return f64::NAN;
            }
            let crate::betting::Strategy::Conditional(b) = strat else {
                return f64::NAN;
            };
            let k = p[0].len();
            if rv == 1.0 {
                for x in 0..nx {
                    for g in 0..k {
                        let wealth = b.get(g, x) * o;
                        grad[x][g] = if wealth > 0.0 { so * px[x] * wealth.log2() } else { -1e12 };
                    }
                }
            } else {
                let e1 = 1.0 - rv;
                let mut s = 0.0;
                for x in 0..nx {
                    for g in 0..k {
                        let wealth = b.get(g, x) * o;
                        let term = if wealth > 0.0 { wealth.powf(e1) } else { 0.0 };
                        s += px[x] * p[x][g] * term;
                        grad[x][g] = px[x] * term;
                    }
                }
                let scale = so / (e1 * s * std::f64::consts::LN_2);
                for row in grad.iter_mut() {
                    for gv in row.iter_mut() {
                        *gv *= scale;
                    }
                }
            }
            so * v.abs().log2()
        };
        let k = search_outcomes(nx, e.dim());
        let res = maximize_over_povms(&states, k, objective, &[], opts)?;
        self.ensemble(e, &res.povm)
    }
}

fn ratio_log(alpha: Order, num: f64, den: f64) -> f64 {
    alpha.sgn() * (num / den).log2()
}

/// Evaluates both sides of the equality for `inst` at order `α`.
///
/// The information side comes from the entropy and divergence modules; the betting side is
/// built from [`numeric_optimal_ice`], explicit enumeration of finite free sets, and POVM ascent
/// where a maximum over measurements is required.
pub fn result_check(
    inst: &ResultInstance,
    alpha: Order,
    tol: f64,
    seed: u64,
    opts: &AscentOptions,
) -> Result<ResultReport> {
    let game = NumericGame::new(alpha)?;
    let kind = inst.kind().to_string();
    let (lhs, rhs) = match inst {
        ResultInstance::Uninformative { ensemble, povm } => {
            let lhs = arimoto_mi_quantum(ensemble, povm, alpha)?;
            let num = game.ensemble(ensemble, povm)?;
            let den = game.marginal(ensemble.priors())?;
            (lhs, ratio_log(alpha, num, den))
        }
        ResultInstance::NonConstant { ensemble, channel } => {
            let lhs = max_noisy_arimoto_mi(ensemble, channel, alpha, opts)?.value;
            let num = game.best_over_povms(&ensemble.through(channel)?, opts)?;
            let den = game.marginal(ensemble.priors())?;
            (lhs, ratio_log(alpha, num, den))
        }
        ResultInstance::Classical { joint } => {
            let lhs = arimoto_mi(joint, alpha)?;
            let num = game.joint(joint)?;
            let den = game.marginal(&joint.marginal_x())?;
            (lhs, ratio_log(alpha, num, den))
        }
        ResultInstance::Gap(g) => {
            let lhs = arimoto_gap(g, alpha, opts)?;
            let (num, den) = match g {
                GapInstance::Measurement { ensemble, povm, free } => {
                    let num = game.ensemble(ensemble, povm)?;
                    let den = match free {
                        FreeSet::UninformativeMeasurements => game.marginal(ensemble.priors())?,
                        FreeSet::ExplicitMeasurements(ms) => {
                            max_of(ms.iter().map(|m| game.ensemble(ensemble, m)))?
                        }
                        other => return Err(wrong_kind("measurements", other)),
                    };
                    (num, den)
                }
                GapInstance::Channel { ensemble, channel, free } => {
                    let num = game.best_over_povms(&ensemble.through(channel)?, opts)?;
                    let den = match free {
                        FreeSet::ConstantChannels => game.marginal(ensemble.priors())?,
                        FreeSet::ExplicitChannels(chs) => max_of(
                            chs.iter()
                                .map(|ch| game.best_over_povms(&ensemble.through(ch)?, opts)),
                        )?,
                        other => return Err(wrong_kind("channels", other)),
                    };
                    (num, den)
                }
                GapInstance::State { prior, channels, rho, povm, free } => {
                    let num = game.ensemble(&induced_ensemble(prior, channels, rho)?, povm)?;
                    let den = max_of(
                        explicit_states(free)?
                            .iter()
                            .map(|s| game.ensemble(&induced_ensemble(prior, channels, s)?, povm)),
                    )?;
                    (num, den)
                }
                GapInstance::StateMeasurement {
                    prior,
                    channels,
                    rho,
                    povm,
                    free_states,
                    free_measurements,
                } => {
                    let num = game.ensemble(&induced_ensemble(prior, channels, rho)?, povm)?;
                    let mut values = Vec::new();
                    for s in explicit_states(free_states)? {
                        let e = induced_ensemble(prior, channels, s)?;
                        match free_measurements {
                            FreeSet::UninformativeMeasurements => values.push(game.marginal(prior)?),
                            FreeSet::ExplicitMeasurements(ms) => {
                                for m in ms {
                                    values.push(game.ensemble(&e, m)?);
                                }
                            }
                            other => return Err(wrong_kind("measurements", other)),
                        }
                    }
                    (num, max_of(values.into_iter().map(Ok))?)
                }
            };
            (lhs, ratio_log(alpha, num, den))
        }
    };
    Ok(ResultReport::new(kind, alpha, lhs, rhs, tol, seed))
}

fn max_of<I: Iterator<Item = Result<f64>>>(it: I) -> Result<f64> {
    let mut best: Option<f64> = None;
    for v in it {
        let v = v?;
        best = Some(best.map_or(v, |b| b.max(v)));
    }
    best.ok_or(Error::EmptyFreeSet)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::{cond_renyi_probability, renyi_probability, shannon_mi};
    use crate::num::h2;
    use crate::random::{random_ensemble, random_povm, rng_from_seed};

    fn o(a: f64) -> Order {
        Order::new(a).unwrap()
    }

    fn orthogonal_pair() -> Ensemble {
        Ensemble::uniform(StateSet::basis(2).unwrap()).unwrap()
    }

    #[test]
    fn quantum_mi_examples() {
        let e = orthogonal_pair();
        let ui = Povm::uninformative(2, &Pmf::new(vec![0.4, 0.6]).unwrap()).unwrap();
        let comp = Povm::computational(2).unwrap();
        for a in [-2.0, 0.5, 1.0, 3.0, f64::INFINITY] {
            if a > 0.0 {
                assert!((arimoto_mi_quantum(&e, &comp, o(a)).unwrap() - 1.0).abs() < 1e-12);
            }
            assert!(arimoto_mi_quantum(&e, &ui, o(a)).unwrap().abs() < 1e-12);
        }
        let mut rng = rng_from_seed(4);
        let e = random_ensemble(&mut rng, 2, 3);
        let m = random_povm(&mut rng, 2, 3);
        let j = e.joint(&m).unwrap();
        assert!((arimoto_mi_quantum(&e, &m, Order::ONE).unwrap() - shannon_mi(&j)).abs() < 1e-12);
    }

    #[test]
    fn noisy_mi_examples() {
        let e = orthogonal_pair();
        let comp = Povm::computational(2).unwrap();
        let id = KrausChannel::identity(2).unwrap();
        let a = o(2.0);
        assert!((noisy_arimoto_mi(&e, &comp, &id, a).unwrap() - arimoto_mi_quantum(&e, &comp, a).unwrap()).abs() < 1e-14);
        let sigma = DensityMatrix::from_bloch([0.1, 0.2, 0.3]).unwrap();
        let cst = KrausChannel::constant(2, &sigma).unwrap();
        assert!(noisy_arimoto_mi(&e, &comp, &cst, a).unwrap().abs() < 1e-12);
        let dep = KrausChannel::depolarizing(2, 0.5).unwrap();
        let v = noisy_arimoto_mi(&e, &comp, &dep, Order::ONE).unwrap();
        // p(g|x) is a binary symmetric channel with flip 1/4.
        assert!(v > 0.0 && v < 1.0);
        assert!((v - (1.0 - h2(0.25))).abs() < 1e-12);
    }

    #[test]
    fn povm_ascent_finds_projective_optimum() {
        let e = orthogonal_pair();
        let dep = KrausChannel::depolarizing(2, 0.5).unwrap();
        let opts = AscentOptions {
            starts: 6,
            ..Default::default()
        };
        for a in [0.5, 1.0, 2.0, f64::INFINITY] {
            let r = max_noisy_arimoto_mi(&e, &dep, o(a), &opts).unwrap();
            let comp = Povm::computational(2).unwrap();
            let v = noisy_arimoto_mi(&e, &comp, &dep, o(a)).unwrap();
            assert!((r.value - v).abs() < 1e-7, "α={a}: {} vs {v}", r.value);
        }
    }

    #[test]
    fn qsb_examples() {
        let mut rng = rng_from_seed(9);
        let e = random_ensemble(&mut rng, 2, 3);
        let m = random_povm(&mut rng, 2, 3);
        for a in [-3.0, -0.5, 0.5, 2.0] {
            let game = QsbGame::constant(2.0, o(a), e.clone()).unwrap();
            let v = qsb_value(&game, &m, o(a)).unwrap();
            let expect = sgn(a) * 2.0 * cond_renyi_probability(&e.joint(&m).unwrap(), o(a)).unwrap();
            assert!((v - expect).abs() < 1e-9);
            let u = best_free_qsb_value(&game, &FreeSet::UninformativeMeasurements, o(a)).unwrap();
            assert!((u - sgn(a) * 2.0 * renyi_probability(e.priors(), o(a)).unwrap()).abs() < 1e-9);
            let own = best_free_qsb_value(&game, &FreeSet::ExplicitMeasurements(vec![m.clone()]), o(a)).unwrap();
            assert!((own - v).abs() < 1e-15);
            let id = KrausChannel::identity(2).unwrap();
            assert!((nqsb_value(&game, &m, &id, o(a)).unwrap() - v).abs() < 1e-12);
        }
        let game = QsbGame::constant(1.0, Order::INF, e.clone()).unwrap();
        let (succ, _) = discrimination_exclusion(&e.joint(&m).unwrap());
        assert!((qsb_value(&game, &m, Order::INF).unwrap() - succ).abs() < 1e-12);
        let bad = QsbGame::constant(1.0, o(2.0), e).unwrap();
        assert!(qsb_value(&bad, &m, o(-2.0)).is_err());
    }

    #[test]
    fn nqsb_matches_schrodinger_picture() {
        let mut rng = rng_from_seed(10);
        let e = random_ensemble(&mut rng, 2, 3);
        let m = random_povm(&mut rng, 2, 2);
        let n = crate::random::random_channel(&mut rng, 2, 2, 3);
        for a in [-2.0, 0.5, 3.0] {
            let game = QsbGame::constant(1.0, o(a), e.clone()).unwrap();
            let heis = nqsb_value(&game, &m, &n, o(a)).unwrap();
            let sch = qsb_value(&QsbGame::constant(1.0, o(a), e.through(&n).unwrap()).unwrap(), &m, o(a)).unwrap();
            assert!((heis - sch).abs() < 1e-10);
        }
    }

    #[test]
    fn qcb_examples() {
        let prior = Pmf::uniform(2).unwrap();
        let rho = DensityMatrix::basis(2, 0).unwrap();
        let x = crate::linalg::CMat::from_row_slice(
            2,
            2,
            &[crate::linalg::c(0.0, 0.0), crate::linalg::c(1.0, 0.0), crate::linalg::c(1.0, 0.0), crate::linalg::c(0.0, 0.0)],
        );
        let chans = vec![KrausChannel::identity(2).unwrap(), KrausChannel::unitary(&x).unwrap()];
        let odds = Odds::constant(2, 1.0).unwrap();
        let comp = Povm::computational(2).unwrap();
        for a in [0.5, 2.0, f64::INFINITY] {
            assert!((qcb_value(&odds, &prior, &chans, &rho, &comp, o(a)).unwrap() - 1.0).abs() < 1e-12);
        }
        let same = vec![KrausChannel::identity(2).unwrap(); 2];
        let v = qcb_value(&odds, &prior, &same, &rho, &comp, o(2.0)).unwrap();
        let game = QsbGame::constant(1.0, o(2.0), induced_ensemble(&prior, &same, &rho).unwrap()).unwrap();
        assert!((v - uninformed_qsb_value(&game, o(2.0)).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn discrimination_matches_brute_force() {
        let mut rng = rng_from_seed(12);
        for _ in 0..30 {
            let e = random_ensemble(&mut rng, 2, 4);
            let m = random_povm(&mut rng, 2, 4);
            let j = e.joint(&m).unwrap();
            let (s, f) = discrimination_exclusion(&j);
            let (bs, bf) = cpp_brute_force(&j);
            assert!((s - bs).abs() < 1e-12 && (f - bf).abs() < 1e-12);
        }
        let e = Ensemble::uniform(StateSet::basis(2).unwrap()).unwrap();
        let (s, f) = discrimination_exclusion(&e.joint(&Povm::computational(2).unwrap()).unwrap());
        assert_eq!((s, f), (1.0, 0.0));
        let e3 = Ensemble::uniform(StateSet::basis(3).unwrap()).unwrap();
        let ui = Povm::uninformative(3, &Pmf::new(vec![0.2, 0.3, 0.5]).unwrap()).unwrap();
        let (s, f) = discrimination_exclusion(&e3.joint(&ui).unwrap());
        assert!((s - 1.0 / 3.0).abs() < 1e-12 && (f - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn gap_examples() {
        let mut rng = rng_from_seed(13);
        let e = random_ensemble(&mut rng, 2, 3);
        let m = random_povm(&mut rng, 2, 3);
        let n1 = random_povm(&mut rng, 2, 2);
        let n2 = random_povm(&mut rng, 2, 3);
        let opts = AscentOptions::default();
        for a in [-2.0, 0.5, 2.0] {
            let i = arimoto_mi_quantum(&e, &m, o(a)).unwrap();
            let ui = GapInstance::Measurement {
                ensemble: e.clone(),
                povm: m.clone(),
                free: FreeSet::UninformativeMeasurements,
            };
            assert!((arimoto_gap(&ui, o(a), &opts).unwrap() - i).abs() < 1e-15);
            let own = GapInstance::Measurement {
                ensemble: e.clone(),
                povm: m.clone(),
                free: FreeSet::ExplicitMeasurements(vec![m.clone(), n1.clone()]),
            };
            assert!(arimoto_gap(&own, o(a), &opts).unwrap() <= 1e-15);
            let two = GapInstance::Measurement {
                ensemble: e.clone(),
                povm: m.clone(),
                free: FreeSet::ExplicitMeasurements(vec![n1.clone(), n2.clone()]),
            };
            let i1 = arimoto_mi_quantum(&e, &n1, o(a)).unwrap();
            let i2 = arimoto_mi_quantum(&e, &n2, o(a)).unwrap();
            assert!((arimoto_gap(&two, o(a), &opts).unwrap() - (i - i1.max(i2))).abs() < 1e-15);
        }
        let empty = GapInstance::Measurement {
            ensemble: e.clone(),
            povm: m.clone(),
            free: FreeSet::ExplicitMeasurements(vec![]),
        };
        assert_eq!(arimoto_gap(&empty, o(2.0), &opts), Err(Error::EmptyFreeSet));
        let wrong = GapInstance::Measurement {
            ensemble: e,
            povm: m,
            free: FreeSet::ConstantChannels,
        };
        assert!(matches!(arimoto_gap(&wrong, o(2.0), &opts), Err(Error::WrongFreeSetKind(_))));
    }

    #[test]
    fn result_check_examples() {
        let e = orthogonal_pair();
        let ui = Povm::uninformative(2, &Pmf::new(vec![0.5, 0.5]).unwrap()).unwrap();
        let opts = AscentOptions::default();
        let r = result_check(
            &ResultInstance::Uninformative { ensemble: e.clone(), povm: ui },
            o(2.0),
            1e-9,
            1,
            &opts,
        )
        .unwrap();
        assert!(r.pass && r.lhs.abs() < 1e-12 && r.rhs.abs() < 1e-9);
        let comp = Povm::computational(2).unwrap();
        let r = result_check(
            &ResultInstance::Uninformative { ensemble: e, povm: comp },
            Order::INF,
            1e-9,
            1,
            &opts,
        )
        .unwrap();
        assert!(r.pass && (r.lhs - 1.0).abs() < 1e-12);
        let j = JointPmf::new(vec![vec![0.45, 0.05], vec![0.05, 0.45]]).unwrap();
        let r = result_check(&ResultInstance::Classical { joint: j }, Order::ONE, 1e-8, 1, &opts).unwrap();
        assert!(r.pass && (r.lhs - (1.0 - h2(0.1))).abs() < 1e-12);
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.starts_with("{\"result\":\"R5\",\"alpha\":1.0"));
    }
}
