//! Isoelastic utilities, certainty equivalents and horse betting with risk.
//!
//! A game is given by signed odds `o(x)` (all of one sign), a distribution over the race
//! outcome (optionally jointly with side information `g`) and a risk parameter `R`. Strategies
//! bet all wealth: `b_X` without side information, `b_{X|G}` with one betting row per `g`.

use serde::{Deserialize, Serialize};

use crate::divergence::{cond_div_raw, renyi_div_raw, CrdVariant};
use crate::error::{Error, Result};
use crate::num::log2_sum_exp2;
use crate::order::{sgn, Order, RiskParam};
use crate::prob::{CondPmf, JointPmf, Pmf, SUPPORT_TOL};

/// Signed odds, one per outcome, sharing a single sign.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Odds {
    values: Vec<f64>,
}

impl Odds {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidOdds("no outcomes".into()));
        }
        if values.iter().any(|v| !v.is_finite() || *v == 0.0) {
            return Err(Error::InvalidOdds("odds must be finite and nonzero".into()));
        }
        let s = sgn(values[0]);
        if values.iter().any(|&v| sgn(v) != s) {
            return Err(Error::InvalidOdds("odds of mixed sign".into()));
        }
        Ok(Odds { values })
    }

    /// `o(x) = value` for every one of `n` outcomes.
    pub fn constant(n: usize, value: f64) -> Result<Self> {
        Odds::new(vec![value; n])
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `+1` for a gain game, `−1` for a loss game.
    pub fn sign(&self) -> f64 {
        sgn(self.values[0])
    }

    /// `c^o = (Σ 1/o(x))^{-1}`.
    pub fn c(&self) -> f64 {
        1.0 / self.values.iter().map(|o| 1.0 / o).sum::<f64>()
    }

    /// `r^o(x) = c^o / o(x)`, a PMF for either sign.
    pub fn r(&self) -> Vec<f64> {
        let c = self.c();
        self.values.iter().map(|o| c / o).collect()
    }
}

impl TryFrom<Vec<f64>> for Odds {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Odds::new(v)
    }
}

impl From<Odds> for Vec<f64> {
    fn from(o: Odds) -> Self {
        o.values
    }
}

/// Betting strategy without (`Plain`) or with (`Conditional`, rows indexed by `g`) side information.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Strategy {
    Plain(Pmf),
    Conditional(CondPmf),
}

/// Outcome distribution `p_X`, or joint `p_{XG}` with rows indexed by `x`.
#[derive(Debug, Clone, PartialEq)]
pub enum Dist {
    Marginal(Pmf),
    Joint(JointPmf),
}

impl Dist {
    pub fn nx(&self) -> usize {
        match self {
            Dist::Marginal(p) => p.len(),
            Dist::Joint(j) => j.nx(),
        }
    }

    /// Columns `p(·, g)` as vectors over `x`.
    fn columns(&self) -> Vec<Vec<f64>> {
        match self {
            Dist::Marginal(p) => vec![p.probs().to_vec()],
            Dist::Joint(j) => (0..j.ng())
                .map(|g| (0..j.nx()).map(|x| j.get(x, g)).collect())
                .collect(),
        }
    }
}

/// Game description as read from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameSpec {
    pub odds: Odds,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prior: Option<Pmf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub joint: Option<JointPmf>,
    pub risk: RiskParam,
}

impl GameSpec {
    pub fn dist(&self) -> Result<Dist> {
        let d = match (&self.joint, &self.prior) {
            (Some(j), _) => Dist::Joint(j.clone()),
            (None, Some(p)) => Dist::Marginal(p.clone()),
            (None, None) => {
                return Err(Error::InvalidPmf("game needs a prior or a joint".into()))
            }
        };
        if d.nx() != self.odds.len() {
            return Err(Error::AlphabetMismatch {
                expected: self.odds.len(),
                got: d.nx(),
            });
        }
        Ok(d)
    }
}

/// `u_R(w) = sgn(w)(|w|^{1−R} − 1)/(1 − R)`, and `sgn(w) ln|w|` at `R = 1`.
pub fn isoelastic_utility(w: f64, r: RiskParam) -> Result<f64> {
    let rv = r.value();
    if !rv.is_finite() {
        return Err(Error::InvalidRisk("utility needs a finite risk".into()));
    }
    if w == 0.0 && rv >= 1.0 {
        return Err(Error::UndefinedAtZero(rv));
    }
    let a = w.abs();
    Ok(if rv == 1.0 {
        sgn(w) * a.ln()
    } else {
        sgn(w) * (a.powf(1.0 - rv) - 1.0) / (1.0 - rv)
    })
}

/// `u_R'(w) = |w|^{−R}`.
pub fn isoelastic_first_derivative(w: f64, r: RiskParam) -> f64 {
    w.abs().powf(-r.value())
}

/// `u_R''(w) = −sgn(w)·R·|w|^{−R−1}`.
pub fn isoelastic_second_derivative(w: f64, r: RiskParam) -> f64 {
    let rv = r.value();
    -sgn(w) * rv * w.abs().powf(-rv - 1.0)
}

/// Relative risk aversion `−w u''(w)/u'(w)`.
pub fn rra(u_second: f64, u_first: f64, w: f64) -> f64 {
    -w * u_second / u_first
}

/// Certainty equivalent together with a flag for the zero-wealth boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IceValue {
    pub value: f64,
    /// A zero payoff on the support met a non-positive power `1 − R`; `value` is then `0`.
    pub degenerate: bool,
}

/// Per-column data: `p(x, g)` and the matching bets `b(x|g)`.
struct Columns<'a> {
    odds: &'a [f64],
    p: Vec<Vec<f64>>,
    b: Vec<Vec<f64>>,
}

fn columns<'a>(strategy: &Strategy, odds: &'a Odds, dist: &Dist) -> Result<Columns<'a>> {
    let nx = odds.len();
    if dist.nx() != nx {
        return Err(Error::AlphabetMismatch {
            expected: nx,
            got: dist.nx(),
        });
    }
    let p = dist.columns();
    let b: Vec<Vec<f64>> = match strategy {
        Strategy::Plain(b) => {
            if b.len() != nx {
                return Err(Error::AlphabetMismatch { expected: nx, got: b.len() });
            }
            vec![b.probs().to_vec(); p.len()]
        }
        Strategy::Conditional(b) => {
            if matches!(dist, Dist::Marginal(_)) {
                return Err(Error::ShapeMismatch(
                    "conditional strategy needs a joint distribution".into(),
                ));
            }
            if b.n_in() != p.len() || b.n_out() != nx {
                return Err(Error::ShapeMismatch(format!(
                    "strategy is {}x{}, game needs {}x{nx}",
                    b.n_in(),
                    b.n_out(),
                    p.len()
                )));
            }
            b.rows().to_vec()
        }
    };
    Ok(Columns {
        odds: odds.values(),
        p,
        b,
    })
}

/// `log2 |ice|` and degeneracy, before the sign of the odds is applied.
fn log_abs_ice(cols: &Columns, r: f64) -> (f64, bool) {
    let mut terms = Vec::new();
    let mut extreme: Option<f64> = None;
    let e = 1.0 - r;
    for (pc, bc) in cols.p.iter().zip(&cols.b) {
        for x in 0..pc.len() {
            if pc[x] <= SUPPORT_TOL {
                continue;
            }
            let w = (bc[x] * cols.odds[x]).abs();
            let lw = w.log2();
            if r == f64::INFINITY {
                extreme = Some(extreme.map_or(lw, |m: f64| m.min(lw)));
            } else if r == f64::NEG_INFINITY {
                extreme = Some(extreme.map_or(lw, |m: f64| m.max(lw)));
            } else if r == 1.0 {
                if w == 0.0 {
                    return (f64::NEG_INFINITY, true);
                }
                terms.push(pc[x] * lw);
            } else {
                if w == 0.0 {
                    if e < 0.0 {
                        return (f64::NEG_INFINITY, true);
                    }
                    continue;
                }
                terms.push(pc[x].log2() + e * lw);
            }
        }
    }
    if let Some(m) = extreme {
        return (m, false);
    }
    if r == 1.0 {
        (terms.iter().sum(), false)
    } else {
        (log2_sum_exp2(terms) / e, false)
    }
}

/// Isoelastic certainty equivalent `sgn(o)[Σ p |b o|^{1−R}]^{1/(1−R)}` and its limits.
pub fn ice(strategy: &Strategy, odds: &Odds, dist: &Dist, r: RiskParam) -> Result<IceValue> {
    let cols = columns(strategy, odds, dist)?;
    let (l, degenerate) = log_abs_ice(&cols, r.value());
    Ok(IceValue {
        value: if degenerate { 0.0 } else { odds.sign() * l.exp2() },
        degenerate,
    })
}

/// `U_R = sgn(o)·log2|ice|`.
pub fn log_ice(strategy: &Strategy, odds: &Odds, dist: &Dist, r: RiskParam) -> Result<f64> {
    let cols = columns(strategy, odds, dist)?;
    let (l, degenerate) = log_abs_ice(&cols, r.value());
    if degenerate {
        return Err(Error::ZeroPayoffAtNegativePower(1.0 - r.value()));
    }
    if l == f64::NEG_INFINITY {
        return Err(Error::DegenerateDistribution(
            "certainty equivalent is zero".into(),
        ));
    }
    Ok(odds.sign() * l)
}

/// Direction in which each column sum `S_g = Σ_x p(x,g)|b o|^{1−R}` should move.
fn column_direction(o_sign: f64, r: f64) -> f64 {
    sgn(o_sign / (1.0 - r))
}

/// `S_g` at a vertex `e_k`, with `0^{negative} = ∞`.
fn vertex_sum(pc: &[f64], odds: &[f64], k: usize, r: f64) -> f64 {
    let e = 1.0 - r;
    let mut s = 0.0;
    for x in 0..pc.len() {
        if pc[x] <= SUPPORT_TOL {
            continue;
        }
        if x == k {
            s += pc[x] * odds[x].abs().powf(e);
        } else if e < 0.0 {
            return f64::INFINITY;
        } else if e == 0.0 {
            s += pc[x];
        }
    }
    s
}

/// Column statistic used at `R = ±∞`: min (`+∞`) or max (`−∞`) payoff over the column support.
fn vertex_extreme(pc: &[f64], odds: &[f64], k: usize, r: f64) -> Option<f64> {
    let vals = (0..pc.len())
        .filter(|&x| pc[x] > SUPPORT_TOL)
        .map(|x| if x == k { odds[x].abs() } else { 0.0 });
    if r == f64::INFINITY {
        vals.reduce(f64::min)
    } else {
        vals.reduce(f64::max)
    }
}

/// Geometric-mean column statistic at `R = 1` for the vertex `e_k`.
fn vertex_geometric(pc: &[f64], odds: &[f64], k: usize) -> f64 {
    if (0..pc.len()).any(|x| x != k && pc[x] > SUPPORT_TOL) {
        0.0
    } else {
        odds[k].abs()
    }
}

fn point_mass(n: usize, k: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[k] = 1.0;
    v
}

fn uniform(n: usize) -> Vec<f64> {
    vec![1.0 / n as f64; n]
}

fn best_vertex<F: Fn(usize) -> f64>(n: usize, score: F, maximize: bool) -> usize {
    let mut best = 0;
    let mut bv = score(0);
    for k in 1..n {
        let v = score(k);
        if (maximize && v > bv) || (!maximize && v < bv) {
            best = k;
            bv = v;
        }
    }
    best
}

/// `b ∝ 1/|o|` on the column support.
fn inverse_odds_on_support(pc: &[f64], odds: &[f64]) -> Vec<f64> {
    let w: Vec<f64> = (0..pc.len())
        .map(|x| if pc[x] > SUPPORT_TOL { 1.0 / odds[x].abs() } else { 0.0 })
        .collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|v| v / s).collect()
}

fn closed_form_column(pc: &[f64], odds: &[f64], o_sign: f64, r: RiskParam) -> Result<Vec<f64>> {
    let n = pc.len();
    let mass: f64 = pc.iter().sum();
    if mass <= SUPPORT_TOL {
        return Ok(uniform(n));
    }
    let rv = r.value();
    let off_support = (0..n).find(|&x| pc[x] <= SUPPORT_TOL);
    if rv == 0.0 {
        let score = |k: usize| pc[k] * odds[k].abs();
        return Ok(point_mass(n, best_vertex(n, score, o_sign > 0.0)));
    }
    if rv.is_infinite() {
        let gain = o_sign > 0.0;
        let inf = rv > 0.0;
        return Ok(match (gain, inf) {
            (true, true) => inverse_odds_on_support(pc, odds),
            (false, false) => match off_support {
                Some(k) => point_mass(n, k),
                None => inverse_odds_on_support(pc, odds),
            },
            _ => {
                let score = |k: usize| vertex_extreme(pc, odds, k, rv).unwrap_or(0.0);
                point_mass(n, best_vertex(n, score, gain))
            }
        });
    }
    if sgn(rv) == o_sign {
        if o_sign < 0.0 {
            if let Some(k) = off_support {
                return Ok(point_mass(n, k));
            }
        }
        let logs: Vec<f64> = (0..n)
            .map(|x| {
                if pc[x] <= SUPPORT_TOL {
                    f64::NEG_INFINITY
                } else {
                    pc[x].log2() / rv + (1.0 - rv) / rv * odds[x].abs().log2()
                }
            })
            .collect();
        let lz = log2_sum_exp2(logs.iter().cloned());
        return Ok(logs.iter().map(|l| (l - lz).exp2()).collect());
    }
    if rv == 1.0 {
        let score = |k: usize| vertex_geometric(pc, odds, k);
        return Ok(point_mass(n, best_vertex(n, score, false)));
    }
    let dir = column_direction(o_sign, rv);
    let score = |k: usize| vertex_sum(pc, odds, k, rv);
    Ok(point_mass(n, best_vertex(n, score, dir > 0.0)))
}

/// Closed-form maximiser of the certainty equivalent.
///
/// When the signs of the odds and of `R` agree the optimum is
/// `h(x|g) ∝ p(x|g)^{1/R} |o(x)|^{(1−R)/R}`; otherwise the objective is maximised at a vertex.
pub fn optimal_strategy(odds: &Odds, dist: &Dist, r: RiskParam) -> Result<Strategy> {
    let nx = odds.len();
    if dist.nx() != nx {
        return Err(Error::AlphabetMismatch { expected: nx, got: dist.nx() });
    }
    let cols = dist.columns();
    let rows = cols
        .iter()
        .map(|pc| closed_form_column(pc, odds.values(), odds.sign(), r))
        .collect::<Result<Vec<_>>>()?;
    Ok(match dist {
        Dist::Marginal(_) => Strategy::Plain(Pmf::from_weights(rows[0].clone())?),
        Dist::Joint(_) => Strategy::Conditional(CondPmf::from_weights(rows)?),
    })
}

/// The three terms of the decomposition of `U_R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlpTerms {
    /// `sgn(o) log2|c^o|`.
    pub c_term: f64,
    /// `sgn(o) sgn(R) D_{1/R}(p‖r^o)`, or its conditional form.
    pub divergence_term: f64,
    /// `−sgn(o) sgn(R) D_R(h‖b)`, or its joint form.
    pub mismatch_term: f64,
}

impl BlpTerms {
    pub fn total(&self) -> f64 {
        self.c_term + self.divergence_term + self.mismatch_term
    }
}

/// `h(x|g)` for every live column together with `h(g)`.
fn tilted(pcols: &[Vec<f64>], odds: &[f64], rv: f64) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut hx = Vec::with_capacity(pcols.len());
    let mut hg_log = Vec::with_capacity(pcols.len());
    for pc in pcols {
        let pg: f64 = pc.iter().sum();
        let logs: Vec<f64> = pc
            .iter()
            .zip(odds)
            .map(|(&p, &o)| {
                let pxg = p / pg;
                if pxg <= SUPPORT_TOL {
                    f64::NEG_INFINITY
                } else if rv.is_infinite() {
                    -o.abs().log2()
                } else {
                    pxg.log2() / rv + (1.0 - rv) / rv * o.abs().log2()
                }
            })
            .collect();
        let lz = log2_sum_exp2(logs.iter().cloned());
        hx.push(logs.iter().map(|l| (l - lz).exp2()).collect());
        let weight = if rv.is_infinite() { 0.0 } else { rv * lz };
        hg_log.push(pg.log2() + weight);
    }
    let lz = log2_sum_exp2(hg_log.iter().cloned());
    let hg = hg_log.iter().map(|l| (l - lz).exp2()).collect();
    (hx, hg)
}

/// Decomposition of `U_R` into an odds constant, a divergence from `r^o` and a mismatch term.
///
/// Defined for finite nonzero `R`, and for `R = ±∞` without side information. Negative `R`
/// needs full conditional support.
pub fn blp_decomposition(
    strategy: &Strategy,
    odds: &Odds,
    dist: &Dist,
    r: RiskParam,
) -> Result<BlpTerms> {
    let rv = r.value();
    if r.is_zero() {
        return Err(Error::Unsupported(
            "the decomposition has no limit at R = 0".into(),
        ));
    }
    if rv.is_infinite() && matches!(dist, Dist::Joint(_)) {
        return Err(Error::Unsupported(
            "with side information the decomposition needs a finite risk".into(),
        ));
    }
    let cols = columns(strategy, odds, dist)?;
    let so = odds.sign();
    let sr = r.sign();
    let live: Vec<usize> = (0..cols.p.len())
        .filter(|&g| cols.p[g].iter().sum::<f64>() > SUPPORT_TOL)
        .collect();
    let pcols: Vec<Vec<f64>> = live.iter().map(|&g| cols.p[g].clone()).collect();
    if rv < 0.0 {
        for pc in &pcols {
            if pc.iter().any(|&v| v <= SUPPORT_TOL) {
                return Err(Error::DivergentValue(
                    "negative risk needs every outcome possible under every live g".into(),
                ));
            }
        }
    }
    let ro = odds.r();
    let inv = Order::new(1.0 / rv)?;
    let ord_r = Order::new(rv)?;
    let pg: Vec<f64> = pcols.iter().map(|c| c.iter().sum()).collect();
    let rows: Vec<Vec<f64>> = pcols
        .iter()
        .zip(&pg)
        .map(|(c, s)| c.iter().map(|v| v / s).collect())
        .collect();
    let div = match dist {
        Dist::Marginal(_) => renyi_div_raw(&rows[0], &ro, inv),
        Dist::Joint(_) => {
            let refs: Vec<&[f64]> = vec![ro.as_slice(); rows.len()];
            cond_div_raw(CrdVariant::Blp, &pg, &rows, &refs, inv)
        }
    };
    let (hx, hg) = tilted(&pcols, odds.values(), rv);
    let mut hjoint = Vec::new();
    let mut bjoint = Vec::new();
    for (k, &g) in live.iter().enumerate() {
        for x in 0..odds.len() {
            hjoint.push(hx[k][x] * hg[k]);
            bjoint.push(cols.b[g][x] * hg[k]);
        }
    }
    let mismatch = renyi_div_raw(&hjoint, &bjoint, ord_r);
    if !div.is_finite() {
        return Err(Error::DivergentValue("D_{1/R}(p‖r) is infinite".into()));
    }
    Ok(BlpTerms {
        c_term: so * odds.c().abs().log2(),
        divergence_term: so * sr * div,
        mismatch_term: -so * sr * mismatch,
    })
}

/// Per-column maximiser of a certainty-equivalent statistic found without the closed forms.
fn numeric_column(
    pc: &[f64],
    odds: &[f64],
    o_sign: f64,
    rv: f64,
) -> Result<Vec<f64>> {
    let n = pc.len();
    if pc.iter().sum::<f64>() <= SUPPORT_TOL {
        return Ok(uniform(n));
    }
    let support: Vec<usize> = (0..n).filter(|&x| pc[x] > SUPPORT_TOL).collect();
    let gain = o_sign > 0.0;
    if rv.is_infinite() {
        let maxmin = (rv > 0.0) == gain;
        if !maxmin {
            let score = |k: usize| vertex_extreme(pc, odds, k, rv).unwrap_or(0.0);
            return Ok(point_mass(n, best_vertex(n, score, gain)));
        }
        if !gain && support.len() < n {
            let k = (0..n).find(|x| !support.contains(x)).unwrap_or(0);
            return Ok(point_mass(n, k));
        }
        // Level t is attainable iff the budgets t/|o(x)| over the support fit in one unit.
        let need = |t: f64| support.iter().map(|&x| t / odds[x].abs()).sum::<f64>();
        let (mut lo, mut hi) = (0.0f64, support.iter().map(|&x| odds[x].abs()).fold(0.0, f64::max));
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if need(mid) <= 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let t = if gain { lo } else { hi };
        let mut b = vec![0.0; n];
        for &x in &support {
            b[x] = t / odds[x].abs();
        }
        let s: f64 = b.iter().sum();
        for v in b.iter_mut() {
            *v /= s;
        }
        return Ok(b);
    }
    if rv == 1.0 && !gain {
        let score = |k: usize| vertex_geometric(pc, odds, k);
        return Ok(point_mass(n, best_vertex(n, score, false)));
    }
    let maximize_s = column_direction(o_sign, rv) > 0.0;
    let vertex = best_vertex(n, |k| vertex_sum(pc, odds, k, rv), maximize_s);
    let best = point_mass(n, vertex);
    let best_val = vertex_sum(pc, odds, vertex, rv);
    if rv == 0.0 {
        return Ok(best);
    }
    let e = 1.0 - rv;
    let convex = if rv == 1.0 { true } else { (e > 0.0 && e < 1.0) == maximize_s };
    if !convex || (!maximize_s && support.len() < n) {
        return Ok(best);
    }
    let oa: Vec<f64> = odds.iter().map(|o| o.abs()).collect();
    let log_slope = |x: usize, t: f64| -> f64 {
        if rv == 1.0 {
            pc[x].log2() - t
        } else {
            (e * pc[x]).abs().log2() + e * oa[x].log2() + (e - 1.0) * t
        }
    };
    let decreasing = rv == 1.0 || e < 1.0;
    let dir = if decreasing { 1.0 } else { -1.0 };
    let stake = |x: usize, u: f64| -> f64 {
        let f = |t: f64| dir * (log_slope(x, t) - u);
        if f(0.0) >= 0.0 {
            1.0
        } else if f(-1074.0) <= 0.0 {
            0.0
        } else {
            find_root(f, -1074.0, 0.0).exp2()
        }
    };
    let total = |u: f64| dir * support.iter().map(|&x| stake(x, u)).sum::<f64>().log2();
    let u = find_root(total, -4000.0, 4000.0);
    let mut b = vec![0.0; n];
    for &x in &support {
        b[x] = stake(x, u);
    }
    let s: f64 = b.iter().sum();
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::OptimizerDidNotConverge {
            iterations: ROOT_ITER,
            best_value: best_val,
            best_point: best,
        });
    }
    for v in b.iter_mut() {
        *v /= s;
    }
    let interior = vertex_free_sum(pc, &oa, &b, rv);
    let better = rv == 1.0 || (maximize_s && interior >= best_val) || (!maximize_s && interior <= best_val);
    Ok(if better { b } else { best })
}

const ROOT_ITER: usize = 200;

/// Root of a decreasing `f` bracketed by `[lo, hi]`, by the Illinois variant of false position.
/// Non-finite values fall back to bisection.
fn find_root(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let (mut flo, mut fhi) = (f(lo), f(hi));
    let mut side = 0i8;
    for _ in 0..ROOT_ITER {
        if hi - lo <= 1e-13 * (1.0 + lo.abs().max(hi.abs())) {
            break;
        }
        let mut m = if flo.is_finite() && fhi.is_finite() && flo != fhi {
            lo + flo * (hi - lo) / (flo - fhi)
        } else {
            0.5 * (lo + hi)
        };
        if !(m > lo && m < hi) {
            m = 0.5 * (lo + hi);
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if fm > 0.0 {
            lo = m;
            flo = fm;
            if side == 1 {
                fhi *= 0.5;
            }
            side = 1;
        } else {
            hi = m;
            fhi = fm;
            if side == -1 {
                flo *= 0.5;
            }
            side = -1;
        }
    }
    0.5 * (lo + hi)
}

fn vertex_free_sum(pc: &[f64], oa: &[f64], b: &[f64], rv: f64) -> f64 {
    let e = 1.0 - rv;
    (0..pc.len())
        .filter(|&x| pc[x] > SUPPORT_TOL)
        .map(|x| pc[x] * (b[x] * oa[x]).powf(e))
        .sum()
}

/// Maximises the certainty equivalent over strategies numerically, column by column.
///
/// Smooth cases solve the stationarity conditions by nested bisection on the multiplier and
/// the stakes, then compare with every vertex; `R = 0` uses vertices and `R = ±∞` a bisection on the attainable payoff level.
pub fn numeric_optimal_ice(
    odds: &Odds,
    dist: &Dist,
    r: RiskParam,
) -> Result<(f64, Strategy)> {
    let nx = odds.len();
    if dist.nx() != nx {
        return Err(Error::AlphabetMismatch { expected: nx, got: dist.nx() });
    }
    let rows = dist
        .columns()
        .iter()
        .map(|pc| numeric_column(pc, odds.values(), odds.sign(), r.value()))
        .collect::<Result<Vec<_>>>()?;
    let strategy = match dist {
        Dist::Marginal(_) => Strategy::Plain(Pmf::from_weights(rows[0].clone())?),
        Dist::Joint(_) => Strategy::Conditional(CondPmf::from_weights(rows)?),
    };
    let v = ice(&strategy, odds, dist, r)?;
    Ok((v.value, strategy))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::{cond_renyi_probability, renyi_probability};
    use crate::random::{random_joint, random_pmf, rng_from_seed};

    fn risk(r: f64) -> RiskParam {
        RiskParam::new(r).unwrap()
    }

    #[test]
    fn utility_examples() {
        assert!((isoelastic_utility(2.5, risk(0.0)).unwrap() - 1.5).abs() < 1e-15);
        assert!((isoelastic_utility(std::f64::consts::E, risk(1.0)).unwrap() - 1.0).abs() < 1e-15);
        assert!((isoelastic_utility(2.0, risk(2.0)).unwrap() - 0.5).abs() < 1e-15);
        assert!(matches!(
            isoelastic_utility(0.0, risk(2.0)),
            Err(Error::UndefinedAtZero(_))
        ));
        for w in [-3.0, -0.5, 0.4, 3.0] {
            let r = risk(0.7);
            let v = rra(
                isoelastic_second_derivative(w, r),
                isoelastic_first_derivative(w, r),
                w,
            );
            assert!((v - 0.7).abs() < 1e-12);
        }
    }

    #[test]
    fn rra_sign_follows_wealth_for_concave_utility() {
        let r = risk(2.0);
        let u1 = isoelastic_first_derivative(3.0, r);
        let u2 = isoelastic_second_derivative(3.0, r);
        assert!(u2 < 0.0 && rra(u2, u1, 3.0) > 0.0);
        assert!(rra(-0.2, 1.0, -2.0) < 0.0);
    }

    #[test]
    fn ice_examples() {
        let p = Dist::Marginal(Pmf::new(vec![0.3, 0.7]).unwrap());
        let odds = Odds::new(vec![4.0, 4.0 / 3.0]).unwrap();
        let b = Strategy::Plain(Pmf::new(vec![0.5, 0.5]).unwrap());
        // Payoffs 2 and 2/3; a constant payoff needs b ∝ 1/o.
        let bc = Strategy::Plain(Pmf::new(vec![0.25, 0.75]).unwrap());
        for r in [-3.0, 0.0, 0.5, 1.0, 2.0, f64::INFINITY, f64::NEG_INFINITY] {
            let v = ice(&bc, &odds, &p, risk(r)).unwrap();
            assert!((v.value - 1.0).abs() < 1e-12 && !v.degenerate);
        }
        let v0 = ice(&b, &odds, &p, risk(0.0)).unwrap().value;
        assert!((v0 - (0.3 * 2.0 + 0.7 * 2.0 / 3.0)).abs() < 1e-12);
        let c = 3.0;
        let j = JointPmf::new(vec![vec![0.2, 0.1], vec![0.3, 0.4]]).unwrap();
        let bj = Strategy::Conditional(CondPmf::new(vec![vec![0.6, 0.4], vec![0.1, 0.9]]).unwrap());
        let v = ice(&bj, &Odds::constant(2, c).unwrap(), &Dist::Joint(j), risk(0.0)).unwrap();
        let expect = c * (0.6 * 0.2 + 0.4 * 0.3 + 0.1 * 0.1 + 0.9 * 0.4);
        assert!((v.value - expect).abs() < 1e-12);
    }

    #[test]
    fn zero_payoff_boundary() {
        let p = Dist::Marginal(Pmf::uniform(2).unwrap());
        let odds = Odds::constant(2, 2.0).unwrap();
        let b = Strategy::Plain(Pmf::new(vec![1.0, 0.0]).unwrap());
        let v = ice(&b, &odds, &p, risk(2.0)).unwrap();
        assert!(v.degenerate && v.value == 0.0);
        // Regularised oracle: ICE → 0 as the zero bet becomes ε.
        let mut prev = f64::INFINITY;
        for eps in [1e-2, 1e-4, 1e-6, 1e-8] {
            let be = Strategy::Plain(Pmf::new(vec![1.0 - eps, eps]).unwrap());
            let ve = ice(&be, &odds, &p, risk(2.0)).unwrap().value;
            assert!(ve < prev);
            prev = ve;
        }
        assert!(prev < 1e-7);
        assert!(matches!(
            log_ice(&b, &odds, &p, risk(2.0)),
            Err(Error::ZeroPayoffAtNegativePower(_))
        ));
        assert!(!ice(&b, &odds, &p, risk(0.5)).unwrap().degenerate);
    }

    #[test]
    fn log_ice_round_trip_and_sign() {
        let p = Dist::Marginal(Pmf::new(vec![0.2, 0.5, 0.3]).unwrap());
        let b = Strategy::Plain(Pmf::new(vec![0.3, 0.3, 0.4]).unwrap());
        for (o, r) in [(2.0, 2.0), (-2.0, -0.5), (1.5, 1.0), (-3.0, 0.5)] {
            let odds = Odds::constant(3, o).unwrap();
            let u = log_ice(&b, &odds, &p, risk(r)).unwrap();
            let v = ice(&b, &odds, &p, risk(r)).unwrap().value;
            assert!(((odds.sign() * u).exp2() - v.abs()).abs() < 1e-12);
            assert_eq!(sgn(v), odds.sign());
        }
        let w = Strategy::Plain(Pmf::new(vec![1.0 / 3.0; 3]).unwrap());
        let u = log_ice(&w, &Odds::constant(3, -6.0).unwrap(), &p, risk(2.0)).unwrap();
        assert!((u + 1.0).abs() < 1e-12);
    }

    #[test]
    fn optimal_strategy_examples() {
        let p = Pmf::new(vec![0.8, 0.2]).unwrap();
        let d = Dist::Marginal(p.clone());
        let odds = Odds::constant(2, 2.0).unwrap();
        let Strategy::Plain(b) = optimal_strategy(&odds, &d, risk(1.0)).unwrap() else {
            panic!()
        };
        assert!((b.probs()[0] - 0.8).abs() < 1e-12);
        let Strategy::Plain(b) = optimal_strategy(&odds, &d, risk(2.0)).unwrap() else {
            panic!()
        };
        let expect = 0.8f64.sqrt() / (0.8f64.sqrt() + 0.2f64.sqrt());
        assert!((b.probs()[0] - expect).abs() < 1e-12);
        assert!((b.probs()[0] - 0.6667).abs() < 1e-4);
        let j = JointPmf::new(vec![vec![0.1, 0.3], vec![0.4, 0.2]]).unwrap();
        let Strategy::Conditional(b) =
            optimal_strategy(&odds, &Dist::Joint(j), risk(0.0)).unwrap()
        else {
            panic!()
        };
        assert_eq!(b.row(0), &[0.0, 1.0]);
        assert_eq!(b.row(1), &[1.0, 0.0]);
    }

    #[test]
    fn closed_form_beats_random_strategies() {
        let mut rng = rng_from_seed(5);
        for trial in 0..40 {
            let j = random_joint(&mut rng, 3, 2);
            let sign = if trial % 2 == 0 { 1.0 } else { -1.0 };
            let odds = Odds::new((0..3).map(|_| sign * (0.5 + 3.0 * random_pmf(&mut rng, 2).probs()[0])).collect()).unwrap();
            for r in [-3.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 3.0, f64::INFINITY, f64::NEG_INFINITY] {
                let d = Dist::Joint(j.clone());
                let best = ice(&optimal_strategy(&odds, &d, risk(r)).unwrap(), &odds, &d, risk(r)).unwrap();
                for _ in 0..20 {
                    let rows = (0..2).map(|_| random_pmf(&mut rng, 3).into_vec()).collect();
                    let s = Strategy::Conditional(CondPmf::new(rows).unwrap());
                    let v = ice(&s, &odds, &d, risk(r)).unwrap();
                    assert!(v.value <= best.value + 1e-10 * (1.0 + best.value.abs()));
                }
            }
        }
    }

    #[test]
    fn operational_renyi_probabilities() {
        let mut rng = rng_from_seed(8);
        for _ in 0..20 {
            let j = random_joint(&mut rng, 3, 3);
            for alpha in [-4.0, -1.0, -0.3, 0.4, 1.0, 2.5, 7.0] {
                let o = Order::new(alpha).unwrap();
                let r = o.risk().unwrap();
                let c = 2.5;
                let odds = Odds::constant(3, sgn(alpha) * c).unwrap();
                let dm = Dist::Marginal(j.marginal_x());
                let b = optimal_strategy(&odds, &dm, r).unwrap();
                let v = ice(&b, &odds, &dm, r).unwrap().value;
                let expect = sgn(alpha) * c * renyi_probability(&j.marginal_x(), o).unwrap();
                assert!((v - expect).abs() < 1e-9);
                let dj = Dist::Joint(j.clone());
                let b = optimal_strategy(&odds, &dj, r).unwrap();
                let v = ice(&b, &odds, &dj, r).unwrap().value;
                let expect = sgn(alpha) * c * cond_renyi_probability(&j, o).unwrap();
                assert!((v - expect).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn decomposition_examples() {
        let odds = Odds::constant(4, 3.0).unwrap();
        assert!((odds.c() - 0.75).abs() < 1e-15);
        assert!(odds.r().iter().all(|v| (v - 0.25).abs() < 1e-15));
        let p = Dist::Marginal(Pmf::new(vec![0.1, 0.2, 0.3, 0.4]).unwrap());
        for r in [-2.0, 0.5, 1.0, 3.0] {
            let rp = risk(r);
            for o in [3.0, -3.0] {
                let odds = Odds::constant(4, o).unwrap();
                let h = optimal_strategy(&odds, &p, if sgn(r) == sgn(o) { rp } else { continue }).unwrap();
                let t = blp_decomposition(&h, &odds, &p, rp).unwrap();
                assert!(t.mismatch_term.abs() < 1e-10);
                assert!((t.total() - log_ice(&h, &odds, &p, rp).unwrap()).abs() < 1e-9);
                assert!((t.c_term - sgn(o) * 0.75f64.log2()).abs() < 1e-15);
            }
        }
        assert!(matches!(
            blp_decomposition(
                &Strategy::Plain(Pmf::uniform(4).unwrap()),
                &odds,
                &p,
                risk(0.0)
            ),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn numeric_optimum_matches_closed_form() {
        let mut rng = rng_from_seed(21);
        for trial in 0..30 {
            let j = random_joint(&mut rng, 3, 2);
            let sign = if trial % 2 == 0 { 1.0 } else { -1.0 };
            let odds = Odds::new(vec![sign * 1.5, sign * 2.0, sign * 4.0]).unwrap();
            for r in [-3.0, -0.5, 0.0, 0.5, 1.0, 2.0, f64::INFINITY, f64::NEG_INFINITY] {
                let d = Dist::Joint(j.clone());
                let (v, _) = numeric_optimal_ice(&odds, &d, risk(r)).unwrap();
                let c = ice(&optimal_strategy(&odds, &d, risk(r)).unwrap(), &odds, &d, risk(r)).unwrap();
                assert!(v >= c.value - 1e-6 * (1.0 + c.value.abs()), "r={r} v={v} c={}", c.value);
                assert!((v - c.value).abs() <= 1e-6 * (1.0 + c.value.abs()));
            }
        }
        let p = Dist::Marginal(Pmf::new(vec![0.5, 0.5]).unwrap());
        let (v, _) = numeric_optimal_ice(&Odds::constant(2, 2.0).unwrap(), &p, risk(0.0)).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn game_spec_json() {
        let s = r#"{"odds":[2,2],"prior":[0.8,0.2],"risk":"inf"}"#;
        let g: GameSpec = serde_json::from_str(s).unwrap();
        assert!(g.risk.value().is_infinite());
        assert!(matches!(g.dist().unwrap(), Dist::Marginal(_)));
        let back: GameSpec = serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
        assert_eq!(back, g);
    }
}
