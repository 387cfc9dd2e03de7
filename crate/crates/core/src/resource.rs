//! Informativeness of measurements: robustness, weight, measured Sibson divergences, the
//! Sibson informativeness measure with a minimax certificate, and the α-measure monotone.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::capacity::renyi_capacity_report;
use crate::divergence::{cond_div_raw, log_power_terms, renyi_div_raw, CrdVariant};
use crate::error::{Error, Result};
use crate::linalg::{c, cholesky_pd, hermitian_eigen, lambda_max, lambda_min, CMat};
use crate::order::{Order, OrderClass};
use crate::prob::{Pmf, SUPPORT_TOL};
use crate::quantum::{born_cond_pmf, is_uninformative, simulate_measurement, DensityMatrix, Povm, StateSet};
use crate::random::{ginibre, random_post_processing, rng_from_seed};
use crate::simplex::{default_starts, multi_start_maximize, SpgOptions};

/// Agreement required between the min-max and max-min values.
pub const MINIMAX_TOL: f64 = 1e-6;

/// Slack used by the monotone suite.
pub const MONOTONE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    BisectionOracle,
    Minimax,
}

/// Object attaining a reported value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Outcome weights `q(a)` of the optimal uninformative measurement.
    Pmf { q: Vec<f64> },
    /// State set and input prior attaining the capacity.
    Ensemble { states: StateSet, prior: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotoneReport {
    pub measure: String,
    pub value: f64,
    pub achiever: Witness,
    pub method: Method,
}

/// `Σ_a λ_max(M_a) − 1`.
pub fn robustness_informativeness(m: &Povm) -> f64 {
    (m.elements().iter().map(lambda_max).sum::<f64>() - 1.0).max(0.0)
}

/// `1 − Σ_a λ_min(M_a)`.
pub fn weight_informativeness(m: &Povm) -> f64 {
    (1.0 - m.elements().iter().map(|e| lambda_min(e).max(0.0)).sum::<f64>()).clamp(0.0, 1.0)
}

fn bisect<F: Fn(f64) -> bool>(mut lo: f64, mut hi: f64, above: F, tol: f64) -> f64 {
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if above(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Smallest `t` with `t·I − a ⪰ 0`, found by Cholesky tests only.
fn top_by_cholesky(a: &CMat, tol: f64) -> f64 {
    let neg = -a;
    let bound: f64 = a.iter().map(|z| z.norm()).sum::<f64>() + 1.0;
    bisect(-bound, bound, |t| cholesky_pd(&neg, t), tol)
}

/// Largest `t` with `a − t·I ⪰ 0`, found by Cholesky tests only.
fn bottom_by_cholesky(a: &CMat, tol: f64) -> f64 {
    let bound: f64 = a.iter().map(|z| z.norm()).sum::<f64>() + 1.0;
    -bisect(-bound, bound, |s| cholesky_pd(a, s), tol)
}

/// Robustness by bisection on `r` with a feasibility test: some `q` with `(1+r)q(a)·I ⪰ M_a`.
pub fn robustness_bisection(m: &Povm, tol: f64) -> f64 {
    let tops: Vec<f64> = m.elements().iter().map(|e| top_by_cholesky(e, tol * 1e-2)).collect();
    let feasible = |r: f64| tops.iter().map(|t| t.max(0.0)).sum::<f64>() <= 1.0 + r;
    bisect(0.0, m.n_outcomes() as f64, feasible, tol)
}

/// Weight by bisection on `w` with a feasibility test: some `q` with `M_a ⪰ (1−w)q(a)·I`.
pub fn weight_bisection(m: &Povm, tol: f64) -> f64 {
    let bottoms: Vec<f64> = m.elements().iter().map(|e| bottom_by_cholesky(e, tol * 1e-2)).collect();
    let feasible = |w: f64| 1.0 - w <= bottoms.iter().map(|b| b.max(0.0)).sum::<f64>();
    bisect(0.0, 1.0, feasible, tol)
}

fn check_pair(m: &Povm, n: &Povm, s: &StateSet) -> Result<()> {
    if m.dim() != n.dim() || m.dim() != s.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            got: if m.dim() != n.dim() { n.dim() } else { s.dim() },
        });
    }
    if m.n_outcomes() != n.n_outcomes() {
        return Err(Error::AlphabetMismatch {
            expected: m.n_outcomes(),
            got: n.n_outcomes(),
        });
    }
    Ok(())
}

/// `max_{p_X} D^S_α(p^{(𝕄,𝒮)}_{G|X} ‖ q^{(ℕ,𝒮)}_{G|X} | p_X)` by simplex ascent.
pub fn measured_sibson_div(m: &Povm, n: &Povm, s: &StateSet, alpha: Order) -> Result<f64> {
    check_pair(m, n, s)?;
    let p = born_cond_pmf(m, s)?;
    let q = born_cond_pmf(n, s)?;
    let p_rows = p.rows();
    let q_rows: Vec<&[f64]> = q.rows().iter().map(|r| r.as_slice()).collect();
    let nx = s.len();
    let f = |px: &[f64]| cond_div_raw(CrdVariant::Sibson, px, p_rows, &q_rows, alpha);
    let mut starts = default_starts(&[nx], 4, 0x5eed);
    starts.truncate(nx + 1);
    let mut best = f64::NEG_INFINITY;
    for st in &starts {
        best = best.max(f(st));
    }
    if best == f64::INFINITY {
        return Err(Error::DivergentValue("measured divergence is infinite".into()));
    }
    let a = alpha.value();
    let per_x: Option<Vec<f64>> = match alpha.classify() {
        OrderClass::One => Some((0..nx).map(|x| renyi_div_raw(&p_rows[x], q_rows[x], alpha)).collect()),
        OrderClass::Negative | OrderClass::ZeroOne | OrderClass::GtOne => Some(
            (0..nx)
                .map(|x| log_power_terms(&p_rows[x], q_rows[x], a).exp2())
                .collect(),
        ),
        _ => None,
    };
    if let Some(terms) = per_x {
        let ln2 = std::f64::consts::LN_2;
        let sg = alpha.sgn();
        let grad = |px: &[f64], g: &mut [f64]| -> f64 {
            if a == 1.0 {
                g.copy_from_slice(&terms);
                return px.iter().zip(&terms).map(|(p, t)| p * t).sum();
            }
            let l: f64 = px.iter().zip(&terms).map(|(p, t)| p * t).sum();
            for x in 0..nx {
                g[x] = sg / ((a - 1.0) * l * ln2) * terms[x];
            }
            sg / (a - 1.0) * l.log2()
        };
        let opts = SpgOptions {
            tol: 1e-12,
            ..Default::default()
        };
        if let Some(r) = multi_start_maximize(grad, &starts, &[nx], &opts) {
            best = best.max(f(&r.x));
        }
    }
    Ok(best.max(0.0))
}

/// Both sides of the informativeness minimax.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimaxCertificate {
    /// `max_p min_q`, the Rényi capacity of the Born conditional.
    pub max_min: f64,
    /// `min_q max_p`, attained at `q`.
    pub min_max: f64,
    pub prior: Vec<f64>,
    pub q: Vec<f64>,
}

fn radius_at(rows: &[Vec<f64>], q: &[f64], alpha: Order) -> f64 {
    rows.iter()
        .map(|r| renyi_div_raw(r, q, alpha))
        .fold(f64::NEG_INFINITY, f64::max)
}

fn normalise(v: Vec<f64>) -> Option<Vec<f64>> {
    let s: f64 = v.iter().sum();
    (s > 0.0 && s.is_finite()).then(|| v.into_iter().map(|x| x / s).collect())
}

/// Candidate minimisers `q_G` of `max_x D_α(p_{G|x} ‖ q_G)`.
fn radius_candidates(rows: &[Vec<f64>], prior: &[f64], sibson_prior: &[f64], alpha: Order) -> Vec<Vec<f64>> {
    let ng = rows[0].len();
    let col = |g: usize| rows.iter().map(move |r| r[g]);
    let mut out = Vec::new();
    match alpha.classify() {
        OrderClass::PosInf => out.extend(normalise((0..ng).map(|g| col(g).fold(0.0, f64::max)).collect())),
        OrderClass::NegInf => out.extend(normalise((0..ng).map(|g| col(g).fold(f64::INFINITY, f64::min)).collect())),
        OrderClass::One => {
            for p in [prior, sibson_prior] {
                out.extend(normalise((0..ng).map(|g| rows.iter().zip(p).map(|(r, px)| px * r[g]).sum()).collect()));
            }
        }
        _ => {
            let a = alpha.value();
            for p in [prior, sibson_prior] {
                let tilted = (0..ng)
                    .map(|g| {
                        let s: f64 = rows
                            .iter()
                            .zip(p)
                            .filter(|(r, px)| **px > SUPPORT_TOL && r[g] > 0.0)
                            .map(|(r, px)| px * r[g].powf(a))
                            .sum();
                        if s > 0.0 {
                            s.powf(1.0 / a)
                        } else {
                            0.0
                        }
                    })
                    .collect();
                out.extend(normalise(tilted));
            }
        }
    }
    out
}

/// The min-max and max-min forms of the Sibson informativeness of `m` on `s`.
pub fn informativeness_certificate(m: &Povm, s: &StateSet, alpha: Order) -> Result<MinimaxCertificate> {
    let w = born_cond_pmf(m, s)?;
    let cap = renyi_capacity_report(&w, alpha)?;
    let rows = w.rows();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for q in radius_candidates(rows, &cap.argmax, &cap.sibson_argmax, alpha) {
        let v = radius_at(rows, &q, alpha);
        if best.as_ref().is_none_or(|b| v < b.0) {
            best = Some((v, q));
        }
    }
    let (min_max, q) = best.unwrap_or((f64::INFINITY, vec![]));
    Ok(MinimaxCertificate {
        max_min: cap.value,
        min_max,
        prior: cap.argmax,
        q,
    })
}

/// `E^S_α(𝕄)` on the state set `s`, certified by the minimax identity.
pub fn informativeness_measure(m: &Povm, s: &StateSet, alpha: Order) -> Result<f64> {
    let cert = informativeness_certificate(m, s, alpha)?;
    let gap = cert.min_max - cert.max_min;
    if !(gap.abs() <= MINIMAX_TOL) {
        return Err(Error::MinimaxGapExceeded {
            min_max: cert.min_max,
            max_min: cert.max_min,
        });
    }
    Ok(cert.max_min.max(0.0))
}

/// `sgn(α)·2^{sgn(α)E} − sgn(α)`.
pub fn alpha_measure_from_e(e: f64, alpha: Order) -> f64 {
    let s = alpha.sgn();
    s * (s * e).exp2() - s
}

/// Options of the state-set search behind [`alpha_measure`].
#[derive(Debug, Clone, Copy)]
pub struct EnsembleSearch {
    pub random_starts: usize,
    pub max_iter: usize,
    pub tol: f64,
    /// Number of best ascent end points whose capacity is evaluated; later ones are tried only
    /// while no candidate has been accepted.
    pub evaluate_top: usize,
    pub seed: u64,
}

impl Default for EnsembleSearch {
    fn default() -> Self {
        EnsembleSearch {
            random_starts: 8,
            max_iter: 2000,
            tol: 1e-10,
            evaluate_top: 2,
            seed: 0,
        }
    }
}

impl EnsembleSearch {
    /// A cheaper search, used for the many simulated measurements of the monotone suite.
    pub fn light(seed: u64) -> Self {
        EnsembleSearch {
            random_starts: 2,
            max_iter: 500,
            seed,
            ..Default::default()
        }
    }
}

/// Arimoto's mutual information of the joint `q[x][g]` and its partial derivatives.
fn arimoto_joint(q: &[Vec<f64>], alpha: Order, grad: &mut [Vec<f64>]) -> f64 {
    let nx = q.len();
    let ng = q[0].len();
    let a = alpha.value();
    let px: Vec<f64> = q.iter().map(|r| r.iter().sum()).collect();
    let ln2 = std::f64::consts::LN_2;
    if a == 1.0 {
        let qg: Vec<f64> = (0..ng).map(|g| q.iter().map(|r| r[g]).sum()).collect();
        let mut i = 0.0;
        for x in 0..nx {
            for g in 0..ng {
                let v = q[x][g];
                if v > 0.0 {
                    let l = (v / (px[x] * qg[g])).log2();
                    i += v * l;
                    grad[x][g] = l;
                } else {
                    grad[x][g] = -1e12;
                }
            }
        }
        return i;
    }
    if a < 0.0 && q.iter().flatten().any(|&v| v <= 1e-300) {
        return f64::NAN;
    }
    let sx: f64 = px.iter().filter(|&&p| p > 0.0).map(|p| p.powf(a)).sum();
    let ag: Vec<f64> = (0..ng)
        .map(|g| q.iter().map(|r| r[g]).filter(|&v| v > 0.0).map(|v| v.powf(a)).sum())
        .collect();
    let t: f64 = ag.iter().filter(|&&v| v > 0.0).map(|v| v.powf(1.0 / a)).sum();
    let k = a / (1.0 - a);
    let s = alpha.sgn();
    for x in 0..nx {
        for g in 0..ng {
            let v = q[x][g];
            let dhx = if px[x] > 0.0 { k * a * px[x].powf(a - 1.0) / (sx * ln2) } else { 0.0 };
            let dhxg = if v > 0.0 {
                k * ag[g].powf(1.0 / a - 1.0) * v.powf(a - 1.0) / (t * ln2)
            } else if a > 1.0 {
                0.0
            } else {
                1e12 * k.signum()
            };
            grad[x][g] = s * (dhx - dhxg);
        }
    }
    s * k * (sx.log2() - t.log2())
}

type CVec = nalgebra::DVector<num_complex::Complex64>;

fn joint_of(v: &CVec, m: &Povm, kx: usize, d: usize) -> Vec<Vec<f64>> {
    (0..kx)
        .map(|x| {
            let vx = v.rows(x * d, d);
            m.elements()
                .iter()
                .map(|e| (vx.adjoint() * e * vx)[(0, 0)].re.max(0.0))
                .collect()
        })
        .collect()
}

fn sphere_eval(v: &CVec, m: &Povm, kx: usize, d: usize, alpha: Order) -> Option<(f64, CVec)> {
    let q = joint_of(v, m, kx, d);
    let mut dq = vec![vec![0.0; m.n_outcomes()]; kx];
    let val = arimoto_joint(&q, alpha, &mut dq);
    if !val.is_finite() {
        return None;
    }
    let mut e = CVec::zeros(kx * d);
    for x in 0..kx {
        let vx = v.rows(x * d, d).into_owned();
        let mut acc = CVec::zeros(d);
        for (g, el) in m.elements().iter().enumerate() {
            if dq[x][g].is_finite() && dq[x][g] != 0.0 {
                acc += el * &vx * c(2.0 * dq[x][g], 0.0);
            }
        }
        e.rows_mut(x * d, d).copy_from(&acc);
    }
    let radial = v.iter().zip(e.iter()).map(|(a, b)| (a.conj() * b).re).sum::<f64>();
    Some((val, &e - v * c(radial, 0.0)))
}

fn real_inner(a: &CVec, b: &CVec) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum()
}

fn sphere_ascent(v0: CVec, m: &Povm, kx: usize, d: usize, alpha: Order, opts: &EnsembleSearch) -> Option<(f64, CVec)> {
    let mut v = v0.normalize();
    let (mut val, mut g) = sphere_eval(&v, m, kx, d, alpha)?;
    let mut step = 0.1;
    let mut history = vec![val];
    for _ in 0..opts.max_iter {
        let gn2 = real_inner(&g, &g);
        if gn2.sqrt() <= opts.tol {
            break;
        }
        let reference = history.iter().cloned().fold(f64::INFINITY, f64::min);
        let mut t = step;
        let mut accepted = None;
        while t > 1e-16 {
            let vn = (&v + &g * c(t, 0.0)).normalize();
            if let Some((nv, ng)) = sphere_eval(&vn, m, kx, d, alpha) {
                if nv >= reference + 1e-4 * t * gn2 {
                    accepted = Some((vn, nv, ng));
                    break;
                }
            }
            t *= 0.5;
        }
        let Some((vn, nv, ng)) = accepted else { break };
        let s = &vn - &v;
        let y = &ng - &g;
        let sy = -real_inner(&s, &y);
        step = if sy > 0.0 { (real_inner(&s, &s) / sy).clamp(1e-8, 1e3) } else { (2.0 * t).min(1e3) };
        let flat = (nv - val).abs() <= 1e-15 * (1.0 + val.abs());
        v = vn;
        val = nv;
        g = ng;
        history.push(val);
        if history.len() > 8 {
            history.remove(0);
        }
        if flat && history.len() == 8 && history.iter().all(|h| (h - val).abs() <= 1e-14) {
            break;
        }
    }
    Some((val, v))
}

/// Stacked unnormalised vectors `√p_x |ψ_x⟩` built from eigenvectors of the POVM elements.
fn eigen_hints(m: &Povm, kx: usize, top: bool) -> CVec {
    let d = m.dim();
    let mut v = CVec::zeros(kx * d);
    let mut x = 0;
    for e in m.elements() {
        if x >= kx {
            break;
        }
        let (vals, vecs) = hermitian_eigen(e);
        let i = if top { d - 1 } else { 0 };
        let w = if top { vals[i].max(1e-3) } else { (1.0 - vals[i]).max(1e-3) };
        let col = vecs.column(i) * c(w.sqrt(), 0.0);
        v.rows_mut(x * d, d).copy_from(&col);
        x += 1;
    }
    for y in x..kx {
        for j in 0..d {
            v[y * d + j] = c(if j == y % d { 0.03 } else { 0.01 }, 0.0);
        }
    }
    v
}

fn state_set_from(v: &CVec, kx: usize, d: usize) -> Result<(StateSet, Vec<f64>)> {
    let mut states = Vec::with_capacity(kx);
    let mut weights = Vec::with_capacity(kx);
    for x in 0..kx {
        let vx: Vec<_> = v.rows(x * d, d).iter().cloned().collect();
        let n2: f64 = vx.iter().map(|z| z.norm_sqr()).sum();
        weights.push(n2);
        states.push(if n2 > 1e-30 {
            DensityMatrix::pure(&vx)?
        } else {
            DensityMatrix::maximally_mixed(d)?
        });
    }
    Ok((StateSet::new(states)?, weights))
}

/// Searches pure-state ensembles for `E_α(𝕄) = max_𝒮 E^S_α(𝕄, 𝒮)` and returns the best state set.
pub fn ensemble_search(m: &Povm, alpha: Order, opts: &EnsembleSearch, hints: &[StateSet]) -> Result<(f64, StateSet, Vec<f64>)> {
    if !alpha.is_finite() || alpha.value() == 0.0 {
        return Err(Error::Unsupported("the state-set search needs a finite nonzero order".into()));
    }
    let d = m.dim();
    let kx = (d * d).max(m.n_outcomes());
    let mut rng = rng_from_seed(opts.seed);
    let mut starts = vec![eigen_hints(m, kx, true), eigen_hints(m, kx, false)];
    for _ in 0..opts.random_starts {
        let g = ginibre(&mut rng, kx * d, 1);
        starts.push(CVec::from_iterator(kx * d, g.iter().cloned()));
    }
    let mut best: Option<(f64, StateSet, Vec<f64>)> = None;
    let mut consider = |set: StateSet| -> Result<bool> {
        let w = born_cond_pmf(m, &set)?;
        match renyi_capacity_report(&w, alpha) {
            Ok(r) => {
                if best.as_ref().is_none_or(|b| r.value > b.0) {
                    best = Some((r.value, set, r.argmax));
                }
                Ok(true)
            }
            Err(Error::DivergentValue(_)) | Err(Error::OptimizerDidNotConverge { .. }) => Ok(false),
            Err(e) => Err(e),
        }
    };
    let mut found = false;
    for h in hints {
        if h.dim() == d {
            found |= consider(h.clone())?;
        }
    }
    let mut ends = Vec::new();
    for (i, v0) in starts.into_iter().enumerate() {
        if i < 2 {
            found |= consider(state_set_from(&v0, kx, d)?.0)?;
        }
        if let Some(end) = sphere_ascent(v0, m, kx, d, alpha, opts) {
            ends.push(end);
        }
    }
    ends.sort_by(|a, b| b.0.total_cmp(&a.0));
    for (i, (_, v)) in ends.iter().enumerate() {
        if i >= opts.evaluate_top.max(1) && found {
            break;
        }
        found |= consider(state_set_from(v, kx, d)?.0)?;
    }
    best.ok_or_else(|| Error::OptimizerDidNotConverge {
        iterations: opts.max_iter,
        best_value: f64::NAN,
        best_point: vec![],
    })
}

/// The α-measure with its witness.
pub fn alpha_measure_report(m: &Povm, alpha: Order, opts: &EnsembleSearch, hints: &[StateSet]) -> Result<MonotoneReport> {
    let name = format!("alpha_measure[{alpha}]");
    let sum_q = |vals: Vec<f64>| Witness::Pmf {
        q: normalise(vals).unwrap_or_default(),
    };
    match alpha.classify() {
        OrderClass::PosInf => Ok(MonotoneReport {
            measure: name,
            value: robustness_informativeness(m),
            achiever: sum_q(m.elements().iter().map(lambda_max).collect()),
            method: Method::ClosedForm,
        }),
        OrderClass::NegInf => Ok(MonotoneReport {
            measure: name,
            value: weight_informativeness(m),
            achiever: sum_q(m.elements().iter().map(|e| lambda_min(e).max(0.0)).collect()),
            method: Method::ClosedForm,
        }),
        _ => {
            let (e, states, prior) = ensemble_search(m, alpha, opts, hints)?;
            Ok(MonotoneReport {
                measure: name,
                value: alpha_measure_from_e(e.max(0.0), alpha),
                achiever: Witness::Ensemble { states, prior },
                method: Method::Minimax,
            })
        }
    }
}

/// `M_α(𝕄)`.
pub fn alpha_measure(m: &Povm, alpha: Order) -> Result<f64> {
    Ok(alpha_measure_report(m, alpha, &EnsembleSearch::default(), &[])?.value)
}

/// One monotonicity comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotoneCheck {
    pub trial: usize,
    pub alpha: Order,
    pub original: f64,
    pub simulated: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotoneSuiteReport {
    pub faithful: bool,
    pub uninformative: bool,
    pub checks: Vec<MonotoneCheck>,
    pub failures: Vec<String>,
    pub pass: bool,
}

/// Orders swept by [`monotone_suite`].
pub const MONOTONE_ALPHAS: [f64; 6] = [f64::NEG_INFINITY, -1.0, 0.5, 1.0, 2.0, f64::INFINITY];

fn witness_states(r: &MonotoneReport) -> Vec<StateSet> {
    match &r.achiever {
        Witness::Ensemble { states, .. } => vec![states.clone()],
        Witness::Pmf { .. } => vec![],
    }
}

/// Faithfulness and monotonicity of `M_α` under random classical post-processings.
///
/// A state set found for a simulated measurement also seeds the search for `m`, so every value
/// reported for `m` is the best lower bound on its maximum seen during the suite.
pub fn monotone_suite(m: &Povm, trials: usize, seed: u64) -> Result<MonotoneSuiteReport> {
    let alphas: Vec<Order> = MONOTONE_ALPHAS.iter().map(|&a| Order::new(a).expect("order")).collect();
    let opts = EnsembleSearch {
        seed,
        ..Default::default()
    };
    let base: Vec<MonotoneReport> = alphas
        .par_iter()
        .map(|&a| alpha_measure_report(m, a, &opts, &[]))
        .collect::<Result<_>>()?;
    let (uninformative, _) = is_uninformative(m, 1e-6);
    let faithful = base.iter().all(|r| (r.value <= 1e-6) == uninformative);
    let mut failures = Vec::new();
    if !faithful {
        failures.push(format!(
            "faithfulness: uninformative = {uninformative}, values = {:?}",
            base.iter().map(|r| r.value).collect::<Vec<_>>()
        ));
    }
    let k = m.n_outcomes();
    let simulated: Vec<Vec<MonotoneReport>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = rng_from_seed(seed.wrapping_add(1 + t as u64));
            let n_out = 1 + t % (k + 1);
            let post = random_post_processing(&mut rng, k, n_out);
            let sim = simulate_measurement(m, &post)?;
            let o = EnsembleSearch::light(seed ^ (t as u64).wrapping_mul(0x9e37_79b9));
            alphas
                .iter()
                .zip(&base)
                .map(|(&a, b)| alpha_measure_report(&sim, a, &o, &witness_states(b)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut originals: Vec<f64> = base.iter().map(|r| r.value).collect();
    for (i, &a) in alphas.iter().enumerate() {
        if !a.is_finite() {
            continue;
        }
        for row in &simulated {
            if let Witness::Ensemble { states, .. } = &row[i].achiever {
                if let Ok(r) = renyi_capacity_report(&born_cond_pmf(m, states)?, a) {
                    originals[i] = originals[i].max(alpha_measure_from_e(r.value.max(0.0), a));
                }
            }
        }
    }
    let mut checks = Vec::new();
    for (t, row) in simulated.iter().enumerate() {
        for (i, &a) in alphas.iter().enumerate() {
            let pass = row[i].value <= originals[i] + MONOTONE_TOL;
            if !pass {
                failures.push(format!(
                    "trial {t}, alpha {a}: simulated {} > original {}",
                    row[i].value, originals[i]
                ));
            }
            checks.push(MonotoneCheck {
                trial: t,
                alpha: a,
                original: originals[i],
                simulated: row[i].value,
                pass,
            });
        }
    }
    Ok(MonotoneSuiteReport {
        faithful,
        uninformative,
        pass: failures.is_empty(),
        checks,
        failures,
    })
}

/// Eigenvalue-free `Σ_a λ_max(M_a)` and `Σ_a λ_min(M_a)` from the witness `q`, for re-verification.
pub fn verify_pmf_witness(m: &Povm, q: &Pmf, robustness: bool, value: f64, tol: f64) -> bool {
    let r = if robustness { value } else { -value };
    m.elements().iter().zip(q.probs()).all(|(e, &qa)| {
        if robustness {
            cholesky_pd(&(-e), (1.0 + r) * qa + tol)
        } else {
            cholesky_pd(e, -(1.0 + r) * qa + tol)
        }
    })
}
