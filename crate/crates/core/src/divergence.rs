//! Rényi divergence, the Sibson / Csiszár / Bleuler–Lapidoth–Pfister conditional divergences
//! and the mutual informations they induce.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::log2_sum_exp2;
use crate::order::{Order, OrderClass};
use crate::prob::{CondPmf, JointPmf, Pmf, SUPPORT_TOL};
use crate::simplex::{default_starts, multi_start_maximize, SpgOptions};

/// Which conditional Rényi divergence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CrdVariant {
    Sibson,
    Csiszar,
    Blp,
}

impl CrdVariant {
    pub const ALL: [CrdVariant; 3] = [CrdVariant::Sibson, CrdVariant::Csiszar, CrdVariant::Blp];
}

impl std::str::FromStr for CrdVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sibson" | "s" => Ok(CrdVariant::Sibson),
            "csiszar" | "c" => Ok(CrdVariant::Csiszar),
            "blp" => Ok(CrdVariant::Blp),
            _ => Err(Error::Unsupported(format!("unknown variant {s}"))),
        }
    }
}

#[inline]
fn pos(v: f64) -> bool {
    v > SUPPORT_TOL
}

/// `log2 Σ_g p^a q^{1-a}` with the zero conventions of the finite-order divergence.
/// Returns `+∞` when a term diverges and `-∞` for an empty sum.
pub(crate) fn log_power_terms(p: &[f64], q: &[f64], a: f64) -> f64 {
    let mut logs = Vec::with_capacity(p.len());
    for (&pi, &qi) in p.iter().zip(q) {
        match (pos(pi), pos(qi)) {
            (true, true) => logs.push(a * pi.log2() + (1.0 - a) * qi.log2()),
            (true, false) if a > 1.0 => return f64::INFINITY,
            (false, true) if a < 0.0 => return f64::INFINITY,
            _ => {}
        }
    }
    log2_sum_exp2(logs)
}

fn kl_bits(p: &[f64], q: &[f64]) -> f64 {
    let mut d = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        if pos(pi) {
            if !pos(qi) {
                return f64::INFINITY;
            }
            d += pi * (pi / qi).log2();
        }
    }
    d.max(0.0)
}

fn max_ratio(p: &[f64], q: &[f64]) -> f64 {
    let mut m: f64 = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        if pos(pi) {
            if !pos(qi) {
                return f64::INFINITY;
            }
            m = m.max(pi / qi);
        }
    }
    m
}

fn min_ratio(p: &[f64], q: &[f64]) -> f64 {
    let mut m = f64::INFINITY;
    for (&pi, &qi) in p.iter().zip(q) {
        if pos(qi) {
            m = m.min(if pos(pi) { pi / qi } else { 0.0 });
        }
    }
    m
}

fn mass_on_support(p: &[f64], q: &[f64]) -> f64 {
    p.iter()
        .zip(q)
        .filter(|(pi, _)| pos(**pi))
        .map(|(_, qi)| *qi)
        .sum()
}

/// Rényi divergence on raw slices; may return `+∞`.
pub(crate) fn renyi_div_raw(p: &[f64], q: &[f64], alpha: Order) -> f64 {
    let a = alpha.value();
    let d = match alpha.classify() {
        OrderClass::One => kl_bits(p, q),
        OrderClass::Zero => -mass_on_support(p, q).log2(),
        OrderClass::PosInf => max_ratio(p, q).log2(),
        OrderClass::NegInf => -min_ratio(p, q).log2(),
        _ => {
            let l = log_power_terms(p, q, a);
            if l == f64::INFINITY {
                f64::INFINITY
            } else {
                alpha.sgn() / (a - 1.0) * l
            }
        }
    };
    if d.is_nan() {
        f64::INFINITY
    } else {
        d.max(0.0)
    }
}

/// Rényi divergence `D_α(p‖q)` in bits. Returns `+∞` when absolute continuity fails.
pub fn renyi_div(p: &Pmf, q: &Pmf, alpha: Order) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::AlphabetMismatch {
            expected: p.len(),
            got: q.len(),
        });
    }
    Ok(renyi_div_raw(p.probs(), q.probs(), alpha))
}

/// Conditional divergence on raw rows; `q_rows[x]` is the reference row for input `x`.
pub(crate) fn cond_div_raw(
    variant: CrdVariant,
    px: &[f64],
    p_rows: &[Vec<f64>],
    q_rows: &[&[f64]],
    alpha: Order,
) -> f64 {
    let xs: Vec<usize> = (0..px.len()).filter(|&x| pos(px[x])).collect();
    let a = alpha.value();
    let cls = alpha.classify();
    if cls == OrderClass::One {
        return xs
            .iter()
            .map(|&x| px[x] * kl_bits(&p_rows[x], q_rows[x]))
            .sum::<f64>();
    }
    let v = match variant {
        CrdVariant::Csiszar => xs
            .iter()
            .map(|&x| px[x] * renyi_div_raw(&p_rows[x], q_rows[x], alpha))
            .sum::<f64>(),
        CrdVariant::Sibson => match cls {
            OrderClass::Zero => -xs
                .iter()
                .map(|&x| px[x] * mass_on_support(&p_rows[x], q_rows[x]))
                .sum::<f64>()
                .log2(),
            OrderClass::PosInf => xs
                .iter()
                .map(|&x| max_ratio(&p_rows[x], q_rows[x]))
                .fold(0.0, f64::max)
                .log2(),
            OrderClass::NegInf => -xs
                .iter()
                .map(|&x| min_ratio(&p_rows[x], q_rows[x]))
                .fold(f64::INFINITY, f64::min)
                .log2(),
            _ => {
                let mut terms = Vec::with_capacity(xs.len());
                for &x in &xs {
                    let l = log_power_terms(&p_rows[x], q_rows[x], a);
                    if l == f64::INFINITY {
                        return f64::INFINITY;
                    }
                    terms.push(px[x].log2() + l);
                }
                alpha.sgn() / (a - 1.0) * log2_sum_exp2(terms)
            }
        },
        CrdVariant::Blp => match cls {
            OrderClass::Zero => -xs
                .iter()
                .map(|&x| mass_on_support(&p_rows[x], q_rows[x]))
                .fold(0.0, f64::max)
                .log2(),
            OrderClass::PosInf => xs
                .iter()
                .map(|&x| px[x] * max_ratio(&p_rows[x], q_rows[x]))
                .sum::<f64>()
                .log2(),
            OrderClass::NegInf => -xs
                .iter()
                .map(|&x| px[x] * min_ratio(&p_rows[x], q_rows[x]))
                .sum::<f64>()
                .log2(),
            _ => {
                let mut terms = Vec::with_capacity(xs.len());
                for &x in &xs {
                    let l = log_power_terms(&p_rows[x], q_rows[x], a);
                    if l == f64::INFINITY {
                        if a > 0.0 {
                            return f64::INFINITY;
                        }
                        // A diverging inner sum raised to 1/α < 0 contributes nothing.
                        continue;
                    }
                    terms.push(px[x].log2() + l / a);
                }
                let s = log2_sum_exp2(terms);
                if s == f64::NEG_INFINITY {
                    f64::INFINITY
                } else {
                    a.abs() / (a - 1.0) * s
                }
            }
        },
    };
    if v.is_nan() {
        f64::INFINITY
    } else {
        v.max(0.0)
    }
}

fn check_cond_shapes(p_gx: &CondPmf, q_gx: &CondPmf, p_x: &Pmf) -> Result<()> {
    if p_gx.n_in() != p_x.len() {
        return Err(Error::AlphabetMismatch {
            expected: p_x.len(),
            got: p_gx.n_in(),
        });
    }
    if q_gx.n_in() != p_x.len() {
        return Err(Error::AlphabetMismatch {
            expected: p_x.len(),
            got: q_gx.n_in(),
        });
    }
    if p_gx.n_out() != q_gx.n_out() {
        return Err(Error::AlphabetMismatch {
            expected: p_gx.n_out(),
            got: q_gx.n_out(),
        });
    }
    Ok(())
}

/// Conditional Rényi divergence `D^V_α(p_{G|X} ‖ q_{G|X} | p_X)` in bits.
pub fn cond_renyi_div(
    variant: CrdVariant,
    p_gx: &CondPmf,
    q_gx: &CondPmf,
    p_x: &Pmf,
    alpha: Order,
) -> Result<f64> {
    check_cond_shapes(p_gx, q_gx, p_x)?;
    let q_rows: Vec<&[f64]> = q_gx.rows().iter().map(|r| r.as_slice()).collect();
    let v = cond_div_raw(variant, p_x.probs(), p_gx.rows(), &q_rows, alpha);
    if v.is_infinite() {
        return Err(Error::DivergentValue(format!(
            "{variant:?} divergence at order {alpha} is infinite: reference misses support"
        )));
    }
    Ok(v)
}

/// How a mutual information value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MiMethod {
    ClosedForm,
    Optimizer,
}

/// A minimising output distribution together with the value it attains.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MiSolution {
    pub value: f64,
    pub q: Vec<f64>,
    pub method: MiMethod,
}

/// The problem `min_q D^V_α(p_{G|X} ‖ q | p_X)` on raw data.
pub(crate) struct MiProblem<'a> {
    pub px: &'a [f64],
    pub rows: &'a [Vec<f64>],
    pub alpha: Order,
}

impl<'a> MiProblem<'a> {
    pub fn from_parts(px: &'a [f64], rows: &'a [Vec<f64>], alpha: Order) -> Self {
        MiProblem { px, rows, alpha }
    }

    fn ng(&self) -> usize {
        self.rows[0].len()
    }

    fn xs(&self) -> Vec<usize> {
        (0..self.px.len()).filter(|&x| pos(self.px[x])).collect()
    }

    /// Outputs on which an optimal `q` may put mass.
    fn allowed(&self) -> Vec<usize> {
        let xs = self.xs();
        let a = self.alpha.value();
        (0..self.ng())
            .filter(|&g| {
                if a < 0.0 {
                    xs.iter().all(|&x| pos(self.rows[x][g]))
                } else {
                    xs.iter().any(|&x| pos(self.rows[x][g]))
                }
            })
            .collect()
    }

    pub fn objective(&self, variant: CrdVariant, q: &[f64]) -> f64 {
        let qs: Vec<&[f64]> = vec![q; self.px.len()];
        cond_div_raw(variant, self.px, self.rows, &qs, self.alpha)
    }

    fn output_marginal(&self) -> Vec<f64> {
        let mut m = vec![0.0; self.ng()];
        for (x, r) in self.rows.iter().enumerate() {
            for (g, v) in r.iter().enumerate() {
                m[g] += self.px[x] * v;
            }
        }
        m
    }

    /// Sibson's minimiser `q*` and the closed-form value.
    pub fn sibson_closed_form(&self) -> Option<(Vec<f64>, f64)> {
        let xs = self.xs();
        let ng = self.ng();
        let a = self.alpha.value();
        let normalize = |w: Vec<f64>| -> Option<Vec<f64>> {
            let s: f64 = w.iter().sum();
            if s > 0.0 && s.is_finite() {
                Some(w.into_iter().map(|v| v / s).collect())
            } else {
                None
            }
        };
        match self.alpha.classify() {
            OrderClass::One => {
                let q = self.output_marginal();
                let v = self.objective(CrdVariant::Sibson, &q);
                Some((q, v))
            }
            OrderClass::PosInf => {
                let w: Vec<f64> = (0..ng)
                    .map(|g| xs.iter().map(|&x| self.rows[x][g]).fold(0.0, f64::max))
                    .collect();
                let s: f64 = w.iter().sum();
                Some((normalize(w)?, s.log2()))
            }
            OrderClass::NegInf => {
                let w: Vec<f64> = (0..ng)
                    .map(|g| {
                        xs.iter()
                            .map(|&x| self.rows[x][g])
                            .fold(f64::INFINITY, f64::min)
                    })
                    .collect();
                let s: f64 = w.iter().sum();
                Some((normalize(w)?, -s.log2()))
            }
            OrderClass::Zero => {
                let mass: Vec<f64> = (0..ng)
                    .map(|g| {
                        xs.iter()
                            .filter(|&&x| pos(self.rows[x][g]))
                            .map(|&x| self.px[x])
                            .sum()
                    })
                    .collect();
                let (gbest, m) = mass
                    .iter()
                    .cloned()
                    .enumerate()
                    .fold((0, f64::NEG_INFINITY), |b, (g, v)| if v > b.1 { (g, v) } else { b });
                let mut q = vec![0.0; ng];
                q[gbest] = 1.0;
                Some((q, -m.log2()))
            }
            _ => {
                // log2 of (Σ_x p(x) p(g|x)^α)^{1/α}
                let logs: Vec<f64> = (0..ng)
                    .map(|g| {
                        let mut terms = Vec::with_capacity(xs.len());
                        for &x in &xs {
                            let w = self.rows[x][g];
                            if pos(w) {
                                terms.push(self.px[x].log2() + a * w.log2());
                            } else if a < 0.0 {
                                return f64::NEG_INFINITY;
                            }
                        }
                        log2_sum_exp2(terms) / a
                    })
                    .collect();
                let z = log2_sum_exp2(logs.iter().cloned());
                if z == f64::NEG_INFINITY {
                    return None;
                }
                let q: Vec<f64> = logs.iter().map(|l| (l - z).exp2()).collect();
                Some((q, a.abs() / (a - 1.0) * z))
            }
        }
    }

    /// Gradient of the finite-order objective with respect to `q`.
    fn gradient(&self, variant: CrdVariant, q: &[f64], grad: &mut [f64]) {
        let a = self.alpha.value();
        let sg = self.alpha.sgn();
        let xs = self.xs();
        grad.iter_mut().for_each(|v| *v = 0.0);
        let qf: Vec<f64> = q.iter().map(|v| v.max(1e-16)).collect();
        if self.alpha.classify() == OrderClass::Zero {
            // Csiszár at order zero: −Σ_x p(x) log Σ_{g∈supp} q(g).
            for &x in &xs {
                let s: f64 = (0..q.len())
                    .filter(|&g| pos(self.rows[x][g]))
                    .map(|g| q[g])
                    .sum::<f64>()
                    .max(1e-300);
                for g in 0..q.len() {
                    if pos(self.rows[x][g]) {
                        grad[g] -= self.px[x] / (s * LN_2);
                    }
                }
            }
            return;
        }
        // Per-row sums S_x = Σ_g p^α q^{1−α}.
        let s: Vec<f64> = xs
            .iter()
            .map(|&x| {
                (0..q.len())
                    .filter(|&g| pos(self.rows[x][g]))
                    .map(|g| self.rows[x][g].powf(a) * qf[g].powf(1.0 - a))
                    .sum::<f64>()
            })
            .collect();
        match variant {
            CrdVariant::Sibson => {
                let t: f64 = xs.iter().zip(&s).map(|(&x, sx)| self.px[x] * sx).sum();
                for g in 0..q.len() {
                    let ag: f64 = xs
                        .iter()
                        .filter(|&&x| pos(self.rows[x][g]))
                        .map(|&x| self.px[x] * self.rows[x][g].powf(a))
                        .sum();
                    grad[g] = -sg * qf[g].powf(-a) * ag / (t * LN_2);
                }
            }
            CrdVariant::Csiszar => {
                for (k, &x) in xs.iter().enumerate() {
                    for g in 0..q.len() {
                        if pos(self.rows[x][g]) {
                            grad[g] -= sg * self.px[x] * self.rows[x][g].powf(a) * qf[g].powf(-a)
                                / (s[k] * LN_2);
                        }
                    }
                }
            }
            CrdVariant::Blp => {
                let t: f64 = xs
                    .iter()
                    .zip(&s)
                    .map(|(&x, sx)| self.px[x] * sx.powf(1.0 / a))
                    .sum();
                for (k, &x) in xs.iter().enumerate() {
                    let w = s[k].powf(1.0 / a - 1.0);
                    if !w.is_finite() {
                        continue;
                    }
                    for g in 0..q.len() {
                        if pos(self.rows[x][g]) {
                            grad[g] -= sg * self.px[x] * w * self.rows[x][g].powf(a)
                                * qf[g].powf(-a)
                                / (t * LN_2);
                        }
                    }
                }
            }
        }
    }

    fn embed(&self, allowed: &[usize], sub: &[f64]) -> Vec<f64> {
        let mut q = vec![0.0; self.ng()];
        for (k, &g) in allowed.iter().enumerate() {
            q[g] = sub[k];
        }
        q
    }

    fn restrict(&self, allowed: &[usize], q: &[f64]) -> Vec<f64> {
        let mut r: Vec<f64> = allowed.iter().map(|&g| q[g]).collect();
        let s: f64 = r.iter().sum();
        if s > 0.0 {
            r.iter_mut().for_each(|v| *v /= s);
        } else {
            r.iter_mut().for_each(|v| *v = 1.0 / allowed.len() as f64);
        }
        r
    }

    /// Smooth multi-start minimisation over the allowed outputs.
    fn minimize_smooth(&self, variant: CrdVariant, seeds: &[Vec<f64>]) -> Option<(Vec<f64>, f64)> {
        let allowed = self.allowed();
        if allowed.is_empty() {
            return None;
        }
        let m = allowed.len();
        let mut starts: Vec<Vec<f64>> = seeds.iter().map(|q| self.restrict(&allowed, q)).collect();
        starts.extend(default_starts(&[m], 20usize.saturating_sub(starts.len()).max(4), 17));
        let opts = SpgOptions::default();
        let best = multi_start_maximize(
            |sub, g| {
                let q = self.embed(&allowed, sub);
                let v = self.objective(variant, &q);
                let mut full = vec![0.0; q.len()];
                self.gradient(variant, &q, &mut full);
                for (k, &gi) in allowed.iter().enumerate() {
                    g[k] = -full[gi];
                }
                -v
            },
            &starts,
            &[m],
            &opts,
        )?;
        let q = self.embed(&allowed, &best.x);
        let v = self.objective(variant, &q);
        Some((q, v))
    }

    /// Pairwise mass-transfer search; works for non-smooth objectives.
    fn pattern_search(&self, variant: CrdVariant, q0: &[f64]) -> (Vec<f64>, f64) {
        let allowed = self.allowed();
        let mut q = q0.to_vec();
        let mut fq = self.objective(variant, &q);
        let mut step: f64 = 0.25;
        while step > 1e-13 {
            let mut improved = true;
            let mut rounds = 0;
            while improved && rounds < 200 {
                improved = false;
                rounds += 1;
                for &i in &allowed {
                    for &j in &allowed {
                        if i == j || q[j] <= 0.0 {
                            continue;
                        }
                        let t = step.min(q[j]);
                        let mut c = q.clone();
                        c[i] += t;
                        c[j] -= t;
                        let fc = self.objective(variant, &c);
                        if fc < fq - 1e-15 {
                            q = c;
                            fq = fc;
                            improved = true;
                        }
                    }
                }
            }
            step *= 0.5;
        }
        (q, fq)
    }

    /// Exact concave duals for the Csiszár and BLP measures at α = +∞.
    fn dual_pos_inf(&self, variant: CrdVariant) -> Option<Vec<f64>> {
        let xs = self.xs();
        let ng = self.ng();
        let supports: Vec<Vec<usize>> = xs
            .iter()
            .map(|&x| (0..ng).filter(|&g| pos(self.rows[x][g])).collect())
            .collect();
        let blocks: Vec<usize> = supports.iter().map(|s| s.len()).collect();
        let weights = |pi: &[f64]| -> Vec<f64> {
            let mut w = vec![0.0; ng];
            let mut off = 0;
            for (k, &x) in xs.iter().enumerate() {
                for (j, &g) in supports[k].iter().enumerate() {
                    let scale = match variant {
                        CrdVariant::Blp => self.rows[x][g],
                        _ => 1.0,
                    };
                    w[g] += self.px[x] * pi[off + j] * scale;
                }
                off += blocks[k];
            }
            w
        };
        let starts = default_starts(&blocks, 12, 5);
        let best = multi_start_maximize(
            |pi, grad| {
                let w = weights(pi);
                let mut off = 0;
                match variant {
                    CrdVariant::Blp => {
                        let s: f64 = w.iter().map(|v| v.sqrt()).sum();
                        for (k, &x) in xs.iter().enumerate() {
                            for (j, &g) in supports[k].iter().enumerate() {
                                grad[off + j] = self.px[x] * self.rows[x][g]
                                    / (w[g].max(1e-300).sqrt() * s * LN_2);
                            }
                            off += blocks[k];
                        }
                        2.0 * s.log2()
                    }
                    _ => {
                        let mut v = 0.0;
                        for (k, &x) in xs.iter().enumerate() {
                            for (j, &g) in supports[k].iter().enumerate() {
                                let lp = self.rows[x][g].log2();
                                v += self.px[x] * pi[off + j] * lp;
                                grad[off + j] = self.px[x]
                                    * (lp - w[g].max(1e-300).log2() - 1.0 / LN_2);
                            }
                            off += blocks[k];
                        }
                        v - w
                            .iter()
                            .filter(|&&u| u > 0.0)
                            .map(|u| u * u.log2())
                            .sum::<f64>()
                    }
                }
            },
            &starts,
            &blocks,
            &SpgOptions::default(),
        )?;
        let w = weights(&best.x);
        let q: Vec<f64> = match variant {
            CrdVariant::Blp => w.iter().map(|v| v.sqrt()).collect(),
            _ => w,
        };
        let s: f64 = q.iter().sum();
        Some(q.into_iter().map(|v| v / s).collect())
    }

    /// Minimises over `q`, trying `seeds` first. Returns the best point and value found.
    pub fn minimize(&self, variant: CrdVariant, seeds: &[Vec<f64>]) -> Option<MiSolution> {
        let cls = self.alpha.classify();
        let mut cands: Vec<Vec<f64>> = seeds.to_vec();
        cands.push(self.output_marginal());
        if let Some((q, _)) = self.sibson_closed_form() {
            cands.push(q);
        }
        let mut best: Option<(Vec<f64>, f64)> = None;
        let consider = |q: Vec<f64>, v: f64, best: &mut Option<(Vec<f64>, f64)>| {
            if v.is_finite() && best.as_ref().is_none_or(|b| v < b.1) {
                *best = Some((q, v));
            }
        };
        for c in &cands {
            consider(c.clone(), self.objective(variant, c), &mut best);
        }
        match cls {
            OrderClass::PosInf | OrderClass::NegInf => {
                if cls == OrderClass::PosInf && variant != CrdVariant::Sibson {
                    if let Some(q) = self.dual_pos_inf(variant) {
                        let v = self.objective(variant, &q);
                        consider(q, v, &mut best);
                    }
                }
                let polish: Vec<Vec<f64>> = best.iter().map(|b| b.0.clone()).collect();
                for q in polish {
                    let (q2, v2) = self.pattern_search(variant, &q);
                    consider(q2, v2, &mut best);
                }
            }
            _ => {
                let all_seeds: Vec<Vec<f64>> = cands;
                if let Some((q, v)) = self.minimize_smooth(variant, &all_seeds) {
                    consider(q, v, &mut best);
                }
            }
        }
        best.map(|(q, value)| MiSolution {
            value,
            q,
            method: MiMethod::Optimizer,
        })
    }
}

fn sibson_solution(prob: &MiProblem) -> Option<MiSolution> {
    let (q, v) = prob.sibson_closed_form()?;
    let direct = prob.objective(CrdVariant::Sibson, &q);
    let scale = 1.0 + v.abs();
    let mut ok = v.is_finite() && (direct - v).abs() <= 1e-9 * scale;
    if ok && prob.alpha.is_finite() && prob.alpha.value() != 0.0 {
        // Identity check against a fixed reference supported where q* may be.
        let allowed = prob.allowed();
        let mut r = vec![0.0; q.len()];
        for &g in &allowed {
            r[g] = 1.0 / allowed.len() as f64;
        }
        let lhs = prob.objective(CrdVariant::Sibson, &r);
        let rhs = direct + renyi_div_raw(&q, &r, prob.alpha);
        if lhs.is_finite() && rhs.is_finite() {
            ok = (lhs - rhs).abs() <= 1e-9 * (1.0 + lhs.abs());
        }
    }
    if ok {
        return Some(MiSolution {
            value: v,
            q,
            method: MiMethod::ClosedForm,
        });
    }
    prob.minimize(CrdVariant::Sibson, &[q])
}

/// Solves `min_q D^V_α(p_{G|X} ‖ q_G | p_X)`, with the minimiser.
pub fn variant_mi_solution(variant: CrdVariant, j: &JointPmf, alpha: Order) -> Result<MiSolution> {
    let (px, pgx) = j.factorize();
    let prob = MiProblem::from_parts(px.probs(), pgx.rows(), alpha);
    let infinite = || {
        Error::DivergentValue(format!(
            "{variant:?} mutual information at order {alpha} is infinite"
        ))
    };
    let cls = alpha.classify();
    if cls == OrderClass::One {
        let q = j.marginal_g().into_vec();
        let v = prob.objective(variant, &q);
        return Ok(MiSolution {
            value: v,
            q,
            method: MiMethod::ClosedForm,
        });
    }
    let sib = sibson_solution(&prob).ok_or_else(infinite)?;
    let sol = match variant {
        CrdVariant::Sibson => sib,
        CrdVariant::Blp if cls == OrderClass::Zero => {
            let x0 = px.support()[0];
            MiSolution {
                value: 0.0,
                q: pgx.row(x0).to_vec(),
                method: MiMethod::ClosedForm,
            }
        }
        CrdVariant::Csiszar => {
            let mut seeds = vec![sib.q.clone()];
            if alpha.value() >= 1.0 {
                if let Some(b) = prob.minimize(CrdVariant::Blp, &[sib.q.clone()]) {
                    seeds.push(b.q);
                }
            }
            prob.minimize(CrdVariant::Csiszar, &seeds).ok_or_else(infinite)?
        }
        CrdVariant::Blp => {
            let mut seeds = vec![sib.q.clone()];
            if alpha.value() < 0.0 {
                if let Some(c) = prob.minimize(CrdVariant::Csiszar, &[sib.q.clone()]) {
                    seeds.push(c.q);
                }
            }
            prob.minimize(CrdVariant::Blp, &seeds).ok_or_else(infinite)?
        }
    };
    if !sol.value.is_finite() {
        return Err(infinite());
    }
    Ok(sol)
}

/// Mutual information `I^V_α(X;G) = min_{q_G} D^V_α(p_{G|X} ‖ q_G | p_X)`.
pub fn variant_mi(variant: CrdVariant, j: &JointPmf, alpha: Order) -> Result<f64> {
    Ok(variant_mi_solution(variant, j, alpha)?.value)
}

/// Sibson's minimiser `q*_G` for the joint, when it exists.
pub fn sibson_q_star(j: &JointPmf, alpha: Order) -> Option<Pmf> {
    let (px, pgx) = j.factorize();
    let prob = MiProblem::from_parts(px.probs(), pgx.rows(), alpha);
    prob.sibson_closed_form()
        .and_then(|(q, _)| Pmf::from_weights(q).ok())
}

/// Sibson mutual information evaluated at a prior, on raw data (may be `+∞`).
pub(crate) fn sibson_mi_raw(px: &[f64], rows: &[Vec<f64>], alpha: Order) -> f64 {
    MiProblem::from_parts(px, rows, alpha)
        .sibson_closed_form()
        .map(|(_, v)| v)
        .unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::shannon_mi;
    use crate::simplex::simplex_grid;

    fn o(a: f64) -> Order {
        Order::new(a).unwrap()
    }

    fn pmf(v: &[f64]) -> Pmf {
        Pmf::new(v.to_vec()).unwrap()
    }

    #[test]
    fn divergence_examples() {
        let p = pmf(&[0.5, 0.5]);
        let q = pmf(&[0.25, 0.75]);
        assert!((renyi_div(&p, &q, Order::INF).unwrap() - 1.0).abs() < 1e-12);
        let neg = renyi_div(&p, &q, Order::NEG_INF).unwrap();
        assert!((neg + (2.0f64 / 3.0).log2()).abs() < 1e-12);
        assert!((neg - 0.58496).abs() < 1e-5);
        for a in [f64::NEG_INFINITY, -2.0, 0.0, 0.3, 1.0, 2.0, f64::INFINITY] {
            assert!(renyi_div(&p, &p, o(a)).unwrap().abs() < 1e-12);
        }
        assert!(renyi_div(&p, &pmf(&[0.2, 0.3, 0.5]), o(2.0)).is_err());
    }

    #[test]
    fn absolute_continuity() {
        let p = pmf(&[0.5, 0.5]);
        let q = pmf(&[1.0, 0.0]);
        assert_eq!(renyi_div(&p, &q, o(2.0)).unwrap(), f64::INFINITY);
        assert!(renyi_div(&p, &q, o(0.5)).unwrap().is_finite());
        assert_eq!(renyi_div(&q, &p, o(-1.0)).unwrap(), f64::INFINITY);
    }

    #[test]
    fn hand_evaluated_order_two() {
        let p = pmf(&[0.2, 0.8]);
        let q = pmf(&[0.5, 0.5]);
        let direct: f64 = (0.04f64 / 0.5 + 0.64 / 0.5).log2();
        assert!((renyi_div(&p, &q, o(2.0)).unwrap() - direct).abs() < 1e-12);
    }

    #[test]
    fn conditional_identities() {
        let pgx = CondPmf::new(vec![vec![0.7, 0.3], vec![0.2, 0.8], vec![0.5, 0.5]]).unwrap();
        let qgx = CondPmf::new(vec![vec![0.4, 0.6], vec![0.4, 0.6], vec![0.4, 0.6]]).unwrap();
        let px = pmf(&[0.2, 0.5, 0.3]);
        for a in [-3.0, -0.5, 0.0, 0.4, 1.0, 2.0, f64::INFINITY, f64::NEG_INFINITY] {
            for v in CrdVariant::ALL {
                assert!(cond_renyi_div(v, &pgx, &pgx, &px, o(a)).unwrap().abs() < 1e-12);
            }
            let joint_p = JointPmf::from_prior_channel(&px, &pgx).unwrap();
            let joint_q = JointPmf::from_prior_channel(&px, &qgx).unwrap();
            let flat = |j: &JointPmf| Pmf::new(j.rows().concat()).unwrap();
            let sib = cond_renyi_div(CrdVariant::Sibson, &pgx, &qgx, &px, o(a)).unwrap();
            let joint_div = renyi_div(&flat(&joint_p), &flat(&joint_q), o(a)).unwrap();
            assert!((sib - joint_div).abs() < 1e-12, "alpha {a}");
            let csi = cond_renyi_div(CrdVariant::Csiszar, &pgx, &qgx, &px, o(a)).unwrap();
            let avg: f64 = (0..3)
                .map(|x| {
                    px.probs()[x]
                        * renyi_div(&pmf(pgx.row(x)), &pmf(qgx.row(x)), o(a)).unwrap()
                })
                .sum();
            assert!((csi - avg).abs() < 1e-12);
        }
    }

    #[test]
    fn mutual_information_examples() {
        let indep = JointPmf::independent(&pmf(&[0.3, 0.7]), &pmf(&[0.6, 0.4])).unwrap();
        let bsc = JointPmf::new(vec![vec![0.45, 0.05], vec![0.05, 0.45]]).unwrap();
        for v in CrdVariant::ALL {
            for a in [f64::NEG_INFINITY, -2.0, 0.0, 0.5, 1.0, 2.0, f64::INFINITY] {
                assert!(variant_mi(v, &indep, o(a)).unwrap().abs() < 1e-9, "{v:?} {a}");
            }
            let mi = variant_mi(v, &bsc, Order::ONE).unwrap();
            assert!((mi - shannon_mi(&bsc)).abs() < 1e-12);
        }
    }

    #[test]
    fn sibson_closed_form_against_grid() {
        let j = JointPmf::new(vec![vec![0.4, 0.1], vec![0.1, 0.4]]).unwrap();
        let (px, pgx) = j.factorize();
        let closed = variant_mi_solution(CrdVariant::Sibson, &j, o(2.0)).unwrap();
        assert_eq!(closed.method, MiMethod::ClosedForm);
        let grid_min = simplex_grid(2, 1e-3)
            .into_iter()
            .filter(|q| q.iter().all(|&v| v > 0.0))
            .map(|q| {
                let qc = CondPmf::constant(2, &Pmf::new(q).unwrap()).unwrap();
                cond_renyi_div(CrdVariant::Sibson, &pgx, &qc, &px, o(2.0)).unwrap()
            })
            .fold(f64::INFINITY, f64::min);
        assert!(closed.value <= grid_min + 1e-12);
        assert!(grid_min - closed.value < 1e-5);
    }

    #[test]
    fn q_star_identity_negative_order() {
        let j = JointPmf::new(vec![vec![0.3, 0.1, 0.1], vec![0.05, 0.25, 0.2]]).unwrap();
        let (px, pgx) = j.factorize();
        let a = o(-1.5);
        let qs = sibson_q_star(&j, a).unwrap();
        let q = pmf(&[0.2, 0.5, 0.3]);
        let lhs = cond_renyi_div(
            CrdVariant::Sibson,
            &pgx,
            &CondPmf::constant(2, &q).unwrap(),
            &px,
            a,
        )
        .unwrap();
        let at_star = cond_renyi_div(
            CrdVariant::Sibson,
            &pgx,
            &CondPmf::constant(2, &qs).unwrap(),
            &px,
            a,
        )
        .unwrap();
        let rhs = at_star + renyi_div(&qs, &q, a).unwrap();
        assert!((lhs - rhs).abs() < 1e-9);
    }
}
