//! Maximisation of functions of the Born conditional `p(g|x) = tr[M_g ρ_x]` over POVMs.
//!
//! A `k`-outcome POVM on dimension `d` is written `M_g = W_g† W_g` with `W` a `(k·d)×d`
//! isometry whose `d×d` blocks are the `W_g`. Ascent runs on the Stiefel manifold with the
//! Riemannian gradient `ξ = E − W sym(W†E)`, Barzilai–Borwein steps, a non-monotone Armijo
//! test and the polar retraction.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{c, hermitian_part, polar_isometry, sqrt_psd, trace_product_re, CMat};
use crate::quantum::Povm;
use crate::random::{ginibre, rng_from_seed};

#[derive(Debug, Clone, Copy)]
pub struct AscentOptions {
    pub starts: usize,
    pub max_iter: usize,
    /// Frobenius norm of the Riemannian gradient at which a run stops.
    pub tol: f64,
    pub seed: u64,
}

impl Default for AscentOptions {
    fn default() -> Self {
        AscentOptions {
            starts: 30,
            max_iter: 3000,
            tol: 1e-9,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AscentResult {
    pub value: f64,
    pub povm: Povm,
    pub iterations: usize,
    pub converged: bool,
}

fn born_matrix(w: &CMat, states: &[CMat], k: usize, d: usize) -> Vec<Vec<f64>> {
    let blocks: Vec<CMat> = (0..k).map(|g| w.rows(g * d, d).into_owned()).collect();
    states
        .iter()
        .map(|rho| {
            blocks
                .iter()
                .map(|wg| {
                    let m = wg.adjoint() * wg;
                    trace_product_re(&m, rho).max(0.0)
                })
                .collect()
        })
        .collect()
}

/// Isometry whose blocks square to the elements of `m`.
pub fn povm_to_isometry(m: &Povm) -> CMat {
    let d = m.dim();
    let k = m.n_outcomes();
    let mut w = CMat::zeros(k * d, d);
    for (g, e) in m.elements().iter().enumerate() {
        let r = sqrt_psd(e);
        w.rows_mut(g * d, d).copy_from(&r);
    }
    w
}

pub fn isometry_to_povm(w: &CMat, k: usize, d: usize) -> Result<Povm> {
    Povm::new(
        (0..k)
            .map(|g| {
                let wg = w.rows(g * d, d);
                hermitian_part(&(wg.adjoint() * wg))
            })
            .collect(),
    )
}

fn random_isometry<R: Rng + ?Sized>(rng: &mut R, k: usize, d: usize) -> CMat {
    polar_isometry(&ginibre(rng, k * d, d))
}

fn frob_inner(a: &CMat, b: &CMat) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum()
}

struct Eval {
    value: f64,
    grad: CMat,
}

fn evaluate<F>(f: &mut F, w: &CMat, states: &[CMat], k: usize, d: usize) -> Option<Eval>
where
    F: FnMut(&[Vec<f64>], &mut [Vec<f64>]) -> f64,
{
    let p = born_matrix(w, states, k, d);
    let mut dp = vec![vec![0.0; k]; states.len()];
    let value = f(&p, &mut dp);
    if !value.is_finite() {
        return None;
    }
    let mut e = CMat::zeros(k * d, d);
    for g in 0..k {
        let mut gg = CMat::zeros(d, d);
        for (x, rho) in states.iter().enumerate() {
            let v = dp[x][g];
            if v != 0.0 && v.is_finite() {
                gg += rho * c(v, 0.0);
            }
        }
        let wg = w.rows(g * d, d);
        let eg = (wg * gg) * c(2.0, 0.0);
        e.rows_mut(g * d, d).copy_from(&eg);
    }
    let s = w.adjoint() * &e;
    let grad = &e - w * hermitian_part(&s);
    Some(Eval { value, grad })
}

fn ascend<F>(
    f: &mut F,
    w0: CMat,
    states: &[CMat],
    k: usize,
    d: usize,
    opts: &AscentOptions,
) -> Option<(f64, CMat, usize, bool)>
where
    F: FnMut(&[Vec<f64>], &mut [Vec<f64>]) -> f64,
{
    let mut w = w0;
    let mut cur = evaluate(f, &w, states, k, d)?;
    let mut step = 0.1;
    let mut history = vec![cur.value];
    let mut flat = 0;
    for it in 0..opts.max_iter {
        let gnorm2 = frob_inner(&cur.grad, &cur.grad);
        if gnorm2.sqrt() <= opts.tol {
            return Some((cur.value, w, it, true));
        }
        let reference = history.iter().cloned().fold(f64::INFINITY, f64::min);
        let mut t = step;
        let mut accepted = None;
        while t > 1e-16 {
            let wn = polar_isometry(&(&w + &cur.grad * c(t, 0.0)));
            if let Some(ev) = evaluate(f, &wn, states, k, d) {
                if ev.value >= reference + 1e-4 * t * gnorm2 {
                    accepted = Some((wn, ev));
                    break;
                }
            }
            t *= 0.5;
        }
        let Some((wn, ev)) = accepted else {
            return Some((cur.value, w, it, gnorm2.sqrt() <= opts.tol.sqrt()));
        };
        let s = &wn - &w;
        let y = &ev.grad - &cur.grad;
        let sy = -frob_inner(&s, &y);
        let ss = frob_inner(&s, &s);
        step = if sy > 0.0 { (ss / sy).clamp(1e-8, 1e3) } else { (2.0 * t).min(1e3) };
        if (ev.value - cur.value).abs() <= 1e-15 * (1.0 + cur.value.abs()) {
            flat += 1;
        } else {
            flat = 0;
        }
        w = wn;
        cur = ev;
        history.push(cur.value);
        if history.len() > 8 {
            history.remove(0);
        }
        if flat >= 25 {
            let g = frob_inner(&cur.grad, &cur.grad).sqrt();
            return Some((cur.value, w, it, g <= opts.tol.sqrt()));
        }
    }
    let g = frob_inner(&cur.grad, &cur.grad).sqrt();
    Some((cur.value, w, opts.max_iter, g <= opts.tol.sqrt()))
}

/// Maximises `f(p, ∂f/∂p)` over `k`-outcome POVMs on the states `ρ_x`.
///
/// `f` receives `p[x][g]`, writes the partial derivatives and returns the value; a non-finite
/// value marks a point outside the domain. `warm` POVMs are used as extra starting points.
pub fn maximize_over_povms<F>(
    states: &[CMat],
    k: usize,
    mut f: F,
    warm: &[Povm],
    opts: &AscentOptions,
) -> Result<AscentResult>
where
    F: FnMut(&[Vec<f64>], &mut [Vec<f64>]) -> f64,
{
    if states.is_empty() || k == 0 {
        return Err(Error::ShapeMismatch("no states or outcomes".into()));
    }
    let d = states[0].nrows();
    let mut rng = rng_from_seed(opts.seed);
    let mut starts: Vec<CMat> = warm
        .iter()
        .filter(|m| m.n_outcomes() == k && m.dim() == d)
        .map(povm_to_isometry)
        .collect();
    while starts.len() < opts.starts + warm.len() {
        starts.push(random_isometry(&mut rng, k, d));
    }
    let mut best: Option<(f64, CMat, usize, bool)> = None;
    let mut any_converged = false;
    for w0 in starts {
        if let Some(r) = ascend(&mut f, w0, states, k, d, opts) {
            any_converged |= r.3;
            if best.as_ref().is_none_or(|b| r.0 > b.0) {
                best = Some(r);
            }
        }
    }
    let Some((value, w, iterations, converged)) = best else {
        return Err(Error::OptimizerDidNotConverge {
            iterations: opts.max_iter,
            best_value: f64::NAN,
            best_point: vec![],
        });
    };
    if !any_converged {
        return Err(Error::OptimizerDidNotConverge {
            iterations,
            best_value: value,
            best_point: w.iter().flat_map(|z| [z.re, z.im]).collect(),
        });
    }
    Ok(AscentResult {
        value,
        povm: isometry_to_povm(&w, k, d)?,
        iterations,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{lambda_max, max_abs_diff};
    use crate::quantum::DensityMatrix;
    use crate::random::random_povm;

    #[test]
    fn isometry_round_trip() {
        let mut rng = rng_from_seed(3);
        let m = random_povm(&mut rng, 3, 4);
        let w = povm_to_isometry(&m);
        let back = isometry_to_povm(&w, 4, 3).unwrap();
        for (a, b) in back.elements().iter().zip(m.elements()) {
            assert!(max_abs_diff(a, b) < 1e-12);
        }
    }

    #[test]
    fn helstrom_bound_for_two_states() {
        let r0 = DensityMatrix::from_bloch([0.0, 0.0, 1.0]).unwrap();
        let r1 = DensityMatrix::from_bloch([0.8, 0.0, 0.6]).unwrap();
        let (p0, p1) = (0.4, 0.6);
        let states = vec![r0.matrix().clone(), r1.matrix().clone()];
        let res = maximize_over_povms(
            &states,
            2,
            |p, g| {
                g[0][0] = p0;
                g[1][1] = p1;
                p0 * p[0][0] + p1 * p[1][1]
            },
            &[],
            &AscentOptions {
                starts: 5,
                ..Default::default()
            },
        )
        .unwrap();
        let diff = r0.matrix() * c(p0, 0.0) - r1.matrix() * c(p1, 0.0);
        let trace_norm: f64 = crate::linalg::eigenvalues(&diff).iter().map(|l| l.abs()).sum();
        let helstrom = 0.5 * (1.0 + trace_norm);
        assert!((res.value - helstrom).abs() < 1e-9, "{} vs {helstrom}", res.value);
        assert!(lambda_max(&res.povm.elements()[0]) <= 1.0 + 1e-10);
    }
}
