//! Spectral projected gradient over products of probability simplices.
//!
//! The feasible set is a product of simplices described by block lengths; a point is the
//! concatenation of the blocks. Objectives return `f64::INFINITY` (or NaN) outside their
//! domain, which the line search treats as a rejected step.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};

/// Termination settings for [`spg_minimize`].
#[derive(Debug, Clone, Copy)]
pub struct SpgOptions {
    pub max_iter: usize,
    /// Sup-norm of the projected gradient step at which a run counts as converged.
    pub tol: f64,
    /// Window of the non-monotone line search.
    pub memory: usize,
}

impl Default for SpgOptions {
    fn default() -> Self {
        SpgOptions {
            max_iter: 10_000,
            tol: 1e-9,
            memory: 10,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SpgResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Euclidean projection of `v` onto the probability simplex, in place.
pub fn project_simplex(v: &mut [f64]) {
    let n = v.len();
    if n == 0 {
        return;
    }
    let mut u: Vec<f64> = v.to_vec();
    u.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (j, &uj) in u.iter().enumerate() {
        cum += uj;
        let t = (cum - 1.0) / (j + 1) as f64;
        if uj - t > 0.0 {
            theta = t;
        }
    }
    for x in v.iter_mut() {
        *x = (*x - theta).max(0.0);
    }
}

/// Projects each block of `v` onto its simplex.
pub fn project_blocks(v: &mut [f64], blocks: &[usize]) {
    let mut off = 0;
    for &b in blocks {
        project_simplex(&mut v[off..off + b]);
        off += b;
    }
}

fn sanitize_gradient(g: &mut [f64]) {
    for v in g.iter_mut() {
        if v.is_nan() {
            *v = 0.0;
        }
        *v = v.clamp(-1e12, 1e12);
    }
}

fn residual(x: &[f64], g: &[f64], blocks: &[usize]) -> f64 {
    let mut y: Vec<f64> = x.iter().zip(g).map(|(a, b)| a - b).collect();
    project_blocks(&mut y, blocks);
    y.iter()
        .zip(x)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

/// Minimises `f` from `x0` (projected onto the feasible set first).
///
/// `f(x, grad)` returns the value and writes the gradient.
pub fn spg_minimize<F>(mut f: F, x0: &[f64], blocks: &[usize], opts: &SpgOptions) -> SpgResult
where
    F: FnMut(&[f64], &mut [f64]) -> f64,
{
    let n = x0.len();
    debug_assert_eq!(blocks.iter().sum::<usize>(), n);
    let mut x = x0.to_vec();
    project_blocks(&mut x, blocks);
    let mut g = vec![0.0; n];
    let mut fx = f(&x, &mut g);
    if !fx.is_finite() {
        return SpgResult {
            x,
            value: f64::INFINITY,
            iterations: 0,
            converged: false,
        };
    }
    sanitize_gradient(&mut g);
    let mut history = vec![fx];
    let r0 = residual(&x, &g, blocks);
    let mut lambda = if r0 > 0.0 { (1.0 / r0).clamp(1e-10, 1e10) } else { 1.0 };
    let mut xn = vec![0.0; n];
    let mut gn = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut converged = false;
    let mut iterations = 0;
    let mut flat = 0;

    for it in 0..opts.max_iter {
        iterations = it;
        if residual(&x, &g, blocks) <= opts.tol {
            converged = true;
            break;
        }
        for i in 0..n {
            d[i] = x[i] - lambda * g[i];
        }
        project_blocks(&mut d, blocks);
        for i in 0..n {
            d[i] -= x[i];
        }
        let gtd: f64 = g.iter().zip(&d).map(|(a, b)| a * b).sum();
        if gtd >= 0.0 {
            converged = true;
            break;
        }
        let fmax = history.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut t = 1.0;
        let mut accepted = false;
        while t > 1e-18 {
            for i in 0..n {
                xn[i] = x[i] + t * d[i];
            }
            project_blocks(&mut xn, blocks);
            let fv = f(&xn, &mut gn);
            if fv.is_finite() && fv <= fmax + 1e-4 * t * gtd {
                accepted = true;
                let prev = fx;
                sanitize_gradient(&mut gn);
                let mut sty = 0.0;
                let mut sts = 0.0;
                for i in 0..n {
                    let s = xn[i] - x[i];
                    let y = gn[i] - g[i];
                    sty += s * y;
                    sts += s * s;
                }
                lambda = if sty <= 0.0 { 1e10 } else { (sts / sty).clamp(1e-10, 1e10) };
                std::mem::swap(&mut x, &mut xn);
                std::mem::swap(&mut g, &mut gn);
                fx = fv;
                history.push(fx);
                if history.len() > opts.memory.max(1) {
                    history.remove(0);
                }
                if (prev - fx).abs() <= 1e-15 * (1.0 + fx.abs()) {
                    flat += 1;
                } else {
                    flat = 0;
                }
                break;
            }
            t *= 0.5;
        }
        if !accepted || flat >= 30 {
            converged = residual(&x, &g, blocks) <= opts.tol.sqrt();
            break;
        }
    }
    SpgResult {
        x,
        value: fx,
        iterations,
        converged,
    }
}

/// Maximises `f` (same calling convention as [`spg_minimize`]).
pub fn spg_maximize<F>(mut f: F, x0: &[f64], blocks: &[usize], opts: &SpgOptions) -> SpgResult
where
    F: FnMut(&[f64], &mut [f64]) -> f64,
{
    let mut r = spg_minimize(
        |x, g| {
            let v = f(x, g);
            for gi in g.iter_mut() {
                *gi = -*gi;
            }
            if v.is_nan() {
                f64::INFINITY
            } else {
                -v
            }
        },
        x0,
        blocks,
        opts,
    );
    r.value = -r.value;
    r
}

/// Deterministic start points: the barycentre, vertex combinations, then Dirichlet(1) draws.
pub fn default_starts(blocks: &[usize], count: usize, seed: u64) -> Vec<Vec<f64>> {
    let n: usize = blocks.iter().sum();
    let mut out = Vec::with_capacity(count);
    let mut bary = Vec::with_capacity(n);
    for &b in blocks {
        bary.extend(std::iter::repeat_n(1.0 / b as f64, b));
    }
    out.push(bary);
    let max_b = blocks.iter().cloned().max().unwrap_or(1);
    for k in 0..max_b {
        if out.len() >= count {
            break;
        }
        let mut v = Vec::with_capacity(n);
        for &b in blocks {
            let mut blk = vec![0.0; b];
            blk[k % b] = 1.0;
            v.extend(blk);
        }
        out.push(v);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while out.len() < count {
        let mut v = Vec::with_capacity(n);
        for &b in blocks {
            let w: Vec<f64> = (0..b).map(|_| Exp1.sample(&mut rng)).collect();
            let s: f64 = w.iter().sum();
            v.extend(w.into_iter().map(|x: f64| x / s));
        }
        out.push(v);
    }
    out
}

/// Runs [`spg_minimize`] from every start and keeps the best finite result.
pub fn multi_start_minimize<F>(
    mut f: F,
    starts: &[Vec<f64>],
    blocks: &[usize],
    opts: &SpgOptions,
) -> Option<SpgResult>
where
    F: FnMut(&[f64], &mut [f64]) -> f64,
{
    let mut best: Option<SpgResult> = None;
    for s in starts {
        let r = spg_minimize(&mut f, s, blocks, opts);
        if !r.value.is_finite() {
            continue;
        }
        if best.as_ref().is_none_or(|b| r.value < b.value) {
            best = Some(r);
        }
    }
    best
}

/// Runs [`spg_maximize`] from every start and keeps the best finite result.
pub fn multi_start_maximize<F>(
    mut f: F,
    starts: &[Vec<f64>],
    blocks: &[usize],
    opts: &SpgOptions,
) -> Option<SpgResult>
where
    F: FnMut(&[f64], &mut [f64]) -> f64,
{
    let mut best: Option<SpgResult> = None;
    for s in starts {
        let r = spg_maximize(&mut f, s, blocks, opts);
        if !r.value.is_finite() {
            continue;
        }
        if best.as_ref().is_none_or(|b| r.value > b.value) {
            best = Some(r);
        }
    }
    best
}

/// Uniform grid over the simplex with the given step (for alphabets of size ≤ 3).
pub fn simplex_grid(n: usize, step: f64) -> Vec<Vec<f64>> {
    let k = (1.0 / step).round() as usize;
    let mut out = Vec::new();
    match n {
        1 => out.push(vec![1.0]),
        2 => {
            for i in 0..=k {
                let a = i as f64 / k as f64;
                out.push(vec![a, 1.0 - a]);
            }
        }
        3 => {
            for i in 0..=k {
                for j in 0..=(k - i) {
                    let a = i as f64 / k as f64;
                    let b = j as f64 / k as f64;
                    out.push(vec![a, b, (1.0 - a - b).max(0.0)]);
                }
            }
        }
        _ => panic!("grid only supports alphabets of size at most 3"),
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projection_lands_on_simplex() {
        let mut v = vec![0.8, 0.9, -0.3, 0.1];
        project_simplex(&mut v);
        assert!((v.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(v.iter().all(|&x| x >= 0.0));
        let mut w = vec![0.2, 0.3, 0.5];
        project_simplex(&mut w);
        assert!((w[0] - 0.2).abs() < 1e-15 && (w[2] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn quadratic_minimum_inside_and_on_face() {
        let target = [0.1, 0.6, 0.3];
        let opts = SpgOptions::default();
        let r = spg_minimize(
            |x, g| {
                let mut v = 0.0;
                for i in 0..3 {
                    g[i] = 2.0 * (x[i] - target[i]);
                    v += (x[i] - target[i]).powi(2);
                }
                v
            },
            &[1.0, 0.0, 0.0],
            &[3],
            &opts,
        );
        assert!(r.converged);
        for i in 0..3 {
            assert!((r.x[i] - target[i]).abs() < 1e-8);
        }
        // Minimum of a linear function sits at a vertex.
        let c = [0.4, -0.2, 0.1];
        let r = spg_minimize(
            |x, g| {
                g.copy_from_slice(&c);
                x.iter().zip(&c).map(|(a, b)| a * b).sum()
            },
            &[1.0 / 3.0; 3],
            &[3],
            &opts,
        );
        assert!((r.value + 0.2).abs() < 1e-12);
    }

    #[test]
    fn product_blocks_and_starts() {
        let starts = default_starts(&[2, 3], 20, 3);
        assert_eq!(starts.len(), 20);
        for s in &starts {
            assert!((s[..2].iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!((s[2..].iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        assert_eq!(default_starts(&[2, 3], 20, 3), starts);
        assert_eq!(simplex_grid(3, 0.5).len(), 6);
    }
}
