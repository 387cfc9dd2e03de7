//! Rényi channel capacity, computed by maximising both Arimoto's and Sibson's mutual
//! informations over the input simplex and requiring the two maxima to agree.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::divergence::sibson_mi_raw;
use crate::error::{Error, Result};
use crate::num::{log2_sum_exp2, shannon_bits};
use crate::order::{Order, OrderClass};
use crate::prob::{CondPmf, Pmf, SUPPORT_TOL};
use crate::simplex::{default_starts, multi_start_maximize, SpgOptions};

/// Agreement required between the two maximisations.
pub const CAPACITY_AGREEMENT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CapacityReport {
    pub value: f64,
    pub argmax: Vec<f64>,
    pub arimoto_max: f64,
    pub sibson_max: f64,
    pub sibson_argmax: Vec<f64>,
}

/// Arimoto's mutual information of the joint `p(x) W(g|x)`; `NaN` outside the domain.
pub(crate) fn arimoto_raw(px: &[f64], w: &[Vec<f64>], alpha: Order) -> f64 {
    let a = alpha.value();
    let ng = w[0].len();
    let floor = if a < 0.0 { 0.0 } else { SUPPORT_TOL };
    let xs: Vec<usize> = (0..px.len()).filter(|&x| px[x] > floor).collect();
    match alpha.classify() {
        OrderClass::One => {
            let mut q = vec![0.0; ng];
            for &x in &xs {
                for g in 0..ng {
                    q[g] += px[x] * w[x][g];
                }
            }
            let hy = shannon_bits(&q);
            let hyx: f64 = xs.iter().map(|&x| px[x] * shannon_bits(&w[x])).sum();
            hy - hyx
        }
        OrderClass::Negative | OrderClass::ZeroOne | OrderClass::GtOne => {
            if a < 0.0 && (xs.len() != px.len() || xs.iter().any(|&x| w[x].iter().any(|&v| v <= SUPPORT_TOL))) {
                return f64::NAN;
            }
            let hx = log2_sum_exp2(xs.iter().map(|&x| a * px[x].log2())) / (1.0 - a);
            let cols = (0..ng).filter_map(|g| {
                let terms: Vec<f64> = xs
                    .iter()
                    .filter(|&&x| w[x][g] > SUPPORT_TOL)
                    .map(|&x| a * (px[x] * w[x][g]).log2())
                    .collect();
                if terms.is_empty() {
                    None
                } else {
                    Some(log2_sum_exp2(terms) / a)
                }
            });
            let hxg = a / (1.0 - a) * log2_sum_exp2(cols);
            alpha.sgn() * (hx - hxg)
        }
        _ => f64::NAN,
    }
}

fn arimoto_grad(px: &[f64], w: &[Vec<f64>], alpha: Order, grad: &mut [f64]) {
    let a = alpha.value();
    let n = px.len();
    let ng = w[0].len();
    let pf: Vec<f64> = px.iter().map(|v| v.max(1e-15)).collect();
    if alpha.classify() == OrderClass::One {
        let mut q = vec![0.0; ng];
        for x in 0..n {
            for g in 0..ng {
                q[g] += px[x] * w[x][g];
            }
        }
        for x in 0..n {
            let mut d = 0.0;
            for g in 0..ng {
                if w[x][g] > 0.0 {
                    d += w[x][g] * (w[x][g] / q[g].max(1e-300)).log2();
                }
            }
            grad[x] = d - 1.0 / LN_2;
        }
        return;
    }
    let sp: f64 = pf.iter().map(|p| p.powf(a)).sum();
    let s: Vec<f64> = (0..ng)
        .map(|g| (0..n).map(|x| (pf[x] * w[x][g]).powf(a)).sum::<f64>())
        .collect();
    let t: f64 = s.iter().filter(|&&v| v > 0.0).map(|v| v.powf(1.0 / a)).sum();
    for x in 0..n {
        let dhx = a / (1.0 - a) * pf[x].powf(a - 1.0) / (sp * LN_2);
        let mut dt = 0.0;
        for g in 0..ng {
            if w[x][g] > 0.0 && s[g] > 0.0 {
                dt += s[g].powf(1.0 / a - 1.0) * pf[x].powf(a - 1.0) * w[x][g].powf(a);
            }
        }
        let dhxg = a / (1.0 - a) * dt / (t * LN_2);
        grad[x] = alpha.sgn() * (dhx - dhxg);
    }
}

fn sibson_grad(px: &[f64], w: &[Vec<f64>], alpha: Order, grad: &mut [f64]) {
    let a = alpha.value();
    let n = px.len();
    let ng = w[0].len();
    let ag: Vec<f64> = (0..ng)
        .map(|g| (0..n).map(|x| px[x] * w[x][g].powf(a)).sum::<f64>())
        .collect();
    let z: f64 = ag.iter().filter(|&&v| v > 0.0).map(|v| v.powf(1.0 / a)).sum();
    let pref = a.abs() / (a - 1.0) / (z * LN_2);
    for x in 0..n {
        let mut dz = 0.0;
        for g in 0..ng {
            if ag[g] > 0.0 && w[x][g] > 0.0 {
                dz += ag[g].powf(1.0 / a - 1.0) * w[x][g].powf(a) / a;
            }
        }
        grad[x] = pref * dz;
    }
}

fn tilt(p: &[f64], e: f64) -> Vec<f64> {
    let logs: Vec<f64> = p.iter().map(|v| e * v.max(1e-15).log2()).collect();
    let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = logs.iter().map(|l| (l - top).exp2()).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|v| v / s).collect()
}

fn maximize(
    n: usize,
    seeds: &[Vec<f64>],
    f: impl Fn(&[f64]) -> f64,
    g: impl Fn(&[f64], &mut [f64]),
) -> Option<(Vec<f64>, f64)> {
    maximize_with(n, seeds, 20, &SpgOptions::default(), f, g)
}

fn maximize_with(
    n: usize,
    seeds: &[Vec<f64>],
    extra: usize,
    opts: &SpgOptions,
    f: impl Fn(&[f64]) -> f64,
    g: impl Fn(&[f64], &mut [f64]),
) -> Option<(Vec<f64>, f64)> {
    let mut starts = seeds.to_vec();
    starts.extend(default_starts(&[n], extra, 23));
    multi_start_maximize(
        |p, grad| {
            let v = f(p);
            if !v.is_finite() {
                return f64::NAN;
            }
            g(p, grad);
            v
        },
        &starts,
        &[n],
        opts,
    )
    .map(|r| (r.x, r.value))
}

fn zero_order_arimoto(w: &[Vec<f64>]) -> (Vec<f64>, f64) {
    let n = w.len();
    let ng = w[0].len();
    let mut best = (vec![1.0], f64::NEG_INFINITY);
    let limit = if n <= 16 { 1usize << n } else { 1 << 16 };
    for mask in 1..limit {
        let set: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let worst = (0..ng)
            .map(|g| set.iter().filter(|&&x| w[x][g] > SUPPORT_TOL).count())
            .max()
            .unwrap_or(1)
            .max(1);
        let v = (set.len() as f64 / worst as f64).log2();
        if v > best.1 + 1e-15 {
            let mut p = vec![0.0; n];
            for &x in &set {
                p[x] = 1.0 / set.len() as f64;
            }
            best = (p, v);
        }
    }
    best
}

fn zero_order_sibson(w: &[Vec<f64>], seeds: &[Vec<f64>]) -> (Vec<f64>, f64) {
    let n = w.len();
    let ng = w[0].len();
    let value = |p: &[f64]| -> f64 {
        let m = (0..ng)
            .map(|g| {
                (0..n)
                    .filter(|&x| w[x][g] > SUPPORT_TOL)
                    .map(|x| p[x])
                    .sum::<f64>()
            })
            .fold(0.0, f64::max);
        -m.log2()
    };
    let mut best = (vec![1.0 / n as f64; n], f64::NEG_INFINITY);
    let mut starts = seeds.to_vec();
    starts.push(vec![1.0 / n as f64; n]);
    for s in starts {
        let mut p = s;
        let mut fp = value(&p);
        let mut step: f64 = 0.25;
        while step > 1e-13 {
            let mut improved = true;
            while improved {
                improved = false;
                for i in 0..n {
                    for j in 0..n {
                        if i == j || p[j] <= 0.0 {
                            continue;
                        }
                        let t = step.min(p[j]);
                        let mut c = p.clone();
                        c[i] += t;
                        c[j] -= t;
                        let fc = value(&c);
                        if fc > fp + 1e-15 {
                            p = c;
                            fp = fc;
                            improved = true;
                        }
                    }
                }
            }
            step *= 0.5;
        }
        if fp > best.1 {
            best = (p, fp);
        }
    }
    best
}

/// Full capacity computation with both maximisers reported.
pub fn renyi_capacity_report(p_gx: &CondPmf, alpha: Order) -> Result<CapacityReport> {
    let w = p_gx.rows();
    let n = p_gx.n_in();
    let ng = p_gx.n_out();
    let uniform = vec![1.0 / n as f64; n];
    let a = alpha.value();
    let has_zero = w.iter().flatten().any(|&v| v <= SUPPORT_TOL);
    let every_column_zero = (0..ng).all(|g| w.iter().any(|r| r[g] <= SUPPORT_TOL));

    let closed = |v: f64| CapacityReport {
        value: v,
        argmax: uniform.clone(),
        arimoto_max: v,
        sibson_max: v,
        sibson_argmax: uniform.clone(),
    };
    match alpha.classify() {
        OrderClass::PosInf => {
            let s: f64 = (0..ng)
                .map(|g| w.iter().map(|r| r[g]).fold(0.0, f64::max))
                .sum();
            return Ok(closed(s.log2()));
        }
        OrderClass::NegInf => {
            let s: f64 = (0..ng)
                .map(|g| w.iter().map(|r| r[g]).fold(f64::INFINITY, f64::min))
                .sum();
            return Ok(closed(if s <= SUPPORT_TOL { f64::INFINITY } else { -s.log2() }));
        }
        OrderClass::Negative if has_zero => {
            if every_column_zero {
                return Ok(closed(f64::INFINITY));
            }
            return Err(Error::DivergentValue(
                "negative-order capacity needs a channel with strictly positive entries".into(),
            ));
        }
        OrderClass::Zero => {
            let (pa, va) = zero_order_arimoto(w);
            let (ps, vs) = zero_order_sibson(w, std::slice::from_ref(&pa));
            return finish(va, pa, vs, ps);
        }
        _ => {}
    }

    let fa = |p: &[f64]| arimoto_raw(p, w, alpha);
    let ga = |p: &[f64], g: &mut [f64]| arimoto_grad(p, w, alpha, g);
    let fs = |p: &[f64]| sibson_mi_raw(p, w, alpha);
    let gs = |p: &[f64], g: &mut [f64]| {
        if alpha.classify() == OrderClass::One {
            arimoto_grad(p, w, alpha, g)
        } else {
            sibson_grad(p, w, alpha, g)
        }
    };
    let not_converged = |best: f64, p: Vec<f64>| Error::OptimizerDidNotConverge {
        iterations: 0,
        best_value: best,
        best_point: p,
    };
    if alpha.classify() == OrderClass::Negative {
        // Arimoto's supremum may only be approached towards the boundary here, so it is
        // searched from the tilted Sibson maximiser with a short budget.
        let (ps, vs) = maximize(n, &[uniform.clone()], fs, gs)
            .ok_or_else(|| not_converged(f64::NAN, vec![]))?;
        let opts = SpgOptions {
            max_iter: 1000,
            ..Default::default()
        };
        let (pa, va) = maximize_with(n, &[tilt(&ps, 1.0 / a), uniform.clone()], 4, &opts, fa, ga)
            .ok_or_else(|| not_converged(vs, ps.clone()))?;
        return finish(va, pa, vs, ps);
    }
    let (pa, va) =
        maximize(n, &[uniform.clone()], fa, ga).ok_or_else(|| not_converged(f64::NAN, vec![]))?;
    let seed_s = if alpha.classify() == OrderClass::One { pa.clone() } else { tilt(&pa, a) };
    let (ps, vs) = maximize(n, &[seed_s], fs, gs).ok_or_else(|| not_converged(va, pa.clone()))?;
    // Second pass: each side restarted from the other's maximiser.
    let (pa, va) = if alpha.classify() != OrderClass::One {
        match maximize(n, &[pa.clone(), tilt(&ps, 1.0 / a)], fa, ga) {
            Some((p2, v2)) if v2 > va => (p2, v2),
            _ => (pa, va),
        }
    } else {
        (pa, va)
    };
    finish(va, pa, vs, ps)
}

fn finish(va: f64, pa: Vec<f64>, vs: f64, ps: Vec<f64>) -> Result<CapacityReport> {
    if !(va.is_finite() && vs.is_finite()) || (va - vs).abs() > CAPACITY_AGREEMENT_TOL {
        return Err(Error::OptimizerDidNotConverge {
            iterations: 0,
            best_value: va,
            best_point: pa,
        });
    }
    Ok(CapacityReport {
        value: va,
        argmax: pa,
        arimoto_max: va,
        sibson_max: vs,
        sibson_argmax: ps,
    })
}

/// Rényi capacity `C_α` and a maximising input distribution.
pub fn renyi_capacity(p_gx: &CondPmf, alpha: Order) -> Result<(f64, Pmf)> {
    let r = renyi_capacity_report(p_gx, alpha)?;
    let p = Pmf::from_weights(r.argmax.iter().map(|v| v.max(0.0)).collect())?;
    Ok((r.value, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::h2;

    fn o(a: f64) -> Order {
        Order::new(a).unwrap()
    }

    #[test]
    fn noiseless_and_useless_channels() {
        let id = CondPmf::identity(3).unwrap();
        for a in [0.0, 0.5, 1.0, 2.0, 5.0, f64::INFINITY] {
            let (c, p) = renyi_capacity(&id, o(a)).unwrap();
            assert!((c - 3f64.log2()).abs() < 1e-7, "alpha {a}: {c}");
            if a != 0.0 {
                for v in p.probs() {
                    assert!((v - 1.0 / 3.0).abs() < 1e-4);
                }
            }
        }
        let flat = CondPmf::new(vec![vec![0.3, 0.7]; 3]).unwrap();
        for a in [f64::NEG_INFINITY, -2.0, 0.5, 1.0, 3.0, f64::INFINITY] {
            let (c, _) = renyi_capacity(&flat, o(a)).unwrap();
            assert!(c.abs() < 1e-7, "alpha {a}: {c}");
        }
    }

    #[test]
    fn bsc_shannon_capacity() {
        let bsc = CondPmf::new(vec![vec![0.9, 0.1], vec![0.1, 0.9]]).unwrap();
        let (c, _) = renyi_capacity(&bsc, Order::ONE).unwrap();
        assert!((c - (1.0 - h2(0.1))).abs() < 1e-8);
    }

    #[test]
    fn arimoto_raw_matches_entropy_module() {
        use crate::entropy::arimoto_mi;
        use crate::prob::JointPmf;
        let w = vec![vec![0.6, 0.3, 0.1], vec![0.2, 0.2, 0.6]];
        let px = [0.35, 0.65];
        let j = JointPmf::from_prior_channel(
            &Pmf::new(px.to_vec()).unwrap(),
            &CondPmf::new(w.clone()).unwrap(),
        )
        .unwrap();
        for a in [-2.0, 0.5, 1.0, 3.0] {
            let d = arimoto_mi(&j, o(a)).unwrap();
            assert!((arimoto_raw(&px, &w, o(a)) - d).abs() < 1e-12);
        }
    }

    #[test]
    fn gradients_match_finite_differences() {
        let w = vec![vec![0.6, 0.3, 0.1], vec![0.2, 0.2, 0.6], vec![0.3, 0.4, 0.3]];
        let p = [0.3, 0.5, 0.2];
        for a in [-1.5, 0.5, 1.0, 2.5] {
            let al = o(a);
            let mut ga = [0.0; 3];
            let mut gs = [0.0; 3];
            arimoto_grad(&p, &w, al, &mut ga);
            if a != 1.0 {
                sibson_grad(&p, &w, al, &mut gs);
            }
            for i in 0..3 {
                let h = 1e-6;
                let mut pp = p;
                pp[i] += h;
                let mut pm = p;
                pm[i] -= h;
                let fd = (arimoto_raw(&pp, &w, al) - arimoto_raw(&pm, &w, al)) / (2.0 * h);
                assert!((fd - ga[i]).abs() < 1e-6, "arimoto a={a} i={i}");
                if a != 1.0 {
                    let fd = (sibson_mi_raw(&pp, &w, al) - sibson_mi_raw(&pm, &w, al)) / (2.0 * h);
                    assert!((fd - gs[i]).abs() < 1e-6, "sibson a={a} i={i}");
                }
            }
        }
    }
}
