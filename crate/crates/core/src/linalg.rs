//! Small dense complex linear algebra: a cyclic Jacobi eigensolver for Hermitian matrices,
//! spectral functions and a Cholesky-based positive-semidefiniteness test.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;

const JACOBI_SWEEPS: usize = 100;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(d: usize) -> CMat {
    CMat::identity(d, d)
}

/// `(A + A†)/2`.
pub fn hermitian_part(a: &CMat) -> CMat {
    (a + a.adjoint()) * c(0.5, 0.0)
}

/// Largest entrywise modulus of `A − A†`.
pub fn hermiticity_defect(a: &CMat) -> f64 {
    if !a.is_square() {
        return f64::INFINITY;
    }
    let n = a.nrows();
    let mut m: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            m = m.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    m
}

pub fn trace_re(a: &CMat) -> f64 {
    (0..a.nrows().min(a.ncols())).map(|i| a[(i, i)].re).sum()
}

/// `Re tr[A B]` without forming the product.
pub fn trace_product_re(a: &CMat, b: &CMat) -> f64 {
    let mut s = 0.0;
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            s += (a[(i, k)] * b[(k, i)]).re;
        }
    }
    s
}

/// Largest entrywise modulus of `A − B`.
pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Eigen-decomposition `A = V diag(λ) V†` of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Eigenvalues are returned in ascending order with matching columns of `V`.
pub fn hermitian_eigen(a: &CMat) -> (Vec<f64>, CMat) {
    let n = a.nrows();
    let mut m = hermitian_part(a);
    let mut v = identity(n);
    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    for _ in 0..JACOBI_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let b = m[(p, q)];
                let bn = b.norm();
                if bn <= 1e-300 {
                    continue;
                }
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let tau = (aqq - app) / (2.0 * bn);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * cs;
                let ph = b.conj() / bn;
                let u_pp = c(cs, 0.0);
                let u_pq = c(sn, 0.0);
                let u_qp = -ph * sn;
                let u_qq = ph * cs;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = mkp * u_pp + mkq * u_qp;
                    m[(k, q)] = mkp * u_pq + mkq * u_qq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = u_pp.conj() * mpk + u_qp.conj() * mqk;
                    m[(q, k)] = u_pq.conj() * mpk + u_qq.conj() * mqk;
                }
                m[(p, q)] = c(0.0, 0.0);
                m[(q, p)] = c(0.0, 0.0);
                m[(p, p)] = c(m[(p, p)].re, 0.0);
                m[(q, q)] = c(m[(q, q)].re, 0.0);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * u_pp + vkq * u_qp;
                    v[(k, q)] = vkp * u_pq + vkq * u_qq;
                }
            }
        }
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let vals = idx.iter().map(|&i| m[(i, i)].re).collect();
    let vecs = CMat::from_fn(n, n, |r, k| v[(r, idx[k])]);
    (vals, vecs)
}

pub fn eigenvalues(a: &CMat) -> Vec<f64> {
    hermitian_eigen(a).0
}

pub fn lambda_min(a: &CMat) -> f64 {
    eigenvalues(a).first().copied().unwrap_or(0.0)
}

pub fn lambda_max(a: &CMat) -> f64 {
    eigenvalues(a).last().copied().unwrap_or(0.0)
}

/// `V f(Λ) V†` for a Hermitian `A`.
pub fn spectral_map<F: Fn(f64) -> f64>(a: &CMat, f: F) -> CMat {
    let (vals, v) = hermitian_eigen(a);
    let n = a.nrows();
    let mut out = CMat::zeros(n, n);
    for (k, &lam) in vals.iter().enumerate() {
        let fl = f(lam);
        if fl == 0.0 {
            continue;
        }
        for i in 0..n {
            let vi = v[(i, k)] * fl;
            for j in 0..n {
                out[(i, j)] += vi * v[(j, k)].conj();
            }
        }
    }
    out
}

/// Inverse square root of a positive definite matrix; eigenvalues below `1e-300` map to zero.
pub fn inv_sqrt(a: &CMat) -> CMat {
    spectral_map(a, |l| if l > 1e-300 { 1.0 / l.sqrt() } else { 0.0 })
}

pub fn sqrt_psd(a: &CMat) -> CMat {
    spectral_map(a, |l| l.max(0.0).sqrt())
}

/// Whether `A + shift·I` admits a Cholesky factorisation, i.e. is positive definite.
///
/// Uses no eigenvalues, so it serves as an independent feasibility oracle.
pub fn cholesky_pd(a: &CMat, shift: f64) -> bool {
    let n = a.nrows();
    let mut l = CMat::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)].re + shift;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if d.is_nan() || d <= 0.0 {
            return false;
        }
        let djj = d.sqrt();
        l[(j, j)] = c(djj, 0.0);
        for i in (j + 1)..n {
            let mut s = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / djj;
        }
    }
    true
}

/// `W (W†W)^{-1/2}`: the polar (isometric) factor of a full-column-rank matrix.
pub fn polar_isometry(w: &CMat) -> CMat {
    let g = w.adjoint() * w;
    w * inv_sqrt(&g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(n: usize, seed: u64) -> CMat {
        let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let a = CMat::from_fn(n, n, |_, _| c(next(), next()));
        hermitian_part(&a)
    }

    #[test]
    fn reconstruction_and_orthonormality() {
        for n in 1..=8 {
            for seed in 0..5 {
                let a = sample(n, seed * 31 + n as u64);
                let (vals, v) = hermitian_eigen(&a);
                let lam = CMat::from_fn(n, n, |i, j| if i == j { c(vals[i], 0.0) } else { c(0.0, 0.0) });
                let rec = &v * lam * v.adjoint();
                assert!(max_abs_diff(&rec, &a) <= 1e-9);
                assert!(max_abs_diff(&(v.adjoint() * &v), &identity(n)) <= 1e-10);
                assert!(vals.windows(2).all(|w| w[0] <= w[1]));
            }
        }
    }

    #[test]
    fn agrees_with_library_solver() {
        for n in 2..=6 {
            let a = sample(n, 100 + n as u64);
            let mut lib: Vec<f64> = a.clone().symmetric_eigen().eigenvalues.iter().cloned().collect();
            lib.sort_by(f64::total_cmp);
            for (x, y) in eigenvalues(&a).iter().zip(&lib) {
                assert!((x - y).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn spectral_functions() {
        let a = sample(4, 9);
        let pd = &a * &a + identity(4) * c(0.1, 0.0);
        let r = inv_sqrt(&pd);
        assert!(max_abs_diff(&(&r * &pd * &r), &identity(4)) < 1e-10);
        let s = sqrt_psd(&pd);
        assert!(max_abs_diff(&(&s * &s), &pd) < 1e-10);
    }

    #[test]
    fn cholesky_test_matches_spectrum() {
        let a = sample(3, 4);
        let lmin = lambda_min(&a);
        assert!(cholesky_pd(&a, -lmin + 1e-9));
        assert!(!cholesky_pd(&a, -lmin - 1e-9));
    }
}
