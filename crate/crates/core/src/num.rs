//! Small numerical helpers shared across modules.

/// `log2 Σ 2^{v_i}`, stable for large or small exponents. Empty input gives `-∞`.
pub fn log2_sum_exp2<I: IntoIterator<Item = f64>>(vals: I) -> f64 {
    let v: Vec<f64> = vals.into_iter().collect();
    let m = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY || m == f64::INFINITY {
        return m;
    }
    m + v.iter().map(|x| (x - m).exp2()).sum::<f64>().log2()
}

/// `-Σ p log2 p` over positive entries.
pub fn shannon_bits(p: &[f64]) -> f64 {
    -p.iter().filter(|&&x| x > 0.0).map(|&x| x * x.log2()).sum::<f64>()
}

/// Binary entropy in bits.
pub fn h2(p: f64) -> f64 {
    shannon_bits(&[p, 1.0 - p])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lse_matches_direct() {
        let v = [0.3f64, -1.2, 2.5];
        let direct = v.iter().map(|x| x.exp2()).sum::<f64>().log2();
        assert!((log2_sum_exp2(v) - direct).abs() < 1e-14);
        assert_eq!(log2_sum_exp2([]), f64::NEG_INFINITY);
        assert!((log2_sum_exp2([1e4, 1e4]) - (1e4 + 1.0)).abs() < 1e-9);
    }
}
