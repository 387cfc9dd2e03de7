//! Rényi entropy, Arimoto–Rényi conditional entropy and Arimoto's mutual information.
//!
//! All quantities are in bits.

use crate::error::{Error, Result};
use crate::num::{log2_sum_exp2, shannon_bits};
use crate::order::{Order, OrderClass};
use crate::prob::{JointPmf, Pmf, SUPPORT_TOL};

fn require_full_support(p: &[f64], what: &str) -> Result<()> {
    if p.iter().any(|&v| v <= SUPPORT_TOL) {
        return Err(Error::DivergentEntropy(format!(
            "{what} has a zero entry at a negative order"
        )));
    }
    Ok(())
}

/// `log2 Σ_{p>0} p^α` for finite nonzero α.
fn log2_power_sum(p: &[f64], alpha: f64) -> f64 {
    log2_sum_exp2(
        p.iter()
            .filter(|&&v| v > SUPPORT_TOL)
            .map(|&v| alpha * v.log2()),
    )
}

/// Rényi entropy `H_α(X)`.
pub fn renyi_entropy(p: &Pmf, alpha: Order) -> Result<f64> {
    let pr = p.probs();
    let a = alpha.value();
    Ok(match alpha.classify() {
        OrderClass::Zero => (p.support().len() as f64).log2(),
        OrderClass::One => shannon_bits(pr),
        OrderClass::PosInf => -pr.iter().cloned().fold(0.0, f64::max).log2(),
        OrderClass::NegInf => {
            require_full_support(pr, "pmf")?;
            -pr.iter().cloned().fold(f64::INFINITY, f64::min).log2()
        }
        OrderClass::Negative => {
            require_full_support(pr, "pmf")?;
            log2_power_sum(pr, a) / (1.0 - a)
        }
        OrderClass::ZeroOne | OrderClass::GtOne => log2_power_sum(pr, a) / (1.0 - a),
    })
}

/// Rényi probability `p_α(X) = 2^{-H_α(X)}`.
pub fn renyi_probability(p: &Pmf, alpha: Order) -> Result<f64> {
    let a = alpha.value();
    match alpha.classify() {
        OrderClass::Negative | OrderClass::ZeroOne | OrderClass::GtOne => {
            if a < 0.0 {
                require_full_support(p.probs(), "pmf")?;
            }
            Ok((log2_power_sum(p.probs(), a) / (a - 1.0)).exp2())
        }
        _ => Ok((-renyi_entropy(p, alpha)?).exp2()),
    }
}

/// Columns of the joint carrying positive mass, each as a vector over `x`.
fn live_columns(j: &JointPmf) -> Vec<Vec<f64>> {
    (0..j.ng())
        .map(|g| (0..j.nx()).map(|x| j.get(x, g)).collect::<Vec<f64>>())
        .filter(|c| c.iter().sum::<f64>() > SUPPORT_TOL)
        .collect()
}

/// Arimoto–Rényi conditional entropy `H_α(X|G)`.
pub fn arimoto_cond_entropy(j: &JointPmf, alpha: Order) -> Result<f64> {
    let cols = live_columns(j);
    let a = alpha.value();
    if a < 0.0 {
        for c in &cols {
            require_full_support(c, "joint column")?;
        }
    }
    Ok(match alpha.classify() {
        OrderClass::Zero => cols
            .iter()
            .map(|c| c.iter().filter(|&&v| v > SUPPORT_TOL).count())
            .max()
            .map(|n| (n as f64).log2())
            .unwrap_or(0.0),
        OrderClass::One => {
            let mut h = 0.0;
            for c in &cols {
                let pg: f64 = c.iter().sum();
                for &v in c.iter().filter(|&&v| v > 0.0) {
                    h -= v * (v / pg).log2();
                }
            }
            h
        }
        OrderClass::PosInf => {
            let s: f64 = cols
                .iter()
                .map(|c| c.iter().cloned().fold(0.0, f64::max))
                .sum();
            -s.log2()
        }
        OrderClass::NegInf => {
            let s: f64 = cols
                .iter()
                .map(|c| c.iter().cloned().fold(f64::INFINITY, f64::min))
                .sum();
            -s.log2()
        }
        OrderClass::Negative | OrderClass::ZeroOne | OrderClass::GtOne => {
            let inner = log2_sum_exp2(cols.iter().map(|c| log2_power_sum(c, a) / a));
            a / (1.0 - a) * inner
        }
    })
}

/// Conditional Rényi probability `p_α(X|G) = 2^{-H_α(X|G)}`.
pub fn cond_renyi_probability(j: &JointPmf, alpha: Order) -> Result<f64> {
    Ok((-arimoto_cond_entropy(j, alpha)?).exp2())
}

/// Arimoto's mutual information `I_α(X;G) = sgn(α)[H_α(X) − H_α(X|G)]`.
pub fn arimoto_mi(j: &JointPmf, alpha: Order) -> Result<f64> {
    let hx = renyi_entropy(&j.marginal_x(), alpha)?;
    let hxg = arimoto_cond_entropy(j, alpha)?;
    Ok(alpha.sgn() * (hx - hxg))
}

/// Shannon mutual information of a joint, computed directly from its definition.
pub fn shannon_mi(j: &JointPmf) -> f64 {
    let px = j.marginal_x();
    let pg = j.marginal_g();
    let mut mi = 0.0;
    for x in 0..j.nx() {
        for g in 0..j.ng() {
            let v = j.get(x, g);
            if v > 0.0 {
                mi += v * (v / (px.probs()[x] * pg.probs()[g])).log2();
            }
        }
    }
    mi
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::h2;

    fn o(a: f64) -> Order {
        Order::new(a).unwrap()
    }

    #[test]
    fn uniform_is_log_n_for_every_order() {
        let p = Pmf::uniform(4).unwrap();
        for a in [f64::NEG_INFINITY, -3.0, 0.0, 0.5, 1.0, 2.0, f64::INFINITY] {
            assert!((renyi_entropy(&p, o(a)).unwrap() - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn hand_checked_values() {
        let p = Pmf::new(vec![0.5, 0.25, 0.25]).unwrap();
        // Σp² = 3/8.
        let sum_sq: f64 = 0.25 + 0.0625 + 0.0625;
        assert!((renyi_entropy(&p, o(2.0)).unwrap() - (-sum_sq.log2())).abs() < 1e-12);
        assert!((renyi_entropy(&p, o(2.0)).unwrap() - 1.41504).abs() < 1e-5);
        assert!((renyi_entropy(&p, Order::INF).unwrap() - 1.0).abs() < 1e-12);
        assert!((renyi_probability(&p, o(2.0)).unwrap() - 0.375).abs() < 1e-12);
        let q = Pmf::new(vec![0.5, 0.5]).unwrap();
        assert!((renyi_probability(&q, o(2.0)).unwrap() - 0.5).abs() < 1e-12);
        let d = Pmf::new(vec![1.0, 0.0]).unwrap();
        assert!((renyi_probability(&d, Order::INF).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn negative_order_needs_full_support() {
        let p = Pmf::new(vec![1.0, 0.0]).unwrap();
        assert!(matches!(
            renyi_entropy(&p, o(-1.0)),
            Err(Error::DivergentEntropy(_))
        ));
        assert!(renyi_entropy(&p, Order::NEG_INF).is_err());
        let j = JointPmf::new(vec![vec![0.5, 0.0], vec![0.0, 0.5]]).unwrap();
        assert!(arimoto_cond_entropy(&j, o(-2.0)).is_err());
    }

    #[test]
    fn conditional_examples() {
        let corr = JointPmf::new(vec![vec![0.5, 0.0], vec![0.0, 0.5]]).unwrap();
        assert!(arimoto_cond_entropy(&corr, o(2.0)).unwrap().abs() < 1e-12);
        assert!((cond_renyi_probability(&corr, o(2.0)).unwrap() - 1.0).abs() < 1e-12);
        for a in [0.0, 0.5, 1.0, 2.0, 8.0, f64::INFINITY] {
            assert!((arimoto_mi(&corr, o(a)).unwrap() - 1.0).abs() < 1e-12);
        }
        let j = JointPmf::new(vec![vec![0.4, 0.1], vec![0.1, 0.4]]).unwrap();
        let h = arimoto_cond_entropy(&j, Order::INF).unwrap();
        assert!((h + 0.8f64.log2()).abs() < 1e-12);
        assert!((h - 0.32193).abs() < 1e-5);
        assert!((cond_renyi_probability(&j, Order::INF).unwrap() - 0.8).abs() < 1e-12);
    }

    #[test]
    fn independence_collapses_conditioning() {
        let px = Pmf::new(vec![0.2, 0.3, 0.5]).unwrap();
        let qg = Pmf::new(vec![0.6, 0.4]).unwrap();
        let j = JointPmf::independent(&px, &qg).unwrap();
        for a in [f64::NEG_INFINITY, -2.0, 0.0, 0.5, 1.0, 3.0, f64::INFINITY] {
            let h = renyi_entropy(&px, o(a)).unwrap();
            assert!((arimoto_cond_entropy(&j, o(a)).unwrap() - h).abs() < 1e-12);
            assert!(arimoto_mi(&j, o(a)).unwrap().abs() < 1e-12);
            let pa = renyi_probability(&px, o(a)).unwrap();
            assert!((cond_renyi_probability(&j, o(a)).unwrap() - pa).abs() < 1e-12);
        }
    }

    #[test]
    fn binary_symmetric_shannon() {
        let j = JointPmf::new(vec![vec![0.45, 0.05], vec![0.05, 0.45]]).unwrap();
        let expect = 1.0 - h2(0.1);
        assert!((arimoto_mi(&j, Order::ONE).unwrap() - expect).abs() < 1e-12);
        assert!((expect - 0.53100).abs() < 1e-5);
        assert!((shannon_mi(&j) - expect).abs() < 1e-12);
    }
}
