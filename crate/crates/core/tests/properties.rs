use proptest::prelude::*;
use qbet_core::betting::{ice, isoelastic_utility, optimal_strategy, Dist, Odds, Strategy};
use qbet_core::divergence::{cond_renyi_div, renyi_div, variant_mi, CrdVariant};
use qbet_core::entropy::{arimoto_mi, renyi_entropy, renyi_probability, shannon_mi};
use qbet_core::games::arimoto_mi_quantum;
use qbet_core::linalg::hermitian_eigen;
use qbet_core::order::{Order, RiskParam};
use qbet_core::prob::{CondPmf, JointPmf, Pmf};
use qbet_core::quantum::{adjoint_apply, apply_channel, born_cond_pmf, simulate_measurement, Povm};
use qbet_core::random::{
    random_channel, random_cond_pmf, random_ensemble, random_joint, random_pmf, random_post_processing,
    random_povm, random_state, random_state_set, rng_from_seed,
};
use qbet_core::resource::{robustness_informativeness, weight_informativeness};

const ORDERS: [f64; 9] = [-8.0, -2.0, -0.5, 0.5, 1.0, 2.0, 8.0, f64::INFINITY, f64::NEG_INFINITY];

fn order(a: f64) -> Order {
    Order::new(a).unwrap()
}

fn positive_pmf(seed: u64, n: usize) -> Pmf {
    let mut rng = rng_from_seed(seed);
    Pmf::from_weights(random_pmf(&mut rng, n).into_vec().into_iter().map(|v| v + 1e-3).collect()).unwrap()
}

fn positive_cond(seed: u64, nx: usize, ng: usize) -> CondPmf {
    let rows = (0..nx).map(|x| positive_pmf(seed ^ (x as u64 + 1) << 20, ng).into_vec()).collect();
    CondPmf::from_weights(rows).unwrap()
}

fn max_abs(m: &nalgebra::DMatrix<num_complex::Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn trace_real(m: &nalgebra::DMatrix<num_complex::Complex64>) -> f64 {
    m.trace().re
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn arimoto_mi_is_nonnegative(seed in any::<u64>(), nx in 2usize..5, ng in 2usize..5) {
        let j = JointPmf::from_prior_channel(&positive_pmf(seed, nx), &positive_cond(seed, nx, ng)).unwrap();
        for a in ORDERS {
            let v = arimoto_mi(&j, order(a)).unwrap();
            prop_assert!(v >= -1e-10, "alpha {a}: {v}");
        }
    }

    #[test]
    fn renyi_entropy_is_continuous_at_one(seed in any::<u64>(), n in 2usize..6) {
        let p = positive_pmf(seed, n);
        let h1 = renyi_entropy(&p, Order::ONE).unwrap();
        for off in [1e-3, -1e-3] {
            let h = renyi_entropy(&p, order(1.0 + off)).unwrap();
            prop_assert!((h - h1).abs() <= 1e-2);
        }
        for off in [1e-2, -1e-2] {
            let h = renyi_entropy(&p, order(1.0 + off)).unwrap();
            prop_assert!((h - h1).abs() <= 1e-1);
        }
    }

    #[test]
    fn renyi_probability_is_exponentiated_entropy(seed in any::<u64>(), n in 1usize..6) {
        let p = positive_pmf(seed, n);
        for a in ORDERS {
            let h = renyi_entropy(&p, order(a)).unwrap();
            let pa = renyi_probability(&p, order(a)).unwrap();
            prop_assert!(((-h).exp2() - pa).abs() <= 1e-10);
        }
    }

    #[test]
    fn shannon_mi_obeys_data_processing(seed in any::<u64>(), nx in 2usize..5, ng in 2usize..5, nk in 1usize..5) {
        let mut rng = rng_from_seed(seed);
        let j = random_joint(&mut rng, nx, ng);
        let post = random_cond_pmf(&mut rng, ng, nk);
        let w = j.condition_on_x();
        let rows: Vec<Vec<f64>> = w
            .rows()
            .iter()
            .map(|r| (0..nk).map(|k| (0..ng).map(|g| r[g] * post.rows()[g][k]).sum()).collect())
            .collect();
        let j2 = JointPmf::from_prior_channel(&j.marginal_x(), &CondPmf::from_weights(rows).unwrap()).unwrap();
        prop_assert!(shannon_mi(&j2) <= shannon_mi(&j) + 1e-9);
    }

    #[test]
    fn renyi_divergence_is_nonnegative(seed in any::<u64>(), n in 1usize..6) {
        let p = positive_pmf(seed, n);
        let q = positive_pmf(seed.wrapping_add(1), n);
        for a in ORDERS.into_iter().chain([0.0]) {
            let d = renyi_div(&p, &q, order(a)).unwrap();
            prop_assert!(d >= -1e-12, "alpha {a}: {d}");
            prop_assert!(renyi_div(&p, &p, order(a)).unwrap().abs() <= 1e-12);
        }
    }

    #[test]
    fn conditional_divergence_orderings(seed in any::<u64>(), nx in 2usize..4, ng in 2usize..4) {
        let p = positive_cond(seed, nx, ng);
        let q = positive_cond(seed.wrapping_add(7), nx, ng);
        let px = positive_pmf(seed.wrapping_add(13), nx);
        use CrdVariant::*;
        for a in [f64::NEG_INFINITY, -2.0, -0.5, 0.0, 0.5, 1.0, 2.0, f64::INFINITY] {
            let chain = if a <= 0.0 { [Blp, Csiszar, Sibson] } else if a <= 1.0 { [Blp, Sibson, Csiszar] } else { [Csiszar, Blp, Sibson] };
            let v: Vec<f64> = chain.iter().map(|&c| cond_renyi_div(c, &p, &q, &px, order(a)).unwrap()).collect();
            prop_assert!(v[0] <= v[1] + 1e-9 && v[1] <= v[2] + 1e-9, "alpha {a}: {v:?}");
        }
    }

    #[test]
    fn heisenberg_duality(seed in any::<u64>(), d in 2usize..4, k in 2usize..4) {
        let mut rng = rng_from_seed(seed);
        let n = random_channel(&mut rng, d, d, 2);
        let m = random_povm(&mut rng, d, k);
        let rho = random_state(&mut rng, d);
        let out = apply_channel(&n, &rho).unwrap();
        let back = adjoint_apply(&n, &m).unwrap();
        for g in 0..k {
            let lhs = trace_real(&(&back.elements()[g] * rho.matrix()));
            let rhs = trace_real(&(&m.elements()[g] * out.matrix()));
            prop_assert!((lhs - rhs).abs() <= 1e-10);
        }
    }

    #[test]
    fn uninformative_measurements_give_constant_rows(seed in any::<u64>(), d in 1usize..4, k in 1usize..5) {
        let mut rng = rng_from_seed(seed);
        let m = Povm::uninformative(d, &random_pmf(&mut rng, k)).unwrap();
        let w = born_cond_pmf(&m, &random_state_set(&mut rng, d, 3)).unwrap();
        for r in w.rows() {
            for g in 0..k {
                prop_assert!((r[g] - w.rows()[0][g]).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn eigensolver_reconstructs(seed in any::<u64>(), d in 1usize..9) {
        let mut rng = rng_from_seed(seed);
        let a = random_povm(&mut rng, d, 2).elements()[0].clone();
        let (vals, vecs) = hermitian_eigen(&a);
        let lam = nalgebra::DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(d, vals.iter().map(|&v| num_complex::Complex64::new(v, 0.0))));
        let back = &vecs * lam * vecs.adjoint();
        prop_assert!(max_abs(&(back - a)) <= 1e-9);
    }

    #[test]
    fn simulation_does_not_increase_information(seed in any::<u64>(), k in 2usize..5, kk in 1usize..5) {
        let mut rng = rng_from_seed(seed);
        let e = random_ensemble(&mut rng, 2, 3);
        let m = random_povm(&mut rng, 2, k);
        let post = random_post_processing(&mut rng, k, kk);
        let sim = simulate_measurement(&m, &post).unwrap();
        let sum = sim.elements().iter().fold(nalgebra::DMatrix::zeros(2, 2), |acc, x| acc + x);
        prop_assert!(max_abs(&(sum - nalgebra::DMatrix::<num_complex::Complex64>::identity(2, 2))) <= 1e-10);
        for a in [-2.0, -0.5, 0.5, 1.0, 2.0, f64::INFINITY, f64::NEG_INFINITY] {
            let (Ok(before), Ok(after)) = (arimoto_mi_quantum(&e, &m, order(a)), arimoto_mi_quantum(&e, &sim, order(a))) else {
                continue;
            };
            prop_assert!(after <= before + 1e-9, "alpha {a}: {after} > {before}");
        }
    }

    #[test]
    fn certainty_equivalent_identity(seed in any::<u64>(), n in 2usize..5) {
        let p = positive_pmf(seed, n);
        let b = positive_pmf(seed.wrapping_add(3), n);
        let odds = Odds::new((0..n).map(|x| 1.0 + 0.5 * x as f64).collect()).unwrap();
        for r in [-3.0, -1.0, -0.5, 0.5, 2.0, 3.0] {
            let r = RiskParam::new(r).unwrap();
            let v = ice(&Strategy::Plain(b.clone()), &odds, &Dist::Marginal(p.clone()), r).unwrap().value;
            let eu: f64 = (0..n)
                .map(|x| p.probs()[x] * isoelastic_utility(b.probs()[x] * odds.values()[x], r).unwrap())
                .sum();
            let lhs = isoelastic_utility(v, r).unwrap();
            prop_assert!((lhs - eu).abs() <= 1e-9 * (1.0 + eu.abs()));
        }
    }

    #[test]
    fn risk_classification(seed in any::<u64>(), n in 2usize..5) {
        let p = positive_pmf(seed, n);
        let b = positive_pmf(seed.wrapping_add(5), n);
        let odds = Odds::new((0..n).map(|x| 1.0 + 0.9 * x as f64).collect()).unwrap();
        let mean: f64 = (0..n).map(|x| p.probs()[x] * b.probs()[x] * odds.values()[x]).sum();
        let spread: f64 = (0..n).map(|x| (b.probs()[x] * odds.values()[x] - mean).abs()).fold(0.0, f64::max);
        prop_assume!(spread > 1e-3);
        for r in [-2.0, -0.5, 0.0, 0.5, 1.0, 2.0] {
            let v = ice(&Strategy::Plain(b.clone()), &odds, &Dist::Marginal(p.clone()), RiskParam::new(r).unwrap()).unwrap().value;
            if r > 0.0 {
                prop_assert!(v < mean);
            } else if r < 0.0 {
                prop_assert!(v > mean);
            } else {
                prop_assert!((v - mean).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn optimal_strategy_beats_random_ones(seed in any::<u64>(), n in 2usize..5) {
        let mut rng = rng_from_seed(seed);
        let j = random_joint(&mut rng, n, 2);
        let odds = Odds::new((0..n).map(|x| 1.0 + 0.4 * x as f64).collect()).unwrap();
        for r in [-1.0, 0.5, 1.0, 2.0] {
            let r = RiskParam::new(r).unwrap();
            let d = Dist::Joint(j.clone());
            let best = ice(&optimal_strategy(&odds, &d, r).unwrap(), &odds, &d, r).unwrap().value;
            for _ in 0..20 {
                let b = Strategy::Conditional(random_cond_pmf(&mut rng, 2, n));
                let v = ice(&b, &odds, &d, r).unwrap().value;
                prop_assert!(v <= best + 1e-10);
            }
        }
    }

    #[test]
    fn informativeness_extremes_are_bounded(seed in any::<u64>(), d in 1usize..5, k in 1usize..7) {
        let mut rng = rng_from_seed(seed);
        let m = random_povm(&mut rng, d, k);
        let w = weight_informativeness(&m);
        prop_assert!(robustness_informativeness(&m) >= -1e-12);
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&w));
    }

    #[test]
    fn mutual_information_orderings(seed in any::<u64>(), nx in 2usize..4) {
        let j = JointPmf::from_prior_channel(&positive_pmf(seed, nx), &positive_cond(seed, nx, 2)).unwrap();
        use CrdVariant::*;
        for a in [-2.0, -0.5, 0.5, 2.0] {
            let chain = if a <= 0.0 { [Blp, Csiszar, Sibson] } else if a <= 1.0 { [Blp, Sibson, Csiszar] } else { [Csiszar, Blp, Sibson] };
            let v: Vec<f64> = chain.iter().map(|&c| variant_mi(c, &j, order(a)).unwrap()).collect();
            prop_assert!(v[0] <= v[1] + 1e-9 && v[1] <= v[2] + 1e-9, "alpha {a}: {v:?}");
        }
    }
}
