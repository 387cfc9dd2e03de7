//! Seeded verification suites. Each suite draws random instances, evaluates both sides of an
//! identity (or an ordering) and records one [`Check`] per comparison.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::betting::{
    blp_decomposition, ice, isoelastic_utility, log_ice, numeric_optimal_ice, optimal_strategy, Dist,
    Odds, Strategy,
};
use crate::capacity::renyi_capacity_report;
use crate::divergence::{cond_renyi_div, variant_mi, CrdVariant};
use crate::entropy::{arimoto_mi, cond_renyi_probability, renyi_probability, shannon_mi};
use crate::error::{Error, Result};
use crate::games::{
    cpp_brute_force, qsb_value, result_check, uninformed_qsb_value, FreeSet, GapInstance, QsbGame,
    ResultInstance,
};
use crate::linalg::hermitian_eigen;
use crate::order::{sgn, Order, RiskParam};
use crate::povm_opt::AscentOptions;
use crate::prob::{CondPmf, JointPmf, Pmf};
use crate::quantum::{born_cond_pmf, DensityMatrix, Ensemble, KrausChannel, Povm, StateSet};
use crate::random::{
    random_channel, random_cond_pmf, random_ensemble, random_joint, random_pmf, random_povm,
    random_state, random_state_set, rng_from_seed,
};
use crate::resource::{
    alpha_measure_report, informativeness_certificate, measured_sibson_div, monotone_suite, robustness_bisection,
    robustness_informativeness, weight_bisection, weight_informativeness, EnsembleSearch, Witness,
};

/// The eight orders used by the single-optimiser identities.
pub const ORDERS: [f64; 8] = [-8.0, -2.0, -0.5, 0.5, 2.0, 8.0, f64::INFINITY, f64::NEG_INFINITY];

/// Finite orders used where a maximum over measurements is needed on both sides.
pub const NESTED_ORDERS: [f64; 5] = [-2.0, -0.5, 0.5, 1.0, 2.0];

/// Risk parameters of the decomposition checks.
pub const RISKS: [f64; 7] = [-3.0, -1.0, -0.5, 0.5, 1.0, 2.0, 3.0];

pub const TOL_SINGLE: f64 = 1e-6;
pub const TOL_NESTED: f64 = 1e-5;
pub const TOL_EXACT: f64 = 1e-9;
pub const TOL_CLASSICAL: f64 = 1e-8;
pub const TOL_ORDERING: f64 = 1e-9;
pub const TOL_DECOMPOSITION: f64 = 1e-9;
pub const TOL_MISMATCH: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Result1,
    Result2,
    Result3,
    Result4,
    Result5,
    Result6,
    Result7,
    Lemmas,
    Betting,
    All,
}

impl Suite {
    pub const EACH: [Suite; 9] = [
        Suite::Result1,
        Suite::Result2,
        Suite::Result3,
        Suite::Result4,
        Suite::Result5,
        Suite::Result6,
        Suite::Result7,
        Suite::Lemmas,
        Suite::Betting,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Result1 => "result1",
            Suite::Result2 => "result2",
            Suite::Result3 => "result3",
            Suite::Result4 => "result4",
            Suite::Result5 => "result5",
            Suite::Result6 => "result6",
            Suite::Result7 => "result7",
            Suite::Lemmas => "lemmas",
            Suite::Betting => "betting",
            Suite::All => "all",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .iter()
            .chain(std::iter::once(&Suite::All))
            .find(|x| x.name() == s.to_ascii_lowercase())
            .copied()
            .ok_or_else(|| Error::Unsupported(format!("unknown suite {s}")))
    }
}

/// How the two sides of a check are compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Equal,
    AtMost,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub instance: usize,
    pub alpha: Option<Order>,
    pub relation: Relation,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_err: f64,
    pub tol: f64,
    pub pass: bool,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
}

impl Check {
    pub fn equal(name: &str, instance: usize, alpha: Option<Order>, lhs: f64, rhs: f64, tol: f64, seed: u64) -> Check {
        let abs_err = if lhs == rhs { 0.0 } else { (lhs - rhs).abs() };
        Check {
            name: name.into(),
            instance,
            alpha,
            relation: Relation::Equal,
            lhs,
            rhs,
            abs_err,
            tol,
            pass: abs_err <= tol,
            seed,
            detail: None,
        }
    }

    pub fn at_most(name: &str, instance: usize, alpha: Option<Order>, lhs: f64, rhs: f64, tol: f64, seed: u64) -> Check {
        let excess = if lhs <= rhs { 0.0 } else { lhs - rhs };
        Check {
            name: name.into(),
            instance,
            alpha,
            relation: Relation::AtMost,
            lhs,
            rhs,
            abs_err: excess,
            tol,
            pass: excess <= tol,
            seed,
            detail: None,
        }
    }

    pub fn failed(name: &str, instance: usize, alpha: Option<Order>, seed: u64, err: &Error) -> Check {
        Check {
            name: name.into(),
            instance,
            alpha,
            relation: Relation::Equal,
            lhs: f64::NAN,
            rhs: f64::NAN,
            abs_err: f64::NAN,
            tol: 0.0,
            pass: false,
            seed,
            detail: Some(err.to_string()),
        }
    }

    fn from_result(name: &str, instance: usize, alpha: Option<Order>, seed: u64, r: Result<Check>) -> Check {
        r.unwrap_or_else(|e| Check::failed(name, instance, alpha, seed, &e))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub trials: usize,
    pub checks: usize,
    pub failed: usize,
    pub pass: bool,
    pub results: Vec<Check>,
}

impl SuiteReport {
    fn new(suite: Suite, cfg: &VerifyConfig, results: Vec<Check>) -> Self {
        let failed = results.iter().filter(|c| !c.pass).count();
        SuiteReport {
            suite: suite.name().into(),
            seed: cfg.seed,
            trials: cfg.trials,
            checks: results.len(),
            failed,
            pass: failed == 0,
            results,
        }
    }

    /// Largest error among checks whose name starts with `prefix`.
    pub fn max_err(&self, prefix: &str) -> f64 {
        self.results
            .iter()
            .filter(|c| c.name.starts_with(prefix))
            .map(|c| c.abs_err)
            .fold(0.0, |a, b| if b.is_nan() { f64::NAN } else { a.max(b) })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    pub trials: usize,
    /// Overrides every default tolerance when set.
    pub tol: Option<f64>,
}

impl VerifyConfig {
    pub fn new(seed: u64, trials: usize) -> Self {
        VerifyConfig { seed, trials, tol: None }
    }

    fn tol(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

/// Seed of instance `i` of a suite.
pub fn instance_seed(seed: u64, i: usize) -> u64 {
    seed ^ (i as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

fn orders(list: &[f64]) -> Vec<Order> {
    list.iter().map(|&a| Order::new(a).expect("order")).collect()
}

fn risk(r: f64) -> RiskParam {
    RiskParam::new(r).expect("risk")
}

/// Runs one suite, or every suite for [`Suite::All`].
pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Vec<SuiteReport> {
    match suite {
        Suite::All => Suite::EACH.iter().map(|&s| run_one(s, cfg)).collect(),
        s => vec![run_one(s, cfg)],
    }
}

fn run_one(suite: Suite, cfg: &VerifyConfig) -> SuiteReport {
    let checks = match suite {
        Suite::Result1 => {
            let mut c = result1_checks(cfg);
            c.extend(corollary_checks(cfg));
            c
        }
        Suite::Result2 => result2_checks(cfg),
        Suite::Result3 => result3_checks(cfg),
        Suite::Result4 => result4_checks(cfg),
        Suite::Result5 => result5_checks(cfg),
        Suite::Result6 => result6_checks(cfg),
        Suite::Result7 => {
            let mut c = extreme_measure_checks(cfg, 10 * cfg.trials);
            c.extend(remark_checks(cfg, cfg.trials.div_ceil(10)));
            c.extend(monotone_checks(cfg, cfg.trials));
            c
        }
        Suite::Lemmas => {
            let mut c = ordering_checks(cfg, 10 * cfg.trials);
            c.extend(mi_ordering_checks(cfg, cfg.trials));
            c.extend(capacity_checks(cfg));
            c
        }
        Suite::Betting => {
            let mut c = decomposition_checks(cfg, 10 * cfg.trials);
            c.extend(lemma45_checks(cfg));
            c.extend(certainty_equivalent_checks(cfg));
            c
        }
        Suite::All => unreachable!("expanded by run_suite"),
    };
    SuiteReport::new(suite, cfg, checks)
}

fn per_instance<F>(n: usize, f: F) -> Vec<Check>
where
    F: Fn(usize) -> Vec<Check> + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect::<Vec<_>>().into_iter().flatten().collect()
}

fn report_to_check(name: &str, i: usize, r: Result<crate::games::ResultReport>, alpha: Order, tol: f64, seed: u64) -> Check {
    match r {
        Ok(r) => Check::equal(name, i, Some(alpha), r.lhs, r.rhs, tol, seed),
        Err(e) => Check::failed(name, i, Some(alpha), seed, &e),
    }
}

fn ascent(seed: u64) -> AscentOptions {
    AscentOptions {
        seed,
        ..Default::default()
    }
}

/// Information side against the betting ratio for a fixed measurement and uninformative ones.
pub fn result1_checks(cfg: &VerifyConfig) -> Vec<Check> {
    let tol = cfg.tol(TOL_SINGLE);
    per_instance(cfg.trials, |i| {
        let s = instance_seed(cfg.seed, i);
        let mut rng = rng_from_seed(s);
        let e = random_ensemble(&mut rng, 2, 3);
        let m = random_povm(&mut rng, 2, 3);
        let inst = ResultInstance::Uninformative { ensemble: e, povm: m };
        orders(&ORDERS)
            .into_iter()
            .map(|a| report_to_check("result1", i, result_check(&inst, a, tol, s, &ascent(s)), a, tol, s))
            .collect()
    })
}

/// Discrimination and exclusion limits of the QSB ratio against brute-force post-processing.
pub fn corollary_checks(cfg: &VerifyConfig) -> Vec<Check> {
    let tol = cfg.tol(TOL_EXACT);
    per_instance(cfg.trials, |i| {
        let s = instance_seed(cfg.seed, i);
        let mut rng = rng_from_seed(s);
        let e = random_ensemble(&mut rng, 2, 3);
        let m = random_povm(&mut rng, 2, 2 + i % 3);
        let run = || -> Result<Vec<Check>> {
            let (succ, err) = cpp_brute_force(&e.joint(&m)?);
            let p = e.priors().probs();
            let pmax = p.iter().cloned().fold(0.0, f64::max);
            let pmin = p.iter().cloned().fold(f64::INFINITY, f64::min);
            let mut out = Vec::new();
            for (a, oracle, name) in [(Order::INF, succ / pmax, "corollary2"), (Order::NEG_INF, err / pmin, "corollary3")] {
                let game = QsbGame::constant(1.7, a, e.clone())?;
                let ratio = qsb_value(&game, &m, a)? / uninformed_qsb_value(&game, a)?;
                out.push(Check::equal(name, i, Some(a), ratio, oracle, tol, s));
            }
            Ok(out)
        };
        run().unwrap_or_else(|err| vec![Check::failed("corollary", i, None, s, &err)])
    })
}

/// Best noisy information over measurements against the best betting ratio over measurements.
pub fn result2_checks(cfg: &VerifyConfig) -> Vec<Check> {
    let tol = cfg.tol(TOL_NESTED);
    per_instance(cfg.trials, |i| {
        let s = instance_seed(cfg.seed, i);
        let mut rng = rng_from_seed(s);
        let e = random_ensemble(&mut rng, 2, 3);
        let n = random_channel(&mut rng, 2, 2, 2);
        let inst = ResultInstance::NonConstant { ensemble: e, channel: n };
        orders(&NESTED_ORDERS)
            .into_iter()
            .map(|a| report_to_check("result2", i, result_check(&inst, a, tol, s, &ascent(s)), a, tol, s))
            .collect()
    })
}

fn gap_checks(name: &str, i: usize, inst: GapInstance, alphas: &[f64], tol: f64, s: u64) -> Vec<Check> {
    let inst = ResultInstance::Gap(inst);
    orders(alphas)
        .into_iter()
        .map(|a| report_to_check(name, i, result_check(&inst, a, tol, s, &ascent(s)), a, tol, s))
        .collect()
}

/// Arimoto gaps on measurements and channels against betting advantages over free sets.
pub fn result3_checks(cfg: &VerifyConfig) -> Vec<Check> {
    let exact = cfg.tol(TOL_SINGLE);
    let nested = cfg.tol(TOL_NESTED);
    per_instance(cfg.trials, |i| {
        let s = instance_seed(cfg.seed, i);
        let mut rng = rng_from_seed(s);
        let e = random_ensemble(&mut rng, 2, 3);
        let m = random_povm(&mut rng, 2, 3);
        let free_m = vec![random_povm(&mut rng, 2, 2), random_povm(&mut rng, 2, 3)];
        let n = random_channel(&mut rng, 2, 2, 2);
        let free_n = vec![random_channel(&mut rng, 2, 2, 1), random_channel(&mut rng, 2, 2, 2)];
        let mut out = gap_checks(
            "result3.measurement.explicit",
            i,
            GapInstance::Measurement {
                ensemble: e.clone(),
                povm: m.clone(),
                free: FreeSet::ExplicitMeasurements(free_m),
            },
            &ORDERS,
            exact,
            s,
        );
        out.extend(gap_checks(
            "result3.measurement.uninformative",
            i,
            GapInstance::Measurement {
                ensemble: e.clone(),
                povm: m,
                free: FreeSet::UninformativeMeasurements,
            },
            &ORDERS,
            nested,
            s,
        ));
        out.extend(gap_checks(
            "result3.channel.explicit",
            i,
            GapInstance::Channel {
                ensemble: e.clone(),
                channel: n.clone(),
                free: FreeSet::ExplicitChannels(free_n),
            },
            &NESTED_ORDERS,
            exact,
            s,
        ));
        out.extend(gap_checks(
            "result3.channel.constant",
            i,
            GapInstance::Channel {
                ensemble: e,
                channel: n,
                free: FreeSet::ConstantChannels,
            },
            &NESTED_ORDERS,
            nested,
            s,
        ));
        out
    })
}

/// Arimoto gaps on states and state-measurement pairs against channel-betting advantages.
pub fn result4_checks(cfg: &VerifyConfig) -> Vec<Check> {
    let exact = cfg.tol(TOL_SINGLE);
    let nested = cfg.tol(TOL_NESTED);
    per_instance(cfg.trials, |i| {
        let s = instance_seed(cfg.seed, i);
        let mut rng = rng_from_seed(s);
        let prior = random_pmf(&mut rng, 3);
        let channels: Vec<KrausChannel> = (0..3).map(|_| random_channel(&mut rng, 2, 2, 2)).collect();
        let rho = random_state(&mut rng, 2);
        let m = random_povm(&mut rng, 2, 3);
        let free_s: Vec<DensityMatrix> = (0..3).map(|_| random_state(&mut rng, 2)).collect();
        let free_m = vec![random_povm(&mut rng, 2, 2), random_povm(&mut rng, 2, 3)];
        let mut out = gap_checks(
            "result4.state.explicit",
            i,
            GapInstance::State {
                prior: prior.clone(),
                channels: channels.clone(),
                rho: rho.clone(),
                povm: m.clone(),
                free: FreeSet::ExplicitStates(free_s.clone()),
            },
            &ORDERS,
            exact,
            s,
        );
        out.extend(gap_checks(
            "result4.pair.explicit",
            i,
            GapInstance::StateMeasurement {
                prior: prior.clone(),
                channels: channels.clone(),
                rho: rho.clone(),
                povm: m.clone(),
                free_states: FreeSet::ExplicitStates(free_s.clone()),
                free_measurements: FreeSet::ExplicitMeasurements(free_m),
            },
            &ORDERS,
            exact,
            s,
        ));
        out.extend(gap_checks(
            "result4.pair.uninformative",
            i,
            GapInstance::StateMeasurement {
                prior,
                channels,
                rho,
                povm: m,
                free_states: FreeSet::ExplicitStates(free_s),
                free_measurements: FreeSet::UninformativeMeasurements,
            },
            &ORDERS,
            nested,
            s,
        ));
        out
    })
}

/// Classical side information: betting advantage against Arimoto's information, and the
/// Kelly identity for arbitrary positive odds at `α = 1`.
pub fn result5_checks(cfg: &VerifyConfig) -> Vec<Check> {
    let tol = cfg.tol(TOL_CLASSICAL);
    let mut alphas = ORDERS.to_vec();
    alphas.push(1.0);
    per_instance(cfg.trials, |i| {
        let s = instance_seed(cfg.seed, i);
        let mut rng = rng_from_seed(s);
        let j = random_joint(&mut rng, 2 + i % 3, 2 + (i / 3) % 3);
        let mut out: Vec<Check> = orders(&alphas)
            .into_iter()
            .map(|a| {
                let inst = ResultInstance::Classical { joint: j.clone() };
                report_to_check("result5", i, result_check(&inst, a, tol, s, &ascent(s)), a, tol, s)
            })
            .collect();
        let kelly = || -> Result<Check> {
            let odds = Odds::new((0..j.nx()).map(|_| 1.0 + 4.0 * rand::Rng::random::<f64>(&mut rng_from_seed(s ^ 7))).collect())?;
            let with = numeric_optimal_ice(&odds, &Dist::Joint(j.clone()), risk(1.0))?.0;
            let without = numeric_optimal_ice(&odds, &Dist::Marginal(j.marginal_x()), risk(1.0))?.0;
            Ok(Check::equal("result5.kelly", i, Some(Order::ONE), (with / without).log2(), shannon_mi(&j), tol, s))
        };
        out.push(Check::from_result("result5.kelly", i, Some(Order::ONE), s, kelly()));
        out
    })
}

/// Informativeness on a state set: measured Sibson divergence to the certified uninformative
/// measurement against the Rényi capacity, and the minimax gap.
pub fn result6_checks(cfg: &VerifyConfig) -> Vec<Check> {
    let tol = cfg.tol(TOL_SINGLE);
    let alphas = [-2.0, -0.5, 0.5, 1.0, 2.0, f64::INFINITY, f64::NEG_INFINITY];
    per_instance(cfg.trials, |i| {
        let s = instance_seed(cfg.seed, i);
        let mut rng = rng_from_seed(s);
        let m = random_povm(&mut rng, 2, 3);
        let set = random_state_set(&mut rng, 2, 3);
        let mut out = Vec::new();
        for a in orders(&alphas) {
            let run = || -> Result<(Check, Check)> {
                let cert = informativeness_certificate(&m, &set, a)?;
                let q = Pmf::from_weights(cert.q.clone())?;
                let ui = Povm::uninformative(2, &q)?;
                let e_s = measured_sibson_div(&m, &ui, &set, a)?;
                let cap = renyi_capacity_report(&born_cond_pmf(&m, &set)?, a)?.value;
                Ok((
                    Check::equal("result6.capacity", i, Some(a), e_s, cap, tol, s),
                    Check::equal("result6.minimax", i, Some(a), cert.min_max, cert.max_min, tol, s),
                ))
            };
            match run() {
                Ok((x, y)) => out.extend([x, y]),
                Err(e) => out.push(Check::failed("result6", i, Some(a), s, &e)),
            }
        }
        out
    })
}

fn eigen_state_set(m: &Povm, top: bool) -> Result<StateSet> {
    let d = m.dim();
    let states = m
        .elements()
        .iter()
        .map(|e| {
            let (_, v) = hermitian_eigen(e);
            let col: Vec<_> = v.column(if top { d - 1 } else { 0 }).iter().cloned().collect();
            DensityMatrix::pure(&col)
        })
        .collect::<Result<Vec<_>>>()?;
    StateSet::new(states)
}

/// Robustness and weight: closed forms against bisection oracles and against the extreme-order
/// informativeness of eigenvector state sets.
pub fn extreme_measure_checks(cfg: &VerifyConfig, n: usize) -> Vec<Check> {
    let tol = cfg.tol(TOL_EXACT);
    per_instance(n, |i| {
        let s = instance_seed(cfg.seed, i);
        let mut rng = rng_from_seed(s);
        let m = random_povm(&mut rng, 1 + i % 4, 1 + (i / 4) % 6);
        let r = robustness_informativeness(&m);
        let w = weight_informativeness(&m);
        let mut out = vec![
            Check::equal("result7.robustness", i, Some(Order::INF), r, robustness_bisection(&m, 1e-12), tol, s),
            Check::equal("result7.weight", i, Some(Order::NEG_INF), w, weight_bisection(&m, 1e-12), tol, s),
        ];
        if m.n_outcomes() > 1 && m.dim() > 1 {
            let via_sets = || -> Result<(f64, f64)> {
                let top = informativeness_certificate(&m, &eigen_state_set(&m, true)?, Order::INF)?.max_min;
                let bottom = informativeness_certificate(&m, &eigen_state_set(&m, false)?, Order::NEG_INF)?.max_min;
                Ok((top.exp2() - 1.0, 1.0 - (-bottom).exp2()))
            };
            match via_sets() {
                Ok((rm, wm)) => {
                    out.push(Check::equal("result7.robustness_states", i, Some(Order::INF), r, rm, tol, s));
                    out.push(Check::equal("result7.weight_states", i, Some(Order::NEG_INF), w, wm, tol, s));
                }
                Err(e) => out.push(Check::failed("result7.states", i, None, s, &e)),
            }
        }
        out
    })
}

/// Orders of the operational check on the α-measure.
pub const REMARK_ORDERS: [f64; 4] = [-1.0, 0.5, 1.0, 2.0];

/// Smallest prior weight of a witness ensemble that counts as attaining the measure.
pub const ATTAINED_PRIOR: f64 = 1e-9;

/// Constant-odds advantage on the ensemble found by the α-measure search against `1 ± M_α`,
/// on witnesses whose prior stays away from the simplex boundary, plus the range of `M_α`.
pub fn remark_checks(cfg: &VerifyConfig, n: usize) -> Vec<Check> {
    let tol = cfg.tol(TOL_NESTED);
    per_instance(n, |i| {
        let s = instance_seed(cfg.seed, i);
        let mut rng = rng_from_seed(s);
        let m = random_povm(&mut rng, 2, 2 + i % 3);
        let mut out = Vec::new();
        for a in orders(&REMARK_ORDERS) {
            let run = || -> Result<Vec<Check>> {
                let rep = alpha_measure_report(&m, a, &EnsembleSearch::light(s), &[])?;
                let upper = if a.value() < 0.0 { 1.0 } else { f64::INFINITY };
                let mut v = vec![
                    Check::at_most("result7.bounds", i, Some(a), -rep.value, 0.0, 0.0, s),
                    Check::at_most("result7.bounds", i, Some(a), rep.value, upper, 0.0, s),
                ];
                let Witness::Ensemble { states, prior } = rep.achiever else {
                    return Err(Error::Unsupported("no ensemble witness".into()));
                };
                if prior.iter().any(|&p| p <= ATTAINED_PRIOR) {
                    return Ok(v);
                }
                let e = Ensemble::new(states, Pmf::from_weights(prior)?)?;
                let game = QsbGame::constant(1.7, a, e)?;
                let ratio = qsb_value(&game, &m, a)? / uninformed_qsb_value(&game, a)?;
                v.push(Check::equal("remark2", i, Some(a), ratio, 1.0 + a.sgn() * rep.value, tol, s));
                Ok(v)
            };
            match run() {
                Ok(v) => out.extend(v),
                Err(e) => out.push(Check::failed("remark2", i, Some(a), s, &e)),
            }
        }
        out
    })
}

/// Faithfulness and monotonicity of the α-measure for a random, a projective and an
/// uninformative qubit measurement.
pub fn monotone_checks(cfg: &VerifyConfig, trials: usize) -> Vec<Check> {
    let mut rng = rng_from_seed(cfg.seed);
    let povms = [
        random_povm(&mut rng, 2, 3),
        Povm::computational(2).expect("basis"),
        Povm::uninformative(2, &Pmf::uniform(2).expect("uniform")).expect("uninformative"),
    ];
    let tol = cfg.tol(crate::resource::MONOTONE_TOL);
    let mut out = Vec::new();
    for (i, m) in povms.iter().enumerate() {
        let s = instance_seed(cfg.seed, i);
        match monotone_suite(m, trials, s) {
            Ok(rep) => {
                let mut faithful = Check::equal("result7.faithful", i, None, rep.faithful as u8 as f64, 1.0, 0.0, s);
                if !rep.faithful {
                    faithful.detail = rep.failures.first().cloned();
                }
                out.push(faithful);
                for c in rep.checks {
                    out.push(Check::at_most("result7.monotone", i, Some(c.alpha), c.simulated, c.original, tol, s));
                }
            }
            Err(e) => out.push(Check::failed("result7.monotone", i, None, s, &e)),
        }
    }
    out
}

const REGIMES: [&[f64]; 3] = [
    &[f64::NEG_INFINITY, -3.0, -1.0, -0.3, 0.0],
    &[0.0, 0.3, 0.7, 1.0],
    &[1.0, 1.5, 3.0, f64::INFINITY],
];

fn regime_order(a: f64) -> [CrdVariant; 3] {
    use CrdVariant::*;
    if a <= 0.0 {
        [Blp, Csiszar, Sibson]
    } else if a <= 1.0 {
        [Blp, Sibson, Csiszar]
    } else {
        [Csiszar, Blp, Sibson]
    }
}

fn positive_cond(rng: &mut rand_chacha::ChaCha8Rng, n: usize, k: usize) -> CondPmf {
    let rows = (0..n)
        .map(|_| {
            let r = random_pmf(rng, k).into_vec();
            r.into_iter().map(|v| v.max(1e-6)).collect()
        })
        .collect();
    CondPmf::from_weights(rows).expect("positive rows")
}

/// Orderings of the three conditional divergences on random triples, per order regime.
pub fn ordering_checks(cfg: &VerifyConfig, n: usize) -> Vec<Check> {
    let tol = cfg.tol(TOL_ORDERING);
    per_instance(n, |i| {
        let s = instance_seed(cfg.seed, i);
        let mut rng = rng_from_seed(s);
        let (nx, ng) = (2 + i % 3, 2 + (i / 3) % 3);
        let p = positive_cond(&mut rng, nx, ng);
        let q = positive_cond(&mut rng, nx, ng);
        let px = random_pmf(&mut rng, nx);
        let mut out = Vec::new();
        for regime in REGIMES {
            for &a in regime {
                let o = Order::new(a).expect("order");
                let [lo, mid, hi] = regime_order(a);
                let vals = [lo, mid, hi].map(|v| cond_renyi_div(v, &p, &q, &px, o));
                match vals {
                    [Ok(x), Ok(y), Ok(z)] => {
                        out.push(Check::at_most("lemma1", i, Some(o), x, y, tol, s));
                        out.push(Check::at_most("lemma1", i, Some(o), y, z, tol, s));
                    }
                    _ => {
                        let err = vals.into_iter().find_map(|v| v.err()).expect("one error");
                        out.push(Check::failed("lemma1", i, Some(o), s, &err));
                    }
                }
            }
        }
        out
    })
}

/// Orderings of the three mutual informations.
pub fn mi_ordering_checks(cfg: &VerifyConfig, n: usize) -> Vec<Check> {
    let tol = cfg.tol(TOL_ORDERING);
    per_instance(n, |i| {
        let s = instance_seed(cfg.seed, i);
        let mut rng = rng_from_seed(s);
        let (nx, ng) = (2 + i % 2, 2 + (i / 2) % 2);
        let j = JointPmf::from_prior_channel(&random_pmf(&mut rng, nx), &positive_cond(&mut rng, nx, ng)).expect("joint");
        let mut out = Vec::new();
        for regime in REGIMES {
            for &a in regime {
                let o = Order::new(a).expect("order");
                let [lo, mid, hi] = regime_order(a);
                let vals = [lo, mid, hi].map(|v| variant_mi(v, &j, o));
                match vals {
                    [Ok(x), Ok(y), Ok(z)] => {
                        out.push(Check::at_most("lemma2", i, Some(o), x, y, tol, s));
                        out.push(Check::at_most("lemma2", i, Some(o), y, z, tol, s));
                    }
                    _ => {
                        let err = vals.into_iter().find_map(|v| v.err()).expect("one error");
                        out.push(Check::failed("lemma2", i, Some(o), s, &err));
                    }
                }
            }
        }
        out
    })
}

/// Orders at which the two capacity maximisations are compared.
pub const CAPACITY_ORDERS: [f64; 9] = [f64::NEG_INFINITY, -2.0, -0.5, 0.0, 0.5, 1.0, 2.0, 5.0, f64::INFINITY];

/// Arimoto's and Sibson's maxima over the input simplex.
pub fn capacity_checks(cfg: &VerifyConfig) -> Vec<Check> {
    let tol = cfg.tol(TOL_SINGLE);
    per_instance(cfg.trials, |i| {
        let s = instance_seed(cfg.seed, i);
        let mut rng = rng_from_seed(s);
        let w = random_cond_pmf(&mut rng, 2 + i % 3, 2 + (i / 3) % 3);
        orders(&CAPACITY_ORDERS)
            .into_iter()
            .map(|a| match renyi_capacity_report(&w, a) {
                Ok(r) => Check::equal("lemma3", i, Some(a), r.arimoto_max, r.sibson_max, tol, s),
                Err(Error::OptimizerDidNotConverge { best_value, best_point, .. }) => {
                    let mut c = Check::failed("lemma3", i, Some(a), s, &Error::Unsupported("maxima disagree".into()));
                    c.detail = Some(format!("arimoto {best_value} at {best_point:?}"));
                    c
                }
                Err(e) => Check::failed("lemma3", i, Some(a), s, &e),
            })
            .collect()
    })
}

fn random_strategy(rng: &mut rand_chacha::ChaCha8Rng, dist: &Dist, nx: usize) -> Strategy {
    match dist {
        Dist::Marginal(_) => Strategy::Plain(random_pmf(rng, nx)),
        Dist::Joint(j) => Strategy::Conditional(random_cond_pmf(rng, j.ng(), nx)),
    }
}

/// Three-term decomposition of the log certainty equivalent, and the vanishing mismatch term
/// at the optimal strategy.
pub fn decomposition_checks(cfg: &VerifyConfig, n: usize) -> Vec<Check> {
    let tol = cfg.tol(TOL_DECOMPOSITION);
    let tol_mismatch = cfg.tol(TOL_MISMATCH);
    per_instance(n, |i| {
        let s = instance_seed(cfg.seed, i);
        let mut rng = rng_from_seed(s);
        let nx = 2 + i % 3;
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        let odds = Odds::new((0..nx).map(|_| sign * (1.0 + 4.0 * random_pmf(&mut rng, 2).probs()[0])).collect())
            .expect("odds");
        let dist = if (i / 2) % 2 == 0 {
            Dist::Marginal(random_pmf(&mut rng, nx))
        } else {
            Dist::Joint(random_joint(&mut rng, nx, 2))
        };
        let b = random_strategy(&mut rng, &dist, nx);
        let mut out = Vec::new();
        for &rv in &RISKS {
            let r = risk(rv);
            let a = r.order();
            let run = || -> Result<Vec<Check>> {
                let mut v = Vec::new();
                let t = blp_decomposition(&b, &odds, &dist, r)?;
                v.push(Check::equal("theorem.sum", i, Some(a), t.total(), log_ice(&b, &odds, &dist, r)?, tol, s));
                if sgn(rv) == sign {
                    let h = optimal_strategy(&odds, &dist, r)?;
                    let th = blp_decomposition(&h, &odds, &dist, r)?;
                    v.push(Check::equal("theorem.optimal_sum", i, Some(a), th.total(), log_ice(&h, &odds, &dist, r)?, tol, s));
                    v.push(Check::at_most("theorem.mismatch", i, Some(a), th.mismatch_term.abs(), 0.0, tol_mismatch, s));
                }
                Ok(v)
            };
            match run() {
                Ok(v) => out.extend(v),
                Err(e) => out.push(Check::failed("theorem", i, Some(a), s, &e)),
            }
        }
        out
    })
}

/// Best certainty equivalents with and without side information against Rényi probabilities.
pub fn lemma45_checks(cfg: &VerifyConfig) -> Vec<Check> {
    let tol = cfg.tol(TOL_EXACT);
    per_instance(cfg.trials, |i| {
        let s = instance_seed(cfg.seed, i);
        let mut rng = rng_from_seed(s);
        let j = random_joint(&mut rng, 2 + i % 3, 2 + (i / 3) % 2);
        let c = 1.3;
        let mut out = Vec::new();
        for a in orders(&ORDERS) {
            let run = || -> Result<(Check, Check)> {
                let r = a.risk()?;
                let odds = Odds::constant(j.nx(), a.sgn() * c)?;
                let m = Dist::Marginal(j.marginal_x());
                let jd = Dist::Joint(j.clone());
                let vm = ice(&optimal_strategy(&odds, &m, r)?, &odds, &m, r)?.value;
                let vj = ice(&optimal_strategy(&odds, &jd, r)?, &odds, &jd, r)?.value;
                Ok((
                    Check::equal("lemma4", i, Some(a), vm, a.sgn() * c * renyi_probability(&j.marginal_x(), a)?, tol, s),
                    Check::equal("lemma5", i, Some(a), vj, a.sgn() * c * cond_renyi_probability(&j, a)?, tol, s),
                ))
            };
            match run() {
                Ok((x, y)) => out.extend([x, y]),
                Err(e) => out.push(Check::failed("lemma45", i, Some(a), s, &e)),
            }
        }
        out
    })
}

/// `u_R(ICE) = E[u_R(w)]` for random strategies, and the closed form of Arimoto's information
/// against the betting ratio at `α = 1` on its own.
pub fn certainty_equivalent_checks(cfg: &VerifyConfig) -> Vec<Check> {
    let tol = cfg.tol(TOL_EXACT);
    per_instance(cfg.trials, |i| {
        let s = instance_seed(cfg.seed, i);
        let mut rng = rng_from_seed(s);
        let nx = 2 + i % 3;
        let p = random_pmf(&mut rng, nx);
        let b = random_pmf(&mut rng, nx);
        let odds = Odds::new((0..nx).map(|x| 1.0 + x as f64 + random_pmf(&mut rng, 2).probs()[0]).collect()).expect("odds");
        let mut out = Vec::new();
        for &rv in &RISKS {
            let r = risk(rv);
            let run = || -> Result<Check> {
                let dist = Dist::Marginal(p.clone());
                let v = ice(&Strategy::Plain(b.clone()), &odds, &dist, r)?.value;
                let expected: f64 = (0..nx)
                    .map(|x| Ok(p.probs()[x] * isoelastic_utility(b.probs()[x] * odds.values()[x], r)?))
                    .sum::<Result<f64>>()?;
                Ok(Check::equal("certainty_equivalent", i, Some(r.order()), isoelastic_utility(v, r)?, expected, tol * (1.0 + expected.abs()), s))
            };
            out.push(Check::from_result("certainty_equivalent", i, Some(r.order()), s, run()));
        }
        let j = random_joint(&mut rng, nx, 2);
        out.push(Check::equal("shannon", i, Some(Order::ONE), arimoto_mi(&j, Order::ONE).unwrap_or(f64::NAN), shannon_mi(&j), tol, s));
        out
    })
}
