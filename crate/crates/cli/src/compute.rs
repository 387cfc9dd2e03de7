use clap::{Args, ValueEnum};
use qbet_core::betting::{
    blp_decomposition, ice, log_ice, numeric_optimal_ice, optimal_strategy, Dist, Odds, Strategy,
};
use qbet_core::capacity::renyi_capacity_report;
use qbet_core::divergence::{cond_renyi_div, renyi_div, variant_mi, CrdVariant};
use qbet_core::entropy::{
    arimoto_cond_entropy, arimoto_mi, cond_renyi_probability, renyi_entropy, renyi_probability, shannon_mi,
};
use qbet_core::games::{
    arimoto_gap, arimoto_mi_quantum, discrimination_exclusion, max_noisy_arimoto_mi, nqsb_value, qsb_value,
    GapInstance, QsbGame,
};
use qbet_core::order::{Order, RiskParam};
use qbet_core::povm_opt::AscentOptions;
use qbet_core::prob::{CondPmf, JointPmf, Pmf};
use qbet_core::quantum::{born_cond_pmf, is_uninformative, Ensemble, KrausChannel, Povm, StateSet};
use qbet_core::resource::{
    alpha_measure_report, informativeness_certificate, monotone_suite, robustness_informativeness,
    weight_informativeness, EnsembleSearch, MINIMAX_TOL,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::io::{load, number, Emit, Format, Sink};
use crate::{CliError, RunArgs};

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    RenyiEntropy,
    RenyiProbability,
    ArimotoCondEntropy,
    CondRenyiProbability,
    ArimotoMi,
    ShannonMi,
    RenyiDiv,
    CondRenyiDiv,
    VariantMi,
    Capacity,
    Ice,
    LogIce,
    OptimalIce,
    NumericIce,
    Decomposition,
    QsbValue,
    NqsbValue,
    NoisyArimotoMi,
    Discrimination,
    Born,
    IsUninformative,
    Robustness,
    Weight,
    Informativeness,
    AlphaMeasure,
    MonotoneSuite,
    ArimotoGap,
}

#[derive(Args, Debug)]
pub struct ComputeArgs {
    #[arg(value_enum)]
    quantity: Quantity,
    /// PMF as JSON (inline or a path). Also the prior p_X of conditional divergences.
    #[arg(long)]
    pmf: Option<String>,
    /// Second PMF (reference of a divergence).
    #[arg(long)]
    q: Option<String>,
    #[arg(long)]
    joint: Option<String>,
    /// Conditional p(g|x), rows indexed by x.
    #[arg(long)]
    cond: Option<String>,
    /// Reference conditional q(g|x).
    #[arg(long)]
    cond_q: Option<String>,
    /// sibson, csiszar or blp.
    #[arg(long, value_parser = parse_variant)]
    variant: Option<CrdVariant>,
    #[arg(long)]
    odds: Option<String>,
    /// Strategy b(x), or b(x|g) with rows indexed by g.
    #[arg(long)]
    strategy: Option<String>,
    #[arg(long)]
    ensemble: Option<String>,
    #[arg(long)]
    povm: Option<String>,
    #[arg(long)]
    states: Option<String>,
    #[arg(long)]
    channel: Option<String>,
    /// Gap instance JSON.
    #[arg(long)]
    instance: Option<String>,
    /// Odds magnitude of constant-odds games.
    #[arg(long, default_value_t = 1.0)]
    c: f64,
}

fn parse_variant(s: &str) -> Result<CrdVariant, String> {
    s.parse().map_err(|e: qbet_core::Error| e.to_string())
}

#[derive(Debug, Serialize)]
struct Record {
    quantity: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<Order>,
    #[serde(skip_serializing_if = "Option::is_none")]
    risk: Option<RiskParam>,
    value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Value>,
}

fn need<T: serde::de::DeserializeOwned>(arg: &Option<String>, flag: &str) -> Result<T, CliError> {
    match arg {
        Some(s) => load(s),
        None => Err(CliError::Input(format!("missing --{flag}"))),
    }
}

fn dist(args: &ComputeArgs) -> Result<Dist, CliError> {
    match (&args.pmf, &args.joint) {
        (Some(p), None) => Ok(Dist::Marginal(load(p)?)),
        (None, Some(j)) => Ok(Dist::Joint(load(j)?)),
        _ => Err(CliError::Input("give exactly one of --pmf and --joint".into())),
    }
}

fn witness<T: Serialize>(v: &T) -> Option<Value> {
    serde_json::to_value(v).ok()
}

fn ascent(run: &RunArgs) -> AscentOptions {
    AscentOptions {
        seed: run.seed.unwrap_or(0),
        ..Default::default()
    }
}

fn per_order(
    args: &ComputeArgs,
    run: &RunArgs,
    f: impl Fn(Order) -> Result<(Option<f64>, Option<Value>), CliError>,
) -> Result<Vec<Record>, CliError> {
    let orders = run.orders()?;
    if orders.is_empty() {
        return Err(CliError::Input("give at least one --alpha or --risk".into()));
    }
    orders
        .into_iter()
        .map(|a| {
            let (value, witness) = f(a)?;
            Ok(Record {
                quantity: name(args.quantity),
                alpha: Some(a),
                risk: a.risk().ok(),
                value,
                witness,
            })
        })
        .collect()
}

fn per_risk(
    args: &ComputeArgs,
    run: &RunArgs,
    f: impl Fn(RiskParam) -> Result<(Option<f64>, Option<Value>), CliError>,
) -> Result<Vec<Record>, CliError> {
    let risks: Vec<RiskParam> = if run.risks.is_empty() {
        run.alphas.iter().map(|a| a.risk()).collect::<Result<_, _>>()?
    } else {
        run.risks.clone()
    };
    if risks.is_empty() {
        return Err(CliError::Input("give at least one --risk or --alpha".into()));
    }
    risks
        .into_iter()
        .map(|r| {
            let (value, witness) = f(r)?;
            Ok(Record {
                quantity: name(args.quantity),
                alpha: Some(r.order()),
                risk: Some(r),
                value,
                witness,
            })
        })
        .collect()
}

fn single(args: &ComputeArgs, value: Option<f64>, witness: Option<Value>) -> Vec<Record> {
    vec![Record {
        quantity: name(args.quantity),
        alpha: None,
        risk: None,
        value,
        witness,
    }]
}

fn name(q: Quantity) -> String {
    q.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default()
}

fn value(v: f64) -> Result<(Option<f64>, Option<Value>), CliError> {
    Ok((Some(v), None))
}

fn records(args: &ComputeArgs, run: &RunArgs) -> Result<Vec<Record>, CliError> {
    use Quantity::*;
    Ok(match args.quantity {
        RenyiEntropy => {
            let p: Pmf = need(&args.pmf, "pmf")?;
            per_order(args, run, |a| value(renyi_entropy(&p, a)?))?
        }
        RenyiProbability => {
            let p: Pmf = need(&args.pmf, "pmf")?;
            per_order(args, run, |a| value(renyi_probability(&p, a)?))?
        }
        ArimotoCondEntropy => {
            let j: JointPmf = need(&args.joint, "joint")?;
            per_order(args, run, |a| value(arimoto_cond_entropy(&j, a)?))?
        }
        CondRenyiProbability => {
            let j: JointPmf = need(&args.joint, "joint")?;
            per_order(args, run, |a| value(cond_renyi_probability(&j, a)?))?
        }
        ArimotoMi => match (&args.joint, &args.ensemble, &args.povm) {
            (Some(j), None, None) => {
                let j: JointPmf = load(j)?;
                per_order(args, run, |a| value(arimoto_mi(&j, a)?))?
            }
            (None, Some(e), Some(m)) => {
                let (e, m): (Ensemble, Povm) = (load(e)?, load(m)?);
                per_order(args, run, |a| value(arimoto_mi_quantum(&e, &m, a)?))?
            }
            _ => return Err(CliError::Input("give --joint, or --ensemble with --povm".into())),
        },
        ShannonMi => {
            let j: JointPmf = need(&args.joint, "joint")?;
            single(args, Some(shannon_mi(&j)), None)
        }
        RenyiDiv => {
            let (p, q): (Pmf, Pmf) = (need(&args.pmf, "pmf")?, need(&args.q, "q")?);
            per_order(args, run, |a| value(renyi_div(&p, &q, a)?))?
        }
        CondRenyiDiv => {
            let v = args.variant.ok_or_else(|| CliError::Input("missing --variant".into()))?;
            let (p, q, px): (CondPmf, CondPmf, Pmf) =
                (need(&args.cond, "cond")?, need(&args.cond_q, "cond-q")?, need(&args.pmf, "pmf")?);
            per_order(args, run, |a| value(cond_renyi_div(v, &p, &q, &px, a)?))?
        }
        VariantMi => {
            let v = args.variant.ok_or_else(|| CliError::Input("missing --variant".into()))?;
            let j: JointPmf = need(&args.joint, "joint")?;
            per_order(args, run, |a| value(variant_mi(v, &j, a)?))?
        }
        Capacity => {
            let w: CondPmf = need(&args.cond, "cond")?;
            per_order(args, run, |a| {
                let r = renyi_capacity_report(&w, a)?;
                Ok((Some(r.value), witness(&r)))
            })?
        }
        Ice | LogIce | Decomposition => {
            let d = dist(args)?;
            let odds: Odds = need(&args.odds, "odds")?;
            let b: Strategy = need(&args.strategy, "strategy")?;
            per_risk(args, run, |r| match args.quantity {
                Ice => {
                    let v = ice(&b, &odds, &d, r)?;
                    Ok((Some(v.value), witness(&v)))
                }
                LogIce => value(log_ice(&b, &odds, &d, r)?),
                _ => {
                    let t = blp_decomposition(&b, &odds, &d, r)?;
                    Ok((Some(t.total()), witness(&t)))
                }
            })?
        }
        OptimalIce | NumericIce => {
            let d = dist(args)?;
            let odds: Odds = need(&args.odds, "odds")?;
            per_risk(args, run, |r| {
                let (v, b) = if args.quantity == OptimalIce {
                    let b = optimal_strategy(&odds, &d, r)?;
                    (ice(&b, &odds, &d, r)?.value, b)
                } else {
                    numeric_optimal_ice(&odds, &d, r)?
                };
                Ok((Some(v), witness(&b)))
            })?
        }
        QsbValue | NqsbValue => {
            let (e, m): (Ensemble, Povm) = (need(&args.ensemble, "ensemble")?, need(&args.povm, "povm")?);
            let ch: Option<KrausChannel> = match &args.channel {
                Some(c) => Some(load(c)?),
                None if args.quantity == NqsbValue => return Err(CliError::Input("missing --channel".into())),
                None => None,
            };
            per_order(args, run, |a| {
                let game = QsbGame::constant(args.c, a, e.clone())?;
                match &ch {
                    Some(n) => value(nqsb_value(&game, &m, n, a)?),
                    None => value(qsb_value(&game, &m, a)?),
                }
            })?
        }
        NoisyArimotoMi => {
            let (e, n): (Ensemble, KrausChannel) =
                (need(&args.ensemble, "ensemble")?, need(&args.channel, "channel")?);
            let opts = ascent(run);
            per_order(args, run, |a| {
                let r = max_noisy_arimoto_mi(&e, &n, a, &opts)?;
                Ok((Some(r.value), witness(&r.povm)))
            })?
        }
        Discrimination => {
            let j = match (&args.joint, &args.ensemble, &args.povm) {
                (Some(j), None, None) => load(j)?,
                (None, Some(e), Some(m)) => load::<Ensemble>(e)?.joint(&load(m)?)?,
                _ => return Err(CliError::Input("give --joint, or --ensemble with --povm".into())),
            };
            let (succ, err) = discrimination_exclusion(&j);
            single(args, Some(succ), Some(json!({ "success": succ, "exclusion_error": err })))
        }
        Born => {
            let (m, s): (Povm, StateSet) = (need(&args.povm, "povm")?, need(&args.states, "states")?);
            single(args, None, witness(&born_cond_pmf(&m, &s)?))
        }
        IsUninformative => {
            let m: Povm = need(&args.povm, "povm")?;
            let (yes, q) = is_uninformative(&m, run.tol.unwrap_or(MINIMAX_TOL));
            single(args, Some(yes as u8 as f64), witness(&q))
        }
        Robustness => {
            let m: Povm = need(&args.povm, "povm")?;
            let r = alpha_measure_report(&m, Order::INF, &EnsembleSearch::default(), &[])?;
            single(args, Some(robustness_informativeness(&m)), witness(&r.achiever))
        }
        Weight => {
            let m: Povm = need(&args.povm, "povm")?;
            let r = alpha_measure_report(&m, Order::NEG_INF, &EnsembleSearch::default(), &[])?;
            single(args, Some(weight_informativeness(&m)), witness(&r.achiever))
        }
        Informativeness => {
            let (m, s): (Povm, StateSet) = (need(&args.povm, "povm")?, need(&args.states, "states")?);
            per_order(args, run, |a| {
                let c = informativeness_certificate(&m, &s, a)?;
                if (c.min_max - c.max_min).abs() > MINIMAX_TOL {
                    return Err(qbet_core::Error::MinimaxGapExceeded {
                        min_max: c.min_max,
                        max_min: c.max_min,
                    }
                    .into());
                }
                Ok((Some(c.max_min), witness(&c)))
            })?
        }
        AlphaMeasure => {
            let m: Povm = need(&args.povm, "povm")?;
            let opts = EnsembleSearch {
                seed: run.seed.unwrap_or(0),
                ..Default::default()
            };
            per_order(args, run, |a| {
                let r = alpha_measure_report(&m, a, &opts, &[])?;
                Ok((Some(r.value), witness(&r)))
            })?
        }
        MonotoneSuite => {
            let m: Povm = need(&args.povm, "povm")?;
            let r = monotone_suite(&m, run.trials.unwrap_or(10), run.seed()?)?;
            single(args, Some(r.pass as u8 as f64), witness(&r))
        }
        ArimotoGap => {
            let inst: GapInstance = need(&args.instance, "instance")?;
            let opts = ascent(run);
            per_order(args, run, |a| value(arimoto_gap(&inst, a, &opts)?))?
        }
    })
}

pub fn run(args: &ComputeArgs, run: &RunArgs, sink: &mut Sink) -> Result<(), CliError> {
    let recs = records(args, run)?;
    match sink.format(Format::Json) {
        Format::Json => {
            if recs.len() == 1 {
                sink.json(&recs[0])
            } else {
                sink.json(&recs)
            }
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = recs
                .iter()
                .map(|r| {
                    vec![
                        r.quantity.clone(),
                        r.alpha.map(|a| number(a.value())).unwrap_or_default(),
                        r.risk.map(|x| number(x.value())).unwrap_or_default(),
                        r.value.map(number).unwrap_or_default(),
                    ]
                })
                .collect();
            sink.csv(&["quantity", "alpha", "risk", "value"], &rows)
        }
    }
}
