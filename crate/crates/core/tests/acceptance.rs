use std::time::{Duration, Instant};

use qbet_core::random::{random_instance, InstanceCounts};
use qbet_core::sweep::{
    curvature, expected_curvature, gain_loss_flip, ice_vs_alpha, isoelastic_sweep, utility_column, ALPHA_GRID,
    UTILITY_RISKS,
};
use qbet_core::verify::{
    capacity_checks, certainty_equivalent_checks, corollary_checks, decomposition_checks, extreme_measure_checks,
    lemma45_checks, mi_ordering_checks, monotone_checks, ordering_checks, remark_checks, result1_checks,
    result2_checks, result3_checks, result4_checks, result5_checks, result6_checks, Check, VerifyConfig,
};

const SEED: u64 = 20_240_917;

struct Outcome {
    pass: bool,
    line: String,
}

fn criterion(id: usize, name: &str, budget: Duration, run: impl FnOnce() -> Vec<Check>) -> Outcome {
    let t0 = Instant::now();
    let checks = run();
    let elapsed = t0.elapsed();
    let failed: Vec<&Check> = checks.iter().filter(|c| !c.pass).collect();
    let worst = checks
        .iter()
        .filter(|c| c.tol > 0.0)
        .map(|c| c.abs_err / c.tol)
        .fold(0.0, f64::max);
    let in_time = elapsed <= budget;
    let pass = !checks.is_empty() && failed.is_empty() && in_time;
    let mut line = format!(
        "{} criterion {id:>2} {name}: checks={} failed={} worst_err/tol={worst:.2e} time={:.1}s budget={}s",
        if pass { "PASS" } else { "FAIL" },
        checks.len(),
        failed.len(),
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
    for c in failed.iter().take(5) {
        line.push_str(&format!(
            "\n      {} instance={} alpha={:?} lhs={} rhs={} err={:e} tol={:e} seed={} {}",
            c.name,
            c.instance,
            c.alpha.map(|a| a.value()),
            c.lhs,
            c.rhs,
            c.abs_err,
            c.tol,
            c.seed,
            c.detail.clone().unwrap_or_default()
        ));
    }
    if !in_time {
        line.push_str("\n      over the runtime budget");
    }
    Outcome { pass, line }
}

fn flag(name: &str, ok: bool) -> Check {
    Check::equal(name, 0, None, ok as u8 as f64, 1.0, 0.0, SEED)
}

fn sweep_checks() -> Vec<Check> {
    let mut out = Vec::new();
    match isoelastic_sweep(&UTILITY_RISKS, 1.0, 3.0, 65) {
        Ok(t) => {
            for &r in &UTILITY_RISKS {
                let col = t.column(&utility_column(r)).unwrap_or_default();
                out.push(flag(&format!("utility_curvature[R={r}]"), curvature(&col) == expected_curvature(r)));
            }
        }
        Err(_) => out.push(flag("utility_sweep", false)),
    }
    let flip = random_instance(SEED, 2, InstanceCounts::default())
        .and_then(|(e, m, _)| ice_vs_alpha(&e, &m, &ALPHA_GRID, 2.0));
    out.push(flag("gain_loss_flip", flip.map(|t| gain_loss_flip(&t)).unwrap_or(false)));
    out
}

fn main() {
    let cfg = |trials| VerifyConfig::new(SEED, trials);
    let secs = Duration::from_secs;
    let outcomes = vec![
        criterion(1, "arimoto information equals log betting ratio", secs(60), || {
            result1_checks(&cfg(50))
        }),
        criterion(2, "discrimination and exclusion limits", secs(10), || corollary_checks(&cfg(50))),
        criterion(3, "conditional divergence and information orderings", secs(30), || {
            let mut c = ordering_checks(&cfg(0), 500);
            c.extend(mi_ordering_checks(&cfg(0), 500));
            c
        }),
        criterion(4, "arimoto and sibson capacities agree", secs(120), || capacity_checks(&cfg(50))),
        criterion(5, "log certainty equivalent decomposition", secs(20), || {
            let mut c = decomposition_checks(&cfg(0), 500);
            c.extend(lemma45_checks(&cfg(100)));
            c.extend(certainty_equivalent_checks(&cfg(100)));
            c
        }),
        criterion(6, "classical side information advantage", secs(20), || result5_checks(&cfg(100))),
        criterion(7, "informativeness equals capacity with zero minimax gap", secs(180), || {
            result6_checks(&cfg(30))
        }),
        criterion(8, "informativeness extremes and monotonicity", secs(300), || {
            let mut c = extreme_measure_checks(&cfg(0), 500);
            c.extend(remark_checks(&cfg(0), 10));
            c.extend(monotone_checks(&cfg(0), 100));
            c
        }),
        criterion(9, "arimoto gaps against free-set betting advantages", secs(300), || {
            let mut c = result2_checks(&cfg(20));
            c.extend(result3_checks(&cfg(20)));
            c.extend(result4_checks(&cfg(20)));
            c
        }),
        criterion(10, "utility curvature and gain/loss flip sweeps", secs(5), sweep_checks),
    ];
    for o in &outcomes {
        println!("{}", o.line);
    }
    let failed = outcomes.iter().filter(|o| !o.pass).count();
    println!("{} of {} criteria passed", outcomes.len() - failed, outcomes.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
