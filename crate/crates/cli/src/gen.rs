use clap::{Args, ValueEnum};
use qbet_core::games::{FreeSet, GapInstance};
use qbet_core::random::{
    random_channel, random_cond_pmf, random_ensemble, random_joint, random_pmf, random_povm, random_state,
    random_state_set, rng_from_seed,
};
use qbet_core::prob::MAX_ALPHABET;
use qbet_core::{random_instance, InstanceCounts};
use serde_json::json;

use crate::io::{Emit, Format, Sink};
use crate::{CliError, RunArgs};

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum Kind {
    Pmf,
    Joint,
    Cond,
    State,
    States,
    Ensemble,
    Povm,
    Channel,
    /// Ensemble, POVM and channel on one seed.
    Instance,
    /// Measurement gap with two explicit free POVMs.
    GapInstance,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(value_enum)]
    kind: Kind,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Alphabet size of x (states, PMF entries, conditional rows).
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Number of outcomes g (POVM elements, conditional columns).
    #[arg(long, default_value_t = 3)]
    outcomes: usize,
    #[arg(long, default_value_t = 2)]
    kraus: usize,
}

pub fn random_gap_instance(seed: u64, d: usize) -> Result<GapInstance, CliError> {
    let (ensemble, povm, _) = random_instance(seed, d, InstanceCounts::default())?;
    let mut rng = rng_from_seed(seed ^ 0x5eed);
    let free = vec![random_povm(&mut rng, d, 2), random_povm(&mut rng, d, 3)];
    Ok(GapInstance::Measurement {
        ensemble,
        povm,
        free: FreeSet::ExplicitMeasurements(free),
    })
}

fn check(args: &GenArgs) -> Result<(), CliError> {
    if args.dim == 0 || args.dim > 8 || args.n == 0 || args.outcomes == 0 || args.kraus == 0 {
        return Err(CliError::Input("dimensions and counts must be positive, with --dim at most 8".into()));
    }
    if args.n > MAX_ALPHABET || args.outcomes > MAX_ALPHABET {
        return Err(CliError::Input(format!("--n and --outcomes are at most {MAX_ALPHABET}")));
    }
    Ok(())
}

pub fn run(args: &GenArgs, run: &RunArgs, sink: &mut Sink) -> Result<(), CliError> {
    check(args)?;
    if sink.format(Format::Json) == Format::Csv {
        return Err(CliError::Input("gen emits JSON only".into()));
    }
    let seed = run.seed()?;
    let mut rng = rng_from_seed(seed);
    let (d, n, k) = (args.dim, args.n, args.outcomes);
    let value = match args.kind {
        Kind::Pmf => json!(random_pmf(&mut rng, n)),
        Kind::Joint => json!(random_joint(&mut rng, n, k)),
        Kind::Cond => json!(random_cond_pmf(&mut rng, n, k)),
        Kind::State => json!(random_state(&mut rng, d)),
        Kind::States => json!(random_state_set(&mut rng, d, n)),
        Kind::Ensemble => json!(random_ensemble(&mut rng, d, n)),
        Kind::Povm => json!(random_povm(&mut rng, d, k)),
        Kind::Channel => json!(random_channel(&mut rng, d, d, args.kraus)),
        Kind::Instance => {
            let counts = InstanceCounts {
                states: n,
                outcomes: k,
                kraus: args.kraus,
            };
            let (e, m, ch) = random_instance(seed, d, counts)?;
            json!({ "ensemble": e, "povm": m, "channel": ch })
        }
        Kind::GapInstance => json!(random_gap_instance(seed, d)?),
    };
    sink.json(&value)
}
