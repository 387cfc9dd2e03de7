//! Fixed inputs shared by the criterion benchmarks.

use qbet_core::random::{random_cond_pmf, random_joint, random_pmf, random_povm, rng_from_seed};
use qbet_core::{CondPmf, Dist, JointPmf, Odds, Pmf, Povm};

pub const SEED: u64 = 7;

pub fn pmf(n: usize) -> Pmf {
    random_pmf(&mut rng_from_seed(SEED), n)
}

pub fn channel(n_in: usize, n_out: usize) -> CondPmf {
    random_cond_pmf(&mut rng_from_seed(SEED), n_in, n_out)
}

pub fn joint(nx: usize, ng: usize) -> JointPmf {
    random_joint(&mut rng_from_seed(SEED), nx, ng)
}

pub fn povm(d: usize, k: usize) -> Povm {
    random_povm(&mut rng_from_seed(SEED), d, k)
}

/// Fair-ish odds and a joint distribution for the strategy optimiser.
pub fn betting_game(nx: usize, ng: usize) -> (Odds, Dist) {
    let odds = Odds::new((0..nx).map(|i| nx as f64 * (1.0 + 0.1 * i as f64)).collect())
        .expect("positive odds");
    (odds, Dist::Joint(joint(nx, ng)))
}
