//! Seeded generators of random probability and quantum objects.
//!
//! States are normalised Wishart samples `GG†/tr[GG†]`, POVMs normalise random PSD tuples
//! by `S^{-1/2} A_g S^{-1/2}`, and channels truncate a random isometry into Kraus blocks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{c, polar_isometry, CMat};
use crate::prob::{CondPmf, JointPmf, Pmf};
use crate::quantum::{DensityMatrix, Ensemble, KrausChannel, Povm, StateSet};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        c(re, im)
    })
}

/// Dirichlet(1,…,1) sample, i.e. uniform on the simplex.
///
/// Panics unless `1 <= n <= MAX_ALPHABET`.
pub fn random_pmf<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Pmf {
    loop {
        let w: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
        match Pmf::from_weights(w) {
            Ok(p) => return p,
            Err(Error::DegenerateDistribution(_)) => continue,
            Err(e) => panic!("random_pmf({n}): {e}"),
        }
    }
}

pub fn random_cond_pmf<R: Rng + ?Sized>(rng: &mut R, n_in: usize, n_out: usize) -> CondPmf {
    let rows = (0..n_in).map(|_| random_pmf(rng, n_out).into_vec()).collect();
    CondPmf::new(rows).expect("rows are normalised")
}

pub fn random_joint<R: Rng + ?Sized>(rng: &mut R, nx: usize, ng: usize) -> JointPmf {
    let w: Vec<f64> = (0..nx * ng).map(|_| Exp1.sample(rng)).collect();
    let s: f64 = w.iter().sum();
    JointPmf::new(w.chunks(ng).map(|r| r.iter().map(|v| v / s).collect()).collect()).expect("normalised")
}

/// Haar-random unitary.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, d: usize) -> CMat {
    polar_isometry(&ginibre(rng, d, d))
}

/// Haar-random pure state.
pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R, d: usize) -> DensityMatrix {
    let g = ginibre(rng, d, 1);
    let v: Vec<_> = g.iter().cloned().collect();
    DensityMatrix::pure(&v).expect("nonzero Gaussian vector")
}

/// Normalised Wishart state `GG†/tr[GG†]` with a `d×d` Ginibre factor.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, d: usize) -> DensityMatrix {
    let g = ginibre(rng, d, d);
    let w = &g * g.adjoint();
    let t: f64 = (0..d).map(|i| w[(i, i)].re).sum();
    DensityMatrix::new(w * c(1.0 / t, 0.0)).expect("Wishart sample is a state")
}

pub fn random_state_set<R: Rng + ?Sized>(rng: &mut R, d: usize, n: usize) -> StateSet {
    StateSet::new((0..n).map(|_| random_state(rng, d)).collect()).expect("common dimension")
}

pub fn random_ensemble<R: Rng + ?Sized>(rng: &mut R, d: usize, n: usize) -> Ensemble {
    let s = random_state_set(rng, d, n);
    Ensemble::new(s, random_pmf(rng, n)).expect("matching lengths")
}

/// Random POVM with `k` outcomes.
pub fn random_povm<R: Rng + ?Sized>(rng: &mut R, d: usize, k: usize) -> Povm {
    loop {
        let ops = (0..k)
            .map(|_| {
                let g = ginibre(rng, d, d);
                &g * g.adjoint()
            })
            .collect();
        if let Ok(p) = Povm::from_unnormalized(ops) {
            return p;
        }
    }
}

/// Random CPTP map with `n_kraus` operators from a truncated random isometry.
pub fn random_channel<R: Rng + ?Sized>(
    rng: &mut R,
    d_in: usize,
    d_out: usize,
    n_kraus: usize,
) -> KrausChannel {
    let n_kraus = n_kraus.max(d_in.div_ceil(d_out));
    let v = polar_isometry(&ginibre(rng, n_kraus * d_out, d_in));
    let kraus = (0..n_kraus)
        .map(|i| v.rows(i * d_out, d_out).into_owned())
        .collect();
    KrausChannel::new(kraus).expect("isometry blocks form a channel")
}

/// Column-stochastic mixing used as a random classical post-processing.
pub fn random_post_processing<R: Rng + ?Sized>(rng: &mut R, n_in: usize, n_out: usize) -> CondPmf {
    random_cond_pmf(rng, n_in, n_out)
}

/// Sizes of a random instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InstanceCounts {
    pub states: usize,
    pub outcomes: usize,
    pub kraus: usize,
}

impl Default for InstanceCounts {
    fn default() -> Self {
        InstanceCounts {
            states: 3,
            outcomes: 3,
            kraus: 2,
        }
    }
}

/// Deterministic `(ensemble, POVM, channel)` triple on dimension `d ≤ 4` with counts `≤ 6`.
pub fn random_instance(
    seed: u64,
    d: usize,
    counts: InstanceCounts,
) -> Result<(Ensemble, Povm, KrausChannel)> {
    if d == 0 || d > 4 {
        return Err(Error::InvalidQuantumObject(format!("dimension {d} outside 1..=4")));
    }
    for (name, n) in [
        ("states", counts.states),
        ("outcomes", counts.outcomes),
        ("kraus", counts.kraus),
    ] {
        if n == 0 || n > 6 {
            return Err(Error::InvalidQuantumObject(format!("{name} count {n} outside 1..=6")));
        }
    }
    let mut rng = rng_from_seed(seed);
    let e = random_ensemble(&mut rng, d, counts.states);
    let m = random_povm(&mut rng, d, counts.outcomes);
    let n = random_channel(&mut rng, d, d, counts.kraus);
    Ok((e, m, n))
}
