use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{Instance, InstanceError};

/// Uniform integer ranges `[1, max]` for processing times, rates and slot
/// prices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorParams {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub p_max: u32,
    pub u_max: u32,
    pub c_max: u32,
    pub seed: u64,
}

impl GeneratorParams {
    pub const DEFAULT_P_MAX: u32 = 12;
    pub const DEFAULT_U_MAX: u32 = 6;
    pub const DEFAULT_C_MAX: u32 = 8;

    pub fn new(n: usize, m: usize, k: usize, seed: u64) -> Self {
        Self {
            n,
            m,
            k,
            p_max: Self::DEFAULT_P_MAX,
            u_max: Self::DEFAULT_U_MAX,
            c_max: Self::DEFAULT_C_MAX,
            seed,
        }
    }
}

/// Draws all processing times, then all rates, then all slot prices from
/// one ChaCha8 stream seeded with `params.seed`.
pub fn generate_instance(params: &GeneratorParams) -> Result<Instance, InstanceError> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let p: Vec<usize> = (0..params.n)
        .map(|_| rng.gen_range(1..=params.p_max.max(1)) as usize)
        .collect();
    let u: Vec<f64> = (0..params.m)
        .map(|_| f64::from(rng.gen_range(1..=params.u_max.max(1))))
        .collect();
    let c: Vec<f64> = (0..params.k)
        .map(|_| f64::from(rng.gen_range(1..=params.c_max.max(1))))
        .collect();
    Instance::new(p, u, c)
}
