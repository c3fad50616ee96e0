use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};
use rand_pcg::Pcg32;

/// The generator behind every seeded draw in this workspace.
pub type Rng64 = Pcg32;

pub fn seeded_rng(seed: u64) -> Rng64 {
    Pcg32::seed_from_u64(seed)
}

pub fn standard_normal(rng: &mut Rng64) -> f64 {
    StandardNormal.sample(rng)
}
