//! Fixtures shared by the criterion benchmarks.

use mdfiha::eval::{scaling_constants, ScalingConstants};
use mdfiha::genetic::initial_solution;
use mdfiha::model::{Instance, Solution, Variant};
use mdfiha::neighborhood::{NeighborConfig, NeighborLists};
use mdfiha::synth::random_instance;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub struct Fixture {
    pub inst: Instance,
    pub consts: ScalingConstants,
    pub nbr: NeighborLists,
    /// Constructive starting solution.
    pub sol: Solution,
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fixture(variant: Variant, depots: usize, customers: usize, seed: u64) -> Fixture {
    let mut rng = rng(seed);
    let inst = random_instance(variant, depots, customers, &mut rng);
    let consts = scaling_constants(&inst).expect("synthetic instances are valid");
    let nbr = NeighborLists::build(
        &inst,
        &NeighborConfig {
            theta: 20,
            ..Default::default()
        },
        &consts,
    );
    let sol = initial_solution(&inst, &consts, &mut rng);
    Fixture { inst, consts, nbr, sol }
}

pub const VARIANTS: [Variant; 3] = [Variant::Mdvrp, Variant::Mdvrptw, Variant::Mdovrp];
