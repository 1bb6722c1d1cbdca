//! Fixtures shared by the benchmarks.

use hilab::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const E2: SymmetricSpaceModel = SymmetricSpaceModel::Euclidean(2);

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn euclidean_area() -> GroupCochain {
    j_map(&InvariantForm::euclidean_volume(2), E2, &QuadratureRule::new(2, 1).unwrap()).unwrap()
}

pub fn hyperbolic_area(order: usize) -> GroupCochain {
    let q = QuadratureRule::new(2, order).unwrap();
    j_map(&InvariantForm::hyperbolic_area(), SymmetricSpaceModel::HyperbolicPlane, &q).unwrap()
}

/// Random element supported within two lattice steps of the origin.
pub fn near(l: LatticeGroup, sites: usize, rng: &mut ChaCha8Rng) -> ConvElement {
    let mut f = ConvElement::zero(l);
    for _ in 0..sites {
        let m: Vec<i64> = (0..l.dim()).map(|_| rng.gen_range(-2..=2)).collect();
        f.set(&m, f.get(&m) + rng.gen_range(-1.0..1.0)).unwrap();
    }
    f
}

/// Gaussian truncated to the inner half of the box, so products stay inside.
pub fn gaussian(l: LatticeGroup, width: f64) -> ConvElement {
    let half = (l.radius() / 2) as f64 * l.spacing() + 1e-9;
    ConvElement::from_fn(l, |x| {
        if x[0].abs() > half || x[1].abs() > half {
            0.0
        } else {
            (-(x[0] * x[0] + x[1] * x[1]) / (2.0 * width * width)).exp()
        }
    })
}
