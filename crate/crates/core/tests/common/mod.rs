#![allow(dead_code)]

use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use equal_superposition::coins::BalancedCoin;
use equal_superposition::linalg::{CMatrix, Complex};
use equal_superposition::walk::InitialCoinState;
use rand::Rng;

pub fn random_balanced<R: Rng>(rng: &mut R) -> BalancedCoin {
    let alpha = Complex::from_polar(FRAC_1_SQRT_2, rng.random_range(0.0..TAU));
    let gamma = Complex::from_polar(FRAC_1_SQRT_2, rng.random_range(0.0..TAU));
    BalancedCoin::new(alpha, gamma, rng.random_range(0.0..TAU)).unwrap()
}

/// Position distribution after `steps` steps computed with full dense matrices.
///
/// Coin-major ordering `|c> ⊗ |z>` on a ring of `2T + 1` sites, which the
/// walker cannot wrap around in `T` steps.
pub fn dense_distribution(coin: &CMatrix, initial: InitialCoinState, steps: usize) -> Vec<f64> {
    let sites = 2 * steps + 1;
    let n = 2 * sites;
    let origin = steps;
    let mut shift = CMatrix::zeros(n, n);
    for z in 0..sites {
        shift[((z + 1) % sites, z)] = Complex::new(1.0, 0.0);
        shift[(sites + (z + sites - 1) % sites, sites + z)] = Complex::new(1.0, 0.0);
    }
    let step = &shift * &coin.kron(&CMatrix::identity(sites));
    let mut psi = vec![Complex::new(0.0, 0.0); n];
    psi[origin] = initial.up();
    psi[sites + origin] = initial.down();
    let mut v = equal_superposition::linalg::CVector::new(psi).unwrap();
    for _ in 0..steps {
        v = step.apply(&v).unwrap();
    }
    (0..sites).map(|z| v[z].norm_sqr() + v[sites + z].norm_sqr()).collect()
}
