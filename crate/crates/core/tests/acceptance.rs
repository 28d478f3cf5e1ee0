//! Acceptance criteria. Run with `cargo test --test acceptance -- --nocapture`
//! to see the verdict line of every criterion.

mod common;

use std::f64::consts::FRAC_1_SQRT_2;
use std::time::{Duration, Instant};

use equal_superposition::coins::{BalancedCoin, UnbalancedCoin};
use equal_superposition::ensemble::{
    apply_and_verify, real_coordinate_grid, sample_ensemble, satisfies_constraint, EnsembleState,
};
use equal_superposition::linalg::Complex;
use equal_superposition::nonlocal::{locc_pair, signalling_test};
use equal_superposition::walk::{asymmetry_witness, classical_reference, run, Distribution, InitialCoinState};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{dense_distribution, random_balanced};

const TOL: f64 = 1e-12;

fn verdict(id: u32, name: &str, passed: bool, detail: String) {
    println!("[{}] criterion {id:>2}: {name}: {detail}", if passed { "PASS" } else { "FAIL" });
    assert!(passed, "criterion {id} ({name}) failed: {detail}");
}

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

fn hadamard_reference(steps: usize) -> Vec<(i64, f64)> {
    match steps {
        1 => vec![(1, 0.5), (-1, 0.5)],
        2 => vec![(2, 0.25), (0, 0.5), (-2, 0.25)],
        3 => vec![(3, 0.125), (1, 0.625), (-1, 0.125), (-3, 0.125)],
        4 => vec![(4, 0.0625), (2, 0.625), (0, 0.125), (-2, 0.125), (-4, 0.0625)],
        _ => unreachable!(),
    }
}

/// Largest deviation from `expected`, which must list every site of nonzero mass.
fn deviation(d: &Distribution, expected: &[(i64, f64)]) -> f64 {
    let t = d.steps() as i64;
    (-t..=t)
        .map(|z| {
            let e = expected.iter().find(|(k, _)| *k == z).map_or(0.0, |(_, p)| *p);
            (d.get(z) - e).abs()
        })
        .fold(0.0, f64::max)
}

#[test]
fn criterion_01_hadamard_regression() {
    let coin = BalancedCoin::hadamard().matrix();
    let mut worst = 0.0f64;
    let mut best = Duration::MAX;
    for _ in 0..5 {
        let start = Instant::now();
        let dists: Vec<Distribution> = (1..=4)
            .map(|t| run(InitialCoinState::up_state(), &coin, t).unwrap())
            .collect();
        best = best.min(start.elapsed());
        for (t, d) in (1..=4).zip(&dists) {
            worst = worst.max(deviation(d, &hadamard_reference(t)));
        }
    }
    verdict(
        1,
        "Hadamard walk T=1..4",
        worst < TOL && best < Duration::from_millis(1),
        format!("max deviation {worst:.2e}, runtime {best:?} (best of 5)"),
    );
}

#[test]
fn criterion_02_coin_universality() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let coin = random_balanced(&mut rng).matrix();
        for t in 1..=4 {
            let d = run(InitialCoinState::up_state(), &coin, t).unwrap();
            worst = worst.max(deviation(&d, &hadamard_reference(t)));
        }
    }
    verdict(
        2,
        "100 random balanced coins reproduce the Hadamard distributions",
        worst < TOL,
        format!("max deviation {worst:.2e}"),
    );
}

#[test]
fn criterion_03_asymmetry_witness() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut coins = vec![BalancedCoin::hadamard(), BalancedCoin::invariant(), BalancedCoin::hybrid()];
    coins.extend((0..200).map(|_| random_balanced(&mut rng)));
    let worst = coins
        .iter()
        .map(|coin| (asymmetry_witness(coin).difference - 0.5).abs())
        .fold(0.0, f64::max);
    verdict(
        3,
        "P(1) - P(-1) = 1/2 at T=3 for every balanced coin",
        worst < TOL,
        format!("{} coins, max |difference - 1/2| {worst:.2e}", coins.len()),
    );
}

#[test]
fn criterion_04_symmetric_hybrid_example() {
    let coin = BalancedCoin::hybrid().matrix();
    let initial = InitialCoinState::new(c(FRAC_1_SQRT_2, 0.0), c(0.0, -FRAC_1_SQRT_2)).unwrap();
    let mirror = (0..=10)
        .map(|t| run(initial, &coin, t).unwrap().mirror_asymmetry())
        .fold(0.0, f64::max);
    let classical: Vec<f64> = (0..=4)
        .map(|t| run(initial, &coin, t).unwrap().max_abs_diff(&classical_reference(t)))
        .collect();
    let first_bad = classical.iter().position(|&d| d >= TOL);
    let t4 = run(initial, &coin, 4).unwrap();
    let detail = format!(
        "max |P(z) - P(-z)| over T<=10 {mirror:.2e}; deviation from classical per T=0..4 {:?}{}",
        classical.iter().map(|d| format!("{d:.3e}")).collect::<Vec<_>>(),
        match first_bad {
            Some(t) => format!(
                "; first mismatch at T={t}: quantum P(0)={}, P(+-2)={} vs classical 3/8, 1/4",
                t4.get(0),
                t4.get(2)
            ),
            None => String::new(),
        }
    );
    verdict(4, "hybrid coin symmetric example", mirror < TOL && first_bad.is_none(), detail);
}

#[test]
fn criterion_05_unbalanced_example() {
    let init = InitialCoinState::new(c(FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2)).unwrap();
    let coin = UnbalancedCoin::new(c(3f64.sqrt() / 2.0, 0.0), c(0.5, 0.0)).unwrap().matrix();
    let expected: [Vec<(i64, f64)>; 3] = [
        vec![(1, 0.5), (-1, 0.5)],
        vec![(2, 0.375), (0, 0.25), (-2, 0.375)],
        vec![(3, 9.0 / 32.0), (1, 7.0 / 32.0), (-1, 7.0 / 32.0), (-3, 9.0 / 32.0)],
    ];
    let worst_unbalanced = (1..=3)
        .map(|t| deviation(&run(init, &coin, t).unwrap(), &expected[t - 1]))
        .fold(0.0, f64::max);
    let even = UnbalancedCoin::new(c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)).unwrap().matrix();
    let worst_even = (1..=3)
        .map(|t| run(init, &even, t).unwrap().max_abs_diff(&classical_reference(t)))
        .fold(0.0, f64::max);
    verdict(
        5,
        "unbalanced coin example",
        worst_unbalanced < TOL && worst_even < TOL,
        format!("p=sqrt3/2 deviation {worst_unbalanced:.2e}; p=q=1/sqrt2 vs classical {worst_even:.2e}"),
    );
}

#[test]
fn criterion_06_ensemble_biconditional() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut samples: Vec<(BalancedCoin, EnsembleState)> = Vec::with_capacity(500);
    for i in 0..500u64 {
        let coin = match i % 5 {
            0 => BalancedCoin::hadamard(),
            1 => BalancedCoin::invariant(),
            2 => BalancedCoin::hybrid(),
            _ => random_balanced(&mut rng),
        };
        let state = if i < 250 {
            sample_ensemble(&coin, i, 1).unwrap()[0]
        } else {
            EnsembleState::random(&mut rng)
        };
        samples.push((coin, state));
    }
    let mut counterexamples = 0;
    let mut members = 0;
    for (coin, state) in &samples {
        let constraint = satisfies_constraint(state, coin).satisfied;
        let linear = apply_and_verify(coin, state).max_deviation() < 1e-10;
        let signalling = signalling_test(coin, state).max_deviation < 1e-10;
        let locc = match locc_pair(coin, state).unwrap() {
            Some([psi, bar]) => psi.entropy < 1e-9 && bar.entropy < 1e-9,
            None => !constraint,
        };
        members += constraint as usize;
        if !(constraint == linear && linear == signalling && signalling == locc) {
            counterexamples += 1;
        }
    }
    let elapsed = start.elapsed();
    verdict(
        6,
        "constraint <=> linearity <=> no-signalling <=> LOCC separability",
        counterexamples == 0 && members >= 250 && elapsed < Duration::from_secs(10),
        format!("500 samples ({members} members), {counterexamples} counterexamples, {elapsed:?}"),
    );
}

#[test]
fn criterion_07_eigenvalue_reproduction() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let expected = [0.0, 1.0 / 3.0, 2.0 / 3.0];
    let mut spectrum_worst = 0.0f64;
    let mut lambda_worst = 0.0f64;
    for _ in 0..100 {
        let coin = random_balanced(&mut rng);
        let state = EnsembleState::random(&mut rng);
        let r = signalling_test(&coin, &state);
        for spec in [&r.spectrum_before, &r.spectrum_after] {
            for (l, e) in spec.iter().zip(expected) {
                spectrum_worst = spectrum_worst.max((l - e).abs());
            }
        }
        for report in locc_pair(&coin, &state).unwrap().expect("random states have a, b != 0") {
            lambda_worst = lambda_worst.max(report.eigenvalue_deviation());
        }
    }
    verdict(
        7,
        "spectra (0, 1/3, 2/3) and closed-form LOCC eigenvalues",
        spectrum_worst < 1e-9 && lambda_worst < 1e-9,
        format!("100 inputs, spectrum deviation {spectrum_worst:.2e}, closed form vs eigensolver {lambda_worst:.2e}"),
    );
}

#[test]
fn criterion_08_special_case_ensembles() {
    let grid = real_coordinate_grid(50);
    let mut misclassified = [0usize; 2];
    let mut accepted = [0usize; 2];
    for p in &grid {
        let s = &p.state;
        let hadamard_family = s.v().abs() < 1e-10 && (s.u() - s.x()).abs() < 1e-10;
        let invariant_family = s.v().abs() < 1e-10 && s.x().abs() < 1e-10;
        for (k, (coin, family)) in [
            (BalancedCoin::hadamard(), hadamard_family),
            (BalancedCoin::invariant(), invariant_family),
        ]
        .into_iter()
        .enumerate()
        {
            let sat = satisfies_constraint(s, &coin).satisfied;
            accepted[k] += sat as usize;
            misclassified[k] += (sat != family) as usize;
        }
    }
    verdict(
        8,
        "Hadamard and invariant ensembles on a 50^3 grid",
        misclassified == [0, 0] && accepted[0] > 0 && accepted[1] > 0,
        format!(
            "{} points; accepted {:?}, misclassified {:?}",
            grid.len(),
            accepted,
            misclassified
        ),
    );
}

#[test]
fn criterion_09_dense_oracle() {
    let coins = [BalancedCoin::hadamard(), BalancedCoin::invariant(), BalancedCoin::hybrid()];
    let initials = [
        InitialCoinState::up_state(),
        InitialCoinState::new(c(FRAC_1_SQRT_2, 0.0), c(0.0, -FRAC_1_SQRT_2)).unwrap(),
        InitialCoinState::new(c(0.6, 0.0), c(0.0, 0.8)).unwrap(),
    ];
    let mut worst = 0.0f64;
    for coin in &coins {
        let m = coin.matrix();
        for &init in &initials {
            for t in 0..=6 {
                let sparse = run(init, &m, t).unwrap();
                let dense = dense_distribution(&m, init, t);
                for (i, p) in dense.iter().enumerate() {
                    worst = worst.max((sparse.get(i as i64 - t as i64) - p).abs());
                }
            }
        }
    }
    verdict(
        9,
        "sparse engine equals dense evolution for T<=6",
        worst < TOL,
        format!("named coins x 3 initial states, max deviation {worst:.2e}"),
    );
}

#[test]
fn criterion_10_scale_check() {
    let start = Instant::now();
    let d = run(InitialCoinState::up_state(), &BalancedCoin::hadamard().matrix(), 10_000).unwrap();
    let elapsed = start.elapsed();
    let drift = (d.total() - 1.0).abs();
    verdict(
        10,
        "T=10^4 Hadamard walk",
        drift < 1e-9 && elapsed < Duration::from_secs(5),
        format!("|total - 1| {drift:.2e}, runtime {elapsed:?}"),
    );
}
