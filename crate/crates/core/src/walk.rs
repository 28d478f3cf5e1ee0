//! Discrete-time quantum walk on the integer line.
//!
//! One step is `S (U ⊗ I)`: the coin acts on the `(↑, ↓)` amplitudes at every
//! site, then `↑` moves to `z + 1` and `↓` to `z - 1`. After `T` steps starting
//! from site 0 the walker is supported on `z ∈ [-T, T]` with `z ≡ T (mod 2)`,
//! so the state is stored as a flat window indexed by `z + T`.

use statrs::distribution::{Binomial, Discrete};

use crate::coins::{BalancedCoin, UnbalancedCoin};
use crate::ensemble::EnsembleState;
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, Complex, CONSTRUCTION_TOL, ZERO};

/// Initial coin state `c_up|↑> + c_down|↓>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InitialCoinState {
    up: Complex,
    down: Complex,
}

impl InitialCoinState {
    pub fn new(up: Complex, down: Complex) -> Result<Self> {
        if ![up.re, up.im, down.re, down.im].iter().all(|v| v.is_finite()) {
            return Err(Error::param("initial", "amplitudes must be finite"));
        }
        let n = up.norm_sqr() + down.norm_sqr();
        if (n - 1.0).abs() >= CONSTRUCTION_TOL {
            return Err(Error::param(
                "initial",
                format!("|c_up|^2 + |c_down|^2 must equal 1, got {n}"),
            ));
        }
        Ok(Self { up, down })
    }

    pub fn up_state() -> Self {
        Self {
            up: Complex::new(1.0, 0.0),
            down: ZERO,
        }
    }

    #[inline]
    pub fn up(&self) -> Complex {
        self.up
    }

    #[inline]
    pub fn down(&self) -> Complex {
        self.down
    }
}

impl From<EnsembleState> for InitialCoinState {
    fn from(s: EnsembleState) -> Self {
        Self { up: s.a(), down: s.b() }
    }
}

/// A 2x2 coin matrix that has passed the unitarity check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoinOperator([[Complex; 2]; 2]);

impl CoinOperator {
    pub fn new(m: &CMatrix) -> Result<Self> {
        if (m.rows(), m.cols()) != (2, 2) {
            return Err(Error::DimensionMismatch(format!(
                "coin must be 2x2, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        m.require_unitary()?;
        Ok(Self([[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]]))
    }

    pub fn entries(&self) -> [[Complex; 2]; 2] {
        self.0
    }

    #[inline]
    fn apply(&self, up: Complex, down: Complex) -> (Complex, Complex) {
        let m = &self.0;
        (m[0][0] * up + m[0][1] * down, m[1][0] * up + m[1][1] * down)
    }
}

impl TryFrom<&CMatrix> for CoinOperator {
    type Error = Error;
    fn try_from(m: &CMatrix) -> Result<Self> {
        Self::new(m)
    }
}

/// Coin ⊗ position amplitudes after `steps` steps.
#[derive(Clone, Debug, PartialEq)]
pub struct WalkState {
    steps: usize,
    /// `[amp_up, amp_down]` at `z = index - steps`.
    amplitudes: Vec<[Complex; 2]>,
}

impl WalkState {
    /// `(c_up|↑> + c_down|↓>) ⊗ |0>`.
    pub fn new(initial: InitialCoinState) -> Self {
        Self {
            steps: 0,
            amplitudes: vec![[initial.up, initial.down]],
        }
    }

    #[inline]
    pub fn steps(&self) -> usize {
        self.steps
    }

    /// `[amp_up, amp_down]` at site `z`; zero outside the window.
    pub fn amplitude(&self, z: i64) -> [Complex; 2] {
        self.index_of(z).map_or([ZERO, ZERO], |i| self.amplitudes[i])
    }

    fn index_of(&self, z: i64) -> Option<usize> {
        let t = self.steps as i64;
        if z < -t || z > t {
            None
        } else {
            Some((z + t) as usize)
        }
    }

    pub fn total_probability(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|[u, d]| u.norm_sqr() + d.norm_sqr())
            .sum()
    }

    /// One application of `S (U ⊗ I)`.
    pub fn step(&self, coin: &CMatrix) -> Result<WalkState> {
        let op = CoinOperator::new(coin)?;
        let mut next = WalkState {
            steps: 0,
            amplitudes: Vec::new(),
        };
        self.step_into(&op, &mut next);
        Ok(next)
    }

    fn step_into(&self, op: &CoinOperator, next: &mut WalkState) {
        let len = self.amplitudes.len();
        next.steps = self.steps + 1;
        next.amplitudes.clear();
        next.amplitudes.resize(len + 2, [ZERO, ZERO]);
        // only even indices (z ≡ steps mod 2) carry amplitude
        for i in (0..len).step_by(2) {
            let [up, down] = self.amplitudes[i];
            let (up, down) = op.apply(up, down);
            // z + 1 sits at index i + 2 of the grown window, z - 1 at index i
            next.amplitudes[i + 2][0] = up;
            next.amplitudes[i][1] = down;
        }
    }

    /// `steps` further applications of `S (U ⊗ I)`.
    pub fn evolve(&self, op: &CoinOperator, steps: usize) -> WalkState {
        let mut current = self.clone();
        let mut scratch = WalkState {
            steps: 0,
            amplitudes: Vec::with_capacity(self.amplitudes.len() + 2 * steps),
        };
        current.amplitudes.reserve(2 * steps);
        for _ in 0..steps {
            current.step_into(op, &mut scratch);
            std::mem::swap(&mut current, &mut scratch);
        }
        current
    }

    /// Position distribution `P_z = |<↑,z|φ>|² + |<↓,z|φ>|²`.
    pub fn distribution(&self) -> Distribution {
        Distribution {
            steps: self.steps,
            probabilities: self
                .amplitudes
                .iter()
                .map(|[u, d]| u.norm_sqr() + d.norm_sqr())
                .collect(),
        }
    }

    /// Joint probabilities of site `z` and coin outcome `|ψ>` or `|ψ̄>` when the
    /// coin register is measured in the basis `{|ψ>, |ψ̄>}` of `basis`.
    /// Summing the pair at each site recovers [`WalkState::distribution`].
    pub fn coin_resolved_probabilities(&self, basis: &EnsembleState) -> Vec<(i64, [f64; 2])> {
        let psi = basis.psi();
        let bar = basis.complement();
        let t = self.steps as i64;
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(i, &[u, d])| {
                let on_psi = psi[0].conj() * u + psi[1].conj() * d;
                let on_bar = bar[0].conj() * u + bar[1].conj() * d;
                (i as i64 - t, [on_psi.norm_sqr(), on_bar.norm_sqr()])
            })
            .collect()
    }
}

/// Probability of each site in `[-T, T]` after `T` steps.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution {
    steps: usize,
    probabilities: Vec<f64>,
}

impl Distribution {
    /// Builds a distribution over `[-steps, steps]` from its window of `2 steps + 1` values.
    pub fn from_window(steps: usize, probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.len() != 2 * steps + 1 {
            return Err(Error::DimensionMismatch(format!(
                "{} probabilities for a window of {} sites",
                probabilities.len(),
                2 * steps + 1
            )));
        }
        Ok(Self { steps, probabilities })
    }

    #[inline]
    pub fn steps(&self) -> usize {
        self.steps
    }

    /// `P_z`, zero outside `[-T, T]`.
    pub fn get(&self, z: i64) -> f64 {
        let t = self.steps as i64;
        if z < -t || z > t {
            0.0
        } else {
            self.probabilities[(z + t) as usize]
        }
    }

    /// Every site of the window, ascending.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        let t = self.steps as i64;
        self.probabilities
            .iter()
            .enumerate()
            .map(move |(i, &p)| (i as i64 - t, p))
    }

    /// Sites with `z ≡ T (mod 2)`, ascending.
    pub fn support(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.iter().step_by(2)
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    /// `max_z |P_z - P_{-z}|`.
    pub fn mirror_asymmetry(&self) -> f64 {
        let n = self.probabilities.len();
        (0..n / 2 + 1)
            .map(|i| (self.probabilities[i] - self.probabilities[n - 1 - i]).abs())
            .fold(0.0, f64::max)
    }

    /// `max_z |P_z - Q_z|` over the union of both windows.
    pub fn max_abs_diff(&self, other: &Distribution) -> f64 {
        let t = self.steps.max(other.steps) as i64;
        (-t..=t)
            .map(|z| (self.get(z) - other.get(z)).abs())
            .fold(0.0, f64::max)
    }
}

/// `T` steps from `initial ⊗ |0>`.
pub fn run(initial: InitialCoinState, coin: &CMatrix, steps: usize) -> Result<Distribution> {
    Ok(run_state(initial, coin, steps)?.distribution())
}

/// Like [`run`] but returns the full amplitude table.
pub fn run_state(initial: InitialCoinState, coin: &CMatrix, steps: usize) -> Result<WalkState> {
    let op = CoinOperator::new(coin)?;
    Ok(WalkState::new(initial).evolve(&op, steps))
}

/// Runs from `|↑> ⊗ |0>` for every `θ` and reports whether all distributions
/// agree within [`CONSTRUCTION_TOL`].
pub fn theta_independence_check(alpha: Complex, gamma: Complex, thetas: &[f64], steps: usize) -> Result<bool> {
    let mut reference: Option<Distribution> = None;
    for &theta in thetas {
        let coin = BalancedCoin::new(alpha, gamma, theta)?;
        let dist = run(InitialCoinState::up_state(), &coin.matrix(), steps)?;
        match &reference {
            None => reference = Some(dist),
            Some(r) => {
                if r.max_abs_diff(&dist) >= CONSTRUCTION_TOL {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// `x y* α γ*` purely imaginary and `|x|² = 1/2`.
pub fn balanced_symmetry_condition(initial: &InitialCoinState, coin: &BalancedCoin) -> bool {
    let cross = initial.up * initial.down.conj() * coin.alpha() * coin.gamma().conj();
    cross.re.abs() < CONSTRUCTION_TOL && (initial.up.norm_sqr() - 0.5).abs() < CONSTRUCTION_TOL
}

/// `r s* p q + r* s p* q* = 0` and `|r|² = |s|²`.
pub fn unbalanced_symmetry_condition(initial: &InitialCoinState, coin: &UnbalancedCoin) -> bool {
    let term = initial.up * initial.down.conj() * coin.p() * coin.q();
    (term + term.conj()).norm() < CONSTRUCTION_TOL
        && (initial.up.norm_sqr() - initial.down.norm_sqr()).abs() < CONSTRUCTION_TOL
}

/// `P_1 - P_{-1}` after three steps from `|↑> ⊗ |0>`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct AsymmetryWitness {
    pub p_plus_one: f64,
    pub p_minus_one: f64,
    pub difference: f64,
    /// `|α|² [|α|⁴ + 4|α|²|γ|² - |γ|⁴]`
    pub predicted: f64,
}

pub fn asymmetry_witness(coin: &BalancedCoin) -> AsymmetryWitness {
    let dist = run(InitialCoinState::up_state(), &coin.matrix(), 3).expect("balanced coins are unitary");
    let aa = coin.alpha().norm_sqr();
    let gg = coin.gamma().norm_sqr();
    let p_plus_one = dist.get(1);
    let p_minus_one = dist.get(-1);
    AsymmetryWitness {
        p_plus_one,
        p_minus_one,
        difference: p_plus_one - p_minus_one,
        predicted: aa * (aa * aa + 4.0 * aa * gg - gg * gg),
    }
}

/// Symmetric classical walk: `P_z = C(T, (T+z)/2) / 2^T` on `z ≡ T (mod 2)`.
pub fn classical_reference(steps: usize) -> Distribution {
    let t = steps as u64;
    let binomial = Binomial::new(0.5, t).expect("p = 1/2 is a valid probability");
    let mut probabilities = vec![0.0; 2 * steps + 1];
    for k in 0..=steps {
        // k right moves land on z = 2k - T, index 2k
        probabilities[2 * k] = binomial.pmf(k as u64);
    }
    Distribution { steps, probabilities }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn assert_distribution(d: &Distribution, expected: &[(i64, f64)]) {
        let mut total = 0.0;
        for &(z, p) in expected {
            assert!((d.get(z) - p).abs() < 1e-12, "P({z}) = {} expected {p}", d.get(z));
            total += p;
        }
        assert!((total - 1.0).abs() < 1e-12, "expected values must cover all mass");
    }

    #[test]
    fn shift_moves_up_right_and_down_left() {
        // identity coin isolates S
        let s = WalkState::new(InitialCoinState::up_state())
            .step(&CMatrix::identity(2))
            .unwrap();
        assert_eq!(s.amplitude(1), [c(1.0, 0.0), ZERO]);
        let down = InitialCoinState::new(ZERO, c(1.0, 0.0)).unwrap();
        let s = WalkState::new(down).step(&CMatrix::identity(2)).unwrap();
        assert_eq!(s.amplitude(-1), [ZERO, c(1.0, 0.0)]);
    }

    #[test]
    fn one_hadamard_step() {
        let s = WalkState::new(InitialCoinState::up_state())
            .step(&BalancedCoin::hadamard().matrix())
            .unwrap();
        let h = FRAC_1_SQRT_2;
        assert!((s.amplitude(1)[0] - c(h, 0.0)).norm() < 1e-15);
        assert!((s.amplitude(-1)[1] - c(h, 0.0)).norm() < 1e-15);
        assert_eq!(s.amplitude(1)[1], ZERO);
        assert_eq!(s.amplitude(-1)[0], ZERO);
        assert_eq!(s.amplitude(0), [ZERO, ZERO]);
    }

    #[test]
    fn one_generic_step() {
        let coin = BalancedCoin::new(c(0.5, 0.5), Complex::from_polar(FRAC_1_SQRT_2, 2.0), 1.1).unwrap();
        let s = WalkState::new(InitialCoinState::up_state()).step(&coin.matrix()).unwrap();
        assert!((s.amplitude(1)[0] - coin.alpha()).norm() < 1e-15);
        assert!((s.amplitude(-1)[1] - coin.phase() * coin.alpha()).norm() < 1e-15);
    }

    #[test]
    fn non_unitary_coin_is_rejected() {
        let bad = CMatrix::from_rows(&[[c(1.0, 0.0), c(1.0, 0.0)], [ZERO, c(1.0, 0.0)]]).unwrap();
        let s = WalkState::new(InitialCoinState::up_state());
        assert!(matches!(s.step(&bad), Err(Error::NotUnitary(_))));
        assert!(run(InitialCoinState::up_state(), &CMatrix::identity(3), 1).is_err());
    }

    #[test]
    fn hadamard_three_and_four_steps() {
        let h = BalancedCoin::hadamard().matrix();
        let d3 = run(InitialCoinState::up_state(), &h, 3).unwrap();
        assert_distribution(&d3, &[(3, 0.125), (1, 0.625), (-1, 0.125), (-3, 0.125)]);
        let d4 = run(InitialCoinState::up_state(), &h, 4).unwrap();
        assert_distribution(&d4, &[(4, 0.0625), (2, 0.625), (0, 0.125), (-2, 0.125), (-4, 0.0625)]);
    }

    #[test]
    fn any_balanced_coin_first_step_is_fair() {
        for coin in [BalancedCoin::hadamard(), BalancedCoin::invariant(), BalancedCoin::hybrid()] {
            let d = run(InitialCoinState::up_state(), &coin.matrix(), 1).unwrap();
            assert_distribution(&d, &[(1, 0.5), (-1, 0.5)]);
        }
    }

    #[test]
    fn hybrid_superposed_three_steps() {
        let init = InitialCoinState::new(c(FRAC_1_SQRT_2, 0.0), c(0.0, -FRAC_1_SQRT_2)).unwrap();
        let d = run(init, &BalancedCoin::hybrid().matrix(), 3).unwrap();
        assert_distribution(&d, &[(3, 0.125), (1, 0.375), (-1, 0.375), (-3, 0.125)]);
    }

    #[test]
    fn unbalanced_example_three_steps() {
        let coin = UnbalancedCoin::new(c(3f64.sqrt() / 2.0, 0.0), c(0.5, 0.0)).unwrap();
        let init = InitialCoinState::new(c(FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2)).unwrap();
        let d = run(init, &coin.matrix(), 3).unwrap();
        assert_distribution(&d, &[(3, 9.0 / 32.0), (1, 7.0 / 32.0), (-1, 7.0 / 32.0), (-3, 9.0 / 32.0)]);
    }

    #[test]
    fn zero_steps_is_the_initial_site() {
        let d = run(InitialCoinState::up_state(), &BalancedCoin::hadamard().matrix(), 0).unwrap();
        assert_eq!(d.steps(), 0);
        assert_eq!(d.get(0), 1.0);
        assert_eq!(d.support().collect::<Vec<_>>(), vec![(0, 1.0)]);
    }

    #[test]
    fn theta_independence() {
        let h = c(FRAC_1_SQRT_2, 0.0);
        assert!(theta_independence_check(h, h, &[0.0, FRAC_PI_2, 1.234], 4).unwrap());
        assert!(theta_independence_check(h, h, &[0.0], 0).unwrap());
        assert!(theta_independence_check(c(0.5, 0.5), c(0.5, -0.5), &[0.0, 1.5 * PI], 6).unwrap());
        assert!(theta_independence_check(c(1.0, 0.0), h, &[0.0], 1).is_err());
    }

    #[test]
    fn balanced_symmetry_examples() {
        let h = FRAC_1_SQRT_2;
        let hybrid_init = InitialCoinState::new(c(h, 0.0), c(0.0, -h)).unwrap();
        assert!(balanced_symmetry_condition(&hybrid_init, &BalancedCoin::hybrid()));
        assert!(!balanced_symmetry_condition(&InitialCoinState::up_state(), &BalancedCoin::hadamard()));
        let plus_i = InitialCoinState::new(c(h, 0.0), c(0.0, h)).unwrap();
        assert!(balanced_symmetry_condition(&plus_i, &BalancedCoin::hadamard()));
        let hm = BalancedCoin::hadamard().matrix();
        for t in [3, 4] {
            assert!(run(plus_i, &hm, t).unwrap().mirror_asymmetry() < 1e-12);
        }
    }

    #[test]
    fn unbalanced_symmetry_examples() {
        let h = FRAC_1_SQRT_2;
        let init = InitialCoinState::new(c(h, 0.0), c(0.0, h)).unwrap();
        let coin = UnbalancedCoin::new(c(3f64.sqrt() / 2.0, 0.0), c(0.5, 0.0)).unwrap();
        assert!(unbalanced_symmetry_condition(&init, &coin));
        assert!(!unbalanced_symmetry_condition(&InitialCoinState::up_state(), &coin));
        let hadamard_like = UnbalancedCoin::new(c(h, 0.0), c(h, 0.0)).unwrap();
        assert!(unbalanced_symmetry_condition(&init, &hadamard_like));
        let a = run(init, &hadamard_like.matrix(), 6).unwrap();
        let b = run(init, &BalancedCoin::hadamard().matrix(), 6).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-15);
        assert!(a.mirror_asymmetry() < 1e-12);
    }

    #[test]
    fn asymmetry_witness_is_one_half() {
        for coin in [BalancedCoin::hadamard(), BalancedCoin::invariant(), BalancedCoin::hybrid()] {
            let w = asymmetry_witness(&coin);
            assert!((w.difference - 0.5).abs() < 1e-12, "{w:?}");
            assert!((w.predicted - 0.5).abs() < 1e-12);
        }
        let w = asymmetry_witness(&BalancedCoin::hadamard());
        assert!((w.p_plus_one - 0.625).abs() < 1e-12 && (w.p_minus_one - 0.125).abs() < 1e-12);
    }

    #[test]
    fn classical_reference_values() {
        assert_distribution(
            &classical_reference(4),
            &[(4, 1.0 / 16.0), (2, 0.25), (0, 0.375), (-2, 0.25), (-4, 1.0 / 16.0)],
        );
        assert_distribution(&classical_reference(0), &[(0, 1.0)]);
        assert_distribution(&classical_reference(3), &[(3, 0.125), (1, 0.375), (-1, 0.375), (-3, 0.125)]);
        assert_eq!(classical_reference(3).get(0), 0.0);
    }

    #[test]
    fn coin_resolved_probabilities_marginalise_to_position() {
        let basis = crate::ensemble::sample_ensemble(&BalancedCoin::hadamard(), 4, 1).unwrap()[0];
        let state = run_state(basis.into(), &BalancedCoin::hadamard().matrix(), 5).unwrap();
        let dist = state.distribution();
        for (z, [p, q]) in state.coin_resolved_probabilities(&basis) {
            assert!((p + q - dist.get(z)).abs() < 1e-14);
        }
    }

    #[test]
    fn distribution_window_validation() {
        assert!(Distribution::from_window(2, vec![0.0; 4]).is_err());
        let d = Distribution::from_window(1, vec![0.5, 0.0, 0.5]).unwrap();
        assert_eq!(d.get(5), 0.0);
        assert_eq!(d.mirror_asymmetry(), 0.0);
    }
}
