//! The equal-superposition ensemble of a balanced coin.
//!
//! For `|ψ> = a|0> + b|1>` and its complement `|ψ̄> = b*|0> - a*|1>`, the coin
//! `U(α, γ, θ)` acts as `U|ψ> = α|ψ> + e^{iθ}α|ψ̄>`,
//! `U|ψ̄> = γ|ψ> - e^{iθ}γ|ψ̄>` exactly when
//!
//! ```text
//! b = e^{iθ} (α/γ) b*      and      a + a* = e^{-iθ} b + e^{iθ} b*
//! ```
//!
//! The complement convention is fixed; a phase-relaxed membership test would
//! accept a different set.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coins::BalancedCoin;
use crate::error::{Error, Result};
use crate::linalg::{CVector, Complex, CONSTRUCTION_TOL, I};

/// Residual threshold for ensemble membership and the transformation checks.
pub const CONSTRAINT_TOL: f64 = 1e-10;

/// A normalised qubit `a|0> + b|1>`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "StateRecord", try_from = "StateRecord")]
pub struct EnsembleState {
    a: Complex,
    b: Complex,
}

/// Wire form of an [`EnsembleState`]: `{re_a, im_a, re_b, im_b}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateRecord {
    pub re_a: f64,
    pub im_a: f64,
    pub re_b: f64,
    pub im_b: f64,
}

impl From<EnsembleState> for StateRecord {
    fn from(s: EnsembleState) -> Self {
        StateRecord {
            re_a: s.a.re,
            im_a: s.a.im,
            re_b: s.b.re,
            im_b: s.b.im,
        }
    }
}

impl TryFrom<StateRecord> for EnsembleState {
    type Error = Error;
    fn try_from(r: StateRecord) -> Result<Self> {
        EnsembleState::new(Complex::new(r.re_a, r.im_a), Complex::new(r.re_b, r.im_b))
    }
}

impl EnsembleState {
    pub fn new(a: Complex, b: Complex) -> Result<Self> {
        if ![a.re, a.im, b.re, b.im].iter().all(|v| v.is_finite()) {
            return Err(Error::param("state", "amplitudes must be finite"));
        }
        let n = a.norm_sqr() + b.norm_sqr();
        if (n - 1.0).abs() >= CONSTRUCTION_TOL {
            return Err(Error::param("state", format!("|a|^2 + |b|^2 must equal 1, got {n}")));
        }
        Ok(Self { a, b })
    }

    /// `a = x + iy`, `b = u + iv`.
    pub fn from_reals(x: f64, y: f64, u: f64, v: f64) -> Result<Self> {
        Self::new(Complex::new(x, y), Complex::new(u, v))
    }

    /// Rescales `(a, b)` to unit norm; fails only for the zero vector.
    pub fn normalized(a: Complex, b: Complex) -> Result<Self> {
        let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::param("state", "cannot normalise a zero or non-finite state"));
        }
        Self::new(a / n, b / n)
    }

    /// Uniformly distributed on the unit sphere of `C²`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let p: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
            let r2: f64 = p.iter().map(|v| v * v).sum();
            if r2 > 1e-4 && r2 <= 1.0 {
                let r = r2.sqrt();
                return Self {
                    a: Complex::new(p[0] / r, p[1] / r),
                    b: Complex::new(p[2] / r, p[3] / r),
                };
            }
        }
    }

    #[inline]
    pub fn a(&self) -> Complex {
        self.a
    }

    #[inline]
    pub fn b(&self) -> Complex {
        self.b
    }

    pub fn x(&self) -> f64 {
        self.a.re
    }

    pub fn y(&self) -> f64 {
        self.a.im
    }

    pub fn u(&self) -> f64 {
        self.b.re
    }

    pub fn v(&self) -> f64 {
        self.b.im
    }

    pub fn psi(&self) -> CVector {
        CVector::new(vec![self.a, self.b]).expect("dimension 2")
    }

    /// `|ψ̄> = b*|0> - a*|1>`.
    pub fn complement(&self) -> CVector {
        CVector::new(vec![self.b.conj(), -self.a.conj()]).expect("dimension 2")
    }
}

/// Outcome of the membership test, with the residuals that decided it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConstraintCheck {
    pub satisfied: bool,
    /// `|b - e^{iθ}(α/γ) b*|`
    pub conjugation_residual: f64,
    /// `|(a + a*) - (e^{-iθ} b + e^{iθ} b*)|`
    pub real_part_residual: f64,
    /// `|(a + a*) - (e^{-iθ} + γ/α) b|`; equals the previous residual whenever
    /// the conjugation residual vanishes. Diagnostic only.
    pub alternate_form_residual: f64,
}

pub fn satisfies_constraint(state: &EnsembleState, coin: &BalancedCoin) -> ConstraintCheck {
    let (a, b) = (state.a, state.b);
    let (alpha, gamma) = (coin.alpha(), coin.gamma());
    let e = coin.phase();
    let two_re_a = a + a.conj();
    let conjugation_residual = (b - e * (alpha / gamma) * b.conj()).norm();
    let real_part_residual = (two_re_a - (e.conj() * b + e * b.conj())).norm();
    let alternate_form_residual = (two_re_a - (e.conj() + gamma / alpha) * b).norm();
    ConstraintCheck {
        satisfied: conjugation_residual < CONSTRAINT_TOL && real_part_residual < CONSTRAINT_TOL,
        conjugation_residual,
        real_part_residual,
        alternate_form_residual,
    }
}

/// Draws `count` members of the ensemble of `coin`, deterministically in `seed`.
///
/// The first constraint pins the phase of `b` to `±sqrt(e^{iθ}α/γ)`, so `b` is
/// drawn as a signed magnitude along that direction and `a` is built from the
/// parametrised form `a = ½(e^{-iθ} + γ/α) b + iy`. The pair is then rescaled
/// to unit norm, which leaves both (homogeneous, real-linear) constraints intact.
pub fn sample_ensemble(coin: &BalancedCoin, seed: u64, count: usize) -> Result<Vec<EnsembleState>> {
    if count == 0 {
        return Err(Error::param("count", "must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let e = coin.phase();
    let ratio = coin.gamma() / coin.alpha();
    let direction = (e / ratio).sqrt();
    let half = 0.5 * (e.conj() + ratio);

    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let magnitude: f64 = rng.random_range(-1.0..1.0);
        let y: f64 = rng.random_range(-1.0..1.0);
        if magnitude.abs() < 1e-6 {
            // b = 0 is excluded
            continue;
        }
        let b = direction * magnitude;
        let a = half * b + I * y;
        out.push(EnsembleState::normalized(a, b)?);
    }
    Ok(out)
}

/// Deviation between the linear action of the coin and the target superposition.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TransformReport {
    /// `‖U(a, b) - (α|ψ> + e^{iθ}α|ψ̄>)‖`
    pub psi_deviation: f64,
    /// `‖U|ψ̄> - (γ|ψ> - e^{iθ}γ|ψ̄>)‖`
    pub complement_deviation: f64,
    pub holds: bool,
}

impl TransformReport {
    pub fn max_deviation(&self) -> f64 {
        self.psi_deviation.max(self.complement_deviation)
    }
}

pub fn apply_and_verify(coin: &BalancedCoin, state: &EnsembleState) -> TransformReport {
    let u = coin.matrix();
    let e = coin.phase();
    let psi = state.psi();
    let bar = state.complement();

    let linear_psi = u.apply(&psi).expect("2x2 on C^2");
    let target_psi = &psi.scale(coin.alpha()) + &bar.scale(e * coin.alpha());
    let linear_bar = u.apply(&bar).expect("2x2 on C^2");
    let target_bar = &psi.scale(coin.gamma()) - &bar.scale(e * coin.gamma());

    let psi_deviation = (&linear_psi - &target_psi).norm();
    let complement_deviation = (&linear_bar - &target_bar).norm();
    TransformReport {
        psi_deviation,
        complement_deviation,
        holds: psi_deviation < CONSTRAINT_TOL && complement_deviation < CONSTRAINT_TOL,
    }
}

/// Inner products before and after the transformation of two ensemble members.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InnerProductReport {
    /// `<ψ₁|ψ₂>`
    pub psi_psi: Complex,
    /// `<ψ̄₁|ψ̄₂>`
    pub bar_bar: Complex,
    /// `<ψ₁|ψ̄₂>`
    pub psi_bar: Complex,
    pub transformed_psi_psi: Complex,
    pub transformed_bar_bar: Complex,
    pub transformed_psi_bar: Complex,
    pub max_deviation: f64,
    pub preserved: bool,
}

/// Checks that the target superpositions preserve all pairwise inner products.
///
/// The transformed products are expanded from the target forms
/// (`U|ψ> = α(|ψ> + e^{iθ}|ψ̄>)`, `U|ψ̄> = γ(|ψ> - e^{iθ}|ψ̄>)`), not from the
/// coin matrix, so this is a genuine consistency check of those forms.
pub fn verify_inner_products(
    coin: &BalancedCoin,
    first: &EnsembleState,
    second: &EnsembleState,
) -> Result<InnerProductReport> {
    for (label, s) in [("first", first), ("second", second)] {
        if !satisfies_constraint(s, coin).satisfied {
            return Err(Error::Precondition(format!(
                "{label} state is not in the ensemble of the given coin"
            )));
        }
    }
    let (p1, b1) = (first.psi(), first.complement());
    let (p2, b2) = (second.psi(), second.complement());
    let g_pp = p1.inner(&p2);
    let g_pb = p1.inner(&b2);
    let g_bp = b1.inner(&p2);
    let g_bb = b1.inner(&b2);

    let e = coin.phase();
    let aa = coin.alpha().norm_sqr();
    let gg = coin.gamma().norm_sqr();
    let transformed_psi_psi = aa * (g_pp + e * g_pb + e.conj() * g_bp + g_bb);
    let transformed_bar_bar = gg * (g_pp - e * g_pb - e.conj() * g_bp + g_bb);
    let transformed_psi_bar = coin.alpha().conj() * coin.gamma() * (g_pp - e * g_pb + e.conj() * g_bp - g_bb);

    let max_deviation = [
        (transformed_psi_psi - g_pp).norm(),
        (transformed_bar_bar - g_bb).norm(),
        (transformed_psi_bar - g_pb).norm(),
    ]
    .into_iter()
    .fold(0.0, f64::max);

    Ok(InnerProductReport {
        psi_psi: g_pp,
        bar_bar: g_bb,
        psi_bar: g_pb,
        transformed_psi_psi,
        transformed_bar_bar,
        transformed_psi_bar,
        max_deviation,
        preserved: max_deviation < CONSTRAINT_TOL,
    })
}

/// One point of [`real_coordinate_grid`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridPoint {
    /// Lattice indices of `(x, u, v)`.
    pub index: [usize; 3],
    pub state: EnsembleState,
}

/// States on a `resolution³` lattice of `(x, u, v)` values `-1 + 2k/resolution`,
/// with `y = ±sqrt(1 - x² - u² - v²)` wherever that is real.
///
/// For even `resolution` the lattice contains `0` and the diagonal `u = x`,
/// so the Hadamard (`v = 0, u = x`) and invariant (`v = 0, x = 0`) ensembles
/// intersect it in many points.
pub fn real_coordinate_grid(resolution: usize) -> Vec<GridPoint> {
    assert!(resolution >= 2, "grid resolution must be at least 2");
    let value = |k: usize| -1.0 + 2.0 * k as f64 / resolution as f64;
    let mut points = Vec::new();
    for i in 0..resolution {
        let x = value(i);
        for j in 0..resolution {
            let u = value(j);
            for k in 0..resolution {
                let v = value(k);
                let rest = 1.0 - x * x - u * u - v * v;
                if rest < 0.0 {
                    continue;
                }
                let y = rest.sqrt();
                let signs: &[f64] = if y > 0.0 { &[1.0, -1.0] } else { &[1.0] };
                for &s in signs {
                    if let Ok(state) = EnsembleState::normalized(Complex::new(x, s * y), Complex::new(u, v)) {
                        points.push(GridPoint {
                            index: [i, j, k],
                            state,
                        });
                    }
                }
            }
        }
    }
    points
}
