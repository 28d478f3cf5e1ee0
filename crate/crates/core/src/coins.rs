//! Coin operators.
//!
//! A [`BalancedCoin`] sends each computational basis state to an equal-weight
//! superposition, `U|0> = α|0> + e^{iθ}α|1>` and `U|1> = γ|0> - e^{iθ}γ|1>`,
//! with `|α|² = |γ|² = 1/2`. The phase on the second column is always
//! `θ + π`; it is implied by unitarity and never stored.
//!
//! An [`UnbalancedCoin`] is the general real-determinant form
//! `[[p, q*], [q, -p*]]` with `|p|² + |q|² = 1`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, TAU};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{phase, CMatrix, Complex, CONSTRUCTION_TOL, I};

/// Equal-superposition coin parametrised by `(α, γ, θ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BalancedCoin {
    alpha: Complex,
    gamma: Complex,
    theta: f64,
}

/// Which special algebraic identities a coin matrix satisfies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SpecialProperties {
    /// `U² = I`
    pub squares_to_identity: bool,
    /// `U² = iσ_x`
    pub squares_to_i_sigma_x: bool,
    /// `U = (σ_x + σ_z)/√2`
    pub equals_pauli_sum: bool,
}

fn check_half_modulus(name: &'static str, z: Complex) -> Result<()> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::param(name, "must be finite"));
    }
    let m = z.norm_sqr();
    if (m - 0.5).abs() >= CONSTRUCTION_TOL {
        return Err(Error::param(name, format!("|{name}|^2 must equal 1/2, got {m}")));
    }
    Ok(())
}

fn normalize_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

impl BalancedCoin {
    pub fn new(alpha: Complex, gamma: Complex, theta: f64) -> Result<Self> {
        check_half_modulus("alpha", alpha)?;
        check_half_modulus("gamma", gamma)?;
        if !theta.is_finite() {
            return Err(Error::param("theta", "must be finite"));
        }
        Ok(Self {
            alpha,
            gamma,
            theta: normalize_angle(theta),
        })
    }

    /// The Hadamard gate, `α = γ = 1/√2`, `θ = 0`.
    pub fn hadamard() -> Self {
        let h = Complex::new(FRAC_1_SQRT_2, 0.0);
        Self::new(h, h, 0.0).expect("valid parameters")
    }

    /// The basis-interchange invariant coin, `α = 1/√2`, `γ = i/√2`, `θ = π/2`.
    pub fn invariant() -> Self {
        Self::new(
            Complex::new(FRAC_1_SQRT_2, 0.0),
            Complex::new(0.0, FRAC_1_SQRT_2),
            FRAC_PI_2,
        )
        .expect("valid parameters")
    }

    /// `α = γ = (1+i)/2`, `θ = 3π/2`.
    pub fn hybrid() -> Self {
        let h = Complex::new(0.5, 0.5);
        Self::new(h, h, 3.0 * FRAC_PI_2).expect("valid parameters")
    }

    #[inline]
    pub fn alpha(&self) -> Complex {
        self.alpha
    }

    #[inline]
    pub fn gamma(&self) -> Complex {
        self.gamma
    }

    /// θ in `[0, 2π)`.
    #[inline]
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// `e^{iθ}`.
    #[inline]
    pub fn phase(&self) -> Complex {
        phase(self.theta)
    }

    /// Same `|γ|`, `|α|` and `θ`, with both amplitudes multiplied by `e^{iφ}`.
    pub fn with_global_phase(&self, phi: f64) -> Self {
        let p = phase(phi);
        Self {
            alpha: self.alpha * p,
            gamma: self.gamma * p,
            theta: self.theta,
        }
    }

    pub fn entries(&self) -> [[Complex; 2]; 2] {
        let e = self.phase();
        [[self.alpha, self.gamma], [e * self.alpha, -e * self.gamma]]
    }

    pub fn matrix(&self) -> CMatrix {
        CMatrix::from_rows(&self.entries()).expect("2x2")
    }

    /// True when the transformation maps into itself under `|0> <-> |1>`,
    /// i.e. `γ = e^{iθ}α` and `α = -e^{iθ}γ` (so `γ = ±iα` with `θ = π/2, 3π/2`).
    pub fn is_invariant_family(&self) -> bool {
        let e = self.phase();
        (self.gamma - e * self.alpha).norm() < CONSTRUCTION_TOL
            && (self.alpha + e * self.gamma).norm() < CONSTRUCTION_TOL
    }

    pub fn special_properties(&self) -> SpecialProperties {
        special_properties(&self.matrix())
    }
}

/// Checks `M² = I`, `M² = iσ_x` and `M = (σ_x + σ_z)/√2` at [`CONSTRUCTION_TOL`].
pub fn special_properties(m: &CMatrix) -> SpecialProperties {
    let square = m * m;
    let i_sigma_x = CMatrix::pauli_x().scale(I);
    let pauli_sum = (&CMatrix::pauli_x() + &CMatrix::pauli_z()).scale(Complex::new(FRAC_1_SQRT_2, 0.0));
    SpecialProperties {
        squares_to_identity: square.max_abs_diff(&CMatrix::identity(2)) < CONSTRUCTION_TOL,
        squares_to_i_sigma_x: square.max_abs_diff(&i_sigma_x) < CONSTRUCTION_TOL,
        equals_pauli_sum: m.max_abs_diff(&pauli_sum) < CONSTRUCTION_TOL,
    }
}

/// `[[p, q*], [q, -p*]]` with `|p|² + |q|² = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct UnbalancedCoin {
    p: Complex,
    q: Complex,
}

impl UnbalancedCoin {
    pub fn new(p: Complex, q: Complex) -> Result<Self> {
        for (name, z) in [("p", p), ("q", q)] {
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::param(name, "must be finite"));
            }
        }
        let norm = p.norm_sqr() + q.norm_sqr();
        if (norm - 1.0).abs() >= CONSTRUCTION_TOL {
            return Err(Error::param("p", format!("|p|^2 + |q|^2 must equal 1, got {norm}")));
        }
        Ok(Self { p, q })
    }

    #[inline]
    pub fn p(&self) -> Complex {
        self.p
    }

    #[inline]
    pub fn q(&self) -> Complex {
        self.q
    }

    pub fn entries(&self) -> [[Complex; 2]; 2] {
        [[self.p, self.q.conj()], [self.q, -self.p.conj()]]
    }

    pub fn matrix(&self) -> CMatrix {
        CMatrix::from_rows(&self.entries()).expect("2x2")
    }
}

/// Either kind of coin.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Coin {
    Balanced(BalancedCoin),
    Unbalanced(UnbalancedCoin),
}

/// Names accepted by [`Coin::named`].
pub const NAMED_COINS: [&str; 3] = ["hadamard", "invariant", "hybrid"];

impl Coin {
    pub fn named(name: &str) -> Option<Coin> {
        match name {
            "hadamard" => Some(Coin::Balanced(BalancedCoin::hadamard())),
            "invariant" => Some(Coin::Balanced(BalancedCoin::invariant())),
            "hybrid" => Some(Coin::Balanced(BalancedCoin::hybrid())),
            _ => None,
        }
    }

    pub fn entries(&self) -> [[Complex; 2]; 2] {
        match self {
            Coin::Balanced(c) => c.entries(),
            Coin::Unbalanced(c) => c.entries(),
        }
    }

    pub fn matrix(&self) -> CMatrix {
        CMatrix::from_rows(&self.entries()).expect("2x2")
    }

    pub fn as_balanced(&self) -> Option<&BalancedCoin> {
        match self {
            Coin::Balanced(c) => Some(c),
            Coin::Unbalanced(_) => None,
        }
    }
}

impl From<BalancedCoin> for Coin {
    fn from(c: BalancedCoin) -> Self {
        Coin::Balanced(c)
    }
}

impl From<UnbalancedCoin> for Coin {
    fn from(c: UnbalancedCoin) -> Self {
        Coin::Unbalanced(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn matrix_from(rows: [[Complex; 2]; 2]) -> CMatrix {
        CMatrix::from_rows(&rows).unwrap()
    }

    #[test]
    fn hadamard_matrix() {
        let h = FRAC_1_SQRT_2;
        let expected = matrix_from([[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]]);
        assert!(BalancedCoin::hadamard().matrix().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn invariant_matrix() {
        let h = FRAC_1_SQRT_2;
        let expected = matrix_from([[c(h, 0.0), c(0.0, h)], [c(0.0, h), c(h, 0.0)]]);
        assert!(BalancedCoin::invariant().matrix().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn hybrid_action_on_basis() {
        // U|up> = (1+i)/2 (|up> - i|down>), U|down> = (1+i)/2 (|up> + i|down>)
        let m = BalancedCoin::hybrid().matrix();
        let k = c(0.5, 0.5);
        let expected = matrix_from([[k, k], [k * c(0.0, -1.0), k * c(0.0, 1.0)]]);
        assert!(m.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn modulus_violation_names_the_parameter() {
        let err = BalancedCoin::new(c(1.0, 0.0), c(FRAC_1_SQRT_2, 0.0), 0.0).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter { name: "alpha", .. }));
        let err = BalancedCoin::new(c(FRAC_1_SQRT_2, 0.0), c(0.5, 0.0), 0.0).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter { name: "gamma", .. }));
        assert!(BalancedCoin::new(c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0), f64::NAN).is_err());
    }

    #[test]
    fn theta_is_normalized() {
        let h = c(FRAC_1_SQRT_2, 0.0);
        let coin = BalancedCoin::new(h, h, -PI / 2.0).unwrap();
        assert!((coin.theta() - 1.5 * PI).abs() < 1e-15);
        let coin = BalancedCoin::new(h, h, 5.0 * PI).unwrap();
        assert!((coin.theta() - PI).abs() < 1e-12);
        let coin = BalancedCoin::new(h, h, -1e-300).unwrap();
        assert!(coin.theta() >= 0.0 && coin.theta() < TAU);
    }

    #[test]
    fn invariant_family_membership() {
        assert!(BalancedCoin::invariant().is_invariant_family());
        assert!(!BalancedCoin::hadamard().is_invariant_family());
        assert!(!BalancedCoin::hybrid().is_invariant_family());
        let minus = BalancedCoin::new(c(FRAC_1_SQRT_2, 0.0), c(0.0, -FRAC_1_SQRT_2), 1.5 * PI).unwrap();
        assert!(minus.is_invariant_family());
        // γ = iα but with the phase belonging to the other sign
        let mismatched = BalancedCoin::new(c(FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2), 1.5 * PI).unwrap();
        assert!(!mismatched.is_invariant_family());
    }

    #[test]
    fn invariant_family_matches_basis_swap_symmetry() {
        // direct check: swapping labels of U|0> gives U|1>, i.e. σ_x U σ_x = U
        let x = CMatrix::pauli_x();
        for coin in [
            BalancedCoin::invariant(),
            BalancedCoin::new(c(FRAC_1_SQRT_2, 0.0), c(0.0, -FRAC_1_SQRT_2), 1.5 * PI).unwrap(),
            BalancedCoin::invariant().with_global_phase(0.7),
            BalancedCoin::hadamard(),
            BalancedCoin::hybrid(),
        ] {
            let m = coin.matrix();
            let swapped = &(&x * &m) * &x;
            let symmetric = swapped.max_abs_diff(&m) < 1e-12;
            assert_eq!(symmetric, coin.is_invariant_family(), "{coin:?}");
        }
    }

    #[test]
    fn special_property_reports() {
        let h = BalancedCoin::hadamard().special_properties();
        assert!(h.squares_to_identity && h.equals_pauli_sum && !h.squares_to_i_sigma_x);
        let i = BalancedCoin::invariant().special_properties();
        assert!(i.squares_to_i_sigma_x && !i.squares_to_identity && !i.equals_pauli_sum);
        let y = BalancedCoin::hybrid().special_properties();
        assert!(!y.squares_to_identity && !y.squares_to_i_sigma_x && !y.equals_pauli_sum);
    }

    #[test]
    fn unbalanced_coin_validation() {
        let coin = UnbalancedCoin::new(c(3f64.sqrt() / 2.0, 0.0), c(0.5, 0.0)).unwrap();
        assert!(coin.matrix().is_unitary());
        assert!(UnbalancedCoin::new(c(1.0, 0.0), c(0.5, 0.0)).is_err());
        let h = UnbalancedCoin::new(c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)).unwrap();
        assert!(h.matrix().max_abs_diff(&BalancedCoin::hadamard().matrix()) < 1e-15);
    }

    #[test]
    fn named_registry() {
        for name in NAMED_COINS {
            let coin = Coin::named(name).unwrap();
            assert!(coin.matrix().is_unitary());
        }
        assert!(Coin::named("grover").is_none());
    }
}
