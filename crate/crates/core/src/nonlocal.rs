//! No-signalling and LOCC checks of the ensemble constraint.
//!
//! Alice and Bob share an entangled resource. Bob applies the coin to his
//! last qubit, using the hypothesised action on `|ψ>` and `|ψ̄>`:
//!
//! ```text
//! |0> -> U|0>      |ψ> -> α|ψ> + e^{iθ}α|ψ̄>
//! |1> -> U|1>      |ψ̄> -> γ|ψ> - e^{iθ}γ|ψ̄>
//! ```
//!
//! The rules are substituted term by term into the symbolic expansion of the
//! resource, so the result is not the linear action of `U` unless `(a, b)`
//! lies in the ensemble. Alice's reduced state then tells the two apart:
//! with the `3 ⊗ 2` resource it changes (signalling), and with the
//! `2 ⊗ 2 ⊗ 2` resources it acquires entanglement across the A:B cut.

use rayon::prelude::*;
use serde::Serialize;

use crate::coins::BalancedCoin;
use crate::ensemble::{real_coordinate_grid, satisfies_constraint, EnsembleState, CONSTRAINT_TOL};
use crate::error::{Error, Result};
use crate::format::sig;
use crate::linalg::{
    hermitian_eigenvalues, partial_trace, von_neumann_entropy, CMatrix, CVector, Complex, CONSTRUCTION_TOL,
    ZERO,
};

/// A:B entropies below this count as a product state.
pub const ENTROPY_TOL: f64 = 1e-9;

/// Elementwise `|ρ_A - ρ'_A|` below this counts as no signalling.
pub const SIGNALLING_TOL: f64 = CONSTRAINT_TOL;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ResourceKind {
    /// `(|00> + |1ψ> + |21>)/√3` on a qutrit and a qubit.
    Signalling,
    /// `|0>(|01> - |10>)/√2 + |1>(|0ψ> - |ψ0>)/√2`, normalised by `1/√(1 + |b|²)`.
    LoccPsi,
    /// As `LoccPsi` with `ψ̄` in place of `ψ`, normalised by `1/√(1 + |a|²)`.
    LoccPsibar,
}

impl ResourceKind {
    /// Subsystem dimensions, Alice first.
    pub fn dims(self) -> &'static [usize] {
        match self {
            ResourceKind::Signalling => &[3, 2],
            ResourceKind::LoccPsi | ResourceKind::LoccPsibar => &[2, 2, 2],
        }
    }
}

/// Which embedded state the LOCC resource carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Psi,
    Psibar,
}

impl Branch {
    pub fn resource(self) -> ResourceKind {
        match self {
            Branch::Psi => ResourceKind::LoccPsi,
            Branch::Psibar => ResourceKind::LoccPsibar,
        }
    }
}

/// Single-qubit kets appearing in the resource expansions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ket {
    Zero,
    One,
    Psi,
    PsiBar,
}

impl Ket {
    pub fn amplitudes(self, state: &EnsembleState) -> [Complex; 2] {
        let (a, b) = (state.a(), state.b());
        match self {
            Ket::Zero => [Complex::new(1.0, 0.0), ZERO],
            Ket::One => [ZERO, Complex::new(1.0, 0.0)],
            Ket::Psi => [a, b],
            Ket::PsiBar => [b.conj(), -a.conj()],
        }
    }

    /// Bob's hypothesised coin action.
    fn under_coin(self, coin: &BalancedCoin) -> [(Complex, Ket); 2] {
        let (alpha, gamma, e) = (coin.alpha(), coin.gamma(), coin.phase());
        match self {
            Ket::Zero => [(alpha, Ket::Zero), (e * alpha, Ket::One)],
            Ket::One => [(gamma, Ket::Zero), (-e * gamma, Ket::One)],
            Ket::Psi => [(alpha, Ket::Psi), (e * alpha, Ket::PsiBar)],
            Ket::PsiBar => [(gamma, Ket::Psi), (-e * gamma, Ket::PsiBar)],
        }
    }
}

/// `coefficient · |alice> ⊗ |bob[0]> ⊗ |bob[1]> ...`
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coefficient: Complex,
    pub alice: usize,
    pub bob: Vec<Ket>,
}

/// A shared resource in symbolic and expanded form.
#[derive(Clone, Debug, PartialEq)]
pub struct ResourceState {
    kind: ResourceKind,
    state: EnsembleState,
    terms: Vec<Term>,
    vector: CVector,
}

pub fn build_resource(kind: ResourceKind, state: &EnsembleState) -> Result<ResourceState> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let term = |c: f64, alice: usize, bob: &[Ket]| Term {
        coefficient: Complex::new(c, 0.0),
        alice,
        bob: bob.to_vec(),
    };
    let terms = match kind {
        ResourceKind::Signalling => {
            let s = 1.0 / 3f64.sqrt();
            vec![
                term(s, 0, &[Ket::Zero]),
                term(s, 1, &[Ket::Psi]),
                term(s, 2, &[Ket::One]),
            ]
        }
        ResourceKind::LoccPsi | ResourceKind::LoccPsibar => {
            let (embedded, weight) = if kind == ResourceKind::LoccPsi {
                (Ket::Psi, state.b())
            } else {
                (Ket::PsiBar, state.a())
            };
            if weight.norm() < CONSTRUCTION_TOL {
                let name = if kind == ResourceKind::LoccPsi { "b" } else { "a" };
                return Err(Error::param(name, "must be nonzero for this resource"));
            }
            let n = h / (1.0 + weight.norm_sqr()).sqrt();
            vec![
                term(n, 0, &[Ket::Zero, Ket::One]),
                term(-n, 0, &[Ket::One, Ket::Zero]),
                term(n, 1, &[Ket::Zero, embedded]),
                term(-n, 1, &[embedded, Ket::Zero]),
            ]
        }
    };
    let vector = expand(kind, state, &terms);
    Ok(ResourceState {
        kind,
        state: *state,
        terms,
        vector,
    })
}

fn expand(kind: ResourceKind, state: &EnsembleState, terms: &[Term]) -> CVector {
    let dims = kind.dims();
    let bob_dim: usize = dims[1..].iter().product();
    let mut out = CVector::zeros(dims.iter().product());
    for t in terms {
        let mut bob = vec![Complex::new(1.0, 0.0)];
        for ket in &t.bob {
            let amp = ket.amplitudes(state);
            bob = bob.iter().flat_map(|&x| [x * amp[0], x * amp[1]]).collect();
        }
        for (k, amp) in bob.into_iter().enumerate() {
            out[t.alice * bob_dim + k] += t.coefficient * amp;
        }
    }
    out
}

impl ResourceState {
    #[inline]
    pub fn kind(&self) -> ResourceKind {
        self.kind
    }

    #[inline]
    pub fn state(&self) -> &EnsembleState {
        &self.state
    }

    pub fn dims(&self) -> &'static [usize] {
        self.kind.dims()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn vector(&self) -> &CVector {
        &self.vector
    }

    /// Alice's reduced density matrix.
    pub fn alice_density(&self) -> Result<CMatrix> {
        partial_trace(&self.vector.projector(), self.dims(), 0)
    }

    /// Entropy of the A:B cut in bits.
    pub fn entanglement_entropy(&self) -> Result<f64> {
        von_neumann_entropy(&self.alice_density()?)
    }

    /// Bob applies the hypothesised coin action to his last qubit; the result
    /// is renormalised.
    pub fn bob_operation(&self, coin: &BalancedCoin) -> Result<ResourceState> {
        let mut terms = Vec::with_capacity(2 * self.terms.len());
        for t in &self.terms {
            let (last, rest) = t.bob.split_last().expect("Bob holds at least one qubit");
            for (c, ket) in last.under_coin(coin) {
                let mut bob = rest.to_vec();
                bob.push(ket);
                terms.push(Term {
                    coefficient: t.coefficient * c,
                    alice: t.alice,
                    bob,
                });
            }
        }
        let raw = expand(self.kind, &self.state, &terms);
        let norm = raw.norm();
        if norm < CONSTRUCTION_TOL {
            return Err(Error::Precondition("post-operation state vanishes".into()));
        }
        let scale = Complex::new(1.0 / norm, 0.0);
        for t in &mut terms {
            t.coefficient *= scale;
        }
        Ok(ResourceState {
            kind: self.kind,
            state: self.state,
            terms,
            vector: raw.scale(scale),
        })
    }
}

/// Alice's view before and after Bob's local operation on the qutrit-qubit resource.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SignallingReport {
    pub rho_a: CMatrix,
    pub rho_a_prime: CMatrix,
    /// `max_ij |ρ_A - ρ'_A|`
    pub max_deviation: f64,
    pub spectrum_before: Vec<f64>,
    pub spectrum_after: Vec<f64>,
    pub no_signalling: bool,
}

pub fn signalling_test(coin: &BalancedCoin, state: &EnsembleState) -> SignallingReport {
    let resource = build_resource(ResourceKind::Signalling, state).expect("signalling resource has no preconditions");
    let after = resource
        .bob_operation(coin)
        .expect("the signalling resource keeps unit norm");
    let rho_a = resource.alice_density().expect("resource is normalised");
    let rho_a_prime = after.alice_density().expect("resource is normalised");
    let max_deviation = rho_a.max_abs_diff(&rho_a_prime);
    SignallingReport {
        spectrum_before: hermitian_eigenvalues(&rho_a).expect("density matrices are Hermitian"),
        spectrum_after: hermitian_eigenvalues(&rho_a_prime).expect("density matrices are Hermitian"),
        no_signalling: max_deviation < SIGNALLING_TOL,
        rho_a,
        rho_a_prime,
        max_deviation,
    }
}

/// Closed-form entries of Alice's post-operation state on both branches:
/// `ρ'_A = (1/N) [[1, D*], [D, N - 1]]` and likewise with `(𝒩, 𝒟)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LoccCoefficients {
    pub n: f64,
    pub d: Complex,
    pub cal_n: f64,
    pub cal_d: Complex,
}

pub fn locc_coefficients(coin: &BalancedCoin, state: &EnsembleState) -> LoccCoefficients {
    let (a, b) = (state.a(), state.b());
    let (ac, bc) = (a.conj(), b.conj());
    let (alpha, gamma, e) = (coin.alpha(), coin.gamma(), coin.phase());
    let ec = e.conj();
    let re2 = a + ac;
    let n = 2.0 + 0.25 * ((a - ac) * (a - ac) - (ec * b + e * bc) * re2);
    let d = 0.5 * (alpha * gamma.conj() * (re2 - ec * b + e * bc) + b);
    let cal_n = 2.0
        - 0.5 * (gamma * alpha.conj() * b * (re2 + ec * b - e * bc) + alpha * gamma.conj() * bc * (re2 - ec * b + e * bc));
    let cal_d = 0.25 * (a - ac - ec * b - e * bc) - 0.5 * ac;
    LoccCoefficients {
        n: n.re,
        d,
        cal_n: cal_n.re,
        cal_d,
    }
}

/// `λ± = 1/2 ± sqrt(N² - 4(N - 1 - DD*)) / 2N`, returned as `[λ-, λ+]`.
pub fn closed_form_eigenvalues(n: f64, d: Complex) -> [f64; 2] {
    let disc = (n * n - 4.0 * (n - 1.0 - d.norm_sqr())).max(0.0);
    let half_width = disc.sqrt() / (2.0 * n);
    [0.5 - half_width, 0.5 + half_width]
}

/// `A·B - RHS` for the compact product forms of both branch conditions.
///
/// With `s = e^{-iθ}b + e^{iθ}b*`, `t = (γ/α)b + (α/γ)b*`, `w = e^{-iθ/2} sqrt(γ/α) b`:
/// `A = (a + a*) - s`, `RHS = -(w - w*)²`,
/// `B_psi = -¾(a + a*) + ¼s + ½t`, `B_psibar = -⅜(a + a*) - ⅛s + ½t`.
/// They equal `4(DD* - (N - 1))` and `2(𝒟𝒟* - (𝒩 - 1))` respectively.
pub fn compact_residuals(coin: &BalancedCoin, state: &EnsembleState) -> [f64; 2] {
    let (a, b) = (state.a(), state.b());
    let (alpha, gamma, e) = (coin.alpha(), coin.gamma(), coin.phase());
    let re2 = (a + a.conj()).re;
    let s = (e.conj() * b + e * b.conj()).re;
    let t = ((gamma / alpha) * b + (alpha / gamma) * b.conj()).re;
    let big_a = re2 - s;
    let w = Complex::from_polar(1.0, -0.5 * coin.theta()) * (gamma / alpha).sqrt() * b;
    let rhs = -((w - w.conj()) * (w - w.conj())).re;
    let b_psi = -0.75 * re2 + 0.25 * s + 0.5 * t;
    let b_psibar = -0.375 * re2 - 0.125 * s + 0.5 * t;
    [big_a * b_psi - rhs, big_a * b_psibar - rhs]
}

/// Everything `locc_test` computes for one branch.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstraintReport {
    pub branch: Branch,
    pub coefficients: LoccCoefficients,
    /// `DD*`
    pub dd: f64,
    /// `𝒟𝒟*`
    pub cal_dd: f64,
    /// Alice's state after Bob's operation, computed from the state vector.
    pub rho_a_prime: CMatrix,
    /// `max |ρ'_A - (1/N)[[1, D*], [D, N - 1]]|` with this branch's `(N, D)`.
    pub matrix_deviation: f64,
    /// `[λ-, λ+]` from the closed form.
    pub lambda_closed_form: [f64; 2],
    /// `[λ-, λ+]` from the eigensolver.
    pub lambda_numeric: [f64; 2],
    pub entropy_before: f64,
    pub entropy: f64,
    /// `DD* - (N - 1)` on this branch; never positive.
    pub gram_residual: f64,
    /// `[A·B_psi - RHS, A·B_psibar - RHS]`
    pub compact_residuals: [f64; 2],
    pub separable: bool,
}

impl ConstraintReport {
    pub fn eigenvalue_deviation(&self) -> f64 {
        (self.lambda_closed_form[0] - self.lambda_numeric[0])
            .abs()
            .max((self.lambda_closed_form[1] - self.lambda_numeric[1]).abs())
    }
}

pub fn locc_test(coin: &BalancedCoin, state: &EnsembleState, branch: Branch) -> Result<ConstraintReport> {
    let resource = build_resource(branch.resource(), state)?;
    let entropy_before = resource.entanglement_entropy()?;
    let after = resource.bob_operation(coin)?;
    let rho_a_prime = after.alice_density()?;
    let entropy = von_neumann_entropy(&rho_a_prime)?;
    let numeric = hermitian_eigenvalues(&rho_a_prime)?;

    let coefficients = locc_coefficients(coin, state);
    let (n, d) = match branch {
        Branch::Psi => (coefficients.n, coefficients.d),
        Branch::Psibar => (coefficients.cal_n, coefficients.cal_d),
    };
    let inv = Complex::new(1.0 / n, 0.0);
    let predicted = CMatrix::from_rows(&[
        [Complex::new(1.0, 0.0), d.conj()],
        [d, Complex::new(n - 1.0, 0.0)],
    ])?
    .scale(inv);

    Ok(ConstraintReport {
        branch,
        dd: coefficients.d.norm_sqr(),
        cal_dd: coefficients.cal_d.norm_sqr(),
        matrix_deviation: rho_a_prime.max_abs_diff(&predicted),
        lambda_closed_form: closed_form_eigenvalues(n, d),
        lambda_numeric: [numeric[0], numeric[1]],
        entropy_before,
        entropy,
        gram_residual: d.norm_sqr() - (n - 1.0),
        compact_residuals: compact_residuals(coin, state),
        separable: entropy < ENTROPY_TOL,
        coefficients,
        rho_a_prime,
    })
}

/// Both branches at once; `None` when `a` or `b` vanishes.
pub fn locc_pair(coin: &BalancedCoin, state: &EnsembleState) -> Result<Option<[ConstraintReport; 2]>> {
    if state.a().norm() < CONSTRUCTION_TOL || state.b().norm() < CONSTRUCTION_TOL {
        return Ok(None);
    }
    Ok(Some([
        locc_test(coin, state, Branch::Psi)?,
        locc_test(coin, state, Branch::Psibar)?,
    ]))
}

/// One evaluated lattice point of [`uniqueness_sweep`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepPoint {
    pub index: [usize; 3],
    pub state: EnsembleState,
    pub constraint: bool,
    pub psi_entropy: f64,
    pub psibar_entropy: f64,
    pub psi_residual: f64,
    pub psibar_residual: f64,
}

impl SweepPoint {
    pub fn in_psi_set(&self) -> bool {
        self.psi_entropy < ENTROPY_TOL
    }

    pub fn in_psibar_set(&self) -> bool {
        self.psibar_entropy < ENTROPY_TOL
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub resolution: usize,
    /// Lattice points with `a = 0` or `b = 0`, where a branch resource is undefined.
    pub skipped: usize,
    pub constraint_count: usize,
    pub psi_count: usize,
    pub psibar_count: usize,
    pub intersection_count: usize,
    /// Near-zero entropy on the psi branch but not on the psibar branch.
    pub psi_only_count: usize,
    pub psibar_only_count: usize,
    pub intersection_within_constraint: bool,
    pub constraint_within_intersection: bool,
    pub points: Vec<SweepPoint>,
}

impl SweepReport {
    pub fn intersection(&self) -> impl Iterator<Item = &SweepPoint> {
        self.points.iter().filter(|p| p.in_psi_set() && p.in_psibar_set())
    }

    pub fn psi_only(&self) -> impl Iterator<Item = &SweepPoint> {
        self.points.iter().filter(|p| p.in_psi_set() && !p.in_psibar_set())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "i,j,k,re_a,im_a,re_b,im_b,constraint,psi_entropy,psibar_entropy,psi_residual,psibar_residual\n",
        );
        for p in &self.points {
            let (a, b) = (p.state.a(), p.state.b());
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{}\n",
                p.index[0],
                p.index[1],
                p.index[2],
                sig(a.re),
                sig(a.im),
                sig(b.re),
                sig(b.im),
                p.constraint,
                sig(p.psi_entropy),
                sig(p.psibar_entropy),
                sig(p.psi_residual),
                sig(p.psibar_residual),
            ));
        }
        out
    }
}

/// Evaluates both LOCC branches over [`real_coordinate_grid`], in parallel,
/// keeping the grid order.
pub fn uniqueness_sweep(coin: &BalancedCoin, resolution: usize) -> Result<SweepReport> {
    if resolution < 10 {
        return Err(Error::param("resolution", format!("must be at least 10, got {resolution}")));
    }
    let grid = real_coordinate_grid(resolution);
    let evaluated: Vec<Option<SweepPoint>> = grid
        .par_iter()
        .map(|g| -> Result<Option<SweepPoint>> {
            let Some([psi, bar]) = locc_pair(coin, &g.state)? else {
                return Ok(None);
            };
            Ok(Some(SweepPoint {
                index: g.index,
                state: g.state,
                constraint: satisfies_constraint(&g.state, coin).satisfied,
                psi_entropy: psi.entropy,
                psibar_entropy: bar.entropy,
                psi_residual: psi.gram_residual,
                psibar_residual: bar.gram_residual,
            }))
        })
        .collect::<Result<_>>()?;
    let skipped = evaluated.iter().filter(|p| p.is_none()).count();
    let points: Vec<SweepPoint> = evaluated.into_iter().flatten().collect();

    let count = |f: &dyn Fn(&SweepPoint) -> bool| points.iter().filter(|p| f(p)).count();
    Ok(SweepReport {
        resolution,
        skipped,
        constraint_count: count(&|p| p.constraint),
        psi_count: count(&|p| p.in_psi_set()),
        psibar_count: count(&|p| p.in_psibar_set()),
        intersection_count: count(&|p| p.in_psi_set() && p.in_psibar_set()),
        psi_only_count: count(&|p| p.in_psi_set() && !p.in_psibar_set()),
        psibar_only_count: count(&|p| p.in_psibar_set() && !p.in_psi_set()),
        intersection_within_constraint: points
            .iter()
            .all(|p| !(p.in_psi_set() && p.in_psibar_set()) || p.constraint),
        constraint_within_intersection: points
            .iter()
            .all(|p| !p.constraint || (p.in_psi_set() && p.in_psibar_set())),
        points,
    })
}
