//! Equal-superposition qubit coins.
//!
//! A balanced coin `U(α, γ, θ)` maps a qubit `|ψ>` to the equal-weight
//! superposition `α|ψ> + e^{iθ}α|ψ̄>` of itself and its complement only for a
//! restricted ensemble of states. This crate checks that ensemble three ways
//! (linearity, no-signalling, LOCC) and simulates the discrete-time quantum
//! walks driven by such coins.
//!
//! ```
//! use equal_superposition::{coins::BalancedCoin, walk};
//!
//! let coin = BalancedCoin::hadamard();
//! let dist = walk::run(walk::InitialCoinState::up_state(), &coin.matrix(), 3).unwrap();
//! assert!((dist.get(1) - 0.625).abs() < 1e-12);
//! ```

pub mod cli;
pub mod coins;
pub mod ensemble;
pub mod error;
pub mod format;
pub mod linalg;
pub mod nonlocal;
pub mod walk;

pub use coins::{BalancedCoin, Coin, UnbalancedCoin};
pub use ensemble::EnsembleState;
pub use error::{Error, Result};
