use super::{hermitian_eigenvalues, CMatrix, CVector, DERIVED_TOL};
use crate::error::{Error, Result};

/// Eigenvalues down to `-PSD_CLAMP_TOL` are treated as rounding noise and
/// clamped to zero before the entropy is evaluated.
pub const PSD_CLAMP_TOL: f64 = 1e-9;

/// Traces out every subsystem except `keep`.
///
/// `dims` lists the subsystem dimensions with the first entry as the most
/// significant tensor factor, matching [`CVector::kron`] and [`CMatrix::kron`].
pub fn partial_trace(rho: &CMatrix, dims: &[usize], keep: usize) -> Result<CMatrix> {
    rho.require_square()?;
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::DimensionMismatch(format!(
            "subsystem dimensions must be positive, got {dims:?}"
        )));
    }
    let total: usize = dims.iter().product();
    if total != rho.rows() {
        return Err(Error::DimensionMismatch(format!(
            "subsystem dimensions {dims:?} multiply to {total}, matrix is {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    if keep >= dims.len() {
        return Err(Error::DimensionMismatch(format!(
            "subsystem index {keep} out of range for {} subsystems",
            dims.len()
        )));
    }
    rho.require_hermitian()?;

    let kept = dims[keep];
    let left: usize = dims[..keep].iter().product();
    let right: usize = dims[keep + 1..].iter().product();
    let block = kept * right;

    let mut out = CMatrix::zeros(kept, kept);
    for i in 0..kept {
        for j in 0..kept {
            let mut acc = super::ZERO;
            for l in 0..left {
                for r in 0..right {
                    acc += rho[(l * block + i * right + r, l * block + j * right + r)];
                }
            }
            out[(i, j)] = acc;
        }
    }
    Ok(out)
}

/// Reduced density matrix of the pure state `psi` on subsystem `keep`.
pub fn reduced_density_matrix(psi: &CVector, dims: &[usize], keep: usize) -> Result<CMatrix> {
    partial_trace(&psi.projector(), dims, keep)
}

/// Von Neumann entropy `-Σ λ log2 λ` in bits.
pub fn von_neumann_entropy(rho: &CMatrix) -> Result<f64> {
    rho.require_hermitian()?;
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > DERIVED_TOL || tr.im.abs() > DERIVED_TOL {
        return Err(Error::InvalidTrace(tr.re));
    }
    let spectrum = hermitian_eigenvalues(rho)?;
    let min = spectrum.first().copied().unwrap_or(0.0);
    if min < -PSD_CLAMP_TOL {
        return Err(Error::NotPositive(min));
    }
    Ok(spectrum
        .into_iter()
        .filter(|&l| l > 0.0)
        .map(|l| -l * l.log2())
        .sum::<f64>()
        .max(0.0))
}
