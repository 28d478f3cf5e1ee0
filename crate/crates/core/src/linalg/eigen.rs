//! Eigenvalues of small Hermitian matrices.
//!
//! 2x2 inputs use the closed form; anything larger goes through cyclic
//! complex Jacobi rotations. Each rotation first removes the phase of the
//! pivot `a_pq` with a diagonal unitary and then applies the classical real
//! Jacobi rotation in the `(p, q)` plane.

use super::{CMatrix, Complex, ZERO};
use crate::error::{Error, Result};

/// Sweeps are stopped once the off-diagonal Frobenius norm falls below this,
/// relative to `max(1, ||M||_F)`.
pub const JACOBI_OFF_DIAGONAL_TOL: f64 = 1e-14;

/// Exhausting this many sweeps is reported as [`Error::NoConvergence`].
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Real eigenvalues of a Hermitian matrix, sorted ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Result<Vec<f64>> {
    m.require_hermitian()?;
    let n = m.rows();
    let mut values = match n {
        1 => vec![m[(0, 0)].re],
        2 => closed_form_2x2(m).to_vec(),
        _ => jacobi(m)?,
    };
    values.sort_by(f64::total_cmp);
    Ok(values)
}

fn closed_form_2x2(m: &CMatrix) -> [f64; 2] {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    // average the two off-diagonal entries so tiny asymmetries do not bias the result
    let b = 0.5 * (m[(0, 1)] + m[(1, 0)].conj());
    let mean = 0.5 * (a + d);
    let half_gap = 0.5 * (a - d);
    let radius = half_gap.hypot(b.norm());
    [mean - radius, mean + radius]
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.rows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

fn jacobi(m: &CMatrix) -> Result<Vec<f64>> {
    let n = m.rows();
    // start from the exactly Hermitian part
    let mut a = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            a[(i, j)] = 0.5 * (m[(i, j)] + m[(j, i)].conj());
        }
        a[(i, i)] = Complex::new(a[(i, i)].re, 0.0);
    }
    let threshold = JACOBI_OFF_DIAGONAL_TOL * a.frobenius_norm().max(1.0);

    let mut off = off_diagonal_norm(&a);
    let mut sweeps = 0;
    while off >= threshold {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off,
            });
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, p, q);
            }
        }
        sweeps += 1;
        off = off_diagonal_norm(&a);
    }
    Ok((0..n).map(|i| a[(i, i)].re).collect())
}

/// Zeroes `a[(p, q)]` and `a[(q, p)]` with a unitary similarity `W^dagger A W`.
fn rotate(a: &mut CMatrix, p: usize, q: usize) {
    let g = a[(p, q)];
    let r = g.norm();
    if r == 0.0 {
        return;
    }
    let unit = g / r;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // W = diag(1, conj(unit)) * [[c, s], [-s, c]] restricted to the (p, q) plane
    let w_pp = Complex::new(c, 0.0);
    let w_pq = Complex::new(s, 0.0);
    let w_qp = -s * unit.conj();
    let w_qq = c * unit.conj();

    let n = a.rows();
    for k in 0..n {
        let x = a[(k, p)];
        let y = a[(k, q)];
        a[(k, p)] = x * w_pp + y * w_qp;
        a[(k, q)] = x * w_pq + y * w_qq;
    }
    for k in 0..n {
        let x = a[(p, k)];
        let y = a[(q, k)];
        a[(p, k)] = w_pp.conj() * x + w_qp.conj() * y;
        a[(q, k)] = w_pq.conj() * x + w_qq.conj() * y;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = Complex::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex::new(a[(q, q)].re, 0.0);
}
