//! Shared dense complex linear algebra kernels.
//!
//! Everything here is deterministic: factorizations are followed by a fixed
//! sign/phase normalization so that repeated runs (and parallel fiber maps)
//! produce identical bytes.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

const SVD_EPS: f64 = 1e-13;
const SVD_ITER: usize = 4096;

pub fn frobenius(m: &CMat) -> f64 {
    m.norm()
}

/// Largest singular value; 0 for empty matrices.
pub fn operator_norm(m: &CMat) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    m.singular_values().max()
}

/// Smallest singular value of `m` viewed as a map from its column space,
/// i.e. the `ncols`-th singular value. 0 when `nrows < ncols`.
pub fn sigma_min(m: &CMat) -> f64 {
    if m.ncols() == 0 {
        return f64::INFINITY;
    }
    if m.nrows() < m.ncols() {
        return 0.0;
    }
    let sv = m.singular_values();
    sv.iter().cloned().fold(f64::INFINITY, f64::min)
}

pub struct Svd {
    pub u: CMat,
    pub sigma: Vec<f64>,
    pub v_t: CMat,
}

pub fn svd(m: &CMat) -> Result<Svd> {
    let svd = m
        .clone()
        .try_svd(true, true, SVD_EPS, SVD_ITER)
        .ok_or_else(|| Error::Numerical("SVD did not converge".into()))?;
    Ok(Svd {
        u: svd.u.unwrap(),
        sigma: svd.singular_values.iter().cloned().collect(),
        v_t: svd.v_t.unwrap(),
    })
}

/// Rotate each column so that its largest-magnitude entry is real positive;
/// ties are broken by the lowest row index. Columns of zero norm are left
/// untouched.
pub fn fix_column_phases(m: &mut CMat) {
    for j in 0..m.ncols() {
        let mut best = 0usize;
        let mut best_mag = 0.0f64;
        for i in 0..m.nrows() {
            let mag = m[(i, j)].norm();
            if mag > best_mag {
                best_mag = mag;
                best = i;
            }
        }
        if best_mag > 0.0 {
            let p = m[(best, j)];
            if p.im == 0.0 && p.re > 0.0 {
                continue; // already normalized; skipping keeps this bitwise idempotent
            }
            let factor = p.conj();
            for i in 0..m.nrows() {
                let v = m[(i, j)] * factor;
                m[(i, j)] = Complex64::new(v.re / best_mag, v.im / best_mag);
            }
        }
    }
}

/// Orthonormal basis of the column space of `m`, with the numerical rank
/// decided by `sigma <= threshold` where `threshold` defaults to the rule in
/// [`tol::rank_threshold`].
pub fn orthonormal_range(m: &CMat, threshold: Option<f64>) -> Result<CMat> {
    if m.ncols() == 0 || m.nrows() == 0 {
        return Ok(CMat::zeros(m.nrows(), 0));
    }
    let f = svd(m)?;
    let sigma_max = f.sigma.first().cloned().unwrap_or(0.0);
    let thresh = threshold.unwrap_or_else(|| tol::rank_threshold(m.nrows(), m.ncols(), sigma_max));
    let rank = f.sigma.iter().filter(|&&s| s > thresh).count();
    let mut basis = f.u.columns(0, rank).into_owned();
    fix_column_phases(&mut basis);
    Ok(basis)
}

/// Orthonormal basis of the null space of `m` (as a map on C^ncols).
pub fn null_space(m: &CMat, threshold: Option<f64>) -> Result<CMat> {
    let cols = m.ncols();
    if cols == 0 {
        return Ok(CMat::zeros(0, 0));
    }
    if m.nrows() == 0 {
        return Ok(CMat::identity(cols, cols));
    }
    let f = svd(m)?;
    let sigma_max = f.sigma.first().cloned().unwrap_or(0.0);
    let thresh = threshold.unwrap_or_else(|| tol::rank_threshold(m.nrows(), m.ncols(), sigma_max));
    let rank = f.sigma.iter().filter(|&&s| s > thresh).count();
    if rank == cols {
        return Ok(CMat::zeros(cols, 0));
    }
    // The SVD only exposes min(rows, cols) right singular vectors, so build
    // the null space as the complement of the row space instead.
    let v = f.v_t.adjoint();
    let row_basis = v.columns(0, rank).into_owned();
    let complement = CMat::identity(cols, cols) - &row_basis * row_basis.adjoint();
    let basis = orthonormal_range(&complement, None)?;
    debug_assert_eq!(basis.ncols(), cols - rank);
    Ok(basis)
}

/// Eigendecomposition of a Hermitian matrix: ascending real eigenvalues and
/// the matching unitary, phase-normalized for determinism.
pub fn hermitian_eigen(m: &CMat) -> Result<(Vec<f64>, CMat)> {
    let n = m.nrows();
    if n == 0 {
        return Ok((Vec::new(), CMat::zeros(0, 0)));
    }
    let se = m
        .clone()
        .try_symmetric_eigen(SVD_EPS, SVD_ITER)
        .ok_or_else(|| Error::Numerical("Hermitian eigendecomposition did not converge".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
    let values: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut vectors = CMat::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        vectors.set_column(k, &se.eigenvectors.column(i));
    }
    fix_column_phases(&mut vectors);
    Ok((values, vectors))
}

/// Eigenvalues of a general complex square matrix via the complex Schur
/// form, sorted by (re, im) for reproducibility.
pub fn eigenvalues(m: &CMat) -> Result<Vec<Complex64>> {
    let n = m.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![m[(0, 0)]]);
    }
    let schur = m
        .clone()
        .try_schur(SVD_EPS, SVD_ITER)
        .ok_or_else(|| Error::Numerical("Schur decomposition did not converge".into()))?;
    let (_, t) = schur.unpack();
    let mut ev: Vec<Complex64> = (0..n).map(|i| t[(i, i)]).collect();
    sort_complex(&mut ev);
    Ok(ev)
}

pub fn sort_complex(v: &mut [Complex64]) {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// Unitary diagonalization of a normal matrix via its complex Schur form.
/// The Schur factor of a normal matrix is diagonal up to roundoff; the
/// residual off-diagonal mass is checked against `tol * scale`.
pub fn normal_diagonalize(m: &CMat, tol_rel: f64) -> Result<(Vec<Complex64>, CMat)> {
    let n = m.nrows();
    if n == 0 {
        return Ok((Vec::new(), CMat::zeros(0, 0)));
    }
    let schur = m
        .clone()
        .try_schur(SVD_EPS, SVD_ITER)
        .ok_or_else(|| Error::Numerical("Schur decomposition did not converge".into()))?;
    let (q, t) = schur.unpack();
    let mut off = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                off += t[(i, j)].norm_sqr();
            }
        }
    }
    let scale = frobenius(m).max(1e-300);
    if off.sqrt() > tol_rel.max(1e-12) * scale {
        return Err(Error::ModeNotApplicable(format!(
            "Schur form has off-diagonal mass {:.3e}",
            off.sqrt()
        )));
    }
    let eigs: Vec<Complex64> = (0..n).map(|i| t[(i, i)]).collect();
    Ok((eigs, q))
}

/// Hermitian square root of a PSD matrix. Eigenvalues in `[-clamp, 0)` are
/// clamped to zero (relative to the matrix norm); anything lower is an error.
pub fn psd_sqrt(m: &CMat, atom: usize, clamp_rel: f64) -> Result<CMat> {
    psd_power(m, atom, clamp_rel, |x| x.sqrt())
}

/// Apply a scalar function to the clamped eigenvalues of a Hermitian PSD
/// matrix and reassemble.
pub fn psd_power(m: &CMat, atom: usize, clamp_rel: f64, f: impl Fn(f64) -> f64) -> Result<CMat> {
    let n = m.nrows();
    if n == 0 {
        return Ok(CMat::zeros(0, 0));
    }
    let (values, q) = hermitian_eigen(m)?;
    let scale = values.iter().fold(0.0f64, |a, &v| a.max(v.abs())).max(1.0);
    let clamp = clamp_rel * scale;
    let mut lam = CMat::zeros(n, n);
    for (i, &v) in values.iter().enumerate() {
        if v < -clamp {
            return Err(Error::NotPsd {
                atom,
                eigenvalue: v,
            });
        }
        lam[(i, i)] = Complex64::new(f(v.max(0.0)), 0.0);
    }
    Ok(&q * lam * q.adjoint())
}

/// Polar decomposition `m = u p` with `u` a partial isometry (extended by
/// zero on the kernel) and `p` Hermitian PSD.
pub fn polar(m: &CMat) -> Result<(CMat, CMat)> {
    let f = svd(m)?;
    let sigma_max = f.sigma.first().cloned().unwrap_or(0.0);
    let thresh = tol::rank_threshold(m.nrows(), m.ncols(), sigma_max);
    let k = f.sigma.len();
    let mut u = CMat::zeros(m.nrows(), m.ncols());
    let mut p = CMat::zeros(m.ncols(), m.ncols());
    for j in 0..k {
        let wj = f.u.column(j).into_owned();
        let vj_adj = f.v_t.row(j).into_owned(); // v_j^* as a row
        if f.sigma[j] > thresh {
            u += &wj * &vj_adj;
        }
        p += vj_adj.adjoint() * &vj_adj * Complex64::new(f.sigma[j], 0.0);
    }
    Ok((u, p))
}

/// Evaluate a matrix polynomial `sum_j coeffs[j] m^j` by Horner's rule.
pub fn matrix_polynomial(m: &CMat, coeffs: &[Complex64]) -> CMat {
    let n = m.nrows();
    if coeffs.is_empty() {
        return CMat::zeros(n, n);
    }
    let mut acc = CMat::identity(n, n) * coeffs[coeffs.len() - 1];
    for c in coeffs.iter().rev().skip(1) {
        acc = m * acc;
        for i in 0..n {
            acc[(i, i)] += c;
        }
    }
    acc
}
