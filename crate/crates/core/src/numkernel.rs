//! Dense complex linear-algebra kernels.
//!
//! Everything downstream works on [`CMatrix`]: operators are `d x d`,
//! superoperators `d² x d²`. Decompositions go through LAPACK; the matrix
//! exponential and principal logarithm are implemented here.

use ndarray::{Array1, Array2, Axis, ShapeBuilder};
use ndarray_linalg::{Eig, EigValsh, Eigh, Inverse, SVD, UPLO};
use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = Array2<C64>;
pub type CVector = Array1<C64>;

/// Eigenvector condition numbers above this are reported as non-diagonalizable.
pub const COND_MAX: f64 = 1e10;
/// Default Hermiticity tolerance for [`eig_hermitian`].
pub const TOL_HERM: f64 = 1e-10;
/// Eigenvalues below this modulus are treated as zero by [`logm_principal`].
pub const TOL_BRANCH: f64 = 1e-10;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(n: usize) -> CMatrix {
    Array2::eye(n)
}

/// Conjugate transpose.
pub fn dagger(a: &CMatrix) -> CMatrix {
    a.t().mapv(|z| z.conj())
}

pub fn square_dim(a: &CMatrix) -> Result<usize> {
    let (rows, cols) = a.dim();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    Ok(rows)
}

pub fn all_finite(a: &CMatrix) -> bool {
    a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

fn check_input(a: &CMatrix) -> Result<usize> {
    let n = square_dim(a)?;
    if !all_finite(a) {
        return Err(Error::NonFinite);
    }
    Ok(n)
}

/// Largest entry modulus.
pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().fold(0.0, |m, z| m.max(z.norm()))
}

pub fn frobenius(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn norm1(a: &CMatrix) -> f64 {
    a.axis_iter(Axis(1))
        .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `|u⟩⟨v|` for a column `u` and a row `v` (no conjugation applied to `v`).
pub fn outer(u: &CVector, v: &CVector) -> CMatrix {
    Array2::from_shape_fn((u.len(), v.len()), |(i, j)| u[i] * v[j])
}

pub fn diag(values: &[C64]) -> CMatrix {
    let mut out = Array2::zeros((values.len(), values.len()));
    for (i, v) in values.iter().enumerate() {
        out[[i, i]] = *v;
    }
    out
}

/// `(A + A†) / 2`, together with the largest entry of the anti-Hermitian part.
pub fn hermitize(a: &CMatrix) -> (CMatrix, f64) {
    let ad = dagger(a);
    let residual = max_abs(&((a - &ad) * 0.5));
    ((a + &ad) * 0.5, residual)
}

pub fn is_negative_real(lambda: C64) -> bool {
    lambda.re < 0.0 && lambda.im.abs() < 1e-10 * lambda.norm()
}

/// Diagonalization `A = R · diag(λ) · L` with `L = R⁻¹`.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub eigenvalues: CVector,
    /// Right eigenvectors as unit-norm columns.
    pub right: CMatrix,
    /// Left eigenvectors as rows.
    pub left: CMatrix,
    /// 2-norm condition number of `right`.
    pub condition: f64,
}

impl EigenSystem {
    pub fn reconstruct(&self) -> CMatrix {
        let scaled = &self.right * &self.eigenvalues.view().insert_axis(Axis(0));
        scaled.dot(&self.left)
    }

    pub fn right_vector(&self, k: usize) -> CVector {
        self.right.column(k).to_owned()
    }

    pub fn left_vector(&self, k: usize) -> CVector {
        self.left.row(k).to_owned()
    }
}

/// Phase in `(−π, π]`, with values within roundoff of `−π` folded to `π`.
fn phase(z: C64) -> f64 {
    let a = z.arg();
    if a < -PI + 1e-12 {
        PI
    } else {
        a
    }
}

/// Modulus rounded to twelve decimals so that roundoff does not split
/// eigenvalues of equal modulus.
fn modulus_key(z: C64) -> i64 {
    (z.norm() * 1e12).round() as i64
}

fn eig_order(a: C64, b: C64) -> std::cmp::Ordering {
    modulus_key(b).cmp(&modulus_key(a)).then(phase(a).total_cmp(&phase(b)))
}

/// General eigendecomposition, sorted by descending modulus and then by
/// ascending principal phase.
pub fn eig_general(a: &CMatrix, cond_max: f64) -> Result<EigenSystem> {
    let n = check_input(a)?;
    let (values, vectors) = a.eig()?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig_order(values[i], values[j]).then(i.cmp(&j)));

    let eigenvalues: CVector = order.iter().map(|&k| values[k]).collect();
    let mut right = CMatrix::zeros((n, n));
    for (dst, &src) in order.iter().enumerate() {
        let col = vectors.column(src);
        let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        // fix the gauge: unit norm, largest component real positive
        let pivot = col
            .iter()
            .enumerate()
            .fold((0, 0.0), |(bi, bv), (i, z)| if z.norm() > bv { (i, z.norm()) } else { (bi, bv) })
            .0;
        let phase = if col[pivot].norm() > 0.0 { col[pivot].conj() / col[pivot].norm() } else { C64::new(1.0, 0.0) };
        let scale = phase / norm;
        right.column_mut(dst).assign(&col.mapv(|z| z * scale));
    }

    let sv = singular_values(&right)?;
    let condition = if sv[n - 1] > 0.0 { sv[0] / sv[n - 1] } else { f64::INFINITY };
    if !(condition <= cond_max) {
        return Err(Error::NonDiagonalizable { condition });
    }
    let left = inverse(&right)?;
    Ok(EigenSystem { eigenvalues, right, left, condition })
}

/// Eigendecomposition of a Hermitian matrix: ascending real eigenvalues and
/// orthonormal eigenvector columns. The input is Hermitized first.
pub fn eig_hermitian(a: &CMatrix, tol_herm: f64) -> Result<(Array1<f64>, CMatrix)> {
    check_input(a)?;
    let (h, residual) = hermitize(a);
    if residual >= tol_herm {
        return Err(Error::NotHermitian { residual });
    }
    // The backend returns conjugated eigenvectors for row-major storage.
    let mut f = Array2::zeros(h.raw_dim().f());
    f.assign(&h);
    Ok(f.eigh(UPLO::Lower)?)
}

/// Ascending eigenvalues of the Hermitian part of `a`; no Hermiticity check.
pub fn eigvals_hermitian(a: &CMatrix) -> Result<Array1<f64>> {
    let (h, _) = hermitize(a);
    Ok(h.eigvalsh(UPLO::Lower)?)
}

/// Singular values in descending order.
pub fn singular_values(a: &CMatrix) -> Result<Array1<f64>> {
    let (_, s, _) = a.svd(false, false)?;
    Ok(s)
}

/// Sum of singular values.
pub fn trace_norm(a: &CMatrix) -> Result<f64> {
    if !all_finite(a) {
        return Err(Error::NonFinite);
    }
    Ok(singular_values(a)?.sum())
}

pub fn inverse(a: &CMatrix) -> Result<CMatrix> {
    check_input(a)?;
    let inv = a.inv()?;
    if !all_finite(&inv) {
        return Err(Error::NonFinite);
    }
    Ok(inv)
}

// Padé coefficients and switching thresholds from Higham (2005).
const PADE3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const PADE5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const PADE7: [f64; 8] = [17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0];
const PADE9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA: [(usize, f64); 4] = [
    (3, 1.495585217958292e-2),
    (5, 2.53939833006323e-1),
    (7, 9.504178996162932e-1),
    (9, 2.097847961257068e0),
];
const THETA13: f64 = 5.371920351148152;

/// Matrix exponential by scaling and squaring with a diagonal Padé approximant.
pub fn expm(a: &CMatrix) -> Result<CMatrix> {
    let n = check_input(a)?;
    let eye = identity(n);
    let a_norm = norm1(a);

    for &(m, theta) in &THETA {
        if a_norm <= theta {
            let coeffs: &[f64] = match m {
                3 => &PADE3,
                5 => &PADE5,
                7 => &PADE7,
                _ => &PADE9,
            };
            return pade_low(a, &eye, coeffs);
        }
    }

    let s = if a_norm > THETA13 { (a_norm / THETA13).log2().ceil() as i32 } else { 0 };
    let scaled = a * C64::new(2f64.powi(-s), 0.0);
    let mut r = pade13(&scaled, &eye)?;
    for _ in 0..s {
        r = r.dot(&r);
    }
    if !all_finite(&r) {
        return Err(Error::NonFinite);
    }
    Ok(r)
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn pade_solve(u: CMatrix, v: CMatrix) -> Result<CMatrix> {
    let p = &v + &u;
    let q = &v - &u;
    let r = inverse(&q)?.dot(&p);
    if !all_finite(&r) {
        return Err(Error::NonFinite);
    }
    Ok(r)
}

fn pade_low(a: &CMatrix, eye: &CMatrix, b: &[f64]) -> Result<CMatrix> {
    let a2 = a.dot(a);
    let mut power = eye.clone();
    let mut u_inner = eye * real(b[1]);
    let mut v = eye * real(b[0]);
    let m = b.len() - 1;
    for k in 1..=m / 2 {
        power = power.dot(&a2);
        u_inner = u_inner + &power * real(b[2 * k + 1]);
        v = v + &power * real(b[2 * k]);
    }
    pade_solve(a.dot(&u_inner), v)
}

fn pade13(a: &CMatrix, eye: &CMatrix) -> Result<CMatrix> {
    let b = &PADE13;
    let a2 = a.dot(a);
    let a4 = a2.dot(&a2);
    let a6 = a4.dot(&a2);
    let u_hi = &a6 * real(b[13]) + &a4 * real(b[11]) + &a2 * real(b[9]);
    let u_inner = a6.dot(&u_hi) + &a6 * real(b[7]) + &a4 * real(b[5]) + &a2 * real(b[3]) + eye * real(b[1]);
    let u = a.dot(&u_inner);
    let v_hi = &a6 * real(b[12]) + &a4 * real(b[10]) + &a2 * real(b[8]);
    let v = a6.dot(&v_hi) + &a6 * real(b[6]) + &a4 * real(b[4]) + &a2 * real(b[2]) + eye * real(b[0]);
    pade_solve(u, v)
}

/// Principal matrix logarithm of a diagonalizable matrix, with every
/// eigenvalue's logarithm taken with imaginary part in `(-π, π]`.
pub fn logm_principal(a: &CMatrix) -> Result<CMatrix> {
    let es = eig_general(a, COND_MAX)?;
    let mut logs = Vec::with_capacity(es.eigenvalues.len());
    for &lambda in es.eigenvalues.iter() {
        if lambda.norm() < TOL_BRANCH {
            return Err(Error::SingularEigenvalue { modulus: lambda.norm() });
        }
        if is_negative_real(lambda) {
            return Err(Error::NegativeRealEigenvalue { value: lambda.re });
        }
        logs.push(lambda.ln());
    }
    let scaled = &es.right * &CVector::from(logs).view().insert_axis(Axis(0));
    Ok(scaled.dot(&es.left))
}
