//! Superoperator conventions and builders.
//!
//! Vectorization is row-major: the basis operator `|i⟩⟨j|` of a `d`-level
//! system maps to index `i·d + j`. Under this convention `ρ ↦ AρB` is the
//! Kronecker product `A ⊗ Bᵀ`, and all reshuffles below are stated in it.

use ndarray::{linalg::kron, Array1, Array2};

use crate::error::{Error, Result};
use crate::numkernel::{c, dagger, hermitize, identity, max_abs, square_dim, CMatrix, CVector, C64, I};

/// `d` such that `n = d²`.
pub fn hilbert_dim(n: usize) -> Result<usize> {
    let d = (n as f64).sqrt().round() as usize;
    if d * d != n {
        return Err(Error::NotPerfectSquare(n));
    }
    Ok(d)
}

/// Superoperator dimension check; returns the Hilbert-space dimension.
pub fn superop_dim(s: &CMatrix) -> Result<usize> {
    hilbert_dim(square_dim(s)?)
}

pub fn vec(rho: &CMatrix) -> Result<CVector> {
    square_dim(rho)?;
    Ok(rho.iter().copied().collect())
}

pub fn unvec(v: &CVector) -> Result<CMatrix> {
    let d = hilbert_dim(v.len())?;
    Ok(Array2::from_shape_fn((d, d), |(i, j)| v[i * d + j]))
}

/// `vec(X†)` for `v = vec(X)`; the antilinear flip acting on a vector.
/// The same index map applies to a left (row) vector.
pub fn flip_vector(v: &CVector) -> Result<CVector> {
    let d = hilbert_dim(v.len())?;
    Ok(Array1::from_shape_fn(v.len(), |k| {
        let (i, j) = (k / d, k % d);
        v[j * d + i].conj()
    }))
}

/// Superoperator of `ρ ↦ A ρ B`.
pub fn sandwich_superop(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    let d = square_dim(a)?;
    let db = square_dim(b)?;
    if d != db {
        return Err(Error::DimensionMismatch { expected: d, got: db });
    }
    Ok(kron(a, &b.t().to_owned()))
}

/// `ρ ↦ -i[H, ρ]`.
pub fn commutator_superop(h: &CMatrix) -> Result<CMatrix> {
    let d = square_dim(h)?;
    let eye = identity(d);
    let left = sandwich_superop(h, &eye)?;
    let right = sandwich_superop(&eye, h)?;
    Ok((left - right) * (-I))
}

/// `ρ ↦ LρL† − ½{L†L, ρ}`.
pub fn dissipator_superop(jump: &CMatrix) -> Result<CMatrix> {
    let d = square_dim(jump)?;
    let eye = identity(d);
    let ld = dagger(jump);
    let ldl = ld.dot(jump);
    let gain = sandwich_superop(jump, &ld)?;
    let loss = sandwich_superop(&ldl, &eye)? + sandwich_superop(&eye, &ldl)?;
    Ok(gain - loss * c(0.5, 0.0))
}

/// Lindbladian `-i[H,·] + Σ_k r_k (L_k · L_k† − ½{L_k†L_k, ·})`.
pub fn lindbladian_superop(h: &CMatrix, jumps: &[(CMatrix, f64)]) -> Result<CMatrix> {
    let d = square_dim(h)?;
    let (_, residual) = hermitize(h);
    if residual > 1e-10 {
        return Err(Error::NotHermitian { residual });
    }
    let mut out = commutator_superop(h)?;
    for (jump, rate) in jumps {
        if *rate < 0.0 {
            return Err(Error::NegativeRate(*rate));
        }
        let dj = square_dim(jump)?;
        if dj != d {
            return Err(Error::DimensionMismatch { expected: d, got: dj });
        }
        out = out + dissipator_superop(jump)? * c(*rate, 0.0);
    }
    Ok(out)
}

/// Choi reshuffle `C[i·d+k, j·d+l] = S[i·d+j, k·d+l]`; an involution.
pub fn choi(s: &CMatrix) -> Result<CMatrix> {
    let d = superop_dim(s)?;
    Ok(Array2::from_shape_fn((d * d, d * d), |(row, col)| {
        let (i, k) = (row / d, row % d);
        let (j, l) = (col / d, col % d);
        s[[i * d + j, k * d + l]]
    }))
}

/// Projector onto `|Ω⟩ = d^{-1/2} Σ_j |j⟩⊗|j⟩`.
pub fn max_entangled_projector(d: usize) -> CMatrix {
    let value = c(1.0 / d as f64, 0.0);
    Array2::from_shape_fn((d * d, d * d), |(row, col)| {
        if row / d == row % d && col / d == col % d {
            value
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// `𝔽 S 𝔽` for the antilinear flip `𝔽 vec(X) = vec(X†)`:
/// `(𝔽S𝔽)[(a,b),(k,l)] = conj(S[(b,a),(l,k)])`.
pub fn flip_conjugate(s: &CMatrix) -> Result<CMatrix> {
    let d = superop_dim(s)?;
    Ok(Array2::from_shape_fn((d * d, d * d), |(row, col)| {
        let (a, b) = (row / d, row % d);
        let (k, l) = (col / d, col % d);
        s[[b * d + a, l * d + k]].conj()
    }))
}

/// Generator `Z = P − 1` of the depolarizing semigroup, `P = |1⟩⟩⟨⟨1| / d`.
pub fn depolarizing_generator(d: usize) -> CMatrix {
    let v = vec(&identity(d)).expect("square");
    let p = Array2::from_shape_fn((d * d, d * d), |(i, j)| v[i] * v[j].conj() / d as f64);
    p - identity(d * d)
}

/// Largest entry of `⟨⟨1| S`; zero for trace-preserving maps and
/// trace-annihilating generators.
pub fn trace_residual(s: &CMatrix, target: Option<&CVector>) -> Result<f64> {
    let d = superop_dim(s)?;
    let v = vec(&identity(d))?;
    let row = v.mapv(|z| z.conj()).dot(s);
    let diff = match target {
        Some(t) => row - t,
        None => row,
    };
    Ok(diff.iter().fold(0.0, |m, z| m.max(z.norm())))
}

/// Generator check: `⟨⟨1| S = 0`.
pub fn generator_trace_residual(s: &CMatrix) -> Result<f64> {
    trace_residual(s, None)
}

/// Map check: `⟨⟨1| V = ⟨⟨1|`.
pub fn map_trace_residual(v: &CMatrix) -> Result<f64> {
    let d = superop_dim(v)?;
    let target = vec(&identity(d))?;
    trace_residual(v, Some(&target))
}

/// `max |𝔽S𝔽 − S|`; zero iff `S` preserves Hermiticity.
pub fn hermiticity_residual(s: &CMatrix) -> Result<f64> {
    Ok(max_abs(&(flip_conjugate(s)? - s)))
}

/// Normalized generalized Gell-Mann matrices (`Tr F_i†F_j = δ_ij`, traceless).
///
/// Order: symmetric `(E_jk + E_kj)/√2` for `j < k` lexicographic, then
/// antisymmetric `(−iE_jk + iE_kj)/√2` in the same order, then diagonal
/// `diag(1,…,1,−l,0,…)/√(l(l+1))` for `l = 1..d−1`.
pub fn gell_mann_basis(d: usize) -> Vec<CMatrix> {
    let mut basis = Vec::with_capacity(d * d - 1);
    let s = 1.0 / 2f64.sqrt();
    for j in 0..d {
        for k in j + 1..d {
            let mut m = CMatrix::zeros((d, d));
            m[[j, k]] = c(s, 0.0);
            m[[k, j]] = c(s, 0.0);
            basis.push(m);
        }
    }
    for j in 0..d {
        for k in j + 1..d {
            let mut m = CMatrix::zeros((d, d));
            m[[j, k]] = c(0.0, -s);
            m[[k, j]] = c(0.0, s);
            basis.push(m);
        }
    }
    for l in 1..d {
        let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
        let mut m = CMatrix::zeros((d, d));
        for i in 0..l {
            m[[i, i]] = c(norm, 0.0);
        }
        m[[l, l]] = c(-(l as f64) * norm, 0.0);
        basis.push(m);
    }
    basis
}

/// `S[·] = -i[H,·] + Σ_ij G_ij (F_i · F_j† − ½{F_j†F_i, ·})`.
#[derive(Debug, Clone)]
pub struct KossakowskiForm {
    pub hamiltonian: CMatrix,
    pub kossakowski: CMatrix,
    pub basis: Vec<CMatrix>,
}

impl KossakowskiForm {
    pub fn to_superop(&self) -> Result<CMatrix> {
        let d = square_dim(&self.hamiltonian)?;
        let eye = identity(d);
        let mut out = commutator_superop(&self.hamiltonian)?;
        for (i, fi) in self.basis.iter().enumerate() {
            for (j, fj) in self.basis.iter().enumerate() {
                let g = self.kossakowski[[i, j]];
                if g.norm() == 0.0 {
                    continue;
                }
                let fjd = dagger(fj);
                let anti = fjd.dot(fi);
                let term = sandwich_superop(fi, &fjd)?
                    - (sandwich_superop(&anti, &eye)? + sandwich_superop(&eye, &anti)?) * c(0.5, 0.0);
                out = out + term * g;
            }
        }
        Ok(out)
    }
}

/// Decompose a Hermiticity- and trace-preserving generator into GKSL form
/// over the Gell-Mann basis. The Hamiltonian comes out traceless.
pub fn gksl_decompose(s: &CMatrix) -> Result<KossakowskiForm> {
    let d = superop_dim(s)?;
    let herm = hermiticity_residual(s)?;
    if herm > 1e-8 {
        return Err(Error::NotHermiticityPreserving { residual: herm });
    }
    let tr = generator_trace_residual(s)?;
    if tr > 1e-8 {
        return Err(Error::NotTracePreserving { residual: tr });
    }

    // Full orthonormal operator basis: F_0 = 1/√d followed by Gell-Mann.
    let basis = gell_mann_basis(d);
    let mut full = Vec::with_capacity(d * d);
    full.push(identity(d) * c(1.0 / (d as f64).sqrt(), 0.0));
    full.extend(basis.iter().cloned());
    let vecs: Vec<CVector> = full.iter().map(|f| vec(f).expect("square")).collect();

    // S = Σ c_ij F_i ⊗ conj(F_j)  ⇔  choi(S) = Σ c_ij vec(F_i) vec(F_j)†
    let ch = choi(s)?;
    let n = d * d;
    let coeff = Array2::from_shape_fn((n, n), |(i, j)| {
        vecs[i].mapv(|z| z.conj()).dot(&ch.dot(&vecs[j]))
    });
    let (coeff, _) = hermitize(&coeff);

    let kossakowski = coeff.slice(ndarray::s![1.., 1..]).to_owned();
    // K = c_00/(2d) + d^{-1/2} Σ_i c_i0 F_i;  H = i(K − K†)/2
    let mut k_op = identity(d) * (coeff[[0, 0]] / (2.0 * d as f64));
    for (i, f) in basis.iter().enumerate() {
        k_op = k_op + f * (coeff[[i + 1, 0]] / (d as f64).sqrt());
    }
    let hamiltonian = (&k_op - &dagger(&k_op)) * (I * 0.5);
    let (hamiltonian, _) = hermitize(&hamiltonian);
    Ok(KossakowskiForm { hamiltonian, kossakowski, basis })
}
