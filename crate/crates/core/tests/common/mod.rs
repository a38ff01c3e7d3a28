//! Oracles and fixtures shared by the integration tests and the acceptance
//! suite. Nothing here calls into the CCP machinery under test.

#![allow(dead_code)]

use ndarray::Array2;
use ndarray_linalg::{EigValsh, UPLO};
use rand::Rng;
use rand_distr::StandardNormal;

use unwind_core::numkernel::{CMatrix, C64};
use unwind_core::superop::lindbladian_superop;

pub fn gaussian_matrix<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    Array2::from_shape_fn((n, n), |_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
}

/// Random Hermitian matrix with entries of order `scale`.
pub fn random_hermitian<R: Rng>(rng: &mut R, n: usize, scale: f64) -> CMatrix {
    let a = gaussian_matrix(rng, n);
    (&a + &a.t().mapv(|z| z.conj())) * C64::new(scale / 2.0, 0.0)
}

/// `−i[H,·] + Σ_k γ_k D[L_k]` with Gaussian `H`, `n_jumps` Gaussian jump
/// operators and rates uniform in `rates`.
pub fn random_lindbladian<R: Rng>(rng: &mut R, d: usize, h_scale: f64, n_jumps: usize, rates: (f64, f64)) -> CMatrix {
    let h = random_hermitian(rng, d, h_scale);
    let jumps: Vec<(CMatrix, f64)> = (0..n_jumps)
        .map(|_| {
            let l = gaussian_matrix(rng, d) * C64::new(1.0 / (d as f64).sqrt(), 0.0);
            (l, rng.random_range(rates.0..rates.1))
        })
        .collect();
    lindbladian_superop(&h, &jumps).expect("valid Lindbladian")
}

/// Choi matrix straight from the reshuffle definition,
/// `C[(i,k),(j,l)] = S[(i,j),(k,l)]`.
pub fn choi_by_definition(s: &CMatrix) -> CMatrix {
    let d = (s.nrows() as f64).sqrt().round() as usize;
    let mut c = CMatrix::zeros(s.raw_dim());
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                for l in 0..d {
                    c[[i * d + k, j * d + l]] = s[[i * d + j, k * d + l]];
                }
            }
        }
    }
    c
}

/// `ρ ↦ tr(ρ)·1/d − ρ` in the row-major vectorization.
pub fn depolarizer(d: usize) -> CMatrix {
    let n = d * d;
    Array2::from_shape_fn((n, n), |(a, b)| {
        let (i, j) = (a / d, a % d);
        let (k, l) = (b / d, b % d);
        let trace_part = if i == j && k == l { 1.0 / d as f64 } else { 0.0 };
        let ident = if a == b { 1.0 } else { 0.0 };
        C64::new(trace_part - ident, 0.0)
    })
}

/// Orthonormal basis of the complement of the maximally entangled vector,
/// as columns.
fn complement_basis(d: usize) -> CMatrix {
    let n = d * d;
    let omega: Vec<C64> = (0..n).map(|a| if a / d == a % d { C64::new(1.0 / (d as f64).sqrt(), 0.0) } else { C64::new(0.0, 0.0) }).collect();
    let mut basis: Vec<Vec<C64>> = Vec::new();
    for e in 0..n {
        let mut v: Vec<C64> = (0..n).map(|a| C64::new(if a == e { 1.0 } else { 0.0 }, 0.0)).collect();
        for u in std::iter::once(&omega).chain(basis.iter()) {
            let dot: C64 = u.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= dot * ui;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            basis.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    assert_eq!(basis.len(), n - 1);
    Array2::from_shape_fn((n, n - 1), |(a, k)| basis[k][a])
}

/// Smallest eigenvalue of the Choi matrix restricted to the complement of
/// the maximally entangled state.
pub fn restricted_min_eigenvalue(s: &CMatrix) -> f64 {
    let d = (s.nrows() as f64).sqrt().round() as usize;
    let b = complement_basis(d);
    let c = choi_by_definition(s);
    let m = b.t().mapv(|z| z.conj()).dot(&c).dot(&b);
    let herm = (&m + &m.t().mapv(|z| z.conj())) * C64::new(0.5, 0.0);
    let eig = herm.eigvalsh(UPLO::Lower).expect("Hermitian eigenvalues");
    eig.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Smallest `χ ≥ 0` making `S + χ·Z` conditionally completely positive, by
/// bisection on the strict predicate.
pub fn mu_bisection(s: &CMatrix) -> f64 {
    let d = (s.nrows() as f64).sqrt().round() as usize;
    let z = depolarizer(d);
    let ccp = |chi: f64| restricted_min_eigenvalue(&(s + &(&z * C64::new(chi, 0.0)))) >= 0.0;
    if ccp(0.0) {
        return 0.0;
    }
    let mut hi = 1.0;
    while !ccp(hi) {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ccp(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < 1e-13 * hi.max(1.0) {
            break;
        }
    }
    hi
}

pub fn frobenius(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
