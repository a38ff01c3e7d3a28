//! Spin-chain models: the circularly driven chain with a quantum-optical
//! dissipator, and the static chain with single-axis Pauli dissipators used
//! for convex mixtures.
//!
//! Site `0` is the leftmost (most significant) tensor factor.

use std::f64::consts::PI;

use ndarray::linalg::kron;

use crate::error::{Error, Result};
use crate::numkernel::{c, dagger, eig_general, eig_hermitian, hermitize, identity, CMatrix, COND_MAX, TOL_HERM};
use crate::superop::{commutator_superop, lindbladian_superop, unvec};

/// Rates below this are dropped.
pub const R_FLOOR: f64 = 1e-14;
/// Undriven levels closer than this raise the degeneracy warning.
pub const TOL_DEG: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

pub fn pauli(axis: PauliAxis) -> CMatrix {
    let o = c(0.0, 0.0);
    match axis {
        PauliAxis::X => ndarray::array![[o, c(1.0, 0.0)], [c(1.0, 0.0), o]],
        PauliAxis::Y => ndarray::array![[o, c(0.0, -1.0)], [c(0.0, 1.0), o]],
        PauliAxis::Z => ndarray::array![[c(1.0, 0.0), o], [o, c(-1.0, 0.0)]],
    }
}

/// `1 ⊗ … ⊗ op ⊗ … ⊗ 1` with `op` on `site` of an `n_sites` chain.
pub fn site_operator(op: &CMatrix, site: usize, n_sites: usize) -> CMatrix {
    let mut out = identity(1);
    for s in 0..n_sites {
        let factor = if s == site { op.clone() } else { identity(op.nrows()) };
        out = kron(&out, &factor);
    }
    out
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SpinChainParams {
    pub sites: usize,
    pub deltas: Vec<f64>,
    /// Nearest-neighbour `σ_xσ_x` coupling.
    pub w: f64,
    /// Drive amplitude.
    pub e: f64,
    pub omega: f64,
    pub gamma: f64,
    pub temperature: f64,
}

impl SpinChainParams {
    pub fn validate(&self) -> Result<()> {
        if self.sites == 0 {
            return Err(Error::ConfigInvalid("chain needs at least one site".into()));
        }
        if self.deltas.len() != self.sites {
            return Err(Error::ConfigInvalid(format!(
                "{} splittings given for {} sites",
                self.deltas.len(),
                self.sites
            )));
        }
        if self.gamma != 0.0 && !(self.temperature > 0.0) {
            return Err(Error::ConfigInvalid("bath temperature must be positive".into()));
        }
        let finite = [self.w, self.e, self.omega, self.gamma, self.temperature].iter().chain(&self.deltas).all(|x| x.is_finite());
        if !finite {
            return Err(Error::ConfigInvalid("non-finite model parameter".into()));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        1 << self.sites
    }

    /// Drive period `2π/ω`.
    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega
    }
}

/// Undriven chain `Σ (Δ_ℓ/2)σ_z^ℓ + Σ w σ_x^ℓσ_x^{ℓ+1}`.
pub fn static_hamiltonian(p: &SpinChainParams) -> CMatrix {
    let n = p.sites;
    let mut h = CMatrix::zeros((p.dim(), p.dim()));
    let z = pauli(PauliAxis::Z);
    let x = pauli(PauliAxis::X);
    for (l, delta) in p.deltas.iter().enumerate() {
        h = h + site_operator(&z, l, n) * c(delta / 2.0, 0.0);
    }
    for l in 0..n.saturating_sub(1) {
        h = h + site_operator(&x, l, n).dot(&site_operator(&x, l + 1, n)) * c(p.w, 0.0);
    }
    h
}

/// `(Σ_ℓ σ_x^ℓ, Σ_ℓ σ_y^ℓ)`.
fn drive_operators(n_sites: usize) -> (CMatrix, CMatrix) {
    let d = 1 << n_sites;
    let (mut sx, mut sy) = (CMatrix::zeros((d, d)), CMatrix::zeros((d, d)));
    for l in 0..n_sites {
        sx = sx + site_operator(&pauli(PauliAxis::X), l, n_sites);
        sy = sy + site_operator(&pauli(PauliAxis::Y), l, n_sites);
    }
    (sx, sy)
}

/// `H(t) = H_0 + E Σ_ℓ [cos(ωt)σ_x^ℓ − sin(ωt)σ_y^ℓ]`.
pub fn hamiltonian(p: &SpinChainParams, t: f64) -> CMatrix {
    let (sx, sy) = drive_operators(p.sites);
    let phase = p.omega * t;
    static_hamiltonian(p) + sx * c(p.e * phase.cos(), 0.0) - sy * c(p.e * phase.sin(), 0.0)
}

/// Ohmic bath function `E/(e^{E/𝒯} − 1)`, continued by `g(0) = 𝒯`.
pub fn ohmic_g(energy: f64, temperature: f64) -> f64 {
    let x = energy / temperature;
    if x == 0.0 {
        temperature
    } else if x > 0.0 {
        energy * (-x).exp() / -(-x).exp_m1()
    } else {
        energy / x.exp_m1()
    }
}

#[derive(Debug, Clone)]
pub struct JumpOperator {
    /// `√R |ψ_k⟩⟨ψ_q|`, normalization included.
    pub matrix: CMatrix,
    pub rate: f64,
    pub site: usize,
    pub k: usize,
    pub q: usize,
}

#[derive(Debug, Clone)]
pub struct QuantumOpticalDissipator {
    pub jumps: Vec<JumpOperator>,
    /// Undriven eigenenergies, ascending.
    pub energies: Vec<f64>,
    /// Some undriven levels are closer than [`TOL_DEG`].
    pub degenerate: bool,
}

impl QuantumOpticalDissipator {
    pub fn superop(&self) -> Result<CMatrix> {
        let d = self.energies.len();
        let jumps: Vec<(CMatrix, f64)> = self.jumps.iter().map(|j| (j.matrix.clone(), 1.0)).collect();
        lindbladian_superop(&CMatrix::zeros((d, d)), &jumps)
    }
}

/// Jump operators `√R^ℓ_{kq} |ψ_k⟩⟨ψ_q|` with
/// `R^ℓ_{kq} = 2πγ²|⟨ψ_k|σ_x^ℓ|ψ_q⟩|² g(E_k − E_q)` in the undriven eigenbasis,
/// diagonal `k = q` terms included.
pub fn quantum_optical_jumps(p: &SpinChainParams) -> Result<QuantumOpticalDissipator> {
    p.validate()?;
    let (energies, states) = eig_hermitian(&static_hamiltonian(p), TOL_HERM)?;
    let energies = energies.to_vec();
    let degenerate = energies.windows(2).any(|w| (w[1] - w[0]).abs() < TOL_DEG);
    let d = p.dim();
    let mut jumps = Vec::new();
    if p.gamma == 0.0 {
        return Ok(QuantumOpticalDissipator { jumps, energies, degenerate });
    }
    let states_dag = dagger(&states);
    for site in 0..p.sites {
        let sx = states_dag.dot(&site_operator(&pauli(PauliAxis::X), site, p.sites)).dot(&states);
        for k in 0..d {
            for q in 0..d {
                let rate = 2.0 * PI * p.gamma * p.gamma * sx[[k, q]].norm_sqr() * ohmic_g(energies[k] - energies[q], p.temperature);
                if rate <= R_FLOOR {
                    continue;
                }
                let psi_k = states.column(k);
                let psi_q = states.column(q);
                let matrix = CMatrix::from_shape_fn((d, d), |(a, b)| psi_k[a] * psi_q[b].conj() * rate.sqrt());
                jumps.push(JumpOperator { matrix, rate, site, k, q });
            }
        }
    }
    Ok(QuantumOpticalDissipator { jumps, energies, degenerate })
}

/// `ℒ(t) = ℒ_0 + cos(ωt)·ℒ_x − sin(ωt)·ℒ_y` with the dissipator in `ℒ_0`.
#[derive(Debug, Clone)]
pub struct PeriodicLindbladian {
    pub constant: CMatrix,
    pub cos_part: CMatrix,
    pub sin_part: CMatrix,
    pub omega: f64,
    pub dissipator: QuantumOpticalDissipator,
}

impl PeriodicLindbladian {
    pub fn at(&self, t: f64) -> CMatrix {
        let phase = self.omega * t;
        let mut out = self.constant.clone();
        out.scaled_add(c(phase.cos(), 0.0), &self.cos_part);
        out.scaled_add(c(-phase.sin(), 0.0), &self.sin_part);
        out
    }

    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega
    }
}

pub fn periodic_lindbladian(p: &SpinChainParams) -> Result<PeriodicLindbladian> {
    p.validate()?;
    if !(p.omega > 0.0) {
        return Err(Error::ConfigInvalid("drive frequency must be positive".into()));
    }
    let dissipator = quantum_optical_jumps(p)?;
    let (sx, sy) = drive_operators(p.sites);
    let constant = commutator_superop(&static_hamiltonian(p))? + dissipator.superop()?;
    let cos_part = commutator_superop(&(sx * c(p.e, 0.0)))?;
    let sin_part = commutator_superop(&(sy * c(p.e, 0.0)))?;
    Ok(PeriodicLindbladian { constant, cos_part, sin_part, omega: p.omega, dissipator })
}

/// `−i[H,·] + γ Σ_ℓ (σ^ℓ·σ^ℓ − ½{σ^ℓσ^ℓ,·})` on the undriven chain, for each
/// of the two axes.
pub fn sm_static_pair(p: &SpinChainParams, axes: (PauliAxis, PauliAxis)) -> Result<(CMatrix, CMatrix)> {
    p.validate()?;
    let h = static_hamiltonian(p);
    let build = |axis: PauliAxis| {
        let jumps: Vec<(CMatrix, f64)> =
            (0..p.sites).map(|l| (site_operator(&pauli(axis), l, p.sites), p.gamma)).collect();
        lindbladian_superop(&h, &jumps)
    };
    Ok((build(axes.0)?, build(axes.1)?))
}

/// `e^{−H/𝒯}/Z`.
pub fn gibbs_state(h: &CMatrix, temperature: f64) -> Result<CMatrix> {
    let (energies, states) = eig_hermitian(h, TOL_HERM)?;
    let e0 = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let weights: Vec<f64> = energies.iter().map(|e| (-(e - e0) / temperature).exp()).collect();
    let z: f64 = weights.iter().sum();
    let d = h.nrows();
    Ok(CMatrix::from_shape_fn((d, d), |(a, b)| {
        (0..d).map(|k| states[[a, k]] * states[[b, k]].conj() * (weights[k] / z)).sum()
    }))
}

/// Fixed point of a static generator: the right eigenvector of the
/// eigenvalue closest to zero, as a unit-trace Hermitian matrix.
pub fn steady_state(l: &CMatrix) -> Result<CMatrix> {
    let es = eig_general(l, COND_MAX)?;
    let k = (0..es.eigenvalues.len())
        .min_by(|&a, &b| es.eigenvalues[a].norm().total_cmp(&es.eigenvalues[b].norm()))
        .expect("nonempty");
    let rho = unvec(&es.right_vector(k))?;
    let tr: crate::numkernel::C64 = rho.diag().sum();
    Ok(hermitize(&(rho / tr)).0)
}

/// `½‖a − b‖₁` for Hermitian arguments.
pub fn trace_distance(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    let (diff, _) = hermitize(&(a - b));
    let (w, _) = eig_hermitian(&diff, 1e-9)?;
    Ok(0.5 * w.iter().map(|x| x.abs()).sum::<f64>())
}
