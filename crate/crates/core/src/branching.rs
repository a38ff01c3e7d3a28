//! Spectral decomposition of the one-cycle map, logarithm branches, Floquet
//! mode Fourier analysis and branch-set generation.
//!
//! Sign conventions: `Ω = i·ln(λ)/T`, so a generator eigenvalue is `−iΩ`.
//! Floquet modes carry the phase `e^{+iΩt}` and are expanded as
//! `Φ(t) = Σ_n e^{iωnt} Φ⁽ⁿ⁾`; a branch shift adds `+i(2π/T)·x` on the
//! pair member with `Im λ > 0`. With these choices a static generator that
//! winds `x` times shows up as a single harmonic at `n = x`, and shifting by
//! that harmonic recovers it.

use std::f64::consts::PI;

use ndarray::Array1;
use rustfft::FftPlanner;

use crate::error::{Cardinality, Error, Result};
use crate::markov::{GeneratorCandidate, Method};
use crate::numkernel::{eig_general, outer, trace_norm, CMatrix, CVector, C64, COND_MAX, I};
use crate::propagate::SampledMap;
use crate::superop::{flip_conjugate, flip_vector, hermiticity_residual, map_trace_residual, superop_dim, unvec};

pub const DEFAULT_X_CAP: i64 = 64;
pub const DEFAULT_BUDGET: u128 = 10_000_000;
/// Relative periodicity tolerance for sampled Floquet modes.
pub const TOL_PERIODIC: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralTolerances {
    /// Pairing tolerance, scaled by `1 + |λ|`.
    pub tol_pair: f64,
    pub cond_max: f64,
    /// Eigenvalues of smaller modulus are treated as zero.
    pub tol_singular: f64,
    /// Trace and Hermiticity preservation required of the input map.
    pub tol_map: f64,
}

impl Default for SpectralTolerances {
    fn default() -> Self {
        Self { tol_pair: 1e-7, cond_max: COND_MAX, tol_singular: 1e-10, tol_map: 1e-8 }
    }
}

/// A conjugate pair; `mode` is the member with `Im λ > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct ConjugatePair {
    pub mode: usize,
    pub partner: usize,
}

#[derive(Debug, Clone)]
pub struct ChannelSpectrum {
    pub eigenvalues: Vec<C64>,
    /// Right modes as columns.
    pub right: CMatrix,
    /// Left modes as rows, biorthogonal to `right`.
    pub left: CMatrix,
    pub pair_index: Vec<Option<usize>>,
    pub real_flags: Vec<bool>,
    pub pairs: Vec<ConjugatePair>,
    pub condition: f64,
}

impl ChannelSpectrum {
    pub fn n_c(&self) -> usize {
        self.pairs.len()
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn right_mode(&self, k: usize) -> CVector {
        self.right.column(k).to_owned()
    }

    pub fn left_mode(&self, k: usize) -> CVector {
        self.left.row(k).to_owned()
    }

    /// `|r_k⟩⟩⟨⟨l_k|`.
    pub fn projector(&self, k: usize) -> CMatrix {
        outer(&self.right_mode(k), &self.left_mode(k))
    }

    /// `Ω_k = i·ln(λ_k)/T` on the principal branch.
    pub fn quasienergy(&self, k: usize, period: f64) -> C64 {
        I * self.eigenvalues[k].ln() / period
    }

    /// Largest `|⟨⟨l_j|r_k⟩⟩ − δ_jk|`.
    pub fn biorthogonality_residual(&self) -> f64 {
        let g = self.left.dot(&self.right);
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for j in 0..n {
            for k in 0..n {
                let target = if j == k { 1.0 } else { 0.0 };
                worst = worst.max((g[[j, k]] - target).norm());
            }
        }
        worst
    }
}

pub fn spectral_decompose_channel(v: &CMatrix, tols: &SpectralTolerances) -> Result<ChannelSpectrum> {
    superop_dim(v)?;
    let tp = map_trace_residual(v)?;
    if tp > tols.tol_map {
        return Err(Error::NotTracePreserving { residual: tp });
    }
    let hp = hermiticity_residual(v)?;
    if hp > tols.tol_map {
        return Err(Error::NotHermiticityPreserving { residual: hp });
    }

    let es = eig_general(v, tols.cond_max)?;
    let n = es.eigenvalues.len();
    let mut eigenvalues: Vec<C64> = es.eigenvalues.to_vec();
    let mut right = es.right;
    let mut left = es.left;

    let pair_tol = |z: C64| tols.tol_pair * (1.0 + z.norm());
    let mut real_flags = vec![false; n];
    for (k, z) in eigenvalues.iter().enumerate() {
        if z.norm() < tols.tol_singular {
            return Err(Error::SingularEigenvalue { modulus: z.norm() });
        }
        if z.im.abs() < pair_tol(*z) * z.norm() {
            if z.re < 0.0 {
                return Err(Error::NegativeRealEigenvalue { value: z.re });
            }
            real_flags[k] = true;
        }
    }

    let mut pair_index = vec![None; n];
    let mut pairs = Vec::new();
    let mut taken = vec![false; n];
    for k in 0..n {
        if real_flags[k] || eigenvalues[k].im < 0.0 {
            continue;
        }
        let target = eigenvalues[k].conj();
        let best = (0..n)
            .filter(|&j| !real_flags[j] && !taken[j] && eigenvalues[j].im < 0.0)
            .map(|j| (j, (eigenvalues[j] - target).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match best {
            Some((j, dist)) if dist <= pair_tol(eigenvalues[k]) => {
                taken[j] = true;
                pair_index[k] = Some(j);
                pair_index[j] = Some(k);
                pairs.push(ConjugatePair { mode: k, partner: j });
            }
            _ => return Err(Error::UnmatchedPair { index: k }),
        }
    }
    if let Some(k) = (0..n).find(|&k| !real_flags[k] && pair_index[k].is_none()) {
        return Err(Error::UnmatchedPair { index: k });
    }

    for k in 0..n {
        if real_flags[k] {
            eigenvalues[k] = C64::new(eigenvalues[k].re, 0.0);
        }
    }
    for p in &pairs {
        eigenvalues[p.partner] = eigenvalues[p.mode].conj();
        let r = flip_vector(&right.column(p.mode).to_owned())?;
        let l = flip_vector(&left.row(p.mode).to_owned())?;
        right.column_mut(p.partner).assign(&r);
        left.row_mut(p.partner).assign(&l);
    }

    if !eigenvalues.iter().any(|z| (z - 1.0).norm() < 1e-8) {
        let gap = eigenvalues.iter().map(|z| (z - 1.0).norm()).fold(f64::INFINITY, f64::min);
        return Err(Error::ToleranceNotMet { what: "distance of closest eigenvalue to 1", value: gap, tol: 1e-8 });
    }

    Ok(ChannelSpectrum { eigenvalues, right, left, pair_index, real_flags, pairs, condition: es.condition })
}

/// Integer branch selection, one entry per conjugate pair.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BranchVector(pub Vec<i64>);

impl BranchVector {
    pub fn zeros(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn check_cap(&self, cap: i64) -> Result<()> {
        match self.0.iter().find(|x| x.abs() > cap) {
            Some(&value) => Err(Error::CapExceeded { value, cap }),
            None => Ok(()),
        }
    }

    pub fn negated(&self) -> Self {
        Self(self.0.iter().map(|x| -x).collect())
    }
}

/// Semicolon-joined, as written to CSV.
impl std::fmt::Display for BranchVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        f.write_str(&parts.join(";"))
    }
}

impl serde::Serialize for BranchVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// Principal generator plus one shift generator per conjugate pair, so that
/// `Ŝ_x = Ŝ_0 + Σ_c x_c Q_c`.
#[derive(Debug, Clone)]
pub struct BranchFamily {
    pub period: f64,
    pub principal: CMatrix,
    /// `Q_c = i(2π/T)(P_c − 𝔽P_c𝔽)`, written as `Y + 𝔽Y𝔽` with `Y = i(2π/T)P_c`.
    pub shifts: Vec<CMatrix>,
    pub x_cap: i64,
}

impl BranchFamily {
    pub fn new(spec: &ChannelSpectrum, period: f64, x_cap: i64) -> Result<Self> {
        let principal = principal_matrix(spec, period)?;
        let omega = 2.0 * PI / period;
        let shifts = spec
            .pairs
            .iter()
            .map(|p| {
                let y = spec.projector(p.mode) * (I * omega);
                Ok(&y + &flip_conjugate(&y)?)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { period, principal, shifts, x_cap })
    }

    pub fn n_c(&self) -> usize {
        self.shifts.len()
    }

    /// Adds `Σ x_c Q_c` to `base`.
    pub fn shift(&self, base: &CMatrix, x: &BranchVector) -> Result<CMatrix> {
        if x.len() != self.n_c() {
            return Err(Error::DimensionMismatch { expected: self.n_c(), got: x.len() });
        }
        x.check_cap(self.x_cap)?;
        let mut out = base.clone();
        for (q, &xc) in self.shifts.iter().zip(&x.0) {
            if xc != 0 {
                out.scaled_add(C64::new(xc as f64, 0.0), q);
            }
        }
        Ok(out)
    }

    pub fn generator(&self, x: &BranchVector) -> Result<CMatrix> {
        self.shift(&self.principal, x)
    }

    pub fn candidate(&self, x: &BranchVector, method: Method) -> Result<GeneratorCandidate> {
        Ok(GeneratorCandidate::new(self.generator(x)?, x.clone(), method))
    }
}

fn principal_matrix(spec: &ChannelSpectrum, period: f64) -> Result<CMatrix> {
    let n = spec.dim();
    let mut s = CMatrix::zeros((n, n));
    for k in 0..n {
        if spec.real_flags[k] {
            let x = spec.projector(k) * C64::new(spec.eigenvalues[k].re.ln() / period, 0.0);
            s = s + (&x + &flip_conjugate(&x)?) * 0.5;
        }
    }
    for p in &spec.pairs {
        let x = spec.projector(p.mode) * (spec.eigenvalues[p.mode].ln() / period);
        s = s + &x + &flip_conjugate(&x)?;
    }
    Ok(s)
}

pub fn principal_generator(spec: &ChannelSpectrum, period: f64) -> Result<GeneratorCandidate> {
    Ok(GeneratorCandidate::new(
        principal_matrix(spec, period)?,
        BranchVector::zeros(spec.n_c()),
        Method::Principal,
    ))
}

/// `Ŝ_x` built from an existing `Ŝ_0`.
pub fn branch_generator(
    s0: &GeneratorCandidate,
    spec: &ChannelSpectrum,
    x: &BranchVector,
    period: f64,
    x_cap: i64,
) -> Result<GeneratorCandidate> {
    let mut family = BranchFamily::new(spec, period, x_cap)?;
    family.principal = s0.matrix.clone();
    family.candidate(x, s0.method)
}

/// `Φ_c(t_n) = e^{iΩ_c t_n}·𝒱(t_n)|r_c⟩⟩` for `n = 0..=n_t`, one series per pair.
pub fn floquet_mode_samples(spec: &ChannelSpectrum, sampled: &SampledMap) -> Result<Vec<Vec<CVector>>> {
    sampled.check_invertible()?;
    let period = sampled.period;
    spec.pairs
        .iter()
        .map(|p| {
            let r = spec.right_mode(p.mode);
            let log_lambda = spec.eigenvalues[p.mode].ln();
            let series: Vec<CVector> = sampled
                .maps
                .iter()
                .enumerate()
                .map(|(n, m)| m.dot(&r) * (-log_lambda * (sampled.time(n) / period)).exp())
                .collect();
            let first = &series[0];
            let last = &series[series.len() - 1];
            let scale = first.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let drift = (last - first).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if drift > TOL_PERIODIC * scale.max(1.0) {
                return Err(Error::ToleranceNotMet { what: "Floquet mode periodicity", value: drift, tol: TOL_PERIODIC });
            }
            Ok(series)
        })
        .collect()
}

/// Harmonic content of one Floquet mode.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ModeSpectrum {
    /// Ascending, `−n_t/2 ..< n_t/2`.
    pub harmonics: Vec<i64>,
    /// Trace norm of each unvectorized component.
    pub amplitudes: Vec<f64>,
    /// Positions into `harmonics`, strongest first.
    pub ranking: Vec<usize>,
    /// `|Σ‖Φ⁽ⁿ⁾‖²_F − mean_m ‖Φ(t_m)‖²_F|` relative to the latter.
    pub parseval_residual: f64,
}

impl ModeSpectrum {
    /// `(n, A)` of the `rank`-th strongest harmonic.
    pub fn peak(&self, rank: usize) -> (i64, f64) {
        let k = self.ranking[rank];
        (self.harmonics[k], self.amplitudes[k])
    }

    pub fn top(&self, count: usize) -> Vec<(i64, f64)> {
        (0..count.min(self.ranking.len())).map(|r| self.peak(r)).collect()
    }

    /// Number of secondary peaks with `A_i / A_0 ≥ η`.
    pub fn peaks_above(&self, eta: f64) -> usize {
        let (_, a0) = self.peak(0);
        if a0 <= 0.0 {
            return 0;
        }
        (1..self.ranking.len()).take_while(|&r| self.peak(r).1 / a0 >= eta).count()
    }
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct FourierProfile {
    pub n_t: usize,
    pub modes: Vec<ModeSpectrum>,
}

impl FourierProfile {
    pub fn n_c(&self) -> usize {
        self.modes.len()
    }

    pub fn x_max(&self) -> BranchVector {
        BranchVector(self.modes.iter().map(|m| m.peak(0).0).collect())
    }
}

/// Discrete Fourier coefficients `(1/n_t)Σ_m e^{−iωn t_m}Φ(t_m)` over the
/// first `n_t` samples of each series.
pub fn fourier_profile(modes: &[Vec<CVector>], n_t: usize) -> Result<FourierProfile> {
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(n_t);
    let harmonic = |k: usize| if k < n_t.div_ceil(2) { k as i64 } else { k as i64 - n_t as i64 };

    let mut out = Vec::with_capacity(modes.len());
    for series in modes {
        if series.len() < n_t {
            return Err(Error::DimensionMismatch { expected: n_t, got: series.len() });
        }
        let len = series[0].len();
        // coefficients[k][component]
        let mut coefficients = vec![Array1::<C64>::zeros(len); n_t];
        let mut buffer = vec![C64::new(0.0, 0.0); n_t];
        for comp in 0..len {
            for (m, b) in buffer.iter_mut().enumerate() {
                *b = series[m][comp];
            }
            fft.process(&mut buffer);
            for (k, b) in buffer.iter().enumerate() {
                coefficients[k][comp] = *b / n_t as f64;
            }
        }

        let mut order: Vec<usize> = (0..n_t).collect();
        order.sort_by_key(|&k| harmonic(k));
        let harmonics: Vec<i64> = order.iter().map(|&k| harmonic(k)).collect();
        let mut amplitudes = Vec::with_capacity(n_t);
        let mut freq_energy = 0.0;
        for &k in &order {
            amplitudes.push(trace_norm(&unvec(&coefficients[k])?)?);
            freq_energy += coefficients[k].iter().map(|z| z.norm_sqr()).sum::<f64>();
        }
        let time_energy = series[..n_t].iter().map(|v| v.iter().map(|z| z.norm_sqr()).sum::<f64>()).sum::<f64>() / n_t as f64;
        let parseval_residual = (freq_energy - time_energy).abs() / time_energy.max(f64::MIN_POSITIVE);

        let ranking = rank_harmonics(&harmonics, &amplitudes);
        out.push(ModeSpectrum { harmonics, amplitudes, ranking, parseval_residual });
    }
    Ok(FourierProfile { n_t, modes: out })
}

/// Amplitudes agreeing to about twelve digits relative to the largest one
/// count as ties, broken by smaller `|n|` and then smaller `n`.
fn rank_harmonics(harmonics: &[i64], amplitudes: &[f64]) -> Vec<usize> {
    let top = amplitudes.iter().copied().fold(0.0, f64::max);
    let key = |a: f64| if top > 0.0 { (a / top * 1e12).round() as i64 } else { 0 };
    let mut ranking: Vec<usize> = (0..harmonics.len()).collect();
    ranking.sort_by(|&a, &b| {
        key(amplitudes[b])
            .cmp(&key(amplitudes[a]))
            .then(harmonics[a].abs().cmp(&harmonics[b].abs()))
            .then(harmonics[a].cmp(&harmonics[b]))
    });
    ranking
}

/// Shifts every pair by its dominant harmonic.
pub fn unwind(profile: &FourierProfile, family: &BranchFamily) -> Result<(BranchVector, GeneratorCandidate)> {
    let x_max = profile.x_max();
    let candidate = family.candidate(&x_max, Method::Unwound)?;
    Ok((x_max, candidate))
}

/// A candidate set given as a Cartesian product of per-pair lists, optionally
/// preceded by the all-zeros vector. Iterates lazily.
#[derive(Debug, Clone)]
pub struct BranchSet {
    pub lists: Vec<Vec<i64>>,
    /// The zero vector is not in the product and is visited first.
    pub extra_zero: bool,
    pub cardinality: Cardinality,
}

impl BranchSet {
    fn from_lists(lists: Vec<Vec<i64>>, with_zero: bool, budget: u128) -> Result<Self> {
        let mut product: Option<u128> = Some(1);
        for l in &lists {
            product = product.and_then(|p| p.checked_mul(l.len() as u128));
        }
        let zero_in_product = lists.iter().all(|l| l.contains(&0));
        let extra_zero = with_zero && !zero_in_product;
        let cardinality = match product.and_then(|p| p.checked_add(extra_zero as u128)) {
            Some(n) => Cardinality::Exact(n),
            None => {
                let base = lists.first().map_or(1, |l| l.len() as u64);
                Cardinality::Power { base, exponent: lists.len() as u64 }
            }
        };
        match cardinality.exact() {
            Some(n) if n <= budget => Ok(Self { lists, extra_zero, cardinality }),
            _ => Err(Error::CardinalityOverflow { cardinality, budget }),
        }
    }

    pub fn len(&self) -> u128 {
        self.cardinality.exact().expect("budget-checked")
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> BranchSetIter<'_> {
        BranchSetIter { set: self, zero_pending: self.extra_zero, odometer: Some(vec![0; self.lists.len()]) }
    }

    pub fn collect_vectors(&self) -> Vec<BranchVector> {
        self.iter().collect()
    }
}

pub struct BranchSetIter<'a> {
    set: &'a BranchSet,
    zero_pending: bool,
    odometer: Option<Vec<usize>>,
}

impl Iterator for BranchSetIter<'_> {
    type Item = BranchVector;

    fn next(&mut self) -> Option<BranchVector> {
        if self.zero_pending {
            self.zero_pending = false;
            return Some(BranchVector::zeros(self.set.lists.len()));
        }
        let lists = &self.set.lists;
        let pos = self.odometer.as_mut()?;
        if lists.iter().any(|l| l.is_empty()) {
            self.odometer = None;
            return None;
        }
        let item = BranchVector(pos.iter().zip(lists).map(|(&p, l)| l[p]).collect());
        let mut k = lists.len();
        loop {
            if k == 0 {
                self.odometer = None;
                break;
            }
            k -= 1;
            pos[k] += 1;
            if pos[k] < lists[k].len() {
                break;
            }
            pos[k] = 0;
        }
        Some(item)
    }
}

/// Modified branch set with its per-pair bookkeeping.
#[derive(Debug, Clone)]
pub struct ModifiedSet {
    pub set: BranchSet,
    /// Secondary peaks admitted per pair.
    pub z: Vec<usize>,
    /// Pairs with `z_c ≥ 1`.
    pub n_tilde: usize,
}

/// Per pair: the main peak plus up to `n_b` secondary peaks whose amplitude
/// ratio to the main peak is at least `eta`; then the Cartesian product, with
/// the zero vector visited first.
pub fn modified_branch_set(profile: &FourierProfile, eta: f64, n_b: usize, budget: u128) -> Result<ModifiedSet> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::EtaOutOfRange(eta));
    }
    let z: Vec<usize> = profile.modes.iter().map(|m| m.peaks_above(eta).min(n_b)).collect();
    let lists: Vec<Vec<i64>> = profile
        .modes
        .iter()
        .zip(&z)
        .map(|(m, &zc)| (0..=zc).map(|r| m.peak(r).0).collect())
        .collect();
    let n_tilde = z.iter().filter(|&&zc| zc >= 1).count();
    let set = BranchSet::from_lists(lists, true, budget)?;
    Ok(ModifiedSet { set, z, n_tilde })
}

/// The full grid `{−r..r}^{n_c}`, last index fastest.
pub fn standard_branch_set(n_c: usize, radius: u32, budget: u128) -> Result<BranchSet> {
    let side = 2 * radius as u64 + 1;
    let cardinality = Cardinality::power(side, n_c as u64);
    match cardinality.exact() {
        Some(n) if n <= budget => {}
        _ => return Err(Error::CardinalityOverflow { cardinality, budget }),
    }
    let r = radius as i64;
    let lists = vec![(-r..=r).collect::<Vec<_>>(); n_c];
    BranchSet::from_lists(lists, false, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::{c, expm, identity, max_abs};
    use crate::propagate::static_semigroup;
    use crate::superop::{commutator_superop, lindbladian_superop};

    fn sigma_z_half() -> CMatrix {
        crate::numkernel::diag(&[c(0.5, 0.0), c(-0.5, 0.0)])
    }

    fn dephasing_qubit(h_scale: f64, gamma: f64) -> CMatrix {
        let z = crate::numkernel::diag(&[c(1.0, 0.0), c(-1.0, 0.0)]);
        lindbladian_superop(&(sigma_z_half() * h_scale), &[(z, gamma)]).unwrap()
    }

    #[test]
    fn identity_map_has_no_pairs() {
        let spec = spectral_decompose_channel(&identity(4), &SpectralTolerances::default()).unwrap();
        assert_eq!(spec.n_c(), 0);
        assert!(spec.eigenvalues.iter().all(|z| (z - 1.0).norm() < 1e-12));
        let s0 = principal_generator(&spec, 1.0).unwrap();
        assert!(max_abs(&s0.matrix) < 1e-12);
    }

    #[test]
    fn qubit_rotation_spectrum() {
        let v = expm(&commutator_superop(&sigma_z_half()).unwrap()).unwrap();
        let spec = spectral_decompose_channel(&v, &SpectralTolerances::default()).unwrap();
        assert_eq!(spec.n_c(), 1);
        let p = spec.pairs[0];
        assert!((spec.eigenvalues[p.mode] - C64::new(0.0, 1.0).exp()).norm() < 1e-12);
        assert_eq!(spec.eigenvalues[p.partner], spec.eigenvalues[p.mode].conj());
        assert_eq!(spec.real_flags.iter().filter(|&&f| f).count(), 2);
        assert!(spec.biorthogonality_residual() < 1e-8);
        let proj = flip_conjugate(&spec.projector(p.mode)).unwrap();
        assert!(max_abs(&(proj - spec.projector(p.partner))) < 1e-8);
    }

    #[test]
    fn negative_real_eigenvalue_is_flagged() {
        // Rotation by π: eigenvalues e^{±iπ} = −1.
        let v = expm(&(commutator_superop(&sigma_z_half()).unwrap() * c(PI, 0.0))).unwrap();
        let err = spectral_decompose_channel(&v, &SpectralTolerances::default()).unwrap_err();
        assert!(matches!(err, Error::NegativeRealEigenvalue { .. }), "{err}");
    }

    #[test]
    fn principal_recovers_generator_without_winding() {
        let l = dephasing_qubit(1.3, 0.2);
        let t = 1.0;
        let v = expm(&(&l * c(t, 0.0))).unwrap();
        let spec = spectral_decompose_channel(&v, &SpectralTolerances::default()).unwrap();
        let s0 = principal_generator(&spec, t).unwrap();
        assert!(max_abs(&(&s0.matrix - &l)) < 1e-8);
        assert!(hermiticity_residual(&s0.matrix).unwrap() < 1e-10);
    }

    #[test]
    fn shift_adds_two_pi_over_t_on_the_mode() {
        let l = dephasing_qubit(1.0, 0.1);
        let t = 2.0;
        let v = expm(&(&l * c(t, 0.0))).unwrap();
        let spec = spectral_decompose_channel(&v, &SpectralTolerances::default()).unwrap();
        let family = BranchFamily::new(&spec, t, DEFAULT_X_CAP).unwrap();
        let s1 = family.generator(&BranchVector(vec![1])).unwrap();
        let p = spec.pairs[0];
        let r = spec.right_mode(p.mode);
        let k0 = spec.eigenvalues[p.mode].ln() / t;
        let expected = k0 + I * (2.0 * PI / t);
        let got = s1.dot(&r);
        assert!(got.iter().zip(r.iter()).all(|(a, b)| (a - b * expected).norm() < 1e-10));
        let rb = spec.right_mode(p.partner);
        let gotb = s1.dot(&rb);
        assert!(gotb.iter().zip(rb.iter()).all(|(a, b)| (a - b * expected.conj()).norm() < 1e-10));
        // Every branch reconstructs the map and is Hermiticity preserving.
        for x in -3..=3 {
            let s = family.generator(&BranchVector(vec![x])).unwrap();
            assert!(max_abs(&(expm(&(&s * c(t, 0.0))).unwrap() - &v)) < 1e-8);
            assert!(hermiticity_residual(&s).unwrap() < 1e-10);
        }
    }

    #[test]
    fn shift_and_unshift_cancel() {
        let l = dephasing_qubit(0.7, 0.3);
        let v = expm(&l).unwrap();
        let spec = spectral_decompose_channel(&v, &SpectralTolerances::default()).unwrap();
        let family = BranchFamily::new(&spec, 1.0, DEFAULT_X_CAP).unwrap();
        let x = BranchVector(vec![5]);
        let back = family.shift(&family.generator(&x).unwrap(), &x.negated()).unwrap();
        assert!(max_abs(&(back - &family.principal)) < 1e-10);
        assert!(matches!(family.generator(&BranchVector(vec![65])), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn winding_static_generator_unwinds() {
        // Frequency 1.3 with period 10 winds twice.
        let l = dephasing_qubit(1.3, 0.05);
        let t = 10.0;
        let sampled = static_semigroup(&l, t, 64).unwrap();
        let spec = spectral_decompose_channel(sampled.monodromy(), &SpectralTolerances::default()).unwrap();
        let family = BranchFamily::new(&spec, t, DEFAULT_X_CAP).unwrap();
        assert!(max_abs(&(&family.principal - &l)) > 0.1);
        let modes = floquet_mode_samples(&spec, &sampled).unwrap();
        let profile = fourier_profile(&modes, sampled.n_t).unwrap();
        assert!(profile.modes[0].parseval_residual < 1e-8);
        let (peak, amp) = profile.modes[0].peak(0);
        // The |1⟩⟨0| coherence rotates at +1.3, i.e. 13/2π ≈ 2.07 turns.
        assert_eq!(peak, 2);
        assert!(profile.modes[0].peak(1).1 < 1e-8 * amp);
        let (x, s_unf) = unwind(&profile, &family).unwrap();
        assert_eq!(x, BranchVector(vec![peak]));
        assert!(max_abs(&(&s_unf.matrix - &l)) < 1e-8);
    }

    #[test]
    fn constant_and_pure_harmonic_series() {
        let v: CVector = Array1::from(vec![c(1.0, 0.0), c(0.0, 0.5), c(0.0, -0.5), c(-1.0, 0.0)]);
        let n_t = 16;
        let constant = vec![v.clone(); n_t + 1];
        let profile = fourier_profile(&[constant], n_t).unwrap();
        let (n, a) = profile.modes[0].peak(0);
        assert_eq!(n, 0);
        assert!((a - trace_norm(&unvec(&v).unwrap()).unwrap()).abs() < 1e-12);

        let harmonic: Vec<CVector> =
            (0..=n_t).map(|m| &v * (I * (2.0 * PI * 3.0 * m as f64 / n_t as f64)).exp()).collect();
        let profile = fourier_profile(&[harmonic], n_t).unwrap();
        assert_eq!(profile.modes[0].peak(0).0, 3);
        assert_eq!(profile.modes[0].harmonics.first(), Some(&-8));
        assert_eq!(profile.modes[0].harmonics.last(), Some(&7));
    }

    #[test]
    fn ties_prefer_small_harmonics() {
        let n_t = 8;
        let v: CVector = Array1::from(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        // e^{iω·2t} + e^{−iω·2t} + e^{iωt}: equal weight on −2, 1, 2.
        let series: Vec<CVector> = (0..=n_t)
            .map(|m| {
                let ph = 2.0 * PI * m as f64 / n_t as f64;
                let f = (I * 2.0 * ph).exp() + (-I * 2.0 * ph).exp() + (I * ph).exp();
                &v * f
            })
            .collect();
        let profile = fourier_profile(&[series], n_t).unwrap();
        let top: Vec<i64> = profile.modes[0].top(3).iter().map(|p| p.0).collect();
        assert_eq!(top, vec![1, -2, 2]);
        assert_eq!(profile.modes[0].peaks_above(0.99), 2);
    }

    fn synthetic_profile(peaks: &[Vec<(i64, f64)>]) -> FourierProfile {
        let n_t = 16;
        let modes = peaks
            .iter()
            .map(|list| {
                let harmonics: Vec<i64> = (-8..8).collect();
                let mut amplitudes = vec![0.0; n_t];
                for &(n, a) in list {
                    amplitudes[(n + 8) as usize] = a;
                }
                let ranking = rank_harmonics(&harmonics, &amplitudes);
                ModeSpectrum { harmonics, amplitudes, ranking, parseval_residual: 0.0 }
            })
            .collect();
        FourierProfile { n_t, modes }
    }

    #[test]
    fn modified_set_main_peaks_only() {
        let profile = synthetic_profile(&[vec![(2, 1.0), (3, 0.5)], vec![(-1, 1.0), (0, 0.8)]]);
        let m = modified_branch_set(&profile, 1.0, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(m.set.collect_vectors(), vec![BranchVector(vec![0, 0]), BranchVector(vec![2, -1])]);
        assert_eq!(m.set.cardinality, Cardinality::Exact(2));
        let m0 = modified_branch_set(&profile, 0.3, 0, DEFAULT_BUDGET).unwrap();
        assert_eq!(m0.set.collect_vectors(), m.set.collect_vectors());

        let zero = synthetic_profile(&[vec![(0, 1.0)]]);
        let m = modified_branch_set(&zero, 1.0, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(m.set.cardinality, Cardinality::Exact(1));
    }

    #[test]
    fn modified_set_cartesian_product() {
        let profile = synthetic_profile(&[vec![(2, 1.0), (3, 0.9), (1, 0.8), (4, 0.75)], vec![(-1, 1.0), (-2, 0.95), (5, 0.9)]]);
        let m = modified_branch_set(&profile, 0.7, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(m.z, vec![2, 2]);
        assert_eq!(m.n_tilde, 2);
        let vectors = m.set.collect_vectors();
        assert_eq!(vectors.len(), 10);
        assert_eq!(m.set.cardinality, Cardinality::Exact(3u128.pow(2) + 1));
        assert_eq!(vectors[0], BranchVector(vec![0, 0]));
        assert_eq!(vectors[1], BranchVector(vec![2, -1]));
        assert_eq!(vectors[2], BranchVector(vec![2, -2]));
        assert!(matches!(modified_branch_set(&profile, 1.5, 2, DEFAULT_BUDGET), Err(Error::EtaOutOfRange(_))));
    }

    #[test]
    fn standard_sets() {
        let s = standard_branch_set(1, 1, DEFAULT_BUDGET).unwrap();
        assert_eq!(s.collect_vectors(), vec![BranchVector(vec![-1]), BranchVector(vec![0]), BranchVector(vec![1])]);
        let s = standard_branch_set(7, 1, DEFAULT_BUDGET).unwrap();
        assert_eq!(s.cardinality, Cardinality::Exact(2187));
        assert_eq!(s.iter().count(), 2187);
        match standard_branch_set(31, 1, DEFAULT_BUDGET) {
            Err(Error::CardinalityOverflow { cardinality, .. }) => {
                assert_eq!(cardinality.exact(), Some(3u128.pow(31)));
                assert!((cardinality.as_f64() - 6.18e14).abs() < 0.01e14);
            }
            other => panic!("{other:?}"),
        }
        let empty = standard_branch_set(0, 1, DEFAULT_BUDGET).unwrap();
        assert_eq!(empty.collect_vectors(), vec![BranchVector(vec![])]);
    }

    #[test]
    fn branch_vector_display() {
        assert_eq!(BranchVector(vec![1, -2, 0]).to_string(), "1;-2;0");
        assert_eq!(BranchVector(vec![]).to_string(), "");
    }
}
