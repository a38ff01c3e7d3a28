//! Lindblad-form test for generator candidates and its two distances:
//! `μ`, the depolarizing strength needed to restore conditional complete
//! positivity, and `ν`, the trace norm of the projected Choi matrix.

use crate::branching::{
    modified_branch_set, spectral_decompose_channel, standard_branch_set, BranchFamily, BranchSet, BranchVector,
    ChannelSpectrum, FourierProfile, SpectralTolerances, DEFAULT_BUDGET, DEFAULT_X_CAP,
};
use crate::branching::{floquet_mode_samples, fourier_profile};
use crate::error::{Cardinality, Error, Result};
use crate::numkernel::{eigvals_hermitian, hermitize, identity, CMatrix};
use crate::propagate::SampledMap;
use crate::superop::{choi, generator_trace_residual, hermiticity_residual, max_entangled_projector, superop_dim};

/// Largest anti-Hermitian Choi residual accepted before Hermitizing.
pub const TOL_CHOI_HERM: f64 = 1e-6;
/// Trace and Hermiticity preservation expected of a candidate.
pub const TOL_CANDIDATE: f64 = 1e-8;

/// Default CCP tolerance, `10⁻⁹·d`.
pub fn default_tol_ccp(d: usize) -> f64 {
    1e-9 * d as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Principal,
    Unwound,
    Modified,
    Standard,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Principal, Method::Unwound, Method::Modified, Method::Standard];

    pub fn name(self) -> &'static str {
        match self {
            Method::Principal => "principal",
            Method::Unwound => "unwound",
            Method::Modified => "modified",
            Method::Standard => "standard",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone)]
pub struct GeneratorCandidate {
    pub matrix: CMatrix,
    pub branch: BranchVector,
    pub method: Method,
    /// Set when the candidate misses trace or Hermiticity preservation by
    /// more than [`TOL_CANDIDATE`]; holds the larger residual.
    pub violation: Option<f64>,
}

impl GeneratorCandidate {
    pub fn new(matrix: CMatrix, branch: BranchVector, method: Method) -> Self {
        let tp = generator_trace_residual(&matrix).unwrap_or(f64::INFINITY);
        let hp = hermiticity_residual(&matrix).unwrap_or(f64::INFINITY);
        let worst = tp.max(hp);
        let violation = (worst > TOL_CANDIDATE).then_some(worst);
        Self { matrix, branch, method, violation }
    }
}

/// `(1 − Σ)·Sᴳ·(1 − Σ)`, Hermitized.
pub fn ccp_matrix(s: &CMatrix) -> Result<CMatrix> {
    let d = superop_dim(s)?;
    let (c, residual) = hermitize(&choi(s)?);
    if residual > TOL_CHOI_HERM {
        return Err(Error::NotHermiticityPreserving { residual });
    }
    let q = identity(d * d) - max_entangled_projector(d);
    Ok(hermitize(&q.dot(&c).dot(&q)).0)
}

/// `(passes, λ_min)` with pass meaning `λ_min ≥ −tol_ccp`.
pub fn ccp_check(s: &CMatrix, tol_ccp: f64) -> Result<(bool, f64)> {
    let lambda_min = min_eigenvalue(&ccp_matrix(s)?)?;
    Ok((lambda_min >= -tol_ccp, lambda_min))
}

fn min_eigenvalue(m: &CMatrix) -> Result<f64> {
    Ok(eigvals_hermitian(m)?.iter().copied().fold(f64::INFINITY, f64::min))
}

/// Distances read off the spectrum of the projected Choi matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Distances {
    pub mu: f64,
    pub nu: f64,
    pub lambda_min: f64,
}

impl Distances {
    /// The restricted Choi matrix of the depolarizing generator is `(1−Σ)/d`,
    /// so adding `χ𝒵` lifts the spectrum by `χ/d` and `μ = −d·λ_min`.
    pub fn from_spectrum(eigenvalues: &[f64], d: usize, tol_ccp: f64) -> Self {
        let lambda_min = eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        let nu = eigenvalues.iter().map(|x| x.abs()).sum();
        let mu = if lambda_min >= -tol_ccp { 0.0 } else { -(d as f64) * lambda_min };
        Self { mu, nu, lambda_min }
    }

    pub fn of(s: &CMatrix, tol_ccp: f64) -> Result<Self> {
        let d = superop_dim(s)?;
        let eig = eigvals_hermitian(&ccp_matrix(s)?)?;
        Ok(Self::from_spectrum(eig.as_slice().expect("contiguous"), d, tol_ccp))
    }
}

pub fn mu_branch(s: &CMatrix, tol_ccp: f64) -> Result<f64> {
    Ok(Distances::of(s, tol_ccp)?.mu)
}

pub fn nu_branch(s: &CMatrix) -> Result<f64> {
    Ok(Distances::of(s, 0.0)?.nu)
}

/// Projected Choi matrices of a branch family; linear in the branch vector,
/// so every candidate costs one Hermitian eigenvalue solve.
#[derive(Debug, Clone)]
pub struct ProjectedFamily {
    pub d: usize,
    pub principal: CMatrix,
    pub shifts: Vec<CMatrix>,
}

impl ProjectedFamily {
    pub fn new(family: &BranchFamily) -> Result<Self> {
        let d = superop_dim(&family.principal)?;
        let principal = ccp_matrix(&family.principal)?;
        let shifts = family.shifts.iter().map(ccp_matrix).collect::<Result<Vec<_>>>()?;
        Ok(Self { d, principal, shifts })
    }

    pub fn matrix(&self, x: &BranchVector) -> CMatrix {
        let mut m = self.principal.clone();
        for (q, &xc) in self.shifts.iter().zip(&x.0) {
            if xc != 0 {
                m.scaled_add(crate::numkernel::c(xc as f64, 0.0), q);
            }
        }
        m
    }

    pub fn distances(&self, x: &BranchVector, tol_ccp: f64) -> Result<Distances> {
        let eig = eigvals_hermitian(&self.matrix(x))?;
        Ok(Distances::from_spectrum(eig.as_slice().expect("contiguous"), self.d, tol_ccp))
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ModifiedParams {
    pub eta: f64,
    pub n_b: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalConfig {
    pub principal: bool,
    pub unwound: bool,
    pub modified: Option<ModifiedParams>,
    pub standard: Option<u32>,
    pub budget: u128,
    /// `None` selects [`default_tol_ccp`].
    pub tol_ccp: Option<f64>,
    pub spectral: SpectralTolerances,
    pub x_cap: i64,
    /// Number of lowest-μ candidates retained per method for reports.
    pub keep: usize,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            principal: true,
            unwound: true,
            modified: None,
            standard: None,
            budget: DEFAULT_BUDGET,
            tol_ccp: None,
            spectral: SpectralTolerances::default(),
            x_cap: DEFAULT_X_CAP,
            keep: 0,
        }
    }
}

impl EvalConfig {
    fn needs_profile(&self) -> bool {
        self.unwound || self.modified.is_some()
    }
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct CandidateScore {
    pub branch: BranchVector,
    pub mu: f64,
    pub nu: f64,
    pub lambda_min: f64,
}

/// Result of minimizing over one method's candidate set.
#[derive(Debug, Clone, serde::Serialize)]
pub struct MethodOutcome {
    pub method: Method,
    #[serde(serialize_with = "ser_cardinality")]
    pub cardinality: Cardinality,
    /// `None` when the set could not be evaluated.
    pub best: Option<CandidateScore>,
    /// Minimum of `ν` over the same set.
    pub nu_min: Option<f64>,
    /// Lowest-μ candidates, up to [`EvalConfig::keep`].
    pub kept: Vec<CandidateScore>,
    pub note: Option<String>,
}

fn ser_cardinality<S: serde::Serializer>(c: &Cardinality, s: S) -> std::result::Result<S::Ok, S::Error> {
    match c.exact() {
        Some(n) => s.serialize_u128(n),
        None => s.serialize_str(&c.to_string()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PointStatus {
    Ok,
    NonDiagonalizable,
    NegativeRealEigenvalue,
    NotInvertible,
    SingularEigenvalue,
    UnmatchedPair,
    Failed,
}

impl PointStatus {
    pub fn from_error(e: &Error) -> Self {
        match e {
            Error::NonDiagonalizable { .. } => PointStatus::NonDiagonalizable,
            Error::NegativeRealEigenvalue { .. } => PointStatus::NegativeRealEigenvalue,
            Error::NotInvertible { .. } => PointStatus::NotInvertible,
            Error::SingularEigenvalue { .. } => PointStatus::SingularEigenvalue,
            Error::UnmatchedPair { .. } => PointStatus::UnmatchedPair,
            _ => PointStatus::Failed,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PointStatus::Ok => "ok",
            PointStatus::NonDiagonalizable => "non-diagonalizable",
            PointStatus::NegativeRealEigenvalue => "negative-real-eigenvalue",
            PointStatus::NotInvertible => "not-invertible",
            PointStatus::SingularEigenvalue => "singular-eigenvalue",
            PointStatus::UnmatchedPair => "unmatched-pair",
            PointStatus::Failed => "failed",
        }
    }
}

impl std::fmt::Display for PointStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct MarkovianityReport {
    pub status: PointStatus,
    pub message: Option<String>,
    pub n_c: Option<usize>,
    /// `None` means no valid logarithm (or no evaluable candidate).
    pub mu: Option<f64>,
    pub nu: Option<f64>,
    pub ccp_min_eigenvalue: Option<f64>,
    pub best_branch: Option<BranchVector>,
    pub best_method: Option<Method>,
    pub candidates_tested: u128,
    pub methods: Vec<MethodOutcome>,
    pub tol_ccp: f64,
}

impl MarkovianityReport {
    pub fn from_error(e: &Error, tol_ccp: f64) -> Self {
        Self {
            status: PointStatus::from_error(e),
            message: Some(e.to_string()),
            n_c: None,
            mu: None,
            nu: None,
            ccp_min_eigenvalue: None,
            best_branch: None,
            best_method: None,
            candidates_tested: 0,
            methods: Vec::new(),
            tol_ccp,
        }
    }

    pub fn method(&self, m: Method) -> Option<&MethodOutcome> {
        self.methods.iter().find(|o| o.method == m)
    }
}

/// Everything derived from one sampled map that the candidate sets need.
#[derive(Debug, Clone)]
pub struct PointAnalysis {
    pub spectrum: ChannelSpectrum,
    pub family: BranchFamily,
    pub projected: ProjectedFamily,
    pub profile: Option<FourierProfile>,
    pub tol_ccp: f64,
}

impl PointAnalysis {
    pub fn new(sampled: &SampledMap, cfg: &EvalConfig) -> Result<Self> {
        let spectrum = spectral_decompose_channel(sampled.monodromy(), &cfg.spectral)?;
        let family = BranchFamily::new(&spectrum, sampled.period, cfg.x_cap)?;
        let projected = ProjectedFamily::new(&family)?;
        let profile = if cfg.needs_profile() && spectrum.n_c() > 0 {
            let modes = floquet_mode_samples(&spectrum, sampled)?;
            Some(fourier_profile(&modes, sampled.n_t)?)
        } else if cfg.needs_profile() {
            Some(FourierProfile { n_t: sampled.n_t, modes: Vec::new() })
        } else {
            None
        };
        let tol_ccp = cfg.tol_ccp.unwrap_or_else(|| default_tol_ccp(sampled.hilbert_dim()));
        Ok(Self { spectrum, family, projected, profile, tol_ccp })
    }

    pub fn x_max(&self) -> Option<BranchVector> {
        self.profile.as_ref().map(|p| p.x_max())
    }

    /// Minimizes `μ` (ties to the lexicographically smallest branch) and,
    /// separately, `ν` over `branches`.
    pub fn score_set<I>(&self, method: Method, cardinality: Cardinality, branches: I, keep: usize) -> Result<MethodOutcome>
    where
        I: IntoIterator<Item = BranchVector>,
    {
        let mut best: Option<CandidateScore> = None;
        let mut nu_min = f64::INFINITY;
        let mut kept: Vec<CandidateScore> = Vec::new();
        for x in branches {
            x.check_cap(self.family.x_cap)?;
            let dist = self.projected.distances(&x, self.tol_ccp)?;
            nu_min = nu_min.min(dist.nu);
            let score = CandidateScore { branch: x, mu: dist.mu, nu: dist.nu, lambda_min: dist.lambda_min };
            if keep > 0 {
                kept.push(score.clone());
                if kept.len() > 4 * keep {
                    sort_scores(&mut kept);
                    kept.truncate(keep);
                }
            }
            if best.as_ref().is_none_or(|b| better(&score, b)) {
                best = Some(score);
            }
        }
        sort_scores(&mut kept);
        kept.truncate(keep);
        let nu_min = best.as_ref().map(|_| nu_min);
        Ok(MethodOutcome { method, cardinality, best, nu_min, kept, note: None })
    }

    pub fn evaluate(&self, cfg: &EvalConfig) -> Result<Vec<MethodOutcome>> {
        let n_c = self.spectrum.n_c();
        let mut out = Vec::new();
        if cfg.principal {
            let set = std::iter::once(BranchVector::zeros(n_c));
            out.push(self.score_set(Method::Principal, Cardinality::Exact(1), set, cfg.keep)?);
        }
        if cfg.unwound {
            let x_max = self.x_max().expect("profile computed");
            let mut set = vec![BranchVector::zeros(n_c)];
            if !x_max.is_zero() {
                set.push(x_max);
            }
            let card = Cardinality::Exact(set.len() as u128);
            out.push(self.score_set(Method::Unwound, card, set, cfg.keep)?);
        }
        if let Some(p) = &cfg.modified {
            let profile = self.profile.as_ref().expect("profile computed");
            let outcome = match modified_branch_set(profile, p.eta, p.n_b, cfg.budget) {
                Ok(m) => self.score_set(Method::Modified, m.set.cardinality, m.set.iter(), cfg.keep)?,
                Err(Error::CardinalityOverflow { cardinality, .. }) => overflow(Method::Modified, cardinality),
                Err(e) => return Err(e),
            };
            out.push(outcome);
        }
        if let Some(radius) = cfg.standard {
            let outcome = match standard_branch_set(n_c, radius, cfg.budget) {
                Ok(set) => self.score_set(Method::Standard, set.cardinality, set.iter(), cfg.keep)?,
                Err(Error::CardinalityOverflow { cardinality, .. }) => overflow(Method::Standard, cardinality),
                Err(e) => return Err(e),
            };
            out.push(outcome);
        }
        Ok(out)
    }

    /// Candidate sets as configured, for callers that need the branch vectors.
    pub fn modified_set(&self, p: &ModifiedParams, budget: u128) -> Result<BranchSet> {
        let profile = self.profile.as_ref().ok_or(Error::ConfigInvalid("no Fourier profile".into()))?;
        Ok(modified_branch_set(profile, p.eta, p.n_b, budget)?.set)
    }
}

fn overflow(method: Method, cardinality: Cardinality) -> MethodOutcome {
    MethodOutcome {
        method,
        cardinality,
        best: None,
        nu_min: None,
        kept: Vec::new(),
        note: Some("cardinality-overflow".into()),
    }
}

fn better(a: &CandidateScore, b: &CandidateScore) -> bool {
    a.mu < b.mu || (a.mu == b.mu && a.branch < b.branch)
}

fn sort_scores(v: &mut [CandidateScore]) {
    v.sort_by(|a, b| a.mu.total_cmp(&b.mu).then_with(|| a.branch.cmp(&b.branch)));
}

/// Runs the configured candidate sets on one sampled map. Failures of the
/// spectral stage are reported through [`MarkovianityReport::status`].
pub fn evaluate_point(sampled: &SampledMap, cfg: &EvalConfig) -> MarkovianityReport {
    let tol_ccp = cfg.tol_ccp.unwrap_or_else(|| default_tol_ccp(sampled.hilbert_dim()));
    let analysis = match PointAnalysis::new(sampled, cfg) {
        Ok(a) => a,
        Err(e) => return MarkovianityReport::from_error(&e, tol_ccp),
    };
    let methods = match analysis.evaluate(cfg) {
        Ok(m) => m,
        Err(e) => {
            let mut r = MarkovianityReport::from_error(&e, tol_ccp);
            r.n_c = Some(analysis.spectrum.n_c());
            return r;
        }
    };
    summarize(&analysis, methods, tol_ccp)
}

fn summarize(analysis: &PointAnalysis, methods: Vec<MethodOutcome>, tol_ccp: f64) -> MarkovianityReport {
    let mut best: Option<(&CandidateScore, Method)> = None;
    for o in &methods {
        if let Some(s) = &o.best {
            if best.is_none_or(|(b, _)| better(s, b)) {
                best = Some((s, o.method));
            }
        }
    }
    let nu = methods.iter().filter_map(|o| o.nu_min).reduce(f64::min);
    let candidates_tested = methods
        .iter()
        .filter(|o| o.best.is_some())
        .filter_map(|o| o.cardinality.exact())
        .sum();
    MarkovianityReport {
        status: PointStatus::Ok,
        message: None,
        n_c: Some(analysis.spectrum.n_c()),
        mu: best.map(|(s, _)| s.mu),
        nu,
        ccp_min_eigenvalue: best.map(|(s, _)| s.lambda_min),
        best_branch: best.map(|(s, _)| s.branch.clone()),
        best_method: best.map(|(_, m)| m),
        candidates_tested,
        methods,
        tol_ccp,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::{c, diag, max_abs, CMatrix};
    use crate::propagate::static_semigroup;
    use crate::superop::{commutator_superop, depolarizing_generator, dissipator_superop, lindbladian_superop};
    use ndarray::array;

    fn h2() -> CMatrix {
        array![[c(0.3, 0.0), c(0.1, -0.2)], [c(0.1, 0.2), c(-0.4, 0.0)]]
    }

    fn dephasing(gamma: f64) -> CMatrix {
        lindbladian_superop(&h2(), &[(diag(&[c(1.0, 0.0), c(-1.0, 0.0)]), gamma)]).unwrap()
    }

    #[test]
    fn commutator_is_von_neumann() {
        let s = commutator_superop(&h2()).unwrap();
        assert!(max_abs(&ccp_matrix(&s).unwrap()) < 1e-9);
        assert!(ccp_check(&s, default_tol_ccp(2)).unwrap().0);
        assert!(nu_branch(&s).unwrap() < 1e-8);
        assert_eq!(mu_branch(&s, default_tol_ccp(2)).unwrap(), 0.0);
    }

    #[test]
    fn dephasing_is_lindbladian_but_not_von_neumann() {
        let s = dephasing(0.2);
        let (ok, lmin) = ccp_check(&s, default_tol_ccp(2)).unwrap();
        assert!(ok && lmin >= -1e-10);
        assert!(nu_branch(&s).unwrap() > 0.1);
        assert_eq!(mu_branch(&s, default_tol_ccp(2)).unwrap(), 0.0);
    }

    #[test]
    fn flipped_dissipator_breaks_ccp() {
        let jump = diag(&[c(1.0, 0.0), c(-1.0, 0.0)]);
        let s = dephasing(0.2) - dissipator_superop(&jump).unwrap() * c(0.4, 0.0);
        let (ok, lmin) = ccp_check(&s, default_tol_ccp(2)).unwrap();
        assert!(!ok && lmin < 0.0);
        let mu = mu_branch(&s, default_tol_ccp(2)).unwrap();
        assert!(mu > 0.0);
        let z = depolarizing_generator(2);
        assert!(ccp_check(&(&s + &(&z * c(mu, 0.0))), default_tol_ccp(2)).unwrap().0);
        assert!(!ccp_check(&(&s + &(&z * c(mu - 1e-6, 0.0))), default_tol_ccp(2)).unwrap().0);
        // Adding a·𝒵 lowers μ by a.
        let shifted = mu_branch(&(&s + &(&z * c(0.25 * mu, 0.0))), default_tol_ccp(2)).unwrap();
        assert!((shifted - 0.75 * mu).abs() < 1e-10);
    }

    #[test]
    fn depolarizing_projects_to_scaled_complement() {
        let d = 3;
        let q = identity(d * d) - max_entangled_projector(d);
        let m = ccp_matrix(&depolarizing_generator(d)).unwrap();
        assert!(max_abs(&(m - q / c(d as f64, 0.0))) < 1e-12);
    }

    #[test]
    fn rejects_non_hermiticity_preserving_input() {
        let s = commutator_superop(&h2()).unwrap() * c(0.0, 1.0);
        assert!(matches!(ccp_matrix(&s), Err(Error::NotHermiticityPreserving { .. })));
    }

    #[test]
    fn identity_point_is_markovian() {
        let l = CMatrix::zeros((4, 4));
        let sampled = static_semigroup(&l, 1.0, 16).unwrap();
        let r = evaluate_point(&sampled, &EvalConfig::default());
        assert_eq!(r.status, PointStatus::Ok);
        assert_eq!(r.mu, Some(0.0));
        assert_eq!(r.nu, Some(0.0));
        assert_eq!(r.best_branch, Some(BranchVector::zeros(0)));
    }

    #[test]
    fn winding_static_point_prefers_unwound() {
        // Level spacings 0.7 and 0.8 all wind once at T = 6, and the shifted
        // frequencies no longer add up.
        let h = diag(&[c(0.0, 0.0), c(0.7, 0.0), c(1.5, 0.0)]);
        let mut a = CMatrix::zeros((3, 3));
        a[[0, 1]] = c(1.0, 0.0);
        let mut b = CMatrix::zeros((3, 3));
        b[[1, 2]] = c(1.0, 0.0);
        let l = lindbladian_superop(&h, &[(a, 0.02), (b, 0.035)]).unwrap();
        let sampled = static_semigroup(&l, 6.0, 64).unwrap();
        let r = evaluate_point(&sampled, &EvalConfig::default());
        assert_eq!(r.status, PointStatus::Ok, "{:?}", r.message);
        let principal = r.method(Method::Principal).unwrap().best.clone().unwrap();
        let unwound = r.method(Method::Unwound).unwrap().best.clone().unwrap();
        assert!(principal.mu > 1e-3);
        assert!(unwound.mu < 1e-8);
        assert_eq!(r.mu, Some(unwound.mu));
        assert_eq!(r.best_method, Some(Method::Unwound));
        assert!(!unwound.branch.is_zero());
    }

    #[test]
    fn negative_real_eigenvalue_status() {
        let l = commutator_superop(&diag(&[c(0.5, 0.0), c(-0.5, 0.0)])).unwrap();
        let sampled = static_semigroup(&l, std::f64::consts::PI, 16).unwrap();
        let r = evaluate_point(&sampled, &EvalConfig::default());
        assert_eq!(r.status, PointStatus::NegativeRealEigenvalue);
        assert_eq!(r.mu, None);
    }

    #[test]
    fn projected_family_matches_direct_evaluation() {
        let l = dephasing(0.05) + commutator_superop(&diag(&[c(0.6, 0.0), c(-0.6, 0.0)])).unwrap();
        let sampled = static_semigroup(&l, 9.0, 16).unwrap();
        let a = PointAnalysis::new(&sampled, &EvalConfig::default()).unwrap();
        for x in -2..=2 {
            let x = BranchVector(vec![x]);
            let direct = Distances::of(&a.family.generator(&x).unwrap(), a.tol_ccp).unwrap();
            let fast = a.projected.distances(&x, a.tol_ccp).unwrap();
            assert!((direct.mu - fast.mu).abs() < 1e-10);
            assert!((direct.nu - fast.nu).abs() < 1e-10);
        }
    }

    #[test]
    fn ties_pick_smallest_branch() {
        let a = CandidateScore { branch: BranchVector(vec![-1, 2]), mu: 0.0, nu: 1.0, lambda_min: 0.0 };
        let b = CandidateScore { branch: BranchVector(vec![0, -5]), mu: 0.0, nu: 0.5, lambda_min: 0.0 };
        assert!(better(&a, &b));
        assert!(!better(&b, &a));
    }
}
