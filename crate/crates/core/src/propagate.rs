//! Sampled dynamical maps `𝒱(t_n)`, `t_n = n·T/n_t`, over one period.

use crate::error::{Error, Result};
use crate::numkernel::{c, expm, identity, max_abs, singular_values, square_dim, CMatrix};
use crate::superop::{hermiticity_residual, map_trace_residual, superop_dim};

/// Trace-preservation tolerance for every sampled map.
pub const TOL_TP: f64 = 1e-8;
/// Smallest singular value below which a sample counts as non-invertible.
pub const SIGMA_MIN: f64 = 1e-12;

pub const DEFAULT_N_STEPS: usize = 2048;
pub const DEFAULT_N_T: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorKind {
    PeriodicLindbladian,
    Static,
    ConvexMixture,
}

#[derive(Debug, Clone)]
pub struct SampledMap {
    pub period: f64,
    pub n_t: usize,
    /// `n_t + 1` maps, the last one being the monodromy `𝒱(T)`.
    pub maps: Vec<CMatrix>,
    pub kind: GeneratorKind,
}

impl SampledMap {
    pub fn monodromy(&self) -> &CMatrix {
        self.maps.last().expect("at least one sample")
    }

    pub fn time(&self, n: usize) -> f64 {
        n as f64 * self.period / self.n_t as f64
    }

    pub fn hilbert_dim(&self) -> usize {
        superop_dim(&self.maps[0]).expect("superoperator samples")
    }

    /// Checks the identity start, trace preservation and Hermiticity
    /// preservation of every sample.
    pub fn validate(&self) -> Result<()> {
        let n = square_dim(&self.maps[0])?;
        let start = max_abs(&(&self.maps[0] - &identity(n)));
        if start > 1e-12 {
            return Err(Error::ToleranceNotMet { what: "initial map deviates from identity", value: start, tol: 1e-12 });
        }
        for m in &self.maps {
            let tp = map_trace_residual(m)?;
            if tp > TOL_TP {
                return Err(Error::NotTracePreserving { residual: tp });
            }
            let hp = hermiticity_residual(m)?;
            if hp > 1e-8 {
                return Err(Error::NotHermiticityPreserving { residual: hp });
            }
        }
        Ok(())
    }

    /// Fails with `NotInvertible` at the first sample whose smallest singular
    /// value drops below [`SIGMA_MIN`].
    pub fn check_invertible(&self) -> Result<()> {
        for (sample, m) in self.maps.iter().enumerate() {
            let sv = singular_values(m)?;
            let sigma_min = sv[sv.len() - 1];
            if !(sigma_min > SIGMA_MIN) {
                return Err(Error::NotInvertible { sample, sigma_min });
            }
        }
        Ok(())
    }
}

/// Integrates `∂_t 𝒱 = ℒ(t)𝒱`, `𝒱(0) = 1`, with fixed-step classical RK4.
///
/// `generator(t)` must return the `d² x d²` superoperator at time `t`;
/// `n_steps` is the number of steps per period and must be a multiple of
/// `n_t`.
pub fn propagate_periodic<F>(generator: F, period: f64, n_t: usize, n_steps: usize) -> Result<SampledMap>
where
    F: Fn(f64) -> CMatrix,
{
    if n_t == 0 || n_steps == 0 || !n_steps.is_multiple_of(n_t) {
        return Err(Error::StepCountInvalid { n_steps, n_t });
    }
    let l0 = generator(0.0);
    let n = square_dim(&l0)?;
    superop_dim(&l0)?;
    let h = period / n_steps as f64;
    let per_sample = n_steps / n_t;

    let mut v = identity(n);
    let mut maps = Vec::with_capacity(n_t + 1);
    maps.push(v.clone());
    let mut l_start = l0;
    for step in 0..n_steps {
        let t = step as f64 * h;
        let l_mid = generator(t + 0.5 * h);
        let l_end = generator(t + h);
        let k1 = l_start.dot(&v);
        let k2 = l_mid.dot(&(&v + &(&k1 * c(0.5 * h, 0.0))));
        let k3 = l_mid.dot(&(&v + &(&k2 * c(0.5 * h, 0.0))));
        let k4 = l_end.dot(&(&v + &(&k3 * c(h, 0.0))));
        v = v + (k1 + (k2 + k3) * c(2.0, 0.0) + k4) * c(h / 6.0, 0.0);
        l_start = l_end;
        if (step + 1) % per_sample == 0 {
            maps.push(v.clone());
        }
    }

    for m in &maps {
        let tp = map_trace_residual(m)?;
        if tp > TOL_TP {
            return Err(Error::ToleranceNotMet { what: "trace-preservation drift", value: tp, tol: TOL_TP });
        }
    }
    Ok(SampledMap { period, n_t, maps, kind: GeneratorKind::PeriodicLindbladian })
}

fn semigroup_samples(l: &CMatrix, period: f64, n_t: usize) -> Result<Vec<CMatrix>> {
    if n_t == 0 {
        return Err(Error::StepCountInvalid { n_steps: 0, n_t });
    }
    let n = square_dim(l)?;
    superop_dim(l)?;
    let step = expm(&(l * c(period / n_t as f64, 0.0)))?;
    let mut maps = Vec::with_capacity(n_t + 1);
    let mut v = identity(n);
    maps.push(v.clone());
    for _ in 0..n_t {
        v = step.dot(&v);
        maps.push(v.clone());
    }
    Ok(maps)
}

/// `𝒱(t_n) = exp(t_n ℒ)` for a time-independent generator.
pub fn static_semigroup(l: &CMatrix, period: f64, n_t: usize) -> Result<SampledMap> {
    Ok(SampledMap { period, n_t, maps: semigroup_samples(l, period, n_t)?, kind: GeneratorKind::Static })
}

/// `𝒱(t) = λ exp(tℒ₁) + (1−λ) exp(tℒ₂)`.
pub fn convex_mixture_map(l1: &CMatrix, l2: &CMatrix, lambda: f64, period: f64, n_t: usize) -> Result<SampledMap> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::LambdaOutOfRange(lambda));
    }
    let (n1, n2) = (square_dim(l1)?, square_dim(l2)?);
    if n1 != n2 {
        return Err(Error::DimensionMismatch { expected: n1, got: n2 });
    }
    let first = semigroup_samples(l1, period, n_t)?;
    let second = semigroup_samples(l2, period, n_t)?;
    let maps = first
        .into_iter()
        .zip(second)
        .map(|(a, b)| a * c(lambda, 0.0) + b * c(1.0 - lambda, 0.0))
        .collect();
    Ok(SampledMap { period, n_t, maps, kind: GeneratorKind::ConvexMixture })
}
