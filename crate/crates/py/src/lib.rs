//! Python bindings. Matrices cross the boundary as `list[list[complex]]`;
//! reports come back as JSON strings.

use ndarray::Array2;
use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use unwind_core::branching::{spectral_decompose_channel, BranchFamily, BranchVector, SpectralTolerances, DEFAULT_X_CAP};
use unwind_core::markov::{self, EvalConfig, Method, ModifiedParams};
use unwind_core::numkernel::{expm, CMatrix};
use unwind_core::propagate::static_semigroup;
use unwind_core::superop;
use unwind_core::sweep::{self, SweepConfig};

type Rows = Vec<Vec<Complex64>>;

fn err(e: unwind_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_matrix(rows: Rows) -> PyResult<CMatrix> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != m) {
        return Err(PyValueError::new_err("ragged matrix"));
    }
    Array2::from_shape_vec((n, m), rows.into_iter().flatten().collect()).map_err(|e| PyValueError::new_err(e.to_string()))
}

fn to_rows(a: &CMatrix) -> Rows {
    a.rows().into_iter().map(|r| r.to_vec()).collect()
}

/// `−i[H,·] + Σ_k γ_k D[L_k]` as a row-major superoperator.
#[pyfunction]
#[pyo3(signature = (h, jumps=Vec::new()))]
fn lindbladian(h: Rows, jumps: Vec<(Rows, f64)>) -> PyResult<Rows> {
    let jumps = jumps.into_iter().map(|(l, r)| Ok((to_matrix(l)?, r))).collect::<PyResult<Vec<_>>>()?;
    Ok(to_rows(&superop::lindbladian_superop(&to_matrix(h)?, &jumps).map_err(err)?))
}

#[pyfunction]
fn choi(s: Rows) -> PyResult<Rows> {
    Ok(to_rows(&superop::choi(&to_matrix(s)?).map_err(err)?))
}

#[pyfunction]
fn expm_matrix(a: Rows) -> PyResult<Rows> {
    Ok(to_rows(&expm(&to_matrix(a)?).map_err(err)?))
}

/// Distance from the CCP cone; zero for a valid Lindbladian.
#[pyfunction]
#[pyo3(signature = (s, tol_ccp=None))]
fn mu(s: Rows, tol_ccp: Option<f64>) -> PyResult<f64> {
    let s = to_matrix(s)?;
    let d = superop::superop_dim(&s).map_err(err)?;
    markov::mu_branch(&s, tol_ccp.unwrap_or_else(|| markov::default_tol_ccp(d))).map_err(err)
}

#[pyfunction]
fn nu(s: Rows) -> PyResult<f64> {
    markov::nu_branch(&to_matrix(s)?).map_err(err)
}

/// Generator of the logarithm branch `branch` of `exp(l·period)`.
#[pyfunction]
fn branch_generator(l: Rows, period: f64, branch: Vec<i64>) -> PyResult<Rows> {
    let v = expm(&(to_matrix(l)? * Complex64::new(period, 0.0))).map_err(err)?;
    let spec = spectral_decompose_channel(&v, &SpectralTolerances::default()).map_err(err)?;
    let family = BranchFamily::new(&spec, period, DEFAULT_X_CAP).map_err(err)?;
    if branch.len() != family.n_c() {
        return Err(PyValueError::new_err(format!("expected {} branch indices", family.n_c())));
    }
    Ok(to_rows(&family.generator(&BranchVector(branch)).map_err(err)?))
}

/// Markovianity report for the map `exp(l·t)` observed on `[0, period]`.
#[pyfunction]
#[pyo3(signature = (l, period, methods=vec!["principal".to_string(), "unwound".to_string()], n_t=64, eta=0.7, n_b=2, radius=1))]
fn evaluate_static(l: Rows, period: f64, methods: Vec<String>, n_t: usize, eta: f64, n_b: usize, radius: u32) -> PyResult<String> {
    let methods: Vec<Method> = methods
        .iter()
        .map(|m| Method::ALL.into_iter().find(|x| x.name() == m).ok_or_else(|| PyValueError::new_err(format!("unknown method {m}"))))
        .collect::<PyResult<_>>()?;
    let has = |m| methods.contains(&m);
    let cfg = EvalConfig {
        principal: has(Method::Principal),
        unwound: has(Method::Unwound),
        modified: has(Method::Modified).then_some(ModifiedParams { eta, n_b }),
        standard: has(Method::Standard).then_some(radius),
        ..EvalConfig::default()
    };
    let sampled = static_semigroup(&to_matrix(l)?, period, n_t).map_err(err)?;
    let report = markov::evaluate_point(&sampled, &cfg);
    Ok(serde_json::to_string(&report).expect("report serializes"))
}

/// JSON diagnostic for grid point `(i, j)` of a TOML sweep config.
#[pyfunction]
fn point_report(config_toml: &str, i: usize, j: usize) -> PyResult<String> {
    let cfg = SweepConfig::from_toml(config_toml).map_err(err)?;
    let r = sweep::point_report(&cfg, i, j).map_err(err)?;
    Ok(serde_json::to_string(&r).expect("report serializes"))
}

/// Runs a sweep config file; returns `(csv_path, rows, failures)`.
#[pyfunction]
fn run_sweep(py: Python<'_>, config_path: std::path::PathBuf) -> PyResult<(String, usize, usize)> {
    let (cfg, text) = SweepConfig::load(&config_path).map_err(err)?;
    let summary = py.detach(|| sweep::run_sweep(&cfg, &text)).map_err(err)?;
    Ok((summary.path.display().to_string(), summary.rows, summary.failures))
}

#[pymodule]
fn unwind(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_function(wrap_pyfunction!(lindbladian, m)?)?;
    m.add_function(wrap_pyfunction!(choi, m)?)?;
    m.add_function(wrap_pyfunction!(expm_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(mu, m)?)?;
    m.add_function(wrap_pyfunction!(nu, m)?)?;
    m.add_function(wrap_pyfunction!(branch_generator, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate_static, m)?)?;
    m.add_function(wrap_pyfunction!(point_report, m)?)?;
    m.add_function(wrap_pyfunction!(run_sweep, m)?)?;
    Ok(())
}
