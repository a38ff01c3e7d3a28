//! Parameter sweeps over a two-dimensional grid, CSV output and per-point
//! diagnostic reports.

mod config;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

pub use config::{
    Axis, AxisName, ChainModel, MethodsConfig, MixtureModel, ModelConfig, Numerics, OutputConfig, OutputFormat,
    PointModel, ReportConfig, Scale, SweepConfig, WORKERS_ENV,
};
pub use report::{point_report, EtaRow, PairRow, Peak, PointReport};

use crate::error::{Error, Result};
use crate::markov::{default_tol_ccp, evaluate_point, MarkovianityReport, Method, PointStatus};
use crate::models::{periodic_lindbladian, sm_static_pair};
use crate::propagate::{convex_mixture_map, propagate_periodic, SampledMap};

/// Fixed data columns; the two axis columns follow the grid indices.
pub const TRAILING_COLUMNS: [&str; 15] = [
    "n_c",
    "status",
    "mu_principal",
    "nu_principal",
    "mu_unwound",
    "nu_unwound",
    "mu_modified",
    "nu_modified",
    "card_modified",
    "mu_standard",
    "card_standard",
    "mu_min",
    "nu_min",
    "best_branch",
    "seconds",
];

/// Samples the dynamical map of one grid point; the second element carries
/// non-fatal warnings.
pub fn sample_point(model: &PointModel, numerics: &Numerics) -> Result<(SampledMap, Vec<String>)> {
    let mut warnings = Vec::new();
    let sampled = match model {
        PointModel::Chain(p) => {
            let pl = periodic_lindbladian(p)?;
            if p.gamma != 0.0 && pl.dissipator.degenerate {
                warnings.push("undriven spectrum is degenerate; rates depend on the chosen eigenbasis".to_string());
            }
            propagate_periodic(|t| pl.at(t), p.period(), numerics.n_t, numerics.n_steps)?
        }
        PointModel::Mixture(m) => {
            let params = crate::models::SpinChainParams {
                sites: m.sites,
                deltas: m.deltas.clone(),
                w: m.w,
                e: 0.0,
                omega: 1.0,
                gamma: m.gamma,
                temperature: 1.0,
            };
            let (l1, l2) = sm_static_pair(&params, m.axes)?;
            convex_mixture_map(&l1, &l2, m.lambda, m.period, numerics.n_t)?
        }
    };
    Ok((sampled, warnings))
}

#[derive(Debug, Clone)]
pub struct PointRecord {
    pub idx1: usize,
    pub idx2: usize,
    pub value1: f64,
    pub value2: f64,
    pub report: MarkovianityReport,
    pub seconds: f64,
    pub warnings: Vec<String>,
}

impl PointRecord {
    pub fn ok(&self) -> bool {
        self.report.status == PointStatus::Ok
    }

    fn method_mu(&self, m: Method) -> Option<f64> {
        self.report.method(m).and_then(|o| o.best.as_ref()).map(|b| b.mu)
    }

    fn method_nu(&self, m: Method) -> Option<f64> {
        self.report.method(m).and_then(|o| o.nu_min)
    }

    fn method_card(&self, m: Method) -> Option<String> {
        self.report.method(m).map(|o| o.cardinality.exact().map_or(o.cardinality.to_string(), |n| n.to_string()))
    }

    /// CSV fields in column order.
    pub fn fields(&self, timing: bool) -> Vec<String> {
        let num = |x: Option<f64>| x.map_or(String::new(), |v| format!("{v:e}"));
        let ok = self.ok();
        let gated = |x: Option<f64>| if ok { num(x) } else { String::new() };
        let card = |m| if ok { self.method_card(m).unwrap_or_default() } else { String::new() };
        vec![
            self.idx1.to_string(),
            self.idx2.to_string(),
            format!("{}", self.value1),
            format!("{}", self.value2),
            self.report.n_c.map_or(String::new(), |n| n.to_string()),
            self.report.status.to_string(),
            gated(self.method_mu(Method::Principal)),
            gated(self.method_nu(Method::Principal)),
            gated(self.method_mu(Method::Unwound)),
            gated(self.method_nu(Method::Unwound)),
            gated(self.method_mu(Method::Modified)),
            gated(self.method_nu(Method::Modified)),
            card(Method::Modified),
            gated(self.method_mu(Method::Standard)),
            card(Method::Standard),
            gated(self.report.mu),
            gated(self.report.nu),
            if ok { self.report.best_branch.as_ref().map_or(String::new(), |b| b.to_string()) } else { String::new() },
            if timing { format!("{:.3}", self.seconds) } else { String::new() },
        ]
    }
}

/// Evaluates grid point `(i, j)`.
pub fn evaluate_grid_point(cfg: &SweepConfig, i: usize, j: usize) -> Result<PointRecord> {
    let model = cfg.point_model(i, j)?;
    let start = Instant::now();
    let eval = cfg.eval_config();
    let (report, warnings) = match sample_point(&model, &cfg.numerics) {
        Ok((sampled, warnings)) => (evaluate_point(&sampled, &eval), warnings),
        Err(e) => {
            let d = match &model {
                PointModel::Chain(p) => p.dim(),
                PointModel::Mixture(m) => 1 << m.sites,
            };
            (MarkovianityReport::from_error(&e, eval.tol_ccp.unwrap_or_else(|| default_tol_ccp(d))), Vec::new())
        }
    };
    Ok(PointRecord {
        idx1: i,
        idx2: j,
        value1: cfg.axis1.value(i),
        value2: cfg.axis2.value(j),
        report,
        seconds: start.elapsed().as_secs_f64(),
        warnings,
    })
}

/// All grid points in row-major order (`idx1` outer), evaluated on a pool of
/// `cfg.workers()` threads.
pub fn run_points(cfg: &SweepConfig) -> Result<Vec<PointRecord>> {
    let (n1, n2) = cfg.shape();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers())
        .build()
        .map_err(|e| Error::ConfigInvalid(format!("worker pool: {e}")))?;
    pool.install(|| {
        (0..n1 * n2)
            .into_par_iter()
            .map(|k| evaluate_grid_point(cfg, k / n2, k % n2))
            .collect::<Result<Vec<_>>>()
    })
}

pub fn config_hash(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// `#`-prefixed metadata lines.
pub fn header_lines(cfg: &SweepConfig, config_text: &str) -> Vec<String> {
    let n = &cfg.numerics;
    let eval = cfg.eval_config();
    let tol_ccp = n.tol_ccp.map_or("1e-9*d".to_string(), |t| format!("{t:e}"));
    let methods: Vec<&str> = cfg.methods.list.iter().map(|m| m.name()).collect();
    let model = match &cfg.model {
        ModelConfig::SpinChain(_) => "spin-chain",
        ModelConfig::Mixture(_) => "mixture",
    };
    vec![
        format!("# unwind sweep, crate version {}", env!("CARGO_PKG_VERSION")),
        format!("# config_sha256: {}", config_hash(config_text)),
        format!("# created: {}", chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)),
        format!("# model: {model}"),
        format!(
            "# grid: {} x {} ({}: [{}, {}], {}: [{}, {}])",
            cfg.axis1.count,
            cfg.axis2.count,
            cfg.axis1.name.as_str(),
            cfg.axis1.min,
            cfg.axis1.max,
            cfg.axis2.name.as_str(),
            cfg.axis2.min,
            cfg.axis2.max
        ),
        format!(
            "# methods: {} (eta={}, n_b={}, radius={}, budget={})",
            methods.join(","),
            cfg.methods.eta,
            cfg.methods.n_b,
            cfg.methods.radius,
            cfg.methods.budget
        ),
        format!(
            "# numerics: integrator=rk4 n_steps={} n_t={} tol_ccp={} tol_pair={:e} cond_max={:e} x_cap={} tol_singular={:e}",
            n.n_steps, n.n_t, tol_ccp, n.tol_pair, n.cond_max, n.x_cap, eval.spectral.tol_singular
        ),
        "# conventions: vec row-major |i><j| -> i*d+j; Omega = i*ln(lambda)/T; modes Phi(t) = e^{i Omega t} V(t) r; \
         Fourier Phi(t) = sum_n e^{i omega n t} Phi_n; branch shift +i(2pi/T)x on the Im(lambda)>0 member; \
         mu = max(0, -d*lambda_min) snapped to 0 when lambda_min >= -tol_ccp"
            .to_string(),
        "# dissipator: quantum-optical jumps include k=q terms with g(0)=temperature; rates below 1e-14 dropped".to_string(),
        "# empty fields: method not run, set over budget, or point failed (see status)".to_string(),
    ]
}

pub fn column_names(cfg: &SweepConfig) -> Vec<String> {
    let mut cols = vec!["idx1".to_string(), "idx2".to_string()];
    cols.push(cfg.axis1.name.as_str().to_string());
    cols.push(cfg.axis2.name.as_str().to_string());
    cols.extend(TRAILING_COLUMNS.iter().map(|s| s.to_string()));
    cols
}

pub fn write_csv<W: Write>(mut out: W, cfg: &SweepConfig, config_text: &str, records: &[PointRecord]) -> Result<()> {
    for line in header_lines(cfg, config_text) {
        writeln!(out, "{line}")?;
    }
    let mut w = csv::Writer::from_writer(out);
    let to_io = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(column_names(cfg)).map_err(to_io)?;
    for r in records {
        w.write_record(r.fields(cfg.output.timing)).map_err(to_io)?;
    }
    w.flush()?;
    Ok(())
}

/// Checks that `mu_min` is the minimum of the per-method `μ` columns on every
/// `ok` row of a written CSV.
pub fn verify_mu_min(path: &std::path::Path) -> Result<()> {
    let text = std::fs::read_to_string(path)?;
    let body: String = text.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();
    let mut rdr = csv::Reader::from_reader(body.as_bytes());
    let to_io = |e: csv::Error| Error::Io(std::io::Error::other(e));
    let headers = rdr.headers().map_err(to_io)?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let mu_cols: Vec<usize> = ["mu_principal", "mu_unwound", "mu_modified", "mu_standard"].iter().filter_map(|c| col(c)).collect();
    let (status, mu_min) = (col("status").expect("status column"), col("mu_min").expect("mu_min column"));
    for row in rdr.records() {
        let row = row.map_err(to_io)?;
        if &row[status] != "ok" {
            continue;
        }
        let values: Vec<f64> = mu_cols.iter().filter_map(|&c| row[c].parse().ok()).collect();
        let expected = values.iter().copied().reduce(f64::min);
        let got: Option<f64> = row[mu_min].parse().ok();
        if expected != got {
            return Err(Error::ToleranceNotMet {
                what: "mu_min differs from the minimum of the method columns",
                value: (expected.unwrap_or(f64::NAN) - got.unwrap_or(f64::NAN)).abs(),
                tol: 0.0,
            });
        }
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct SweepSummary {
    pub path: PathBuf,
    pub rows: usize,
    pub failures: usize,
    pub warnings: usize,
}

impl SweepSummary {
    /// `3` when every point failed, else `0`.
    pub fn exit_code(&self) -> i32 {
        if self.rows > 0 && self.failures == self.rows {
            3
        } else {
            0
        }
    }
}

/// Runs the whole grid and writes the CSV to `cfg.output.path`.
pub fn run_sweep(cfg: &SweepConfig, config_text: &str) -> Result<SweepSummary> {
    let records = run_points(cfg)?;
    let path = cfg.output.path.clone();
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let file = std::io::BufWriter::new(std::fs::File::create(&path)?);
    write_csv(file, cfg, config_text, &records)?;
    verify_mu_min(&path)?;
    Ok(SweepSummary {
        path,
        rows: records.len(),
        failures: records.iter().filter(|r| !r.ok()).count(),
        warnings: records.iter().map(|r| r.warnings.len()).sum(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(dir: &std::path::Path, grid: (usize, usize), timing: bool) -> (SweepConfig, String) {
        let text = format!(
            r#"
[model]
kind = "spin-chain"
sites = 1
deltas = [1.0]
omega = 6.0
gamma = 0.02

[axis1]
name = "E"
min = 0.5
max = 1.5
count = {}

[axis2]
name = "omega"
min = 1.0
max = 4.0
count = {}

[methods]
list = ["principal", "unwound", "standard"]

[numerics]
n_steps = 256
n_t = 64

[output]
path = "{}"
timing = {timing}
"#,
            grid.0,
            grid.1,
            dir.join("out.csv").display()
        );
        (SweepConfig::from_toml(&text).unwrap(), text)
    }

    fn data_section(path: &std::path::Path) -> String {
        std::fs::read_to_string(path).unwrap().lines().filter(|l| !l.starts_with('#')).collect::<Vec<_>>().join("\n")
    }

    #[test]
    fn single_point_gives_one_row() {
        let dir = tempfile::tempdir().unwrap();
        let (cfg, text) = config(dir.path(), (1, 1), true);
        let summary = run_sweep(&cfg, &text).unwrap();
        assert_eq!(summary.rows, 1);
        assert_eq!(summary.exit_code(), 0);
        let data = data_section(&summary.path);
        let lines: Vec<&str> = data.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(
            lines[0],
            "idx1,idx2,E,omega,n_c,status,mu_principal,nu_principal,mu_unwound,nu_unwound,mu_modified,nu_modified,\
             card_modified,mu_standard,card_standard,mu_min,nu_min,best_branch,seconds"
        );
        let fields: Vec<&str> = lines[1].split(',').collect();
        assert_eq!(fields.len(), 19);
        assert_eq!(fields[5], "ok");
        assert_eq!(fields[10], "");
        assert_eq!(fields[14], "3");
    }

    #[test]
    fn deterministic_and_independent_of_workers() {
        let dir = tempfile::tempdir().unwrap();
        let (mut cfg, text) = config(dir.path(), (3, 2), false);
        cfg.workers = Some(1);
        let first = run_points(&cfg).unwrap();
        cfg.workers = Some(4);
        let second = run_points(&cfg).unwrap();
        let rows = |rs: &[PointRecord]| rs.iter().map(|r| r.fields(false).join(",")).collect::<Vec<_>>();
        assert_eq!(rows(&first), rows(&second));
        assert_eq!(first.iter().map(|r| (r.idx1, r.idx2)).collect::<Vec<_>>(), vec![(0, 0), (0, 1), (1, 0), (1, 1), (2, 0), (2, 1)]);

        let a = run_sweep(&cfg, &text).unwrap();
        let da = data_section(&a.path);
        let b = run_sweep(&cfg, &text).unwrap();
        assert_eq!(da, data_section(&b.path));
    }

    #[test]
    fn all_failed_points_exit_three() {
        let summary = SweepSummary { path: PathBuf::new(), rows: 2, failures: 2, warnings: 0 };
        assert_eq!(summary.exit_code(), 3);
        let summary = SweepSummary { failures: 1, ..summary };
        assert_eq!(summary.exit_code(), 0);
    }

    #[test]
    fn hash_is_hex_sha256() {
        assert_eq!(config_hash("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }
}
