use serde::Serialize;

use super::{sample_point, PointModel, SweepConfig};
use crate::branching::BranchVector;
use crate::error::Result;
use crate::markov::{evaluate_point, MarkovianityReport, PointAnalysis};

/// Peaks listed per pair.
const TOP_PEAKS: usize = 5;

#[derive(Debug, Clone, Serialize)]
pub struct Peak {
    pub n: i64,
    pub amplitude: f64,
    /// `amplitude / main amplitude`.
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairRow {
    pub pair: usize,
    /// Eigenvalue indices of the `Im λ > 0` member and its partner.
    pub mode: usize,
    pub partner: usize,
    pub lambda: [f64; 2],
    pub quasienergy: [f64; 2],
    pub peaks: Vec<Peak>,
    pub parseval_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EtaRow {
    pub eta: f64,
    pub n_b: usize,
    /// Secondary peaks admitted per pair.
    pub z: Vec<usize>,
    pub n_tilde: usize,
    pub cardinality: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct PointReport {
    pub idx1: usize,
    pub idx2: usize,
    pub axis1: (String, f64),
    pub axis2: (String, f64),
    pub model: serde_json::Value,
    pub eigenvalues: Vec<[f64; 2]>,
    pub real_flags: Vec<bool>,
    pub condition: Option<f64>,
    pub biorthogonality_residual: Option<f64>,
    pub pairs: Vec<PairRow>,
    pub x_max: Option<BranchVector>,
    pub eta_table: Vec<EtaRow>,
    pub result: MarkovianityReport,
    pub warnings: Vec<String>,
}

fn model_json(model: &PointModel) -> serde_json::Value {
    match model {
        PointModel::Chain(p) => serde_json::json!({ "kind": "spin-chain", "params": p }),
        PointModel::Mixture(m) => serde_json::json!({ "kind": "mixture", "params": m }),
    }
}

/// Full diagnostic for grid point `(i, j)`. Spectral failures are reported
/// through `result.status` with the spectral fields left empty.
pub fn point_report(cfg: &SweepConfig, i: usize, j: usize) -> Result<PointReport> {
    let model = cfg.point_model(i, j)?;
    let (sampled, warnings) = sample_point(&model, &cfg.numerics)?;
    let mut eval = cfg.eval_config();
    eval.keep = cfg.report.keep;
    let result = evaluate_point(&sampled, &eval);

    let mut report = PointReport {
        idx1: i,
        idx2: j,
        axis1: (cfg.axis1.name.as_str().to_string(), cfg.axis1.value(i)),
        axis2: (cfg.axis2.name.as_str().to_string(), cfg.axis2.value(j)),
        model: model_json(&model),
        eigenvalues: Vec::new(),
        real_flags: Vec::new(),
        condition: None,
        biorthogonality_residual: None,
        pairs: Vec::new(),
        x_max: None,
        eta_table: Vec::new(),
        result,
        warnings,
    };

    eval.principal = false;
    eval.unwound = true;
    let Ok(analysis) = PointAnalysis::new(&sampled, &eval) else {
        return Ok(report);
    };
    let spec = &analysis.spectrum;
    report.eigenvalues = spec.eigenvalues.iter().map(|z| [z.re, z.im]).collect();
    report.real_flags = spec.real_flags.clone();
    report.condition = Some(spec.condition);
    report.biorthogonality_residual = Some(spec.biorthogonality_residual());
    report.x_max = analysis.x_max();

    let modes = analysis.profile.as_ref().map(|p| p.modes.as_slice()).unwrap_or_default();
    for (c, pair) in spec.pairs.iter().enumerate() {
        let lambda = spec.eigenvalues[pair.mode];
        let omega = spec.quasienergy(pair.mode, sampled.period);
        let (peaks, parseval_residual) = match modes.get(c) {
            Some(m) => {
                let a0 = m.peak(0).1;
                let peaks = m
                    .top(TOP_PEAKS)
                    .into_iter()
                    .map(|(n, a)| Peak { n, amplitude: a, ratio: if a0 > 0.0 { a / a0 } else { 0.0 } })
                    .collect();
                (peaks, m.parseval_residual)
            }
            None => (Vec::new(), f64::NAN),
        };
        report.pairs.push(PairRow {
            pair: c,
            mode: pair.mode,
            partner: pair.partner,
            lambda: [lambda.re, lambda.im],
            quasienergy: [omega.re, omega.im],
            peaks,
            parseval_residual,
        });
    }

    if let Some(profile) = &analysis.profile {
        for &eta in &cfg.report.etas {
            let row = match crate::branching::modified_branch_set(profile, eta, cfg.methods.n_b, u128::MAX) {
                Ok(m) => EtaRow {
                    eta,
                    n_b: cfg.methods.n_b,
                    n_tilde: m.n_tilde,
                    cardinality: m.set.cardinality.to_string(),
                    z: m.z,
                },
                Err(_) => continue,
            };
            report.eta_table.push(row);
        }
    }
    Ok(report)
}
