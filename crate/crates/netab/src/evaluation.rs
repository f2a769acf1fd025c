//! Study pipelines: Monte Carlo baselines, percentile/gap summaries,
//! balance-probability figures, and assumption-decay grids.

use rayon::prelude::*;
use serde::Serialize;

use crate::asymptotics::{assumption_ratios, balance_probability, reduce};
use crate::design::{
    algorithm1, algorithm2, c_of_w, cut_objective, degree_balance, pair_structure, Design,
    Scenario, StoppingConfig,
};
use crate::error::{Error, Result};
use crate::graph::{generate_er, Network};
use crate::seeds::{self, streams};
use crate::variance::{design_variance, ScenarioIParams};

/// Number of randomized draws averaged for the realized balance
/// probability.
const PROB_ACTUAL_DRAWS: usize = 100;

/// Uniformly random allocation with exactly half the vertices on each
/// arm. Deterministic given `seed`.
pub fn random_balanced_design(net: &Network, seed: u64) -> Result<Design> {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    let n = net.n();
    if n % 2 == 1 {
        return Err(Error::OddVertexCount { n });
    }
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut x = vec![-1i8; n];
    for &v in &order[..n / 2] {
        x[v] = 1;
    }
    Ok(Design::from_signs(x).expect("entries are +-1 by construction"))
}

/// Summary of one network/scenario evaluation against a Monte Carlo
/// baseline of random balanced designs.
#[derive(Debug, Clone, Serialize)]
pub struct EvaluationReport {
    pub scenario: Scenario,
    /// Fraction of baseline variances at or below the proposed design's.
    pub percentile: f64,
    /// `1 - v_lb / v_opt`.
    pub gap: f64,
    /// `1 - v_lb / v_median`.
    pub gap_median: f64,
    pub v_opt: f64,
    pub v_median: f64,
    pub v_lb: f64,
    pub n_mc: usize,
    pub acceptance_rate: f64,
    pub mean_iterations: f64,
    /// Balance probability evaluated at the guaranteed bound `c_of_w`.
    pub balance_prob_upper: f64,
    /// Balance probability at the realized |degree balance|, averaged
    /// over randomized draws.
    pub balance_prob_actual_avg: f64,
}

fn baseline_variance(
    net: &Network,
    scenario: Scenario,
    params: &ScenarioIParams,
    seed: u64,
) -> Result<f64> {
    let d = random_balanced_design(net, seed)?;
    match design_variance(net, &d, scenario, params) {
        Ok(report) => Ok(report.variance),
        // a baseline explained by the regressors has unbounded variance;
        // rank it above every finite candidate instead of dropping it
        Err(Error::RankDeficientDesign { .. }) if scenario == Scenario::II => Ok(f64::INFINITY),
        Err(e) => Err(e),
    }
}

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// Upper-bound and realized-average balance probabilities for one
/// network.
fn balance_probabilities(net: &Network, seed: u64) -> Result<(f64, f64)> {
    let ps = pair_structure(net, seeds::derive(seed, streams::REFERENCE_PAIRING));
    let upper = balance_probability(net, c_of_w(net, &ps))?;
    let mut total = 0.0;
    for i in 0..PROB_ACTUAL_DRAWS {
        let d = algorithm1(
            net,
            seeds::derive_indexed(seed, streams::PROB_ACTUAL, i as u64),
        );
        total += balance_probability(net, degree_balance(net, &d).abs() as f64)?;
    }
    Ok((upper, total / PROB_ACTUAL_DRAWS as f64))
}

/// Runs the rerandomized design against `n_mc` random balanced baselines
/// and reports percentile, gaps, and balance diagnostics. Deterministic
/// given `(net, cfg, params, n_mc, seed)`.
pub fn evaluate(
    net: &Network,
    cfg: &StoppingConfig,
    params: &ScenarioIParams,
    n_mc: usize,
    seed: u64,
) -> Result<EvaluationReport> {
    if net.n() % 2 == 1 {
        return Err(Error::OddVertexCount { n: net.n() });
    }
    if n_mc < 100 {
        return Err(Error::InvalidConfig(format!(
            "n_mc must be at least 100, got {n_mc}"
        )));
    }
    let proposed = algorithm2(net, cfg, seeds::derive(seed, streams::PROPOSED))?;
    let opt_report = design_variance(net, &proposed.design, cfg.scenario, params)?;
    let v_opt = opt_report.variance;
    let v_lb = opt_report.lower_bound;

    let baselines: Vec<f64> = (0..n_mc)
        .into_par_iter()
        .map(|i| {
            baseline_variance(
                net,
                cfg.scenario,
                params,
                seeds::derive_indexed(seed, streams::BASELINE, i as u64),
            )
        })
        .collect::<Result<Vec<f64>>>()?;

    let percentile = baselines.iter().filter(|&&v| v <= v_opt).count() as f64 / n_mc as f64;
    let mut sorted = baselines;
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).expect("variances are not NaN"));
    let v_median = median(&sorted);

    let (upper, actual) = balance_probabilities(net, seed)?;
    Ok(EvaluationReport {
        scenario: cfg.scenario,
        percentile,
        gap: opt_report.gap,
        gap_median: 1.0 - v_lb / v_median,
        v_opt,
        v_median,
        v_lb,
        n_mc,
        acceptance_rate: if proposed.accepted { 1.0 } else { 0.0 },
        mean_iterations: proposed.iterations as f64,
        balance_prob_upper: upper,
        balance_prob_actual_avg: actual,
    })
}

/// Fraction of independent randomized draws passing the scenario's
/// stopping rule at threshold `c`.
pub fn per_draw_acceptance(
    net: &Network,
    scenario: Scenario,
    c: f64,
    n_draws: usize,
    seed: u64,
) -> f64 {
    let hits = (0..n_draws)
        .into_par_iter()
        .filter(|&i| {
            let d = algorithm1(
                net,
                seeds::derive_indexed(seed, streams::ACCEPTANCE, i as u64),
            );
            let cut = cut_objective(net, &d);
            match scenario {
                Scenario::I => (cut as f64) <= c,
                Scenario::II => (cut.abs() as f64) <= c,
            }
        })
        .count();
    hits as f64 / n_draws as f64
}

/// One synthetic-network study setting.
#[derive(Debug, Clone, Copy)]
pub struct StudySetting {
    pub scenario: Scenario,
    pub n_target: usize,
    pub p: f64,
}

/// Averages for one study setting. `reps_ok` counts the replicates that
/// completed; failed replicates are skipped, and a fully failed setting
/// reports NaN summaries.
#[derive(Debug, Clone, Serialize)]
pub struct StudyRow {
    pub scenario: Scenario,
    pub n: usize,
    pub p: f64,
    pub percentile: f64,
    pub gap: f64,
    pub gap_median: f64,
    pub reps_ok: usize,
}

/// Base offset for per-setting seed streams in [`table1_study`].
const STUDY_STREAM_BASE: u64 = 1000;
/// Base offset for per-cell seed streams in [`convergence_study`].
const CONVERGENCE_STREAM_BASE: u64 = 2000;

/// Generates `reps` networks per setting, evaluates each, and averages
/// percentile/gap/gap_median. Per-replicate errors are recorded by
/// omission, never fatal.
pub fn table1_study(
    settings: &[StudySetting],
    reps: usize,
    n_mc: usize,
    t_max: u32,
    params: &ScenarioIParams,
    seed: u64,
) -> Vec<StudyRow> {
    settings
        .iter()
        .enumerate()
        .map(|(s_idx, setting)| {
            let mut sums = (0.0f64, 0.0f64, 0.0f64);
            let mut ok = 0usize;
            for rep in 0..reps {
                let cell =
                    seeds::derive_indexed(seed, STUDY_STREAM_BASE + s_idx as u64, rep as u64);
                let mut cfg = StoppingConfig::new(setting.scenario);
                cfg.t_max = t_max;
                let outcome = generate_er(
                    setting.n_target,
                    setting.p,
                    seeds::derive(cell, streams::NETWORK),
                )
                .and_then(|net| {
                    evaluate(
                        &net,
                        &cfg,
                        params,
                        n_mc,
                        seeds::derive(cell, streams::EVALUATE),
                    )
                });
                if let Ok(report) = outcome {
                    sums.0 += report.percentile;
                    sums.1 += report.gap;
                    sums.2 += report.gap_median;
                    ok += 1;
                }
            }
            let avg = |v: f64| if ok > 0 { v / ok as f64 } else { f64::NAN };
            StudyRow {
                scenario: setting.scenario,
                n: setting.n_target,
                p: setting.p,
                percentile: avg(sums.0),
                gap: avg(sums.1),
                gap_median: avg(sums.2),
                reps_ok: ok,
            }
        })
        .collect()
}

/// Balance probabilities of one network, for the probability figures.
#[derive(Debug, Clone, Serialize)]
pub struct ProbFigureRow {
    pub network: String,
    pub n: usize,
    pub density: f64,
    pub prob_upper: f64,
    pub prob_actual: f64,
}

/// Balance-probability summaries for a list of labeled networks.
pub fn prob_figure_data(nets: &[(String, Network)], seed: u64) -> Result<Vec<ProbFigureRow>> {
    nets.iter()
        .enumerate()
        .map(|(idx, (label, net))| {
            let row_seed = seeds::derive_indexed(seed, streams::PROB_ACTUAL, idx as u64);
            let (upper, actual) = balance_probabilities(net, row_seed)?;
            Ok(ProbFigureRow {
                network: label.clone(),
                n: net.n(),
                density: net.density(),
                prob_upper: upper,
                prob_actual: actual,
            })
        })
        .collect()
}

/// Averaged assumption ratios for one (n, p) cell.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub p: f64,
    pub r1: f64,
    pub r2: f64,
}

/// Averages the assumption ratios over `reps` generated networks for
/// each (n, p) cell. Degenerate replicates are skipped; fully degenerate
/// cells are omitted from the output.
pub fn convergence_study(
    n_list: &[usize],
    p_list: &[f64],
    reps: usize,
    seed: u64,
) -> Vec<ConvergenceRow> {
    let mut rows = Vec::new();
    for (cell_idx, (&n, &p)) in n_list
        .iter()
        .flat_map(|n| p_list.iter().map(move |p| (n, p)))
        .enumerate()
    {
        let ratios: Vec<(f64, f64)> = (0..reps)
            .into_par_iter()
            .filter_map(|rep| {
                let cell = seeds::derive_indexed(
                    seed,
                    CONVERGENCE_STREAM_BASE + cell_idx as u64,
                    rep as u64,
                );
                let net = generate_er(n, p, seeds::derive(cell, streams::NETWORK)).ok()?;
                let ps = pair_structure(&net, seeds::derive(cell, streams::REFERENCE_PAIRING));
                let rm = reduce(&net, &ps);
                assumption_ratios(&net, &rm).ok()
            })
            .collect();
        if ratios.is_empty() {
            continue;
        }
        let count = ratios.len() as f64;
        rows.push(ConvergenceRow {
            n,
            p,
            r1: ratios.iter().map(|r| r.0).sum::<f64>() / count,
            r2: ratios.iter().map(|r| r.1).sum::<f64>() / count,
        });
    }
    rows
}

/// Formats a float with 6 significant digits, trimming trailing zeros.
pub fn format_significant(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-4..6).contains(&exp) {
        let s = format!("{x:.5e}");
        let (mantissa, exponent) = s.split_once('e').expect("e-notation");
        let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
        format!("{mantissa}e{exponent}")
    } else {
        let decimals = (5 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    }
}

/// CSV with header `scenario,n,p,percentile,gap,gap_median`.
pub fn table1_csv(rows: &[StudyRow]) -> String {
    let mut out = String::from("scenario,n,p,percentile,gap,gap_median\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.scenario,
            r.n,
            format_significant(r.p),
            format_significant(r.percentile),
            format_significant(r.gap),
            format_significant(r.gap_median),
        ));
    }
    out
}

/// CSV with header `network,n,density,prob_upper,prob_actual`.
pub fn prob_figure_csv(rows: &[ProbFigureRow]) -> String {
    let mut out = String::from("network,n,density,prob_upper,prob_actual\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.network,
            r.n,
            format_significant(r.density),
            format_significant(r.prob_upper),
            format_significant(r.prob_actual),
        ));
    }
    out
}

/// CSV with header `n,p,r1,r2`.
pub fn convergence_csv(rows: &[ConvergenceRow]) -> String {
    let mut out = String::from("n,p,r1,r2\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.n,
            format_significant(r.p),
            format_significant(r.r1),
            format_significant(r.r2),
        ));
    }
    out
}
