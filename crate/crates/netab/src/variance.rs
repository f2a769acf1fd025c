//! Variance of the estimated treatment effect under the two response
//! models, with the corresponding lower bounds and optimality gaps.

use serde::Serialize;

use crate::design::{cut_objective, degree_balance, Design, Scenario};
use crate::error::{Error, Result};
use crate::graph::Network;

/// Parameters of the network-correlated response model.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ScenarioIParams {
    /// Correlation strength between connected responses, in (0, 1).
    pub rho: f64,
    /// Noise variance; cancels in all reported ratios.
    pub sigma2: f64,
}

impl Default for ScenarioIParams {
    fn default() -> Self {
        ScenarioIParams {
            rho: 0.5,
            sigma2: 1.0,
        }
    }
}

impl ScenarioIParams {
    pub fn new(rho: f64, sigma2: f64) -> Result<Self> {
        let p = ScenarioIParams { rho, sigma2 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho > 0.0 && self.rho < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "rho must be in (0, 1), got {}",
                self.rho
            )));
        }
        if self.sigma2 <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "sigma2 must be positive, got {}",
                self.sigma2
            )));
        }
        Ok(())
    }
}

/// The three design criteria entering the variance formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DesignTerms {
    /// Sum of all adjacency entries, 2m.
    pub sum_w: i64,
    /// Cut statistic.
    pub cut: i64,
    /// Degree-balance statistic.
    pub deg_stat: i64,
}

/// Variance of the estimated treatment effect, its lower bound, and the
/// relative optimality gap `1 - lower_bound / variance`.
#[derive(Debug, Clone, Serialize)]
pub struct VarianceReport {
    pub scenario: Scenario,
    pub variance: f64,
    pub lower_bound: f64,
    pub gap: f64,
    pub terms: DesignTerms,
}

/// `(2m, cut, degree balance)` for a design.
pub fn scenario1_denominator_terms(net: &Network, d: &Design) -> (i64, i64, i64) {
    (
        2 * net.edge_count() as i64,
        cut_objective(net, d),
        degree_balance(net, d),
    )
}

/// Variance of the weighted least-squares effect estimate under
/// network-correlated responses, with its attainable lower bound
/// `sigma2 / ((1 + rho) 2m)`.
pub fn var_scenario1(net: &Network, d: &Design, p: &ScenarioIParams) -> Result<VarianceReport> {
    p.validate()?;
    let (sum_w, cut, deg_stat) = scenario1_denominator_terms(net, d);
    let sw = sum_w as f64;
    let denominator = sw - p.rho * cut as f64 - (1.0 - p.rho) * (deg_stat as f64).powi(2) / sw;
    if denominator <= 0.0 {
        return Err(Error::InformationNotPositive { denominator });
    }
    // sigma2 enters as a pure scale factor and cancels in the gap
    let unit_variance = 1.0 / denominator;
    let unit_lower = 1.0 / ((1.0 + p.rho) * sw);
    Ok(VarianceReport {
        scenario: Scenario::I,
        variance: p.sigma2 * unit_variance,
        lower_bound: p.sigma2 * unit_lower,
        gap: 1.0 - unit_lower / unit_variance,
        terms: DesignTerms {
            sum_w,
            cut,
            deg_stat,
        },
    })
}

/// Residual quadratic form `x' (I - P_F) x` where `F = [1, W1, Wx]`,
/// computed by modified Gram-Schmidt with rank-revealing column drops.
fn residual_quad_form(net: &Network, d: &Design) -> f64 {
    let n = net.n();
    let x: Vec<f64> = d.signs().iter().map(|&v| v as f64).collect();
    let ones = vec![1.0f64; n];
    let w_ones: Vec<f64> = net.degrees().iter().map(|&deg| deg as f64).collect();
    let mut w_x = vec![0.0f64; n];
    for &(a, b) in net.edges() {
        let (a, b) = (a as usize, b as usize);
        w_x[a] += x[b];
        w_x[b] += x[a];
    }

    let dot = |u: &[f64], v: &[f64]| -> f64 { u.iter().zip(v).map(|(a, b)| a * b).sum() };
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(3);
    for col in [ones, w_ones, w_x] {
        let original_norm = dot(&col, &col).sqrt();
        let mut v = col;
        for u in &basis {
            let r = dot(u, &v);
            v.iter_mut().zip(u).for_each(|(vi, ui)| *vi -= r * ui);
        }
        let norm = dot(&v, &v).sqrt();
        if norm > 1e-8 * original_norm && norm > 0.0 {
            v.iter_mut().for_each(|vi| *vi /= norm);
            basis.push(v);
        }
    }

    let mut q = dot(&x, &x);
    for u in &basis {
        let r = dot(u, &x);
        q -= r * r;
    }
    q.max(0.0)
}

/// Variance of the least-squares effect estimate under network
/// interference, with lower bound `sigma2 / n` (sigma2 = 1 here; it
/// cancels in every reported ratio). Errors when the design is
/// explained by the regressors and the variance is unbounded.
pub fn var_scenario2(net: &Network, d: &Design) -> Result<VarianceReport> {
    let n = net.n();
    if n < 4 {
        return Err(Error::InvalidConfig(format!(
            "need at least 4 vertices, got {n}"
        )));
    }
    let q = residual_quad_form(net, d);
    let threshold = 1e-9 * n as f64;
    if q <= threshold {
        return Err(Error::RankDeficientDesign {
            residual: q,
            threshold,
        });
    }
    let (sum_w, cut, deg_stat) = scenario1_denominator_terms(net, d);
    let variance = 1.0 / q;
    let lower_bound = 1.0 / n as f64;
    Ok(VarianceReport {
        scenario: Scenario::II,
        variance,
        lower_bound,
        gap: 1.0 - lower_bound / variance,
        terms: DesignTerms {
            sum_w,
            cut,
            deg_stat,
        },
    })
}

/// Variance report for a design under either scenario.
pub fn design_variance(
    net: &Network,
    d: &Design,
    scenario: Scenario,
    p: &ScenarioIParams,
) -> Result<VarianceReport> {
    match scenario {
        Scenario::I => var_scenario1(net, d, p),
        Scenario::II => var_scenario2(net, d),
    }
}
