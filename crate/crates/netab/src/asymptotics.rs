//! Asymptotic distribution of the graph-cut statistics under
//! degree-pairing randomization, and the derived stopping thresholds.
//!
//! Reordering the adjacency matrix by rank and contracting each pair with
//! the contrast [1, -1] yields a reduced matrix `W0` whose trace and
//! off-diagonal mass give the exact mean and variance of the cut
//! statistic over the within-pair coin flips. The cut statistic is
//! asymptotically normal with those moments, and |cut| follows the
//! corresponding folded normal; quantiles of both provide the stopping
//! thresholds. The degree-balance statistic is asymptotically normal
//! with variance `sum_i (d_i - dbar)^2`.

use serde::Serialize;

use crate::design::{c_of_w, PairStructure};
use crate::error::{Error, Result};
use crate::graph::Network;
use crate::stats::{folded_normal_quantile, normal_cdf, normal_quantile};

/// Maximum reduced size handled by the dense eigensolver; larger
/// matrices use shifted power iteration.
const DENSE_EIGEN_LIMIT: usize = 512;

/// Pair-contrast reduction of the adjacency matrix for a fixed pair
/// structure. Off-diagonal entries lie in [-2, 2]; diagonal entries are
/// -2 per within-pair edge, else 0.
#[derive(Debug, Clone)]
pub struct ReducedMatrix {
    dim: usize,
    w0: Vec<f64>,
    trace: f64,
    ssq_offdiag: f64,
    // the eigensolve is much more expensive than the reduction itself,
    // so it runs on first use only
    lambda_max: std::sync::OnceLock<f64>,
}

impl ReducedMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.w0[i * self.dim + j]
    }

    pub fn trace(&self) -> f64 {
        self.trace
    }

    /// Sum of squared entries above the diagonal.
    pub fn ssq_offdiag(&self) -> f64 {
        self.ssq_offdiag
    }

    /// Largest eigenvalue of the reduction with its diagonal zeroed.
    pub fn lambda_max_offdiag(&self) -> f64 {
        *self
            .lambda_max
            .get_or_init(|| lambda_max_offdiag(&self.w0, self.dim))
    }
}

/// Mean and standard deviation of the cut statistic over within-pair
/// coin flips for a fixed pair structure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CutDistribution {
    pub mean: f64,
    pub sd: f64,
}

/// Position and contrast sign of each non-singleton vertex in the
/// rank-reordered matrix.
fn pair_positions(net: &Network, ps: &PairStructure) -> (Vec<usize>, usize) {
    let n = net.n();
    let reduced: &[u32] = if n % 2 == 1 {
        &ps.order()[1..]
    } else {
        ps.order()
    };
    let mut pos = vec![usize::MAX; n];
    for (k, &v) in reduced.iter().enumerate() {
        pos[v as usize] = k;
    }
    (pos, reduced.len() / 2)
}

/// Builds the reduced matrix for `ps`, including its spectral summary.
pub fn reduce(net: &Network, ps: &PairStructure) -> ReducedMatrix {
    let (pos, dim) = pair_positions(net, ps);
    let mut w0 = vec![0.0f64; dim * dim];
    for &(a, b) in net.edges() {
        let (pa, pb) = (pos[a as usize], pos[b as usize]);
        if pa == usize::MAX || pb == usize::MAX {
            continue; // incident to the singleton
        }
        let (qa, qb) = (pa / 2, pb / 2);
        if qa == qb {
            w0[qa * dim + qa] -= 2.0;
        } else {
            let sign = if (pa % 2) == (pb % 2) { 1.0 } else { -1.0 };
            w0[qa * dim + qb] += sign;
            w0[qb * dim + qa] += sign;
        }
    }

    let trace = (0..dim).map(|i| w0[i * dim + i]).sum();
    let mut ssq = 0.0;
    for i in 0..dim {
        for j in (i + 1)..dim {
            let v = w0[i * dim + j];
            ssq += v * v;
        }
    }
    ReducedMatrix {
        dim,
        w0,
        trace,
        ssq_offdiag: ssq,
        lambda_max: std::sync::OnceLock::new(),
    }
}

/// Largest eigenvalue of the zero-diagonal part of `w0`.
fn lambda_max_offdiag(w0: &[f64], dim: usize) -> f64 {
    if dim == 0 {
        return 0.0;
    }
    if dim <= DENSE_EIGEN_LIMIT {
        let mut m = nalgebra::DMatrix::from_row_slice(dim, dim, w0);
        for i in 0..dim {
            m[(i, i)] = 0.0;
        }
        m.symmetric_eigen()
            .eigenvalues
            .iter()
            .fold(f64::NEG_INFINITY, |acc, &v| acc.max(v))
    } else {
        power_iteration_max(w0, dim)
    }
}

/// Shifted power iteration: with s the largest absolute row sum, the
/// spectrum of `W + sI` is non-negative and its dominant eigenvalue is
/// `lambda_max + s`.
fn power_iteration_max(w0: &[f64], dim: usize) -> f64 {
    use rand::{Rng, SeedableRng};

    let row_sum = |i: usize| -> f64 {
        (0..dim)
            .filter(|&j| j != i)
            .map(|j| w0[i * dim + j].abs())
            .sum()
    };
    let shift = (0..dim).map(row_sum).fold(0.0f64, f64::max);
    if shift == 0.0 {
        return 0.0;
    }

    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(0x9d0e_5f21);
    let mut v: Vec<f64> = (0..dim).map(|_| rng.gen::<f64>() - 0.5).collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm);

    let mut lambda = 0.0f64;
    let mut scratch = vec![0.0f64; dim];
    for _ in 0..10_000 {
        for i in 0..dim {
            let mut acc = shift * v[i];
            let row = &w0[i * dim..(i + 1) * dim];
            for (j, (&wij, &vj)) in row.iter().zip(v.iter()).enumerate() {
                if j != i {
                    acc += wij * vj;
                }
            }
            scratch[i] = acc;
        }
        let new_lambda = scratch.iter().map(|x| x * x).sum::<f64>().sqrt();
        if new_lambda == 0.0 {
            return -shift;
        }
        scratch.iter_mut().for_each(|x| *x /= new_lambda);
        std::mem::swap(&mut v, &mut scratch);
        if (new_lambda - lambda).abs() <= 1e-6 * new_lambda {
            lambda = new_lambda;
            break;
        }
        lambda = new_lambda;
    }
    lambda - shift
}

/// Moments of the cut statistic implied by a reduced matrix.
pub fn cut_mean_sd(rm: &ReducedMatrix) -> CutDistribution {
    CutDistribution {
        mean: rm.trace,
        sd: 2.0 * rm.ssq_offdiag.sqrt(),
    }
}

/// Same moments as [`cut_mean_sd`] computed without materializing the
/// dense reduction; used in per-draw loops.
pub fn pair_cut_distribution(net: &Network, ps: &PairStructure) -> CutDistribution {
    let (pos, _) = pair_positions(net, ps);
    let mut within = 0i64;
    let mut cross: Vec<((usize, usize), f64)> = Vec::with_capacity(net.edge_count());
    for &(a, b) in net.edges() {
        let (pa, pb) = (pos[a as usize], pos[b as usize]);
        if pa == usize::MAX || pb == usize::MAX {
            continue;
        }
        let (qa, qb) = (pa / 2, pb / 2);
        if qa == qb {
            within += 1;
        } else {
            let sign = if (pa % 2) == (pb % 2) { 1.0 } else { -1.0 };
            cross.push(((qa.min(qb), qa.max(qb)), sign));
        }
    }
    cross.sort_unstable_by_key(|&(key, _)| key);
    let mut ssq = 0.0f64;
    let mut idx = 0;
    while idx < cross.len() {
        let key = cross[idx].0;
        let mut sum = 0.0;
        while idx < cross.len() && cross[idx].0 == key {
            sum += cross[idx].1;
            idx += 1;
        }
        ssq += sum * sum;
    }
    CutDistribution {
        mean: -2.0 * within as f64,
        sd: 2.0 * ssq.sqrt(),
    }
}

/// Alpha-quantile of the cut statistic: `mean + sd * Phi^-1(alpha)`.
/// Degenerate sd returns the mean.
pub fn threshold_phi1(rm: &ReducedMatrix, alpha: f64) -> f64 {
    assert!(alpha > 0.0 && alpha < 1.0, "alpha {alpha} outside (0, 1)");
    let CutDistribution { mean, sd } = cut_mean_sd(rm);
    if sd == 0.0 {
        mean
    } else {
        mean + sd * normal_quantile(alpha)
    }
}

/// Alpha-quantile of |cut statistic| under the folded normal with the
/// reduction's moments.
pub fn threshold_phi2(rm: &ReducedMatrix, alpha: f64) -> f64 {
    assert!(alpha > 0.0 && alpha < 1.0, "alpha {alpha} outside (0, 1)");
    let CutDistribution { mean, sd } = cut_mean_sd(rm);
    folded_normal_quantile(mean, sd, alpha)
}

/// Standard deviation of the degree-balance statistic over balanced
/// random allocations: `sqrt(sum_i (d_i - dbar)^2)`.
pub fn degree_stat_sd(net: &Network) -> f64 {
    let n = net.n() as f64;
    let sum: f64 = net.degrees().iter().map(|&d| d as f64).sum();
    let mean = sum / n;
    net.degrees()
        .iter()
        .map(|&d| {
            let diff = d as f64 - mean;
            diff * diff
        })
        .sum::<f64>()
        .sqrt()
}

/// Probability that |degree balance| stays within `c` under a balanced
/// random allocation: `2 Phi(c / degree_stat_sd) - 1`. Regular graphs
/// (zero variance) return 1 by convention.
pub fn balance_probability(net: &Network, c: f64) -> Result<f64> {
    if c < 0.0 {
        return Err(Error::NegativeThreshold { value: c });
    }
    let sd = degree_stat_sd(net);
    if sd == 0.0 {
        return Ok(1.0);
    }
    Ok(2.0 * normal_cdf(c / sd) - 1.0)
}

/// Diagnostic ratios whose decay underpins the normal approximation:
/// `r1 = min_i d_i / sum_{i != j} w0_ij^2` and
/// `r2 = lambda_max / sqrt(sum_{i != j} w0_ij^2)`.
pub fn assumption_ratios(net: &Network, rm: &ReducedMatrix) -> Result<(f64, f64)> {
    if rm.ssq_offdiag == 0.0 {
        return Err(Error::DegenerateReduction);
    }
    let min_degree = *net.degrees().iter().min().expect("nonempty network") as f64;
    let full_ssq = 2.0 * rm.ssq_offdiag; // both triangles
    Ok((
        min_degree / full_ssq,
        rm.lambda_max_offdiag() / full_ssq.sqrt(),
    ))
}

/// One-stop diagnostics for a network under a fixed pair structure.
#[derive(Debug, Clone, Serialize)]
pub struct DiagnosticsReport {
    pub trace_w0: f64,
    pub ssq_offdiag: f64,
    pub sd: f64,
    pub threshold_phi1: f64,
    pub threshold_phi2: f64,
    pub r1: Option<f64>,
    pub r2: Option<f64>,
    pub degree_stat_sd: f64,
    #[serde(rename = "balance_prob_at_cW")]
    pub balance_prob_at_c_w: f64,
    pub degenerate: bool,
}

/// Assembles the diagnostics report. `alpha1` and `alpha2` are the
/// quantile levels for the two stopping thresholds.
pub fn diagnostics(
    net: &Network,
    ps: &PairStructure,
    alpha1: f64,
    alpha2: f64,
) -> Result<DiagnosticsReport> {
    let rm = reduce(net, ps);
    let dist = cut_mean_sd(&rm);
    let (r1, r2) = match assumption_ratios(net, &rm) {
        Ok((r1, r2)) => (Some(r1), Some(r2)),
        Err(Error::DegenerateReduction) => (None, None),
        Err(e) => return Err(e),
    };
    let bound = c_of_w(net, ps);
    Ok(DiagnosticsReport {
        trace_w0: rm.trace,
        ssq_offdiag: rm.ssq_offdiag,
        sd: dist.sd,
        threshold_phi1: threshold_phi1(&rm, alpha1),
        threshold_phi2: threshold_phi2(&rm, alpha2),
        r1,
        r2,
        degree_stat_sd: degree_stat_sd(net),
        balance_prob_at_c_w: balance_probability(net, bound)?,
        degenerate: rm.ssq_offdiag == 0.0 || degree_stat_sd(net) == 0.0,
    })
}
