//! Degree-pairing randomization and rerandomization.
//!
//! The randomization backbone ranks vertices by perturbed degree
//! `d_i + u_i` (u_i ~ Uniform(0,1), so ties have probability zero), pairs
//! consecutive ranks, and flips a fair coin inside each pair. Every draw
//! is exactly treatment-balanced and its degree imbalance is bounded by
//! the constant `c_of_w`. Rerandomization redraws until a graph-cut
//! stopping rule is met.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::asymptotics::{reduce, threshold_phi1, threshold_phi2};
use crate::error::{Error, Result};
use crate::graph::Network;
use crate::seeds;

/// The two design objectives: minimize the cut statistic (I) or drive its
/// absolute value to zero (II).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scenario {
    I,
    II,
}

impl std::fmt::Display for Scenario {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Scenario::I => write!(f, "I"),
            Scenario::II => write!(f, "II"),
        }
    }
}

impl std::str::FromStr for Scenario {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "I" | "1" => Ok(Scenario::I),
            "II" | "2" => Ok(Scenario::II),
            other => Err(format!("unknown scenario {other:?}, expected I or II")),
        }
    }
}

/// A signed treatment allocation, index-aligned with the network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Design {
    x: Vec<i8>,
}

impl Design {
    /// Validates that every entry is -1 or +1.
    pub fn from_signs(x: Vec<i8>) -> Result<Self> {
        if let Some(bad) = x.iter().position(|&v| v != 1 && v != -1) {
            return Err(Error::InvalidConfig(format!(
                "design entry at index {bad} is {}, expected -1 or +1",
                x[bad]
            )));
        }
        Ok(Design { x })
    }

    pub fn signs(&self) -> &[i8] {
        &self.x
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn sign(&self, v: usize) -> i64 {
        self.x[v] as i64
    }
}

/// Sum of the allocation entries.
pub fn treatment_balance(d: &Design) -> i64 {
    d.x.iter().map(|&v| v as i64).sum()
}

/// Degree-weighted allocation sum.
pub fn degree_balance(net: &Network, d: &Design) -> i64 {
    assert_eq!(net.n(), d.len());
    net.degrees()
        .iter()
        .zip(&d.x)
        .map(|(&deg, &x)| deg as i64 * x as i64)
        .sum()
}

/// The cut statistic: twice the signed agreement over edges. Always an
/// even integer (each edge contributes +-2).
pub fn cut_objective(net: &Network, d: &Design) -> i64 {
    assert_eq!(net.n(), d.len());
    2 * net
        .edges()
        .iter()
        .map(|&(a, b)| d.sign(a as usize) * d.sign(b as usize))
        .sum::<i64>()
}

/// Vertices grouped into consecutive-rank pairs by perturbed degree.
/// Odd sizes leave the rank-1 vertex as a singleton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairStructure {
    order: Vec<u32>,
    pairs: Vec<(u32, u32)>,
    singleton: Option<u32>,
}

impl PairStructure {
    /// Vertices listed by ascending perturbed degree.
    pub fn order(&self) -> &[u32] {
        &self.order
    }

    /// Pairs in rank order; within a pair the lower rank comes first.
    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }

    pub fn singleton(&self) -> Option<usize> {
        self.singleton.map(|v| v as usize)
    }

    /// Builds the structure from an explicit rank order. Intended for
    /// oracles and diagnostics; no degree-consistency of the order is
    /// checked.
    pub fn from_order(net: &Network, order: Vec<u32>) -> Result<Self> {
        let n = net.n();
        if order.len() != n {
            return Err(Error::InvalidConfig(format!(
                "order has length {}, expected {n}",
                order.len()
            )));
        }
        let mut seen = vec![false; n];
        for &v in &order {
            let v = v as usize;
            if v >= n || seen[v] {
                return Err(Error::InvalidConfig(
                    "order is not a permutation of the vertices".into(),
                ));
            }
            seen[v] = true;
        }
        Ok(Self::from_order_unchecked(order))
    }

    fn from_order_unchecked(order: Vec<u32>) -> Self {
        let n = order.len();
        let (singleton, paired) = if n % 2 == 1 {
            (Some(order[0]), &order[1..])
        } else {
            (None, &order[..])
        };
        let pairs = paired.chunks(2).map(|c| (c[0], c[1])).collect();
        PairStructure {
            pairs,
            singleton,
            order,
        }
    }
}

fn draw_rng(seed: u64, stream: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn pair_structure_with(net: &Network, rng: &mut ChaCha12Rng) -> PairStructure {
    // Randomness consumption order is fixed: u_1..u_n here, then pair
    // coins in rank order, then the singleton coin (in algorithm1).
    let mut keyed: Vec<(f64, u32)> = (0..net.n())
        .map(|v| (net.degree(v) as f64 + rng.gen::<f64>(), v as u32))
        .collect();
    keyed.sort_unstable_by(|a, b| a.partial_cmp(b).expect("perturbed degrees are finite"));
    PairStructure::from_order_unchecked(keyed.into_iter().map(|(_, v)| v).collect())
}

/// Ranks vertices by `d_i + u_i` and pairs consecutive ranks.
/// Deterministic given `seed`.
pub fn pair_structure(net: &Network, seed: u64) -> PairStructure {
    assert!(net.n() >= 2, "need at least two vertices");
    pair_structure_with(net, &mut draw_rng(seed, 0))
}

fn algorithm1_with(net: &Network, rng: &mut ChaCha12Rng) -> (PairStructure, Design) {
    let ps = pair_structure_with(net, rng);
    let mut x = vec![0i8; net.n()];
    for &(lo, hi) in ps.pairs() {
        if rng.gen::<bool>() {
            x[hi as usize] = 1;
            x[lo as usize] = -1;
        } else {
            x[hi as usize] = -1;
            x[lo as usize] = 1;
        }
    }
    if let Some(s) = ps.singleton() {
        x[s] = if rng.gen::<bool>() { 1 } else { -1 };
    }
    (ps, Design { x })
}

/// One degree-pairing randomized design. Deterministic given `seed`.
pub fn algorithm1(net: &Network, seed: u64) -> Design {
    algorithm1_with_pairs(net, seed).1
}

/// Same draw as [`algorithm1`], also returning the pair structure it used.
pub fn algorithm1_with_pairs(net: &Network, seed: u64) -> (PairStructure, Design) {
    assert!(net.n() >= 2, "need at least two vertices");
    algorithm1_with(net, &mut draw_rng(seed, 0))
}

/// The guaranteed bound on |degree_balance| for designs drawn with the
/// realized rank order: the singleton degree (if any) plus the degree gap
/// inside each pair. Constant for a given network up to tie-breaks that
/// cannot change the value.
pub fn c_of_w(net: &Network, ps: &PairStructure) -> f64 {
    let singleton: i64 = ps.singleton().map(|s| net.degree(s) as i64).unwrap_or(0);
    let gaps: i64 = ps
        .pairs()
        .iter()
        .map(|&(lo, hi)| net.degree(hi as usize) as i64 - net.degree(lo as usize) as i64)
        .sum();
    (singleton + gaps) as f64
}

/// Indicator of the two balance constraints:
/// |degree_balance| <= delta1 and |treatment_balance| <= delta2.
pub fn g_indicator(d: &Design, net: &Network, delta1: f64, delta2: f64) -> bool {
    (degree_balance(net, d).abs() as f64) <= delta1 && (treatment_balance(d).abs() as f64) <= delta2
}

/// Stopping rule for Scenario I: cut statistic at most `c`.
pub fn phi1(d: &Design, net: &Network, c: f64) -> bool {
    (cut_objective(net, d) as f64) <= c
}

/// Stopping rule for Scenario II: |cut statistic| at most `c`.
pub fn phi2(d: &Design, net: &Network, c: f64) -> bool {
    (cut_objective(net, d).abs() as f64) <= c
}

/// Configuration of the rerandomization loop. `None` thresholds are
/// resolved at run time: `c` from the asymptotic quantile at `alpha` for
/// a reference pair structure derived from the run seed, `delta1` from
/// `c_of_w`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StoppingConfig {
    pub scenario: Scenario,
    pub c: Option<f64>,
    pub delta1: Option<f64>,
    pub delta2: f64,
    pub t_max: u32,
    pub alpha: f64,
}

impl StoppingConfig {
    /// Defaults: T = 5000; alpha = 0.005 for Scenario I, 0.1 for II;
    /// delta2 = 1; c and delta1 resolved from the network at run time.
    pub fn new(scenario: Scenario) -> Self {
        StoppingConfig {
            scenario,
            c: None,
            delta1: None,
            delta2: 1.0,
            t_max: 5000,
            alpha: match scenario {
                Scenario::I => 0.005,
                Scenario::II => 0.1,
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.t_max < 1 {
            return Err(Error::InvalidConfig("t_max must be at least 1".into()));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "alpha must be in (0, 1), got {}",
                self.alpha
            )));
        }
        if self.delta2 < 0.0 {
            return Err(Error::InvalidConfig("delta2 must be >= 0".into()));
        }
        Ok(())
    }

    /// The stopping threshold actually used for a run with this seed:
    /// the explicit `c` if set, otherwise the alpha-quantile of the cut
    /// statistic under a reference pair structure derived from the seed.
    pub fn resolve_c(&self, net: &Network, seed: u64) -> f64 {
        if let Some(c) = self.c {
            return c;
        }
        let ps = pair_structure(net, seeds::derive(seed, seeds::streams::REFERENCE_PAIRING));
        let rm = reduce(net, &ps);
        match self.scenario {
            Scenario::I => threshold_phi1(&rm, self.alpha),
            Scenario::II => threshold_phi2(&rm, self.alpha),
        }
    }
}

/// Outcome of the rerandomization loop.
#[derive(Debug, Clone)]
pub struct Rerandomization {
    pub design: Design,
    /// Number of draws made (= index of the accepted draw, or `t_max`).
    pub iterations: u32,
    pub accepted: bool,
    /// Cut statistic of the returned design.
    pub objective: i64,
    /// Stopping threshold that was applied.
    pub threshold: f64,
}

fn draw_at(net: &Network, seed: u64, t: u32) -> Design {
    algorithm1_with(net, &mut draw_rng(seed, t as u64)).1
}

fn objective_key(scenario: Scenario, cut: i64) -> i64 {
    match scenario {
        Scenario::I => cut,
        Scenario::II => cut.abs(),
    }
}

/// Redraws degree-pairing designs until the scenario's stopping rule is
/// met, up to `t_max` draws; falls back to the draw with the best
/// objective (ties to the earliest draw). Draw `t` consumes its own RNG
/// stream `(seed, t)`, so draws are reproducible individually.
pub fn algorithm2(net: &Network, cfg: &StoppingConfig, seed: u64) -> Result<Rerandomization> {
    cfg.validate()?;
    let c = cfg.resolve_c(net, seed);
    let mut best: Option<(i64, u32, i64, Design)> = None;
    for t in 0..cfg.t_max {
        let design = draw_at(net, seed, t);
        let cut = cut_objective(net, &design);
        if (objective_key(cfg.scenario, cut) as f64) <= c {
            return Ok(Rerandomization {
                design,
                iterations: t + 1,
                accepted: true,
                objective: cut,
                threshold: c,
            });
        }
        let key = objective_key(cfg.scenario, cut);
        if best.as_ref().is_none_or(|(k, ..)| key < *k) {
            best = Some((key, t, cut, design));
        }
    }
    let (_, _, cut, design) = best.expect("t_max >= 1 guarantees at least one draw");
    Ok(Rerandomization {
        design,
        iterations: cfg.t_max,
        accepted: false,
        objective: cut,
        threshold: c,
    })
}

/// Batched variant of [`algorithm2`]: evaluates draws `batch` at a time in
/// parallel and accepts the lowest-index passing draw, reproducing the
/// sequential result exactly.
pub fn algorithm2_batched(
    net: &Network,
    cfg: &StoppingConfig,
    seed: u64,
    batch: usize,
) -> Result<Rerandomization> {
    use rayon::prelude::*;

    cfg.validate()?;
    let batch = batch.max(1) as u32;
    let c = cfg.resolve_c(net, seed);
    let mut best: Option<(i64, u32, i64, Design)> = None;
    let mut start = 0u32;
    while start < cfg.t_max {
        let end = (start + batch).min(cfg.t_max);
        let draws: Vec<(u32, Design, i64)> = (start..end)
            .into_par_iter()
            .map(|t| {
                let design = draw_at(net, seed, t);
                let cut = cut_objective(net, &design);
                (t, design, cut)
            })
            .collect();
        for (t, design, cut) in draws {
            if (objective_key(cfg.scenario, cut) as f64) <= c {
                return Ok(Rerandomization {
                    design,
                    iterations: t + 1,
                    accepted: true,
                    objective: cut,
                    threshold: c,
                });
            }
            let key = objective_key(cfg.scenario, cut);
            if best.as_ref().is_none_or(|(k, ..)| key < *k) {
                best = Some((key, t, cut, design));
            }
        }
        start = end;
    }
    let (_, _, cut, design) = best.expect("t_max >= 1 guarantees at least one draw");
    Ok(Rerandomization {
        design,
        iterations: cfg.t_max,
        accepted: false,
        objective: cut,
        threshold: c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_er, pairs_network};
    use proptest::prelude::*;
    use std::collections::HashMap;

    fn path(n: usize) -> Network {
        Network::from_edges(n, (0..n - 1).map(|i| (i, i + 1))).unwrap()
    }

    fn complete(n: usize) -> Network {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                edges.push((i, j));
            }
        }
        Network::from_edges(n, edges).unwrap()
    }

    #[test]
    fn pair_structure_partitions_vertices() {
        let net = generate_er(31, 0.2, 9).unwrap();
        let ps = pair_structure(&net, 4);
        let mut seen = vec![false; net.n()];
        for &(a, b) in ps.pairs() {
            seen[a as usize] = true;
            seen[b as usize] = true;
        }
        if let Some(s) = ps.singleton() {
            seen[s] = true;
        }
        assert!(seen.iter().all(|&s| s));
        assert_eq!(net.n() % 2 == 1, ps.singleton().is_some());
    }

    #[test]
    fn equal_degrees_tie_break_uniformly() {
        // on two disjoint edges all 3 unordered pairings occur; coarse
        // chi-square check against uniform over 1000 seeds
        let net = pairs_network(2);
        let mut counts: HashMap<Vec<(u32, u32)>, usize> = HashMap::new();
        for seed in 0..1000 {
            let ps = pair_structure(&net, seed);
            let mut key: Vec<(u32, u32)> = ps
                .pairs()
                .iter()
                .map(|&(a, b)| (a.min(b), a.max(b)))
                .collect();
            key.sort_unstable();
            *counts.entry(key).or_default() += 1;
        }
        assert_eq!(counts.len(), 3, "all three pairings occur: {counts:?}");
        let chi2: f64 = counts
            .values()
            .map(|&obs| {
                let diff = obs as f64 - 1000.0 / 3.0;
                diff * diff / (1000.0 / 3.0)
            })
            .sum();
        // df = 2, p ~ 0.001 cutoff
        assert!(chi2 < 13.8, "chi2 = {chi2}, counts {counts:?}");
    }

    #[test]
    fn odd_path_singleton_is_an_endpoint() {
        let net = path(3); // degrees [1, 2, 1]
        for seed in 0..200 {
            let ps = pair_structure(&net, seed);
            let s = ps.singleton().expect("n = 3 has a singleton");
            assert!(s == 0 || s == 2, "seed {seed}: singleton {s}");
            let (a, b) = ps.pairs()[0];
            assert!(a == 1 || b == 1, "seed {seed}: pair misses the center");
        }
    }

    #[test]
    fn distinct_degree_blocks_force_pairing() {
        // path on 4 vertices: degrees [1, 2, 2, 1]; ranks always put the
        // two degree-1 endpoints first, so the pairing is forced
        let net = path(4);
        for seed in 0..200 {
            let ps = pair_structure(&net, seed);
            let mut low = [ps.pairs()[0].0, ps.pairs()[0].1];
            low.sort_unstable();
            assert_eq!(low, [0, 3], "seed {seed}");
            let mut high = [ps.pairs()[1].0, ps.pairs()[1].1];
            high.sort_unstable();
            assert_eq!(high, [1, 2], "seed {seed}");
        }
    }

    #[test]
    fn algorithm1_is_balanced() {
        for seed in 0..100 {
            let even = generate_er(20, 0.3, seed).unwrap();
            let d = algorithm1(&even, seed);
            assert_eq!(treatment_balance(&d), 0);

            let odd = path(7);
            let d = algorithm1(&odd, seed);
            assert!(treatment_balance(&d).abs() <= 1);
        }
    }

    #[test]
    fn algorithm1_on_pairs_balances_degrees() {
        let net = pairs_network(12);
        for seed in 0..50 {
            let d = algorithm1(&net, seed);
            assert_eq!(degree_balance(&net, &d), 0);
        }
    }

    #[test]
    fn complete_graph_cut_is_constant() {
        // balanced designs on K4 always give (sum x)^2 - n = -4
        let net = complete(4);
        for seed in 0..50 {
            let d = algorithm1(&net, seed);
            assert_eq!(cut_objective(&net, &d), -4);
        }
    }

    #[test]
    fn singleton_sign_is_fair() {
        let net = path(7);
        let mut plus = 0usize;
        let total = 10_000;
        for seed in 0..total {
            if treatment_balance(&algorithm1(&net, seed as u64)) == 1 {
                plus += 1;
            }
        }
        let freq = plus as f64 / total as f64;
        assert!((freq - 0.5).abs() < 0.05, "singleton +1 frequency {freq}");
    }

    #[test]
    fn per_pair_coin_is_fair() {
        let net = pairs_network(4);
        let mut hi_plus = 0usize;
        let total = 10_000;
        for seed in 0..total {
            let (ps, d) = algorithm1_with_pairs(&net, seed as u64);
            let (_, hi) = ps.pairs()[0];
            if d.sign(hi as usize) == 1 {
                hi_plus += 1;
            }
        }
        let freq = hi_plus as f64 / total as f64;
        assert!((freq - 0.5).abs() < 0.05, "high-rank +1 frequency {freq}");
    }

    #[test]
    fn c_of_w_examples() {
        let net = pairs_network(12);
        let ps = pair_structure(&net, 1);
        assert_eq!(c_of_w(&net, &ps), 0.0);

        let p4 = path(4); // ordered degrees (1, 1, 2, 2)
        let ps = pair_structure(&p4, 1);
        assert_eq!(c_of_w(&p4, &ps), 0.0);

        // star on 4 vertices: ordered degrees (1, 1, 1, 3)
        let star = Network::from_edges(4, vec![(0, 1), (0, 2), (0, 3)]).unwrap();
        for seed in 0..20 {
            let ps = pair_structure(&star, seed);
            assert_eq!(c_of_w(&star, &ps), 2.0, "seed {seed}");
        }
    }

    #[test]
    fn g_indicator_examples() {
        let net = pairs_network(2);
        let all_ones = Design::from_signs(vec![1, 1, 1, 1]).unwrap();
        assert!(!g_indicator(&all_ones, &net, 100.0, 1.0));

        let edge = pairs_network(1);
        let split = Design::from_signs(vec![1, -1]).unwrap();
        assert!(g_indicator(&split, &edge, 0.0, 0.0));
    }

    #[test]
    fn stopping_rules_on_pairs_network() {
        let net = pairs_network(12);
        // alternate within every pair: every edge is split
        let alternating =
            Design::from_signs((0..24).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect()).unwrap();
        assert_eq!(cut_objective(&net, &alternating), -24);
        assert!(phi1(&alternating, &net, -24.0));
        assert!(!phi2(&alternating, &net, 0.0));

        // 3 pairs ++, 3 pairs --, 6 pairs split: cut statistic is zero
        let mut x = Vec::new();
        for pair in 0..12 {
            match pair {
                0..=2 => x.extend([1, 1]),
                3..=5 => x.extend([-1, -1]),
                _ => x.extend([1, -1]),
            }
        }
        let mixed = Design::from_signs(x).unwrap();
        assert_eq!(cut_objective(&net, &mixed), 0);
        assert!(phi2(&mixed, &net, 0.0));
    }

    #[test]
    fn algorithm2_accepts_on_complete_graph() {
        let net = complete(4);
        let mut cfg = StoppingConfig::new(Scenario::I);
        cfg.c = Some(-4.0);
        for seed in 0..20 {
            let rr = algorithm2(&net, &cfg, seed).unwrap();
            assert!(rr.accepted);
            assert_eq!(rr.iterations, 1);
            assert_eq!(rr.objective, -4);
        }
    }

    #[test]
    fn algorithm2_accepts_full_split_on_pairs() {
        let net = pairs_network(12);
        let mut cfg = StoppingConfig::new(Scenario::I);
        cfg.c = Some(-24.0);
        for seed in 0..10 {
            let rr = algorithm2(&net, &cfg, seed).unwrap();
            assert!(rr.accepted, "seed {seed}: not accepted within T");
            assert_eq!(rr.objective, -24, "seed {seed}");
            assert_eq!(degree_balance(&net, &rr.design), 0);
        }
    }

    #[test]
    fn algorithm2_infeasible_falls_back_to_argmin() {
        let net = generate_er(30, 0.3, 3).unwrap();
        let mut cfg = StoppingConfig::new(Scenario::II);
        cfg.c = Some(-1.0); // |cut| <= -1 is unsatisfiable
        cfg.t_max = 200;
        let rr = algorithm2(&net, &cfg, 11).unwrap();
        assert!(!rr.accepted);
        assert_eq!(rr.iterations, 200);
        // the returned design really is the argmin over the 200 draws
        let min_abs = (0..200)
            .map(|t| cut_objective(&net, &draw_at(&net, 11, t)).abs())
            .min()
            .unwrap();
        assert_eq!(rr.objective.abs(), min_abs);
    }

    #[test]
    fn algorithm2_with_one_draw_matches_algorithm1() {
        let net = generate_er(40, 0.2, 8).unwrap();
        let mut cfg = StoppingConfig::new(Scenario::I);
        cfg.c = Some(f64::INFINITY);
        cfg.t_max = 1;
        for seed in 0..20 {
            let rr = algorithm2(&net, &cfg, seed).unwrap();
            assert_eq!(rr.design, algorithm1(&net, seed), "seed {seed}");
        }
    }

    #[test]
    fn batched_matches_sequential() {
        let net = generate_er(40, 0.15, 21).unwrap();
        for scenario in [Scenario::I, Scenario::II] {
            let mut cfg = StoppingConfig::new(scenario);
            cfg.t_max = 300;
            for seed in [0u64, 5, 99] {
                let seq = algorithm2(&net, &cfg, seed).unwrap();
                for batch in [1, 7, 64] {
                    let par = algorithm2_batched(&net, &cfg, seed, batch).unwrap();
                    assert_eq!(par.design, seq.design);
                    assert_eq!(par.iterations, seq.iterations);
                    assert_eq!(par.accepted, seq.accepted);
                }
            }
        }
    }

    proptest! {
        // the degree-pairing guarantee, exercised across random networks
        #[test]
        fn pairing_guarantee_holds(seed in 0u64..300, n in 4usize..48, p in 0.05f64..0.8) {
            if let Ok(net) = generate_er(n, p, seed) {
                let (ps, d) = algorithm1_with_pairs(&net, seed ^ 0xABCD);
                let bound = c_of_w(&net, &ps);
                prop_assert!(g_indicator(&d, &net, bound, 1.0));
            }
        }

        #[test]
        fn cut_statistic_is_even(seed in 0u64..200, n in 4usize..32, p in 0.1f64..0.9) {
            if let Ok(net) = generate_er(n, p, seed) {
                let d = algorithm1(&net, seed);
                prop_assert_eq!(cut_objective(&net, &d) % 2, 0);
            }
        }
    }
}
