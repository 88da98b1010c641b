//! Exact and heuristic k-flat clustering.
//!
//! The exact solver enumerates set partitions of the records (never splitting
//! a multiplicity stack), fits each block with [`best_fit_flat`] and keeps the
//! cheapest. A branch-and-bound on the accumulated block costs skips subtrees
//! that cannot beat the incumbent; fitting cost only grows when a block gains
//! records, so the bound is valid.

use std::cmp::Ordering;

use num_bigint::BigUint;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fitting::best_fit_flat;
use crate::geometry::{dist2_point_flat, nearest_flat, total_cost, AffineFlat, WeightedPointCloud};
use crate::partition::{block_count, partition_count, PartitionIterator};
use crate::scalar::RealScalar;

pub const DEFAULT_PARTITION_CAP: u128 = 100_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct ClusteringSolution<S> {
    /// One flat per cluster index used by `assignment`.
    pub flats: Vec<AffineFlat<S>>,
    /// Cluster index of every record.
    pub assignment: Vec<usize>,
    pub cost: S,
}

#[derive(Debug, Clone)]
pub struct ExactConfig {
    pub prune: bool,
    /// Largest admissible number of partitions.
    pub partition_cap: u128,
    /// Relative slack added to the incumbent before a subtree is discarded.
    pub prune_slack: f64,
}

impl Default for ExactConfig {
    fn default() -> Self {
        Self { prune: true, partition_cap: DEFAULT_PARTITION_CAP, prune_slack: 1e-9 }
    }
}

#[derive(Debug, Clone)]
pub struct HeuristicConfig {
    pub restarts: usize,
    pub max_iter: usize,
    pub rel_tol: f64,
    pub rng_seed: u64,
}

impl Default for HeuristicConfig {
    fn default() -> Self {
        Self { restarts: 20, max_iter: 100, rel_tol: 1e-9, rng_seed: 0 }
    }
}

impl HeuristicConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_iter == 0 || !(self.rel_tol > 0.0) {
            return Err(Error::InvalidParameters("restarts, max_iter and rel_tol must be positive".into()));
        }
        Ok(())
    }
}

fn check_inputs<S: RealScalar>(cloud: &WeightedPointCloud<S>, k: usize, r: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidK);
    }
    if r >= cloud.dim() {
        return Err(Error::FlatDimOutOfRange { r, d: cloud.dim() });
    }
    if cloud.is_empty() {
        return Err(Error::EmptyCloud);
    }
    Ok(())
}

fn check_guard(n: usize, k: usize, cap: u128) -> Result<()> {
    let count = partition_count(n, k);
    if count > BigUint::from(cap) {
        return Err(Error::too_large("partition enumeration", count, cap));
    }
    Ok(())
}

fn block_fit<S: RealScalar>(cloud: &WeightedPointCloud<S>, members: &[usize], r: usize) -> S {
    best_fit_flat(&cloud.select(members), r).expect("validated block").cost
}

fn blocks_of(rgs: &[usize]) -> Vec<Vec<usize>> {
    let mut blocks = vec![Vec::new(); block_count(rgs)];
    for (i, &b) in rgs.iter().enumerate() {
        blocks[b].push(i);
    }
    blocks
}

/// Prefix length whose partitions give enough independent subtrees.
fn split_depth(n: usize, k: usize) -> usize {
    (1..=n).find(|&t| partition_count(t, k) >= BigUint::from(256u32)).unwrap_or(n)
}

struct Search<'a, S> {
    cloud: &'a WeightedPointCloud<S>,
    k: usize,
    r: usize,
    prune: bool,
    slack: f64,
    rgs: Vec<usize>,
    blocks: Vec<Vec<usize>>,
    costs: Vec<S>,
    best: Option<(S, Vec<usize>)>,
}

impl<S: RealScalar> Search<'_, S> {
    fn bound_exceeded(&self) -> bool {
        let Some((best, _)) = &self.best else { return false };
        let lb = self.costs.iter().fold(S::zero(), |a, &c| a + c);
        let slack = S::from_f64(self.slack).unwrap() * best.abs().max(S::min_positive_value());
        lb > *best + slack
    }

    fn dfs(&mut self) {
        let i = self.rgs.len();
        if i == self.cloud.len() {
            let total = self.costs.iter().fold(S::zero(), |a, &c| a + c);
            if self.best.as_ref().is_none_or(|(b, _)| total < *b) {
                self.best = Some((total, self.rgs.clone()));
            }
            return;
        }
        let used = self.blocks.len();
        for b in 0..(used + 1).min(self.k) {
            if b == used {
                self.blocks.push(Vec::new());
                self.costs.push(S::zero());
            }
            self.blocks[b].push(i);
            self.rgs.push(b);
            let old = self.costs[b];
            self.costs[b] = block_fit(self.cloud, &self.blocks[b], self.r);
            if !(self.prune && self.bound_exceeded()) {
                self.dfs();
            }
            self.costs[b] = old;
            self.rgs.pop();
            self.blocks[b].pop();
            if b == used {
                self.blocks.pop();
                self.costs.pop();
            }
        }
    }
}

fn order<S: RealScalar>(a: &(S, Vec<usize>), b: &(S, Vec<usize>)) -> Ordering {
    a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal).then_with(|| a.1.cmp(&b.1))
}

/// Builds the solution for a partition given as a restricted growth string.
pub fn solution_for_partition<S: RealScalar>(
    cloud: &WeightedPointCloud<S>,
    rgs: &[usize],
    r: usize,
) -> Result<ClusteringSolution<S>> {
    if rgs.len() != cloud.len() {
        return Err(Error::DimensionMismatch { expected: cloud.len(), found: rgs.len() });
    }
    let mut flats = Vec::new();
    let mut cost = S::zero();
    for members in blocks_of(rgs) {
        if members.is_empty() {
            return Err(Error::InvalidParameters("partition has an empty block".into()));
        }
        let fit = best_fit_flat(&cloud.select(&members), r)?;
        cost = cost + fit.cost;
        flats.push(fit.flat);
    }
    Ok(ClusteringSolution { flats, assignment: rgs.to_vec(), cost })
}

/// Minimum-cost clustering into at most `k` r-flats.
pub fn solve_exact<S: RealScalar>(
    cloud: &WeightedPointCloud<S>,
    k: usize,
    r: usize,
    config: &ExactConfig,
) -> Result<ClusteringSolution<S>> {
    check_inputs(cloud, k, r)?;
    let n = cloud.len();
    check_guard(n, k, config.partition_cap)?;
    let depth = split_depth(n, k);
    let prefixes: Vec<Vec<usize>> = PartitionIterator::new(depth, k).collect();
    let best = prefixes
        .into_par_iter()
        .filter_map(|prefix| {
            let blocks = blocks_of(&prefix);
            let costs = blocks.iter().map(|m| block_fit(cloud, m, r)).collect();
            let mut search = Search {
                cloud,
                k,
                r,
                prune: config.prune,
                slack: config.prune_slack,
                rgs: prefix,
                blocks,
                costs,
                best: None,
            };
            search.dfs();
            search.best
        })
        .min_by(order)
        .expect("at least one partition");
    solution_for_partition(cloud, &best.1, r)
}

/// Decision form: is the optimum at most `budget`? Also returns the optimum.
pub fn decide_exact<S: RealScalar>(
    cloud: &WeightedPointCloud<S>,
    k: usize,
    r: usize,
    budget: S,
    config: &ExactConfig,
) -> Result<(bool, ClusteringSolution<S>)> {
    let sol = solve_exact(cloud, k, r, config)?;
    Ok((sol.cost <= budget, sol))
}

/// True iff every record's assigned flat is within `tol` of its nearest flat.
pub fn is_voronoi_consistent<S: RealScalar>(
    cloud: &WeightedPointCloud<S>,
    solution: &ClusteringSolution<S>,
    tol: f64,
) -> bool {
    if solution.assignment.len() != cloud.len() {
        return false;
    }
    let tol = S::from_f64(tol).unwrap();
    cloud.records().iter().zip(&solution.assignment).all(|(rec, &a)| {
        let Some(flat) = solution.flats.get(a) else { return false };
        match (dist2_point_flat(&rec.coords, flat), nearest_flat(&rec.coords, &solution.flats)) {
            (Ok(own), Ok((_, best))) => own <= best + tol,
            _ => false,
        }
    })
}

/// Nearest-flat assignment (lowest index on ties).
pub fn assign<S: RealScalar>(cloud: &WeightedPointCloud<S>, flats: &[AffineFlat<S>]) -> Result<Vec<usize>> {
    cloud.records().iter().map(|rec| nearest_flat(&rec.coords, flats).map(|(j, _)| j)).collect()
}

/// Number of partitions into at most `k` blocks that reproduce themselves
/// when every block is fitted and records are reassigned to the nearest
/// fitted flat.
pub fn count_consistent_partitions<S: RealScalar>(
    cloud: &WeightedPointCloud<S>,
    k: usize,
    r: usize,
    partition_cap: u128,
) -> Result<u64> {
    check_inputs(cloud, k, r)?;
    let n = cloud.len();
    check_guard(n, k, partition_cap)?;
    let depth = split_depth(n, k);
    let prefixes: Vec<Vec<usize>> = PartitionIterator::new(depth, k).collect();
    let count = prefixes
        .into_par_iter()
        .map(|prefix| {
            let mut local = 0u64;
            let mut rgs = prefix.clone();
            rgs.resize(n, 0);
            loop {
                let sol = solution_for_partition(cloud, &rgs, r).expect("valid partition");
                if assign(cloud, &sol.flats).expect("matching dimensions") == rgs {
                    local += 1;
                }
                if !crate::partition::advance(&mut rgs, k, depth) {
                    break;
                }
            }
            local
        })
        .sum();
    Ok(count)
}

/// Relabels clusters in order of first appearance.
pub fn canonical_labels(assignment: &[usize]) -> Vec<usize> {
    let mut map = std::collections::HashMap::new();
    assignment
        .iter()
        .map(|a| {
            let next = map.len();
            *map.entry(*a).or_insert(next)
        })
        .collect()
}

/// One restart of the alternating assign/refit heuristic.
#[derive(Debug, Clone)]
pub struct HeuristicRun<S> {
    pub solution: ClusteringSolution<S>,
    /// Cost after every full assign + refit round.
    pub trace: Vec<S>,
}

fn seed_flat<S: RealScalar>(
    cloud: &WeightedPointCloud<S>,
    r: usize,
    rng: &mut ChaCha8Rng,
    forced: Option<usize>,
) -> AffineFlat<S> {
    let n = cloud.len();
    let want = (r + 1).min(n);
    let mut members: Vec<usize> = match forced {
        Some(f) => {
            let mut m = vec![f];
            let others: Vec<usize> = (0..n).filter(|&i| i != f).collect();
            let extra = (want - 1).min(others.len());
            m.extend(sample(rng, others.len(), extra).into_iter().map(|i| others[i]));
            m
        }
        None => sample(rng, n, want).into_vec(),
    };
    members.sort_unstable();
    best_fit_flat(&cloud.select(&members), r).expect("validated seed").flat
}

pub fn heuristic_restart<S: RealScalar>(
    cloud: &WeightedPointCloud<S>,
    k: usize,
    r: usize,
    config: &HeuristicConfig,
    restart: u64,
) -> Result<HeuristicRun<S>> {
    check_inputs(cloud, k, r)?;
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    rng.set_stream(restart);
    let mut flats: Vec<AffineFlat<S>> = (0..k).map(|_| seed_flat(cloud, r, &mut rng, None)).collect();
    let rel = S::from_f64(config.rel_tol).unwrap();
    let mut trace: Vec<S> = Vec::new();
    for _ in 0..config.max_iter {
        let assignment = assign(cloud, &flats)?;
        let residuals: Vec<S> = cloud
            .records()
            .iter()
            .zip(&assignment)
            .map(|(rec, &a)| dist2_point_flat(&rec.coords, &flats[a]).map(|d| rec.weight() * d))
            .collect::<Result<_>>()?;
        let mut round = S::zero();
        for (j, flat) in flats.iter_mut().enumerate() {
            let members: Vec<usize> = (0..cloud.len()).filter(|&i| assignment[i] == j).collect();
            if members.is_empty() {
                let worst = (0..cloud.len())
                    .fold(0, |w, i| if residuals[i] > residuals[w] { i } else { w });
                *flat = seed_flat(cloud, r, &mut rng, Some(worst));
            } else {
                let fit = best_fit_flat(&cloud.select(&members), r)?;
                round = round + fit.cost;
                *flat = fit.flat;
            }
        }
        let stop = match trace.last() {
            Some(&prev) => prev - round <= rel * prev.max(S::min_positive_value()),
            None => false,
        };
        trace.push(round);
        if stop || round == S::zero() {
            break;
        }
    }
    let assignment = assign(cloud, &flats)?;
    let cost = total_cost(cloud, &flats)?;
    Ok(HeuristicRun { solution: ClusteringSolution { flats, assignment, cost }, trace })
}

/// Best of `config.restarts` independent restarts, merged by
/// (cost, canonical partition, restart index).
pub fn solve_heuristic<S: RealScalar>(
    cloud: &WeightedPointCloud<S>,
    k: usize,
    r: usize,
    config: &HeuristicConfig,
) -> Result<ClusteringSolution<S>> {
    check_inputs(cloud, k, r)?;
    config.validate()?;
    let runs: Vec<HeuristicRun<S>> = (0..config.restarts as u64)
        .into_par_iter()
        .map(|t| heuristic_restart(cloud, k, r, config, t))
        .collect::<Result<_>>()?;
    let best = runs
        .into_iter()
        .map(|run| run.solution)
        .enumerate()
        .min_by(|(i, a), (j, b)| {
            a.cost
                .partial_cmp(&b.cost)
                .unwrap_or(Ordering::Equal)
                .then_with(|| canonical_labels(&a.assignment).cmp(&canonical_labels(&b.assignment)))
                .then(i.cmp(j))
        })
        .expect("restarts >= 1");
    Ok(best.1)
}
