//! Exact hyperplane cover over rational point sets.

use std::collections::HashSet;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{dot_is_zero, dot_mod, homogeneous_row, null_space, rank, residues};
use crate::fitting::hyperplane_through_rows;
use crate::geometry::{Hyperplane, PointRecord, WeightedPointCloud};
use crate::scalar::Rational;

pub const DEFAULT_CANDIDATE_CAP: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct CandidateHyperplane {
    pub hyperplane: Hyperplane,
    /// Sorted record indices lying on the hyperplane.
    pub covered: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverSolution {
    pub hyperplanes: Vec<Hyperplane>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoverAnswer {
    Yes(CoverSolution),
    No,
}

impl CoverAnswer {
    pub fn is_yes(&self) -> bool {
        matches!(self, CoverAnswer::Yes(_))
    }
}

#[derive(Debug, Clone)]
pub struct CoverConfig {
    /// Largest admissible number of point subsets examined for candidates.
    pub candidate_cap: u128,
}

impl Default for CoverConfig {
    fn default() -> Self {
        Self { candidate_cap: DEFAULT_CANDIDATE_CAP }
    }
}

fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Number of subsets of size `lo..=hi` of an `n`-set.
fn subset_count(n: usize, lo: usize, hi: usize) -> BigUint {
    (lo..=hi).map(|s| binomial(n, s)).sum()
}

fn check_cap(count: BigUint, cap: u128) -> Result<()> {
    if count > BigUint::from(cap) {
        return Err(Error::too_large("candidate generation", count, cap));
    }
    Ok(())
}

/// Distinct positions with their homogeneous rows and the records at each.
struct Positions {
    dim: usize,
    rows: Vec<Vec<BigInt>>,
    records: Vec<Vec<usize>>,
}

impl Positions {
    fn of(cloud: &WeightedPointCloud<Rational>) -> Self {
        let records = cloud.distinct_positions();
        let rows = records.iter().map(|g| homogeneous_row(cloud.point(g[0]))).collect();
        Self { dim: cloud.dim(), rows, records }
    }

    fn len(&self) -> usize {
        self.rows.len()
    }
}

/// Hyperplanes through every affinely independent subset of `pool` that
/// contains all of `fixed`, of total size at most `dim`; first-seen order,
/// deduplicated.
fn hyperplanes_through(pos: &Positions, fixed: &[usize], pool: &[usize]) -> Vec<Hyperplane> {
    fn extend(
        pos: &Positions,
        pool: &[usize],
        start: usize,
        chosen: &mut Vec<Vec<BigInt>>,
        out: &mut Vec<Hyperplane>,
    ) {
        if let Ok(h) = hyperplane_through_rows(pos.dim, chosen) {
            out.push(h);
        }
        if chosen.len() == pos.dim {
            return;
        }
        for (t, &i) in pool.iter().enumerate().skip(start) {
            chosen.push(pos.rows[i].clone());
            if rank(chosen) == chosen.len() {
                extend(pos, pool, t + 1, chosen, out);
            }
            chosen.pop();
        }
    }
    let mut chosen: Vec<Vec<BigInt>> = fixed.iter().map(|&i| pos.rows[i].clone()).collect();
    if rank(&chosen) < chosen.len() {
        return Vec::new();
    }
    let mut out = Vec::new();
    extend(pos, pool, 0, &mut chosen, &mut out);
    let mut seen = HashSet::new();
    out.retain(|h| seen.insert(h.clone()));
    out
}

fn require_records(cloud: &WeightedPointCloud<Rational>) -> Result<()> {
    if cloud.is_empty() {
        return Err(Error::EmptyCloud);
    }
    Ok(())
}

/// Every hyperplane spanned (with the standard completion) by an affinely
/// independent set of at most `d` distinct positions, with its exact
/// covered record set.
pub fn generate_candidates(cloud: &WeightedPointCloud<Rational>, config: &CoverConfig) -> Result<Vec<CandidateHyperplane>> {
    require_records(cloud)?;
    let pos = Positions::of(cloud);
    let m = pos.len();
    check_cap(subset_count(m, 1, pos.dim.min(m)), config.candidate_cap)?;
    let per_first: Vec<Vec<Hyperplane>> = (0..m)
        .into_par_iter()
        .map(|i| {
            let pool: Vec<usize> = (i + 1..m).collect();
            hyperplanes_through(&pos, &[i], &pool)
        })
        .collect();
    let mut seen = HashSet::new();
    let planes: Vec<Hyperplane> = per_first.into_iter().flatten().filter(|h| seen.insert(h.clone())).collect();
    Ok(planes
        .into_par_iter()
        .map(|h| {
            let mut covered: Vec<usize> = (0..m)
                .filter(|&p| h.contains_row(&pos.rows[p]))
                .flat_map(|p| pos.records[p].iter().copied())
                .collect();
            covered.sort_unstable();
            CandidateHyperplane { hyperplane: h, covered }
        })
        .collect())
}

/// A greedy affine basis of the listed positions (at most `dim` of them), or
/// `None` when they do not lie on a common hyperplane.
fn common_hyperplane(pos: &Positions, idx: &[usize]) -> Option<Hyperplane> {
    let rows: Vec<Vec<BigInt>> = idx.iter().map(|&i| pos.rows[i].clone()).collect();
    if rank(&rows) > pos.dim {
        return None;
    }
    let mut basis: Vec<Vec<BigInt>> = Vec::new();
    for row in rows {
        basis.push(row);
        if rank(&basis) < basis.len() {
            basis.pop();
        }
    }
    if basis.is_empty() {
        let mut e = vec![BigInt::zero(); pos.dim + 1];
        e[0] = BigInt::from(1);
        basis.push(e);
    }
    hyperplane_through_rows(pos.dim, &basis).ok()
}

struct CoverSearch<'a> {
    pos: &'a Positions,
    cap: u128,
}

impl CoverSearch<'_> {
    fn solve(&self, uncovered: &[usize], budget: usize) -> Result<Option<Vec<Hyperplane>>> {
        if uncovered.is_empty() {
            return Ok(Some(Vec::new()));
        }
        if budget == 0 {
            return Ok(None);
        }
        let d = self.pos.dim;
        if uncovered.len() <= budget * d {
            let planes = uncovered
                .chunks(d)
                .map(|group| common_hyperplane(self.pos, group).expect("d points share a hyperplane"))
                .collect();
            return Ok(Some(planes));
        }
        if budget == 1 {
            return Ok(common_hyperplane(self.pos, uncovered).map(|h| vec![h]));
        }
        let anchor = uncovered[0];
        let rest = &uncovered[1..];
        check_cap(subset_count(rest.len(), 0, d - 1), self.cap)?;
        let planes = hyperplanes_through(self.pos, &[anchor], rest);
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut branches: Vec<(Hyperplane, Vec<usize>)> = planes
            .into_par_iter()
            .map(|h| {
                let left: Vec<usize> = uncovered.iter().copied().filter(|&p| !h.contains_row(&self.pos.rows[p])).collect();
                (h, left)
            })
            .collect::<Vec<_>>()
            .into_iter()
            .filter(|(_, left)| seen.insert(left.clone()))
            .collect();
        branches.sort_by_key(|(_, left)| left.len());
        let found = branches.par_iter().map(|(h, left)| {
            self.solve(left, budget - 1).map(|sol| {
                sol.map(|mut planes| {
                    planes.insert(0, h.clone());
                    planes
                })
            })
        });
        let first = found.find_map_first(|res| match res {
            Ok(None) => None,
            other => Some(other),
        });
        first.unwrap_or(Ok(None))
    }
}

/// Points assigned to one hyperplane of the cover: an affine basis of them
/// and the exact null space of that basis (with residues for fast rejection).
#[derive(Clone, Default)]
struct Group {
    basis: Vec<Vec<BigInt>>,
    null: Vec<Vec<BigInt>>,
    null_mod: Vec<Vec<u64>>,
}

impl Group {
    fn with(&self, row: &[BigInt], cols: usize) -> Self {
        let mut basis = self.basis.clone();
        basis.push(row.to_vec());
        let null = null_space(&basis, cols);
        let null_mod = null.iter().map(|v| residues(v)).collect();
        Self { basis, null, null_mod }
    }

    /// Exact test: is the position in the affine hull of the group?
    fn spans(&self, row: &[BigInt], row_mod: &[u64]) -> bool {
        !self.basis.is_empty()
            && self.null_mod.iter().all(|v| dot_mod(v, row_mod) == 0)
            && self.null.iter().all(|v| dot_is_zero(v, row))
    }

    /// First null vector; nonzero in some `c_1..c_d` because every row
    /// starts with a nonzero homogenising entry.
    fn hyperplane(&self) -> Hyperplane {
        Hyperplane::from_integers(self.null[0].clone()).expect("a nonempty group has a proper normal")
    }
}

/// Decides coverability by assigning positions in index order to one of at
/// most `k` groups, each required to stay inside some hyperplane. A
/// position already in the affine hull of a group joins it without
/// branching, so every branch raises the rank of a group and the tree has at
/// most `k^(k d)` leaves.
struct GroupSearch<'a> {
    pos: &'a Positions,
    rows_mod: Vec<Vec<u64>>,
    k: usize,
}

impl GroupSearch<'_> {
    fn covered(&self, groups: &[Group], p: usize) -> bool {
        groups.iter().any(|g| g.spans(&self.pos.rows[p], &self.rows_mod[p]))
    }

    fn solve(&self, next: usize, groups: Vec<Group>) -> Option<Vec<Group>> {
        let d = self.pos.dim;
        let cols = d + 1;
        let rest: Vec<usize> = (next..self.pos.len()).filter(|&p| !self.covered(&groups, p)).collect();
        let Some(&first) = rest.first() else {
            return Some(groups);
        };
        let free = self.k - groups.len();
        if rest.len() <= free * d {
            let mut done = groups;
            for chunk in rest.chunks(d) {
                let mut g = Group::default();
                for &p in chunk {
                    if !g.spans(&self.pos.rows[p], &self.rows_mod[p]) {
                        g = g.with(&self.pos.rows[p], cols);
                    }
                }
                done.push(g);
            }
            return Some(done);
        }
        let row = &self.pos.rows[first];
        let mut options: Vec<Vec<Group>> = (0..groups.len())
            .filter(|&i| groups[i].basis.len() < d)
            .map(|i| {
                let mut next_groups = groups.clone();
                next_groups[i] = groups[i].with(row, cols);
                next_groups
            })
            .collect();
        if free > 0 {
            let mut next_groups = groups.clone();
            next_groups.push(Group::default().with(row, cols));
            options.push(next_groups);
        }
        options.into_par_iter().find_map_first(|g| self.solve(first + 1, g))
    }
}

/// Exact decision: at most `k` hyperplanes covering every record, or `No`.
pub fn solve_cover(cloud: &WeightedPointCloud<Rational>, k: usize, _config: &CoverConfig) -> Result<CoverAnswer> {
    let pos = Positions::of(cloud);
    let rows_mod = pos.rows.iter().map(|r| residues(r)).collect();
    let search = GroupSearch { pos: &pos, rows_mod, k };
    Ok(match search.solve(0, Vec::new()) {
        Some(groups) => CoverAnswer::Yes(CoverSolution {
            hyperplanes: groups.iter().map(Group::hyperplane).collect(),
        }),
        None => CoverAnswer::No,
    })
}

/// The same decision by branching over candidate hyperplanes through the
/// lowest uncovered position, fewest leftovers first. Far slower than
/// [`solve_cover`] in higher dimension; kept as an independent cross-check.
pub fn solve_cover_by_candidates(
    cloud: &WeightedPointCloud<Rational>,
    k: usize,
    config: &CoverConfig,
) -> Result<CoverAnswer> {
    let pos = Positions::of(cloud);
    let all: Vec<usize> = (0..pos.len()).collect();
    let search = CoverSearch { pos: &pos, cap: config.candidate_cap };
    Ok(match search.solve(&all, k)? {
        Some(hyperplanes) => CoverAnswer::Yes(CoverSolution { hyperplanes }),
        None => CoverAnswer::No,
    })
}

/// Exact membership of every record in at least one hyperplane.
pub fn verify_cover(cloud: &WeightedPointCloud<Rational>, hyperplanes: &[Hyperplane]) -> Result<bool> {
    for h in hyperplanes {
        if h.dim() != cloud.dim() {
            return Err(Error::DimensionMismatch { expected: cloud.dim(), found: h.dim() });
        }
    }
    Ok(cloud.records().iter().all(|rec| {
        let row = homogeneous_row(&rec.coords);
        hyperplanes.iter().any(|h| h.contains_row(&row))
    }))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    pub reduced: WeightedPointCloud<Rational>,
    pub forced: Vec<Hyperplane>,
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum KernelOutcome {
    Reduced(Kernel),
    No,
}

/// Line-cover kernel: a line through more than `k` remaining positions must
/// be in every solution; once none is left, more than `k^2` positions means
/// no cover exists.
pub fn forced_line_kernel(cloud: &WeightedPointCloud<Rational>, k: usize) -> Result<KernelOutcome> {
    if cloud.dim() != 2 {
        return Err(Error::NotPlanar(cloud.dim()));
    }
    let pos = Positions::of(cloud);
    let mut alive: Vec<usize> = (0..pos.len()).collect();
    let mut forced = Vec::new();
    let mut k = k;
    while k > 0 && alive.len() > k {
        let mut best: Option<(usize, Hyperplane)> = None;
        for (a, &i) in alive.iter().enumerate() {
            for &j in &alive[a + 1..] {
                let h = hyperplane_through_rows(2, &[pos.rows[i].clone(), pos.rows[j].clone()])?;
                let count = alive.iter().filter(|&&p| h.contains_row(&pos.rows[p])).count();
                if best.as_ref().is_none_or(|(c, _)| count > *c) {
                    best = Some((count, h));
                }
            }
        }
        match best {
            Some((count, h)) if count > k => {
                alive.retain(|&p| !h.contains_row(&pos.rows[p]));
                forced.push(h);
                k -= 1;
            }
            _ => break,
        }
    }
    if alive.len() > k * k {
        return Ok(KernelOutcome::No);
    }
    let records: Vec<PointRecord<Rational>> = alive
        .iter()
        .flat_map(|&p| pos.records[p].iter().map(|&r| cloud.records()[r].clone()))
        .collect();
    let reduced = WeightedPointCloud::new(2, records)?;
    Ok(KernelOutcome::Reduced(Kernel { reduced, forced, k }))
}

/// [`solve_cover`] preceded by [`forced_line_kernel`] (planar input only).
pub fn solve_cover_kernelized(cloud: &WeightedPointCloud<Rational>, k: usize, config: &CoverConfig) -> Result<CoverAnswer> {
    match forced_line_kernel(cloud, k)? {
        KernelOutcome::No => Ok(CoverAnswer::No),
        KernelOutcome::Reduced(kernel) => Ok(match solve_cover(&kernel.reduced, kernel.k, config)? {
            CoverAnswer::Yes(sol) => {
                let mut hyperplanes = kernel.forced;
                hyperplanes.extend(sol.hyperplanes);
                CoverAnswer::Yes(CoverSolution { hyperplanes })
            }
            CoverAnswer::No => CoverAnswer::No,
        }),
    }
}
