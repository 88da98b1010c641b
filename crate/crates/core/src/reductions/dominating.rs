//! Dominating Set to Hyperplane Cover through a Vandermonde table.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::cover::verify_cover;
use crate::error::{Error, Result};
use crate::geometry::{Hyperplane, WeightedPointCloud};
use crate::scalar::Rational;

use super::graph::ColoredGraph;

#[derive(Debug, Clone)]
pub struct DsOptions {
    /// Reject graphs with a vertex of degree `d - 1` and `k' <= 1`.
    pub enforce_wlog: bool,
}

impl Default for DsOptions {
    fn default() -> Self {
        Self { enforce_wlog: true }
    }
}

#[derive(Debug, Clone)]
pub struct VandermondeInstance {
    pub graph: ColoredGraph,
    pub cloud: WeightedPointCloud<Rational>,
    pub k: usize,
    /// `(vertex, copy)` of every point, in cloud order.
    pub labels: Vec<(usize, usize)>,
    /// `mask[v][j]` is true when coordinate `j` of vertex `v`'s points is 1.
    pub mask: Vec<Vec<bool>>,
}

/// Base number of global row `row` (0-based): rows use the bases `2, 3, ..`.
pub fn vandermonde_base(row: usize) -> BigInt {
    BigInt::from(row + 2)
}

impl VandermondeInstance {
    pub fn dim(&self) -> usize {
        self.graph.n()
    }

    pub fn points_per_vertex(&self) -> usize {
        self.dim() * self.k
    }

    /// The `N x (d + 1)` value table `V[i][j] = base_i^j`, `j = 0..=d`;
    /// unset coordinate `j` (1-based) of row `i` equals `V[i][j]`.
    pub fn value_table(&self) -> Vec<Vec<BigInt>> {
        let d = self.dim();
        (0..self.cloud.len())
            .map(|i| {
                let b = vandermonde_base(i);
                let mut row = Vec::with_capacity(d + 1);
                let mut acc = BigInt::one();
                for _ in 0..=d {
                    row.push(acc.clone());
                    acc *= &b;
                }
                row
            })
            .collect()
    }

    pub fn meta_json(&self) -> Value {
        json!({
            "vertices": self.dim(),
            "points_per_vertex": self.points_per_vertex(),
            "labels": self.labels.iter().map(|&(v, c)| [v, c]).collect::<Vec<_>>(),
            "closed_neighborhood_mask": self.mask,
            "vandermonde": "row i (0-based) uses base i + 2; unset coordinate j (1-based) equals base^j",
        })
    }
}

pub fn ds_to_hyperplane_cover(g: &ColoredGraph, k_prime: usize, options: &DsOptions) -> Result<VandermondeInstance> {
    let d = g.n();
    if d < 2 {
        return Err(Error::InvalidGraph("need at least two vertices".into()));
    }
    if k_prime == 0 {
        return Err(Error::InvalidParameters("k' must be positive".into()));
    }
    if options.enforce_wlog {
        if k_prime <= 1 {
            return Err(Error::InvalidParameters("k' must exceed 1".into()));
        }
        if let Some(v) = (0..d).find(|&v| g.degree(v) == d - 1) {
            return Err(Error::InvalidGraph(format!("vertex {v} has degree d - 1")));
        }
    }
    let per_vertex = d * k_prime;
    let mask: Vec<Vec<bool>> = (0..d)
        .map(|v| {
            let nb = g.closed_neighborhood(v);
            (0..d).map(|j| nb.binary_search(&j).is_ok()).collect()
        })
        .collect();
    let mut points = Vec::with_capacity(d * per_vertex);
    let mut labels = Vec::with_capacity(d * per_vertex);
    for v in 0..d {
        for c in 0..per_vertex {
            let row = v * per_vertex + c;
            let base = vandermonde_base(row);
            let coords = (0..d)
                .map(|j| {
                    if mask[v][j] {
                        Rational::one()
                    } else {
                        Rational::from_integer(base.pow(j as u32 + 1))
                    }
                })
                .collect();
            points.push(coords);
            labels.push((v, c));
        }
    }
    let cloud = WeightedPointCloud::from_points(d, points)?;
    Ok(VandermondeInstance { graph: g.clone(), cloud, k: k_prime, labels, mask })
}

/// Planes `x[i] = 1` for the vertices of a dominating set.
pub fn dominating_set_to_cover_witness(inst: &VandermondeInstance, set: &[usize]) -> Result<Vec<Hyperplane>> {
    if !inst.graph.is_dominating(set) {
        return Err(Error::NotDominating);
    }
    set.iter().map(|&v| Hyperplane::axis(inst.dim(), v, &Rational::one())).collect()
}

/// Reads a dominating set off a cover: for every plane, the vertices whose
/// points it fully contains share a common closed neighbour, which is taken
/// (smallest index). Any deviation from that structure is an integrity error.
pub fn cover_to_dominating_set(inst: &VandermondeInstance, planes: &[Hyperplane]) -> Result<Vec<usize>> {
    if !verify_cover(&inst.cloud, planes)? {
        return Err(Error::NotACover);
    }
    let d = inst.dim();
    let per_vertex = inst.points_per_vertex();
    let mut fully_covered = vec![false; d];
    let mut chosen = Vec::new();
    for plane in planes {
        let groups: Vec<usize> = (0..d)
            .filter(|&v| {
                (0..per_vertex).all(|c| plane.contains(inst.cloud.point(v * per_vertex + c)).expect("dimension checked"))
            })
            .collect();
        if groups.is_empty() {
            continue;
        }
        let common: Vec<usize> = (0..d).filter(|&w| groups.iter().all(|&v| inst.mask[v][w])).collect();
        let Some(&w) = common.first() else {
            return Err(Error::Integrity(format!("plane {plane} covers vertices {groups:?} with no common neighbour")));
        };
        let nonzero: Vec<usize> = (0..d).filter(|&j| !plane.coeffs()[j + 1].is_zero()).collect();
        if let Some(j) = nonzero.iter().find(|j| !common.contains(j)) {
            return Err(Error::Integrity(format!(
                "plane {plane} has a nonzero coefficient at vertex {j} outside the common neighbourhood"
            )));
        }
        for &v in &groups {
            fully_covered[v] = true;
        }
        chosen.push(w);
    }
    if let Some(v) = fully_covered.iter().position(|f| !f) {
        return Err(Error::Integrity(format!("no plane contains every point of vertex {v}")));
    }
    chosen.sort_unstable();
    chosen.dedup();
    if !inst.graph.is_dominating(&chosen) {
        return Err(Error::Integrity("extracted vertex set does not dominate".into()));
    }
    Ok(chosen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn path() -> ColoredGraph {
        ColoredGraph::new(3, [(0, 1), (1, 2)]).unwrap()
    }

    fn relaxed() -> DsOptions {
        DsOptions { enforce_wlog: false }
    }

    #[test]
    fn path_points_follow_the_rules() {
        let inst = ds_to_hyperplane_cover(&path(), 2, &relaxed()).unwrap();
        assert_eq!(inst.cloud.len(), 18);
        // vertex a = 0, N[a] = {0, 1}; third coordinate is base^3 with base = row + 2
        for c in 0..6 {
            let p = inst.cloud.point(c);
            assert_eq!(p[0], int(1));
            assert_eq!(p[1], int(1));
            assert_eq!(p[2], int((c as i64 + 2).pow(3)));
        }
        assert!(matches!(
            ds_to_hyperplane_cover(&path(), 2, &DsOptions::default()),
            Err(Error::InvalidGraph(_))
        ));
    }

    #[test]
    fn witness_round_trip() {
        let inst = ds_to_hyperplane_cover(&path(), 2, &relaxed()).unwrap();
        let planes = dominating_set_to_cover_witness(&inst, &[1]).unwrap();
        assert!(verify_cover(&inst.cloud, &planes).unwrap());
        assert_eq!(cover_to_dominating_set(&inst, &planes).unwrap(), vec![1]);
        let all = dominating_set_to_cover_witness(&inst, &[0, 1, 2]).unwrap();
        assert!(verify_cover(&inst.cloud, &all).unwrap());
        assert!(matches!(dominating_set_to_cover_witness(&inst, &[0]), Err(Error::NotDominating)));
        assert!(matches!(cover_to_dominating_set(&inst, &planes[..0]), Err(Error::NotACover)));
    }

    #[test]
    fn star_centre_covers_everything() {
        let star = ColoredGraph::new(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let inst = ds_to_hyperplane_cover(&star, 2, &relaxed()).unwrap();
        let planes = dominating_set_to_cover_witness(&inst, &[0]).unwrap();
        assert_eq!(planes.len(), 1);
        assert!(verify_cover(&inst.cloud, &planes).unwrap());
    }
}
