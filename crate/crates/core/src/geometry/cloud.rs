use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A point together with how many copies of it the multiset contains.
#[derive(Debug, Clone, PartialEq)]
pub struct PointRecord<S> {
    pub coords: Vec<S>,
    pub mult: BigUint,
}

impl<S: Scalar> PointRecord<S> {
    pub fn new(coords: Vec<S>, mult: impl Into<BigUint>) -> Self {
        Self { coords, mult: mult.into() }
    }

    pub fn single(coords: Vec<S>) -> Self {
        Self { coords, mult: BigUint::one() }
    }

    /// Multiplicity converted into the scalar type.
    pub fn weight(&self) -> S {
        S::from_biguint(&self.mult)
    }
}

/// A multiset of points in R^d stored as (point, multiplicity) records.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedPointCloud<S> {
    dim: usize,
    records: Vec<PointRecord<S>>,
}

impl<S: Scalar> WeightedPointCloud<S> {
    pub fn new(dim: usize, records: Vec<PointRecord<S>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        for rec in &records {
            if rec.coords.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: rec.coords.len() });
            }
            if rec.mult.is_zero() {
                return Err(Error::ZeroMultiplicity);
            }
        }
        Ok(Self { dim, records })
    }

    /// Every point with multiplicity one.
    pub fn from_points(dim: usize, points: Vec<Vec<S>>) -> Result<Self> {
        Self::new(dim, points.into_iter().map(PointRecord::single).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn records(&self) -> &[PointRecord<S>] {
        &self.records
    }

    pub fn into_records(self) -> Vec<PointRecord<S>> {
        self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn total_weight(&self) -> BigUint {
        self.records.iter().map(|r| &r.mult).sum()
    }

    pub fn point(&self, i: usize) -> &[S] {
        &self.records[i].coords
    }

    pub fn weights(&self) -> Vec<S> {
        self.records.iter().map(PointRecord::weight).collect()
    }

    /// Sub-cloud made of the records at `indices`, in that order.
    pub fn select(&self, indices: &[usize]) -> Self {
        Self { dim: self.dim, records: indices.iter().map(|&i| self.records[i].clone()).collect() }
    }

    pub fn translated(&self, t: &[S]) -> Result<Self> {
        if t.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: t.len() });
        }
        let records = self
            .records
            .iter()
            .map(|r| PointRecord {
                coords: r.coords.iter().zip(t).map(|(a, b)| a.clone() + b.clone()).collect(),
                mult: r.mult.clone(),
            })
            .collect();
        Ok(Self { dim: self.dim, records })
    }

    /// Indices of records grouped by identical coordinates, first occurrence order.
    pub fn distinct_positions(&self) -> Vec<Vec<usize>> {
        let mut groups: Vec<Vec<usize>> = Vec::new();
        'outer: for (i, rec) in self.records.iter().enumerate() {
            for g in groups.iter_mut() {
                if self.records[g[0]].coords == rec.coords {
                    g.push(i);
                    continue 'outer;
                }
            }
            groups.push(vec![i]);
        }
        groups
    }
}
