//! Seeded instance generators.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::geometry::{AffineFlat, WeightedPointCloud, DEFAULT_REL_TOL};
use crate::linalg::{orthonormalize, reject};
use crate::reductions::graph::ColoredGraph;
use crate::scalar::Rational;

/// Generator for `(seed, stream)`; distinct streams never overlap.
pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arrangement {
    /// Translates of one random flat, consecutive ones `spacing` apart.
    Parallel,
    /// Flats at distance `spacing` from the origin with normals spread evenly
    /// around a random 2-plane; planar lines form a regular polygon.
    Polygon,
}

/// `k` noisy `r`-flats in `R^dim`.
#[derive(Debug, Clone)]
pub struct PlantedConfig {
    pub dim: usize,
    pub r: usize,
    pub k: usize,
    pub per_flat: usize,
    pub spacing: f64,
    pub sigma: f64,
    /// Samples cover `[-extent, extent]` along each direction of a flat.
    pub extent: f64,
    /// Latin hypercube jitter in `[0, 1]`: every direction is cut into
    /// `per_flat` equal strata and each sample sits at its stratum centre
    /// moved by up to `jitter / 2` of the stratum width.
    pub jitter: f64,
    pub arrangement: Arrangement,
}

impl Default for PlantedConfig {
    fn default() -> Self {
        Self { dim: 2, r: 1, k: 3, per_flat: 4, spacing: 1.0, sigma: 0.1, extent: 3.0, jitter: 0.5, arrangement: Arrangement::Parallel }
    }
}

#[derive(Debug, Clone)]
pub struct Planted {
    pub cloud: WeightedPointCloud<f64>,
    pub flats: Vec<AffineFlat<f64>>,
    /// Planted flat of every point.
    pub labels: Vec<usize>,
}

fn gaussian_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    (0..dim).map(|_| normal.sample(rng)).collect()
}

/// Orthonormal frame whose leading vectors are `fixed`, completed randomly.
fn random_frame(rng: &mut ChaCha8Rng, fixed: &[Vec<f64>], size: usize, dim: usize) -> Vec<Vec<f64>> {
    loop {
        let mut raw = fixed.to_vec();
        raw.extend((fixed.len()..size).map(|_| gaussian_vector(rng, dim)));
        if let Some(q) = orthonormalize(&raw, DEFAULT_REL_TOL) {
            return q;
        }
    }
}

pub fn planted_flats(config: &PlantedConfig, rng: &mut ChaCha8Rng) -> Result<Planted> {
    let PlantedConfig { dim, r, k, per_flat, spacing, sigma, extent, jitter, arrangement } = *config;
    if r >= dim || k == 0 || per_flat == 0 || !(sigma >= 0.0) || !(extent > 0.0) || !spacing.is_finite() {
        return Err(Error::InvalidParameters("planted: need r < dim, k, per_flat > 0, sigma >= 0, extent > 0".into()));
    }
    if !(0.0..=1.0).contains(&jitter) {
        return Err(Error::InvalidParameters("planted: jitter must lie in [0, 1]".into()));
    }
    let width = 2.0 * extent / per_flat as f64;
    let plane = random_frame(rng, &[], 2.min(dim), dim);
    let noise = Normal::new(0.0, sigma.max(f64::MIN_POSITIVE)).expect("finite sigma");
    let mut flats = Vec::with_capacity(k);
    let mut points = Vec::with_capacity(k * per_flat);
    let mut labels = Vec::with_capacity(k * per_flat);
    let shared = random_frame(rng, &plane[..1], r + 1, dim)[1..].to_vec();
    for i in 0..k {
        let (normal, basis, shift) = match arrangement {
            Arrangement::Parallel => (plane[0].clone(), shared.clone(), (i as f64 - (k - 1) as f64 / 2.0) * spacing),
            Arrangement::Polygon => {
                let angle = 2.0 * std::f64::consts::PI * i as f64 / k as f64;
                let normal: Vec<f64> = if plane.len() == 2 {
                    (0..dim).map(|a| angle.cos() * plane[0][a] + angle.sin() * plane[1][a]).collect()
                } else {
                    plane[0].iter().map(|x| if i % 2 == 0 { *x } else { -x }).collect()
                };
                let basis = random_frame(rng, std::slice::from_ref(&normal), r + 1, dim)[1..].to_vec();
                (normal, basis, spacing)
            }
        };
        let offset: Vec<f64> = normal.iter().map(|u| u * shift).collect();
        flats.push(AffineFlat::new(basis.clone(), reject(&offset, &basis), DEFAULT_REL_TOL)?);
        let strata: Vec<Vec<usize>> = (0..r)
            .map(|_| {
                let mut perm: Vec<usize> = (0..per_flat).collect();
                perm.shuffle(rng);
                perm
            })
            .collect();
        for j in 0..per_flat {
            let mut p = offset.clone();
            for (b, perm) in basis.iter().zip(&strata) {
                let shift = jitter * (rng.random::<f64>() - 0.5);
                let t = -extent + width * (perm[j] as f64 + 0.5 + shift);
                p.iter_mut().zip(b).for_each(|(x, bi)| *x += t * bi);
            }
            if sigma > 0.0 {
                p.iter_mut().for_each(|x| *x += noise.sample(rng));
            }
            points.push(p);
            labels.push(i);
        }
    }
    Ok(Planted { cloud: WeightedPointCloud::from_points(dim, points)?, flats, labels })
}

/// `n` points uniform in `[-extent, extent]^dim`.
pub fn random_cloud(dim: usize, n: usize, extent: f64, rng: &mut ChaCha8Rng) -> Result<WeightedPointCloud<f64>> {
    let points = (0..n).map(|_| (0..dim).map(|_| rng.random_range(-extent..=extent)).collect()).collect();
    WeightedPointCloud::from_points(dim, points)
}

/// `n` integer points with coordinates in `lo..=hi`; repeats are kept.
pub fn random_integer_cloud(
    dim: usize,
    n: usize,
    lo: i64,
    hi: i64,
    rng: &mut ChaCha8Rng,
) -> Result<WeightedPointCloud<Rational>> {
    if lo > hi {
        return Err(Error::InvalidParameters("empty coordinate range".into()));
    }
    let points = (0..n)
        .map(|_| (0..dim).map(|_| Rational::from_integer(rng.random_range(lo..=hi).into())).collect())
        .collect();
    WeightedPointCloud::from_points(dim, points)
}

/// The `m x m` integer grid `{0..m}^2`.
pub fn grid_cloud(m: usize) -> Result<WeightedPointCloud<Rational>> {
    let points = (0..m)
        .flat_map(|x| (0..m).map(move |y| vec![Rational::from_integer(x.into()), Rational::from_integer(y.into())]))
        .collect();
    WeightedPointCloud::from_points(2, points)
}

/// Erdos-Renyi graph `G(n, prob)`.
pub fn random_graph(n: usize, prob: f64, rng: &mut ChaCha8Rng) -> Result<ColoredGraph> {
    if !(0.0..=1.0).contains(&prob) {
        return Err(Error::InvalidParameters("edge probability must lie in [0, 1]".into()));
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(prob) {
                edges.push((u, v));
            }
        }
    }
    ColoredGraph::new(n, edges)
}

/// A random regular multicoloured graph: two classes joined by a random
/// perfect matching, or a cyclic chain of random matchings for `l >= 3`.
pub fn random_ring(l: usize, nu: usize, rng: &mut ChaCha8Rng) -> Result<ColoredGraph> {
    if l < 2 || nu == 0 {
        return Err(Error::InvalidParameters("need at least two colours and one vertex per colour".into()));
    }
    let pairs = if l == 2 { 1 } else { l };
    let mut edges = Vec::with_capacity(pairs * nu);
    for i in 0..pairs {
        let mut perm: Vec<usize> = (0..nu).collect();
        for a in (1..nu).rev() {
            perm.swap(a, rng.random_range(0..=a));
        }
        let next = (i + 1) % l;
        edges.extend((0..nu).map(|j| (i * nu + j, next * nu + perm[j])));
    }
    let colors = (0..l).map(|i| (i * nu..(i + 1) * nu).collect()).collect();
    ColoredGraph::new(l * nu, edges)?.with_colors(colors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::dist2_point_flat;

    #[test]
    fn noiseless_points_lie_on_their_flats() {
        let config = PlantedConfig { dim: 3, r: 1, k: 2, per_flat: 5, sigma: 0.0, ..Default::default() };
        let planted = planted_flats(&config, &mut rng(7, 0)).unwrap();
        assert_eq!(planted.cloud.len(), 10);
        for (i, &label) in planted.labels.iter().enumerate() {
            assert!(dist2_point_flat(planted.cloud.point(i), &planted.flats[label]).unwrap() < 1e-18);
        }
    }

    #[test]
    fn generators_are_reproducible() {
        let a = random_cloud(2, 5, 1.0, &mut rng(3, 1)).unwrap();
        let b = random_cloud(2, 5, 1.0, &mut rng(3, 1)).unwrap();
        let c = random_cloud(2, 5, 1.0, &mut rng(3, 2)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn rings_are_regular_and_coloured() {
        let g = random_ring(3, 4, &mut rng(1, 0)).unwrap();
        assert_eq!(g.uniform_degree(), Some(2));
        let g = random_ring(2, 6, &mut rng(1, 0)).unwrap();
        assert_eq!(g.uniform_degree(), Some(1));
        assert_eq!(grid_cloud(3).unwrap().len(), 9);
    }
}
