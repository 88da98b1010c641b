//! Fraction-free integer linear algebra (Bareiss elimination).
//!
//! Every routine first runs on `i128` with checked arithmetic and restarts on
//! `BigInt` if anything overflows, so results are always exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::scalar::Rational;

trait Ring: Clone + PartialEq {
    fn ring_zero() -> Self;
    fn ring_one() -> Self;
    fn is_nil(&self) -> bool;
    fn mul_sub_div(a: &Self, b: &Self, c: &Self, e: &Self, div: &Self) -> Option<Self>;
    fn neg(&self) -> Self;
}

impl Ring for i128 {
    fn ring_zero() -> Self {
        0
    }
    fn ring_one() -> Self {
        1
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    // (a*b - c*e) / div
    fn mul_sub_div(a: &Self, b: &Self, c: &Self, e: &Self, div: &Self) -> Option<Self> {
        let x = a.checked_mul(*b)?;
        let y = c.checked_mul(*e)?;
        Some(x.checked_sub(y)? / div)
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl Ring for BigInt {
    fn ring_zero() -> Self {
        Zero::zero()
    }
    fn ring_one() -> Self {
        One::one()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul_sub_div(a: &Self, b: &Self, c: &Self, e: &Self, div: &Self) -> Option<Self> {
        Some((a * b - c * e) / div)
    }
    fn neg(&self) -> Self {
        -self
    }
}

/// Eliminates in place; returns the rank and the sign of the row permutation,
/// or `None` on overflow.
fn bareiss<T: Ring>(m: &mut [Vec<T>]) -> Option<(usize, bool)> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev = T::ring_one();
    let mut rank = 0;
    let mut flipped = false;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| !m[r][col].is_nil()) else {
            continue;
        };
        if pivot != rank {
            m.swap(pivot, rank);
            flipped = !flipped;
        }
        for i in rank + 1..rows {
            for j in col + 1..cols {
                m[i][j] = T::mul_sub_div(&m[i][j], &m[rank][col], &m[i][col], &m[rank][j], &prev)?;
            }
            m[i][col] = T::ring_zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    Some((rank, flipped))
}

fn to_small(rows: &[Vec<BigInt>]) -> Option<Vec<Vec<i128>>> {
    rows.iter().map(|r| r.iter().map(|v| v.to_i128()).collect()).collect()
}

pub fn rank(rows: &[Vec<BigInt>]) -> usize {
    if let Some(mut small) = to_small(rows) {
        if let Some((r, _)) = bareiss(&mut small) {
            return r;
        }
    }
    let mut big = rows.to_vec();
    bareiss(&mut big).expect("bigint elimination cannot overflow").0
}

/// Determinant of a square integer matrix.
pub fn det(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    if let Some(mut small) = to_small(rows) {
        if let Some((r, flip)) = bareiss(&mut small) {
            if r < n {
                return BigInt::zero();
            }
            let v = small[n - 1][n - 1];
            return BigInt::from(if flip { v.neg() } else { v });
        }
    }
    let mut big = rows.to_vec();
    let (r, flip) = bareiss(&mut big).expect("bigint elimination cannot overflow");
    if r < n {
        return BigInt::zero();
    }
    let v = big[n - 1][n - 1].clone();
    if flip {
        -v
    } else {
        v
    }
}

/// Lowest common multiple of the denominators.
pub fn common_denominator(values: &[Rational]) -> BigInt {
    values.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// The homogeneous integer row `L * (1, x_1, .., x_d)` with `L` the common
/// denominator of `x`. Proportional to `(1, x)`, so incidence tests agree.
pub fn homogeneous_row(x: &[Rational]) -> Vec<BigInt> {
    let l = common_denominator(x);
    let mut row = Vec::with_capacity(x.len() + 1);
    row.push(l.clone());
    for q in x {
        row.push(q.numer() * (&l / q.denom()));
    }
    row
}

/// Integer vector `(c_0, .., c_d)` with `c . row = 0` for every row of a
/// `d x (d+1)` matrix of rank `d`: the signed maximal minors.
pub fn kernel_vector(rows: &[Vec<BigInt>]) -> Vec<BigInt> {
    let cols = rows.first().map_or(0, Vec::len);
    (0..cols)
        .map(|skip| {
            let minor: Vec<Vec<BigInt>> = rows
                .iter()
                .map(|r| r.iter().enumerate().filter(|(j, _)| *j != skip).map(|(_, v)| v.clone()).collect())
                .collect();
            let m = det(&minor);
            if skip % 2 == 1 {
                -m
            } else {
                m
            }
        })
        .collect()
}

/// `sum a_i b_i` without allocation for the common small case.
pub fn dot_is_zero(a: &[BigInt], b: &[BigInt]) -> bool {
    let mut acc_small: Option<i128> = Some(0);
    for (x, y) in a.iter().zip(b) {
        acc_small = match (acc_small, x.to_i128(), y.to_i128()) {
            (Some(acc), Some(x), Some(y)) => x.checked_mul(y).and_then(|p| acc.checked_add(p)),
            _ => None,
        };
        if acc_small.is_none() {
            break;
        }
    }
    if let Some(v) = acc_small {
        return v == 0;
    }
    a.iter().zip(b).fold(BigInt::zero(), |acc, (x, y)| acc + x * y).is_zero()
}

/// Integer basis of `{c : row . c = 0 for every row}`, one vector per free
/// column of the reduced row echelon form, each scaled to coprime integers.
pub fn null_space(rows: &[Vec<BigInt>], cols: usize) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<Rational>> =
        rows.iter().map(|r| r.iter().map(|v| Rational::from_integer(v.clone())).collect()).collect();
    let mut pivots = Vec::new();
    for col in 0..cols {
        let row = pivots.len();
        let Some(p) = (row..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        m[row].iter_mut().for_each(|v| *v *= &inv);
        for i in 0..m.len() {
            if i != row && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in col..cols {
                    let delta = &f * &m[row][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivots.push(col);
        if pivots.len() == m.len() {
            break;
        }
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Rational::zero(); cols];
            v[free] = Rational::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[i][free].clone();
            }
            let l = common_denominator(&v);
            let ints: Vec<BigInt> = v.iter().map(|q| q.numer() * (&l / q.denom())).collect();
            let g = abs_gcd(&ints);
            ints.into_iter().map(|x| x / &g).collect()
        })
        .collect()
}

/// The Mersenne prime `2^61 - 1` used for residue fast paths.
pub const MODULUS: u64 = (1 << 61) - 1;

pub fn residue(v: &BigInt) -> u64 {
    v.mod_floor(&BigInt::from(MODULUS)).to_u64().expect("reduced below the modulus")
}

pub fn residues(row: &[BigInt]) -> Vec<u64> {
    row.iter().map(residue).collect()
}

/// `a . b mod MODULUS`; nonzero proves the integer dot product is nonzero.
pub fn dot_mod(a: &[u64], b: &[u64]) -> u64 {
    let m = MODULUS as u128;
    a.iter().zip(b).fold(0u128, |acc, (&x, &y)| (acc + x as u128 * y as u128) % m) as u64
}

pub(crate) fn abs_gcd(values: &[BigInt]) -> BigInt {
    values.iter().fold(BigInt::zero(), |g, v| g.gcd(&v.abs()))
}
