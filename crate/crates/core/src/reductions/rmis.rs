//! Regular Multicolored Independent Set to Line Clustering.
//!
//! Coordinates are exact integers with the centre of the construction at the
//! origin. With `c = (l + 1) d_s / 2` the four fixed lines are `y = +-c` and
//! `x = +-c`. The `n^2` stacks of the family `X` are kept structurally (as an
//! iterator of placements) because faithful instances have far too many to
//! store; everything else is materialised.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geometry::{Hyperplane, PointRecord, WeightedPointCloud};
use crate::scalar::{format_rational, Rational};

use super::graph::ColoredGraph;

/// Default cap on records or points materialised at once.
pub const DEFAULT_MATERIALIZE_CAP: u128 = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RmisConstants {
    pub p: BigInt,
    pub w: BigInt,
    pub d_s: BigInt,
    pub d_l: BigInt,
    /// Extra weight stacked on each of the eight frame corners.
    pub corner: BigInt,
    /// Allowance for the frame points in the budget.
    pub slack: BigInt,
}

impl RmisConstants {
    /// `p = n^10, W = n^30, d_s = n^40, d_l = n^90`, corners `n^90`, slack `n^7`.
    pub fn formula(n: usize) -> Self {
        let n = BigInt::from(n);
        Self {
            p: n.pow(10),
            w: n.pow(30),
            d_s: n.pow(40),
            d_l: n.pow(90),
            corner: n.pow(90),
            slack: n.pow(7),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RmisMode {
    /// Formula constants and the full list of side conditions.
    Faithful,
    /// Only `nu` even is required; constants default to the formula values.
    Relaxed(Option<RmisConstants>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RmisParameters {
    pub l: usize,
    pub nu: usize,
    pub n: usize,
    pub q: usize,
    pub constants: RmisConstants,
    pub faithful: bool,
}

/// `theta(i) = sum_{a<=i} (3(i-a))^2 + sum_{b>=i} (3(nu-b))^2`,
/// `phi = p l (nu-1) theta`, `phi' = p l nu theta`; index `i - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaTables {
    pub theta: Vec<BigInt>,
    pub phi: Vec<BigInt>,
    pub phi_prime: Vec<BigInt>,
}

impl ThetaTables {
    pub fn new(nu: usize, l: usize, p: &BigInt) -> Self {
        let theta: Vec<BigInt> = (1..=nu as u128)
            .map(|i| {
                let left: u128 = (1..=i).map(|a| 9 * (i - a) * (i - a)).sum();
                let right: u128 = (i..=nu as u128).map(|b| 9 * (nu as u128 - b) * (nu as u128 - b)).sum();
                BigInt::from(left + right)
            })
            .collect();
        let base = p * BigInt::from(l);
        let phi = theta.iter().map(|t| &base * BigInt::from(nu - 1) * t).collect();
        let phi_prime = theta.iter().map(|t| &base * BigInt::from(nu) * t).collect();
        Self { theta, phi, phi_prime }
    }
}

/// Exact positions of the construction's lines; indices are 0-based
/// (`[colour][vertex within colour]`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineTables {
    /// Heights of the horizontal lines `h`.
    pub h: Vec<Vec<BigInt>>,
    /// Abscissae of the vertical lines `v`.
    pub v: Vec<Vec<BigInt>>,
    /// Abscissae of the vertical lines `s` (one left of `v`).
    pub s: Vec<Vec<BigInt>>,
    /// `c`: the fixed lines are `y = +-c` and `x = +-c`.
    pub c: BigInt,
}

/// An integer point with multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoint {
    pub x: BigInt,
    pub y: BigInt,
    pub mult: BigUint,
}

impl IntPoint {
    fn to_record(&self) -> PointRecord<Rational> {
        PointRecord {
            coords: vec![Rational::from_integer(self.x.clone()), Rational::from_integer(self.y.clone())],
            mult: self.mult.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XKind {
    /// On the line `s` of the column vertex.
    S,
    /// On the line `v` of the column vertex.
    V,
}

/// A stack of `p` points of `X` at the crossing of the horizontal line of
/// `row` and the `kind` line of `col`; vertices as `(colour, index)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct XPlacement {
    pub row: (usize, usize),
    pub col: (usize, usize),
    pub kind: XKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxisLine {
    /// `y = value`
    Horizontal(Rational),
    /// `x = value`
    Vertical(Rational),
}

impl AxisLine {
    pub fn from_hyperplane(h: &Hyperplane) -> Result<Self> {
        if h.dim() != 2 {
            return Err(Error::NotPlanar(h.dim()));
        }
        let c = h.coeffs();
        let value = |a: &BigInt| Rational::new(-c[0].clone(), a.clone());
        match (c[1].is_zero(), c[2].is_zero()) {
            (false, true) => Ok(AxisLine::Vertical(value(&c[1]))),
            (true, false) => Ok(AxisLine::Horizontal(value(&c[2]))),
            _ => Err(Error::NotAxisAligned),
        }
    }

    pub fn to_hyperplane(&self) -> Hyperplane {
        match self {
            AxisLine::Horizontal(y) => Hyperplane::axis(2, 1, y),
            AxisLine::Vertical(x) => Hyperplane::axis(2, 0, x),
        }
        .expect("planar axis")
    }

    pub fn dist2(&self, x: &Rational, y: &Rational) -> Rational {
        let d = match self {
            AxisLine::Horizontal(v) => y - v,
            AxisLine::Vertical(v) => x - v,
        };
        &d * &d
    }
}

#[derive(Debug, Clone)]
pub struct RmisInstance {
    pub graph: ColoredGraph,
    pub params: RmisParameters,
    pub theta: ThetaTables,
    pub k: usize,
    pub budget: BigInt,
    pub lines: LineTables,
    /// Frame grids `G_h` then `G_v`; corner stacks merged into their grid point.
    pub frame: Vec<IntPoint>,
    pub z_v: Vec<IntPoint>,
    pub z_h: Vec<IntPoint>,
}

fn pow(n: usize, e: u32) -> BigInt {
    BigInt::from(n).pow(e)
}

/// `B = slack + (n-l)W + l sum_j (W + phi(j)) - l W + l p (n - nu + 1 - q - l)`.
pub fn budget_formula(params: &RmisParameters, theta: &ThetaTables) -> BigInt {
    let c = &params.constants;
    let (l, n, nu, q) = (
        BigInt::from(params.l),
        BigInt::from(params.n),
        BigInt::from(params.nu),
        BigInt::from(params.q),
    );
    let sum: BigInt = theta.phi.iter().map(|phi| &c.w + phi).sum();
    &c.slack + (&n - &l) * &c.w + &l * sum - &l * &c.w + &l * &c.p * (&n - &nu + 1 - &q - &l)
}

fn validate_constants(c: &RmisConstants, l: usize, n: usize, nu: usize) -> Result<()> {
    let bad = |m: &str| Err(Error::InvalidParameters(m.into()));
    if c.p < BigInt::one() || c.w.is_negative() || c.corner.is_negative() || c.slack.is_negative() {
        return bad("need p >= 1 and W, corner, slack >= 0");
    }
    let two = BigInt::from(2);
    if (&c.d_s % &two).is_positive() || (&c.d_l % &two).is_positive() {
        return bad("d_s and d_l must be even");
    }
    let spread = BigInt::from(20) * pow(n, 2) * BigInt::from(nu) + BigInt::from(6 * nu + 4);
    if c.d_s <= spread {
        return bad("d_s must exceed 20 n^2 nu + 6 nu + 4");
    }
    if c.d_l <= BigInt::from(l + 2) * &c.d_s {
        return bad("d_l must exceed (l + 2) d_s");
    }
    Ok(())
}

fn split4(total: &BigInt) -> [BigUint; 4] {
    let t = total.to_biguint().expect("nonnegative weight");
    let base = &t / 4u32;
    let rem = (&t % 4u32).to_usize().expect("small");
    std::array::from_fn(|i| if i < rem { &base + 1u32 } else { base.clone() })
}

pub fn rmis_to_line_clustering(g: &ColoredGraph, mode: &RmisMode) -> Result<RmisInstance> {
    let colors = g.colors().ok_or_else(|| Error::InvalidGraph("graph has no colour classes".into()))?;
    let l = colors.len();
    let nu = colors[0].len();
    let n = g.n();
    if l < 2 {
        return Err(Error::InvalidGraph("need at least two colour classes".into()));
    }
    let q = g.uniform_degree().ok_or_else(|| Error::InvalidGraph("graph is not regular".into()))?;
    if nu % 2 != 0 {
        return Err(Error::InvalidParameters("nu must be even".into()));
    }
    let (constants, faithful) = match mode {
        RmisMode::Faithful => {
            if nu % 4 != 0 || nu <= l.pow(3) || l <= 10 {
                return Err(Error::InvalidParameters(
                    "faithful mode needs nu divisible by 4, nu > l^3 and l > 10".into(),
                ));
            }
            (RmisConstants::formula(n), true)
        }
        RmisMode::Relaxed(custom) => {
            let c = custom.clone().unwrap_or_else(|| RmisConstants::formula(n));
            validate_constants(&c, l, n, nu)?;
            (c, false)
        }
    };
    let params = RmisParameters { l, nu, n, q, constants, faithful };
    let theta = ThetaTables::new(nu, l, &params.constants.p);
    let budget = budget_formula(&params, &theta);
    let k = 2 * l + 4;
    let c = &params.constants;

    let half_span = BigInt::from(l + 1) * &c.d_s / 2;
    let gap_half = (&c.d_l + BigInt::from(l + 1) * &c.d_s) / 2;
    let rows = l + 2;
    let cols = 2 * l + 6;
    let half = l + 3;
    // G_h row heights (top first) and the far-away column abscissae.
    let row_y = |r: usize| &half_span - BigInt::from(r - 1) * &c.d_s;
    let far = |idx: usize| -> BigInt {
        if idx <= half {
            -&gap_half - BigInt::from(half - idx) * &c.d_l
        } else {
            &gap_half + BigInt::from(idx - half - 1) * &c.d_l
        }
    };
    let col_x = |cidx: usize| -&half_span + BigInt::from(cidx - 1) * &c.d_s;
    let corner_mult = |a: usize, b: usize, na: usize, nb: usize| -> BigUint {
        let is_corner = (a == 1 || a == na) && (b == 1 || b == nb);
        if is_corner {
            (&c.corner + BigInt::one()).to_biguint().expect("nonnegative")
        } else {
            BigUint::one()
        }
    };
    let mut frame = Vec::with_capacity(2 * rows * cols);
    for r in 1..=rows {
        for col in 1..=cols {
            frame.push(IntPoint { x: far(col), y: row_y(r), mult: corner_mult(r, col, rows, cols) });
        }
    }
    for r in 1..=cols {
        for col in 1..=rows {
            frame.push(IntPoint { x: col_x(col), y: -far(r), mult: corner_mult(r, col, cols, rows) });
        }
    }

    let centre = BigInt::from(nu / 2);
    let spacing = BigInt::from(10) * pow(n, 2);
    let h: Vec<Vec<BigInt>> = (0..l)
        .map(|i| (1..=nu).map(|j| row_y(i + 2) + BigInt::from(3) * (&centre - BigInt::from(j))).collect())
        .collect();
    let v: Vec<Vec<BigInt>> = (0..l)
        .map(|i| (1..=nu).map(|j| col_x(i + 2) + &spacing * (BigInt::from(j) - &centre)).collect())
        .collect();
    let s: Vec<Vec<BigInt>> = v.iter().map(|row| row.iter().map(|x| x - 1).collect()).collect();

    let mut z_v = Vec::with_capacity(4 * n);
    let mut z_h = Vec::with_capacity(4 * n);
    let ys: [BigInt; 4] = [&half_span + 1, &half_span - 1, -&half_span + 1, -&half_span - 1];
    let xs: [BigInt; 4] = [-&half_span - 1, -&half_span + 1, &half_span - 1, &half_span + 1];
    for i in 0..l {
        for j in 0..nu {
            for (y, m) in ys.iter().zip(split4(&c.w)) {
                if !m.is_zero() {
                    z_v.push(IntPoint { x: s[i][j].clone(), y: y.clone(), mult: m });
                }
            }
            let weight = &c.w + &theta.phi[j];
            for (x, m) in xs.iter().zip(split4(&weight)) {
                if !m.is_zero() {
                    z_h.push(IntPoint { x: x.clone(), y: h[i][j].clone(), mult: m });
                }
            }
        }
    }
    Ok(RmisInstance {
        graph: g.clone(),
        params,
        theta,
        k,
        budget,
        lines: LineTables { h, v, s, c: half_span },
        frame,
        z_v,
        z_h,
    })
}

impl RmisInstance {
    pub fn vertex(&self, colour: usize, index: usize) -> usize {
        self.graph.colors().expect("coloured")[colour][index]
    }

    /// Which line of the column vertex carries the stack for this pair.
    pub fn x_kind(&self, row: (usize, usize), col: (usize, usize)) -> XKind {
        if row.0 == col.0 {
            if row.1 == col.1 {
                XKind::V
            } else {
                XKind::S
            }
        } else if self.graph.adjacent(self.vertex(row.0, row.1), self.vertex(col.0, col.1)) {
            XKind::S
        } else {
            XKind::V
        }
    }

    pub fn x_placements(&self) -> impl Iterator<Item = XPlacement> + '_ {
        let (l, nu) = (self.params.l, self.params.nu);
        let all = move || (0..l).flat_map(move |i| (0..nu).map(move |j| (i, j)));
        all().flat_map(move |row| all().map(move |col| XPlacement { row, col, kind: self.x_kind(row, col) }))
    }

    pub fn x_point(&self, x: &XPlacement) -> IntPoint {
        let table = match x.kind {
            XKind::S => &self.lines.s,
            XKind::V => &self.lines.v,
        };
        IntPoint {
            x: table[x.col.0][x.col.1].clone(),
            y: self.lines.h[x.row.0][x.row.1].clone(),
            mult: self.params.constants.p.to_biguint().expect("p >= 1"),
        }
    }

    pub fn record_count(&self) -> u128 {
        (self.frame.len() + self.z_v.len() + self.z_h.len()) as u128 + (self.params.n as u128).pow(2)
    }

    /// Total weight `N`, computed structurally.
    pub fn total_weight(&self) -> BigUint {
        let listed: BigUint = self.frame.iter().chain(&self.z_v).chain(&self.z_h).map(|p| &p.mult).sum();
        let p = self.params.constants.p.to_biguint().expect("p >= 1");
        listed + p * BigUint::from(self.params.n).pow(2)
    }

    /// Every record in cloud order: frame, `Z_v`, `Z_h`, then `X`.
    pub fn for_each_record(&self, mut f: impl FnMut(&IntPoint)) {
        for p in self.frame.iter().chain(&self.z_v).chain(&self.z_h) {
            f(p);
        }
        for x in self.x_placements() {
            f(&self.x_point(&x));
        }
    }

    pub fn cloud(&self, cap: u128) -> Result<WeightedPointCloud<Rational>> {
        let count = self.record_count();
        if count > cap {
            return Err(Error::too_large("instance materialisation", count, cap));
        }
        let mut records = Vec::with_capacity(count as usize);
        self.for_each_record(|p| records.push(p.to_record()));
        WeightedPointCloud::new(2, records)
    }

    fn check_selection(&self, selection: &[usize]) -> Result<()> {
        if selection.len() != self.params.l {
            return Err(Error::Selection(format!("need {} indices, got {}", self.params.l, selection.len())));
        }
        if let Some(j) = selection.iter().find(|&&j| j >= self.params.nu) {
            return Err(Error::Selection(format!("index {j} not below nu = {}", self.params.nu)));
        }
        Ok(())
    }

    /// Whether the chosen vertices (one per colour) are pairwise nonadjacent.
    pub fn is_independent_selection(&self, selection: &[usize]) -> Result<bool> {
        self.check_selection(selection)?;
        let vs: Vec<usize> = selection.iter().enumerate().map(|(i, &j)| self.vertex(i, j)).collect();
        Ok(vs.iter().enumerate().all(|(a, &u)| vs[a + 1..].iter().all(|&w| !self.graph.adjacent(u, w))))
    }

    pub fn meta_json(&self) -> Value {
        let table = |t: &Vec<Vec<BigInt>>| -> Value {
            json!(t.iter().map(|row| row.iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>())
        };
        let c = &self.lines.c;
        let mut meta = json!({
            "lines": {
                "h": table(&self.lines.h),
                "v": table(&self.lines.v),
                "s": table(&self.lines.s),
                "fixed": {
                    "horizontal": [c.to_string(), (-c).to_string()],
                    "vertical": [(-c).to_string(), c.to_string()],
                },
            },
            "x_family": "stacks of p points at every (row vertex, column vertex) pair; stored structurally",
            "record_count": self.record_count().to_string(),
            "total_weight": self.total_weight().to_string(),
        });
        if !self.params.faithful {
            meta["warning"] = json!("relaxed parameters: formula constants and side conditions are not enforced");
        }
        meta
    }

    pub fn params_json(&self) -> Value {
        let c = &self.params.constants;
        json!({
            "l": self.params.l,
            "nu": self.params.nu,
            "n": self.params.n,
            "q": self.params.q,
            "p": c.p.to_string(),
            "W": c.w.to_string(),
            "d_s": c.d_s.to_string(),
            "d_l": c.d_l.to_string(),
            "corner": c.corner.to_string(),
            "slack": c.slack.to_string(),
            "theta": self.theta.theta.iter().map(ToString::to_string).collect::<Vec<_>>(),
        })
    }
}

/// The 4 fixed lines, then `h` and `s` of the selected vertex of every colour.
pub fn independent_set_to_lines(inst: &RmisInstance, selection: &[usize]) -> Result<Vec<AxisLine>> {
    inst.check_selection(selection)?;
    let c = Rational::from_integer(inst.lines.c.clone());
    let mut lines = vec![
        AxisLine::Horizontal(c.clone()),
        AxisLine::Horizontal(-c.clone()),
        AxisLine::Vertical(-c.clone()),
        AxisLine::Vertical(c),
    ];
    for (i, &j) in selection.iter().enumerate() {
        lines.push(AxisLine::Horizontal(Rational::from_integer(inst.lines.h[i][j].clone())));
    }
    for (i, &j) in selection.iter().enumerate() {
        lines.push(AxisLine::Vertical(Rational::from_integer(inst.lines.s[i][j].clone())));
    }
    Ok(lines)
}

fn integer_lines(lines: &[AxisLine]) -> Option<(Vec<BigInt>, Vec<BigInt>)> {
    let mut hs = Vec::new();
    let mut vs = Vec::new();
    for line in lines {
        match line {
            AxisLine::Horizontal(y) if y.is_integer() => hs.push(y.to_integer()),
            AxisLine::Vertical(x) if x.is_integer() => vs.push(x.to_integer()),
            _ => return None,
        }
    }
    Some((hs, vs))
}

fn min_abs_gap(value: &BigInt, targets: &[BigInt]) -> Option<BigInt> {
    targets.iter().map(|t| (value - t).abs()).min()
}

/// `sum mult * min_line dist^2` over the instance, exactly.
pub fn exact_solution_cost(inst: &RmisInstance, lines: &[AxisLine]) -> Result<Rational> {
    if lines.is_empty() {
        return Err(Error::EmptyFlatList);
    }
    if let Some((hs, vs)) = integer_lines(lines) {
        let mut total = BigInt::zero();
        inst.for_each_record(|p| {
            let dy = min_abs_gap(&p.y, &hs);
            let dx = min_abs_gap(&p.x, &vs);
            let d = match (dy, dx) {
                (Some(a), Some(b)) => a.min(b),
                (Some(a), None) | (None, Some(a)) => a,
                (None, None) => unreachable!("nonempty line list"),
            };
            total += &d * &d * BigInt::from(p.mult.clone());
        });
        return Ok(Rational::from_integer(total));
    }
    let mut total = Rational::zero();
    inst.for_each_record(|p| {
        let rec = p.to_record();
        total += record_cost(&rec, lines);
    });
    Ok(total)
}

fn record_cost(rec: &PointRecord<Rational>, lines: &[AxisLine]) -> Rational {
    let best = lines
        .iter()
        .map(|l| l.dist2(&rec.coords[0], &rec.coords[1]))
        .min()
        .expect("nonempty line list");
    best * Rational::from_integer(BigInt::from(rec.mult.clone()))
}

/// Exact cost of axis-parallel lines on any planar rational cloud.
pub fn axis_cost(cloud: &WeightedPointCloud<Rational>, lines: &[AxisLine]) -> Result<Rational> {
    if cloud.dim() != 2 {
        return Err(Error::NotPlanar(cloud.dim()));
    }
    if lines.is_empty() {
        return Err(Error::EmptyFlatList);
    }
    Ok(cloud.records().iter().map(|r| record_cost(r, lines)).sum())
}

/// Replaces every stack of `m` coincident points by `m` distinct points
/// shifted right by `t / (3 B N^2)`, `t = 0..m`; returns them and `B + 1`.
pub fn desanitize_cloud(
    cloud: &WeightedPointCloud<Rational>,
    budget: &BigInt,
    cap: u128,
) -> Result<(WeightedPointCloud<Rational>, BigInt)> {
    if !budget.is_positive() {
        return Err(Error::InvalidParameters("budget must be positive".into()));
    }
    let total = cloud.total_weight();
    if total > BigUint::from(cap) {
        return Err(Error::too_large("desanitisation", total, cap));
    }
    let n = BigInt::from(total);
    let denom = BigInt::from(3) * budget * &n * &n;
    let mut order: Vec<&[Rational]> = Vec::new();
    let mut weight: HashMap<&[Rational], BigUint> = HashMap::new();
    for rec in cloud.records() {
        let slot = weight.entry(&rec.coords).or_insert_with(|| {
            order.push(&rec.coords);
            BigUint::zero()
        });
        *slot += &rec.mult;
    }
    let mut points = Vec::new();
    for pos in order {
        let m = weight[pos].to_u64().expect("bounded by cap");
        for t in 0..m {
            let mut coords = pos.to_vec();
            coords[0] += Rational::new(BigInt::from(t), denom.clone());
            points.push(coords);
        }
    }
    Ok((WeightedPointCloud::from_points(cloud.dim(), points)?, budget + 1))
}

pub fn desanitize_multiset(inst: &RmisInstance, cap: u128) -> Result<(WeightedPointCloud<Rational>, BigInt)> {
    let cloud = inst.cloud(cap)?;
    desanitize_cloud(&cloud, &inst.budget, cap)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditLine {
    pub name: String,
    pub expected: String,
    pub found: String,
    pub pass: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AuditReport {
    pub lines: Vec<AuditLine>,
}

impl AuditReport {
    fn check(&mut self, name: &str, expected: impl ToString, found: impl ToString, pass: bool) {
        self.lines.push(AuditLine { name: name.into(), expected: expected.to_string(), found: found.to_string(), pass });
    }

    fn same<T: PartialEq + ToString>(&mut self, name: &str, expected: T, found: T) {
        let pass = expected == found;
        self.check(name, expected, found, pass);
    }

    pub fn all_pass(&self) -> bool {
        self.lines.iter().all(|l| l.pass)
    }

    pub fn to_json(&self) -> Value {
        json!(self
            .lines
            .iter()
            .map(|l| json!({"check": l.name, "expected": l.expected, "found": l.found, "pass": l.pass}))
            .collect::<Vec<_>>())
    }
}

/// Count identities of the construction, tallied from the placements and
/// records themselves.
pub fn audit_counts(inst: &RmisInstance) -> AuditReport {
    let prm = &inst.params;
    let c = &prm.constants;
    let (l, nu, n, q) = (prm.l, prm.nu, prm.n, prm.q);
    let mut report = AuditReport::default();
    report.same("k = 2l + 4", 2 * l + 4, inst.k);

    let flat = |(i, j): (usize, usize)| i * nu + j;
    let zeros = || (vec![0u64; n], vec![0u64; n], vec![0u64; n]);
    let (on_h, on_s, on_v) = (0..n)
        .into_par_iter()
        .fold(zeros, |(mut on_h, mut on_s, mut on_v), row| {
            let row = (row / nu, row % nu);
            for i in 0..l {
                for j in 0..nu {
                    on_h[flat(row)] += 1;
                    match inst.x_kind(row, (i, j)) {
                        XKind::S => on_s[flat((i, j))] += 1,
                        XKind::V => on_v[flat((i, j))] += 1,
                    }
                }
            }
            (on_h, on_s, on_v)
        })
        .reduce(zeros, |mut a, b| {
            for (x, y) in [(&mut a.0, b.0), (&mut a.1, b.1), (&mut a.2, b.2)] {
                x.iter_mut().zip(y).for_each(|(u, v)| *u += v);
            }
            a
        });
    let p = &c.p;
    let uniform = |counts: &[u64], want: BigInt| -> (bool, String) {
        let bad = counts.iter().map(|&k| p * BigInt::from(k)).find(|w| *w != want);
        match bad {
            None => (true, want.to_string()),
            Some(w) => (false, w.to_string()),
        }
    };
    let (ok, found) = uniform(&on_h, p * BigInt::from(n));
    report.check("X weight on every h line = n p", p * BigInt::from(n), found, ok);
    let want_s: BigInt = p * (BigInt::from(q + nu) - 1);
    let (ok, found) = uniform(&on_s, want_s.clone());
    report.check("X weight on every s line = (q + nu - 1) p", want_s, found, ok);
    let want_v: BigInt = p * (BigInt::from(n) - BigInt::from(q + nu) + 1);
    let (ok, found) = uniform(&on_v, want_v.clone());
    report.check("X weight on every v line = (n - q - nu + 1) p", want_v, found, ok);

    let mut zv_by_x: HashMap<&BigInt, BigUint> = HashMap::new();
    for z in &inst.z_v {
        *zv_by_x.entry(&z.x).or_default() += &z.mult;
    }
    let w_u = c.w.to_biguint().unwrap_or_default();
    let zv_ok = inst.lines.s.iter().flatten().all(|x| zv_by_x.get(x).cloned().unwrap_or_default() == w_u);
    report.check("Z_v weight on every s line = W", &w_u, if zv_ok { w_u.to_string() } else { "mismatch".into() }, zv_ok);

    let weight = |pts: &[IntPoint]| -> BigUint { pts.iter().map(|p| &p.mult).sum() };
    report.same("|Z_v| = n W", BigInt::from(n) * &c.w, BigInt::from(weight(&inst.z_v)));
    let zh_expected = BigInt::from(l) * inst.theta.phi.iter().map(|phi| &c.w + phi).sum::<BigInt>();
    report.same("|Z_h| = l sum_j (W + phi(j))", zh_expected, BigInt::from(weight(&inst.z_h)));
    let k = BigInt::from(inst.k);
    let f_expected = BigInt::from(8) * &c.corner + &k * &k + BigInt::from(2) * &k;
    report.same("|F| = 8 corner + k^2 + 2k", f_expected, BigInt::from(weight(&inst.frame)));
    let distinct_f: std::collections::HashSet<(&BigInt, &BigInt)> = inst.frame.iter().map(|p| (&p.x, &p.y)).collect();
    report.same("F positions = k^2 + 2k", inst.k * inst.k + 2 * inst.k, distinct_f.len());

    let theta_ok = inst.theta.theta.iter().all(|t| *t > BigInt::from(nu * nu));
    report.check("theta(i) > nu^2 for all i", "true", theta_ok, theta_ok);
    report.same("B matches the budget formula", budget_formula(prm, &inst.theta), inst.budget.clone());
    if prm.faithful {
        let cap = pow(n, 32);
        let ok = inst.budget <= cap;
        report.check("B <= n^32", format!("<= {cap}"), &inst.budget, ok);
    }
    report
}

/// Exhaustive search for a multicoloured independent selection.
pub fn find_independent_selection(inst: &RmisInstance) -> Option<Vec<usize>> {
    let (l, nu) = (inst.params.l, inst.params.nu);
    let mut sel = vec![0; l];
    loop {
        if inst.is_independent_selection(&sel).unwrap_or(false) {
            return Some(sel);
        }
        let mut i = 0;
        loop {
            if i == l {
                return None;
            }
            sel[i] += 1;
            if sel[i] < nu {
                break;
            }
            sel[i] = 0;
            i += 1;
        }
    }
}

/// Human-readable form of an exact rational (`num/den`).
pub fn show(q: &Rational) -> String {
    format_rational(q)
}
