//! Self-contained instance documents for the reductions and exact witness
//! checks against them.
//!
//! A document records enough to rebuild its instance (graph plus parameters),
//! so verification rebuilds it and compares before judging the witness.

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::clustering::{is_voronoi_consistent, ClusteringSolution};
use crate::cover::verify_cover;
use crate::error::{Error, Result};
use crate::geometry::{total_cost, Hyperplane, WeightedPointCloud};
use crate::io::{cloud_from_json, cloud_to_json, hyperplanes_from_json, solution_from_json};
use crate::reductions::dominating::{
    cover_to_dominating_set, dominating_set_to_cover_witness, ds_to_hyperplane_cover, DsOptions, VandermondeInstance,
};
use crate::reductions::graph::ColoredGraph;
use crate::reductions::rmis::{
    audit_counts, exact_solution_cost, independent_set_to_lines, rmis_to_line_clustering, AxisLine, RmisConstants,
    RmisInstance, RmisMode,
};
use crate::scalar::{format_rational, parse_rational, Rational, RealScalar};

pub const KIND_COVER: &str = "hyperplane_cover";
pub const KIND_LINES: &str = "line_clustering";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    fn push(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), pass, detail: detail.into() });
    }

    pub fn all_pass(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "pass": self.all_pass(),
            "checks": self.checks.iter().map(|c| json!({"check": c.name, "pass": c.pass, "detail": c.detail})).collect::<Vec<_>>(),
        })
    }

    /// One `name: PASS|FAIL (detail)` line per check.
    pub fn to_text(&self) -> String {
        self.checks
            .iter()
            .map(|c| format!("{}: {} ({})\n", c.name, if c.pass { "PASS" } else { "FAIL" }, c.detail))
            .collect()
    }
}

fn field<'a>(doc: &'a Value, key: &str) -> Result<&'a Value> {
    doc.get(key).ok_or_else(|| Error::Parse(format!("instance: missing field {key:?}")))
}

fn str_field<'a>(doc: &'a Value, key: &str) -> Result<&'a str> {
    field(doc, key)?.as_str().ok_or_else(|| Error::Parse(format!("instance: {key} must be a string")))
}

fn int_field(doc: &Value, key: &str) -> Result<BigInt> {
    let q = parse_rational(str_field(doc, key)?)?;
    if !q.is_integer() {
        return Err(Error::Parse(format!("instance: {key} must be an integer")));
    }
    Ok(q.to_integer())
}

fn index_list(v: &Value, what: &str) -> Result<Vec<usize>> {
    v.as_array()
        .ok_or_else(|| Error::Parse(format!("{what} must be a list")))?
        .iter()
        .map(|x| x.as_u64().map(|x| x as usize).ok_or_else(|| Error::Parse(format!("{what}: bad index {x}"))))
        .collect()
}

/// Reads `p, W, d_s, d_l, corner, slack` given as integer strings, the
/// layout written by [`RmisInstance::params_json`].
pub fn constants_from_json(v: &Value) -> Result<RmisConstants> {
    Ok(RmisConstants {
        p: int_field(v, "p")?,
        w: int_field(v, "W")?,
        d_s: int_field(v, "d_s")?,
        d_l: int_field(v, "d_l")?,
        corner: int_field(v, "corner")?,
        slack: int_field(v, "slack")?,
    })
}

pub fn ds_instance_document(inst: &VandermondeInstance, options: &DsOptions) -> Value {
    json!({
        "kind": KIND_COVER,
        "k": inst.k.to_string(),
        "enforce_wlog": options.enforce_wlog,
        "graph": inst.graph.to_json(),
        "graph_hash": inst.graph.hash(),
        "meta": inst.meta_json(),
        "cloud": cloud_to_json(&inst.cloud),
    })
}

/// The cloud is embedded only when it has at most `cap` records; the audit
/// of the count identities is always included.
pub fn rmis_instance_document(inst: &RmisInstance, cap: u128) -> Result<Value> {
    let cloud = if inst.record_count() <= cap { cloud_to_json(&inst.cloud(cap)?) } else { Value::Null };
    Ok(json!({
        "kind": KIND_LINES,
        "faithful": inst.params.faithful,
        "k": inst.k.to_string(),
        "B": inst.budget.to_string(),
        "graph": inst.graph.to_json(),
        "graph_hash": inst.graph.hash(),
        "params": inst.params_json(),
        "meta": inst.meta_json(),
        "audit": audit_counts(inst).to_json(),
        "cloud": cloud,
    }))
}

fn graph_of(doc: &Value, report: &mut VerifyReport) -> Result<ColoredGraph> {
    let graph = ColoredGraph::from_json(field(doc, "graph")?)?;
    let hash = str_field(doc, "graph_hash")?;
    report.push("graph hash matches", graph.hash() == hash, graph.hash());
    Ok(graph)
}

fn embedded_cloud(doc: &Value) -> Result<Option<WeightedPointCloud<Rational>>> {
    match doc.get("cloud") {
        None | Some(Value::Null) => Ok(None),
        Some(c) => cloud_from_json(c)?.into_rational().map(Some),
    }
}

pub fn rebuild_ds(doc: &Value, report: &mut VerifyReport) -> Result<VandermondeInstance> {
    let graph = graph_of(doc, report)?;
    let k: usize = str_field(doc, "k")?.parse().map_err(|_| Error::Parse("instance: bad k".into()))?;
    let options = DsOptions { enforce_wlog: field(doc, "enforce_wlog")?.as_bool().unwrap_or(true) };
    let inst = ds_to_hyperplane_cover(&graph, k, &options)?;
    let same = embedded_cloud(doc)?.is_none_or(|c| c == inst.cloud);
    report.push("cloud rebuilds from the graph", same, format!("{} points", inst.cloud.len()));
    Ok(inst)
}

pub fn rebuild_rmis(doc: &Value, report: &mut VerifyReport) -> Result<RmisInstance> {
    let graph = graph_of(doc, report)?;
    let faithful = field(doc, "faithful")?.as_bool().ok_or_else(|| Error::Parse("instance: bad faithful".into()))?;
    let mode = if faithful {
        RmisMode::Faithful
    } else {
        RmisMode::Relaxed(Some(constants_from_json(field(doc, "params")?)?))
    };
    let inst = rmis_to_line_clustering(&graph, &mode)?;
    let budget = int_field(doc, "B")?;
    let k = int_field(doc, "k")?;
    report.push(
        "k and B rebuild from the graph",
        budget == inst.budget && k == BigInt::from(inst.k),
        format!("k = {}, B = {}", inst.k, inst.budget),
    );
    if let Some(cloud) = embedded_cloud(doc)? {
        let same = inst.record_count() == cloud.len() as u128 && inst.cloud(inst.record_count())? == cloud;
        report.push("cloud rebuilds from the graph", same, format!("{} records", cloud.len()));
    }
    Ok(inst)
}

fn verify_ds(doc: &Value, witness: &Value) -> Result<VerifyReport> {
    let mut report = VerifyReport::default();
    let inst = rebuild_ds(doc, &mut report)?;
    if let Some(set) = witness.get("dominating_set") {
        let set = index_list(set, "dominating_set")?;
        let dominating = inst.graph.is_dominating(&set);
        report.push("set is dominating", dominating, format!("{set:?}"));
        report.push("set size <= k", set.len() <= inst.k, format!("{} <= {}", set.len(), inst.k));
        if dominating {
            let planes = dominating_set_to_cover_witness(&inst, &set)?;
            report.push("planes x_v = 1 cover every point", verify_cover(&inst.cloud, &planes)?, format!("{} planes", planes.len()));
        }
        return Ok(report);
    }
    let planes = hyperplanes_from_json(witness)?;
    report.push("at most k hyperplanes", planes.len() <= inst.k, format!("{} <= {}", planes.len(), inst.k));
    let covers = verify_cover(&inst.cloud, &planes)?;
    report.push("hyperplanes cover every point", covers, format!("{} points", inst.cloud.len()));
    if covers {
        let set = cover_to_dominating_set(&inst, &planes)?;
        let ok = inst.graph.is_dominating(&set) && set.len() <= inst.k;
        report.push("cover maps back to a dominating set", ok, format!("{set:?}"));
    }
    Ok(report)
}

/// `(a x + b y + c)^2 / (a^2 + b^2)` summed over the instance, for lines
/// that need not be axis-parallel.
fn general_line_cost(inst: &RmisInstance, planes: &[Hyperplane]) -> Result<Rational> {
    for h in planes {
        if h.dim() != 2 {
            return Err(Error::NotPlanar(h.dim()));
        }
    }
    let mut total = Rational::zero();
    inst.for_each_record(|p| {
        let best = planes
            .iter()
            .map(|h| {
                let c = h.coeffs();
                let v = &c[0] + &c[1] * &p.x + &c[2] * &p.y;
                Rational::new(&v * &v, &c[1] * &c[1] + &c[2] * &c[2])
            })
            .min()
            .expect("nonempty line list");
        total += best * Rational::from_integer(BigInt::from(p.mult.clone()));
    });
    Ok(total)
}

fn verify_rmis(doc: &Value, witness: &Value) -> Result<VerifyReport> {
    let mut report = VerifyReport::default();
    let inst = rebuild_rmis(doc, &mut report)?;
    let cost = if let Some(sel) = witness.get("selection") {
        let sel = index_list(sel, "selection")?;
        let independent = inst.is_independent_selection(&sel)?;
        report.push("selection is multicoloured independent", independent, format!("{sel:?}"));
        exact_solution_cost(&inst, &independent_set_to_lines(&inst, &sel)?)?
    } else {
        let planes = hyperplanes_from_json(witness)?;
        if planes.is_empty() {
            return Err(Error::EmptyFlatList);
        }
        report.push("at most k lines", planes.len() <= inst.k, format!("{} <= {}", planes.len(), inst.k));
        match planes.iter().map(AxisLine::from_hyperplane).collect::<Result<Vec<_>>>() {
            Ok(lines) => exact_solution_cost(&inst, &lines)?,
            Err(Error::NotAxisAligned) => general_line_cost(&inst, &planes)?,
            Err(e) => return Err(e),
        }
    };
    let budget = Rational::from_integer(inst.budget.clone());
    report.push("cost <= B", cost <= budget, format!("{} <= {}", format_rational(&cost), inst.budget));
    Ok(report)
}

fn verify_cloud_cover(cloud: &WeightedPointCloud<Rational>, witness: &Value) -> Result<VerifyReport> {
    let mut report = VerifyReport::default();
    let planes = hyperplanes_from_json(witness)?;
    if let Some(k) = witness.get("k").and_then(Value::as_u64) {
        report.push("at most k hyperplanes", planes.len() as u64 <= k, format!("{} <= {k}", planes.len()));
    }
    report.push("hyperplanes cover every point", verify_cover(cloud, &planes)?, format!("{} points", cloud.len()));
    Ok(report)
}

fn verify_clustering<S: RealScalar>(
    cloud: &WeightedPointCloud<S>,
    witness: &Value,
    rel_tol: f64,
) -> Result<VerifyReport> {
    let mut report = VerifyReport::default();
    let sol: ClusteringSolution<S> = solution_from_json(witness, rel_tol)?;
    let cost = total_cost(cloud, &sol.flats)?;
    let tol = S::from_f64(rel_tol).unwrap();
    let scale = cost.abs().max(S::one());
    report.push(
        "claimed cost matches",
        (cost - sol.cost).abs() <= tol * scale,
        format!("recomputed {}", cost.to_json()),
    );
    report.push("assignment is nearest-flat", is_voronoi_consistent(cloud, &sol, rel_tol * scale.to_f64().unwrap_or(1.0)), "");
    if let Some(b) = witness.get("budget") {
        let b = S::from_json(b)?;
        report.push("cost <= budget", cost <= b, format!("{} <= {}", cost.to_json(), b.to_json()));
    }
    Ok(report)
}

/// Checks `witness` against `instance`. Instances are reduction documents
/// (by `kind`) or plain point clouds; witnesses are a dominating set, a
/// selection of one vertex per colour, a hyperplane list or a clustering
/// solution.
pub fn verify_document(instance: &Value, witness: &Value, rel_tol: f64) -> Result<VerifyReport> {
    match instance.get("kind").and_then(Value::as_str) {
        Some(KIND_COVER) => verify_ds(instance, witness),
        Some(KIND_LINES) => verify_rmis(instance, witness),
        Some(other) => Err(Error::Parse(format!("unknown instance kind {other:?}"))),
        None => {
            let cloud = cloud_from_json(instance)?;
            if witness.get("flats").is_some() {
                return verify_clustering(&cloud.to_float(), witness, rel_tol);
            }
            verify_cloud_cover(&cloud.into_rational()?, witness)
        }
    }
}
