use std::collections::BTreeSet;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Simple undirected graph on vertices `0..n`, optionally with a colour
/// partition into equal classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredGraph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    colors: Option<Vec<Vec<usize>>>,
}

impl ColoredGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!("edge ({u}, {v}) out of range for {n} vertices")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("loop at vertex {u}")));
            }
            set.insert((u.min(v), u.max(v)));
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &set {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in adjacency.iter_mut() {
            list.sort_unstable();
        }
        Ok(Self { n, edges: set, adjacency, colors: None })
    }

    /// Attaches colour classes: disjoint, covering, of equal size, with no
    /// edge inside a class.
    pub fn with_colors(mut self, colors: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; self.n];
        let size = colors.first().map_or(0, Vec::len);
        for class in &colors {
            if class.len() != size || size == 0 {
                return Err(Error::InvalidGraph("colour classes must be nonempty and of equal size".into()));
            }
            for &v in class {
                if v >= self.n || std::mem::replace(&mut seen[v], true) {
                    return Err(Error::InvalidGraph(format!("vertex {v} repeated or out of range in colours")));
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidGraph("colour classes do not cover every vertex".into()));
        }
        let mut color_of = vec![0; self.n];
        for (c, class) in colors.iter().enumerate() {
            for &v in class {
                color_of[v] = c;
            }
        }
        if let Some(&(u, v)) = self.edges.iter().find(|(u, v)| color_of[*u] == color_of[*v]) {
            return Err(Error::InvalidGraph(format!("edge ({u}, {v}) joins vertices of the same colour")));
        }
        self.colors = Some(colors);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn colors(&self) -> Option<&[Vec<usize>]> {
        self.colors.as_deref()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// `N[v]` as a sorted list.
    pub fn closed_neighborhood(&self, v: usize) -> Vec<usize> {
        let mut out = self.adjacency[v].clone();
        let pos = out.binary_search(&v).unwrap_err();
        out.insert(pos, v);
        out
    }

    /// Common degree of all vertices, if the graph is regular.
    pub fn uniform_degree(&self) -> Option<usize> {
        let d = self.adjacency.first().map_or(0, Vec::len);
        self.adjacency.iter().all(|a| a.len() == d).then_some(d)
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &v in &self.adjacency[u] {
                if !std::mem::replace(&mut seen[v], true) {
                    stack.push(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn is_dominating(&self, set: &[usize]) -> bool {
        let mut hit = vec![false; self.n];
        for &s in set {
            if s >= self.n {
                return false;
            }
            hit[s] = true;
            for &v in &self.adjacency[s] {
                hit[v] = true;
            }
        }
        hit.into_iter().all(|h| h)
    }

    /// Smallest dominating set of size at most `k` found by exhaustive search.
    pub fn dominating_set_of_size(&self, k: usize) -> Option<Vec<usize>> {
        fn rec(g: &ColoredGraph, start: usize, k: usize, chosen: &mut Vec<usize>) -> bool {
            if g.is_dominating(chosen) {
                return true;
            }
            if chosen.len() == k {
                return false;
            }
            for v in start..g.n {
                chosen.push(v);
                if rec(g, v + 1, k, chosen) {
                    return true;
                }
                chosen.pop();
            }
            false
        }
        let mut chosen = Vec::new();
        rec(self, 0, k, &mut chosen).then_some(chosen)
    }

    /// Canonical JSON form: `{"n", "edges", "colors"?}` with sorted edges.
    pub fn to_json(&self) -> Value {
        let edges: Vec<[usize; 2]> = self.edges.iter().map(|&(u, v)| [u, v]).collect();
        let mut v = json!({"n": self.n, "edges": edges});
        if let Some(colors) = &self.colors {
            v["colors"] = json!(colors);
        }
        v
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("graph: {what}"));
        let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| bad("missing n"))? as usize;
        let edges = v
            .get("edges")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing edges"))?
            .iter()
            .map(|e| {
                let pair = e.as_array().filter(|p| p.len() == 2).ok_or_else(|| bad("edge must be a pair"))?;
                let u = pair[0].as_u64().ok_or_else(|| bad("vertex must be an integer"))? as usize;
                let w = pair[1].as_u64().ok_or_else(|| bad("vertex must be an integer"))? as usize;
                Ok((u, w))
            })
            .collect::<Result<Vec<_>>>()?;
        let g = Self::new(n, edges)?;
        match v.get("colors") {
            None | Some(Value::Null) => Ok(g),
            Some(c) => {
                let colors = c
                    .as_array()
                    .ok_or_else(|| bad("colors must be a list"))?
                    .iter()
                    .map(|class| {
                        class
                            .as_array()
                            .ok_or_else(|| bad("colour class must be a list"))?
                            .iter()
                            .map(|x| x.as_u64().map(|x| x as usize).ok_or_else(|| bad("vertex must be an integer")))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                g.with_colors(colors)
            }
        }
    }

    /// SHA-256 of the compact canonical JSON.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_json().to_string().as_bytes()))
    }
}

/// Every graph on `n` vertices (labelled), in edge-bitmask order.
pub fn all_graphs(n: usize) -> impl Iterator<Item = ColoredGraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let total = 1u64 << pairs.len();
    (0..total).map(move |mask| {
        let edges = pairs.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &e)| e);
        ColoredGraph::new(n, edges).expect("valid pairs")
    })
}

/// Colour-regular graph with `l` classes of `nu` vertices. Vertex `j` of
/// class `i` is `i * nu + j`. For `l == 2` it is the perfect matching
/// `(0, j) ~ (1, j + shift)`; for `l >= 3` every class is matched to the next
/// one cyclically, so each vertex has one neighbour in each adjacent class.
pub fn shifted_ring(l: usize, nu: usize, shift: usize) -> Result<ColoredGraph> {
    if l < 2 || nu == 0 {
        return Err(Error::InvalidParameters("need at least two colours and one vertex per colour".into()));
    }
    let id = |i: usize, j: usize| i * nu + j;
    let pairs = if l == 2 { 1 } else { l };
    let edges = (0..pairs).flat_map(|i| (0..nu).map(move |j| (id(i, j), id((i + 1) % l, (j + shift) % nu))));
    let colors = (0..l).map(|i| (0..nu).map(|j| id(i, j)).collect()).collect();
    ColoredGraph::new(l * nu, edges)?.with_colors(colors)
}
