//! Weighted, edge-labelled plumbing graphs ("configurations").
//!
//! A configuration is connected and is either a tree or has exactly one cycle,
//! which must be a triangle. Vertex order is insertion order; it fixes the
//! row order of [`Configuration::gram_matrix`] and is preserved by the text
//! format.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::{self, Display, Write as _};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::SymmetricMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("invalid vertex id `{0}`")]
    InvalidId(String),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(VertexId),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(VertexId),
    #[error("self-loop at `{0}`")]
    SelfLoop(VertexId),
    #[error("more than one edge between `{0}` and `{1}`")]
    DuplicateEdge(VertexId, VertexId),
    #[error("edge `{0}`-`{1}` has label 0; omit the edge instead")]
    ZeroLabel(VertexId, VertexId),
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph must be a tree or have a single 3-cycle ({0})")]
    InadmissibleCycles(String),
    #[error("torus tag ({p},{q}) on `{id}` is not a torus knot type")]
    InvalidTorus { id: VertexId, p: i64, q: i64 },
    #[error("not a star graph: {0}")]
    NotAStar(String),
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
}

/// Opaque vertex name: non-empty, no whitespace, no `#`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(String);

impl VertexId {
    pub fn new(s: impl Into<String>) -> Result<Self, GraphError> {
        let s = s.into();
        if s.is_empty() || s.chars().any(|c| c.is_whitespace() || c == '#' || c == '"') {
            return Err(GraphError::InvalidId(s));
        }
        Ok(Self(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Shorthand for building ids from literals known to be valid.
pub fn vid(s: &str) -> VertexId {
    VertexId::new(s).expect("valid vertex id literal")
}

/// A `(p,q)` torus knot type, stored with `p >= q >= 0`. `(1,0)` is the unknot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TorusKnot {
    p: i64,
    q: i64,
}

impl TorusKnot {
    pub fn new(p: i64, q: i64) -> Option<Self> {
        let (p, q) = if p >= q { (p, q) } else { (q, p) };
        if q < 0 || p < 1 || (q == 0 && p != 1) || num_integer::gcd(p, q) != 1 {
            return None;
        }
        Some(Self { p, q })
    }

    pub fn unknot() -> Self {
        Self { p: 1, q: 0 }
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn is_unknot(&self) -> bool {
        self.q <= 1
    }

    /// Knot type after blowing down a `-1` sphere meeting this component with
    /// linking number `lambda`: `(p,q)` with `lambda` in `{p,q}` becomes
    /// `(p+q, lambda)`.
    pub fn after_blow_down(&self, lambda: i64) -> Self {
        let l = lambda.abs();
        if l == self.q || l == self.p {
            Self::new(self.p + self.q, l).unwrap_or(*self)
        } else {
            *self
        }
    }

    /// Inverse of [`TorusKnot::after_blow_down`]: `(p,q)` with `lambda == q < p`
    /// becomes `(p-q, q)`.
    pub fn after_blow_up(&self, lambda: i64) -> Self {
        let l = lambda.abs();
        if l == self.q && self.p > self.q {
            Self::new(self.p - self.q, self.q).unwrap_or(*self)
        } else if l == 1 && self.p == 1 && self.q == 1 {
            Self::unknot()
        } else {
            *self
        }
    }
}

impl Display for TorusKnot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T({},{})", self.p, self.q)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: VertexId,
    pub weight: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub torus: Option<TorusKnot>,
}

impl Vertex {
    pub fn new(id: VertexId, weight: i64) -> Self {
        Self { id, weight, torus: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub label: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    LinearChain,
    Star,
    BranchedTriangular,
    Other,
}

impl Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shape::LinearChain => "linear-chain",
            Shape::Star => "star",
            Shape::BranchedTriangular => "branched-triangular",
            Shape::Other => "other",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Configuration {
    vertices: Vec<Vertex>,
    index: HashMap<VertexId, usize>,
    // keyed by (i, j) with i < j in vertex order
    edges: BTreeMap<(usize, usize), i64>,
}

impl Configuration {
    pub fn empty() -> Self {
        Self { vertices: Vec::new(), index: HashMap::new(), edges: BTreeMap::new() }
    }

    pub fn new(vertices: Vec<Vertex>, edges: Vec<Edge>) -> Result<Self, GraphError> {
        let mut cfg = Self::empty();
        for v in vertices {
            if cfg.index.contains_key(&v.id) {
                return Err(GraphError::DuplicateVertex(v.id));
            }
            cfg.index.insert(v.id.clone(), cfg.vertices.len());
            cfg.vertices.push(v);
        }
        for e in edges {
            let i = cfg.position(&e.u)?;
            let j = cfg.position(&e.v)?;
            if i == j {
                return Err(GraphError::SelfLoop(e.u));
            }
            if e.label == 0 {
                return Err(GraphError::ZeroLabel(e.u, e.v));
            }
            let key = (i.min(j), i.max(j));
            if cfg.edges.insert(key, e.label).is_some() {
                return Err(GraphError::DuplicateEdge(e.u, e.v));
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Builds from parts whose ids/labels are already consistent, then checks
    /// the shape invariants.
    pub(crate) fn from_parts(vertices: Vec<Vertex>, edges: BTreeMap<(usize, usize), i64>) -> Result<Self, GraphError> {
        let index = vertices.iter().enumerate().map(|(i, v)| (v.id.clone(), i)).collect();
        let cfg = Self { vertices, index, edges };
        cfg.validate()?;
        Ok(cfg)
    }

    pub(crate) fn into_parts(self) -> (Vec<Vertex>, BTreeMap<(usize, usize), i64>) {
        (self.vertices, self.edges)
    }

    fn validate(&self) -> Result<(), GraphError> {
        let n = self.vertices.len();
        for v in &self.vertices {
            if let Some(t) = v.torus {
                if TorusKnot::new(t.p, t.q) != Some(t) {
                    return Err(GraphError::InvalidTorus { id: v.id.clone(), p: t.p, q: t.q });
                }
            }
        }
        if n == 0 {
            return Ok(());
        }
        if self.components() != 1 {
            return Err(GraphError::Disconnected);
        }
        let cyclomatic = self.edges.len() + 1 - n;
        match cyclomatic {
            0 => Ok(()),
            1 => {
                let cycle = self.cycle_vertices();
                if cycle.len() == 3 {
                    Ok(())
                } else {
                    Err(GraphError::InadmissibleCycles(format!("cycle of length {}", cycle.len())))
                }
            }
            k => Err(GraphError::InadmissibleCycles(format!("{k} independent cycles"))),
        }
    }

    fn components(&self) -> usize {
        let adj = self.adjacency();
        let mut seen = vec![false; self.vertices.len()];
        let mut count = 0;
        for s in 0..self.vertices.len() {
            if seen[s] {
                continue;
            }
            count += 1;
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(x) = stack.pop() {
                for &(y, _) in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        count
    }

    /// Vertices on the cycle, found by stripping leaves; empty for a tree.
    fn cycle_vertices(&self) -> Vec<usize> {
        let adj = self.adjacency();
        let mut deg: Vec<usize> = adj.iter().map(|a| a.len()).collect();
        let mut removed = vec![false; deg.len()];
        let mut leaves: Vec<usize> = (0..deg.len()).filter(|&i| deg[i] <= 1).collect();
        while let Some(x) = leaves.pop() {
            if removed[x] {
                continue;
            }
            removed[x] = true;
            for &(y, _) in &adj[x] {
                if !removed[y] {
                    deg[y] -= 1;
                    if deg[y] <= 1 {
                        leaves.push(y);
                    }
                }
            }
        }
        (0..deg.len()).filter(|&i| !removed[i]).collect()
    }

    /// Neighbours of each vertex with edge labels, in vertex order.
    pub fn adjacency(&self) -> Vec<Vec<(usize, i64)>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for (&(i, j), &l) in &self.edges {
            adj[i].push((j, l));
            adj[j].push((i, l));
        }
        for a in adj.iter_mut() {
            a.sort_unstable();
        }
        adj
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, id: &VertexId) -> Option<&Vertex> {
        self.index.get(id).map(|&i| &self.vertices[i])
    }

    pub fn position(&self, id: &VertexId) -> Result<usize, GraphError> {
        self.index.get(id).copied().ok_or_else(|| GraphError::UnknownVertex(id.clone()))
    }

    pub fn edges(&self) -> Vec<Edge> {
        self.edges.iter().map(|(&(i, j), &label)| Edge { u: self.vertices[i].id.clone(), v: self.vertices[j].id.clone(), label }).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Label between two vertices, 0 when there is no edge.
    pub fn label(&self, u: &VertexId, v: &VertexId) -> i64 {
        match (self.index.get(u), self.index.get(v)) {
            (Some(&i), Some(&j)) => self.label_at(i, j),
            _ => 0,
        }
    }

    pub(crate) fn label_at(&self, i: usize, j: usize) -> i64 {
        self.edges.get(&(i.min(j), i.max(j))).copied().unwrap_or(0)
    }

    pub fn degree(&self, id: &VertexId) -> usize {
        match self.index.get(id) {
            Some(&i) => self.edges.keys().filter(|&&(a, b)| a == i || b == i).count(),
            None => 0,
        }
    }

    /// Ids of the triangle vertices, in vertex order; `None` for a tree.
    pub fn triangle(&self) -> Option<[VertexId; 3]> {
        let c = self.cycle_vertices();
        (c.len() == 3).then(|| [0, 1, 2].map(|k| self.vertices[c[k]].id.clone()))
    }

    /// Intersection form: weights on the diagonal, labels off it.
    pub fn gram_matrix(&self) -> SymmetricMatrix<BigInt> {
        let n = self.vertices.len();
        let mut m = SymmetricMatrix::zeros(n);
        for (i, v) in self.vertices.iter().enumerate() {
            m.set(i, i, BigInt::from(v.weight));
        }
        for (&(i, j), &l) in &self.edges {
            m.set(i, j, BigInt::from(l));
        }
        m
    }

    pub fn classify_shape(&self) -> Shape {
        let n = self.vertices.len();
        let adj = self.adjacency();
        if self.edges.len() + 1 == n || n == 0 {
            let branching = adj.iter().filter(|a| a.len() >= 3).count();
            return match branching {
                0 => Shape::LinearChain,
                1 => Shape::Star,
                _ => Shape::Other,
            };
        }
        let cycle = self.cycle_vertices();
        if cycle.len() != 3 {
            return Shape::Other;
        }
        let (x, y, z) = (cycle[0], cycle[1], cycle[2]);
        let labels = [self.label_at(x, y), self.label_at(y, z), self.label_at(x, z)];
        if labels.iter().any(|&l| l <= 0) || !labels.contains(&1) {
            return Shape::Other;
        }
        let on_cycle = |v: usize| cycle.contains(&v);
        for &c in &cycle {
            if adj[c].len() > 3 {
                return Shape::Other;
            }
        }
        for (v, nbrs) in adj.iter().enumerate() {
            if !on_cycle(v) && nbrs.len() > 2 {
                return Shape::Other;
            }
        }
        Shape::BranchedTriangular
    }

    /// Same vertices (by id), weights, tags and labelled edges, in any order.
    pub fn same_labeled_graph(&self, other: &Configuration) -> bool {
        if self.len() != other.len() || self.edge_count() != other.edge_count() {
            return false;
        }
        let vs =
            |c: &Configuration| c.vertices.iter().map(|v| (v.id.clone(), v.weight, v.torus.map(|t| (t.p, t.q)))).collect::<BTreeSet<_>>();
        let es = |c: &Configuration| {
            c.edges().into_iter().map(|e| if e.u <= e.v { (e.u, e.v, e.label) } else { (e.v, e.u, e.label) }).collect::<BTreeSet<_>>()
        };
        vs(self) == vs(other) && es(self) == es(other)
    }

    /// Copy with vertices in the order given by `perm` (new position `i`
    /// holds old vertex `perm[i]`).
    pub fn reordered(&self, perm: &[usize]) -> Configuration {
        assert_eq!(perm.len(), self.len());
        let mut inv = vec![0; perm.len()];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let vertices = perm.iter().map(|&o| self.vertices[o].clone()).collect();
        let edges = self.edges.iter().map(|(&(i, j), &l)| ((inv[i].min(inv[j]), inv[i].max(inv[j])), l)).collect();
        Configuration::from_parts(vertices, edges).expect("reordering keeps invariants")
    }

    /// Copy with every id passed through `rename` (which must be injective).
    pub fn renamed(&self, rename: impl Fn(&VertexId) -> VertexId) -> Result<Configuration, GraphError> {
        let vertices = self.vertices.iter().map(|v| Vertex { id: rename(&v.id), ..v.clone() }).collect::<Vec<_>>();
        let mut seen = BTreeSet::new();
        for v in &vertices {
            if !seen.insert(v.id.clone()) {
                return Err(GraphError::DuplicateVertex(v.id.clone()));
            }
        }
        Configuration::from_parts(vertices, self.edges.clone())
    }

    /// Canonical text form, one `v`/`e` line per vertex/edge.
    pub fn serialize(&self) -> String {
        let mut s = String::new();
        for v in &self.vertices {
            write!(s, "v {} {}", v.id, v.weight).unwrap();
            if let Some(t) = v.torus {
                write!(s, " torus {} {}", t.p, t.q).unwrap();
            }
            s.push('\n');
        }
        for (&(i, j), &l) in &self.edges {
            writeln!(s, "e {} {} {}", self.vertices[i].id, self.vertices[j].id, l).unwrap();
        }
        s
    }

    pub fn deserialize(text: &str) -> Result<Configuration, GraphError> {
        let mut vertices = Vec::new();
        let mut edges = Vec::new();
        let mut seen_any = false;
        for (lineno, line) in text.lines().enumerate() {
            let line_no = lineno + 1;
            let content = line.split('#').next().unwrap_or("");
            let toks = tokens(content);
            let Some(&(col, kind)) = toks.first() else { continue };
            seen_any = true;
            let err = |column: usize, message: String| GraphError::Parse { line: line_no, column, message };
            let int = |k: usize, what: &str| -> Result<i64, GraphError> {
                let (c, t) = toks.get(k).copied().ok_or_else(|| err(line.len() + 1, format!("missing {what}")))?;
                t.parse::<i64>().map_err(|_| err(c, format!("expected integer {what}, found `{t}`")))
            };
            let id = |k: usize| -> Result<VertexId, GraphError> {
                let (c, t) = toks.get(k).copied().ok_or_else(|| err(line.len() + 1, "missing vertex id".into()))?;
                VertexId::new(t).map_err(|_| err(c, format!("invalid vertex id `{t}`")))
            };
            match kind {
                "v" => {
                    let vid = id(1)?;
                    let weight = int(2, "weight")?;
                    let torus = match toks.get(3) {
                        None => None,
                        Some(&(c, "torus")) => {
                            let (p, q) = (int(4, "torus p")?, int(5, "torus q")?);
                            if toks.len() > 6 {
                                return Err(err(toks[6].0, "unexpected token".into()));
                            }
                            Some(TorusKnot::new(p, q).ok_or_else(|| err(c, format!("({p},{q}) is not a torus knot type")))?)
                        }
                        Some(&(c, t)) => return Err(err(c, format!("expected `torus`, found `{t}`"))),
                    };
                    vertices.push(Vertex { id: vid, weight, torus });
                }
                "e" => {
                    let (u, v) = (id(1)?, id(2)?);
                    let label = int(3, "label")?;
                    if let Some(&(c, _)) = toks.get(4) {
                        return Err(err(c, "unexpected token".into()));
                    }
                    edges.push(Edge { u, v, label });
                }
                other => return Err(err(col, format!("expected `v` or `e`, found `{other}`"))),
            }
        }
        if !seen_any {
            return Err(GraphError::Parse { line: 1, column: 1, message: "empty graph description".into() });
        }
        Configuration::new(vertices, edges)
    }

    /// Graphviz rendering: weights as node labels, linking numbers as edge labels.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph configuration {\n");
        for v in &self.vertices {
            let tag = v.torus.map(|t| format!(" {t}")).unwrap_or_default();
            writeln!(s, "  \"{}\" [label=\"{}{}\"];", v.id, v.weight, tag).unwrap();
        }
        for (&(i, j), &l) in &self.edges {
            writeln!(s, "  \"{}\" -- \"{}\" [label=\"{}\"];", self.vertices[i].id, self.vertices[j].id, l).unwrap();
        }
        s.push_str("}\n");
        s
    }
}

fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter().map(|(b, t)| (line[..b].chars().count() + 1, t)).collect()
}

impl Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

/// Star-shaped plumbing: a central vertex and chains hanging off it, every
/// edge labelled 1. Branch weights are listed from the centre outward.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StarGraph {
    pub central_weight: i64,
    pub branches: Vec<Vec<i64>>,
}

impl StarGraph {
    pub fn new(central_weight: i64, branches: Vec<Vec<i64>>) -> Self {
        Self { central_weight, branches }
    }

    pub fn rank(&self) -> usize {
        1 + self.branches.iter().map(Vec::len).sum::<usize>()
    }

    pub fn branch_lengths(&self) -> Vec<usize> {
        self.branches.iter().map(Vec::len).collect()
    }

    /// Centre `c`, branch vertices `b{i}_{j}` (1-based), in that order.
    pub fn to_configuration(&self) -> Configuration {
        let mut vertices = vec![Vertex::new(vid("c"), self.central_weight)];
        let mut edges = BTreeMap::new();
        for (i, br) in self.branches.iter().enumerate() {
            let mut prev = 0;
            for (j, &w) in br.iter().enumerate() {
                let idx = vertices.len();
                vertices.push(Vertex::new(vid(&format!("b{}_{}", i + 1, j + 1)), w));
                edges.insert((prev, idx), 1);
                prev = idx;
            }
        }
        Configuration::from_parts(vertices, edges).expect("star graphs are trees")
    }

    pub fn gram_matrix(&self) -> SymmetricMatrix<BigInt> {
        self.to_configuration().gram_matrix()
    }

    /// Reads a star from a tree whose labels are all 1. The centre is the
    /// unique vertex of degree at least 3 unless given explicitly.
    pub fn from_configuration(config: &Configuration, center: Option<&VertexId>) -> Result<StarGraph, GraphError> {
        if config.is_empty() {
            return Err(GraphError::NotAStar("empty graph".into()));
        }
        if config.edge_count() + 1 != config.len() {
            return Err(GraphError::NotAStar("graph has a cycle".into()));
        }
        if let Some(e) = config.edges().into_iter().find(|e| e.label != 1) {
            return Err(GraphError::NotAStar(format!("edge {}-{} has label {}", e.u, e.v, e.label)));
        }
        let adj = config.adjacency();
        let hubs: Vec<usize> = (0..config.len()).filter(|&i| adj[i].len() >= 3).collect();
        let c = match center {
            Some(id) => {
                let c = config.position(id)?;
                if hubs.iter().any(|&h| h != c) {
                    return Err(GraphError::NotAStar(format!("`{id}` is not the only branching vertex")));
                }
                c
            }
            None => match hubs.as_slice() {
                [h] => *h,
                [] if config.len() == 1 => 0,
                [] => return Err(GraphError::NotAStar("chain without a designated centre".into())),
                _ => return Err(GraphError::NotAStar("more than one branching vertex".into())),
            },
        };
        let mut branches = Vec::new();
        for &(start, _) in &adj[c] {
            let (mut prev, mut cur) = (c, start);
            let mut br = Vec::new();
            loop {
                br.push(config.vertices[cur].weight);
                match adj[cur].iter().find(|&&(n, _)| n != prev) {
                    Some(&(n, _)) => {
                        prev = cur;
                        cur = n;
                    }
                    None => break,
                }
            }
            branches.push(br);
        }
        Ok(StarGraph { central_weight: config.vertices[c].weight, branches })
    }
}
