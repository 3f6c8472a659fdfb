//! Blow-down and blow-up of `-1` spheres on configurations, and the
//! Euclidean normalization of branched triangles to star graphs.
//!
//! Blowing down a `-1` vertex `E` whose neighbour `u` meets it with linking
//! number `λᵤ` adds `λᵤ²` to the weight of `u` and `λᵤλᵥ` to the label of each
//! neighbour pair `u,v` (an edge appears when the label was 0 and disappears
//! when it becomes 0). A torus tag `(p,q)` on `u` with `λᵤ ∈ {p,q}` becomes
//! `(p+q, λᵤ)`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Configuration, GraphError, Shape, StarGraph, TorusKnot, Vertex, VertexId};
use crate::seifert::{brieskorn_from_seifert, read_seifert, BrieskornSpec, SeifertError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoveError {
    #[error("vertex `{id}` has weight {weight}; only -1 vertices can be blown down")]
    NotMinusOne { id: VertexId, weight: i64 },
    #[error("vertex `{0}` is not on the triangle")]
    NotOnCycle(VertexId),
    #[error("configuration has no triangle")]
    NoTriangle,
    #[error("centre blow-up needs all triangle labels equal to 1")]
    NotUnitTriangle,
    #[error("expected a branched triangular configuration, found {0}")]
    NotBranchedTriangular(Shape),
    #[error("triangle labels {a} and {b} are not coprime")]
    NotCoprime { a: i64, b: i64 },
    #[error("vertex id `{0}` is already in use")]
    IdInUse(VertexId),
    #[error("torus tag on `{0}` cannot be undone by a blow-down with this linking number")]
    TorusTag(VertexId),
    #[error("integer overflow while rewriting weights or labels")]
    Overflow,
    #[error("move refused: {0}")]
    Inadmissible(GraphError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Seifert(#[from] SeifertError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MoveKind {
    BlowDown,
    BlowUp,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightDelta {
    pub id: VertexId,
    pub before: i64,
    pub after: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelDelta {
    pub u: VertexId,
    pub v: VertexId,
    pub before: i64,
    pub after: i64,
}

/// One rewrite. `vertex` is the `-1` sphere removed or created; `links` are
/// its linking numbers with each neighbour.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveStep {
    pub kind: MoveKind,
    pub vertex: VertexId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corner: Option<VertexId>,
    pub links: Vec<(VertexId, i64)>,
    pub weights: Vec<WeightDelta>,
    pub labels: Vec<LabelDelta>,
}

impl MoveStep {
    pub fn apply(&self, config: &Configuration) -> Result<Configuration, MoveError> {
        match self.kind {
            MoveKind::BlowDown => blow_down_traced(config, &self.vertex).map(|(c, _)| c),
            MoveKind::BlowUp => blow_up_traced(config, &self.vertex, &self.links).map(|(c, _)| c),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveTrace {
    pub steps: Vec<MoveStep>,
}

impl MoveTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn replay(&self, initial: &Configuration) -> Result<Configuration, MoveError> {
        self.steps.iter().try_fold(initial.clone(), |c, s| s.apply(&c))
    }

    /// One JSON object per line.
    pub fn to_json_lines(&self) -> String {
        self.steps.iter().map(|s| serde_json::to_string(s).expect("trace steps serialize") + "\n").collect()
    }

    pub fn from_json_lines(text: &str) -> Result<Self, serde_json::Error> {
        let steps = text.lines().filter(|l| !l.trim().is_empty()).map(serde_json::from_str).collect::<Result<_, _>>()?;
        Ok(Self { steps })
    }
}

pub fn blow_down(config: &Configuration, vertex: &VertexId) -> Result<Configuration, MoveError> {
    blow_down_traced(config, vertex).map(|(c, _)| c)
}

pub fn blow_down_traced(config: &Configuration, vertex: &VertexId) -> Result<(Configuration, MoveStep), MoveError> {
    let e = config.position(vertex)?;
    let weight = config.vertices()[e].weight;
    if weight != -1 {
        return Err(MoveError::NotMinusOne { id: vertex.clone(), weight });
    }
    let nbrs: Vec<(usize, i64)> = config.adjacency()[e].clone();
    let (mut vertices, mut edges) = config.clone().into_parts();
    let mut step = MoveStep {
        kind: MoveKind::BlowDown,
        vertex: vertex.clone(),
        corner: None,
        links: nbrs.iter().map(|&(u, l)| (vertices[u].id.clone(), l)).collect(),
        weights: Vec::new(),
        labels: Vec::new(),
    };
    for &(u, l) in &nbrs {
        let v = &mut vertices[u];
        let after = l.checked_mul(l).and_then(|sq| v.weight.checked_add(sq)).ok_or(MoveError::Overflow)?;
        step.weights.push(WeightDelta { id: v.id.clone(), before: v.weight, after });
        v.weight = after;
        v.torus = v.torus.map(|t| t.after_blow_down(l));
    }
    for (x, &(u, lu)) in nbrs.iter().enumerate() {
        for &(v, lv) in &nbrs[x + 1..] {
            let key = (u.min(v), u.max(v));
            let before = edges.get(&key).copied().unwrap_or(0);
            let after = lu.checked_mul(lv).and_then(|p| before.checked_add(p)).ok_or(MoveError::Overflow)?;
            set_label(&mut edges, key, after);
            step.labels.push(LabelDelta { u: vertices[u].id.clone(), v: vertices[v].id.clone(), before, after });
        }
    }
    vertices.remove(e);
    let shift = |i: usize| if i > e { i - 1 } else { i };
    let edges = edges.into_iter().filter(|&((i, j), _)| i != e && j != e).map(|((i, j), l)| ((shift(i), shift(j)), l)).collect();
    let out = Configuration::from_parts(vertices, edges).map_err(MoveError::Inadmissible)?;
    Ok((out, step))
}

/// Inserts a `-1` vertex `new_id` with the given linking numbers: the exact
/// inverse of [`blow_down`] on the new vertex. The new vertex goes last.
pub fn blow_up(config: &Configuration, new_id: &VertexId, links: &[(VertexId, i64)]) -> Result<Configuration, MoveError> {
    blow_up_traced(config, new_id, links).map(|(c, _)| c)
}

fn blow_up_traced(config: &Configuration, new_id: &VertexId, links: &[(VertexId, i64)]) -> Result<(Configuration, MoveStep), MoveError> {
    if config.vertex(new_id).is_some() {
        return Err(MoveError::IdInUse(new_id.clone()));
    }
    let idx: Vec<(usize, i64)> = links.iter().map(|(id, l)| Ok((config.position(id)?, *l))).collect::<Result<_, MoveError>>()?;
    let (mut vertices, mut edges) = config.clone().into_parts();
    let mut step = MoveStep {
        kind: MoveKind::BlowUp,
        vertex: new_id.clone(),
        corner: None,
        links: links.iter().filter(|(_, l)| *l != 0).cloned().collect(),
        weights: Vec::new(),
        labels: Vec::new(),
    };
    for &(u, l) in &idx {
        let v = &mut vertices[u];
        let after = l.checked_mul(l).and_then(|sq| v.weight.checked_sub(sq)).ok_or(MoveError::Overflow)?;
        step.weights.push(WeightDelta { id: v.id.clone(), before: v.weight, after });
        v.weight = after;
        if let Some(t) = v.torus {
            let up = t.after_blow_up(l);
            if up.after_blow_down(l) != t {
                return Err(MoveError::TorusTag(v.id.clone()));
            }
            v.torus = Some(up);
        }
    }
    for (x, &(u, lu)) in idx.iter().enumerate() {
        for &(v, lv) in &idx[x + 1..] {
            let key = (u.min(v), u.max(v));
            let before = edges.get(&key).copied().unwrap_or(0);
            let after = lu.checked_mul(lv).and_then(|p| before.checked_sub(p)).ok_or(MoveError::Overflow)?;
            set_label(&mut edges, key, after);
            step.labels.push(LabelDelta { u: vertices[u].id.clone(), v: vertices[v].id.clone(), before, after });
        }
    }
    let e = vertices.len();
    vertices.push(Vertex::new(new_id.clone(), -1));
    for &(u, l) in &idx {
        set_label(&mut edges, (u, e), l);
    }
    let out = Configuration::from_parts(vertices, edges).map_err(MoveError::Inadmissible)?;
    Ok((out, step))
}

fn set_label(edges: &mut BTreeMap<(usize, usize), i64>, key: (usize, usize), label: i64) {
    if label == 0 {
        edges.remove(&key);
    } else {
        edges.insert(key, label);
    }
}

/// Blow-up at a triangle corner: the corner `X` is detached from the other
/// two triangle vertices `Y`, `Z` and hangs off a new `-1` vertex `E`, which
/// takes its place in the triangle. Linking numbers of `E` are 1 with `X` and
/// `l(X,Y)`, `l(X,Z)` with the others, so `l(Y,Z)` drops by `l(X,Y)·l(X,Z)`.
pub fn blow_up_corner(config: &Configuration, corner: &VertexId, new_id: &VertexId) -> Result<Configuration, MoveError> {
    blow_up_corner_traced(config, corner, new_id).map(|(c, _)| c)
}

fn blow_up_corner_traced(config: &Configuration, corner: &VertexId, new_id: &VertexId) -> Result<(Configuration, MoveStep), MoveError> {
    config.position(corner)?;
    let tri = config.triangle().ok_or(MoveError::NoTriangle)?;
    if !tri.contains(corner) {
        return Err(MoveError::NotOnCycle(corner.clone()));
    }
    let links: Vec<(VertexId, i64)> = std::iter::once((corner.clone(), 1))
        .chain(tri.iter().filter(|t| *t != corner).map(|t| (t.clone(), config.label(corner, t))))
        .collect();
    let (out, mut step) = blow_up_traced(config, new_id, &links)?;
    step.corner = Some(corner.clone());
    Ok((out, step))
}

/// Blow-up at the centre of a triangle whose three labels are all 1: the new
/// `-1` vertex meets each corner once and the triangle edges disappear.
pub fn blow_up_center(config: &Configuration, new_id: &VertexId) -> Result<Configuration, MoveError> {
    blow_up_center_traced(config, new_id).map(|(c, _)| c)
}

fn blow_up_center_traced(config: &Configuration, new_id: &VertexId) -> Result<(Configuration, MoveStep), MoveError> {
    let tri = config.triangle().ok_or(MoveError::NoTriangle)?;
    let unit = (0..3).all(|i| config.label(&tri[i], &tri[(i + 1) % 3]) == 1);
    if !unit {
        return Err(MoveError::NotUnitTriangle);
    }
    let links: Vec<(VertexId, i64)> = tri.iter().map(|t| (t.clone(), 1)).collect();
    blow_up_traced(config, new_id, &links)
}

fn fresh_id(config: &Configuration, counter: &mut usize) -> VertexId {
    loop {
        *counter += 1;
        let id = VertexId::new(format!("e{counter}")).expect("generated ids are valid");
        if config.vertex(&id).is_none() {
            return id;
        }
    }
}

/// The triangle as `(apex, r, l)` with `l(r, l) == 1`. A torus-tagged apex
/// is preferred, then the earliest vertex.
fn orient_triangle(config: &Configuration) -> Result<(VertexId, VertexId, VertexId), MoveError> {
    let tri = config.triangle().ok_or(MoveError::NoTriangle)?;
    let mut candidates: Vec<(VertexId, VertexId, VertexId)> = (0..3)
        .map(|i| (tri[i].clone(), tri[(i + 1) % 3].clone(), tri[(i + 2) % 3].clone()))
        .filter(|(_, r, l)| config.label(r, l) == 1)
        .collect();
    candidates.sort_by_key(|(t, _, _)| {
        let tagged = config.vertex(t).and_then(|v| v.torus).is_some();
        (!tagged, config.position(t).unwrap_or(usize::MAX))
    });
    candidates.into_iter().next().ok_or(MoveError::NotBranchedTriangular(config.classify_shape()))
}

/// Repeated corner blow-ups following the Euclidean algorithm on the apex
/// labels `(a, b)`, finished by a centre blow-up once both are 1. The result
/// is a star whose centre is the last `-1` vertex.
pub fn normalize_to_star(config: &Configuration) -> Result<(StarGraph, MoveTrace), MoveError> {
    let (last, trace) = normalize_configuration(config)?;
    let center = trace.steps.last().map(|s| s.vertex.clone()).expect("normalization ends with a centre blow-up");
    let star = StarGraph::from_configuration(&last, Some(&center))?;
    Ok((star, trace))
}

/// As [`normalize_to_star`], returning the final configuration itself.
pub fn normalize_configuration(config: &Configuration) -> Result<(Configuration, MoveTrace), MoveError> {
    let shape = config.classify_shape();
    if shape != Shape::BranchedTriangular {
        return Err(MoveError::NotBranchedTriangular(shape));
    }
    let (t, mut r, mut l) = orient_triangle(config)?;
    let (a, b) = (config.label(&t, &r), config.label(&t, &l));
    if num_integer::gcd(a, b) != 1 {
        return Err(MoveError::NotCoprime { a, b });
    }
    let mut cur = config.clone();
    let mut trace = MoveTrace::default();
    let mut counter = 0;
    loop {
        let (a, b) = (cur.label(&t, &r), cur.label(&t, &l));
        let e = fresh_id(&cur, &mut counter);
        if a == 1 && b == 1 {
            let (next, step) = blow_up_center_traced(&cur, &e)?;
            trace.steps.push(step);
            return Ok((next, trace));
        }
        let corner = if a > b { l.clone() } else { r.clone() };
        let (next, step) = blow_up_corner_traced(&cur, &corner, &e)?;
        trace.steps.push(step);
        if a > b {
            l = e;
        } else {
            r = e;
        }
        cur = next;
    }
}

/// Boundary of a branched triangular configuration, read off its star.
pub fn boundary_brieskorn(config: &Configuration) -> Result<BrieskornSpec, MoveError> {
    let (star, _) = normalize_to_star(config)?;
    Ok(brieskorn_from_seifert(&read_seifert(&star)?)?)
}

/// Torus tag carried by the apex after normalization is always the unknot;
/// exposed for callers that want to check the tag bookkeeping.
pub fn final_torus_tag(config: &Configuration) -> Result<Option<TorusKnot>, MoveError> {
    let (t, _, _) = orient_triangle(config)?;
    let (last, _) = normalize_configuration(config)?;
    Ok(last.vertex(&t).and_then(|v| v.torus))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::vid;
    use crate::lattice::{determinant, recognize_negative_e8};
    use crate::seifert::is_minimal;
    use num_traits::Signed;

    fn cfg(text: &str) -> Configuration {
        Configuration::deserialize(text).unwrap()
    }

    fn family1(a: i64, b: i64, c: i64) -> Configuration {
        cfg(&format!(
            "v t {} torus {} {}\nv r -2\nv l -2\nv t1 -2\nv t2 -2\nv t3 -2\nv r1 -2\nv l1 -2\n\
             e t r {a}\ne t l {b}\ne r l 1\ne t t1 1\ne t1 t2 1\ne t2 t3 1\ne r r1 1\ne l l1 1\n",
            -2 * c,
            a.max(b),
            a.min(b)
        ))
    }

    #[test]
    fn isolated_vertex() {
        let c = cfg("v x -1\n");
        assert!(blow_down(&c, &vid("x")).unwrap().is_empty());
    }

    #[test]
    fn chain_blow_down() {
        let c = cfg("v u -2\nv w -1\nv v -2\ne u w 1\ne w v 1\n");
        let d = blow_down(&c, &vid("w")).unwrap();
        assert_eq!(d, cfg("v u -1\nv v -1\ne u v 1\n"));
        assert_eq!(determinant(&c.gram_matrix()).abs(), determinant(&d.gram_matrix()).abs());
    }

    #[test]
    fn torus_tag_follows_blow_down() {
        let c = cfg("v e -1\nv x -7 torus 2 3\nv y -2\ne e x 3\ne e y 1\n");
        let d = blow_down(&c, &vid("e")).unwrap();
        let x = d.vertex(&vid("x")).unwrap();
        assert_eq!(x.weight, 2);
        assert_eq!(x.torus, TorusKnot::new(5, 3));
        assert_eq!(d.label(&vid("x"), &vid("y")), 3);
    }

    #[test]
    fn refuses_non_minus_one() {
        let c = cfg("v x -2\n");
        assert_eq!(blow_down(&c, &vid("x")), Err(MoveError::NotMinusOne { id: vid("x"), weight: -2 }));
    }

    #[test]
    fn corner_blow_up_inverts() {
        let c = family1(1, 2, 5);
        let up = blow_up_corner(&c, &vid("r"), &vid("e")).unwrap();
        assert_eq!(up.label(&vid("t"), &vid("l")), 1);
        assert_eq!(up.label(&vid("t"), &vid("e")), 1);
        assert_eq!(up.label(&vid("r"), &vid("e")), 1);
        assert_eq!(up.label(&vid("t"), &vid("r")), 0);
        assert_eq!(blow_down(&up, &vid("e")).unwrap(), c);
        assert_eq!(blow_up_corner(&c, &vid("t1"), &vid("e")), Err(MoveError::NotOnCycle(vid("t1"))));
    }

    #[test]
    fn family1_normalizes_to_poincare_neighbour() {
        let c = family1(1, 2, 5);
        assert!(recognize_negative_e8(&c.gram_matrix()).is_negative_e8());
        let (star, trace) = normalize_to_star(&c).unwrap();
        assert!(is_minimal(&star));
        assert_eq!(star.rank(), c.len() + trace.len());
        assert_eq!(trace.replay(&c).unwrap().len(), c.len() + trace.len());
        assert_eq!(boundary_brieskorn(&c).unwrap().multiplicities(), &[7, 8, 45]);
        assert_eq!(final_torus_tag(&c).unwrap(), Some(TorusKnot::unknot()));
        let lines = trace.to_json_lines();
        assert_eq!(MoveTrace::from_json_lines(&lines).unwrap(), trace);
    }

    #[test]
    fn unit_triangle_goes_straight_to_star() {
        let c = cfg("v a -3\nv b -2\nv c -2\ne a b 1\ne b c 1\ne a c 1\n");
        let (star, trace) = normalize_to_star(&c).unwrap();
        assert_eq!(trace.len(), 1);
        assert_eq!(star.central_weight, -1);
        assert_eq!(star.branches, vec![vec![-4], vec![-3], vec![-3]]);
    }

    #[test]
    fn non_coprime_is_refused() {
        let c = cfg("v t -8\nv r -2\nv l -2\ne t r 3\ne t l 6\ne r l 1\n");
        assert_eq!(normalize_to_star(&c).unwrap_err(), MoveError::NotCoprime { a: 3, b: 6 });
    }
}
