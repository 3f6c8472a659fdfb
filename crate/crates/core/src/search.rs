//! The seven quadratic families of branched triangular `-E8` configurations,
//! and exhaustive searches for even rank-8 star graphs.

use std::collections::BTreeSet;
use std::fmt::{self, Display};

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{vid, Configuration, Edge, StarGraph, TorusKnot, Vertex};
use crate::lattice::{is_even, is_negative_definite, is_unimodular};
use crate::seifert::{brieskorn_from_seifert, read_seifert, resolve, BrieskornSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("unknown family ({0}); families are numbered 1 to 7")]
    UnknownFamily(u8),
    #[error("bound {got} is below the minimum {min}")]
    BoundTooSmall { got: i64, min: i64 },
}

/// `A·a² + B·ab + C·b² = D·c - k0` together with the lengths of the chains
/// hanging off the triangle vertices `t` (weight `-2c`), `r` and `l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiophantineFamily {
    pub id: u8,
    pub quad: (i64, i64, i64),
    pub rhs: (i64, i64),
    pub chains: (usize, usize, usize),
}

pub const FAMILIES: [DiophantineFamily; 7] = [
    DiophantineFamily { id: 1, quad: (3, 4, 3), rhs: (5, 2), chains: (3, 1, 1) },
    DiophantineFamily { id: 2, quad: (3, 3, 2), rhs: (5, 2), chains: (3, 2, 0) },
    DiophantineFamily { id: 3, quad: (6, 9, 6), rhs: (7, 2), chains: (1, 2, 2) },
    DiophantineFamily { id: 4, quad: (6, 8, 5), rhs: (7, 2), chains: (1, 3, 1) },
    DiophantineFamily { id: 5, quad: (5, 5, 3), rhs: (7, 2), chains: (1, 4, 0) },
    DiophantineFamily { id: 6, quad: (15, 20, 12), rhs: (16, 1), chains: (0, 4, 1) },
    DiophantineFamily { id: 7, quad: (12, 12, 7), rhs: (16, 1), chains: (0, 5, 0) },
];

impl DiophantineFamily {
    pub fn get(id: u8) -> Result<&'static DiophantineFamily, SearchError> {
        FAMILIES.iter().find(|f| f.id == id).ok_or(SearchError::UnknownFamily(id))
    }

    pub fn lhs(&self, a: i64, b: i64) -> i64 {
        let (x, y, z) = self.quad;
        x * a * a + y * a * b + z * b * b
    }

    pub fn holds(&self, a: i64, b: i64, c: i64) -> bool {
        self.lhs(a, b) == self.rhs.0 * c - self.rhs.1
    }

    /// The `c` solving the equation for given `a, b`, if it is an integer.
    pub fn c_for(&self, a: i64, b: i64) -> Option<i64> {
        let num = self.lhs(a, b) + self.rhs.1;
        (num % self.rhs.0 == 0).then(|| num / self.rhs.0)
    }

    /// Triangle `t, r, l` with `l(t,r) = a`, `l(t,l) = b`, `l(r,l) = 1`,
    /// weights `-2c, -2, -2`, and `-2` chains `t1…`, `r1…`, `l1…`. The `t`
    /// vertex carries the `(a,b)` torus tag when `a, b` are coprime.
    pub fn configuration(&self, a: i64, b: i64, c: i64) -> Configuration {
        let mut t = Vertex::new(vid("t"), -2 * c);
        t.torus = TorusKnot::new(a, b);
        let mut vertices = vec![t, Vertex::new(vid("r"), -2), Vertex::new(vid("l"), -2)];
        let mut edges = vec![
            Edge { u: vid("t"), v: vid("r"), label: a },
            Edge { u: vid("t"), v: vid("l"), label: b },
            Edge { u: vid("r"), v: vid("l"), label: 1 },
        ];
        let (ct, cr, cl) = self.chains;
        for (root, len) in [("t", ct), ("r", cr), ("l", cl)] {
            let mut prev = vid(root);
            for j in 1..=len {
                let id = vid(&format!("{root}{j}"));
                vertices.push(Vertex::new(id.clone(), -2));
                edges.push(Edge { u: prev, v: id.clone(), label: 1 });
                prev = id;
            }
        }
        Configuration::new(vertices, edges).expect("family configurations are valid")
    }
}

impl Display for DiophantineFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (x, y, z) = self.quad;
        write!(f, "({}): {x}a^2+{y}ab+{z}b^2={}c-{}", self.id, self.rhs.0, self.rhs.1)
    }
}

/// Where a solution came from when it was produced by a Table 1 row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Table1Provenance {
    pub row: usize,
    pub k: i64,
    pub l: i64,
    pub sign: i8,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FamilySolution {
    pub family: u8,
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub gcd_ok: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Table1Provenance>,
}

impl FamilySolution {
    pub fn positive(&self) -> bool {
        self.a > 0 && self.b > 0 && self.c > 0
    }
}

/// Every `(a, b, c)` with `1 ≤ a ≤ a_max`, `1 ≤ b ≤ b_max`, `c ≥ 1`, sorted.
pub fn solve_family(id: u8, a_max: i64, b_max: i64) -> Result<Vec<FamilySolution>, SearchError> {
    let fam = DiophantineFamily::get(id)?;
    for (got, what) in [(a_max, 1), (b_max, 1)] {
        if got < what {
            return Err(SearchError::BoundTooSmall { got, min: what });
        }
    }
    let mut out: Vec<FamilySolution> = (1..=a_max)
        .into_par_iter()
        .flat_map_iter(|a| {
            (1..=b_max).filter_map(move |b| {
                fam.c_for(a, b).filter(|&c| c >= 1).map(|c| FamilySolution {
                    family: id,
                    a,
                    b,
                    c,
                    gcd_ok: a.gcd(&b) == 1,
                    provenance: None,
                })
            })
        })
        .collect();
    out.sort();
    Ok(out)
}

/// A rank-8 star search hit, in canonical branch order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StarSolution {
    pub lengths: Vec<usize>,
    pub star: StarGraphKey,
    pub brieskorn: Option<Vec<i64>>,
}

/// Centre and branch weights, orderable for deterministic output.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct StarGraphKey {
    pub central_weight: i64,
    pub branches: Vec<Vec<i64>>,
}

impl StarGraphKey {
    pub fn to_star(&self) -> StarGraph {
        StarGraph::new(self.central_weight, self.branches.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub bound: i64,
    pub solutions: Vec<StarSolution>,
    /// Solutions with some parameter in the top quarter of the range.
    pub shell_hits: usize,
    pub nodes_visited: u64,
}

impl ClassificationReport {
    pub fn shell_clean(&self) -> bool {
        self.shell_hits == 0
    }
}

/// `det(-M)` of a star with centre magnitude `b0` and leg magnitudes `legs`
/// (each at least 2), via `b0·Πα - Σ βᵢ Π_{j≠i} αⱼ`.
pub fn star_det(b0: i128, legs: &[Vec<i64>]) -> i128 {
    let fr: Vec<(i128, i128)> = legs
        .iter()
        .map(|xs| {
            let (mut num, mut den) = (1i128, 0i128);
            for &x in xs.iter().rev() {
                let next = x as i128 * num - den;
                den = num;
                num = next;
            }
            (num, den)
        })
        .collect();
    let prod: i128 = fr.iter().map(|f| f.0).product();
    let mut det = b0 * prod;
    for (i, &(_, beta)) in fr.iter().enumerate() {
        let others: i128 = fr.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, f)| f.0).product();
        det -= beta * others;
    }
    det
}

struct StarSearch<'a> {
    lengths: &'a [usize],
    bound: i64,
    // legs[i][j] holds a parameter x; the weight magnitude is 2x
    legs: Vec<Vec<i64>>,
    slots: Vec<(usize, usize)>,
    centre: i64,
    found: Vec<Vec<Vec<i64>>>,
    nodes: u64,
}

impl StarSearch<'_> {
    fn det_with_rest_minimal(&self, upto: usize) -> i128 {
        let mags: Vec<Vec<i64>> = self
            .legs
            .iter()
            .enumerate()
            .map(|(i, leg)| {
                leg.iter()
                    .enumerate()
                    .map(|(j, &x)| {
                        let pos = self.slots.iter().position(|&s| s == (i, j)).unwrap();
                        if pos <= upto {
                            2 * x
                        } else {
                            2
                        }
                    })
                    .collect()
            })
            .collect();
        star_det(2 * self.centre as i128, &mags)
    }

    // Equal-length legs are kept in lexicographic order, so each symmetry
    // class is visited once.
    fn order_ok(&self, upto: usize) -> bool {
        let (i, j) = self.slots[upto];
        if j + 1 != self.lengths[i] {
            return true;
        }
        match (0..i).rev().find(|&p| self.lengths[p] == self.lengths[i]) {
            Some(p) => self.legs[p] <= self.legs[i],
            None => true,
        }
    }

    fn run(&mut self, depth: usize) {
        if depth == self.slots.len() {
            let mags: Vec<Vec<i64>> = self.legs.iter().map(|l| l.iter().map(|x| 2 * x).collect()).collect();
            if star_det(2 * self.centre as i128, &mags) == 1 {
                self.found.push(mags);
            }
            return;
        }
        let (i, j) = self.slots[depth];
        for x in 1..=self.bound {
            self.nodes += 1;
            self.legs[i][j] = x;
            let det = self.det_with_rest_minimal(depth);
            if det > 1 {
                // positive definite with det > 1, and growing any remaining
                // weight only increases the determinant
                break;
            }
            if self.order_ok(depth) {
                self.run(depth + 1);
            }
        }
        self.legs[i][j] = 1;
    }
}

/// All stars with the given branch lengths, centre weight `-2·centre`, and
/// branch weights `-2x` for `1 ≤ x ≤ bound` whose form is negative-definite
/// with determinant 1, one per symmetry class.
pub fn search_even_stars(lengths: &[usize], centre: i64, bound: i64) -> (Vec<StarSolution>, usize, u64) {
    let slots: Vec<(usize, usize)> = lengths.iter().enumerate().flat_map(|(i, &n)| (0..n).map(move |j| (i, j))).collect();
    let mut s =
        StarSearch { lengths, bound, legs: lengths.iter().map(|&n| vec![1; n]).collect(), slots, centre, found: Vec::new(), nodes: 0 };
    s.run(0);
    let shell = 3 * bound / 4;
    let mut shell_hits = 0;
    let mut sols = BTreeSet::new();
    for mags in s.found {
        if mags.iter().flatten().any(|&w| w / 2 > shell) {
            shell_hits += 1;
        }
        let branches: Vec<Vec<i64>> = mags.iter().map(|l| l.iter().map(|w| -w).collect()).collect();
        let star = StarGraph::new(-2 * centre, branches.clone());
        let m = star.gram_matrix();
        if !(is_even(&m) && is_unimodular(&m) && is_negative_definite(&m)) {
            continue;
        }
        let brieskorn = read_seifert(&star).ok().and_then(|d| brieskorn_from_seifert(&d).ok()).map(|s| s.multiplicities().to_vec());
        sols.insert(StarSolution { lengths: lengths.to_vec(), star: StarGraphKey { central_weight: -2 * centre, branches }, brieskorn });
    }
    (sols.into_iter().collect(), shell_hits, s.nodes)
}

pub const RANK8_TYPES: [[usize; 3]; 4] = [[1, 2, 4], [2, 2, 3], [1, 1, 5], [1, 3, 3]];

/// Three-branch even stars of rank 8 with centre `-2` or `-4`.
pub fn classify_star_rank8_even(bound: i64) -> Result<ClassificationReport, SearchError> {
    if bound < 8 {
        return Err(SearchError::BoundTooSmall { got: bound, min: 8 });
    }
    let runs: Vec<(Vec<StarSolution>, usize, u64)> =
        RANK8_TYPES.par_iter().flat_map_iter(|ty| [1, 2].into_iter().map(move |c| search_even_stars(ty, c, bound))).collect();
    Ok(merge_runs(bound, runs))
}

/// Four-branch stars of type `(2,2,2,1)`: centre `-2a`, `a ∈ {1,2}`, legs
/// `(-2b,-2c)`, `(-2d,-2e)`, `(-2f,-2g)` and `(-2h)`.
pub fn classify_2221(bound: i64) -> Result<ClassificationReport, SearchError> {
    if bound < 30 {
        return Err(SearchError::BoundTooSmall { got: bound, min: 30 });
    }
    let runs: Vec<_> = [1, 2].par_iter().map(|&a| search_even_stars(&[2, 2, 2, 1], a, bound)).collect();
    Ok(merge_runs(bound, runs))
}

fn merge_runs(bound: i64, runs: Vec<(Vec<StarSolution>, usize, u64)>) -> ClassificationReport {
    let mut solutions = Vec::new();
    let (mut shell_hits, mut nodes_visited) = (0, 0);
    for (s, h, n) in runs {
        solutions.extend(s);
        shell_hits += h;
        nodes_visited += n;
    }
    solutions.sort();
    ClassificationReport { bound, solutions, shell_hits, nodes_visited }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParitySample {
    pub partition: Vec<usize>,
    pub draws: usize,
    pub even_determinants: usize,
}

/// Random even stars with the given branch lengths: centre and branch
/// weights drawn from `-2·[1, bound]`. Counts how many have even determinant.
pub fn partition_parity_sample(partition: &[usize], draws: usize, bound: i64, seed: u64) -> ParitySample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut even = 0;
    for _ in 0..draws {
        let centre = 2 * rng.gen_range(1..=bound);
        let legs: Vec<Vec<i64>> = partition.iter().map(|&n| (0..n).map(|_| 2 * rng.gen_range(1..=bound)).collect()).collect();
        if star_det(centre as i128, &legs).is_even() {
            even += 1;
        }
    }
    ParitySample { partition: partition.to_vec(), draws, even_determinants: even }
}

/// Partitions of `n` into at least `min_parts` parts, largest part first.
pub fn partitions(n: usize, min_parts: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=n.min(max)).rev() {
            cur.push(p);
            go(n - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out.retain(|p| p.len() >= min_parts);
    out
}

/// The four families of spheres whose resolutions are even, unimodular and
/// negative-definite of rank `8n`.
pub fn rank8n_family(kind: usize, n: i64) -> Option<BrieskornSpec> {
    let ms = match kind {
        1 => vec![4 * n - 2, 4 * n - 1, 8 * n - 3],
        2 => vec![4 * n - 1, 4 * n, 8 * n - 1],
        3 => vec![4 * n - 2, 4 * n - 1, 8 * n * n - 4 * n + 1],
        4 => vec![4 * n - 1, 4 * n, 8 * n * n - 1],
        _ => return None,
    };
    BrieskornSpec::new(ms).ok()
}

/// Branch lengths of [`rank8n_family`] resolutions, as a sorted multiset.
pub fn rank8n_branch_lengths(kind: usize, n: usize) -> Option<Vec<usize>> {
    let mut v = match kind {
        1 => vec![4 * n - 3, 4 * n - 2, 4],
        2 => vec![4 * n - 2, 4 * n - 1, 2],
        3 => vec![4 * n - 3, 2, 4 * n],
        4 => vec![2, 4 * n - 1, 4 * n - 2],
        _ => return None,
    };
    v.sort_unstable();
    Some(v)
}

/// Sorted branch lengths of the minimal resolution.
pub fn resolution_branch_lengths(spec: &BrieskornSpec) -> Vec<usize> {
    let mut v = resolve(spec).branch_lengths();
    v.sort_unstable();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::recognize_negative_e8;

    #[test]
    fn family_examples() {
        let f1 = DiophantineFamily::get(1).unwrap();
        assert_eq!(f1.c_for(1, 2), Some(5));
        assert_eq!(f1.c_for(1, 1), None);
        assert_eq!(DiophantineFamily::get(7).unwrap().c_for(2, 1), Some(5));
        assert!(DiophantineFamily::get(8).is_err());
    }

    #[test]
    fn family_configurations_are_negative_e8() {
        for fam in &FAMILIES {
            let sols = solve_family(fam.id, 6, 40).unwrap();
            assert!(!sols.is_empty(), "family {}", fam.id);
            for s in sols.iter().take(5) {
                let cfg = fam.configuration(s.a, s.b, s.c);
                assert_eq!(cfg.len(), 8);
                assert!(recognize_negative_e8(&cfg.gram_matrix()).is_negative_e8(), "{fam} {s:?}");
            }
        }
    }

    #[test]
    fn star_det_matches_e8() {
        assert_eq!(star_det(2, &[vec![2], vec![2, 2], vec![2, 2, 2, 2]]), 1);
        assert_eq!(star_det(2, &[vec![2, 2], vec![2, 2, 2], vec![2, 4]]), 1);
    }

    #[test]
    fn partitions_of_seven() {
        let p = partitions(7, 4);
        assert_eq!(p.len(), 7);
        assert!(p.contains(&vec![2, 2, 2, 1]));
        assert!(p.iter().all(|q| q.iter().sum::<usize>() == 7));
    }

    #[test]
    fn small_bound_rank8() {
        let r = classify_star_rank8_even(8).unwrap();
        let found: Vec<Vec<i64>> = r.solutions.iter().filter_map(|s| s.brieskorn.clone()).collect();
        assert_eq!(found, vec![vec![2, 3, 5], vec![3, 4, 7]]);
    }
}
