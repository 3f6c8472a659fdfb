//! Exact integer quadratic forms.
//!
//! Everything here works on symmetric matrices over an exact integer ring
//! (`BigInt` for production, `i64`/`i128` where the caller knows entries stay
//! small). No floating point is used: determinants go through Bareiss
//! elimination, definiteness through leading principal minors, and the
//! signature through a fraction-free symmetric (congruence) elimination.

use std::fmt::{self, Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Exact signed integer scalar usable as a lattice entry.
pub trait ExactInteger: Clone + Debug + Display + Integer + Signed + FromPrimitive + ToPrimitive + FromStr + Send + Sync + 'static {}

impl<T> ExactInteger for T where
    T: Clone + Debug + Display + Integer + Signed + FromPrimitive + ToPrimitive + FromStr + Send + Sync + 'static
{
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("entry ({i},{j}) differs from ({j},{i})")]
    NotSymmetric { i: usize, j: usize },
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
}

/// A symmetric `n x n` matrix, stored densely in row-major order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymmetricMatrix<T> {
    n: usize,
    entries: Vec<T>,
}

impl<T: ExactInteger> SymmetricMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self { n, entries: vec![T::zero(); n * n] }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, LatticeError> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for (row, r) in rows.into_iter().enumerate() {
            if r.len() != n {
                return Err(LatticeError::NotSquare { row, len: r.len(), expected: n });
            }
            entries.extend(r);
        }
        let m = Self { n, entries };
        for i in 0..n {
            for j in (i + 1)..n {
                if m.get(i, j) != m.get(j, i) {
                    return Err(LatticeError::NotSymmetric { i, j });
                }
            }
        }
        Ok(m)
    }

    /// Convenience constructor from small literals; panics on asymmetry.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let rows = rows.iter().map(|r| r.iter().map(|&x| T::from_i64(x).expect("entry fits")).collect()).collect();
        Self::from_rows(rows).expect("symmetric literal")
    }

    /// The hyperbolic plane `[[0,1],[1,0]]`.
    pub fn hyperbolic() -> Self {
        Self::from_i64_rows(&[&[0, 1], &[1, 0]])
    }

    /// Gram matrix of the negative-definite E8 form, written on the
    /// star-shaped Dynkin diagram with arms of length 1, 2 and 4 (vertex 0 is
    /// the trivalent node).
    pub fn negative_e8() -> Self {
        let mut m = Self::zeros(8);
        for i in 0..8 {
            m.set(i, i, T::from_i64(-2).unwrap());
        }
        let one = T::one();
        for (u, v) in [(0, 1), (0, 2), (2, 3), (0, 4), (4, 5), (5, 6), (6, 7)] {
            m.set(u, v, one.clone());
        }
        m
    }

    /// Size of the matrix (rank of the free module it is a form on).
    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.n + j]
    }

    /// Sets both `(i,j)` and `(j,i)`.
    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.entries[i * self.n + j] = value.clone();
        self.entries[j * self.n + i] = value;
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.entries.chunks(self.n.max(1)).take(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.n).map(|i| self.get(i, i).clone()).collect()
    }

    /// Matrix with rows and columns reordered: entry `(i,j)` of the result is
    /// entry `(perm[i], perm[j])` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n);
        let mut out = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.entries[i * self.n + j] = self.get(perm[i], perm[j]).clone();
            }
        }
        out
    }

    /// `Uᵀ M U` for a square integer matrix `u` given row-major.
    #[allow(clippy::needless_range_loop)]
    pub fn congruent(&self, u: &[Vec<T>]) -> Self {
        let n = self.n;
        assert!(u.len() == n && u.iter().all(|r| r.len() == n));
        // mu = M U
        let mut mu = vec![vec![T::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = T::zero();
                for k in 0..n {
                    acc = acc + self.get(i, k).clone() * u[k][j].clone();
                }
                mu[i][j] = acc;
            }
        }
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = T::zero();
                for k in 0..n {
                    acc = acc + u[k][i].clone() * mu[k][j].clone();
                }
                out.entries[i * n + j] = acc;
            }
        }
        out
    }

    /// `vᵀ M v`.
    pub fn quadratic_value(&self, v: &[T]) -> T {
        assert_eq!(v.len(), self.n);
        let mut acc = T::zero();
        for i in 0..self.n {
            if v[i].is_zero() {
                continue;
            }
            for j in 0..self.n {
                acc = acc + v[i].clone() * self.get(i, j).clone() * v[j].clone();
            }
        }
        acc
    }

    /// Re-expresses the entries in another exact scalar type.
    pub fn convert<U: ExactInteger>(&self) -> Option<SymmetricMatrix<U>> {
        let entries = self.entries.iter().map(|x| x.to_i128().and_then(U::from_i128)).collect::<Option<Vec<_>>>()?;
        Some(SymmetricMatrix { n: self.n, entries })
    }

    pub fn map_to_big(&self) -> SymmetricMatrix<BigInt> {
        let entries = self.entries.iter().map(|x| x.to_string().parse().expect("integer display parses as BigInt")).collect();
        SymmetricMatrix { n: self.n, entries }
    }

    /// Text form: the rank on the first line, then one row per line.
    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for r in self.rows() {
            let line: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn parse_text(text: &str) -> Result<Self, LatticeError> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l)).filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        });
        let (line_no, first) =
            lines.next().ok_or(LatticeError::Parse { line: 1, column: 1, message: "empty input, expected the rank".into() })?;
        let n: usize = first.trim().parse().map_err(|_| LatticeError::Parse {
            line: line_no,
            column: column_of(first, first.trim()),
            message: format!("expected a non-negative rank, found `{}`", first.trim()),
        })?;
        let mut rows = Vec::with_capacity(n);
        for _ in 0..n {
            let (line_no, line) = lines.next().ok_or(LatticeError::Parse {
                line: line_no + rows.len() + 1,
                column: 1,
                message: format!("expected {n} rows, found {}", rows.len()),
            })?;
            let mut row = Vec::with_capacity(n);
            for tok in line.split_whitespace() {
                let v = tok.parse::<T>().map_err(|_| LatticeError::Parse {
                    line: line_no,
                    column: column_of(line, tok),
                    message: format!("`{tok}` is not an integer"),
                })?;
                row.push(v);
            }
            if row.len() != n {
                return Err(LatticeError::Parse {
                    line: line_no,
                    column: 1,
                    message: format!("expected {n} entries, found {}", row.len()),
                });
            }
            rows.push(row);
        }
        if let Some((line_no, _)) = lines.next() {
            return Err(LatticeError::Parse { line: line_no, column: 1, message: "trailing content after the last row".into() });
        }
        Self::from_rows(rows).map_err(|e| LatticeError::Parse { line: 2, column: 1, message: e.to_string() })
    }
}

fn column_of(line: &str, token: &str) -> usize {
    let offset = token.as_ptr() as usize - line.as_ptr() as usize;
    line[..offset].chars().count() + 1
}

impl<T: ExactInteger> Display for SymmetricMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Determinant by Bareiss fraction-free elimination with row pivoting.
/// The empty matrix has determinant 1.
pub fn determinant<T: ExactInteger>(m: &SymmetricMatrix<T>) -> T {
    let n = m.rank();
    let mut a = m.rows();
    let mut sign_flip = false;
    let mut prev = T::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign_flip = !sign_flip;
                }
                None => return T::zero(),
            }
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let num = a[i][j].clone() * a[k][k].clone() - a[i][k].clone() * a[k][j].clone();
                a[i][j] = num / prev.clone();
            }
        }
        prev = a[k][k].clone();
    }
    let det = if n == 0 { T::one() } else { a[n - 1][n - 1].clone() };
    if sign_flip {
        -det
    } else {
        det
    }
}

/// Leading principal minors `D_1, ..., D_n`, each computed exactly.
/// Bareiss without pivoting produces them as successive pivots; when a pivot
/// vanishes the remaining minors are computed directly.
pub fn leading_principal_minors<T: ExactInteger>(m: &SymmetricMatrix<T>) -> Vec<T> {
    let n = m.rank();
    let mut a = m.rows();
    let mut minors = Vec::with_capacity(n);
    let mut prev = T::one();
    for k in 0..n {
        let pivot = a[k][k].clone();
        minors.push(pivot.clone());
        if pivot.is_zero() {
            for size in (k + 2)..=n {
                let perm: Vec<usize> = (0..size).collect();
                minors.push(determinant(&principal_submatrix(m, &perm)));
            }
            return minors;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let num = a[i][j].clone() * pivot.clone() - a[i][k].clone() * a[k][j].clone();
                a[i][j] = num / prev.clone();
            }
        }
        prev = pivot;
    }
    minors
}

pub fn principal_submatrix<T: ExactInteger>(m: &SymmetricMatrix<T>, idx: &[usize]) -> SymmetricMatrix<T> {
    let mut out = SymmetricMatrix::zeros(idx.len());
    for (a, &i) in idx.iter().enumerate() {
        for (b, &j) in idx.iter().enumerate() {
            out.entries[a * idx.len() + b] = m.get(i, j).clone();
        }
    }
    out
}

/// Sylvester's criterion: `(-1)^k D_k > 0` for every leading minor.
pub fn is_negative_definite<T: ExactInteger>(m: &SymmetricMatrix<T>) -> bool {
    let n = m.rank();
    let mut a = m.rows();
    let mut prev = T::one();
    for k in 0..n {
        let pivot = a[k][k].clone();
        let ok = if k % 2 == 0 { pivot.is_negative() } else { pivot.is_positive() };
        if !ok {
            return false;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let num = a[i][j].clone() * pivot.clone() - a[i][k].clone() * a[k][j].clone();
                a[i][j] = num / prev.clone();
            }
        }
        prev = pivot;
    }
    true
}

pub fn is_positive_definite<T: ExactInteger>(m: &SymmetricMatrix<T>) -> bool {
    leading_principal_minors(m).iter().all(|d| d.is_positive())
}

/// Every diagonal entry even, i.e. `x·x` is even for every lattice vector.
pub fn is_even<T: ExactInteger>(m: &SymmetricMatrix<T>) -> bool {
    m.diagonal().iter().all(|d| d.is_even())
}

pub fn is_unimodular<T: ExactInteger>(m: &SymmetricMatrix<T>) -> bool {
    determinant(m).abs().is_one()
}

/// Counts of positive, negative and zero eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Inertia {
    pub fn signature(&self) -> i64 {
        self.positive as i64 - self.negative as i64
    }
}

/// Inertia by symmetric congruence elimination over the integers.
///
/// A nonzero diagonal pivot `p` splits off `<p>` and replaces the remaining
/// block `S` by `p*S - b bᵀ` with the sign of `p` folded in. When the whole
/// remaining diagonal vanishes, a nonzero off-diagonal entry `a` gives the
/// 2x2 block `[[0,a],[a,0]]`, which contributes one positive and one
/// negative eigenvalue; its Schur complement is scaled by `a²`.
pub fn inertia<T: ExactInteger>(m: &SymmetricMatrix<T>) -> Inertia {
    let mut a = m.rows();
    let mut res = Inertia { positive: 0, negative: 0, zero: 0 };
    loop {
        let n = a.len();
        if n == 0 {
            return res;
        }
        if let Some(p) = (0..n).find(|&i| !a[i][i].is_zero()) {
            swap_sym(&mut a, 0, p);
            let pivot = a[0][0].clone();
            if pivot.is_positive() {
                res.positive += 1;
            } else {
                res.negative += 1;
            }
            let sign = pivot.signum();
            let mut next = vec![vec![T::zero(); n - 1]; n - 1];
            for i in 1..n {
                for j in i..n {
                    let v = (pivot.clone() * a[i][j].clone() - a[i][0].clone() * a[0][j].clone()) * sign.clone();
                    next[i - 1][j - 1] = v.clone();
                    next[j - 1][i - 1] = v;
                }
            }
            a = reduce_content(next);
            continue;
        }
        let off = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).find(|&(i, j)| !a[i][j].is_zero());
        match off {
            None => {
                res.zero += n;
                return res;
            }
            Some((i, j)) => {
                swap_sym(&mut a, 0, i);
                let j = if j == 0 { i } else { j };
                swap_sym(&mut a, 1, j);
                res.positive += 1;
                res.negative += 1;
                let c = a[0][1].clone();
                let mut next = vec![vec![T::zero(); n - 2]; n - 2];
                for x in 2..n {
                    for y in x..n {
                        // c^2 * (S - Bᵀ P⁻¹ B) with P = [[0,c],[c,0]]
                        let v = c.clone() * c.clone() * a[x][y].clone()
                            - c.clone() * (a[0][x].clone() * a[1][y].clone() + a[1][x].clone() * a[0][y].clone());
                        next[x - 2][y - 2] = v.clone();
                        next[y - 2][x - 2] = v;
                    }
                }
                a = reduce_content(next);
            }
        }
    }
}

pub fn signature<T: ExactInteger>(m: &SymmetricMatrix<T>) -> i64 {
    inertia(m).signature()
}

fn swap_sym<T: Clone>(a: &mut [Vec<T>], i: usize, j: usize) {
    if i == j {
        return;
    }
    a.swap(i, j);
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

/// Divides a block by the (positive) gcd of its entries; inertia is unchanged.
fn reduce_content<T: ExactInteger>(mut a: Vec<Vec<T>>) -> Vec<Vec<T>> {
    let g = a.iter().flatten().fold(T::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for row in a.iter_mut() {
            for x in row.iter_mut() {
                *x = x.clone() / g.clone();
            }
        }
    }
    a
}

/// `vᵀ M⁻¹ v` computed exactly; `None` when `M` is singular.
#[allow(clippy::needless_range_loop)]
pub fn inverse_form_value(m: &SymmetricMatrix<BigInt>, v: &[BigInt]) -> Option<BigRational> {
    let n = m.rank();
    assert_eq!(v.len(), n);
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = (0..n).map(|j| BigRational::from_integer(m.get(i, j).clone())).collect();
            row.push(BigRational::from_integer(v[i].clone()));
            row
        })
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&r| !a[r][k].is_zero())?;
        a.swap(k, p);
        let pivot = a[k][k].clone();
        for x in a[k].iter_mut() {
            *x = x.clone() / pivot.clone();
        }
        for i in 0..n {
            if i != k && !a[i][k].is_zero() {
                let f = a[i][k].clone();
                for j in k..=n {
                    let t = f.clone() * a[k][j].clone();
                    a[i][j] = a[i][j].clone() - t;
                }
            }
        }
    }
    Some((0..n).fold(BigRational::zero(), |acc, i| acc + BigRational::from_integer(v[i].clone()) * a[i][n].clone()))
}

/// Why a form failed to be recognized as `-E8`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum E8Rejection {
    RankNotMultipleOf8,
    NotEven,
    NotUnimodular,
    NotNegativeDefinite,
}

impl Display for E8Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            E8Rejection::RankNotMultipleOf8 => "rank is not a multiple of 8",
            E8Rejection::NotEven => "form is not even",
            E8Rejection::NotUnimodular => "form is not unimodular",
            E8Rejection::NotNegativeDefinite => "form is not negative-definite",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum E8Verdict {
    /// Rank 8, even, unimodular, negative-definite: isometric to `-E8`.
    NegativeE8,
    /// Rank `8k` with `k >= 2` and all four predicates: same genus as
    /// `k(-E8)`, isometry not decided.
    GenusMatch {
        copies: usize,
    },
    Rejected {
        reasons: Vec<E8Rejection>,
    },
}

/// The four predicate values behind an `-E8` verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct E8Certificate {
    pub rank: usize,
    pub even: bool,
    pub unimodular: bool,
    pub negative_definite: bool,
    pub verdict: E8Verdict,
}

impl E8Certificate {
    pub fn is_negative_e8(&self) -> bool {
        self.verdict == E8Verdict::NegativeE8
    }
}

pub fn recognize_negative_e8<T: ExactInteger>(m: &SymmetricMatrix<T>) -> E8Certificate {
    let rank = m.rank();
    let even = is_even(m);
    let unimodular = is_unimodular(m);
    let negative_definite = is_negative_definite(m);
    let mut reasons = Vec::new();
    if rank == 0 || !rank.is_multiple_of(8) {
        reasons.push(E8Rejection::RankNotMultipleOf8);
    }
    if !even {
        reasons.push(E8Rejection::NotEven);
    }
    if !unimodular {
        reasons.push(E8Rejection::NotUnimodular);
    }
    if !negative_definite {
        reasons.push(E8Rejection::NotNegativeDefinite);
    }
    let verdict = if !reasons.is_empty() {
        E8Verdict::Rejected { reasons }
    } else if rank == 8 {
        E8Verdict::NegativeE8
    } else {
        E8Verdict::GenusMatch { copies: rank / 8 }
    };
    E8Certificate { rank, even, unimodular, negative_definite, verdict }
}

/// Summary of every lattice predicate, as printed by the `form` command.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormReport {
    pub rank: usize,
    pub determinant: String,
    pub even: bool,
    pub unimodular: bool,
    pub negative_definite: bool,
    pub signature: i64,
    pub inertia: Inertia,
    pub e8: E8Certificate,
}

pub fn form_report<T: ExactInteger>(m: &SymmetricMatrix<T>) -> FormReport {
    let inertia = inertia(m);
    FormReport {
        rank: m.rank(),
        determinant: determinant(m).to_string(),
        even: is_even(m),
        unimodular: is_unimodular(m),
        negative_definite: is_negative_definite(m),
        signature: inertia.signature(),
        inertia,
        e8: recognize_negative_e8(m),
    }
}
