//! Rokhlin `μ`, Neumann–Siebenmann `μ̄`, the correction term `d`, and the
//! constraints they put on definite spin fillings.
//!
//! `μ̄` comes from the Wu class of the minimal resolution. `d` follows
//! Némethi's computation for Seifert homology spheres in the form of
//! Can–Karakurt: with `Δ(i) = 1 + b0·i - Σ ⌈iβⱼ/αⱼ⌉`, `τ(0) = 0` and
//! `τ(i+1) = τ(i) + Δ(i)`, one has `d = (K² + s)/4 - 2·min τ`, where `s` is the
//! number of vertices and `K` the canonical class of the resolution.

use std::collections::BTreeSet;
use std::fmt::{self, Display};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{determinant, inertia, inverse_form_value, is_even, is_negative_definite, SymmetricMatrix};
use crate::seifert::{minimal_resolution, seifert_from_brieskorn, BrieskornSpec, SeifertData, SeifertError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvariantError {
    #[error("determinant {0} is even; the Wu class is not unique")]
    EvenDeterminant(String),
    #[error("(signature - w.w) = {0} is not divisible by 8")]
    NotDivisibleBy8(String),
    #[error("form is singular")]
    Singular,
    #[error("correction term {0} is not an integer")]
    NonIntegralD(String),
    #[error("sweep length overflows")]
    Overflow,
    #[error(transparent)]
    Seifert(#[from] SeifertError),
}

/// 0/1 coefficients of the characteristic vector `w` with `M·w ≡ diag(M)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WuClass {
    pub coefficients: Vec<u8>,
}

impl WuClass {
    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(|&c| c == 0)
    }

    pub fn as_vector(&self) -> Vec<BigInt> {
        self.coefficients.iter().map(|&c| BigInt::from(c)).collect()
    }
}

/// Unique mod-2 solution of `M·w = diag(M)`, by elimination over GF(2).
pub fn wu_class(m: &SymmetricMatrix<BigInt>) -> Result<WuClass, InvariantError> {
    let n = m.rank();
    let mut rows: Vec<Vec<u8>> = (0..n)
        .map(|i| {
            let mut r: Vec<u8> = (0..n).map(|j| u8::from(m.get(i, j).is_odd())).collect();
            r.push(u8::from(m.get(i, i).is_odd()));
            r
        })
        .collect();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| rows[r][col] == 1) else {
            return Err(InvariantError::EvenDeterminant(determinant(m).to_string()));
        };
        rows.swap(col, p);
        let pivot = rows[col].clone();
        for (i, r) in rows.iter_mut().enumerate() {
            if i != col && r[col] == 1 {
                for (x, y) in r.iter_mut().zip(&pivot) {
                    *x ^= y;
                }
            }
        }
    }
    Ok(WuClass { coefficients: rows.iter().map(|r| r[n]).collect() })
}

/// `(σ(M) - wᵀMw)/8` for the Wu class `w` of a unimodular plumbing form.
pub fn mu_bar_of_form(m: &SymmetricMatrix<BigInt>) -> Result<i64, InvariantError> {
    let w = wu_class(m)?;
    let ww = m.quadratic_value(&w.as_vector());
    let num = BigInt::from(inertia(m).signature()) - ww;
    let (q, r) = num.div_rem(&BigInt::from(8));
    if !r.is_zero() {
        return Err(InvariantError::NotDivisibleBy8(num.to_string()));
    }
    q.to_i64().ok_or(InvariantError::Overflow)
}

pub fn mu_bar(spec: &BrieskornSpec) -> i64 {
    mu_bar_of_form(&crate::seifert::resolve(spec).gram_matrix()).expect("Brieskorn resolutions are unimodular")
}

pub fn rokhlin_mu(spec: &BrieskornSpec) -> u8 {
    mu_bar(spec).rem_euclid(2) as u8
}

pub fn d_invariant(spec: &BrieskornSpec) -> i64 {
    d_invariant_seifert(&seifert_from_brieskorn(spec)).expect("Brieskorn data gives an integral d")
}

/// Correction term of the Seifert homology sphere with the given data.
pub fn d_invariant_seifert(data: &SeifertData) -> Result<i64, InvariantError> {
    if !data.is_homology_sphere() {
        return Err(SeifertError::NotHomologySphere(data.euler_times_product().to_string()).into());
    }
    let star = minimal_resolution(data)?;
    let m = star.gram_matrix();
    let s = m.rank();
    let k: Vec<BigInt> = m.diagonal().into_iter().map(|w| -w - 2).collect();
    let k2 = inverse_form_value(&m, &k).ok_or(InvariantError::Singular)?;
    let min_tau = min_tau(data)?;
    let d = (k2 + BigRational::from_integer(BigInt::from(s))) / BigRational::from_integer(BigInt::from(4))
        - BigRational::from_integer(BigInt::from(2 * min_tau));
    if !d.is_integer() {
        return Err(InvariantError::NonIntegralD(d.to_string()));
    }
    d.to_integer().to_i64().ok_or(InvariantError::Overflow)
}

/// Minimum of `τ` over `0 ≤ i ≤ max(ν-1, 1)·Πα + 1`, past which `Δ` stays
/// non-negative.
fn min_tau(data: &SeifertData) -> Result<i128, InvariantError> {
    let a: i128 = data.legs.iter().try_fold(1i128, |acc, &(x, _)| acc.checked_mul(x as i128)).ok_or(InvariantError::Overflow)?;
    let nu = data.legs.len().max(2) as i128 - 1;
    let end = nu.checked_mul(a).ok_or(InvariantError::Overflow)? + 1;
    let b0 = data.b0 as i128;
    let legs: Vec<(i128, i128)> = data.legs.iter().map(|&(x, y)| (x as i128, y as i128)).collect();
    let (mut tau, mut best) = (0i128, 0i128);
    for i in 0..end {
        let delta = 1 + b0 * i - legs.iter().map(|&(al, be)| Integer::div_ceil(&(i * be), &al)).sum::<i128>();
        tau += delta;
        best = best.min(tau);
    }
    Ok(best)
}

/// Sign of `ε`, or why it is not pinned down by `d` and `μ̄` alone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EpsilonHint {
    /// Only negative-definite spin fillings with `b₂ > 0` are allowed.
    Negative,
    /// Only positive-definite spin fillings with `b₂ > 0` are allowed.
    Positive,
    /// `b₂ = 0` is the only allowed value.
    Zero,
    /// No definite spin filling is allowed at all.
    Infinite,
    /// Both signs remain possible.
    Unknown,
}

impl EpsilonHint {
    pub fn sign(&self) -> Option<i64> {
        match self {
            EpsilonHint::Negative => Some(-1),
            EpsilonHint::Positive => Some(1),
            EpsilonHint::Zero => Some(0),
            _ => None,
        }
    }
}

impl Display for EpsilonHint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EpsilonHint::Negative => "-1",
            EpsilonHint::Positive => "+1",
            EpsilonHint::Zero => "0",
            EpsilonHint::Infinite => "infinite",
            EpsilonHint::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Feasibility {
    pub negdef: Vec<i64>,
    pub posdef: Vec<i64>,
    pub epsilon_hint: EpsilonHint,
}

/// `b₂` values allowed for a negative-definite spin filling of a sphere with
/// invariants `(d, μ̄)`: `0 ≤ b₂ ≤ 4d`, `b₂ ≡ -8μ̄ (16)`, `-8μ̄/9 ≤ b₂ ≤ -8μ̄`,
/// `8 | b₂`.
fn negdef_side(d: i64, mu_bar: i64) -> Vec<i64> {
    let top = (4 * d).min(-8 * mu_bar);
    (0..=top.max(-1)).step_by(8).filter(|&b| 9 * b >= -8 * mu_bar && (b + 8 * mu_bar).rem_euclid(16) == 0).collect()
}

/// Both sides; the positive-definite side applies the same rules to the
/// reversed orientation, where `d` and `μ̄` change sign.
pub fn ds_feasibility(d: i64, mu_bar: i64) -> Feasibility {
    let negdef = negdef_side(d, mu_bar);
    let posdef = negdef_side(-d, -mu_bar);
    let neg_pos = negdef.iter().any(|&b| b > 0);
    let pos_pos = posdef.iter().any(|&b| b > 0);
    let zero_ok = d == 0 && (negdef.contains(&0) || posdef.contains(&0));
    let epsilon_hint = match (neg_pos, pos_pos) {
        (true, true) => EpsilonHint::Unknown,
        (true, false) => EpsilonHint::Negative,
        (false, true) => EpsilonHint::Positive,
        (false, false) if zero_ok => EpsilonHint::Zero,
        _ => EpsilonHint::Infinite,
    };
    Feasibility { negdef, posdef, epsilon_hint }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub multiplicities: Vec<i64>,
    pub seifert: SeifertData,
    pub rank: usize,
    pub signature: i64,
    pub determinant: String,
    pub even: bool,
    pub unimodular: bool,
    pub negative_definite: bool,
    pub wu_class: WuClass,
    pub mu: u8,
    pub mu_bar: i64,
    pub d: i64,
    pub feasible_b2_negdef: Vec<i64>,
    pub feasible_b2_posdef: Vec<i64>,
    pub epsilon_hint: EpsilonHint,
}

pub fn invariant_report(spec: &BrieskornSpec) -> Result<InvariantReport, InvariantError> {
    let seifert = seifert_from_brieskorn(spec);
    let m = minimal_resolution(&seifert)?.gram_matrix();
    let det = determinant(&m);
    let mu_bar = mu_bar_of_form(&m)?;
    let d = d_invariant_seifert(&seifert)?;
    let feas = ds_feasibility(d, mu_bar);
    Ok(InvariantReport {
        multiplicities: spec.multiplicities().to_vec(),
        rank: m.rank(),
        signature: inertia(&m).signature(),
        unimodular: det.magnitude().is_one(),
        determinant: det.to_string(),
        even: is_even(&m),
        negative_definite: is_negative_definite(&m),
        wu_class: wu_class(&m)?,
        mu: mu_bar.rem_euclid(2) as u8,
        mu_bar,
        d,
        feasible_b2_negdef: feas.negdef,
        feasible_b2_posdef: feas.posdef,
        epsilon_hint: feas.epsilon_hint,
        seifert,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// `μ` and `μ̄` disagree mod 2.
    MuParity { mu: u8, mu_bar: i64 },
    /// A feasible `b₂` is not a multiple of 8.
    NotMultipleOf8 { b2: i64 },
    /// `b₂/8` has the wrong parity for `μ`.
    B2Parity { b2: i64, mu: u8 },
    /// `b₂/8` exceeds `|d|/2`.
    DsBound { b2: i64, d: i64 },
    /// Two feasible values on one side violate `β₂ ≤ 9β₁ + 8`.
    FurutaGap { low: i64, high: i64 },
    /// The hinted sign of `ε` disagrees with `μ̄·ε > 0` or `ε·d < 0`.
    EpsilonSign { epsilon: i64, mu_bar: i64, d: i64 },
}

impl Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MuParity { mu, mu_bar } => write!(f, "mu = {mu} but mu_bar = {mu_bar}"),
            Violation::NotMultipleOf8 { b2 } => write!(f, "b2 = {b2} is not a multiple of 8"),
            Violation::B2Parity { b2, mu } => write!(f, "b2/8 = {} has the wrong parity for mu = {mu}", b2 / 8),
            Violation::DsBound { b2, d } => write!(f, "b2/8 = {} exceeds |d|/2 = {}/2", b2 / 8, d.abs()),
            Violation::FurutaGap { low, high } => write!(f, "{high} > 9*{low} + 8"),
            Violation::EpsilonSign { epsilon, mu_bar, d } => write!(f, "epsilon {epsilon} inconsistent with mu_bar {mu_bar}, d {d}"),
        }
    }
}

pub fn consistency_checks(report: &InvariantReport) -> Vec<Violation> {
    let mut out = Vec::new();
    if i64::from(report.mu) != report.mu_bar.rem_euclid(2) {
        out.push(Violation::MuParity { mu: report.mu, mu_bar: report.mu_bar });
    }
    for side in [&report.feasible_b2_negdef, &report.feasible_b2_posdef] {
        for &b2 in side {
            if b2 % 8 != 0 {
                out.push(Violation::NotMultipleOf8 { b2 });
                continue;
            }
            if (b2 / 8).rem_euclid(2) != i64::from(report.mu) {
                out.push(Violation::B2Parity { b2, mu: report.mu });
            }
            if b2 / 4 > report.d.abs() {
                out.push(Violation::DsBound { b2, d: report.d });
            }
        }
        let sorted: BTreeSet<i64> = side.iter().copied().filter(|&b| b > 0).collect();
        let v: Vec<i64> = sorted.into_iter().collect();
        for (i, &low) in v.iter().enumerate() {
            for &high in &v[i + 1..] {
                if high > 9 * low + 8 {
                    out.push(Violation::FurutaGap { low, high });
                }
            }
        }
    }
    if let Some(eps) = report.epsilon_hint.sign().filter(|&e| e != 0) {
        if report.mu_bar * eps <= 0 || eps * report.d >= 0 {
            out.push(Violation::EpsilonSign { epsilon: eps, mu_bar: report.mu_bar, d: report.d });
        }
    }
    out
}
