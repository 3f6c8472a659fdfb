//! Brieskorn multiplicities, Seifert invariants and star-shaped resolutions.
//!
//! Orientation: `Σ(a₁,…,aₙ)` is the boundary of its negative-definite
//! resolution, so its Seifert data has Euler number `e = -b0 + Σ βᵢ/αᵢ =
//! -1/Παᵢ`, with `0 < βᵢ < αᵢ`. Legs expand as Hirzebruch–Jung continued
//! fractions `αᵢ/βᵢ = x₁ - 1/(x₂ - 1/(…))`, every `xⱼ ≥ 2`.

use std::fmt::{self, Display};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::StarGraph;
use crate::lattice::is_negative_definite;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeifertError {
    #[error("a Brieskorn sphere needs at least 3 multiplicities, got {0}")]
    TooFewMultiplicities(usize),
    #[error("multiplicity {0} is below the allowed minimum")]
    MultiplicityTooSmall(i64),
    #[error("multiplicities {0} and {1} are not coprime")]
    NotCoprime(i64, i64),
    #[error("invalid Seifert leg ({alpha},{beta}); need 0 < beta < alpha and gcd 1")]
    InvalidLeg { alpha: i64, beta: i64 },
    #[error("not an integral homology sphere: e * prod(alpha) = {0}")]
    NotHomologySphere(String),
    #[error("homology sphere with the reversed orientation (e > 0)")]
    ReversedOrientation,
    #[error("weight {weight} at {place} is outside the minimal-graph range")]
    NonMinimalWeight { place: String, weight: i64 },
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
}

/// Pairwise coprime multiplicities, each at least 2, stored ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct BrieskornSpec(Vec<i64>);

impl BrieskornSpec {
    pub fn new(mut multiplicities: Vec<i64>) -> Result<Self, SeifertError> {
        if multiplicities.len() < 3 {
            return Err(SeifertError::TooFewMultiplicities(multiplicities.len()));
        }
        if let Some(&a) = multiplicities.iter().find(|&&a| a < 2) {
            return Err(SeifertError::MultiplicityTooSmall(a));
        }
        check_coprime(&multiplicities)?;
        multiplicities.sort_unstable();
        Ok(Self(multiplicities))
    }

    pub fn multiplicities(&self) -> &[i64] {
        &self.0
    }

    pub fn product(&self) -> Result<i128, SeifertError> {
        self.0.iter().try_fold(1i128, |acc, &a| acc.checked_mul(a as i128)).ok_or(SeifertError::Overflow("product of multiplicities"))
    }
}

impl TryFrom<Vec<i64>> for BrieskornSpec {
    type Error = SeifertError;
    fn try_from(v: Vec<i64>) -> Result<Self, Self::Error> {
        Self::new(v)
    }
}

impl From<BrieskornSpec> for Vec<i64> {
    fn from(s: BrieskornSpec) -> Self {
        s.0
    }
}

impl Display for BrieskornSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "Σ({})", parts.join(","))
    }
}

fn check_coprime(ms: &[i64]) -> Result<(), SeifertError> {
    for i in 0..ms.len() {
        for j in (i + 1)..ms.len() {
            if ms[i].gcd(&ms[j]) != 1 {
                return Err(SeifertError::NotCoprime(ms[i], ms[j]));
            }
        }
    }
    Ok(())
}

/// Unnormalized Seifert invariants `(b0; (α₁,β₁), …)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeifertData {
    pub b0: i64,
    pub legs: Vec<(i64, i64)>,
}

impl SeifertData {
    pub fn new(b0: i64, legs: Vec<(i64, i64)>) -> Result<Self, SeifertError> {
        for &(alpha, beta) in &legs {
            if !(0 < beta && beta < alpha) || alpha.gcd(&beta) != 1 {
                return Err(SeifertError::InvalidLeg { alpha, beta });
            }
        }
        Ok(Self { b0, legs })
    }

    /// Seifert data of the link with the given multiplicities. Entries equal
    /// to 1 carry no exceptional fibre and are dropped, so `(2,3,1)` gives
    /// the data of `S³`.
    pub fn from_multiplicities(ms: &[i64]) -> Result<Self, SeifertError> {
        if let Some(&a) = ms.iter().find(|&&a| a < 1) {
            return Err(SeifertError::MultiplicityTooSmall(a));
        }
        check_coprime(ms)?;
        let big: i128 =
            ms.iter().try_fold(1i128, |acc, &a| acc.checked_mul(a as i128)).ok_or(SeifertError::Overflow("product of multiplicities"))?;
        let mut legs = Vec::new();
        let mut numerator: i128 = 1;
        for &alpha in ms.iter().filter(|&&a| a > 1) {
            let a = alpha as i128;
            let rest = (big / a).rem_euclid(a);
            let inv = rest.extended_gcd(&a).x.rem_euclid(a);
            let beta = (a - inv) % a;
            legs.push((alpha, beta as i64));
            numerator = numerator
                .checked_add(beta.checked_mul(big / a).ok_or(SeifertError::Overflow("Seifert congruences"))?)
                .ok_or(SeifertError::Overflow("Seifert congruences"))?;
        }
        debug_assert_eq!(numerator % big, 0);
        let b0 = i64::try_from(numerator / big).map_err(|_| SeifertError::Overflow("b0"))?;
        Ok(Self { b0, legs })
    }

    /// `e = -b0 + Σ β/α`.
    pub fn euler_number(&self) -> BigRational {
        let mut e = BigRational::from_integer(BigInt::from(-self.b0));
        for &(a, b) in &self.legs {
            e += BigRational::new(BigInt::from(b), BigInt::from(a));
        }
        e
    }

    pub fn alpha_product(&self) -> BigInt {
        self.legs.iter().fold(BigInt::one(), |acc, &(a, _)| acc * a)
    }

    /// `e · Πα`, an integer for every Seifert space.
    pub fn euler_times_product(&self) -> BigInt {
        let e = self.euler_number() * BigRational::from_integer(self.alpha_product());
        e.to_integer()
    }

    pub fn is_homology_sphere(&self) -> bool {
        let pairwise = (0..self.legs.len()).all(|i| ((i + 1)..self.legs.len()).all(|j| self.legs[i].0.gcd(&self.legs[j].0) == 1));
        pairwise && self.euler_times_product().abs().is_one()
    }
}

impl Display for SeifertData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.b0)?;
        for (a, b) in &self.legs {
            write!(f, "; ({a},{b})")?;
        }
        f.write_str(")")
    }
}

pub fn seifert_from_brieskorn(spec: &BrieskornSpec) -> SeifertData {
    SeifertData::from_multiplicities(spec.multiplicities()).expect("validated spec has valid Seifert data")
}

/// Hirzebruch–Jung expansion of `a/b` with `0 < b < a` (or `b == 0` giving
/// the empty expansion); every term is at least 2.
pub fn hj_expansion(a: i64, b: i64) -> Vec<i64> {
    let (mut a, mut b) = (a, b);
    let mut xs = Vec::new();
    while b > 0 {
        let x = Integer::div_ceil(&a, &b);
        xs.push(x);
        (a, b) = (b, x * b - a);
    }
    xs
}

/// Inverse of [`hj_expansion`]: `(α, β)` with `α/β = [x₁,…,x_L]`, where `β`
/// is the numerator of the tail `[x₂,…,x_L]` (1 for an empty tail).
pub fn hj_value(xs: &[i64]) -> Option<(i64, i64)> {
    let (mut num, mut den): (i64, i64) = (1, 0);
    for &x in xs.iter().rev() {
        let next = x.checked_mul(num)?.checked_sub(den)?;
        den = num;
        num = next;
    }
    Some((num, den))
}

pub fn minimal_resolution(data: &SeifertData) -> Result<StarGraph, SeifertError> {
    let mut branches = Vec::with_capacity(data.legs.len());
    for &(alpha, beta) in &data.legs {
        if !(0 < beta && beta < alpha) {
            return Err(SeifertError::InvalidLeg { alpha, beta });
        }
        let xs = hj_expansion(alpha, beta);
        if hj_value(&xs) != Some((alpha, beta)) {
            return Err(SeifertError::InvalidLeg { alpha, beta });
        }
        branches.push(xs.into_iter().map(|x| -x).collect());
    }
    Ok(StarGraph::new(-data.b0, branches))
}

pub fn read_seifert(star: &StarGraph) -> Result<SeifertData, SeifertError> {
    if star.central_weight > -1 {
        return Err(SeifertError::NonMinimalWeight { place: "centre".into(), weight: star.central_weight });
    }
    let mut legs = Vec::with_capacity(star.branches.len());
    for (i, br) in star.branches.iter().enumerate() {
        if let Some(&w) = br.iter().find(|&&w| w > -2) {
            return Err(SeifertError::NonMinimalWeight { place: format!("branch {}", i + 1), weight: w });
        }
        if br.is_empty() {
            continue;
        }
        let xs: Vec<i64> = br.iter().map(|w| -w).collect();
        legs.push(hj_value(&xs).ok_or(SeifertError::Overflow("continued fraction"))?);
    }
    Ok(SeifertData { b0: -star.central_weight, legs })
}

pub fn brieskorn_from_seifert(data: &SeifertData) -> Result<BrieskornSpec, SeifertError> {
    if !data.is_homology_sphere() {
        return Err(SeifertError::NotHomologySphere(data.euler_times_product().to_string()));
    }
    if data.euler_number().is_positive() {
        return Err(SeifertError::ReversedOrientation);
    }
    BrieskornSpec::new(data.legs.iter().map(|&(a, _)| a).collect())
}

/// Definition of a minimal graph: negative-definite form, centre weight at
/// most -1, branch weights at most -2.
pub fn is_minimal(star: &StarGraph) -> bool {
    star.central_weight <= -1 && star.branches.iter().flatten().all(|&w| w <= -2) && is_negative_definite(&star.gram_matrix())
}

/// Resolution of `Σ(a₁,…,aₙ)`.
pub fn resolve(spec: &BrieskornSpec) -> StarGraph {
    minimal_resolution(&seifert_from_brieskorn(spec)).expect("Brieskorn data expands")
}
