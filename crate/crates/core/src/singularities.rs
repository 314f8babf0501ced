//! Semigroups of plane-curve branches and of quasi-ordinary polynomials,
//! computed from their characteristic exponents.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::frobenius::frobenius_formula;
use crate::lattice::GeneratorSystem;
use crate::linalg::{gcd_maximal_minors, IntMatrix};
use crate::semigroup::{membership_bruteforce, AffineSemigroup};

/// Characteristic exponents `(n; m₁, …, m_h)` of a plane branch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveExponents {
    pub n: BigInt,
    pub m: Vec<BigInt>,
}

impl CurveExponents {
    pub fn new(n: BigInt, m: Vec<BigInt>) -> Self {
        Self { n, m }
    }

    pub fn from_i64(n: i64, m: &[i64]) -> Self {
        Self::new(n.into(), m.iter().map(|&x| x.into()).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveSemigroupData {
    /// `r₀, …, r_h`.
    pub generators: Vec<BigInt>,
    /// `d₁, …, d_{h+1}`.
    pub d: Vec<BigInt>,
    /// `e_k = d_k / d_{k+1}`.
    pub e: Vec<BigInt>,
    pub conductor: BigInt,
    pub milnor: BigInt,
    pub gap_count: BigInt,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidExponents(msg.into())
}

pub fn curve_semigroup(exponents: &CurveExponents) -> Result<CurveSemigroupData> {
    let CurveExponents { n, m } = exponents;
    if n < &BigInt::from(2) {
        return Err(invalid(format!("multiplicity n = {n} must be at least 2")));
    }
    if m.is_empty() {
        return Err(invalid("at least one characteristic exponent is required"));
    }
    if &m[0] <= n {
        return Err(invalid(format!("m₁ = {} must exceed n = {n}", m[0])));
    }
    if let Some(k) = m.windows(2).position(|w| w[0] >= w[1]) {
        return Err(invalid(format!("exponents must increase strictly (m{} ≥ m{})", k + 1, k + 2)));
    }

    let mut d = vec![n.clone()];
    for (k, mk) in m.iter().enumerate() {
        let next = mk.gcd(&d[k]);
        if next >= d[k] {
            return Err(invalid(format!("d{} = {} does not drop: d{} divides m{}", k + 2, next, k + 1, k + 1)));
        }
        d.push(next);
    }
    if !d.last().unwrap().is_one() {
        return Err(invalid(format!("d{} = {} instead of 1", d.len(), d.last().unwrap())));
    }

    let mut r = vec![n.clone(), m[0].clone()];
    for k in 2..=m.len() {
        let next = &r[k - 1] * &d[k - 2] / &d[k - 1] + &m[k - 1] - &m[k - 2];
        r.push(next);
    }
    let e: Vec<BigInt> = d.windows(2).map(|w| &w[0] / &w[1]).collect();

    for k in 1..r.len() {
        let preceding: Vec<Vec<BigInt>> = r[..k].iter().map(|x| vec![x.clone()]).collect();
        let target = vec![&e[k - 1] * &r[k]];
        if membership_bruteforce(&preceding, &target).is_none() {
            return Err(invalid(format!("e{k}·r{k} = {} is not in the semigroup of r₀…r{}", target[0], k - 1)));
        }
    }

    let conductor: BigInt = e.iter().zip(&r[1..]).map(|(ek, rk)| (ek - 1) * rk).sum::<BigInt>() - n + 1;
    if conductor.is_odd() {
        return Err(invalid(format!("conductor {conductor} is odd")));
    }
    Ok(CurveSemigroupData { gap_count: &conductor / 2, milnor: conductor.clone(), conductor, generators: r, d, e })
}

/// Whether a strictly increasing sequence `r₀ < … < r_h` has the shape of a
/// branch semigroup: coprime, with `r_k > r_{k−1}·d_{k−1}/d_k` for `k ≥ 2`.
pub fn zariski_validate(r: &[BigInt]) -> bool {
    if r.is_empty() || r[0] <= BigInt::zero() || r.windows(2).any(|w| w[0] >= w[1]) {
        return false;
    }
    let mut d = vec![r[0].clone()];
    for k in 1..r.len() {
        d.push(r[k].gcd(&d[k - 1]));
    }
    if !d.last().unwrap().is_one() {
        return false;
    }
    (2..r.len()).all(|k| r[k] > &r[k - 1] * &d[k - 2] / &d[k - 1])
}

/// Exponents `(n; m₁ < … < m_h)` of a quasi-ordinary polynomial, with
/// `m_k ∈ ℕᵉ` increasing coordinatewise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QOExponents {
    pub e: usize,
    pub n: BigInt,
    pub m: Vec<Vec<BigInt>>,
}

impl QOExponents {
    pub fn new(e: usize, n: BigInt, m: Vec<Vec<BigInt>>) -> Self {
        Self { e, n, m }
    }

    pub fn from_i64(e: usize, n: i64, m: &[&[i64]]) -> Self {
        Self::new(e, n.into(), m.iter().map(|v| v.iter().map(|&x| x.into()).collect()).collect())
    }
}

#[derive(Clone, Debug)]
pub struct QOSemigroupData {
    pub semigroup: AffineSemigroup,
    /// `r₁, …, r_h`; the leading generators are `n` times the unit vectors.
    pub r: Vec<Vec<BigInt>>,
    /// `D₁ = nᵉ, …, D_{h+1} = n^{e−1}`.
    pub d: Vec<BigInt>,
    pub e_indices: Vec<BigInt>,
    pub g: Vec<BigInt>,
}

fn scaled_identity(e: usize, n: &BigInt) -> Vec<Vec<BigInt>> {
    (0..e).map(|i| (0..e).map(|j| if i == j { n.clone() } else { BigInt::zero() }).collect()).collect()
}

fn prefix_minor_gcds(e: usize, n: &BigInt, vectors: &[Vec<BigInt>]) -> Result<Vec<BigInt>> {
    let mut cols = scaled_identity(e, n);
    let mut out = vec![n.pow(e as u32)];
    for v in vectors {
        cols.push(v.clone());
        out.push(gcd_maximal_minors(&IntMatrix::from_columns(&cols)?)?);
    }
    Ok(out)
}

pub fn qo_semigroup(exponents: &QOExponents) -> Result<QOSemigroupData> {
    let QOExponents { e, n, m } = exponents;
    let e = *e;
    if e == 0 {
        return Err(invalid("dimension must be positive"));
    }
    if n < &BigInt::from(2) {
        return Err(invalid(format!("multiplicity n = {n} must be at least 2")));
    }
    if m.is_empty() {
        return Err(invalid("at least one characteristic exponent is required"));
    }
    if m.iter().any(|v| v.len() != e) {
        return Err(invalid(format!("every exponent must have {e} coordinates")));
    }
    if m.iter().flatten().any(Signed::is_negative) || m[0].iter().all(Zero::is_zero) {
        return Err(invalid("exponents must be nonnegative and m₁ nonzero"));
    }
    if let Some(k) = m.windows(2).position(|w| w[0].iter().zip(&w[1]).any(|(a, b)| a >= b)) {
        return Err(invalid(format!("m{} < m{} fails coordinatewise", k + 1, k + 2)));
    }

    let d = prefix_minor_gcds(e, n, m)?;
    if let Some(k) = d.windows(2).position(|w| w[1] >= w[0]) {
        return Err(invalid(format!("D{} = {} does not drop below D{} = {}", k + 2, d[k + 1], k + 1, d[k])));
    }
    let expected = n.pow(e as u32 - 1);
    if d.last().unwrap() != &expected {
        return Err(invalid(format!("D{} = {} instead of n^(e−1) = {expected}", d.len(), d.last().unwrap())));
    }

    let mut r = vec![m[0].clone()];
    for k in 2..=m.len() {
        let next: Vec<BigInt> =
            (0..e).map(|i| &r[k - 2][i] * &d[k - 2] / &d[k - 1] + &m[k - 1][i] - &m[k - 2][i]).collect();
        r.push(next);
    }
    let d_tilde = prefix_minor_gcds(e, n, &r)?;
    if d_tilde != d {
        return Err(invalid("the generators r_k change the minor gcds of the exponents"));
    }

    let mut generators = scaled_identity(e, n);
    generators.extend(r.iter().cloned());
    let semigroup = AffineSemigroup::new(GeneratorSystem::new(e, generators)?)?;
    if !semigroup.conditions().all_hold() {
        return Err(Error::ConditionsUnmet(Box::new(semigroup.conditions().clone())));
    }
    let g = frobenius_formula(semigroup.system(), semigroup.chain());
    Ok(QOSemigroupData {
        e_indices: semigroup.chain().indices().to_vec(),
        d: semigroup.chain().d().to_vec(),
        semigroup,
        r,
        g,
    })
}
