//! Brute-force verification on finite boxes.
//!
//! Nothing here uses the chain formulas: semigroup elements come from a
//! dynamic program over a dense grid, or from the minimal elements of each
//! coset of the leading lattice when the grid would be too large, so these
//! routines can check the Frobenius vector and conductor claims
//! independently.

use num_bigint::BigInt;
use num_integer::Integer;
use std::collections::{HashMap, VecDeque};

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::frobenius::{beyond_frobenius, frobenius_formula};
use crate::lattice::GeneratorSystem;
use crate::linalg::{adjugate, determinant};
use crate::semigroup::AffineSemigroup;

const MAX_GRID_CELLS: u64 = 400_000_000;

/// Inclusive box `lower ≤ x ≤ upper`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxSpec {
    lower: Vec<BigInt>,
    upper: Vec<BigInt>,
}

impl BoxSpec {
    pub fn new(lower: Vec<BigInt>, upper: Vec<BigInt>) -> Result<Self> {
        if lower.len() != upper.len() || lower.is_empty() {
            return Err(Error::Dimension("box bounds must have the same positive length".into()));
        }
        if lower.iter().zip(&upper).any(|(l, u)| l > u) {
            return Err(Error::Dimension("box lower bound exceeds upper bound".into()));
        }
        Ok(Self { lower, upper })
    }

    pub fn from_i64(lower: &[i64], upper: &[i64]) -> Result<Self> {
        Self::new(lower.iter().map(|&x| x.into()).collect(), upper.iter().map(|&x| x.into()).collect())
    }

    pub fn lower(&self) -> &[BigInt] {
        &self.lower
    }

    pub fn upper(&self) -> &[BigInt] {
        &self.upper
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        v.len() == self.lower.len() && v.iter().zip(&self.lower).zip(&self.upper).all(|((x, l), u)| l <= x && x <= u)
    }

    /// All integer points, lexicographically.
    pub fn points(&self) -> Result<Vec<Vec<BigInt>>> {
        let lower = to_i64s(&self.lower)?;
        let upper = to_i64s(&self.upper)?;
        let mut out = Vec::new();
        let mut p = lower.clone();
        loop {
            out.push(p.iter().map(|&x| BigInt::from(x)).collect());
            if !step(&mut p, &lower, &upper) {
                break;
            }
        }
        Ok(out)
    }
}

fn to_i64s(v: &[BigInt]) -> Result<Vec<i64>> {
    v.iter().map(|x| x.to_i64().ok_or_else(|| Error::TooLarge(format!("coordinate {x}")))).collect()
}

/// Odometer step over `[lower, upper]`, last coordinate fastest.
fn step(p: &mut [i64], lower: &[i64], upper: &[i64]) -> bool {
    for i in (0..p.len()).rev() {
        if p[i] < upper[i] {
            p[i] += 1;
            return true;
        }
        p[i] = lower[i];
    }
    false
}

/// Elements of `Γ` inside a box, stored on a dense grid over `[0, upper]`.
#[derive(Clone, Debug)]
pub struct SemigroupBox {
    bounds: BoxSpec,
    extent: Vec<i64>,
    strides: Vec<usize>,
    cells: Vec<bool>,
}

impl SemigroupBox {
    fn index(&self, p: &[i64]) -> Option<usize> {
        let mut idx = 0;
        for ((&x, &ext), &s) in p.iter().zip(&self.extent).zip(&self.strides) {
            if x < 0 || x > ext {
                return None;
            }
            idx += x as usize * s;
        }
        Some(idx)
    }

    /// Membership for points of the box; `false` outside it.
    pub fn contains(&self, v: &[BigInt]) -> bool {
        if !self.bounds.contains(v) {
            return false;
        }
        match to_i64s(v).ok().and_then(|p| self.index(&p)) {
            Some(i) => self.cells[i],
            None => false,
        }
    }

    pub fn contains_i64(&self, p: &[i64]) -> bool {
        let inside = p
            .iter()
            .zip(&self.bounds.lower)
            .zip(&self.bounds.upper)
            .all(|((&x, l), u)| BigInt::from(x) >= *l && BigInt::from(x) <= *u);
        inside && self.index(p).is_some_and(|i| self.cells[i])
    }

    /// Elements inside the box, lexicographically.
    pub fn elements(&self) -> Vec<Vec<BigInt>> {
        let Ok(points) = clip_to_grid(&self.bounds, &self.extent) else { return Vec::new() };
        let Some((lower, upper)) = points else { return Vec::new() };
        let mut out = Vec::new();
        let mut p = lower.clone();
        loop {
            if self.index(&p).is_some_and(|i| self.cells[i]) {
                out.push(p.iter().map(|&x| BigInt::from(x)).collect());
            }
            if !step(&mut p, &lower, &upper) {
                break;
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.elements().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Intersection of the box with `[0, extent]`, or `None` if empty.
fn clip_to_grid(bounds: &BoxSpec, extent: &[i64]) -> Result<Option<(Vec<i64>, Vec<i64>)>> {
    let lower: Vec<i64> = to_i64s(bounds.lower())?.into_iter().map(|x| x.max(0)).collect();
    let upper: Vec<i64> = to_i64s(bounds.upper())?.iter().zip(extent).map(|(&u, &e)| u.min(e)).collect();
    if lower.iter().zip(&upper).any(|(l, u)| l > u) {
        return Ok(None);
    }
    Ok(Some((lower, upper)))
}

/// All elements of `Γ(generators)` inside `bounds`, by dynamic programming
/// from `0` over the grid `[0, upper]`.
pub fn enumerate_semigroup(generators: &[Vec<BigInt>], bounds: &BoxSpec) -> Result<SemigroupBox> {
    let dim = bounds.lower.len();
    if generators.iter().any(|g| g.len() != dim) {
        return Err(Error::Dimension("generator length differs from box dimension".into()));
    }
    let extent: Vec<i64> = to_i64s(&bounds.upper)?.into_iter().map(|u| u.max(-1)).collect();
    let empty = extent.iter().any(|&x| x < 0);
    let mut strides = vec![0usize; dim];
    let mut total: u64 = 1;
    for i in (0..dim).rev() {
        strides[i] = total as usize;
        let side = if empty { 0 } else { extent[i] as u64 + 1 };
        total = total
            .checked_mul(side)
            .filter(|&t| t <= MAX_GRID_CELLS)
            .ok_or_else(|| Error::TooLarge("semigroup grid".into()))?;
    }
    let mut cells = vec![false; total as usize];
    if !empty {
        let gens: Vec<(Vec<i64>, usize)> = generators
            .iter()
            .filter_map(|g| {
                let g = to_i64s(g).ok()?;
                if g.iter().any(|&x| x < 0) || g.iter().zip(&extent).any(|(x, e)| x > e) || g.iter().all(|&x| x == 0) {
                    return None;
                }
                let offset = g.iter().zip(&strides).map(|(&x, &s)| x as usize * s).sum();
                Some((g, offset))
            })
            .collect();
        let zero = vec![0i64; dim];
        let mut p = zero.clone();
        let mut idx = 0usize;
        cells[0] = true;
        while step(&mut p, &zero, &extent) {
            idx += 1;
            cells[idx] = gens.iter().any(|(g, off)| g.iter().zip(&p).all(|(a, b)| a <= b) && cells[idx - off]);
        }
    }
    Ok(SemigroupBox { bounds: bounds.clone(), extent, strides, cells })
}

/// Largest integer outside `⟨generators⟩`, for coprime generators `≥ 2`.
pub fn frobenius_number_dp(generators: &[BigInt]) -> Result<BigInt> {
    if generators.is_empty() || generators.iter().any(|g| g < &BigInt::from(2)) {
        return Err(Error::InvalidSystem("generators must all be at least 2".into()));
    }
    let g = generators.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_one() {
        return Err(Error::NotCoprime(format!("gcd of generators is {g}")));
    }
    let lo = generators.iter().min().unwrap();
    let hi = generators.iter().max().unwrap();
    // Schur: the Frobenius number is at most (min − 1)(max − 1) − 1
    let bound: BigInt = (lo - 1u32) * (hi - 1u32) - 1u32;
    let bound = bound.max(BigInt::zero());
    let n = bound
        .to_usize()
        .filter(|&n| (n as u64) < MAX_GRID_CELLS)
        .ok_or_else(|| Error::TooLarge(format!("sieve up to {bound}")))?;
    let gens: Vec<usize> = generators.iter().filter_map(ToPrimitive::to_usize).collect();
    let mut reach = vec![false; n + 1];
    reach[0] = true;
    for i in 1..=n {
        reach[i] = gens.iter().any(|&a| a <= i && reach[i - a]);
    }
    let largest = (0..=n).rev().find(|&i| !reach[i]).map_or(BigInt::from(-1), BigInt::from);
    Ok(largest)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theorem1Verdict {
    pub holds: bool,
    pub g_in_semigroup: bool,
    /// Lexicographically first group point beyond `g` missing from `Γ`.
    pub counterexample: Option<Vec<BigInt>>,
    pub points_checked: u64,
    pub checked_box: BoxSpec,
}

/// `g + margin·(v₁ + … + v_e)`, the upper corner of the verification box.
fn margin_corner(semigroup: &AffineSemigroup, base: &[BigInt], margin: u64) -> Vec<BigInt> {
    let mut upper = base.to_vec();
    for v in semigroup.system().leading() {
        for (u, x) in upper.iter_mut().zip(v) {
            *u += x * margin;
        }
    }
    upper
}

/// Membership in `Γ` far from the origin, where a dense grid from `0` is
/// out of reach.
///
/// Writing `Γ₀` for the monoid of the leading generators, `Γ` is a union of
/// translates `Σ c_k u_k + Γ₀` over the extra generators `u_k`. Within one
/// coset of `ℤᵉ / G₀` those translates are ordered by their coordinates in
/// the leading basis, so `Γ` is determined by the minimal translates of each
/// coset. They are found by a breadth-first search over `c` that drops any
/// translate dominated by one already seen in its coset.
#[derive(Clone, Debug)]
pub struct CosetMinima {
    /// Adjugate of the leading matrix, oriented so that `det > 0`.
    adj: Vec<Vec<i128>>,
    det: i128,
    minima: HashMap<Vec<i128>, Vec<Vec<i128>>>,
}

const MAX_COSET_STATES: usize = 5_000_000;

impl CosetMinima {
    pub fn new(system: &GeneratorSystem) -> Result<Self> {
        let leading = system.leading_matrix();
        let det = determinant(&leading)?;
        let adj = adjugate(&leading)?;
        let sign = if det.is_negative() { -1 } else { 1 };
        let too_large = || Error::TooLarge("leading adjugate".into());
        let det = det.abs().to_i128().ok_or_else(too_large)?;
        let adj: Vec<Vec<i128>> = (0..adj.rows())
            .map(|r| (0..adj.cols()).map(|c| adj.get(r, c).to_i128().map(|x| sign * x).ok_or_else(too_large)).collect())
            .collect::<Result<_>>()?;
        let mut oracle = Self { adj, det, minima: HashMap::new() };
        let steps: Vec<Vec<i128>> = system.extras().iter().map(|u| oracle.scaled(u)).collect::<Result<_>>()?;

        let zero = vec![0i128; system.dim()];
        oracle.minima.insert(oracle.key(&zero), vec![zero.clone()]);
        let mut queue = VecDeque::from([zero]);
        let mut states = 1usize;
        while let Some(y) = queue.pop_front() {
            for s in &steps {
                let next: Vec<i128> = y.iter().zip(s).map(|(a, b)| a + b).collect();
                let key = oracle.key(&next);
                let coset = oracle.minima.entry(key).or_default();
                if coset.iter().any(|m| dominated(&next, m)) {
                    continue;
                }
                coset.retain(|m| !dominated(m, &next));
                coset.push(next.clone());
                queue.push_back(next);
                states += 1;
                if states > MAX_COSET_STATES {
                    return Err(Error::TooLarge("coset search".into()));
                }
            }
        }
        Ok(oracle)
    }

    fn scaled(&self, x: &[BigInt]) -> Result<Vec<i128>> {
        let x: Vec<i128> = x
            .iter()
            .map(|v| {
                v.to_i128().filter(|v| v.abs() < 1 << 80).ok_or_else(|| Error::TooLarge(format!("coordinate {v}")))
            })
            .collect::<Result<_>>()?;
        Ok(self.adj.iter().map(|row| row.iter().zip(&x).map(|(a, b)| a * b).sum()).collect())
    }

    fn key(&self, y: &[i128]) -> Vec<i128> {
        y.iter().map(|v| v.rem_euclid(self.det)).collect()
    }

    /// Number of cosets of `ℤᵉ / G₀` that meet `Γ`.
    pub fn coset_count(&self) -> usize {
        self.minima.len()
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        let Ok(y) = self.scaled(v) else { return false };
        self.minima.get(&self.key(&y)).is_some_and(|ms| ms.iter().any(|m| dominated(&y, m)))
    }
}

/// `x ≥ m` coordinatewise.
fn dominated(x: &[i128], m: &[i128]) -> bool {
    x.iter().zip(m).all(|(a, b)| a >= b)
}

/// Grid cells above which [`verify_theorem1`] switches to [`CosetMinima`].
const MAX_THEOREM1_GRID: u64 = 20_000_000;

enum Oracle {
    Grid(SemigroupBox),
    Cosets(CosetMinima),
}

impl Oracle {
    fn for_box(system: &GeneratorSystem, upper: &[BigInt]) -> Result<Self> {
        let upper: Vec<BigInt> = upper.iter().map(|x| x.max(&BigInt::zero()).clone()).collect();
        let cells = upper.iter().try_fold(1u64, |acc, u| u.to_u64().and_then(|u| acc.checked_mul(u + 1)));
        if cells.is_some_and(|c| c <= MAX_THEOREM1_GRID) {
            let bounds = BoxSpec::new(vec![BigInt::zero(); upper.len()], upper)?;
            Ok(Self::Grid(enumerate_semigroup(system.generators(), &bounds)?))
        } else {
            Ok(Self::Cosets(CosetMinima::new(system)?))
        }
    }

    fn contains(&self, v: &[BigInt]) -> bool {
        match self {
            Self::Grid(grid) => grid.contains(v),
            Self::Cosets(c) => c.contains(v),
        }
    }
}

/// Checks, on the box `g + [0, margin·(v₁ + … + v_e)]`, that `g ∉ Γ` and that
/// every group point strictly beyond `g` lies in `Γ`.
pub fn verify_theorem1(semigroup: &AffineSemigroup, g: &[BigInt], margin: u64) -> Result<Theorem1Verdict> {
    let chain = semigroup.chain();
    let upper = margin_corner(semigroup, g, margin);
    let bounds = BoxSpec::new(g.to_vec(), upper.clone())?;
    let oracle = Oracle::for_box(semigroup.system(), &upper)?;
    let g_in_semigroup = oracle.contains(g);

    let lower = to_i64s(g)?;
    let top = to_i64s(&upper)?;
    let mut p = lower.clone();
    let mut points_checked = 0u64;
    let mut counterexample = None;
    loop {
        let big: Vec<BigInt> = p.iter().map(|&x| BigInt::from(x)).collect();
        if beyond_frobenius(semigroup, g, &big) && chain.contains(&big, chain.depth())? {
            points_checked += 1;
            if !oracle.contains(&big) {
                counterexample = Some(big);
                break;
            }
        }
        if !step(&mut p, &lower, &top) {
            break;
        }
    }
    Ok(Theorem1Verdict {
        holds: !g_in_semigroup && counterexample.is_none(),
        g_in_semigroup,
        counterexample,
        points_checked,
        checked_box: bounds,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConductorVerdict {
    /// Every interior lattice point of the box dominates some minimal point.
    pub covered: bool,
    pub uncovered: Option<Vec<BigInt>>,
    /// Every conductor element plus every semigroup element of the box is in `Γ`.
    pub shifts_in_semigroup: bool,
    pub failed_shift: Option<Vec<BigInt>>,
}

impl ConductorVerdict {
    pub fn holds(&self) -> bool {
        self.covered && self.shifts_in_semigroup
    }
}

/// Box `[0, margin·(v₁ + … + v_e)]` version of [`verify_conductor_in_box`].
pub fn verify_conductor(
    semigroup: &AffineSemigroup,
    conductor: &[Vec<BigInt>],
    margin: u64,
) -> Result<ConductorVerdict> {
    let zero = vec![BigInt::zero(); semigroup.dim()];
    let upper = margin_corner(semigroup, &zero, margin);
    verify_conductor_in_box(semigroup, conductor, &BoxSpec::new(zero, upper)?)
}

pub fn verify_conductor_in_box(
    semigroup: &AffineSemigroup,
    conductor: &[Vec<BigInt>],
    bounds: &BoxSpec,
) -> Result<ConductorVerdict> {
    let chain = semigroup.chain();
    if !chain.full_lattice() {
        return Err(Error::NotFullLattice { index: chain.d().last().unwrap().to_string() });
    }
    let g = frobenius_formula(semigroup.system(), chain);
    let minimal: Vec<Vec<BigInt>> = conductor.iter().map(|c| c.iter().zip(&g).map(|(a, b)| a - b).collect()).collect();
    let frame = chain.frame();
    let zero = vec![BigInt::zero(); semigroup.dim()];

    let mut uncovered = None;
    for p in bounds.points()? {
        if beyond_frobenius(semigroup, &zero, &p) && !minimal.iter().any(|w| frame.dominates(&p, w)) {
            uncovered = Some(p);
            break;
        }
    }

    // conductor + (Γ ∩ box) ⊂ Γ
    let shifts = enumerate_semigroup(semigroup.system().generators(), bounds)?.elements();
    let top: Vec<BigInt> = bounds
        .upper()
        .iter()
        .enumerate()
        .map(|(i, u)| u + conductor.iter().map(|c| c[i].clone()).max().unwrap_or_default().max(BigInt::zero()))
        .collect();
    let grid = enumerate_semigroup(semigroup.system().generators(), &BoxSpec::new(zero.clone(), top)?)?;
    let mut failed_shift = None;
    'outer: for c in conductor {
        for s in &shifts {
            let p: Vec<BigInt> = c.iter().zip(s).map(|(a, b)| a + b).collect();
            if p.iter().any(Signed::is_negative) || !grid.contains(&p) {
                failed_shift = Some(p);
                break 'outer;
            }
        }
    }
    Ok(ConductorVerdict {
        covered: uncovered.is_none(),
        uncovered,
        shifts_in_semigroup: failed_shift.is_none(),
        failed_shift,
    })
}
