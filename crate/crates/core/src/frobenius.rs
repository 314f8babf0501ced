//! Frobenius vector, conductor set and Diophantine feasibility.
//!
//! Under conditions (*) and (**) the Frobenius vector is
//! `g = Σ_k (e_k − 1)·v_{e+k} − Σ_i v_i`: it is not in `Γ(v)`, while every
//! group element of `g + C_e` is, where `C_e` is the interior of
//! `cone(v₁,…,v_e)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::{ConeCell, GeneratorSystem, LatticeChain};
use crate::linalg::lattice_basis;
use crate::semigroup::{membership_fast, AffineSemigroup, BruteForce, ConditionReport, SearchOutcome};

/// Largest parallelepiped (|D₁|) enumerated when computing conductor sets.
const MAX_FUNDAMENTAL_POINTS: u64 = 5_000_000;
/// Largest sieve used for gap lists.
const MAX_SIEVE: u64 = 200_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusReport {
    pub g: Vec<BigInt>,
    pub conditions: ConditionReport,
    /// `{g + w}` over the minimal interior points `w`; only for `D_{s+1} = 1`.
    pub conductor: Option<Vec<Vec<BigInt>>>,
    /// Generator indices (0-based) kept by the subset fallback.
    pub used_subset: Option<Vec<usize>>,
    /// `false` when `g` is only a threshold from the subset fallback.
    pub minimal: bool,
    pub g_in_group: bool,
    pub g_in_semigroup: bool,
}

/// `Σ_k (e_k − 1)·v_{e+k} − Σ_i v_i`, evaluated without checking any condition.
pub fn frobenius_formula(system: &GeneratorSystem, chain: &LatticeChain) -> Vec<BigInt> {
    let mut g = vec![BigInt::zero(); system.dim()];
    for v in system.leading() {
        for (x, y) in g.iter_mut().zip(v) {
            *x -= y;
        }
    }
    for (v, idx) in system.extras().iter().zip(chain.indices()) {
        let m = idx - 1;
        for (x, y) in g.iter_mut().zip(v) {
            *x += &m * y;
        }
    }
    g
}

pub fn frobenius_vector(semigroup: &AffineSemigroup) -> Result<FrobeniusReport> {
    if !semigroup.conditions().all_hold() {
        return Err(Error::ConditionsUnmet(Box::new(semigroup.conditions().clone())));
    }
    let chain = semigroup.chain();
    let g = frobenius_formula(semigroup.system(), chain);
    let g_in_group = chain.contains(&g, chain.depth())?;
    let g_in_semigroup = membership_fast(semigroup, &g)?.in_semigroup;
    // the conductor is optional here: huge parallelepipeds are skipped
    let conductor = match conductor_set(semigroup, &g) {
        Ok(c) => Some(c),
        Err(Error::NotFullLattice { .. } | Error::TooLarge(_)) => None,
        Err(err) => return Err(err),
    };
    Ok(FrobeniusReport {
        g,
        conditions: semigroup.conditions().clone(),
        conductor,
        used_subset: None,
        minimal: true,
        g_in_group,
        g_in_semigroup,
    })
}

/// Indices (0-based, into the extras) of the generators outside the group of
/// their predecessors.
pub fn essential_extras(chain: &LatticeChain, system: &GeneratorSystem) -> Result<Vec<usize>> {
    let mut keep = Vec::new();
    for (j, v) in system.extras().iter().enumerate() {
        if !chain.contains(v, j)? {
            keep.push(j);
        }
    }
    Ok(keep)
}

/// Theorem formula applied to the maximal subsequence of extras that each
/// enlarge the group. The result bounds the Frobenius vector from above but
/// need not be the Frobenius vector.
pub fn frobenius_subset(system: &GeneratorSystem) -> Result<FrobeniusReport> {
    let full = AffineSemigroup::new(system.clone())?;
    let keep = essential_extras(full.chain(), system)?;
    if keep.len() == system.extra_count() {
        return frobenius_vector(&full);
    }
    let sub = AffineSemigroup::new(system.restrict_extras(&keep))?;
    if !sub.conditions().all_hold() {
        return Err(Error::ConditionsUnmet(Box::new(sub.conditions().clone())));
    }
    let chain = sub.chain();
    let g = frobenius_formula(sub.system(), chain);
    let g_in_group = chain.contains(&g, chain.depth())?;
    let g_in_semigroup = matches!(
        BruteForce::new(system.generators()).search(&g, Some(crate::semigroup::DEFAULT_BUDGET)),
        SearchOutcome::Found(_)
    );
    let e = system.dim();
    let mut used: Vec<usize> = (0..e).collect();
    used.extend(keep.iter().map(|j| e + j));
    Ok(FrobeniusReport {
        g,
        conditions: sub.conditions().clone(),
        conductor: None,
        used_subset: Some(used),
        minimal: false,
        g_in_group,
        g_in_semigroup,
    })
}

/// `v − g` lies in the open cone `C_e`.
pub fn beyond_frobenius(semigroup: &AffineSemigroup, g: &[BigInt], v: &[BigInt]) -> bool {
    if g.len() != v.len() || v.len() != semigroup.dim() {
        return false;
    }
    let diff: Vec<BigInt> = v.iter().zip(g).map(|(a, b)| a - b).collect();
    semigroup.chain().frame().classify(&diff) == ConeCell::Interior
}

/// Minimal integral points of the open cone `C_e` under
/// `u' ≼ u ⇔ u − u' ∈ cone(v₁,…,v_e)`, sorted lexicographically.
///
/// Every minimal point lies in the half-open parallelepiped
/// `{Σ a_i v_i : 0 < a_i ≤ 1}`, which holds exactly one point per coset of
/// `ℤᵉ / G₀`.
pub fn minimal_interior_points(system: &GeneratorSystem, chain: &LatticeChain) -> Result<Vec<Vec<BigInt>>> {
    let e = system.dim();
    if e == 1 {
        return Ok(vec![vec![BigInt::one()]]);
    }
    let count = chain.d()[0]
        .to_u64()
        .filter(|&n| n <= MAX_FUNDAMENTAL_POINTS)
        .ok_or_else(|| Error::TooLarge(format!("fundamental parallelepiped holds {} points", chain.d()[0])))?;
    let hermite = lattice_basis(system.leading())?;
    let pivots: Vec<u64> = (0..e).map(|i| hermite.get(i, i).to_u64().expect("pivot divides D₁")).collect();
    let frame = chain.frame();
    let det = frame.denominator();

    let mut candidates: Vec<(BigInt, Vec<BigInt>)> = Vec::with_capacity(count as usize);
    let mut rep = vec![0u64; e];
    loop {
        let x: Vec<BigInt> = rep.iter().map(|&c| BigInt::from(c)).collect();
        let nums = frame.numerators(&x);
        let mut u = x;
        let mut weight = BigInt::zero();
        for (i, n) in nums.iter().enumerate() {
            // shift coordinate n/det into (0, 1]
            let t = Integer::div_floor(&(n - 1u32), det);
            weight += n - &t * det;
            for (uj, vj) in u.iter_mut().zip(&system.leading()[i]) {
                *uj -= &t * vj;
            }
        }
        candidates.push((weight, u));
        if !advance(&mut rep, &pivots) {
            break;
        }
    }
    candidates.sort();
    let mut minimal: Vec<Vec<BigInt>> = Vec::new();
    for (_, u) in candidates {
        if !minimal.iter().any(|w| frame.dominates(&u, w)) {
            minimal.push(u);
        }
    }
    minimal.sort();
    Ok(minimal)
}

fn advance(rep: &mut [u64], limits: &[u64]) -> bool {
    for i in (0..rep.len()).rev() {
        rep[i] += 1;
        if rep[i] < limits[i] {
            return true;
        }
        rep[i] = 0;
    }
    false
}

/// `{g + w}` for the minimal interior points `w`. Requires `D_{s+1} = 1`.
pub fn conductor_set(semigroup: &AffineSemigroup, g: &[BigInt]) -> Result<Vec<Vec<BigInt>>> {
    let chain = semigroup.chain();
    if !chain.full_lattice() {
        return Err(Error::NotFullLattice { index: chain.d().last().map(ToString::to_string).unwrap_or_default() });
    }
    let w = minimal_interior_points(semigroup.system(), chain)?;
    let mut out: Vec<Vec<BigInt>> = w.into_iter().map(|w| w.iter().zip(g).map(|(a, b)| a + b).collect()).collect();
    out.sort();
    Ok(out)
}

/// `(a − 1)(b − 1) − 1` for coprime `a, b ≥ 2`.
pub fn sylvester_number(a: &BigInt, b: &BigInt) -> Result<BigInt> {
    if a < &BigInt::from(2) || b < &BigInt::from(2) {
        return Err(Error::InvalidSystem("both generators must be at least 2".into()));
    }
    if !a.gcd(b).is_one() {
        return Err(Error::NotCoprime(format!("gcd({a}, {b}) = {}", a.gcd(b))));
    }
    Ok((a - 1) * (b - 1) - 1)
}

/// Gaps `ℕ − Γ` of a numerical semigroup (`e = 1`, coprime generators).
pub fn gaps(semigroup: &AffineSemigroup) -> Result<Vec<BigInt>> {
    let system = semigroup.system();
    if system.dim() != 1 {
        return Err(Error::Dimension("gaps are defined for e = 1 only".into()));
    }
    if !semigroup.chain().full_lattice() {
        return Err(Error::NotCoprime(format!("gcd of generators is {}", semigroup.chain().d().last().unwrap())));
    }
    let bound = if semigroup.conditions().all_hold() {
        frobenius_formula(system, semigroup.chain()).remove(0)
    } else {
        match frobenius_subset(system) {
            Ok(report) => report.g[0].clone(),
            Err(_) => {
                let values: Vec<&BigInt> = system.generators().iter().map(|v| &v[0]).collect();
                let lo = values.iter().min().unwrap();
                let hi = values.iter().max().unwrap();
                (*lo - 1) * (*hi - 1) - 1
            }
        }
    };
    if bound.is_negative() {
        return Ok(Vec::new());
    }
    let n =
        bound.to_u64().filter(|&n| n < MAX_SIEVE).ok_or_else(|| Error::TooLarge(format!("gap sieve up to {bound}")))?
            as usize;
    let gens: Vec<usize> = system.generators().iter().filter_map(|v| v[0].to_usize()).filter(|&x| x <= n).collect();
    let mut reach = vec![false; n + 1];
    reach[0] = true;
    for i in 1..=n {
        reach[i] = gens.iter().any(|&a| a <= i && reach[i - a]);
    }
    Ok((1..=n).filter(|&i| !reach[i]).map(BigInt::from).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiophantineStatus {
    /// `B ∈ g + C_e` and `B ∈ G(v)`; solvable by the theorem.
    SolvableByCone,
    SolvableWithWitness,
    /// `B ∉ G(v)`.
    LatticeInfeasible,
    NoSolution,
    /// Conditions fail and the search ran out of budget.
    ConditionsUnmet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiophantineAnswer {
    pub status: DiophantineStatus,
    pub witness: Option<Vec<BigInt>>,
}

/// Nonnegative solution of `A·X = B` where the columns of `A` are the generators.
pub fn diophantine_solve(semigroup: &AffineSemigroup, rhs: &[BigInt], budget: u64) -> Result<DiophantineAnswer> {
    let chain = semigroup.chain();
    if rhs.len() != semigroup.dim() {
        return Err(Error::Dimension(format!("right-hand side must have {} entries", semigroup.dim())));
    }
    if rhs.iter().any(Signed::is_negative) {
        return Err(Error::InvalidSystem("right-hand side must be nonnegative".into()));
    }
    if !chain.contains(rhs, chain.depth())? {
        return Ok(DiophantineAnswer { status: DiophantineStatus::LatticeInfeasible, witness: None });
    }
    let conditions_hold = semigroup.conditions().all_hold();
    if conditions_hold {
        let g = frobenius_formula(semigroup.system(), chain);
        if beyond_frobenius(semigroup, &g, rhs) {
            let rep = membership_fast(semigroup, rhs)?;
            debug_assert!(rep.in_semigroup);
            return Ok(DiophantineAnswer {
                status: DiophantineStatus::SolvableByCone,
                witness: Some(rep.representation.coefficients),
            });
        }
    }
    Ok(match BruteForce::new(semigroup.system().generators()).search(rhs, Some(budget)) {
        SearchOutcome::Found(w) => {
            DiophantineAnswer { status: DiophantineStatus::SolvableWithWitness, witness: Some(w) }
        }
        SearchOutcome::NotFound => DiophantineAnswer { status: DiophantineStatus::NoSolution, witness: None },
        SearchOutcome::Exhausted if conditions_hold => {
            let m = membership_fast(semigroup, rhs)?;
            if m.in_semigroup {
                DiophantineAnswer {
                    status: DiophantineStatus::SolvableWithWitness,
                    witness: Some(m.representation.coefficients),
                }
            } else {
                DiophantineAnswer { status: DiophantineStatus::NoSolution, witness: None }
            }
        }
        SearchOutcome::Exhausted => DiophantineAnswer { status: DiophantineStatus::ConditionsUnmet, witness: None },
    })
}
