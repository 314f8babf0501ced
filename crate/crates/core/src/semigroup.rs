//! Conditions (*) and (**), and the two membership tests for `Γ(v)`.
//!
//! `membership_fast` reads membership off the standard representation (all
//! leading coefficients nonnegative). `membership_bruteforce` is an
//! independent depth-first search for a nonnegative combination and is also
//! what decides condition (**).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::{
    build_chain, combine, standard_representation, GeneratorSystem, LatticeChain, StandardRepresentation,
};
use crate::linalg::{adjugate, determinant, rank, IntMatrix};

/// Node budget used when deciding (**) and by the Diophantine solver.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleStarCheck {
    /// Level `k`, 1-based.
    pub k: usize,
    /// `e_k·v_{e+k}`.
    pub target: Vec<BigInt>,
    pub holds: bool,
    /// Coefficients over `v₁…v_{e+k−1}` summing to the target.
    pub witness: Option<Vec<BigInt>>,
    /// The search ran out of budget and no exact fallback applied.
    pub undecided: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionReport {
    pub star_holds: bool,
    /// First `k` (1-based) with `D_k = D_{k+1}`.
    pub star_violation: Option<usize>,
    pub doublestar: Vec<DoubleStarCheck>,
}

impl ConditionReport {
    pub fn doublestar_holds(&self) -> bool {
        self.doublestar.iter().all(|c| c.holds)
    }

    pub fn all_hold(&self) -> bool {
        self.star_holds && self.doublestar_holds()
    }

    pub fn first_doublestar_failure(&self) -> Option<&DoubleStarCheck> {
        self.doublestar.iter().find(|c| !c.holds)
    }
}

pub fn validate_conditions(system: &GeneratorSystem, chain: &LatticeChain) -> ConditionReport {
    let e = system.dim();
    let star_violation = chain.indices().iter().position(|x| x.is_one()).map(|i| i + 1);
    let mut doublestar: Vec<DoubleStarCheck> = Vec::with_capacity(chain.depth());
    for (i, (u, idx)) in system.extras().iter().zip(chain.indices()).enumerate() {
        let k = i + 1;
        let target: Vec<BigInt> = u.iter().map(|x| x * idx).collect();
        let gens = &system.generators()[..e + k - 1];
        let (witness, undecided) = match BruteForce::new(gens).search(&target, Some(DEFAULT_BUDGET)) {
            SearchOutcome::Found(w) => (Some(w), false),
            SearchOutcome::NotFound => (None, false),
            SearchOutcome::Exhausted => {
                // With (*) and (**) below level k, the standard representation decides exactly.
                let prefix_ok =
                    chain.indices()[..k - 1].iter().all(|x| x > &BigInt::one()) && doublestar.iter().all(|c| c.holds);
                if prefix_ok {
                    let rep = standard_representation(chain, &target, k - 1).expect("e_k·v_{e+k} lies in G_{k-1}");
                    (rep.leading_nonnegative(e).then_some(rep.coefficients), false)
                } else {
                    (None, true)
                }
            }
        };
        doublestar.push(DoubleStarCheck { k, target, holds: witness.is_some(), witness, undecided });
    }
    ConditionReport { star_holds: star_violation.is_none(), star_violation, doublestar }
}

/// A generator system together with its chain and condition report.
#[derive(Clone, Debug)]
pub struct AffineSemigroup {
    system: GeneratorSystem,
    chain: LatticeChain,
    conditions: ConditionReport,
}

impl AffineSemigroup {
    pub fn new(system: GeneratorSystem) -> Result<Self> {
        let mut chain = build_chain(&system)?;
        let conditions = validate_conditions(&system, &chain);
        chain.set_witnesses(conditions.doublestar.iter().map(|c| c.witness.clone()).collect());
        Ok(Self { system, chain, conditions })
    }

    pub fn system(&self) -> &GeneratorSystem {
        &self.system
    }

    pub fn chain(&self) -> &LatticeChain {
        &self.chain
    }

    pub fn conditions(&self) -> &ConditionReport {
        &self.conditions
    }

    pub fn dim(&self) -> usize {
        self.system.dim()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FastMembership {
    pub in_semigroup: bool,
    pub representation: StandardRepresentation,
}

/// Membership through the standard representation at level `s`.
///
/// Refuses to answer unless (*) and (**) both hold.
pub fn membership_fast(semigroup: &AffineSemigroup, v: &[BigInt]) -> Result<FastMembership> {
    if !semigroup.conditions.all_hold() {
        return Err(Error::ConditionsUnmet(Box::new(semigroup.conditions.clone())));
    }
    let representation = standard_representation(&semigroup.chain, v, semigroup.chain.depth())?;
    Ok(FastMembership { in_semigroup: representation.leading_nonnegative(semigroup.dim()), representation })
}

/// Rewrites a nonnegative combination over all generators into the standard
/// representation, using the stored witnesses for `e_j·v_{e+j}`.
pub fn reduce_to_standard(semigroup: &AffineSemigroup, coefficients: &[BigInt]) -> Result<StandardRepresentation> {
    let e = semigroup.dim();
    let chain = &semigroup.chain;
    if !semigroup.conditions.all_hold() {
        return Err(Error::ConditionsUnmet(Box::new(semigroup.conditions.clone())));
    }
    if coefficients.len() != semigroup.system.generators().len() || coefficients.iter().any(Signed::is_negative) {
        return Err(Error::Dimension("expected one nonnegative coefficient per generator".into()));
    }
    let mut mu = coefficients.to_vec();
    loop {
        let over = (1..=chain.depth()).rev().find(|&j| mu[e + j - 1] >= chain.indices()[j - 1]);
        let Some(j) = over else { break };
        let (p, rem) = mu[e + j - 1].div_rem(&chain.indices()[j - 1]);
        mu[e + j - 1] = rem;
        let witness = chain.witness(j).expect("(**) holds so every level has a witness");
        for (m, w) in mu.iter_mut().zip(witness) {
            *m += &p * w;
        }
    }
    Ok(StandardRepresentation { level: chain.depth(), coefficients: mu })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Vec<BigInt>),
    NotFound,
    Exhausted,
}

/// Nonnegative combination of `generators` equal to `v`, or `None`.
pub fn membership_bruteforce(generators: &[Vec<BigInt>], v: &[BigInt]) -> Option<Vec<BigInt>> {
    match BruteForce::new(generators).search(v, None) {
        SearchOutcome::Found(w) => Some(w),
        _ => None,
    }
}

/// Depth-first search for nonnegative combinations, prepared once per generator list.
///
/// Generators are explored with the largest minimum positive coordinate first
/// and coefficients counted upward, so the reported witness is the first one
/// in that lexicographic order. When the generators span the space, `e`
/// independent ones are held back and solved for exactly at the leaves.
#[derive(Clone, Debug)]
pub struct BruteForce {
    count: usize,
    dim: usize,
    wide: Plan<BigInt>,
    narrow: Option<Plan<i128>>,
    adj_bits: u64,
}

#[derive(Clone, Debug)]
struct Plan<T> {
    free: Vec<(usize, Vec<T>)>,
    leaf: Leaf<T>,
}

#[derive(Clone, Debug)]
enum Leaf<T> {
    Basis { idx: Vec<usize>, adj: Vec<Vec<T>>, det: T },
    Single { idx: usize, gen: Vec<T> },
    Empty,
}

impl BruteForce {
    pub fn new(generators: &[Vec<BigInt>]) -> Self {
        let count = generators.len();
        let dim = generators.first().map_or(0, Vec::len);
        let key = |g: &Vec<BigInt>| g.iter().filter(|x| x.is_positive()).min().cloned().unwrap_or_default();
        let mut order: Vec<usize> = (0..count).collect();
        order.sort_by(|&a, &b| key(&generators[b]).cmp(&key(&generators[a])));

        let mut held = Vec::new();
        if dim > 0 && count >= dim && rank(generators) == dim {
            let mut chosen: Vec<Vec<BigInt>> = Vec::new();
            for &i in order.iter().rev() {
                let mut trial = chosen.clone();
                trial.push(generators[i].clone());
                if rank(&trial) == trial.len() {
                    chosen = trial;
                    held.push(i);
                    if held.len() == dim {
                        break;
                    }
                }
            }
            held.reverse();
        }
        let (leaf, adj_bits) = if held.len() == dim && dim > 0 {
            let cols: Vec<Vec<BigInt>> = held.iter().map(|&i| generators[i].clone()).collect();
            let m = IntMatrix::from_columns(&cols).expect("equal-length generators");
            let det = determinant(&m).expect("square");
            let adj = adjugate(&m).expect("square");
            let (adj, det) = if det.is_negative() { (adj.negated(), -det) } else { (adj, det) };
            let rows: Vec<Vec<BigInt>> = (0..dim).map(|r| (0..dim).map(|c| adj.get(r, c).clone()).collect()).collect();
            let bits = rows.iter().flatten().map(|x| x.bits()).max().unwrap_or(0).max(det.bits());
            (Leaf::Basis { idx: held.clone(), adj: rows, det }, bits)
        } else if let Some(&last) = order.last() {
            held = vec![last];
            (Leaf::Single { idx: last, gen: generators[last].clone() }, 0)
        } else {
            (Leaf::Empty, 0)
        };
        let free = order.iter().filter(|i| !held.contains(i)).map(|&i| (i, generators[i].clone())).collect();
        let wide = Plan { free, leaf };
        let narrow = wide.narrow();
        Self { count, dim, wide, narrow, adj_bits }
    }

    pub fn search(&self, v: &[BigInt], budget: Option<u64>) -> SearchOutcome {
        if v.len() != self.dim || v.iter().any(Signed::is_negative) {
            return SearchOutcome::NotFound;
        }
        let mut nodes = budget.unwrap_or(u64::MAX);
        let target_bits = v.iter().map(BigInt::bits).max().unwrap_or(0);
        let found = match &self.narrow {
            // adj·r stays below 2^(adj_bits + target_bits + log e) which must fit i128
            Some(plan) if self.adj_bits + target_bits + 8 < 126 => {
                let t: Vec<i128> = v.iter().map(|x| x.to_i128().expect("checked width")).collect();
                plan.run(t, self.count, &mut nodes)
            }
            _ => self.wide.run(v.to_vec(), self.count, &mut nodes),
        };
        match found {
            Ok(Some(w)) => SearchOutcome::Found(w),
            Ok(None) => SearchOutcome::NotFound,
            Err(Exhausted) => SearchOutcome::Exhausted,
        }
    }
}

struct Exhausted;

impl Plan<BigInt> {
    fn narrow(&self) -> Option<Plan<i128>> {
        let conv = |v: &Vec<BigInt>| v.iter().map(|x| x.to_i64().map(i128::from)).collect::<Option<Vec<_>>>();
        let free = self.free.iter().map(|(i, g)| conv(g).map(|g| (*i, g))).collect::<Option<Vec<_>>>()?;
        let leaf = match &self.leaf {
            Leaf::Basis { idx, adj, det } => Leaf::Basis {
                idx: idx.clone(),
                adj: adj
                    .iter()
                    .map(|r| r.iter().map(ToPrimitive::to_i128).collect::<Option<Vec<_>>>())
                    .collect::<Option<Vec<_>>>()?,
                det: det.to_i128()?,
            },
            Leaf::Single { idx, gen } => Leaf::Single { idx: *idx, gen: conv(gen)? },
            Leaf::Empty => Leaf::Empty,
        };
        Some(Plan { free, leaf })
    }
}

impl<T> Plan<T>
where
    T: Integer + Signed + Clone + Into<BigInt>,
{
    fn run(&self, target: Vec<T>, count: usize, nodes: &mut u64) -> Result<Option<Vec<BigInt>>, Exhausted> {
        let mut coeffs = vec![T::zero(); count];
        let mut rest = target;
        if self.descend(0, &mut rest, &mut coeffs, nodes)? {
            Ok(Some(coeffs.into_iter().map(Into::into).collect()))
        } else {
            Ok(None)
        }
    }

    fn descend(&self, depth: usize, rest: &mut Vec<T>, coeffs: &mut [T], nodes: &mut u64) -> Result<bool, Exhausted> {
        if *nodes == 0 {
            return Err(Exhausted);
        }
        *nodes -= 1;
        if depth == self.free.len() {
            return Ok(self.solve_leaf(rest, coeffs));
        }
        let (idx, gen) = &self.free[depth];
        let bound = max_multiple(gen, rest);
        let mut a = T::zero();
        let mut hit = false;
        loop {
            if self.descend(depth + 1, rest, coeffs, nodes)? {
                coeffs[*idx] = a.clone();
                hit = true;
                break;
            }
            if a == bound {
                break;
            }
            a = a + T::one();
            for (r, g) in rest.iter_mut().zip(gen) {
                *r = r.clone() - g.clone();
            }
        }
        // restore the remainder for the caller
        for (r, g) in rest.iter_mut().zip(gen) {
            *r = r.clone() + g.clone() * a.clone();
        }
        Ok(hit)
    }

    fn solve_leaf(&self, rest: &[T], coeffs: &mut [T]) -> bool {
        match &self.leaf {
            Leaf::Empty => rest.iter().all(Zero::is_zero),
            Leaf::Single { idx, gen } => {
                let Some(j) = gen.iter().position(|x| x.is_positive()) else { return false };
                let (q, r) = rest[j].div_rem(&gen[j]);
                if !r.is_zero() || q.is_negative() {
                    return false;
                }
                if rest.iter().zip(gen).any(|(x, g)| *x != g.clone() * q.clone()) {
                    return false;
                }
                coeffs[*idx] = q;
                true
            }
            Leaf::Basis { idx, adj, det } => {
                let mut sol = Vec::with_capacity(idx.len());
                for row in adj {
                    let num = row.iter().zip(rest).fold(T::zero(), |acc, (a, x)| acc + a.clone() * x.clone());
                    let (q, r) = num.div_rem(det);
                    if !r.is_zero() || q.is_negative() {
                        return false;
                    }
                    sol.push(q);
                }
                for (&i, q) in idx.iter().zip(sol) {
                    coeffs[i] = q;
                }
                true
            }
        }
    }
}

/// Largest `a` with `a·gen ≤ rest` coordinate-wise.
fn max_multiple<T: Integer + Signed + Clone>(gen: &[T], rest: &[T]) -> T {
    gen.iter()
        .zip(rest)
        .filter(|(g, _)| g.is_positive())
        .map(|(g, r)| if r.is_negative() { T::zero() } else { r.div_floor(g) })
        .min()
        .unwrap_or_else(T::zero)
}

/// Checks that `coefficients` are nonnegative and combine to `target`.
pub fn is_witness(generators: &[Vec<BigInt>], coefficients: &[BigInt], target: &[BigInt]) -> bool {
    coefficients.len() == generators.len()
        && coefficients.iter().all(|c| !c.is_negative())
        && combine(generators, coefficients) == target
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::to_big;
    use proptest::prelude::*;

    fn sg(dim: usize, g: &[&[i64]]) -> AffineSemigroup {
        AffineSemigroup::new(GeneratorSystem::from_i64(dim, g).unwrap()).unwrap()
    }

    fn gens(g: &[&[i64]]) -> Vec<Vec<BigInt>> {
        g.iter().map(|v| to_big(v)).collect()
    }

    #[test]
    fn conditions_for_4_6_7() {
        let s = sg(1, &[&[4], &[6], &[7]]);
        let c = s.conditions();
        assert!(c.all_hold());
        assert_eq!(c.doublestar[0].target, to_big(&[12]));
        assert_eq!(c.doublestar[0].witness, Some(to_big(&[3])));
        assert_eq!(c.doublestar[1].target, to_big(&[14]));
        assert_eq!(c.doublestar[1].witness, Some(to_big(&[2, 1])));
    }

    #[test]
    fn doublestar_fails_for_8_10_11() {
        let s = sg(1, &[&[8], &[10], &[11]]);
        let c = s.conditions();
        assert!(c.star_holds);
        let fail = c.first_doublestar_failure().unwrap();
        assert_eq!(fail.k, 2);
        assert_eq!(fail.target, to_big(&[22]));
        assert!(matches!(membership_fast(&s, &to_big(&[22])), Err(Error::ConditionsUnmet(_))));
    }

    #[test]
    fn star_fails_for_4_6_7_9() {
        let s = sg(1, &[&[4], &[6], &[7], &[9]]);
        assert!(!s.conditions().star_holds);
        assert_eq!(s.conditions().star_violation, Some(3));
    }

    #[test]
    fn fast_membership_examples() {
        let s = sg(1, &[&[4], &[6], &[7]]);
        let m = membership_fast(&s, &to_big(&[9])).unwrap();
        assert!(!m.in_semigroup);
        assert_eq!(m.representation.coefficients[0], BigInt::from(-1));
        assert!(membership_fast(&s, &to_big(&[10])).unwrap().in_semigroup);

        let s = sg(2, &[&[8, 0], &[0, 8], &[2, 2], &[12, 8]]);
        assert!(!membership_fast(&s, &to_big(&[10, 14])).unwrap().in_semigroup);
        assert!(matches!(membership_fast(&s, &to_big(&[1, 0])), Err(Error::NotInGroup { .. })));
    }

    #[test]
    fn bruteforce_examples() {
        assert_eq!(membership_bruteforce(&gens(&[&[8], &[10]]), &to_big(&[22])), None);
        assert_eq!(membership_bruteforce(&gens(&[&[8], &[10], &[11]]), &to_big(&[0])), Some(to_big(&[0, 0, 0])));
        assert_eq!(membership_bruteforce(&gens(&[&[8], &[10], &[11]]), &to_big(&[33])), Some(to_big(&[0, 0, 3])));
        assert_eq!(membership_bruteforce(&[], &[]), Some(vec![]));
        assert_eq!(membership_bruteforce(&gens(&[&[3]]), &to_big(&[-3])), None);
    }

    #[test]
    fn bruteforce_without_spanning_set() {
        // rank 1 in the plane: falls back to single-generator leaves
        let g = gens(&[&[2, 2], &[3, 3]]);
        assert_eq!(membership_bruteforce(&g, &to_big(&[5, 5])), Some(to_big(&[1, 1])));
        assert_eq!(membership_bruteforce(&g, &to_big(&[1, 1])), None);
        assert_eq!(membership_bruteforce(&g, &to_big(&[4, 5])), None);
    }

    #[test]
    fn bruteforce_large_values_use_wide_arithmetic() {
        let big = BigInt::from(10).pow(30);
        let g = vec![vec![big.clone()], vec![&big + 1]];
        let target = vec![&big * 5 + 2];
        let w = membership_bruteforce(&g, &target).unwrap();
        assert!(is_witness(&g, &w, &target));
    }

    #[test]
    fn budget_is_honoured() {
        let g = gens(&[&[97], &[89], &[83], &[79], &[73]]);
        assert_eq!(BruteForce::new(&g).search(&to_big(&[100_000]), Some(5)), SearchOutcome::Exhausted);
    }

    #[test]
    fn reduction_matches_standard_representation() {
        let s = sg(2, &[&[4, 6], &[6, 3], &[8, 10], &[3, 4]]);
        let mu = to_big(&[2, 1, 13, 9]);
        let v = combine(s.system().generators(), &mu);
        let reduced = reduce_to_standard(&s, &mu).unwrap();
        assert_eq!(combine(s.system().generators(), &reduced.coefficients), v);
        assert_eq!(reduced, membership_fast(&s, &v).unwrap().representation);
    }

    /// Unpruned enumeration: every coefficient up to the largest target coordinate.
    fn exhaustive(g: &[Vec<i64>], v: &[i64]) -> bool {
        let limit = v.iter().copied().max().unwrap_or(0);
        fn rec(g: &[Vec<i64>], rest: Vec<i64>, limit: i64) -> bool {
            match g.split_first() {
                None => rest.iter().all(|&x| x == 0),
                Some((head, tail)) => (0..=limit).any(|a| {
                    let r: Vec<i64> = rest.iter().zip(head).map(|(x, h)| x - a * h).collect();
                    r.iter().all(|&x| x >= 0) && rec(tail, r, limit)
                }),
            }
        }
        rec(g, v.to_vec(), limit)
    }

    proptest! {
        #[test]
        fn pruned_search_is_complete(
            g in prop::collection::vec(prop::collection::vec(0i64..6, 2), 1..4),
            v in prop::collection::vec(0i64..14, 2),
        ) {
            prop_assume!(g.iter().all(|x| x.iter().any(|&c| c > 0)));
            let big: Vec<Vec<BigInt>> = g.iter().map(|x| to_big(x)).collect();
            let found = membership_bruteforce(&big, &to_big(&v));
            if let Some(w) = &found {
                prop_assert!(is_witness(&big, w, &to_big(&v)));
            }
            prop_assert_eq!(found.is_some(), exhaustive(&g, &v));
        }
    }
}
