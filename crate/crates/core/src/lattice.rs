//! Generator systems and the chain of groups `G₀ ⊂ G₁ ⊂ … ⊂ G_s`.
//!
//! `G_k` is the subgroup of `ℤᵉ` generated by `v₁,…,v_{e+k}`. Level `k` of a
//! [`LatticeChain`] stores a Hermite basis of `G_k` whose determinant is
//! `D_{k+1}` up to sign.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{adjugate, determinant, gcd_maximal_minors, lattice_basis, IntMatrix};

/// Ordered generators `v₁…v_{e+s}` of an affine semigroup of `ℕᵉ`.
///
/// The first `e` vectors span `ℝᵉ`; the remaining `s` lie in their cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSystem {
    dim: usize,
    generators: Vec<Vec<BigInt>>,
}

impl GeneratorSystem {
    pub fn new(dim: usize, generators: Vec<Vec<BigInt>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidSystem("ambient dimension must be positive".into()));
        }
        if generators.len() < dim {
            return Err(Error::InvalidSystem(format!("need at least {dim} generators, got {}", generators.len())));
        }
        for (i, v) in generators.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::InvalidSystem(format!(
                    "generator {} has {} coordinates, expected {dim}",
                    i + 1,
                    v.len()
                )));
            }
            if v.iter().any(Signed::is_negative) {
                return Err(Error::InvalidSystem(format!("generator {} has a negative coordinate", i + 1)));
            }
            if v.iter().all(Zero::is_zero) {
                return Err(Error::InvalidSystem(format!("generator {} is zero", i + 1)));
            }
        }
        let system = Self { dim, generators };
        let frame = ConeFrame::new(&system.leading_matrix())
            .map_err(|_| Error::InvalidSystem(format!("the first {dim} generators do not span the ambient space")))?;
        for (k, v) in system.extras().iter().enumerate() {
            if frame.classify(v) == ConeCell::Outside {
                return Err(Error::InvalidSystem(format!(
                    "generator {} lies outside the cone of the first {dim}",
                    dim + k + 1
                )));
            }
        }
        Ok(system)
    }

    pub fn from_i64(dim: usize, generators: &[&[i64]]) -> Result<Self> {
        Self::new(dim, generators.iter().map(|g| g.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    /// Ambient dimension `e`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number `s` of generators beyond the leading block.
    pub fn extra_count(&self) -> usize {
        self.generators.len() - self.dim
    }

    pub fn generators(&self) -> &[Vec<BigInt>] {
        &self.generators
    }

    pub fn leading(&self) -> &[Vec<BigInt>] {
        &self.generators[..self.dim]
    }

    pub fn extras(&self) -> &[Vec<BigInt>] {
        &self.generators[self.dim..]
    }

    pub fn leading_matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(self.leading()).expect("validated generators")
    }

    pub fn matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(&self.generators).expect("validated generators")
    }

    /// Keeps the leading block and the extras at `extra_idx` (0-based, in order).
    pub fn restrict_extras(&self, extra_idx: &[usize]) -> Self {
        let mut generators = self.leading().to_vec();
        generators.extend(extra_idx.iter().map(|&i| self.extras()[i].clone()));
        Self { dim: self.dim, generators }
    }
}

/// Position of a vector relative to `cone(v₁,…,v_e)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConeCell {
    /// Every Cramer coordinate strictly positive (the open cell `C_e`).
    Interior,
    /// In the closed cone but on a lower-dimensional cell.
    Boundary,
    Outside,
}

/// Exact cone coordinates over a nonsingular basis: `x = B·a` with
/// `a = adj(B)·x / det(B)`.
#[derive(Clone, Debug)]
pub struct ConeFrame {
    adj: IntMatrix,
    det: BigInt,
}

impl ConeFrame {
    pub fn new(basis: &IntMatrix) -> Result<Self> {
        let det = determinant(basis)?;
        if det.is_zero() {
            return Err(Error::Singular);
        }
        let adj = adjugate(basis)?;
        let (adj, det) = if det.is_negative() { (adj.negated(), -det) } else { (adj, det) };
        Ok(Self { adj, det })
    }

    /// Numerators of the cone coordinates, over the positive denominator [`Self::denominator`].
    pub fn numerators(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.adj.mul_vec(x).expect("dimension checked by caller")
    }

    pub fn denominator(&self) -> &BigInt {
        &self.det
    }

    pub fn classify(&self, x: &[BigInt]) -> ConeCell {
        let nums = self.numerators(x);
        if nums.iter().any(Signed::is_negative) {
            ConeCell::Outside
        } else if nums.iter().all(Signed::is_positive) {
            ConeCell::Interior
        } else {
            ConeCell::Boundary
        }
    }

    /// `x − y` in the closed cone.
    pub fn dominates(&self, x: &[BigInt], y: &[BigInt]) -> bool {
        let diff: Vec<BigInt> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        self.classify(&diff) != ConeCell::Outside
    }
}

/// One group `G_k` of the chain.
#[derive(Clone, Debug)]
struct Level {
    basis: IntMatrix,
    /// `adj(basis)`; `x ∈ G_k` iff `adj·x ≡ 0 (mod D_{k+1})`.
    adj: IntMatrix,
    index: BigInt,
}

impl Level {
    fn new(vectors: &[Vec<BigInt>]) -> Result<Self> {
        let basis = lattice_basis(vectors)?;
        let adj = adjugate(&basis)?;
        let index = determinant(&basis)?.abs();
        Ok(Self { basis, adj, index })
    }

    fn residues(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.adj.mul_vec(x).expect("dimension checked").into_iter().map(|y| y.mod_floor(&self.index)).collect()
    }

    fn contains(&self, x: &[BigInt]) -> bool {
        self.residues(x).iter().all(Zero::is_zero)
    }
}

/// Chain data: `D₁…D_{s+1}`, indices `e_k = D_k / D_{k+1}` and a basis per level.
#[derive(Clone, Debug)]
pub struct LatticeChain {
    dim: usize,
    d: Vec<BigInt>,
    indices: Vec<BigInt>,
    levels: Vec<Level>,
    leading: ConeFrame,
    extras: Vec<Vec<BigInt>>,
    witnesses: Vec<Option<Vec<BigInt>>>,
}

/// Integer coefficients `λ₁…λ_{e+k}` with `0 ≤ λ_{e+j} < e_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardRepresentation {
    pub level: usize,
    pub coefficients: Vec<BigInt>,
}

impl StandardRepresentation {
    pub fn leading_nonnegative(&self, dim: usize) -> bool {
        self.coefficients[..dim].iter().all(|x| !x.is_negative())
    }
}

pub fn build_chain(system: &GeneratorSystem) -> Result<LatticeChain> {
    let e = system.dim();
    let s = system.extra_count();
    let gens = system.generators();
    let mut d = Vec::with_capacity(s + 1);
    d.push(determinant(&system.leading_matrix())?.abs());
    for k in 1..=s {
        d.push(gcd_maximal_minors(&IntMatrix::from_columns(&gens[..e + k])?)?);
    }
    let mut indices = Vec::with_capacity(s);
    for k in 0..s {
        let (q, r) = d[k].div_rem(&d[k + 1]);
        if !r.is_zero() {
            return Err(Error::InvalidSystem(format!("D_{} does not divide D_{}", k + 2, k + 1)));
        }
        indices.push(q);
    }
    let levels = (0..=s).map(|k| Level::new(&gens[..e + k])).collect::<Result<Vec<_>>>()?;
    debug_assert!(levels.iter().zip(&d).all(|(l, dk)| &l.index == dk));
    Ok(LatticeChain {
        dim: e,
        d,
        indices,
        levels,
        leading: ConeFrame::new(&system.leading_matrix())?,
        extras: system.extras().to_vec(),
        witnesses: vec![None; s],
    })
}

impl LatticeChain {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of levels above `G₀`, i.e. `s`.
    pub fn depth(&self) -> usize {
        self.indices.len()
    }

    /// `D₁,…,D_{s+1}`, all nonnegative.
    pub fn d(&self) -> &[BigInt] {
        &self.d
    }

    /// `e₁,…,e_s`.
    pub fn indices(&self) -> &[BigInt] {
        &self.indices
    }

    /// Hermite basis of `G_k` as columns.
    pub fn basis(&self, level: usize) -> &IntMatrix {
        &self.levels[level].basis
    }

    /// Nonnegative combination over `v₁…v_{e+k−1}` equal to `e_k·v_{e+k}`, for `k = 1…s`.
    pub fn witness(&self, k: usize) -> Option<&[BigInt]> {
        self.witnesses.get(k - 1).and_then(|w| w.as_deref())
    }

    pub fn witnesses(&self) -> &[Option<Vec<BigInt>>] {
        &self.witnesses
    }

    pub(crate) fn set_witnesses(&mut self, witnesses: Vec<Option<Vec<BigInt>>>) {
        debug_assert_eq!(witnesses.len(), self.witnesses.len());
        self.witnesses = witnesses;
    }

    /// `D₁ > D₂ > … > D_{s+1}`.
    pub fn strictly_decreasing(&self) -> bool {
        self.indices.iter().all(|e| e > &BigInt::one())
    }

    /// `D_{s+1} = 1`, i.e. the generators span `ℤᵉ`.
    pub fn full_lattice(&self) -> bool {
        self.d.last().is_some_and(One::is_one)
    }

    fn check_level(&self, level: usize) -> Result<()> {
        if level > self.depth() {
            return Err(Error::LevelOutOfRange { level, max: self.depth() });
        }
        Ok(())
    }

    fn check_vector(&self, v: &[BigInt]) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::Dimension(format!("expected a vector of length {}, got {}", self.dim, v.len())));
        }
        Ok(())
    }

    /// Cone coordinates over the leading block `v₁…v_e`.
    pub fn frame(&self) -> &ConeFrame {
        &self.leading
    }

    /// Fast `v ∈ G_k` test through the adjugate of the level basis.
    pub fn contains(&self, v: &[BigInt], level: usize) -> Result<bool> {
        self.check_level(level)?;
        self.check_vector(v)?;
        Ok(self.levels[level].contains(v))
    }

    /// Gcd of the maximal minors of `[W_k | v]`.
    fn minor_gcd_with(&self, v: &[BigInt], level: usize) -> Result<BigInt> {
        gcd_maximal_minors(&self.levels[level].basis.with_appended_column(v)?)
    }

    /// Smallest `λ ≥ 0` with `v − λ·u ∈ G_{j−1}`, given `v ∈ G_j` and `u = v_{e+j}`.
    fn residue_at(&self, v: &[BigInt], j: usize) -> Option<BigInt> {
        let below = &self.levels[j - 1];
        let a = below.residues(v);
        let b = below.residues(&self.extras[j - 1]);
        let m = &below.index;
        // Solve λ·b_i ≡ a_i (mod m) for every i and intersect the solution cosets.
        let mut acc = (BigInt::zero(), BigInt::one());
        for (ai, bi) in a.iter().zip(&b) {
            let g = bi.gcd(m);
            if !ai.mod_floor(&g).is_zero() {
                return None;
            }
            let modulus = m / &g;
            let r = if modulus.is_one() {
                BigInt::zero()
            } else {
                let inv = mod_inverse(&(bi / &g), &modulus)?;
                ((ai / &g) * inv).mod_floor(&modulus)
            };
            acc = crt(&acc, &(r, modulus))?;
        }
        debug_assert_eq!(&acc.1, &self.indices[j - 1]);
        Some(acc.0)
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let ext = a.mod_floor(m).extended_gcd(m);
    ext.gcd.is_one().then(|| ext.x.mod_floor(m))
}

/// Intersection of `x ≡ r₁ (mod m₁)` and `x ≡ r₂ (mod m₂)`.
fn crt((r1, m1): &(BigInt, BigInt), (r2, m2): &(BigInt, BigInt)) -> Option<(BigInt, BigInt)> {
    let ext = m1.extended_gcd(m2);
    let g = ext.gcd;
    let diff = r2 - r1;
    if !diff.mod_floor(&g).is_zero() {
        return None;
    }
    let lcm = m1 / &g * m2;
    let step = (&diff / &g * ext.x).mod_floor(&(m2 / &g));
    Some(((r1 + m1 * step).mod_floor(&lcm), lcm))
}

/// `v ∈ G_k`, decided by comparing the minor gcd of `[W_k | v]` with `D_{k+1}`.
pub fn group_membership(chain: &LatticeChain, v: &[BigInt], level: usize) -> Result<bool> {
    chain.check_level(level)?;
    chain.check_vector(v)?;
    Ok(chain.minor_gcd_with(v, level)? == chain.d[level])
}

/// Order of `v` modulo `G_k`: the least `q ≥ 1` with `q·v ∈ G_k`.
pub fn multiple_order(chain: &LatticeChain, v: &[BigInt], level: usize) -> Result<BigInt> {
    chain.check_level(level)?;
    chain.check_vector(v)?;
    if v.iter().all(Zero::is_zero) {
        return Err(Error::ZeroVector);
    }
    let d = chain.minor_gcd_with(v, level)?;
    Ok(&chain.d[level] / d)
}

/// The unique representation `v = Σ λ_i v_i` over `v₁…v_{e+k}` with
/// `0 ≤ λ_{e+j} < e_j`.
pub fn standard_representation(chain: &LatticeChain, v: &[BigInt], level: usize) -> Result<StandardRepresentation> {
    chain.check_level(level)?;
    chain.check_vector(v)?;
    if !chain.levels[level].contains(v) {
        return Err(Error::NotInGroup { level });
    }
    let e = chain.dim;
    let mut rest = v.to_vec();
    let mut tail = vec![BigInt::zero(); level];
    for j in (1..=level).rev() {
        let lambda = chain.residue_at(&rest, j).ok_or(Error::NotInGroup { level: j })?;
        for (x, u) in rest.iter_mut().zip(&chain.extras[j - 1]) {
            *x -= &lambda * u;
        }
        tail[j - 1] = lambda;
    }
    let nums = chain.leading.numerators(&rest);
    let mut coefficients = Vec::with_capacity(e + level);
    for n in nums {
        let (q, r) = n.div_rem(chain.leading.denominator());
        if !r.is_zero() {
            return Err(Error::NotInGroup { level: 0 });
        }
        coefficients.push(q);
    }
    coefficients.extend(tail);
    Ok(StandardRepresentation { level, coefficients })
}

/// `Σ coeffs[i]·gens[i]`.
pub fn combine(gens: &[Vec<BigInt>], coeffs: &[BigInt]) -> Vec<BigInt> {
    let dim = gens.first().map_or(0, Vec::len);
    let mut out = vec![BigInt::zero(); dim];
    for (g, c) in gens.iter().zip(coeffs) {
        for (o, x) in out.iter_mut().zip(g) {
            *o += c * x;
        }
    }
    out
}
