//! Machine-readable reports for the subcommands other than `analyze`, which
//! uses the core [`AnalysisDocument`](frobenius_core::analysis::AnalysisDocument).

use frobenius_core::analysis::{DecimalInt, InputDocument};
use frobenius_core::frobenius::DiophantineStatus;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

pub fn dec(v: &[BigInt]) -> Vec<DecimalInt> {
    v.iter().map(DecimalInt::from).collect()
}

pub fn dec2(v: &[Vec<BigInt>]) -> Vec<Vec<DecimalInt>> {
    v.iter().map(|x| dec(x)).collect()
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MemberMethod {
    StandardRepresentation,
    BruteForce,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MemberReport {
    pub input: InputDocument,
    pub vector: Vec<DecimalInt>,
    pub in_group: bool,
    /// `None` when the brute-force search ran out of budget.
    pub in_semigroup: Option<bool>,
    pub method: MemberMethod,
    /// Standard representation (fast path) or a nonnegative witness (brute force).
    pub coefficients: Option<Vec<DecimalInt>>,
    pub beyond_frobenius: Option<bool>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct DiophReport {
    pub input: InputDocument,
    pub rhs: Vec<DecimalInt>,
    pub status: String,
    pub witness: Option<Vec<DecimalInt>>,
}

pub fn status_name(status: DiophantineStatus) -> &'static str {
    match status {
        DiophantineStatus::SolvableByCone => "solvable_by_cone",
        DiophantineStatus::SolvableWithWitness => "solvable_with_witness",
        DiophantineStatus::LatticeInfeasible => "lattice_infeasible",
        DiophantineStatus::NoSolution => "no_solution",
        DiophantineStatus::ConditionsUnmet => "conditions_unmet",
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CurveInput {
    pub n: DecimalInt,
    pub m: Vec<DecimalInt>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CurveReport {
    pub input: CurveInput,
    pub generators: Vec<DecimalInt>,
    pub d: Vec<DecimalInt>,
    pub e: Vec<DecimalInt>,
    pub conductor: DecimalInt,
    pub milnor: DecimalInt,
    pub gap_count: DecimalInt,
    pub zariski: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct QuasiInput {
    pub e: DecimalInt,
    pub n: DecimalInt,
    pub m: Vec<Vec<DecimalInt>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct QuasiReport {
    pub input: QuasiInput,
    pub generators: Vec<Vec<DecimalInt>>,
    pub d: Vec<DecimalInt>,
    pub e_indices: Vec<DecimalInt>,
    pub g: Vec<DecimalInt>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Theorem1Section {
    pub g: Vec<DecimalInt>,
    pub box_lower: Vec<DecimalInt>,
    pub box_upper: Vec<DecimalInt>,
    pub holds: bool,
    pub g_in_semigroup: bool,
    pub counterexample: Option<Vec<DecimalInt>>,
    pub points_checked: u64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ConductorSection {
    pub conductor: Vec<Vec<DecimalInt>>,
    pub box_upper: Vec<DecimalInt>,
    pub covered: bool,
    pub uncovered: Option<Vec<DecimalInt>>,
    pub shifts_in_semigroup: bool,
    pub failed_shift: Option<Vec<DecimalInt>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct VerifyReport {
    pub input: InputDocument,
    pub margin: u64,
    pub theorem1: Theorem1Section,
    pub conductor: Option<ConductorSection>,
    pub notes: Vec<String>,
}

impl VerifyReport {
    pub fn holds(&self) -> bool {
        self.theorem1.holds && self.conductor.as_ref().is_none_or(|c| c.covered && c.shifts_in_semigroup)
    }
}
