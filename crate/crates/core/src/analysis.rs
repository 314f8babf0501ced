//! Whole-pipeline analysis of a generator system and its JSON document form.
//!
//! Integers are written as decimal strings so documents never depend on a
//! 64-bit range; on input, plain JSON integers are accepted as well.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::frobenius::{conductor_set, frobenius_formula, frobenius_subset, frobenius_vector, gaps, FrobeniusReport};
use crate::lattice::{ConeCell, GeneratorSystem};
use crate::semigroup::{AffineSemigroup, BruteForce, ConditionReport, SearchOutcome, DEFAULT_BUDGET};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DecimalInt(pub BigInt);

impl From<BigInt> for DecimalInt {
    fn from(v: BigInt) -> Self {
        Self(v)
    }
}

impl From<&BigInt> for DecimalInt {
    fn from(v: &BigInt) -> Self {
        Self(v.clone())
    }
}

impl fmt::Display for DecimalInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for DecimalInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0.to_string())
    }
}

struct DecimalVisitor;

impl Visitor<'_> for DecimalVisitor {
    type Value = DecimalInt;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("an integer or a decimal string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<DecimalInt, E> {
        Ok(DecimalInt(v.into()))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<DecimalInt, E> {
        Ok(DecimalInt(v.into()))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<DecimalInt, E> {
        v.trim().parse::<BigInt>().map(DecimalInt).map_err(|_| E::custom(format!("not a decimal integer: {v:?}")))
    }
}

impl<'de> Deserialize<'de> for DecimalInt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        deserializer.deserialize_any(DecimalVisitor)
    }
}

fn dec(v: &[BigInt]) -> Vec<DecimalInt> {
    v.iter().map(DecimalInt::from).collect()
}

fn dec2(v: &[Vec<BigInt>]) -> Vec<Vec<DecimalInt>> {
    v.iter().map(|x| dec(x)).collect()
}

fn big(v: &[DecimalInt]) -> Vec<BigInt> {
    v.iter().map(|x| x.0.clone()).collect()
}

/// A generator system as read from disk: `{"e": 1, "generators": [[4], [6], [7]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDocument {
    pub e: DecimalInt,
    pub generators: Vec<Vec<DecimalInt>>,
}

impl InputDocument {
    pub fn from_system(system: &GeneratorSystem) -> Self {
        Self { e: DecimalInt(system.dim().into()), generators: dec2(system.generators()) }
    }

    pub fn to_system(&self) -> Result<GeneratorSystem> {
        let e = self
            .e
            .0
            .to_usize()
            .filter(|&e| e > 0)
            .ok_or_else(|| Error::InvalidSystem(format!("e = {} is not a positive dimension", self.e)))?;
        GeneratorSystem::new(e, self.generators.iter().map(|g| big(g)).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainSection {
    /// `D₁, …, D_{s+1}`.
    pub d: Vec<DecimalInt>,
    /// `e₁, …, e_s`.
    pub e: Vec<DecimalInt>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoubleStarSection {
    pub k: usize,
    pub target: Vec<DecimalInt>,
    pub holds: bool,
    pub witness: Option<Vec<DecimalInt>>,
    pub undecided: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionSection {
    pub star: bool,
    pub star_violation: Option<usize>,
    pub doublestar: Vec<DoubleStarSection>,
}

impl From<&ConditionReport> for ConditionSection {
    fn from(r: &ConditionReport) -> Self {
        Self {
            star: r.star_holds,
            star_violation: r.star_violation,
            doublestar: r
                .doublestar
                .iter()
                .map(|c| DoubleStarSection {
                    k: c.k,
                    target: dec(&c.target),
                    holds: c.holds,
                    witness: c.witness.as_deref().map(dec),
                    undecided: c.undecided,
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusSection {
    pub g: Vec<DecimalInt>,
    /// `false` when `g` is only a threshold obtained from a generator subset.
    pub minimal: bool,
    /// 0-based generator indices kept by the subset fallback.
    pub used_subset: Option<Vec<usize>>,
    pub g_in_group: bool,
    pub g_in_semigroup: bool,
}

impl From<&FrobeniusReport> for FrobeniusSection {
    fn from(r: &FrobeniusReport) -> Self {
        Self {
            g: dec(&r.g),
            minimal: r.minimal,
            used_subset: r.used_subset.clone(),
            g_in_group: r.g_in_group,
            g_in_semigroup: r.g_in_semigroup,
        }
    }
}

/// The formula value when the conditions fail, with a representation
/// showing it lies in `Γ` when one is found.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulaSection {
    pub value: Vec<DecimalInt>,
    pub witness: Option<Vec<DecimalInt>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnalysisStatus {
    Ok,
    ConditionsUnmet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisDocument {
    pub input: InputDocument,
    pub status: AnalysisStatus,
    pub chain: ChainSection,
    pub conditions: ConditionSection,
    pub frobenius: Option<FrobeniusSection>,
    pub conductor: Option<Vec<Vec<DecimalInt>>>,
    pub formula: Option<FormulaSection>,
    /// Gaps of a numerical semigroup (`e = 1`, coprime generators).
    pub gaps: Option<Vec<DecimalInt>>,
    /// Largest gap, or `-1` when there is none.
    pub frobenius_number: Option<DecimalInt>,
    pub diagnostics: Vec<String>,
}

impl AnalysisDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum AnyDocument {
    Analysis(Box<AnalysisDocument>),
    Input(InputDocument),
}

/// Reads an input document, or the input echoed by an analysis document.
pub fn parse_input(text: &str) -> Result<InputDocument> {
    match serde_json::from_str::<AnyDocument>(text) {
        Ok(AnyDocument::Input(doc)) => Ok(doc),
        Ok(AnyDocument::Analysis(doc)) => Ok(doc.input),
        Err(err) => Err(Error::InvalidSystem(format!("malformed input document: {err}"))),
    }
}

pub fn parse_analysis(text: &str) -> Result<AnalysisDocument> {
    serde_json::from_str(text).map_err(|err| Error::InvalidSystem(format!("malformed analysis document: {err}")))
}

/// Chain, conditions, Frobenius vector, conductor and (for `e = 1`) gaps.
///
/// Only invalid systems are errors; failed conditions are reported through
/// [`AnalysisStatus::ConditionsUnmet`]. With `allow_subset` a generator
/// subset satisfying the conditions is tried first.
pub fn analyze(system: &GeneratorSystem, allow_subset: bool) -> Result<AnalysisDocument> {
    let semigroup = AffineSemigroup::new(system.clone())?;
    let chain = semigroup.chain();
    let conditions = semigroup.conditions();
    let mut diagnostics = Vec::new();

    let frame = chain.frame();
    for (i, v) in system.extras().iter().enumerate() {
        if frame.classify(v) == ConeCell::Boundary {
            diagnostics.push(format!("generator {} lies on the boundary of the cone", system.dim() + i + 1));
        }
    }
    for c in conditions.doublestar.iter().filter(|c| c.undecided) {
        diagnostics.push(format!("(**) at k = {} undecided within the search budget", c.k));
    }

    let mut formula = None;
    let report = if conditions.all_hold() {
        Some(frobenius_vector(&semigroup)?)
    } else {
        if let Some(k) = conditions.star_violation {
            diagnostics.push(format!("(*) fails: D{k} = D{}", k + 1));
        }
        if let Some(c) = conditions.first_doublestar_failure() {
            let target: Vec<String> = c.target.iter().map(ToString::to_string).collect();
            diagnostics.push(format!(
                "(**) fails at k = {}: target ({}) not in the preceding semigroup",
                c.k,
                target.join(", ")
            ));
        }
        let value = frobenius_formula(system, chain);
        let witness = if value.iter().any(Signed::is_negative) {
            None
        } else {
            match BruteForce::new(system.generators()).search(&value, Some(DEFAULT_BUDGET)) {
                SearchOutcome::Found(w) => Some(dec(&w)),
                _ => None,
            }
        };
        formula = Some(FormulaSection { value: dec(&value), witness });
        if allow_subset {
            match frobenius_subset(system) {
                Ok(r) => {
                    diagnostics.push("subset fallback: g is a threshold, not necessarily minimal".into());
                    Some(r)
                }
                Err(err) => {
                    diagnostics.push(format!("subset fallback failed: {err}"));
                    None
                }
            }
        } else {
            None
        }
    };

    let mut conductor = None;
    if let Some(r) = report.as_ref().filter(|r| r.minimal) {
        if chain.full_lattice() {
            match conductor_set(&semigroup, &r.g) {
                Ok(c) => conductor = Some(dec2(&c)),
                Err(err) => diagnostics.push(format!("conductor set omitted: {err}")),
            }
        } else {
            diagnostics.push(format!(
                "conductor set omitted: D{} = {} ≠ 1",
                chain.d().len(),
                chain.d().last().unwrap()
            ));
        }
    }

    let (mut gap_list, mut frobenius_number) = (None, None);
    if system.dim() == 1 && chain.full_lattice() {
        match gaps(&semigroup) {
            Ok(list) => {
                frobenius_number = Some(DecimalInt(list.last().cloned().unwrap_or_else(|| BigInt::from(-1))));
                gap_list = Some(dec(&list));
            }
            Err(err) => diagnostics.push(format!("gaps omitted: {err}")),
        }
    }

    Ok(AnalysisDocument {
        input: InputDocument::from_system(system),
        status: if report.is_some() { AnalysisStatus::Ok } else { AnalysisStatus::ConditionsUnmet },
        chain: ChainSection { d: dec(chain.d()), e: dec(chain.indices()) },
        conditions: ConditionSection::from(conditions),
        frobenius: report.as_ref().map(FrobeniusSection::from),
        conductor,
        formula,
        gaps: gap_list,
        frobenius_number,
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(text: &str, allow_subset: bool) -> AnalysisDocument {
        analyze(&parse_input(text).unwrap().to_system().unwrap(), allow_subset).unwrap()
    }

    fn strs(v: &[i64]) -> Vec<DecimalInt> {
        v.iter().map(|&x| DecimalInt(x.into())).collect()
    }

    #[test]
    fn numerical_example() {
        let d = doc(r#"{"e": 1, "generators": [[4], [6], [7]]}"#, false);
        assert_eq!(d.status, AnalysisStatus::Ok);
        assert_eq!(d.chain.d, strs(&[4, 2, 1]));
        assert_eq!(d.frobenius.as_ref().unwrap().g, strs(&[9]));
        assert_eq!(d.conductor, Some(vec![strs(&[10])]));
        assert_eq!(d.gaps, Some(strs(&[1, 2, 3, 5, 9])));
        assert_eq!(d.frobenius_number, Some(DecimalInt(9.into())));
    }

    #[test]
    fn failing_conditions_are_reported() {
        let d = doc(r#"{"e": "1", "generators": [["8"], ["10"], ["11"]]}"#, false);
        assert_eq!(d.status, AnalysisStatus::ConditionsUnmet);
        assert!(d.frobenius.is_none());
        let f = d.formula.unwrap();
        assert_eq!(f.value, strs(&[33]));
        assert_eq!(f.witness, Some(strs(&[0, 0, 3])));
        assert_eq!(d.frobenius_number, Some(DecimalInt(25.into())));
        assert!(d.diagnostics.iter().any(|m| m.contains("(22)")));

        let d = doc(r#"{"e": 1, "generators": [[4], [6], [7], [9]]}"#, true);
        assert_eq!(d.status, AnalysisStatus::Ok);
        let f = d.frobenius.unwrap();
        assert_eq!(f.g, strs(&[9]));
        assert!(!f.minimal);
        assert_eq!(f.used_subset, Some(vec![0, 1, 2]));
        assert_eq!(d.frobenius_number, Some(DecimalInt(5.into())));
    }

    #[test]
    fn json_round_trip_is_idempotent() {
        for text in [
            r#"{"e": 2, "generators": [[1, 3], [3, 2], [1, 1]]}"#,
            r#"{"e": 2, "generators": [[4, 6], [6, 3], [8, 10], [3, 4]]}"#,
            r#"{"e": 1, "generators": [[8], [10], [11]]}"#,
        ] {
            let first = doc(text, false);
            let json = first.to_json();
            assert_eq!(parse_analysis(&json).unwrap(), first);
            assert_eq!(doc(&json, false), first);
        }
    }

    #[test]
    fn big_integers_survive() {
        let text = r#"{"e": 1, "generators": [["100000000000000000000"], ["100000000000000000001"]]}"#;
        let input = parse_input(text).unwrap();
        let json = serde_json::to_string(&input).unwrap();
        assert!(json.contains("\"100000000000000000001\""));
        assert_eq!(parse_input(&json).unwrap(), input);
    }

    #[test]
    fn malformed_inputs() {
        assert!(parse_input("{\"e\": 1}").is_err());
        assert!(parse_input("{\"e\": 1, \"generators\": [[\"x\"]]}").is_err());
        assert!(parse_input(r#"{"e": 0, "generators": [[1]]}"#).unwrap().to_system().is_err());
    }
}
