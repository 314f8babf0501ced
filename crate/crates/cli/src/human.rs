//! Plain-text rendering of reports. No color and no locale-dependent
//! formatting, so the output can be compared byte for byte.

use std::fmt::Write;

use frobenius_core::analysis::{AnalysisDocument, AnalysisStatus, DecimalInt};

use crate::report::{CurveReport, DiophReport, MemberReport, QuasiReport, VerifyReport};

fn vector(v: &[DecimalInt]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

fn list(v: &[DecimalInt]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    parts.join(" ")
}

fn set(v: &[Vec<DecimalInt>]) -> String {
    let parts: Vec<String> = v.iter().map(|x| vector(x)).collect();
    format!("{{{}}}", parts.join(", "))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn analysis(doc: &AnalysisDocument) -> String {
    let mut s = String::new();
    let e = &doc.input.e;
    writeln!(s, "generators (e = {e}): {}", set(&doc.input.generators)).unwrap();
    writeln!(s, "D: {}", list(&doc.chain.d)).unwrap();
    writeln!(s, "e: {}", list(&doc.chain.e)).unwrap();
    let c = &doc.conditions;
    match c.star_violation {
        None => writeln!(s, "condition (*): holds").unwrap(),
        Some(k) => writeln!(s, "condition (*): fails at k = {k}").unwrap(),
    }
    match c.doublestar.iter().find(|d| !d.holds) {
        None => writeln!(s, "condition (**): holds").unwrap(),
        Some(d) => writeln!(s, "condition (**): fails at k = {} (target {})", d.k, vector(&d.target)).unwrap(),
    }
    for d in &c.doublestar {
        let status = match (&d.witness, d.holds, d.undecided) {
            (Some(w), _, _) => format!("witness {}", vector(w)),
            (None, true, _) => "holds".into(),
            (None, false, true) => "undecided".into(),
            (None, false, false) => "no representation".into(),
        };
        writeln!(s, "  k = {}: target {} {status}", d.k, vector(&d.target)).unwrap();
    }
    if let Some(f) = &doc.frobenius {
        let label = if f.minimal { "Frobenius vector" } else { "threshold (not minimal)" };
        writeln!(s, "{label}: {}", vector(&f.g)).unwrap();
        if let Some(idx) = &f.used_subset {
            let one_based: Vec<String> = idx.iter().map(|i| format!("v{}", i + 1)).collect();
            writeln!(s, "generator subset: {}", one_based.join(" ")).unwrap();
        }
        writeln!(s, "g in group: {}, g in semigroup: {}", yes_no(f.g_in_group), yes_no(f.g_in_semigroup)).unwrap();
    }
    if let Some(f) = &doc.formula {
        write!(s, "formula value: {}", vector(&f.value)).unwrap();
        match &f.witness {
            Some(w) => writeln!(s, ", in the semigroup with coefficients {}", vector(w)).unwrap(),
            None => writeln!(s).unwrap(),
        }
    }
    if let Some(c) = &doc.conductor {
        writeln!(s, "conductor: {}", set(c)).unwrap();
    }
    if let Some(g) = &doc.gaps {
        writeln!(s, "gaps ({}): {}", g.len(), list(g)).unwrap();
    }
    if let Some(n) = &doc.frobenius_number {
        writeln!(s, "Frobenius number: {n}").unwrap();
    }
    for d in &doc.diagnostics {
        writeln!(s, "note: {d}").unwrap();
    }
    let status = match doc.status {
        AnalysisStatus::Ok => "ok",
        AnalysisStatus::ConditionsUnmet => "conditions unmet",
    };
    writeln!(s, "status: {status}").unwrap();
    s
}

pub fn member(r: &MemberReport) -> String {
    let mut s = String::new();
    writeln!(s, "vector: {}", vector(&r.vector)).unwrap();
    writeln!(s, "in group: {}", yes_no(r.in_group)).unwrap();
    let verdict = match r.in_semigroup {
        Some(true) => "member",
        Some(false) => "NOT member",
        None => "unknown (search budget exhausted)",
    };
    writeln!(s, "semigroup: {verdict}").unwrap();
    if let Some(c) = &r.coefficients {
        let label = match r.method {
            crate::report::MemberMethod::StandardRepresentation => "standard representation",
            crate::report::MemberMethod::BruteForce => "witness",
        };
        writeln!(s, "{label}: {}", vector(c)).unwrap();
    }
    if let Some(b) = r.beyond_frobenius {
        writeln!(s, "beyond Frobenius vector: {}", yes_no(b)).unwrap();
    }
    s
}

pub fn dioph(r: &DiophReport) -> String {
    let mut s = String::new();
    writeln!(s, "right-hand side: {}", vector(&r.rhs)).unwrap();
    writeln!(s, "status: {}", r.status).unwrap();
    if let Some(w) = &r.witness {
        writeln!(s, "solution: {}", vector(w)).unwrap();
    }
    s
}

pub fn curve(r: &CurveReport) -> String {
    let mut s = String::new();
    writeln!(s, "exponents: n = {}, m = {}", r.input.n, list(&r.input.m)).unwrap();
    writeln!(s, "generators: {}", list(&r.generators)).unwrap();
    writeln!(s, "d: {}", list(&r.d)).unwrap();
    writeln!(s, "e: {}", list(&r.e)).unwrap();
    writeln!(s, "conductor: {}", r.conductor).unwrap();
    writeln!(s, "Milnor number: {}", r.milnor).unwrap();
    writeln!(s, "gaps: {}", r.gap_count).unwrap();
    writeln!(s, "realizable: {}", yes_no(r.zariski)).unwrap();
    s
}

pub fn quasi(r: &QuasiReport) -> String {
    let mut s = String::new();
    writeln!(s, "exponents: n = {}, m = {}", r.input.n, set(&r.input.m)).unwrap();
    writeln!(s, "generators: {}", set(&r.generators)).unwrap();
    writeln!(s, "D: {}", list(&r.d)).unwrap();
    writeln!(s, "e: {}", list(&r.e_indices)).unwrap();
    writeln!(s, "Frobenius vector: {}", vector(&r.g)).unwrap();
    s
}

pub fn verify(r: &VerifyReport) -> String {
    let mut s = String::new();
    let t = &r.theorem1;
    writeln!(s, "Frobenius vector: {}", vector(&t.g)).unwrap();
    writeln!(s, "box: {} .. {}", vector(&t.box_lower), vector(&t.box_upper)).unwrap();
    writeln!(s, "g in semigroup: {}", yes_no(t.g_in_semigroup)).unwrap();
    writeln!(s, "group points beyond g checked: {}", t.points_checked).unwrap();
    match &t.counterexample {
        Some(p) => writeln!(s, "counterexample: {}", vector(p)).unwrap(),
        None => writeln!(s, "counterexample: none").unwrap(),
    }
    if let Some(c) = &r.conductor {
        writeln!(s, "conductor: {}", set(&c.conductor)).unwrap();
        writeln!(s, "cover of the cone up to {}: {}", vector(&c.box_upper), yes_no(c.covered)).unwrap();
        if let Some(p) = &c.uncovered {
            writeln!(s, "uncovered point: {}", vector(p)).unwrap();
        }
        writeln!(s, "conductor shifts stay in the semigroup: {}", yes_no(c.shifts_in_semigroup)).unwrap();
        if let Some(p) = &c.failed_shift {
            writeln!(s, "failed shift: {}", vector(p)).unwrap();
        }
    }
    for n in &r.notes {
        writeln!(s, "note: {n}").unwrap();
    }
    writeln!(s, "verdict: {}", if r.holds() { "holds" } else { "FAILS" }).unwrap();
    s
}
