//! `frobenius`: Frobenius vectors, conductors and membership for affine
//! semigroups from the command line.
//!
//! Exit codes: 0 success, 2 invalid input, 3 conditions (*)/(**) unmet,
//! 4 the oracle found a counterexample.

mod human;
mod report;

use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use frobenius_core::analysis::{analyze, parse_input, AnalysisStatus, DecimalInt, InputDocument};
use frobenius_core::frobenius::{
    beyond_frobenius, conductor_set, diophantine_solve, frobenius_vector, DiophantineStatus,
};
use frobenius_core::lattice::GeneratorSystem;
use frobenius_core::oracle::{verify_conductor, verify_theorem1};
use frobenius_core::semigroup::{membership_fast, AffineSemigroup, BruteForce, SearchOutcome, DEFAULT_BUDGET};
use frobenius_core::singularities::{curve_semigroup, qo_semigroup, zariski_validate, CurveExponents, QOExponents};
use num_bigint::BigInt;
use serde::Serialize;

use report::*;

#[derive(Parser)]
#[command(name = "frobenius", version, about = "Frobenius vectors and conductors of affine semigroups")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    format: Format,

    /// Fall back to a generator subset satisfying (*) and (**).
    #[arg(long, global = true)]
    allow_subset: bool,

    /// Verification box is g + [0, margin·(v₁ + … + v_e)].
    #[arg(long, default_value_t = 3, global = true)]
    margin: u64,

    /// Node budget for brute-force searches.
    #[arg(long, default_value_t = DEFAULT_BUDGET, global = true)]
    budget: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Machine,
}

#[derive(clap::Args)]
struct SystemArgs {
    /// JSON document with `e` and `generators` ("-" for stdin).
    #[arg(long)]
    input: Option<PathBuf>,

    /// Generator as comma-separated coordinates; repeat for each generator.
    #[arg(short = 'g', long = "gen", value_name = "V", conflicts_with = "input")]
    generators: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Chain, conditions, Frobenius vector, conductor and gaps.
    Analyze(SystemArgs),
    /// Membership of a vector in the semigroup.
    Member {
        #[command(flatten)]
        system: SystemArgs,
        /// Comma-separated coordinates.
        #[arg(allow_hyphen_values = true)]
        vector: String,
    },
    /// Nonnegative solution of A·X = B, columns of A being the generators.
    Dioph {
        #[command(flatten)]
        system: SystemArgs,
        /// Right-hand side B, comma-separated.
        rhs: String,
    },
    /// Semigroup of a plane branch with characteristic exponents (n; m₁, …, m_h).
    Curve {
        #[arg(short, long)]
        n: String,
        /// Exponents, comma-separated or repeated.
        #[arg(short, long, required = true, num_args = 1..)]
        m: Vec<String>,
    },
    /// Semigroup of a quasi-ordinary polynomial.
    Quasi {
        #[arg(short, long)]
        n: String,
        /// One exponent vector per occurrence, comma-separated coordinates.
        #[arg(short, long, required = true)]
        m: Vec<String>,
    },
    /// Checks the Frobenius vector and conductor by brute force on a finite box.
    Verify(SystemArgs),
}

#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Conditions(String),
    #[error("{0}")]
    Counterexample(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Conditions(_) => 3,
            Failure::Counterexample(_) => 4,
        }
    }
}

impl From<frobenius_core::Error> for Failure {
    fn from(err: frobenius_core::Error) -> Self {
        match err {
            frobenius_core::Error::ConditionsUnmet(_) => Failure::Conditions(err.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

fn parse_int(s: &str) -> Result<BigInt, Failure> {
    s.trim().parse().map_err(|_| Failure::Input(format!("not an integer: {s:?}")))
}

fn parse_vector(s: &str) -> Result<Vec<BigInt>, Failure> {
    s.split(',').map(parse_int).collect()
}

fn read_input(args: &SystemArgs) -> Result<InputDocument, Failure> {
    if let Some(path) = &args.input {
        let text = if path.as_os_str() == "-" {
            let mut buf = String::new();
            io::stdin().read_to_string(&mut buf).map_err(|e| Failure::Input(format!("stdin: {e}")))?;
            buf
        } else {
            fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?
        };
        return Ok(parse_input(&text)?);
    }
    if args.generators.is_empty() {
        return Err(Failure::Input("no generators: pass --input or -g".into()));
    }
    let generators: Vec<Vec<BigInt>> = args.generators.iter().map(|g| parse_vector(g)).collect::<Result<_, _>>()?;
    Ok(InputDocument {
        e: DecimalInt(generators[0].len().into()),
        generators: generators.iter().map(|g| dec(g)).collect(),
    })
}

fn load(args: &SystemArgs) -> Result<(InputDocument, GeneratorSystem), Failure> {
    let input = read_input(args)?;
    let system = input.to_system()?;
    Ok((input, system))
}

fn emit<T: Serialize>(format: Format, value: &T, human: impl FnOnce() -> String) {
    match format {
        Format::Machine => println!("{}", serde_json::to_string_pretty(value).expect("reports always serialize")),
        Format::Human => print!("{}", human()),
    }
}

fn cmd_analyze(cli: &Cli, args: &SystemArgs) -> Result<(), Failure> {
    let (_, system) = load(args)?;
    let doc = analyze(&system, cli.allow_subset)?;
    emit(cli.format, &doc, || human::analysis(&doc));
    if doc.status == AnalysisStatus::ConditionsUnmet {
        let why = doc
            .diagnostics
            .iter()
            .find(|d| d.starts_with("(*)") || d.starts_with("(**)"))
            .cloned()
            .unwrap_or_else(|| "conditions (*) and (**) are not both satisfied".into());
        return Err(Failure::Conditions(why));
    }
    Ok(())
}

fn cmd_member(cli: &Cli, args: &SystemArgs, vector: &str) -> Result<(), Failure> {
    let (input, system) = load(args)?;
    let v = parse_vector(vector)?;
    let sg = AffineSemigroup::new(system)?;
    if v.len() != sg.dim() {
        return Err(Failure::Input(format!("vector must have {} coordinates", sg.dim())));
    }
    let chain = sg.chain();
    let in_group = chain.contains(&v, chain.depth())?;
    let report = if sg.conditions().all_hold() {
        let g = frobenius_vector(&sg)?.g;
        let (in_semigroup, coefficients) = if in_group {
            let m = membership_fast(&sg, &v)?;
            (Some(m.in_semigroup), Some(dec(&m.representation.coefficients)))
        } else {
            (Some(false), None)
        };
        MemberReport {
            input,
            vector: dec(&v),
            in_group,
            in_semigroup,
            method: MemberMethod::StandardRepresentation,
            coefficients,
            beyond_frobenius: Some(beyond_frobenius(&sg, &g, &v)),
        }
    } else {
        let (in_semigroup, coefficients) = match BruteForce::new(sg.system().generators()).search(&v, Some(cli.budget))
        {
            SearchOutcome::Found(w) => (Some(true), Some(dec(&w))),
            SearchOutcome::NotFound => (Some(false), None),
            SearchOutcome::Exhausted => (None, None),
        };
        MemberReport {
            input,
            vector: dec(&v),
            in_group,
            in_semigroup,
            method: MemberMethod::BruteForce,
            coefficients,
            beyond_frobenius: None,
        }
    };
    emit(cli.format, &report, || human::member(&report));
    if report.in_semigroup.is_none() {
        return Err(Failure::Conditions(format!(
            "conditions unmet and the search exhausted its budget of {} nodes",
            cli.budget
        )));
    }
    Ok(())
}

fn cmd_dioph(cli: &Cli, args: &SystemArgs, rhs: &str) -> Result<(), Failure> {
    let (input, system) = load(args)?;
    let b = parse_vector(rhs)?;
    let sg = AffineSemigroup::new(system)?;
    let answer = diophantine_solve(&sg, &b, cli.budget)?;
    let report = DiophReport {
        input,
        rhs: dec(&b),
        status: status_name(answer.status).into(),
        witness: answer.witness.as_deref().map(dec),
    };
    emit(cli.format, &report, || human::dioph(&report));
    if answer.status == DiophantineStatus::ConditionsUnmet {
        return Err(Failure::Conditions("conditions unmet and the search exhausted its budget".into()));
    }
    Ok(())
}

fn cmd_curve(cli: &Cli, n: &str, m: &[String]) -> Result<(), Failure> {
    let n = parse_int(n)?;
    let m: Vec<BigInt> =
        m.iter().map(|s| parse_vector(s)).collect::<Result<Vec<_>, _>>()?.into_iter().flatten().collect();
    let data = curve_semigroup(&CurveExponents::new(n.clone(), m.clone()))?;
    let report = CurveReport {
        input: CurveInput { n: n.into(), m: dec(&m) },
        zariski: zariski_validate(&data.generators),
        generators: dec(&data.generators),
        d: dec(&data.d),
        e: dec(&data.e),
        conductor: data.conductor.into(),
        milnor: data.milnor.into(),
        gap_count: data.gap_count.into(),
    };
    emit(cli.format, &report, || human::curve(&report));
    Ok(())
}

fn cmd_quasi(cli: &Cli, n: &str, m: &[String]) -> Result<(), Failure> {
    let n = parse_int(n)?;
    let m: Vec<Vec<BigInt>> = m.iter().map(|s| parse_vector(s)).collect::<Result<_, _>>()?;
    let e = m[0].len();
    let data = qo_semigroup(&QOExponents::new(e, n.clone(), m.clone()))?;
    let report = QuasiReport {
        input: QuasiInput { e: DecimalInt(e.into()), n: n.into(), m: dec2(&m) },
        generators: dec2(data.semigroup.system().generators()),
        d: dec(&data.d),
        e_indices: dec(&data.e_indices),
        g: dec(&data.g),
    };
    emit(cli.format, &report, || human::quasi(&report));
    Ok(())
}

fn cmd_verify(cli: &Cli, args: &SystemArgs) -> Result<(), Failure> {
    let (input, system) = load(args)?;
    let sg = AffineSemigroup::new(system)?;
    let g = frobenius_vector(&sg)?.g;
    let t = verify_theorem1(&sg, &g, cli.margin)?;
    let mut notes = vec![format!("finite check on the box g + [0, {}·(v₁ + … + v_e)]", cli.margin)];
    let conductor = if sg.chain().full_lattice() {
        let set = conductor_set(&sg, &g)?;
        match verify_conductor(&sg, &set, cli.margin) {
            Ok(v) => {
                let upper: Vec<BigInt> = (0..sg.dim())
                    .map(|i| sg.system().leading().iter().map(|l| &l[i]).sum::<BigInt>() * cli.margin)
                    .collect();
                Some(ConductorSection {
                    conductor: dec2(&set),
                    box_upper: dec(&upper),
                    covered: v.covered,
                    uncovered: v.uncovered.as_deref().map(dec),
                    shifts_in_semigroup: v.shifts_in_semigroup,
                    failed_shift: v.failed_shift.as_deref().map(dec),
                })
            }
            Err(err) => {
                notes.push(format!("conductor check skipped: {err}"));
                None
            }
        }
    } else {
        notes.push("conductor undefined: the generators do not span ℤᵉ".into());
        None
    };
    let report = VerifyReport {
        input,
        margin: cli.margin,
        theorem1: Theorem1Section {
            g: dec(&g),
            box_lower: dec(t.checked_box.lower()),
            box_upper: dec(t.checked_box.upper()),
            holds: t.holds,
            g_in_semigroup: t.g_in_semigroup,
            counterexample: t.counterexample.as_deref().map(dec),
            points_checked: t.points_checked,
        },
        conductor,
        notes,
    };
    emit(cli.format, &report, || human::verify(&report));
    if !report.holds() {
        return Err(Failure::Counterexample("the oracle found a counterexample".into()));
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Analyze(args) => cmd_analyze(cli, args),
        Command::Member { system, vector } => cmd_member(cli, system, vector),
        Command::Dioph { system, rhs } => cmd_dioph(cli, system, rhs),
        Command::Curve { n, m } => cmd_curve(cli, n, m),
        Command::Quasi { n, m } => cmd_quasi(cli, n, m),
        Command::Verify(args) => cmd_verify(cli, args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.code())
        }
    }
}
