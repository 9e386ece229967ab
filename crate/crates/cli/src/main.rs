//! Command-line front end: batch access to Jack expansions, basis
//! conversions, pairings, star and cup products, structure-constant tables,
//! and the Heisenberg relation checker. All outputs are canonical documents
//! that parse back through the library's reader; identical invocations
//! produce byte-identical output.

use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use hilbjack::fock::{heisenberg_check, HeisBasis, HeisMonomial};
use hilbjack::hilb::{
    ordinary_cup, structure_constants, ClassKey, HeisCombo, StructureTable, SurfaceModel,
    TableBasis, TableRow,
};
use hilbjack::io::{self, Document, Format};
use hilbjack::partition::bipartitions_of;
use hilbjack::rational::parse_rat;
use hilbjack::symfunc::{inner_product, jack_polynomial, Basis};

#[derive(Parser)]
#[command(
    name = "hilbjack",
    version,
    about = "Equivariant cohomology of Hilbert schemes of points via Jack polynomials"
)]
struct Cli {
    /// Output format; csv applies to structure-constant tables only
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,

    /// Worker threads for table computations (default: single-threaded)
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Plane,
    Linebundle,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BasisArg {
    Fixedpoint,
    Qgraded,
}

#[derive(Subcommand)]
enum Command {
    /// Expand a Jack polynomial in the monomial basis
    Jack {
        /// Partition, e.g. [3,1]
        #[arg(long)]
        lambda: String,
        /// Positive rational Jack parameter, e.g. 1/2
        #[arg(long)]
        param: String,
    },
    /// Convert a symmetric-function document between bases
    Convert {
        /// Target basis: m, p, pnorm, or jack (jack needs --param)
        #[arg(long)]
        target: String,
        /// Jack parameter for --target jack
        #[arg(long)]
        param: Option<String>,
        /// Input file, or - for standard input
        #[arg(long, default_value = "-")]
        input: String,
    },
    /// Pair two documents under the ambient bilinear form
    Pair {
        /// Left document (file or -)
        #[arg(long)]
        left: String,
        /// Right document (file or -)
        #[arg(long)]
        right: String,
        /// Inner-product parameter, required for symmetric-function inputs
        #[arg(long)]
        param: Option<String>,
    },
    /// Star-multiply two fixed-point classes
    Star {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Ordinary cup product of two zero-section monomials
    Cup {
        /// First monomial label, e.g. [[],[1]]
        #[arg(long)]
        q1: String,
        /// Second monomial label
        #[arg(long)]
        q2: String,
        /// Line-bundle degree parameter (at least 2)
        #[arg(long)]
        gamma: i64,
    },
    /// Export a complete multiplication table
    Structconsts {
        #[arg(long, value_enum)]
        model: ModelArg,
        #[arg(long)]
        alpha: Option<i64>,
        #[arg(long)]
        beta: Option<i64>,
        #[arg(long)]
        gamma: Option<i64>,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = BasisArg::Fixedpoint)]
        basis: BasisArg,
    },
    /// Verify the Heisenberg commutation relations up to a degree bound
    HeisCheck {
        #[arg(long, value_enum)]
        model: ModelArg,
        #[arg(long)]
        alpha: Option<i64>,
        #[arg(long)]
        beta: Option<i64>,
        #[arg(long)]
        gamma: Option<i64>,
        #[arg(long)]
        maxdeg: usize,
    },
}

enum CliError {
    /// Missing or inconsistent options: exit code 2.
    Usage(String),
    /// Well-formed request that the library rejects: exit code 1.
    Domain(String),
}

impl From<hilbjack::Error> for CliError {
    fn from(e: hilbjack::Error) -> Self {
        CliError::Domain(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Output { text, failed_check }) => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
            if failed_check {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

struct Output {
    text: String,
    failed_check: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Output {
            text,
            failed_check: false,
        }
    }
}

fn run(cli: Cli) -> Result<Output, CliError> {
    let format = match cli.format {
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
    };
    match cli.command {
        Command::Jack { lambda, param } => {
            let la = io::parse_partition_text(&lambda)?;
            let r = parse_rat(&param)?;
            let poly = jack_polynomial(&la, &r)?;
            render(&Document::SymPoly(poly), format).map(Output::ok)
        }
        Command::Convert {
            target,
            param,
            input,
        } => {
            let text = read_input(&input)?;
            let doc = io::parse(&text)?;
            let poly = match doc {
                Document::SymPoly(p) => p,
                _ => {
                    return Err(CliError::Domain(
                        "convert expects a symmetric-function document".into(),
                    ))
                }
            };
            let basis = parse_basis_arg(&target, param.as_deref())?;
            render(&Document::SymPoly(poly.convert(&basis)?), format).map(Output::ok)
        }
        Command::Pair { left, right, param } => {
            let left = io::parse(&read_input(&left)?)?;
            let right = io::parse(&read_input(&right)?)?;
            let value = match (left, right) {
                (Document::SymPoly(f), Document::SymPoly(g)) => {
                    let r = param.ok_or_else(|| {
                        CliError::Usage(
                            "--param is required to pair symmetric functions".into(),
                        )
                    })?;
                    inner_product(&f, &g, &parse_rat(&r)?)?
                }
                (Document::EquivClass(a), Document::EquivClass(b)) => a.pairing(&b)?,
                (Document::FockState(a), Document::FockState(b)) => a.pairing(&b)?,
                _ => {
                    return Err(CliError::Domain(
                        "pair expects two documents of the same kind (sympoly, equivclass, or fockstate)"
                            .into(),
                    ))
                }
            };
            render(&Document::Scalar(value), format).map(Output::ok)
        }
        Command::Star { left, right } => {
            let left = io::parse(&read_input(&left)?)?;
            let right = io::parse(&read_input(&right)?)?;
            match (left, right) {
                (Document::EquivClass(a), Document::EquivClass(b)) => {
                    render(&Document::EquivClass(a.star(&b)?), format).map(Output::ok)
                }
                _ => Err(CliError::Domain(
                    "star expects two fixed-point class documents".into(),
                )),
            }
        }
        Command::Cup { q1, q2, gamma } => {
            let model = SurfaceModel::line_bundle(gamma)?;
            let a = HeisMonomial::new(io::parse_bipartition_text(&q1)?, HeisBasis::ZeroSection);
            let b = HeisMonomial::new(io::parse_bipartition_text(&q2)?, HeisBasis::ZeroSection);
            let cup = ordinary_cup(&a, &b, &model)?;
            render(&Document::HeisCombo(cup), format).map(Output::ok)
        }
        Command::Structconsts {
            model,
            alpha,
            beta,
            gamma,
            n,
            basis,
        } => {
            let model = build_model(model, alpha, beta, gamma)?;
            let table = match basis {
                BasisArg::Fixedpoint => structure_constants(n, &model, TableBasis::FixedPoint)?,
                BasisArg::Qgraded => graded_table(n, &model, cli.jobs.unwrap_or(1))?,
            };
            render(&Document::Table(table), format).map(Output::ok)
        }
        Command::HeisCheck {
            model,
            alpha,
            beta,
            gamma,
            maxdeg,
        } => {
            let model = build_model(model, alpha, beta, gamma)?;
            let report = heisenberg_check(&model, maxdeg)?;
            let failed_check = !report.passed;
            let text = render(&Document::Report(report), format)?;
            Ok(Output { text, failed_check })
        }
    }
}

fn render(doc: &Document, format: Format) -> Result<String, CliError> {
    Ok(io::to_text(doc, format)?)
}

fn read_input(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut buffer = String::new();
        std::io::stdin()
            .read_to_string(&mut buffer)
            .map_err(|e| CliError::Domain(format!("cannot read standard input: {e}")))?;
        Ok(buffer)
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| CliError::Domain(format!("cannot read `{path}`: {e}")))
    }
}

fn parse_basis_arg(target: &str, param: Option<&str>) -> Result<Basis, CliError> {
    match target {
        "m" => Ok(Basis::Monomial),
        "p" => Ok(Basis::Power),
        "pnorm" => Ok(Basis::PowerNormalized),
        "jack" => {
            let param =
                param.ok_or_else(|| CliError::Usage("--target jack requires --param".into()))?;
            Ok(Basis::jack(parse_rat(param)?)?)
        }
        other => Err(CliError::Usage(format!(
            "unknown target basis `{other}` (expected m, p, pnorm, or jack)"
        ))),
    }
}

fn build_model(
    model: ModelArg,
    alpha: Option<i64>,
    beta: Option<i64>,
    gamma: Option<i64>,
) -> Result<SurfaceModel, CliError> {
    match model {
        ModelArg::Plane => {
            let alpha =
                alpha.ok_or_else(|| CliError::Usage("--model plane requires --alpha".into()))?;
            let beta =
                beta.ok_or_else(|| CliError::Usage("--model plane requires --beta".into()))?;
            Ok(SurfaceModel::plane(alpha, beta)?)
        }
        ModelArg::Linebundle => {
            let gamma = gamma
                .ok_or_else(|| CliError::Usage("--model linebundle requires --gamma".into()))?;
            Ok(SurfaceModel::line_bundle(gamma)?)
        }
    }
}

/// The graded multiplication table, with independent cells computed in
/// parallel when more than one worker is requested. Row order is identical
/// to the single-threaded path.
fn graded_table(n: usize, model: &SurfaceModel, jobs: usize) -> Result<StructureTable, CliError> {
    if jobs <= 1 {
        return Ok(structure_constants(n, model, TableBasis::Graded)?);
    }
    if !matches!(model, SurfaceModel::LineBundle { .. }) {
        return Err(CliError::Domain(
            "the graded table needs the line-bundle model".into(),
        ));
    }
    let labels = bipartitions_of(n);
    let mut pairs = Vec::new();
    for left in &labels {
        for right in &labels {
            pairs.push((left.clone(), right.clone()));
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Domain(format!("cannot build thread pool: {e}")))?;
    let cells: Result<Vec<Vec<TableRow>>, hilbjack::Error> = pool.install(|| {
        pairs
            .par_iter()
            .map(|(left, right)| {
                let cup = ordinary_cup(
                    &HeisMonomial::new(left.clone(), HeisBasis::ZeroSection),
                    &HeisMonomial::new(right.clone(), HeisBasis::ZeroSection),
                    model,
                )?;
                Ok(collect_rows(left, right, &cup))
            })
            .collect()
    });
    let rows = cells?.into_iter().flatten().collect();
    Ok(StructureTable {
        model: model.clone(),
        n,
        basis: TableBasis::Graded,
        rows,
    })
}

fn collect_rows(
    left: &hilbjack::partition::Bipartition,
    right: &hilbjack::partition::Bipartition,
    cup: &HeisCombo,
) -> Vec<TableRow> {
    cup.iter()
        .map(|(term, coeff)| TableRow {
            left: ClassKey::Pair(left.clone()),
            right: ClassKey::Pair(right.clone()),
            term: ClassKey::Pair(term.clone()),
            coeff: coeff.clone(),
        })
        .collect()
}
