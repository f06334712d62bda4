use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use comboflats::cohomology::{CoeffMode, CohomologyRing};
use comboflats::io::{
    flats_listing, hasse_dot, multiplication_table, parse_subspace, serialize_polymatroid,
    serialize_subspace, whitney_report, LatticeFile, PolymatroidFile,
};
use comboflats::ops::simplify;
use comboflats::random::{random_instance, RandomParams};
use comboflats::suite::run_suite;
use comboflats::{AbstractGradedLattice, CagedPolymatroid, ComboFlatLattice, Error, Multiset};

#[derive(Parser)]
#[command(
    name = "comboflats",
    version,
    about = "Combinatorial flats of polymatroids"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Polymatroid file
    file: PathBuf,
    /// Cage n_1 ... n_N, overriding the file; defaults to the tight cage
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    cage: Option<Vec<u32>>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Coeffs {
    Binomial,
    Ones,
}

#[derive(Subcommand)]
enum Command {
    /// Check the rank axioms and the cage
    Validate(Input),
    /// List the combinatorial flats with their ranks
    Flats(Input),
    /// Write the Hasse diagram of the lattice of flats as DOT
    Hasse {
        #[command(flatten)]
        input: Input,
        /// Output path, `-` for stdout
        #[arg(long)]
        dot: PathBuf,
    },
    /// Whitney numbers and the top-heavy verdict
    Whitney(Input),
    /// Reduce to a simple polymatroid with a tight cage
    Simplify(Input),
    /// Multiplication table of the graded ring on the flats
    Cohomology {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "binomial")]
        coeffs: Coeffs,
    },
    /// Check a lattice file against the polymatroid lattice axioms
    CheckAxioms { file: PathBuf },
    /// Polymatroid of a subspace file
    Realize {
        file: PathBuf,
        /// Also test polymatroid generality
        #[arg(long)]
        check_pg: bool,
    },
    /// Run the invariant suite on random instances
    Fuzz {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: u64,
        #[arg(long, default_value_t = 4)]
        max_n: usize,
        #[arg(long, default_value_t = 4)]
        max_rank: u32,
        #[arg(long, default_value_t = 4)]
        max_cage: u32,
    },
}

/// Exit 1 for domain failures, 2 for unreadable or malformed input.
enum Failure {
    Domain(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } => Failure::Input(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<String, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load(input: &Input) -> Result<CagedPolymatroid, Failure> {
    let file = PolymatroidFile::parse(&read(&input.file)?)?;
    let poly = file.polymatroid()?;
    let cage = match (&input.cage, file.cage) {
        (Some(c), _) => Multiset::new(c.clone()),
        (None, Some(c)) => c,
        (None, None) => poly.tight_cage(),
    };
    Ok(CagedPolymatroid::new(poly, cage)?)
}

fn lattice(input: &Input) -> Result<ComboFlatLattice, Failure> {
    Ok(ComboFlatLattice::enumerate(&load(input)?)?)
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Validate(input) => {
            load(&input)?;
            Ok("OK\n".into())
        }
        Command::Flats(input) => Ok(flats_listing(&lattice(&input)?)),
        Command::Hasse { input, dot } => {
            let text = hasse_dot(&lattice(&input)?);
            if dot.as_os_str() == "-" {
                return Ok(text);
            }
            fs::write(&dot, text).map_err(|e| Failure::Input(format!("{}: {e}", dot.display())))?;
            Ok(String::new())
        }
        Command::Whitney(input) => Ok(whitney_report(&lattice(&input)?)),
        Command::Simplify(input) => {
            let (end, trace) = simplify(&load(&input)?);
            let mut out = String::new();
            for step in &trace.steps {
                writeln!(out, "# {}", step.kind).unwrap();
            }
            let labels: Vec<String> = trace.labels.iter().map(|i| (i + 1).to_string()).collect();
            writeln!(out, "# surviving elements {}", labels.join(" ")).unwrap();
            out.push_str(&serialize_polymatroid(end.poly(), Some(end.cage())));
            Ok(out)
        }
        Command::Cohomology { input, coeffs } => {
            let mode = match coeffs {
                Coeffs::Binomial => CoeffMode::ConjecturalBinomial,
                Coeffs::Ones => CoeffMode::AllOnes,
            };
            let ring = CohomologyRing::new(&load(&input)?, mode)?;
            Ok(multiplication_table(&ring))
        }
        Command::CheckAxioms { file } => check_axioms(&read(&file)?),
        Command::Realize { file, check_pg } => {
            let v = parse_subspace(&read(&file)?)?;
            let mut out = serialize_polymatroid(&v.polymatroid()?, Some(v.cage()));
            if !check_pg {
                return Ok(out);
            }
            match v.pg_violation()? {
                None => {
                    out.push_str("# polymatroid general: yes\n");
                    Ok(out)
                }
                Some(w) => {
                    print!("{out}");
                    Err(Failure::Domain(format!(
                        "not polymatroid general at {}: multiset rank {}, codimension {}",
                        w.s, w.multiset_rank, w.codim
                    )))
                }
            }
        }
        Command::Fuzz {
            seed,
            count,
            max_n,
            max_rank,
            max_cage,
        } => fuzz(
            seed,
            count,
            &RandomParams {
                max_n,
                max_rank,
                max_cage,
            },
        ),
    }
}

fn check_axioms(text: &str) -> Outcome {
    let file = LatticeFile::parse(text)?;
    let lattice = match AbstractGradedLattice::from_relations(file.labels.clone(), &file.covers) {
        Ok(l) => l,
        Err(e @ Error::NotGraded { .. }) => {
            println!("graded: no");
            return Err(Failure::Domain(e.to_string()));
        }
        Err(e) => return Err(e.into()),
    };
    for (label, rank) in file.labels.iter().zip(&file.ranks) {
        let actual = lattice.rank(lattice.index_of(label).expect("label was parsed"));
        if rank.is_some_and(|r| r != actual) {
            return Err(Failure::Domain(format!(
                "element {label} is listed with rank {} but has rank {actual}",
                rank.unwrap()
            )));
        }
    }
    let report = lattice.check_axioms();
    let yes = |b: bool| if b { "yes" } else { "no" };
    let mut out = String::from("graded: yes\n");
    writeln!(
        out,
        "semimodular lattice: {}",
        yes(report.semimodular_lattice)
    )
    .unwrap();
    writeln!(
        out,
        "join-irreducibles downward closed: {}",
        yes(report.irreducibles_downward_closed)
    )
    .unwrap();
    writeln!(out, "nullity condition: {}", yes(report.nullity_condition)).unwrap();
    match report.violation {
        None => {
            out.push_str("PASS\n");
            Ok(out)
        }
        Some(v) => {
            print!("{out}");
            Err(Failure::Domain(v.to_string()))
        }
    }
}

fn fuzz(seed: u64, count: u64, params: &RandomParams) -> Outcome {
    let mut failed = 0;
    for k in 0..count {
        let s = seed.wrapping_add(k);
        let instance = random_instance(s, params)?;
        let report = run_suite(&instance, s)?;
        if report.passed() {
            continue;
        }
        failed += 1;
        println!("seed {s} ({}) failed:", instance.family);
        for check in report.failures() {
            println!(
                "  {}: {}",
                check.name,
                check.failure.as_deref().unwrap_or("")
            );
        }
        println!("# reproducer");
        print!(
            "{}",
            serialize_polymatroid(instance.caged.poly(), Some(instance.caged.cage()))
        );
        if let Some(v) = &instance.subspace {
            println!("# realization");
            print!("{}", serialize_subspace(v));
        }
    }
    let summary = format!("fuzz: {count} instances from seed {seed}, {failed} failed\n");
    if failed > 0 {
        return Err(Failure::Domain(summary.trim_end().to_string()));
    }
    Ok(summary)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("FAIL {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
