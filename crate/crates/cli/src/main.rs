mod instance;
mod report;

use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use pathspace_core::oracle::verify_counts;
use pathspace_core::series::{connectivity, duality_holds};
use pathspace_core::{Engine, Error, Field, Hypergraph, Limits, OracleLimits, ProblemInstance, ProcessSet};

use instance::{one_based, parse_instance, InstanceFile};
use report::{betti_from_series, coefficients, Caps, Metadata, ResultDocument, VerificationDocument};

/// Homology of path spaces of conflict hypergraphs.
#[derive(Parser)]
#[command(name = "pathspace", version)]
struct Cli {
    #[command(flatten)]
    opts: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalOpts {
    /// Coefficient field: `q` for the rationals or `fp:P` for a prime P.
    #[arg(long, global = true, default_value = "q", value_parser = parse_field)]
    field: Field,
    #[arg(long, global = true)]
    max_members: Option<usize>,
    #[arg(long, global = true)]
    max_terms: Option<usize>,
    /// Cap on nonzero entries of a single boundary matrix.
    #[arg(long, global = true)]
    max_matrix: Option<usize>,
    /// Suppress warnings on stderr.
    #[arg(long, global = true)]
    quiet: bool,
    /// Record wall-clock time in the output metadata.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Args)]
struct Input {
    /// Instance file; standard input when omitted or `-`.
    #[arg(short, long, value_name = "FILE")]
    input: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Poincaré series of the path space.
    Poincare(Input),
    /// Reduced Betti numbers of the path space.
    Betti(Input),
    /// Homological connectivity s(F) - 2.
    Connectivity(Input),
    /// Certificate that the integral homology is free.
    Freeness(Input),
    /// Compare every coefficient b(m) against exhaustive enumeration.
    Verify {
        #[command(flatten)]
        input: Input,
        /// Largest sum of m(F)|F| that is enumerated.
        #[arg(long)]
        max_weight: Option<usize>,
    },
    /// Poincaré series of the complement, checked against the path space.
    Dual(Input),
    /// Print a generated instance file.
    #[command(subcommand)]
    Family(Family),
}

#[derive(Subcommand)]
enum Family {
    /// One generator containing every process.
    Nset {
        #[arg(long)]
        n: usize,
        /// Comma-separated k_i, or one value for every process.
        #[arg(long, value_delimiter = ',')]
        k: Option<Vec<u32>>,
    },
    /// All s-subsets of [n].
    Sequal {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: usize,
        #[arg(long, value_delimiter = ',')]
        k: Option<Vec<u32>>,
    },
    /// All s-subsets of [n] with one access per process.
    Binary {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        s: usize,
    },
}

fn parse_field(s: &str) -> Result<Field, String> {
    match s {
        "q" | "Q" => Ok(Field::Rationals),
        _ => {
            let p = s
                .strip_prefix("fp:")
                .ok_or_else(|| format!("expected `q` or `fp:P`, got `{s}`"))?;
            let p: u64 = p.parse().map_err(|_| format!("`{p}` is not an integer"))?;
            Field::prime(p).map_err(|e| e.to_string())
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidInput(_) => 1,
        Error::ResourceLimit { .. } => 2,
        Error::Invariant(_) => 3,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn read_input(input: &Input) -> Result<String, Error> {
    let mut text = String::new();
    match &input.input {
        Some(path) if path.as_os_str() != "-" => {
            text = std::fs::read_to_string(path)
                .map_err(|e| Error::InvalidInput(format!("cannot read `{}`: {e}", path.display())))?;
        }
        _ => {
            io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| Error::InvalidInput(format!("cannot read standard input: {e}")))?;
        }
    }
    Ok(text)
}

fn load(input: &Input, opts: &GlobalOpts) -> Result<(ProblemInstance, Vec<ProcessSet>), Error> {
    let parsed = parse_instance(&read_input(input)?)?;
    if !opts.quiet {
        for d in &parsed.dropped {
            eprintln!("warning: generator {d} contains another generator and was dropped");
        }
    }
    Ok((parsed.instance, parsed.dropped))
}

fn limits(opts: &GlobalOpts) -> Limits {
    let mut l = Limits::default();
    if let Some(v) = opts.max_members {
        l.max_members = v;
    }
    if let Some(v) = opts.max_terms {
        l.max_terms = v;
    }
    if let Some(v) = opts.max_matrix {
        l.max_matrix_nonzeros = v;
    }
    l
}

fn emit<T: serde::Serialize>(value: &T) -> Result<(), Error> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Invariant(e.to_string()))?;
    let mut out = io::stdout().lock();
    match writeln!(out, "{text}") {
        // a closed downstream pipe (e.g. `| head`) is not our failure
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => {
            Err(Error::Invariant(format!("cannot write output: {e}")))
        }
        _ => Ok(()),
    }
}

fn family_k(n: usize, k: Option<Vec<u32>>) -> Result<Vec<u32>, Error> {
    match k {
        None => Ok(vec![1; n]),
        Some(v) if v.len() == 1 => Ok(vec![v[0]; n]),
        Some(v) if v.len() == n => Ok(v),
        Some(v) => Err(Error::InvalidInput(format!("`--k` has {} entries but n = {n}", v.len()))),
    }
}

fn family(f: Family) -> Result<ProblemInstance, Error> {
    match f {
        Family::Nset { n, k } => {
            let h = Hypergraph::new(n, [ProcessSet::full(n)])?;
            ProblemInstance::new(h, family_k(n, k)?)
        }
        Family::Sequal { n, s, k } => ProblemInstance::new(Hypergraph::uniform(n, s)?, family_k(n, k)?),
        Family::Binary { n, s } => ProblemInstance::new(Hypergraph::uniform(n, s)?, vec![1; n]),
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    let opts = cli.opts;
    let input = match cli.command {
        Command::Family(f) => {
            emit(&InstanceFile::from_instance(&family(f)?))?;
            return Ok(0);
        }
        Command::Poincare(ref i)
        | Command::Betti(ref i)
        | Command::Connectivity(ref i)
        | Command::Freeness(ref i)
        | Command::Dual(ref i) => i,
        Command::Verify { ref input, .. } => input,
    };
    let (p, dropped) = load(input, &opts)?;
    let engine = Engine::new(limits(&opts));
    let field = opts.field;
    let started = Instant::now();

    let mut doc = ResultDocument {
        field: field.to_string(),
        connectivity: connectivity(p.hypergraph()),
        ..ResultDocument::default()
    };
    let mut code = 0;
    let mut oracle = None;
    match cli.command {
        Command::Poincare(_) | Command::Betti(_) => {
            let series = engine.path_space_series(&p, field)?;
            doc.command = if matches!(cli.command, Command::Poincare(_)) { "poincare" } else { "betti" };
            doc.betti = Some(betti_from_series(&series));
            doc.series = Some(coefficients(&series));
        }
        Command::Connectivity(_) => {
            doc.command = "connectivity";
            let c = doc.connectivity;
            doc.remark = Some(format!(
                "reduced homology vanishes below degree {c} and is nonzero in degree {c}; \
                 homotopy groups pi_i vanish for i <= {}",
                c - 1
            ));
        }
        Command::Freeness(_) => {
            doc.command = "freeness";
            doc.free_over_z = Some(engine.freeness_certificate(&p)?);
        }
        Command::Dual(_) => {
            doc.command = "dual";
            let series = engine.path_space_series(&p, field)?;
            let dual = engine.dual_series(&p, field)?;
            let holds = duality_holds(&series, &dual, p.total_levels());
            if !holds {
                code = 3;
            }
            doc.duality_holds = Some(holds);
            doc.dual_series = Some(coefficients(&dual));
            doc.betti = Some(betti_from_series(&series));
            doc.series = Some(coefficients(&series));
        }
        Command::Verify { max_weight, .. } => {
            doc.command = "verify";
            let mut limits = OracleLimits::default();
            if let Some(w) = max_weight {
                limits.max_weight = w;
            }
            let report = verify_counts(&engine, &p, &limits)?;
            if !report.passed() {
                code = 3;
            }
            doc.verification = Some(VerificationDocument::from(&report));
            oracle = Some(limits);
        }
        Command::Family(_) => unreachable!("handled above"),
    }

    doc.metadata = Metadata {
        instance: Some(InstanceFile::from_instance(&p)),
        dropped_generators: dropped.into_iter().map(one_based).collect(),
        caps: Caps::new(engine.limits(), oracle.as_ref()),
        timing_ms: opts.timing.then(|| started.elapsed().as_secs_f64() * 1e3),
    };
    emit(&doc)?;
    if code == 3 {
        eprintln!("error: internal invariant violated; see the output document");
    }
    Ok(code)
}
