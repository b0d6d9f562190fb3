use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use fockalg::check::{run_suite, CheckConfig, Mutation};
use fockalg::fock::{coherent, norm_squared, pairing, wick_product, FockVector, TestVector, TruncationCaps};
use fockalg::hochschild::{coboundary, cohomology_dims_via, required_max_degree, Cochain, Route};
use fockalg::json::{expansion_to_value, from_str, to_string};
use fockalg::operators::{apply_kernel, apply_table, table_from_kernel, BasisActionTable, KernelFamily};
use fockalg::scalar::{format_rational, parse_rational};
use fockalg::symbol::{reduced_symbol, symbol_numeric, symbol_poly};
use fockalg::{expand, Error};

/// Exact computer algebra on truncated Hida Fock spaces.
///
/// Inputs are JSON files; results are written to standard output as JSON.
/// Exit status: 0 success, 1 check failure, 2 input or usage error.
#[derive(Parser)]
#[command(name = "fockalg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Wick product of two Fock vectors.
    Wick { a: PathBuf, b: PathBuf },
    /// Coherent vector of a test vector, truncated at a degree.
    Coherent {
        xi: PathBuf,
        #[arg(long)]
        max_degree: u32,
    },
    /// Bilinear pairing of two Fock vectors.
    Pair { x: PathBuf, y: PathBuf },
    /// Squared weighted norm ‖x‖²_{k,C}.
    Norm {
        x: PathBuf,
        #[arg(long)]
        k: u32,
        /// Positive rational, e.g. 1/2.
        #[arg(long = "c")]
        c: String,
    },
    /// Apply an operator (kernel family or basis-action table) to Fock vectors.
    Apply {
        op: PathBuf,
        args: Vec<PathBuf>,
    },
    /// Symbol of an operator: the reduced symbol polynomial, or its value at
    /// coherent arguments.
    Symbol {
        op: PathBuf,
        /// Emit the reduced symbol polynomial.
        #[arg(long, conflicts_with = "at")]
        poly: bool,
        /// Test vectors ξ¹ … ξ^r followed by η.
        #[arg(long, num_args = 1..)]
        at: Vec<PathBuf>,
        #[command(flatten)]
        caps: CapsArgs,
    },
    /// Fock expansion of a table, with a reliability flag per block.
    Expand { table: PathBuf },
    /// Hochschild coboundary of a cochain (kernel family or table).
    Delta { cochain: PathBuf },
    /// Truncated Hochschild cohomology of one (l, m) stratum.
    Cohomology {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        l: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        modes: u32,
        #[arg(long, value_enum, default_value_t = RouteArg::Table)]
        route: RouteArg,
    },
    /// Seeded property checks.
    Check {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        cases: usize,
        #[arg(long, hide = true)]
        inject_mutation: Option<String>,
    },
}

/// Window used when a kernel family has to be tabulated.
#[derive(clap::Args)]
struct CapsArgs {
    /// Modes `< K`; defaults to one past the largest mode in the inputs.
    #[arg(long)]
    max_mode: Option<u32>,
    /// Degree cap `N`.
    #[arg(long, default_value_t = 4)]
    max_degree: u32,
}

#[derive(Clone, Copy, ValueEnum)]
enum RouteArg {
    Table,
    Kernel,
}

enum Operator {
    Kernel(KernelFamily),
    Table(BasisActionTable),
}

impl Operator {
    fn arity(&self) -> usize {
        match self {
            Operator::Kernel(k) => k.arity(),
            Operator::Table(t) => t.arity(),
        }
    }
}

enum Failure {
    Input(String),
    Check,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load<T: for<'de> serde::Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    from_str(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_operator(path: &Path) -> Result<Operator, Failure> {
    let text = read(path)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let parsed = if value.get("rows").is_some() {
        from_str(&text).map(Operator::Table)
    } else {
        from_str(&text).map(Operator::Kernel)
    };
    parsed.map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit<T: serde::Serialize + ?Sized>(value: &T) {
    println!("{}", to_string(value));
}

fn max_mode_of_kernel(k: &KernelFamily) -> u32 {
    k.entries()
        .flat_map(|(key, _)| std::iter::once(&key.create).chain(key.annihilate.iter()))
        .filter_map(|a| a.max_mode())
        .map(|m| m + 1)
        .max()
        .unwrap_or(0)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Wick { a, b } => {
            let (a, b): (FockVector, FockVector) = (load(&a)?, load(&b)?);
            emit(&wick_product(&a, &b));
        }
        Command::Coherent { xi, max_degree } => {
            let xi: TestVector = load(&xi)?;
            emit(&coherent(&xi, max_degree));
        }
        Command::Pair { x, y } => {
            let (x, y): (FockVector, FockVector) = (load(&x)?, load(&y)?);
            emit(&pairing(&x, &y));
        }
        Command::Norm { x, k, c } => {
            let x: FockVector = load(&x)?;
            let c = parse_rational(&c)?;
            if c <= num_rational::BigRational::from_integer(0.into()) {
                return Err(Failure::Input(format!("--c must be positive, got {c}")));
            }
            let n = norm_squared(&x, k, &c);
            emit(&json!({ "norm_squared": format_rational(&n) }));
        }
        Command::Apply { op, args } => {
            let op = load_operator(&op)?;
            let args = args.iter().map(|p| load::<FockVector>(p)).collect::<Result<Vec<_>, _>>()?;
            let out = match &op {
                Operator::Kernel(k) => apply_kernel(k, &args)?,
                Operator::Table(t) => apply_table(t, &args)?,
            };
            emit(&out);
        }
        Command::Symbol { op, poly, at, caps } => {
            let op = load_operator(&op)?;
            if poly || at.is_empty() {
                let p = match &op {
                    Operator::Table(t) => reduced_symbol(&symbol_poly(t)),
                    Operator::Kernel(k) => {
                        let caps = TruncationCaps::new(caps.max_mode.unwrap_or(max_mode_of_kernel(k)), caps.max_degree);
                        fockalg::SymbolPolynomial::from_kernel(k, caps)
                    }
                };
                emit(&p);
            } else {
                let r = op.arity();
                if at.len() != r + 1 {
                    return Err(Failure::Input(format!(
                        "operator has arity {r}: --at needs {} test vectors (ξ¹…ξ^{r}, η), got {}",
                        r + 1,
                        at.len()
                    )));
                }
                let vectors = at.iter().map(|p| load::<TestVector>(p)).collect::<Result<Vec<_>, _>>()?;
                let (xis, eta) = vectors.split_at(r);
                let table = match op {
                    Operator::Table(t) => t,
                    Operator::Kernel(k) => {
                        let arg_modes = vectors.iter().filter_map(TestVector::max_mode).map(|m| m + 1).max().unwrap_or(0);
                        let max_mode = caps.max_mode.unwrap_or(max_mode_of_kernel(&k).max(arg_modes));
                        table_from_kernel(&k, TruncationCaps::new(max_mode, caps.max_degree))
                    }
                };
                emit(&symbol_numeric(&table, xis, &eta[0])?);
            }
        }
        Command::Expand { table } => {
            let t: BasisActionTable = load(&table)?;
            emit(&expansion_to_value(&expand(&t)));
        }
        Command::Delta { cochain } => match load_operator(&cochain)? {
            Operator::Kernel(k) => match coboundary(&Cochain::Kernel(k))? {
                Cochain::Kernel(d) => emit(&d),
                Cochain::Table(d) => emit(&d),
            },
            Operator::Table(t) => match coboundary(&Cochain::Table(t))? {
                Cochain::Kernel(d) => emit(&d),
                Cochain::Table(d) => emit(&d),
            },
        },
        Command::Cohomology { r, l, m, modes, route } => {
            let caps = TruncationCaps::new(modes, required_max_degree(r, l, m));
            let route = match route {
                RouteArg::Table => Route::Table,
                RouteArg::Kernel => Route::Kernel,
            };
            let rep = cohomology_dims_via(route, r, l, m, caps)?;
            emit(&json!({
                "dim_ker": rep.dim_ker,
                "dim_im_prev": rep.dim_im_prev,
                "dim_H": rep.dim_h,
                "basis_cocycles": rep.basis_cocycles,
            }));
        }
        Command::Check { suite, seed, cases, inject_mutation } => {
            let mutation = inject_mutation.as_deref().map(Mutation::parse).transpose()?;
            let report = run_suite(&suite, &CheckConfig { seed, cases, mutation })?;
            emit(&report);
            for inv in &report.invariants {
                eprintln!(
                    "{} {}/{}: {}",
                    if inv.passed { "PASS" } else { "FAIL" },
                    inv.suite,
                    inv.name,
                    if inv.passed { format!("{} cases", inv.cases) } else { format!("{} of {} cases failed", inv.failure_count, inv.cases) }
                );
            }
            eprintln!("elapsed {:.3}s", report.elapsed.as_secs_f64());
            if !report.passed {
                return Err(Failure::Check);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
