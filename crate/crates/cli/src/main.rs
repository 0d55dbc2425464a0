use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fracop_core::kernels::{make_pair, make_triple};
use fracop_core::solver::{solve_basic, solve_problem, solve_relaxation, ProblemDocument, SolutionDocument};
use fracop_core::special::prabhakar;
use fracop_core::volterra::{sample_solution, solve_volterra_ivp};
use fracop_core::{KernelFamily, MlParams, SolutionExpression, TripleKind, UniformGrid};

/// Operational calculus for general fractional derivatives.
#[derive(Debug, Parser)]
#[command(name = "fracop", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print Sonin and triple residuals for the kernel catalog (and the
    /// triple of --problem, if given).
    KernelVerify(Common),
    /// Evaluate the Mittag-Leffler / Prabhakar function E^gamma_(alpha,beta)(z).
    MlEval {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        #[arg(long, allow_hyphen_values = true)]
        z: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Solve D y = f with (I_k2 y)(0) = c[0].
    SolveBasic(Common),
    /// Solve D y - lambda y = f with (I_k2 y)(0) = c[0].
    SolveRelax(Common),
    /// Solve sum_n b_n D^<n> y = f with initial values c.
    SolveMultiterm(Common),
    /// Compare the closed form with the Volterra grid solution.
    OracleCompare(Common),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct Common {
    /// JSON problem document.
    #[arg(long)]
    problem: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    t_end: f64,
    #[arg(long, default_value_t = 1024)]
    n_steps: usize,
    /// Series order for kernels and resolvents.
    #[arg(long, default_value_t = 64)]
    order: usize,
    /// Output file; standard output if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

impl Common {
    fn grid(&self) -> Result<UniformGrid> {
        Ok(UniformGrid::new(self.t_end, self.n_steps)?)
    }

    fn document(&self) -> Result<Option<ProblemDocument>> {
        let Some(path) = &self.problem else { return Ok(None) };
        let text = fs::read_to_string(path).with_context(|| format!("cannot read problem file {}", path.display()))?;
        Ok(Some(ProblemDocument::from_json(&text)?))
    }

    fn require_document(&self) -> Result<ProblemDocument> {
        match self.document()? {
            Some(doc) => Ok(doc),
            None => bail!("this command needs --problem <file>"),
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn catalog() -> Vec<KernelFamily> {
    let prabhakar = |lambda| KernelFamily::Prabhakar {
        alpha: 0.6,
        beta: 1.0,
        gamma: 0.5,
        lambda,
    };
    vec![
        KernelFamily::PowerLaw { alpha: 0.1 },
        KernelFamily::PowerLaw { alpha: 0.5 },
        KernelFamily::PowerLaw { alpha: 0.9 },
        prabhakar(1.0),
        prabhakar(-1.0),
        KernelFamily::Bessel { alpha: 0.5 },
    ]
}

fn kernel_verify(common: &Common) -> Result<()> {
    const TOL: f64 = 1e-10;
    let order = common.order;
    let mut rows: Vec<(String, String, f64)> = Vec::new();
    for family in catalog() {
        rows.push(("pair".into(), family.label(), make_pair(&family, order)?.residual()));
    }
    let mut kinds = vec![TripleKind::HilferPower {
        alpha: 0.5,
        gamma: 0.25,
    }];
    for pair in catalog() {
        kinds.push(TripleKind::RlType { pair: pair.clone() });
        kinds.push(TripleKind::CaputoType { pair });
    }
    if let Some(doc) = common.document()? {
        kinds.push(doc.triple);
    }
    for kind in &kinds {
        let triple = make_triple(kind, order)?;
        rows.push(("triple".into(), triple.label.clone(), triple.residual()));
    }
    let text = match common.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("kind,entry,residual,status\n");
            for (kind, label, r) in &rows {
                let status = if *r < TOL { "ok" } else { "FAIL" };
                let _ = writeln!(s, "{kind},\"{label}\",{r:.3e},{status}");
            }
            s
        }
        Format::Json => {
            let list: Vec<_> = rows
                .iter()
                .map(
                    |(kind, label, r)| serde_json::json!({"kind": kind, "entry": label, "residual": r, "ok": *r < TOL}),
                )
                .collect();
            serde_json::to_string_pretty(&list)? + "\n"
        }
    };
    emit(common.out.as_deref(), &text)
}

fn ml_eval(alpha: f64, beta: f64, gamma: f64, z: f64, common: &Common) -> Result<()> {
    let value = prabhakar(MlParams::new(alpha, beta, gamma)?, z)?;
    let text = match common.format.unwrap_or(Format::Csv) {
        Format::Csv => format!("{value}\n"),
        Format::Json => {
            serde_json::to_string(
                &serde_json::json!({"alpha": alpha, "beta": beta, "gamma": gamma, "z": z, "value": value}),
            )? + "\n"
        }
    };
    emit(common.out.as_deref(), &text)
}

fn write_solution(solution: &SolutionExpression, common: &Common) -> Result<()> {
    let text = match common.format.unwrap_or(Format::Json) {
        Format::Json => serde_json::to_string(&SolutionDocument::from(solution))? + "\n",
        Format::Csv => sample_solution(solution, common.grid()?)?.to_csv(),
    };
    emit(common.out.as_deref(), &text)
}

fn solve(command: &Command, common: &Common) -> Result<()> {
    let doc = common.require_document()?;
    let triple = doc.build_triple(common.order)?;
    let solution = match command {
        Command::SolveBasic(_) => solve_basic(&triple, doc.y0(), &doc.forcing())?,
        Command::SolveRelax(_) => solve_relaxation(&triple, doc.lambda()?, doc.y0(), &doc.forcing(), common.order)?,
        _ => solve_problem(&doc.to_problem(common.order)?, common.order)?,
    };
    write_solution(&solution, common)
}

fn oracle_compare(common: &Common) -> Result<()> {
    let doc = common.require_document()?;
    let problem = doc.to_problem(common.order)?;
    let grid = common.grid()?;
    let closed = sample_solution(&solve_problem(&problem, common.order)?, grid)?;
    let numeric = solve_volterra_ivp(&problem, grid)?;
    let t_min = 0.1 * grid.t_end;
    let mut csv = String::from("t,y_closed,y_volterra,abs_err,rel_err\n");
    let mut worst: f64 = 0.0;
    for (i, t) in grid.nodes().enumerate() {
        let (a, b) = (closed.values[i], numeric.values[i]);
        let abs = (a - b).abs();
        let rel = abs / a.abs();
        if t >= t_min {
            worst = worst.max(rel);
        }
        let _ = writeln!(csv, "{t:.16e},{a:.16e},{b:.16e},{abs:.16e},{rel:.16e}");
    }
    match &common.out {
        Some(path) => {
            emit(Some(path), &csv)?;
            println!("max relative error for t >= {t_min}: {worst:.6e}");
        }
        None => {
            print!("{csv}");
            eprintln!("max relative error for t >= {t_min}: {worst:.6e}");
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match &cli.command {
        Command::KernelVerify(common) => kernel_verify(common),
        Command::MlEval {
            alpha,
            beta,
            gamma,
            z,
            common,
        } => ml_eval(*alpha, *beta, *gamma, *z, common),
        Command::SolveBasic(common) | Command::SolveRelax(common) | Command::SolveMultiterm(common) => {
            solve(&cli.command, common)
        }
        Command::OracleCompare(common) => oracle_compare(common),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<fracop_core::Error>() {
        Some(e) if e.is_numerical() => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
