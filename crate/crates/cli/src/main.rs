//! `wbc`: compute in and verify the walled Brauer-Clifford superalgebras
//! `BC_{r,t}`, their affine versions and their cyclotomic quotients.
//!
//! Exit codes: 0 success, 1 a verification suite failed (or I/O error),
//! 2 parse or usage error, 3 shape mismatch, 4 rewriting fuel exhausted,
//! 5 non-admissible cyclotomic parameters.

use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use wbc_core::affine::{AffElement, AffineAlgebra, DEFAULT_FUEL};
use wbc_core::bc::{BcAlgebra, BcElement};
use wbc_core::cyclotomic::{delta_to_omega, generating_function_defect, omega_to_delta, CycloSpec, Cyclotomic};
use wbc_core::oracle::{span_rank, TensorSpace};
use wbc_core::relation::RelationReport;
use wbc_core::{verify, Error, Scalar};

#[derive(Parser, Debug)]
#[command(
    name = "wbc",
    version,
    about = "Exact arithmetic in walled Brauer-Clifford superalgebras"
)]
struct Cli {
    /// Which algebra to work in.
    #[arg(long, value_enum, default_value_t = AlgebraKind::Finite, global = true)]
    algebra: AlgebraKind,
    /// Number of unbarred strands.
    #[arg(short, default_value_t = 1, global = true)]
    r: usize,
    /// Number of barred strands.
    #[arg(short, default_value_t = 1, global = true)]
    t: usize,
    /// Cyclotomic parameter file (key=value lines); defaults to `k=0, u2=6, w1=-6`.
    #[arg(long, global = true)]
    spec: Option<PathBuf>,
    /// Tensor space parameter: `V = C^{n|n}`; defaults to `r + t`.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// RNG seed; required by every randomized suite.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Recursion budget of the affine rewriting engine.
    #[arg(long, default_value_t = DEFAULT_FUEL, global = true)]
    fuel: usize,
    /// Sample count for randomized suites.
    #[arg(long, default_value_t = 200, global = true)]
    samples: usize,
    /// The `k` of `Φ_k`.
    #[arg(long, default_value_t = 1, global = true)]
    k: usize,
    /// Output format for elements.
    #[arg(long, value_enum, default_value_t = Format::Canonical, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum AlgebraKind {
    Finite,
    Affine,
    Cyclotomic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Diagram and Clifford data, e.g. `c[1,0] D{1:1'; 1b:1b'} cb[0,0]`.
    Canonical,
    /// Generator words, e.g. `c1 * e1`.
    Word,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Relations,
    Jm,
    Assoc,
    Oracle,
    Phi,
    Cyclo,
    Params,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ParamKind {
    Omega,
    Delta,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Multiply two elements read from files and print the product.
    Mul {
        lhs: String,
        rhs: String,
        /// Treat the operands as element text rather than file paths.
        #[arg(long, short)]
        expr: bool,
    },
    /// List the basis, one monomial per line, followed by the count.
    Basis,
    /// Run a verification suite; exit 0 iff every check passes.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// Check a cyclotomic parameter file against the admissibility recursion.
    Admissible {
        /// Highest `b_l` to evaluate.
        #[arg(long, default_value_t = 16)]
        upto: u32,
    },
    /// Reduce an element of the affine algebra into the cyclotomic quotient.
    Reduce {
        input: String,
        #[arg(long, short)]
        expr: bool,
    },
    /// Translate between the parameters `ω_k` and `δ_k`, `δ̄_k`.
    ConvertParams {
        /// Comma separated values, indexed from 1; symbolic `w_k` if omitted.
        #[arg(allow_hyphen_values = true)]
        values: Option<String>,
        #[arg(long, value_enum, default_value_t = ParamKind::Omega)]
        from: ParamKind,
        #[arg(long, default_value_t = 8)]
        order: usize,
    },
    /// Rank of the image of the basis of `BC_{r,t}` on the mixed tensor space.
    OracleRank,
}

/// Everything that ends the program early.
enum Failure {
    Core(Error),
    Usage(String),
    Io(String),
    /// A suite ran and reported failures; its lines are already printed.
    Checks,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type CliResult<T> = Result<T, Failure>;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } | Error::InvalidSpec(_) => 2,
        Error::Shape { .. } | Error::Index(_) | Error::InvalidDiagram(_) | Error::MissingOmega(_) => 3,
        Error::FuelExhausted(_) => 4,
        Error::NonAdmissible { .. } => 5,
        Error::Inconsistent(_) => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Checks) => ExitCode::from(1),
    }
}

fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Mul { lhs, rhs, expr } => {
            let (a, b) = (read_input(lhs, *expr)?, read_input(rhs, *expr)?);
            cmd_mul(cli, &a, &b)
        }
        Command::Basis => cmd_basis(cli),
        Command::Verify { suite } => cmd_verify(cli, *suite),
        Command::Admissible { upto } => cmd_admissible(cli, *upto),
        Command::Reduce { input, expr } => {
            let text = read_input(input, *expr)?;
            let cyc = cyclotomic(cli)?;
            let x = cyc.affine().parse(&text)?;
            println!("{}", show_aff(cli, &cyc.reduce(&x)?));
            Ok(())
        }
        Command::ConvertParams { values, from, order } => cmd_convert(values.as_deref(), *from, *order),
        Command::OracleRank => {
            let alg = BcAlgebra::new(cli.r, cli.t)?;
            let space = TensorSpace::new(cli.n.unwrap_or(cli.r + cli.t), cli.r, cli.t)?;
            let images = alg
                .basis()
                .iter()
                .map(|m| space.monomial(m))
                .collect::<Result<Vec<_>, _>>()?;
            println!("dim {}", space.dim());
            println!("basis {}", images.len());
            println!("rank {}", span_rank(&images));
            Ok(())
        }
    }
}

fn read_input(arg: &str, literal: bool) -> CliResult<String> {
    if literal {
        return Ok(arg.to_string());
    }
    std::fs::read_to_string(Path::new(arg))
        .map(|s| s.trim().to_string())
        .map_err(|e| Failure::Io(format!("{arg}: {e}")))
}

fn load_spec(cli: &Cli) -> CliResult<CycloSpec> {
    match &cli.spec {
        None => Ok(CycloSpec::level_two_default()),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            Ok(CycloSpec::parse(&text)?)
        }
    }
}

fn cyclotomic(cli: &Cli) -> CliResult<Cyclotomic> {
    Ok(Cyclotomic::with_fuel(cli.r, cli.t, load_spec(cli)?, cli.fuel)?)
}

fn seed(cli: &Cli) -> CliResult<u64> {
    cli.seed
        .ok_or_else(|| Failure::Usage("--seed is required for randomized suites".into()))
}

fn show_bc(cli: &Cli, x: &BcElement) -> String {
    match cli.format {
        Format::Canonical => x.to_string(),
        Format::Word => x.word_display().to_string(),
    }
}

fn show_aff(cli: &Cli, x: &AffElement) -> String {
    match cli.format {
        Format::Canonical => x.to_string(),
        Format::Word => x.word_display().to_string(),
    }
}

fn cmd_mul(cli: &Cli, a: &str, b: &str) -> CliResult<()> {
    let out = match cli.algebra {
        AlgebraKind::Finite => {
            let (x, y) = (BcElement::parse(a, cli.r, cli.t)?, BcElement::parse(b, cli.r, cli.t)?);
            show_bc(cli, &x.try_mul(&y)?)
        }
        AlgebraKind::Affine => {
            let alg = AffineAlgebra::with_fuel(cli.r, cli.t, cli.fuel)?;
            show_aff(cli, &alg.mul(&alg.parse(a)?, &alg.parse(b)?)?)
        }
        AlgebraKind::Cyclotomic => {
            let cyc = cyclotomic(cli)?;
            show_aff(cli, &cyc.mul(&cyc.parse(a)?, &cyc.parse(b)?)?)
        }
    };
    println!("{out}");
    Ok(())
}

fn cmd_basis(cli: &Cli) -> CliResult<()> {
    match cli.algebra {
        AlgebraKind::Finite => {
            let alg = BcAlgebra::new(cli.r, cli.t)?;
            for m in alg.basis() {
                match cli.format {
                    Format::Canonical => println!("{m}"),
                    Format::Word => println!("{}", m.word_display()),
                }
            }
            let (total, even, odd) = alg.super_rank();
            println!("count {total} (even {even}, odd {odd})");
        }
        AlgebraKind::Cyclotomic => {
            let basis = cyclotomic(cli)?.basis();
            for m in &basis {
                match cli.format {
                    Format::Canonical => println!("{m}"),
                    Format::Word => println!("{}", m.word_display()),
                }
            }
            println!("count {}", basis.len());
        }
        AlgebraKind::Affine => return Err(Failure::Usage("the affine algebra has no finite basis".into())),
    }
    Ok(())
}

/// Collects `name<TAB>status<TAB>detail` lines and remembers failures.
#[derive(Default)]
struct Lines {
    failed: bool,
}

impl Lines {
    fn report(&mut self, name: &str, rep: &RelationReport) {
        self.line(name, rep.passed(), format!("{} checks", rep.checks));
        for f in &rep.failures {
            println!("{name}\tWITNESS\t{f}");
        }
    }

    fn line(&mut self, name: &str, passed: bool, detail: impl Display) {
        self.failed |= !passed;
        println!("{name}\t{}\t{detail}", if passed { "PASS" } else { "FAIL" });
    }

    fn finish(self) -> CliResult<()> {
        if self.failed {
            Err(Failure::Checks)
        } else {
            Ok(())
        }
    }
}

fn cmd_verify(cli: &Cli, suite: Suite) -> CliResult<()> {
    let (r, t) = (cli.r, cli.t);
    let mut out = Lines::default();
    let needs = |kinds: &[AlgebraKind]| -> CliResult<()> {
        if kinds.contains(&cli.algebra) {
            Ok(())
        } else {
            Err(Failure::Usage(format!(
                "suite {suite:?} is not available for --algebra {:?}",
                cli.algebra
            )))
        }
    };
    match suite {
        Suite::Relations => match cli.algebra {
            AlgebraKind::Finite => out.report("relations", &verify::relation_closure(&BcAlgebra::new(r, t)?)?),
            AlgebraKind::Affine => {
                let alg = AffineAlgebra::with_fuel(r, t, cli.fuel)?;
                let rep = verify::affine_relation_check(&alg, cli.samples, 3, 2, seed(cli)?)?;
                out.report("affine-relations", &rep);
            }
            AlgebraKind::Cyclotomic => {
                let rep = cyclotomic(cli)?.relation_check(cli.samples, 1, seed(cli)?)?;
                out.report("cyclotomic-relations", &rep);
            }
        },
        Suite::Jm => {
            needs(&[AlgebraKind::Finite])?;
            out.report("jm", &verify::jm_suite(&BcAlgebra::new(r, t)?)?);
        }
        Suite::Assoc => match cli.algebra {
            AlgebraKind::Finite => out.report(
                "assoc",
                &verify::associativity(&BcAlgebra::new(r, t)?, cli.samples, seed(cli)?)?,
            ),
            AlgebraKind::Affine => {
                let alg = AffineAlgebra::with_fuel(r, t, cli.fuel)?;
                out.report(
                    "affine-assoc",
                    &verify::affine_associativity(&alg, cli.samples, 2, seed(cli)?)?,
                );
            }
            AlgebraKind::Cyclotomic => {
                out.report(
                    "cyclotomic-assoc",
                    &cyclotomic(cli)?.associativity(cli.samples, seed(cli)?)?,
                );
            }
        },
        Suite::Oracle => {
            needs(&[AlgebraKind::Finite])?;
            let alg = BcAlgebra::new(r, t)?;
            let rep = verify::oracle_check(&alg, cli.n.unwrap_or(r + t), cli.samples, seed(cli)?)?;
            out.report("oracle-relations", &rep.relations);
            out.report("oracle-products", &rep.products);
            println!(
                "oracle-rank\tINFO\tn {} dim {} rank {} of {}",
                rep.n, rep.dim, rep.rank, rep.basis
            );
        }
        Suite::Phi => {
            needs(&[AlgebraKind::Affine])?;
            let rep = verify::phi_check(r, t, cli.k, 1)?;
            out.report(&format!("phi{}-relations", cli.k), &rep.relations);
            out.report(&format!("phi{}-parameters", cli.k), &rep.parameters);
        }
        Suite::Cyclo => {
            needs(&[AlgebraKind::Cyclotomic])?;
            let cyc = cyclotomic(cli)?;
            let torsion = cyc.spec().torsion_check(cyc.level() + 16);
            out.line(
                "admissible",
                torsion.passed(),
                format!("b_l vanish for l <= {}", cyc.level() + 16),
            );
            let basis = cyc.basis();
            let expected = wbc_core::cyclotomic::rank_formula(cyc.level(), r, t);
            out.line(
                "rank",
                basis.len() as u128 == expected,
                format!("{} monomials, formula {expected}", basis.len()),
            );
            let seed = seed(cli)?;
            let samples = (basis.len() > 64).then_some(cli.samples);
            out.report("closure", &cyc.closure_check(samples, seed)?);
            out.report("confluence", &cyc.confluence_check(cli.samples, 5, seed)?);
        }
        Suite::Params => {
            let w: Vec<Scalar> = match cli.algebra {
                AlgebraKind::Cyclotomic => load_spec(cli)?.omega_values(11)[1..]
                    .iter()
                    .cloned()
                    .map(Scalar::from)
                    .collect(),
                _ => (1..=10).map(Scalar::omega).collect(),
            };
            let (d, db) = omega_to_delta(&w);
            out.line("round-trip", delta_to_omega(&d) == w, "omega -> delta -> omega");
            let defect = generating_function_defect(&d, &db, 10, 1);
            out.line(
                "generating-function",
                defect.iter().all(Scalar::is_zero),
                "through u^-10",
            );
            let signs =
                (1..=8).all(|k| db[k - 1] == w[k - 1].scale(&wbc_core::scalar::rat(if k % 2 == 0 { 1 } else { -1 })));
            out.line("deltabar-sign", signs, "deltabar_k = (-1)^k w_k for k <= 8");
        }
    }
    out.finish()
}

fn cmd_admissible(cli: &Cli, upto: u32) -> CliResult<()> {
    let spec = load_spec(cli)?;
    println!("spec\t{spec}");
    let rep = spec.torsion_check(upto.max(spec.level()));
    for (l, b) in &rep.b {
        println!("b{l}\t{b}");
    }
    for (i, w) in &rep.even {
        println!("w{i}\t{w}\teven parameter must vanish");
    }
    spec.check_admissible()?;
    let g = spec.derive_g()?;
    let coeffs: Vec<String> = g.coeffs.iter().map(ToString::to_string).collect();
    println!("g\t{}", coeffs.join(","));
    println!("admissible");
    Ok(())
}

fn cmd_convert(values: Option<&str>, from: ParamKind, order: usize) -> CliResult<()> {
    let input: Vec<Scalar> = match values {
        Some(text) => text
            .split(',')
            .map(|v| Scalar::parse(v.trim()))
            .collect::<Result<_, _>>()?,
        None if from == ParamKind::Omega => (1..=order as u32).map(Scalar::omega).collect(),
        None => return Err(Failure::Usage("--from delta needs explicit values".into())),
    };
    match from {
        ParamKind::Omega => {
            let (d, db) = omega_to_delta(&input);
            for (k, (x, y)) in d.iter().zip(&db).enumerate() {
                println!("delta{}\t{x}", k + 1);
                println!("deltabar{}\t{y}", k + 1);
            }
        }
        ParamKind::Delta => {
            for (k, w) in delta_to_omega(&input).iter().enumerate() {
                println!("w{}\t{w}", k + 1);
            }
        }
    }
    Ok(())
}
