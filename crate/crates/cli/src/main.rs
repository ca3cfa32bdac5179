mod commands;
mod output;
mod report;
mod suites;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hooklab::diagrams::{Ambient, YoungDiagram};
use hooklab::excited::{all_pairs, GTable, Route};

use commands::WeightFnMode;
use output::{Format, Output};
use suites::{Bounds, Suite};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Internal(String),
}

#[derive(Parser, Debug)]
#[command(name = "hooklab", version, about = "Hook-weight coefficients and their identities")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Result cache (JSON); defaults to no cache.
    #[arg(long, env = "HOOKLAB_CACHE", global = true)]
    cache: Option<PathBuf>,
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Shape {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    r: usize,
}

#[derive(Args, Debug, Clone)]
struct ShapeLambda {
    #[command(flatten)]
    shape: Shape,
    /// Comma-separated increasing tuple, e.g. 1,2.
    #[arg(long)]
    lambda: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum RouteArg {
    Recurrence,
    Chain,
    Excited,
    All,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the diagrams of the rectangle.
    Diagrams(Shape),
    /// Compute g_{λ/μ}.
    G {
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long)]
        mu: Option<String>,
        #[arg(long, value_enum, default_value_t = RouteArg::Recurrence)]
        route: RouteArg,
        /// Exit 1 if the routes disagree (implies --route all).
        #[arg(long)]
        verify: bool,
    },
    /// Enumerate excited diagrams of λ/μ.
    Excited {
        #[command(flatten)]
        sl: ShapeLambda,
        #[arg(long)]
        mu: String,
    },
    /// Hook table, change of variables and weight-shift verdicts.
    Hooks(ShapeLambda),
    /// ψ-values of the singular vector against the excited route.
    Oracle {
        #[command(flatten)]
        sl: ShapeLambda,
        #[arg(long)]
        mu: Option<String>,
        #[arg(long)]
        dump_singular: bool,
    },
    /// Weight functions of λ.
    Weightfn {
        #[command(flatten)]
        sl: ShapeLambda,
        #[arg(long, group = "mode")]
        circ: bool,
        #[arg(long, group = "mode")]
        star: bool,
        #[arg(long, group = "mode")]
        full: bool,
    },
    /// |V/I| at one integration variable.
    Ratio {
        #[arg(long)]
        z: String,
        #[arg(long)]
        kappa: String,
        /// Evaluation budget of the quadrature.
        #[arg(long)]
        quadrature_points: Option<usize>,
    },
    /// Basis matrix and β-coefficient tables.
    Whittaker {
        #[command(flatten)]
        shape: Shape,
        /// Comma-separated rationals t_1,…,t_n; random when omitted.
        #[arg(long)]
        t: Option<String>,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long)]
        max_n: Option<usize>,
        #[arg(long)]
        max_boxes: Option<usize>,
        #[arg(long)]
        max_k: Option<usize>,
    },
}

fn ambient(s: &Shape) -> Result<Ambient, CliError> {
    Ambient::new(s.n, s.r).map_err(|e| CliError::Usage(e.to_string()))
}

fn parse_tuple(amb: Ambient, s: &str) -> Result<YoungDiagram, CliError> {
    let parts: Vec<usize> = s
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| p.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Usage(format!("bad tuple {s:?}: {e}")))?;
    let d = YoungDiagram::from_parts(amb, &parts).map_err(|e| CliError::Usage(e.to_string()))?;
    if parts.len() == amb.r() && parts != d.tuple() {
        eprintln!("warning: tuple {s} is not increasing; using {}", d.cli_arg());
    }
    Ok(d)
}

fn parse_rational(s: &str) -> Result<BigRational, CliError> {
    BigRational::from_str(s.trim()).map_err(|_| CliError::Usage(format!("not a rational number: {s:?}")))
}

fn load_cache(path: Option<&PathBuf>) -> Result<GTable, CliError> {
    match path {
        Some(p) if p.exists() => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::Internal(e.to_string()))?;
            match GTable::from_json(&text) {
                Ok(t) => Ok(t),
                Err(e) => {
                    eprintln!("warning: ignoring cache {}: {e}", p.display());
                    Ok(GTable::new())
                }
            }
        }
        _ => Ok(GTable::new()),
    }
}

fn save_cache(path: Option<&PathBuf>, table: &GTable) -> Result<(), CliError> {
    if let Some(p) = path {
        std::fs::write(p, table.to_json()).map_err(|e| CliError::Internal(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

/// Output plus the pass/fail verdict (`false` gives exit code 1).
fn run(cli: &Cli) -> Result<(Output, bool), CliError> {
    match &cli.command {
        Command::Diagrams(s) => Ok((commands::diagrams(ambient(s)?), true)),
        Command::G {
            shape,
            lambda,
            mu,
            route,
            verify,
        } => {
            let amb = ambient(shape)?;
            let lambda = lambda.as_deref().map(|s| parse_tuple(amb, s)).transpose()?;
            let mu = mu.as_deref().map(|s| parse_tuple(amb, s)).transpose()?;
            let mut pairs: Vec<(YoungDiagram, YoungDiagram)> = all_pairs(amb)
                .into_iter()
                .filter(|(l, m)| lambda.as_ref().is_none_or(|x| x == l) && mu.as_ref().is_none_or(|x| x == m))
                .collect();
            if let (Some(l), Some(m)) = (&lambda, &mu) {
                if pairs.is_empty() {
                    return Err(CliError::Usage(format!("{m} is not contained in {l}")));
                }
            }
            pairs.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
            let routes: Vec<Route> = match (route, verify) {
                (RouteArg::All, _) | (_, true) => Route::COMPUTED.to_vec(),
                (RouteArg::Recurrence, _) => vec![Route::Recurrence],
                (RouteArg::Chain, _) => vec![Route::Chain],
                (RouteArg::Excited, _) => vec![Route::Excited],
            };
            let cache = load_cache(cli.cache.as_ref())?;
            let entries = commands::g_values(&pairs, &routes, &cache)?;
            save_cache(cli.cache.as_ref(), &cache)?;
            let ok = !verify || entries.iter().all(|e| e.agree());
            for e in entries.iter().filter(|e| !e.agree()) {
                eprintln!(
                    "mismatch at {}/{}; repro: hooklab g --n {} --r {} --lambda {} --mu {} --route all --verify",
                    e.lambda,
                    e.mu,
                    amb.n(),
                    amb.r(),
                    e.lambda.cli_arg(),
                    e.mu.cli_arg()
                );
            }
            Ok((commands::g_output(&entries), ok))
        }
        Command::Excited { sl, mu } => {
            let amb = ambient(&sl.shape)?;
            let l = parse_tuple(amb, &sl.lambda)?;
            let m = parse_tuple(amb, mu)?;
            if !m.le(&l).map_err(|e| CliError::Usage(e.to_string()))? {
                return Err(CliError::Usage(format!("{m} is not contained in {l}")));
            }
            Ok((commands::excited(&l, &m)?, true))
        }
        Command::Hooks(sl) => {
            let amb = ambient(&sl.shape)?;
            Ok((commands::hooks(&parse_tuple(amb, &sl.lambda)?)?, true))
        }
        Command::Oracle { sl, mu, dump_singular } => {
            let amb = ambient(&sl.shape)?;
            let l = parse_tuple(amb, &sl.lambda)?;
            let m = mu.as_deref().map(|s| parse_tuple(amb, s)).transpose()?;
            if let Some(m) = &m {
                if !m.le(&l).map_err(|e| CliError::Usage(e.to_string()))? {
                    return Err(CliError::Usage(format!("{m} is not contained in {l}")));
                }
            }
            let res = commands::oracle(&l, m.as_ref(), *dump_singular)?;
            Ok((res.output, res.agree))
        }
        Command::Weightfn { sl, circ, star, .. } => {
            let amb = ambient(&sl.shape)?;
            let l = parse_tuple(amb, &sl.lambda)?;
            if l.is_empty() {
                return Err(CliError::Usage("λ must be nonempty".into()));
            }
            let mode = if *circ {
                WeightFnMode::Circ
            } else if *star {
                WeightFnMode::Star
            } else {
                WeightFnMode::Full
            };
            commands::weightfn(&l, mode)
        }
        Command::Ratio {
            z,
            kappa,
            quadrature_points,
        } => {
            let out = commands::ratio(&parse_rational(z)?, &parse_rational(kappa)?, *quadrature_points)?;
            let ok = out.json["abs_error"].as_f64().is_some_and(|e| e < 1e-10);
            Ok((out, ok))
        }
        Command::Whittaker { shape, t } => {
            let amb = ambient(shape)?;
            let t: Vec<BigRational> = match t {
                Some(s) => s.split(',').map(parse_rational).collect::<Result<_, _>>()?,
                None => {
                    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
                    (0..amb.n())
                        .map(|_| BigRational::from_integer(rng.gen_range(-100i64..=100).into()))
                        .collect()
                }
            };
            if t.len() != amb.n() {
                return Err(CliError::Usage(format!("--t needs {} entries, got {}", amb.n(), t.len())));
            }
            let out = commands::whittaker(amb, &t, cli.seed)?;
            let ok = out.json["unitriangular"].as_bool().unwrap_or(false);
            Ok((out, ok))
        }
        Command::Verify {
            suite,
            max_n,
            max_boxes,
            max_k,
        } => {
            let bounds = Bounds {
                max_n: *max_n,
                max_boxes: *max_boxes,
                max_k: *max_k,
            };
            let which: Vec<Suite> = if *suite == Suite::All {
                Suite::EACH.to_vec()
            } else {
                vec![*suite]
            };
            let cache = load_cache(cli.cache.as_ref())?;
            let mut reports = Vec::new();
            for s in which {
                let rep = suites::run_suite(s, bounds, cli.seed, &cache).map_err(CliError::Internal)?;
                eprintln!("{}", rep.summary_line());
                reports.push(rep);
            }
            save_cache(cli.cache.as_ref(), &cache)?;
            let ok = reports.iter().all(|r| r.passed());
            let mut ascii = String::new();
            for r in &reports {
                ascii.push_str(&r.summary_line());
                ascii.push('\n');
                for f in &r.failures {
                    ascii.push_str(&format!("  {}: {}\n    repro: {}\n", f.case, f.difference, f.repro));
                }
            }
            let json = if reports.len() == 1 {
                serde_json::to_value(&reports[0])
            } else {
                serde_json::to_value(&reports)
            }
            .expect("serializable");
            Ok((Output::plain(json, ascii), ok))
        }
    }
}

fn repro_line() -> String {
    let args: Vec<String> = std::env::args().skip(1).collect();
    format!("hooklab {}", args.join(" "))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| run(&cli)));
    match result {
        Ok(Ok((out, ok))) => {
            let _ = writeln!(std::io::stdout().lock(), "{}", out.render(cli.format));
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Ok(Err(CliError::Usage(msg))) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Ok(Err(CliError::Internal(msg))) => {
            eprintln!("internal error: {msg}\nrepro: {}", repro_line());
            ExitCode::from(3)
        }
        Err(_) => {
            eprintln!("internal error: panic\nrepro: {}", repro_line());
            ExitCode::from(3)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hooklab::diagrams::all_diagrams;

    #[test]
    fn tuple_parsing() {
        let amb = Ambient::new(4, 2).unwrap();
        assert_eq!(parse_tuple(amb, "1,2").unwrap().tuple(), &[1, 2]);
        assert_eq!(parse_tuple(amb, "2,1").unwrap().tuple(), &[1, 2]);
        assert_eq!(parse_tuple(amb, "2").unwrap().tuple(), &[0, 2]);
        assert!(matches!(parse_tuple(amb, "3,3"), Err(CliError::Usage(_))));
        assert!(matches!(parse_tuple(amb, "a"), Err(CliError::Usage(_))));
        assert_eq!(all_diagrams(amb).len(), 6);
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("3/2").unwrap(), BigRational::new(3.into(), 2.into()));
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
