use hooklab::diagrams::{all_diagrams, Ambient, YoungDiagram};
use hooklab::excited::{all_pairs, g_chain, g_excited, g_recurrence, hook_length_limit, GTable, Route};
use hooklab::hooks::substitution_check;
use hooklab::symbolic::RatFunc;
use hooklab::verma::{psi, Verma};
use hooklab::weightfn::{collapse_identity_check, partial_fraction_check};
use hooklab::whittaker::change_of_variable_entries;

use crate::report::{Failure, SuiteRun, VerificationReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Gthree,
    Oracle,
    Collapse,
    Pfrac,
    Changevar,
    Limit,
    All,
}

impl Suite {
    pub const EACH: [Suite; 6] = [
        Suite::Gthree,
        Suite::Oracle,
        Suite::Collapse,
        Suite::Pfrac,
        Suite::Changevar,
        Suite::Limit,
    ];

    fn default_max_n(self) -> usize {
        match self {
            Suite::Oracle => 5,
            Suite::Limit => 8,
            _ => 6,
        }
    }
}

/// Bounds as given on the command line; `None` means the suite default.
#[derive(Clone, Copy, Debug, Default)]
pub struct Bounds {
    pub max_n: Option<usize>,
    pub max_boxes: Option<usize>,
    pub max_k: Option<usize>,
}

pub fn run_suite(suite: Suite, bounds: Bounds, seed: u64, cache: &GTable) -> Result<VerificationReport, String> {
    let max_n = bounds.max_n.unwrap_or(suite.default_max_n());
    match suite {
        Suite::Gthree => gthree(max_n, seed, cache),
        Suite::Oracle => oracle(max_n, seed),
        Suite::Collapse => collapse(max_n, bounds.max_boxes.unwrap_or(5), seed),
        Suite::Pfrac => Ok(pfrac(bounds.max_k.unwrap_or(6), seed)),
        Suite::Changevar => changevar(max_n, seed),
        Suite::Limit => limit(max_n, bounds.max_boxes.unwrap_or(8), seed),
        Suite::All => unreachable!("expanded by the caller"),
    }
}

fn diagram_args(l: &YoungDiagram) -> String {
    let a = l.ambient();
    format!("--n {} --r {} --lambda {}", a.n(), a.r(), l.cli_arg())
}

fn diff(a: &RatFunc, b: &RatFunc) -> String {
    (a - b).to_ascii()
}

fn gthree(max_n: usize, seed: u64, cache: &GTable) -> Result<VerificationReport, String> {
    let mut run = SuiteRun::new("gthree", seed);
    for amb in Ambient::all_up_to(max_n) {
        for (l, m) in all_pairs(amb) {
            let rec = g_recurrence(&l, &m, cache).map_err(|e| e.to_string())?;
            let ch = g_chain(&l, &m).map_err(|e| e.to_string())?;
            let ex = g_excited(&l, &m).map_err(|e| e.to_string())?;
            let mut bad = Vec::new();
            if !rec.equal(&ch) {
                bad.push((Route::Chain, diff(&rec, &ch)));
            }
            if !rec.equal(&ex) {
                bad.push((Route::Excited, diff(&rec, &ex)));
            }
            run.record(bad.is_empty(), || Failure {
                case: format!("g {l}/{m}"),
                lambda: Some(l.tuple().to_vec()),
                mu: Some(m.tuple().to_vec()),
                routes: bad.iter().map(|(r, _)| format!("recurrence vs {r}")).collect(),
                difference: bad.iter().map(|(_, d)| d.clone()).collect::<Vec<_>>().join("; "),
                repro: format!("hooklab g {} --mu {} --route all --verify", diagram_args(&l), m.cli_arg()),
            });
        }
    }
    Ok(run.finish())
}

fn oracle(max_n: usize, seed: u64) -> Result<VerificationReport, String> {
    let mut run = SuiteRun::new("oracle", seed);
    for n in 2..=max_n {
        let mut verma = Verma::new(n);
        for r in 1..n {
            let amb = Ambient::new(n, r).map_err(|e| e.to_string())?;
            for l in all_diagrams(amb) {
                let repro = format!("hooklab oracle {}", diagram_args(&l));
                let (t, report) = match verma.singular_vector_with_report(&l) {
                    Ok(x) => x,
                    Err(e) => {
                        run.fail(Failure {
                            case: format!("singular vector {l}"),
                            lambda: Some(l.tuple().to_vec()),
                            mu: None,
                            routes: vec!["oracle".into()],
                            difference: e.to_string(),
                            repro,
                        });
                        continue;
                    }
                };
                run.record(report.corank == 1, || Failure {
                    case: format!("corank {l}"),
                    lambda: Some(l.tuple().to_vec()),
                    mu: None,
                    routes: vec!["oracle".into()],
                    difference: format!("corank {}", report.corank),
                    repro: repro.clone(),
                });
                for m in t.components.keys() {
                    let got = psi(&t.component(m));
                    let want = g_excited(&l, m).map_err(|e| e.to_string())?;
                    run.record(got.equal(&want), || Failure {
                        case: format!("psi {l}/{m}"),
                        lambda: Some(l.tuple().to_vec()),
                        mu: Some(m.tuple().to_vec()),
                        routes: vec!["oracle vs excited".into()],
                        difference: diff(&got, &want),
                        repro: format!("{repro} --mu {}", m.cli_arg()),
                    });
                }
            }
        }
    }
    Ok(run.finish())
}

fn collapse(max_n: usize, max_boxes: usize, seed: u64) -> Result<VerificationReport, String> {
    let mut run = SuiteRun::new("collapse", seed);
    for amb in Ambient::all_up_to(max_n) {
        for l in all_diagrams(amb) {
            if l.is_empty() || l.size() > max_boxes {
                continue;
            }
            let rep = collapse_identity_check(&l);
            run.record(rep.holds, || Failure {
                case: format!("collapse {l}"),
                lambda: Some(l.tuple().to_vec()),
                mu: None,
                routes: vec!["weight function".into()],
                difference: format!("{} sequences, {} terms do not sum to 1/Πx", rep.sequences, rep.terms),
                repro: format!("hooklab weightfn {} --full", diagram_args(&l)),
            });
        }
    }
    Ok(run.finish())
}

fn pfrac(max_k: usize, seed: u64) -> VerificationReport {
    let mut run = SuiteRun::new("pfrac", seed);
    for k in 1..=max_k {
        run.record(partial_fraction_check(k), || Failure {
            case: format!("partial fractions k={k}"),
            lambda: None,
            mu: None,
            routes: vec!["symmetrized sum".into()],
            difference: "sum differs from 1/Πs".into(),
            repro: format!("hooklab verify pfrac --max-k {k}"),
        });
    }
    run.finish()
}

fn changevar(max_n: usize, seed: u64) -> Result<VerificationReport, String> {
    let mut run = SuiteRun::new("changevar", seed);
    for amb in Ambient::all_up_to(max_n) {
        for l in all_diagrams(amb) {
            let f = substitution_check(&l);
            run.record(f.is_empty(), || Failure {
                case: format!("hook weights and contents {l}"),
                lambda: Some(l.tuple().to_vec()),
                mu: None,
                routes: vec!["z(y) vs y".into()],
                difference: format!("hook boxes {:?}, contents {:?}", f.hook_boxes, f.contents),
                repro: format!("hooklab hooks {}", diagram_args(&l)),
            });
            for e in change_of_variable_entries(&l).map_err(|e| e.to_string())? {
                run.record(e.equal, || Failure {
                    case: format!("g(z(y)) {l}/{}", e.mu),
                    lambda: Some(l.tuple().to_vec()),
                    mu: Some(e.mu.tuple().to_vec()),
                    routes: vec!["excited(z(y)) vs tilde g".into()],
                    difference: diff(&e.substituted, &e.g_tilde),
                    repro: format!("hooklab whittaker --n {} --r {}", amb.n(), amb.r()),
                });
            }
        }
    }
    Ok(run.finish())
}

fn limit(max_n: usize, max_boxes: usize, seed: u64) -> Result<VerificationReport, String> {
    let mut run = SuiteRun::new("limit", seed);
    for amb in Ambient::all_up_to(max_n) {
        for l in all_diagrams(amb) {
            if l.is_empty() || l.size() > max_boxes {
                continue;
            }
            let h = hook_length_limit(&l).map_err(|e| e.to_string())?;
            run.record(h.check && h.syt_check, || Failure {
                case: format!("hook-length limit {l}"),
                lambda: Some(l.tuple().to_vec()),
                mu: None,
                routes: vec!["leading term vs hook lengths".into()],
                difference: format!(
                    "degree {}, coefficient {}, |λ|!·coefficient {} vs {} tableaux",
                    h.degree, h.coefficient, h.syt_from_limit, h.syt_count
                ),
                repro: format!("hooklab hooks {}", diagram_args(&l)),
            });
        }
    }
    Ok(run.finish())
}
