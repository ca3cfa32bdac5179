//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hooklab::diagrams::{all_diagrams, Ambient, YoungDiagram};
use hooklab::excited::{g_chain, g_excited, g_recurrence, hook_length_limit, GTable};
use hooklab::hooks::{substitution_check, weight_shift_check};
use hooklab::integrals::{ratio_check_k1, QuadratureOptions};
use hooklab::symbolic::{parse, qq, RatFunc};
use hooklab::verma::{psi, Gen, Verma};
use hooklab::weightfn::{collapse_identity_check, partial_fraction_check};
use hooklab::whittaker::{alpha_vector, basis_matrix_generic, change_of_variable_consistency};

const SEED: u64 = 20240611;

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(ok: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        ok,
        detail: detail.into(),
    }
}

fn d(n: usize, r: usize, t: &[usize]) -> YoungDiagram {
    YoungDiagram::new(Ambient::new(n, r).unwrap(), t.to_vec()).unwrap()
}

fn within(limit: Duration, start: Instant) -> (bool, String) {
    let t = start.elapsed();
    (t <= limit, format!("{:.2}s of {}s", t.as_secs_f64(), limit.as_secs()))
}

fn worked_examples() -> Verdict {
    let start = Instant::now();
    let hook21 = d(4, 2, &[1, 2]);
    let square = d(4, 2, &[2, 2]);
    let empty = YoungDiagram::empty(square.ambient());
    let single = d(4, 2, &[0, 1]);
    let want21 = parse("1/((z1+z2+z3+1)*(z1+1)*(z3+1))").unwrap();
    let want_sq = parse("1/((z1+z2+z3+1)*(z1+z2+1)*(z2+z3+1)*(z2+1))").unwrap();
    let want_box = parse("(z1+2*z2+z3+2)/((z1+z2+z3+1)*(z1+z2+1)*(z2+z3+1)*(z2+1))").unwrap();
    let cache = GTable::new();
    let mut ok = true;
    for (l, m, want) in [(&hook21, &empty, &want21), (&square, &empty, &want_sq), (&square, &single, &want_box)] {
        ok &= g_excited(l, m).unwrap() == *want;
        ok &= g_recurrence(l, m, &cache).unwrap() == *want;
    }
    let (fast, t) = within(Duration::from_secs(1), start);
    verdict(ok && fast, format!("three worked examples exact; {t}"))
}

fn three_routes() -> Verdict {
    let start = Instant::now();
    let mut pairs = 0;
    let mut bad = Vec::new();
    for a in Ambient::all_up_to(6) {
        let cache = GTable::new();
        let ds = all_diagrams(a);
        for l in &ds {
            for m in ds.iter().filter(|&m| m.le(l).unwrap()) {
                let rec = g_recurrence(l, m, &cache).unwrap();
                let ch = g_chain(l, m).unwrap();
                let ex = g_excited(l, m).unwrap();
                pairs += 1;
                if !(rec.equal(&ch) && rec.equal(&ex)) {
                    bad.push(format!("{a} {l}/{m}"));
                }
            }
        }
    }
    let (fast, t) = within(Duration::from_secs(300), start);
    verdict(
        bad.is_empty() && fast,
        format!("{pairs} pairs, n <= 6, mismatches {bad:?}; {t}"),
    )
}

fn oracle() -> Verdict {
    let start = Instant::now();
    let mut pairs = 0;
    let mut bad = Vec::new();
    for n in 2..=5 {
        let mut v = Verma::new(n);
        for r in 1..n {
            for l in all_diagrams(Ambient::new(n, r).unwrap()) {
                match v.singular_vector_with_report(&l) {
                    Ok((t, rep)) => {
                        if rep.corank != 1 {
                            bad.push(format!("corank {} at {l}", rep.corank));
                        }
                        for (m, comp) in &t.components {
                            pairs += 1;
                            if !psi(comp).equal(&g_excited(&l, m).unwrap()) {
                                bad.push(format!("{l}/{m}"));
                            }
                        }
                    }
                    Err(e) => bad.push(format!("{l}: {e}")),
                }
            }
        }
    }
    let (fast, t) = within(Duration::from_secs(900), start);
    verdict(
        bad.is_empty() && fast,
        format!("{pairs} psi-values, n <= 5, failures {bad:?}; {t}"),
    )
}

fn lemma_psi() -> Verdict {
    let mut v4 = Verma::new(4);
    let vp = v4.normal_order(&[Gen::f(1), Gen::f(1), Gen::f(2)]).unwrap();
    let mut raised = hooklab::verma::ModuleElement::zero();
    for i in 1..4 {
        raised = raised.add(&v4.apply(Gen::e(i), &vp).unwrap());
    }
    let displayed = psi(&raised) == parse("-(2*z1+z2+3)").unwrap() && psi(&vp) == RatFunc::one();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut failures = 0;
    let mut vermas: Vec<Verma> = (0..=5).map(Verma::new).collect();
    for _ in 0..200 {
        let n = rng.gen_range(2..=5);
        let len = rng.gen_range(1..=5);
        let word: Vec<usize> = (0..len).map(|_| rng.gen_range(1..n)).collect();
        let mut k = vec![0; n - 1];
        for &i in &word {
            k[i - 1] += 1;
        }
        let gens: Vec<Gen> = word.iter().map(|&i| Gen::f(i)).collect();
        let verma = &mut vermas[n];
        let elem = verma.normal_order(&gens).unwrap();
        if !verma.lemma_psi_check(&elem, &k).unwrap() {
            failures += 1;
        }
    }
    verdict(
        displayed && failures == 0,
        format!("displayed case {displayed}; 200 random f-words, {failures} failures"),
    )
}

fn collapse_and_pfrac() -> Verdict {
    let mut cases = 0;
    let mut bad = Vec::new();
    for a in Ambient::all_up_to(6) {
        for l in all_diagrams(a) {
            if l.is_empty() || l.size() > 5 {
                continue;
            }
            cases += 1;
            if !collapse_identity_check(&l).holds {
                bad.push(format!("{a} {l}"));
            }
        }
    }
    let pf: Vec<usize> = (1..=6).filter(|&k| !partial_fraction_check(k)).collect();
    verdict(
        bad.is_empty() && pf.is_empty(),
        format!("collapse on {cases} diagrams, failures {bad:?}; partial fractions k <= 6, failures {pf:?}"),
    )
}

fn change_of_variables() -> Verdict {
    let mut cases = 0;
    let mut bad = Vec::new();
    for a in Ambient::all_up_to(6) {
        for l in all_diagrams(a) {
            cases += 1;
            if !substitution_check(&l).is_empty() {
                bad.push(format!("hook/content {a} {l}"));
            }
            if !change_of_variable_consistency(&l).unwrap() {
                bad.push(format!("g(z(y)) {a} {l}"));
            }
        }
    }
    verdict(
        bad.is_empty(),
        format!("{cases} diagrams, n <= 6, failures {bad:?}"),
    )
}

fn hook_length_limits() -> Verdict {
    let mut cases = 0;
    let mut bad = Vec::new();
    for a in Ambient::all_up_to(8) {
        for l in all_diagrams(a) {
            if l.is_empty() || l.size() > 8 {
                continue;
            }
            cases += 1;
            let h = hook_length_limit(&l).unwrap();
            if !(h.check && h.syt_check) {
                bad.push(format!("{a} {l}"));
            }
        }
    }
    verdict(bad.is_empty(), format!("{cases} diagrams, |λ| <= 8, n <= 8, failures {bad:?}"))
}

fn integral_ratio() -> Verdict {
    let start = Instant::now();
    let zs = [qq(0, 1), qq(1, 1), qq(2, 1), qq(7, 2), qq(7, 1)];
    let kappas = [qq(11, 10), qq(3, 2), qq(2, 1), qq(3, 1), qq(5, 1)];
    let variation_kappas = [qq(3, 2), qq(2, 1), qq(3, 1), qq(5, 1)];
    let opts = QuadratureOptions::default();
    let mut worst: f64 = 0.0;
    let mut worst_variation: f64 = 0.0;
    let mut errors = Vec::new();
    for z in &zs {
        let mut values = Vec::new();
        for k in &kappas {
            match ratio_check_k1(z, k, opts) {
                Ok(rep) => {
                    worst = worst.max(rep.abs_error).max(rep.gamma_abs_error).max(rep.route_difference);
                    if variation_kappas.contains(k) {
                        values.push(rep.lhs);
                    }
                }
                Err(e) => errors.push(format!("z={z} κ={k}: {e}")),
            }
        }
        let hi = values.iter().cloned().fold(f64::MIN, f64::max);
        let lo = values.iter().cloned().fold(f64::MAX, f64::min);
        worst_variation = worst_variation.max(hi - lo);
    }
    let (fast, t) = within(Duration::from_secs(30), start);
    verdict(
        errors.is_empty() && worst < 1e-10 && worst_variation < 1e-10 && fast,
        format!("5x5 grid, max error {worst:.2e}, max κ-variation {worst_variation:.2e}, errors {errors:?}; {t}"),
    )
}

fn whittaker_tables() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut matrices = 0;
    let mut bad = Vec::new();
    for a in Ambient::all_up_to(6) {
        for _ in 0..10 {
            let t: Vec<BigRational> = (0..a.n())
                .map(|_| BigRational::from_integer(rng.gen_range(-1000i64..=1000).into()))
                .collect();
            match basis_matrix_generic(a, &t, rng.gen(), 50) {
                Ok(m) => {
                    matrices += 1;
                    let dim = hooklab::diagrams::all_diagrams(a).len();
                    if !(m.is_unitriangular() && m.determinant == qq(1, 1) && m.size() == dim) {
                        bad.push(format!("{a} at {:?}", m.t));
                    }
                }
                Err(e) => bad.push(format!("{a}: {e}")),
            }
        }
    }
    let mut alpha_pairs = 0;
    for n in 2..=5 {
        let mut v = Verma::new(n);
        for r in 1..n {
            for l in all_diagrams(Ambient::new(n, r).unwrap()) {
                let alpha = alpha_vector(&l).unwrap();
                let t = v.singular_vector(&l).unwrap();
                for (m, c) in &alpha.coefficients {
                    alpha_pairs += 1;
                    if !c.equal(&psi(&t.component(m))) {
                        bad.push(format!("alpha {l}/{m}"));
                    }
                }
            }
        }
    }
    verdict(
        bad.is_empty(),
        format!("{matrices} basis matrices up to n = 6; {alpha_pairs} α-coefficients vs oracle; failures {bad:?}"),
    )
}

fn convention_ledger() -> Verdict {
    let rep = weight_shift_check(&d(4, 2, &[2, 2]));
    let summary = rep.summary();
    let ok = rep.plus_rule_matches
        && !rep.minus_rule_matches
        && summary.contains("ζ(t+w(λ)) matches")
        && summary.contains("ζ(t−w(λ)) does not");
    verdict(ok, summary)
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("worked examples", worked_examples),
        ("three-route agreement", three_routes),
        ("representation oracle", oracle),
        ("psi raising lemma", lemma_psi),
        ("collapse and partial fractions", collapse_and_pfrac),
        ("change of variables", change_of_variables),
        ("hook-length limit", hook_length_limits),
        ("k=1 integral ratio", integral_ratio),
        ("Whittaker tables", whittaker_tables),
        ("weight-shift convention", convention_ledger),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let v = f();
        if !v.ok {
            failed += 1;
        }
        println!(
            "criterion {:>2} {}: {} ({})",
            i + 1,
            if v.ok { "PASS" } else { "FAIL" },
            name,
            v.detail
        );
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
