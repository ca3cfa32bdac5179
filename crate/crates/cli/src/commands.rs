use std::collections::BTreeMap;

use num_rational::BigRational;
use serde_json::{json, Value};

use hooklab::diagrams::{all_diagrams, boundary_type, Ambient, YoungDiagram};
use hooklab::excited::{enumerate_excited, g_chain, g_excited, g_recurrence, hook_length_limit, GTable, Route};
use hooklab::hooks::{change_of_variables, hook_weight, weight_shift_check, y_hook_weight};
use hooklab::integrals::{ratio_check_k1, QuadratureOptions};
use hooklab::symbolic::RatFunc;
use hooklab::verma::{psi, Verma};
use hooklab::weightfn::{
    admissible_sequences, collapse_identity_check, w_circ, w_star, weakly_admissible_sequences, weight_function,
};
use hooklab::whittaker::{basis_matrix_generic, beta_vector, BasisMatrix};

use crate::output::{latex_matrix, text_table, Output};
use crate::CliError;

fn internal(e: impl std::fmt::Display) -> CliError {
    CliError::Internal(e.to_string())
}

pub fn diagrams(amb: Ambient) -> Output {
    let ds = all_diagrams(amb);
    let json = Value::Array(
        ds.iter()
            .map(|d| json!({"n": amb.n(), "r": amb.r(), "tuple": d.tuple(), "size": d.size(), "subset": d.subset()}))
            .collect(),
    );
    let mut rows = vec![vec!["tuple".to_string(), "size".into(), "subset".into(), "weight".into()]];
    for d in &ds {
        rows.push(vec![
            d.label(),
            d.size().to_string(),
            format!("{:?}", d.subset()),
            format!("{:?}", d.weight()),
        ]);
    }
    Output::plain(json, text_table(&rows))
}

pub struct GEntry {
    pub lambda: YoungDiagram,
    pub mu: YoungDiagram,
    pub values: Vec<(Route, RatFunc)>,
}

impl GEntry {
    pub fn agree(&self) -> bool {
        self.values.windows(2).all(|w| w[0].1.equal(&w[1].1))
    }
}

pub fn g_values(pairs: &[(YoungDiagram, YoungDiagram)], routes: &[Route], cache: &GTable) -> Result<Vec<GEntry>, CliError> {
    let mut out = Vec::new();
    for (l, m) in pairs {
        let mut values = Vec::new();
        for &route in routes {
            let g = match route {
                Route::Recurrence => g_recurrence(l, m, cache),
                Route::Chain => g_chain(l, m),
                Route::Excited => g_excited(l, m),
                Route::Oracle => unreachable!("not offered on the command line"),
            }
            .map_err(internal)?;
            values.push((route, g));
        }
        out.push(GEntry {
            lambda: l.clone(),
            mu: m.clone(),
            values,
        });
    }
    Ok(out)
}

pub fn g_output(entries: &[GEntry]) -> Output {
    let mut json = Vec::new();
    let mut ascii = String::new();
    let mut latex = String::new();
    for e in entries {
        for (route, g) in &e.values {
            json.push(json!({"lambda": e.lambda.tuple(), "mu": e.mu.tuple(), "g": g.to_ascii(), "route": route}));
            ascii.push_str(&format!("g[{}/{}] {route}: {}\n", e.lambda.label(), e.mu.label(), g.to_ascii()));
            latex.push_str(&format!(
                "g_{{{}/{}}} = {} \\quad \\text{{({route})}}\n",
                e.lambda.label(),
                e.mu.label(),
                g.to_latex()
            ));
        }
    }
    Output::new(Value::Array(json), ascii, latex)
}

pub fn excited(lambda: &YoungDiagram, mu: &YoungDiagram) -> Result<Output, CliError> {
    let ds = enumerate_excited(lambda, mu).map_err(internal)?;
    let g = g_excited(lambda, mu).map_err(internal)?;
    let mut json = Vec::new();
    let mut ascii = String::new();
    for d in &ds {
        let cells: Vec<[usize; 2]> = d.cells.iter().map(|b| [b.i, b.j]).collect();
        let w = d.hook_weight_product();
        json.push(json!({"cells": cells, "hook_weight_product": w.to_ascii()}));
        let shown: Vec<String> = d.cells.iter().map(|b| b.to_string()).collect();
        ascii.push_str(&format!("{{{}}}  {}\n", shown.join(" "), w.to_ascii()));
    }
    ascii.push_str(&format!("{} excited diagrams; g = {}\n", ds.len(), g.to_ascii()));
    let json = json!({
        "lambda": lambda.tuple(),
        "mu": mu.tuple(),
        "count": ds.len(),
        "diagrams": json,
        "g": g.to_ascii(),
    });
    Ok(Output::plain(json, ascii))
}

pub fn hooks(lambda: &YoungDiagram) -> Result<Output, CliError> {
    let amb = lambda.ambient();
    let mut boxes = Vec::new();
    let mut rows = vec![vec![
        "box".to_string(),
        "label".into(),
        "boundary".into(),
        "hook weight".into(),
        "y-hook weight".into(),
    ]];
    let mut latex_rows = Vec::new();
    for b in lambda.boxes() {
        let h = hook_weight(lambda, b).map_err(internal)?;
        let hy = y_hook_weight(lambda, b).map_err(internal)?;
        let t = boundary_type(b, lambda).map_err(internal)?;
        let label = amb.z_label(b);
        boxes.push(json!({
            "box": [b.i, b.j], "label": label, "boundary": t,
            "hook_weight": h.to_ascii(), "y_hook_weight": hy.to_ascii(),
        }));
        rows.push(vec![b.to_string(), format!("z{label}"), format!("{t:?}"), h.to_ascii(), hy.to_ascii()]);
        latex_rows.push(format!(
            "\\square_{{{},{}}} & z_{{{label}}} & {} & {} \\\\",
            b.i,
            b.j,
            h.to_latex(),
            hy.to_latex()
        ));
    }
    let change = change_of_variables(lambda);
    let shift = weight_shift_check(lambda);
    let mut ascii = text_table(&rows);
    ascii.push_str(&format!("change of variables: {change}\n"));
    ascii.push_str(&format!("weight shift: {}\n", shift.summary()));
    let mut json = json!({
        "lambda": lambda,
        "boxes": boxes,
        "change_of_variables": change.to_string(),
        "weight_shift": shift,
        "weight_shift_summary": shift.summary(),
    });
    if !lambda.is_empty() {
        let lim = hook_length_limit(lambda).map_err(internal)?;
        ascii.push_str(&format!(
            "hook lengths {:?}; leading term N^{} · {}; SYT {}\n",
            lim.hook_lengths, lim.degree, lim.coefficient, lim.syt_count
        ));
        json["hook_length_limit"] = serde_json::to_value(&lim).expect("serializable");
    }
    let latex = format!(
        "\\begin{{array}}{{cccc}}\n\\square & \\text{{label}} & h & \\tilde h \\\\\n{}\n\\end{{array}}\n",
        latex_rows.join("\n")
    );
    Ok(Output::new(json, ascii, latex))
}

pub struct OracleResult {
    pub output: Output,
    pub agree: bool,
}

pub fn oracle(lambda: &YoungDiagram, mu: Option<&YoungDiagram>, dump: bool) -> Result<OracleResult, CliError> {
    let mut verma = Verma::new(lambda.ambient().n());
    let (t, report) = verma.singular_vector_with_report(lambda).map_err(internal)?;
    let mut rows = Vec::new();
    let mut ascii = String::new();
    let mut agree = report.corank == 1;
    for m in t.components.keys() {
        if mu.is_some_and(|x| x != m) {
            continue;
        }
        let p = psi(&t.component(m));
        let g = g_excited(lambda, m).map_err(internal)?;
        let ok = p.equal(&g);
        agree &= ok;
        rows.push(json!({"mu": m.tuple(), "psi": p.to_ascii(), "g_excited": g.to_ascii(), "agree": ok}));
        ascii.push_str(&format!(
            "psi(v{}) = {}  [{}]\n",
            m.label(),
            p.to_ascii(),
            if ok { "agrees" } else { "DIFFERS" }
        ));
    }
    ascii.push_str(&format!("corank {} over {} unknowns\n", report.corank, report.unknowns));
    let mut json = json!({
        "lambda": lambda,
        "values": rows,
        "corank": report.corank,
        "unknowns": report.unknowns,
        "agree": agree,
    });
    if dump {
        json["singular_vector"] = t.to_json();
        json["solves"] = serde_json::to_value(&report.solves).expect("serializable");
    }
    Ok(OracleResult {
        output: Output::plain(json, ascii),
        agree,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightFnMode {
    Circ,
    Star,
    Full,
}

pub fn weightfn(lambda: &YoungDiagram, mode: WeightFnMode) -> Result<(Output, bool), CliError> {
    match mode {
        WeightFnMode::Circ | WeightFnMode::Star => {
            let seqs = if mode == WeightFnMode::Circ {
                admissible_sequences(lambda)
            } else {
                weakly_admissible_sequences(lambda)
            };
            let mut json = Vec::new();
            let mut ascii = String::new();
            let mut latex = String::new();
            for f in &seqs {
                let w = if mode == WeightFnMode::Circ {
                    w_circ(f).map_err(internal)?
                } else {
                    w_star(f)
                };
                json.push(json!({"sequence": f.entries, "w": w.to_ascii()}));
                ascii.push_str(&format!("{f}: {}\n", w.to_ascii()));
                latex.push_str(&format!("W_{{{f}}} = {}\n", w.to_latex()));
            }
            let json = json!({"lambda": lambda, "kind": if mode == WeightFnMode::Circ {"circ"} else {"star"}, "terms": json});
            Ok((Output::new(json, ascii, latex), true))
        }
        WeightFnMode::Full => {
            let w = weight_function(lambda);
            let c = collapse_identity_check(lambda);
            let json = json!({"lambda": lambda, "w": w.to_ascii(), "collapse": c});
            let ascii = format!(
                "W = {}\ncollapse identity over {} sequences: {}\n",
                w.to_ascii(),
                c.sequences,
                if c.holds { "holds" } else { "FAILS" }
            );
            let latex = format!("W_{{{}}} = {}\n", lambda.label(), w.to_latex());
            Ok((Output::new(json, ascii, latex), c.holds))
        }
    }
}

pub fn ratio(z: &BigRational, kappa: &BigRational, points: Option<usize>) -> Result<Output, CliError> {
    let mut opts = QuadratureOptions::default();
    if let Some(p) = points {
        opts.max_evaluations = p;
    }
    let rep = ratio_check_k1(z, kappa, opts).map_err(|e| match e {
        hooklab::integrals::IntegralError::OutOfRange(m) => CliError::Usage(m),
        other => internal(other),
    })?;
    let ascii = format!(
        "|V/I| = {:.15} (quadrature), {:.15} (gamma), 1/(1+z) = {:.15}; error {:.3e}\n",
        rep.lhs, rep.gamma_ratio, rep.rhs, rep.abs_error
    );
    Ok(Output::plain(serde_json::to_value(&rep).expect("serializable"), ascii))
}

pub fn whittaker(amb: Ambient, t: &[BigRational], seed: u64) -> Result<Output, CliError> {
    let m: BasisMatrix = basis_matrix_generic(amb, t, seed, 50).map_err(internal)?;
    let mut tables = Vec::new();
    let mut ascii = String::new();
    let mut latex = String::new();
    ascii.push_str(&format!(
        "t = ({})\n",
        m.t.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
    ));
    let mut rows = vec![std::iter::once(String::new()).chain(m.diagrams.iter().map(|d| d.label())).collect()];
    for (d, row) in m.diagrams.iter().zip(&m.entries) {
        rows.push(std::iter::once(d.label()).chain(row.iter().map(|x| x.to_string())).collect());
    }
    ascii.push_str(&text_table(&rows));
    ascii.push_str(&format!(
        "determinant {}; unitriangular {}\n",
        m.determinant,
        m.is_unitriangular()
    ));
    let cells: Vec<Vec<String>> = m
        .entries
        .iter()
        .map(|row| row.iter().map(latex_rational).collect())
        .collect();
    latex.push_str(&latex_matrix(&cells));
    latex.push('\n');
    for l in &m.diagrams {
        let b = beta_vector(l).map_err(internal)?;
        let coeffs: BTreeMap<String, String> = b
            .coefficients
            .iter()
            .map(|(mu, c)| (mu.cli_arg(), c.to_ascii()))
            .collect();
        for (mu, c) in &b.coefficients {
            ascii.push_str(&format!("beta[{}] u{}: {}\n", l.label(), mu.label(), c.to_ascii()));
            latex.push_str(&format!("\\tilde g_{{{}/{}}} = {}\n", l.label(), mu.label(), c.to_latex()));
        }
        tables.push(json!({"lambda": l.tuple(), "coefficients": coeffs}));
    }
    let json = json!({"matrix": m, "unitriangular": m.is_unitriangular(), "beta": tables});
    Ok(Output::new(json, ascii, latex))
}

fn latex_rational(x: &BigRational) -> String {
    if x.is_integer() {
        x.to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", x.numer(), x.denom())
    }
}
