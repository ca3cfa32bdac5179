//! Whittaker-vector coefficient tables in the z- and y-variables and the
//! basis matrix of the `β_{λ,t}`.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::diagrams::{all_diagrams, Ambient, DiagramError, YoungDiagram};
use crate::excited::{enumerate_excited, g_excited, ExcitedError};
use crate::hooks::{change_of_variables, y_hook_weight, y_hook_weights};
use crate::symbolic::{Poly, RatFunc, SymbolicError, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WhittakerError {
    #[error(transparent)]
    Excited(#[from] ExcitedError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("t must have {expected} entries, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("pole at t: {factor} vanishes (entry {lambda} / {mu})")]
    Pole { factor: String, lambda: String, mu: String },
    #[error("no generic point found after {0} attempts")]
    NoGenericPoint(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Z,
    Y,
}

/// `Σ_{μ ≤ λ} c_μ u_μ`, the value of a Whittaker vector on `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WhittakerVector {
    pub lambda: YoungDiagram,
    pub coefficients: BTreeMap<YoungDiagram, RatFunc>,
    pub flavor: Flavor,
}

impl WhittakerVector {
    pub fn coefficient(&self, mu: &YoungDiagram) -> RatFunc {
        self.coefficients.get(mu).cloned().unwrap_or_else(RatFunc::zero)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let coeffs: Vec<serde_json::Value> = self
            .coefficients
            .iter()
            .map(|(mu, c)| serde_json::json!({"mu": mu.tuple(), "coeff": c.to_ascii()}))
            .collect();
        serde_json::json!({
            "lambda": self.lambda.tuple(),
            "flavor": self.flavor,
            "coefficients": coeffs,
        })
    }
}

fn below(lambda: &YoungDiagram) -> Vec<YoungDiagram> {
    all_diagrams(lambda.ambient())
        .into_iter()
        .filter(|m| m.le(lambda).expect("same ambient"))
        .collect()
}

/// `α_{λ,t}(v) = Σ g_{λ/μ}(z) u_μ`.
pub fn alpha_vector(lambda: &YoungDiagram) -> Result<WhittakerVector, WhittakerError> {
    let mut coefficients = BTreeMap::new();
    for mu in below(lambda) {
        let g = g_excited(lambda, &mu)?;
        coefficients.insert(mu, g);
    }
    Ok(WhittakerVector {
        lambda: lambda.clone(),
        coefficients,
        flavor: Flavor::Z,
    })
}

/// `g̃_{λ/μ}(y) = Σ_{ν ∈ E(λ/μ)} Π_{□∈ν} h̃(□) / Π_{□∈λ} h̃(□)`.
pub fn g_tilde(lambda: &YoungDiagram, mu: &YoungDiagram) -> Result<RatFunc, WhittakerError> {
    let mut num = Poly::zero();
    for e in enumerate_excited(lambda, mu)? {
        let term = e.cells.iter().fold(Poly::one(), |acc, &b| {
            &acc * &y_hook_weight(lambda, b).expect("cells lie in λ")
        });
        num = &num + &term;
    }
    let den = RatFunc::reciprocal_product(y_hook_weights(lambda).iter()).expect("y-hook weights are nonzero");
    Ok(&RatFunc::from(num) * &den)
}

/// `β_{λ,t}(v) = Σ g̃_{λ/μ}(y) u_μ`.
pub fn beta_vector(lambda: &YoungDiagram) -> Result<WhittakerVector, WhittakerError> {
    let mut coefficients = BTreeMap::new();
    for mu in below(lambda) {
        let g = g_tilde(lambda, &mu)?;
        coefficients.insert(mu, g);
    }
    Ok(WhittakerVector {
        lambda: lambda.clone(),
        coefficients,
        flavor: Flavor::Y,
    })
}

/// Per-`μ` outcome of substituting the z→y change of variables into `g_{λ/μ}`.
#[derive(Clone, Debug, Serialize)]
pub struct ChangeOfVariableEntry {
    pub mu: YoungDiagram,
    pub substituted: RatFunc,
    pub g_tilde: RatFunc,
    pub equal: bool,
}

pub fn change_of_variable_entries(lambda: &YoungDiagram) -> Result<Vec<ChangeOfVariableEntry>, WhittakerError> {
    let map = change_of_variables(lambda).map();
    let alpha = alpha_vector(lambda)?;
    let beta = beta_vector(lambda)?;
    let mut out = Vec::new();
    for (mu, g) in &alpha.coefficients {
        let substituted = g.substitute(&map).map_err(ExcitedError::from)?;
        let gt = beta.coefficient(mu);
        out.push(ChangeOfVariableEntry {
            mu: mu.clone(),
            equal: substituted.equal(&gt),
            substituted,
            g_tilde: gt,
        });
    }
    Ok(out)
}

/// `g_{λ/μ}(z(y)) = g̃_{λ/μ}(y)` for every `μ ≤ λ`.
pub fn change_of_variable_consistency(lambda: &YoungDiagram) -> Result<bool, WhittakerError> {
    Ok(change_of_variable_entries(lambda)?.iter().all(|e| e.equal))
}

/// `y = (t_2 - t_1, ..., t_n - t_{n-1})` as a substitution point.
pub fn y_point(t: &[BigRational]) -> BTreeMap<Var, BigRational> {
    t.windows(2)
        .enumerate()
        .map(|(i, w)| (Var::Y(i as u16 + 1), &w[1] - &w[0]))
        .collect()
}

/// Rows `λ`, columns `μ` (both in size-then-tuple order), entries `g̃_{λ/μ}(ζ(t))`.
#[derive(Clone, Debug, Serialize)]
pub struct BasisMatrix {
    pub ambient: Ambient,
    #[serde(serialize_with = "ser_rationals")]
    pub t: Vec<BigRational>,
    pub diagrams: Vec<YoungDiagram>,
    #[serde(serialize_with = "ser_matrix")]
    pub entries: Vec<Vec<BigRational>>,
    #[serde(with = "crate::symbolic::rational_str")]
    pub determinant: BigRational,
    pub unit_diagonal: bool,
    /// Zero wherever `μ` is not contained in `λ`.
    pub triangular: bool,
}

fn ser_rationals<S: serde::Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

fn ser_matrix<S: serde::Serializer>(m: &[Vec<BigRational>], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(m.iter().map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>()))
}

impl BasisMatrix {
    pub fn size(&self) -> usize {
        self.diagrams.len()
    }

    pub fn is_unitriangular(&self) -> bool {
        self.unit_diagonal && self.triangular
    }
}

/// Determinant by exact Gaussian elimination.
pub fn determinant(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m.to_vec();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        let pivot = a[col][col].clone();
        det *= &pivot;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &pivot;
            let (upper, lower) = a.split_at_mut(r);
            for (x, p) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *x -= &f * p;
            }
        }
    }
    det
}

pub fn basis_matrix(ambient: Ambient, t: &[BigRational]) -> Result<BasisMatrix, WhittakerError> {
    if t.len() != ambient.n() {
        return Err(WhittakerError::WrongLength {
            expected: ambient.n(),
            got: t.len(),
        });
    }
    let point = y_point(t);
    let diagrams = all_diagrams(ambient);
    let mut entries = vec![vec![BigRational::zero(); diagrams.len()]; diagrams.len()];
    for (ri, lambda) in diagrams.iter().enumerate() {
        for (ci, mu) in diagrams.iter().enumerate() {
            if !mu.le(lambda)? {
                continue;
            }
            let g = g_tilde(lambda, mu)?;
            entries[ri][ci] = match g.eval(&point) {
                Ok(v) => v,
                Err(SymbolicError::Pole { factor }) => {
                    return Err(WhittakerError::Pole {
                        factor,
                        lambda: lambda.label(),
                        mu: mu.label(),
                    })
                }
                Err(e) => return Err(ExcitedError::from(e).into()),
            };
        }
    }
    let unit_diagonal = (0..diagrams.len()).all(|i| entries[i][i].is_one());
    let mut triangular = true;
    for (ri, lambda) in diagrams.iter().enumerate() {
        for (ci, mu) in diagrams.iter().enumerate() {
            if !mu.le(lambda)? && !entries[ri][ci].is_zero() {
                triangular = false;
            }
            if ci > ri && !entries[ri][ci].is_zero() {
                triangular = false;
            }
        }
    }
    let det = determinant(&entries);
    Ok(BasisMatrix {
        ambient,
        t: t.to_vec(),
        diagrams,
        entries,
        determinant: det,
        unit_diagonal,
        triangular,
    })
}

/// [`basis_matrix`] at `t`, retrying at random integer perturbations of `t`
/// while an entry has a pole.
pub fn basis_matrix_generic(
    ambient: Ambient,
    t: &[BigRational],
    seed: u64,
    max_tries: usize,
) -> Result<BasisMatrix, WhittakerError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = t.to_vec();
    for _ in 0..max_tries {
        match basis_matrix(ambient, &cur) {
            Err(WhittakerError::Pole { .. }) => {
                cur = t
                    .iter()
                    .map(|v| v + BigRational::from_integer(rng.gen_range(-50i64..=50).into()))
                    .collect();
            }
            other => return other,
        }
    }
    Err(WhittakerError::NoGenericPoint(max_tries))
}

/// `g_{λ/μ}(ζ(t - w(λ))) = g̃_{λ/μ}(ζ(t))` at a numeric `t`: the shifted
/// α-vector reproduces the β-vector.
pub fn shifted_alpha_matches_beta(lambda: &YoungDiagram, t: &[BigRational]) -> Result<bool, WhittakerError> {
    let n = lambda.ambient().n();
    if t.len() != n {
        return Err(WhittakerError::WrongLength { expected: n, got: t.len() });
    }
    let w = lambda.weight();
    let shifted: Vec<BigRational> = t
        .iter()
        .zip(&w)
        .map(|(ti, &wi)| ti - BigRational::from_integer((wi as i64).into()))
        .collect();
    let zpt: BTreeMap<Var, BigRational> = shifted
        .windows(2)
        .enumerate()
        .map(|(i, p)| (Var::Z(i as u16 + 1), &p[1] - &p[0]))
        .collect();
    let ypt = y_point(t);
    let alpha = alpha_vector(lambda)?;
    let beta = beta_vector(lambda)?;
    for (mu, g) in &alpha.coefficients {
        let a = g.eval(&zpt);
        let b = beta.coefficient(mu).eval(&ypt);
        match (a, b) {
            (Ok(a), Ok(b)) if a == b => {}
            _ => return Ok(false),
        }
    }
    Ok(true)
}
