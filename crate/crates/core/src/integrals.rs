//! The master function `Φ_λ`, numeric integrands, and the one-variable
//! check of `|V/I| = 1/Π h`.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use statrs::function::gamma::gamma;
use thiserror::Error;

use crate::diagrams::{f_multiset, YoungDiagram};
use crate::symbolic::{Poly, RatFunc, SymbolicError, Var};
use crate::weightfn::{weight_function, x};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntegralError {
    #[error("the point lies on the hyperplane {0} = 0")]
    HyperplaneHit(String),
    #[error("missing coordinate {0}")]
    MissingCoordinate(String),
    #[error("parameters out of range: {0}")]
    OutOfRange(String),
    #[error("quadrature did not converge: error estimate {estimate:e} after {evaluations} evaluations")]
    NonConvergence { estimate: f64, evaluations: usize },
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorFamily {
    /// `x_{i,j}^{z_i+1}`
    Coordinate,
    /// `(x_{r,j} - 1)^{-1}`
    Framing,
    /// `(x_{i,j} - x_{i,j'})^2`
    SameGroup,
    /// `(x_{i,j} - x_{i+1,j'})^{-1}`
    NextGroup,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MasterFactor {
    pub family: FactorFamily,
    pub form: Poly,
    pub exponent: Poly,
}

/// `Φ_λ(x, z)` as a list of affine forms with exponents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MasterFunction {
    pub lambda: YoungDiagram,
    pub variables: Vec<Var>,
    pub factors: Vec<MasterFactor>,
}

pub fn master_function(lambda: &YoungDiagram) -> MasterFunction {
    let k = f_multiset(lambda);
    let r = lambda.ambient().r();
    let mut variables = Vec::new();
    let mut factors = Vec::new();
    for (gi, &ki) in k.iter().enumerate() {
        let i = gi + 1;
        for j in 1..=ki {
            variables.push(x(i, j));
            factors.push(MasterFactor {
                family: FactorFamily::Coordinate,
                form: Poly::var(x(i, j)),
                exponent: Poly::linear(1, &[(Var::Z(i as u16), 1)]),
            });
        }
    }
    for j in 1..=k[r - 1] {
        factors.push(MasterFactor {
            family: FactorFamily::Framing,
            form: Poly::linear(-1, &[(x(r, j), 1)]),
            exponent: Poly::int(-1),
        });
    }
    for (gi, &ki) in k.iter().enumerate() {
        let i = gi + 1;
        for j in 1..=ki {
            for j2 in j + 1..=ki {
                factors.push(MasterFactor {
                    family: FactorFamily::SameGroup,
                    form: Poly::linear(0, &[(x(i, j), 1), (x(i, j2), -1)]),
                    exponent: Poly::int(2),
                });
            }
        }
    }
    for gi in 0..k.len().saturating_sub(1) {
        let i = gi + 1;
        for j in 1..=k[gi] {
            for j2 in 1..=k[gi + 1] {
                factors.push(MasterFactor {
                    family: FactorFamily::NextGroup,
                    form: Poly::linear(0, &[(x(i, j), 1), (x(i + 1, j2), -1)]),
                    exponent: Poly::int(-1),
                });
            }
        }
    }
    MasterFunction {
        lambda: lambda.clone(),
        variables,
        factors,
    }
}

impl MasterFunction {
    /// `2 · #(same-group factors) - #(next-group factors)`.
    pub fn difference_degree(&self) -> i64 {
        self.factors
            .iter()
            .map(|f| match f.family {
                FactorFamily::SameGroup => 2,
                FactorFamily::NextGroup => -1,
                _ => 0,
            })
            .sum()
    }

    /// Factors with each form brought to a sign-normalized primitive form
    /// (sign dropped only under even exponents), sorted.
    pub fn normalized_factors(&self) -> Vec<(Poly, Poly)> {
        let mut out: Vec<(Poly, Poly)> = self
            .factors
            .iter()
            .map(|f| {
                let even = f.exponent.constant_value().is_some_and(|c| c.is_integer() && (c.to_integer() % 2u8).is_zero());
                let form = if even { f.form.primitive().1 } else { f.form.clone() };
                (form, f.exponent.clone())
            })
            .collect();
        out.sort();
        out
    }

    /// The factors with `x_{i,a} ↔ x_{i,b}` swapped.
    pub fn swapped(&self, i: usize, a: usize, b: usize) -> MasterFunction {
        let map: BTreeMap<Var, Poly> = [(x(i, a), Poly::var(x(i, b))), (x(i, b), Poly::var(x(i, a)))].into();
        MasterFunction {
            lambda: self.lambda.clone(),
            variables: self.variables.clone(),
            factors: self
                .factors
                .iter()
                .map(|f| MasterFactor {
                    family: f.family,
                    form: f.form.substitute(&map),
                    exponent: f.exponent.clone(),
                })
                .collect(),
        }
    }

    /// `Φ^{1/κ}` with absolute values of the forms.
    pub fn power_eval(&self, point: &BTreeMap<Var, f64>, z: &[f64], kappa: f64) -> Result<f64, IntegralError> {
        let exact = to_exact(point)?;
        let zmap: BTreeMap<Var, BigRational> = z
            .iter()
            .enumerate()
            .map(|(i, &v)| Ok((Var::Z(i as u16 + 1), exact_f64(v)?)))
            .collect::<Result<_, IntegralError>>()?;
        let mut log_sum = 0.0;
        for f in &self.factors {
            let v = f.form.eval(&exact).map_err(|_| IntegralError::MissingCoordinate(f.form.to_ascii()))?;
            let v = v.to_f64().unwrap_or(f64::NAN);
            if v == 0.0 {
                return Err(IntegralError::HyperplaneHit(f.form.to_ascii()));
            }
            let e = f
                .exponent
                .eval(&zmap)
                .map_err(|_| IntegralError::MissingCoordinate(f.exponent.to_ascii()))?
                .to_f64()
                .unwrap_or(f64::NAN);
            log_sum += e / kappa * v.abs().ln();
        }
        Ok(log_sum.exp())
    }
}

fn exact_f64(v: f64) -> Result<BigRational, IntegralError> {
    BigRational::from_float(v).ok_or_else(|| IntegralError::OutOfRange(format!("{v} is not finite")))
}

fn to_exact(point: &BTreeMap<Var, f64>) -> Result<BTreeMap<Var, BigRational>, IntegralError> {
    point.iter().map(|(&k, &v)| Ok((k, exact_f64(v)?))).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightChoice {
    /// `W_λ(x)`
    WeightFunction,
    /// `1/Π x_{i,j}`
    Vertex,
}

/// `Φ^{1/κ}` times the chosen weight at a real point.
pub fn integrand_eval(
    mf: &MasterFunction,
    weight: WeightChoice,
    point: &BTreeMap<Var, f64>,
    z: &[f64],
    kappa: f64,
) -> Result<f64, IntegralError> {
    for v in &mf.variables {
        if !point.contains_key(v) {
            return Err(IntegralError::MissingCoordinate(v.to_string()));
        }
    }
    let phi = mf.power_eval(point, z, kappa)?;
    let w = match weight {
        WeightChoice::Vertex => {
            let prod: f64 = mf.variables.iter().map(|v| point[v]).product();
            1.0 / prod
        }
        WeightChoice::WeightFunction => {
            let wf: RatFunc = weight_function(&mf.lambda);
            match wf.eval(&to_exact(point)?) {
                Ok(v) => v.to_f64().unwrap_or(f64::NAN),
                Err(SymbolicError::Pole { factor }) => return Err(IntegralError::HyperplaneHit(factor)),
                Err(e) => return Err(e.into()),
            }
        }
    };
    Ok(phi * w)
}

/// Outcome of a tanh-sinh integration over `(0, 1)`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Quadrature {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub levels: usize,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct QuadratureOptions {
    pub tolerance: f64,
    pub max_evaluations: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions {
            tolerance: 1e-13,
            max_evaluations: 20_000,
        }
    }
}

/// Tanh-sinh quadrature on `(0, 1)`. The integrand receives `x` and `1 - x`,
/// both computed without cancellation.
pub fn tanh_sinh(f: impl Fn(f64, f64) -> f64, opts: QuadratureOptions) -> Result<Quadrature, IntegralError> {
    const T_MAX: f64 = 7.0;
    let half_pi = std::f64::consts::FRAC_PI_2;
    let node = |t: f64| -> Option<(f64, f64, f64)> {
        let u = half_pi * t.sinh();
        let e = (-2.0 * u.abs()).exp();
        let (x, c) = if u >= 0.0 { (1.0 / (1.0 + e), e / (1.0 + e)) } else { (e / (1.0 + e), 1.0 / (1.0 + e)) };
        if x < f64::MIN_POSITIVE || c < f64::MIN_POSITIVE {
            return None;
        }
        // dx/dt = (π/4) cosh t sech²u
        let w = half_pi / 2.0 * t.cosh() * 4.0 * e / ((1.0 + e) * (1.0 + e));
        Some((x, c, w))
    };
    let evals = std::cell::Cell::new(0usize);
    let eval_at = |t: f64| -> f64 {
        match node(t) {
            Some((x, c, w)) => {
                evals.set(evals.get() + 1);
                w * f(x, c)
            }
            None => 0.0,
        }
    };
    let mut h = 1.0f64;
    let mut sum = eval_at(0.0);
    let mut j = 1;
    while j as f64 * h <= T_MAX {
        sum += eval_at(j as f64 * h) + eval_at(-(j as f64) * h);
        j += 1;
    }
    let mut estimate = sum * h;
    let mut error = f64::INFINITY;
    let mut levels = 1;
    while evals.get() < opts.max_evaluations {
        h /= 2.0;
        let mut j = 1;
        while j as f64 * h <= T_MAX {
            sum += eval_at(j as f64 * h) + eval_at(-(j as f64) * h);
            j += 2;
        }
        let next = sum * h;
        error = (next - estimate).abs();
        estimate = next;
        levels += 1;
        if !estimate.is_finite() {
            break;
        }
        if levels >= 4 && error <= opts.tolerance * estimate.abs().max(1.0) {
            return Ok(Quadrature {
                value: estimate,
                error_estimate: error,
                evaluations: evals.get(),
                levels,
            });
        }
    }
    Err(IntegralError::NonConvergence {
        estimate: error,
        evaluations: evals.get(),
    })
}

/// `|V/I|` for a single box, by the Gamma oracle and by quadrature.
#[derive(Clone, Debug, Serialize)]
pub struct RatioReport {
    pub kappa: f64,
    pub z: Vec<f64>,
    /// `|V/I|` by quadrature.
    pub lhs: f64,
    /// `1/Π h` at `z`.
    pub rhs: f64,
    pub abs_error: f64,
    /// `|V/I|` from `B(a, b+1)/B(a+1, b)`.
    pub gamma_ratio: f64,
    pub gamma_abs_error: f64,
    /// `|lhs - gamma_ratio|`.
    pub route_difference: f64,
    pub v: Quadrature,
    pub i: Quadrature,
}

/// `B(p, q)` through `Γ`, valid for negative non-integer arguments.
pub fn beta_by_gamma(p: f64, q: f64) -> f64 {
    gamma(p) * gamma(q) / gamma(p + q)
}

/// `Φ = x^{z+1} (x - 1)^{-1}` on `0 < x < 1`, with `a = (z+1)/κ`, `b = -1/κ`:
/// `V = ∫ x^{a-1} (1-x)^b = B(a, b+1)`, and `I` continued from
/// `∫ x^a (1-x)^{b-1}` as `∫ (x^a - 1)(1-x)^{b-1} + 1/b = B(a+1, b)`.
pub fn ratio_check_k1(
    z_r: &BigRational,
    kappa: &BigRational,
    opts: QuadratureOptions,
) -> Result<RatioReport, IntegralError> {
    if z_r < &BigRational::zero() {
        return Err(IntegralError::OutOfRange(format!("z_r = {z_r} must be >= 0")));
    }
    if kappa <= &BigRational::one() {
        return Err(IntegralError::OutOfRange(format!("kappa = {kappa} must be > 1")));
    }
    let zf = z_r.to_f64().expect("finite");
    let kf = kappa.to_f64().expect("finite");
    let a = (zf + 1.0) / kf;
    let b = -1.0 / kf;
    let v = tanh_sinh(|x, c| (a - 1.0).mul_add(x.ln(), b * c.ln()).exp(), opts)?;
    let i_reg = tanh_sinh(
        |x, c| {
            let lnx = if c < 0.5 { (-c).ln_1p() } else { x.ln() };
            let m = (a * lnx).exp_m1();
            if m == 0.0 {
                return 0.0;
            }
            m.signum() * (m.abs().ln() + (b - 1.0) * c.ln()).exp()
        },
        opts,
    )?;
    let i_val = i_reg.value + 1.0 / b;
    let lhs = (v.value / i_val).abs();
    let gamma_ratio = (beta_by_gamma(a, b + 1.0) / beta_by_gamma(a + 1.0, b)).abs();
    let rhs = (BigRational::one() / (z_r + BigRational::one())).to_f64().expect("finite");
    Ok(RatioReport {
        kappa: kf,
        z: vec![zf],
        lhs,
        rhs,
        abs_error: (lhs - rhs).abs(),
        gamma_ratio,
        gamma_abs_error: (gamma_ratio - rhs).abs(),
        route_difference: (lhs - gamma_ratio).abs(),
        v,
        i: Quadrature {
            value: i_val,
            ..i_reg
        },
    })
}
