//! Exact hook-weight coefficients g_{λ/μ}, their three combinatorial routes,
//! a Verma-module oracle, and the weight-function and integral identities around them.

pub mod symbolic;
pub mod diagrams;
pub mod hooks;
pub mod excited;
pub mod verma;
pub mod weightfn;
pub mod integrals;
pub mod whittaker;
