use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::poly::{q, Poly, Var};
use super::SymbolicError;

/// Seed of the random evaluation points used to short-circuit [`RatFunc::equal`].
pub const EQUALITY_SEED: u64 = 0x5eed_600d;

const PRECHECK_POINTS: usize = 2;

/// Quotient of two polynomials.
///
/// The denominator is kept as a multiset of factors, each with coprime
/// integer coefficients and a positive leading coefficient; every rational
/// constant lives in the numerator. Factors are only split when one divides
/// another, so the representation is not unique and equality goes through
/// cross-multiplication.
#[derive(Clone, Debug)]
pub struct RatFunc {
    num: Poly,
    den: BTreeMap<Poly, u32>,
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        RatFunc::from_poly(Poly::one())
    }

    pub fn constant(c: BigRational) -> Self {
        RatFunc::from_poly(Poly::constant(c))
    }

    pub fn int(n: i64) -> Self {
        RatFunc::constant(q(n))
    }

    pub fn var(v: Var) -> Self {
        RatFunc::from_poly(Poly::var(v))
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc {
            num: p,
            den: BTreeMap::new(),
        }
    }

    pub fn new(num: Poly, den: &Poly) -> Result<Self, SymbolicError> {
        if den.is_zero() {
            return Err(SymbolicError::DivisionByZero);
        }
        Ok(RatFunc::from_poly(num).divided_by_poly(den, 1))
    }

    /// `1 / Π factors`.
    pub fn reciprocal_product<'a>(factors: impl IntoIterator<Item = &'a Poly>) -> Result<Self, SymbolicError> {
        let mut r = RatFunc::one();
        for f in factors {
            if f.is_zero() {
                return Err(SymbolicError::DivisionByZero);
            }
            r = r.divided_by_poly(f, 1);
        }
        Ok(r)
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den_factors(&self) -> impl Iterator<Item = (&Poly, u32)> {
        self.den.iter().map(|(p, &m)| (p, m))
    }

    /// Expanded denominator.
    pub fn den(&self) -> Poly {
        expand(&self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        if self.den.is_empty() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        let mut vs = self.num.variables();
        for f in self.den.keys() {
            vs.extend(f.variables());
        }
        vs
    }

    /// Total degree of numerator minus total degree of denominator.
    pub fn degree(&self) -> i64 {
        let d: i64 = self
            .den
            .iter()
            .map(|(f, &m)| f.total_degree() as i64 * m as i64)
            .sum();
        self.num.total_degree() as i64 - d
    }

    fn divided_by_poly(mut self, p: &Poly, mult: u32) -> Self {
        debug_assert!(!p.is_zero());
        if mult == 0 {
            return self;
        }
        let (c, mut prim) = p.primitive();
        let cinv = num_traits::pow(c.recip(), mult as usize);
        self.num = self.num.scale(&cinv);
        if self.num.is_zero() {
            self.den.clear();
            return self;
        }
        let known: Vec<Poly> = self.den.keys().cloned().collect();
        for f in &known {
            while !prim.is_constant() {
                match prim.div_exact(f) {
                    Some(qt) => {
                        *self.den.get_mut(f).expect("known factor") += mult;
                        prim = qt;
                    }
                    None => break,
                }
            }
        }
        if let Some(c) = prim.constant_value() {
            self.num = self.num.scale(&num_traits::pow(c.recip(), mult as usize));
            return self;
        }
        let mut m = mult;
        while m > 0 {
            match self.num.div_exact(&prim) {
                Some(qt) => {
                    self.num = qt;
                    m -= 1;
                }
                None => break,
            }
        }
        if m > 0 {
            *self.den.entry(prim).or_insert(0) += m;
        }
        self
    }

    fn cancel(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        cancel_against(&mut self.num, &mut self.den);
    }

    pub fn inv(&self) -> Result<Self, SymbolicError> {
        if self.is_zero() {
            return Err(SymbolicError::DivisionByZero);
        }
        Ok(RatFunc::from_poly(self.den()).divided_by_poly(&self.num, 1))
    }

    pub fn checked_div(&self, other: &RatFunc) -> Result<Self, SymbolicError> {
        if other.is_zero() {
            return Err(SymbolicError::DivisionByZero);
        }
        if other.den.is_empty() {
            return Ok(self.clone().divided_by_poly(&other.num, 1));
        }
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: i32) -> Result<Self, SymbolicError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = RatFunc::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// Sum over a common denominator computed once for all summands.
    pub fn sum<'a>(items: impl IntoIterator<Item = &'a RatFunc>) -> RatFunc {
        let items: Vec<&RatFunc> = items.into_iter().filter(|r| !r.is_zero()).collect();
        match items.len() {
            0 => return RatFunc::zero(),
            1 => return items[0].clone(),
            _ => {}
        }
        let mut lcm: BTreeMap<Poly, u32> = BTreeMap::new();
        for r in &items {
            for (f, &m) in &r.den {
                let e = lcm.entry(f.clone()).or_insert(0);
                *e = (*e).max(m);
            }
        }
        let mut num = Poly::zero();
        for r in &items {
            num = &num + &(&r.num * &cofactor(&r.den, &lcm));
        }
        let mut out = RatFunc { num, den: lcm };
        out.cancel();
        out
    }

    pub fn product<'a>(items: impl IntoIterator<Item = &'a RatFunc>) -> RatFunc {
        items.into_iter().fold(RatFunc::one(), |acc, r| &acc * r)
    }

    /// Exact equality: `a.num * b.den == b.num * a.den` after expansion.
    ///
    /// A couple of evaluations at seeded random points can only prove
    /// inequality; a positive answer is always certified symbolically.
    pub fn equal(&self, other: &RatFunc) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        let vars: BTreeSet<Var> = self.variables().union(&other.variables()).cloned().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(EQUALITY_SEED);
        for _ in 0..PRECHECK_POINTS {
            let point: BTreeMap<Var, BigRational> = vars
                .iter()
                .map(|&v| {
                    let n: i64 = rng.gen_range(-97..=97);
                    let d: i64 = rng.gen_range(1..=13);
                    (v, BigRational::new(n.into(), d.into()))
                })
                .collect();
            if let (Ok(a), Ok(b)) = (self.eval(&point), other.eval(&point)) {
                if a != b {
                    return false;
                }
            }
        }
        let mut lcm = self.den.clone();
        for (f, &m) in &other.den {
            let e = lcm.entry(f.clone()).or_insert(0);
            *e = (*e).max(m);
        }
        &self.num * &cofactor(&self.den, &lcm) == &other.num * &cofactor(&other.den, &lcm)
    }

    pub fn eval(&self, point: &BTreeMap<Var, BigRational>) -> Result<BigRational, SymbolicError> {
        let mut den = BigRational::one();
        for (f, &m) in &self.den {
            let v = f.eval(point)?;
            if v.is_zero() {
                return Err(SymbolicError::Pole {
                    factor: f.to_ascii(),
                });
            }
            den *= num_traits::pow(v, m as usize);
        }
        Ok(self.num.eval(point)? / den)
    }

    /// Composition with `v ↦ map[v]`; unmapped variables are left alone.
    pub fn substitute(&self, map: &BTreeMap<Var, RatFunc>) -> Result<RatFunc, SymbolicError> {
        if map.values().all(RatFunc::is_polynomial) {
            let pmap: BTreeMap<Var, Poly> = map.iter().map(|(&v, r)| (v, r.num.clone())).collect();
            let mut out = RatFunc::from_poly(self.num.substitute(&pmap));
            for (f, &m) in &self.den {
                let g = f.substitute(&pmap);
                if g.is_zero() {
                    return Err(SymbolicError::ZeroDenominator {
                        factor: f.to_ascii(),
                    });
                }
                out = out.divided_by_poly(&g, m);
            }
            return Ok(out);
        }
        let num = substitute_general(&self.num, map);
        let mut den = RatFunc::one();
        for (f, &m) in &self.den {
            let g = substitute_general(f, map);
            if g.is_zero() {
                return Err(SymbolicError::ZeroDenominator {
                    factor: f.to_ascii(),
                });
            }
            den = &den * &g.pow(m as i32)?;
        }
        num.checked_div(&den)
    }

    /// For a function of `N` alone: `(deg num − deg den, ratio of leading coefficients)`.
    pub fn leading_in_n(&self) -> Result<(i64, BigRational), SymbolicError> {
        if self.is_zero() {
            return Err(SymbolicError::Zero);
        }
        if let Some(v) = self.variables().into_iter().find(|&v| v != Var::N) {
            return Err(SymbolicError::NotUnivariateInN(v.to_string()));
        }
        let mut deg = self.num.degree_in(Var::N) as i64;
        let mut coeff = self.num.leading_coeff_in(Var::N);
        for (f, &m) in &self.den {
            deg -= f.degree_in(Var::N) as i64 * m as i64;
            coeff /= num_traits::pow(f.leading_coeff_in(Var::N), m as usize);
        }
        Ok((deg, coeff))
    }

    pub fn to_ascii(&self) -> String {
        if self.den.is_empty() {
            return self.num.to_ascii();
        }
        let num = if self.num.num_terms() == 1 {
            self.num.to_ascii()
        } else {
            format!("({})", self.num.to_ascii())
        };
        let parts: Vec<String> = self
            .den
            .iter()
            .map(|(f, &m)| {
                if m > 1 {
                    format!("({})^{m}", f.to_ascii())
                } else {
                    format!("({})", f.to_ascii())
                }
            })
            .collect();
        if parts.len() == 1 && !parts[0].ends_with(|c: char| c.is_ascii_digit()) {
            format!("{num}/{}", parts[0])
        } else {
            format!("{num}/({})", parts.join("*"))
        }
    }

    pub fn to_latex(&self) -> String {
        if self.den.is_empty() {
            return self.num.to_latex();
        }
        let den: String = self
            .den
            .iter()
            .map(|(f, &m)| {
                if m > 1 {
                    format!("({})^{{{m}}}", f.to_latex())
                } else {
                    format!("({})", f.to_latex())
                }
            })
            .collect();
        format!("\\frac{{{}}}{{{den}}}", self.num.to_latex())
    }
}

fn expand(den: &BTreeMap<Poly, u32>) -> Poly {
    den.iter()
        .fold(Poly::one(), |acc, (f, &m)| &acc * &f.pow(m))
}

fn cofactor(den: &BTreeMap<Poly, u32>, lcm: &BTreeMap<Poly, u32>) -> Poly {
    let mut acc = Poly::one();
    for (f, &m) in lcm {
        let have = den.get(f).copied().unwrap_or(0);
        if m > have {
            acc = &acc * &f.pow(m - have);
        }
    }
    acc
}

fn cancel_against(num: &mut Poly, den: &mut BTreeMap<Poly, u32>) {
    for (f, m) in den.iter_mut() {
        while *m > 0 {
            match num.div_exact(f) {
                Some(qt) => {
                    *num = qt;
                    *m -= 1;
                }
                None => break,
            }
        }
    }
    den.retain(|_, m| *m > 0);
}

fn substitute_general(p: &Poly, map: &BTreeMap<Var, RatFunc>) -> RatFunc {
    let terms: Vec<RatFunc> = p
        .terms()
        .map(|(m, c)| {
            let mut t = RatFunc::constant(c.clone());
            for &(v, e) in m.pairs() {
                let base = map.get(&v).cloned().unwrap_or_else(|| RatFunc::var(v));
                for _ in 0..e {
                    t = &t * &base;
                }
            }
            t
        })
        .collect();
    RatFunc::sum(terms.iter())
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        self.equal(other)
    }
}

impl Eq for RatFunc {}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_ascii())
    }
}

impl From<Poly> for RatFunc {
    fn from(p: Poly) -> Self {
        RatFunc::from_poly(p)
    }
}

impl From<Var> for RatFunc {
    fn from(v: Var) -> Self {
        RatFunc::var(v)
    }
}

impl Serialize for RatFunc {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_ascii())
    }
}

impl<'de> Deserialize<'de> for RatFunc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        super::parse(&s).map_err(serde::de::Error::custom)
    }
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        RatFunc::sum([self, rhs])
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        let (mut an, mut bd) = (self.num.clone(), rhs.den.clone());
        cancel_against(&mut an, &mut bd);
        let (mut bn, mut ad) = (rhs.num.clone(), self.den.clone());
        cancel_against(&mut bn, &mut ad);
        for (f, m) in bd {
            *ad.entry(f).or_insert(0) += m;
        }
        RatFunc {
            num: &an * &bn,
            den: ad,
        }
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -self.num,
            den: self.den,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: RatFunc) -> RatFunc {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: &RatFunc) -> RatFunc {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
