use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::SymbolicError;

/// A variable of one of the five families used throughout the crate.
///
/// The derived order (`Z < Y < X < S < N`, then by index) is the canonical
/// variable order; it fixes the monomial order and therefore every rendering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    /// Spectral parameter `z_i = t_{i+1} - t_i`.
    Z(u16),
    /// Shifted parameter `y_i`.
    Y(u16),
    /// Integration variable `x_{i,j}` (group `i`, slot `j`).
    X(u16, u16),
    /// Free variable of the partial-fraction identity.
    S(u16),
    /// The single variable of the large-parameter limit.
    N,
}

impl Var {
    pub fn latex(&self) -> String {
        match self {
            Var::Z(i) => format!("z_{{{i}}}"),
            Var::Y(i) => format!("y_{{{i}}}"),
            Var::X(i, j) => format!("x_{{{i},{j}}}"),
            Var::S(i) => format!("s_{{{i}}}"),
            Var::N => "N".to_string(),
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Z(i) => write!(f, "z{i}"),
            Var::Y(i) => write!(f, "y{i}"),
            Var::X(i, j) => write!(f, "x{i}_{j}"),
            Var::S(i) => write!(f, "s{i}"),
            Var::N => write!(f, "N"),
        }
    }
}

/// A power product, stored as `(variable, exponent)` pairs sorted by variable
/// with no zero exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_pairs(mut pairs: Vec<(Var, u32)>) -> Self {
        pairs.retain(|&(_, e)| e > 0);
        pairs.sort_by_key(|&(v, _)| v);
        let mut out: Vec<(Var, u32)> = Vec::with_capacity(pairs.len());
        for (v, e) in pairs {
            match out.last_mut() {
                Some((w, f)) if *w == v => *f += e,
                _ => out.push((v, e)),
            }
        }
        Monomial(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0
            .binary_search_by_key(&v, |&(w, _)| w)
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn pairs(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(v, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < v {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == v {
                let f = other.0[j].1;
                j += 1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((v, e - f)),
                }
            } else {
                out.push((v, e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    fn lex_cmp(&self, other: &Monomial) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        let mut k = 0;
        loop {
            match (a.get(k), b.get(k)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(va, ea)), Some(&(vb, eb))) => {
                    if va != vb {
                        // the monomial carrying the earlier variable is larger
                        return if va < vb { Ordering::Greater } else { Ordering::Less };
                    }
                    if ea != eb {
                        return ea.cmp(&eb);
                    }
                }
            }
            k += 1;
        }
    }

    fn write_ascii(&self, f: &mut impl fmt::Write) -> fmt::Result {
        for (k, &(v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_char('*')?;
            }
            write!(f, "{v}")?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }

    fn latex(&self) -> String {
        self.0
            .iter()
            .map(|&(v, e)| {
                if e > 1 {
                    format!("{}^{{{e}}}", v.latex())
                } else {
                    v.latex()
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Graded lexicographic order.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.lex_cmp(other))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn qq(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Multivariate polynomial with arbitrary-precision rational coefficients.
///
/// Zero coefficients are never stored, so two polynomials are equal exactly
/// when their term maps are identical.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Poly { terms }
    }

    pub fn int(n: i64) -> Self {
        Poly::constant(q(n))
    }

    pub fn var(v: Var) -> Self {
        Poly::monomial(Monomial::var(v), BigRational::one())
    }

    pub fn monomial(m: Monomial, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    /// Builds a polynomial from arbitrary (possibly repeated or zero) terms.
    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, BigRational)>) -> Self {
        let mut terms: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (m, c) in it {
            *terms.entry(m).or_insert_with(BigRational::zero) += c;
        }
        terms.retain(|_, c| !c.is_zero());
        Poly { terms }
    }

    /// `c_0 + Σ c_v v`.
    pub fn linear(constant: i64, coeffs: &[(Var, i64)]) -> Self {
        Poly::from_terms(
            std::iter::once((Monomial::one(), q(constant)))
                .chain(coeffs.iter().map(|&(v, c)| (Monomial::var(v), q(c)))),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The value of a constant polynomial.
    pub fn constant_value(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    /// The constant term (zero if absent).
    pub fn constant_term(&self) -> BigRational {
        self.terms
            .get(&Monomial::one())
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn coeff(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        self.terms
            .keys()
            .flat_map(|m| m.pairs().iter().map(|&(v, _)| v))
            .collect()
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(n, a)| (n.mul(m), a * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Splits off the rational content: returns `(c, p)` with `self = c * p`,
    /// `p` having coprime integer coefficients and a positive leading coefficient.
    pub fn primitive(&self) -> (BigRational, Poly) {
        if self.is_zero() {
            return (BigRational::zero(), Poly::zero());
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut content = BigRational::new(num_gcd, den_lcm);
        if self.leading().map(|(_, c)| c.is_negative()).unwrap_or(false) {
            content = -content;
        }
        let inv = content.recip();
        (content, self.scale(&inv))
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (dm, dc) = d.leading()?;
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let mut rem = self.clone();
        let mut quot = BTreeMap::new();
        while let Some((lm, lc)) = rem.leading() {
            let t = lm.div(dm)?;
            let c = lc / dc;
            rem = &rem - &d.mul_monomial(&t, &c);
            quot.insert(t, c);
        }
        Some(Poly { terms: quot })
    }

    pub fn eval(&self, point: &BTreeMap<Var, BigRational>) -> Result<BigRational, SymbolicError> {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.pairs() {
                let x = point
                    .get(&v)
                    .ok_or_else(|| SymbolicError::MissingVariable(v.to_string()))?;
                t *= num_traits::pow(x.clone(), e as usize);
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Polynomial composition; variables absent from `map` stay in place.
    pub fn substitute(&self, map: &BTreeMap<Var, Poly>) -> Poly {
        let mut powers: HashMap<(Var, u32), Poly> = HashMap::new();
        let mut acc: HashMap<Monomial, BigRational> = HashMap::new();
        for (m, c) in &self.terms {
            let mut kept = Vec::new();
            let mut term = Poly::constant(c.clone());
            for &(v, e) in m.pairs() {
                match map.get(&v) {
                    Some(p) => {
                        let pe = powers.entry((v, e)).or_insert_with(|| p.pow(e));
                        term = &term * pe;
                    }
                    None => kept.push((v, e)),
                }
            }
            let kept = Monomial::from_pairs(kept);
            for (tm, tc) in term.terms {
                *acc.entry(tm.mul(&kept)).or_insert_with(BigRational::zero) += tc;
            }
        }
        Poly::from_terms(acc)
    }

    /// Coefficient of the highest power of `v`, assuming `self` is univariate in `v`.
    pub fn leading_coeff_in(&self, v: Var) -> BigRational {
        let d = self.degree_in(v);
        self.terms
            .iter()
            .filter(|(m, _)| m.exponent(v) == d)
            .map(|(_, c)| c.clone())
            .fold(BigRational::zero(), |a, b| a + b)
    }

    fn ordered_terms(&self) -> Vec<(&Monomial, &BigRational)> {
        // constant first, ascending degree; within a degree, z1 before z2
        let mut ts: Vec<_> = self.terms.iter().collect();
        ts.sort_by(|a, b| {
            a.0.degree()
                .cmp(&b.0.degree())
                .then_with(|| b.0.lex_cmp(a.0))
        });
        ts
    }

    /// Plain ASCII rendering, e.g. `1+z1+2*z2`. Parsed back by [`super::parse`].
    pub fn to_ascii(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.ordered_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if neg {
                out.push('-');
            } else if k > 0 {
                out.push('+');
            }
            if m.is_one() {
                out.push_str(&rat_ascii(&a));
            } else {
                if !a.is_one() {
                    out.push_str(&rat_ascii(&a));
                    out.push('*');
                }
                m.write_ascii(&mut out).expect("write to String");
            }
        }
        out
    }

    pub fn to_latex(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.ordered_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if neg {
                out.push('-');
            } else if k > 0 {
                out.push('+');
            }
            if m.is_one() {
                out.push_str(&rat_latex(&a));
            } else {
                if !a.is_one() {
                    out.push_str(&rat_latex(&a));
                    out.push(' ');
                }
                out.push_str(&m.latex());
            }
        }
        out
    }
}

pub(crate) fn rat_ascii(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub(crate) fn rat_latex(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        let sign = if c.is_negative() { "-" } else { "" };
        format!("{sign}\\frac{{{}}}{{{}}}", c.numer().abs(), c.denom())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_ascii())
    }
}

impl From<Var> for Poly {
    fn from(v: Var) -> Self {
        Poly::var(v)
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (big, small) = if self.terms.len() >= rhs.terms.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut terms = big.terms.clone();
        for (m, c) in &small.terms {
            match terms.get_mut(m) {
                Some(a) => {
                    *a += c;
                    if a.is_zero() {
                        terms.remove(m);
                    }
                }
                None => {
                    terms.insert(m.clone(), c.clone());
                }
            }
        }
        Poly { terms }
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            match terms.get_mut(m) {
                Some(a) => {
                    *a -= c;
                    if a.is_zero() {
                        terms.remove(m);
                    }
                }
                None => {
                    terms.insert(m.clone(), -c.clone());
                }
            }
        }
        Poly { terms }
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = self.constant_value() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.constant_value() {
            return self.scale(&c);
        }
        let mut acc: HashMap<Monomial, BigRational> =
            HashMap::with_capacity(self.terms.len() * rhs.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let p = ca * cb;
                match acc.entry(ma.mul(mb)) {
                    std::collections::hash_map::Entry::Occupied(mut o) => *o.get_mut() += p,
                    std::collections::hash_map::Entry::Vacant(v) => {
                        v.insert(p);
                    }
                }
            }
        }
        Poly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl serde::Serialize for Var {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl serde::Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_ascii())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(i: u16) -> Poly {
        Poly::var(Var::Z(i))
    }

    #[test]
    fn graded_lex_order() {
        let a = Monomial::var(Var::Z(1));
        let b = Monomial::var(Var::Z(2));
        let ab = a.mul(&b);
        assert!(a > b);
        assert!(ab > a);
        assert!(Monomial::one() < b);
        assert!(Monomial::var(Var::Z(9)) > Monomial::var(Var::Y(1)));
    }

    #[test]
    fn exact_division() {
        let f = &(&z(1) + &Poly::one()) * &(&z(2) - &z(3));
        let d = &z(2) - &z(3);
        assert_eq!(f.div_exact(&d), Some(&z(1) + &Poly::one()));
        assert_eq!(f.div_exact(&(&z(2) + &z(3))), None);
        assert_eq!(Poly::zero().div_exact(&d), Some(Poly::zero()));
    }

    #[test]
    fn primitive_part() {
        let p = Poly::linear(-2, &[(Var::Z(1), -4)]).scale(&qq(1, 3));
        let (c, pp) = p.primitive();
        assert_eq!(c, qq(-2, 3));
        assert_eq!(pp, Poly::linear(1, &[(Var::Z(1), 2)]));
    }

    #[test]
    fn ascii_rendering() {
        let p = Poly::linear(1, &[(Var::Z(1), 1), (Var::Z(2), 1)]);
        assert_eq!(p.to_ascii(), "1+z1+z2");
        let p = &z(1) * &z(1) - Poly::var(Var::X(2, 1)).scale(&qq(1, 2));
        assert_eq!(p.to_ascii(), "-1/2*x2_1+z1^2");
    }

    #[test]
    fn substitution_identity_and_shift() {
        let p = Poly::linear(1, &[(Var::Z(2), 1)]);
        let mut map = BTreeMap::new();
        map.insert(Var::Z(2), Poly::linear(-1, &[(Var::Y(2), 1)]));
        assert_eq!(p.substitute(&map), Poly::var(Var::Y(2)));
        assert_eq!(p.substitute(&BTreeMap::new()), p);
    }
}
