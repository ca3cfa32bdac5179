//! The Verma module `M` of `gl_n` with generic highest weight, the functional
//! `ψ`, and the singular vector `v(λ) ∈ M ⊗ ∧^r C^n`.
//!
//! Highest weight: `e_{ii} v = Λ_i v` with `Λ_i = Σ_{m<i} (z_m + 1)`, so
//! `(e_{ii} - e_{i+1,i+1}) v = -(z_i + 1) v`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::diagrams::{all_diagrams, subset_to_diagram, DiagramError, SkewShape, YoungDiagram};
use crate::hooks::content_from_counts;
use crate::symbolic::{Poly, RatFunc, SymbolicError, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VermaError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
    #[error("singular-vector system at {mu} has rank {rank} < {unknowns} unknowns")]
    NotUnique { mu: String, rank: usize, unknowns: usize },
    #[error("singular-vector system at {mu} is inconsistent")]
    Inconsistent { mu: String },
    #[error("solution at {mu} fails the verification pass")]
    VerificationFailed { mu: String },
    #[error("element is not homogeneous of the given weight")]
    NotHomogeneous,
    #[error("generator index {0} out of range")]
    BadIndex(usize),
}

/// The matrix unit `e_{a,b}`; lowering when `a > b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Gen {
    pub a: u8,
    pub b: u8,
}

impl Gen {
    pub fn new(a: usize, b: usize) -> Self {
        Gen { a: a as u8, b: b as u8 }
    }

    /// `f_i = e_{i+1,i}`.
    pub fn f(i: usize) -> Self {
        Gen::new(i + 1, i)
    }

    /// `e_i = e_{i,i+1}`.
    pub fn e(i: usize) -> Self {
        Gen::new(i, i + 1)
    }

    pub fn is_lowering(self) -> bool {
        self.a > self.b
    }

    fn root(self) -> Root {
        debug_assert!(self.is_lowering());
        Root { a: self.a, b: self.b }
    }

    /// `[e_ab, e_cd] = δ_bc e_ad - δ_da e_cb`.
    fn bracket(self, other: Gen) -> Vec<(Gen, i64)> {
        let mut out = Vec::with_capacity(2);
        if self.b == other.a {
            out.push((Gen { a: self.a, b: other.b }, 1));
        }
        if other.b == self.a {
            out.push((Gen { a: other.a, b: self.b }, -1));
        }
        out
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E({},{})", self.a, self.b)
    }
}

/// Negative root vector `F(a,b) = e_{a,b}`, `a > b`, ordered by `(b, a)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Root {
    pub a: u8,
    pub b: u8,
}

impl Root {
    pub fn new(a: usize, b: usize) -> Self {
        assert!(a > b && b >= 1, "F({a},{b}) is not a negative root");
        Root { a: a as u8, b: b as u8 }
    }

    pub fn is_simple(self) -> bool {
        self.a == self.b + 1
    }

    fn gen(self) -> Gen {
        Gen { a: self.a, b: self.b }
    }
}

impl Ord for Root {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.b, self.a).cmp(&(other.b, other.a))
    }
}

impl PartialOrd for Root {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A sorted product of negative root vectors applied to `v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
pub struct PBWMonomial(Vec<Root>);

impl PBWMonomial {
    pub fn one() -> Self {
        PBWMonomial(Vec::new())
    }

    pub fn new(mut roots: Vec<Root>) -> Self {
        roots.sort();
        PBWMonomial(roots)
    }

    pub fn factors(&self) -> &[Root] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_simple(&self) -> bool {
        self.0.iter().all(|r| r.is_simple())
    }

    /// Counts `k_1..k_{n-1}` with weight `-Σ k_i α_i`.
    pub fn depth(&self, n: usize) -> Vec<usize> {
        let mut k = vec![0; n - 1];
        for r in &self.0 {
            for i in r.b..r.a {
                k[i as usize - 1] += 1;
            }
        }
        k
    }

    fn rest(&self) -> PBWMonomial {
        PBWMonomial(self.0[1..].to_vec())
    }

    fn prepend(&self, r: Root) -> PBWMonomial {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(r);
        v.extend_from_slice(&self.0);
        PBWMonomial(v)
    }
}

impl fmt::Display for PBWMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("v");
        }
        for r in &self.0 {
            write!(f, "F({},{})", r.a, r.b)?;
        }
        f.write_str("v")
    }
}

type PolyElem = BTreeMap<PBWMonomial, Poly>;

fn add_into(acc: &mut PolyElem, m: PBWMonomial, c: Poly) {
    if c.is_zero() {
        return;
    }
    match acc.get_mut(&m) {
        Some(old) => {
            let s = &*old + &c;
            if s.is_zero() {
                acc.remove(&m);
            } else {
                *old = s;
            }
        }
        None => {
            acc.insert(m, c);
        }
    }
}

/// A finite combination of PBW monomials with rational-function coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ModuleElement {
    terms: BTreeMap<PBWMonomial, RatFunc>,
}

impl ModuleElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The highest weight vector `v`.
    pub fn vacuum() -> Self {
        Self::monomial(PBWMonomial::one(), RatFunc::one())
    }

    pub fn monomial(m: PBWMonomial, c: RatFunc) -> Self {
        let mut e = Self::zero();
        e.add_term(m, c);
        e
    }

    pub fn terms(&self) -> &BTreeMap<PBWMonomial, RatFunc> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &PBWMonomial) -> RatFunc {
        self.terms.get(m).cloned().unwrap_or_else(RatFunc::zero)
    }

    pub fn add_term(&mut self, m: PBWMonomial, c: RatFunc) {
        if c.is_zero() {
            return;
        }
        let s = match self.terms.remove(&m) {
            Some(old) => &old + &c,
            None => c,
        };
        if !s.is_zero() {
            self.terms.insert(m, s);
        }
    }

    pub fn add(&self, other: &ModuleElement) -> ModuleElement {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &RatFunc) -> ModuleElement {
        let mut out = ModuleElement::zero();
        for (m, d) in &self.terms {
            out.add_term(m.clone(), d * c);
        }
        out
    }

    fn from_poly_elem(p: PolyElem) -> Self {
        ModuleElement {
            terms: p.into_iter().map(|(m, c)| (m, RatFunc::from(c))).collect(),
        }
    }

    /// All monomials share the depth `k`.
    pub fn is_homogeneous(&self, n: usize, k: &[usize]) -> bool {
        self.terms.keys().all(|m| m.depth(n) == k)
    }

    pub fn to_ascii(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(m, c)| format!("({})*{}", c.to_ascii(), m))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// `ψ`: the sum of the coefficients of the purely simple monomials.
pub fn psi(elem: &ModuleElement) -> RatFunc {
    let simple: Vec<&RatFunc> = elem
        .terms
        .iter()
        .filter(|(m, _)| m.is_simple())
        .map(|(_, c)| c)
        .collect();
    RatFunc::sum(simple)
}

/// A PBW monomial rewritten as a signed sum of words in the `f_i`
/// (leftmost letter first), using `F(a,b) = [f_{a-1}, F(a-1,b)]`.
pub fn expand_to_words(m: &PBWMonomial) -> Vec<(Vec<usize>, i64)> {
    fn root_words(r: Root) -> Vec<(Vec<usize>, i64)> {
        if r.is_simple() {
            return vec![(vec![r.b as usize], 1)];
        }
        let top = r.a as usize - 1;
        let inner = root_words(Root { a: r.a - 1, b: r.b });
        let mut out = Vec::with_capacity(2 * inner.len());
        for (w, s) in &inner {
            let mut left = vec![top];
            left.extend(w);
            out.push((left, *s));
            let mut right = w.clone();
            right.push(top);
            out.push((right, -s));
        }
        out
    }
    let mut acc: Vec<(Vec<usize>, i64)> = vec![(Vec::new(), 1)];
    for &r in &m.0 {
        let words = root_words(r);
        acc = acc
            .iter()
            .flat_map(|(w, s)| {
                words.iter().map(move |(w2, s2)| {
                    let mut x = w.clone();
                    x.extend(w2);
                    (x, s * s2)
                })
            })
            .collect();
    }
    acc
}

/// `ψ` from the defining rule on words: the signed number of words.
pub fn psi_by_words(m: &PBWMonomial) -> i64 {
    expand_to_words(m).iter().map(|(_, s)| s).sum()
}

/// Normal-ordering engine for one rank `n`, with a memo of generator actions.
pub struct Verma {
    n: usize,
    highest: Vec<Poly>,
    memo: HashMap<(Gen, PBWMonomial), PolyElem>,
}

impl Verma {
    pub fn new(n: usize) -> Self {
        let mut highest = Vec::with_capacity(n);
        let mut acc = Poly::zero();
        for i in 1..=n {
            highest.push(acc.clone());
            if i < n {
                acc = &acc + &Poly::linear(1, &[(Var::Z(i as u16), 1)]);
            }
        }
        Verma {
            n,
            highest,
            memo: HashMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `Λ_i`, the eigenvalue of `e_{ii}` on `v`.
    pub fn highest_weight(&self, i: usize) -> &Poly {
        &self.highest[i - 1]
    }

    fn check_gen(&self, g: Gen) -> Result<(), VermaError> {
        for x in [g.a, g.b] {
            if x == 0 || x as usize > self.n {
                return Err(VermaError::BadIndex(x as usize));
            }
        }
        Ok(())
    }

    fn apply_mono(&mut self, g: Gen, m: &PBWMonomial) -> PolyElem {
        if let Some(r) = self.memo.get(&(g, m.clone())) {
            return r.clone();
        }
        let mut out = PolyElem::new();
        if m.is_one() {
            match g.a.cmp(&g.b) {
                Ordering::Greater => {
                    out.insert(PBWMonomial(vec![g.root()]), Poly::one());
                }
                Ordering::Equal => add_into(&mut out, PBWMonomial::one(), self.highest[g.a as usize - 1].clone()),
                Ordering::Less => {}
            }
        } else {
            let first = m.0[0];
            if g.is_lowering() && g.root() <= first {
                out.insert(m.prepend(g.root()), Poly::one());
            } else {
                let rest = m.rest();
                // g·F·rest = F·(g·rest) + [g, F]·rest
                let inner = self.apply_mono(g, &rest);
                for (mm, c) in inner {
                    for (m2, c2) in self.apply_mono(first.gen(), &mm) {
                        add_into(&mut out, m2, &c * &c2);
                    }
                }
                for (g2, s) in g.bracket(first.gen()) {
                    for (m2, c2) in self.apply_mono(g2, &rest) {
                        add_into(&mut out, m2, c2.scale(&crate::symbolic::q(s)));
                    }
                }
            }
        }
        self.memo.insert((g, m.clone()), out.clone());
        out
    }

    /// `g · elem`.
    pub fn apply(&mut self, g: Gen, elem: &ModuleElement) -> Result<ModuleElement, VermaError> {
        self.check_gen(g)?;
        let mut out = ModuleElement::zero();
        for (m, c) in &elem.terms {
            for (m2, c2) in self.apply_mono(g, m) {
                out.add_term(m2, c * &RatFunc::from(c2));
            }
        }
        Ok(out)
    }

    /// The word `g_1 g_2 ... g_k` applied to `v` (`g_k` acts first), in the PBW basis.
    pub fn normal_order(&mut self, word: &[Gen]) -> Result<ModuleElement, VermaError> {
        let mut cur: PolyElem = BTreeMap::from([(PBWMonomial::one(), Poly::one())]);
        for &g in word.iter().rev() {
            self.check_gen(g)?;
            let mut next = PolyElem::new();
            for (m, c) in &cur {
                for (m2, c2) in self.apply_mono(g, m) {
                    add_into(&mut next, m2, c * &c2);
                }
            }
            cur = next;
        }
        Ok(ModuleElement::from_poly_elem(cur))
    }

    /// `(e_{ii} - e_{i+1,i+1}) · elem`.
    pub fn apply_h(&mut self, i: usize, elem: &ModuleElement) -> Result<ModuleElement, VermaError> {
        let a = self.apply(Gen::new(i, i), elem)?;
        let b = self.apply(Gen::new(i + 1, i + 1), elem)?;
        Ok(a.add(&b.scale(&RatFunc::int(-1))))
    }

    /// PBW monomials of depth `k` (weight `Λ - Σ k_i α_i`).
    pub fn weight_basis(&self, k: &[usize]) -> Vec<PBWMonomial> {
        fn rec(k: &mut Vec<usize>, cur: &mut Vec<Root>, out: &mut BTreeSet<PBWMonomial>) {
            let Some(i) = k.iter().position(|&x| x > 0) else {
                out.insert(PBWMonomial::new(cur.clone()));
                return;
            };
            let mut j = i;
            while j < k.len() && k[j] > 0 {
                for x in &mut k[i..=j] {
                    *x -= 1;
                }
                cur.push(Root::new(j + 2, i + 1));
                rec(k, cur, out);
                cur.pop();
                for x in &mut k[i..=j] {
                    *x += 1;
                }
                j += 1;
            }
        }
        let mut out = BTreeSet::new();
        rec(&mut k.to_vec(), &mut Vec::new(), &mut out);
        out.into_iter().collect()
    }

    /// Checks `ψ((e_1+...+e_{n-1})·elem) = -Σ k_i (k_i - k_{i+1} + z_i) ψ(elem)`.
    pub fn lemma_psi_check(&mut self, elem: &ModuleElement, k: &[usize]) -> Result<bool, VermaError> {
        if k.len() != self.n - 1 || !elem.is_homogeneous(self.n, k) {
            return Err(VermaError::NotHomogeneous);
        }
        let mut raised = ModuleElement::zero();
        for i in 1..self.n {
            raised = raised.add(&self.apply(Gen::e(i), elem)?);
        }
        let lhs = psi(&raised);
        let rhs = -(&RatFunc::from(content_from_counts(k)) * &psi(elem));
        Ok(lhs.equal(&rhs))
    }
}

/// Subset `I` with `e_i` applied: `I∖{i+1} ∪ {i}` when `i+1 ∈ I`, `i ∉ I`.
/// The sign is always `+1` in the sorted wedge basis.
pub fn e_action_on_fund(i: usize, mu: &YoungDiagram) -> Option<(YoungDiagram, i8)> {
    let mut s = mu.subset();
    if s.contains(&i) || !s.contains(&(i + 1)) {
        return None;
    }
    for x in &mut s {
        if *x == i + 1 {
            *x = i;
        }
    }
    Some((subset_to_diagram(&s, mu.ambient()).expect("valid subset"), 1))
}

/// `f_i u_I = u_{I∖{i} ∪ {i+1}}` when `i ∈ I`, `i+1 ∉ I`.
pub fn f_action_on_fund(i: usize, mu: &YoungDiagram) -> Option<(YoungDiagram, i8)> {
    let mut s = mu.subset();
    if !s.contains(&i) || s.contains(&(i + 1)) {
        return None;
    }
    for x in &mut s {
        if *x == i {
            *x = i + 1;
        }
    }
    Some((subset_to_diagram(&s, mu.ambient()).expect("valid subset"), 1))
}

/// `Σ_μ v_μ ⊗ u_μ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorElement {
    pub lambda: YoungDiagram,
    pub components: BTreeMap<YoungDiagram, ModuleElement>,
}

impl TensorElement {
    pub fn component(&self, mu: &YoungDiagram) -> ModuleElement {
        self.components.get(mu).cloned().unwrap_or_default()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let comps: Vec<serde_json::Value> = self
            .components
            .iter()
            .map(|(mu, e)| {
                let terms: Vec<serde_json::Value> = e
                    .terms
                    .iter()
                    .map(|(m, c)| {
                        serde_json::json!({
                            "monomial": m.0.iter().map(|r| [r.a, r.b]).collect::<Vec<_>>(),
                            "coeff": c.to_ascii(),
                        })
                    })
                    .collect();
                serde_json::json!({"mu": mu.tuple(), "psi": psi(e).to_ascii(), "terms": terms})
            })
            .collect();
        let a = self.lambda.ambient();
        serde_json::json!({
            "n": a.n(),
            "r": a.r(),
            "lambda": self.lambda.tuple(),
            "components": comps,
        })
    }
}

/// Size data of one per-component solve.
#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    pub mu: YoungDiagram,
    pub unknowns: usize,
    pub equations: usize,
    pub rank: usize,
}

/// Rank data of the whole singular-vector system.
#[derive(Clone, Debug, Serialize)]
pub struct UniquenessReport {
    pub lambda: YoungDiagram,
    pub solves: Vec<SolveReport>,
    /// Total unknowns including the top component.
    pub unknowns: usize,
    /// Dimension of the solution space of the homogeneous system.
    pub corank: usize,
}

/// Gauss elimination over rational functions; returns the unique solution.
fn solve_exact(
    mut rows: Vec<(BTreeMap<usize, RatFunc>, RatFunc)>,
    ncols: usize,
    label: &str,
) -> Result<(Vec<RatFunc>, usize), VermaError> {
    let cost = |r: &RatFunc| r.num().num_terms() + r.den_factors().count();
    let mut pivots: Vec<(usize, BTreeMap<usize, RatFunc>, RatFunc)> = Vec::new();
    let mut free_cols: BTreeSet<usize> = (0..ncols).collect();
    while !free_cols.is_empty() {
        // cheapest pivot among remaining rows and columns
        let mut best: Option<(usize, usize, usize)> = None;
        for (ri, (row, _)) in rows.iter().enumerate() {
            for (&c, v) in row {
                let key = cost(v) * 1000 + row.len();
                if best.is_none_or(|(_, _, k)| key < k) {
                    best = Some((ri, c, key));
                }
            }
        }
        let Some((ri, col, _)) = best else {
            return Err(VermaError::NotUnique {
                mu: label.to_string(),
                rank: pivots.len(),
                unknowns: ncols,
            });
        };
        let (mut prow, mut prhs) = rows.swap_remove(ri);
        let inv = prow[&col].inv()?;
        for v in prow.values_mut() {
            *v = &*v * &inv;
        }
        prhs = &prhs * &inv;
        for (row, rhs) in rows.iter_mut() {
            let Some(f) = row.remove(&col) else { continue };
            for (&c, pv) in &prow {
                if c == col {
                    continue;
                }
                let delta = &f * pv;
                let nv = match row.remove(&c) {
                    Some(old) => &old - &delta,
                    None => -delta,
                };
                if !nv.is_zero() {
                    row.insert(c, nv);
                }
            }
            *rhs = &*rhs - &(&f * &prhs);
        }
        for (row, rhs) in &rows {
            if row.is_empty() && !rhs.is_zero() {
                return Err(VermaError::Inconsistent { mu: label.to_string() });
            }
        }
        rows.retain(|(row, _)| !row.is_empty());
        free_cols.remove(&col);
        pivots.push((col, prow, prhs));
    }
    let rank = pivots.len();
    let mut x = vec![RatFunc::zero(); ncols];
    for (col, row, rhs) in pivots.into_iter().rev() {
        let mut terms = vec![rhs];
        for (&c, v) in &row {
            if c != col {
                terms.push(-(v * &x[c]));
            }
        }
        x[col] = RatFunc::sum(terms.iter());
    }
    Ok((x, rank))
}

impl Verma {
    /// The singular vector `v(λ)` with the rank data of each component solve.
    pub fn singular_vector_with_report(
        &mut self,
        lambda: &YoungDiagram,
    ) -> Result<(TensorElement, UniquenessReport), VermaError> {
        assert_eq!(lambda.ambient().n(), self.n, "rank mismatch");
        let mut below: Vec<YoungDiagram> = all_diagrams(lambda.ambient())
            .into_iter()
            .filter(|m| m.le(lambda).expect("same ambient"))
            .collect();
        below.sort_by(|a, b| b.size().cmp(&a.size()).then(a.cmp(b)));
        let mut comps: BTreeMap<YoungDiagram, ModuleElement> = BTreeMap::new();
        comps.insert(lambda.clone(), ModuleElement::vacuum());
        let mut solves = Vec::new();
        let mut unknowns_total = 1;
        for nu in below.into_iter().filter(|m| m != lambda) {
            let k = SkewShape::new(lambda.clone(), nu.clone())?.kvector();
            let basis = self.weight_basis(&k);
            let mut rows_map: BTreeMap<(usize, PBWMonomial), (BTreeMap<usize, RatFunc>, RatFunc)> = BTreeMap::new();
            for i in 1..self.n {
                for (c, m) in basis.iter().enumerate() {
                    for (m2, coeff) in self.apply_mono(Gen::e(i), m) {
                        let e = rows_map.entry((i, m2)).or_insert_with(|| (BTreeMap::new(), RatFunc::zero()));
                        e.0.insert(c, RatFunc::from(coeff));
                    }
                }
                // e_i v_ν = -v_{ν⊕i}
                if let Some((up, _)) = f_action_on_fund(i, &nu) {
                    if let Some(vu) = comps.get(&up) {
                        for (m2, c) in &vu.terms {
                            let e = rows_map
                                .entry((i, m2.clone()))
                                .or_insert_with(|| (BTreeMap::new(), RatFunc::zero()));
                            e.1 = &e.1 - c;
                        }
                    }
                }
            }
            let equations = rows_map.len();
            let rows: Vec<_> = rows_map.into_values().collect();
            for (row, rhs) in &rows {
                if row.is_empty() && !rhs.is_zero() {
                    return Err(VermaError::Inconsistent { mu: nu.label() });
                }
            }
            let (x, rank) = solve_exact(rows, basis.len(), &nu.label())?;
            let mut elem = ModuleElement::zero();
            for (m, c) in basis.iter().zip(x) {
                elem.add_term(m.clone(), c);
            }
            unknowns_total += basis.len();
            solves.push(SolveReport {
                mu: nu.clone(),
                unknowns: basis.len(),
                equations,
                rank,
            });
            comps.insert(nu, elem);
        }
        let tensor = TensorElement {
            lambda: lambda.clone(),
            components: comps,
        };
        self.verify_singular(&tensor)?;
        let deficient: usize = solves.iter().map(|s| s.unknowns - s.rank).sum();
        Ok((
            tensor,
            UniquenessReport {
                lambda: lambda.clone(),
                solves,
                unknowns: unknowns_total,
                corank: 1 + deficient,
            },
        ))
    }

    pub fn singular_vector(&mut self, lambda: &YoungDiagram) -> Result<TensorElement, VermaError> {
        Ok(self.singular_vector_with_report(lambda)?.0)
    }

    /// Recomputes `e_i · T` for every `i` and checks that it vanishes.
    pub fn verify_singular(&mut self, t: &TensorElement) -> Result<(), VermaError> {
        for i in 1..self.n {
            let mut out: BTreeMap<YoungDiagram, ModuleElement> = BTreeMap::new();
            for (mu, e) in &t.components {
                let acted = self.apply(Gen::e(i), e)?;
                let slot = out.entry(mu.clone()).or_default();
                *slot = slot.add(&acted);
                if let Some((down, _)) = e_action_on_fund(i, mu) {
                    let slot = out.entry(down).or_default();
                    *slot = slot.add(e);
                }
            }
            if let Some((mu, _)) = out.iter().find(|(_, e)| !e.is_zero()) {
                return Err(VermaError::VerificationFailed { mu: mu.label() });
            }
        }
        Ok(())
    }

    /// `g_{λ/μ} = ψ(v_μ)`.
    pub fn oracle_g(&mut self, lambda: &YoungDiagram, mu: &YoungDiagram) -> Result<RatFunc, VermaError> {
        SkewShape::new(lambda.clone(), mu.clone())?;
        Ok(psi(&self.singular_vector(lambda)?.component(mu)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::Ambient;
    use crate::symbolic::parse;

    fn d(n: usize, r: usize, t: &[usize]) -> YoungDiagram {
        YoungDiagram::new(Ambient::new(n, r).unwrap(), t.to_vec()).unwrap()
    }

    fn fw(word: &[usize]) -> Vec<Gen> {
        word.iter().map(|&i| Gen::f(i)).collect()
    }

    #[test]
    fn single_lowering() {
        let mut v = Verma::new(3);
        let e = v.normal_order(&fw(&[1])).unwrap();
        assert_eq!(e, ModuleElement::monomial(PBWMonomial::new(vec![Root::new(2, 1)]), RatFunc::one()));
    }

    #[test]
    fn raising_on_f1() {
        let mut v = Verma::new(3);
        let e = v.normal_order(&[Gen::e(1), Gen::f(1)]).unwrap();
        assert_eq!(e, ModuleElement::monomial(PBWMonomial::one(), parse("-z1-1").unwrap()));
    }

    #[test]
    fn h1_on_f1_f2() {
        let mut v = Verma::new(3);
        let x = v.normal_order(&fw(&[1, 2])).unwrap();
        let h = v.apply_h(1, &x).unwrap();
        assert_eq!(h, x.scale(&parse("-z1-2").unwrap()));
    }

    #[test]
    fn psi_examples() {
        let mut v = Verma::new(3);
        assert_eq!(psi(&ModuleElement::vacuum()), RatFunc::one());
        let x = v.normal_order(&fw(&[1, 1, 2])).unwrap();
        assert_eq!(psi(&x), RatFunc::one());
        let f31 = ModuleElement::monomial(PBWMonomial::new(vec![Root::new(3, 1)]), RatFunc::one());
        assert!(psi(&f31).is_zero());
        // F(3,1) = f_2 f_1 - f_1 f_2
        let a = v.normal_order(&fw(&[2, 1])).unwrap();
        let b = v.normal_order(&fw(&[1, 2])).unwrap();
        assert_eq!(a.add(&b.scale(&RatFunc::int(-1))), f31);
    }

    #[test]
    fn words_of_root_vectors_reassemble() {
        let mut v = Verma::new(5);
        let m = PBWMonomial::new(vec![Root::new(4, 1), Root::new(3, 2), Root::new(5, 3)]);
        let mut total = ModuleElement::zero();
        for (w, s) in expand_to_words(&m) {
            total = total.add(&v.normal_order(&fw(&w)).unwrap().scale(&RatFunc::int(s)));
        }
        assert_eq!(total, ModuleElement::monomial(m.clone(), RatFunc::one()));
        assert_eq!(psi_by_words(&m), 0);
    }

    #[test]
    fn serre_relations_vanish() {
        let mut v = Verma::new(4);
        for (i, j) in [(1, 2), (2, 1), (2, 3), (3, 2)] {
            let a = v.normal_order(&fw(&[i, i, j])).unwrap();
            let b = v.normal_order(&fw(&[i, j, i])).unwrap();
            let c = v.normal_order(&fw(&[j, i, i])).unwrap();
            let s = a.add(&b.scale(&RatFunc::int(-2))).add(&c);
            assert!(s.is_zero());
        }
    }

    #[test]
    fn fundamental_action() {
        let a = Ambient::new(4, 2).unwrap();
        for mu in all_diagrams(a) {
            if mu.is_empty() {
                for i in 1..4 {
                    assert!(e_action_on_fund(i, &mu).is_none());
                }
            }
        }
        let mu = subset_to_diagram(&[1, 3], a).unwrap();
        let (up, s) = e_action_on_fund(2, &mu).unwrap();
        assert_eq!((up.subset(), s), (vec![1, 2], 1));
        let mut u = YoungDiagram::empty(a);
        for i in [2, 1, 3, 2] {
            u = f_action_on_fund(i, &u).unwrap().0;
        }
        assert_eq!(u, YoungDiagram::full(a));
    }

    #[test]
    fn weight_basis_sizes() {
        let v = Verma::new(5);
        assert_eq!(v.weight_basis(&[1, 1, 1, 1]).len(), 8);
        assert_eq!(v.weight_basis(&[1, 2, 2, 1]).len(), 18);
        assert_eq!(v.weight_basis(&[0, 0, 0, 0]), vec![PBWMonomial::one()]);
        for m in v.weight_basis(&[1, 2, 2, 1]) {
            assert_eq!(m.depth(5), vec![1, 2, 2, 1]);
        }
    }

    #[test]
    fn lemma_psi_examples() {
        let mut v = Verma::new(3);
        let x = v.normal_order(&fw(&[1, 1, 2])).unwrap();
        assert!(v.lemma_psi_check(&x, &[2, 1]).unwrap());
        assert!(v.lemma_psi_check(&ModuleElement::vacuum(), &[0, 0]).unwrap());
        assert!(v.lemma_psi_check(&x, &[1, 1]).is_err());
    }

    #[test]
    fn singular_single_box() {
        let mut v = Verma::new(2);
        let l = d(2, 1, &[1]);
        let t = v.singular_vector(&l).unwrap();
        assert_eq!(t.component(&l), ModuleElement::vacuum());
        let e = YoungDiagram::empty(l.ambient());
        assert_eq!(psi(&t.component(&e)), parse("1/(1+z1)").unwrap());
    }

    #[test]
    fn oracle_examples() {
        let mut v = Verma::new(4);
        let hook_shape = d(4, 2, &[1, 2]);
        let e = YoungDiagram::empty(hook_shape.ambient());
        assert_eq!(
            v.oracle_g(&hook_shape, &e).unwrap(),
            parse("1/((z1+z2+z3+1)*(z1+1)*(z3+1))").unwrap()
        );
        let sq = d(4, 2, &[2, 2]);
        assert_eq!(
            v.oracle_g(&sq, &e).unwrap(),
            parse("1/((z1+z2+z3+1)*(z1+z2+1)*(z2+z3+1)*(z2+1))").unwrap()
        );
        assert_eq!(v.oracle_g(&sq, &sq).unwrap(), RatFunc::one());
        let mut v5 = Verma::new(5);
        let single = d(5, 3, &[0, 0, 1]);
        let e5 = YoungDiagram::empty(single.ambient());
        assert_eq!(v5.oracle_g(&single, &e5).unwrap(), parse("1/(1+z3)").unwrap());
    }

    #[test]
    fn uniqueness_report() {
        let mut v = Verma::new(4);
        let (_, rep) = v.singular_vector_with_report(&d(4, 2, &[2, 2])).unwrap();
        assert_eq!(rep.corank, 1);
        assert!(rep.solves.iter().all(|s| s.rank == s.unknowns));
    }
}
