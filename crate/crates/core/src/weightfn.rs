//! Admissible sequences, the weight functions `W°`, `W*`, `W_λ`, and the
//! collapse identities for `W*`-sums.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

use crate::diagrams::{f_multiset, Ambient, YoungDiagram};
use crate::symbolic::{Poly, RatFunc, Var};
use crate::verma::f_action_on_fund;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightFnError {
    #[error("sequence {0:?} is not admissible")]
    NotAdmissible(Vec<usize>),
    #[error("sequence {seq:?} does not match the box counts {k:?}")]
    WrongCounts { seq: Vec<usize>, k: Vec<usize> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SequenceKind {
    Admissible,
    WeaklyAdmissible,
}

/// `(ℓ_1, ..., ℓ_k)`; `f_{ℓ_1}` is applied first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenSequence {
    pub ambient: Ambient,
    pub entries: Vec<usize>,
    pub kind: SequenceKind,
}

impl GenSequence {
    /// Applies `f_{ℓ_1}`, `f_{ℓ_2}`, ... to `u_∅`; `None` once a step vanishes.
    pub fn apply_to_vacuum(&self) -> Option<YoungDiagram> {
        let mut u = YoungDiagram::empty(self.ambient);
        for &l in &self.entries {
            u = f_action_on_fund(l, &u)?.0;
        }
        Some(u)
    }

    /// `(ℓ_c, b_c)` with `b_c` the number of occurrences of `ℓ_c` among `ℓ_1..ℓ_c`.
    pub fn slots(&self) -> Vec<(usize, usize)> {
        let mut seen: HashMap<usize, usize> = HashMap::new();
        self.entries
            .iter()
            .map(|&l| {
                let b = seen.entry(l).or_insert(0);
                *b += 1;
                (l, *b)
            })
            .collect()
    }

    pub fn chain(&self, terminal_shift: i64) -> ChainFactorization {
        let positions: Vec<Var> = self.slots().into_iter().map(|(i, j)| x(i, j)).collect();
        let terminal = Poly::linear(-terminal_shift, &[(positions[0], 1)]);
        ChainFactorization { positions, terminal }
    }
}

impl fmt::Display for GenSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.entries.iter().join(","))
    }
}

/// The variables `x_{ℓ_c, b_c}` in order and the terminal factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainFactorization {
    pub positions: Vec<Var>,
    pub terminal: Poly,
}

impl ChainFactorization {
    /// `(x_{c} - x_{c-1})` for `c = 2..k`, then the terminal factor.
    pub fn factors(&self) -> Vec<Poly> {
        let mut out: Vec<Poly> = self
            .positions
            .windows(2)
            .map(|w| Poly::linear(0, &[(w[1], 1), (w[0], -1)]))
            .collect();
        out.push(self.terminal.clone());
        out
    }

    pub fn reciprocal(&self) -> RatFunc {
        RatFunc::reciprocal_product(self.factors().iter()).expect("distinct variables")
    }
}

pub fn x(i: usize, j: usize) -> Var {
    Var::X(i as u16, j as u16)
}

/// `F_λ`, in lexicographic order.
pub fn admissible_sequences(lambda: &YoungDiagram) -> Vec<GenSequence> {
    fn rec(
        cur: &YoungDiagram,
        k: &mut Vec<usize>,
        seq: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if k.iter().all(|&c| c == 0) {
            out.push(seq.clone());
            return;
        }
        for i in 1..=k.len() {
            if k[i - 1] == 0 {
                continue;
            }
            if let Some((next, _)) = f_action_on_fund(i, cur) {
                k[i - 1] -= 1;
                seq.push(i);
                rec(&next, k, seq, out);
                seq.pop();
                k[i - 1] += 1;
            }
        }
    }
    let a = lambda.ambient();
    let mut found = Vec::new();
    rec(&YoungDiagram::empty(a), &mut f_multiset(lambda), &mut Vec::new(), &mut found);
    found
        .into_iter()
        .map(|entries| GenSequence {
            ambient: a,
            entries,
            kind: SequenceKind::Admissible,
        })
        .filter(|s| s.apply_to_vacuum().as_ref() == Some(lambda))
        .collect()
}

/// `F*_λ`: every ordering of the multiset with `k_i` copies of `i`.
pub fn weakly_admissible_sequences(lambda: &YoungDiagram) -> Vec<GenSequence> {
    let letters: Vec<usize> = f_multiset(lambda)
        .iter()
        .enumerate()
        .flat_map(|(i, &c)| std::iter::repeat_n(i + 1, c))
        .collect();
    let n = letters.len();
    let distinct: BTreeSet<Vec<usize>> = letters.into_iter().permutations(n).collect();
    distinct
        .into_iter()
        .map(|entries| GenSequence {
            ambient: lambda.ambient(),
            entries,
            kind: SequenceKind::WeaklyAdmissible,
        })
        .collect()
}

impl GenSequence {
    /// Validated sequence for `λ`: the letter counts must be those of `λ`, and
    /// an admissible sequence must reach `u_λ` from `u_∅`.
    pub fn for_lambda(lambda: &YoungDiagram, entries: Vec<usize>, kind: SequenceKind) -> Result<Self, WeightFnError> {
        let k = f_multiset(lambda);
        let mut c = vec![0; k.len()];
        for &l in &entries {
            if l == 0 || l > c.len() {
                return Err(WeightFnError::WrongCounts { seq: entries, k });
            }
            c[l - 1] += 1;
        }
        if c != k {
            return Err(WeightFnError::WrongCounts { seq: entries, k });
        }
        let seq = GenSequence {
            ambient: lambda.ambient(),
            entries,
            kind,
        };
        if kind == SequenceKind::Admissible && seq.apply_to_vacuum().as_ref() != Some(lambda) {
            return Err(WeightFnError::NotAdmissible(seq.entries));
        }
        Ok(seq)
    }
}

/// `W°_f = 1/[Π_{c≥2} (x_{ℓ_c,b_c} - x_{ℓ_{c-1},b_{c-1}}) · (x_{ℓ_1,1} - 1)]`.
pub fn w_circ(f: &GenSequence) -> Result<RatFunc, WeightFnError> {
    if f.entries.is_empty() || f.entries[0] != f.ambient.r() || f.apply_to_vacuum().is_none() {
        return Err(WeightFnError::NotAdmissible(f.entries.clone()));
    }
    Ok(f.chain(1).reciprocal())
}

/// `W*_f`: as `W°_f` with terminal factor `x_{ℓ_1,1}`.
pub fn w_star(f: &GenSequence) -> RatFunc {
    f.chain(0).reciprocal()
}

/// Slot permutations of `Π_i S_{k_i}` as substitution maps `x_{i,j} ↦ x_{i,π_i(j)}`.
pub fn slot_permutations(k: &[usize]) -> Vec<BTreeMap<Var, RatFunc>> {
    let per_group: Vec<Vec<Vec<usize>>> = k.iter().map(|&c| (1..=c).permutations(c).collect()).collect();
    per_group
        .into_iter()
        .multi_cartesian_product()
        .map(|choice| {
            let mut m = BTreeMap::new();
            for (gi, perm) in choice.iter().enumerate() {
                for (j, &pj) in perm.iter().enumerate() {
                    if j + 1 != pj {
                        m.insert(x(gi + 1, j + 1), RatFunc::var(x(gi + 1, pj)));
                    }
                }
            }
            m
        })
        .collect()
}

/// Unsummed slot-permuted copies of `e`.
pub fn symmetrize_terms(e: &RatFunc, lambda: &YoungDiagram) -> Vec<RatFunc> {
    slot_permutations(&f_multiset(lambda))
        .iter()
        .map(|m| {
            if m.is_empty() {
                e.clone()
            } else {
                e.substitute(m).expect("permutations keep factors nonzero")
            }
        })
        .collect()
}

/// `Sym`: the sum over `Π_i S_{k_i}`.
pub fn symmetrize(e: &RatFunc, lambda: &YoungDiagram) -> RatFunc {
    RatFunc::sum(symmetrize_terms(e, lambda).iter())
}

/// Expanded summands of `W_λ`: `|F_λ| · Π k_i!` terms.
pub fn weight_function_terms(lambda: &YoungDiagram) -> Vec<RatFunc> {
    admissible_sequences(lambda)
        .iter()
        .flat_map(|f| symmetrize_terms(&w_circ(f).expect("admissible"), lambda))
        .collect()
}

/// `W_λ = Sym Σ_{f ∈ F_λ} W°_f`.
pub fn weight_function(lambda: &YoungDiagram) -> RatFunc {
    RatFunc::sum(weight_function_terms(lambda).iter())
}

#[derive(Clone, Debug, Serialize)]
pub struct CollapseReport {
    pub lambda: YoungDiagram,
    pub sequences: usize,
    pub terms: usize,
    pub holds: bool,
}

/// `Σ_{f ∈ F*_λ} Sym W*_f = 1/Π x_{i,j}`, by full expansion.
pub fn collapse_identity_check(lambda: &YoungDiagram) -> CollapseReport {
    let seqs = weakly_admissible_sequences(lambda);
    let terms: Vec<RatFunc> = seqs
        .iter()
        .flat_map(|f| symmetrize_terms(&w_star(f), lambda))
        .collect();
    let lhs = RatFunc::sum(terms.iter());
    let vars: Vec<Poly> = f_multiset(lambda)
        .iter()
        .enumerate()
        .flat_map(|(i, &c)| (1..=c).map(move |j| Poly::var(x(i + 1, j))))
        .collect();
    let rhs = RatFunc::reciprocal_product(vars.iter()).expect("variables are nonzero");
    CollapseReport {
        lambda: lambda.clone(),
        sequences: seqs.len(),
        terms: terms.len(),
        holds: lhs.equal(&rhs),
    }
}

fn s(j: usize) -> Poly {
    Poly::var(Var::S(j as u16))
}

fn diff(a: usize, b: usize) -> Poly {
    &s(a) - &s(b)
}

/// `1/((s_{σ(k)} - s_{σ(k-1)}) ⋯ (s_{σ(2)} - s_{σ(1)}) s_{σ(1)})`.
pub fn partial_fraction_term(sigma: &[usize]) -> RatFunc {
    let mut factors: Vec<Poly> = sigma.windows(2).map(|w| diff(w[1], w[0])).collect();
    factors.push(s(sigma[0]));
    RatFunc::reciprocal_product(factors.iter()).expect("distinct variables")
}

/// Sum over `S_k` of [`partial_fraction_term`], summing all `k!` terms at once.
pub fn partial_fraction_sum_brute(k: usize) -> RatFunc {
    let terms: Vec<RatFunc> = (1..=k).permutations(k).map(|p| partial_fraction_term(&p)).collect();
    RatFunc::sum(terms.iter())
}

/// The same sum grouped by the set of used indices and the last index:
/// `G(S, b) = Σ_{a ∈ S∖b} G(S∖b, a)/(s_b - s_a)`, `G({b}, b) = 1/s_b`.
pub fn partial_fraction_sum(k: usize) -> RatFunc {
    let mut g: HashMap<(u32, usize), RatFunc> = HashMap::new();
    for mask in 1u32..(1 << k) {
        for b in 0..k {
            if mask & (1 << b) == 0 {
                continue;
            }
            let rest = mask & !(1 << b);
            let val = if rest == 0 {
                RatFunc::from(s(b + 1)).inv().expect("nonzero")
            } else {
                let parts: Vec<RatFunc> = (0..k)
                    .filter(|a| rest & (1 << a) != 0)
                    .map(|a| {
                        let f = RatFunc::from(diff(b + 1, a + 1)).inv().expect("distinct");
                        &g[&(rest, a)] * &f
                    })
                    .collect();
                RatFunc::sum(parts.iter())
            };
            g.insert((mask, b), val);
        }
    }
    let full = (1u32 << k) - 1;
    let last: Vec<RatFunc> = (0..k).map(|b| g[&(full, b)].clone()).collect();
    RatFunc::sum(last.iter())
}

/// `Σ_{σ ∈ S_k} 1/((s_{σ(k)} - s_{σ(k-1)}) ⋯ (s_{σ(2)} - s_{σ(1)}) s_{σ(1)}) = 1/Π s_j`.
pub fn partial_fraction_check(k: usize) -> bool {
    assert!(k >= 1);
    let rhs = RatFunc::reciprocal_product((1..=k).map(s).collect::<Vec<_>>().iter()).expect("nonzero");
    let lhs = if k <= BRUTE_MAX_K {
        partial_fraction_sum_brute(k)
    } else {
        partial_fraction_sum(k)
    };
    lhs.equal(&rhs)
}

/// Largest `k` expanded term by term in [`partial_fraction_check`].
pub const BRUTE_MAX_K: usize = 6;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::{all_diagrams, syt_count};
    use crate::symbolic::parse;

    fn d(n: usize, r: usize, t: &[usize]) -> YoungDiagram {
        YoungDiagram::new(Ambient::new(n, r).unwrap(), t.to_vec()).unwrap()
    }

    fn entries(v: &[GenSequence]) -> Vec<Vec<usize>> {
        v.iter().map(|s| s.entries.clone()).collect()
    }

    #[test]
    fn admissible_square() {
        let sq = d(4, 2, &[2, 2]);
        assert_eq!(entries(&admissible_sequences(&sq)), vec![vec![2, 1, 3, 2], vec![2, 3, 1, 2]]);
        let single = d(5, 3, &[0, 0, 1]);
        assert_eq!(entries(&admissible_sequences(&single)), vec![vec![3]]);
    }

    #[test]
    fn admissible_counts_match_brute_force() {
        for a in Ambient::all_up_to(6) {
            for l in all_diagrams(a).into_iter().filter(|l| !l.is_empty() && l.size() <= 6) {
                let adm = admissible_sequences(&l);
                let brute: Vec<_> = weakly_admissible_sequences(&l)
                    .into_iter()
                    .filter(|f| f.apply_to_vacuum().as_ref() == Some(&l))
                    .collect();
                assert_eq!(entries(&adm), entries(&brute), "{l}");
                assert_eq!(adm.len() as u128, syt_count(&l));
                assert!(adm.iter().all(|f| f.entries[0] == a.r()));
            }
        }
    }

    #[test]
    fn weakly_admissible_counts() {
        assert_eq!(weakly_admissible_sequences(&d(4, 2, &[2, 2])).len(), 12);
        assert_eq!(weakly_admissible_sequences(&d(3, 1, &[1])).len(), 1);
        assert_eq!(weakly_admissible_sequences(&d(3, 2, &[0, 1])).len(), 1);
        let two = d(4, 2, &[0, 2]);
        assert_eq!(f_multiset(&two), vec![0, 1, 1]);
        assert_eq!(weakly_admissible_sequences(&two).len(), 2);
    }

    #[test]
    fn w_circ_square() {
        let sq = d(4, 2, &[2, 2]);
        let f = &admissible_sequences(&sq)[0];
        assert_eq!(
            w_circ(f).unwrap(),
            parse("1/((x2_2-x3_1)*(x3_1-x1_1)*(x1_1-x2_1)*(x2_1-1))").unwrap()
        );
        assert_eq!(
            w_star(f),
            parse("1/((x2_2-x3_1)*(x3_1-x1_1)*(x1_1-x2_1)*x2_1)").unwrap()
        );
        let bad = GenSequence {
            ambient: sq.ambient(),
            entries: vec![1, 2, 3, 2],
            kind: SequenceKind::WeaklyAdmissible,
        };
        assert!(w_circ(&bad).is_err());
    }

    #[test]
    fn slot_rule_orders_group_members() {
        for f in weakly_admissible_sequences(&d(5, 2, &[2, 3])) {
            let slots = f.slots();
            for (c, &(i, j)) in slots.iter().enumerate() {
                if j > 1 {
                    let prev = slots.iter().position(|&(i2, j2)| i2 == i && j2 == j - 1).unwrap();
                    assert!(prev < c);
                }
            }
            assert_eq!(f.chain(0).factors().len(), f.entries.len());
        }
    }

    #[test]
    fn validated_construction() {
        let sq = d(4, 2, &[2, 2]);
        assert!(GenSequence::for_lambda(&sq, vec![2, 1, 3, 2], SequenceKind::Admissible).is_ok());
        assert!(matches!(
            GenSequence::for_lambda(&sq, vec![1, 2, 3, 2], SequenceKind::Admissible),
            Err(WeightFnError::NotAdmissible(_))
        ));
        assert!(GenSequence::for_lambda(&sq, vec![1, 2, 3, 2], SequenceKind::WeaklyAdmissible).is_ok());
        assert!(matches!(
            GenSequence::for_lambda(&sq, vec![2, 1, 3], SequenceKind::WeaklyAdmissible),
            Err(WeightFnError::WrongCounts { .. })
        ));
    }

    #[test]
    fn single_box_functions() {
        let single = d(4, 2, &[0, 1]);
        let f = &admissible_sequences(&single)[0];
        assert_eq!(w_circ(f).unwrap(), parse("1/(x2_1-1)").unwrap());
        assert_eq!(w_star(f), parse("1/x2_1").unwrap());
        assert_eq!(weight_function(&single), parse("1/(x2_1-1)").unwrap());
    }

    #[test]
    fn symmetrize_examples() {
        let sq = d(4, 2, &[2, 2]);
        assert_eq!(
            symmetrize(&RatFunc::var(x(2, 1)), &sq),
            parse("x2_1+x2_2").unwrap()
        );
        let hook_shape = d(4, 2, &[1, 2]);
        let e = parse("x1_1/x3_1").unwrap();
        assert_eq!(symmetrize(&e, &hook_shape), e);
    }

    #[test]
    fn weight_function_square() {
        let sq = d(4, 2, &[2, 2]);
        let terms = weight_function_terms(&sq);
        assert_eq!(terms.len(), 4);
        let expected = parse(
            "1/((x2_2-x3_1)*(x3_1-x1_1)*(x1_1-x2_1)*(x2_1-1)) \
             + 1/((x2_1-x3_1)*(x3_1-x1_1)*(x1_1-x2_2)*(x2_2-1)) \
             + 1/((x2_2-x1_1)*(x1_1-x3_1)*(x3_1-x2_1)*(x2_1-1)) \
             + 1/((x2_1-x1_1)*(x1_1-x3_1)*(x3_1-x2_2)*(x2_2-1))",
        )
        .unwrap();
        assert_eq!(weight_function(&sq), expected);
        // Sym of a symmetric function multiplies by Π k_i!
        let w = weight_function(&sq);
        assert_eq!(symmetrize(&w, &sq), &w * &RatFunc::int(2));
    }

    #[test]
    fn collapse_small() {
        assert!(collapse_identity_check(&d(3, 1, &[1])).holds);
        let rep = collapse_identity_check(&d(4, 2, &[2, 2]));
        assert_eq!((rep.sequences, rep.terms), (12, 24));
        assert!(rep.holds);
    }

    #[test]
    fn partial_fractions() {
        assert_eq!(partial_fraction_sum(1), parse("1/s1").unwrap());
        assert_eq!(
            &partial_fraction_term(&[1, 2]) + &partial_fraction_term(&[2, 1]),
            parse("1/(s1*s2)").unwrap()
        );
        for k in 1..=4 {
            assert_eq!(partial_fraction_sum(k), partial_fraction_sum_brute(k));
            assert!(partial_fraction_check(k));
        }
    }
}
