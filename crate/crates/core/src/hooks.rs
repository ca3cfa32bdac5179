//! Hooks, hook-weights, z-contents and the z→y change of variables.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::diagrams::{boundary_type, BoundaryType, BoxCoord, DiagramError, SkewShape, YoungDiagram};
use crate::symbolic::{Poly, RatFunc, Var};

pub fn z(m: usize) -> Var {
    Var::Z(m as u16)
}

pub fn y(m: usize) -> Var {
    Var::Y(m as u16)
}

/// `H_λ(□)`: the box itself plus the boxes of `λ` after it in its row or column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HookSet {
    pub corner: BoxCoord,
    pub members: BTreeSet<BoxCoord>,
}

pub fn hook(lambda: &YoungDiagram, b: BoxCoord) -> Result<HookSet, DiagramError> {
    if !lambda.contains_box(b) {
        return Err(DiagramError::BoxNotInDiagram(b));
    }
    let members = lambda
        .boxes()
        .into_iter()
        .filter(|c| (c.i == b.i && c.j >= b.j) || (c.i >= b.i && c.j == b.j))
        .collect();
    Ok(HookSet { corner: b, members })
}

fn labels_of(lambda: &YoungDiagram, cells: impl IntoIterator<Item = BoxCoord>) -> Vec<usize> {
    let amb = lambda.ambient();
    cells.into_iter().map(|c| amb.z_label(c)).collect()
}

/// `h(□) = 1 + Σ_{□' ∈ H_λ(□)} z(□')`.
pub fn hook_weight(lambda: &YoungDiagram, b: BoxCoord) -> Result<Poly, DiagramError> {
    let h = hook(lambda, b)?;
    let mut terms: Vec<(Var, i64)> = Vec::new();
    for m in labels_of(lambda, h.members) {
        terms.push((z(m), 1));
    }
    Ok(Poly::linear(1, &terms))
}

/// `h̃(□) = Σ_{□' ∈ H_λ(□)} y(□')`.
pub fn y_hook_weight(lambda: &YoungDiagram, b: BoxCoord) -> Result<Poly, DiagramError> {
    let h = hook(lambda, b)?;
    let terms: Vec<(Var, i64)> = labels_of(lambda, h.members).into_iter().map(|m| (y(m), 1)).collect();
    Ok(Poly::linear(0, &terms))
}

/// Hook lengths `|H_λ(□)|` in box order.
pub fn hook_lengths(lambda: &YoungDiagram) -> Vec<usize> {
    lambda
        .boxes()
        .into_iter()
        .map(|b| hook(lambda, b).expect("own box").members.len())
        .collect()
}

pub fn hook_weights(lambda: &YoungDiagram) -> Vec<Poly> {
    lambda
        .boxes()
        .into_iter()
        .map(|b| hook_weight(lambda, b).expect("own box"))
        .collect()
}

pub fn y_hook_weights(lambda: &YoungDiagram) -> Vec<Poly> {
    lambda
        .boxes()
        .into_iter()
        .map(|b| y_hook_weight(lambda, b).expect("own box"))
        .collect()
}

/// `Π_{□ ∈ λ} h(□)`; `1` for the empty diagram.
pub fn hook_product(lambda: &YoungDiagram) -> RatFunc {
    RatFunc::product(hook_weights(lambda).into_iter().map(RatFunc::from).collect::<Vec<_>>().iter())
}

/// `s_{λ/μ} = Σ k_i (k_i - k_{i+1} + z_i)` with `k_n = 0`.
pub fn z_content(skew: &SkewShape) -> Poly {
    content_from_counts(&skew.kvector())
}

pub(crate) fn content_from_counts(k: &[usize]) -> Poly {
    let mut constant = 0i64;
    let mut terms = Vec::new();
    for (idx, &ki) in k.iter().enumerate() {
        let ki = ki as i64;
        let next = k.get(idx + 1).copied().unwrap_or(0) as i64;
        constant += ki * (ki - next);
        if ki != 0 {
            terms.push((z(idx + 1), ki));
        }
    }
    Poly::linear(constant, &terms)
}

/// `s̃_{λ/μ} = Σ k_i y_i`.
pub fn y_content(skew: &SkewShape) -> Poly {
    let terms: Vec<(Var, i64)> = skew
        .kvector()
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(idx, &k)| (y(idx + 1), k as i64))
        .collect();
    Poly::linear(0, &terms)
}

/// The unique boundary box of `λ` carrying label `z_m`, if `λ` has such a label.
pub fn boundary_box(lambda: &YoungDiagram, m: usize) -> Option<(BoxCoord, BoundaryType)> {
    let amb = lambda.ambient();
    lambda
        .boxes()
        .into_iter()
        .filter(|&b| amb.z_label(b) == m)
        .map(|b| (b, boundary_type(b, lambda).expect("own box")))
        .find(|(_, t)| *t != BoundaryType::NotBoundary)
}

/// Numbers of Active and Corner boundary boxes met when walking the boundary
/// across the label range of the hook of `b`.
pub fn hook_walk_counts(lambda: &YoungDiagram, b: BoxCoord) -> Result<(usize, usize), DiagramError> {
    let labels: BTreeSet<usize> = labels_of(lambda, hook(lambda, b)?.members).into_iter().collect();
    let mut active = 0;
    let mut corner = 0;
    for m in labels {
        match boundary_box(lambda, m).map(|(_, t)| t) {
            Some(BoundaryType::Active) => active += 1,
            Some(BoundaryType::Corner) => corner += 1,
            _ => {}
        }
    }
    Ok((active, corner))
}

/// `z_m = y_m + offset_m` for every label `m` of `λ`; absent labels map to `y_m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VariableChange {
    pub lambda: YoungDiagram,
    /// `(label, boundary type, offset)` for each label present in `λ`.
    pub offsets: Vec<(usize, BoundaryType, i64)>,
}

impl VariableChange {
    pub fn offset(&self, m: usize) -> i64 {
        self.offsets
            .iter()
            .find(|(l, _, _)| *l == m)
            .map(|&(_, _, o)| o)
            .unwrap_or(0)
    }

    /// Substitution map `z_m ↦ y_m + offset_m` for all `m` in `1..n-1`.
    pub fn map(&self) -> BTreeMap<Var, RatFunc> {
        self.poly_map().into_iter().map(|(v, p)| (v, RatFunc::from(p))).collect()
    }

    pub fn poly_map(&self) -> BTreeMap<Var, Poly> {
        let n = self.lambda.ambient().n();
        (1..n)
            .map(|m| (z(m), Poly::linear(self.offset(m), &[(y(m), 1)])))
            .collect()
    }
}

impl fmt::Display for VariableChange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.lambda.ambient().n();
        let parts: Vec<String> = (1..n)
            .map(|m| {
                let rhs = Poly::linear(self.offset(m), &[(y(m), 1)]);
                format!("z{m}={}", rhs.to_ascii())
            })
            .collect();
        f.write_str(&parts.join(", "))
    }
}

pub fn change_of_variables(lambda: &YoungDiagram) -> VariableChange {
    let n = lambda.ambient().n();
    let offsets = (1..n)
        .filter_map(|m| boundary_box(lambda, m))
        .map(|(b, t)| {
            let off = match t {
                BoundaryType::Active => -1,
                BoundaryType::Corner => 1,
                _ => 0,
            };
            (lambda.ambient().z_label(b), t, off)
        })
        .collect();
    VariableChange {
        lambda: lambda.clone(),
        offsets,
    }
}

/// `t ↦ (t_2 - t_1, ..., t_n - t_{n-1})`.
pub fn zeta(t: &[RatFunc]) -> Vec<RatFunc> {
    t.windows(2).map(|w| &w[1] - &w[0]).collect()
}

/// Outcome of comparing both signs of the weight-shift rule with the
/// boundary-box change of variables, label by label.
#[derive(Clone, Debug, Serialize)]
pub struct WeightShiftReport {
    pub lambda: YoungDiagram,
    pub labels: Vec<LabelVerdict>,
    /// `y = ζ(t - w(λ))` reproduces every offset.
    pub minus_rule_matches: bool,
    /// `y = ζ(t + w(λ))` reproduces every offset.
    pub plus_rule_matches: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LabelVerdict {
    pub label: usize,
    pub boundary: BoundaryType,
    /// `z_m = y_m + offset`.
    pub offset: i64,
    /// `ε_{m+1} - ε_m` of the weight `w(λ)`.
    pub weight_step: i64,
    pub minus_rule: bool,
    pub plus_rule: bool,
}

impl WeightShiftReport {
    pub fn summary(&self) -> String {
        match (self.plus_rule_matches, self.minus_rule_matches) {
            (true, true) => "both ζ(t+w(λ)) and ζ(t−w(λ)) match the boundary-box change of variables".into(),
            (true, false) => "ζ(t+w(λ)) matches the boundary-box change of variables, ζ(t−w(λ)) does not: the sign y=ζ(t−w(λ)) disagrees with z=y+offset".into(),
            (false, true) => "ζ(t−w(λ)) matches the boundary-box change of variables, ζ(t+w(λ)) does not".into(),
            (false, false) => "neither ζ(t+w(λ)) nor ζ(t−w(λ)) matches the boundary-box change of variables".into(),
        }
    }
}

pub fn weight_shift_check(lambda: &YoungDiagram) -> WeightShiftReport {
    let change = change_of_variables(lambda);
    let w: Vec<RatFunc> = lambda.weight().iter().map(|&e| RatFunc::int(e as i64)).collect();
    let steps: Vec<i64> = zeta(&w)
        .iter()
        .map(|s| {
            let c = s.constant_value().expect("constant weight");
            i64::try_from(c.to_integer()).expect("small step")
        })
        .collect();
    let labels: Vec<LabelVerdict> = change
        .offsets
        .iter()
        .map(|&(m, t, off)| {
            // z = y + off means y_m = z_m - off; the rules give y_m = z_m ∓ step
            let step = steps[m - 1];
            LabelVerdict {
                label: m,
                boundary: t,
                offset: off,
                weight_step: step,
                minus_rule: -step == -off,
                plus_rule: step == -off,
            }
        })
        .collect();
    WeightShiftReport {
        lambda: lambda.clone(),
        minus_rule_matches: labels.iter().all(|l| l.minus_rule),
        plus_rule_matches: labels.iter().all(|l| l.plus_rule),
        labels,
    }
}

/// Boxes whose hook-weight fails `h(z(y)) = h̃(y)` and diagrams `μ ≤ λ`
/// whose content fails `s(z(y)) = s̃(y)`.
#[derive(Clone, Debug, Default, Serialize)]
pub struct SubstitutionFailures {
    pub hook_boxes: Vec<BoxCoord>,
    pub contents: Vec<YoungDiagram>,
}

impl SubstitutionFailures {
    pub fn is_empty(&self) -> bool {
        self.hook_boxes.is_empty() && self.contents.is_empty()
    }
}

pub fn substitution_check(lambda: &YoungDiagram) -> SubstitutionFailures {
    let map = change_of_variables(lambda).poly_map();
    let mut out = SubstitutionFailures::default();
    for b in lambda.boxes() {
        let h = hook_weight(lambda, b).expect("own box");
        if h.substitute(&map) != y_hook_weight(lambda, b).expect("own box") {
            out.hook_boxes.push(b);
        }
    }
    for mu in crate::diagrams::all_diagrams(lambda.ambient()) {
        if !mu.le(lambda).expect("same ambient") {
            continue;
        }
        let skew = SkewShape::new(lambda.clone(), mu.clone()).expect("μ ≤ λ");
        if z_content(&skew).substitute(&map) != y_content(&skew) {
            out.contents.push(mu);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::Ambient;
    use crate::symbolic::parse;

    fn d(n: usize, r: usize, t: &[usize]) -> YoungDiagram {
        YoungDiagram::new(Ambient::new(n, r).unwrap(), t.to_vec()).unwrap()
    }

    fn p(s: &str) -> Poly {
        parse(s).unwrap().num().clone()
    }

    fn b(i: usize, j: usize) -> BoxCoord {
        BoxCoord::new(i, j)
    }

    #[test]
    fn hook_weights_of_hook_shape() {
        let hook_shape = d(4, 2, &[1, 2]);
        assert_eq!(hook_weight(&hook_shape, b(1, 1)).unwrap(), p("1+z1+z2+z3"));
        assert_eq!(hook_weight(&hook_shape, b(1, 2)).unwrap(), p("1+z1"));
        assert_eq!(hook_weight(&hook_shape, b(2, 1)).unwrap(), p("1+z3"));
        assert!(hook_weight(&hook_shape, b(2, 2)).is_err());
        let single = d(5, 3, &[0, 0, 1]);
        assert_eq!(hook_weight(&single, b(1, 1)).unwrap(), p("1+z3"));
    }

    #[test]
    fn hook_products() {
        let a = Ambient::new(4, 2).unwrap();
        assert_eq!(hook_product(&YoungDiagram::empty(a)), RatFunc::one());
        assert_eq!(
            hook_product(&d(4, 2, &[1, 2])),
            parse("(z1+z2+z3+1)*(z1+1)*(z3+1)").unwrap()
        );
        assert_eq!(
            hook_product(&YoungDiagram::full(a)),
            parse("(z1+z2+z3+1)*(z1+z2+1)*(z2+z3+1)*(z2+1)").unwrap()
        );
    }

    #[test]
    fn z_content_examples() {
        let a = Ambient::new(4, 2).unwrap();
        let full = YoungDiagram::full(a);
        let sk = |mu: &[usize]| SkewShape::new(full.clone(), d(4, 2, mu)).unwrap();
        assert_eq!(z_content(&sk(&[0, 0])), p("z1+2*z2+z3+2"));
        assert_eq!(z_content(&sk(&[0, 1])), p("z1+z2+z3+1"));
        assert_eq!(z_content(&sk(&[1, 2])), p("z2+1"));
        // the two dominoes, canonical convention
        assert_eq!(z_content(&sk(&[1, 1])), p("z2+z3+1"));
        assert_eq!(z_content(&sk(&[0, 2])), p("z1+z2+1"));
        // transposed convention: z1 <-> z3 exchanges the two domino contents
        let swap = BTreeMap::from([(z(1), Poly::var(z(3))), (z(3), Poly::var(z(1)))]);
        assert_eq!(z_content(&sk(&[1, 1])).substitute(&swap), p("z1+z2+1"));
        assert_eq!(z_content(&sk(&[0, 2])).substitute(&swap), p("z2+z3+1"));
    }

    #[test]
    fn change_of_variables_examples() {
        let full = YoungDiagram::full(Ambient::new(4, 2).unwrap());
        let c = change_of_variables(&full);
        assert_eq!(c.to_string(), "z1=y1, z2=-1+y2, z3=y3");
        let single = d(3, 1, &[1]);
        assert_eq!(change_of_variables(&single).offset(1), -1);
        let col = d(5, 2, &[0, 2]);
        let c = change_of_variables(&col);
        assert_eq!(c.offsets, vec![(2, BoundaryType::Flat, 0), (3, BoundaryType::Active, -1)]);
        let h = RatFunc::from(hook_weight(&col, b(2, 1)).unwrap());
        assert_eq!(h.substitute(&c.map()).unwrap(), RatFunc::var(Var::Y(3)));
    }

    #[test]
    fn y_weights_and_contents() {
        let a = Ambient::new(4, 2).unwrap();
        let full = YoungDiagram::full(a);
        assert_eq!(y_hook_weight(&d(4, 2, &[0, 1]), b(1, 1)).unwrap(), p("y2"));
        let sk = |mu: &[usize]| SkewShape::new(full.clone(), d(4, 2, mu)).unwrap();
        assert_eq!(y_content(&sk(&[0, 0])), p("y1+2*y2+y3"));
        assert_eq!(y_content(&sk(&[0, 1])), p("y1+y2+y3"));
    }

    #[test]
    fn zeta_examples() {
        let t: Vec<RatFunc> = (0..4).map(RatFunc::int).collect();
        assert_eq!(zeta(&t), vec![RatFunc::one(); 3]);
        let c = vec![RatFunc::var(Var::S(1)); 3];
        assert!(zeta(&c).iter().all(RatFunc::is_zero));
        // t - w(λ) for the 2x2 square
        let full = YoungDiagram::full(Ambient::new(4, 2).unwrap());
        let ts: Vec<RatFunc> = (1..=4).map(|i| RatFunc::var(Var::S(i))).collect();
        let shifted: Vec<RatFunc> = ts
            .iter()
            .zip(full.weight())
            .map(|(t, e)| t - &RatFunc::int(e as i64))
            .collect();
        let zs = zeta(&ts);
        let expected = [0, 1, 0];
        for ((a, b), e) in zeta(&shifted).iter().zip(&zs).zip(expected) {
            assert_eq!(a, &(b - &RatFunc::int(e)));
        }
    }

    #[test]
    fn weight_shift_square() {
        let full = YoungDiagram::full(Ambient::new(4, 2).unwrap());
        let rep = weight_shift_check(&full);
        assert!(rep.plus_rule_matches);
        assert!(!rep.minus_rule_matches);
        let l2 = rep.labels.iter().find(|l| l.label == 2).unwrap();
        assert_eq!((l2.offset, l2.weight_step), (-1, 1));
        assert!(rep.summary().contains("does not"));
    }

    #[test]
    fn weight_shift_single_and_empty() {
        let single = d(2, 1, &[1]);
        assert_eq!(single.weight(), vec![0, 1]);
        let rep = weight_shift_check(&single);
        assert!(rep.plus_rule_matches && !rep.minus_rule_matches);
        let empty = YoungDiagram::empty(Ambient::new(3, 1).unwrap());
        let rep = weight_shift_check(&empty);
        assert!(rep.labels.is_empty() && rep.plus_rule_matches && rep.minus_rule_matches);
    }

    #[test]
    fn substitution_holds_up_to_five() {
        for amb in Ambient::all_up_to(5) {
            for l in crate::diagrams::all_diagrams(amb) {
                let f = substitution_check(&l);
                assert!(f.is_empty(), "{l}: {f:?}");
            }
        }
    }

    #[test]
    fn hook_walk_has_one_more_active_than_corner() {
        let full = YoungDiagram::full(Ambient::new(4, 2).unwrap());
        assert_eq!(hook_walk_counts(&full, b(1, 1)).unwrap(), (1, 0));
        let hook_shape = d(4, 2, &[1, 2]);
        assert_eq!(hook_walk_counts(&hook_shape, b(1, 1)).unwrap(), (2, 1));
    }
}
