use num_rational::BigRational;
use proptest::prelude::*;

use hooklab::diagrams::{all_diagrams, f_multiset, Ambient, YoungDiagram};
use hooklab::excited::{enumerate_excited, g_excited};
use hooklab::hooks::{hook_walk_counts, substitution_check};
use hooklab::integrals::{master_function, ratio_check_k1, QuadratureOptions};
use hooklab::symbolic::{qq, RatFunc};
use hooklab::verma::{psi, psi_by_words, Gen, ModuleElement, PBWMonomial, Root, Verma};
use hooklab::whittaker::basis_matrix_generic;

/// A diagram drawn uniformly from the rectangles with `n <= max_n`.
fn arb_diagram(max_n: usize) -> impl Strategy<Value = YoungDiagram> {
    let all: Vec<YoungDiagram> = Ambient::all_up_to(max_n).into_iter().flat_map(all_diagrams).collect();
    prop::sample::select(all)
}

fn arb_pair(max_n: usize) -> impl Strategy<Value = (YoungDiagram, YoungDiagram)> {
    arb_diagram(max_n).prop_flat_map(|l| {
        let below: Vec<YoungDiagram> = all_diagrams(l.ambient()).into_iter().filter(|m| m.le(&l).unwrap()).collect();
        (Just(l), prop::sample::select(below))
    })
}

fn arb_f_word(n: usize, max_len: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(1..n, 0..=max_len)
}

fn arb_monomial(n: usize) -> impl Strategy<Value = PBWMonomial> {
    prop::collection::vec((1..n, 1..n), 0..4).prop_map(move |pairs| {
        let roots = pairs
            .into_iter()
            .map(|(a, b)| {
                let (lo, hi) = (a.min(b), a.max(b) + 1);
                Root::new(hi, lo)
            })
            .collect();
        PBWMonomial::new(roots)
    })
}

fn counts(n: usize, word: &[usize]) -> Vec<usize> {
    let mut k = vec![0; n - 1];
    for &i in word {
        k[i - 1] += 1;
    }
    k
}

fn gens(word: &[usize]) -> Vec<Gen> {
    word.iter().map(|&i| Gen::f(i)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn psi_is_invariant_under_lowering(n in 2usize..=5, word in arb_f_word(5, 4), i in 1usize..5) {
        prop_assume!(word.iter().all(|&w| w < n) && i < n);
        let mut v = Verma::new(n);
        let u = v.normal_order(&gens(&word)).unwrap();
        let fu = v.apply(Gen::f(i), &u).unwrap();
        prop_assert!(psi(&fu).equal(&psi(&u)));
    }

    #[test]
    fn normal_ordering_preserves_weight(n in 2usize..=5, word in arb_f_word(5, 5)) {
        prop_assume!(word.iter().all(|&w| w < n));
        let mut v = Verma::new(n);
        let u = v.normal_order(&gens(&word)).unwrap();
        prop_assert!(u.is_homogeneous(n, &counts(n, &word)));
        prop_assert!(psi(&u).equal(&RatFunc::one()));
    }

    #[test]
    fn psi_closed_rule_matches_word_expansion(m in arb_monomial(5)) {
        let closed = psi(&ModuleElement::monomial(m.clone(), RatFunc::one()));
        prop_assert!(closed.equal(&RatFunc::int(psi_by_words(&m))));
    }

    #[test]
    fn raising_lemma_on_four_letter_words(word in prop::collection::vec(1usize..5, 4)) {
        let mut v = Verma::new(5);
        let u = v.normal_order(&gens(&word)).unwrap();
        prop_assert!(v.lemma_psi_check(&u, &counts(5, &word)).unwrap());
    }

    #[test]
    fn change_of_variables_on_hooks_and_contents(l in arb_diagram(6)) {
        let f = substitution_check(&l);
        prop_assert!(f.is_empty(), "{:?}", f);
    }

    #[test]
    fn hook_walk_has_one_more_active_than_corner(l in arb_diagram(6)) {
        for b in l.boxes() {
            let (active, corner) = hook_walk_counts(&l, b).unwrap();
            prop_assert_eq!(active, corner + 1);
        }
    }

    #[test]
    fn excited_diagrams_move_boxes_diagonally((l, m) in arb_pair(6)) {
        let es = enumerate_excited(&l, &m).unwrap();
        prop_assert!(!es.is_empty());
        for e in &es {
            prop_assert_eq!(e.cells.len(), m.size());
            prop_assert!(e.trace_is_diagonal());
        }
        if l == m {
            prop_assert_eq!(g_excited(&l, &m).unwrap(), RatFunc::one());
        }
    }

    #[test]
    fn basis_matrix_is_unitriangular(n in 2usize..=5, r in 1usize..5, t in prop::collection::vec(-60i64..60, 5), seed in any::<u64>()) {
        prop_assume!(r < n);
        let amb = Ambient::new(n, r).unwrap();
        let t: Vec<BigRational> = t[..n].iter().map(|&x| BigRational::from_integer(x.into())).collect();
        let m = basis_matrix_generic(amb, &t, seed, 50).unwrap();
        prop_assert!(m.is_unitriangular());
        prop_assert_eq!(m.determinant, qq(1, 1));
    }

    #[test]
    fn ratio_is_kappa_independent(z in 0i64..6, k1 in 11i64..60, k2 in 11i64..60) {
        let opts = QuadratureOptions::default();
        let a = ratio_check_k1(&qq(z, 1), &qq(k1, 10), opts).unwrap();
        let b = ratio_check_k1(&qq(z, 1), &qq(k2, 10), opts).unwrap();
        prop_assert!((a.lhs - b.lhs).abs() < 1e-10);
        prop_assert!(a.route_difference < 1e-10);
    }

    #[test]
    fn master_degree_from_counts(l in arb_diagram(6)) {
        prop_assume!(!l.is_empty());
        let k: Vec<i64> = f_multiset(&l).iter().map(|&c| c as i64).collect();
        let same: i64 = k.iter().map(|&c| c * (c - 1) / 2).sum();
        let next: i64 = k.windows(2).map(|w| w[0] * w[1]).sum();
        let mf = master_function(&l);
        prop_assert_eq!(mf.difference_degree(), 2 * same - next);
        for (i, &c) in k.iter().enumerate() {
            if c >= 2 {
                prop_assert_eq!(mf.swapped(i + 1, 1, 2).normalized_factors(), mf.normalized_factors());
            }
        }
    }
}
