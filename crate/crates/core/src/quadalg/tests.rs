use super::*;
use crate::graph::clique_polynomial;
use proptest::prelude::*;

fn zero(g: Graph) -> PGraph {
    PGraph::zero_labelled(g, 5, 4)
}

/// Naive quotient of the full tensor power: rank of the span of all
/// u (x) omega (x) v in V^(x)n.
fn naive_dims(a: &QuadraticAlgebra, n_max: usize) -> Vec<usize> {
    let d = a.dim_v();
    let p = a.p();
    let mut out = vec![1];
    for n in 1..=n_max {
        let size = d.pow(n as u32);
        let mut ech = SparseEchelon::new(p, size);
        if n >= 2 {
            for r in 0..a.omega().rows() {
                let w: Vec<(usize, u64)> = a.omega().row(r).iter().copied().enumerate().filter(|e| e.1 != 0).collect();
                for i in 0..=n - 2 {
                    let right = d.pow((n - 2 - i) as u32);
                    for left in 0..d.pow(i as u32) {
                        for rt in 0..right {
                            let mut row: Vec<(usize, u64)> =
                                w.iter().map(|&(ab, x)| ((left * d * d + ab) * right + rt, x)).collect();
                            row.sort_unstable();
                            ech.insert(row);
                        }
                    }
                }
            }
        }
        out.push(size - ech.rank());
    }
    out
}

#[test]
fn graph_algebra_examples() {
    assert_eq!(graph_algebra(&zero(Graph::complete(3)), Flavor::MildTest).omega_dim(), 3);
    assert_eq!(graph_algebra(&zero(Graph::edgeless(3)), Flavor::MildTest).omega_dim(), 0);
    // 4 squares, 6 anticommutators, and the two diagonals killed in both orders
    assert_eq!(graph_algebra(&zero(Graph::cycle(4)), Flavor::ExteriorOp).omega_dim(), 12);
}

#[test]
fn hilbert_examples() {
    let path = graph_algebra(&zero(Graph::path(3)), Flavor::MildTest);
    assert_eq!(hilbert_dims(&path, 4).unwrap(), vec![1, 3, 7, 15, 31]);
    let k3 = graph_algebra(&zero(Graph::complete(3)), Flavor::MildTest);
    assert_eq!(hilbert_dims(&k3, 3).unwrap(), vec![1, 3, 6, 10]);
    let ext = graph_algebra(&zero(Graph::complete(3)), Flavor::ExteriorOp);
    assert_eq!(hilbert_dims(&ext, 3).unwrap(), vec![1, 3, 3, 1]);
    assert_eq!(hilbert_dims(&k3, 0).unwrap(), vec![1]);
}

#[test]
fn resource_guard() {
    let free = QuadraticAlgebra::free(5, Graph::standard_names(4));
    assert!(matches!(
        hilbert_dims_with_limit(&free, 6, 1000),
        Err(QuadAlgError::ResourceLimit { degree: 5, .. })
    ));
}

#[test]
fn fast_path_matches_naive_quotient() {
    for d in 1..=4 {
        let depth = if d == 4 { 5 } else { 6 };
        for g in Graph::all_on(d) {
            for flavor in [Flavor::MildTest, Flavor::ExteriorOp] {
                let a = graph_algebra(&zero(g.clone()), flavor);
                assert_eq!(hilbert_dims(&a, depth).unwrap(), naive_dims(&a, depth), "{g:?} {flavor:?}");
            }
        }
    }
}

#[test]
fn trace_monoid_growth() {
    // the commutator algebra of a graph has Hilbert series 1 / sum (-1)^n c_n T^n
    for g in Graph::all_on(4) {
        let c = clique_polynomial(&g);
        let alt: Vec<i64> = c.iter().enumerate().map(|(n, &x)| if n % 2 == 0 { x as i64 } else { -(x as i64) }).collect();
        let inv = series_reciprocal(&IntSeries::from_ints(&alt), 6).unwrap();
        let want: Vec<usize> = inv.integer_coeffs().unwrap().iter().map(|x| x.to_usize().unwrap()).collect();
        let a = graph_algebra(&zero(g), Flavor::MildTest);
        assert_eq!(hilbert_dims(&a, 6).unwrap(), want);
    }
}

#[test]
fn mildness_examples() {
    let c4 = mildness_check(&zero(Graph::cycle(4)), 6);
    assert_eq!(c4.verdict, MildnessVerdict::MildUpTo(6));
    assert_eq!(c4.dims, vec![1, 4, 12, 32, 80, 192, 448]);
    let k3 = mildness_check(&zero(Graph::complete(3)), 3);
    assert_eq!(
        k3.verdict,
        MildnessVerdict::NotMild {
            degree: 3,
            algebra: 10,
            series: 9
        }
    );
    assert_eq!(k3.series, vec![1, 3, 6, 9]);
    assert_eq!(mildness_check(&zero(Graph::path(3)), 6).verdict, MildnessVerdict::MildUpTo(6));
}

#[test]
fn sums_and_wedges() {
    let names = |s: &[&str]| s.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let dem1 = QuadraticAlgebra::exterior(5, names(&["a", "b"]));
    let dem2 = QuadraticAlgebra::exterior(5, names(&["c", "d"]));
    let s = direct_sum(&dem1, &dem2).unwrap();
    assert_eq!(hilbert_dims(&s, 3).unwrap(), vec![1, 4, 2, 0]);
    let one = QuadraticAlgebra::exterior(5, names(&["e"]));
    assert_eq!(hilbert_dims(&one, 2).unwrap(), vec![1, 1, 0]);
    let w = wedge_product(&dem1, &one).unwrap();
    assert_eq!(hilbert_dims(&w, 3).unwrap(), vec![1, 3, 3, 1]);
    let unit = QuadraticAlgebra::free(5, vec![]);
    assert_eq!(hilbert_dims(&wedge_product(&dem1, &unit).unwrap(), 3).unwrap(), vec![1, 2, 1, 0]);
    let other = QuadraticAlgebra::free(7, names(&["z"]));
    assert_eq!(direct_sum(&dem1, &other), Err(QuadAlgError::PrimeMismatch(5, 7)));
}

#[test]
fn mantel_examples() {
    assert!(mantel_bound_check(4, 4));
    assert!(!mantel_bound_check(3, 3));
    assert!(mantel_bound_check(3, 1));
}

#[test]
fn gartner_examples() {
    let GartnerSplit::Found { v1, v2 } = gartner_split_search(&zero(Graph::path(3))) else {
        panic!()
    };
    assert_eq!((v1, v2), (vec!["x1".to_string(), "x3".to_string()], vec!["x2".to_string()]));
    assert_eq!(gartner_split_search(&zero(Graph::cycle(5))), GartnerSplit::NoneFound);
    assert_eq!(gartner_split_search(&zero(Graph::complete(3))), GartnerSplit::NoneFound);
}

#[test]
fn gartner_split_implies_mild() {
    for g in Graph::all_on(4) {
        if g.edges().is_empty() {
            continue;
        }
        if let GartnerSplit::Found { .. } = gartner_split_search(&zero(g.clone())) {
            assert_eq!(mildness_check(&zero(g), 8).verdict, MildnessVerdict::MildUpTo(8));
        }
    }
}

fn small_algebra() -> impl Strategy<Value = QuadraticAlgebra> {
    (1usize..=2, 0usize..=3).prop_flat_map(|(d, r)| {
        prop::collection::vec(prop::collection::vec(0u64..3, d * d), r)
            .prop_map(move |rels| QuadraticAlgebra::new(3, Graph::standard_names(d), &rels).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn dimension_laws(a in small_algebra(), b in small_algebra()) {
        let n = 4;
        let (da, db) = (hilbert_dims(&a, n).unwrap(), hilbert_dims(&b, n).unwrap());
        let sum = hilbert_dims(&direct_sum(&a, &b).unwrap(), n).unwrap();
        for k in 1..=n {
            prop_assert_eq!(sum[k], da[k] + db[k]);
        }
        let wedge = hilbert_dims(&wedge_product(&a, &b).unwrap(), n).unwrap();
        for k in 0..=n {
            let conv: usize = (0..=k).map(|i| da[i] * db[k - i]).sum();
            prop_assert_eq!(wedge[k], conv);
        }
    }
}
