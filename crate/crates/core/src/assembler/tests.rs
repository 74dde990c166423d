use super::*;
use crate::graph::{parse_pgraph, Graph, PGraph};
use crate::quadalg::{direct_sum, underlying_graph_algebra, Flavor};

fn fixture(name: &str) -> Fixture {
    let path = format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    load_fixture(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn amalgam(name: &str) -> (RestrictionData, RestrictionData) {
    match fixture(name) {
        Fixture::Amalgam { d1, d2, .. } => (d1, d2),
        _ => panic!("{name} is not an amalgam"),
    }
}

fn hnn(name: &str) -> (RestrictionData, Vec<String>) {
    match fixture(name) {
        Fixture::Hnn { data, phi, .. } => (data, phi),
        _ => panic!("{name} is not an HNN extension"),
    }
}

fn euler(d: &[usize]) -> i64 {
    d.iter().enumerate().map(|(n, &x)| if n % 2 == 0 { x as i64 } else { -(x as i64) }).sum()
}

#[test]
fn book_amalgam() {
    let (d1, d2) = amalgam("book.json");
    let h = check_amalgam_hypotheses(&d1, &d2).unwrap();
    assert!(h.i_holds() && h.ii_holds());
    let alg = amalgam_cohomology(&d1, &d2).unwrap();
    assert_eq!(alg.names(), ["c", "a", "b", "d"]);
    assert_eq!(hilbert_dims(&alg, 4).unwrap(), vec![1, 4, 5, 2, 0]);
    let mv = mayer_vietoris_dims(&d1, &d2, 4).unwrap();
    assert_eq!((mv[1].v1_part, mv[1].v2_part, mv[1].h_part), (2, 2, 1));
    assert_eq!((mv[0].v1_part, mv[0].v2_part, mv[0].h_part), (1, 1, 2));
    assert_eq!(mv.iter().map(|m| m.total).collect::<Vec<_>>(), vec![4, 5, 2, 0]);
}

#[test]
fn amalg1_fails_surjectivity() {
    let (d1, d2) = amalgam("amalg1.json");
    let h = check_amalgam_hypotheses(&d1, &d2).unwrap();
    assert!(!h.i_holds());
    assert!(matches!(amalgam_cohomology(&d1, &d2), Err(AssemblyError::HypothesesNotSatisfied(_))));
    assert_eq!(recognize_amalgam_properness(&d1, &d2), Some("amalgamated subgroup is pro-cyclic"));
}

#[test]
fn amalg2_fails_kernel_condition() {
    let (d1, d2) = amalgam("amalg2.json");
    let h = check_amalgam_hypotheses(&d1, &d2).unwrap();
    assert!(h.i_holds());
    assert!(!h.ii_holds());
    assert_eq!(h.condition_ii[0].detail, "dim ker res^2 = 1, dim (ker res^1 . H^1) = 0");
}

#[test]
fn disjoint_union_is_direct_sum() {
    let p = 5;
    let a = QuadraticAlgebra::exterior(p, vec!["a".into(), "b".into()]);
    let b = underlying_graph_algebra(&Graph::path(3), p, Flavor::ExteriorOp);
    let unit = QuadraticAlgebra::free(p, vec![]);
    let d1 = RestrictionData::projection(a.clone(), unit.clone()).unwrap();
    let d2 = RestrictionData::projection(b.clone(), unit).unwrap();
    assert_eq!(amalgam_cohomology(&d1, &d2).unwrap(), direct_sum(&a, &b).unwrap());
}

#[test]
fn amalgam_euler_characteristic_and_mv_agree() {
    for name in ["book.json"] {
        let (d1, d2) = amalgam(name);
        let n = 6;
        let dims = hilbert_dims(&amalgam_cohomology(&d1, &d2).unwrap(), n).unwrap();
        let (g1, g2, h) = (
            hilbert_dims(&d1.ambient, n).unwrap(),
            hilbert_dims(&d2.ambient, n).unwrap(),
            hilbert_dims(&d1.sub, n).unwrap(),
        );
        assert_eq!(euler(&dims), euler(&g1) + euler(&g2) - euler(&h));
        let mv = mayer_vietoris_dims(&d1, &d2, n).unwrap();
        for m in mv {
            assert_eq!(m.total, dims[m.degree]);
        }
    }
}

#[test]
fn not_a_morphism_is_rejected() {
    // x*y survives in G but its image a*b dies in H: fine. The reverse is not.
    let g = QuadraticAlgebra::exterior(5, vec!["x".into(), "y".into()]);
    let mut h_rels = Vec::new();
    h_rels.push(vec![1, 0, 0, 0]);
    let h = QuadraticAlgebra::new(5, vec!["a".into(), "b".into()], &h_rels).unwrap();
    let map = FpMatrix::identity(5, 2);
    assert!(matches!(RestrictionData::new(g, h, map), Err(AssemblyError::NotAMorphism(_))));
}

#[test]
fn hnn_examples() {
    let (d, phi) = hnn("hnn1.json");
    let h = check_hnn_hypotheses(&d, &phi).unwrap();
    assert!(h.all_hold(), "{h:?}");
    let c = hnn_cohomology(&d, &phi, 4).unwrap();
    assert_eq!(c.dims, vec![1, 4, 5, 2, 0]);
    assert_eq!(hilbert_dims(&hnn_algebra(&d).unwrap(), 4).unwrap(), c.dims);

    let (d, phi) = hnn("hnncondii.json");
    let h = check_hnn_hypotheses(&d, &phi).unwrap();
    assert!(h.condition_i.holds && !h.condition_ii.holds && h.condition_iii.holds);
    assert!(matches!(hnn_cohomology(&d, &phi, 3), Err(AssemblyError::HypothesesNotSatisfied(_))));

    let (d, phi) = hnn("hnncondiii.json");
    let h = check_hnn_hypotheses(&d, &phi).unwrap();
    assert!(h.condition_i.holds && h.condition_ii.holds && !h.condition_iii.holds);
}

#[test]
fn hnn_over_trivial_subgroup() {
    let g0 = QuadraticAlgebra::exterior(5, vec!["x".into(), "y".into()]);
    let d = RestrictionData::projection(g0, QuadraticAlgebra::free(5, vec![])).unwrap();
    let c = hnn_cohomology(&d, &[], 3).unwrap();
    assert_eq!(c.dims, vec![1, 3, 1, 0]);
}

#[test]
fn bad_phi_word() {
    let (d, _) = hnn("hnn1.json");
    let phi = vec!["x w".to_string(), "y".to_string()];
    assert!(matches!(check_hnn_hypotheses(&d, &phi), Err(AssemblyError::BadWord { .. })));
}

#[test]
fn fixture_errors() {
    assert!(load_fixture("{").is_err());
    assert!(load_fixture(r#"{"kind":"amalgam","p":4}"#).is_err());
    assert!(load_fixture(r#"{"kind":"amalgam","p":5}"#).is_err());
}

#[test]
fn chordal_pipeline_examples() {
    let book = parse_pgraph(include_str!("../../tests/fixtures/book.pgraph")).unwrap();
    let proof = chordal_pipeline(&book).unwrap();
    assert_eq!(proof.dims, vec![1, 4, 5, 2]);
    assert!(proof.matches_prediction);
    assert_eq!(proof.tree.leaf_count(), 2);
    let ProofTree::Amalgam { mayer_vietoris, .. } = &proof.tree else { panic!() };
    assert_eq!(mayer_vietoris, &vec![1, 4, 5, 2]);

    let k4 = PGraph::zero_labelled(Graph::complete(4), 5, 4);
    let proof = chordal_pipeline(&k4).unwrap();
    assert_eq!(proof.dims, vec![1, 4, 6, 4, 1]);
    assert_eq!(proof.tree.leaf_count(), 1);

    let c4 = PGraph::zero_labelled(Graph::cycle(4), 5, 4);
    assert!(matches!(chordal_pipeline(&c4), Err(ChordalPipelineError::NotChordal(_))));

    let m = parse_pgraph(include_str!("../../tests/fixtures/mennicke.pgraph")).unwrap();
    assert!(matches!(chordal_pipeline(&m), Err(ChordalPipelineError::Degenerate(_))));
}

#[test]
fn chordal_pipeline_matches_clique_counts() {
    for n in 1..=5 {
        for g in Graph::all_on(n) {
            let pg = PGraph::zero_labelled(g, 5, 4);
            match chordal_pipeline(&pg) {
                Ok(proof) => assert!(proof.matches_prediction, "{:?}", pg.graph()),
                Err(ChordalPipelineError::NotChordal(_)) => {}
                Err(e) => panic!("{e}"),
            }
        }
    }
}
