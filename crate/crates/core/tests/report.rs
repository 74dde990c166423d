use praag::graph::parse_pgraph;
use praag::report::{analyze, AnalyzeOptions, Outcome};

fn load(name: &str) -> praag::graph::PGraph {
    let path = format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    parse_pgraph(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn c4_report() {
    let r = analyze(&load("c4.pgraph"), &AnalyzeOptions::default());
    assert!(r.triangle_free);
    assert_eq!(r.mild_up_to, Some(8));
    assert_eq!(r.predicted.betti, vec![1, 4, 4]);
    assert!(r.ggs.ok().unwrap().certificate().is_some());
    assert!(r.quadraticity.is_proven());
}

#[test]
fn mennicke_report() {
    let r = analyze(&load("mennicke.pgraph"), &AnalyzeOptions::default());
    assert_eq!(r.jacobi_fails.len(), 1);
    assert_eq!(r.abelianization.ok().unwrap().torsion_exponents, vec![1, 1, 1]);
    assert_eq!(r.abelianization.ok().unwrap().free_rank, 0);
    assert!(matches!(&r.cyclotomic, Outcome::Ok(t) if !t.cyclotomic));
    assert!(!r.quadraticity.is_proven());
    let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(json["cyclotomic"]["ok"]["cyclotomic"], false);
}

#[test]
fn json_is_canonical_and_deterministic() {
    for name in ["c4.pgraph", "mennicke.pgraph", "book.pgraph", "gamma2.pgraph", "gamma3.pgraph"] {
        let g = load(name);
        let a = analyze(&g, &AnalyzeOptions::default()).to_json();
        let b = analyze(&g, &AnalyzeOptions::default()).to_json();
        assert_eq!(a, b);
        let v: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert_eq!(serde_json::to_string_pretty(&v).unwrap(), a);
    }
}
