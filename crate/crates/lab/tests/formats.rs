mod common;

use std::fs;

use common::*;
use holonomy_core::connections::GeneralizedConnection;
use holonomy_core::cylindrical::Expr;
use holonomy_core::linalg::c64;
use holonomy_core::{CMatrix, Group, GroupDescriptor};
use holonomy_lab::formats::*;
use holonomy_lab::LabError;
use proptest::prelude::*;

#[test]
fn sample_data_parses() {
    let dir = data_dir();
    let square = load::<GraphDoc>(&dir.join("square.json")).unwrap().to_graph().unwrap();
    assert_eq!(square.edges().len(), 6);
    let comm = load::<GraphDoc>(&dir.join("commutator.json")).unwrap().to_graph().unwrap();
    assert_eq!(comm.edges().len(), 7);
    let smooth: ConnectionDoc = load(&dir.join("su2_smooth.json")).unwrap();
    let ConnectionDoc::Smooth(s) = &smooth else { panic!("expected a smooth connection") };
    let group = smooth.group_ref().unwrap().to_group().unwrap();
    assert_eq!(s.to_connection(&group).unwrap().terms().len(), 3);
    for name in ["torus_kick.json", "torus_flat.json"] {
        let doc: ConnectionDoc = load(&dir.join(name)).unwrap();
        let ConnectionDoc::General(gd) = &doc else { panic!("{name}: expected edge values") };
        let g = doc.group_ref().unwrap().to_group().unwrap();
        gd.to_connection(&comm, &g).unwrap();
    }
    for name in ["wilson_loop.json", "entry_squared.json"] {
        load::<FunctionDoc>(&dir.join(name)).unwrap().to_function(&square).unwrap();
    }
    let fam: FamilyDoc = load(&dir.join("star3_family.json")).unwrap();
    let g = fam.graph.as_ref().unwrap().to_graph().unwrap();
    assert_eq!(fam.to_family(&g).unwrap().members().len(), 3);
}

#[test]
fn parse_errors_name_file_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    fs::write(&path, "{\n  \"vertices\": [],\n  \"edges\": [oops]\n}\n").unwrap();
    let err = load::<GraphDoc>(&path).unwrap_err();
    let LabError::Parse { path: p, source } = &err else { panic!("{err:?}") };
    assert!(p.ends_with("broken.json"));
    assert_eq!(source.line(), 3);
    assert!(err.to_string().contains("line 3"), "{err}");
    assert!(matches!(load::<GraphDoc>(&dir.path().join("absent.json")), Err(LabError::Read { .. })));
}

#[test]
fn graph_documents_roundtrip() {
    let g = square_graph();
    let doc = GraphDoc::from_graph(&g);
    let text = serde_json::to_string(&doc).unwrap();
    let back: GraphDoc = serde_json::from_str(&text).unwrap();
    assert_eq!(*back.to_graph().unwrap(), *g);
    let bad = GraphDoc { basepoint: 99, ..doc };
    assert!(matches!(bad.to_graph(), Err(LabError::Op { op: "graph", .. })));
}

#[test]
fn descriptor_documents() {
    let d: DescriptorDoc = serde_json::from_str(r#"{"kind":"SU","n":2}"#).unwrap();
    assert_eq!(d.to_descriptor().unwrap(), GroupDescriptor::SpecialUnitary(2));
    let p: DescriptorDoc = serde_json::from_str(r#"{"kind":"product","factors":[{"kind":"torus","n":1},{"kind":"SU","n":2}]}"#).unwrap();
    assert_eq!(p.to_group().unwrap(), product_t1_su2());
    // U(2) as (U(1) × SU(2)) / {±1}, with K given by flat and nested matrices.
    let q = r#"{"kind":"quotient","base":{"kind":"product","factors":[{"kind":"torus","n":1},{"kind":"SU","n":2}]},
        "K":[[[1,0],[0,0],[0,0],[0,0],[0,0],[1,0],[0,0],[0,0],[0,0],[0,0],[1,0],[0,0],[0,0],[0,0],[0,0],[1,0]],
             [[[-1,0],[0,0],[0,0]],[[0,0],[-1,0],[0,0]],[[0,0],[0,0],[-1,0]]]]}"#;
    let q: DescriptorDoc = serde_json::from_str(q).unwrap();
    let err = q.to_group();
    // A flat 16-entry matrix is 4×4, which does not fit a 3×3 base.
    assert!(err.is_err());
    for name in ["su2", "SU3", "u1", "u2", "t3", "u2q"] {
        let g = parse_group_name(name).unwrap();
        let doc = DescriptorDoc::from_descriptor(g.descriptor());
        assert_eq!(doc.to_group().unwrap(), g, "{name}");
    }
    for bad in ["so3", "su", "t0", "su2q", ""] {
        assert!(parse_group_name(bad).is_err(), "{bad}");
    }
}

#[test]
fn path_specs() {
    assert_eq!(parse_path_spec("e1,e2").unwrap(), vec![1, 2]);
    assert_eq!(parse_path_spec("1, -2").unwrap(), vec![1, -2]);
    assert_eq!(parse_path_spec("e3^-1,-e4").unwrap(), vec![-3, -4]);
    assert!(parse_path_spec("e0").is_err());
    assert!(parse_path_spec("x").is_err());
    let g = square_graph();
    assert!(path_from_ids(&g, &[1, 3]).is_err());
    assert!(path_from_ids(&g, &[]).unwrap().is_unit());
}

#[test]
fn expressions_are_one_based_in_files() {
    let doc: ExprDoc = serde_json::from_str(r#"{"add":[{"entry":[1,2,1]},{"mul":[{"const":[0,1]},{"conj":{"trace":2}}]}]}"#).unwrap();
    let e = doc.to_expr().unwrap();
    let expected = Expr::Add(vec![Expr::entry(0, 1, 0), Expr::Mul(vec![Expr::constant(0.0, 1.0), Expr::conj(Expr::Trace(1))])]);
    assert_eq!(e, expected);
    assert_eq!(ExprDoc::from_expr(&e), doc);
    let zero: ExprDoc = serde_json::from_str(r#"{"entry":[0,1,1]}"#).unwrap();
    assert!(zero.to_expr().is_err());
}

#[test]
fn generalized_connections_roundtrip() {
    let g = square_graph();
    for group in all_groups() {
        let h = GeneralizedConnection::random(g.clone(), group.clone(), 4);
        let text = serde_json::to_string(&GeneralDoc::from_connection(&h)).unwrap();
        let doc: ConnectionDoc = serde_json::from_str(&text).unwrap();
        let ConnectionDoc::General(gd) = &doc else { panic!() };
        let back = gd.to_connection(&g, &doc.group_ref().unwrap().to_group().unwrap()).unwrap();
        for (e, v) in h.values() {
            assert!(v.distance(back.value(*e).unwrap()) < 1e-15);
        }
    }
    // A non-member value is rejected with its edge.
    let doc = GeneralDoc { group: None, values: vec![EdgeValueDoc { edge: 1, value: MatrixDoc::from_matrix(&CMatrix::identity(2).scale_real(2.0)) }] };
    let err = doc.to_connection(&g, &Group::special_unitary(2)).unwrap_err();
    assert!(err.to_string().contains("edge 1"), "{err}");
}

#[test]
fn smooth_connections_roundtrip() {
    let su3 = Group::special_unitary(3);
    let a = random_connection(&su3, 4, 2);
    let text = serde_json::to_string(&SmoothDoc::from_connection(&a)).unwrap();
    let doc: SmoothDoc = serde_json::from_str(&text).unwrap();
    let back = doc.to_connection(&doc.group.as_ref().unwrap().to_group().unwrap()).unwrap();
    assert_eq!(back, a);
    let mut bad = doc.clone();
    bad.terms[1].radius = -1.0;
    let err = bad.to_connection(&su3).unwrap_err();
    assert!(err.to_string().starts_with("term 2"), "{err}");
}

proptest! {
    #[test]
    fn matrices_roundtrip_bit_for_bit(entries in proptest::collection::vec((-1e3f64..1e3, -1e3f64..1e3), 1..5usize)) {
        let n = entries.len();
        let data = (0..n * n).map(|k| { let (a, b) = entries[k % n]; c64(a * (k as f64 + 1.0), b) }).collect();
        let m = CMatrix::from_row_major(n, data).unwrap();
        let text = serde_json::to_string(&MatrixDoc::from_matrix(&m)).unwrap();
        let back: MatrixDoc = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.to_matrix().unwrap(), m);
    }
}
