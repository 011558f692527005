use kipp::data::{bundled, BUNDLED};
use kipp::format::{FormatError, MatrixDocument};
use kipp::kipp_core::linalg::{C64, ComplexMatrix};
use kipp::golden::{figure_form, FIGURE_S};
use proptest::prelude::*;

#[test]
fn parse_errors_are_reported() {
    assert!(matches!(MatrixDocument::parse("{"), Err(FormatError::Json(_))));
    assert!(matches!(
        MatrixDocument::parse(r#"{"n": 0, "entries": []}"#),
        Err(FormatError::Empty)
    ));
    assert!(matches!(
        MatrixDocument::parse(r#"{"n": 2, "entries": [[[0,0],[0,0]]]}"#),
        Err(FormatError::RowCount { n: 2, rows: 1 })
    ));
    assert!(matches!(
        MatrixDocument::parse(r#"{"n": 2, "entries": [[[0,0],[0,0]], [[0,0]]]}"#),
        Err(FormatError::RowLength { n: 2, row: 1, len: 1 })
    ));
    // a pair needs exactly two numbers
    assert!(MatrixDocument::parse(r#"{"n": 1, "entries": [[[0,0,0]]]}"#).is_err());
    assert!(matches!(
        MatrixDocument::load(std::path::Path::new("/nonexistent/kipp.json")),
        Err(FormatError::Io { .. })
    ));
}

#[test]
fn metadata_is_optional() {
    let d = MatrixDocument::parse(r#"{"n": 1, "entries": [[[0.5, -1]]]}"#).unwrap();
    assert_eq!(d.label, None);
    assert_eq!(d.to_matrix().unwrap()[(0, 0)], C64::new(0.5, -1.0));
    let d = d.with_label("x").with_source("y");
    assert!(d.to_json().contains("\"label\": \"x\""));
}

#[test]
fn bundled_documents_parse() {
    for (name, _) in BUNDLED {
        let d = bundled(name).unwrap().unwrap();
        let m = d.to_matrix().unwrap();
        assert_eq!(m.rows(), d.n, "{}", name);
    }
    assert!(bundled("nope").is_none());
}

#[test]
fn bundled_figures_match_their_forms() {
    for (i, s) in FIGURE_S.iter().enumerate() {
        let m = bundled(&format!("figure{}", i + 1)).unwrap().unwrap().to_matrix().unwrap();
        assert!(m.dist(&figure_form(*s).matrix()) < 1e-15, "figure {}", i + 1);
    }
}

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![
        any::<f64>().prop_filter("finite", |x| x.is_finite()),
        -1.0f64..1.0,
        Just(0.0),
        Just(-0.0),
        Just(f64::MIN_POSITIVE),
        Just(5e-324),
    ]
}

proptest! {
    #[test]
    fn json_round_trip_is_lossless(n in 1usize..5, vals in prop::collection::vec(finite(), 50)) {
        let m = ComplexMatrix::from_fn(n, n, |i, j| {
            let k = 2 * (i * n + j);
            C64::new(vals[k], vals[k + 1])
        });
        let doc = MatrixDocument::from_matrix(&m).with_label("p");
        let back = MatrixDocument::parse(&doc.to_json()).unwrap();
        let m2 = back.to_matrix().unwrap();
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(m[(i, j)].re.to_bits(), m2[(i, j)].re.to_bits());
                prop_assert_eq!(m[(i, j)].im.to_bits(), m2[(i, j)].im.to_bits());
            }
        }
        prop_assert_eq!(back, doc);
    }
}
