use manin::picard::{classify_dp4, quadric_matrix, segre_symbol, SegreSymbol};
use manin::surfaces::{HomogeneousForm, DP4_TYPES};

fn q(src: &str) -> HomogeneousForm {
    HomogeneousForm::parse(5, src).unwrap()
}

#[test]
fn every_row_reproduces_its_symbol() {
    for (ty, q1, q2, symbol, lines, sing) in DP4_TYPES {
        let c = classify_dp4(&q(q1), &q(q2)).unwrap_or_else(|e| panic!("type {ty}: {e}"));
        assert_eq!(c.symbol.to_string(), symbol, "type {ty}");
        assert_eq!(c.table_type.as_deref(), Some(ty));
        assert_eq!(c.lines, lines);
        assert_eq!(c.singularity, sing);
    }
}

#[test]
fn symbol_does_not_depend_on_pencil_basis() {
    for (ty, q1, q2, symbol, ..) in DP4_TYPES {
        let a = quadric_matrix(&q(q1)).unwrap();
        let b = quadric_matrix(&q(q2)).unwrap();
        let swapped = segre_symbol(&b, &a).unwrap();
        let mixed = segre_symbol(&(&a + &b), &(&a - &b)).unwrap();
        let expected: SegreSymbol = symbol.parse().unwrap();
        assert_eq!(swapped, expected, "type {ty}");
        assert_eq!(mixed, expected, "type {ty}");
    }
}

#[test]
fn catalogue_pencils() {
    for (id, symbol) in [
        ("dp4_pencil_a1", "(2,1,1,1)"),
        ("dp4_d4_nonsplit", "((3,1),1)"),
    ] {
        let s = manin::surfaces::builtin(id).unwrap();
        let c = classify_dp4(&s.forms[0], &s.forms[1]).unwrap();
        assert_eq!(c.symbol.to_string(), symbol, "{id}");
    }
}

#[test]
fn json_shape() {
    let (_, q1, q2, ..) = DP4_TYPES[0];
    let c = classify_dp4(&q(q1), &q(q2)).unwrap();
    let v = serde_json::to_value(&c).unwrap();
    assert_eq!(v["symbol"], "(2,1,1,1)");
    assert_eq!(v["type"], "A1");
}
