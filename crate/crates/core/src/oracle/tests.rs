use super::*;
use crate::root_datum::{g2, named_fixtures, sl2, sl3, torus};

fn w(c: &[i64]) -> Weight {
    Weight::from_i64s(c)
}

fn reject_axiom(text: &str) -> String {
    let t = OracleTable::parse(text, "t").unwrap();
    match validate_oracle(&t) {
        Err(Error::InvalidOracle { axiom, .. }) => axiom,
        other => panic!("expected rejection, got {other:?}"),
    }
}

#[test]
fn sl2_window_is_clebsch_gordan() {
    let m = materialize_oracle(&sl2(), 4, 7).unwrap();
    assert_eq!(m.table.len(), 5);
    let mut ws: Vec<i64> = m.provenance.iter().map(|w| w.to_i64s().unwrap()[0]).collect();
    ws.sort();
    assert_eq!(ws, vec![0, 1, 2, 3, 4]);
    for a in 0..5i64 {
        for b in 0..5i64 {
            let (x, y) = (m.label_of(&w(&[a])).unwrap(), m.label_of(&w(&[b])).unwrap());
            let p = m.table.product(x, y).unwrap();
            if a + b > 4 {
                assert_eq!(*p, Product::OutOfWindow);
                continue;
            }
            let mut expect: Vec<(Label, u64)> = ((a - b).abs()..=a + b)
                .step_by(2)
                .map(|k| (m.label_of(&w(&[k])).unwrap(), 1))
                .collect();
            expect.sort();
            assert_eq!(p.known().unwrap(), expect.as_slice());
        }
    }
    validate_oracle(&m.table).unwrap();
}

#[test]
fn torus_window_is_addition() {
    let m = materialize_oracle(&torus(1), 2, 1).unwrap();
    assert_eq!(m.table.len(), 5);
    for a in -2..=2i64 {
        for b in -2..=2i64 {
            let (x, y) = (m.label_of(&w(&[a])).unwrap(), m.label_of(&w(&[b])).unwrap());
            match m.label_of(&w(&[a + b])) {
                Some(z) => assert_eq!(m.table.known(x, y).unwrap(), &[(z, 1)]),
                None => assert_eq!(m.table.known(x, y), None),
            }
        }
        let x = m.label_of(&w(&[a])).unwrap();
        assert_eq!(m.weight(m.table.dual(x)), &w(&[-a]));
    }
}

#[test]
fn window_sizes() {
    assert_eq!(materialize_oracle(&sl3(), 2, 0).unwrap().table.len(), 9);
    assert_eq!(materialize_oracle(&torus(2), 4, 0).unwrap().table.len(), 81);
    // PGL2 coordinates are normalized by the coroot content
    let pgl2 = crate::root_datum::pgl2();
    let m = materialize_oracle(&pgl2, 4, 0).unwrap();
    assert_eq!(m.table.len(), 5);
    let gl2 = crate::root_datum::gl2();
    let m = materialize_oracle(&gl2, 2, 0).unwrap();
    for p in &m.provenance {
        let c = p.to_i64s().unwrap();
        assert!(c[0] >= c[1] && c[0] - c[1] <= 2 && (c[0] + c[1]).abs() <= 2);
    }
    assert_eq!(m.provenance.len(), 8);
}

#[test]
fn provenance_reproduces_tensor_products() {
    for d in [sl3(), g2()] {
        let e = CharEngine::new(&d).unwrap();
        let m = materialize_with(&e, 3, 11).unwrap();
        for ((a, b), p) in m.table.products() {
            let truth = e.tensor_decompose(m.weight(a), m.weight(b)).unwrap();
            match p {
                Product::Known(terms) => {
                    assert_eq!(terms.len(), truth.len());
                    for (z, mult) in terms {
                        assert_eq!(truth.multiplicity(m.weight(*z)), (*mult).into());
                    }
                }
                Product::OutOfWindow => assert!(truth.labels().any(|nu| m.label_of(nu).is_none())),
            }
        }
    }
}

#[test]
fn every_fixture_window_validates() {
    for (name, d) in named_fixtures() {
        for b in 2..=4 {
            let m = materialize_oracle(&d, b, 3).unwrap();
            validate_oracle(&m.table).unwrap_or_else(|e| panic!("{name} B={b}: {e}"));
        }
    }
}

#[test]
fn text_round_trip_and_seed_determinism() {
    let m = materialize_oracle(&sl3(), 2, 42).unwrap();
    let text = m.table.to_text();
    assert!(text.starts_with("labels: "));
    let back = OracleTable::parse(&text, "mem").unwrap();
    assert_eq!(back, m.table);
    assert_eq!(back.to_text(), text);
    assert_eq!(materialize_oracle(&sl3(), 2, 42).unwrap().table.to_text(), text);
    assert_ne!(materialize_oracle(&sl3(), 2, 43).unwrap().table.to_text(), text);
    for l in m.table.labels() {
        assert_eq!(l.len(), 8);
    }
    assert!(text.lines().any(|l| l.ends_with(": ?")));
}

#[test]
fn collapsed_tables_are_rejected() {
    // a single nontrivial class whose square is nine copies of the unit
    let phi = "labels: e u\nunit: e\ndual: e e\ndual: u u\nprod e e : e*1\nprod e u : u*1\nprod u u : e*9\n";
    assert_eq!(reject_axiom(phi), "dual pairing");
    let phi2 = "labels: e u\nunit: e\ndual: e e\ndual: u u\nprod e e : e*1\nprod e u : u*1\nprod u u : u*9\n";
    assert_eq!(reject_axiom(phi2), "dual pairing");
    let idem = "labels: e u\nunit: e\ndual: e e\ndual: u u\nprod e e : e*1\nprod e u : u*1\nprod u u : e*1 u*1\n";
    OracleTable::parse(idem, "t").map(|t| validate_oracle(&t).unwrap()).unwrap();
    let idem = "labels: e u v\nunit: e\ndual: e e\ndual: u v\ndual: v u\nprod e e : e*1\nprod e u : u*1\nprod e v : v*1\n\
                prod u u : u*1\nprod u v : e*1\nprod v v : v*1\n";
    assert_eq!(reject_axiom(idem), "idempotent");
}

#[test]
fn structural_violations_are_named() {
    let base = "labels: e u\nunit: e\ndual: e e\ndual: u u\nprod e e : e*1\nprod e u : u*1\nprod u u : e*1\n";
    validate_oracle(&OracleTable::parse(base, "t").unwrap()).unwrap();
    assert_eq!(reject_axiom(&base.replace("prod e u : u*1", "prod e u : u*2")), "unit");
    assert_eq!(reject_axiom(&base.replace("dual: u u\n", "")), "dual involution");
    assert_eq!(reject_axiom(&base.replace("prod u u : e*1\n", "")), "completeness");
    let conflict = format!("{base}prod u e : u*2\n");
    assert!(matches!(
        OracleTable::parse(&conflict, "t"),
        Err(Error::InvalidOracle { axiom, .. }) if axiom == "symmetry"
    ));
}

#[test]
fn associativity_violation_detected() {
    let m = materialize_oracle(&sl2(), 4, 5).unwrap();
    let mut t = m.table.clone();
    let (one, two, zero) = (
        m.label_of(&w(&[1])).unwrap(),
        m.label_of(&w(&[2])).unwrap(),
        m.label_of(&w(&[0])).unwrap(),
    );
    // 1⊗1 = 2 + 0 becomes 2 + 2 + 0
    let mut p = vec![(zero, 1), (two, 2)];
    p.sort();
    t.set_product(one, one, Product::Known(p));
    let e = validate_oracle(&t).unwrap_err();
    assert!(matches!(e, Error::InvalidOracle { ref axiom, .. } if axiom == "associativity"), "{e}");
}

#[test]
fn parse_errors_carry_positions() {
    let cases = [
        ("labels: a b\nunit: a\nprod a b ; b*1\n", 3, 10),
        ("labels: a b\nunit: c\n", 2, 7),
        ("labels: a b\nunit: a\nprod a b : b*x\n", 3, 14),
        ("labels: a b\nunit: a\nfrob\n", 3, 1),
        ("unit: a\n", 2, 1),
        ("labels: a a\n", 1, 11),
    ];
    for (text, line, column) in cases {
        match OracleTable::parse(text, "f.oracle") {
            Err(Error::Parse { line: l, column: c, ref origin, .. }) => {
                assert_eq!((l, c), (line, column), "{text:?}");
                assert_eq!(origin, "f.oracle");
            }
            other => panic!("{text:?}: {other:?}"),
        }
    }
}
