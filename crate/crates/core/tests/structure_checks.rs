mod common;

use common::*;
use leavitt::completion::{arrival_paths, e_of, e_vertex};
use leavitt::structure::{
    check_central_idempotent, check_collapse, check_component_orthogonality, check_partition,
    check_special_conjugation, check_vertex_idempotents, decompose, double_perp, in_ideal, verify, vertex_recovery,
    Status, Suite, Verdict,
};
use leavitt::{parse, Algebra, Monomial, Order, TruncatedElement};

fn passes(v: &Verdict) -> bool {
    matches!(v.status, Status::Pass | Status::SampledPass)
}

fn k(n: i64) -> Order {
    Order::int(n)
}

#[test]
fn arrival_path_examples() {
    let alg = toeplitz("toeplitz_a");
    let g = alg.graph();
    let got: Vec<String> = arrival_paths(g, &set(g, &["w"]), 3)
        .unwrap()
        .iter()
        .map(|p| g.fmt_path(p))
        .collect();
    assert_eq!(got, ["w", "f", "e f", "e e f"]);
    assert_eq!(arrival_paths(g, &g.all_vertices(), 5).unwrap().len(), 2);
    let y = load_graph("y");
    let got: Vec<String> = arrival_paths(&y, &set(&y, &["b"]), 5)
        .unwrap()
        .iter()
        .map(|p| y.fmt_path(p))
        .collect();
    assert_eq!(got, ["b", "x"]);
}

#[test]
fn idempotent_examples() {
    let lp = regular("loop");
    let e = e_of(&lp, &lp.graph().all_vertices(), k(5)).unwrap();
    assert!(e.is_exact());
    assert_eq!(e.body(), &lp.one());

    let b = toeplitz("toeplitz_b");
    let e = e_of(&b, &set(b.graph(), &["w"]), k(2)).unwrap();
    assert_eq!(e.body(), &parse(&b, "w + f f* + e f f* e*").unwrap());
    assert_eq!(e.body().to_string(), "v + w - e e e* e*");
    let v = b.graph().vertex("v").unwrap();
    let w = b.graph().vertex("w").unwrap();
    assert_eq!(
        e_vertex(&b, v, k(4)).unwrap(),
        TruncatedElement::exact(parse(&b, "f f*").unwrap())
    );
    assert_eq!(e_vertex(&b, w, k(4)).unwrap(), TruncatedElement::exact(b.vertex(w)));

    let a = toeplitz("toeplitz_a");
    let ev = e_vertex(&a, a.graph().vertex("v").unwrap(), k(6)).unwrap();
    assert_eq!(ev.body().to_string(), "v - f f* - e f f* e*");
    for m in ev.body().monomials() {
        assert_eq!(m.degree(), 0);
    }
    assert_eq!(ev.body().star(), ev.body().clone());
}

#[test]
fn truncation_example() {
    let a = toeplitz("toeplitz_a");
    let x = parse(&a, "v - f f* - e f f* e*").unwrap();
    assert_eq!(TruncatedElement::truncate(&x, k(4)).body().to_string(), "v - f f*");
    assert!(TruncatedElement::truncate(&a.zero(), k(5)).body().is_zero());
}

#[test]
fn truncated_product_precision_examples() {
    let a = toeplitz("toeplitz_a");
    let x = TruncatedElement::from_parts(parse(&a, "v").unwrap(), k(9));
    let v = TruncatedElement::exact(a.vertex(a.graph().vertex("v").unwrap()));
    assert!(x.try_mul(&v).unwrap().prec() >= k(3));
    let y = TruncatedElement::from_parts(parse(&a, "f f*").unwrap(), k(3));
    assert!(y.try_mul(&y).unwrap().prec() >= k(0));
    let exact = TruncatedElement::exact(a.one());
    assert!(exact.try_mul(&exact).unwrap().is_exact());
}

#[test]
fn congruence_needs_enough_precision() {
    let a = toeplitz("toeplitz_a");
    let x = TruncatedElement::from_parts(a.one(), k(2));
    assert!(x.equal_mod(&x, k(3)).is_err());
    assert!(x.equal_mod(&x, k(2)).unwrap());
}

#[test]
fn central_idempotent_examples() {
    let lp = regular("loop");
    let v = check_central_idempotent(&lp, &lp.graph().all_vertices(), k(4)).unwrap();
    assert_eq!(v.status, Status::Pass);
    assert_eq!(v.residual_order, Some(Order::Infinite));
    for gamma in ["toeplitz_a", "toeplitz_b"] {
        let alg = toeplitz(gamma);
        let v = check_central_idempotent(&alg, &set(alg.graph(), &["w"]), k(4)).unwrap();
        assert_eq!(v.status, Status::Pass, "{gamma}: {}", v.render());
    }
    let g3 = regular("g3");
    assert!(check_central_idempotent(&g3, &set(g3.graph(), &["a"]), k(4)).is_err());
}

#[test]
fn partition_examples() {
    let g3 = regular("g3");
    let v = check_partition(&g3, &set(g3.graph(), &["b"]), k(4)).unwrap();
    assert_eq!(v.status, Status::Pass);
    let v = check_partition(&g3, &g3.graph().all_vertices(), k(4)).unwrap();
    assert_eq!(v.status, Status::Pass);
    let a = toeplitz("toeplitz_a");
    let v = check_partition(&a, &set(a.graph(), &["w"]), k(4)).unwrap();
    assert_eq!(v.status, Status::Refused);
    assert!(v.note.unwrap().contains("frame-finite"));
}

#[test]
fn collapse_examples() {
    let b = toeplitz("toeplitz_b");
    let g = b.graph();
    let v = check_collapse(&b, &set(g, &["w"]), &g.all_vertices(), k(4)).unwrap();
    assert_eq!(v.status, Status::Pass, "{}", v.render());
    let v = check_collapse(&b, &set(g, &["w"]), &set(g, &["w"]), k(4)).unwrap();
    assert_eq!(v.status, Status::Pass);
    let g3 = regular("g3");
    let w = set(g3.graph(), &["b"]);
    let pp = double_perp(g3.graph(), &w).unwrap();
    assert_eq!(pp, set(g3.graph(), &["a", "b"]));
    assert_eq!(check_collapse(&g3, &w, &pp, k(4)).unwrap().status, Status::Pass);
    assert!(check_collapse(&g3, &set(g3.graph(), &["c"]), &g3.graph().all_vertices(), k(4)).is_err());
}

#[test]
fn vertex_idempotent_examples() {
    for gamma in ["toeplitz_a", "toeplitz_b"] {
        let alg = toeplitz(gamma);
        for v in [
            check_vertex_idempotents(&alg, k(6)).unwrap(),
            check_special_conjugation(&alg, k(6)).unwrap(),
            check_component_orthogonality(&alg, k(6), 4).unwrap(),
        ] {
            assert!(passes(&v), "{gamma}: {}", v.render());
        }
    }
    let a = toeplitz("toeplitz_a");
    let ev = e_vertex(&a, a.graph().vertex("v").unwrap(), k(6)).unwrap();
    let f = TruncatedElement::exact(parse(&a, "f").unwrap());
    let zero = TruncatedElement::exact(a.zero());
    let prod = ev.try_mul(&f).unwrap();
    assert!(prod.equal_mod(&zero, prod.prec()).unwrap());
}

#[test]
fn vertex_recovery_examples() {
    for (name, v) in [("2cycle", "a"), ("2cycle", "b"), ("rose2", "v")] {
        let alg = regular(name);
        let w = alg.graph().vertex(v).unwrap();
        let verdict = vertex_recovery(&alg, w, k(4)).unwrap();
        assert_eq!(verdict.status, Status::Pass, "{name} {v}");
    }
    let line = regular("line");
    let c = line.graph().vertex("c").unwrap();
    assert_eq!(vertex_recovery(&line, c, k(4)).unwrap().status, Status::Refused);
    let a = line.graph().vertex("a").unwrap();
    assert!(vertex_recovery(&line, a, k(4)).is_err());
}

#[test]
fn decomposition_examples() {
    let y = regular("y");
    let report = decompose(&y, k(4)).unwrap();
    assert!(!report.failed());
    let g = y.graph();
    let assignment: Vec<(String, String)> = report
        .components
        .iter()
        .zip(&report.assignment)
        .map(|(s, hits)| {
            assert_eq!(hits.len(), 1);
            (g.fmt_set(s), g.fmt_set(&report.frame[hits[0]]))
        })
        .collect();
    assert_eq!(
        assignment,
        [
            ("{a,b}".to_string(), "{b}".to_string()),
            ("{c}".to_string(), "{c}".to_string())
        ]
    );
    let lp = regular("loop");
    let report = decompose(&lp, k(4)).unwrap();
    assert_eq!((report.frame.len(), report.components.len()), (1, 1));
    let b = toeplitz("toeplitz_b");
    let report = decompose(&b, k(4)).unwrap();
    assert_eq!((report.frame.len(), report.components.len()), (1, 1));
    assert!(!report.failed());
    assert!(decompose(&toeplitz("toeplitz_a"), k(4)).is_err());
}

#[test]
fn ideal_membership() {
    let y = regular("y");
    let g = y.graph();
    let w = set(g, &["b"]);
    let x = g.parse_path("x").unwrap();
    let m = Monomial::new(g, x.clone(), x).unwrap();
    assert!(in_ideal(&w, &m));
    assert!(!in_ideal(&w, &Monomial::vertex(g.vertex("a").unwrap())));
}

fn suite_residuals(alg: &Algebra, prec: Order) -> Vec<(String, Status, Option<Order>)> {
    verify(alg, Suite::All, prec, None)
        .unwrap()
        .checks
        .into_iter()
        .map(|v| (v.name, v.status, v.residual_order))
        .collect()
}

/// A check passing at `K` passes at every lower precision, and doubling `K`
/// at least doubles the certified residual.
#[test]
fn verdicts_are_monotone_and_residuals_grow() {
    for (name, alg) in corpus_algebras() {
        let at3 = suite_residuals(&alg, k(3));
        let at6 = suite_residuals(&alg, k(6));
        for ((n3, s3, r3), (n6, s6, r6)) in at3.iter().zip(&at6) {
            assert_eq!(n3, n6);
            if s6 == &Status::Pass {
                assert!(matches!(s3, Status::Pass), "{name}: {n3}");
            }
            if let (Some(Order::Finite(a)), Some(b)) = (r3, r6) {
                assert!(*b >= Order::Finite(a * 2), "{name}: {n3} {r3:?} -> {r6:?}");
            }
        }
    }
}

#[test]
fn verify_passes_on_the_regular_corpus() {
    for name in CORPUS {
        let alg = regular(name);
        let report = verify(&alg, Suite::All, k(4), None).unwrap();
        assert!(!report.failed(), "{name}\n{}", report.render());
        assert_eq!(report.count(Status::Refused), 0, "{name}");
    }
}
