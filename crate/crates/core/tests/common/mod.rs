//! Shared fixtures and independent oracles for the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;

use leavitt::{Algebra, EdgeId, Field, Graph, Monomial, Path, Specialization, VertexId, VertexSet};
use rand::rngs::StdRng;
use rand::Rng;

pub const CORPUS: [&str; 7] = ["loop", "toeplitz", "rose2", "2cycle", "line", "y", "g3"];

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

pub fn graph_path(name: &str) -> PathBuf {
    data_dir().join("graphs").join(format!("{name}.json"))
}

pub fn gamma_path(name: &str) -> PathBuf {
    data_dir().join("gamma").join(format!("{name}.json"))
}

pub fn load_graph(name: &str) -> Graph {
    Graph::from_json(&fs::read_to_string(graph_path(name)).unwrap()).unwrap()
}

pub fn regular(name: &str) -> Algebra {
    let g = load_graph(name);
    let gamma = Specialization::construct_regular(&g);
    Algebra::new(g, gamma, Field::Rational).unwrap()
}

/// Toeplitz graph with the specialization from `data/gamma/<which>.json`.
pub fn toeplitz(which: &str) -> Algebra {
    let g = load_graph("toeplitz");
    let gamma = Specialization::from_json(&g, &fs::read_to_string(gamma_path(which)).unwrap()).unwrap();
    Algebra::new(g, gamma, Field::Rational).unwrap()
}

/// Every corpus graph with its regular specialization, plus both Toeplitz
/// specializations.
pub fn corpus_algebras() -> Vec<(String, Algebra)> {
    let mut out: Vec<(String, Algebra)> = CORPUS.iter().map(|n| (n.to_string(), regular(n))).collect();
    out.push(("toeplitz/a".into(), toeplitz("toeplitz_a")));
    out.push(("toeplitz/b".into(), toeplitz("toeplitz_b")));
    out
}

pub fn set(g: &Graph, names: &[&str]) -> VertexSet {
    g.vertex_set(names.iter().copied()).unwrap()
}

/// Minimal nonempty hereditary subsets by power-set enumeration, with the
/// hereditary test written out directly on the edge list.
pub fn brute_force_frame(g: &Graph) -> BTreeSet<VertexSet> {
    let n = g.vertex_count();
    let verts: Vec<VertexId> = g.vertices().collect();
    let hereditary: Vec<VertexSet> = (1u32..(1 << n))
        .map(|mask| {
            (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| verts[i])
                .collect::<VertexSet>()
        })
        .filter(|s| g.edges().all(|e| !s.contains(&g.source(e)) || s.contains(&g.range(e))))
        .collect();
    hereditary
        .iter()
        .filter(|s| !hereditary.iter().any(|t| t != *s && t.is_subset(s)))
        .cloned()
        .collect()
}

pub fn random_graph(rng: &mut StdRng, max_vertices: usize) -> Graph {
    let n = rng.gen_range(1..=max_vertices);
    let m = rng.gen_range(0..=2 * n);
    let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let edges: Vec<(String, String, String)> = (0..m)
        .map(|j| {
            let s = rng.gen_range(0..n);
            let d = rng.gen_range(0..n);
            (format!("e{j}"), vertices[s].clone(), vertices[d].clone())
        })
        .collect();
    Graph::new(vertices.clone(), edges).unwrap()
}

/// Random walk of at most `len` edges forward from `v`.
pub fn walk_forward(rng: &mut StdRng, g: &Graph, v: VertexId, len: usize) -> Path {
    let mut p = g.path_from(v);
    for _ in 0..len {
        let out = g.out_edges(p.end());
        if out.is_empty() {
            break;
        }
        let e = out[rng.gen_range(0..out.len())];
        p = p.try_push(g, e).unwrap();
    }
    p
}

/// Random path of at most `len` edges ending at `v`.
pub fn walk_backward(rng: &mut StdRng, g: &Graph, v: VertexId, len: usize) -> Path {
    let mut rev: Vec<EdgeId> = Vec::new();
    let mut cur = v;
    for _ in 0..len {
        let inc = g.in_edges(cur);
        if inc.is_empty() {
            break;
        }
        let e = inc[rng.gen_range(0..inc.len())];
        rev.push(e);
        cur = g.source(e);
    }
    if rev.is_empty() {
        return g.path_from(v);
    }
    rev.reverse();
    g.path(&rev).unwrap()
}

/// A random well-formed monomial `pq*` with `l(p), l(q) ≤ max_len`; not
/// necessarily basic.
pub fn random_monomial(rng: &mut StdRng, g: &Graph, max_len: usize) -> Monomial {
    let v = g.vertices().nth(rng.gen_range(0..g.vertex_count())).unwrap();
    let (lp, lq) = (rng.gen_range(0..=max_len), rng.gen_range(0..=max_len));
    let p = walk_backward(rng, g, v, lp);
    let q = walk_backward(rng, g, v, lq);
    Monomial::new(g, p, q).unwrap()
}

pub fn random_basic(rng: &mut StdRng, alg: &Algebra, max_len: usize) -> Monomial {
    loop {
        let m = random_monomial(rng, alg.graph(), max_len);
        if alg.is_basic(&m) {
            return m;
        }
    }
}

/// All basic monomials with `l(p)+l(q) ≤ max_len`.
pub fn basic_monomials(alg: &Algebra, max_len: usize) -> Vec<Monomial> {
    let g = alg.graph();
    let mut paths = Vec::new();
    let mut frontier: Vec<Path> = g.vertices().map(|v| g.path_from(v)).collect();
    for _ in 0..=max_len {
        let mut next = Vec::new();
        for p in &frontier {
            for &e in g.out_edges(p.end()) {
                next.push(p.clone().try_push(g, e).unwrap());
            }
        }
        paths.append(&mut frontier);
        frontier = next;
    }
    let mut out = Vec::new();
    for p in &paths {
        for q in paths
            .iter()
            .filter(|q| q.end() == p.end() && p.len() + q.len() <= max_len)
        {
            let m = Monomial::new(g, p.clone(), q.clone()).unwrap();
            if alg.is_basic(&m) {
                out.push(m);
            }
        }
    }
    out
}

pub fn repo_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}
