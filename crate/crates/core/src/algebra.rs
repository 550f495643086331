//! Exact arithmetic in the Leavitt path algebra `L(Γ)`.
//!
//! Elements are finite linear combinations of monomials `pq*` with
//! `r(p) = r(q)`, always held in normal form with respect to a fixed
//! specialization γ: no monomial has both paths ending in the same special
//! edge. Normal forms come from rewriting with the CK2 relation at special
//! edges,
//!
//! ```text
//! p₁c (q₁c)*  →  p₁q₁* − Σ_{e ≠ c, s(e) = s(c)} p₁e (q₁e)*      (c special)
//! ```
//!
//! and products of monomials follow from `e*f = δ_{e,f} r(e)`: `p*q` is
//! nonzero only when one path continues the other.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, Path, VertexId};
use crate::scalar::{Field, Scalar};
use crate::specialization::Specialization;

/// A monomial `pq*` with `r(p) = r(q)`. A vertex `v` is `(v, v)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    p: Path,
    q: Path,
}

impl Monomial {
    pub fn new(g: &Graph, p: Path, q: Path) -> Result<Self> {
        if p.end() != q.end() {
            return Err(Error::RangeMismatch(
                g.vertex_name(p.end()).to_string(),
                g.vertex_name(q.end()).to_string(),
            ));
        }
        Ok(Monomial { p, q })
    }

    pub(crate) fn new_unchecked(p: Path, q: Path) -> Self {
        debug_assert_eq!(p.end(), q.end());
        Monomial { p, q }
    }

    pub fn vertex(v: VertexId) -> Self {
        Monomial {
            p: Path::vertex(v),
            q: Path::vertex(v),
        }
    }

    /// The monomial `e` (that is, `e · r(e)*`).
    pub fn edge(g: &Graph, e: EdgeId) -> Self {
        let mut p = Path::vertex(g.source(e));
        p.push_unchecked(g, e);
        Monomial {
            p,
            q: Path::vertex(g.range(e)),
        }
    }

    /// The monomial `e*`.
    pub fn ghost(g: &Graph, e: EdgeId) -> Self {
        Monomial::edge(g, e).star()
    }

    /// `pp*` for a path `p`.
    pub fn projection(p: Path) -> Self {
        Monomial { q: p.clone(), p }
    }

    pub fn p(&self) -> &Path {
        &self.p
    }

    pub fn q(&self) -> &Path {
        &self.q
    }

    /// `deg(pq*) = l(p) − l(q)`.
    pub fn degree(&self) -> i64 {
        self.p.len() as i64 - self.q.len() as i64
    }

    /// `l(p) + l(q)`.
    pub fn total_length(&self) -> usize {
        self.p.len() + self.q.len()
    }

    pub fn is_vertex(&self) -> bool {
        self.p.is_vertex() && self.q.is_vertex()
    }

    /// The involution: `(pq*)* = qp*`.
    pub fn star(&self) -> Monomial {
        Monomial {
            p: self.q.clone(),
            q: self.p.clone(),
        }
    }

    /// Left and right idempotent supports: `s(p) · pq* · s(q) = pq*`.
    pub fn left_vertex(&self) -> VertexId {
        self.p.start()
    }

    pub fn right_vertex(&self) -> VertexId {
        self.q.start()
    }

    /// The common range `r(p) = r(q)`.
    pub fn range(&self) -> VertexId {
        self.p.end()
    }
}

/// `(deg, l(p)+l(q), edges of p, edges of q, s(p), s(q))`. Edge ids follow
/// name order, so this is the canonical printing order.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.total_length().cmp(&other.total_length()))
            .then_with(|| self.p.edges().cmp(other.p.edges()))
            .then_with(|| self.q.edges().cmp(other.q.edges()))
            .then_with(|| self.p.start().cmp(&other.p.start()))
            .then_with(|| self.q.start().cmp(&other.q.start()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The product of two monomials, which is a single monomial or zero:
/// `(p,q)·(u,w) = (p·u', w)` when `u = q·u'`, `(p, w·q')` when `q = u·q'`.
pub fn monomial_product(a: &Monomial, b: &Monomial) -> Option<Monomial> {
    if let Some(rest) = a.q.strip_prefix(&b.p) {
        return Some(Monomial::new_unchecked(a.p.concat(&rest), b.q.clone()));
    }
    if let Some(rest) = b.p.strip_prefix(&a.q) {
        return Some(Monomial::new_unchecked(a.p.clone(), b.q.concat(&rest)));
    }
    None
}

struct Inner {
    graph: Graph,
    gamma: Specialization,
    field: Field,
}

/// A Leavitt path algebra with a fixed specialization and coefficient field.
///
/// Cheap to clone; every [`Element`] carries a handle to its algebra.
#[derive(Clone)]
pub struct Algebra {
    inner: Arc<Inner>,
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Algebra")
            .field("graph", &self.inner.graph.to_string())
            .field("gamma", &self.inner.gamma.to_json(&self.inner.graph))
            .field("field", &self.inner.field)
            .finish()
    }
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.field == other.inner.field
                && self.inner.gamma == other.inner.gamma
                && self.inner.graph == other.inner.graph)
    }
}

impl Eq for Algebra {}

impl Algebra {
    /// `gamma` must have been validated against `graph`; it is re-checked here.
    pub fn new(graph: Graph, gamma: Specialization, field: Field) -> Result<Self> {
        let table: std::collections::BTreeMap<_, _> = graph
            .vertices()
            .filter_map(|v| gamma.special_edge(v).map(|e| (v, e)))
            .collect();
        let checked = Specialization::new(&graph, &table)?;
        if checked != gamma {
            return Err(Error::InvalidSpecialization(
                "specialization does not match the graph".into(),
            ));
        }
        Ok(Algebra {
            inner: Arc::new(Inner { graph, gamma, field }),
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.inner.graph
    }

    pub fn gamma(&self) -> &Specialization {
        &self.inner.gamma
    }

    pub fn field(&self) -> Field {
        self.inner.field
    }

    pub(crate) fn check_same(&self, other: &Algebra) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    pub fn zero(&self) -> Element {
        Element {
            alg: self.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// `1 = Σ_{v ∈ V} v`.
    pub fn one(&self) -> Element {
        self.element(
            self.graph()
                .vertices()
                .map(|v| (Monomial::vertex(v), self.field().one())),
        )
    }

    pub fn vertex(&self, v: VertexId) -> Element {
        self.monomial(Monomial::vertex(v))
    }

    pub fn edge(&self, e: EdgeId) -> Element {
        self.monomial(Monomial::edge(self.graph(), e))
    }

    pub fn ghost(&self, e: EdgeId) -> Element {
        self.monomial(Monomial::ghost(self.graph(), e))
    }

    /// The normal form of a single monomial.
    pub fn monomial(&self, m: Monomial) -> Element {
        self.element(std::iter::once((m, self.field().one())))
    }

    /// The normal form of a (not necessarily reduced) linear combination.
    pub fn element<I>(&self, terms: I) -> Element
    where
        I: IntoIterator<Item = (Monomial, Scalar)>,
    {
        let mut acc = Accumulator::default();
        for (m, c) in terms {
            if !c.is_zero() {
                self.reduce_into(m, c, &mut acc);
            }
        }
        acc.finish(self)
    }

    /// The generators `V ∪ E ∪ E*`, each as an element.
    pub fn generators(&self) -> Vec<Element> {
        let g = self.graph();
        g.vertices()
            .map(|v| self.vertex(v))
            .chain(g.edges().map(|e| self.edge(e)))
            .chain(g.edges().map(|e| self.ghost(e)))
            .collect()
    }

    /// True when `pq*` lies in the basis `B(γ)`.
    pub fn is_basic(&self, m: &Monomial) -> bool {
        match (m.p.last_edge(), m.q.last_edge()) {
            (Some(a), Some(b)) => a != b || !self.gamma().is_special(self.graph(), a),
            _ => true,
        }
    }

    /// One rewriting step on `m`, if it is reducible: the list of monomials
    /// with signs that replace it.
    pub fn rewrite_step(&self, m: &Monomial) -> Option<Vec<(Monomial, bool)>> {
        if self.is_basic(m) {
            return None;
        }
        let g = self.graph();
        let (mut p, mut q) = (m.p.clone(), m.q.clone());
        let c = p.pop(g).expect("reducible monomials have edges");
        q.pop(g);
        let mut out = Vec::with_capacity(g.out_edges(p.end()).len());
        for &e in g.out_edges(p.end()).iter().filter(|&&e| e != c) {
            let (mut pe, mut qe) = (p.clone(), q.clone());
            pe.push_unchecked(g, e);
            qe.push_unchecked(g, e);
            out.push((Monomial::new_unchecked(pe, qe), false));
        }
        out.push((Monomial::new_unchecked(p, q), true));
        Some(out)
    }

    /// Rewrites `c · m` all the way to normal form and adds it to `acc`.
    ///
    /// Only the ends of `p` and `q` are ever rewritten, so the full reduction
    /// strips the common special suffix one edge at a time; the side terms
    /// end in non-special edges and are already basic.
    fn reduce_into(&self, m: Monomial, c: Scalar, acc: &mut Accumulator) {
        let g = self.graph();
        let gamma = self.gamma();
        let Monomial { mut p, mut q } = m;
        let neg = -&c;
        loop {
            match (p.last_edge(), q.last_edge()) {
                (Some(a), Some(b)) if a == b && gamma.is_special(g, a) => {
                    p.pop(g);
                    q.pop(g);
                    for &e in g.out_edges(p.end()).iter().filter(|&&e| e != a) {
                        let (mut pe, mut qe) = (p.clone(), q.clone());
                        pe.push_unchecked(g, e);
                        qe.push_unchecked(g, e);
                        acc.add(Monomial::new_unchecked(pe, qe), &neg);
                    }
                }
                _ => {
                    acc.add(Monomial::new_unchecked(p, q), &c);
                    return;
                }
            }
        }
    }

    /// Normal form by single rewriting steps, with `pick(n)` choosing which of
    /// the `n` currently reducible monomials to rewrite next. Agrees with
    /// [`Algebra::element`] whatever the choices; used to test confluence.
    pub fn normal_form_stepwise<I, F>(&self, terms: I, mut pick: F) -> Element
    where
        I: IntoIterator<Item = (Monomial, Scalar)>,
        F: FnMut(usize) -> usize,
    {
        let mut current: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        let add = |map: &mut BTreeMap<Monomial, Scalar>, m: Monomial, c: &Scalar| {
            let entry = map.entry(m).or_insert_with(|| self.field().zero());
            entry.add_assign_ref(c);
        };
        for (m, c) in terms {
            add(&mut current, m, &c);
        }
        current.retain(|_, c| !c.is_zero());
        loop {
            let reducible: Vec<Monomial> = current.keys().filter(|m| !self.is_basic(m)).cloned().collect();
            if reducible.is_empty() {
                break;
            }
            let m = reducible[pick(reducible.len()) % reducible.len()].clone();
            let c = current.remove(&m).expect("picked from current terms");
            let neg = -&c;
            for (r, positive) in self.rewrite_step(&m).expect("picked a reducible monomial") {
                add(&mut current, r, if positive { &c } else { &neg });
            }
            current.retain(|_, c| !c.is_zero());
        }
        Element {
            alg: self.clone(),
            terms: current,
        }
    }
}

#[derive(Default)]
struct Accumulator {
    terms: HashMap<Monomial, Scalar>,
}

impl Accumulator {
    fn add(&mut self, m: Monomial, c: &Scalar) {
        match self.terms.get_mut(&m) {
            Some(x) => x.add_assign_ref(c),
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    fn finish(self, alg: &Algebra) -> Element {
        Element {
            alg: alg.clone(),
            terms: self.terms.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

/// An element of `L(Γ)` in normal form.
#[derive(Clone)]
pub struct Element {
    alg: Algebra,
    terms: BTreeMap<Monomial, Scalar>,
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.alg == other.alg && self.terms == other.terms
    }
}

impl Eq for Element {}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element({})", self)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::expr::render(self))
    }
}

impl Element {
    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl ExactSizeIterator<Item = (&Monomial, &Scalar)> + Clone {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl ExactSizeIterator<Item = &Monomial> + Clone {
        self.terms.keys()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&Scalar> {
        self.terms.get(m)
    }

    pub fn try_add(&self, other: &Element) -> Result<Element> {
        self.alg.check_same(&other.alg)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            match terms.get_mut(m) {
                Some(x) => {
                    x.add_assign_ref(c);
                    if x.is_zero() {
                        terms.remove(m);
                    }
                }
                None => {
                    terms.insert(m.clone(), c.clone());
                }
            }
        }
        Ok(Element {
            alg: self.alg.clone(),
            terms,
        })
    }

    pub fn try_sub(&self, other: &Element) -> Result<Element> {
        self.try_add(&-other)
    }

    pub fn scale(&self, c: &Scalar) -> Element {
        assert_eq!(c.field(), self.alg.field(), "scalar from a different field");
        if c.is_zero() {
            return self.alg.zero();
        }
        Element {
            alg: self.alg.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    /// The product, bilinearly extended from monomials and normalized.
    pub fn try_mul(&self, other: &Element) -> Result<Element> {
        self.alg.check_same(&other.alg)?;
        let mut acc = Accumulator::default();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                if let Some(m) = monomial_product(a, b) {
                    self.alg.reduce_into(m, x * y, &mut acc);
                }
            }
        }
        Ok(acc.finish(&self.alg))
    }

    /// The involution `*`: swaps `p` and `q` in every term. `B(γ)` is closed
    /// under the swap, so the result is already in normal form.
    pub fn star(&self) -> Element {
        Element {
            alg: self.alg.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.star(), c.clone())).collect(),
        }
    }

    /// Homogeneous components by degree `l(p) − l(q)`.
    pub fn degree_split(&self) -> BTreeMap<i64, Element> {
        let mut out: BTreeMap<i64, Element> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.degree())
                .or_insert_with(|| self.alg.zero())
                .terms
                .insert(m.clone(), c.clone());
        }
        out
    }

    /// Keeps only the terms accepted by `keep`.
    pub fn filter<F>(&self, mut keep: F) -> Element
    where
        F: FnMut(&Monomial, &Scalar) -> bool,
    {
        Element {
            alg: self.alg.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, c)| keep(m, c))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }
}

impl std::ops::Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        Element {
            alg: self.alg.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! element_op {
    ($tr:ident, $method:ident, $inner:ident) => {
        /// Panics when the operands belong to different algebras; use the
        /// `try_` method to get an error instead.
        impl std::ops::$tr for &Element {
            type Output = Element;
            fn $method(self, rhs: &Element) -> Element {
                self.$inner(rhs).expect("operands from the same algebra")
            }
        }
    };
}

element_op!(Add, add, try_add);
element_op!(Sub, sub, try_sub);
element_op!(Mul, mul, try_mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn toeplitz(special: &str) -> Algebra {
        let g = Graph::new(
            ["v", "w"],
            [
                ("e".into(), "v".into(), "v".into()),
                ("f".into(), "v".into(), "w".into()),
            ],
        )
        .unwrap();
        let gamma = Specialization::from_names(&g, [("v", special)]).unwrap();
        Algebra::new(g, gamma, Field::Rational).unwrap()
    }

    fn mono(alg: &Algebra, p: &str, q: &str) -> Monomial {
        let g = alg.graph();
        Monomial::new(g, g.parse_path(p).unwrap(), g.parse_path(q).unwrap()).unwrap()
    }

    #[test]
    fn monomial_product_examples() {
        let alg = toeplitz("e");
        let ff = mono(&alg, "f", "f");
        assert_eq!(monomial_product(&ff, &ff), Some(ff.clone()));
        let a = mono(&alg, "f", "e f");
        let b = mono(&alg, "e", "v");
        assert_eq!(monomial_product(&a, &b), Some(ff.clone()));
        let ee = mono(&alg, "e", "e");
        assert_eq!(monomial_product(&ff, &ee), None);
    }

    #[test]
    fn ill_formed_monomial_is_rejected() {
        let alg = toeplitz("e");
        let g = alg.graph();
        let r = Monomial::new(g, g.parse_path("e").unwrap(), g.parse_path("f").unwrap());
        assert!(matches!(r, Err(Error::RangeMismatch(_, _))));
    }

    #[test]
    fn normal_form_examples() {
        let alg = toeplitz("e");
        assert_eq!(alg.monomial(mono(&alg, "e", "e")).to_string(), "v - f f*");
        assert_eq!(alg.monomial(mono(&alg, "f", "f")).to_string(), "f f*");
        assert_eq!(
            alg.monomial(mono(&alg, "e e", "e e")).to_string(),
            "v - f f* - e f f* e*"
        );
    }

    #[test]
    fn idempotent_and_identity() {
        let alg = toeplitz("e");
        let x = alg.monomial(mono(&alg, "e", "e"));
        assert_eq!(&x * &x, x);
        let one = alg.one();
        assert_eq!(&x * &one, x);
        assert_eq!(&one * &x, x);
    }

    #[test]
    fn involution_examples() {
        let alg = toeplitz("f");
        let m = mono(&alg, "f", "e f");
        assert_eq!(m.star(), mono(&alg, "e f", "f"));
        let v = alg.vertex(alg.graph().vertex("v").unwrap());
        assert_eq!(v.star(), v);
    }

    #[test]
    fn degree_split_example() {
        let alg = toeplitz("e");
        let a = parse(&alg, "v + e + f*").unwrap();
        let parts = a.degree_split();
        let shown: Vec<(i64, String)> = parts.iter().map(|(d, x)| (*d, x.to_string())).collect();
        assert_eq!(
            shown,
            [(-1, "f*".to_string()), (0, "v".to_string()), (1, "e".to_string())]
        );
    }

    #[test]
    fn relations_hold() {
        for special in ["e", "f"] {
            let alg = toeplitz(special);
            let g = alg.graph().clone();
            for e in g.edges() {
                for f in g.edges() {
                    let lhs = &alg.ghost(e) * &alg.edge(f);
                    let rhs = if e == f { alg.vertex(g.range(e)) } else { alg.zero() };
                    assert_eq!(lhs, rhs);
                }
                let se = &alg.vertex(g.source(e)) * &alg.edge(e);
                let er = &alg.edge(e) * &alg.vertex(g.range(e));
                assert_eq!(se, alg.edge(e));
                assert_eq!(er, alg.edge(e));
            }
            for v in g.vertices().filter(|&v| !g.is_sink(v)) {
                let sum = g
                    .out_edges(v)
                    .iter()
                    .fold(alg.zero(), |acc, &e| &acc + &(&alg.edge(e) * &alg.ghost(e)));
                assert_eq!(sum, alg.vertex(v));
            }
            for v in g.vertices() {
                for w in g.vertices() {
                    let prod = &alg.vertex(v) * &alg.vertex(w);
                    assert_eq!(prod, if v == w { alg.vertex(v) } else { alg.zero() });
                }
            }
        }
    }

    #[test]
    fn stepwise_matches_direct() {
        let alg = toeplitz("e");
        let m = mono(&alg, "e e e", "e e e");
        let direct = alg.monomial(m.clone());
        let mut k = 0usize;
        let stepwise = alg.normal_form_stepwise([(m, alg.field().one())], |n| {
            k += 7;
            k % n
        });
        assert_eq!(direct, stepwise);
    }

    #[test]
    fn algebra_mismatch_is_an_error() {
        let a = toeplitz("e");
        let b = toeplitz("f");
        assert!(matches!(a.one().try_mul(&b.one()), Err(Error::AlgebraMismatch)));
        assert_eq!(toeplitz("e"), a);
    }
}
