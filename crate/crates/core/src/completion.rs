//! Truncated arithmetic in the graded completion.
//!
//! A [`TruncatedElement`] is a finite normal-form body together with a
//! precision `K`: the true value minus the body lies in the closure of `V_K`.
//! Arithmetic propagates precision with [`product_precision`], and equality is
//! only ever decided modulo `V_K`, allowing one unit of slack for terms that
//! rewriting pushes down a level.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::Ratio;

use crate::algebra::{Algebra, Element, Monomial};
use crate::error::{Error, Result};
use crate::filtration::{
    lowest_term, min_ord, ord, product_precision, square_precision, FiltrationParams, Order, Rational,
};
use crate::graph::{Graph, Path, VertexId, VertexSet};

/// Upper bound on the number of paths enumerated for a single `e(W)`.
pub const PATH_LIMIT: usize = 200_000;

/// An element of the completion known up to `V_K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedElement {
    body: Element,
    prec: Order,
}

impl fmt::Display for TruncatedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.prec {
            Order::Infinite => write!(f, "{}", self.body),
            k => write!(f, "{} + O(V_{})", self.body, k),
        }
    }
}

fn one() -> Rational {
    Ratio::from_integer(1)
}

impl TruncatedElement {
    pub fn exact(body: Element) -> Self {
        TruncatedElement {
            body,
            prec: Order::Infinite,
        }
    }

    /// Drops the terms of order at least `k`.
    pub fn truncate(a: &Element, k: Order) -> Self {
        let alg = a.algebra();
        let body = match k {
            Order::Infinite => a.clone(),
            Order::Finite(k) => a.filter(|m, _| ord(alg.graph(), alg.gamma(), m) < k),
        };
        TruncatedElement { body, prec: k }
    }

    /// Pairs a body with a precision claim supplied by the caller.
    pub fn from_parts(body: Element, prec: Order) -> Self {
        TruncatedElement { body, prec }
    }

    pub fn body(&self) -> &Element {
        &self.body
    }

    pub fn prec(&self) -> Order {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_infinite()
    }

    pub fn algebra(&self) -> &Algebra {
        self.body.algebra()
    }

    pub fn try_add(&self, other: &TruncatedElement) -> Result<TruncatedElement> {
        Ok(TruncatedElement {
            body: self.body.try_add(&other.body)?,
            prec: self.prec.min(other.prec),
        })
    }

    pub fn try_sub(&self, other: &TruncatedElement) -> Result<TruncatedElement> {
        Ok(TruncatedElement {
            body: self.body.try_sub(&other.body)?,
            prec: self.prec.min(other.prec),
        })
    }

    /// The product. Terms of the result body at or above the result precision
    /// are absorbed into the error.
    pub fn try_mul(&self, other: &TruncatedElement) -> Result<TruncatedElement> {
        let body = self.body.try_mul(&other.body)?;
        let prec = mul_precision(self, other);
        Ok(TruncatedElement::truncate(&body, prec))
    }

    /// The involution; `V_K` is stable under it.
    pub fn star(&self) -> TruncatedElement {
        TruncatedElement {
            body: self.body.star(),
            prec: self.prec,
        }
    }

    /// Whether `self ≡ other (mod V_K)`, allowing the rewriting slack: the
    /// body difference must have order at least `K − 1`.
    pub fn equal_mod(&self, other: &TruncatedElement, k: Order) -> Result<bool> {
        Ok(self.congruence(other, k)?.holds)
    }

    /// [`TruncatedElement::equal_mod`] with the evidence behind the answer.
    pub fn congruence(&self, other: &TruncatedElement, k: Order) -> Result<Congruence> {
        let available = self.prec.min(other.prec);
        if k > available {
            return Err(Error::InsufficientPrecision {
                requested: k.to_string(),
                available: available.to_string(),
            });
        }
        let diff = self.body.try_sub(&other.body)?;
        let residual = min_ord(&diff);
        let holds = residual >= k.minus(one());
        let witness = lowest_term(&diff).map(|(m, o)| (m.clone(), o));
        Ok(Congruence {
            holds,
            requested: k,
            available,
            residual,
            witness,
        })
    }
}

/// The outcome of a congruence test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Congruence {
    pub holds: bool,
    pub requested: Order,
    /// `min(prec_a, prec_b)`.
    pub available: Order,
    /// The least order in the body difference (`+∞` when the bodies agree).
    pub residual: Order,
    /// The lowest-order monomial of the body difference.
    pub witness: Option<(Monomial, Rational)>,
}

impl Congruence {
    /// What is actually certified about the difference: the lesser of the
    /// stored residual and the precision of the operands.
    pub fn certified(&self) -> Order {
        self.residual.min(self.available)
    }
}

/// The precision of `a·b`:
///
/// the least of `product_precision(prec_a, m)` over `m` in the body of `b`,
/// `product_precision(prec_b, m)` over `m` in the body of `a`, and, when both
/// factors are inexact, `(min(prec_a, prec_b) − 1)/2`; then minus one.
pub fn mul_precision(a: &TruncatedElement, b: &TruncatedElement) -> Order {
    let alg = a.algebra();
    let (g, gamma) = (alg.graph(), alg.gamma());
    let side = |prec: Order, body: &Element| {
        if prec.is_infinite() {
            return Order::Infinite;
        }
        body.monomials()
            .map(|m| product_precision(prec, FiltrationParams::of(g, gamma, m)))
            .min()
            .unwrap_or(Order::Infinite)
    };
    let mut prec = side(a.prec, &b.body).min(side(b.prec, &a.body));
    if !a.is_exact() && !b.is_exact() {
        prec = prec.min(square_precision(a.prec.min(b.prec)));
    }
    prec.minus(one())
}

/// Arrival paths into `W` of length at most `max_len`: paths whose range is
/// the first of their vertices to lie in `W`. Every `w ∈ W` is one, as a path
/// of length zero. Sorted by length, then edges, then start.
pub fn arrival_paths(g: &Graph, w: &VertexSet, max_len: usize) -> Result<Vec<Path>> {
    Ok(enumerate_arrivals(g, w, max_len)?.0)
}

/// Arrival paths plus whether the enumeration found every arrival path of any
/// length.
fn enumerate_arrivals(g: &Graph, w: &VertexSet, max_len: usize) -> Result<(Vec<Path>, bool)> {
    if w.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut out: Vec<Path> = w.iter().map(|&v| Path::vertex(v)).collect();
    let mut frontier: Vec<Path> = g.vertices().filter(|v| !w.contains(v)).map(Path::vertex).collect();
    let reach = g.ancestors_of_set(w);
    frontier.retain(|p| reach.contains(&p.end()));
    let mut complete = true;
    let mut len = 0;
    while !frontier.is_empty() {
        if len == max_len {
            complete = false;
            break;
        }
        len += 1;
        let mut next = Vec::new();
        for p in &frontier {
            for &e in g.out_edges(p.end()) {
                let mut q = p.clone();
                q.push_unchecked(g, e);
                if w.contains(&g.range(e)) {
                    out.push(q);
                } else {
                    next.push(q);
                }
                if out.len() + next.len() > PATH_LIMIT {
                    return Err(Error::TooManyTerms(PATH_LIMIT));
                }
            }
        }
        // Paths that can no longer reach W contribute nothing.
        next.retain(|p| reach.contains(&p.end()));
        frontier = next;
    }
    out.sort();
    Ok((out, complete))
}

/// The enumeration cutoff `ceil(K(2|V|+1)/2)`: arrival paths have at most
/// `|V|` trailing special edges, so any `pp*` of order below `K` is shorter.
pub fn arrival_cutoff(g: &Graph, k: Order) -> Option<usize> {
    k.times(Ratio::new(2 * g.vertex_count() as i64 + 1, 2))
        .ceil()
        .map(|n| n as usize)
}

/// `e(W) = Σ pp*` over arrival paths `p` into `W`, keeping the terms with
/// `ord(pp*) < K`. Exact when the arrival paths are finite in number and
/// none was dropped.
pub fn e_of(alg: &Algebra, w: &VertexSet, k: Order) -> Result<TruncatedElement> {
    let g = alg.graph();
    g.require_hereditary(w)?;
    let (paths, complete) = match arrival_cutoff(g, k) {
        Some(cut) => enumerate_arrivals(g, w, cut)?,
        None => {
            // Without a cycle outside W every arrival path has at most |V| edges.
            let (paths, complete) = enumerate_arrivals(g, w, g.vertex_count() + 1)?;
            if !complete {
                return Err(Error::InfiniteSum);
            }
            (paths, complete)
        }
    };
    let mut dropped = false;
    let mut terms = Vec::with_capacity(paths.len());
    for p in paths {
        let m = Monomial::projection(p);
        if Order::Finite(ord(g, alg.gamma(), &m)) < k {
            terms.push((m, alg.field().one()));
        } else {
            dropped = true;
        }
    }
    let body = alg.element(terms);
    let prec = if complete && !dropped { Order::Infinite } else { k };
    Ok(TruncatedElement::from_parts(body, prec))
}

/// The vertex idempotent `e_v = lim g_v(n) g_v(n)*`, as
/// `v − Σ g_v(k) e e* g_v(k)*` over `k ≥ 0` and non-special `e` leaving
/// `r(g_v(k))`, keeping the terms of order `2(k+1) < K`. Exact when the
/// γ-orbit of `v` never meets a non-special edge from some point on.
pub fn e_vertex(alg: &Algebra, v: VertexId, k: Order) -> Result<TruncatedElement> {
    let g = alg.graph();
    let gamma = alg.gamma();
    let field = alg.field();
    let horizon = gamma.orbit(g, v).len();
    let steps = match k {
        // 2(k+1) < K  ⇔  k < K/2 − 1
        Order::Finite(kf) => (kf / Ratio::from_integer(2) - one()).ceil().to_integer().max(0) as usize,
        Order::Infinite => {
            let cycle = orbit_cycle(alg, v);
            if cycle.iter().any(|&u| gamma.non_special_out(g, u).next().is_some()) {
                return Err(Error::InfiniteSum);
            }
            horizon + 1
        }
    };
    let mut terms = vec![(Monomial::vertex(v), field.one())];
    let mut path = Path::vertex(v);
    let mut dropped = false;
    for step in 0.. {
        if step == steps {
            dropped = !tail_is_empty(alg, &path, horizon);
            break;
        }
        for e in gamma.non_special_out(g, path.end()) {
            let mut p = path.clone();
            p.push_unchecked(g, e);
            terms.push((Monomial::projection(p), -&field.one()));
        }
        match gamma.special_edge(path.end()) {
            Some(s) => path.push_unchecked(g, s),
            None => break,
        }
    }
    let body = alg.element(terms);
    let prec = if dropped { k } else { Order::Infinite };
    Ok(TruncatedElement::from_parts(body, prec))
}

/// Vertices on the eventual cycle of the γ-orbit of `v` (empty when the orbit
/// ends in a sink).
fn orbit_cycle(alg: &Algebra, v: VertexId) -> BTreeSet<VertexId> {
    let g = alg.graph();
    let gamma = alg.gamma();
    let mut seen = Vec::new();
    let mut u = v;
    loop {
        if let Some(i) = seen.iter().position(|&x| x == u) {
            return seen[i..].iter().copied().collect();
        }
        seen.push(u);
        match gamma.special_edge(u) {
            Some(e) => u = g.range(e),
            None => return BTreeSet::new(),
        }
    }
}

/// Whether no non-special edge leaves the orbit from the end of `path` on.
fn tail_is_empty(alg: &Algebra, path: &Path, horizon: usize) -> bool {
    let g = alg.graph();
    let gamma = alg.gamma();
    let mut u = path.end();
    for _ in 0..=horizon {
        if gamma.non_special_out(g, u).next().is_some() {
            return false;
        }
        match gamma.special_edge(u) {
            Some(e) => u = g.range(e),
            None => return true,
        }
    }
    true
}
