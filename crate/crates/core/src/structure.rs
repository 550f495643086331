//! Finite-precision verification of the structure theory: central idempotents
//! `e(W)`, partitions of unity, collapse invariance, the vertex idempotents
//! `e_v`, recovery of frame vertices from the `e_v`, and the decomposition of
//! the completion along the frame.
//!
//! Every check compares truncated elements modulo `V_K`. Inputs are computed
//! at a working precision chosen by back-propagating `K` through each product
//! with [`required_precision`], so the advertised precision of both sides is
//! at least `K`; a check passes when the body difference has order at least
//! `K − 1`.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{Algebra, Element, Monomial};
use crate::completion::{e_of, e_vertex, Congruence, TruncatedElement};
use crate::error::{Error, Result};
use crate::expr::render_monomial;
use crate::filtration::{ord, required_precision, FiltrationParams, Order};
use crate::graph::{Graph, Path, VertexId, VertexSet};

/// Rounds of working-precision inflation before giving up.
const MAX_ROUNDS: usize = 32;

/// Default total length for the sampled monomials of the component
/// orthogonality check.
pub const SAMPLE_LENGTH: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Refused,
    SampledPass,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Refused => "refused",
            Status::SampledPass => "sampled-pass",
        }
    }

    pub fn is_failure(self) -> bool {
        self == Status::Fail
    }
}

/// The outcome of one check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub status: Status,
    pub requested_precision: Order,
    /// Least precision of the compared sides (`None` when refused).
    pub achieved_precision: Option<Order>,
    /// Certified order of the difference: the lesser of the achieved
    /// precision and the least order left in the body difference.
    pub residual_order: Option<Order>,
    /// Input precision the check had to be computed at.
    pub working_precision: Option<Order>,
    /// The congruence threshold is `requested − slack`.
    pub slack: Order,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Verdict {
    fn refused(name: String, k: Order, note: String) -> Verdict {
        Verdict {
            name,
            status: Status::Refused,
            requested_precision: k,
            achieved_precision: None,
            residual_order: None,
            working_precision: None,
            slack: Order::int(1),
            witness: None,
            note: Some(note),
        }
    }

    /// A verdict on a combinatorial fact, which involves no truncation.
    fn exact(name: String, k: Order, holds: bool, witness: Option<String>) -> Verdict {
        Verdict {
            name,
            status: if holds { Status::Pass } else { Status::Fail },
            requested_precision: k,
            achieved_precision: Some(Order::Infinite),
            residual_order: Some(Order::Infinite),
            working_precision: None,
            slack: Order::int(1),
            witness: if holds { None } else { witness },
            note: None,
        }
    }

    pub fn render(&self) -> String {
        let show = |o: Option<Order>| o.map_or_else(|| "-".to_string(), |o| o.to_string());
        let mut out = format!(
            "{:<12} {}  requested={} achieved={} residual={}",
            self.status.as_str(),
            self.name,
            self.requested_precision,
            show(self.achieved_precision),
            show(self.residual_order),
        );
        if let Some(w) = &self.witness {
            let _ = write!(out, "\n{:<12} witness: {w}", "");
        }
        if let Some(n) = &self.note {
            let _ = write!(out, "\n{:<12} note: {n}", "");
        }
        out
    }
}

/// An element built from inputs that depend on the working precision.
#[derive(Clone, Debug)]
enum Node {
    /// `e(W)`.
    Set(VertexSet),
    /// `e_v`.
    Vertex(VertexId),
    Exact(Element),
    Mul(Box<Node>, Box<Node>),
    Add(Box<Node>, Box<Node>),
}

impl Node {
    fn mul(self, other: Node) -> Node {
        Node::Mul(Box::new(self), Box::new(other))
    }

    fn add(self, other: Node) -> Node {
        Node::Add(Box::new(self), Box::new(other))
    }
}

struct Evaluated {
    value: TruncatedElement,
    parts: Parts,
}

enum Parts {
    Leaf,
    Mul(Box<Evaluated>, Box<Evaluated>),
    Add(Box<Evaluated>, Box<Evaluated>),
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Key {
    Set(VertexSet),
    Vertex(VertexId),
}

/// One identity `lhs ≡ rhs` within a check.
struct Identity {
    label: String,
    lhs: Node,
    rhs: Node,
}

struct Evaluator<'a> {
    alg: &'a Algebra,
    cache: HashMap<(Key, Order), TruncatedElement>,
}

impl<'a> Evaluator<'a> {
    fn new(alg: &'a Algebra) -> Self {
        Evaluator {
            alg,
            cache: HashMap::new(),
        }
    }

    fn input(&mut self, key: Key, p: Order) -> Result<TruncatedElement> {
        if let Some(v) = self.cache.get(&(key.clone(), p)) {
            return Ok(v.clone());
        }
        let value = match &key {
            Key::Set(w) => e_of(self.alg, w, p)?,
            Key::Vertex(v) => e_vertex(self.alg, *v, p)?,
        };
        self.cache.insert((key, p), value.clone());
        Ok(value)
    }

    fn eval(&mut self, node: &Node, p: Order) -> Result<Evaluated> {
        let leaf = |value| Evaluated {
            value,
            parts: Parts::Leaf,
        };
        Ok(match node {
            Node::Set(w) => leaf(self.input(Key::Set(w.clone()), p)?),
            Node::Vertex(v) => leaf(self.input(Key::Vertex(*v), p)?),
            Node::Exact(a) => leaf(TruncatedElement::exact(a.clone())),
            Node::Mul(a, b) => {
                let (a, b) = (self.eval(a, p)?, self.eval(b, p)?);
                Evaluated {
                    value: a.value.try_mul(&b.value)?,
                    parts: Parts::Mul(Box::new(a), Box::new(b)),
                }
            }
            Node::Add(a, b) => {
                let (a, b) = (self.eval(a, p)?, self.eval(b, p)?);
                Evaluated {
                    value: a.value.try_add(&b.value)?,
                    parts: Parts::Add(Box::new(a), Box::new(b)),
                }
            }
        })
    }

    /// The least uniform input precision for which `ev` (with its current
    /// bodies) has precision at least `t`.
    fn need(&self, ev: &Evaluated, t: Order) -> Order {
        if ev.value.is_exact() || t == Order::ZERO {
            return Order::ZERO;
        }
        match &ev.parts {
            Parts::Leaf => t,
            Parts::Add(a, b) => self.need(a, t).max(self.need(b, t)),
            Parts::Mul(a, b) => {
                let g = self.alg.graph();
                let gamma = self.alg.gamma();
                let side = |x: &Evaluated, other: &Evaluated| {
                    if x.value.is_exact() {
                        return Order::ZERO;
                    }
                    let mut r = other
                        .value
                        .body()
                        .monomials()
                        .map(|m| required_precision(t, FiltrationParams::of(g, gamma, m)))
                        .max()
                        .unwrap_or(Order::ZERO);
                    if !other.value.is_exact() {
                        let bare = FiltrationParams { n: 0, s: 0, d: 0 };
                        r = r.max(required_precision(t, bare));
                    }
                    r
                };
                let (ta, tb) = (side(a, b), side(b, a));
                self.need(a, ta).max(self.need(b, tb))
            }
        }
    }

    /// Decides `lhs ≡ rhs (mod V_K)`, raising the working precision until both
    /// sides are known to precision `K`.
    fn certify(&mut self, id: &Identity, k: Order) -> Result<(Congruence, Order)> {
        if k.is_infinite() {
            return Err(Error::InvalidPrecision("inf".into()));
        }
        let mut p = k;
        for _ in 0..MAX_ROUNDS {
            let l = self.eval(&id.lhs, p)?;
            let r = self.eval(&id.rhs, p)?;
            let needed = self.need(&l, k).max(self.need(&r, k));
            if needed <= p {
                return Ok((l.value.congruence(&r.value, k)?, p));
            }
            p = needed;
        }
        Err(Error::PrecisionDiverged(k.to_string()))
    }

    /// Runs every identity and folds the results into one verdict.
    fn check(&mut self, name: String, ids: &[Identity], k: Order, sampled: bool) -> Result<Verdict> {
        let mut achieved = Order::Infinite;
        let mut residual = Order::Infinite;
        let mut working = k;
        let mut witness = None;
        for id in ids {
            let (c, p) = self.certify(id, k)?;
            achieved = achieved.min(c.available);
            residual = residual.min(c.certified());
            working = working.max(p);
            if !c.holds && witness.is_none() {
                witness = Some(match &c.witness {
                    Some((m, o)) => format!(
                        "{}: difference has term {} of order {}",
                        id.label,
                        render_monomial(self.alg, m),
                        Order::Finite(*o)
                    ),
                    None => id.label.clone(),
                });
            }
        }
        let status = match (witness.is_some(), sampled) {
            (true, _) => Status::Fail,
            (false, true) => Status::SampledPass,
            (false, false) => Status::Pass,
        };
        Ok(Verdict {
            name,
            status,
            requested_precision: k,
            achieved_precision: Some(achieved),
            residual_order: Some(residual),
            working_precision: Some(working),
            slack: Order::int(1),
            witness,
            note: None,
        })
    }
}

fn identity(label: impl Into<String>, lhs: Node, rhs: Node) -> Identity {
    Identity {
        label: label.into(),
        lhs,
        rhs,
    }
}

fn frame_finite_or_note(alg: &Algebra) -> std::result::Result<(), String> {
    let g = alg.graph();
    alg.gamma().frame_finiteness(g).map_err(|cycle| {
        format!(
            "requires a frame-finite specialization, but the special cycle `{}` avoids the frame",
            g.fmt_path(&cycle)
        )
    })
}

/// `e(W)² ≡ e(W)` and `x·e(W) ≡ e(W)·x` for every generator `x`.
pub fn check_central_idempotent(alg: &Algebra, w: &VertexSet, k: Order) -> Result<Verdict> {
    let g = alg.graph();
    g.require_hereditary(w)?;
    let e = || Node::Set(w.clone());
    let mut ids = vec![identity("e(W)^2 = e(W)", e().mul(e()), e())];
    let names = g
        .vertices()
        .map(|v| g.vertex_name(v).to_string())
        .chain(g.edges().map(|x| g.edge_name(x).to_string()))
        .chain(g.edges().map(|x| format!("{}*", g.edge_name(x))));
    for (x, name) in alg.generators().into_iter().zip(names) {
        ids.push(identity(
            format!("{name} e(W) = e(W) {name}"),
            Node::Exact(x.clone()).mul(e()),
            e().mul(Node::Exact(x)),
        ));
    }
    Evaluator::new(alg).check(format!("central-idempotent {}", g.fmt_set(w)), &ids, k, false)
}

/// `e(W) + e(W⊥) ≡ 1` and `e(W)e(W⊥) ≡ 0 ≡ e(W⊥)e(W)`, with `e(∅) = 0`.
/// Refused unless γ is frame-finite.
pub fn check_partition(alg: &Algebra, w: &VertexSet, k: Order) -> Result<Verdict> {
    let g = alg.graph();
    let perp = g.w_perp(w)?;
    let name = format!("partition {}", g.fmt_set(w));
    if let Err(note) = frame_finite_or_note(alg) {
        return Ok(Verdict::refused(name, k, note));
    }
    let e = Node::Set(w.clone());
    let ep = if perp.is_empty() {
        Node::Exact(alg.zero())
    } else {
        Node::Set(perp)
    };
    let zero = || Node::Exact(alg.zero());
    let ids = [
        identity("e(W) + e(W') = 1", e.clone().add(ep.clone()), Node::Exact(alg.one())),
        identity("e(W) e(W') = 0", e.clone().mul(ep.clone()), zero()),
        identity("e(W') e(W) = 0", ep.mul(e), zero()),
    ];
    Evaluator::new(alg).check(name, &ids, k, false)
}

/// `e(W₁) ≡ e(W₂)` for hereditary `W₁ ⊆ W₂` when every vertex of `W₂` has a
/// descendant in `W₁`. Refused unless γ is frame-finite.
pub fn check_collapse(alg: &Algebra, w1: &VertexSet, w2: &VertexSet, k: Order) -> Result<Verdict> {
    let g = alg.graph();
    g.require_hereditary(w1)?;
    g.require_hereditary(w2)?;
    if !w1.is_subset(w2) {
        return Err(Error::Precondition(format!(
            "{} is not contained in {}",
            g.fmt_set(w1),
            g.fmt_set(w2)
        )));
    }
    let reaching = g.ancestors_of_set(w1);
    if let Some(&v) = w2.iter().find(|v| !reaching.contains(v)) {
        return Err(Error::Precondition(format!(
            "vertex `{}` of {} has no descendant in {}",
            g.vertex_name(v),
            g.fmt_set(w2),
            g.fmt_set(w1)
        )));
    }
    let name = format!("collapse {} {}", g.fmt_set(w1), g.fmt_set(w2));
    if let Err(note) = frame_finite_or_note(alg) {
        return Ok(Verdict::refused(name, k, note));
    }
    let ids = [identity("e(W1) = e(W2)", Node::Set(w1.clone()), Node::Set(w2.clone()))];
    Evaluator::new(alg).check(name, &ids, k, false)
}

/// `(W⊥)⊥`, reading `∅⊥` as `V`.
pub fn double_perp(g: &Graph, w: &VertexSet) -> Result<VertexSet> {
    let perp = g.w_perp(w)?;
    if perp.is_empty() {
        Ok(g.all_vertices())
    } else {
        g.w_perp(&perp)
    }
}

/// The vertex idempotents: `e_v` contains `v` with coefficient 1,
/// `e_v² ≡ e_v`, `e_v e_w ≡ 0` for `v ≠ w`, `e_v e ≡ 0` for non-special `e`
/// leaving `v`, and `e_v e ≡ e e_w` for the special edge `e: v → w`.
pub fn check_vertex_idempotents(alg: &Algebra, k: Order) -> Result<Verdict> {
    let g = alg.graph();
    let gamma = alg.gamma();
    let ev = Node::Vertex;
    let zero = || Node::Exact(alg.zero());
    let mut ids = Vec::new();
    for v in g.vertices() {
        let vn = g.vertex_name(v);
        ids.push(identity(format!("e_{vn}^2 = e_{vn}"), ev(v).mul(ev(v)), ev(v)));
        for w in g.vertices().filter(|&w| w != v) {
            let wn = g.vertex_name(w);
            ids.push(identity(format!("e_{vn} e_{wn} = 0"), ev(v).mul(ev(w)), zero()));
        }
        for &e in g.out_edges(v) {
            let en = g.edge_name(e);
            let edge = Node::Exact(alg.edge(e));
            if gamma.is_special(g, e) {
                let w = g.range(e);
                ids.push(identity(
                    format!("e_{vn} {en} = {en} e_{}", g.vertex_name(w)),
                    ev(v).mul(edge.clone()),
                    edge.mul(ev(w)),
                ));
            } else {
                ids.push(identity(format!("e_{vn} {en} = 0"), ev(v).mul(edge), zero()));
            }
        }
    }
    let mut verdict = Evaluator::new(alg).check("vertex-idempotents".into(), &ids, k, false)?;
    // e_v is nonzero: its body always keeps v itself with coefficient 1.
    for v in g.vertices() {
        let body = e_vertex(alg, v, k)?;
        let c = body.body().coefficient(&Monomial::vertex(v));
        if !c.is_some_and(|c| c.is_one()) {
            verdict.status = Status::Fail;
            verdict.witness = Some(format!(
                "e_{} does not contain its vertex with coefficient 1",
                g.vertex_name(v)
            ));
        }
    }
    Ok(verdict)
}

/// Across each special edge `e: v → w`: `e_w ≡ e* e_v e` and `e_v e e* ≡ e e_w e*`.
pub fn check_special_conjugation(alg: &Algebra, k: Order) -> Result<Verdict> {
    let g = alg.graph();
    let gamma = alg.gamma();
    let mut ids = Vec::new();
    for v in g.vertices() {
        let Some(e) = gamma.special_edge(v) else { continue };
        let w = g.range(e);
        let (vn, wn, en) = (g.vertex_name(v), g.vertex_name(w), g.edge_name(e));
        let edge = || Node::Exact(alg.edge(e));
        let ghost = || Node::Exact(alg.ghost(e));
        ids.push(identity(
            format!("e_{wn} = {en}* e_{vn} {en}"),
            Node::Vertex(w),
            ghost().mul(Node::Vertex(v)).mul(edge()),
        ));
        ids.push(identity(
            format!("e_{vn} {en} {en}* = {en} e_{wn} {en}*"),
            Node::Vertex(v).mul(edge()).mul(ghost()),
            edge().mul(Node::Vertex(w)).mul(ghost()),
        ));
    }
    Evaluator::new(alg).check("special-conjugation".into(), &ids, k, false)
}

/// Basic monomials `pq*` with `s(p) = v`, `s(q) = w` and `l(p)+l(q) ≤ max_len`,
/// in canonical order.
pub fn basic_monomials_between(alg: &Algebra, v: VertexId, w: VertexId, max_len: usize) -> Vec<Monomial> {
    let g = alg.graph();
    let paths_from = |start: VertexId| {
        let mut all = vec![Path::vertex(start)];
        let mut frontier = all.clone();
        for _ in 0..max_len {
            let mut next = Vec::new();
            for p in &frontier {
                for &e in g.out_edges(p.end()) {
                    let mut q = p.clone();
                    q.push_unchecked(g, e);
                    next.push(q);
                }
            }
            all.extend(next.iter().cloned());
            frontier = next;
        }
        all
    };
    let (ps, qs) = (paths_from(v), paths_from(w));
    let mut out = Vec::new();
    for p in &ps {
        for q in qs.iter().filter(|q| q.end() == p.end() && p.len() + q.len() <= max_len) {
            let m = Monomial::new(g, p.clone(), q.clone()).expect("ranges agree");
            if alg.is_basic(&m) {
                out.push(m);
            }
        }
    }
    out.sort();
    out
}

/// `e_v m e_w ≡ 0` for `v`, `w` in different components of the undirected
/// special-edge graph and every basic monomial `m` from `v` to `w` of total
/// length at most `max_len`. The statement covers all of the completion, so
/// a pass is reported as sampled.
pub fn check_component_orthogonality(alg: &Algebra, k: Order, max_len: usize) -> Result<Verdict> {
    let g = alg.graph();
    let comps = alg.gamma().undirected_components(g);
    let comp_of: BTreeMap<VertexId, usize> = comps
        .iter()
        .enumerate()
        .flat_map(|(i, c)| c.iter().map(move |&v| (v, i)))
        .collect();
    let mut ids = Vec::new();
    for v in g.vertices() {
        for w in g.vertices().filter(|w| comp_of[w] != comp_of[&v]) {
            for m in basic_monomials_between(alg, v, w, max_len) {
                let label = format!(
                    "e_{} ({}) e_{} = 0",
                    g.vertex_name(v),
                    render_monomial(alg, &m),
                    g.vertex_name(w)
                );
                let lhs = Node::Vertex(v).mul(Node::Exact(alg.monomial(m))).mul(Node::Vertex(w));
                ids.push(identity(label, lhs, Node::Exact(alg.zero())));
            }
        }
    }
    let mut verdict = Evaluator::new(alg).check("component-orthogonality".into(), &ids, k, true)?;
    verdict.note = Some(format!(
        "{} monomials of total length at most {max_len} sampled",
        ids.len()
    ));
    Ok(verdict)
}

/// Conjugates the terms of `a` starting at `r(e)` by `g_w(k)e`, for every
/// step `k` and non-special `e` leaving `r(g_w(k))`, keeping the results of
/// order below `cut`.
fn apply_recovery_operator(
    alg: &Algebra,
    w: VertexId,
    inputs: &BTreeMap<VertexId, TruncatedElement>,
    cut: Order,
) -> Element {
    let g = alg.graph();
    let gamma = alg.gamma();
    let kf = cut.finite().expect("finite cut");
    // Conjugating by a path of length k+1 adds 2(k+1) to n and leaves s and d
    // alone, so past this many steps every term has order at least `cut`.
    let steps = inputs
        .values()
        .flat_map(|x| x.body().monomials())
        .map(|m| {
            let p = FiltrationParams::of(g, gamma, m);
            let gap = kf * Ratio::from_integer(p.s + p.d + 1) - Ratio::from_integer(p.n);
            (gap / Ratio::from_integer(2)).ceil().to_integer().max(0) as usize
        })
        .max()
        .unwrap_or(0);
    let mut terms = Vec::new();
    let mut path = Path::vertex(w);
    for _ in 0..=steps {
        for e in gamma.non_special_out(g, path.end()) {
            let v = g.range(e);
            let Some(x) = inputs.get(&v) else { continue };
            let mut c = path.clone();
            c.push_unchecked(g, e);
            for (m, coef) in x.body().terms() {
                if m.left_vertex() != v || m.right_vertex() != v {
                    continue;
                }
                let conj = Monomial::new(g, c.concat(m.p()), c.concat(m.q())).expect("same range");
                if Order::Finite(ord(g, gamma, &conj)) < cut {
                    terms.push((conj, coef.clone()));
                }
            }
        }
        match gamma.special_edge(path.end()) {
            Some(s) => path.push_unchecked(g, s),
            None => break,
        }
    }
    alg.element(terms)
}

/// Recovers a frame vertex from the vertex idempotents of its frame member:
/// `w ≡ (Σ_{i≤N} Aⁱ ē)_w` with `ē = (e_u)_{u∈W}` and
/// `A_{w,v}(a) = Σ g_w(k) e a e* g_w(k)*` over non-special `e` with `r(e) = v`.
/// Terms of `Aⁱ` lie in `V_{2i}`, so `N = ⌈K/2⌉` leaves a remainder beyond `K`.
pub fn vertex_recovery(alg: &Algebra, w: VertexId, k: Order) -> Result<Verdict> {
    let g = alg.graph();
    let gamma = alg.gamma();
    let name = format!("vertex-recovery {}", g.vertex_name(w));
    let Order::Finite(kf) = k else {
        return Err(Error::InvalidPrecision("inf".into()));
    };
    let member = g.frame().into_iter().find(|m| m.contains(&w)).ok_or_else(|| {
        Error::Precondition(format!(
            "vertex `{}` does not lie in a minimal hereditary subset",
            g.vertex_name(w)
        ))
    })?;
    if member.len() == 1 && g.is_sink(w) {
        return Ok(Verdict::refused(
            name,
            k,
            "a sink frame member needs no recovery: its vertex idempotent is the vertex".into(),
        ));
    }
    if let Err(note) = frame_finite_or_note(alg) {
        return Ok(Verdict::refused(name, k, note));
    }
    let rounds = (kf / Ratio::from_integer(2)).ceil().to_integer().max(0) as usize;
    let mut x: BTreeMap<VertexId, TruncatedElement> = BTreeMap::new();
    for &u in &member {
        x.insert(u, e_vertex(alg, u, k)?);
    }
    let mut sum = x.clone();
    for _ in 0..rounds {
        let mut next = BTreeMap::new();
        for &u in &member {
            let body = apply_recovery_operator(alg, u, &x, k);
            // The operator preserves each V_P, so only the cut at K and the
            // precision of the inputs limit the result. It vanishes outright
            // when the orbit of u has no non-special edges.
            let active = gamma
                .orbit(g, u)
                .iter()
                .any(|&o| gamma.non_special_out(g, o).next().is_some());
            let prec = if active {
                x.values().map(|t| t.prec()).fold(k, Order::min)
            } else {
                Order::Infinite
            };
            next.insert(u, TruncatedElement::from_parts(body, prec));
        }
        for (u, t) in &next {
            let s = sum.get_mut(u).expect("same keys");
            *s = s.try_add(t)?;
        }
        x = next;
    }
    let lhs = &sum[&w];
    let rhs = TruncatedElement::exact(alg.vertex(w));
    let c = lhs.congruence(&rhs, k.min(lhs.prec()))?;
    let holds = c.holds && lhs.prec() >= k;
    Ok(Verdict {
        name,
        status: if holds { Status::Pass } else { Status::Fail },
        requested_precision: k,
        achieved_precision: Some(c.available),
        residual_order: Some(c.certified()),
        working_precision: Some(k),
        slack: Order::int(1),
        witness: if holds {
            None
        } else {
            c.witness.as_ref().map(|(m, o)| {
                format!(
                    "difference has term {} of order {}",
                    render_monomial(alg, m),
                    Order::Finite(*o)
                )
            })
        },
        note: Some(format!("{rounds} terms of the series summed")),
    })
}

/// Whether the basic monomial `pq*` lies in the ideal `I(W)`: `r(p) ∈ W`.
pub fn in_ideal(w: &VertexSet, m: &Monomial) -> bool {
    w.contains(&m.range())
}

/// The decomposition of the completion along the frame.
#[derive(Clone, Debug)]
pub struct DecompositionReport {
    pub frame: Vec<VertexSet>,
    /// Components of the undirected special-edge graph.
    pub components: Vec<VertexSet>,
    /// For each component, the indices of the frame members it meets.
    pub assignment: Vec<Vec<usize>>,
    /// `e(W_i)` truncated at the requested precision.
    pub idempotents: Vec<TruncatedElement>,
    pub regular: bool,
    pub checks: Vec<Verdict>,
}

impl DecompositionReport {
    pub fn failed(&self) -> bool {
        self.checks.iter().any(|c| c.status.is_failure())
    }

    pub fn render(&self, g: &Graph) -> String {
        let sets = |v: &[VertexSet]| v.iter().map(|s| g.fmt_set(s)).collect::<Vec<_>>().join(" ");
        let mut out = String::new();
        let _ = writeln!(out, "frame: {}", sets(&self.frame));
        let _ = writeln!(out, "components: {}", sets(&self.components));
        let _ = writeln!(out, "regular: {}", self.regular);
        out.push_str("assignment:\n");
        for (c, hits) in self.components.iter().zip(&self.assignment) {
            let targets: Vec<VertexSet> = hits.iter().map(|&i| self.frame[i].clone()).collect();
            let _ = writeln!(out, "  {} -> {}", g.fmt_set(c), sets(&targets));
        }
        for (w, e) in self.frame.iter().zip(&self.idempotents) {
            let _ = writeln!(out, "e({}) = {}", g.fmt_set(w), e);
        }
        for v in &self.checks {
            let _ = writeln!(out, "{}", v.render());
        }
        out.push_str(&format!("note: {SIMPLICITY_NOTE}\n"));
        out
    }

    pub fn to_json(&self, g: &Graph) -> Value {
        let set = |s: &VertexSet| s.iter().map(|&v| g.vertex_name(v)).collect::<Vec<_>>();
        json!({
            "frame": self.frame.iter().map(set).collect::<Vec<_>>(),
            "components": self.components.iter().map(set).collect::<Vec<_>>(),
            "regular": self.regular,
            "assignment": self.components.iter().zip(&self.assignment).map(|(c, hits)| json!({
                "component": set(c),
                "frame_members": hits.iter().map(|&i| set(&self.frame[i])).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "idempotents": self.frame.iter().zip(&self.idempotents).map(|(w, e)| json!({
                "set": set(w),
                "value": e.to_string(),
            })).collect::<Vec<_>>(),
            "checks": self.checks,
            "notes": [SIMPLICITY_NOTE],
        })
    }
}

pub const SIMPLICITY_NOTE: &str =
    "topological simplicity of the summands is not verified; only orthogonality, generation and the assignment are checked";

pub const ORDER_NOTE: &str =
    "precisions are exact rationals: a monomial of order n/(s+d+1) certifies every level up to that value";

/// Frame, components and their matching, with `Σ e(W_i) ≡ 1` and pairwise
/// orthogonality of the `e(W_i)` at precision `K`. Requires a frame-finite γ.
pub fn decompose(alg: &Algebra, k: Order) -> Result<DecompositionReport> {
    let g = alg.graph();
    frame_finite_or_note(alg).map_err(Error::Precondition)?;
    let frame = g.frame();
    let components = alg.gamma().undirected_components(g);
    let regular = alg.gamma().is_regular(g);
    let assignment: Vec<Vec<usize>> = components
        .iter()
        .map(|c| {
            frame
                .iter()
                .enumerate()
                .filter(|(_, w)| !w.is_disjoint(c))
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    let mut checks = Vec::new();
    let bad = components
        .iter()
        .zip(&assignment)
        .find(|(_, hits)| hits.len() != 1)
        .map(|(c, hits)| format!("component {} meets {} frame members", g.fmt_set(c), hits.len()));
    checks.push(Verdict::exact("component-assignment".into(), k, bad.is_none(), bad));
    if regular {
        let holds = components.len() == frame.len();
        checks.push(Verdict::exact(
            "component-count".into(),
            k,
            holds,
            Some(format!(
                "{} components but {} frame members",
                components.len(),
                frame.len()
            )),
        ));
    }
    let sum = frame
        .iter()
        .map(|w| Node::Set(w.clone()))
        .reduce(Node::add)
        .expect("every graph has a frame");
    let mut ev = Evaluator::new(alg);
    checks.push(ev.check(
        "frame-idempotents-sum".into(),
        &[identity("sum of e(W_i) = 1", sum, Node::Exact(alg.one()))],
        k,
        false,
    )?);
    let mut ortho = Vec::new();
    for (i, wi) in frame.iter().enumerate() {
        for wj in frame.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, w)| w) {
            ortho.push(identity(
                format!("e({}) e({}) = 0", g.fmt_set(wi), g.fmt_set(wj)),
                Node::Set(wi.clone()).mul(Node::Set(wj.clone())),
                Node::Exact(alg.zero()),
            ));
        }
    }
    if !ortho.is_empty() {
        checks.push(ev.check("frame-idempotents-orthogonal".into(), &ortho, k, false)?);
    }
    let idempotents = frame.iter().map(|w| e_of(alg, w, k)).collect::<Result<Vec<_>>>()?;
    Ok(DecompositionReport {
        frame,
        components,
        assignment,
        idempotents,
        regular,
        checks,
    })
}

/// The verification suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    All,
    CentralIdempotent,
    Partition,
    Collapse,
    VertexIdempotents,
    Components,
    VertexRecovery,
}

impl Suite {
    pub const NAMES: [&'static str; 7] = [
        "all",
        "central-idempotent",
        "partition",
        "collapse",
        "vertex-idempotents",
        "components",
        "vertex-recovery",
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::CentralIdempotent => "central-idempotent",
            Suite::Partition => "partition",
            Suite::Collapse => "collapse",
            Suite::VertexIdempotents => "vertex-idempotents",
            Suite::Components => "components",
            Suite::VertexRecovery => "vertex-recovery",
        }
    }

    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Ok(match s {
            "all" => Suite::All,
            "central-idempotent" => Suite::CentralIdempotent,
            "partition" => Suite::Partition,
            "collapse" => Suite::Collapse,
            "vertex-idempotents" => Suite::VertexIdempotents,
            "components" => Suite::Components,
            "vertex-recovery" => Suite::VertexRecovery,
            _ => {
                return Err(Error::Precondition(format!(
                    "unknown suite `{s}`; expected one of {}",
                    Suite::NAMES.join(", ")
                )))
            }
        })
    }
}

/// Largest graph for which suites enumerate every hereditary subset.
pub const MAX_SUITE_VERTICES: usize = 12;

type Job<'a> = Box<dyn Fn() -> Result<Verdict> + Send + Sync + 'a>;

/// The checks of a suite, in report order.
fn suite_jobs<'a>(alg: &'a Algebra, suite: Suite, k: Order) -> Result<Vec<Job<'a>>> {
    let g = alg.graph();
    let mut jobs: Vec<Job<'a>> = Vec::new();
    let needs_subsets = [Suite::CentralIdempotent, Suite::Partition, Suite::Collapse]
        .iter()
        .any(|&s| suite.includes(s));
    let subsets = if needs_subsets {
        if g.vertex_count() > MAX_SUITE_VERTICES {
            return Err(Error::Precondition(format!(
                "suites enumerate hereditary subsets and are limited to {MAX_SUITE_VERTICES} vertices"
            )));
        }
        g.hereditary_subsets()
    } else {
        Vec::new()
    };
    if suite.includes(Suite::CentralIdempotent) {
        for w in subsets.clone() {
            jobs.push(Box::new(move || check_central_idempotent(alg, &w, k)));
        }
    }
    if suite.includes(Suite::Partition) {
        for w in subsets.clone() {
            jobs.push(Box::new(move || check_partition(alg, &w, k)));
        }
    }
    if suite.includes(Suite::Collapse) {
        let mut pairs = Vec::new();
        for w in &subsets {
            pairs.push((w.clone(), double_perp(g, w)?));
        }
        for w1 in &subsets {
            let reaching = g.ancestors_of_set(w1);
            for w2 in &subsets {
                if w1 != w2 && w1.is_subset(w2) && w2.is_subset(&reaching) {
                    pairs.push((w1.clone(), w2.clone()));
                }
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        pairs.retain(|p| seen.insert(p.clone()));
        for (w1, w2) in pairs {
            jobs.push(Box::new(move || check_collapse(alg, &w1, &w2, k)));
        }
    }
    if suite.includes(Suite::VertexIdempotents) {
        jobs.push(Box::new(move || check_vertex_idempotents(alg, k)));
    }
    if suite.includes(Suite::Components) {
        jobs.push(Box::new(move || check_special_conjugation(alg, k)));
        jobs.push(Box::new(move || check_component_orthogonality(alg, k, SAMPLE_LENGTH)));
    }
    if suite.includes(Suite::VertexRecovery) {
        for member in g.frame() {
            if suite == Suite::All && member.len() == 1 && g.is_sink(*member.iter().next().expect("nonempty")) {
                continue;
            }
            for w in member {
                jobs.push(Box::new(move || vertex_recovery(alg, w, k)));
            }
        }
    }
    Ok(jobs)
}

/// A suite run.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: String,
    pub requested_precision: Order,
    pub checks: Vec<Verdict>,
    pub notes: Vec<String>,
}

impl Report {
    /// True when some check failed (refusals do not count).
    pub fn failed(&self) -> bool {
        self.checks.iter().any(|c| c.status.is_failure())
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let _ = writeln!(out, "{}", c.render());
        }
        let _ = writeln!(
            out,
            "summary: {} pass, {} sampled-pass, {} fail, {} refused",
            self.count(Status::Pass),
            self.count(Status::SampledPass),
            self.count(Status::Fail),
            self.count(Status::Refused)
        );
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "requested_precision": self.requested_precision,
            "checks": self.checks,
            "summary": {
                "pass": self.count(Status::Pass),
                "sampled_pass": self.count(Status::SampledPass),
                "fail": self.count(Status::Fail),
                "refused": self.count(Status::Refused),
            },
            "notes": self.notes,
        })
    }
}

/// Runs a suite. Checks run in parallel; with `shuffle`, they are started in
/// a seeded random order. The report lists them in suite order either way.
pub fn verify(alg: &Algebra, suite: Suite, k: Order, shuffle: Option<u64>) -> Result<Report> {
    let jobs = suite_jobs(alg, suite, k)?;
    let mut order: Vec<usize> = (0..jobs.len()).collect();
    if let Some(seed) = shuffle {
        order.shuffle(&mut rand::rngs::StdRng::seed_from_u64(seed));
    }
    let mut results: Vec<(usize, Result<Verdict>)> = order.into_par_iter().map(|i| (i, jobs[i]())).collect();
    results.sort_by_key(|(i, _)| *i);
    let checks = results.into_iter().map(|(_, r)| r).collect::<Result<Vec<_>>>()?;
    let mut notes = vec![ORDER_NOTE.to_string()];
    if suite.includes(Suite::Components) {
        notes.push(SIMPLICITY_NOTE.to_string());
    }
    Ok(Report {
        suite: suite.name().to_string(),
        requested_precision: k,
        checks,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Field;
    use crate::specialization::Specialization;

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

    #[test]
    fn central_idempotent_on_toeplitz() {
        for special in ["e", "f"] {
            let alg = toeplitz(special);
            let w = alg.graph().vertex_set(["w"]).unwrap();
            let v = check_central_idempotent(&alg, &w, Order::int(4)).unwrap();
            assert_eq!(v.status, Status::Pass, "{}", v.render());
            assert!(v.achieved_precision.unwrap() >= Order::int(4));
        }
    }

    #[test]
    fn partition_refused_without_frame_finiteness() {
        let alg = toeplitz("e");
        let w = alg.graph().vertex_set(["w"]).unwrap();
        let v = check_partition(&alg, &w, Order::int(4)).unwrap();
        assert_eq!(v.status, Status::Refused);
        let alg = toeplitz("f");
        let v = check_partition(&alg, &w, Order::int(4)).unwrap();
        assert_eq!(v.status, Status::Pass, "{}", v.render());
    }

    #[test]
    fn collapse_on_toeplitz() {
        let alg = toeplitz("f");
        let g = alg.graph();
        let w1 = g.vertex_set(["w"]).unwrap();
        let v = check_collapse(&alg, &w1, &g.all_vertices(), Order::int(4)).unwrap();
        assert_eq!(v.status, Status::Pass, "{}", v.render());
        assert!(matches!(
            check_collapse(&alg, &g.all_vertices(), &w1, Order::int(4)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn vertex_checks_on_toeplitz() {
        for special in ["e", "f"] {
            let alg = toeplitz(special);
            for v in [
                check_vertex_idempotents(&alg, Order::int(6)).unwrap(),
                check_special_conjugation(&alg, Order::int(6)).unwrap(),
            ] {
                assert_eq!(v.status, Status::Pass, "{}", v.render());
            }
        }
    }

    #[test]
    fn decomposition_of_toeplitz() {
        let alg = toeplitz("f");
        let r = decompose(&alg, Order::int(4)).unwrap();
        assert_eq!(r.frame.len(), 1);
        assert_eq!(r.components.len(), 1);
        assert!(!r.failed(), "{}", r.render(alg.graph()));
        assert!(decompose(&toeplitz("e"), Order::int(4)).is_err());
    }
}
