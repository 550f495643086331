//! Finite directed multigraphs.
//!
//! Vertices and edges are addressed by dense ids assigned in lexicographic
//! name order, so comparing ids (or id sequences) is the same as comparing
//! names. Everything here is purely graph-theoretic: descendants, hereditary
//! sets, the frame (minimal hereditary subsets), `W⊥` and the collapse `Γ^W`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub(crate) u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub(crate) u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EdgeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A set of vertices, ordered by name.
pub type VertexSet = BTreeSet<VertexId>;

#[derive(Clone, Debug, PartialEq, Eq)]
struct EdgeData {
    name: String,
    src: VertexId,
    dst: VertexId,
}

/// A finite directed multigraph with named vertices and edges.
///
/// Immutable after construction. Vertex and edge names share one namespace
/// because the expression language resolves both through the same token.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertex_names: Vec<String>,
    edges: Vec<EdgeData>,
    out_edges: Vec<Vec<EdgeId>>,
    in_edges: Vec<Vec<EdgeId>>,
    names: BTreeMap<String, Name>,
}

/// What a name resolves to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Name {
    Vertex(VertexId),
    Edge(EdgeId),
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic()) && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Graph {
    /// Builds a graph from vertex names and `(edge, source, range)` triples.
    ///
    /// Names only need to be nonempty and free of whitespace here; the JSON
    /// loader applies the stricter identifier rule.
    pub fn new<V, E>(vertices: V, edges: E) -> Result<Self>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        E: IntoIterator<Item = (String, String, String)>,
    {
        let mut vertex_names: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let mut raw_edges: Vec<(String, String, String)> = edges.into_iter().collect();
        for name in vertex_names.iter().chain(raw_edges.iter().map(|e| &e.0)) {
            if name.is_empty() || name.chars().any(|c| c.is_whitespace() || "()*+-/".contains(c)) {
                return Err(Error::InvalidName(name.clone()));
            }
        }
        vertex_names.sort();
        raw_edges.sort();

        let mut names = BTreeMap::new();
        for (i, v) in vertex_names.iter().enumerate() {
            if names.insert(v.clone(), Name::Vertex(VertexId(i as u32))).is_some() {
                return Err(Error::DuplicateName(v.clone()));
            }
        }
        let mut edges = Vec::with_capacity(raw_edges.len());
        for (i, (name, src, dst)) in raw_edges.into_iter().enumerate() {
            let lookup = |v: &str| match names.get(v) {
                Some(Name::Vertex(id)) => Ok(*id),
                _ => Err(Error::DanglingEdge {
                    edge: name.clone(),
                    vertex: v.to_string(),
                }),
            };
            let (src, dst) = (lookup(&src)?, lookup(&dst)?);
            if names.insert(name.clone(), Name::Edge(EdgeId(i as u32))).is_some() {
                return Err(Error::DuplicateName(name));
            }
            edges.push(EdgeData { name, src, dst });
        }

        let n = vertex_names.len();
        let mut out_edges = vec![Vec::new(); n];
        let mut in_edges = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            out_edges[e.src.index()].push(EdgeId(i as u32));
            in_edges[e.dst.index()].push(EdgeId(i as u32));
        }
        Ok(Graph {
            vertex_names,
            edges,
            out_edges,
            in_edges,
            names,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: GraphFile = serde_json::from_str(text)?;
        file.into_graph()
    }

    pub fn to_json(&self) -> String {
        let file = GraphFile {
            vertices: self.vertex_names.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeFile {
                    name: e.name.clone(),
                    src: self.vertex_name(e.src).to_string(),
                    dst: self.vertex_name(e.dst).to_string(),
                })
                .collect(),
        };
        serde_json::to_string(&file).expect("graph serializes")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl ExactSizeIterator<Item = VertexId> + Clone {
        (0..self.vertex_names.len() as u32).map(VertexId)
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = EdgeId> + Clone {
        (0..self.edges.len() as u32).map(EdgeId)
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v.index()]
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edges[e.index()].name
    }

    pub fn source(&self, e: EdgeId) -> VertexId {
        self.edges[e.index()].src
    }

    pub fn range(&self, e: EdgeId) -> VertexId {
        self.edges[e.index()].dst
    }

    /// Outgoing edges of `v`, sorted by name.
    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.out_edges[v.index()]
    }

    /// Incoming edges of `v`, sorted by name.
    pub fn in_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.in_edges[v.index()]
    }

    pub fn is_sink(&self, v: VertexId) -> bool {
        self.out_edges[v.index()].is_empty()
    }

    pub fn resolve(&self, name: &str) -> Option<Name> {
        self.names.get(name).copied()
    }

    pub fn vertex(&self, name: &str) -> Result<VertexId> {
        match self.names.get(name) {
            Some(Name::Vertex(v)) => Ok(*v),
            _ => Err(Error::UnknownVertex(name.to_string())),
        }
    }

    pub fn edge(&self, name: &str) -> Result<EdgeId> {
        match self.names.get(name) {
            Some(Name::Edge(e)) => Ok(*e),
            _ => Err(Error::UnknownEdge(name.to_string())),
        }
    }

    pub fn vertex_set<'a, I>(&self, names: I) -> Result<VertexSet>
    where
        I: IntoIterator<Item = &'a str>,
    {
        names.into_iter().map(|n| self.vertex(n)).collect()
    }

    pub fn all_vertices(&self) -> VertexSet {
        self.vertices().collect()
    }

    /// Renders a vertex set as `{a,b}`.
    pub fn fmt_set(&self, set: &VertexSet) -> String {
        let names: Vec<&str> = set.iter().map(|&v| self.vertex_name(v)).collect();
        format!("{{{}}}", names.join(","))
    }

    pub fn fmt_path(&self, p: &Path) -> String {
        if p.is_vertex() {
            self.vertex_name(p.start()).to_string()
        } else {
            let names: Vec<&str> = p.edges().iter().map(|&e| self.edge_name(e)).collect();
            names.join(" ")
        }
    }

    /// All vertices reachable from `v`, including `v` itself.
    pub fn descendants(&self, v: VertexId) -> VertexSet {
        self.reach(std::iter::once(v), |u| self.out_edges(u).iter().map(|&e| self.range(e)))
    }

    /// All vertices from which some member of `targets` is reachable.
    pub fn ancestors_of_set(&self, targets: &VertexSet) -> VertexSet {
        self.reach(targets.iter().copied(), |u| {
            self.in_edges(u).iter().map(|&e| self.source(e))
        })
    }

    fn reach<I, F, N>(&self, start: I, next: F) -> VertexSet
    where
        I: IntoIterator<Item = VertexId>,
        F: Fn(VertexId) -> N,
        N: Iterator<Item = VertexId>,
    {
        let mut seen = vec![false; self.vertex_count()];
        let mut queue = VecDeque::new();
        for v in start {
            if !seen[v.index()] {
                seen[v.index()] = true;
                queue.push_back(v);
            }
        }
        while let Some(u) = queue.pop_front() {
            for w in next(u) {
                if !seen[w.index()] {
                    seen[w.index()] = true;
                    queue.push_back(w);
                }
            }
        }
        self.vertices().filter(|v| seen[v.index()]).collect()
    }

    fn check_members(&self, set: &VertexSet) -> Result<()> {
        match set.iter().find(|v| v.index() >= self.vertex_count()) {
            Some(v) => Err(Error::UnknownVertex(format!("#{}", v.0))),
            None => Ok(()),
        }
    }

    /// A nonempty set is hereditary when it is closed under descendants.
    pub fn is_hereditary(&self, set: &VertexSet) -> Result<bool> {
        if set.is_empty() {
            return Err(Error::EmptySet);
        }
        self.check_members(set)?;
        Ok(self.edges.iter().all(|e| !set.contains(&e.src) || set.contains(&e.dst)))
    }

    pub fn require_hereditary(&self, set: &VertexSet) -> Result<()> {
        if self.is_hereditary(set)? {
            Ok(())
        } else {
            Err(Error::NotHereditary(self.fmt_set(set)))
        }
    }

    /// Strongly connected components (Kosaraju), each sorted, listed by least
    /// member.
    pub fn strongly_connected_components(&self) -> Vec<VertexSet> {
        let n = self.vertex_count();
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        for root in self.vertices() {
            if seen[root.index()] {
                continue;
            }
            seen[root.index()] = true;
            let mut stack = vec![(root, 0usize)];
            while let Some((u, i)) = stack.pop() {
                let out = self.out_edges(u);
                if i < out.len() {
                    stack.push((u, i + 1));
                    let w = self.range(out[i]);
                    if !seen[w.index()] {
                        seen[w.index()] = true;
                        stack.push((w, 0));
                    }
                } else {
                    order.push(u);
                }
            }
        }

        let mut comp = vec![usize::MAX; n];
        let mut components: Vec<VertexSet> = Vec::new();
        for &root in order.iter().rev() {
            if comp[root.index()] != usize::MAX {
                continue;
            }
            let id = components.len();
            let mut members = VertexSet::new();
            comp[root.index()] = id;
            let mut stack = vec![root];
            while let Some(u) = stack.pop() {
                members.insert(u);
                for &e in self.in_edges(u) {
                    let w = self.source(e);
                    if comp[w.index()] == usize::MAX {
                        comp[w.index()] = id;
                        stack.push(w);
                    }
                }
            }
            components.push(members);
        }
        components.sort_by_key(|c| *c.iter().next().expect("components are nonempty"));
        components
    }

    /// The frame: all minimal hereditary subsets, i.e. the terminal strongly
    /// connected components, listed by least member.
    pub fn frame(&self) -> Vec<VertexSet> {
        self.strongly_connected_components()
            .into_iter()
            .filter(|c| {
                c.iter()
                    .all(|&v| self.out_edges(v).iter().all(|&e| c.contains(&self.range(e))))
            })
            .collect()
    }

    pub fn frame_union(&self) -> VertexSet {
        self.frame().into_iter().flatten().collect()
    }

    /// `W⊥`: the vertices with no descendant in the hereditary set `W`.
    pub fn w_perp(&self, set: &VertexSet) -> Result<VertexSet> {
        self.require_hereditary(set)?;
        let reaching = self.ancestors_of_set(set);
        Ok(self.vertices().filter(|v| !reaching.contains(v)).collect())
    }

    /// All hereditary subsets, by brute force over the power set. Only meant
    /// for small graphs.
    pub fn hereditary_subsets(&self) -> Vec<VertexSet> {
        let n = self.vertex_count();
        assert!(n <= 20, "power-set enumeration is limited to 20 vertices");
        (1u32..(1 << n))
            .map(|mask| {
                self.vertices()
                    .filter(|v| mask & (1 << v.0) != 0)
                    .collect::<VertexSet>()
            })
            .filter(|s| self.is_hereditary(s).unwrap_or(false))
            .collect()
    }

    /// `Γ^W` with the fresh sink named `w#`.
    pub fn collapse(&self, set: &VertexSet) -> Result<Graph> {
        self.collapse_named(set, "w")
    }

    /// `Γ^W`: the vertices of `W` are replaced by one fresh sink named by
    /// suffixing `#` to `base` (repeated until unused). Edges inside `V∖W`
    /// are kept, edges from `V∖W` into `W` are redirected to the sink and
    /// edges leaving `W` are dropped.
    pub fn collapse_named(&self, set: &VertexSet, base: &str) -> Result<Graph> {
        self.check_members(set)?;
        if set.is_empty() || set.len() == self.vertex_count() {
            return Err(Error::NotProperSubset);
        }
        let mut fresh = format!("{base}#");
        while self.names.contains_key(&fresh) {
            fresh.push('#');
        }
        let vertices = self
            .vertices()
            .filter(|v| !set.contains(v))
            .map(|v| self.vertex_name(v).to_string())
            .chain(std::iter::once(fresh.clone()));
        let edges = self
            .edges
            .iter()
            .filter(|e| !set.contains(&e.src))
            .map(|e| {
                let dst = if set.contains(&e.dst) {
                    fresh.clone()
                } else {
                    self.vertex_name(e.dst).to_string()
                };
                (e.name.clone(), self.vertex_name(e.src).to_string(), dst)
            })
            .collect::<Vec<_>>();
        Graph::new(vertices, edges)
    }

    /// Starts a path at `v`.
    pub fn path_from(&self, v: VertexId) -> Path {
        Path::vertex(v)
    }

    /// Builds a path from a nonempty edge sequence.
    pub fn path(&self, edges: &[EdgeId]) -> Result<Path> {
        let first = *edges.first().ok_or(Error::EmptySet)?;
        let mut p = Path::vertex(self.source(first));
        for &e in edges {
            p = p.try_push(self, e)?;
        }
        Ok(p)
    }

    /// Builds a path from space-separated edge names, or a single vertex name.
    pub fn parse_path(&self, text: &str) -> Result<Path> {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if let [single] = tokens.as_slice() {
            if let Some(Name::Vertex(v)) = self.resolve(single) {
                return Ok(Path::vertex(v));
            }
        }
        let edges = tokens.iter().map(|t| self.edge(t)).collect::<Result<Vec<_>>>()?;
        self.path(&edges)
    }
}

/// A path: a start vertex and a composable edge sequence (possibly empty).
/// The range is cached so that no graph lookup is needed to compose.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    start: VertexId,
    end: VertexId,
    edges: SmallVec<[EdgeId; 6]>,
}

impl Path {
    pub fn vertex(v: VertexId) -> Self {
        Path {
            start: v,
            end: v,
            edges: SmallVec::new(),
        }
    }

    pub fn start(&self) -> VertexId {
        self.start
    }

    pub fn end(&self) -> VertexId {
        self.end
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_vertex(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn last_edge(&self) -> Option<EdgeId> {
        self.edges.last().copied()
    }

    pub fn try_push(mut self, g: &Graph, e: EdgeId) -> Result<Self> {
        if g.source(e) != self.end {
            let prev = match self.last_edge() {
                Some(l) => g.edge_name(l).to_string(),
                None => g.vertex_name(self.end).to_string(),
            };
            return Err(Error::NotComposable(prev, g.edge_name(e).to_string()));
        }
        self.edges.push(e);
        self.end = g.range(e);
        Ok(self)
    }

    /// Appends `e`; the caller guarantees `s(e) = r(self)`.
    pub(crate) fn push_unchecked(&mut self, g: &Graph, e: EdgeId) {
        debug_assert_eq!(g.source(e), self.end);
        self.edges.push(e);
        self.end = g.range(e);
    }

    /// Removes the last edge; the new range is the source of that edge.
    pub(crate) fn pop(&mut self, g: &Graph) -> Option<EdgeId> {
        let e = self.edges.pop()?;
        self.end = g.source(e);
        Some(e)
    }

    /// `self · other`; requires `r(self) = s(other)`.
    pub(crate) fn concat(&self, other: &Path) -> Path {
        debug_assert_eq!(self.end, other.start);
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        Path {
            start: self.start,
            end: other.end,
            edges,
        }
    }

    /// If `other = self · rest`, returns `rest`.
    pub fn strip_prefix(&self, other: &Path) -> Option<Path> {
        if self.start != other.start || !other.edges.starts_with(&self.edges) {
            return None;
        }
        Some(Path {
            start: self.end,
            end: other.end,
            edges: SmallVec::from_slice(&other.edges[self.edges.len()..]),
        })
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Length, then edge names, then start vertex.
impl Ord for Path {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.edges
            .len()
            .cmp(&other.edges.len())
            .then_with(|| self.edges.cmp(&other.edges))
            .then_with(|| self.start.cmp(&other.start))
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    vertices: Vec<String>,
    edges: Vec<EdgeFile>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeFile {
    name: String,
    src: String,
    dst: String,
}

impl GraphFile {
    fn into_graph(self) -> Result<Graph> {
        if let Some(bad) = self
            .vertices
            .iter()
            .chain(self.edges.iter().map(|e| &e.name))
            .find(|n| !is_identifier(n))
        {
            return Err(Error::InvalidName(bad.clone()));
        }
        Graph::new(self.vertices, self.edges.into_iter().map(|e| (e.name, e.src, e.dst)))
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "V = {{{}}}; E = {{", self.vertex_names.join(","))?;
        for (i, e) in self.edges.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(
                f,
                "{}: {}->{}",
                e.name,
                self.vertex_name(e.src),
                self.vertex_name(e.dst)
            )?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(vertices: &[&str], edges: &[(&str, &str, &str)]) -> Graph {
        Graph::new(
            vertices.iter().copied(),
            edges
                .iter()
                .map(|(n, s, d)| (n.to_string(), s.to_string(), d.to_string())),
        )
        .unwrap()
    }

    fn names(g: &Graph, s: &VertexSet) -> Vec<String> {
        s.iter().map(|&v| g.vertex_name(v).to_string()).collect()
    }

    fn toeplitz() -> Graph {
        g(&["v", "w"], &[("e", "v", "v"), ("f", "v", "w")])
    }

    #[test]
    fn descendants_examples() {
        let line = g(&["a", "b", "c"], &[("x", "a", "b"), ("y", "b", "c")]);
        let a = line.vertex("a").unwrap();
        assert_eq!(names(&line, &line.descendants(a)), ["a", "b", "c"]);
        let c = line.vertex("c").unwrap();
        assert_eq!(names(&line, &line.descendants(c)), ["c"]);
        let t = toeplitz();
        assert_eq!(names(&t, &t.descendants(t.vertex("v").unwrap())), ["v", "w"]);
    }

    #[test]
    fn hereditary_examples() {
        let t = toeplitz();
        assert!(t.is_hereditary(&t.vertex_set(["w"]).unwrap()).unwrap());
        assert!(!t.is_hereditary(&t.vertex_set(["v"]).unwrap()).unwrap());
        assert!(t.is_hereditary(&t.all_vertices()).unwrap());
        assert!(matches!(t.is_hereditary(&VertexSet::new()), Err(Error::EmptySet)));
    }

    #[test]
    fn frame_examples() {
        let t = toeplitz();
        let frame: Vec<_> = t.frame().iter().map(|s| t.fmt_set(s)).collect();
        assert_eq!(frame, ["{w}"]);
        let lp = g(&["v"], &[("c", "v", "v")]);
        assert_eq!(lp.frame().len(), 1);
        let y = g(&["a", "b", "c"], &[("ab", "a", "b"), ("ac", "a", "c")]);
        let frame: Vec<_> = y.frame().iter().map(|s| y.fmt_set(s)).collect();
        assert_eq!(frame, ["{b}", "{c}"]);
    }

    #[test]
    fn w_perp_examples() {
        let g3 = g(&["a", "b", "c"], &[("x", "a", "b")]);
        let perp = g3.w_perp(&g3.vertex_set(["b"]).unwrap()).unwrap();
        assert_eq!(g3.fmt_set(&perp), "{c}");
        assert!(g3.w_perp(&g3.all_vertices()).unwrap().is_empty());
        let t = toeplitz();
        assert!(t.w_perp(&t.vertex_set(["w"]).unwrap()).unwrap().is_empty());
        assert!(matches!(
            t.w_perp(&t.vertex_set(["v"]).unwrap()),
            Err(Error::NotHereditary(_))
        ));
    }

    #[test]
    fn collapse_examples() {
        let y = g(&["a", "b", "c"], &[("ab", "a", "b"), ("ac", "a", "c")]);
        let c = y.collapse(&y.vertex_set(["b", "c"]).unwrap()).unwrap();
        assert_eq!(c.to_string(), "V = {a,w#}; E = {ab: a->w#, ac: a->w#}");

        let two = g(&["a", "b"], &[("x", "a", "b"), ("y", "b", "a")]);
        let c = two.collapse(&two.vertex_set(["b"]).unwrap()).unwrap();
        assert_eq!(c.to_string(), "V = {a,w#}; E = {x: a->w#}");
        assert!(c.is_sink(c.vertex("w#").unwrap()));

        let t = toeplitz();
        let c = t.collapse(&t.vertex_set(["w"]).unwrap()).unwrap();
        assert_eq!(c.to_string(), "V = {v,w#}; E = {e: v->v, f: v->w#}");

        assert!(matches!(t.collapse(&VertexSet::new()), Err(Error::NotProperSubset)));
        assert!(matches!(t.collapse(&t.all_vertices()), Err(Error::NotProperSubset)));
    }

    #[test]
    fn collapse_fresh_name_avoids_collisions() {
        let t = g(&["v", "w", "w#"], &[("e", "v", "w")]);
        let c = t.collapse(&t.vertex_set(["w"]).unwrap()).unwrap();
        assert!(c.vertex("w##").is_ok());
    }

    #[test]
    fn json_round_trip_and_validation() {
        let text =
            r#"{"vertices":["v","w"],"edges":[{"name":"e","src":"v","dst":"v"},{"name":"f","src":"v","dst":"w"}]}"#;
        let t = Graph::from_json(text).unwrap();
        assert_eq!(t, toeplitz());
        assert_eq!(t.to_json(), text);
        assert!(Graph::from_json(r#"{"vertices":["v"],"edges":[],"extra":1}"#).is_err());
        assert!(matches!(
            Graph::from_json(r#"{"vertices":["1v"],"edges":[]}"#),
            Err(Error::InvalidName(_))
        ));
        assert!(matches!(
            Graph::from_json(r#"{"vertices":["v"],"edges":[{"name":"e","src":"v","dst":"u"}]}"#),
            Err(Error::DanglingEdge { .. })
        ));
        assert!(matches!(
            Graph::from_json(r#"{"vertices":["v","v"],"edges":[]}"#),
            Err(Error::DuplicateName(_))
        ));
        assert!(matches!(
            Graph::from_json(r#"{"vertices":["v"],"edges":[{"name":"v","src":"v","dst":"v"}]}"#),
            Err(Error::DuplicateName(_))
        ));
    }

    #[test]
    fn paths_compose_and_strip() {
        let t = toeplitz();
        let (e, f) = (t.edge("e").unwrap(), t.edge("f").unwrap());
        let p = t.path(&[e, e, f]).unwrap();
        assert_eq!(p.end(), t.vertex("w").unwrap());
        assert!(t.path(&[f, e]).is_err());
        let prefix = t.path(&[e]).unwrap();
        let rest = prefix.strip_prefix(&p).unwrap();
        assert_eq!(t.fmt_path(&rest), "e f");
        assert!(p.strip_prefix(&prefix).is_none());
        assert_eq!(t.parse_path("e e f").unwrap(), p);
        assert_eq!(t.parse_path("w").unwrap(), Path::vertex(t.vertex("w").unwrap()));
    }
}
