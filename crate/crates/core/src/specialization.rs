//! Specializations: a choice of one outgoing "special" edge at every
//! non-sink vertex.
//!
//! Because each non-sink vertex has exactly one special out-edge, the special
//! subgraph is functional. Frame-finiteness (finitely many special paths avoid
//! the frame) is therefore a cycle test on γ-orbits, and the orbit of `v` is
//! the vertex sequence of `g_v(n)`.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, Path, VertexId, VertexSet};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Specialization {
    choice: Vec<Option<EdgeId>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecializationFile {
    gamma: BTreeMap<String, String>,
}

impl Specialization {
    /// Validates that the domain is exactly the non-sink vertices and that
    /// `s(γ(v)) = v`.
    pub fn new(g: &Graph, choice: &BTreeMap<VertexId, EdgeId>) -> Result<Self> {
        let mut table = vec![None; g.vertex_count()];
        for (&v, &e) in choice {
            if v.index() >= g.vertex_count() || e.index() >= g.edge_count() {
                return Err(Error::InvalidSpecialization("id out of range".into()));
            }
            if g.source(e) != v {
                return Err(Error::InvalidSpecialization(format!(
                    "edge `{}` does not start at `{}`",
                    g.edge_name(e),
                    g.vertex_name(v)
                )));
            }
            table[v.index()] = Some(e);
        }
        for v in g.vertices() {
            match (g.is_sink(v), table[v.index()]) {
                (true, Some(_)) => {
                    return Err(Error::InvalidSpecialization(format!(
                        "`{}` is a sink and cannot have a special edge",
                        g.vertex_name(v)
                    )))
                }
                (false, None) => {
                    return Err(Error::InvalidSpecialization(format!(
                        "no special edge chosen at `{}`",
                        g.vertex_name(v)
                    )))
                }
                _ => {}
            }
        }
        Ok(Specialization { choice: table })
    }

    pub fn from_names<'a, I>(g: &Graph, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut map = BTreeMap::new();
        for (v, e) in pairs {
            let v = g.vertex(v)?;
            if map.insert(v, g.edge(e)?).is_some() {
                return Err(Error::DuplicateName(g.vertex_name(v).to_string()));
            }
        }
        Specialization::new(g, &map)
    }

    pub fn from_json(g: &Graph, text: &str) -> Result<Self> {
        let file: SpecializationFile = serde_json::from_str(text)?;
        Specialization::from_names(g, file.gamma.iter().map(|(v, e)| (v.as_str(), e.as_str())))
    }

    pub fn to_json(&self, g: &Graph) -> String {
        let gamma = g
            .vertices()
            .filter_map(|v| self.choice[v.index()].map(|e| (g.vertex_name(v).to_string(), g.edge_name(e).to_string())))
            .collect();
        serde_json::to_string(&SpecializationFile { gamma }).expect("specialization serializes")
    }

    pub fn special_edge(&self, v: VertexId) -> Option<EdgeId> {
        self.choice[v.index()]
    }

    pub fn is_special(&self, g: &Graph, e: EdgeId) -> bool {
        self.choice[g.source(e).index()] == Some(e)
    }

    /// The non-special edges leaving `v`.
    pub fn non_special_out<'a>(&'a self, g: &'a Graph, v: VertexId) -> impl Iterator<Item = EdgeId> + 'a {
        let special = self.choice[v.index()];
        g.out_edges(v).iter().copied().filter(move |&e| Some(e) != special)
    }

    /// Length of the maximal all-special suffix of `p`.
    pub fn sd(&self, g: &Graph, p: &Path) -> usize {
        p.edges().iter().rev().take_while(|&&e| self.is_special(g, e)).count()
    }

    /// `g_v(n)`: follow special edges from `v` for `n` steps, stopping early
    /// at a sink.
    pub fn g_path(&self, g: &Graph, v: VertexId, n: usize) -> Path {
        let mut p = Path::vertex(v);
        for _ in 0..n {
            match self.choice[p.end().index()] {
                Some(e) => p.push_unchecked(g, e),
                None => break,
            }
        }
        p
    }

    /// The γ-orbit of `v`: `{ r(g_v(n)) : n ≥ 0 }`, in visiting order.
    pub fn orbit(&self, g: &Graph, v: VertexId) -> Vec<VertexId> {
        let mut seen = vec![false; g.vertex_count()];
        let mut out = Vec::new();
        let mut cur = v;
        while !seen[cur.index()] {
            seen[cur.index()] = true;
            out.push(cur);
            match self.choice[cur.index()] {
                Some(e) => cur = g.range(e),
                None => break,
            }
        }
        out
    }

    /// Checks that no γ-orbit cycles outside the frame. On failure returns
    /// the offending special cycle, rotated to start at its least vertex.
    pub fn frame_finiteness(&self, g: &Graph) -> std::result::Result<(), Path> {
        let frame = g.frame_union();
        for v in g.vertices().filter(|v| !frame.contains(v)) {
            let orbit = self.orbit(g, v);
            let last = *orbit.last().expect("orbit contains its start");
            if frame.contains(&last) || g.is_sink(last) {
                continue;
            }
            // The orbit closed up: the successor of `last` is already on it.
            let back = g.range(self.choice[last.index()].expect("non-sink"));
            if frame.contains(&back) {
                continue;
            }
            let pos = orbit.iter().position(|&u| u == back).expect("orbit closes");
            let cycle = &orbit[pos..];
            let start = *cycle.iter().min().expect("nonempty cycle");
            let mut p = Path::vertex(start);
            for _ in 0..cycle.len() {
                let e = self.choice[p.end().index()].expect("cycle vertices are non-sinks");
                p.push_unchecked(g, e);
            }
            return Err(p);
        }
        Ok(())
    }

    pub fn is_frame_finite(&self, g: &Graph) -> bool {
        self.frame_finiteness(g).is_ok()
    }

    /// Connected components of `(V, γ̃(V))`: special edges with directions
    /// forgotten. Listed by least member.
    pub fn undirected_components(&self, g: &Graph) -> Vec<VertexSet> {
        self.components_within(g, &g.all_vertices())
    }

    fn components_within(&self, g: &Graph, set: &VertexSet) -> Vec<VertexSet> {
        let n = g.vertex_count();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &v in set {
            if let Some(e) = self.choice[v.index()] {
                let w = g.range(e);
                if set.contains(&w) {
                    let (a, b) = (find(&mut parent, v.index()), find(&mut parent, w.index()));
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut groups: BTreeMap<usize, VertexSet> = BTreeMap::new();
        for &v in set {
            let root = find(&mut parent, v.index());
            groups.entry(root).or_default().insert(v);
        }
        let mut out: Vec<VertexSet> = groups.into_values().collect();
        out.sort_by_key(|c| *c.iter().next().expect("nonempty"));
        out
    }

    /// Frame-finiteness and regularity in one report.
    pub fn report(&self, g: &Graph) -> SpecializationReport {
        let witness = self.frame_finiteness(g).err();
        let frame_components = g
            .frame()
            .into_iter()
            .map(|w| {
                let connected = self.components_within(g, &w).len() == 1;
                (w, connected)
            })
            .collect::<Vec<_>>();
        let frame_finite = witness.is_none();
        SpecializationReport {
            frame_finite,
            regular: frame_finite && frame_components.iter().all(|(_, c)| *c),
            witness,
            frame_components,
        }
    }

    pub fn is_regular(&self, g: &Graph) -> bool {
        self.report(g).regular
    }

    /// A regular specialization, chosen deterministically.
    ///
    /// Inside each non-sink frame member the special edges form a shortest-path
    /// in-arborescence towards the least-named vertex (which itself takes its
    /// least-named outgoing edge); outside the frame each vertex takes the
    /// least-named edge that shortens its distance to the frame.
    pub fn construct_regular(g: &Graph) -> Specialization {
        let mut choice = vec![None; g.vertex_count()];
        let frame = g.frame();
        for member in &frame {
            let root = *member.iter().next().expect("frame members are nonempty");
            if g.is_sink(root) {
                continue;
            }
            let dist = reverse_distances(g, std::iter::once(root), |v| member.contains(&v));
            for &w in member {
                choice[w.index()] = if w == root {
                    g.out_edges(w).first().copied()
                } else {
                    decreasing_edge(g, &dist, w)
                };
            }
        }
        let union: VertexSet = frame.into_iter().flatten().collect();
        let dist = reverse_distances(g, union.iter().copied(), |_| true);
        for v in g.vertices().filter(|v| !union.contains(v)) {
            choice[v.index()] = decreasing_edge(g, &dist, v);
        }
        Specialization { choice }
    }
}

/// Distances to `targets` along reversed edges, restricted to vertices
/// accepted by `keep`.
fn reverse_distances<I, F>(g: &Graph, targets: I, keep: F) -> Vec<Option<usize>>
where
    I: IntoIterator<Item = VertexId>,
    F: Fn(VertexId) -> bool,
{
    let mut dist = vec![None; g.vertex_count()];
    let mut queue = VecDeque::new();
    for t in targets {
        dist[t.index()] = Some(0);
        queue.push_back(t);
    }
    while let Some(u) = queue.pop_front() {
        let du = dist[u.index()].expect("queued vertices have distances");
        for &e in g.in_edges(u) {
            let x = g.source(e);
            if keep(x) && dist[x.index()].is_none() {
                dist[x.index()] = Some(du + 1);
                queue.push_back(x);
            }
        }
    }
    dist
}

fn decreasing_edge(g: &Graph, dist: &[Option<usize>], v: VertexId) -> Option<EdgeId> {
    let dv = dist[v.index()]?;
    g.out_edges(v)
        .iter()
        .copied()
        .find(|&e| dist[g.range(e).index()].is_some_and(|d| d + 1 == dv))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecializationReport {
    pub frame_finite: bool,
    pub regular: bool,
    /// A special cycle avoiding the frame, when frame-finiteness fails.
    pub witness: Option<Path>,
    /// Each frame member with whether its special edges connect it.
    pub frame_components: Vec<(VertexSet, bool)>,
}

impl SpecializationReport {
    pub fn render(&self, g: &Graph) -> String {
        let mut out = format!("frame-finite: {}\nregular: {}\n", self.frame_finite, self.regular);
        if let Some(w) = &self.witness {
            out.push_str(&format!("witness special cycle: {}\n", g.fmt_path(w)));
        }
        for (w, connected) in &self.frame_components {
            out.push_str(&format!(
                "frame member {}: {}\n",
                g.fmt_set(w),
                if *connected { "connected" } else { "disconnected" }
            ));
        }
        out
    }

    pub fn to_json(&self, g: &Graph) -> serde_json::Value {
        serde_json::json!({
            "frame_finite": self.frame_finite,
            "regular": self.regular,
            "witness": self.witness.as_ref().map(|w| g.fmt_path(w)),
            "frame_components": self.frame_components.iter().map(|(w, c)| serde_json::json!({
                "members": w.iter().map(|&v| g.vertex_name(v)).collect::<Vec<_>>(),
                "connected": c,
            })).collect::<Vec<_>>(),
        })
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

    fn toeplitz() -> Graph {
        g(&["v", "w"], &[("e", "v", "v"), ("f", "v", "w")])
    }

    #[test]
    fn validation() {
        let t = toeplitz();
        assert!(Specialization::from_names(&t, [("v", "e")]).is_ok());
        assert!(Specialization::from_names(&t, []).is_err());
        assert!(Specialization::from_names(&t, [("v", "e"), ("w", "f")]).is_err());
        let y = g(&["a", "b"], &[("x", "a", "b"), ("y", "b", "a")]);
        assert!(Specialization::from_names(&y, [("a", "y"), ("b", "x")]).is_err());
        let json = r#"{"gamma":{"v":"f"}}"#;
        let s = Specialization::from_json(&t, json).unwrap();
        assert_eq!(s.to_json(&t), json);
        assert!(Specialization::from_json(&t, r#"{"gamma":{},"x":1}"#).is_err());
    }

    #[test]
    fn sd_examples() {
        let t = toeplitz();
        let (e, f) = (t.edge("e").unwrap(), t.edge("f").unwrap());
        let ga = Specialization::from_names(&t, [("v", "e")]).unwrap();
        let gb = Specialization::from_names(&t, [("v", "f")]).unwrap();
        assert_eq!(ga.sd(&t, &Path::vertex(t.vertex("v").unwrap())), 0);
        assert_eq!(ga.sd(&t, &t.path(&[e, e, e]).unwrap()), 3);
        assert_eq!(gb.sd(&t, &t.path(&[e, e, f]).unwrap()), 1);
        assert_eq!(ga.sd(&t, &t.path(&[e, e, f]).unwrap()), 0);
    }

    #[test]
    fn g_path_examples() {
        let t = toeplitz();
        let v = t.vertex("v").unwrap();
        let w = t.vertex("w").unwrap();
        let ga = Specialization::from_names(&t, [("v", "e")]).unwrap();
        let gb = Specialization::from_names(&t, [("v", "f")]).unwrap();
        assert_eq!(t.fmt_path(&gb.g_path(&t, v, 1)), "f");
        assert_eq!(t.fmt_path(&gb.g_path(&t, v, 2)), "f");
        assert_eq!(t.fmt_path(&ga.g_path(&t, v, 3)), "e e e");
        for n in 0..5 {
            assert_eq!(ga.g_path(&t, w, n), Path::vertex(w));
        }
    }

    #[test]
    fn frame_finiteness_examples() {
        let t = toeplitz();
        let ga = Specialization::from_names(&t, [("v", "e")]).unwrap();
        let gb = Specialization::from_names(&t, [("v", "f")]).unwrap();
        let report = ga.report(&t);
        assert!(!report.frame_finite);
        assert!(!report.regular);
        assert_eq!(t.fmt_path(report.witness.as_ref().unwrap()), "e");
        assert!(gb.is_frame_finite(&t));
        let lp = g(&["v"], &[("c", "v", "v")]);
        assert!(Specialization::from_names(&lp, [("v", "c")])
            .unwrap()
            .is_frame_finite(&lp));
    }

    #[test]
    fn regularity_examples() {
        let two = g(&["a", "b"], &[("x", "a", "b"), ("y", "b", "a")]);
        let s = Specialization::from_names(&two, [("a", "x"), ("b", "y")]).unwrap();
        assert!(s.is_regular(&two));
        let y = g(&["a", "b", "c"], &[("ab", "a", "b"), ("ac", "a", "c")]);
        assert!(Specialization::from_names(&y, [("a", "ab")]).unwrap().is_regular(&y));
        let rose = g(&["v"], &[("e", "v", "v"), ("f", "v", "v")]);
        assert!(Specialization::from_names(&rose, [("v", "e")])
            .unwrap()
            .is_regular(&rose));
    }

    #[test]
    fn disconnected_frame_member_is_not_regular() {
        // One frame member {a,b,c}; with the loop special at a, a is isolated
        // in the undirected special graph.
        let g3 = g(
            &["a", "b", "c"],
            &[
                ("ab", "a", "b"),
                ("ba", "b", "a"),
                ("bc", "b", "c"),
                ("cb", "c", "b"),
                ("aa", "a", "a"),
            ],
        );
        let s = Specialization::from_names(&g3, [("a", "aa"), ("b", "bc"), ("c", "cb")]).unwrap();
        let r = s.report(&g3);
        assert!(r.frame_finite);
        assert!(!r.regular);
    }

    #[test]
    fn construct_regular_examples() {
        let lp = g(&["v"], &[("c", "v", "v")]);
        assert_eq!(
            Specialization::construct_regular(&lp).to_json(&lp),
            r#"{"gamma":{"v":"c"}}"#
        );
        let two = g(&["a", "b"], &[("x", "a", "b"), ("y", "b", "a")]);
        assert_eq!(
            Specialization::construct_regular(&two).to_json(&two),
            r#"{"gamma":{"a":"x","b":"y"}}"#
        );
        let y = g(&["a", "b", "c"], &[("ab", "a", "b"), ("ac", "a", "c")]);
        assert_eq!(
            Specialization::construct_regular(&y).to_json(&y),
            r#"{"gamma":{"a":"ab"}}"#
        );
        let t = toeplitz();
        let s = Specialization::construct_regular(&t);
        assert_eq!(s.to_json(&t), r#"{"gamma":{"v":"f"}}"#);
        assert!(s.is_regular(&t));
    }

    #[test]
    fn undirected_component_examples() {
        let t = toeplitz();
        let ga = Specialization::from_names(&t, [("v", "e")]).unwrap();
        let gb = Specialization::from_names(&t, [("v", "f")]).unwrap();
        let fmt = |s: &Specialization| {
            s.undirected_components(&t)
                .iter()
                .map(|c| t.fmt_set(c))
                .collect::<Vec<_>>()
        };
        assert_eq!(fmt(&gb), ["{v,w}"]);
        assert_eq!(fmt(&ga), ["{v}", "{w}"]);
        let sinks = g(&["a", "b"], &[]);
        let s = Specialization::from_names(&sinks, []).unwrap();
        assert_eq!(s.undirected_components(&sinks).len(), 2);
    }
}
