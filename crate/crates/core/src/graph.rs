//! Rooted multidigraphs, spanning-subgraph views and topological ordering.

use std::collections::{BTreeSet, BinaryHeap, HashMap, VecDeque};
use std::cmp::Reverse;

use thiserror::Error;

use crate::sets::{EdgeId, EdgeSet, VertexId, VertexSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("no root declared")]
    UndeclaredRoot,
    #[error("root `{root}` has ingoing edge `{edge}`")]
    RootHasIngoingEdge { root: String, edge: String },
    #[error("edge `{0}` is a loop")]
    Loop(String),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub tail: VertexId,
    pub head: VertexId,
}

/// A finite loop-free multidigraph with a root that has no ingoing edges.
///
/// Vertex and edge ids are opaque strings. Internally both are stored in
/// lexicographic order of their names, which makes every tie-break by id a
/// tie-break by index. Values are immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedDigraph {
    vertex_names: Vec<String>,
    edges: Vec<Edge>,
    root: VertexId,
    vertex_index: HashMap<String, VertexId>,
    edge_index: HashMap<String, EdgeId>,
    out_edges: Vec<Vec<EdgeId>>,
    in_edges: Vec<Vec<EdgeId>>,
    all_edges: EdgeSet,
}

impl RootedDigraph {
    /// Builds and validates a rooted digraph. The vertex set is the root,
    /// the listed vertices, and every edge endpoint.
    pub fn new<'s>(
        root: &str,
        vertices: impl IntoIterator<Item = &'s str>,
        edges: impl IntoIterator<Item = (&'s str, &'s str, &'s str)>,
    ) -> Result<Self, GraphError> {
        let edges: Vec<(&str, &str, &str)> = edges.into_iter().collect();
        let mut names: BTreeSet<&str> = vertices.into_iter().collect();
        names.insert(root);
        for &(_, tail, head) in &edges {
            names.insert(tail);
            names.insert(head);
        }
        let vertex_names: Vec<String> = names.into_iter().map(str::to_owned).collect();
        let vertex_index: HashMap<String, VertexId> = vertex_names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), VertexId(i)))
            .collect();

        let mut sorted = edges;
        sorted.sort_by(|a, b| a.0.cmp(b.0));
        for pair in sorted.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(GraphError::DuplicateEdge(pair[0].0.to_owned()));
            }
        }
        let root_id = vertex_index[root];
        let mut out_edges = vec![Vec::new(); vertex_names.len()];
        let mut in_edges = vec![Vec::new(); vertex_names.len()];
        let mut edge_list = Vec::with_capacity(sorted.len());
        let mut edge_index = HashMap::with_capacity(sorted.len());
        for (i, &(name, tail, head)) in sorted.iter().enumerate() {
            if tail == head {
                return Err(GraphError::Loop(name.to_owned()));
            }
            if head == root {
                return Err(GraphError::RootHasIngoingEdge {
                    root: root.to_owned(),
                    edge: name.to_owned(),
                });
            }
            let (t, h) = (vertex_index[tail], vertex_index[head]);
            out_edges[t.0].push(EdgeId(i));
            in_edges[h.0].push(EdgeId(i));
            edge_index.insert(name.to_owned(), EdgeId(i));
            edge_list.push(Edge {
                name: name.to_owned(),
                tail: t,
                head: h,
            });
        }
        let all_edges = EdgeSet::full(edge_list.len());
        Ok(RootedDigraph {
            vertex_names,
            edges: edge_list,
            root: root_id,
            vertex_index,
            edge_index,
            out_edges,
            in_edges,
            all_edges,
        })
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertex_names.len()).map(VertexId)
    }

    /// Non-root vertices in id order.
    pub fn non_root_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        let root = self.root;
        self.vertices().filter(move |&v| v != root)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0]
    }

    pub fn tail(&self, e: EdgeId) -> VertexId {
        self.edges[e.0].tail
    }

    pub fn head(&self, e: EdgeId) -> VertexId {
        self.edges[e.0].head
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v.0]
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edges[e.0].name
    }

    pub fn vertex(&self, name: &str) -> Result<VertexId, GraphError> {
        self.vertex_index
            .get(name)
            .copied()
            .ok_or_else(|| GraphError::UnknownVertex(name.to_owned()))
    }

    pub fn edge_by_name(&self, name: &str) -> Result<EdgeId, GraphError> {
        self.edge_index
            .get(name)
            .copied()
            .ok_or_else(|| GraphError::UnknownEdge(name.to_owned()))
    }

    pub fn edge_set<'s>(
        &self,
        names: impl IntoIterator<Item = &'s str>,
    ) -> Result<EdgeSet, GraphError> {
        let mut set = self.empty_edges();
        for name in names {
            set.insert(self.edge_by_name(name)?);
        }
        Ok(set)
    }

    pub fn vertex_set<'s>(
        &self,
        names: impl IntoIterator<Item = &'s str>,
    ) -> Result<VertexSet, GraphError> {
        let mut set = self.empty_vertices();
        for name in names {
            set.insert(self.vertex(name)?);
        }
        Ok(set)
    }

    pub fn edge_names(&self, set: &EdgeSet) -> Vec<String> {
        set.iter().map(|e| self.edge_name(e).to_owned()).collect()
    }

    pub fn vertex_names(&self, set: &VertexSet) -> Vec<String> {
        set.iter().map(|v| self.vertex_name(v).to_owned()).collect()
    }

    pub fn empty_edges(&self) -> EdgeSet {
        EdgeSet::empty(self.edges.len())
    }

    pub fn empty_vertices(&self) -> VertexSet {
        VertexSet::empty(self.vertex_names.len())
    }

    pub fn all_edges(&self) -> &EdgeSet {
        &self.all_edges
    }

    /// The whole digraph as a view.
    pub fn view(&self) -> DigraphView<'_> {
        DigraphView {
            graph: self,
            edges: &self.all_edges,
        }
    }

    /// The spanning subdigraph `(V, keep)`. Edge ids stay valid.
    pub fn restrict<'a>(&'a self, keep: &'a EdgeSet) -> DigraphView<'a> {
        debug_assert_eq!(keep.universe(), self.edges.len());
        DigraphView { graph: self, edges: keep }
    }

    /// A copy of this digraph with one more edge. Ids of the new digraph are
    /// re-indexed; look edges up again by name.
    pub fn with_edge(&self, name: &str, tail: &str, head: &str) -> Result<Self, GraphError> {
        let mut edges: Vec<(&str, &str, &str)> = self
            .edges
            .iter()
            .map(|e| {
                (
                    e.name.as_str(),
                    self.vertex_name(e.tail),
                    self.vertex_name(e.head),
                )
            })
            .collect();
        edges.push((name, tail, head));
        RootedDigraph::new(
            self.vertex_name(self.root),
            self.vertex_names.iter().map(String::as_str),
            edges,
        )
    }
}

/// A spanning subdigraph `D(F) = (V, F)` of a [`RootedDigraph`], sharing the
/// parent's vertex and edge ids.
#[derive(Clone, Copy, Debug)]
pub struct DigraphView<'a> {
    pub graph: &'a RootedDigraph,
    pub edges: &'a EdgeSet,
}

impl<'a> From<&'a RootedDigraph> for DigraphView<'a> {
    fn from(graph: &'a RootedDigraph) -> Self {
        graph.view()
    }
}

impl<'a> DigraphView<'a> {
    pub fn root(&self) -> VertexId {
        self.graph.root
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.edges.contains(e)
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        v.0 < self.graph.vertex_count()
    }

    pub fn out_edges(&self, v: VertexId) -> impl Iterator<Item = EdgeId> + 'a {
        let edges = self.edges;
        self.graph.out_edges[v.0]
            .iter()
            .copied()
            .filter(move |&e| edges.contains(e))
    }

    pub fn in_edges(&self, v: VertexId) -> impl Iterator<Item = EdgeId> + 'a {
        let edges = self.edges;
        self.graph.in_edges[v.0]
            .iter()
            .copied()
            .filter(move |&e| edges.contains(e))
    }

    /// Vertices reachable from `from` along edges of the view, skipping
    /// `blocked` edges.
    pub fn reachable_from(&self, from: VertexId, blocked: Option<&EdgeSet>) -> VertexSet {
        let mut seen = self.graph.empty_vertices();
        seen.insert(from);
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            for e in self.out_edges(u) {
                if blocked.is_some_and(|b| b.contains(e)) {
                    continue;
                }
                let w = self.graph.head(e);
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen
    }
}

fn check_vertex(view: &DigraphView<'_>, v: VertexId) -> Result<(), GraphError> {
    if view.has_vertex(v) {
        Ok(())
    } else {
        Err(GraphError::UnknownVertex(format!("#{}", v.0)))
    }
}

/// Ingoing edges of `v`. Empty for the root.
pub fn delta_in<'a>(d: impl Into<DigraphView<'a>>, v: VertexId) -> Result<EdgeSet, GraphError> {
    let view = d.into();
    check_vertex(&view, v)?;
    Ok(EdgeSet::from_ids(view.graph.edge_count(), view.in_edges(v)))
}

/// Edges with tail outside `x` and head inside `x`.
pub fn delta_in_set<'a>(
    d: impl Into<DigraphView<'a>>,
    x: &VertexSet,
) -> Result<EdgeSet, GraphError> {
    let view = d.into();
    if x.universe() != view.graph.vertex_count() {
        return Err(GraphError::UnknownVertex("vertex set of another digraph".into()));
    }
    let g = view.graph;
    let mut out = g.empty_edges();
    for e in view.edges.iter() {
        if x.contains(g.head(e)) && !x.contains(g.tail(e)) {
            out.insert(e);
        }
    }
    Ok(out)
}

/// A directed cycle, as its edges in traversal order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleCertificate(pub Vec<EdgeId>);

/// Source-deletion order starting at the root; among available sources the
/// smallest id goes first. Returns a directed cycle when none exists.
pub fn topological_order<'a>(
    d: impl Into<DigraphView<'a>>,
) -> Result<Vec<VertexId>, CycleCertificate> {
    let view = d.into();
    let g = view.graph;
    let n = g.vertex_count();
    let mut indegree: Vec<usize> = g.vertices().map(|v| view.in_edges(v).count()).collect();
    let mut order = Vec::with_capacity(n);
    let mut heap: BinaryHeap<Reverse<VertexId>> = g
        .vertices()
        .filter(|&v| v != g.root && indegree[v.0] == 0)
        .map(Reverse)
        .collect();
    let mut pending = vec![g.root];
    loop {
        let u = match pending.pop() {
            Some(u) => u,
            None => match heap.pop() {
                Some(Reverse(u)) => u,
                None => break,
            },
        };
        order.push(u);
        for e in view.out_edges(u) {
            let w = g.head(e);
            indegree[w.0] -= 1;
            if indegree[w.0] == 0 {
                heap.push(Reverse(w));
            }
        }
    }
    if order.len() == n {
        return Ok(order);
    }

    // Every remaining vertex has an ingoing edge from another remaining
    // vertex; walk those backwards until a vertex repeats.
    let remaining: Vec<bool> = indegree.iter().map(|&k| k > 0).collect();
    let start = (0..n).find(|&i| remaining[i]).map(VertexId).unwrap();
    let mut position: HashMap<VertexId, usize> = HashMap::new();
    let mut back_edges = Vec::new();
    let mut current = start;
    loop {
        if let Some(&pos) = position.get(&current) {
            let mut cycle: Vec<EdgeId> = back_edges[pos..].to_vec();
            cycle.reverse();
            let min_at = (0..cycle.len()).min_by_key(|&i| cycle[i]).unwrap();
            cycle.rotate_left(min_at);
            return Err(CycleCertificate(cycle));
        }
        position.insert(current, back_edges.len());
        let e = view
            .in_edges(current)
            .find(|&e| remaining[g.tail(e).0])
            .expect("remaining vertex without remaining in-edge");
        back_edges.push(e);
        current = g.tail(e);
    }
}

pub fn is_acyclic<'a>(d: impl Into<DigraphView<'a>>) -> bool {
    topological_order(d).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn builds_single_edge_graph() {
        let t1 = fixtures::t1();
        assert_eq!(t1.vertex_count(), 2);
        assert_eq!(t1.edge_count(), 1);
        let e1 = t1.edge_by_name("e1").unwrap();
        assert_eq!(t1.vertex_name(t1.tail(e1)), "r");
        assert_eq!(t1.vertex_name(t1.head(e1)), "v");
    }

    #[test]
    fn rejects_invalid_graphs() {
        assert!(matches!(
            RootedDigraph::new("r", [], [("e1", "v", "r")]),
            Err(GraphError::RootHasIngoingEdge { .. })
        ));
        assert!(matches!(
            RootedDigraph::new("r", [], [("e1", "v", "v")]),
            Err(GraphError::Loop(_))
        ));
        assert!(matches!(
            RootedDigraph::new("r", [], [("e1", "r", "v"), ("e1", "r", "w")]),
            Err(GraphError::DuplicateEdge(_))
        ));
    }

    #[test]
    fn parallel_edges_are_distinct() {
        let g1 = fixtures::g1();
        let a = g1.vertex("a").unwrap();
        assert_eq!(g1.edge_names(&delta_in(&g1, a).unwrap()), ["e1", "e2"]);
    }

    #[test]
    fn delta_of_sets() {
        let g1 = fixtures::g1();
        let b = g1.vertex_set(["b"]).unwrap();
        let ab = g1.vertex_set(["a", "b"]).unwrap();
        assert_eq!(g1.edge_names(&delta_in_set(&g1, &b).unwrap()), ["e3", "e4"]);
        assert_eq!(
            g1.edge_names(&delta_in_set(&g1, &ab).unwrap()),
            ["e1", "e2", "e4"]
        );
        assert!(delta_in(&g1, g1.root()).unwrap().is_empty());
    }

    #[test]
    fn delta_in_set_restricted_view() {
        let g1 = fixtures::g1();
        let keep = g1.edge_set(["e1", "e3"]).unwrap();
        let b = g1.vertex_set(["b"]).unwrap();
        assert_eq!(
            g1.edge_names(&delta_in_set(g1.restrict(&keep), &b).unwrap()),
            ["e3"]
        );
    }

    #[test]
    fn topological_orders() {
        let g1 = fixtures::g1();
        let order = topological_order(&g1).unwrap();
        let names: Vec<_> = order.iter().map(|&v| g1.vertex_name(v)).collect();
        assert_eq!(names, ["r", "a", "b"]);

        let lone = RootedDigraph::new("r", [], []).unwrap();
        assert_eq!(topological_order(&lone).unwrap(), vec![lone.root()]);

        let c1 = fixtures::c1();
        let cycle = topological_order(&c1).unwrap_err();
        let names: Vec<_> = cycle.0.iter().map(|&e| c1.edge_name(e)).collect();
        assert_eq!(names, ["e2", "e3"]);
    }

    #[test]
    fn root_goes_first_even_when_not_smallest() {
        let g = RootedDigraph::new("z", ["a"], [("e1", "z", "b")]).unwrap();
        let order = topological_order(&g).unwrap();
        assert_eq!(order[0], g.root());
        assert_eq!(order.len(), 3);
    }

    #[test]
    fn with_edge_reindexes_by_name() {
        let g1 = fixtures::g1();
        let g = g1.with_edge("e0", "r", "b").unwrap();
        assert_eq!(g.edge_count(), 5);
        assert_eq!(g.edge_name(EdgeId(0)), "e0");
        assert!(g1.with_edge("e1", "r", "b").is_err());
    }
}
