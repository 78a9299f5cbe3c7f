use std::collections::HashSet;

use crate::graph::{DigraphView, RootedDigraph};
use crate::sets::{EdgeId, EdgeSet, VertexId, VertexSet};

/// A finite directed path, stored as its edge sequence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path(pub Vec<EdgeId>);

impl Path {
    pub fn edges(&self) -> &[EdgeId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn initial_edge(&self) -> EdgeId {
        self.0[0]
    }

    pub fn terminal_edge(&self) -> EdgeId {
        *self.0.last().unwrap()
    }

    pub fn start(&self, g: &RootedDigraph) -> VertexId {
        g.tail(self.initial_edge())
    }

    pub fn end(&self, g: &RootedDigraph) -> VertexId {
        g.head(self.terminal_edge())
    }

    /// Vertex sequence, starting with the tail of the first edge.
    pub fn vertices(&self, g: &RootedDigraph) -> Vec<VertexId> {
        let mut out = Vec::with_capacity(self.0.len() + 1);
        out.push(self.start(g));
        out.extend(self.0.iter().map(|&e| g.head(e)));
        out
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.0.contains(&e)
    }

    /// Position of the first edge satisfying `pred`.
    pub fn position(&self, pred: impl Fn(EdgeId) -> bool) -> Option<usize> {
        self.0.iter().position(|&e| pred(e))
    }

    pub fn names(&self, g: &RootedDigraph) -> Vec<String> {
        self.0.iter().map(|&e| g.edge_name(e).to_owned()).collect()
    }

    /// Checks that the edges lie in `view` and form a walk that repeats no
    /// vertex.
    pub fn check_simple(&self, view: &DigraphView<'_>) -> Result<(), String> {
        let g = view.graph;
        if self.0.is_empty() {
            return Err("empty path".into());
        }
        for pair in self.0.windows(2) {
            if g.head(pair[0]) != g.tail(pair[1]) {
                return Err(format!(
                    "edges {} and {} are not consecutive",
                    g.edge_name(pair[0]),
                    g.edge_name(pair[1])
                ));
            }
        }
        if let Some(&e) = self.0.iter().find(|&&e| !view.contains_edge(e)) {
            return Err(format!("edge {} is not in the digraph", g.edge_name(e)));
        }
        let mut seen = HashSet::new();
        for v in self.vertices(g) {
            if !seen.insert(v) {
                return Err(format!("vertex {} repeats", g.vertex_name(v)));
            }
        }
        Ok(())
    }
}

/// A set of pairwise edge-disjoint paths. Paths are kept sorted by their
/// initial edge id.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct PathSystem {
    paths: Vec<Path>,
}

impl PathSystem {
    pub fn new(mut paths: Vec<Path>) -> Self {
        paths.sort();
        PathSystem { paths }
    }

    pub fn from_edge_lists<I: IntoIterator<Item = Vec<EdgeId>>>(lists: I) -> Self {
        Self::new(lists.into_iter().map(Path).collect())
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn into_paths(self) -> Vec<Path> {
        self.paths
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn initial_edges(&self, universe: usize) -> EdgeSet {
        EdgeSet::from_ids(universe, self.paths.iter().map(Path::initial_edge))
    }

    pub fn terminal_edges(&self, universe: usize) -> EdgeSet {
        EdgeSet::from_ids(universe, self.paths.iter().map(Path::terminal_edge))
    }

    /// `⋃ P`: every edge used by some path.
    pub fn edge_union(&self, universe: usize) -> EdgeSet {
        EdgeSet::from_ids(universe, self.paths.iter().flat_map(|p| p.0.iter().copied()))
    }

    pub fn is_edge_disjoint(&self) -> bool {
        let mut seen = HashSet::new();
        self.paths
            .iter()
            .flat_map(|p| p.0.iter())
            .all(|e| seen.insert(*e))
    }

    /// Path whose initial edge is `e`.
    pub fn starting_with(&self, e: EdgeId) -> Option<&Path> {
        self.paths.iter().find(|p| p.initial_edge() == e)
    }

    /// Path whose terminal edge is `e`.
    pub fn ending_with(&self, e: EdgeId) -> Option<&Path> {
        self.paths.iter().find(|p| p.terminal_edge() == e)
    }

    pub fn covers(&self, set: &EdgeSet) -> bool {
        set.is_subset(&self.edge_union(set.universe()))
    }

    /// Every path simple, inside `view`, pairwise edge-disjoint, starting at
    /// `from` (when given) and ending in `to`.
    pub fn check(
        &self,
        view: &DigraphView<'_>,
        from: Option<VertexId>,
        to: &VertexSet,
    ) -> Result<(), String> {
        let g = view.graph;
        for p in &self.paths {
            p.check_simple(view)?;
            if let Some(s) = from {
                if p.start(g) != s {
                    return Err(format!("path {:?} does not start at {}", p.names(g), g.vertex_name(s)));
                }
            }
            if !to.contains(p.end(g)) {
                return Err(format!("path {:?} ends outside the target", p.names(g)));
            }
        }
        if !self.is_edge_disjoint() {
            return Err("paths share an edge".into());
        }
        Ok(())
    }

    pub fn names(&self, g: &RootedDigraph) -> Vec<Vec<String>> {
        self.paths.iter().map(|p| p.names(g)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn path(g: &RootedDigraph, names: &[&str]) -> Path {
        Path(names.iter().map(|n| g.edge_by_name(n).unwrap()).collect())
    }

    #[test]
    fn simple_path_checks() {
        let g1 = fixtures::g1();
        assert!(path(&g1, &["e1", "e3"]).check_simple(&g1.view()).is_ok());
        assert!(path(&g1, &["e3", "e1"]).check_simple(&g1.view()).is_err());
        let c1 = fixtures::c1();
        assert!(path(&c1, &["e1", "e2", "e3"]).check_simple(&c1.view()).is_err());
    }

    #[test]
    fn system_bookkeeping() {
        let g1 = fixtures::g1();
        let sys = PathSystem::new(vec![path(&g1, &["e4"]), path(&g1, &["e1", "e3"])]);
        assert_eq!(sys.names(&g1), vec![vec!["e1", "e3"], vec!["e4"]]);
        assert_eq!(g1.edge_names(&sys.initial_edges(4)), ["e1", "e4"]);
        assert_eq!(g1.edge_names(&sys.terminal_edges(4)), ["e3", "e4"]);
        assert!(sys.is_edge_disjoint());
        let b = g1.vertex_set(["b"]).unwrap();
        assert!(sys.check(&g1.view(), Some(g1.root()), &b).is_ok());

        let clash = PathSystem::new(vec![path(&g1, &["e1", "e3"]), path(&g1, &["e2", "e3"])]);
        assert!(!clash.is_edge_disjoint());
        assert!(clash.check(&g1.view(), Some(g1.root()), &b).is_err());
    }
}
