//! Unit-capacity edge-disjoint path computations.
//!
//! Every query is reduced to a flow problem on a small auxiliary network:
//! one node per vertex (a target vertex set may be contracted into a single
//! node), one unit arc per edge, optional subdivision nodes for edges that
//! must start a path, and unit lower bounds on edges that must be covered.
//! Lower bounds are handled by the usual circulation reduction. The flow is
//! then decomposed into simple paths by walking from the source along flow
//! edges in ascending edge-id order, cutting off any cycle met on the way.

mod network;
mod paths;

use thiserror::Error;

use crate::graph::{delta_in_set, DigraphView};
use crate::sets::{EdgeId, EdgeSet, VertexId, VertexSet};
use network::{Network, UNBOUNDED};
pub use paths::{Path, PathSystem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FlowError {
    #[error("source and sink coincide")]
    SameEndpoints,
    #[error("vertex #{0} is not in the digraph")]
    UnknownVertex(usize),
    #[error("edge `{0}` is not in the digraph")]
    EdgeNotInDigraph(String),
    #[error("the sink is the root but edges are required")]
    SinkIsRoot,
    #[error("invalid path system: {0}")]
    InvalidPathSystem(String),
    #[error("required edge `{0}` is only carried by a circulation; coverage by simple paths is undecided")]
    Undecided(String),
    #[error("the path starting with `{0}` returns to its first vertex")]
    NonSimpleForcedPath(String),
}

/// An edge-disjoint path system together with an edge cut that meets every
/// path exactly once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutWitness {
    pub cut: EdgeSet,
    pub path_system: PathSystem,
}

/// Where the paths of a [`required_edge_paths`] query begin.
#[derive(Debug, Clone)]
pub enum PathSource {
    /// Every path starts at this vertex.
    Vertex(VertexId),
    /// Each listed edge is the initial edge of exactly one path, and every
    /// path starts with one of them.
    ForcedEdges(EdgeSet),
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Goal {
    Maximum,
    Feasible,
}

struct Query<'a, 'q> {
    view: DigraphView<'a>,
    source: &'q PathSource,
    targets: &'q VertexSet,
    required: &'q EdgeSet,
}

struct EdgeArc {
    edge: EdgeId,
    arc: usize,
    from: usize,
    to: usize,
    lower: i64,
}

impl Query<'_, '_> {
    /// Solves the query; `None` means infeasible. Returned paths run from the
    /// source (or forced edge) into `targets` and meet `targets` only at
    /// their last vertex.
    fn solve(&self, goal: Goal) -> Result<Option<Vec<Path>>, FlowError> {
        let g = self.view.graph;
        let n = g.vertex_count();
        let sink = n;
        let node = |v: VertexId| if self.targets.contains(v) { sink } else { v.index() };
        let mut net = Network::with_nodes(n + 1);

        let (source, forced) = match self.source {
            PathSource::Vertex(s) => (node(*s), None),
            PathSource::ForcedEdges(set) => (net.add_node(), Some(set)),
        };
        let mut sub: Vec<Option<usize>> = vec![None; g.edge_count()];
        if let Some(set) = forced {
            for e in set.iter() {
                sub[e.index()] = Some(net.add_node());
            }
        }

        let mut arcs = Vec::new();
        for e in self.view.edges.iter() {
            let (tail, head) = (g.tail(e), g.head(e));
            if self.targets.contains(tail) {
                continue;
            }
            if let PathSource::Vertex(s) = self.source {
                if head == *s {
                    continue;
                }
            }
            let from = sub[e.index()].unwrap_or_else(|| node(tail));
            let to = node(head);
            let arc = net.add_arc(from, to, 1);
            let lower = i64::from(self.required.contains(e));
            arcs.push(EdgeArc { edge: e, arc, from, to, lower });
        }
        let mut super_arcs = Vec::new();
        if let Some(set) = forced {
            for e in set.iter() {
                let s = sub[e.index()].unwrap();
                let arc = net.add_arc(source, s, 1);
                super_arcs.push((e, arc, s));
            }
        }

        let has_lower = arcs.iter().any(|a| a.lower > 0) || forced.is_some_and(|f| !f.is_empty());
        match goal {
            Goal::Maximum => {
                debug_assert!(self.required.is_empty());
                net.max_flow(source, sink, UNBOUNDED);
            }
            Goal::Feasible if !has_lower => return Ok(Some(Vec::new())),
            Goal::Feasible => {
                // Circulation reduction: move each unit lower bound into
                // node excesses, close the network with sink → source, and
                // look for a flow saturating the super arcs.
                let mut excess = vec![0i64; net.node_count()];
                let mut lowered: Vec<(usize, usize, usize)> = Vec::new();
                for a in arcs.iter().filter(|a| a.lower > 0) {
                    lowered.push((a.arc, a.from, a.to));
                }
                for &(_, arc, s) in &super_arcs {
                    lowered.push((arc, source, s));
                }
                let mut lowered_arcs = Vec::new();
                for (arc, from, to) in lowered {
                    net.set_capacity(arc, 0);
                    excess[to] += 1;
                    excess[from] -= 1;
                    lowered_arcs.push(arc);
                }
                net.add_arc(sink, source, UNBOUNDED);
                let super_source = net.add_node();
                let super_sink = net.add_node();
                let mut demand = 0;
                for (v, &x) in excess.iter().enumerate() {
                    if x > 0 {
                        net.add_arc(super_source, v, x);
                        demand += x;
                    } else if x < 0 {
                        net.add_arc(v, super_sink, -x);
                    }
                }
                if net.max_flow(super_source, super_sink, UNBOUNDED) < demand {
                    return Ok(None);
                }
                for arc in lowered_arcs {
                    net.mark_lower_bound(arc);
                }
            }
        }

        let used: Vec<&EdgeArc> = arcs.iter().filter(|a| net.flow(a.arc) > 0).collect();
        let starts: Vec<usize> = match forced {
            None => vec![source],
            Some(_) => super_arcs
                .iter()
                .filter(|&&(_, arc, _)| net.flow(arc) > 0)
                .map(|&(_, _, s)| s)
                .collect(),
        };
        let paths = decompose(&used, net.node_count(), &starts, forced.is_none(), sink);

        if let Some(set) = forced {
            for p in &paths {
                let first = g.tail(p.initial_edge());
                if p.0.iter().any(|&e| g.head(e) == first) {
                    return Err(FlowError::NonSimpleForcedPath(
                        g.edge_name(p.initial_edge()).to_owned(),
                    ));
                }
            }
            if goal == Goal::Maximum && paths.len() < set.len() {
                return Ok(None);
            }
        }
        let covered = EdgeSet::from_ids(g.edge_count(), paths.iter().flat_map(|p| p.0.iter().copied()));
        if let Some(e) = self.required.iter().find(|&e| !covered.contains(e)) {
            return Err(FlowError::Undecided(g.edge_name(e).to_owned()));
        }
        if goal == Goal::Feasible {
            let keep: Vec<Path> = paths
                .into_iter()
                .filter(|p| forced.is_some() || p.0.iter().any(|&e| self.required.contains(e)))
                .collect();
            return Ok(Some(keep));
        }
        Ok(Some(paths))
    }
}

impl Network {
    fn set_capacity(&mut self, arc: usize, cap: i64) {
        self.set_residual(arc, cap);
    }

    /// Re-adds the unit lower bound of a reduced arc so that `flow` reports
    /// the real flow on it.
    fn mark_lower_bound(&mut self, arc: usize) {
        self.add_to_reverse(arc, 1);
    }
}

/// Splits the flow carried by `used` into simple paths ending at `sink`.
/// Each start is walked once, or until its flow is exhausted when `repeat`
/// is set. Cycles met while walking are dropped.
fn decompose(
    used: &[&EdgeArc],
    node_count: usize,
    starts: &[usize],
    repeat: bool,
    sink: usize,
) -> Vec<Path> {
    let mut out_arcs: Vec<Vec<usize>> = vec![Vec::new(); node_count];
    for (i, a) in used.iter().enumerate() {
        out_arcs[a.from].push(i);
    }
    let mut cursor = vec![0usize; node_count];
    let mut position: Vec<Option<usize>> = vec![None; node_count];
    let mut paths = Vec::new();

    for &start in starts {
        while cursor[start] < out_arcs[start].len() {
            let mut nodes = vec![start];
            let mut edges: Vec<EdgeId> = Vec::new();
            position[start] = Some(0);
            while *nodes.last().unwrap() != sink {
                let u = *nodes.last().unwrap();
                let i = out_arcs[u][cursor[u]];
                cursor[u] += 1;
                let w = used[i].to;
                if let Some(pos) = position[w] {
                    for &x in &nodes[pos + 1..] {
                        position[x] = None;
                    }
                    nodes.truncate(pos + 1);
                    edges.truncate(pos);
                } else {
                    position[w] = Some(nodes.len());
                    nodes.push(w);
                    edges.push(used[i].edge);
                }
            }
            for &x in &nodes {
                position[x] = None;
            }
            paths.push(Path(edges));
            if !repeat {
                break;
            }
        }
    }
    paths.sort();
    paths
}

fn check_vertex(view: &DigraphView<'_>, v: VertexId) -> Result<(), FlowError> {
    if view.has_vertex(v) {
        Ok(())
    } else {
        Err(FlowError::UnknownVertex(v.index()))
    }
}

fn check_edges(view: &DigraphView<'_>, set: &EdgeSet) -> Result<(), FlowError> {
    if set.universe() != view.graph.edge_count() {
        return Err(FlowError::EdgeNotInDigraph("edge set of another digraph".into()));
    }
    match set.iter().find(|&e| !view.contains_edge(e)) {
        Some(e) => Err(FlowError::EdgeNotInDigraph(view.graph.edge_name(e).to_owned())),
        None => Ok(()),
    }
}

fn singleton(view: &DigraphView<'_>, v: VertexId) -> VertexSet {
    VertexSet::from_ids(view.graph.vertex_count(), [v])
}

/// Maximum system of edge-disjoint `s→t` paths (its size is `λ(s,t)`) with
/// the `s→t` cut `δ(X)`, where `X` is the set of vertices not reachable from
/// `s` in the residual digraph. The cut meets each path exactly once.
pub fn max_edge_disjoint_paths<'a>(
    d: impl Into<DigraphView<'a>>,
    s: VertexId,
    t: VertexId,
) -> Result<CutWitness, FlowError> {
    let view = d.into();
    check_vertex(&view, s)?;
    check_vertex(&view, t)?;
    if s == t {
        return Err(FlowError::SameEndpoints);
    }
    let targets = singleton(&view, t);
    let empty = view.graph.empty_edges();
    let source = PathSource::Vertex(s);
    let paths = Query { view, source: &source, targets: &targets, required: &empty }
        .solve(Goal::Maximum)?
        .unwrap_or_default();
    let path_system = PathSystem::new(paths);
    let far_side = residual_unreachable_set(view, &path_system, s);
    let cut = delta_in_set(view, &far_side).expect("vertex set of this digraph");
    Ok(CutWitness { cut, path_system })
}

/// Local edge-connectivity `λ(s,t)`.
pub fn local_connectivity<'a>(
    d: impl Into<DigraphView<'a>>,
    s: VertexId,
    t: VertexId,
) -> Result<usize, FlowError> {
    let view = d.into();
    check_vertex(&view, s)?;
    check_vertex(&view, t)?;
    if s == t {
        return Err(FlowError::SameEndpoints);
    }
    let targets = singleton(&view, t);
    let empty = view.graph.empty_edges();
    let source = PathSource::Vertex(s);
    let paths = Query { view, source: &source, targets: &targets, required: &empty }
        .solve(Goal::Maximum)?
        .unwrap_or_default();
    Ok(paths.len())
}

/// Edge-disjoint paths into `sink` that cover `required`, either all starting
/// at a vertex or each starting with a distinct forced edge (then every
/// forced edge starts one path). `Ok(None)` means no such system exists.
///
/// Paths carrying no requirement are dropped from vertex-sourced answers.
/// Requirements on edges entering the sink or leaving the source vertex are
/// decided exactly; for other required edges the answer may be
/// [`FlowError::Undecided`] when the flow only covers them with a cycle.
pub fn required_edge_paths<'a>(
    d: impl Into<DigraphView<'a>>,
    source: &PathSource,
    required: &EdgeSet,
    sink: VertexId,
) -> Result<Option<PathSystem>, FlowError> {
    let view = d.into();
    check_vertex(&view, sink)?;
    check_edges(&view, required)?;
    match source {
        PathSource::Vertex(s) => {
            check_vertex(&view, *s)?;
            if *s == sink {
                return Err(FlowError::SameEndpoints);
            }
        }
        PathSource::ForcedEdges(set) => check_edges(&view, set)?,
    }
    if sink == view.root() && (!required.is_empty() || matches!(source, PathSource::ForcedEdges(f) if !f.is_empty())) {
        return Err(FlowError::SinkIsRoot);
    }
    let targets = singleton(&view, sink);
    let paths = Query { view, source, targets: &targets, required }.solve(Goal::Feasible)?;
    Ok(paths.map(PathSystem::new))
}

/// Edge-disjoint paths from `s` into the set `targets`, each meeting
/// `targets` only at its end, whose terminal edges are exactly all edges
/// entering `targets`.
pub(crate) fn fill_paths(
    view: DigraphView<'_>,
    s: VertexId,
    targets: &VertexSet,
) -> Result<Option<PathSystem>, FlowError> {
    let boundary = delta_in_set(view, targets).expect("vertex set of this digraph");
    let source = PathSource::Vertex(s);
    let empty = view.graph.empty_edges();
    let paths = Query { view, source: &source, targets, required: &empty }
        .solve(Goal::Maximum)?
        .unwrap_or_default();
    if paths.len() < boundary.len() {
        return Ok(None);
    }
    Ok(Some(PathSystem::new(paths)))
}

/// Splits an edge set carrying a unit flow from `s` into `targets` into
/// simple paths; edges on cycles are dropped.
pub(crate) fn decompose_into_paths(
    view: DigraphView<'_>,
    edges: &EdgeSet,
    s: VertexId,
    targets: &VertexSet,
) -> Vec<Path> {
    let g = view.graph;
    let sink = g.vertex_count();
    let node = |v: VertexId| if targets.contains(v) { sink } else { v.index() };
    let arcs: Vec<EdgeArc> = edges
        .iter()
        .filter(|&e| !targets.contains(g.tail(e)))
        .map(|e| EdgeArc {
            edge: e,
            arc: 0,
            from: node(g.tail(e)),
            to: node(g.head(e)),
            lower: 0,
        })
        .collect();
    let used: Vec<&EdgeArc> = arcs.iter().collect();
    decompose(&used, sink + 1, &[node(s)], true, sink)
}

/// Vertices not reachable from `s` in the residual digraph of `flow_paths`:
/// edges used by a path are reversed, all other edges keep their direction.
pub fn residual_unreachable_set<'a>(
    d: impl Into<DigraphView<'a>>,
    flow_paths: &PathSystem,
    s: VertexId,
) -> VertexSet {
    let view = d.into();
    let g = view.graph;
    let used = flow_paths.edge_union(g.edge_count());
    let mut reached = g.empty_vertices();
    reached.insert(s);
    let mut stack = vec![s];
    while let Some(u) = stack.pop() {
        for e in view.out_edges(u) {
            if !used.contains(e) && reached.insert(g.head(e)) {
                stack.push(g.head(e));
            }
        }
        for e in view.in_edges(u) {
            if used.contains(e) && reached.insert(g.tail(e)) {
                stack.push(g.tail(e));
            }
        }
    }
    reached.complement()
}

/// Merges two `s→t` systems into one system `R` with `in(P) ⊆ in(R)` and
/// `ter(Q) ⊆ ter(R)`.
pub fn linkage_merge<'a>(
    d: impl Into<DigraphView<'a>>,
    s: VertexId,
    t: VertexId,
    p: &PathSystem,
    q: &PathSystem,
) -> Result<PathSystem, FlowError> {
    let view = d.into();
    check_vertex(&view, s)?;
    check_vertex(&view, t)?;
    if s == t {
        return Err(FlowError::SameEndpoints);
    }
    let target = singleton(&view, t);
    for (label, sys) in [("P", p), ("Q", q)] {
        sys.check(&view, Some(s), &target)
            .map_err(|m| FlowError::InvalidPathSystem(format!("{label}: {m}")))?;
    }
    let m = view.graph.edge_count();
    let required = p.initial_edges(m).union(&q.terminal_edges(m));
    let source = PathSource::Vertex(s);
    let merged = Query { view, source: &source, targets: &target, required: &required }
        .solve(Goal::Feasible)?
        .expect("a merged linkage always exists");
    Ok(PathSystem::new(merged))
}
