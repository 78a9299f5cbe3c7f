//! v-linked vertex sets, the largest v-linked set `X_{v,D}`, fillability and
//! the witnesses tying them together.
//!
//! A set `X ∌ r` with `v ∈ X` is v-linked when every edge entering `X` starts
//! its own path to `v`, all paths edge-disjoint. It is fillable when
//! edge-disjoint paths from the root end in exactly the edges entering `X`.

use std::collections::VecDeque;

use thiserror::Error;

use crate::flow::{
    self, decompose_into_paths, max_edge_disjoint_paths, residual_unreachable_set, CutWitness,
    FlowError, Path, PathSource, PathSystem,
};
use crate::graph::{delta_in, delta_in_set, DigraphView};
use crate::sets::{EdgeId, EdgeSet, VertexId, VertexSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinkedError {
    #[error("the target vertex is the root")]
    RootTarget,
    #[error("the vertex set does not contain the target vertex")]
    MissingTarget,
    #[error("the vertex set contains the root")]
    ContainsRoot,
    #[error("the vertex set is empty")]
    EmptySet,
    #[error("the vertex set is not linked to the target")]
    NotLinked,
    #[error("the edge set is not coverable by edge-disjoint root paths")]
    Dependent,
    #[error("edge `{0}` is not an ingoing edge of the target")]
    NotIngoing(String),
    #[error("edge `{0}` must be a new edge entering the linked set")]
    BadNewEdge(String),
    #[error("input was not the largest v-linked set")]
    NotLargest,
    #[error(transparent)]
    Flow(#[from] FlowError),
}

/// `X_{v,D}` with its boundary `δ_D(X)` and both witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkedSetResult {
    pub vertex: VertexId,
    pub linked_set: VertexSet,
    pub boundary: EdgeSet,
    /// One path per boundary edge, starting with it and ending at `vertex`.
    pub link_witness: PathSystem,
    /// Root paths whose terminal edges are exactly the boundary.
    pub fill_witness: PathSystem,
}

fn check_set(view: &DigraphView<'_>, x: &VertexSet) -> Result<(), LinkedError> {
    if x.contains(view.root()) {
        return Err(LinkedError::ContainsRoot);
    }
    if x.is_empty() {
        return Err(LinkedError::EmptySet);
    }
    Ok(())
}

/// Link witness for `X` towards `v`, or `None` if `X` is not v-linked.
pub fn is_v_linked<'a>(
    d: impl Into<DigraphView<'a>>,
    x: &VertexSet,
    v: VertexId,
) -> Result<Option<PathSystem>, LinkedError> {
    let view = d.into();
    check_set(&view, x)?;
    if !x.contains(v) {
        return Err(LinkedError::MissingTarget);
    }
    let boundary = delta_in_set(view, x).expect("vertex set of this digraph");
    let none = view.graph.empty_edges();
    Ok(flow::required_edge_paths(view, &PathSource::ForcedEdges(boundary), &none, v)?)
}

/// The ⊆-largest v-linked set, read off a maximum root→v path system: it is
/// the set of vertices the root cannot reach in the residual digraph. When
/// `v` is not reachable from the root this is every unreachable vertex and
/// the boundary is empty.
pub fn largest_v_linked_set<'a>(
    d: impl Into<DigraphView<'a>>,
    v: VertexId,
) -> Result<LinkedSetResult, LinkedError> {
    let view = d.into();
    let r = view.root();
    if v == r {
        return Err(LinkedError::RootTarget);
    }
    let CutWitness { cut, path_system } = max_edge_disjoint_paths(view, r, v)?;
    let linked_set = residual_unreachable_set(view, &path_system, r);
    let mut fill = Vec::with_capacity(path_system.len());
    let mut link = Vec::with_capacity(path_system.len());
    for p in path_system.paths() {
        let at = p
            .position(|e| cut.contains(e))
            .expect("each flow path crosses the cut");
        fill.push(Path(p.edges()[..=at].to_vec()));
        link.push(Path(p.edges()[at..].to_vec()));
    }
    Ok(LinkedSetResult {
        vertex: v,
        linked_set,
        boundary: cut,
        link_witness: PathSystem::new(link),
        fill_witness: PathSystem::new(fill),
    })
}

/// Fill witness for `X`, or `None` if `X` is not fillable.
pub fn is_fillable<'a>(
    d: impl Into<DigraphView<'a>>,
    x: &VertexSet,
) -> Result<Option<PathSystem>, LinkedError> {
    let view = d.into();
    check_set(&view, x)?;
    Ok(flow::fill_paths(view, view.root(), x)?)
}

/// After adding a new edge `e` entering `X_{v,D}`, the set stays fillable.
/// `d` is the digraph without `e`; `e` must be an edge of the same
/// underlying graph that is absent from `d`. The new fill witness comes from
/// one augmenting search in the digraph where the old witness is reversed.
pub fn augment_fill_after_insert<'a>(
    d: impl Into<DigraphView<'a>>,
    res: &LinkedSetResult,
    e: EdgeId,
) -> Result<PathSystem, LinkedError> {
    let view = d.into();
    let g = view.graph;
    let x = &res.linked_set;
    if view.contains_edge(e) || !x.contains(g.head(e)) || x.contains(g.tail(e)) {
        return Err(LinkedError::BadNewEdge(g.edge_name(e).to_owned()));
    }
    let mut extended = view.edges.clone();
    extended.insert(e);
    let bigger = g.restrict(&extended);
    let used = res.fill_witness.edge_union(g.edge_count());

    let r = view.root();
    let mut via: Vec<Option<(EdgeId, bool)>> = vec![None; g.vertex_count()];
    let mut seen = g.empty_vertices();
    seen.insert(r);
    let mut queue = VecDeque::from([r]);
    let mut reached = None;
    'search: while let Some(u) = queue.pop_front() {
        let forward = bigger.out_edges(u).filter(|&f| !used.contains(f)).map(|f| (f, true));
        let backward = bigger.in_edges(u).filter(|&f| used.contains(f)).map(|f| (f, false));
        for (f, fwd) in forward.chain(backward).collect::<Vec<_>>() {
            let w = if fwd { g.head(f) } else { g.tail(f) };
            if seen.insert(w) {
                via[w.index()] = Some((f, fwd));
                if x.contains(w) {
                    reached = Some(w);
                    break 'search;
                }
                queue.push_back(w);
            }
        }
    }
    let Some(end) = reached else {
        return Err(LinkedError::NotLargest);
    };
    let mut edges = used;
    let mut cur = end;
    while cur != r {
        let (f, fwd) = via[cur.index()].unwrap();
        if fwd {
            edges.insert(f);
            cur = g.tail(f);
        } else {
            edges.remove(f);
            cur = g.head(f);
        }
    }
    let paths = PathSystem::new(decompose_into_paths(bigger, &edges, r, x));
    let mut expected = res.boundary.clone();
    expected.insert(e);
    if paths.terminal_edges(g.edge_count()) != expected || paths.len() != expected.len() {
        return Err(LinkedError::NotLargest);
    }
    Ok(paths)
}

/// A link witness for `X` towards `v` whose paths also cover `i ⊆ δ(v)`.
pub fn covering_linked_witness<'a>(
    d: impl Into<DigraphView<'a>>,
    v: VertexId,
    x: &VertexSet,
    i: &EdgeSet,
) -> Result<PathSystem, LinkedError> {
    let view = d.into();
    if is_v_linked(view, x, v)?.is_none() {
        return Err(LinkedError::NotLinked);
    }
    let ingoing = delta_in(view, v).expect("vertex of this digraph");
    if let Some(e) = i.iter().find(|&e| !ingoing.contains(e)) {
        return Err(LinkedError::NotIngoing(view.graph.edge_name(e).to_owned()));
    }
    if flow::required_edge_paths(view, &PathSource::Vertex(view.root()), i, v)?.is_none() {
        return Err(LinkedError::Dependent);
    }
    let boundary = delta_in_set(view, x).expect("vertex set of this digraph");
    flow::required_edge_paths(view, &PathSource::ForcedEdges(boundary), i, v)?
        .ok_or(LinkedError::NotLinked)
}

/// Joins each fill path to the link path starting with its terminal edge.
pub(crate) fn splice(fill: &PathSystem, link: &PathSystem) -> PathSystem {
    let joined = fill
        .paths()
        .iter()
        .map(|f| {
            let tail = link
                .starting_with(f.terminal_edge())
                .expect("every boundary edge starts a link path");
            let mut edges = f.edges().to_vec();
            edges.extend_from_slice(&tail.edges()[1..]);
            Path(edges)
        })
        .collect();
    PathSystem::new(joined)
}

/// Root→v paths for which the boundary of `X_{v,D}` is a transversal.
pub fn cut_witness_via_fill<'a>(_d: impl Into<DigraphView<'a>>, res: &LinkedSetResult) -> CutWitness {
    CutWitness {
        cut: res.boundary.clone(),
        path_system: splice(&res.fill_witness, &res.link_witness),
    }
}
