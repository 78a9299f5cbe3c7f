//! Oracles for the per-vertex gammoids `G_D(v)`, their direct sum `G(D)`,
//! flames, and largeness.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::flow::{
    self, local_connectivity, residual_unreachable_set, CutWitness, FlowError, PathSource,
    PathSystem,
};
use crate::graph::{delta_in, delta_in_set, DigraphView};
use crate::linked::{cut_witness_via_fill, largest_v_linked_set, LinkedError};
use crate::sets::{EdgeId, EdgeSet, VertexId};

/// Default cap on `|E|` for subset enumerations.
pub const DEFAULT_BRUTE_FORCE_EDGES: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FlameError {
    #[error("the vertex is the root")]
    RootVertex,
    #[error("edge `{0}` is not an ingoing edge of the vertex")]
    NotIngoing(String),
    #[error("edge `{0}` is not in the digraph")]
    NotInDigraph(String),
    #[error("{edges} edges exceed the brute-force bound {bound}")]
    BoundExceeded { edges: usize, bound: usize },
    #[error("the edge set is not large at `{0}`")]
    NotLargeAt(String),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Linked(#[from] LinkedError),
}

fn check_subset(view: &DigraphView<'_>, set: &EdgeSet) -> Result<(), FlameError> {
    match set.iter().find(|&e| !view.contains_edge(e)) {
        Some(e) => Err(FlameError::NotInDigraph(view.graph.edge_name(e).to_owned())),
        None => Ok(()),
    }
}

/// `λ_D(r, v)`.
pub fn lambda<'a>(d: impl Into<DigraphView<'a>>, v: VertexId) -> Result<usize, FlameError> {
    let view = d.into();
    if v == view.root() {
        return Err(FlameError::RootVertex);
    }
    Ok(local_connectivity(view, view.root(), v)?)
}

/// Whether `i ⊆ δ(v)` is in `G_D(v)`: edge-disjoint root→v paths covering
/// `i`, or `None` when `i` is dependent.
pub fn gammoid_independent<'a>(
    d: impl Into<DigraphView<'a>>,
    v: VertexId,
    i: &EdgeSet,
) -> Result<Option<PathSystem>, FlameError> {
    let view = d.into();
    let ingoing = delta_in(view, v).map_err(|_| FlowError::UnknownVertex(v.index()))?;
    if let Some(e) = i.iter().find(|&e| !ingoing.contains(e)) {
        return Err(FlameError::NotIngoing(view.graph.edge_name(e).to_owned()));
    }
    if i.is_empty() {
        return Ok(Some(PathSystem::default()));
    }
    Ok(flow::required_edge_paths(
        view,
        &PathSource::Vertex(view.root()),
        i,
        v,
    )?)
}

/// Outcome of a `G(D)` membership test: per-vertex witnesses up to the first
/// vertex where `S ∩ δ(v)` is dependent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GMembership {
    pub witnesses: BTreeMap<VertexId, PathSystem>,
    pub failing_vertex: Option<VertexId>,
}

impl GMembership {
    pub fn is_member(&self) -> bool {
        self.failing_vertex.is_none()
    }
}

/// `S ∈ G(D)`: every `S ∩ δ(v)` independent in its own gammoid.
pub fn g_membership<'a>(
    d: impl Into<DigraphView<'a>>,
    s: &EdgeSet,
) -> Result<GMembership, FlameError> {
    let view = d.into();
    check_subset(&view, s)?;
    let mut witnesses = BTreeMap::new();
    for v in view.graph.non_root_vertices() {
        let part = delta_in(view, v).expect("vertex of this digraph").intersection(s);
        match gammoid_independent(view, v, &part)? {
            Some(w) => {
                witnesses.insert(v, w);
            }
            None => {
                return Ok(GMembership {
                    witnesses,
                    failing_vertex: Some(v),
                })
            }
        }
    }
    Ok(GMembership {
        witnesses,
        failing_vertex: None,
    })
}

/// Per non-root vertex, root paths inside `D(F)` covering all of `δ_{D(F)}(v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlameCertificate {
    pub witnesses: BTreeMap<VertexId, PathSystem>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FlameCheck {
    Flame(FlameCertificate),
    NotFlame { vertex: VertexId },
}

impl FlameCheck {
    pub fn is_flame(&self) -> bool {
        matches!(self, FlameCheck::Flame(_))
    }
}

/// `F` is a flame when `D(F)` is one: every ingoing edge of every vertex in
/// `D(F)` is covered by edge-disjoint root paths that stay inside `F`.
pub fn is_flame<'a>(d: impl Into<DigraphView<'a>>, f: &EdgeSet) -> Result<FlameCheck, FlameError> {
    let view = d.into();
    check_subset(&view, f)?;
    let inner = view.graph.restrict(f);
    let membership = g_membership(inner, f)?;
    Ok(match membership.failing_vertex {
        None => FlameCheck::Flame(FlameCertificate {
            witnesses: membership.witnesses,
        }),
        Some(vertex) => FlameCheck::NotFlame { vertex },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LargenessMethod {
    /// `λ_{D(L)}(r,v) = λ_D(r,v)` at every vertex.
    #[default]
    LambdaEquality,
    /// `X_{v,D(L)}` contains the tail of every edge of `δ_D(v) ∖ L`.
    TailContainment,
}

/// First non-root vertex where `L` fails the chosen largeness test.
pub fn large_failure<'a>(
    d: impl Into<DigraphView<'a>>,
    l: &EdgeSet,
    method: LargenessMethod,
) -> Result<Option<VertexId>, FlameError> {
    let view = d.into();
    check_subset(&view, l)?;
    let g = view.graph;
    let inner = g.restrict(l);
    for v in g.non_root_vertices() {
        let ok = match method {
            LargenessMethod::LambdaEquality => lambda(inner, v)? == lambda(view, v)?,
            LargenessMethod::TailContainment => {
                let x = largest_v_linked_set(inner, v)?.linked_set;
                view.in_edges(v)
                    .filter(|&e| !l.contains(e))
                    .all(|e| x.contains(g.tail(e)))
            }
        };
        if !ok {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

pub fn is_large<'a>(
    d: impl Into<DigraphView<'a>>,
    l: &EdgeSet,
    method: LargenessMethod,
) -> Result<bool, FlameError> {
    Ok(large_failure(d, l, method)?.is_none())
}

fn is_cut(view: &DigraphView<'_>, cut: &EdgeSet, v: VertexId) -> bool {
    !view.reachable_from(view.root(), Some(cut)).contains(v)
}

/// Root→v paths in `D(L)` with a transversal that is a root→v cut of `D`.
///
/// The boundary of `X_{v,D(L)}` serves whenever `L` is large everywhere. If
/// `L` is only large at `v` that boundary can miss edges outside `L`; the
/// cut is then taken from the residual of the same paths inside `D`.
pub fn largeness_witness<'a>(
    d: impl Into<DigraphView<'a>>,
    l: &EdgeSet,
    v: VertexId,
) -> Result<CutWitness, FlameError> {
    let view = d.into();
    check_subset(&view, l)?;
    if v == view.root() {
        return Err(FlameError::RootVertex);
    }
    let inner = view.graph.restrict(l);
    let res = largest_v_linked_set(inner, v)?;
    let witness = cut_witness_via_fill(inner, &res);
    if is_cut(&view, &witness.cut, v) {
        return Ok(witness);
    }
    if lambda(inner, v)? != lambda(view, v)? {
        return Err(FlameError::NotLargeAt(view.graph.vertex_name(v).to_owned()));
    }
    let far = residual_unreachable_set(view, &witness.path_system, view.root());
    let cut = delta_in_set(view, &far).expect("vertex set of this digraph");
    debug_assert!(is_cut(&view, &cut, v));
    Ok(CutWitness {
        cut,
        path_system: witness.path_system,
    })
}

/// Largeness witnesses at every non-root vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LargenessCertificate {
    pub witnesses: BTreeMap<VertexId, CutWitness>,
}

pub fn largeness_certificate<'a>(
    d: impl Into<DigraphView<'a>>,
    l: &EdgeSet,
) -> Result<LargenessCertificate, FlameError> {
    let view = d.into();
    let mut witnesses = BTreeMap::new();
    for v in view.graph.non_root_vertices() {
        witnesses.insert(v, largeness_witness(view, l, v)?);
    }
    Ok(LargenessCertificate { witnesses })
}

/// Independent sets of `G_D(v)` as bitmasks over the ingoing edges of `v`
/// (listed in id order). Dependence is inherited by supersets, so a flow
/// query is issued only when every one-smaller subset is independent.
pub(crate) fn independence_table(
    view: DigraphView<'_>,
    v: VertexId,
    ingoing: &[EdgeId],
) -> Result<Vec<bool>, FlameError> {
    let k = ingoing.len();
    let m = view.graph.edge_count();
    let mut table = vec![false; 1 << k];
    table[0] = true;
    for mask in 1usize..(1 << k) {
        let subsets_ok = (0..k)
            .filter(|b| mask & (1 << b) != 0)
            .all(|b| table[mask & !(1 << b)]);
        if !subsets_ok {
            continue;
        }
        let set = EdgeSet::from_ids(m, (0..k).filter(|b| mask & (1 << b) != 0).map(|b| ingoing[b]));
        table[mask] = gammoid_independent(view, v, &set)?.is_some();
    }
    Ok(table)
}

/// All members of `G_D(v)`.
pub fn gammoid_family<'a>(
    d: impl Into<DigraphView<'a>>,
    v: VertexId,
    bound: usize,
) -> Result<Vec<EdgeSet>, FlameError> {
    let view = d.into();
    let ingoing: Vec<EdgeId> = view.in_edges(v).collect();
    if ingoing.len() > bound {
        return Err(FlameError::BoundExceeded {
            edges: ingoing.len(),
            bound,
        });
    }
    let table = independence_table(view, v, &ingoing)?;
    let m = view.graph.edge_count();
    Ok(table
        .iter()
        .enumerate()
        .filter(|(_, &ok)| ok)
        .map(|(mask, _)| mask_to_set(m, &ingoing, mask))
        .collect())
}

fn mask_to_set(m: usize, edges: &[EdgeId], mask: usize) -> EdgeSet {
    EdgeSet::from_ids(
        m,
        (0..edges.len())
            .filter(|b| mask & (1 << b) != 0)
            .map(|b| edges[b]),
    )
}

/// Maximal members of `G(D)`. Because `G(D)` is a direct sum over the
/// vertices, these are exactly the unions of per-vertex maximal members.
pub fn maximal_g_elements<'a>(
    d: impl Into<DigraphView<'a>>,
    bound: usize,
) -> Result<Vec<EdgeSet>, FlameError> {
    let view = d.into();
    let m = view.graph.edge_count();
    if view.edges.len() > bound {
        return Err(FlameError::BoundExceeded {
            edges: view.edges.len(),
            bound,
        });
    }
    let mut products = vec![view.graph.empty_edges()];
    for v in view.graph.non_root_vertices() {
        let ingoing: Vec<EdgeId> = view.in_edges(v).collect();
        if ingoing.is_empty() {
            continue;
        }
        let table = independence_table(view, v, &ingoing)?;
        let k = ingoing.len();
        let maximal: Vec<EdgeSet> = (0usize..1 << k)
            .filter(|&mask| table[mask] && (0..k).all(|b| mask & (1 << b) != 0 || !table[mask | (1 << b)]))
            .map(|mask| mask_to_set(m, &ingoing, mask))
            .collect();
        products = products
            .iter()
            .flat_map(|base| maximal.iter().map(move |part| base.union(part)))
            .collect();
    }
    products.sort();
    Ok(products)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::RootedDigraph;

    #[test]
    fn lambdas() {
        let g1 = fixtures::g1();
        assert_eq!(lambda(&g1, g1.vertex("a").unwrap()).unwrap(), 2);
        assert_eq!(lambda(&g1, g1.vertex("b").unwrap()).unwrap(), 2);
        let c1 = fixtures::c1();
        assert_eq!(lambda(&c1, c1.vertex("b").unwrap()).unwrap(), 1);
        assert_eq!(lambda(&c1, c1.root()), Err(FlameError::RootVertex));
    }

    #[test]
    fn gammoid_independence() {
        let g1 = fixtures::g1();
        let a = g1.vertex("a").unwrap();
        let w = gammoid_independent(&g1, a, &g1.edge_set(["e1", "e2"]).unwrap())
            .unwrap()
            .unwrap();
        assert_eq!(w.names(&g1), vec![vec!["e1"], vec!["e2"]]);
        assert!(gammoid_independent(&g1, a, &g1.empty_edges()).unwrap().unwrap().is_empty());
        assert!(matches!(
            gammoid_independent(&g1, a, &g1.edge_set(["e3"]).unwrap()),
            Err(FlameError::NotIngoing(_))
        ));

        let c1 = fixtures::c1();
        let ca = c1.vertex("a").unwrap();
        assert_eq!(
            gammoid_independent(&c1, ca, &c1.edge_set(["e1", "e3"]).unwrap()).unwrap(),
            None
        );
    }

    #[test]
    fn membership_in_g() {
        let g1 = fixtures::g1();
        assert!(g_membership(&g1, g1.all_edges()).unwrap().is_member());
        assert!(g_membership(&g1, &g1.empty_edges()).unwrap().is_member());
        let c1 = fixtures::c1();
        let m = g_membership(&c1, c1.all_edges()).unwrap();
        assert_eq!(m.failing_vertex, Some(c1.vertex("a").unwrap()));
    }

    #[test]
    fn flames() {
        let g1 = fixtures::g1();
        let f = g1.edge_set(["e1", "e3", "e4"]).unwrap();
        let FlameCheck::Flame(cert) = is_flame(&g1, &f).unwrap() else {
            panic!("expected a flame");
        };
        let a = g1.vertex("a").unwrap();
        let b = g1.vertex("b").unwrap();
        assert_eq!(cert.witnesses[&a].names(&g1), vec![vec!["e1"]]);
        assert_eq!(cert.witnesses[&b].names(&g1), vec![vec!["e1", "e3"], vec!["e4"]]);
        assert!(is_flame(&g1, &g1.empty_edges()).unwrap().is_flame());

        let c1 = fixtures::c1();
        assert_eq!(
            is_flame(&c1, c1.all_edges()).unwrap(),
            FlameCheck::NotFlame {
                vertex: c1.vertex("a").unwrap()
            }
        );
    }

    #[test]
    fn member_of_g_that_is_not_a_flame() {
        // {e2} is coverable in D using e1, but not inside D({e2}).
        let g = RootedDigraph::new("r", [], [("e1", "r", "a"), ("e2", "a", "b")]).unwrap();
        let s = g.edge_set(["e2"]).unwrap();
        assert!(g_membership(&g, &s).unwrap().is_member());
        assert!(!is_flame(&g, &s).unwrap().is_flame());
    }

    #[test]
    fn largeness() {
        let g1 = fixtures::g1();
        let l = g1.edge_set(["e1", "e3", "e4"]).unwrap();
        for method in [LargenessMethod::LambdaEquality, LargenessMethod::TailContainment] {
            assert!(!is_large(&g1, &l, method).unwrap());
            assert!(is_large(&g1, g1.all_edges(), method).unwrap());
        }
        assert_eq!(
            large_failure(&g1, &l, LargenessMethod::LambdaEquality).unwrap(),
            Some(g1.vertex("a").unwrap())
        );
        let t1 = fixtures::t1();
        assert!(is_large(&t1, t1.all_edges(), LargenessMethod::default()).unwrap());
    }

    #[test]
    fn largeness_witnesses() {
        let g1 = fixtures::g1();
        let w = largeness_witness(&g1, g1.all_edges(), g1.vertex("b").unwrap()).unwrap();
        assert_eq!(w.path_system.names(&g1), vec![vec!["e1", "e3"], vec!["e4"]]);
        assert_eq!(g1.edge_names(&w.cut), ["e3", "e4"]);
        let w = largeness_witness(&g1, g1.all_edges(), g1.vertex("a").unwrap()).unwrap();
        assert_eq!(w.path_system.names(&g1), vec![vec!["e1"], vec!["e2"]]);
        assert_eq!(g1.edge_names(&w.cut), ["e1", "e2"]);
        let t1 = fixtures::t1();
        let w = largeness_witness(&t1, t1.all_edges(), t1.vertex("v").unwrap()).unwrap();
        assert_eq!(t1.edge_names(&w.cut), ["e1"]);

        let l = g1.edge_set(["e1", "e3", "e4"]).unwrap();
        assert!(matches!(
            largeness_witness(&g1, &l, g1.vertex("a").unwrap()),
            Err(FlameError::NotLargeAt(_))
        ));
    }

    #[test]
    fn witness_when_large_only_at_one_vertex() {
        let g = RootedDigraph::new(
            "r",
            [],
            [("e1", "r", "v"), ("e2", "r", "a"), ("e3", "a", "v"), ("e4", "r", "a")],
        )
        .unwrap();
        let l = g.edge_set(["e1", "e2", "e3"]).unwrap();
        let v = g.vertex("v").unwrap();
        assert!(!is_large(&g, &l, LargenessMethod::LambdaEquality).unwrap());
        let w = largeness_witness(&g, &l, v).unwrap();
        assert_eq!(w.path_system.len(), 2);
        assert_eq!(g.edge_names(&w.cut), ["e1", "e3"]);
    }

    #[test]
    fn maximal_elements() {
        let g1 = fixtures::g1();
        let max = maximal_g_elements(&g1, DEFAULT_BRUTE_FORCE_EDGES).unwrap();
        assert_eq!(max, vec![g1.all_edges().clone()]);
        let c1 = fixtures::c1();
        let max = maximal_g_elements(&c1, DEFAULT_BRUTE_FORCE_EDGES).unwrap();
        assert_eq!(max, vec![c1.edge_set(["e1", "e2"]).unwrap()]);
        let t1 = fixtures::t1();
        assert_eq!(
            maximal_g_elements(&t1, DEFAULT_BRUTE_FORCE_EDGES).unwrap(),
            vec![t1.all_edges().clone()]
        );
        assert_eq!(
            maximal_g_elements(&g1, 3),
            Err(FlameError::BoundExceeded { edges: 4, bound: 3 })
        );
    }
}
