//! Extending a flame of an acyclic digraph to a large flame.
//!
//! Vertices are handled in a topological order. At vertex `v` the current
//! edge set `L` is cut down to the terminal edges of a linkage from the
//! boundary of `X_{v,D(L)}` to `v` that covers `F ∩ δ(v)`; everything else
//! entering `v` is deleted. Later steps never touch `δ(v)` again.

use thiserror::Error;

use crate::flame::{lambda, FlameError};
use crate::graph::{delta_in, topological_order, CycleCertificate, DigraphView};
use crate::linked::{covering_linked_witness, largest_v_linked_set, splice, LinkedError};
use crate::sets::{EdgeSet, VertexId, VertexSet};
use crate::PathSystem;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructError {
    #[error("the digraph has a directed cycle")]
    Cyclic(CycleCertificate),
    #[error("the start set is not a flame (fails at `{name}`)")]
    NotFlame { vertex: VertexId, name: String },
    #[error("not a topological order of the digraph")]
    InvalidOrder,
    #[error(transparent)]
    Flame(#[from] FlameError),
    #[error(transparent)]
    Linked(#[from] LinkedError),
}

/// One vertex of the construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionStep {
    pub vertex: VertexId,
    /// `X_{v,D(L)}` for the edge set `L` current at this step.
    pub linked_set: VertexSet,
    /// Linkage from the boundary of `linked_set` to `vertex`.
    pub link_paths: PathSystem,
    /// `link_paths` extended backwards to the root.
    pub full_paths: PathSystem,
    pub deleted: EdgeSet,
    pub kept: EdgeSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionTrace {
    pub order: Vec<VertexId>,
    pub steps: Vec<ConstructionStep>,
}

/// Extends the flame `f` to a large flame, processing vertices in the
/// topological order with smallest-id tie-breaking.
pub fn extend_to_large_flame<'a>(
    d: impl Into<DigraphView<'a>>,
    f: &EdgeSet,
) -> Result<(EdgeSet, ConstructionTrace), ConstructError> {
    let view = d.into();
    let order = topological_order(view).map_err(ConstructError::Cyclic)?;
    extend_to_large_flame_in_order(view, f, &order)
}

/// As [`extend_to_large_flame`] with a caller-chosen topological order.
pub fn extend_to_large_flame_in_order<'a>(
    d: impl Into<DigraphView<'a>>,
    f: &EdgeSet,
    order: &[VertexId],
) -> Result<(EdgeSet, ConstructionTrace), ConstructError> {
    let view = d.into();
    let g = view.graph;
    check_order(&view, order)?;
    if let crate::flame::FlameCheck::NotFlame { vertex } = crate::flame::is_flame(view, f)? {
        return Err(ConstructError::NotFlame {
            vertex,
            name: g.vertex_name(vertex).to_owned(),
        });
    }

    let mut current = view.edges.clone();
    let mut steps = Vec::with_capacity(order.len());
    for &v in order.iter().filter(|&&v| v != view.root()) {
        let here = g.restrict(&current);
        let res = largest_v_linked_set(here, v)?;
        let ingoing = delta_in(here, v).expect("vertex of this digraph");
        let required = ingoing.intersection(f);
        let link = covering_linked_witness(here, v, &res.linked_set, &required)?;
        let full = splice(&res.fill_witness, &link);
        let kept = link.terminal_edges(g.edge_count());
        let deleted = ingoing.difference(&kept);
        current.difference_with(&deleted);
        steps.push(ConstructionStep {
            vertex: v,
            linked_set: res.linked_set,
            link_paths: link,
            full_paths: full,
            deleted,
            kept,
        });
    }
    Ok((
        current,
        ConstructionTrace {
            order: order.to_vec(),
            steps,
        },
    ))
}

/// Large flame grown from the empty set.
pub fn large_flame<'a>(d: impl Into<DigraphView<'a>>) -> Result<EdgeSet, ConstructError> {
    let view = d.into();
    Ok(extend_to_large_flame(view, &view.graph.empty_edges())?.0)
}

fn check_order(view: &DigraphView<'_>, order: &[VertexId]) -> Result<(), ConstructError> {
    let g = view.graph;
    if order.len() != g.vertex_count() {
        return Err(ConstructError::InvalidOrder);
    }
    let mut position = vec![usize::MAX; g.vertex_count()];
    for (i, v) in order.iter().enumerate() {
        if v.index() >= g.vertex_count() || position[v.index()] != usize::MAX {
            return Err(ConstructError::InvalidOrder);
        }
        position[v.index()] = i;
    }
    let forward = g
        .edge_ids()
        .filter(|&e| view.contains_edge(e))
        .all(|e| position[g.tail(e).index()] < position[g.head(e).index()]);
    if forward {
        Ok(())
    } else {
        Err(ConstructError::InvalidOrder)
    }
}

/// Checks a trace against the input; returns a description of the first
/// broken invariant.
pub fn validate_trace<'a>(
    d: impl Into<DigraphView<'a>>,
    f: &EdgeSet,
    result: &EdgeSet,
    trace: &ConstructionTrace,
) -> Result<(), String> {
    let view = d.into();
    let g = view.graph;
    let name = |v: VertexId| g.vertex_name(v).to_owned();
    let mut position = vec![usize::MAX; g.vertex_count()];
    for (i, v) in trace.order.iter().enumerate() {
        position[v.index()] = i;
    }
    let mut current = view.edges.clone();
    for step in &trace.steps {
        let v = step.vertex;
        let here = g.restrict(&current);
        let ingoing = delta_in(here, v).map_err(|e| e.to_string())?;
        if !step.deleted.is_subset(&ingoing.difference(f)) {
            return Err(format!("step {}: deletes an edge outside δ(v) ∖ F", name(v)));
        }
        if step.deleted.iter().any(|e| !step.linked_set.contains(g.tail(e))) {
            return Err(format!("step {}: a deleted edge starts outside X", name(v)));
        }
        if step.kept != ingoing.difference(&step.deleted) {
            return Err(format!("step {}: kept and deleted do not partition δ(v)", name(v)));
        }
        current.difference_with(&step.deleted);
        let after = g.restrict(&current);
        if step.full_paths.terminal_edges(g.edge_count()) != step.kept
            || step.full_paths.len() != step.kept.len()
        {
            return Err(format!("step {}: kept edges are not the ends of Q", name(v)));
        }
        step.full_paths
            .check(&after, Some(view.root()), &g.vertex_set([g.vertex_name(v)]).unwrap())
            .map_err(|e| format!("step {}: {e}", name(v)))?;
        let later_edge = step.full_paths.paths().iter().flat_map(|p| p.edges()).any(|&e| {
            let h = g.head(e);
            position[h.index()] > position[v.index()]
        });
        if later_edge {
            return Err(format!("step {}: Q uses an edge into a later vertex", name(v)));
        }
        for &w in &trace.order[position[v.index()] + 1..] {
            if lambda(after, w).map_err(|e| e.to_string())? != lambda(view, w).map_err(|e| e.to_string())? {
                return Err(format!("step {}: connectivity to {} dropped", name(v), name(w)));
            }
        }
    }
    if &current != result {
        return Err("the trace does not reproduce the result".to_owned());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::flame::{is_flame, is_large, LargenessMethod};
    use crate::graph::RootedDigraph;

    fn sum_lambda(g: &RootedDigraph) -> usize {
        g.non_root_vertices().map(|v| lambda(g, v).unwrap()).sum()
    }

    fn assert_large_flame(g: &RootedDigraph, f: &EdgeSet) -> EdgeSet {
        let (l, trace) = extend_to_large_flame(g, f).unwrap();
        assert!(f.is_subset(&l));
        assert!(is_flame(g, &l).unwrap().is_flame());
        assert!(is_large(g, &l, LargenessMethod::LambdaEquality).unwrap());
        assert_eq!(l.len(), sum_lambda(g));
        validate_trace(g, f, &l, &trace).unwrap();
        l
    }

    #[test]
    fn g1_from_empty_and_from_partial_flame() {
        let g1 = fixtures::g1();
        let l = assert_large_flame(&g1, &g1.empty_edges());
        assert_eq!(&l, g1.all_edges());
        let l = assert_large_flame(&g1, &g1.edge_set(["e1", "e3", "e4"]).unwrap());
        assert_eq!(&l, g1.all_edges());
        assert_large_flame(&g1, &g1.edge_set(["e4"]).unwrap());
    }

    #[test]
    fn t1_and_truncated_comb() {
        let t1 = fixtures::t1();
        assert_eq!(&large_flame(&t1).unwrap(), t1.all_edges());
        let comb = fixtures::truncated_comb(2);
        let l = assert_large_flame(&comb, &comb.empty_edges());
        assert_eq!(l.len(), 4);
        assert_eq!(comb.edge_names(&l), ["f", "s0", "s1", "s2"]);
    }

    #[test]
    fn edgeless_digraph() {
        let g = RootedDigraph::new("r", ["u"], []).unwrap();
        assert!(large_flame(&g).unwrap().is_empty());
    }

    #[test]
    fn deletions_happen_when_connectivity_is_spare() {
        // Three parallel routes into b, only two survive.
        let g = RootedDigraph::new(
            "r",
            [],
            [("e1", "r", "a"), ("e2", "a", "b"), ("e3", "a", "b"), ("e4", "r", "b")],
        )
        .unwrap();
        let l = assert_large_flame(&g, &g.empty_edges());
        assert_eq!(l.len(), 3);
        let l = assert_large_flame(&g, &g.edge_set(["e1", "e3"]).unwrap());
        assert!(l.contains(g.edge_by_name("e3").unwrap()));
    }

    #[test]
    fn errors() {
        let c1 = fixtures::c1();
        assert_eq!(
            large_flame(&c1),
            Err(ConstructError::Cyclic(CycleCertificate(vec![
                c1.edge_by_name("e2").unwrap(),
                c1.edge_by_name("e3").unwrap()
            ])))
        );
        let g = RootedDigraph::new("r", [], [("e1", "r", "a"), ("e2", "a", "b")]).unwrap();
        assert!(matches!(
            extend_to_large_flame(&g, &g.edge_set(["e2"]).unwrap()),
            Err(ConstructError::NotFlame { .. })
        ));
        let g1 = fixtures::g1();
        let bad: Vec<VertexId> = g1.vertices().collect::<Vec<_>>().into_iter().rev().collect();
        assert_eq!(
            extend_to_large_flame_in_order(&g1, &g1.empty_edges(), &bad),
            Err(ConstructError::InvalidOrder)
        );
    }

    #[test]
    fn idempotent_on_large_flames() {
        let g1 = fixtures::g1();
        let l = large_flame(&g1).unwrap();
        assert_eq!(extend_to_large_flame(&g1, &l).unwrap().0, l);
    }

    #[test]
    fn other_orders_also_work() {
        let g = RootedDigraph::new(
            "r",
            [],
            [
                ("e1", "r", "a"),
                ("e2", "r", "b"),
                ("e3", "a", "c"),
                ("e4", "b", "c"),
                ("e5", "r", "c"),
            ],
        )
        .unwrap();
        let v = |s| g.vertex(s).unwrap();
        for order in [
            vec![v("r"), v("a"), v("b"), v("c")],
            vec![v("r"), v("b"), v("a"), v("c")],
        ] {
            let (l, trace) = extend_to_large_flame_in_order(&g, &g.empty_edges(), &order).unwrap();
            assert!(is_large(&g, &l, LargenessMethod::LambdaEquality).unwrap());
            assert_eq!(l.len(), sum_lambda(&g));
            validate_trace(&g, &g.empty_edges(), &l, &trace).unwrap();
        }
    }
}
