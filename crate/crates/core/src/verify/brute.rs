//! Exponential reference implementations that share no code with the flow
//! engine: explicit path enumeration and exhaustive family search.

use crate::flame::is_flame;
use crate::graph::{delta_in_set, DigraphView};
use crate::linked::is_v_linked;
use crate::sets::{EdgeId, EdgeSet, VertexId, VertexSet};

use super::VerifyError;

/// Default limit on `|V|` for the subset sweep over vertex sets.
pub const DEFAULT_ORACLE_VERTICES: usize = 6;

/// Edges as a bitmask; brute-force instances are tiny.
pub type Mask = u64;

fn mask_of(edges: &[EdgeId]) -> Mask {
    edges.iter().fold(0, |m, e| m | 1 << e.index())
}

/// Every simple path (no repeated vertex) from `s` to `t`, each given by
/// its edges. `s == t` yields nothing.
pub fn simple_paths(view: DigraphView<'_>, s: VertexId, t: VertexId) -> Vec<Vec<EdgeId>> {
    let g = view.graph;
    assert!(g.edge_count() <= 64, "brute force supports at most 64 edges");
    let mut out = Vec::new();
    if s == t {
        return out;
    }
    let mut on_path = vec![false; g.vertex_count()];
    let mut edges = Vec::new();
    fn walk(
        view: &DigraphView<'_>,
        u: VertexId,
        t: VertexId,
        on_path: &mut [bool],
        edges: &mut Vec<EdgeId>,
        out: &mut Vec<Vec<EdgeId>>,
    ) {
        if u == t {
            out.push(edges.clone());
            return;
        }
        on_path[u.index()] = true;
        for e in view.out_edges(u) {
            let w = view.graph.head(e);
            if !on_path[w.index()] {
                edges.push(e);
                walk(view, w, t, on_path, edges, out);
                edges.pop();
            }
        }
        on_path[u.index()] = false;
    }
    walk(&view, s, t, &mut on_path, &mut edges, &mut out);
    out
}

/// Largest number of pairwise edge-disjoint paths among `paths`.
pub fn max_disjoint_family(paths: &[Vec<EdgeId>]) -> usize {
    let masks: Vec<Mask> = paths.iter().map(|p| mask_of(p)).collect();
    fn best(masks: &[Mask], used: Mask) -> usize {
        match masks.split_first() {
            None => 0,
            Some((&first, rest)) => {
                let skip = best(rest, used);
                if first & used == 0 {
                    skip.max(1 + best(rest, used | first))
                } else {
                    skip
                }
            }
        }
    }
    best(&masks, 0)
}

/// Maximum number of edge-disjoint `s→t` paths by exhaustive search.
pub fn brute_max_paths(view: DigraphView<'_>, s: VertexId, t: VertexId) -> usize {
    max_disjoint_family(&simple_paths(view, s, t))
}

/// Whether pairwise edge-disjoint paths exist with one path per group, the
/// path for group `i` drawn from `groups[i]`.
pub fn disjoint_choice(groups: &[Vec<Mask>]) -> bool {
    fn pick(groups: &[Vec<Mask>], used: Mask) -> bool {
        match groups.split_first() {
            None => true,
            Some((options, rest)) => options
                .iter()
                .any(|&m| m & used == 0 && pick(rest, used | m)),
        }
    }
    pick(groups, 0)
}

/// `i ⊆ δ(v)` is coverable by edge-disjoint root→v paths, found by search.
pub fn brute_gammoid_independent(view: DigraphView<'_>, v: VertexId, i: &EdgeSet) -> bool {
    let paths = simple_paths(view, view.root(), v);
    let groups: Vec<Vec<Mask>> = i
        .iter()
        .map(|e| {
            paths
                .iter()
                .filter(|p| p.last() == Some(&e))
                .map(|p| mask_of(p))
                .collect()
        })
        .collect();
    disjoint_choice(&groups)
}

/// Whether `x` is v-linked, by search over paths that start with each
/// boundary edge and then stay simple.
pub fn brute_is_v_linked(view: DigraphView<'_>, x: &VertexSet, v: VertexId) -> bool {
    let g = view.graph;
    if !x.contains(v) || x.contains(view.root()) {
        return false;
    }
    let boundary = delta_in_set(view, x).expect("vertex set of this digraph");
    let groups: Vec<Vec<Mask>> = boundary
        .iter()
        .map(|e| {
            let (tail, head) = (g.tail(e), g.head(e));
            let mut options: Vec<Mask> = simple_paths(view, head, v)
                .into_iter()
                .filter(|p| p.iter().all(|&f| g.head(f) != tail))
                .map(|p| mask_of(&p) | 1 << e.index())
                .collect();
            if head == v {
                options.push(1 << e.index());
            }
            options
        })
        .collect();
    disjoint_choice(&groups)
}

fn vertex_subsets_containing(
    view: &DigraphView<'_>,
    v: VertexId,
    bound: usize,
) -> Result<Vec<VertexSet>, VerifyError> {
    let g = view.graph;
    let n = g.vertex_count();
    if n > bound {
        return Err(VerifyError::BoundExceeded { size: n, bound });
    }
    let others: Vec<VertexId> = g.non_root_vertices().filter(|&w| w != v).collect();
    Ok((0usize..1 << others.len())
        .map(|mask| {
            let mut x = VertexSet::from_ids(n, [v]);
            for (b, &w) in others.iter().enumerate() {
                if mask & (1 << b) != 0 {
                    x.insert(w);
                }
            }
            x
        })
        .collect())
}

/// Union of all v-linked sets, each tested with the flow-based linkage
/// oracle.
pub fn brute_force_largest_v_linked(
    view: DigraphView<'_>,
    v: VertexId,
    bound: usize,
) -> Result<VertexSet, VerifyError> {
    let mut union = view.graph.empty_vertices();
    for x in vertex_subsets_containing(&view, v, bound)? {
        if is_v_linked(view, &x, v)?.is_some() {
            union.union_with(&x);
        }
    }
    Ok(union)
}

/// Union of all v-linked sets, each tested by path search.
pub fn path_search_largest_v_linked(
    view: DigraphView<'_>,
    v: VertexId,
    bound: usize,
) -> Result<VertexSet, VerifyError> {
    let mut union = view.graph.empty_vertices();
    for x in vertex_subsets_containing(&view, v, bound)? {
        if brute_is_v_linked(view, &x, v) {
            union.union_with(&x);
        }
    }
    Ok(union)
}

/// The brute-force edge limit, `FLAMEKIT_MAX_BRUTE` if set.
pub fn brute_force_bound() -> usize {
    std::env::var("FLAMEKIT_MAX_BRUTE")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(crate::flame::DEFAULT_BRUTE_FORCE_EDGES)
}

/// Every flame of `view`, as bitmasks over edge indices, in increasing mask
/// order. Supersets of sets outside `G(D)` are skipped since `G(D)` is
/// closed under subsets and every flame lies in it.
pub fn all_flames(view: DigraphView<'_>, bound: usize) -> Result<Vec<Mask>, VerifyError> {
    let g = view.graph;
    let edges: Vec<EdgeId> = g.edge_ids().filter(|&e| view.contains_edge(e)).collect();
    if edges.len() > bound || edges.len() > 20 {
        return Err(VerifyError::BoundExceeded {
            size: edges.len(),
            bound: bound.min(20),
        });
    }
    let k = edges.len();
    let mut in_g = vec![false; 1 << k];
    let mut flames = Vec::new();
    for local in 0usize..1 << k {
        let down = (0..k)
            .filter(|b| local & (1 << b) != 0)
            .all(|b| in_g[local & !(1 << b)]);
        if local != 0 && !down {
            continue;
        }
        let set = EdgeSet::from_ids(
            g.edge_count(),
            (0..k).filter(|b| local & (1 << b) != 0).map(|b| edges[b]),
        );
        in_g[local] = crate::flame::g_membership(view, &set)?.is_member();
        if in_g[local] && is_flame(view, &set)?.is_flame() {
            flames.push(set.iter().fold(0, |m, e| m | 1 << e.index()));
        }
    }
    flames.sort_unstable();
    Ok(flames)
}

pub fn mask_to_edges(universe: usize, mask: Mask) -> EdgeSet {
    EdgeSet::from_ids(
        universe,
        (0..universe).filter(|&i| mask & (1 << i) != 0).map(crate::sets::EdgeId),
    )
}

pub fn edges_to_mask(set: &EdgeSet) -> Mask {
    set.iter().fold(0, |m, e| m | 1 << e.index())
}
