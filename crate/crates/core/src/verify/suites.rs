//! Property checks over single instances. Each returns the violations it
//! finds; an empty list means the property held.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::construct::{extend_to_large_flame, validate_trace};
use crate::flame::{
    g_membership, gammoid_independent, is_flame, lambda, large_failure, maximal_g_elements,
    LargenessMethod,
};
use crate::flow::{linkage_merge, max_edge_disjoint_paths, Path, PathSystem};
use crate::graph::{delta_in, topological_order, DigraphView, RootedDigraph};
use crate::linked::largest_v_linked_set;
use crate::sets::{EdgeSet, VertexId};

use super::brute::{
    all_flames, brute_force_bound, brute_force_largest_v_linked, brute_max_paths, edges_to_mask,
    mask_to_edges, simple_paths, Mask, DEFAULT_ORACLE_VERTICES,
};
use super::instances::{lambda_sum, random_flame};
use super::{Certificate, EdgeNames, Violation, VerifyError};

pub const GREEDOID: &str = "greedoid-exchange";
pub const MAXIMAL_LARGE: &str = "maximal-g-elements-large";
pub const BASIS_EXCHANGE: &str = "basis-exchange";
pub const CONSTRUCTOR: &str = "constructor";
pub const LARGENESS_EQUIVALENCE: &str = "largeness-equivalence";
pub const LARGEST_LINKED: &str = "largest-linked-set";
pub const LINKED_NESTING: &str = "linked-set-nesting";
pub const FLOW_ORACLE: &str = "flow-oracle";
pub const LINKAGE_MERGE: &str = "linkage-merge";
pub const MAXIMAL_FLAME: &str = "maximal-g-element-is-flame";
pub const FLAME_EXTENSION: &str = "flame-extends-to-large-flame";

fn names(g: &RootedDigraph, set: &EdgeSet) -> EdgeNames {
    g.edge_names(set)
}

fn mask_names(g: &RootedDigraph, mask: Mask) -> EdgeNames {
    g.edge_names(&mask_to_edges(g.edge_count(), mask))
}

fn require_acyclic(g: &RootedDigraph) -> Result<(), VerifyError> {
    topological_order(g).map(|_| ()).map_err(VerifyError::Cyclic)
}

/// Exchange between every pair of flames `|F| < |F'|`.
pub fn check_greedoid_exchange(g: &RootedDigraph) -> Result<Vec<Violation>, VerifyError> {
    let flames = all_flames(g.view(), brute_force_bound())?;
    let family: HashSet<Mask> = flames.iter().copied().collect();
    let mut out = Vec::new();
    for &small in &flames {
        for &large in &flames {
            if small.count_ones() >= large.count_ones() {
                continue;
            }
            let extra = large & !small;
            let extends = (0..64)
                .filter(|b| extra & (1 << b) != 0)
                .any(|b| family.contains(&(small | 1 << b)));
            if !extends {
                out.push(Violation::new(
                    g,
                    GREEDOID,
                    Certificate::ExchangeFailure {
                        smaller: mask_names(g, small),
                        larger: mask_names(g, large),
                    },
                ));
            }
        }
    }
    Ok(out)
}

/// Every maximal member of `G(D)` is large.
pub fn check_maximal_elements_large(g: &RootedDigraph) -> Result<Vec<Violation>, VerifyError> {
    require_acyclic(g)?;
    let mut out = Vec::new();
    for s in maximal_g_elements(g, brute_force_bound())? {
        if let Some(v) = large_failure(g, &s, LargenessMethod::LambdaEquality)? {
            out.push(Violation::new(
                g,
                MAXIMAL_LARGE,
                Certificate::MaximalNotLarge {
                    set: names(g, &s),
                    vertex: g.vertex_name(v).to_owned(),
                },
            ));
        }
    }
    Ok(out)
}

/// Inclusion-maximal masks of a family.
fn maximal_masks(family: &[Mask]) -> Vec<Mask> {
    family
        .iter()
        .copied()
        .filter(|&a| !family.iter().any(|&b| b != a && a & b == a))
        .collect()
}

/// Maximal flames satisfy the basis exchange axiom.
pub fn check_matroid_bases(g: &RootedDigraph) -> Result<Vec<Violation>, VerifyError> {
    require_acyclic(g)?;
    let bases = maximal_masks(&all_flames(g.view(), brute_force_bound())?);
    let basis_set: HashSet<Mask> = bases.iter().copied().collect();
    let mut out = Vec::new();
    for &b1 in &bases {
        for &b2 in &bases {
            let only_first = b1 & !b2;
            let only_second = b2 & !b1;
            for e in (0..64).filter(|e| only_first & (1 << e) != 0) {
                let replaced = (0..64)
                    .filter(|f| only_second & (1 << f) != 0)
                    .any(|f| basis_set.contains(&((b1 & !(1 << e)) | 1 << f)));
                if !replaced {
                    out.push(Violation::new(
                        g,
                        BASIS_EXCHANGE,
                        Certificate::BasisExchangeFailure {
                            first: mask_names(g, b1),
                            second: mask_names(g, b2),
                            removed: g.edge_name(crate::sets::EdgeId(e)).to_owned(),
                        },
                    ));
                }
            }
        }
    }
    Ok(out)
}

/// Runs the constructor from `f` and checks its output and trace.
pub fn check_constructor(g: &RootedDigraph, f: &EdgeSet) -> Result<Vec<Violation>, VerifyError> {
    let (l, trace) = extend_to_large_flame(g, f)?;
    let fail = |reason: String| {
        vec![Violation::new(
            g,
            CONSTRUCTOR,
            Certificate::ConstructorFailure {
                start: names(g, f),
                reason,
            },
        )]
    };
    if !f.is_subset(&l) {
        return Ok(fail("result does not contain the start flame".into()));
    }
    if !is_flame(g, &l)?.is_flame() {
        return Ok(fail("result is not a flame".into()));
    }
    if let Some(v) = large_failure(g, &l, LargenessMethod::LambdaEquality)? {
        return Ok(fail(format!("result is not large at {}", g.vertex_name(v))));
    }
    let expected = lambda_sum(g);
    if l.len() != expected {
        return Ok(fail(format!("result has {} edges, expected {expected}", l.len())));
    }
    if let Err(reason) = validate_trace(g, f, &l, &trace) {
        return Ok(fail(reason));
    }
    Ok(Vec::new())
}

pub(crate) fn constructor_on_instance(
    g: &RootedDigraph,
    exhaustive: bool,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Violation>, VerifyError> {
    let starts: Vec<EdgeSet> = if exhaustive {
        all_flames(g.view(), brute_force_bound())?
            .into_iter()
            .map(|m| mask_to_edges(g.edge_count(), m))
            .collect()
    } else {
        let target = rng.gen_range(0..=lambda_sum(g));
        vec![g.empty_edges(), random_flame(g, target, rng)]
    };
    let mut out = Vec::new();
    for f in &starts {
        out.extend(check_constructor(g, f)?);
    }
    Ok(out)
}

/// The two largeness tests agree on `l`.
pub fn check_largeness_equivalence(
    g: &RootedDigraph,
    l: &EdgeSet,
) -> Result<Vec<Violation>, VerifyError> {
    let by_lambda = large_failure(g, l, LargenessMethod::LambdaEquality)?.is_none();
    let by_tails = large_failure(g, l, LargenessMethod::TailContainment)?.is_none();
    if by_lambda == by_tails {
        return Ok(Vec::new());
    }
    Ok(vec![Violation::new(
        g,
        LARGENESS_EQUIVALENCE,
        Certificate::LargenessDisagreement {
            set: names(g, l),
            lambda_equality: by_lambda,
            tail_containment: by_tails,
        },
    )])
}

pub(crate) fn largeness_on_instance(
    g: &RootedDigraph,
    exhaustive: bool,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Violation>, VerifyError> {
    let m = g.edge_count();
    let mut out = Vec::new();
    if exhaustive {
        if m > brute_force_bound() {
            return Err(VerifyError::BoundExceeded {
                size: m,
                bound: brute_force_bound(),
            });
        }
        for mask in 0u64..1 << m {
            out.extend(check_largeness_equivalence(g, &mask_to_edges(m, mask))?);
        }
    } else {
        let l = EdgeSet::from_ids(m, g.edge_ids().filter(|_| rng.gen_bool(0.5)));
        out.extend(check_largeness_equivalence(g, &l)?);
    }
    Ok(out)
}

/// Residual `X_{v,D}` equals the union of all v-linked sets, and the sets
/// are nested.
pub fn check_linked_oracle(g: &RootedDigraph) -> Result<Vec<Violation>, VerifyError> {
    let mut out = Vec::new();
    let sets: Vec<(VertexId, crate::sets::VertexSet)> = g
        .non_root_vertices()
        .map(|v| Ok((v, largest_v_linked_set(g, v)?.linked_set)))
        .collect::<Result<_, VerifyError>>()?;
    for (v, x) in &sets {
        let oracle = brute_force_largest_v_linked(g.view(), *v, DEFAULT_ORACLE_VERTICES)?;
        if &oracle != x {
            out.push(Violation::new(
                g,
                LARGEST_LINKED,
                Certificate::LinkedSetMismatch {
                    vertex: g.vertex_name(*v).to_owned(),
                    residual: g.vertex_names(x),
                    oracle: g.vertex_names(&oracle),
                },
            ));
        }
    }
    for (v, x) in &sets {
        for (w, y) in &sets {
            if x.contains(*w) && !y.is_subset(x) {
                out.push(Violation::new(
                    g,
                    LINKED_NESTING,
                    Certificate::NestingFailure {
                        vertex: g.vertex_name(*v).to_owned(),
                        inner: g.vertex_name(*w).to_owned(),
                    },
                ));
            }
        }
    }
    Ok(out)
}

/// Problems with a returned cut for `s→t`, if any.
fn cut_problem(view: DigraphView<'_>, s: VertexId, t: VertexId, cut: &EdgeSet, paths: &PathSystem) -> Option<String> {
    if view.reachable_from(s, Some(cut)).contains(t) {
        return Some("cut does not separate".into());
    }
    if cut.len() != paths.len() {
        return Some("cut size differs from the number of paths".into());
    }
    if paths.paths().iter().any(|p| p.edges().iter().filter(|&&e| cut.contains(e)).count() != 1) {
        return Some("cut is not a transversal".into());
    }
    let target = crate::sets::VertexSet::from_ids(view.graph.vertex_count(), [t]);
    paths.check(&view, Some(s), &target).err()
}

/// Max-flow cardinality against brute force for every ordered pair, plus a
/// separating transversal cut.
pub fn check_flow_oracle(g: &RootedDigraph) -> Result<Vec<Violation>, VerifyError> {
    let mut out = Vec::new();
    for s in g.vertices() {
        for t in g.vertices().filter(|&t| t != s) {
            let w = max_edge_disjoint_paths(g, s, t)?;
            let brute = brute_max_paths(g.view(), s, t);
            let (source, target) = (g.vertex_name(s).to_owned(), g.vertex_name(t).to_owned());
            if w.path_system.len() != brute {
                out.push(Violation::new(
                    g,
                    FLOW_ORACLE,
                    Certificate::FlowMismatch {
                        source,
                        target,
                        flow: w.path_system.len(),
                        brute,
                    },
                ));
            } else if cut_problem(g.view(), s, t, &w.cut, &w.path_system).is_some() {
                out.push(Violation::new(
                    g,
                    FLOW_ORACLE,
                    Certificate::BadCut {
                        source,
                        target,
                        cut: names(g, &w.cut),
                        paths: w.path_system.names(g),
                    },
                ));
            }
        }
    }
    Ok(out)
}

/// Edge-disjoint `s→t` paths picked greedily from a shuffled list of all
/// simple paths; each path is skipped with probability one half.
pub fn random_path_system(
    g: &RootedDigraph,
    s: VertexId,
    t: VertexId,
    rng: &mut ChaCha8Rng,
) -> PathSystem {
    let mut all = simple_paths(g.view(), s, t);
    all.shuffle(rng);
    let mut used = g.empty_edges();
    let mut chosen = Vec::new();
    for p in all {
        if p.iter().all(|&e| !used.contains(e)) && rng.gen_bool(0.5) {
            used.union_with(&EdgeSet::from_ids(g.edge_count(), p.iter().copied()));
            chosen.push(Path(p));
        }
    }
    PathSystem::new(chosen)
}

fn merge_problem(
    g: &RootedDigraph,
    s: VertexId,
    t: VertexId,
    p: &PathSystem,
    q: &PathSystem,
) -> Result<Option<String>, VerifyError> {
    let r = match linkage_merge(g, s, t, p, q) {
        Ok(r) => r,
        Err(e) => return Ok(Some(e.to_string())),
    };
    let m = g.edge_count();
    let target = crate::sets::VertexSet::from_ids(g.vertex_count(), [t]);
    if let Err(e) = r.check(&g.view(), Some(s), &target) {
        return Ok(Some(e));
    }
    if !p.initial_edges(m).is_subset(&r.initial_edges(m)) {
        return Ok(Some("in(P) ⊄ in(R)".into()));
    }
    if !q.terminal_edges(m).is_subset(&r.terminal_edges(m)) {
        return Ok(Some("ter(Q) ⊄ ter(R)".into()));
    }
    Ok(None)
}

/// The merged linkage keeps the first edges of `p` and the last edges of
/// `q` and stays edge-disjoint.
pub fn check_linkage_merge(
    g: &RootedDigraph,
    s: VertexId,
    t: VertexId,
    p: &PathSystem,
    q: &PathSystem,
) -> Result<Vec<Violation>, VerifyError> {
    Ok(match merge_problem(g, s, t, p, q)? {
        None => Vec::new(),
        Some(reason) => vec![Violation::new(
            g,
            LINKAGE_MERGE,
            Certificate::MergeFailure {
                source: g.vertex_name(s).to_owned(),
                target: g.vertex_name(t).to_owned(),
                p: p.names(g),
                q: q.names(g),
                reason,
            },
        )],
    })
}

/// One random pair `(s, t)` with two random path systems.
pub(crate) fn merge_on_instance(
    g: &RootedDigraph,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Violation>, VerifyError> {
    let n = g.vertex_count();
    if n < 2 {
        return Ok(Vec::new());
    }
    let s = VertexId(rng.gen_range(0..n));
    let t = loop {
        let t = VertexId(rng.gen_range(0..n));
        if t != s {
            break t;
        }
    };
    let p = random_path_system(g, s, t, rng);
    let q = random_path_system(g, s, t, rng);
    check_linkage_merge(g, s, t, &p, &q)
}

fn parse_set(g: &RootedDigraph, ids: &[String]) -> Result<EdgeSet, VerifyError> {
    Ok(g.edge_set(ids.iter().map(String::as_str))?)
}

fn parse_paths(g: &RootedDigraph, lists: &[EdgeNames]) -> Result<PathSystem, VerifyError> {
    let mut paths = Vec::new();
    for list in lists {
        let edges = list
            .iter()
            .map(|n| g.edge_by_name(n))
            .collect::<Result<Vec<_>, _>>()?;
        if edges.is_empty() {
            return Err(VerifyError::Certificate("empty path".into()));
        }
        paths.push(Path(edges));
    }
    Ok(PathSystem::new(paths))
}

fn with_edge(set: &EdgeSet, e: crate::sets::EdgeId) -> EdgeSet {
    let mut s = set.clone();
    s.insert(e);
    s
}

fn is_maximal_in_g(g: &RootedDigraph, s: &EdgeSet) -> Result<bool, VerifyError> {
    if !g_membership(g, s)?.is_member() {
        return Ok(false);
    }
    for e in g.edge_ids().filter(|&e| !s.contains(e)) {
        if g_membership(g, &with_edge(s, e))?.is_member() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn is_large(g: &RootedDigraph, l: &EdgeSet) -> Result<bool, VerifyError> {
    Ok(large_failure(g, l, LargenessMethod::LambdaEquality)?.is_none())
}

/// Independent re-check of a certificate, using only the flame and linked
/// set oracles (and path search where the claim is about flows).
pub(crate) fn reverify_certificate(g: &RootedDigraph, c: &Certificate) -> Result<bool, VerifyError> {
    match c {
        Certificate::ExchangeFailure { smaller, larger } => {
            let (a, b) = (parse_set(g, smaller)?, parse_set(g, larger)?);
            if a.len() >= b.len() || !is_flame(g, &a)?.is_flame() || !is_flame(g, &b)?.is_flame() {
                return Ok(false);
            }
            for e in b.difference(&a).iter() {
                if is_flame(g, &with_edge(&a, e))?.is_flame() {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Certificate::MaximalNotLarge { set, vertex } => {
            let s = parse_set(g, set)?;
            let v = g.vertex(vertex)?;
            Ok(is_maximal_in_g(g, &s)? && lambda(g.restrict(&s), v)? != lambda(g, v)?)
        }
        Certificate::BasisExchangeFailure { first, second, removed } => {
            let flames = all_flames(g.view(), brute_force_bound())?;
            let bases: HashSet<Mask> = maximal_masks(&flames).into_iter().collect();
            let b1 = edges_to_mask(&parse_set(g, first)?);
            let b2 = edges_to_mask(&parse_set(g, second)?);
            let e = g.edge_by_name(removed)?.index();
            if !bases.contains(&b1) || !bases.contains(&b2) || b1 & !b2 & (1 << e) == 0 {
                return Ok(false);
            }
            let only_second = b2 & !b1;
            Ok(!(0..64)
                .filter(|f| only_second & (1 << f) != 0)
                .any(|f| bases.contains(&((b1 & !(1 << e)) | 1 << f))))
        }
        Certificate::ConstructorFailure { start, .. } => {
            let f = parse_set(g, start)?;
            Ok(!check_constructor(g, &f)?.is_empty())
        }
        Certificate::LargenessDisagreement { set, .. } => {
            let l = parse_set(g, set)?;
            Ok(!check_largeness_equivalence(g, &l)?.is_empty())
        }
        Certificate::LinkedSetMismatch { vertex, .. } => {
            let v = g.vertex(vertex)?;
            let x = largest_v_linked_set(g, v)?.linked_set;
            Ok(x != brute_force_largest_v_linked(g.view(), v, DEFAULT_ORACLE_VERTICES)?)
        }
        Certificate::NestingFailure { vertex, inner } => {
            let (v, w) = (g.vertex(vertex)?, g.vertex(inner)?);
            let x = largest_v_linked_set(g, v)?.linked_set;
            let y = largest_v_linked_set(g, w)?.linked_set;
            Ok(x.contains(w) && !y.is_subset(&x))
        }
        Certificate::FlowMismatch { source, target, .. } => {
            let (s, t) = (g.vertex(source)?, g.vertex(target)?);
            Ok(max_edge_disjoint_paths(g, s, t)?.path_system.len() != brute_max_paths(g.view(), s, t))
        }
        Certificate::BadCut { source, target, cut, paths } => {
            let (s, t) = (g.vertex(source)?, g.vertex(target)?);
            let cut = parse_set(g, cut)?;
            let paths = parse_paths(g, paths)?;
            Ok(cut_problem(g.view(), s, t, &cut, &paths).is_some())
        }
        Certificate::MergeFailure { source, target, p, q, .. } => {
            let (s, t) = (g.vertex(source)?, g.vertex(target)?);
            let (p, q) = (parse_paths(g, p)?, parse_paths(g, q)?);
            Ok(merge_problem(g, s, t, &p, &q)?.is_some())
        }
        Certificate::MaximalNotFlame { set, vertex } => {
            let s = parse_set(g, set)?;
            let v = g.vertex(vertex)?;
            let inner = g.restrict(&s);
            let part = delta_in(inner, v)?;
            Ok(is_maximal_in_g(g, &s)? && gammoid_independent(inner, v, &part)?.is_none())
        }
        Certificate::NoLargeExtension { flame } => {
            let f = parse_set(g, flame)?;
            if !is_flame(g, &f)?.is_flame() {
                return Ok(false);
            }
            let free: Vec<_> = g.edge_ids().filter(|&e| !f.contains(e)).collect();
            if free.len() > brute_force_bound() {
                return Err(VerifyError::BoundExceeded {
                    size: free.len(),
                    bound: brute_force_bound(),
                });
            }
            for mask in 0u64..1 << free.len() {
                let mut l = f.clone();
                for (b, &e) in free.iter().enumerate() {
                    if mask & (1 << b) != 0 {
                        l.insert(e);
                    }
                }
                if is_flame(g, &l)?.is_flame() && is_large(g, &l)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}
