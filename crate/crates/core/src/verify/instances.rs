//! Exhaustive enumeration and seeded random generation of small instances.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::flame::{is_flame, lambda};
use crate::graph::{is_acyclic, RootedDigraph};
use crate::sets::EdgeSet;

use super::VerifyError;

/// Default upper limit on the number of enumerated instances.
pub const ENUMERATION_CAP: u64 = 2_000_000;

/// Bounds for enumeration (exact vertex count, edge and multiplicity
/// limits) or random generation (which also uses `seed`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub max_nonroot_vertices: usize,
    pub max_edges: usize,
    pub max_parallel: usize,
    pub acyclic_only: bool,
    pub seed: Option<u64>,
}

impl InstanceSpec {
    pub fn new(max_nonroot_vertices: usize, max_edges: usize, max_parallel: usize) -> Self {
        InstanceSpec {
            max_nonroot_vertices,
            max_edges,
            max_parallel,
            acyclic_only: false,
            seed: None,
        }
    }

    pub fn acyclic(mut self) -> Self {
        self.acyclic_only = true;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

/// Names `a, b, c, …` skipping `r`, which is the root.
fn letter_names(n: usize) -> Vec<String> {
    ('a'..='z')
        .filter(|&c| c != 'r')
        .take(n)
        .map(String::from)
        .collect()
}

fn padded(prefix: char, i: usize, width: usize) -> String {
    format!("{prefix}{i:0width$}")
}

fn width_for(count: usize) -> usize {
    count.max(1).to_string().len()
}

/// All ordered pairs that may carry an edge: root to every vertex, then
/// every ordered pair of distinct non-root vertices.
fn candidate_arcs(n: usize) -> Vec<(usize, usize)> {
    let mut arcs: Vec<(usize, usize)> = (1..=n).map(|h| (0, h)).collect();
    for t in 1..=n {
        for h in 1..=n {
            if t != h {
                arcs.push((t, h));
            }
        }
    }
    arcs
}

/// Number of multiplicity vectors the enumeration walks (before any
/// acyclicity filter).
pub fn instance_count(spec: &InstanceSpec) -> u64 {
    let n = spec.max_nonroot_vertices;
    let arcs = n * n;
    let m = spec.max_edges;
    let mut ways = vec![0u64; m + 1];
    ways[0] = 1;
    for _ in 0..arcs {
        let mut next = vec![0u64; m + 1];
        for (s, &w) in ways.iter().enumerate() {
            for k in 0..=spec.max_parallel {
                if s + k <= m {
                    next[s + k] = next[s + k].saturating_add(w);
                }
            }
        }
        ways = next;
    }
    ways.iter().fold(0u64, |a, &b| a.saturating_add(b))
}

/// Every labeled rooted multidigraph on the root plus exactly
/// `max_nonroot_vertices` vertices with at most `max_edges` edges and at
/// most `max_parallel` edges per ordered pair. Smaller vertex counts show
/// up as isolated vertices.
pub fn enumerate_instances(spec: &InstanceSpec) -> Result<InstanceIter, VerifyError> {
    enumerate_instances_with_cap(spec, ENUMERATION_CAP)
}

pub fn enumerate_instances_with_cap(
    spec: &InstanceSpec,
    cap: u64,
) -> Result<InstanceIter, VerifyError> {
    let count = instance_count(spec);
    if count > cap {
        return Err(VerifyError::CapExceeded { count, cap });
    }
    let n = spec.max_nonroot_vertices;
    let mut names = vec!["r".to_owned()];
    names.extend(letter_names(n));
    let arcs = candidate_arcs(n);
    Ok(InstanceIter {
        mult: vec![0; arcs.len()],
        arcs,
        names,
        max_edges: spec.max_edges,
        max_parallel: spec.max_parallel,
        acyclic_only: spec.acyclic_only,
        done: false,
    })
}

/// Odometer over multiplicity vectors in lexicographic order.
pub struct InstanceIter {
    arcs: Vec<(usize, usize)>,
    names: Vec<String>,
    mult: Vec<usize>,
    max_edges: usize,
    max_parallel: usize,
    acyclic_only: bool,
    done: bool,
}

impl InstanceIter {
    fn build(&self) -> RootedDigraph {
        let total: usize = self.mult.iter().sum();
        let width = width_for(self.max_edges);
        let mut edges = Vec::with_capacity(total);
        let mut k = 0;
        for (&(t, h), &c) in self.arcs.iter().zip(&self.mult) {
            for _ in 0..c {
                k += 1;
                edges.push((padded('e', k, width), t, h));
            }
        }
        RootedDigraph::new(
            &self.names[0],
            self.names[1..].iter().map(String::as_str),
            edges
                .iter()
                .map(|(id, t, h)| (id.as_str(), self.names[*t].as_str(), self.names[*h].as_str())),
        )
        .expect("enumerated instances are valid")
    }

    fn advance(&mut self) {
        let mut prefix: usize = self.mult.iter().sum();
        for i in (0..self.mult.len()).rev() {
            prefix -= self.mult[i];
            if self.mult[i] < self.max_parallel && prefix + self.mult[i] < self.max_edges {
                self.mult[i] += 1;
                return;
            }
            self.mult[i] = 0;
        }
        self.done = true;
    }
}

impl Iterator for InstanceIter {
    type Item = RootedDigraph;

    fn next(&mut self) -> Option<RootedDigraph> {
        while !self.done {
            let g = self.build();
            self.advance();
            if !self.acyclic_only || is_acyclic(&g) {
                return Some(g);
            }
        }
        None
    }
}

fn random_instance(spec: &InstanceSpec, acyclic: bool) -> RootedDigraph {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed.unwrap_or(0));
    let n = spec.max_nonroot_vertices;
    let vw = width_for(n);
    let mut names = vec!["r".to_owned()];
    names.extend((1..=n).map(|i| padded('v', i, vw)));
    // Position in a random vertex order; the root always comes first.
    let mut rank: Vec<usize> = (1..=n).collect();
    rank.shuffle(&mut rng);
    rank.insert(0, 0);

    let pairs: Vec<(usize, usize)> = candidate_arcs(n)
        .into_iter()
        .filter(|&(t, h)| !acyclic || rank[t] < rank[h])
        .collect();
    let mut mult = vec![0usize; pairs.len()];
    let capacity = pairs.len() * spec.max_parallel;
    let target = spec.max_edges.min(capacity);
    let mut chosen = Vec::with_capacity(target);
    while chosen.len() < target {
        let i = rng.gen_range(0..pairs.len());
        if mult[i] < spec.max_parallel {
            mult[i] += 1;
            chosen.push(pairs[i]);
        }
    }
    let ew = width_for(target);
    let edges: Vec<(String, usize, usize)> = chosen
        .iter()
        .enumerate()
        .map(|(k, &(t, h))| (padded('e', k + 1, ew), t, h))
        .collect();
    RootedDigraph::new(
        &names[0],
        names[1..].iter().map(String::as_str),
        edges
            .iter()
            .map(|(id, t, h)| (id.as_str(), names[*t].as_str(), names[*h].as_str())),
    )
    .expect("generated instances are valid")
}

/// An acyclic digraph with exactly `max_nonroot_vertices` non-root vertices
/// and `max_edges` edges (fewer if the multiplicity bound leaves no room).
/// Edges go from earlier to later vertices of a random order that starts
/// with the root.
pub fn random_dag(spec: &InstanceSpec) -> RootedDigraph {
    random_instance(spec, true)
}

/// As [`random_dag`] without the acyclicity restriction.
pub fn random_digraph(spec: &InstanceSpec) -> RootedDigraph {
    random_instance(spec, false)
}

/// A random flame: edges are offered in random order and kept whenever the
/// result stays a flame, until `target` edges are kept or none fits.
pub fn random_flame(g: &RootedDigraph, target: usize, rng: &mut impl Rng) -> EdgeSet {
    let mut f = g.empty_edges();
    loop {
        if f.len() >= target {
            return f;
        }
        let mut candidates: Vec<_> = g.edge_ids().filter(|&e| !f.contains(e)).collect();
        candidates.shuffle(rng);
        let next = candidates.into_iter().find(|&e| {
            let mut bigger = f.clone();
            bigger.insert(e);
            is_flame(g, &bigger).expect("subset of the digraph").is_flame()
        });
        match next {
            Some(e) => {
                f.insert(e);
            }
            None => return f,
        }
    }
}

/// `Σ_v λ_D(r, v)`.
pub fn lambda_sum(g: &RootedDigraph) -> usize {
    g.non_root_vertices()
        .map(|v| lambda(g, v).expect("non-root vertex"))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::serialize_digraph;

    #[test]
    fn tiny_counts() {
        let spec = InstanceSpec::new(1, 2, 2);
        let all: Vec<_> = enumerate_instances(&spec).unwrap().collect();
        assert_eq!(all.len(), 3);
        assert_eq!(instance_count(&spec), 3);
        assert_eq!(all[2].edge_count(), 2);

        let root_only: Vec<_> = enumerate_instances(&InstanceSpec::new(0, 3, 2)).unwrap().collect();
        assert_eq!(root_only.len(), 1);
        assert_eq!(root_only[0].vertex_count(), 1);

        let acyclic: Vec<_> = enumerate_instances(&InstanceSpec::new(2, 1, 2).acyclic())
            .unwrap()
            .collect();
        assert_eq!(acyclic.len(), 5);
        assert!(acyclic.iter().all(is_acyclic));
    }

    #[test]
    fn counts_match_a_closed_form() {
        // With one edge per pair and no edge limit, every subset of the
        // n² candidate pairs appears once.
        for n in 0..=2 {
            let spec = InstanceSpec::new(n, n * n, 1);
            let k = enumerate_instances(&spec).unwrap().count() as u64;
            assert_eq!(k, 1 << (n * n));
            assert_eq!(instance_count(&spec), k);
        }
        // Cyclic instances counted by hand for n = 2, one edge per pair:
        // a→b and b→a together, with any choice of the two root edges.
        let all = enumerate_instances(&InstanceSpec::new(2, 4, 1)).unwrap().count();
        let acyclic = enumerate_instances(&InstanceSpec::new(2, 4, 1).acyclic())
            .unwrap()
            .count();
        assert_eq!(all - acyclic, 4);
    }

    #[test]
    fn enumeration_is_distinct_and_deterministic() {
        let spec = InstanceSpec::new(2, 3, 2);
        let a: Vec<String> = enumerate_instances(&spec).unwrap().map(|g| serialize_digraph(&g)).collect();
        let b: Vec<String> = enumerate_instances(&spec).unwrap().map(|g| serialize_digraph(&g)).collect();
        assert_eq!(a, b);
        let unique: std::collections::BTreeSet<_> = a.iter().collect();
        assert_eq!(unique.len(), a.len());
        assert_eq!(a.len() as u64, instance_count(&spec));
    }

    #[test]
    fn cap_is_enforced() {
        let spec = InstanceSpec::new(4, 8, 2);
        assert!(matches!(
            enumerate_instances_with_cap(&spec, 1000),
            Err(VerifyError::CapExceeded { .. })
        ));
    }

    #[test]
    fn random_dags_are_reproducible_and_acyclic() {
        let spec = InstanceSpec::new(5, 9, 2).with_seed(42);
        let a = random_dag(&spec);
        assert_eq!(a, random_dag(&spec));
        assert!(is_acyclic(&a));
        assert_eq!(a.edge_count(), 9);
        assert_eq!(random_dag(&InstanceSpec::new(0, 4, 2).with_seed(3)).vertex_count(), 1);
        let g = random_digraph(&InstanceSpec::new(3, 6, 1).with_seed(9));
        assert_eq!(g.edge_count(), 6);
    }

    #[test]
    fn random_flames_are_flames() {
        let g = random_dag(&InstanceSpec::new(6, 14, 2).with_seed(5));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for target in [0, 3, 100] {
            let f = random_flame(&g, target, &mut rng);
            assert!(is_flame(&g, &f).unwrap().is_flame());
            assert!(f.len() <= target);
        }
    }
}
