//! Brute-force oracles, instance generation and executable property suites.

pub mod brute;
pub mod instances;
pub mod search;
pub mod suites;

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::construct::ConstructError;
use crate::flame::FlameError;
use crate::flow::FlowError;
use crate::format::{parse_digraph, serialize_digraph};
use crate::graph::{CycleCertificate, GraphError, RootedDigraph};
use crate::linked::LinkedError;

pub use instances::{
    enumerate_instances, enumerate_instances_with_cap, instance_count, random_dag, random_digraph,
    random_flame, InstanceSpec, ENUMERATION_CAP,
};
pub use search::{
    append_findings, search_conjecture_flame_extension_cyclic, search_question_maximal_flames,
};
pub use suites::{
    check_constructor, check_flow_oracle, check_greedoid_exchange, check_largeness_equivalence,
    check_linkage_merge, check_linked_oracle, check_matroid_bases, check_maximal_elements_large,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("{count} instances exceed the enumeration cap {cap}")]
    CapExceeded { count: u64, cap: u64 },
    #[error("size {size} exceeds the brute-force bound {bound}")]
    BoundExceeded { size: usize, bound: usize },
    #[error("the digraph has a directed cycle")]
    Cyclic(CycleCertificate),
    #[error("malformed certificate: {0}")]
    Certificate(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Linked(#[from] LinkedError),
    #[error(transparent)]
    Flame(#[from] FlameError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
}

pub type EdgeNames = Vec<String>;

/// Objects that exhibit a violation. Edge and vertex sets are given by id,
/// so a certificate can be checked against the serialized instance alone.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// Two flames where no edge of the larger extends the smaller.
    ExchangeFailure { smaller: EdgeNames, larger: EdgeNames },
    /// A maximal member of `G(D)` that is not large at `vertex`.
    MaximalNotLarge { set: EdgeNames, vertex: String },
    /// Maximal flames where `removed` has no replacement from `second`.
    BasisExchangeFailure { first: EdgeNames, second: EdgeNames, removed: String },
    ConstructorFailure { start: EdgeNames, reason: String },
    LargenessDisagreement { set: EdgeNames, lambda_equality: bool, tail_containment: bool },
    LinkedSetMismatch { vertex: String, residual: Vec<String>, oracle: Vec<String> },
    /// `inner ∈ X_vertex` but `X_inner ⊄ X_vertex`.
    NestingFailure { vertex: String, inner: String },
    FlowMismatch { source: String, target: String, flow: usize, brute: usize },
    BadCut { source: String, target: String, cut: EdgeNames, paths: Vec<EdgeNames> },
    MergeFailure { source: String, target: String, p: Vec<EdgeNames>, q: Vec<EdgeNames>, reason: String },
    /// A maximal member of `G(D)` whose part at `vertex` is not coverable
    /// inside `D(set)`.
    MaximalNotFlame { set: EdgeNames, vertex: String },
    /// A flame with no large flame containing it.
    NoLargeExtension { flame: EdgeNames },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Violation {
    /// The instance in the graph file format.
    pub instance: String,
    pub claim: String,
    pub certificate: Certificate,
}

impl Violation {
    pub fn new(g: &RootedDigraph, claim: &str, certificate: Certificate) -> Self {
        Violation {
            instance: serialize_digraph(g),
            claim: claim.to_owned(),
            certificate,
        }
    }

    /// Re-checks the certificate from scratch against the stored instance.
    pub fn reverify(&self) -> Result<bool, VerifyError> {
        let g = parse_digraph(&self.instance)?;
        suites::reverify_certificate(&g, &self.certificate)
    }
}

/// How a sweep chose its instances.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub suite: String,
    pub bounds: InstanceSpec,
    /// Number of random instances; `None` means full enumeration.
    pub random_count: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub spec: SweepSpec,
    pub instance_count: u64,
    pub violations: Vec<Violation>,
    /// Wall-clock seconds.
    pub runtime: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Greedoid,
    Szeszler,
    Matroid,
    Constructor,
    LargenessEquivalence,
    LinkedOracle,
    Flow,
    Merge,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Greedoid,
        Suite::Szeszler,
        Suite::Matroid,
        Suite::Constructor,
        Suite::LargenessEquivalence,
        Suite::LinkedOracle,
        Suite::Flow,
        Suite::Merge,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Greedoid => "greedoid",
            Suite::Szeszler => "szeszler",
            Suite::Matroid => "matroid",
            Suite::Constructor => "constructor",
            Suite::LargenessEquivalence => "lemma9-equiv",
            Suite::LinkedOracle => "linked-oracle",
            Suite::Flow => "flow",
            Suite::Merge => "merge",
        }
    }

    pub fn from_name(name: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|s| s.name() == name)
    }

    /// Whether the checked statement needs an acyclic digraph.
    pub fn acyclic_only(self) -> bool {
        matches!(self, Suite::Szeszler | Suite::Matroid | Suite::Constructor)
    }

    /// Checks one instance. `rng` drives the suites that sample sets or
    /// path systems.
    pub fn check(
        self,
        g: &RootedDigraph,
        exhaustive: bool,
        rng: &mut ChaCha8Rng,
    ) -> Result<Vec<Violation>, VerifyError> {
        match self {
            Suite::Greedoid => check_greedoid_exchange(g),
            Suite::Szeszler => check_maximal_elements_large(g),
            Suite::Matroid => check_matroid_bases(g),
            Suite::Constructor => suites::constructor_on_instance(g, exhaustive, rng),
            Suite::LargenessEquivalence => suites::largeness_on_instance(g, exhaustive, rng),
            Suite::LinkedOracle => check_linked_oracle(g),
            Suite::Flow => check_flow_oracle(g),
            Suite::Merge => suites::merge_on_instance(g, rng),
        }
    }
}

fn finish(spec: SweepSpec, count: u64, mut violations: Vec<Violation>, start: Instant) -> SweepReport {
    violations.sort();
    SweepReport {
        spec,
        instance_count: count,
        violations,
        runtime: start.elapsed().as_secs_f64(),
    }
}

/// Runs `suite` on every enumerated instance within `bounds` (acyclic ones
/// only when the suite or the bounds ask for it).
pub fn run_enumerated(suite: Suite, bounds: &InstanceSpec) -> Result<SweepReport, VerifyError> {
    let start = Instant::now();
    let mut spec = *bounds;
    spec.acyclic_only |= suite.acyclic_only();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed.unwrap_or(0));
    let mut count = 0;
    let mut violations = Vec::new();
    for g in enumerate_instances(&spec)? {
        count += 1;
        violations.extend(suite.check(&g, true, &mut rng)?);
    }
    let sweep = SweepSpec {
        suite: suite.name().to_owned(),
        bounds: spec,
        random_count: None,
    };
    Ok(finish(sweep, count, violations, start))
}

/// Runs `suite` on `count` random instances. Each instance draws its vertex
/// and edge counts uniformly up to the bounds.
pub fn run_random(
    suite: Suite,
    bounds: &InstanceSpec,
    count: usize,
) -> Result<SweepReport, VerifyError> {
    let start = Instant::now();
    let mut spec = *bounds;
    spec.acyclic_only |= suite.acyclic_only();
    let seed = spec.seed.unwrap_or(0);
    spec.seed = Some(seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    for _ in 0..count {
        let g = random_instance_within(&spec, &mut rng);
        violations.extend(suite.check(&g, false, &mut rng)?);
    }
    let sweep = SweepSpec {
        suite: suite.name().to_owned(),
        bounds: spec,
        random_count: Some(count),
    };
    Ok(finish(sweep, count as u64, violations, start))
}

/// A random instance with vertex and edge counts drawn up to the bounds.
pub fn random_instance_within(bounds: &InstanceSpec, rng: &mut ChaCha8Rng) -> RootedDigraph {
    let spec = InstanceSpec {
        max_nonroot_vertices: rng.gen_range(0..=bounds.max_nonroot_vertices),
        max_edges: rng.gen_range(0..=bounds.max_edges),
        max_parallel: bounds.max_parallel,
        acyclic_only: bounds.acyclic_only,
        seed: Some(rng.gen()),
    };
    if bounds.acyclic_only {
        random_dag(&spec)
    } else {
        random_digraph(&spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(Suite::from_name(s.name()), Some(s));
        }
        assert_eq!(Suite::from_name("nope"), None);
    }

    #[test]
    fn report_serializes() {
        let report = run_enumerated(Suite::Greedoid, &InstanceSpec::new(1, 2, 2)).unwrap();
        assert_eq!(report.instance_count, 3);
        let json = serde_json::to_string(&report).unwrap();
        let back: SweepReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back.spec, report.spec);
        assert!(json.contains("\"violations\":[]"));
    }

    #[test]
    fn random_sweeps_are_reproducible() {
        let bounds = InstanceSpec::new(4, 8, 2).with_seed(11);
        let a = run_random(Suite::Flow, &bounds, 20).unwrap();
        let b = run_random(Suite::Flow, &bounds, 20).unwrap();
        assert_eq!(a.violations, b.violations);
        assert_eq!(a.instance_count, 20);
    }
}
