//! Exploratory sweeps for open questions. Findings are reported with
//! certificates; nothing is asserted about how many there are.

use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path as FsPath;
use std::time::Instant;

use crate::flame::{gammoid_independent, is_flame, large_failure, maximal_g_elements, FlameCheck, LargenessMethod};
use crate::graph::{delta_in, is_acyclic, RootedDigraph};

use super::brute::{all_flames, brute_force_bound, mask_to_edges};
use super::suites::{FLAME_EXTENSION, MAXIMAL_FLAME};
use super::{
    enumerate_instances, Certificate, InstanceSpec, SweepReport, SweepSpec, VerifyError, Violation,
};

/// Default bounds for both searches.
pub fn default_search_bounds() -> InstanceSpec {
    InstanceSpec::new(3, 5, 2)
}

/// Maximal members of `G(D)` that are not flames, on one acyclic instance.
pub fn maximal_non_flames(g: &RootedDigraph) -> Result<Vec<Violation>, VerifyError> {
    let mut out = Vec::new();
    for s in maximal_g_elements(g, brute_force_bound())? {
        if let FlameCheck::NotFlame { vertex } = is_flame(g, &s)? {
            let inner = g.restrict(&s);
            let part = delta_in(inner, vertex)?;
            debug_assert!(gammoid_independent(inner, vertex, &part)?.is_none());
            out.push(Violation::new(
                g,
                MAXIMAL_FLAME,
                Certificate::MaximalNotFlame {
                    set: g.edge_names(&s),
                    vertex: g.vertex_name(vertex).to_owned(),
                },
            ));
        }
    }
    Ok(out)
}

/// Flames of one instance that lie in no large flame.
pub fn flames_without_large_extension(g: &RootedDigraph) -> Result<Vec<Violation>, VerifyError> {
    let m = g.edge_count();
    let flames = all_flames(g.view(), brute_force_bound())?;
    let mut large = Vec::new();
    for &f in &flames {
        if large_failure(g, &mask_to_edges(m, f), LargenessMethod::LambdaEquality)?.is_none() {
            large.push(f);
        }
    }
    Ok(flames
        .iter()
        .filter(|&&f| !large.iter().any(|&l| l & f == f))
        .map(|&f| {
            Violation::new(
                g,
                FLAME_EXTENSION,
                Certificate::NoLargeExtension {
                    flame: g.edge_names(&mask_to_edges(m, f)),
                },
            )
        })
        .collect())
}

fn sweep(
    name: &str,
    spec: InstanceSpec,
    keep: impl Fn(&RootedDigraph) -> bool,
    check: impl Fn(&RootedDigraph) -> Result<Vec<Violation>, VerifyError>,
) -> Result<SweepReport, VerifyError> {
    let start = Instant::now();
    let mut count = 0;
    let mut findings = Vec::new();
    for g in enumerate_instances(&spec)?.filter(|g| keep(g)) {
        count += 1;
        findings.extend(check(&g)?);
    }
    findings.sort();
    Ok(SweepReport {
        spec: SweepSpec {
            suite: name.to_owned(),
            bounds: spec,
            random_count: None,
        },
        instance_count: count,
        violations: findings,
        runtime: start.elapsed().as_secs_f64(),
    })
}

/// Are all maximal members of `G(D)` flames? Scans acyclic instances.
pub fn search_question_maximal_flames(spec: &InstanceSpec) -> Result<SweepReport, VerifyError> {
    let mut spec = *spec;
    spec.acyclic_only = true;
    sweep("maximal-flames", spec, |_| true, maximal_non_flames)
}

/// Does every flame extend to a large flame? Scans instances with a
/// directed cycle, where the acyclic construction does not apply.
pub fn search_conjecture_flame_extension_cyclic(
    spec: &InstanceSpec,
) -> Result<SweepReport, VerifyError> {
    let mut spec = *spec;
    spec.acyclic_only = false;
    sweep(
        "flame-extension-cyclic",
        spec,
        |g| !is_acyclic(g),
        flames_without_large_extension,
    )
}

/// Appends the report as one JSON line.
pub fn append_findings(path: &FsPath, report: &SweepReport) -> std::io::Result<()> {
    let mut file = OpenOptions::new().create(true).append(true).open(path)?;
    let line = serde_json::to_string(report).map_err(std::io::Error::other)?;
    writeln!(file, "{line}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fixtures_give_no_findings() {
        assert!(maximal_non_flames(&fixtures::g1()).unwrap().is_empty());
        assert!(flames_without_large_extension(&fixtures::c1()).unwrap().is_empty());
        let root_only = RootedDigraph::new("r", [], []).unwrap();
        assert!(flames_without_large_extension(&root_only).unwrap().is_empty());
    }

    #[test]
    fn trivial_bounds() {
        let report = search_question_maximal_flames(&InstanceSpec::new(0, 0, 1)).unwrap();
        assert_eq!(report.instance_count, 1);
        assert!(report.violations.is_empty());
        let report = search_conjecture_flame_extension_cyclic(&InstanceSpec::new(0, 0, 1)).unwrap();
        assert_eq!(report.instance_count, 0);
    }

    #[test]
    fn small_sweeps_re_verify() {
        let spec = InstanceSpec::new(2, 4, 2);
        for report in [
            search_question_maximal_flames(&spec).unwrap(),
            search_conjecture_flame_extension_cyclic(&spec).unwrap(),
        ] {
            for v in &report.violations {
                assert!(v.reverify().unwrap());
            }
        }
    }

    #[test]
    fn findings_append_as_lines() {
        let dir = std::env::temp_dir().join(format!("flamekit-findings-{}", std::process::id()));
        let _ = std::fs::remove_file(&dir);
        let report = search_question_maximal_flames(&InstanceSpec::new(1, 1, 1)).unwrap();
        append_findings(&dir, &report).unwrap();
        append_findings(&dir, &report).unwrap();
        let text = std::fs::read_to_string(&dir).unwrap();
        assert_eq!(text.lines().count(), 2);
        std::fs::remove_file(&dir).unwrap();
    }
}
