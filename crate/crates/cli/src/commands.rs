use std::fmt::Write as _;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{json, Value};

use flamekit::construct::{extend_to_large_flame, ConstructError, ConstructionTrace};
use flamekit::flame::{
    g_membership, is_flame, lambda, large_failure, largeness_certificate, FlameCheck,
    LargenessMethod,
};
use flamekit::format::{parse_digraph, parse_edge_set, to_dot};
use flamekit::graph::topological_order;
use flamekit::linked::largest_v_linked_set;
use flamekit::verify::search::{append_findings, default_search_bounds};
use flamekit::verify::{
    run_enumerated, run_random, search_conjecture_flame_extension_cyclic,
    search_question_maximal_flames, InstanceSpec, Suite, SweepReport,
};
use flamekit::{EdgeSet, PathSystem, RootedDigraph, VertexSet};

use crate::report::{Failure, Report};

pub enum Property {
    Flame,
    Large,
    GMember,
}

/// `n`, `m`, `p` values given on the command line; unset ones take the
/// command's defaults.
#[derive(Debug, Clone, Default)]
pub struct Bounds {
    n: Option<usize>,
    m: Option<usize>,
    p: Option<usize>,
}

impl Bounds {
    fn resolve(&self, default: InstanceSpec) -> InstanceSpec {
        InstanceSpec {
            max_nonroot_vertices: self.n.unwrap_or(default.max_nonroot_vertices),
            max_edges: self.m.unwrap_or(default.max_edges),
            max_parallel: self.p.unwrap_or(default.max_parallel),
            ..default
        }
    }
}

/// Parses `n=3,m=5,p=2`; a bare number sets `n` and `m` to that value.
pub fn parse_bounds(text: &str) -> Result<Bounds, String> {
    let mut b = Bounds::default();
    if let Ok(k) = text.trim().parse::<usize>() {
        b.n = Some(k);
        b.m = Some(k);
        return Ok(b);
    }
    for part in text.split(',') {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| format!("expected key=value, got `{part}`"))?;
        let value: usize = value
            .trim()
            .parse()
            .map_err(|_| format!("`{value}` is not a non-negative integer"))?;
        match key.trim() {
            "n" => b.n = Some(value),
            "m" => b.m = Some(value),
            "p" => b.p = Some(value),
            other => return Err(format!("unknown bound `{other}` (use n, m or p)")),
        }
    }
    Ok(b)
}

pub fn parse_suite(text: &str) -> Result<Suite, String> {
    Suite::from_name(text).ok_or_else(|| {
        let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
        format!("unknown suite `{text}` (one of {})", names.join(", "))
    })
}

fn read(report: &mut Report, path: &Path) -> Result<String, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    report.digest(text.as_bytes());
    Ok(text)
}

fn load_graph(report: &mut Report, path: &Path) -> Result<RootedDigraph, Failure> {
    let text = read(report, path)?;
    parse_digraph(&text).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn load_set(report: &mut Report, g: &RootedDigraph, path: &Path) -> Result<EdgeSet, Failure> {
    let text = read(report, path)?;
    parse_edge_set(g, &text).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn braces(items: &[String]) -> String {
    format!("{{{}}}", items.join(","))
}

fn path_lines(g: &RootedDigraph, sys: &PathSystem, out: &mut String) {
    for p in sys.names(g) {
        writeln!(out, "    {}", p.join(" ")).unwrap();
    }
}

pub fn analyze(report: &mut Report, path: &Path, dot: bool) -> Result<bool, Failure> {
    let g = load_graph(report, path)?;
    let order = topological_order(&g);
    let mut rows = Vec::new();
    let mut text = String::new();
    writeln!(
        text,
        "root {}, {} vertices, {} edges, {}",
        g.vertex_name(g.root()),
        g.vertex_count(),
        g.edge_count(),
        if order.is_ok() { "acyclic" } else { "cyclic" }
    )
    .unwrap();
    for v in g.non_root_vertices() {
        let lam = lambda(&g, v)?;
        let res = largest_v_linked_set(&g, v)?;
        let x = g.vertex_names(&res.linked_set);
        let boundary = g.edge_names(&res.boundary);
        writeln!(
            text,
            "{}: λ = {lam}, X = {}, boundary {} ({} edges)",
            g.vertex_name(v),
            braces(&x),
            braces(&boundary),
            boundary.len()
        )
        .unwrap();
        rows.push(json!({
            "vertex": g.vertex_name(v),
            "lambda": lam,
            "linked_set": x,
            "boundary": boundary,
            "boundary_size": res.boundary.len(),
        }));
    }
    let cycle = order.err().map(|c| {
        let names: Vec<&str> = c.0.iter().map(|&e| g.edge_name(e)).collect();
        writeln!(text, "directed cycle: {}", names.join(" ")).unwrap();
        names.iter().map(|s| s.to_string()).collect::<Vec<_>>()
    });
    let mut result = json!({
        "vertices": rows,
        "acyclic": cycle.is_none(),
        "cycle": cycle,
    });
    if dot {
        let d = to_dot(&g, None);
        text.push_str(&d);
        result["dot"] = Value::String(d);
    }
    report.text = text;
    report.result = result;
    Ok(true)
}

fn witnesses_json<'a>(
    g: &RootedDigraph,
    items: impl IntoIterator<Item = (&'a flamekit::VertexId, &'a PathSystem)>,
    text: &mut String,
) -> Value {
    let mut map = serde_json::Map::new();
    for (v, sys) in items {
        writeln!(text, "  {}:", g.vertex_name(*v)).unwrap();
        path_lines(g, sys, text);
        map.insert(g.vertex_name(*v).to_owned(), json!(sys.names(g)));
    }
    Value::Object(map)
}

pub fn check(
    report: &mut Report,
    graph: &Path,
    set: &Path,
    property: Property,
) -> Result<bool, Failure> {
    let g = load_graph(report, graph)?;
    let s = load_set(report, &g, set)?;
    let mut text = String::new();
    let (name, holds, mut result) = match property {
        Property::Flame => match is_flame(&g, &s)? {
            FlameCheck::Flame(cert) => {
                writeln!(text, "holds: the edge set is a flame").unwrap();
                let w = witnesses_json(&g, &cert.witnesses, &mut text);
                ("flame", true, json!({ "witnesses": w }))
            }
            FlameCheck::NotFlame { vertex } => {
                writeln!(
                    text,
                    "fails: the ingoing edges of {} are not covered inside the edge set",
                    g.vertex_name(vertex)
                )
                .unwrap();
                ("flame", false, json!({ "vertex": g.vertex_name(vertex) }))
            }
        },
        Property::Large => match large_failure(&g, &s, LargenessMethod::LambdaEquality)? {
            None => {
                let cert = largeness_certificate(&g, &s)?;
                writeln!(text, "holds: the edge set is large").unwrap();
                let mut map = serde_json::Map::new();
                for (v, w) in &cert.witnesses {
                    let cut = g.edge_names(&w.cut);
                    writeln!(text, "  {}: cut {}", g.vertex_name(*v), braces(&cut)).unwrap();
                    path_lines(&g, &w.path_system, &mut text);
                    map.insert(
                        g.vertex_name(*v).to_owned(),
                        json!({ "cut": cut, "paths": w.path_system.names(&g) }),
                    );
                }
                ("large", true, json!({ "witnesses": map }))
            }
            Some(v) => {
                let inner = lambda(g.restrict(&s), v)?;
                let full = lambda(&g, v)?;
                writeln!(
                    text,
                    "fails at {}: λ in the edge set is {inner}, in the digraph {full}",
                    g.vertex_name(v)
                )
                .unwrap();
                (
                    "large",
                    false,
                    json!({ "vertex": g.vertex_name(v), "lambda_in_set": inner, "lambda": full }),
                )
            }
        },
        Property::GMember => {
            let m = g_membership(&g, &s)?;
            match m.failing_vertex {
                None => {
                    writeln!(text, "holds: the edge set is in G(D)").unwrap();
                    let w = witnesses_json(&g, &m.witnesses, &mut text);
                    ("g-member", true, json!({ "witnesses": w }))
                }
                Some(v) => {
                    writeln!(
                        text,
                        "fails: the edges into {} cannot be covered by edge-disjoint root paths",
                        g.vertex_name(v)
                    )
                    .unwrap();
                    ("g-member", false, json!({ "vertex": g.vertex_name(v) }))
                }
            }
        }
    };
    result["property"] = json!(name);
    result["holds"] = json!(holds);
    result["edge_set"] = json!(g.edge_names(&s));
    report.text = text;
    report.result = result;
    Ok(holds)
}

fn trace_json(g: &RootedDigraph, trace: &ConstructionTrace) -> Value {
    let vs = |x: &VertexSet| g.vertex_names(x);
    let steps: Vec<Value> = trace
        .steps
        .iter()
        .map(|s| {
            json!({
                "vertex": g.vertex_name(s.vertex),
                "linked_set": vs(&s.linked_set),
                "link_paths": s.link_paths.names(g),
                "full_paths": s.full_paths.names(g),
                "deleted": g.edge_names(&s.deleted),
                "kept": g.edge_names(&s.kept),
            })
        })
        .collect();
    json!({
        "order": trace.order.iter().map(|&v| g.vertex_name(v)).collect::<Vec<_>>(),
        "steps": steps,
    })
}

pub fn build(
    report: &mut Report,
    graph: &Path,
    extend: Option<&Path>,
    with_trace: bool,
) -> Result<bool, Failure> {
    let g = load_graph(report, graph)?;
    let f = match extend {
        Some(p) => load_set(report, &g, p)?,
        None => g.empty_edges(),
    };
    let mut text = String::new();
    match extend_to_large_flame(&g, &f) {
        Ok((l, trace)) => {
            let sum: usize = g
                .non_root_vertices()
                .map(|v| lambda(&g, v))
                .sum::<Result<usize, _>>()?;
            let names = g.edge_names(&l);
            writeln!(text, "large flame {} ({} edges, Σλ = {sum})", braces(&names), l.len()).unwrap();
            let mut result = json!({
                "large_flame": names,
                "size": l.len(),
                "lambda_sum": sum,
            });
            if with_trace {
                for s in &trace.steps {
                    writeln!(
                        text,
                        "  {}: X = {}, kept {}, deleted {}",
                        g.vertex_name(s.vertex),
                        braces(&g.vertex_names(&s.linked_set)),
                        braces(&g.edge_names(&s.kept)),
                        braces(&g.edge_names(&s.deleted))
                    )
                    .unwrap();
                }
                result["trace"] = trace_json(&g, &trace);
            }
            report.text = text;
            report.result = result;
            Ok(true)
        }
        Err(ConstructError::Cyclic(c)) => {
            let names: Vec<&str> = c.0.iter().map(|&e| g.edge_name(e)).collect();
            writeln!(text, "the digraph has a directed cycle: {}", names.join(" ")).unwrap();
            report.text = text;
            report.result = json!({ "error": "cyclic", "cycle": names });
            Ok(false)
        }
        Err(ConstructError::NotFlame { name, .. }) => {
            writeln!(text, "the start set is not a flame (fails at {name})").unwrap();
            report.text = text;
            report.result = json!({ "error": "not_a_flame", "vertex": name });
            Ok(false)
        }
        Err(e) => Err(e.into()),
    }
}

fn summarize(r: &SweepReport, label: &str) -> String {
    let mut text = format!(
        "{label}: {} instances, {} {}, {:.2}s\n",
        r.instance_count,
        r.violations.len(),
        if label == "search" { "findings" } else { "violations" },
        r.runtime
    );
    for v in &r.violations {
        writeln!(
            text,
            "  {}: {}",
            v.claim,
            serde_json::to_string(&v.certificate).expect("certificate serializes")
        )
        .unwrap();
    }
    text
}

fn spec_digest(report: &mut Report, r: &SweepReport) {
    report.digest(serde_json::to_string(&r.spec).expect("spec serializes").as_bytes());
}

pub fn verify(
    report: &mut Report,
    suite: Suite,
    bounds: Option<Bounds>,
    random: Option<usize>,
    seed: Option<u64>,
) -> Result<bool, Failure> {
    let bounds = bounds.unwrap_or_default();
    let result = match random {
        Some(count) => {
            let default = if suite == Suite::Constructor {
                InstanceSpec::new(11, 30, 2)
            } else {
                InstanceSpec::new(5, 10, 2)
            };
            let seed = seed.unwrap_or_else(|| {
                SystemTime::now()
                    .duration_since(UNIX_EPOCH)
                    .map(|d| d.as_nanos() as u64)
                    .unwrap_or(0)
            });
            run_random(suite, &bounds.resolve(default).with_seed(seed), count)?
        }
        None => {
            let mut spec = bounds.resolve(InstanceSpec::new(3, 5, 2));
            spec.seed = seed;
            run_enumerated(suite, &spec)?
        }
    };
    spec_digest(report, &result);
    report.text = summarize(&result, suite.name());
    let clean = result.violations.is_empty();
    report.result = serde_json::to_value(&result)?;
    Ok(clean)
}

pub fn search(
    report: &mut Report,
    question: &str,
    bounds: Option<Bounds>,
    out: Option<&Path>,
) -> Result<bool, Failure> {
    let spec = bounds.unwrap_or_default().resolve(default_search_bounds());
    let result = match question {
        "maximal-flames" => search_question_maximal_flames(&spec)?,
        _ => search_conjecture_flame_extension_cyclic(&spec)?,
    };
    spec_digest(report, &result);
    if let Some(path) = out {
        append_findings(path, &result).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    }
    let mut text = summarize(&result, "search");
    if let Some(path) = out {
        writeln!(text, "report appended to {}", path.display()).unwrap();
    }
    report.text = text;
    report.result = serde_json::to_value(&result)?;
    Ok(true)
}
