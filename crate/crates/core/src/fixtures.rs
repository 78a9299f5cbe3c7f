//! Small named digraphs used across tests, examples and the CLI docs.

use crate::graph::RootedDigraph;

/// `r→v` (single edge `e1`).
pub fn t1() -> RootedDigraph {
    RootedDigraph::new("r", [], [("e1", "r", "v")]).unwrap()
}

/// Two parallel edges `r→a`, then `a→b` and `r→b`.
pub fn g1() -> RootedDigraph {
    RootedDigraph::new(
        "r",
        [],
        [
            ("e1", "r", "a"),
            ("e2", "r", "a"),
            ("e3", "a", "b"),
            ("e4", "r", "b"),
        ],
    )
    .unwrap()
}

/// `r→a` followed by the 2-cycle `a→b→a`.
pub fn c1() -> RootedDigraph {
    RootedDigraph::new("r", [], [("e1", "r", "a"), ("e2", "a", "b"), ("e3", "b", "a")]).unwrap()
}

/// Finite truncation of the backward-infinite example: `r→w`, `w→v_i` for
/// `i = 0..=k`, and the horizontal path `v_k→…→v_0`.
pub fn truncated_comb(k: usize) -> RootedDigraph {
    let mut edges: Vec<(String, String, String)> = vec![("f".into(), "r".into(), "w".into())];
    for i in 0..=k {
        edges.push((format!("s{i}"), "w".into(), format!("v{i}")));
    }
    for i in 1..=k {
        edges.push((format!("h{i}"), format!("v{i}"), format!("v{}", i - 1)));
    }
    RootedDigraph::new(
        "r",
        [],
        edges
            .iter()
            .map(|(e, t, h)| (e.as_str(), t.as_str(), h.as_str())),
    )
    .unwrap()
}
