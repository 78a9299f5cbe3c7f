//! Integer-capacity residual network with augmenting-path max flow.
//!
//! Arcs are stored in pairs (`2k` forward, `2k + 1` reverse). Adjacency
//! lists keep insertion order, so callers control the search order by the
//! order in which they add arcs.

pub(crate) const UNBOUNDED: i64 = i64::MAX / 4;

#[derive(Debug, Clone, Default)]
pub(crate) struct Network {
    to: Vec<usize>,
    residual: Vec<i64>,
    adj: Vec<Vec<usize>>,
}

impl Network {
    pub fn with_nodes(n: usize) -> Self {
        Network {
            to: Vec::new(),
            residual: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    pub fn add_node(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    /// Adds `from → to` with capacity `cap`; returns the forward arc index.
    pub fn add_arc(&mut self, from: usize, to: usize, cap: i64) -> usize {
        let k = self.to.len();
        self.to.push(to);
        self.residual.push(cap);
        self.adj[from].push(k);
        self.to.push(from);
        self.residual.push(0);
        self.adj[to].push(k + 1);
        k
    }

    pub fn set_residual(&mut self, arc: usize, cap: i64) {
        self.residual[arc] = cap;
    }

    pub fn add_to_reverse(&mut self, arc: usize, amount: i64) {
        self.residual[arc ^ 1] += amount;
    }

    /// Flow currently sent along forward arc `arc`.
    pub fn flow(&self, arc: usize) -> i64 {
        self.residual[arc ^ 1]
    }

    /// Augments along depth-first paths until none is left or `limit` is
    /// reached. Returns the amount pushed.
    pub fn max_flow(&mut self, source: usize, sink: usize, limit: i64) -> i64 {
        if source == sink {
            return 0;
        }
        let mut total = 0;
        while total < limit {
            let pushed = self.augment(source, sink, limit - total);
            if pushed == 0 {
                break;
            }
            total += pushed;
        }
        total
    }

    fn augment(&mut self, source: usize, sink: usize, limit: i64) -> i64 {
        let n = self.adj.len();
        let mut visited = vec![false; n];
        let mut via: Vec<usize> = vec![usize::MAX; n];
        let mut cursor = vec![0usize; n];
        let mut stack = vec![source];
        visited[source] = true;
        while let Some(&u) = stack.last() {
            if u == sink {
                break;
            }
            let mut advanced = false;
            while cursor[u] < self.adj[u].len() {
                let arc = self.adj[u][cursor[u]];
                cursor[u] += 1;
                let w = self.to[arc];
                if self.residual[arc] > 0 && !visited[w] {
                    visited[w] = true;
                    via[w] = arc;
                    stack.push(w);
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                stack.pop();
            }
        }
        if !visited[sink] {
            return 0;
        }
        let mut amount = limit;
        let mut v = sink;
        while v != source {
            let arc = via[v];
            amount = amount.min(self.residual[arc]);
            v = self.to[arc ^ 1];
        }
        let mut v = sink;
        while v != source {
            let arc = via[v];
            self.residual[arc] -= amount;
            self.residual[arc ^ 1] += amount;
            v = self.to[arc ^ 1];
        }
        amount
    }
}
