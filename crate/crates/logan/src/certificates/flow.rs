//! Unit-capacity flow probes on digraphs, saturated at value two.
//!
//! Two edge-disjoint paths between an ordered pair exist exactly when the
//! unit-capacity max flow between them reaches two, so the augmenting loop
//! stops there and never computes larger values.

use std::collections::VecDeque;

use crate::graph::Graph;

/// Max-flow value from `s` to `t` under unit arc capacities, capped at 2.
pub(crate) fn max_flow_le2(g: &Graph, s: usize, t: usize) -> u8 {
    Network::new(g).run(s, t)
}

/// The unique graph arc crossing the minimum cut when the `s`/`t` flow value
/// is exactly 1; `None` for any other flow value.
pub(crate) fn unit_cut_arc(g: &Graph, s: usize, t: usize) -> Option<(usize, usize)> {
    let mut net = Network::new(g);
    if net.run(s, t) != 1 {
        return None;
    }
    let reach = net.residual_reachable(s);
    g.edges().find(|&(u, v)| reach[u] && !reach[v])
}

/// Residual network with dense capacities; instances here are small.
struct Network {
    n: usize,
    cap: Vec<Vec<u8>>,
}

impl Network {
    fn new(g: &Graph) -> Network {
        assert!(g.is_directed(), "flow probes are defined on digraphs");
        let n = g.n();
        let mut cap = vec![vec![0u8; n]; n];
        for (u, v) in g.edges() {
            cap[u][v] = 1;
        }
        Network { n, cap }
    }

    fn run(&mut self, s: usize, t: usize) -> u8 {
        assert_ne!(s, t, "flow endpoints must differ");
        let mut value = 0;
        while value < 2 {
            let Some(path) = self.augmenting_path(s, t) else {
                break;
            };
            for w in path.windows(2) {
                self.cap[w[0]][w[1]] -= 1;
                self.cap[w[1]][w[0]] += 1;
            }
            value += 1;
        }
        value
    }

    fn augmenting_path(&self, s: usize, t: usize) -> Option<Vec<usize>> {
        let mut parent = vec![usize::MAX; self.n];
        parent[s] = s;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for v in 0..self.n {
                if self.cap[u][v] > 0 && parent[v] == usize::MAX {
                    parent[v] = u;
                    if v == t {
                        let mut path = vec![t];
                        let mut cur = t;
                        while cur != s {
                            cur = parent[cur];
                            path.push(cur);
                        }
                        path.reverse();
                        return Some(path);
                    }
                    queue.push_back(v);
                }
            }
        }
        None
    }

    fn residual_reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for v in 0..self.n {
                if self.cap[u][v] > 0 && !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }
}
