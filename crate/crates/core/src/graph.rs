//! Small undirected simple graphs with sorted adjacency lists.

use std::collections::VecDeque;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeGraph {
    adj: Vec<Vec<usize>>,
    num_edges: usize,
}

impl EdgeGraph {
    /// Duplicate pairs are merged; self-loops are ignored.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for (a, b) in edges {
            if a != b {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        let mut num_edges = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            num_edges += list.len();
        }
        EdgeGraph {
            adj,
            num_edges: num_edges / 2,
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    pub fn is_connected(&self) -> bool {
        if self.adj.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.adj.len()];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if !std::mem::replace(&mut seen[w], true) {
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == self.adj.len()
    }
}
