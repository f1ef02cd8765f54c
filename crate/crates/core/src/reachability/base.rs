//! Exact site-to-site reachability by transitive closure over the
//! strongly connected components.

use crate::geometry::Site;
use crate::oracle::{materialize_uncapped, WeightedGraph};

use super::ReachError;

/// Default largest `n` accepted by [`build_base_oracle`].
pub const BASE_CAP: usize = 8000;

/// [`BASE_CAP`], overridable through `TSPAN_BASE_CAP`.
pub fn base_cap() -> usize {
    std::env::var("TSPAN_BASE_CAP").ok().and_then(|v| v.parse().ok()).unwrap_or(BASE_CAP)
}

#[derive(Clone, Debug)]
pub struct BaseOracle {
    comp: Vec<u32>,
    comp_count: usize,
    words: usize,
    /// Row `c` holds the components reachable from component `c`.
    closure: Vec<u64>,
}

/// Builds the oracle from the explicit transmission graph.
pub fn build_base_oracle(sites: &[Site]) -> Result<BaseOracle, ReachError> {
    build_base_oracle_with_cap(sites, base_cap())
}

pub fn build_base_oracle_with_cap(sites: &[Site], cap: usize) -> Result<BaseOracle, ReachError> {
    if sites.len() > cap {
        return Err(ReachError::CapExceeded { n: sites.len(), cap });
    }
    Ok(BaseOracle::from_graph(&materialize_uncapped(sites)))
}

impl BaseOracle {
    /// Reachability over any directed graph. A spanner of the transmission
    /// graph has the same reachability, so it can stand in for it.
    pub fn from_graph(g: &impl WeightedGraph) -> Self {
        let n = g.node_count();
        let mut adj_start = Vec::with_capacity(n + 1);
        let mut adj = Vec::with_capacity(g.edge_count());
        for u in 0..n {
            adj_start.push(adj.len());
            g.for_each_out(u, |v, _| adj.push(v as u32));
        }
        adj_start.push(adj.len());
        let (comp, comp_count) = tarjan(n, &adj_start, &adj);

        // Tarjan numbers components in reverse topological order, so every
        // successor component has a smaller id and is finished first.
        let words = comp_count.div_ceil(64);
        let mut closure = vec![0u64; comp_count * words];
        let mut members: Vec<Vec<u32>> = vec![Vec::new(); comp_count];
        for (v, &c) in comp.iter().enumerate() {
            members[c as usize].push(v as u32);
        }
        for c in 0..comp_count {
            let (done, rest) = closure.split_at_mut(c * words);
            let row = &mut rest[..words];
            row[c / 64] |= 1 << (c % 64);
            for &v in &members[c] {
                for &w in &adj[adj_start[v as usize]..adj_start[v as usize + 1]] {
                    let d = comp[w as usize] as usize;
                    if d != c && row[d / 64] & (1 << (d % 64)) == 0 {
                        for (a, b) in row.iter_mut().zip(&done[d * words..(d + 1) * words]) {
                            *a |= b;
                        }
                    }
                }
            }
        }
        Self { comp, comp_count, words, closure }
    }

    /// Whether a directed path from `s` to `q` exists.
    pub fn reach(&self, s: usize, q: usize) -> bool {
        let (a, b) = (self.comp[s] as usize, self.comp[q] as usize);
        self.closure[a * self.words + b / 64] & (1 << (b % 64)) != 0
    }

    pub fn component(&self, v: usize) -> usize {
        self.comp[v] as usize
    }

    pub fn component_count(&self) -> usize {
        self.comp_count
    }

    pub fn len(&self) -> usize {
        self.comp.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comp.is_empty()
    }
}

/// Iterative Tarjan. Returns the component of every vertex and the count.
fn tarjan(n: usize, start: &[usize], adj: &[u32]) -> (Vec<u32>, usize) {
    const UNSEEN: u32 = u32::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![0u32; n];
    let mut stack = Vec::new();
    let mut call: Vec<(usize, usize)> = Vec::new();
    let mut next = 0u32;
    let mut count = 0usize;
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, start[root]));
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut e)) = call.last_mut() {
            if *e < start[v + 1] {
                let w = adj[*e] as usize;
                *e += 1;
                if index[w] == UNSEEN {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, start[w]));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(u, _)) = call.last() {
                low[u] = low[u].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp[w] = count as u32;
                    if w == v {
                        break;
                    }
                }
                count += 1;
            }
        }
    }
    (comp, count)
}
