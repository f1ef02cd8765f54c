use crate::geometry::Site;

/// Directed graph on sites with Euclidean edge lengths, stored as sorted
/// edge arrays with forward and reverse adjacency offsets.
#[derive(Clone, Debug, PartialEq)]
pub struct SpannerGraph {
    pub n: usize,
    pub t: f64,
    pub k: usize,
    pub c: u32,
    edges: Vec<(u32, u32)>,
    lengths: Vec<f64>,
    out_start: Vec<usize>,
    in_start: Vec<usize>,
    /// Edge indices grouped by target.
    in_edges: Vec<u32>,
}

impl SpannerGraph {
    /// Sorts and deduplicates `edges`; lengths come from `sites`.
    pub fn from_edges(sites: &[Site], mut edges: Vec<(u32, u32)>, t: f64, k: usize, c: u32) -> Self {
        edges.sort_unstable();
        edges.dedup();
        let lengths = edges.iter().map(|&(a, b)| sites[a as usize].point().dist(sites[b as usize].point())).collect();
        Self::with_lengths(sites.len(), edges, lengths, t, k, c)
    }

    /// `edges` must be sorted and free of duplicates.
    pub fn with_lengths(n: usize, edges: Vec<(u32, u32)>, lengths: Vec<f64>, t: f64, k: usize, c: u32) -> Self {
        let mut out_start = vec![0usize; n + 1];
        let mut in_count = vec![0usize; n + 1];
        for &(a, b) in &edges {
            out_start[a as usize + 1] += 1;
            in_count[b as usize + 1] += 1;
        }
        for i in 0..n {
            out_start[i + 1] += out_start[i];
            in_count[i + 1] += in_count[i];
        }
        let in_start = in_count.clone();
        let mut fill = in_count;
        let mut in_edges = vec![0u32; edges.len()];
        for (e, &(_, b)) in edges.iter().enumerate() {
            in_edges[fill[b as usize]] = e as u32;
            fill[b as usize] += 1;
        }
        Self { n, t, k, c, edges, lengths, out_start, in_start, in_edges }
    }

    pub fn empty(n: usize, t: f64, k: usize, c: u32) -> Self {
        Self::with_lengths(n, Vec::new(), Vec::new(), t, k, c)
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// `(source, target, length)` in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.edges.iter().zip(&self.lengths).map(|(&(a, b), &l)| (a as usize, b as usize, l))
    }

    pub fn edge_pairs(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.edges.binary_search(&(a as u32, b as u32)).is_ok()
    }

    /// `(target, length)` of edges leaving `a`.
    pub fn out_edges(&self, a: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.out_start[a]..self.out_start[a + 1];
        self.edges[r.clone()].iter().zip(&self.lengths[r]).map(|(&(_, b), &l)| (b as usize, l))
    }

    /// `(source, length)` of edges entering `b`.
    pub fn in_edges(&self, b: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.in_edges[self.in_start[b]..self.in_start[b + 1]].iter().map(|&e| {
            let e = e as usize;
            (self.edges[e].0 as usize, self.lengths[e])
        })
    }

    pub fn out_degree(&self, a: usize) -> usize {
        self.out_start[a + 1] - self.out_start[a]
    }

    pub fn in_degree(&self, b: usize) -> usize {
        self.in_start[b + 1] - self.in_start[b]
    }

    /// Index of the edge `(a, b)` in [`Self::edges`] order.
    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        self.edges.binary_search(&(a as u32, b as u32)).ok()
    }

    /// Copy without the edge `(a, b)`.
    pub fn without_edge(&self, a: usize, b: usize) -> Self {
        let mut edges = self.edges.clone();
        let mut lengths = self.lengths.clone();
        if let Some(i) = self.edge_index(a, b) {
            edges.remove(i);
            lengths.remove(i);
        }
        Self::with_lengths(self.n, edges, lengths, self.t, self.k, self.c)
    }
}
