//! Neighbourhood graphs and all-pairs shortest paths with path recovery.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use crate::dataset::PointCloud;
use crate::error::{Error, Result};
use crate::matrix::{dist, Matrix};

/// How neighbourhoods are formed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NeighborRule {
    /// Union-symmetrized K nearest neighbours.
    Knn(usize),
    /// Every pair within Euclidean distance ε.
    Eps(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub to: usize,
    /// Euclidean distance between the endpoints at build time.
    pub length: f64,
}

/// Undirected graph; adjacency lists are sorted by neighbour index and carry no
/// self-loops or duplicates.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborGraph {
    adj: Vec<Vec<Edge>>,
    rule: NeighborRule,
}

impl NeighborGraph {
    /// Builds from an undirected edge list; duplicates collapse, self-loops are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)], rule: NeighborRule) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for &(i, j, length) in edges {
            if i >= n || j >= n {
                return Err(Error::InvalidArgument(format!("edge {i}-{j} out of range for {n} nodes")));
            }
            if i == j {
                return Err(Error::InvalidArgument(format!("self-loop at node {i}")));
            }
            if !(length.is_finite() && length >= 0.0) {
                return Err(Error::InvalidArgument(format!("edge {i}-{j} has invalid length {length}")));
            }
            adj[i].push(Edge { to: j, length });
            adj[j].push(Edge { to: i, length });
        }
        for list in &mut adj {
            list.sort_by_key(|e| e.to);
            list.dedup_by_key(|e| e.to);
        }
        Ok(Self { adj, rule })
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn rule(&self) -> NeighborRule {
        self.rule
    }

    pub fn neighbors(&self, i: usize) -> &[Edge] {
        &self.adj[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Slot of `j` in `i`'s adjacency list.
    pub fn slot(&self, i: usize, j: usize) -> Option<usize> {
        self.adj[i].binary_search_by_key(&j, |e| e.to).ok()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.slot(i, j).is_some()
    }

    /// Each undirected edge once, as `(i, j, length)` with `i < j`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(i, list)| list.iter().filter(move |e| e.to > i).map(move |e| (i, e.to, e.length)))
    }

    /// Subgraph induced by `keep`, renumbered to `0..keep.len()` in `keep` order.
    pub fn induced(&self, keep: &[usize]) -> NeighborGraph {
        let mut map = vec![usize::MAX; self.n()];
        for (new, &old) in keep.iter().enumerate() {
            map[old] = new;
        }
        let mut adj: Vec<Vec<Edge>> = keep
            .iter()
            .map(|&old| {
                self.adj[old]
                    .iter()
                    .filter(|e| map[e.to] != usize::MAX)
                    .map(|e| Edge { to: map[e.to], length: e.length })
                    .collect()
            })
            .collect();
        for list in &mut adj {
            list.sort_by_key(|e| e.to);
        }
        NeighborGraph { adj, rule: self.rule }
    }
}

fn pairwise_row(cloud: &PointCloud, i: usize) -> Vec<f64> {
    let xi = cloud.point(i);
    (0..cloud.n()).map(|j| dist(xi, cloud.point(j))).collect()
}

/// One-sided K nearest neighbours of every point (Euclidean, ties to the lower index).
pub fn knn_indices(cloud: &PointCloud, k: usize) -> Result<Vec<Vec<usize>>> {
    let n = cloud.n();
    if k == 0 || k >= n {
        return Err(Error::InvalidArgument(format!("K must lie in 1..={} for {n} points, got {k}", n.saturating_sub(1))));
    }
    Ok((0..n)
        .into_par_iter()
        .map(|i| {
            let row = pairwise_row(cloud, i);
            let mut order: Vec<usize> = (0..n).filter(|&j| j != i).collect();
            order.sort_by(|&a, &b| row[a].total_cmp(&row[b]).then(a.cmp(&b)));
            order.truncate(k);
            order
        })
        .collect())
}

pub fn knn_graph(cloud: &PointCloud, k: usize) -> Result<NeighborGraph> {
    let nn = knn_indices(cloud, k)?;
    let edges: Vec<(usize, usize, f64)> = nn
        .iter()
        .enumerate()
        .flat_map(|(i, js)| js.iter().map(move |&j| (i.min(j), i.max(j))))
        .map(|(i, j)| (i, j, dist(cloud.point(i), cloud.point(j))))
        .collect();
    NeighborGraph::from_edges(cloud.n(), &edges, NeighborRule::Knn(k))
}

pub fn eps_graph(cloud: &PointCloud, eps: f64) -> Result<NeighborGraph> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("ε must be positive, got {eps}")));
    }
    let n = cloud.n();
    let edges: Vec<(usize, usize, f64)> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            (i + 1..n).filter_map(move |j| {
                let d = dist(cloud.point(i), cloud.point(j));
                (d <= eps).then_some((i, j, d))
            })
        })
        .collect();
    NeighborGraph::from_edges(n, &edges, NeighborRule::Eps(eps))
}

pub fn build_graph(cloud: &PointCloud, rule: NeighborRule) -> Result<NeighborGraph> {
    match rule {
        NeighborRule::Knn(k) => knn_graph(cloud, k),
        NeighborRule::Eps(eps) => eps_graph(cloud, eps),
    }
}

/// Component id per node. Ids are numbered in order of each component's
/// lowest-index member.
pub fn connected_components(g: &NeighborGraph) -> Vec<usize> {
    let n = g.n();
    let mut ids = vec![usize::MAX; n];
    let mut next = 0;
    let mut stack = Vec::new();
    for start in 0..n {
        if ids[start] != usize::MAX {
            continue;
        }
        ids[start] = next;
        stack.push(start);
        while let Some(u) = stack.pop() {
            for e in g.neighbors(u) {
                if ids[e.to] == usize::MAX {
                    ids[e.to] = next;
                    stack.push(e.to);
                }
            }
        }
        next += 1;
    }
    ids
}

pub fn component_sizes(ids: &[usize]) -> Vec<usize> {
    let count = ids.iter().max().map_or(0, |m| m + 1);
    let mut sizes = vec![0; count];
    for &c in ids {
        sizes[c] += 1;
    }
    sizes
}

/// Members of the largest component in ascending order (ties go to the
/// component with the lowest member).
pub fn largest_component(g: &NeighborGraph) -> Vec<usize> {
    let ids = connected_components(g);
    let sizes = component_sizes(&ids);
    let best = sizes.iter().enumerate().max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0))).map_or(0, |(c, _)| c);
    (0..g.n()).filter(|&i| ids[i] == best).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WeightMode {
    /// Shortest under Euclidean edge lengths (the Isomap geodesic).
    #[default]
    Euclidean,
    /// Shortest under summed per-edge angles.
    Angular,
}

/// Per-edge angles, stored parallel to the graph's adjacency lists.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeAngles {
    per_node: Vec<Vec<f64>>,
}

impl EdgeAngles {
    /// Evaluates `f(i, j)` once per undirected edge (`i < j`) and mirrors it.
    pub fn from_fn(g: &NeighborGraph, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut per_node: Vec<Vec<f64>> = (0..g.n()).map(|i| vec![f64::NAN; g.degree(i)]).collect();
        for i in 0..g.n() {
            for (slot, e) in g.neighbors(i).iter().enumerate() {
                if e.to > i {
                    let v = f(i, e.to);
                    per_node[i][slot] = v;
                    let back = g.slot(e.to, i).expect("adjacency is symmetric");
                    per_node[e.to][back] = v;
                }
            }
        }
        Self { per_node }
    }

    pub fn from_per_node(per_node: Vec<Vec<f64>>) -> Self {
        Self { per_node }
    }

    pub fn at(&self, i: usize, slot: usize) -> f64 {
        self.per_node[i][slot]
    }

    pub fn between(&self, g: &NeighborGraph, i: usize, j: usize) -> Option<f64> {
        g.slot(i, j).map(|s| self.per_node[i][s])
    }

    fn covers(&self, g: &NeighborGraph) -> bool {
        self.per_node.len() == g.n()
            && self.per_node.iter().enumerate().all(|(i, row)| {
                row.len() == g.degree(i)
                    && row.iter().zip(g.neighbors(i)).all(|(&a, e)| {
                        a.is_finite() && a >= 0.0 && g.slot(e.to, i).map(|s| self.per_node[e.to][s]) == Some(a)
                    })
            })
    }
}

fn edge_weights(g: &NeighborGraph, mode: WeightMode, angles: Option<&EdgeAngles>) -> Result<Vec<Vec<f64>>> {
    match mode {
        WeightMode::Euclidean => Ok(g.adj.iter().map(|l| l.iter().map(|e| e.length).collect()).collect()),
        WeightMode::Angular => match angles {
            Some(a) if a.covers(g) => Ok(a.per_node.clone()),
            _ => Err(Error::MissingAngles),
        },
    }
}

pub const NO_HOP: usize = usize::MAX;

/// All-pairs path lengths plus a successor table.
///
/// `next_hop(m, n)` is the node after `m` on the recorded shortest path to `n`;
/// following it from any `m` reaches `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicResult {
    n: usize,
    dist: Vec<f64>,
    next_hop: Vec<usize>,
}

impl GeodesicResult {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    pub fn next_hop(&self, i: usize, j: usize) -> Option<usize> {
        let h = self.next_hop[i * self.n + j];
        (h != NO_HOP).then_some(h)
    }

    pub fn dist_matrix(&self) -> Matrix {
        Matrix::from_vec(self.n, self.n, self.dist.clone())
    }

    pub fn is_connected(&self) -> bool {
        self.dist.iter().all(|d| d.is_finite())
    }

    /// Node sequence `m, k1, ..., n`; `None` when unreachable.
    pub fn path(&self, m: usize, n: usize) -> Option<Vec<usize>> {
        if !self.dist(m, n).is_finite() {
            return None;
        }
        let mut path = vec![m];
        let mut cur = m;
        while cur != n {
            cur = self.next_hop(cur, n)?;
            path.push(cur);
            if path.len() > self.n {
                return None;
            }
        }
        Some(path)
    }
}

#[derive(Clone, Copy, PartialEq)]
struct Candidate {
    dist: f64,
    node: usize,
}

impl Eq for Candidate {}

impl Ord for Candidate {
    // reversed: BinaryHeap is a max-heap
    fn cmp(&self, other: &Self) -> Ordering {
        other.dist.total_cmp(&self.dist).then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Single-source Dijkstra returning distances and predecessors. On equal
/// tentative distance the lower-index predecessor wins.
fn dijkstra(g: &NeighborGraph, weights: &[Vec<f64>], source: usize) -> (Vec<f64>, Vec<usize>) {
    let n = g.n();
    let mut dist = vec![f64::INFINITY; n];
    let mut pred = vec![NO_HOP; n];
    let mut settled = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(Candidate { dist: 0.0, node: source });
    while let Some(Candidate { dist: du, node: u }) = heap.pop() {
        if settled[u] {
            continue;
        }
        settled[u] = true;
        for (e, &w) in g.neighbors(u).iter().zip(&weights[u]) {
            let v = e.to;
            if settled[v] {
                continue;
            }
            let nd = du + w;
            if nd < dist[v] {
                dist[v] = nd;
                pred[v] = u;
                heap.push(Candidate { dist: nd, node: v });
            } else if nd == dist[v] && u < pred[v] {
                pred[v] = u;
            }
        }
    }
    (dist, pred)
}

/// Repeated single-source Dijkstra, one run per source in parallel.
///
/// For a pair `m < n` both `dist` entries hold the length accumulated along the
/// recorded `m → n` path, so the matrix is exactly symmetric.
pub fn all_pairs_shortest(g: &NeighborGraph, mode: WeightMode, angles: Option<&EdgeAngles>) -> Result<GeodesicResult> {
    let weights = edge_weights(g, mode, angles)?;
    let n = g.n();
    let runs: Vec<(Vec<f64>, Vec<usize>)> = (0..n).into_par_iter().map(|s| dijkstra(g, &weights, s)).collect();
    let mut dist = vec![0.0; n * n];
    let mut next_hop = vec![NO_HOP; n * n];
    for (s, (d, pred)) in runs.iter().enumerate() {
        for v in 0..n {
            // the tree grown from s gives every v its next hop towards s
            next_hop[v * n + s] = if v == s { NO_HOP } else { pred[v] };
            if v < s {
                dist[v * n + s] = d[v];
                dist[s * n + v] = d[v];
            }
        }
    }
    Ok(GeodesicResult { n, dist, next_hop })
}

/// O(n³) Floyd–Warshall with the same contract as [`all_pairs_shortest`]; the
/// reference the fast path is checked against.
pub fn floyd_warshall_oracle(
    g: &NeighborGraph,
    mode: WeightMode,
    angles: Option<&EdgeAngles>,
) -> Result<GeodesicResult> {
    let weights = edge_weights(g, mode, angles)?;
    let n = g.n();
    let mut dist = vec![f64::INFINITY; n * n];
    let mut next_hop = vec![NO_HOP; n * n];
    for i in 0..n {
        dist[i * n + i] = 0.0;
        for (e, &w) in g.neighbors(i).iter().zip(&weights[i]) {
            dist[i * n + e.to] = w;
            next_hop[i * n + e.to] = e.to;
        }
    }
    for k in 0..n {
        for i in 0..n {
            let dik = dist[i * n + k];
            if !dik.is_finite() {
                continue;
            }
            for j in 0..n {
                let cand = dik + dist[k * n + j];
                if cand < dist[i * n + j] {
                    dist[i * n + j] = cand;
                    next_hop[i * n + j] = next_hop[i * n + k];
                }
            }
        }
    }
    Ok(GeodesicResult { n, dist, next_hop })
}
