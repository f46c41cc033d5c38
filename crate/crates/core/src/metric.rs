//! Finite graphs with the path metric (unit edge length).

use std::collections::VecDeque;

pub const UNREACHABLE: u32 = u32::MAX;

/// A finite connected graph with integer vertex ids `0..vertex_count()`.
///
/// Vertex ids double as the canonical order used for tie-breaking.
pub trait MetricGraph: Send + Sync {
    fn vertex_count(&self) -> usize;

    fn for_each_neighbor(&self, v: usize, f: &mut dyn FnMut(usize));

    fn vertex_label(&self, v: usize) -> String;

    /// Shortest-path distance. Implementations with a closed formula override this.
    fn distance(&self, u: usize, v: usize) -> u32 {
        bfs(self, &[u])[v]
    }

    /// Whether [`MetricGraph::distance`] is cheap enough to call per pair.
    fn has_fast_distance(&self) -> bool {
        false
    }

    fn degree(&self, v: usize) -> usize {
        let mut d = 0;
        self.for_each_neighbor(v, &mut |_| d += 1);
        d
    }
}

/// Multi-source BFS distances from `sources` to every vertex.
pub fn bfs<G: MetricGraph + ?Sized>(g: &G, sources: &[usize]) -> Vec<u32> {
    let mut dist = vec![UNREACHABLE; g.vertex_count()];
    let mut queue = VecDeque::new();
    for &s in sources {
        if dist[s] != 0 {
            dist[s] = 0;
            queue.push_back(s);
        }
    }
    while let Some(v) = queue.pop_front() {
        let next = dist[v] + 1;
        g.for_each_neighbor(v, &mut |w| {
            if dist[w] == UNREACHABLE {
                dist[w] = next;
                queue.push_back(w);
            }
        });
    }
    dist
}

/// Vertices within distance `k` of `v`, with their distances, in BFS order.
pub fn ball_around<G: MetricGraph + ?Sized>(g: &G, v: usize, k: u32) -> Vec<(usize, u32)> {
    let mut seen = std::collections::HashMap::from([(v, 0u32)]);
    let mut out = vec![(v, 0)];
    let mut i = 0;
    while i < out.len() {
        let (x, d) = out[i];
        if d < k {
            g.for_each_neighbor(x, &mut |w| {
                if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(w) {
                    e.insert(d + 1);
                    out.push((w, d + 1));
                }
            });
        }
        i += 1;
    }
    out
}

/// Distances from `x` to each of `targets`.
pub fn distances_to<G: MetricGraph + ?Sized>(g: &G, x: usize, targets: &[usize]) -> Vec<u32> {
    if g.has_fast_distance() {
        targets.iter().map(|&t| g.distance(x, t)).collect()
    } else {
        let row = bfs(g, &[x]);
        targets.iter().map(|&t| row[t]).collect()
    }
}

/// Largest pairwise distance within `set` (0 for fewer than two vertices).
pub fn diameter<G: MetricGraph + ?Sized>(g: &G, set: &[usize]) -> u32 {
    let mut best = 0;
    for (i, &x) in set.iter().enumerate() {
        let row = distances_to(g, x, &set[i + 1..]);
        best = row.into_iter().fold(best, u32::max);
    }
    best
}

/// Every vertex on some geodesic from `u` to `v`, sorted.
pub fn geodesic_vertices<G: MetricGraph + ?Sized>(g: &G, u: usize, v: usize) -> Vec<usize> {
    let from_u = bfs(g, &[u]);
    let from_v = bfs(g, &[v]);
    let d = from_u[v];
    (0..g.vertex_count())
        .filter(|&w| from_u[w] != UNREACHABLE && from_v[w] != UNREACHABLE && from_u[w] + from_v[w] == d)
        .collect()
}

/// Distance of every vertex to the window edge: the vertices whose degree
/// falls short of the maximum degree (they lost neighbours to truncation).
pub fn edge_distances<G: MetricGraph + ?Sized>(g: &G) -> Vec<u32> {
    let n = g.vertex_count();
    let degrees: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let max = degrees.iter().copied().max().unwrap_or(0);
    let edge: Vec<usize> = (0..n).filter(|&v| degrees[v] < max).collect();
    if edge.is_empty() {
        return vec![UNREACHABLE; n];
    }
    bfs(g, &edge)
}

/// Plain adjacency-list graph with string labels.
#[derive(Clone, Debug)]
pub struct FiniteGraph {
    adjacency: Vec<Vec<usize>>,
    labels: Vec<String>,
    /// Half-width when the graph is a full square grid (L1 distance formula).
    grid: Option<i64>,
}

impl FiniteGraph {
    pub fn new(labels: Vec<String>, edges: &[(usize, usize)]) -> Self {
        let mut adjacency = vec![Vec::new(); labels.len()];
        for &(u, v) in edges {
            if u != v && !adjacency[u].contains(&v) {
                adjacency[u].push(v);
                adjacency[v].push(u);
            }
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        FiniteGraph { adjacency, labels, grid: None }
    }

    /// The square grid `[-h, h]²`. Vertex `(x, y)` has id `(y + h)(2h + 1) + (x + h)`.
    pub fn grid(half_width: i64) -> Self {
        let side = (2 * half_width + 1) as usize;
        let id = |x: i64, y: i64| ((y + half_width) as usize) * side + (x + half_width) as usize;
        let mut labels = Vec::with_capacity(side * side);
        let mut edges = Vec::new();
        for y in -half_width..=half_width {
            for x in -half_width..=half_width {
                labels.push(format!("({x},{y})"));
                if x < half_width {
                    edges.push((id(x, y), id(x + 1, y)));
                }
                if y < half_width {
                    edges.push((id(x, y), id(x, y + 1)));
                }
            }
        }
        FiniteGraph { grid: Some(half_width), ..FiniteGraph::new(labels, &edges) }
    }

    pub fn grid_vertex(half_width: i64, x: i64, y: i64) -> usize {
        let side = (2 * half_width + 1) as usize;
        ((y + half_width) as usize) * side + (x + half_width) as usize
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (u, list) in self.adjacency.iter().enumerate() {
            out.extend(list.iter().filter(|&&v| u < v).map(|&v| (u, v)));
        }
        out
    }
}

impl MetricGraph for FiniteGraph {
    fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    fn for_each_neighbor(&self, v: usize, f: &mut dyn FnMut(usize)) {
        for &w in &self.adjacency[v] {
            f(w);
        }
    }

    fn vertex_label(&self, v: usize) -> String {
        self.labels[v].clone()
    }

    fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    fn has_fast_distance(&self) -> bool {
        self.grid.is_some()
    }

    fn distance(&self, u: usize, v: usize) -> u32 {
        match self.grid {
            Some(h) => {
                let side = (2 * h + 1) as usize;
                let (ux, uy) = ((u % side) as i64, (u / side) as i64);
                let (vx, vy) = ((v % side) as i64, (v / side) as i64);
                ((ux - vx).abs() + (uy - vy).abs()) as u32
            }
            None => bfs(self, &[u])[v],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_distances_are_l1() {
        let g = FiniteGraph::grid(3);
        let a = FiniteGraph::grid_vertex(3, -3, 1);
        let b = FiniteGraph::grid_vertex(3, 2, -2);
        assert_eq!(g.distance(a, b), 8);
        assert_eq!(g.vertex_label(a), "(-3,1)");
    }

    #[test]
    fn geodesic_vertices_in_grid_fill_the_rectangle() {
        let g = FiniteGraph::grid(2);
        let a = FiniteGraph::grid_vertex(2, 0, 0);
        let b = FiniteGraph::grid_vertex(2, 1, 2);
        assert_eq!(geodesic_vertices(&g, a, b).len(), 6);
    }

    #[test]
    fn grid_edge_distance() {
        let g = FiniteGraph::grid(2);
        let e = edge_distances(&g);
        assert_eq!(e[FiniteGraph::grid_vertex(2, 0, 0)], 2);
        assert_eq!(e[FiniteGraph::grid_vertex(2, 2, 1)], 0);
    }
}
