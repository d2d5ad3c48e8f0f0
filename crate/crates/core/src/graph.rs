//! Undirected multigraphs with unit-length edges, breadth-first distances,
//! diameter computation, edge subdivision and the sphere-triangulation
//! validator.
//!
//! Vertices are `0..vertex_count`. Parallel edges are allowed and carry
//! multiplicity in the adjacency lists; self-loops are rejected at
//! construction. Volume of a graph is its edge count.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Immutable undirected multigraph. Adjacency lists are sorted and repeat a
/// neighbor once per parallel edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    edge_count: usize,
    connected: bool,
}

/// How `diameter` traverses the graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiameterMode {
    /// BFS from every vertex; exact value and a diametral pair.
    Exact,
    /// Two BFS passes; lower bound `L` with `diam <= 2 L`. Exact on trees.
    DoubleSweep,
}

/// Diameter value together with a vertex pair realizing it (for `Exact`) or
/// witnessing the reported lower bound (for `DoubleSweep`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Diameter {
    pub value: usize,
    pub endpoints: (usize, usize),
}

impl Graph {
    /// Builds a graph from unordered endpoint pairs. Vertex count is
    /// `max id + 1`. Self-loops are rejected; parallel edges are kept.
    pub fn from_edge_list(pairs: &[(usize, usize)]) -> Result<Graph> {
        if pairs.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let n = pairs.iter().map(|&(u, v)| u.max(v)).max().unwrap() + 1;
        Self::from_edge_list_with_vertices(n, pairs)
    }

    /// Same as `from_edge_list` but with an explicit vertex count, so that
    /// graphs read from files keep trailing isolated vertices.
    pub fn from_edge_list_with_vertices(n: usize, pairs: &[(usize, usize)]) -> Result<Graph> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in pairs {
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange { vertex: u.max(v), len: n });
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let mut g = Graph { adj, edge_count: pairs.len(), connected: false };
        g.connected = g.check_connected();
        Ok(g)
    }

    fn check_connected(&self) -> bool {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == n
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Volume convention used throughout: number of edges.
    pub fn vol(&self) -> usize {
        self.edge_count
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(|l| l.len()).max().unwrap_or(0)
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    /// Edges in canonical order: ascending `u`, then ascending `v` with one
    /// entry per parallel edge. Every undirected edge appears exactly once
    /// with `u < v`.
    pub fn canonical_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    fn ensure_connected(&self) -> Result<()> {
        if self.connected {
            Ok(())
        } else {
            Err(Error::Disconnected)
        }
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, len: self.vertex_count() })
        }
    }

    /// Hop distances from `root` to every vertex.
    pub fn bfs_distances(&self, root: usize) -> Result<Vec<usize>> {
        self.check_vertex(root)?;
        self.ensure_connected()?;
        let mut dist = vec![usize::MAX; self.vertex_count()];
        dist[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        Ok(dist)
    }

    /// Farthest vertex from `root` and its distance; lowest id breaks ties.
    fn farthest(&self, root: usize) -> Result<(usize, usize)> {
        let dist = self.bfs_distances(root)?;
        let (mut arg, mut best) = (root, 0);
        for (v, &d) in dist.iter().enumerate() {
            if d > best {
                best = d;
                arg = v;
            }
        }
        Ok((arg, best))
    }

    pub fn diameter(&self, mode: DiameterMode) -> Result<Diameter> {
        self.ensure_connected()?;
        match mode {
            DiameterMode::Exact => {
                let mut best = Diameter { value: 0, endpoints: (0, 0) };
                for u in 0..self.vertex_count() {
                    let (v, d) = self.farthest(u)?;
                    if d > best.value {
                        best = Diameter { value: d, endpoints: (u, v) };
                    }
                }
                Ok(best)
            }
            DiameterMode::DoubleSweep => {
                let (u, _) = self.farthest(0)?;
                let (v, d) = self.farthest(u)?;
                Ok(Diameter { value: d, endpoints: (u, v) })
            }
        }
    }

    /// Replaces every edge by a path of `m` unit edges. Original vertices
    /// keep their ids; the `m - 1` new vertices of the i-th canonical edge
    /// `(u, v)` are numbered consecutively starting at
    /// `vertex_count + i * (m - 1)`, ordered from the `u` side.
    pub fn subdivide(&self, m: usize) -> Result<Graph> {
        if m == 0 {
            return Err(Error::ZeroSubdivision);
        }
        if m == 1 {
            return Ok(self.clone());
        }
        let n = self.vertex_count();
        let mut pairs = Vec::with_capacity(self.edge_count * m);
        for (i, (u, v)) in self.canonical_edges().enumerate() {
            let base = n + i * (m - 1);
            let mut prev = u;
            for k in 0..m - 1 {
                pairs.push((prev, base + k));
                prev = base + k;
            }
            pairs.push((prev, v));
        }
        Graph::from_edge_list_with_vertices(n + self.edge_count * (m - 1), &pairs)
    }
}

/// A graph together with a triangular face list, claimed to triangulate the
/// sphere. `validate_sphere_triangulation` checks the claim.
#[derive(Debug, Clone)]
pub struct SphereTriangulation {
    pub graph: Graph,
    pub faces: Vec<[usize; 3]>,
}

/// Outcome of the structural validator. `pass` is the conjunction of the
/// individual checks.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidationReport {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub euler_ok: bool,
    pub edge_face_ok: bool,
    pub simple_ok: bool,
    pub degree_ok: bool,
    pub connected_ok: bool,
    pub max_degree: usize,
    pub pass: bool,
}

/// Checks Euler's formula `V - E + F = 2`, that every edge lies in exactly
/// two faces (and faces use only existing edges), simplicity, the degree cap
/// and connectivity. Passing implies `3F = 2E` and `E = 3V - 6`.
pub fn validate_sphere_triangulation(t: &SphereTriangulation, d_max: usize) -> ValidationReport {
    let g = &t.graph;
    let v = g.vertex_count();
    let e = g.edge_count();
    let f = t.faces.len();

    let euler_ok = v as i64 - e as i64 + f as i64 == 2;

    let simple_ok = g.adj.iter().all(|list| list.windows(2).all(|w| w[0] < w[1]));

    // Count face incidences per vertex pair; every counted pair must be an
    // edge of the graph, and every edge must be covered exactly twice.
    let mut incidence: std::collections::HashMap<(usize, usize), usize> =
        std::collections::HashMap::new();
    let mut faces_well_formed = true;
    for face in &t.faces {
        let [a, b, c] = *face;
        if a == b || b == c || a == c || a >= v || b >= v || c >= v {
            faces_well_formed = false;
            continue;
        }
        for (x, y) in [(a, b), (b, c), (a, c)] {
            let key = (x.min(y), x.max(y));
            *incidence.entry(key).or_insert(0) += 1;
        }
    }
    let mut edge_face_ok = faces_well_formed;
    let mut covered = 0usize;
    for (&(x, y), &count) in &incidence {
        let present = g.adj[x].binary_search(&y).is_ok();
        if !present || count != 2 {
            edge_face_ok = false;
        }
        covered += 1;
    }
    if covered != e {
        edge_face_ok = false;
    }

    let max_degree = g.max_degree();
    let degree_ok = max_degree <= d_max;
    let connected_ok = g.is_connected();
    let pass = euler_ok && edge_face_ok && simple_ok && degree_ok && connected_ok;

    ValidationReport {
        vertices: v,
        edges: e,
        faces: f,
        euler_ok,
        edge_face_ok,
        simple_ok,
        degree_ok,
        connected_ok,
        max_degree,
        pass,
    }
}

/// Cycle on `k >= 2` vertices (`k = 2` is the doubled edge).
pub fn cycle(k: usize) -> Graph {
    assert!(k >= 2, "cycle needs at least 2 vertices");
    let pairs: Vec<_> = (0..k).map(|i| (i, (i + 1) % k)).collect();
    Graph::from_edge_list(&pairs).expect("cycle is well formed")
}

/// Path on `k >= 2` vertices.
pub fn path(k: usize) -> Graph {
    assert!(k >= 2, "path needs at least 2 vertices");
    let pairs: Vec<_> = (0..k - 1).map(|i| (i, i + 1)).collect();
    Graph::from_edge_list(&pairs).expect("path is well formed")
}

/// Complete graph on `n >= 2` vertices.
pub fn complete(n: usize) -> Graph {
    assert!(n >= 2, "complete graph needs at least 2 vertices");
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            pairs.push((u, v));
        }
    }
    Graph::from_edge_list(&pairs).expect("complete graph is well formed")
}

/// Grid graph on `rows x cols` vertices, row-major ids.
pub fn grid(rows: usize, cols: usize) -> Graph {
    assert!(rows * cols >= 2, "grid needs at least 2 vertices");
    let mut pairs = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let id = r * cols + c;
            if c + 1 < cols {
                pairs.push((id, id + 1));
            }
            if r + 1 < rows {
                pairs.push((id, id + cols));
            }
        }
    }
    Graph::from_edge_list(&pairs).expect("grid is well formed")
}

/// Tetrahedron as a sphere triangulation.
pub fn tetrahedron() -> SphereTriangulation {
    SphereTriangulation {
        graph: complete(4),
        faces: vec![[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]],
    }
}

/// Octahedron as a sphere triangulation; antipodal pairs are (0,3), (1,4),
/// (2,5).
pub fn octahedron() -> SphereTriangulation {
    let mut pairs = Vec::new();
    for u in 0..6 {
        for v in u + 1..6 {
            if v != u + 3 {
                pairs.push((u, v));
            }
        }
    }
    let faces = vec![
        [0, 1, 2],
        [0, 1, 5],
        [0, 4, 2],
        [0, 4, 5],
        [3, 1, 2],
        [3, 1, 5],
        [3, 4, 2],
        [3, 4, 5],
    ];
    SphereTriangulation { graph: Graph::from_edge_list(&pairs).unwrap(), faces }
}
