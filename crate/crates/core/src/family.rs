//! Rooted trivalent families: expander sampling, subdivision, and the
//! goodify perturbation that tames the jumps of the distance density.
//!
//! The pipeline is expander -> subdivide -> goodify. Subdivision stretches
//! the metric so the gap scales like m^-2; goodify then subdivides a few
//! more edges so that every discontinuity of the density has magnitude at
//! most 3. Goodify only ever lengthens edges at or above the value it is
//! treating, so the density below that value is frozen once treated.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::profile::{critical_values, distance_density, GOOD_JUMP};
use crate::spectral::{lambda1_auto, DEFAULT_TOL};

/// Rejection budget for configuration-model sampling.
pub const SAMPLING_CAP: usize = 1000;

/// How many certified-expander candidates to try before giving up.
const CERTIFY_CAP: usize = 50;

/// Vertex budget for subdivision; keeps runaway exponents from allocating.
const VERTEX_CAP: u128 = 20_000_000;

/// Stream id for expander sampling; the eigensolver draws from stream 0 of
/// the same master seed, so the two never share randomness.
const EXPANDER_STREAM: u64 = 1;

/// Construction parameters recorded with every built family member.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub base_n: usize,
    pub alpha: u32,
    pub seed: u64,
    pub goodify_rounds: usize,
}

/// A graph with a distinguished root vertex. Family members have all
/// degrees in [2, 3] and, after `build_y`, only good critical values.
#[derive(Debug, Clone)]
pub struct RootedGraph {
    pub graph: Graph,
    pub root: usize,
    pub provenance: Provenance,
}

fn sample_pairing(n: usize, rng: &mut ChaCha8Rng) -> Option<Vec<(usize, usize)>> {
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| [v, v, v]).collect();
    stubs.shuffle(rng);
    let mut pairs: Vec<(usize, usize)> = stubs
        .chunks_exact(2)
        .map(|c| (c[0].min(c[1]), c[0].max(c[1])))
        .collect();
    if pairs.iter().any(|&(u, v)| u == v) {
        return None;
    }
    pairs.sort_unstable();
    if pairs.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(pairs)
}

fn sample_regular(n: usize, rng: &mut ChaCha8Rng) -> Result<Graph> {
    for _ in 0..SAMPLING_CAP {
        let Some(pairs) = sample_pairing(n, rng) else { continue };
        let g = Graph::from_edge_list_with_vertices(n, &pairs)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::SamplingExhausted(SAMPLING_CAP))
}

/// Samples a simple connected 3-regular graph on `n` vertices by pairing
/// stubs and rejecting self-loops, parallel edges, and disconnection.
/// Deterministic given the seed.
pub fn random_regular(n: usize, seed: u64) -> Result<Graph> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::BadRegularOrder(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(EXPANDER_STREAM);
    sample_regular(n, &mut rng)
}

/// True iff the spectral gap is at least `eps`.
pub fn certify_expander(g: &Graph, eps: f64) -> Result<bool> {
    Ok(lambda1_auto(g, DEFAULT_TOL, 0)?.lambda1 >= eps)
}

/// What one goodify round treated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Vertex(usize),
    Fold(usize, usize),
}

/// Record of one goodify round, for diagnostics and tests.
#[derive(Debug, Clone)]
pub struct RoundTrace {
    /// Treated critical value, doubled.
    pub t_doubled: i64,
    /// Its jump before the round.
    pub jump: i64,
    pub witness: Witness,
    /// Edge instances subdivided this round.
    pub subdivided: usize,
}

fn check_family_degrees(g: &Graph) -> Result<()> {
    for v in 0..g.vertex_count() {
        let d = g.degree(v);
        if !(2..=3).contains(&d) {
            return Err(Error::DegreeOutOfRange { vertex: v, degree: d });
        }
    }
    Ok(())
}

/// Per-vertex contribution to the density jump at its own distance:
/// edges going up or sideways start mass here, edges coming down end it.
fn imbalance(g: &Graph, dist: &[usize], v: usize) -> i64 {
    let mut up = 0i64;
    let mut down = 0i64;
    let mut horiz = 0i64;
    for &w in g.neighbors(v) {
        if dist[w] > dist[v] {
            up += 1;
        } else if dist[w] < dist[v] {
            down += 1;
        } else {
            horiz += 1;
        }
    }
    up + horiz - down
}

struct Round {
    witness: Witness,
    /// Indices into the canonical edge-instance list.
    marks: Vec<usize>,
}

/// Enumerates the contributors to the bad jump at doubled value `td`,
/// keeps one witness, and marks every edge instance adjacent to the other
/// contributors (the containing edge itself for a fold).
fn plan_round(g: &Graph, dist: &[usize], edges: &[(usize, usize)], td: i64) -> Round {
    let mut marks = Vec::new();
    if td % 2 == 0 {
        // Integer value: contributors are imbalanced vertices at this level.
        let t = (td / 2) as usize;
        let contributors: Vec<usize> = (0..g.vertex_count())
            .filter(|&v| dist[v] == t && imbalance(g, dist, v) != 0)
            .collect();
        let witness = contributors
            .iter()
            .copied()
            .find(|&v| g.degree(v) == 3)
            .unwrap_or_else(|| contributors[0]);
        let mut marked = vec![false; edges.len()];
        for &y in &contributors {
            if y == witness {
                continue;
            }
            for (i, &(u, v)) in edges.iter().enumerate() {
                if u == y || v == y {
                    marked[i] = true;
                }
            }
        }
        marks.extend(marked.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| i));
        Round { witness: Witness::Vertex(witness), marks }
    } else {
        // Half-integer value: contributors are the folds peaking here,
        // i.e. level edges one half-step below.
        let level = ((td - 1) / 2) as usize;
        let folds: Vec<usize> = edges
            .iter()
            .enumerate()
            .filter(|&(_, &(u, v))| dist[u] == level && dist[v] == level)
            .map(|(i, _)| i)
            .collect();
        let (u, v) = edges[folds[0]];
        marks.extend(folds[1..].iter().copied());
        Round { witness: Witness::Fold(u, v), marks }
    }
}

fn subdivide_instances(g: &Graph, edges: &[(usize, usize)], marks: &[usize]) -> Result<Graph> {
    let mut marked = vec![false; edges.len()];
    for &i in marks {
        marked[i] = true;
    }
    let mut pairs = Vec::with_capacity(edges.len() + marks.len());
    let mut next = g.vertex_count();
    for (i, &(u, v)) in edges.iter().enumerate() {
        if marked[i] {
            pairs.push((u, next));
            pairs.push((next, v));
            next += 1;
        } else {
            pairs.push((u, v));
        }
    }
    Graph::from_edge_list_with_vertices(next, &pairs)
}

fn goodify_inner(mut g: Graph, root: usize) -> Result<(Graph, Vec<RoundTrace>)> {
    check_family_degrees(&g)?;
    let trivalent = (0..g.vertex_count()).filter(|&v| g.degree(v) == 3).count();
    // Subdivision never changes the trivalent count, so the cap is fixed:
    // treated values strictly increase and each stays a critical value,
    // of which there are at most 4 * trivalent + 2.
    let cap = 4 * trivalent + 2;
    let mut trace = Vec::new();
    loop {
        let rho = distance_density(&g, root)?;
        let Some(bad) = critical_values(&rho).into_iter().find(|cv| !cv.good) else {
            return Ok((g, trace));
        };
        if trace.len() >= cap {
            return Err(Error::GoodifyRoundCap(cap));
        }
        let dist = g.bfs_distances(root)?;
        let edges: Vec<(usize, usize)> = g.canonical_edges().collect();
        let round = plan_round(&g, &dist, &edges, bad.t_doubled);
        let g2 = subdivide_instances(&g, &edges, &round.marks)?;
        let rho2 = distance_density(&g2, root)?;
        let jump2 = rho2.jump_at(bad.t_doubled);
        if jump2 == 0 || jump2.abs() > GOOD_JUMP {
            return Err(Error::BadJump {
                jump: jump2,
                t: bad.t_doubled as f64 / 2.0,
                good: GOOD_JUMP,
            });
        }
        debug_assert!(
            (0..bad.t_doubled).all(|d| rho.value_right_of(d) == rho2.value_right_of(d)),
            "density changed below the treated value"
        );
        trace.push(RoundTrace {
            t_doubled: bad.t_doubled,
            jump: bad.jump,
            witness: round.witness,
            subdivided: round.marks.len(),
        });
        g = g2;
    }
}

/// Repeatedly treats the smallest bad critical value until all are good.
///
/// Each round keeps one witness contributor in place and pushes every other
/// contributor past the treated value by subdividing its edges; the density
/// below the treated value is unchanged and the value itself keeps the
/// witness's small jump. Rounds are capped at 4 * trivalent + 2; hitting
/// the cap means a bug, not hard input.
pub fn goodify(rg: RootedGraph) -> Result<RootedGraph> {
    let (graph, trace) = goodify_inner(rg.graph, rg.root)?;
    Ok(RootedGraph {
        graph,
        root: rg.root,
        provenance: Provenance {
            goodify_rounds: rg.provenance.goodify_rounds + trace.len(),
            ..rg.provenance
        },
    })
}

/// Same as `goodify` but also returns the per-round trace.
pub fn goodify_traced(rg: RootedGraph) -> Result<(RootedGraph, Vec<RoundTrace>)> {
    let (graph, trace) = goodify_inner(rg.graph, rg.root)?;
    let rounds = rg.provenance.goodify_rounds + trace.len();
    Ok((
        RootedGraph {
            graph,
            root: rg.root,
            provenance: Provenance { goodify_rounds: rounds, ..rg.provenance },
        },
        trace,
    ))
}

/// Builds a rooted family member: samples 3-regular expanders until one
/// certifies at `eps`, subdivides each edge into `n^alpha` unit edges,
/// roots at base vertex 0, and goodifies. Deterministic given the seed.
pub fn build_y(n: usize, alpha: u32, eps: f64, seed: u64) -> Result<RootedGraph> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::BadRegularOrder(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(EXPANDER_STREAM);
    let mut best = 0.0f64;
    let mut base = None;
    for _ in 0..CERTIFY_CAP {
        let z = sample_regular(n, &mut rng)?;
        let lambda1 = lambda1_auto(&z, DEFAULT_TOL, seed)?.lambda1;
        if lambda1 >= eps {
            base = Some(z);
            break;
        }
        best = best.max(lambda1);
    }
    let Some(z) = base else {
        return Err(Error::CertificationFailed { lambda1: best, eps, attempts: CERTIFY_CAP });
    };
    let m = (n as u128).pow(alpha);
    let grown = n as u128 + (m - 1) * z.edge_count() as u128;
    if grown > VERTEX_CAP {
        return Err(Error::GraphTooLarge { vertices: grown, cap: VERTEX_CAP });
    }
    let y = z.subdivide(m as usize)?;
    goodify(RootedGraph {
        graph: y,
        root: 0,
        provenance: Provenance { base_n: n, alpha, seed, goodify_rounds: 0 },
    })
}
