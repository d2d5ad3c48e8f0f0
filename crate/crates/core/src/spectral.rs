//! Spectral gap of the combinatorial Laplacian.
//!
//! `Delta f(x) = deg(x) f(x) - sum_{y ~ x} f(y)` acting on vertex functions,
//! with parallel edges counted by multiplicity. `lambda1` is the smallest
//! eigenvalue on the orthogonal complement of the constants, i.e. the second
//! smallest eigenvalue overall for connected graphs.
//!
//! Two independent routes are kept deliberately separate so they can oracle
//! each other: a dense symmetric eigendecomposition for small graphs and a
//! Lanczos iteration with explicit deflation of the constant vector (no
//! linear solves; Laplacians here are well conditioned at desk scale).

use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Default vertex-count cap for the dense solver; override with the
/// `PLANEGAP_DENSE_CAP` environment variable.
pub const DEFAULT_DENSE_CAP: usize = 2000;

/// Default relative residual tolerance for the iterative solver.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Vertex-count threshold below which `lambda1_auto` prefers the dense
/// route.
pub const AUTO_DENSE_LIMIT: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMethod {
    Dense,
    Iterative,
}

/// Converged spectral-gap computation. `eigenvector` is unit length,
/// orthogonal to constants, with deterministic sign (first nonzero entry
/// positive). `residual` is the exact `||Delta v - lambda v||_2`.
#[derive(Debug, Clone)]
pub struct SpectralResult {
    pub lambda1: f64,
    pub eigenvector: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
    pub method: SolveMethod,
}

/// Applies the combinatorial Laplacian to a vertex function.
pub fn laplacian_apply(g: &Graph, f: &[f64]) -> Result<Vec<f64>> {
    let n = g.vertex_count();
    if f.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: f.len() });
    }
    let mut out = vec![0.0; n];
    for x in 0..n {
        let mut acc = g.degree(x) as f64 * f[x];
        for &y in g.neighbors(x) {
            acc -= f[y];
        }
        out[x] = acc;
    }
    Ok(out)
}

/// `sum_edges (f(u) - f(v))^2 / sum_x f(x)^2`. The edge sum runs over the
/// canonical edge list, so each undirected edge (with multiplicity) is
/// counted once; this equals the usual half of the ordered double sum.
pub fn rayleigh_quotient_vertex(g: &Graph, f: &[f64]) -> Result<f64> {
    let n = g.vertex_count();
    if f.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: f.len() });
    }
    let den: f64 = f.iter().map(|x| x * x).sum();
    if den == 0.0 {
        return Err(Error::ZeroDenominator);
    }
    let num: f64 = g.canonical_edges().map(|(u, v)| (f[u] - f[v]) * (f[u] - f[v])).sum();
    Ok(num / den)
}

fn dense_cap() -> usize {
    std::env::var("PLANEGAP_DENSE_CAP")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_DENSE_CAP)
}

fn fix_sign(v: &mut [f64]) {
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-14) {
        if *first < 0.0 {
            for x in v.iter_mut() {
                *x = -*x;
            }
        }
    }
}

fn finish(g: &Graph, lambda1: f64, mut vector: Vec<f64>, iterations: usize, method: SolveMethod) -> Result<SpectralResult> {
    let n = vector.len() as f64;
    // Deflate numerical drift along constants, then normalize.
    let mean = vector.iter().sum::<f64>() / n;
    for x in vector.iter_mut() {
        *x -= mean;
    }
    let norm = vector.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::ZeroVector);
    }
    for x in vector.iter_mut() {
        *x /= norm;
    }
    fix_sign(&mut vector);
    let av = laplacian_apply(g, &vector)?;
    let residual = av
        .iter()
        .zip(&vector)
        .map(|(a, v)| (a - lambda1 * v) * (a - lambda1 * v))
        .sum::<f64>()
        .sqrt();
    Ok(SpectralResult { lambda1, eigenvector: vector, iterations, residual, method })
}

/// Dense route: full symmetric eigendecomposition, second smallest
/// eigenvalue. Refuses graphs above the size cap.
pub fn lambda1_dense(g: &Graph) -> Result<SpectralResult> {
    lambda1_dense_capped(g, dense_cap())
}

pub fn lambda1_dense_capped(g: &Graph, cap: usize) -> Result<SpectralResult> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.vertex_count();
    if n < 2 {
        return Err(Error::EmptyGraph);
    }
    if n > cap {
        return Err(Error::DenseCapExceeded { size: n, cap });
    }
    let mut m = DMatrix::<f64>::zeros(n, n);
    for x in 0..n {
        m[(x, x)] = g.degree(x) as f64;
        for &y in g.neighbors(x) {
            m[(x, y)] -= 1.0;
        }
    }
    let eig = m.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let idx = order[1];
    let lambda1 = eig.eigenvalues[idx];
    let vector: Vec<f64> = eig.eigenvectors.column(idx).iter().copied().collect();
    finish(g, lambda1, vector, 1, SolveMethod::Dense)
}

/// Number of eigenvalues of the symmetric tridiagonal (diag, off) that are
/// strictly below `x`, by the Sturm sign count of the shifted LDL^T pivots.
fn sturm_count_below(diag: &[f64], off: &[f64], x: f64, pivmin: f64) -> usize {
    let mut count = 0;
    let mut d = 1.0f64;
    for i in 0..diag.len() {
        let sq = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
        d = (diag[i] - x) - sq / d;
        if d.abs() < pivmin {
            d = -pivmin;
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// Smallest eigenvalue of a symmetric tridiagonal matrix by bisection.
pub(crate) fn tridiag_smallest_eigenvalue(diag: &[f64], off: &[f64]) -> f64 {
    tridiag_kth_smallest_eigenvalue(diag, off, 1)
}

/// k-th smallest eigenvalue (1-based) of a symmetric tridiagonal matrix by
/// Sturm-count bisection, accurate to the floating-point resolution of the
/// matrix scale.
pub(crate) fn tridiag_kth_smallest_eigenvalue(diag: &[f64], off: &[f64], k: usize) -> f64 {
    assert!(!diag.is_empty());
    assert!(k >= 1 && k <= diag.len());
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut scale = 0.0f64;
    for i in 0..diag.len() {
        let left = if i == 0 { 0.0 } else { off[i - 1].abs() };
        let right = if i + 1 == diag.len() { 0.0 } else { off[i].abs() };
        lo = lo.min(diag[i] - left - right);
        hi = hi.max(diag[i] + left + right);
        scale = scale.max(diag[i].abs() + left + right);
    }
    let pivmin = f64::MIN_POSITIVE.max(scale * 1e-300);
    let tol = (scale * 4.0 * f64::EPSILON).max(f64::MIN_POSITIVE);
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if sturm_count_below(diag, off, mid, pivmin) >= k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Solves `(T - sigma I) x = b` for tridiagonal T by Gaussian elimination
/// with partial pivoting. Near-singular pivots are perturbed, which is the
/// standard inverse-iteration safeguard.
fn tridiag_solve_shifted(diag: &[f64], off: &[f64], sigma: f64, b: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut d: Vec<f64> = diag.iter().map(|a| a - sigma).collect();
    let mut u1 = vec![0.0; n];
    let mut u2 = vec![0.0; n];
    u1[..off.len()].copy_from_slice(off);
    let mut x = b.to_vec();
    let scale = diag.iter().map(|v| v.abs()).fold(1.0f64, f64::max);
    let tiny = scale * f64::EPSILON * f64::EPSILON;
    for i in 0..n - 1 {
        // Row i+1 is still the original tridiagonal row at this point.
        let mut sub = off[i];
        if sub.abs() > d[i].abs() {
            let row_i = (d[i], u1[i], u2[i]);
            d[i] = sub;
            u1[i] = d[i + 1];
            u2[i] = u1[i + 1];
            d[i + 1] = row_i.1;
            u1[i + 1] = row_i.2;
            sub = row_i.0;
            x.swap(i, i + 1);
        }
        if d[i].abs() < tiny {
            d[i] = tiny;
        }
        let factor = sub / d[i];
        d[i + 1] -= factor * u1[i];
        u1[i + 1] -= factor * u2[i];
        x[i + 1] -= factor * x[i];
    }
    if d[n - 1].abs() < tiny {
        d[n - 1] = tiny;
    }
    for i in (0..n).rev() {
        let mut acc = x[i];
        if i + 1 < n {
            acc -= u1[i] * x[i + 1];
        }
        if i + 2 < n {
            acc -= u2[i] * x[i + 2];
        }
        x[i] = acc / d[i];
    }
    x
}

/// Smallest Ritz pair of the tridiagonal: eigenvalue by Sturm bisection,
/// eigenvector by two safeguarded inverse-iteration steps.
fn tridiag_smallest_pair(diag: &[f64], off: &[f64]) -> (f64, Vec<f64>) {
    let n = diag.len();
    let theta = tridiag_smallest_eigenvalue(diag, off);
    if n == 1 {
        return (theta, vec![1.0]);
    }
    let mut s = vec![1.0 / (n as f64).sqrt(); n];
    for _ in 0..2 {
        s = tridiag_solve_shifted(diag, off, theta, &s);
        let norm = s.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !norm.is_finite() || norm == 0.0 {
            s = vec![1.0 / (n as f64).sqrt(); n];
            break;
        }
        for x in s.iter_mut() {
            *x /= norm;
        }
    }
    (theta, s)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Iterative route: Lanczos on the Laplacian restricted to the complement
/// of the constants, full reorthogonalization, deterministic given `seed`
/// and `tol`. Converges when the Ritz residual estimate drops below
/// `tol * theta`.
pub fn lambda1_iterative(g: &Graph, tol: f64, seed: u64) -> Result<SpectralResult> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.vertex_count();
    if n < 2 {
        return Err(Error::EmptyGraph);
    }
    let ones = vec![1.0 / (n as f64).sqrt(); n];
    let max_iter = (n - 1).min((50.0 * (n as f64).sqrt()).ceil() as usize);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
    let c = dot(&v, &ones);
    for (x, o) in v.iter_mut().zip(&ones) {
        *x -= c * o;
    }
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm < 1e-12 {
        return Err(Error::ZeroVector);
    }
    for x in v.iter_mut() {
        *x /= norm;
    }

    let breakdown = 1e-13 * (2.0 * g.max_degree() as f64).max(1.0);
    let mut basis: Vec<Vec<f64>> = vec![v];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut exhausted = false;
    let mut converged = false;

    for k in 0..max_iter {
        let vk = basis[k].clone();
        let mut w = laplacian_apply(g, &vk)?;
        let alpha = dot(&w, &vk);
        alphas.push(alpha);
        for (x, y) in w.iter_mut().zip(&vk) {
            *x -= alpha * y;
        }
        if k > 0 {
            let beta_prev = betas[k - 1];
            for (x, y) in w.iter_mut().zip(&basis[k - 1]) {
                *x -= beta_prev * y;
            }
        }
        // Full reorthogonalization against constants and the whole basis,
        // two classical Gram-Schmidt passes.
        for _ in 0..2 {
            let c = dot(&w, &ones);
            for (x, o) in w.iter_mut().zip(&ones) {
                *x -= c * o;
            }
            for q in &basis {
                let c = dot(&w, q);
                for (x, y) in w.iter_mut().zip(q) {
                    *x -= c * y;
                }
            }
        }
        let beta = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        betas.push(beta);

        let last = k + 1 == max_iter;
        let check = beta <= breakdown || last || k % 8 == 7 || k + 1 >= n - 1;
        if check {
            let (theta, s) = tridiag_smallest_pair(&alphas, &betas[..k]);
            let res_est = if beta <= breakdown { 0.0 } else { beta * s[k].abs() };
            if theta > 0.0 && res_est <= tol * theta {
                converged = true;
            }
        }
        if beta <= breakdown {
            exhausted = true;
            break;
        }
        if converged {
            break;
        }
        for x in w.iter_mut() {
            *x /= beta;
        }
        basis.push(w);
    }

    let k = alphas.len();
    let (theta, s) = tridiag_smallest_pair(&alphas, &betas[..k - 1]);
    let mut x = vec![0.0; n];
    for (coef, q) in s.iter().zip(&basis) {
        for (xi, qi) in x.iter_mut().zip(q) {
            *xi += coef * qi;
        }
    }
    let result = finish(g, theta, x, k, SolveMethod::Iterative)?;
    if !(converged || exhausted) && result.residual > tol * theta.max(f64::MIN_POSITIVE) * 10.0 {
        return Err(Error::NoConvergence { residual: result.residual, iterations: k });
    }
    Ok(result)
}

/// Dense below `AUTO_DENSE_LIMIT` vertices, iterative above.
pub fn lambda1_auto(g: &Graph, tol: f64, seed: u64) -> Result<SpectralResult> {
    if g.vertex_count() <= AUTO_DENSE_LIMIT {
        lambda1_dense(g)
    } else {
        lambda1_iterative(g, tol, seed)
    }
}

/// Upper bound for `lambda1` from two nonzero functions with disjoint
/// supports: `lambda1 <= max(RQ(f1), RQ(f2))`. The guarantee needs the
/// supports to be non-adjacent as well as disjoint, which holds for the
/// certificate tents; only disjointness is checked here.
pub fn test_pair_bound(g: &Graph, f1: &[f64], f2: &[f64]) -> Result<f64> {
    let n = g.vertex_count();
    if f1.len() != n || f2.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: f1.len().max(f2.len()) });
    }
    if f1.iter().all(|&x| x == 0.0) || f2.iter().all(|&x| x == 0.0) {
        return Err(Error::ZeroVector);
    }
    for i in 0..n {
        if f1[i] != 0.0 && f2[i] != 0.0 {
            return Err(Error::OverlappingSupports(i));
        }
    }
    let r1 = rayleigh_quotient_vertex(g, f1)?;
    let r2 = rayleigh_quotient_vertex(g, f2)?;
    Ok(r1.max(r2))
}

/// Closed-form gaps used as frozen oracles in tests and acceptance runs.
pub mod closed_form {
    /// `lambda1` of the cycle on k vertices.
    pub fn cycle(k: usize) -> f64 {
        2.0 * (1.0 - (2.0 * std::f64::consts::PI / k as f64).cos())
    }

    /// `lambda1` of the path on k vertices.
    pub fn path(k: usize) -> f64 {
        2.0 * (1.0 - (std::f64::consts::PI / k as f64).cos())
    }

    /// `lambda1` of the complete graph on n vertices.
    pub fn complete(n: usize) -> f64 {
        n as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, grid, path, Graph};
    use proptest::prelude::*;

    fn petersen() -> Graph {
        let mut pairs = vec![];
        for i in 0..5 {
            pairs.push((i, (i + 1) % 5));
            pairs.push((i, i + 5));
            pairs.push((i + 5, (i + 2) % 5 + 5));
        }
        Graph::from_edge_list(&pairs).unwrap()
    }

    #[test]
    fn laplacian_on_p3_eigenvector() {
        let g = path(3);
        let f = [1.0, 0.0, -1.0];
        let out = laplacian_apply(&g, &f).unwrap();
        assert_eq!(out, vec![1.0, 0.0, -1.0]);
    }

    #[test]
    fn quotient_of_p3_eigenvector_is_one() {
        let g = path(3);
        assert!((rayleigh_quotient_vertex(&g, &[1.0, 0.0, -1.0]).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn quotient_rejects_zero() {
        let g = path(3);
        assert!(matches!(
            rayleigh_quotient_vertex(&g, &[0.0; 3]),
            Err(Error::ZeroDenominator)
        ));
    }

    #[test]
    fn energy_identity_against_edge_sum_oracle() {
        // f^T (Delta f) equals the edge sum of squared differences.
        let g = grid(3, 4);
        let f: Vec<f64> = (0..12).map(|i| ((i * 7 % 5) as f64) - 2.0).collect();
        let lf = laplacian_apply(&g, &f).unwrap();
        let quad: f64 = f.iter().zip(&lf).map(|(a, b)| a * b).sum();
        let edge_sum: f64 =
            g.canonical_edges().map(|(u, v)| (f[u] - f[v]) * (f[u] - f[v])).sum();
        assert!((quad - edge_sum).abs() < 1e-12);
    }

    #[test]
    fn dense_matches_closed_forms() {
        for k in [3usize, 4, 6, 10, 17, 33] {
            let r = lambda1_dense(&cycle(k)).unwrap();
            let want = closed_form::cycle(k);
            assert!((r.lambda1 - want).abs() <= 1e-10 * want, "C_{k}: {} vs {want}", r.lambda1);
        }
        for k in [2usize, 3, 4, 9, 25] {
            let r = lambda1_dense(&path(k)).unwrap();
            let want = closed_form::path(k);
            assert!((r.lambda1 - want).abs() <= 1e-10 * want, "P_{k}: {} vs {want}", r.lambda1);
        }
        for n in [3usize, 4, 10, 20] {
            let r = lambda1_dense(&complete(n)).unwrap();
            assert!((r.lambda1 - n as f64).abs() <= 1e-10 * n as f64);
        }
    }

    #[test]
    fn dense_p3_gap_is_one() {
        let r = lambda1_dense(&path(3)).unwrap();
        assert!((r.lambda1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dense_petersen_gap_is_two() {
        let r = lambda1_dense(&petersen()).unwrap();
        assert!((r.lambda1 - 2.0).abs() < 1e-11);
    }

    #[test]
    fn doubled_edge_gap_is_four() {
        let g = Graph::from_edge_list(&[(0, 1), (0, 1)]).unwrap();
        assert!((lambda1_dense(&g).unwrap().lambda1 - 4.0).abs() < 1e-12);
        assert!((lambda1_iterative(&g, 1e-10, 7).unwrap().lambda1 - 4.0).abs() < 1e-10);
    }

    #[test]
    fn iterative_matches_dense() {
        for (i, g) in [cycle(24), path(31), complete(12), grid(5, 7), petersen()]
            .iter()
            .enumerate()
        {
            let d = lambda1_dense(g).unwrap();
            let it = lambda1_iterative(g, 1e-10, 42 + i as u64).unwrap();
            assert!(
                (d.lambda1 - it.lambda1).abs() <= 1e-8 * d.lambda1,
                "graph {i}: dense {} iterative {}",
                d.lambda1,
                it.lambda1
            );
            assert_eq!(it.method, SolveMethod::Iterative);
        }
    }

    #[test]
    fn eigenvector_is_orthogonal_to_constants() {
        for r in [
            lambda1_dense(&grid(4, 5)).unwrap(),
            lambda1_iterative(&grid(4, 5), 1e-9, 3).unwrap(),
        ] {
            let s: f64 = r.eigenvector.iter().sum();
            assert!(s.abs() < 1e-12, "sum {s}");
            let norm: f64 = r.eigenvector.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!((norm - 1.0).abs() < 1e-12);
            assert!(r.residual < 1e-8, "residual {}", r.residual);
        }
    }

    #[test]
    fn dense_cap_refuses_large_graphs() {
        let g = cycle(50);
        assert!(matches!(
            lambda1_dense_capped(&g, 49),
            Err(Error::DenseCapExceeded { size: 50, cap: 49 })
        ));
    }

    #[test]
    fn solvers_refuse_disconnected() {
        let g = Graph::from_edge_list(&[(0, 1), (2, 3)]).unwrap();
        assert!(matches!(lambda1_dense(&g), Err(Error::Disconnected)));
        assert!(matches!(lambda1_iterative(&g, 1e-9, 0), Err(Error::Disconnected)));
    }

    #[test]
    fn iterative_is_deterministic() {
        let g = grid(6, 6);
        let a = lambda1_iterative(&g, 1e-9, 11).unwrap();
        let b = lambda1_iterative(&g, 1e-9, 11).unwrap();
        assert_eq!(a.lambda1.to_bits(), b.lambda1.to_bits());
        assert_eq!(a.iterations, b.iterations);
    }

    #[test]
    fn pair_bound_on_p4() {
        let g = path(4);
        let bound = test_pair_bound(&g, &[1.0, 0.0, 0.0, 0.0], &[0.0, 0.0, 0.0, 1.0]).unwrap();
        assert!((bound - 1.0).abs() < 1e-15);
        let l1 = lambda1_dense(&g).unwrap().lambda1;
        assert!(l1 <= bound);
    }

    #[test]
    fn pair_bound_rejects_overlap_and_zero() {
        let g = path(4);
        assert!(matches!(
            test_pair_bound(&g, &[1.0, 1.0, 0.0, 0.0], &[0.0, 1.0, 0.0, 1.0]),
            Err(Error::OverlappingSupports(1))
        ));
        assert!(matches!(
            test_pair_bound(&g, &[0.0; 4], &[0.0, 0.0, 0.0, 1.0]),
            Err(Error::ZeroVector)
        ));
    }

    #[test]
    fn tridiag_bisection_matches_known_eigenvalue() {
        // T = tridiag(-1, 2, -1) of size 5: smallest eigenvalue
        // 2 - 2 cos(pi/6) = 2 - sqrt(3).
        let diag = vec![2.0; 5];
        let off = vec![-1.0; 4];
        let got = tridiag_smallest_eigenvalue(&diag, &off);
        let want = 2.0 - 3.0f64.sqrt();
        assert!((got - want).abs() < 1e-12, "{got} vs {want}");
    }

    proptest! {
        /// Rayleigh quotient of any nonzero function dominates lambda1 after
        /// removing the mean.
        #[test]
        fn quotient_dominates_gap(vals in prop::collection::vec(-5.0f64..5.0, 12)) {
            let g = grid(3, 4);
            let mean = vals.iter().sum::<f64>() / 12.0;
            let f: Vec<f64> = vals.iter().map(|v| v - mean).collect();
            let den: f64 = f.iter().map(|x| x * x).sum();
            prop_assume!(den > 1e-6);
            let rq = rayleigh_quotient_vertex(&g, &f).unwrap();
            let l1 = lambda1_dense(&g).unwrap().lambda1;
            prop_assert!(rq >= l1 - 1e-9);
        }

        /// Laplacian of any function is orthogonal to constants.
        #[test]
        fn image_orthogonal_to_constants(vals in prop::collection::vec(-5.0f64..5.0, 9)) {
            let g = cycle(9);
            let out = laplacian_apply(&g, &vals).unwrap();
            prop_assert!(out.iter().sum::<f64>().abs() < 1e-9);
        }
    }
}
