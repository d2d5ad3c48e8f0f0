//! Distance densities and the weighted one-dimensional Rayleigh quotient.
//!
//! For a rooted graph, the unit-length edge measure pushes forward under the
//! distance-to-root map to an integer step function `rho` on `[0, diam_p]`:
//! an edge whose endpoint distances are `a` and `a + 1` contributes 1 on
//! `(a, a + 1)`; an edge with both endpoints at distance `a` folds at its
//! midpoint and contributes 2 on `(a, a + 1/2)`. All breakpoints are
//! half-integers, stored as doubled integers so the bookkeeping is exact.
//!
//! For piecewise linear `F`, the metric Rayleigh quotient of the pullback
//! `F o delta_p` equals `int F'^2 rho / int F^2 rho`; both sides are
//! implemented by independent routes (per-edge and per-piece) and checked
//! against each other.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest jump magnitude a density may have at a critical value and still
/// be good.
pub const GOOD_JUMP: i64 = 3;

/// Nonnegative integer step function with half-integer breakpoints, stored
/// doubled. `values[i]` holds on the open interval
/// `(breaks[i], breaks[i+1])` (doubled coordinates); the function is 0
/// outside `[breaks[0], breaks[last]]`. The representation is minimal:
/// adjacent pieces have distinct values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepFunction {
    breaks: Vec<i64>,
    values: Vec<u64>,
}

impl StepFunction {
    /// Builds from doubled breakpoints and piece values, merging equal
    /// neighbors into the minimal representation.
    pub fn from_doubled(breaks: Vec<i64>, values: Vec<u64>) -> Result<StepFunction> {
        if breaks.len() != values.len() + 1 || values.is_empty() {
            return Err(Error::BadPiecewise);
        }
        if breaks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::NodesNotIncreasing);
        }
        let mut out = StepFunction { breaks: vec![breaks[0]], values: Vec::new() };
        for (i, &v) in values.iter().enumerate() {
            if out.values.last() == Some(&v) {
                *out.breaks.last_mut().unwrap() = breaks[i + 1];
            } else {
                out.values.push(v);
                out.breaks.push(breaks[i + 1]);
            }
        }
        // Trim zero pieces at the ends so the support is tight.
        while out.values.first() == Some(&0) {
            out.values.remove(0);
            out.breaks.remove(0);
        }
        while out.values.last() == Some(&0) {
            out.values.pop();
            out.breaks.pop();
        }
        if out.values.is_empty() {
            return Err(Error::BadPiecewise);
        }
        Ok(out)
    }

    pub fn support_start_doubled(&self) -> i64 {
        self.breaks[0]
    }

    pub fn support_end_doubled(&self) -> i64 {
        *self.breaks.last().unwrap()
    }

    pub fn support_end(&self) -> f64 {
        self.support_end_doubled() as f64 / 2.0
    }

    pub fn breaks_doubled(&self) -> &[i64] {
        &self.breaks
    }

    /// Pieces as `(lo, hi, value)` in doubled coordinates.
    pub fn pieces(&self) -> impl Iterator<Item = (i64, i64, u64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(i, &v)| (self.breaks[i], self.breaks[i + 1], v))
    }

    pub fn max_value(&self) -> u64 {
        self.values.iter().copied().max().unwrap_or(0)
    }

    pub fn min_value(&self) -> u64 {
        self.values.iter().copied().min().unwrap_or(0)
    }

    /// Twice the integral; exact in integer arithmetic.
    pub fn integral_twice(&self) -> i64 {
        self.pieces().map(|(lo, hi, v)| (hi - lo) * v as i64).sum()
    }

    pub fn integral(&self) -> f64 {
        self.integral_twice() as f64 / 2.0
    }

    /// Value on the open doubled interval `(d, d + 1)`; the function is
    /// constant there because breakpoints are integers in doubled
    /// coordinates. Returns 0 outside the support.
    pub fn value_right_of(&self, d: i64) -> u64 {
        match self.breaks.binary_search(&d) {
            Ok(i) if i < self.values.len() => self.values[i],
            Ok(_) => 0,
            Err(0) => 0,
            Err(i) if i <= self.values.len() => self.values[i - 1],
            Err(_) => 0,
        }
    }

    /// Exact integral over `[lo, hi]` in real (undoubled) coordinates.
    pub fn integrate_range(&self, lo: f64, hi: f64) -> f64 {
        if hi <= lo {
            return 0.0;
        }
        let mut acc = 0.0;
        for (a, b, v) in self.pieces() {
            let a = a as f64 / 2.0;
            let b = b as f64 / 2.0;
            let left = lo.max(a);
            let right = hi.min(b);
            if right > left {
                acc += (right - left) * v as f64;
            }
        }
        acc
    }

    /// Jump of the function at doubled coordinate `d` (value after minus
    /// value before); 0 if `d` is not a breakpoint.
    pub fn jump_at(&self, d: i64) -> i64 {
        let before = match self.breaks.binary_search(&d) {
            Ok(0) => 0,
            Ok(i) => self.values[i - 1] as i64,
            Err(_) => return 0,
        };
        let after = self.value_right_of(d) as i64;
        after - before
    }
}

/// A breakpoint of a density together with its jump. `good` means the jump
/// magnitude is at most `GOOD_JUMP`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalValue {
    pub t_doubled: i64,
    pub jump: i64,
    pub good: bool,
}

impl CriticalValue {
    pub fn t(&self) -> f64 {
        self.t_doubled as f64 / 2.0
    }
}

/// All discontinuities of the density with their jumps, in increasing
/// order. The support endpoints (0 and `diam_p`) always appear because the
/// density is positive inside its support and zero outside.
pub fn critical_values(rho: &StepFunction) -> Vec<CriticalValue> {
    let breaks = rho.breaks_doubled();
    breaks
        .iter()
        .map(|&d| {
            let jump = rho.jump_at(d);
            CriticalValue { t_doubled: d, jump, good: jump.abs() <= GOOD_JUMP }
        })
        .collect()
}

/// Pushforward of the edge measure under the distance-to-root map.
/// Integrates to exactly the edge count; at least 1 inside `(0, diam_p)`.
pub fn distance_density(g: &Graph, p: usize) -> Result<StepFunction> {
    if g.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let dist = g.bfs_distances(p)?;
    let mut events: BTreeMap<i64, i64> = BTreeMap::new();
    for (u, v) in g.canonical_edges() {
        let a = dist[u].min(dist[v]) as i64;
        let b = dist[u].max(dist[v]) as i64;
        debug_assert!(b - a <= 1, "adjacent vertices differ by more than 1");
        if b == a + 1 {
            *events.entry(2 * a).or_insert(0) += 1;
            *events.entry(2 * a + 2).or_insert(0) -= 1;
        } else {
            *events.entry(2 * a).or_insert(0) += 2;
            *events.entry(2 * a + 1).or_insert(0) -= 2;
        }
    }
    let mut breaks = Vec::new();
    let mut values = Vec::new();
    let mut current: i64 = 0;
    for (&d, &delta) in &events {
        if delta == 0 {
            continue;
        }
        if breaks.is_empty() {
            breaks.push(d);
        } else {
            values.push(current as u64);
            breaks.push(d);
        }
        current += delta;
        debug_assert!(current >= 0);
    }
    debug_assert_eq!(current, 0, "density must close back to zero");
    StepFunction::from_doubled(breaks, values)
}

/// Continuous piecewise linear function; linear between consecutive nodes
/// and 0 outside `[nodes[0], nodes[last]]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PiecewiseLinearFn {
    nodes: Vec<f64>,
    values: Vec<f64>,
}

impl PiecewiseLinearFn {
    pub fn new(nodes: Vec<f64>, values: Vec<f64>) -> Result<PiecewiseLinearFn> {
        if nodes.len() != values.len() || nodes.len() < 2 {
            return Err(Error::BadPiecewise);
        }
        if nodes.iter().any(|x| !x.is_finite()) || values.iter().any(|x| !x.is_finite()) {
            return Err(Error::BadPiecewise);
        }
        if nodes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::NodesNotIncreasing);
        }
        Ok(PiecewiseLinearFn { nodes, values })
    }

    /// Nodes given as doubled half-integers.
    pub fn from_doubled(nodes_doubled: &[i64], values: Vec<f64>) -> Result<PiecewiseLinearFn> {
        Self::new(nodes_doubled.iter().map(|&d| d as f64 / 2.0).collect(), values)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn eval(&self, t: f64) -> f64 {
        let n = self.nodes.len();
        if t < self.nodes[0] || t > self.nodes[n - 1] {
            return 0.0;
        }
        let i = match self.nodes.binary_search_by(|x| x.total_cmp(&t)) {
            Ok(i) => return self.values[i],
            Err(i) => i - 1,
        };
        let (a, b) = (self.nodes[i], self.nodes[i + 1]);
        let s = (self.values[i + 1] - self.values[i]) / (b - a);
        self.values[i] + s * (t - a)
    }

    /// Exact `int_lo^hi F(t)^2 dt`; F is quadratic on each piece so the
    /// three-point Simpson form `(b-a)/6 * (fa^2 + 4 fm^2 + fb^2)` is exact.
    pub fn integral_sq(&self, lo: f64, hi: f64) -> f64 {
        self.piecewise_sum(lo, hi, |fa, fm, fb, len| {
            len / 6.0 * (fa * fa + 4.0 * fm * fm + fb * fb)
        })
    }

    /// Exact `int_lo^hi F'(t)^2 dt` (derivative is 0 outside the nodes).
    pub fn integral_deriv_sq(&self, lo: f64, hi: f64) -> f64 {
        let n = self.nodes.len();
        let mut acc = 0.0;
        for i in 0..n - 1 {
            let (a, b) = (self.nodes[i], self.nodes[i + 1]);
            let left = lo.max(a);
            let right = hi.min(b);
            if right > left {
                let s = (self.values[i + 1] - self.values[i]) / (b - a);
                acc += s * s * (right - left);
            }
        }
        acc
    }

    fn piecewise_sum(&self, lo: f64, hi: f64, f: impl Fn(f64, f64, f64, f64) -> f64) -> f64 {
        let n = self.nodes.len();
        let mut acc = 0.0;
        for i in 0..n - 1 {
            let (a, b) = (self.nodes[i], self.nodes[i + 1]);
            let left = lo.max(a);
            let right = hi.min(b);
            if right > left {
                let fa = self.eval(left);
                let fb = self.eval(right);
                let fm = self.eval(0.5 * (left + right));
                acc += f(fa, fm, fb, right - left);
            }
        }
        acc
    }
}

/// `int F'^2 rho / int F^2 rho` integrated piece by piece over the density.
/// This is the "weighted" route of the pullback identity.
pub fn weighted_rayleigh(rho: &StepFunction, f: &PiecewiseLinearFn) -> Result<f64> {
    let mut num = 0.0;
    let mut den = 0.0;
    for (lo_d, hi_d, v) in rho.pieces() {
        let lo = lo_d as f64 / 2.0;
        let hi = hi_d as f64 / 2.0;
        let v = v as f64;
        num += v * f.integral_deriv_sq(lo, hi);
        den += v * f.integral_sq(lo, hi);
    }
    if den <= 0.0 {
        return Err(Error::ZeroDenominator);
    }
    Ok(num / den)
}

/// Metric Rayleigh quotient of `F o delta_p`, integrated edge by edge over
/// the unit-length metric graph. Independent of `weighted_rayleigh`: the
/// two must agree by the pullback identity.
pub fn metric_rayleigh(g: &Graph, p: usize, f: &PiecewiseLinearFn) -> Result<f64> {
    let dist = g.bfs_distances(p)?;
    let mut num = 0.0;
    let mut den = 0.0;
    for (u, v) in g.canonical_edges() {
        let a = dist[u].min(dist[v]) as f64;
        let b = dist[u].max(dist[v]) as f64;
        if b > a {
            num += f.integral_deriv_sq(a, b);
            den += f.integral_sq(a, b);
        } else {
            // Folded edge: distance runs a -> a + 1/2 -> a on the edge.
            num += 2.0 * f.integral_deriv_sq(a, a + 0.5);
            den += 2.0 * f.integral_sq(a, a + 0.5);
        }
    }
    if den <= 0.0 {
        return Err(Error::ZeroDenominator);
    }
    Ok(num / den)
}
