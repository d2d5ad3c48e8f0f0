//! Lazy random-walk mixing times.
//!
//! The chain stays put with probability 1/2 and otherwise moves to a uniform
//! neighbor, so the stationary distribution is proportional to degree and
//! total-variation distance to it is nonincreasing. Distributions are
//! iterated exactly (sparse matrix application, no sampling), which is
//! affordable at desk scale and makes the reported curves deterministic.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{DiameterMode, Graph};
use crate::spectral;

/// Vertex cap for the exact worst-start policy.
pub const WALK_CAP: usize = 2000;

/// Mixing threshold, the usual epsilon = 1/4.
pub const TV_THRESHOLD: f64 = 0.25;

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum StartPolicy {
    /// Maximize over every start vertex. Exact but quadratic in size.
    WorstExact,
    /// Caller-chosen starts (the cone apexes for family members) plus a
    /// double-sweep diametral endpoint.
    Heuristic(Vec<usize>),
}

/// Walk measurement from a fixed start policy. The curve lists the largest
/// total-variation distance over the starts after each step, from step 0
/// through `tau`, and is nonincreasing; `tau` is the first step at or below
/// the threshold.
#[derive(Debug, Clone, Serialize)]
pub struct MixingResult {
    pub tau: usize,
    pub start_policy: StartPolicy,
    pub tv_curve: Vec<(usize, f64)>,
}

/// One application of the lazy transition to a distribution.
pub fn lazy_step(g: &Graph, mu: &[f64]) -> Vec<f64> {
    let mut next = vec![0.0; mu.len()];
    for v in 0..mu.len() {
        next[v] += 0.5 * mu[v];
        let share = 0.5 * mu[v] / g.degree(v) as f64;
        for &u in g.neighbors(v) {
            next[u] += share;
        }
    }
    next
}

/// First step at which the walk's total-variation distance to stationarity
/// drops to 1/4, maximized over the policy's starts.
pub fn mixing_time(g: &Graph, policy: StartPolicy) -> Result<MixingResult> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let v = g.vertex_count();
    let starts: Vec<usize> = match &policy {
        StartPolicy::WorstExact => {
            if v > WALK_CAP {
                return Err(Error::WalkCapExceeded { size: v, cap: WALK_CAP });
            }
            (0..v).collect()
        }
        StartPolicy::Heuristic(extra) => {
            for &s in extra {
                if s >= v {
                    return Err(Error::VertexOutOfRange { vertex: s, len: v });
                }
            }
            let mut s = extra.clone();
            s.push(g.diameter(DiameterMode::DoubleSweep)?.endpoints.0);
            s.sort_unstable();
            s.dedup();
            s
        }
    };

    let total = 2.0 * g.edge_count() as f64;
    let pi: Vec<f64> = (0..v).map(|x| g.degree(x) as f64 / total).collect();
    let tv = |mu: &[f64]| 0.5 * mu.iter().zip(&pi).map(|(a, b)| (a - b).abs()).sum::<f64>();

    let mut dists: Vec<Vec<f64>> = starts
        .iter()
        .map(|&s| {
            let mut d = vec![0.0; v];
            d[s] = 1.0;
            d
        })
        .collect();
    let mut last: Vec<f64> = dists.iter().map(|d| tv(d)).collect();
    let worst0 = last.iter().cloned().fold(0.0, f64::max);
    let mut tv_curve = vec![(0usize, worst0)];
    let mut tau = 0;

    if worst0 > TV_THRESHOLD {
        let cap = 100 + 10 * v * v;
        let mut t = 0;
        loop {
            t += 1;
            if t > cap {
                return Err(Error::MixingStalled(cap));
            }
            let mut worst = 0.0f64;
            for (k, d) in dists.iter_mut().enumerate() {
                *d = lazy_step(g, d);
                let now = tv(d);
                if now > last[k] + 1e-12 {
                    return Err(Error::TvIncrease(t));
                }
                last[k] = now;
                worst = worst.max(now);
            }
            tv_curve.push((t, worst));
            if worst <= TV_THRESHOLD {
                tau = t;
                break;
            }
        }
    }

    Ok(MixingResult { tau, start_policy: policy, tv_curve })
}

/// Both sides of the spectral sandwich on the mixing time:
/// 1/(C lambda1) <= tau <= C ln(vol)/lambda1. `c_fit` is the smallest single
/// C making both hold; it is infinite when vol = 1 (the doubled edge), where
/// the upper side degenerates.
#[derive(Debug, Clone, Serialize)]
pub struct MixingSandwich {
    pub tau: usize,
    pub lambda1: f64,
    pub lower: f64,
    pub upper: f64,
    pub c_fit: f64,
}

/// Measures tau (exact worst start when the size cap allows, heuristic
/// otherwise) and fits the sandwich constant.
pub fn verify_mixing_sandwich(g: &Graph) -> Result<MixingSandwich> {
    let policy = if g.vertex_count() <= WALK_CAP {
        StartPolicy::WorstExact
    } else {
        StartPolicy::Heuristic(Vec::new())
    };
    verify_mixing_sandwich_with(g, policy)
}

/// Sandwich fit under a caller-chosen start policy, for graphs where the
/// exact worst start is too expensive.
pub fn verify_mixing_sandwich_with(g: &Graph, policy: StartPolicy) -> Result<MixingSandwich> {
    let tau = mixing_time(g, policy)?.tau.max(1);
    let lambda1 = spectral::lambda1_auto(g, spectral::DEFAULT_TOL, 0)?.lambda1;
    let lower = 1.0 / lambda1;
    let upper = (g.vol() as f64).ln() / lambda1;
    let t = tau as f64;
    let c_fit = if upper > 0.0 {
        (lower / t).max(t / upper)
    } else {
        f64::INFINITY
    };
    Ok(MixingSandwich { tau, lambda1, lower, upper, c_fit })
}

/// One family member's walk data for the diameter-squared trend check.
#[derive(Debug, Clone, Serialize)]
pub struct NoBcMember {
    pub label: String,
    pub tau: usize,
    pub diam: usize,
}

/// Per-member statistics tau ln(diam)/diam^2 and the fitted band constant
/// (their maximum). A bounded band across a growing family is the empirical
/// face of the diameter-squared mixing bound; the statistic grows on cycle
/// controls.
#[derive(Debug, Clone, Serialize)]
pub struct NoBcReport {
    pub members: Vec<NoBcMember>,
    pub stats: Vec<f64>,
    pub fitted: f64,
}

pub fn verify_nobc(members: &[NoBcMember]) -> Result<NoBcReport> {
    if members.len() < 3 {
        return Err(Error::TooFewMembers { need: 3, got: members.len() });
    }
    let stats: Vec<f64> = members
        .iter()
        .map(|m| {
            let d = m.diam as f64;
            m.tau as f64 * d.ln() / (d * d)
        })
        .collect();
    let fitted = stats.iter().cloned().fold(0.0, f64::max);
    Ok(NoBcReport { members: members.to_vec(), stats, fitted })
}
