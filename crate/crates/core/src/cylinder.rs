//! Bumpy cylinders and their cone-offs.
//!
//! A goodified family graph has a distance density whose unit-level samples
//! change slowly, so they can be read off as cycle widths. Stacking one cycle
//! per level and triangulating between consecutive cycles gives a discrete
//! warped product over [0, R]; coning the two C3 boundaries closes it into a
//! sphere triangulation whose maximum degree stays below a fixed cap no
//! matter how large the family member is.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{self, RootedGraph};
use crate::graph::{self, DiameterMode, Graph, SphereTriangulation, ValidationReport};
use crate::profile::{self, StepFunction};
use crate::spectral;

/// Degree cap the assembled triangulations are validated against. Worst case
/// is a width-3 level squeezed between two width-9 neighbours: 2 cycle edges
/// plus at most 4 cross edges per side.
pub const DEGREE_CAP: usize = 12;

/// Integer cycle widths w(0..=R), one per unit level of the cylinder.
///
/// Invariants, asserted by `new`: at least two levels, every width >= 3,
/// both end widths exactly 3, consecutive widths differ by at most 6. A good
/// density has at most two breakpoints of jump magnitude <= 3 between
/// consecutive unit samples, which is where the 6 comes from; it keeps the
/// level-to-level ratio within the cap 3 of `triangulated_annulus` because
/// w + 6 <= 3w once w >= 3.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WidthProfile {
    widths: Vec<usize>,
}

impl WidthProfile {
    pub fn new(widths: Vec<usize>) -> WidthProfile {
        assert!(widths.len() >= 2, "a cylinder needs at least two levels");
        assert!(widths.iter().all(|&w| w >= 3), "every width must be >= 3");
        assert_eq!(widths[0], 3, "bottom width must be 3");
        assert_eq!(*widths.last().unwrap(), 3, "top width must be 3");
        assert!(
            widths.windows(2).all(|p| p[0].abs_diff(p[1]) <= 6),
            "consecutive widths must differ by at most 6"
        );
        WidthProfile { widths }
    }

    /// Highest level; the profile covers levels 0..=R.
    pub fn r(&self) -> usize {
        self.widths.len() - 1
    }

    pub fn widths(&self) -> &[usize] {
        &self.widths
    }

    pub fn width(&self, t: usize) -> usize {
        self.widths[t]
    }

    pub fn max_width(&self) -> usize {
        *self.widths.iter().max().unwrap()
    }

    /// Total width, which is the vertex count of the cylinder it builds.
    pub fn total(&self) -> usize {
        self.widths.iter().sum()
    }
}

/// Reads unit-level cycle widths off a distance density.
///
/// R = floor(diam_p). Level t samples the density at t + 1/4, i.e. on the
/// open interval (t, t + 1/2); all breakpoints lie in (1/2)Z so the sample is
/// unambiguous. Samples are clamped to a minimum of 3 (shorter cycles are
/// degenerate) and both end widths are forced to 3 so the boundaries can be
/// coned. The input must come from a goodified rooted graph; the profile
/// invariants are asserted, not re-derived.
pub fn width_profile(rho: &StepFunction) -> Result<WidthProfile> {
    let r = (rho.support_end_doubled() / 2) as usize;
    if r < 2 {
        return Err(Error::ProfileTooShort(r));
    }
    let mut widths = Vec::with_capacity(r + 1);
    for t in 0..=r {
        let w = if t == 0 || t == r {
            3
        } else {
            (rho.value_right_of(2 * t as i64) as usize).max(3)
        };
        widths.push(w);
    }
    Ok(WidthProfile::new(widths))
}

/// One triangulated layer between a bottom cycle on `a` vertices and a top
/// cycle on `b` vertices. Vertex ids are layer-local: bottom 0..a, top
/// a..a+b. Only the cross edges and faces are listed; the two cycles belong
/// to the caller.
#[derive(Debug, Clone)]
pub struct AnnulusLayer {
    pub cross_edges: Vec<(usize, usize)>,
    pub faces: Vec<[usize; 3]>,
}

/// Triangulates the annulus between C_a and C_b with a + b cross edges.
///
/// Both cycles are walked in parallel, always advancing the side that lags
/// in fractional progress (ties go to the bottom), so cross edges interleave
/// as evenly as the rotation word of b/a allows: each bottom vertex receives
/// between floor(b/a) and ceil(b/a) + 1 of them. Every one of the a + b
/// faces is a triangle and the layer is planar by construction.
pub fn triangulated_annulus(a: usize, b: usize) -> Result<AnnulusLayer> {
    assert!(a >= 3 && b >= 3, "cycles shorter than C3 are degenerate");
    if a.max(b) > 3 * a.min(b) {
        return Err(Error::AnnulusRatio { a, b });
    }
    let mut cross_edges = Vec::with_capacity(a + b);
    let mut faces = Vec::with_capacity(a + b);
    cross_edges.push((0, a));
    let (mut i, mut j) = (0usize, 0usize);
    while i < a || j < b {
        // Progress comparison (i+1)/a <= (j+1)/b, cross-multiplied. Once a
        // side is exhausted the other one finishes the strip.
        let advance_bottom = i < a && (j >= b || (i + 1) * b <= (j + 1) * a);
        if advance_bottom {
            faces.push([i % a, (i + 1) % a, a + j % b]);
            i += 1;
            if (i, j) != (a, b) {
                cross_edges.push((i % a, a + j % b));
            }
        } else {
            faces.push([i % a, a + j % b, a + (j + 1) % b]);
            j += 1;
            if (i, j) != (a, b) {
                cross_edges.push((i % a, a + j % b));
            }
        }
    }
    debug_assert_eq!(cross_edges.len(), a + b);
    debug_assert_eq!(faces.len(), a + b);
    Ok(AnnulusLayer { cross_edges, faces })
}

/// A stack of cycles realizing a width profile. Carries the wall faces and
/// the discrete level projection so the cone-off and the validator can work
/// without re-deriving structure.
#[derive(Debug, Clone)]
pub struct BumpyCylinder {
    pub graph: Graph,
    /// level[v] = t for vertices of cycle t; the discrete projection onto
    /// [0, R]. 1-Lipschitz: every edge joins equal or adjacent levels.
    pub level: Vec<usize>,
    /// Bottom boundary cycle, level 0, in cyclic order.
    pub bottom: Vec<usize>,
    /// Top boundary cycle, level R, in cyclic order.
    pub top: Vec<usize>,
    /// Wall triangles. The two boundary cycles are left open.
    pub faces: Vec<[usize; 3]>,
}

/// Stacks cycles C_{w(0)}, ..., C_{w(R)} and joins consecutive ones with
/// `triangulated_annulus` layers. Vertices are numbered level by level, so
/// level t occupies a contiguous id range.
pub fn build_bumpy_cylinder(w: &WidthProfile) -> BumpyCylinder {
    let r = w.r();
    let mut offsets = Vec::with_capacity(r + 1);
    let mut total = 0usize;
    for t in 0..=r {
        offsets.push(total);
        total += w.width(t);
    }

    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut level = vec![0usize; total];
    for (t, &off) in offsets.iter().enumerate() {
        let wt = w.width(t);
        for k in 0..wt {
            level[off + k] = t;
            edges.push((off + k, off + (k + 1) % wt));
        }
    }

    let mut faces = Vec::new();
    for t in 0..r {
        let (a, b) = (w.width(t), w.width(t + 1));
        let layer = triangulated_annulus(a, b)
            .expect("profile invariants keep the level ratio within 3");
        let map = |x: usize| {
            if x < a {
                offsets[t] + x
            } else {
                offsets[t + 1] + (x - a)
            }
        };
        for &(x, y) in &layer.cross_edges {
            edges.push((map(x), map(y)));
        }
        for &[x, y, z] in &layer.faces {
            faces.push([map(x), map(y), map(z)]);
        }
    }

    let graph = Graph::from_edge_list_with_vertices(total, &edges)
        .expect("stacked cycles and cross edges are well formed");
    let bottom = (offsets[0]..offsets[0] + w.width(0)).collect();
    let top = (offsets[r]..offsets[r] + w.width(r)).collect();
    BumpyCylinder { graph, level, bottom, top, faces }
}

/// Cones both boundary cycles with one apex each, closing the cylinder into
/// a sphere triangulation. The apexes take the two highest vertex ids: the
/// bottom apex is V, the top apex V + 1, where V is the cylinder's vertex
/// count. Both apexes have degree 3.
pub fn cone_off(cyl: &BumpyCylinder) -> Result<SphereTriangulation> {
    for boundary in [&cyl.bottom, &cyl.top] {
        if boundary.len() != 3 {
            return Err(Error::BoundaryNotTriangle(boundary.len()));
        }
    }
    let v = cyl.graph.vertex_count();
    let mut edges: Vec<(usize, usize)> = cyl.graph.canonical_edges().collect();
    let mut faces = cyl.faces.clone();
    for (apex, boundary) in [(v, &cyl.bottom), (v + 1, &cyl.top)] {
        for k in 0..3 {
            edges.push((boundary[k], apex));
            faces.push([boundary[k], boundary[(k + 1) % 3], apex]);
        }
    }
    let graph = Graph::from_edge_list_with_vertices(v + 2, &edges)?;
    Ok(SphereTriangulation { graph, faces })
}

/// Summary record for one family member. Field names are the on-disk report
/// contract.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PipelineReport {
    pub n: usize,
    pub alpha: u32,
    pub seed: u64,
    pub vol: usize,
    pub diam: usize,
    pub lambda1: f64,
    #[serde(rename = "lambda1_Y")]
    pub lambda1_y: f64,
    pub ratio_thm2: f64,
    pub degree_max: usize,
    pub validator: ValidationReport,
}

/// Everything the family pipeline produced for one member, stage by stage.
#[derive(Debug, Clone)]
pub struct Pipeline {
    pub y: RootedGraph,
    pub rho: StepFunction,
    pub width: WidthProfile,
    pub cylinder: BumpyCylinder,
    pub triangulation: SphereTriangulation,
    pub report: PipelineReport,
}

/// Runs the full pipeline for one family member: certified expander,
/// subdivision, goodify, width profile, bumpy cylinder, cone-off. The report
/// carries both spectral gaps, the exact diameter and the scaling ratio
/// lambda1 * (diam / ln diam)^2.
pub fn build_xn(n: usize, alpha: u32, eps: f64, seed: u64) -> Result<Pipeline> {
    let y = family::build_y(n, alpha, eps, seed)?;
    let rho = profile::distance_density(&y.graph, y.root)?;
    let width = width_profile(&rho)?;
    let cylinder = build_bumpy_cylinder(&width);
    let triangulation = cone_off(&cylinder)?;

    let lambda1_y = spectral::lambda1_auto(&y.graph, spectral::DEFAULT_TOL, seed)?.lambda1;
    let lambda1 =
        spectral::lambda1_auto(&triangulation.graph, spectral::DEFAULT_TOL, seed)?.lambda1;
    let diam = triangulation.graph.diameter(DiameterMode::Exact)?.value;
    let validator = graph::validate_sphere_triangulation(&triangulation, DEGREE_CAP);

    let d = diam as f64;
    let report = PipelineReport {
        n,
        alpha,
        seed,
        vol: triangulation.graph.vol(),
        diam,
        lambda1,
        lambda1_y,
        ratio_thm2: lambda1 * (d / d.ln()).powi(2),
        degree_max: validator.max_degree,
        validator,
    };
    Ok(Pipeline { y, rho, width, cylinder, triangulation, report })
}
