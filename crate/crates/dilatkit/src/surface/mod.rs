//! Polygon-gluing presentations of affine and dilation surfaces.
//!
//! A surface is described by a list of simple counterclockwise polygons with
//! exact rational vertex coordinates together with a pairing of their edges.
//! The gluing map for a pairing is never supplied by the user: it is the
//! unique complex-affine map `z ↦ a·z + b` carrying the first edge, traversed
//! forward, onto the second edge traversed backward, so the quotient is an
//! oriented surface.
//!
//! Cone points are the vertex classes of the gluing. Around a vertex class
//! the total angle and the product of gluing derivatives determine the
//! complex order `m` of the point: the angle is `2π·(Re m + 1)` and the link
//! dilation factor is `e^{-2π·Im m}`.

pub mod corpus;
pub mod format;

use crate::geometry::{
    interior_angle_f64, validate_simple_ccw, winding_number, ccw_subdivide, GeometryError,
};
use crate::num::{rat_to_f64, CRat, Rat};
use num::{One, Signed};
use std::collections::{HashMap, VecDeque};
use std::fmt;
use thiserror::Error;

/// Computation mode for a surface: exact rational arithmetic (requires all
/// gluing derivatives to be positive real, the dilation case) or floating
/// point with tolerance, for flat and general affine surfaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Float,
}

pub const FLOAT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeRef {
    pub polygon: usize,
    pub edge: usize,
}

impl fmt::Display for EdgeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.polygon, self.edge)
    }
}

#[derive(Debug, Clone)]
pub struct SpecOptions {
    pub forget_removable: bool,
    pub mode: Mode,
}

impl Default for SpecOptions {
    fn default() -> Self {
        SpecOptions {
            forget_removable: false,
            mode: Mode::Exact,
        }
    }
}

/// User-level presentation: polygons, pairings, options.
#[derive(Debug, Clone)]
pub struct SurfaceSpec {
    pub polygons: Vec<Vec<CRat>>,
    pub pairings: Vec<(EdgeRef, EdgeRef)>,
    pub options: SpecOptions,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SurfaceError {
    #[error("polygon {polygon} is invalid: {source}")]
    NonSimplePolygon {
        polygon: usize,
        source: GeometryError,
    },
    #[error("edge {edge} of polygon {polygon} has zero length")]
    DegenerateEdge { polygon: usize, edge: usize },
    #[error("edge reference {edge} is out of range")]
    EdgeOutOfRange { edge: EdgeRef },
    #[error("edge {edge} appears in no pairing")]
    UnmatchedEdge { edge: EdgeRef },
    #[error("edge {edge} appears in more than one pairing")]
    EdgePairedTwice { edge: EdgeRef },
    #[error("pairing {pairing} glues edge {edge} to itself; the derived map cannot reverse boundary orientation at a fixed edge")]
    OrientationMismatch { pairing: usize, edge: EdgeRef },
    #[error("gluing graph is not connected")]
    NotConnected,
    #[error("pairing {pairing} has derivative {derivative} which is not positive real; exact mode only supports dilation gluings")]
    NotDilation { pairing: usize, derivative: String },
    #[error("surface has no polygons")]
    Empty,
    #[error("internal invariant breach: {0}")]
    InternalInvariant(String),
}

/// Derived gluing `z ↦ a·z + b` from the first edge's polygon chart to the
/// second edge's polygon chart.
#[derive(Debug, Clone, PartialEq)]
pub struct GluingMap {
    pub a: CRat,
    pub b: CRat,
}

impl GluingMap {
    pub fn apply(&self, z: &CRat) -> CRat {
        &(&self.a * z) + &self.b
    }

    pub fn inverse(&self) -> GluingMap {
        let a_inv = self.a.inv();
        let b = -(&a_inv * &self.b);
        GluingMap { a: a_inv, b }
    }
}

/// A corner of a polygon: the wedge at vertex `vertex`, between the incoming
/// edge `vertex-1` and the outgoing edge `vertex`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Corner {
    pub polygon: usize,
    pub vertex: usize,
}

/// Total cone angle divided by 2π.
#[derive(Debug, Clone, PartialEq)]
pub enum Angle {
    /// Exact integer number of turns (dilation surfaces).
    Turns(i64),
    /// Approximate number of turns (float mode).
    Approx(f64),
}

impl Angle {
    pub fn as_f64(&self) -> f64 {
        match self {
            Angle::Turns(k) => *k as f64,
            Angle::Approx(t) => *t,
        }
    }
}

/// Product of gluing derivatives around a vertex link; equals the character
/// value of the positively oriented puncture loop.
#[derive(Debug, Clone, PartialEq)]
pub enum LinkFactor {
    /// Exact positive rational (dilation surfaces).
    Exact(Rat),
    /// Complex value in float mode.
    Approx { re: f64, im: f64 },
}

impl LinkFactor {
    pub fn modulus_f64(&self) -> f64 {
        match self {
            LinkFactor::Exact(r) => rat_to_f64(r),
            LinkFactor::Approx { re, im } => re.hypot(*im),
        }
    }
}

#[derive(Debug, Clone)]
pub struct VertexClass {
    /// Corners in counterclockwise link order, rotated to start at the
    /// lexicographically smallest member.
    pub corners: Vec<Corner>,
    pub angle: Angle,
    pub link_factor: LinkFactor,
}

impl VertexClass {
    /// Angle 2π and link factor 1: an ordinary point that may be forgotten.
    pub fn removable(&self) -> bool {
        let angle_ok = match &self.angle {
            Angle::Turns(k) => *k == 1,
            Angle::Approx(t) => (t - 1.0).abs() < FLOAT_TOL,
        };
        let factor_ok = match &self.link_factor {
            LinkFactor::Exact(r) => r.is_one(),
            LinkFactor::Approx { re, im } => (re - 1.0).abs() < FLOAT_TOL && im.abs() < FLOAT_TOL,
        };
        angle_ok && factor_ok
    }
}

/// Cone-point invariants of a marked point.
#[derive(Debug, Clone)]
pub struct ConePoint {
    /// Index into `DilationSurface::vertex_classes`.
    pub class: usize,
    pub angle: Angle,
    /// ln of the link dilation factor modulus.
    pub log_factor: f64,
    /// Re(m) = angle_turns − 1.
    pub order_re: Angle,
    /// Im(m) = −log_factor / 2π.
    pub order_im: f64,
    /// Exact link factor when available.
    pub rho: Option<Rat>,
}

impl ConePoint {
    pub fn order_re_f64(&self) -> f64 {
        self.order_re.as_f64()
    }
}

/// A validated, glued surface with all derived data.
#[derive(Debug, Clone)]
pub struct DilationSurface {
    pub spec: SurfaceSpec,
    pub gluings: Vec<GluingMap>,
    /// Edge → (pairing index, true when the edge is the first of the pair).
    pub edge_pairing: HashMap<EdgeRef, (usize, bool)>,
    pub vertex_classes: Vec<VertexClass>,
    /// Corner → vertex class index.
    pub corner_class: HashMap<Corner, usize>,
    /// Vertex classes kept as marked points (all of them unless
    /// `forget_removable` dropped the trivial ones).
    pub marked: Vec<usize>,
    pub genus: usize,
    /// All gluing derivatives are positive real.
    pub derivative_dilation: bool,
}

impl DilationSurface {
    pub fn mode(&self) -> Mode {
        self.spec.options.mode
    }

    pub fn polygon(&self, p: usize) -> &[CRat] {
        &self.spec.polygons[p]
    }

    pub fn vertex(&self, p: usize, v: usize) -> &CRat {
        let poly = &self.spec.polygons[p];
        &poly[v % poly.len()]
    }

    pub fn edge_endpoints(&self, e: EdgeRef) -> (&CRat, &CRat) {
        let poly = &self.spec.polygons[e.polygon];
        (&poly[e.edge], &poly[(e.edge + 1) % poly.len()])
    }

    pub fn edge_vector(&self, e: EdgeRef) -> CRat {
        let (a, b) = self.edge_endpoints(e);
        b - a
    }

    /// The other edge of the pairing containing `e`.
    pub fn partner(&self, e: EdgeRef) -> EdgeRef {
        let (pi, first) = self.edge_pairing[&e];
        let (a, b) = self.spec.pairings[pi];
        if first {
            debug_assert_eq!(a, e);
            b
        } else {
            debug_assert_eq!(b, e);
            a
        }
    }

    /// Gluing map from the chart of `e`'s polygon to its partner's chart.
    pub fn crossing_map(&self, e: EdgeRef) -> GluingMap {
        let (pi, first) = self.edge_pairing[&e];
        if first {
            self.gluings[pi].clone()
        } else {
            self.gluings[pi].inverse()
        }
    }

    /// Derivative picked up when crossing `e` into its partner polygon.
    pub fn crossing_derivative(&self, e: EdgeRef) -> CRat {
        let (pi, first) = self.edge_pairing[&e];
        if first {
            self.gluings[pi].a.clone()
        } else {
            self.gluings[pi].a.inv()
        }
    }

    pub fn n_marked(&self) -> usize {
        self.marked.len()
    }

    /// Cone points of the marked vertex classes, in canonical order.
    pub fn cone_points(&self) -> Vec<ConePoint> {
        self.marked
            .iter()
            .map(|&ci| {
                let class = &self.vertex_classes[ci];
                let log_factor = class.link_factor.modulus_f64().ln();
                let order_re = match &class.angle {
                    Angle::Turns(k) => Angle::Turns(k - 1),
                    Angle::Approx(t) => Angle::Approx(t - 1.0),
                };
                let rho = match &class.link_factor {
                    LinkFactor::Exact(r) => Some(r.clone()),
                    LinkFactor::Approx { .. } => None,
                };
                ConePoint {
                    class: ci,
                    angle: class.angle.clone(),
                    log_factor,
                    order_re,
                    order_im: -log_factor / std::f64::consts::TAU,
                    rho,
                }
            })
            .collect()
    }
}

/// (V, E, F, genus) of the closed surface.
pub fn euler_data(s: &DilationSurface) -> (usize, usize, usize, usize) {
    (
        s.vertex_classes.len(),
        s.spec.pairings.len(),
        s.spec.polygons.len(),
        s.genus,
    )
}

/// Gauss–Bonnet check: Σ mᵢ = 2g − 2 over all marked points. Exact in exact
/// mode (integer real parts, rational link factors multiplying to 1), within
/// tolerance in float mode. A `false` return signals an internal error for
/// surfaces produced by `build_surface`.
pub fn check_gauss_bonnet(s: &DilationSurface) -> bool {
    let target = 2 * s.genus as i64 - 2;
    // Unmarked (forgotten) classes are removable so contribute order 0; sum
    // over every class to make the identity independent of marking.
    match s.mode() {
        Mode::Exact => {
            let mut re_sum = 0i64;
            let mut rho_prod = Rat::one();
            for class in &s.vertex_classes {
                match (&class.angle, &class.link_factor) {
                    (Angle::Turns(k), LinkFactor::Exact(r)) => {
                        re_sum += k - 1;
                        rho_prod *= r.clone();
                    }
                    _ => return false,
                }
            }
            re_sum == target && rho_prod.is_one()
        }
        Mode::Float => {
            let mut re_sum = 0.0;
            let mut log_sum = 0.0;
            for class in &s.vertex_classes {
                re_sum += class.angle.as_f64() - 1.0;
                log_sum += class.link_factor.modulus_f64().ln();
            }
            (re_sum - target as f64).abs() < FLOAT_TOL && log_sum.abs() < FLOAT_TOL
        }
    }
}

/// Collects every violated invariant of the raw spec (used by `validate`).
pub fn validate_spec(spec: &SurfaceSpec) -> Vec<SurfaceError> {
    let mut errors = Vec::new();

    if spec.polygons.is_empty() {
        return vec![SurfaceError::Empty];
    }

    for (pi, poly) in spec.polygons.iter().enumerate() {
        if let Err(e) = validate_simple_ccw(poly) {
            match e {
                GeometryError::ZeroLengthEdge(edge) => {
                    errors.push(SurfaceError::DegenerateEdge { polygon: pi, edge })
                }
                other => errors.push(SurfaceError::NonSimplePolygon {
                    polygon: pi,
                    source: other,
                }),
            }
        }
    }

    let edge_count_of = |e: EdgeRef| -> Option<usize> { spec.polygons.get(e.polygon).map(|p| p.len()) };
    let mut seen: HashMap<EdgeRef, usize> = HashMap::new();
    for (pi, &(a, b)) in spec.pairings.iter().enumerate() {
        for e in [a, b] {
            match edge_count_of(e) {
                Some(k) if e.edge < k => {
                    *seen.entry(e).or_insert(0) += 1;
                }
                _ => errors.push(SurfaceError::EdgeOutOfRange { edge: e }),
            }
        }
        if a == b {
            errors.push(SurfaceError::OrientationMismatch { pairing: pi, edge: a });
        }
    }
    for (pi, poly) in spec.polygons.iter().enumerate() {
        for edge in 0..poly.len() {
            let e = EdgeRef { polygon: pi, edge };
            match seen.get(&e) {
                None => errors.push(SurfaceError::UnmatchedEdge { edge: e }),
                Some(1) => {}
                Some(_) => errors.push(SurfaceError::EdgePairedTwice { edge: e }),
            }
        }
    }

    if !errors.is_empty() {
        return errors;
    }

    // Derived gluing maps exist once the combinatorics are sound; exact mode
    // additionally demands positive real derivatives.
    if spec.options.mode == Mode::Exact {
        for (pi, &(ea, eb)) in spec.pairings.iter().enumerate() {
            let a = derived_derivative(spec, ea, eb);
            if !a.is_positive_real() {
                errors.push(SurfaceError::NotDilation {
                    pairing: pi,
                    derivative: a.to_string(),
                });
            }
        }
    }

    // Connectivity of the gluing graph.
    if !spec.polygons.is_empty() {
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); spec.polygons.len()];
        for &(a, b) in &spec.pairings {
            adj[a.polygon].push(b.polygon);
            adj[b.polygon].push(a.polygon);
        }
        let mut visited = vec![false; spec.polygons.len()];
        let mut queue = VecDeque::from([0usize]);
        visited[0] = true;
        while let Some(p) = queue.pop_front() {
            for &q in &adj[p] {
                if !visited[q] {
                    visited[q] = true;
                    queue.push_back(q);
                }
            }
        }
        if visited.iter().any(|v| !v) {
            errors.push(SurfaceError::NotConnected);
        }
    }

    errors
}

fn derived_derivative(spec: &SurfaceSpec, ea: EdgeRef, eb: EdgeRef) -> CRat {
    let pa = &spec.polygons[ea.polygon];
    let pb = &spec.polygons[eb.polygon];
    let u = &pa[ea.edge];
    let v = &pa[(ea.edge + 1) % pa.len()];
    let x = &pb[eb.edge];
    let y = &pb[(eb.edge + 1) % pb.len()];
    // first edge forward onto second edge backward: u ↦ y, v ↦ x
    &(x - y) / &(v - u)
}

/// Builds and fully validates a surface from its spec.
pub fn build_surface(spec: SurfaceSpec) -> Result<DilationSurface, SurfaceError> {
    let errors = validate_spec(&spec);
    if let Some(first) = errors.into_iter().next() {
        return Err(first);
    }

    let mut gluings = Vec::with_capacity(spec.pairings.len());
    let mut edge_pairing = HashMap::new();
    let mut derivative_dilation = true;
    for (pi, &(ea, eb)) in spec.pairings.iter().enumerate() {
        let a = derived_derivative(&spec, ea, eb);
        if !a.is_positive_real() {
            derivative_dilation = false;
        }
        let pa = &spec.polygons[ea.polygon];
        let pb = &spec.polygons[eb.polygon];
        let u = &pa[ea.edge];
        let y = &pb[(eb.edge + 1) % pb.len()];
        let b = y - &(&a * u);
        // sanity: v ↦ x under the same map
        debug_assert_eq!(
            &(&a * &pa[(ea.edge + 1) % pa.len()]) + &b,
            pb[eb.edge].clone()
        );
        gluings.push(GluingMap { a, b });
        edge_pairing.insert(ea, (pi, true));
        edge_pairing.insert(eb, (pi, false));
    }

    // Corner cycles. The corner after (p, v) in the counterclockwise link
    // order is found by crossing the incoming edge (p, v−1); the identified
    // vertex is the start of the partner edge.
    let next_corner = |c: Corner| -> Corner {
        let k = spec.polygons[c.polygon].len();
        let e_in = EdgeRef {
            polygon: c.polygon,
            edge: (c.vertex + k - 1) % k,
        };
        let (pi, first) = edge_pairing[&e_in];
        let (a, b) = spec.pairings[pi];
        let partner = if first { b } else { a };
        Corner {
            polygon: partner.polygon,
            vertex: partner.edge,
        }
    };

    let mut corner_class: HashMap<Corner, usize> = HashMap::new();
    let mut cycles: Vec<Vec<Corner>> = Vec::new();
    let mut all_corners: Vec<Corner> = Vec::new();
    for (pi, poly) in spec.polygons.iter().enumerate() {
        for v in 0..poly.len() {
            all_corners.push(Corner {
                polygon: pi,
                vertex: v,
            });
        }
    }
    for &start in &all_corners {
        if corner_class.contains_key(&start) {
            continue;
        }
        let mut cycle = vec![start];
        let mut cur = next_corner(start);
        while cur != start {
            cycle.push(cur);
            cur = next_corner(cur);
        }
        // rotate to lexicographically smallest member
        let min_pos = cycle
            .iter()
            .enumerate()
            .min_by_key(|(_, c)| **c)
            .map(|(i, _)| i)
            .unwrap();
        cycle.rotate_left(min_pos);
        let id = cycles.len();
        for c in &cycle {
            corner_class.insert(*c, id);
        }
        cycles.push(cycle);
    }
    cycles.sort_by_key(|cy| cy[0]);
    let mut corner_class = HashMap::new();
    for (id, cy) in cycles.iter().enumerate() {
        for c in cy {
            corner_class.insert(*c, id);
        }
    }

    let vertex_count = cycles.len();
    let edge_count = spec.pairings.len();
    let face_count = spec.polygons.len();
    let chi = vertex_count as i64 - edge_count as i64 + face_count as i64;
    if chi > 2 || chi % 2 != 0 {
        return Err(SurfaceError::InternalInvariant(format!(
            "Euler characteristic {chi} is not that of a closed oriented surface"
        )));
    }
    let genus = ((2 - chi) / 2) as usize;

    // Per-class angle and link factor.
    let mode = spec.options.mode;
    let mut vertex_classes = Vec::with_capacity(vertex_count);
    for cycle in &cycles {
        let corner_dirs = |c: &Corner| -> (CRat, CRat) {
            let poly = &spec.polygons[c.polygon];
            let k = poly.len();
            let here = &poly[c.vertex];
            let d_out = &poly[(c.vertex + 1) % k] - here;
            let d_rev = &poly[(c.vertex + k - 1) % k] - here;
            (d_out, d_rev)
        };

        let mut factor = CRat::one();
        for c in cycle {
            let k = spec.polygons[c.polygon].len();
            let e_in = EdgeRef {
                polygon: c.polygon,
                edge: (c.vertex + k - 1) % k,
            };
            let (pi, first) = edge_pairing[&e_in];
            let a = &gluings[pi].a;
            factor = if first { &factor * a } else { &factor * &a.inv() };
        }

        let angle = if derivative_dilation && mode == Mode::Exact {
            // Walk the wedge directions around the link; crossing a gluing
            // preserves framing direction, so the winding of the combined
            // sequence is the exact number of turns.
            let mut dirs: Vec<CRat> = Vec::new();
            for c in cycle {
                let (d_out, d_rev) = corner_dirs(c);
                dirs.extend(ccw_subdivide(&d_out, &d_rev));
            }
            let turns = winding_number(&dirs).map_err(|e| {
                SurfaceError::InternalInvariant(format!("link winding failed: {e}"))
            })?;
            if turns < 1 {
                return Err(SurfaceError::InternalInvariant(format!(
                    "vertex link has non-positive angle {turns}·2π"
                )));
            }
            Angle::Turns(turns)
        } else {
            let mut total = 0.0;
            for c in cycle {
                let (d_out, d_rev) = corner_dirs(c);
                total += interior_angle_f64(&d_out, &d_rev);
            }
            Angle::Approx(total / std::f64::consts::TAU)
        };

        let link_factor = if derivative_dilation && mode == Mode::Exact {
            debug_assert!(factor.is_positive_real());
            LinkFactor::Exact(factor.re.clone())
        } else {
            let (re, im) = factor.to_f64();
            LinkFactor::Approx { re, im }
        };

        vertex_classes.push(VertexClass {
            corners: cycle.clone(),
            angle,
            link_factor,
        });
    }

    // Angle bookkeeping: Σ angles = Σ (k_p − 2)·π, exact in exact mode.
    if mode == Mode::Exact {
        let turn_sum: i64 = vertex_classes
            .iter()
            .map(|vc| match vc.angle {
                Angle::Turns(k) => k,
                Angle::Approx(_) => unreachable!(),
            })
            .sum();
        let corner_sum: i64 = spec.polygons.iter().map(|p| p.len() as i64 - 2).sum();
        if 2 * turn_sum != corner_sum {
            return Err(SurfaceError::InternalInvariant(format!(
                "angle bookkeeping failed: 2·Σturns = {} but Σ(k−2) = {}",
                2 * turn_sum,
                corner_sum
            )));
        }
    }

    let marked = vertex_classes
        .iter()
        .enumerate()
        .filter(|(_, vc)| !(spec.options.forget_removable && vc.removable()))
        .map(|(i, _)| i)
        .collect();

    let surface = DilationSurface {
        spec,
        gluings,
        edge_pairing,
        vertex_classes,
        corner_class,
        marked,
        genus,
        derivative_dilation,
    };

    if !check_gauss_bonnet(&surface) {
        return Err(SurfaceError::InternalInvariant(
            "Gauss-Bonnet check failed after construction".into(),
        ));
    }

    Ok(surface)
}
