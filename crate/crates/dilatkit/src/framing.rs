//! Polygonal curves, exact turning numbers, and framings.
//!
//! A dilation surface carries a horizontal direction field: gluing
//! derivatives are positive real, so "horizontal" agrees across charts. The
//! turning number of a closed polygonal curve is the degree of its tangent
//! direction against that field, computed exactly by counting signed
//! crossings of the reference direction as the tangent interpolates the
//! shorter arc between consecutive segment directions — no angle sums.
//!
//! A framing is recorded by the turning numbers of explicit representative
//! curves of a symplectic homology basis together with the boundary turning
//! numbers r_i = Re(m_i) + 1 of the marked points. Framings with fixed r
//! form a torsor under integer cocycles; the Arf invariant
//! Σ (τ(aᵢ)+1)(τ(bᵢ)+1) mod 2 is defined when all r_i are odd.

use crate::geometry::{
    ccw_subdivide, locate_point, point_on_closed_segment, proper_crossing_sign, winding_number,
    GeometryError, PointLocation,
};
use crate::holonomy::{CombLoop, HomologyBasis, Period, PeriodVector};
use crate::num::{rat, CRat, Rat};
use crate::surface::{Angle, DilationSurface, EdgeRef, Mode, FLOAT_TOL};
use num::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FramingError {
    #[error("path endpoint lies on a vertex")]
    PathThroughVertex,
    #[error("segment {0} leaves its polygon")]
    SegmentLeavesPolygon(usize),
    #[error("consecutive segments do not match across the gluing at segment {0}")]
    DisconnectedAt(usize),
    #[error("cusp at a path corner (direction reverses)")]
    CuspAtCorner,
    #[error("path is not closed")]
    NotClosed,
    #[error("surface is not a dilation surface; exact turning undefined")]
    NotDilation,
    #[error("float-mode turning did not converge to an integer: {0}")]
    NonIntegralTurning(f64),
    #[error("representative path is not in the homology class of its basis loop (index {0})")]
    RepresentativeClassMismatch(usize),
    #[error("cocycle does not vanish on puncture loop {0}")]
    CocycleMovesBoundary(usize),
    #[error("period has imaginary part outside 2πZ on loop {0}")]
    NonIntegralPeriods(usize),
    #[error("Arf invariant undefined: r contains an even entry")]
    ArfUndefined,
    #[error("framing shapes disagree")]
    ShapeMismatch,
    #[error("could not construct a canonical representative: {0}")]
    NoCanonicalPath(String),
}

/// One straight chord inside a polygon.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSegment {
    pub polygon: usize,
    pub start: CRat,
    pub end: CRat,
}

impl PathSegment {
    pub fn direction(&self) -> CRat {
        &self.end - &self.start
    }
}

/// Piecewise straight curve on the surface. Consecutive segments either
/// share an interior corner in one polygon or match across a gluing.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvePath {
    pub segments: Vec<PathSegment>,
    pub closed: bool,
}

/// How one segment hands over to the next.
#[derive(Debug, Clone, PartialEq)]
enum Junction {
    /// Same polygon, shared corner point.
    Corner,
    /// Leaves through this edge into the partner polygon.
    Gluing(EdgeRef),
}

fn edge_of_boundary_point(
    s: &DilationSurface,
    polygon: usize,
    p: &CRat,
) -> Result<Option<EdgeRef>, FramingError> {
    let poly = s.polygon(polygon);
    let k = poly.len();
    for v in poly {
        if v == p {
            return Err(FramingError::PathThroughVertex);
        }
    }
    for e in 0..k {
        if point_on_closed_segment(p, &poly[e], &poly[(e + 1) % k]) {
            return Ok(Some(EdgeRef { polygon, edge: e }));
        }
    }
    Ok(None)
}

fn check_segment_inside(
    s: &DilationSurface,
    seg: &PathSegment,
    index: usize,
) -> Result<(), FramingError> {
    let poly = s.polygon(seg.polygon);
    let k = poly.len();
    if seg.start == seg.end {
        return Err(FramingError::SegmentLeavesPolygon(index));
    }
    for p in [&seg.start, &seg.end] {
        if locate_point(p, poly) == PointLocation::Outside {
            return Err(FramingError::SegmentLeavesPolygon(index));
        }
    }
    // interior vertices on the open segment are forbidden
    for v in poly {
        if point_on_closed_segment(v, &seg.start, &seg.end) && v != &seg.start && v != &seg.end {
            return Err(FramingError::PathThroughVertex);
        }
    }
    for e in 0..k {
        if proper_crossing_sign(&seg.start, &seg.end, &poly[e], &poly[(e + 1) % k]).is_some() {
            return Err(FramingError::SegmentLeavesPolygon(index));
        }
    }
    let two = rat(2, 1);
    let mid = CRat::new(
        (&seg.start.re + &seg.end.re) / &two,
        (&seg.start.im + &seg.end.im) / &two,
    );
    if locate_point(&mid, poly) != PointLocation::Inside {
        return Err(FramingError::SegmentLeavesPolygon(index));
    }
    Ok(())
}

/// Validates a path and resolves how consecutive segments connect.
fn junctions(s: &DilationSurface, c: &CurvePath) -> Result<Vec<Junction>, FramingError> {
    let n = c.segments.len();
    if n == 0 {
        return Err(FramingError::NotClosed);
    }
    for (i, seg) in c.segments.iter().enumerate() {
        check_segment_inside(s, seg, i)?;
    }
    let last = if c.closed { n } else { n - 1 };
    let mut out = Vec::with_capacity(last);
    for i in 0..last {
        let cur = &c.segments[i];
        let next = &c.segments[(i + 1) % n];
        if cur.polygon == next.polygon && cur.end == next.start {
            out.push(Junction::Corner);
            continue;
        }
        // must exit through an edge whose gluing carries end → next.start
        let Some(edge) = edge_of_boundary_point(s, cur.polygon, &cur.end)? else {
            return Err(FramingError::DisconnectedAt(i));
        };
        let partner = s.partner(edge);
        if partner.polygon != next.polygon {
            return Err(FramingError::DisconnectedAt(i));
        }
        let map = s.crossing_map(edge);
        if map.apply(&cur.end) != next.start {
            return Err(FramingError::DisconnectedAt(i));
        }
        out.push(Junction::Gluing(edge));
    }
    Ok(out)
}

/// Developed data of a path: per segment, its direction in the chart of its
/// polygon and the sign of the exterior turn arriving into the segment
/// (0 for the first segment of an open path).
pub fn develop_path(
    s: &DilationSurface,
    c: &CurvePath,
) -> Result<Vec<(CRat, i8)>, FramingError> {
    if !s.derivative_dilation {
        return Err(FramingError::NotDilation);
    }
    let js = junctions(s, c)?;
    let n = c.segments.len();
    let mut out = Vec::with_capacity(n);
    for (i, seg) in c.segments.iter().enumerate() {
        let d = seg.direction();
        let turn = if i == 0 && !c.closed {
            0i8
        } else {
            let prev = &c.segments[(i + n - 1) % n];
            if i == 0 && js.len() < n {
                0
            } else {
                let dp = prev.direction();
                // crossing a dilation gluing preserves direction, so the turn
                // is read off the raw chart directions
                let cr = dp.cross(&d);
                let dt = dp.dot(&d);
                if cr.is_zero() && dt.is_negative() {
                    return Err(FramingError::CuspAtCorner);
                }
                if cr.is_positive() {
                    1
                } else if cr.is_negative() {
                    -1
                } else {
                    0
                }
            }
        };
        out.push((d, turn));
    }
    Ok(out)
}

/// Exact turning number of a closed path on a dilation surface; float
/// fallback with tolerance for unit-modulus (flat) gluings.
#[allow(clippy::needless_range_loop)]
pub fn turning_number(s: &DilationSurface, c: &CurvePath) -> Result<i64, FramingError> {
    if !c.closed {
        return Err(FramingError::NotClosed);
    }
    let js = junctions(s, c)?;
    if s.derivative_dilation && s.mode() == Mode::Exact {
        let dirs: Vec<CRat> = c.segments.iter().map(|s| s.direction()).collect();
        return winding_number(&dirs).map_err(|e| match e {
            GeometryError::Cusp => FramingError::CuspAtCorner,
            _ => FramingError::NotDilation,
        });
    }
    // float mode: fold the rotation of each crossing into the tracking
    let n = c.segments.len();
    let mut total = 0.0f64;
    for i in 0..n {
        let cur = c.segments[i].direction();
        let next = c.segments[(i + 1) % n].direction();
        let transported = match &js[i] {
            Junction::Corner => cur.clone(),
            Junction::Gluing(e) => &s.crossing_derivative(*e) * &cur,
        };
        let a0 = transported.arg_f64();
        let a1 = next.arg_f64();
        let mut d = a1 - a0;
        while d > std::f64::consts::PI {
            d -= std::f64::consts::TAU;
        }
        while d <= -std::f64::consts::PI {
            d += std::f64::consts::TAU;
        }
        total += d;
    }
    let turns = total / std::f64::consts::TAU;
    let rounded = turns.round();
    if (turns - rounded).abs() > FLOAT_TOL * (1.0 + n as f64) {
        return Err(FramingError::NonIntegralTurning(turns));
    }
    Ok(rounded as i64)
}

/// Signed crossing counts of a path per pairing: its class in H₁(X ∖ P).
pub fn path_class_vector(s: &DilationSurface, c: &CurvePath) -> Result<Vec<i64>, FramingError> {
    let js = junctions(s, c)?;
    let mut v = vec![0i64; s.spec.pairings.len()];
    for j in &js {
        if let Junction::Gluing(e) = j {
            let (pi, first) = s.edge_pairing[e];
            v[pi] += if first { 1 } else { -1 };
        }
    }
    Ok(v)
}

/// Boundary turning numbers r_i = Re(m_i) + 1 of the marked points.
/// Exact integers; requires a dilation surface.
pub fn boundary_turning(s: &DilationSurface) -> Result<Vec<i64>, FramingError> {
    s.cone_points()
        .iter()
        .map(|cp| match cp.angle {
            Angle::Turns(k) => Ok(k),
            Angle::Approx(_) => Err(FramingError::NotDilation),
        })
        .collect()
}

/// Turning numbers on a symplectic basis plus boundary turning numbers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Framing {
    /// (τ(a₁), τ(b₁), …, τ(a_g), τ(b_g))
    pub tau: Vec<i64>,
    /// (r₁, …, r_n)
    pub r: Vec<i64>,
    pub genus: usize,
}

impl Framing {
    pub fn n(&self) -> usize {
        self.r.len()
    }

    pub fn same_shape(&self, other: &Framing) -> bool {
        self.genus == other.genus && self.r == other.r
    }
}

/// Builds the framing from explicit representatives of the symplectic basis
/// classes. Each representative must be closed and homologous in X ∖ P to
/// its basis loop, which is checked through crossing cocycles.
pub fn framing_vector(
    s: &DilationSurface,
    basis: &HomologyBasis,
    representatives: &[CurvePath],
) -> Result<Framing, FramingError> {
    let g = basis.genus;
    if representatives.len() != 2 * g {
        return Err(FramingError::ShapeMismatch);
    }
    let np = s.spec.pairings.len();
    let mut tau = Vec::with_capacity(2 * g);
    for (i, rep) in representatives.iter().enumerate() {
        let want = basis.loops[i].class_vector(np);
        let got = path_class_vector(s, rep)?;
        if want != got {
            return Err(FramingError::RepresentativeClassMismatch(i));
        }
        tau.push(turning_number(s, rep)?);
    }
    let r = boundary_turning(s)?;
    let sum: i64 = r.iter().sum();
    let expected = 2 * s.genus as i64 + r.len() as i64 - 2;
    debug_assert_eq!(sum, expected, "Poincaré–Hopf failed");
    Ok(Framing {
        tau,
        r,
        genus: g,
    })
}

/// Action of an integral cocycle, given by its values on the basis loops
/// (symplectic values first, then the n−1 puncture-loop values, which must
/// vanish).
pub fn integral_action(f: &Framing, cocycle: &[i64]) -> Result<Framing, FramingError> {
    let g = f.genus;
    if cocycle.len() < 2 * g {
        return Err(FramingError::ShapeMismatch);
    }
    for (j, &v) in cocycle[2 * g..].iter().enumerate() {
        if v != 0 {
            return Err(FramingError::CocycleMovesBoundary(j));
        }
    }
    let tau = f
        .tau
        .iter()
        .zip(&cocycle[..2 * g])
        .map(|(t, c)| t + c)
        .collect();
    Ok(Framing {
        tau,
        r: f.r.clone(),
        genus: g,
    })
}

/// The unique cocycle carrying `from` to `to`; framings with equal r form a
/// free transitive orbit of the integral action.
pub fn framing_difference(to: &Framing, from: &Framing) -> Result<Vec<i64>, FramingError> {
    if !to.same_shape(from) {
        return Err(FramingError::ShapeMismatch);
    }
    Ok(to
        .tau
        .iter()
        .zip(&from.tau)
        .map(|(a, b)| a - b)
        .collect())
}

/// Turning offsets of a dilation-preserving period vector: the map
/// loop ↦ Im(period)/2π. Every imaginary part must lie in 2πℤ.
pub fn twist_framing(alpha: &PeriodVector) -> Result<Vec<i64>, FramingError> {
    let mut offsets = Vec::with_capacity(alpha.periods.len());
    for (i, p) in alpha.periods.iter().enumerate() {
        let turns = match p {
            Period::Exact { turns, .. } => {
                if turns.is_integer() {
                    num::ToPrimitive::to_i64(&turns.to_integer())
                } else {
                    None
                }
            }
            Period::Approx { im, .. } => {
                let t = im / std::f64::consts::TAU;
                if (t - t.round()).abs() < FLOAT_TOL {
                    Some(t.round() as i64)
                } else {
                    None
                }
            }
        };
        match turns {
            Some(t) => offsets.push(t),
            None => return Err(FramingError::NonIntegralPeriods(i)),
        }
    }
    Ok(offsets)
}

/// Applies a dilation-preserving twist to a framing: τ gains the offsets on
/// the symplectic loops; r is unchanged.
pub fn apply_twist(f: &Framing, offsets: &[i64]) -> Result<Framing, FramingError> {
    if offsets.len() < 2 * f.genus {
        return Err(FramingError::ShapeMismatch);
    }
    Ok(Framing {
        tau: f
            .tau
            .iter()
            .zip(offsets)
            .map(|(t, o)| t + o)
            .collect(),
        r: f.r.clone(),
        genus: f.genus,
    })
}

/// Turning number of the positively smoothed resolution of two simple
/// closed curves that meet once transversally.
pub fn concat_turning(tau_a: i64, tau_b: i64) -> i64 {
    tau_a + tau_b + 1
}

/// Arf invariant Σ (τ(aᵢ)+1)(τ(bᵢ)+1) mod 2; defined when all r_i are odd.
pub fn arf(f: &Framing) -> Result<u8, FramingError> {
    if f.r.iter().any(|r| r % 2 == 0) {
        return Err(FramingError::ArfUndefined);
    }
    let mut acc = 0i64;
    for i in 0..f.genus {
        acc += (f.tau[2 * i] + 1) * (f.tau[2 * i + 1] + 1);
    }
    Ok((acc.rem_euclid(2)) as u8)
}

// ---------------------------------------------------------------------------
// Canonical curves
// ---------------------------------------------------------------------------

/// Canonical small polygonal loop around a marked point, positively
/// oriented. Chords run between points at fraction δ along the wedge edges,
/// with exact 90° intermediate directions subdividing wide wedges; δ is
/// halved until the loop fits inside its polygons.
pub fn puncture_curve(s: &DilationSurface, class: usize) -> Result<CurvePath, FramingError> {
    let mut delta = rat(1, 3);
    for _ in 0..32 {
        match try_puncture_curve(s, class, &delta) {
            Ok(c) => return Ok(c),
            Err(FramingError::SegmentLeavesPolygon(_)) | Err(FramingError::PathThroughVertex) => {
                delta /= rat(2, 1);
            }
            Err(e) => return Err(e),
        }
    }
    Err(FramingError::NoCanonicalPath(format!(
        "puncture loop around class {class} did not fit"
    )))
}

fn try_puncture_curve(
    s: &DilationSurface,
    class: usize,
    delta: &Rat,
) -> Result<CurvePath, FramingError> {
    let cycle = &s.vertex_classes[class].corners;
    let mut segments = Vec::new();
    for c in cycle {
        let poly = s.polygon(c.polygon);
        let k = poly.len();
        let here = &poly[c.vertex];
        let d_out = &poly[(c.vertex + 1) % k] - here;
        let d_rev = &poly[(c.vertex + k - 1) % k] - here;
        let chain = ccw_subdivide(&d_out, &d_rev);
        let pts: Vec<CRat> = chain
            .iter()
            .map(|u| here + &u.scale(delta))
            .collect();
        for w in pts.windows(2) {
            segments.push(PathSegment {
                polygon: c.polygon,
                start: w[0].clone(),
                end: w[1].clone(),
            });
        }
    }
    let path = CurvePath {
        segments,
        closed: true,
    };
    junctions(s, &path)?;
    Ok(path)
}

/// Geometric realization of a combinatorial loop: chords between distinct
/// slot points on the crossed edges, routed through interior waypoints when
/// a straight chord leaves the polygon or a passage enters and leaves
/// through one edge.
pub fn realize_loop(s: &DilationSurface, l: &CombLoop) -> Result<CurvePath, FramingError> {
    for (attempt, spread) in [(0, 1i64), (1, 3), (2, 7), (3, 13)] {
        match try_realize_loop(s, l, spread) {
            Ok(c) => return Ok(c),
            Err(FramingError::PathThroughVertex) if attempt < 3 => continue,
            Err(e) => return Err(e),
        }
    }
    unreachable!()
}

/// Straight chord between two points lies inside the polygon (endpoints may
/// sit on the boundary, the interior may not).
fn chord_inside(s: &DilationSurface, polygon: usize, a: &CRat, b: &CRat) -> bool {
    if a == b {
        return false;
    }
    let seg = PathSegment {
        polygon,
        start: a.clone(),
        end: b.clone(),
    };
    check_segment_inside(s, &seg, 0).is_ok()
}

/// Interior waypoints routing `from` to `to` within one polygon; empty when
/// the straight chord already works. Candidate waypoints are inward insets
/// of the edge midpoints and the hop sequence is a breadth-first path in
/// their visibility graph, so non-convex polygons (and passages entering
/// and leaving through one edge) are handled.
fn route_passage(
    s: &DilationSurface,
    polygon: usize,
    from: &CRat,
    to: &CRat,
    salt: usize,
) -> Result<Vec<CRat>, FramingError> {
    if chord_inside(s, polygon, from, to) {
        return Ok(Vec::new());
    }
    let poly = s.polygon(polygon);
    let k = poly.len();
    for shrink in 0..10u32 {
        let delta = Rat::new(1.into(), ((salt as i64 + 2) * (1i64 << shrink) * 4).into());
        let mut nodes: Vec<CRat> = vec![from.clone(), to.clone()];
        for e in 0..k {
            let u = &poly[e];
            let w = &poly[(e + 1) % k];
            let two = rat(2, 1);
            let mid = CRat::new((&u.re + &w.re) / &two, (&u.im + &w.im) / &two);
            let inward = (w - u).rot90();
            let cand = &mid + &inward.scale(&delta);
            if crate::geometry::locate_point(&cand, poly) == PointLocation::Inside {
                nodes.push(cand);
            }
        }
        // corner insets along ±(d_out + d_rev) see past convex and reflex
        // vertices alike
        for v in 0..k {
            let here = &poly[v];
            let d_out = &poly[(v + 1) % k] - here;
            let d_rev = &poly[(v + k - 1) % k] - here;
            let bis = &d_out + &d_rev;
            if bis.is_zero() {
                continue;
            }
            for dir in [bis.scale(&delta), (-bis.clone()).scale(&delta)] {
                let cand = here + &dir;
                if crate::geometry::locate_point(&cand, poly) == PointLocation::Inside {
                    nodes.push(cand);
                }
            }
        }
        let n = nodes.len();
        let mut visible = vec![vec![false; n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                if chord_inside(s, polygon, &nodes[i], &nodes[j]) {
                    visible[i][j] = true;
                    visible[j][i] = true;
                }
            }
        }
        // breadth-first hop path from node 0 to node 1
        let mut prev = vec![usize::MAX; n];
        let mut queue = std::collections::VecDeque::from([0usize]);
        prev[0] = 0;
        while let Some(x) = queue.pop_front() {
            for y in 0..n {
                if visible[x][y] && prev[y] == usize::MAX {
                    prev[y] = x;
                    queue.push_back(y);
                }
            }
        }
        if prev[1] == usize::MAX {
            continue;
        }
        let mut chain = vec![1usize];
        while *chain.last().unwrap() != 0 {
            chain.push(prev[*chain.last().unwrap()]);
        }
        chain.reverse();
        let route: Vec<CRat> = chain[1..chain.len() - 1]
            .iter()
            .map(|&i| nodes[i].clone())
            .collect();
        // reject cusps at the route corners; a different inset resolves them
        let mut pts = vec![from.clone()];
        pts.extend(route.iter().cloned());
        pts.push(to.clone());
        let cusp = pts.windows(3).any(|w| {
            let d1 = &w[1] - &w[0];
            let d2 = &w[2] - &w[1];
            d1.cross(&d2).is_zero() && d1.dot(&d2).is_negative()
        });
        if !cusp {
            return Ok(route);
        }
    }
    Err(FramingError::NoCanonicalPath(format!(
        "no interior route between boundary points of polygon {polygon}"
    )))
}

fn try_realize_loop(
    s: &DilationSurface,
    l: &CombLoop,
    spread: i64,
) -> Result<CurvePath, FramingError> {
    let m = l.crossings.len();
    if m == 0 {
        return Err(FramingError::NoCanonicalPath("empty loop".into()));
    }
    // distinct parameters per pairing, on the pairing's first edge
    let mut count: std::collections::HashMap<usize, i64> = std::collections::HashMap::new();
    for c in &l.crossings {
        *count.entry(c.pairing).or_insert(0) += 1;
    }
    let mut rank: std::collections::HashMap<usize, i64> = std::collections::HashMap::new();
    let mut params: Vec<Rat> = Vec::with_capacity(m);
    for c in &l.crossings {
        let r = rank.entry(c.pairing).or_insert(0);
        let k = count[&c.pairing];
        // parameter (spread·r + 1)/(spread·(k−1) + 2) stays in (0, 1)
        params.push(Rat::new(
            (spread * *r + 1).into(),
            (spread * (k - 1) + 2).into(),
        ));
        *r += 1;
    }

    let point_on = |e: EdgeRef, t: &Rat| -> CRat {
        let (u, w) = s.edge_endpoints(e);
        u + &(w - u).scale(t)
    };

    // crossing i: departure point (in the polygon being left) and landing
    // point (in the polygon entered)
    let depart_land = |i: usize| -> (usize, CRat, usize, CRat) {
        let c = l.crossings[i];
        let (ea, eb) = s.spec.pairings[c.pairing];
        let t = &params[i];
        if c.forward {
            (
                ea.polygon,
                point_on(ea, t),
                eb.polygon,
                point_on(eb, &(Rat::one() - t)),
            )
        } else {
            (
                eb.polygon,
                point_on(eb, &(Rat::one() - t)),
                ea.polygon,
                point_on(ea, t),
            )
        }
    };

    let mut segments = Vec::new();
    for i in 0..m {
        let prev = (i + m - 1) % m;
        let (_, _, land_poly, land_pt) = depart_land(prev);
        let (dep_poly, dep_pt, _, _) = depart_land(i);
        if land_poly != dep_poly {
            return Err(FramingError::NoCanonicalPath(
                "loop crossings are not consecutive".into(),
            ));
        }
        let waypoints = route_passage(s, land_poly, &land_pt, &dep_pt, i)?;
        let mut cursor = land_pt;
        for w in waypoints {
            segments.push(PathSegment {
                polygon: land_poly,
                start: cursor,
                end: w.clone(),
            });
            cursor = w;
        }
        segments.push(PathSegment {
            polygon: land_poly,
            start: cursor,
            end: dep_pt,
        });
    }
    let path = CurvePath {
        segments,
        closed: true,
    };
    junctions(s, &path)?;
    Ok(path)
}

/// Inserts |k| full tangent loops into the first sufficiently long segment:
/// counterclockwise diamonds for k > 0, clockwise for k < 0. The turning
/// number changes by exactly k; the homology class is unchanged.
pub fn insert_kinks(
    s: &DilationSurface,
    path: &CurvePath,
    k: i64,
) -> Result<CurvePath, FramingError> {
    if k == 0 {
        return Ok(path.clone());
    }
    let mut eps = rat(1, 64);
    'shrink: for _ in 0..40 {
        let count = k.unsigned_abs() as i64;
        let seg = &path.segments[0];
        let d = seg.direction();
        let mut pieces: Vec<PathSegment> = Vec::new();
        let mut cursor = seg.start.clone();
        for j in 0..count {
            let frac = Rat::new((j + 1).into(), (count + 1).into());
            let center = &seg.start + &d.scale(&frac);
            let step = d.scale(&eps);
            let perp = if k > 0 { step.rot90() } else { -step.rot90() };
            let p1 = &center + &step;
            let p2 = &(&center + &step) + &perp;
            let p3 = &center + &perp;
            // run up to the diamond, then around it
            for (a, b) in [
                (cursor.clone(), center.clone()),
                (center.clone(), p1.clone()),
                (p1, p2.clone()),
                (p2, p3.clone()),
                (p3, center.clone()),
            ] {
                pieces.push(PathSegment {
                    polygon: seg.polygon,
                    start: a,
                    end: b,
                });
            }
            cursor = center;
        }
        pieces.push(PathSegment {
            polygon: seg.polygon,
            start: cursor,
            end: seg.end.clone(),
        });
        let mut segments = pieces;
        segments.extend(path.segments[1..].iter().cloned());
        let new_path = CurvePath {
            segments,
            closed: path.closed,
        };
        match junctions(s, &new_path) {
            Ok(_) => return Ok(new_path),
            Err(FramingError::SegmentLeavesPolygon(_)) | Err(FramingError::PathThroughVertex) => {
                eps /= rat(2, 1);
                continue 'shrink;
            }
            Err(e) => return Err(e),
        }
    }
    Err(FramingError::NoCanonicalPath("kink did not fit".into()))
}

/// Canonical framing of a dilation surface: realizes the symplectic basis
/// loops geometrically and measures their turning numbers.
pub fn canonical_framing(
    s: &DilationSurface,
    basis: &HomologyBasis,
) -> Result<(Vec<CurvePath>, Framing), FramingError> {
    let reps: Vec<CurvePath> = basis
        .symplectic()
        .iter()
        .map(|l| realize_loop(s, l))
        .collect::<Result<_, _>>()?;
    let f = framing_vector(s, basis, &reps)?;
    Ok((reps, f))
}

/// Subdivides every segment of a path at its midpoint. Turning numbers are
/// invariant under this refinement.
pub fn subdivide_path(path: &CurvePath) -> CurvePath {
    let two = rat(2, 1);
    let mut segments = Vec::with_capacity(path.segments.len() * 2);
    for seg in &path.segments {
        let mid = CRat::new(
            (&seg.start.re + &seg.end.re) / &two,
            (&seg.start.im + &seg.end.im) / &two,
        );
        segments.push(PathSegment {
            polygon: seg.polygon,
            start: seg.start.clone(),
            end: mid.clone(),
        });
        segments.push(PathSegment {
            polygon: seg.polygon,
            start: mid,
            end: seg.end.clone(),
        });
    }
    CurvePath {
        segments,
        closed: path.closed,
    }
}

/// Reverses the orientation of a path.
pub fn reverse_path(path: &CurvePath) -> CurvePath {
    CurvePath {
        segments: path
            .segments
            .iter()
            .rev()
            .map(|s| PathSegment {
                polygon: s.polygon,
                start: s.end.clone(),
                end: s.start.clone(),
            })
            .collect(),
        closed: path.closed,
    }
}


#[cfg(test)]
mod spec_example_tests {
    use super::*;
    use crate::num::{rat, rat_int};
    use crate::surface::{build_surface, corpus};

    #[test]
    fn develop_across_lambda_gluing_preserves_direction() {
        // two-segment path crossing the derivative-λ gluing of the chamber
        // surface: the developed direction never changes
        let s = build_surface(corpus::chamber_surface(rat_int(2)).unwrap()).unwrap();
        // east cut of the top chamber: edge (0, 5) from (1,0) to (s,0);
        // crossing lands on the bottom chamber's west cut
        let e = crate::surface::EdgeRef { polygon: 0, edge: 5 };
        let map = s.crossing_map(e);
        let start = CRat::new(rat(3, 2), rat(1, 4));
        let exit = CRat::new(rat(3, 2), rat(0, 1));
        let landed = map.apply(&exit);
        let dir = &exit - &start;
        let a = s.crossing_derivative(e);
        let continued = &landed + &(&a * &dir);
        let path = CurvePath {
            segments: vec![
                PathSegment {
                    polygon: 0,
                    start,
                    end: exit,
                },
                PathSegment {
                    polygon: 1,
                    start: landed,
                    end: continued,
                },
            ],
            closed: false,
        };
        let dev = develop_path(&s, &path).unwrap();
        assert_eq!(dev.len(), 2);
        // same direction up to positive scale: cross product vanishes and
        // dot product is positive
        assert!(dev[0].0.cross(&dev[1].0).is_zero());
        assert!(dev[0].0.dot(&dev[1].0).is_positive());
        assert_eq!(dev[1].1, 0, "no exterior turn at the crossing");
    }

    #[test]
    fn float_mode_contractible_loop_turns_once() {
        let s = build_surface(corpus::troyanov_family(rat(1, 4)).unwrap()).unwrap();
        // small counterclockwise diamond inside the central triangle
        let c = CRat::new(rat(1, 2), rat(1, 4));
        let d = rat(1, 32);
        let p = |dx: i64, dy: i64| {
            &c + &CRat::new(rat(dx, 1) * d.clone(), rat(dy, 1) * d.clone())
        };
        let pts = [p(1, 0), p(0, 1), p(-1, 0), p(0, -1)];
        let segments = (0..4)
            .map(|i| PathSegment {
                polygon: 0,
                start: pts[i].clone(),
                end: pts[(i + 1) % 4].clone(),
            })
            .collect();
        let path = CurvePath {
            segments,
            closed: true,
        };
        assert_eq!(turning_number(&s, &path).unwrap(), 1);
    }

    #[test]
    fn float_mode_noninteger_cone_loop_is_rejected() {
        // a loop around the apex class of a flat surface with non-integer
        // cone angle has no integer turning number
        let s = build_surface(corpus::troyanov_family(rat(1, 4)).unwrap()).unwrap();
        let apex_class = (0..s.vertex_classes.len())
            .find(|&ci| {
                matches!(s.vertex_classes[ci].angle, crate::surface::Angle::Approx(t) if (t - 0.75).abs() < 1e-6)
            })
            .expect("apex class with angle 3t·2π = 0.75·2π");
        let loop_path = puncture_curve(&s, apex_class).unwrap();
        match turning_number(&s, &loop_path) {
            Err(FramingError::NonIntegralTurning(t)) => {
                assert!((t - 0.75).abs() < 1e-6, "got {t}");
            }
            other => panic!("expected NonIntegralTurning, got {other:?}"),
        }
    }
}
