//! Exact planar geometry on rational points.
//!
//! Everything integer-valued downstream (turning numbers, cone angles of
//! dilation surfaces, winding of direction sequences) reduces to the two
//! primitives here: sign tests on cross/dot products, and the crossing
//! counter [`winding_number`], which computes the degree of a cyclic
//! direction sequence by counting signed crossings of the positive x-axis.
//! No trigonometry is used in exact mode.

use crate::num::{CRat, Rat};
use num::{Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("direction sequence contains a cusp (consecutive opposite directions)")]
    Cusp,
    #[error("zero direction vector in sequence")]
    ZeroDirection,
    #[error("polygon has fewer than 3 vertices")]
    TooFewVertices,
    #[error("polygon has a zero-length edge at index {0}")]
    ZeroLengthEdge(usize),
    #[error("polygon is not counterclockwise oriented")]
    NotCounterclockwise,
    #[error("polygon is not simple (edges {0} and {1} intersect)")]
    NotSimple(usize, usize),
}

/// Twice the signed area of a polygon, exact. Positive for CCW.
pub fn signed_area_x2(vertices: &[CRat]) -> Rat {
    let n = vertices.len();
    let mut acc = Rat::zero();
    for i in 0..n {
        let a = &vertices[i];
        let b = &vertices[(i + 1) % n];
        acc += a.cross(b);
    }
    acc
}

/// Validates that `vertices` form a simple, counterclockwise polygon with no
/// zero-length edges or repeated vertices.
pub fn validate_simple_ccw(vertices: &[CRat]) -> Result<(), GeometryError> {
    let n = vertices.len();
    if n < 3 {
        return Err(GeometryError::TooFewVertices);
    }
    for i in 0..n {
        if vertices[i] == vertices[(i + 1) % n] {
            return Err(GeometryError::ZeroLengthEdge(i));
        }
    }
    // Pairwise edge intersection tests. Adjacent edges may only share their
    // common vertex; non-adjacent edges may not touch at all.
    for i in 0..n {
        let (a1, a2) = (&vertices[i], &vertices[(i + 1) % n]);
        for j in (i + 1)..n {
            let (b1, b2) = (&vertices[j], &vertices[(j + 1) % n]);
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                // Shared endpoint is expected; reject any further contact,
                // which catches collinear overlap (zero angle) as well.
                let shared = if j == i + 1 { a2 } else { a1 };
                let (c1, c2) = if j == i + 1 { (b2, b1) } else { (b1, b2) };
                debug_assert_eq!(c2, shared);
                let _ = c2;
                if point_on_closed_segment(c1, a1, a2) && c1 != shared {
                    return Err(GeometryError::NotSimple(i, j));
                }
                // Overlap where the far end of edge i lies on edge j.
                let far = if j == i + 1 { a1 } else { a2 };
                if point_on_closed_segment(far, b1, b2) && far != shared {
                    return Err(GeometryError::NotSimple(i, j));
                }
            } else if segments_touch(a1, a2, b1, b2) {
                return Err(GeometryError::NotSimple(i, j));
            }
        }
    }
    if !signed_area_x2(vertices).is_positive() {
        return Err(GeometryError::NotCounterclockwise);
    }
    Ok(())
}

/// True when all CCW corner turns are strictly positive (strictly convex).
pub fn is_strictly_convex(vertices: &[CRat]) -> bool {
    let n = vertices.len();
    if n < 3 {
        return false;
    }
    for i in 0..n {
        let prev = &vertices[(i + n - 1) % n];
        let cur = &vertices[i];
        let next = &vertices[(i + 1) % n];
        let d1 = cur - prev;
        let d2 = next - cur;
        if !d1.cross(&d2).is_positive() {
            return false;
        }
    }
    true
}

/// True when `p` lies on the closed segment [a, b].
pub fn point_on_closed_segment(p: &CRat, a: &CRat, b: &CRat) -> bool {
    let ab = b - a;
    let ap = p - a;
    if !ab.cross(&ap).is_zero() {
        return false;
    }
    let t = ab.dot(&ap);
    !t.is_negative() && t <= ab.norm_sqr()
}

/// True when the closed segments [a1,a2] and [b1,b2] share at least a point.
pub fn segments_touch(a1: &CRat, a2: &CRat, b1: &CRat, b2: &CRat) -> bool {
    let d1 = a2 - a1;
    let d2 = b2 - b1;
    let o1 = d1.cross(&(b1 - a1));
    let o2 = d1.cross(&(b2 - a1));
    let o3 = d2.cross(&(a1 - b1));
    let o4 = d2.cross(&(a2 - b1));
    let sgn = |r: &Rat| -> i8 {
        if r.is_positive() {
            1
        } else if r.is_negative() {
            -1
        } else {
            0
        }
    };
    let (s1, s2, s3, s4) = (sgn(&o1), sgn(&o2), sgn(&o3), sgn(&o4));
    if s1 * s2 < 0 && s3 * s4 < 0 {
        return true;
    }
    (s1 == 0 && point_on_closed_segment(b1, a1, a2))
        || (s2 == 0 && point_on_closed_segment(b2, a1, a2))
        || (s3 == 0 && point_on_closed_segment(a1, b1, b2))
        || (s4 == 0 && point_on_closed_segment(a2, b1, b2))
}

/// Proper transversal crossing of two directed open segments.
/// Returns the sign of cross(dir1, dir2) when interiors cross, else None.
pub fn proper_crossing_sign(a1: &CRat, a2: &CRat, b1: &CRat, b2: &CRat) -> Option<i8> {
    let d1 = a2 - a1;
    let d2 = b2 - b1;
    let denom = d1.cross(&d2);
    if denom.is_zero() {
        return None;
    }
    // a1 + t·d1 = b1 + s·d2 with t, s in (0, 1) strictly.
    let diff = b1 - a1;
    let t_num = diff.cross(&d2);
    let s_num = diff.cross(&d1);
    let inside = |num: &Rat, den: &Rat| -> bool {
        if den.is_positive() {
            num.is_positive() && num < den
        } else {
            num.is_negative() && num > den
        }
    };
    if inside(&t_num, &denom) && inside(&s_num, &denom) {
        Some(if denom.is_positive() { 1 } else { -1 })
    } else {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointLocation {
    Inside,
    Boundary,
    Outside,
}

/// Locates a point relative to a simple polygon, exactly.
pub fn locate_point(p: &CRat, vertices: &[CRat]) -> PointLocation {
    let n = vertices.len();
    for i in 0..n {
        if point_on_closed_segment(p, &vertices[i], &vertices[(i + 1) % n]) {
            return PointLocation::Boundary;
        }
    }
    // Winding of the translated polygon around the origin; for a simple CCW
    // polygon this is 1 inside and 0 outside.
    let shifted: Vec<CRat> = vertices.iter().map(|v| v - p).collect();
    let w = winding_of_points(&shifted);
    if w != 0 {
        PointLocation::Inside
    } else {
        PointLocation::Outside
    }
}

/// Winding number around the origin of the closed polygonal path through
/// `points` (no point may be the origin, no segment may pass through it).
fn winding_of_points(points: &[CRat]) -> i64 {
    let n = points.len();
    let mut wind = 0i64;
    for i in 0..n {
        let p = &points[i];
        let q = &points[(i + 1) % n];
        wind += ray_crossing(p, q);
    }
    wind
}

/// Signed crossing of the positive x-axis by the segment p→q, with the
/// half-open convention that y = 0 belongs to the upper side.
fn ray_crossing(p: &CRat, q: &CRat) -> i64 {
    let p_low = p.im.is_negative();
    let q_low = q.im.is_negative();
    if p_low == q_low {
        return 0;
    }
    let c = p.cross(q); // x_p·y_q − y_p·x_q
    if p_low {
        // upward crossing; counts when it crosses x > 0
        if c.is_positive() {
            1
        } else {
            0
        }
    } else if c.is_negative() {
        -1
    } else {
        0
    }
}

/// Degree of the tangent loop described by a cyclic sequence of nonzero
/// direction vectors, where consecutive directions are joined by the shorter
/// circular arc. Exact: equals the winding number around the origin of the
/// chordal polygon through the direction points.
///
/// Fails with [`GeometryError::Cusp`] when consecutive directions are exact
/// opposites (the interpolation would be ambiguous).
pub fn winding_number(directions: &[CRat]) -> Result<i64, GeometryError> {
    let n = directions.len();
    if n == 0 {
        return Ok(0);
    }
    for d in directions {
        if d.is_zero() {
            return Err(GeometryError::ZeroDirection);
        }
    }
    let mut wind = 0i64;
    for i in 0..n {
        let p = &directions[i];
        let q = &directions[(i + 1) % n];
        if p.cross(q).is_zero() && p.dot(q).is_negative() {
            return Err(GeometryError::Cusp);
        }
        wind += ray_crossing(p, q);
    }
    Ok(wind)
}

/// Subdivides the counterclockwise rotation from `from` to `to` (an angle in
/// (0, 2π), or 0 when they are positively parallel) into steps each strictly
/// below π, by inserting exact 90° rotations. Returns the full direction
/// chain including both endpoints.
pub fn ccw_subdivide(from: &CRat, to: &CRat) -> Vec<CRat> {
    let mut chain = vec![from.clone()];
    let mut cur = from.clone();
    for _ in 0..4 {
        let cross = cur.cross(to);
        let dot = cur.dot(to);
        if cross.is_positive() || (cross.is_zero() && dot.is_positive()) {
            // remaining CCW angle is in [0, π)
            break;
        }
        cur = cur.rot90();
        chain.push(cur.clone());
    }
    if !(cur.cross(to).is_zero() && cur.dot(to).is_positive()) {
        chain.push(to.clone());
    } else if chain.len() == 1 {
        // zero rotation: keep a single entry
    } else {
        chain.push(to.clone());
    }
    chain
}

/// Interior angle at a CCW polygon corner, in radians (float helper).
/// `d_out` points along the outgoing edge, `d_rev` from the vertex back
/// along the incoming edge; the angle is the CCW rotation from `d_out`
/// to `d_rev`, in (0, 2π).
pub fn interior_angle_f64(d_out: &CRat, d_rev: &CRat) -> f64 {
    let a = d_out.arg_f64();
    let b = d_rev.arg_f64();
    let mut t = b - a;
    while t <= 0.0 {
        t += std::f64::consts::TAU;
    }
    while t > std::f64::consts::TAU {
        t -= std::f64::consts::TAU;
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{rat, rat_int};

    fn pt(x: i64, y: i64) -> CRat {
        CRat::from_ints(x, y)
    }

    fn square() -> Vec<CRat> {
        vec![pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)]
    }

    #[test]
    fn square_is_simple_ccw() {
        assert!(validate_simple_ccw(&square()).is_ok());
        let cw: Vec<CRat> = square().into_iter().rev().collect();
        assert_eq!(
            validate_simple_ccw(&cw),
            Err(GeometryError::NotCounterclockwise)
        );
    }

    #[test]
    fn bowtie_is_not_simple() {
        let bowtie = vec![pt(0, 0), pt(2, 2), pt(2, 0), pt(0, 2)];
        assert!(matches!(
            validate_simple_ccw(&bowtie),
            Err(GeometryError::NotSimple(_, _))
        ));
    }

    #[test]
    fn winding_of_full_turn() {
        let dirs = vec![pt(1, 0), pt(0, 1), pt(-1, 0), pt(0, -1)];
        assert_eq!(winding_number(&dirs).unwrap(), 1);
        let rev: Vec<CRat> = dirs.iter().rev().map(|d| -d.clone()).collect();
        // reversed traversal with negated directions
        assert_eq!(winding_number(&rev).unwrap(), -1);
    }

    #[test]
    fn winding_of_no_turn() {
        let dirs = vec![pt(1, 0), pt(2, 0), pt(5, 0)];
        assert_eq!(winding_number(&dirs).unwrap(), 0);
        let dirs = vec![pt(1, 0), pt(1, 1), pt(1, 0), pt(1, -1)];
        assert_eq!(winding_number(&dirs).unwrap(), 0);
    }

    #[test]
    fn winding_detects_cusp() {
        let dirs = vec![pt(1, 0), pt(-2, 0)];
        assert_eq!(winding_number(&dirs), Err(GeometryError::Cusp));
    }

    #[test]
    fn winding_double_turn() {
        let one_turn = [pt(1, 0), pt(1, 1), pt(0, 1), pt(-1, 1), pt(-1, 0), pt(-1, -1), pt(0, -1), pt(1, -1)];
        let mut two: Vec<CRat> = one_turn.to_vec();
        two.extend(one_turn.iter().cloned());
        assert_eq!(winding_number(&two).unwrap(), 2);
    }

    #[test]
    fn subdivision_steps_are_small() {
        // 270° wedge from east to south: needs intermediate rotations.
        let chain = ccw_subdivide(&pt(1, 0), &pt(0, -1));
        assert_eq!(chain.first().unwrap(), &pt(1, 0));
        assert_eq!(chain.last().unwrap(), &pt(0, -1));
        for pair in chain.windows(2) {
            let c = pair[0].cross(&pair[1]);
            let d = pair[0].dot(&pair[1]);
            // each step strictly less than π, non-negative
            assert!(c.is_positive() || (c.is_zero() && d.is_positive()));
        }
    }

    #[test]
    fn locate_point_cases() {
        let sq = square();
        assert_eq!(
            locate_point(&CRat::new(rat(1, 2), rat(1, 2)), &sq),
            PointLocation::Inside
        );
        assert_eq!(
            locate_point(&CRat::new(rat(1, 2), rat_int(0)), &sq),
            PointLocation::Boundary
        );
        assert_eq!(locate_point(&pt(3, 3), &sq), PointLocation::Outside);
    }

    #[test]
    fn proper_crossing_signs() {
        // east chord crossed by north chord: +1
        let s = proper_crossing_sign(&pt(-1, 0), &pt(1, 0), &pt(0, -1), &pt(0, 1));
        assert_eq!(s, Some(1));
        let s = proper_crossing_sign(&pt(-1, 0), &pt(1, 0), &pt(0, 1), &pt(0, -1));
        assert_eq!(s, Some(-1));
        // sharing an endpoint is not a proper crossing
        let s = proper_crossing_sign(&pt(0, 0), &pt(1, 0), &pt(0, 0), &pt(0, 1));
        assert_eq!(s, None);
    }
}
