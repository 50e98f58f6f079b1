//! Built-in surface families used by the test suite and the `corpus`
//! subcommand.
//!
//! All exact-mode families have rational vertices and positive rational
//! gluing derivatives. `troyanov_family` builds flat surfaces whose vertex
//! coordinates involve trigonometric values, so it emits high-precision
//! rational approximations and float mode.

use super::{EdgeRef, Mode, SpecOptions, SurfaceSpec};
use crate::num::{rat, rat_int, CRat, Rat};
use num::{BigInt, FromPrimitive, One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CorpusError {
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
}

fn edge(polygon: usize, edge: usize) -> EdgeRef {
    EdgeRef { polygon, edge }
}

/// Unit square with left↔right and bottom↔top glued by translations.
pub fn square_torus() -> SurfaceSpec {
    let square = vec![
        CRat::from_ints(0, 0),
        CRat::from_ints(1, 0),
        CRat::from_ints(1, 1),
        CRat::from_ints(0, 1),
    ];
    SurfaceSpec {
        polygons: vec![square],
        pairings: vec![
            (edge(0, 0), edge(0, 2)), // bottom ↔ top
            (edge(0, 1), edge(0, 3)), // right ↔ left
        ],
        options: SpecOptions::default(),
    }
}

/// Centrally symmetric convex 2k-gon with opposite sides glued by
/// translations. Rational stand-in for the regular 2k-gon: side vectors
/// (k−j, j) give a strictly convex polygon with the same gluing
/// combinatorics, so all topological and holonomy invariants agree.
pub fn regular_2n_gon(k: usize) -> Result<SurfaceSpec, CorpusError> {
    if k < 2 {
        return Err(CorpusError::ParameterOutOfRange(format!(
            "regular_2n_gon needs k >= 2, got {k}"
        )));
    }
    let mut sides: Vec<CRat> = (0..k)
        .map(|j| CRat::from_ints((k - j) as i64, j as i64))
        .collect();
    let negatives: Vec<CRat> = sides.iter().map(|v| -v.clone()).collect();
    sides.extend(negatives);
    let mut vertices = Vec::with_capacity(2 * k);
    let mut cur = CRat::zero();
    for side in &sides {
        vertices.push(cur.clone());
        cur = &cur + side;
    }
    debug_assert!(cur.is_zero());
    let pairings = (0..k).map(|j| (edge(0, j), edge(0, j + k))).collect();
    Ok(SurfaceSpec {
        polygons: vec![vertices],
        pairings,
        options: SpecOptions::default(),
    })
}

/// Genus-1 dilation surface made of two half-annulus chambers between
/// nested diamonds, with a cross-chamber gluing of derivative exactly λ.
/// The two nontrivial cone points carry link factors s² and s⁻² where
/// s = max(λ, 1/λ); the two cut classes are removable. λ = 1 degenerates to
/// a two-chamber translation torus.
pub fn chamber_surface(lambda: Rat) -> Result<SurfaceSpec, CorpusError> {
    if !lambda.is_positive() {
        return Err(CorpusError::ParameterOutOfRange(format!(
            "chamber_surface needs λ > 0, got {lambda}"
        )));
    }
    if lambda.is_one() {
        // Two unit squares side by side, all translation gluings.
        let sq = |dx: i64| {
            vec![
                CRat::new(rat_int(dx), rat_int(0)),
                CRat::new(rat_int(dx + 1), rat_int(0)),
                CRat::new(rat_int(dx + 1), rat_int(1)),
                CRat::new(rat_int(dx), rat_int(1)),
            ]
        };
        return Ok(SurfaceSpec {
            polygons: vec![sq(0), sq(1)],
            pairings: vec![
                (edge(0, 0), edge(0, 2)),
                (edge(1, 0), edge(1, 2)),
                (edge(0, 1), edge(1, 3)),
                (edge(1, 1), edge(0, 3)),
            ],
            options: SpecOptions::default(),
        });
    }

    let s = if lambda > Rat::one() {
        lambda.clone()
    } else {
        lambda.recip()
    };
    let one = Rat::one();
    let zero = Rat::zero();
    let pt = |x: &Rat, y: &Rat| CRat::new(x.clone(), y.clone());

    // Top chamber: upper half of the annulus between diamonds of sizes 1, s.
    let top = vec![
        pt(&s, &zero),            // t0 start
        pt(&zero, &s),            // outer NE → NW
        pt(&(-s.clone()), &zero), // t2 start (cut W)
        pt(&(-one.clone()), &zero),
        pt(&zero, &one), // inner NW → NE
        pt(&one, &zero), // t5 start (cut E)
    ];
    // Bottom chamber in a chart rescaled by 1/s: diamonds of sizes 1/s, 1.
    let sinv = s.recip();
    let bottom = vec![
        pt(&(-one.clone()), &zero),    // b0 start
        pt(&zero, &(-one.clone())),    // inner SW → SE (size 1 here)
        pt(&one, &zero),               // b2 start (cut E)
        pt(&sinv, &zero),              //
        pt(&zero, &(-sinv.clone())),   // outer SE → SW (size 1/s)
        pt(&(-sinv.clone()), &zero),   // b5 start (cut W)
    ];

    // Within-chamber scalings z ↦ s·z glue inner diamond arcs to outer ones;
    // the two axis cuts connect the chambers with derivatives 1/s and s.
    let pairings = vec![
        (edge(0, 4), edge(0, 0)), // top inner NE ↔ outer NE
        (edge(0, 3), edge(0, 1)), // top inner NW ↔ outer NW
        (edge(1, 3), edge(1, 1)), // bottom outer SE ↔ inner SE
        (edge(1, 4), edge(1, 0)), // bottom outer SW ↔ inner SW
        (edge(0, 5), edge(1, 5)), // cut E (top) ↔ cut W (bottom), derivative 1/s
        (edge(1, 2), edge(0, 2)), // cut E (bottom) ↔ cut W (top), derivative s
    ];

    Ok(SurfaceSpec {
        polygons: vec![top, bottom],
        pairings,
        options: SpecOptions::default(),
    })
}

/// Rational approximation with denominator 2^48.
fn approx_rat(x: f64) -> Rat {
    let scale: i64 = 1 << 48;
    let n = (x * scale as f64).round();
    Rat::new(
        BigInt::from_f64(n).unwrap_or_else(BigInt::zero),
        BigInt::from(scale),
    )
}

/// One-parameter family of flat genus-1 surfaces: an equilateral triangle
/// with three congruent isosceles triangles glued to its sides by rotations.
/// The apex angle is 2πt; the two cone points have order real parts 3t−1 and
/// 1−3t. Positivity of the triangle angles requires t ∈ (0, 1/2).
pub fn troyanov_family(t: Rat) -> Result<SurfaceSpec, CorpusError> {
    if !t.is_positive() || t >= rat(1, 2) {
        return Err(CorpusError::ParameterOutOfRange(format!(
            "troyanov_family needs 0 < t < 1/2 for positive triangle angles, got {t}"
        )));
    }
    let theta = std::f64::consts::TAU * crate::num::rat_to_f64(&t);
    // Base corners of the equilateral triangle.
    let v = [
        (0.0, 0.0),
        (1.0, 0.0),
        (0.5, 3f64.sqrt() / 2.0),
    ];
    // Apex of the outward isosceles triangle over side (v_i, v_{i+1}).
    let apex = |i: usize| -> (f64, f64) {
        let (x0, y0) = v[i];
        let (x1, y1) = v[(i + 1) % 3];
        let (mx, my) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
        // outward normal = edge direction rotated by −90°
        let (dx, dy): (f64, f64) = (x1 - x0, y1 - y0);
        let len = dx.hypot(dy);
        let (nx, ny) = (dy / len, -dx / len);
        let h = len / (2.0 * (theta / 2.0).tan());
        (mx + nx * h, my + ny * h)
    };
    let p = |xy: (f64, f64)| CRat::new(approx_rat(xy.0), approx_rat(xy.1));

    let center = vec![p(v[0]), p(v[1]), p(v[2])];
    let mut polygons = vec![center];
    for i in 0..3 {
        // outward triangle, counterclockwise: base end, base start, apex
        polygons.push(vec![p(v[(i + 1) % 3]), p(v[i]), p(apex(i))]);
    }

    let mut pairings = Vec::new();
    for i in 0..3 {
        // side i of the center triangle ↔ base of outer triangle i (identity)
        pairings.push((edge(0, i), edge(i + 1, 0)));
    }
    for i in 0..3 {
        // left leg of T_i (base start → apex) ↔ right leg of T_{i+1}
        // (apex → far base end); the derived map is a rotation that chains
        // the apexes into a single vertex class.
        pairings.push((edge(i + 1, 1), edge((i + 1) % 3 + 1, 2)));
    }

    Ok(SurfaceSpec {
        polygons,
        pairings,
        options: SpecOptions {
            forget_removable: false,
            mode: Mode::Float,
        },
    })
}

/// Name-dispatched generation for the CLI `corpus` subcommand.
pub fn generate(name: &str, param: Option<Rat>) -> Result<SurfaceSpec, CorpusError> {
    match name {
        "square_torus" => Ok(square_torus()),
        "regular_2n_gon" => {
            let k = param
                .as_ref()
                .and_then(|r| if r.is_integer() { r.to_integer().try_into().ok() } else { None })
                .ok_or_else(|| {
                    CorpusError::ParameterOutOfRange("regular_2n_gon needs integer k".into())
                })?;
            regular_2n_gon(k)
        }
        "chamber" | "chamber_surface" => {
            let l = param.ok_or_else(|| {
                CorpusError::ParameterOutOfRange("chamber_surface needs λ".into())
            })?;
            chamber_surface(l)
        }
        "troyanov" | "troyanov_family" => {
            let t = param.ok_or_else(|| {
                CorpusError::ParameterOutOfRange("troyanov_family needs t".into())
            })?;
            troyanov_family(t)
        }
        other => Err(CorpusError::UnknownGenerator(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{build_surface, check_gauss_bonnet, euler_data, Angle};

    #[test]
    fn troyanov_orders_match_parameter() {
        for t in [rat(1, 6), rat(1, 4), rat(1, 3)] {
            let spec = troyanov_family(t.clone()).unwrap();
            let s = build_surface(spec).unwrap();
            let (v, e, f, g) = euler_data(&s);
            assert_eq!((v, e, f, g), (2, 6, 4, 1));
            assert!(check_gauss_bonnet(&s));
            let cones = s.cone_points();
            assert_eq!(cones.len(), 2);
            let t_f = crate::num::rat_to_f64(&t);
            let mut res: Vec<f64> = cones.iter().map(|c| c.order_re_f64()).collect();
            res.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let mut expect = [3.0 * t_f - 1.0, 1.0 - 3.0 * t_f];
            expect.sort_by(|a, b| a.partial_cmp(b).unwrap());
            for (got, want) in res.iter().zip(expect.iter()) {
                assert!((got - want).abs() < 1e-6, "order {got} vs {want}");
            }
        }
    }

    #[test]
    fn troyanov_rejects_bad_parameter() {
        assert!(matches!(
            troyanov_family(rat(1, 2)),
            Err(CorpusError::ParameterOutOfRange(_))
        ));
        assert!(matches!(
            troyanov_family(rat(-1, 6)),
            Err(CorpusError::ParameterOutOfRange(_))
        ));
    }

    #[test]
    fn chamber_lambda_one_is_translation_like() {
        let s = build_surface(chamber_surface(Rat::one()).unwrap()).unwrap();
        assert!(s.derivative_dilation);
        for g in &s.gluings {
            assert!(g.a.is_positive_real());
            assert!(g.a.re.is_one());
        }
    }

    #[test]
    fn chamber_has_lambda_derivative_between_chambers() {
        for l in [rat(3, 2), rat_int(2), rat_int(3), rat(1, 2)] {
            let spec = chamber_surface(l.clone()).unwrap();
            let s = build_surface(spec).unwrap();
            let cross_derivs: Vec<Rat> = s
                .spec
                .pairings
                .iter()
                .zip(&s.gluings)
                .filter(|(&(a, b), _)| a.polygon != b.polygon)
                .map(|(_, g)| g.a.re.clone())
                .collect();
            assert!(
                cross_derivs.contains(&l),
                "no cross-chamber gluing with derivative {l}"
            );
            assert_eq!(euler_data(&s).3, 1);
            assert!(check_gauss_bonnet(&s));
        }
    }

    #[test]
    fn gon_family_genus() {
        for (k, genus, classes) in [(2usize, 1usize, 1usize), (3, 1, 2), (4, 2, 1), (5, 2, 2)] {
            let s = build_surface(regular_2n_gon(k).unwrap()).unwrap();
            let (v, e, f, g) = euler_data(&s);
            assert_eq!(g, genus, "genus of 2·{k}-gon");
            assert_eq!(v, classes, "vertex classes of 2·{k}-gon");
            assert_eq!((e, f), (k, 1));
            assert!(check_gauss_bonnet(&s));
        }
    }

    #[test]
    fn octagon_single_cone_of_three_turns() {
        let s = build_surface(regular_2n_gon(4).unwrap()).unwrap();
        let cones = s.cone_points();
        assert_eq!(cones.len(), 1);
        assert_eq!(cones[0].angle, Angle::Turns(3));
    }
}
