//! Geometric measurement of the Dehn twist action on turning numbers.
//! Constructs T_c(x) explicitly on the square torus: the vertical curve x
//! gets a horizontal excursion around the twist curve c (with c's kinks
//! traversed), and the turning number is measured by the exact pipeline.

use dilatkit::framing::*;
use dilatkit::num::{rat, CRat, Rat};
use dilatkit::surface::{build_surface, corpus};

fn seg(p: usize, a: (Rat, Rat), b: (Rat, Rat)) -> PathSegment {
    PathSegment {
        polygon: p,
        start: CRat::new(a.0, a.1),
        end: CRat::new(b.0, b.1),
    }
}

fn main() {
    let s = build_surface(corpus::square_torus()).unwrap();

    // twist curve c = horizontal at y = 1/2 with k kinks; τ(c) = k
    // x = vertical at x0 = 1/4; τ(x) = 0
    // T_c^±(x): vertical up to y = 1/2 ∓ δ-ish, excursion around
    // horizontally (traversing the kinks of c), return, continue up.
    for k in -2..=2i64 {
        for dir in [1i64, -1] {
            // dir = +1: excursion travels east (the +a direction)
            let x0 = rat(1, 4);
            let ylow = rat(7, 16);
            let yhigh = rat(9, 16);
            let mut segments = Vec::new();
            // bottom: from (x0, 0) up to (x0, ylow)
            segments.push(seg(0, (x0.clone(), rat(0, 1)), (x0.clone(), ylow.clone())));
            if dir == 1 {
                // east excursion: (x0, ylow) → (1, 1/2−ish) wrap → (0,·) → (x0, yhigh)
                segments.push(seg(0, (x0.clone(), ylow.clone()), (rat(1, 1), rat(1, 2))));
                segments.push(seg(0, (rat(0, 1), rat(1, 2)), (x0.clone(), yhigh.clone())));
            } else {
                // west excursion
                segments.push(seg(0, (x0.clone(), ylow.clone()), (rat(0, 1), rat(1, 2))));
                segments.push(seg(0, (rat(1, 1), rat(1, 2)), (x0.clone(), yhigh.clone())));
            }
            // top: continue up to (x0, 1) ≡ (x0, 0)
            segments.push(seg(0, (x0.clone(), yhigh.clone()), (x0.clone(), rat(1, 1))));
            let mut path = CurvePath {
                segments,
                closed: true,
            };
            // insert the kinks of c into the excursion's first chord: the
            // twisted curve traverses c's kinks (forward for east, reversed
            // for west)
            if k != 0 {
                // kink sign as traversed: east keeps k, west reverses to -k
                let traversed = if dir == 1 { k } else { -k };
                // insert into segment 1 (the excursion chord)
                let rest = path.segments.split_off(1);
                let head = path.segments.pop().unwrap();
                let mut kink_target = CurvePath {
                    segments: vec![rest[0].clone()],
                    closed: false,
                };
                kink_target = insert_kinks(&s, &kink_target, traversed).unwrap();
                let mut segments = vec![head];
                segments.extend(kink_target.segments);
                segments.extend(rest[1..].iter().cloned());
                path = CurvePath {
                    segments,
                    closed: true,
                };
            }
            let tau = turning_number(&s, &path).unwrap();
            let label = if dir == 1 { "T_c" } else { "T_c^{-1}" };
            println!("τ(c) = {k:2}: {label:8}(x): τ = {tau:3}   [x vertical, τ(x) = 0, ⟨x,c⟩ = ±1]");
        }
    }
}
