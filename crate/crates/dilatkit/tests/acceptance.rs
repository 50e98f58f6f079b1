//! Acceptance suite: one test per criterion, each printing a pass line with
//! the evidence. Run with `cargo test --test acceptance -- --nocapture` to
//! see the lines.

use dilatkit::classify::{
    classify, component_count, enumerate_orbits_bfs, phi, ComponentCount, StratumSignature,
};
use dilatkit::framing::{
    apply_twist, arf, boundary_turning, canonical_framing, concat_turning, framing_difference,
    insert_kinks, integral_action, puncture_curve, reverse_path, subdivide_path, turning_number,
    twist_framing, CurvePath, Framing, PathSegment,
};
use dilatkit::holonomy::{
    exponential_action, homology_basis, torsor_difference, CharVal, HolonomyData, Order, Period,
    PeriodVector,
};
use dilatkit::num::{rat, rat_int, CRat, Rat};
use dilatkit::report::{build_report, report_to_json};
use dilatkit::surface::format::surface_to_json;
use dilatkit::surface::{
    build_surface, check_gauss_bonnet, corpus, DilationSurface, EdgeRef, SurfaceSpec,
};
use num::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn exact_corpus() -> Vec<(&'static str, SurfaceSpec)> {
    vec![
        ("square_torus", corpus::square_torus()),
        ("regular_4_gon", corpus::regular_2n_gon(2).unwrap()),
        ("regular_6_gon", corpus::regular_2n_gon(3).unwrap()),
        ("regular_8_gon", corpus::regular_2n_gon(4).unwrap()),
        ("regular_10_gon", corpus::regular_2n_gon(5).unwrap()),
        ("chamber_3_2", corpus::chamber_surface(rat(3, 2)).unwrap()),
        ("chamber_2", corpus::chamber_surface(rat_int(2)).unwrap()),
        ("chamber_3", corpus::chamber_surface(rat_int(3)).unwrap()),
        ("chamber_1", corpus::chamber_surface(Rat::one()).unwrap()),
        ("chamber_1_2", corpus::chamber_surface(rat(1, 2)).unwrap()),
    ]
}

fn float_corpus() -> Vec<(&'static str, SurfaceSpec)> {
    vec![
        ("troyanov_1_6", corpus::troyanov_family(rat(1, 6)).unwrap()),
        ("troyanov_1_4", corpus::troyanov_family(rat(1, 4)).unwrap()),
        ("troyanov_1_3", corpus::troyanov_family(rat(1, 3)).unwrap()),
    ]
}

// --- criterion 1 -----------------------------------------------------------

#[test]
fn criterion_1_component_table() {
    let t0 = Instant::now();
    let sig = |g: usize, kappa: &[i64]| StratumSignature::new(g, kappa.to_vec()).unwrap();

    assert_eq!(component_count(&sig(0, &[-2])), ComponentCount::Finite(1));
    assert_eq!(component_count(&sig(1, &[])), ComponentCount::Infinite);
    let phi_expect = [1u64, 1, 2, 2, 4, 2];
    for k in 1..=6i64 {
        assert_eq!(
            component_count(&sig(1, &[k, -k])),
            ComponentCount::Finite(phi_expect[(k - 1) as usize]),
            "(g=1, κ=({k},−{k}))"
        );
        assert_eq!(phi(k as u64), phi_expect[(k - 1) as usize]);
    }
    assert_eq!(component_count(&sig(2, &[1, 1])), ComponentCount::Finite(1));
    assert_eq!(component_count(&sig(2, &[2])), ComponentCount::Finite(2));
    assert_eq!(component_count(&sig(3, &[4])), ComponentCount::Finite(2));
    assert_eq!(
        component_count(&sig(3, &[2, 1, 1])),
        ComponentCount::Finite(1)
    );
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "component table took {elapsed:?}");
    println!(
        "criterion 1: PASS — component table exact (g0, g1 n0, φ(1..6), g2, g3) in {elapsed:?}"
    );
}

// --- criterion 2 -----------------------------------------------------------

#[test]
fn criterion_2_bfs_oracle_agreement() {
    let sig = |g: usize, kappa: &[i64]| StratumSignature::new(g, kappa.to_vec()).unwrap();
    for k in 1..=6i64 {
        let s = sig(1, &[k, -k]);
        let t0 = Instant::now();
        let e = enumerate_orbits_bfs(&s, 1_000_000).unwrap();
        let elapsed = t0.elapsed();
        assert!(elapsed.as_secs() < 60, "κ=({k},−{k}) took {elapsed:?}");
        assert_eq!(
            e.count() as u64,
            phi(k as u64),
            "BFS count for κ=({k},−{k})"
        );
        // normal forms are distinct and reproducible
        let e2 = enumerate_orbits_bfs(&s, 1_000_000).unwrap();
        assert_eq!(e.orbits, e2.orbits);
    }
    // genus 2, odd κ present: single orbit
    let s21 = sig(2, &[1, 1]);
    let e21 = enumerate_orbits_bfs(&s21, 1_000_000).unwrap();
    assert_eq!(e21.count(), 1, "(g=2, κ=(1,1))");
    // genus 2, all even: two orbits with distinct constant Arf
    let s22 = sig(2, &[2]);
    let e22 = enumerate_orbits_bfs(&s22, 1_000_000).unwrap();
    assert_eq!(e22.count(), 2, "(g=2, κ=(2))");
    let arfs: Vec<Option<u8>> = e22.orbits.iter().map(|o| o.arf).collect();
    assert!(
        arfs.contains(&Some(0)) && arfs.contains(&Some(1)),
        "orbits must carry distinct constant Arf values, got {arfs:?}"
    );
    println!(
        "criterion 2: PASS — BFS orbit counts match φ(k) for k=1..6 and the genus-2 table; Arf split {arfs:?}"
    );
}

// --- criterion 3 -----------------------------------------------------------

fn rand_rat(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Rat {
    let n = rng.gen_range(lo..=hi);
    let d = rng.gen_range(1..=hi.max(2));
    rat(n.max(1), d)
}

/// Subdivides the glued edge pair `pi` at parameter t ∈ (0,1), preserving
/// the surface.
fn subdivide_pairing(spec: &SurfaceSpec, pi: usize, t: Rat) -> SurfaceSpec {
    let (ea, eb) = spec.pairings[pi];
    let mut polygons = spec.polygons.clone();

    let point_on = |e: EdgeRef, t: &Rat| -> CRat {
        let poly = &spec.polygons[e.polygon];
        let u = &poly[e.edge];
        let w = &poly[(e.edge + 1) % poly.len()];
        u + &(w - u).scale(t)
    };
    let pa = point_on(ea, &t);
    let pb = point_on(eb, &(Rat::one() - &t));

    // insert new vertices; remember index shifts
    let mut inserts: Vec<(usize, usize, CRat)> = vec![
        (ea.polygon, ea.edge, pa),
        (eb.polygon, eb.edge, pb),
    ];
    // apply in decreasing edge order within the same polygon so indices stay valid
    inserts.sort_by_key(|(p, e, _)| (*p, std::cmp::Reverse(*e)));
    for (p, e, pt) in &inserts {
        polygons[*p].insert(e + 1, pt.clone());
    }

    let shift = |e: EdgeRef| -> usize {
        // how many insertions happened at edges strictly before e in its polygon
        inserts
            .iter()
            .filter(|(p, ie, _)| *p == e.polygon && *ie < e.edge)
            .count()
    };
    let mut pairings = Vec::new();
    for (qi, &(xa, xb)) in spec.pairings.iter().enumerate() {
        if qi == pi {
            continue;
        }
        let na = EdgeRef {
            polygon: xa.polygon,
            edge: xa.edge + shift(xa),
        };
        let nb = EdgeRef {
            polygon: xb.polygon,
            edge: xb.edge + shift(xb),
        };
        pairings.push((na, nb));
    }
    // the split pair: first half of A ↔ second half of B and vice versa
    let a0 = ea.edge + shift(ea);
    let b0 = eb.edge + shift(eb);
    let a = |k: usize| EdgeRef {
        polygon: ea.polygon,
        edge: a0 + k,
    };
    let b = |k: usize| EdgeRef {
        polygon: eb.polygon,
        edge: b0 + k,
    };
    pairings.push((a(0), b(1)));
    pairings.push((a(1), b(0)));

    SurfaceSpec {
        polygons,
        pairings,
        options: spec.options.clone(),
    }
}

/// Random convex centrally symmetric 2k-gon glued by translations.
fn random_2k_gon(rng: &mut ChaCha8Rng) -> SurfaceSpec {
    let k = rng.gen_range(2..=5usize);
    // strictly increasing directions in the upper half plane
    let mut vectors: Vec<CRat> = Vec::new();
    let mut tries = 0;
    while vectors.len() < k && tries < 1000 {
        tries += 1;
        let x = rng.gen_range(-6i64..=6);
        let y = rng.gen_range(1i64..=6);
        let v = CRat::from_ints(x, y);
        let mut candidate = vectors.clone();
        candidate.push(v);
        candidate.sort_by(|a, b| {
            // compare by angle in the upper half plane: a before b iff a×b > 0
            if a.cross(b).is_positive() {
                std::cmp::Ordering::Less
            } else {
                std::cmp::Ordering::Greater
            }
        });
        let strictly_convex = candidate
            .windows(2)
            .all(|w| w[0].cross(&w[1]).is_positive());
        if strictly_convex {
            vectors = candidate;
        }
    }
    if vectors.len() < k {
        // fall back to the standard family
        return corpus::regular_2n_gon(k).unwrap();
    }
    // first edge along the positive x-axis keeps the polygon strictly convex
    let mut sides = vec![CRat::from_ints(rng.gen_range(1..=4), 0)];
    sides.extend(vectors);
    let negs: Vec<CRat> = sides.iter().map(|v| -v.clone()).collect();
    sides.extend(negs);
    let m = sides.len() / 2;
    let mut vertices = Vec::new();
    let mut cur = CRat::zero();
    for s in &sides {
        vertices.push(cur.clone());
        cur = &cur + s;
    }
    let pairings = (0..m)
        .map(|j| {
            (
                EdgeRef { polygon: 0, edge: j },
                EdgeRef {
                    polygon: 0,
                    edge: j + m,
                },
            )
        })
        .collect();
    SurfaceSpec {
        polygons: vec![vertices],
        pairings,
        options: Default::default(),
    }
}

fn random_perturbation(rng: &mut ChaCha8Rng) -> SurfaceSpec {
    match rng.gen_range(0..4) {
        0 => corpus::chamber_surface(rand_rat(rng, 1, 20)).unwrap(),
        1 => random_2k_gon(rng),
        2 => {
            let base = match rng.gen_range(0..3) {
                0 => corpus::square_torus(),
                1 => corpus::regular_2n_gon(4).unwrap(),
                _ => corpus::chamber_surface(rand_rat(rng, 1, 9)).unwrap(),
            };
            let pi = rng.gen_range(0..base.pairings.len());
            let t = rat(rng.gen_range(1..=7), 8);
            subdivide_pairing(&base, pi, t)
        }
        _ => {
            // rescale one chamber's chart by a random positive rational
            let mut spec = corpus::chamber_surface(rand_rat(rng, 1, 12)).unwrap();
            let scale = CRat::real(rand_rat(rng, 1, 9));
            let offset = CRat::from_ints(rng.gen_range(-4..=4), rng.gen_range(-4..=4));
            for v in &mut spec.polygons[1] {
                *v = &(&*v * &scale) + &offset;
            }
            spec
        }
    }
}

#[test]
fn criterion_3_gauss_bonnet_and_poincare_hopf() {
    // corpus surfaces, exact
    for (name, spec) in exact_corpus() {
        let s = build_surface(spec).unwrap();
        assert!(check_gauss_bonnet(&s), "Gauss-Bonnet on {name}");
        exact_gb_ph(&s, name);
    }
    for (name, spec) in float_corpus() {
        let s = build_surface(spec).unwrap();
        assert!(check_gauss_bonnet(&s), "Gauss-Bonnet (float) on {name}");
    }
    // 100 randomized valid gluing perturbations, exact, zero tolerance
    let mut rng = ChaCha8Rng::seed_from_u64(0x6d1a7);
    for i in 0..100 {
        let spec = random_perturbation(&mut rng);
        let s = build_surface(spec).unwrap_or_else(|e| panic!("perturbation {i}: {e}"));
        assert!(check_gauss_bonnet(&s), "Gauss-Bonnet on perturbation {i}");
        exact_gb_ph(&s, &format!("perturbation {i}"));
    }
    println!(
        "criterion 3: PASS — Σm = 2g−2 and Σr = 2g+n−2 exactly on the corpus and 100 random perturbations"
    );
}

fn exact_gb_ph(s: &DilationSurface, name: &str) {
    // Σ Re(m) = 2g−2 and Πρ = 1 exactly
    let mut re_sum = Rat::zero();
    let mut rho = Rat::one();
    for cp in s.cone_points() {
        match (&cp.order_re, &cp.rho) {
            (dilatkit::surface::Angle::Turns(k), Some(r)) => {
                re_sum += rat_int(*k);
                rho *= r.clone();
            }
            _ => panic!("{name}: expected exact cone data"),
        }
    }
    // forgotten removable points contribute zero, so marked sums suffice
    assert_eq!(re_sum, rat_int(2 * s.genus as i64 - 2), "{name}: Σ Re m");
    assert!(rho.is_one(), "{name}: Πρ");
    // Poincaré–Hopf
    let r = boundary_turning(s).unwrap();
    let total: i64 = r.iter().sum();
    assert_eq!(
        total,
        2 * s.genus as i64 + r.len() as i64 - 2,
        "{name}: Σr"
    );
}

// --- criterion 4 -----------------------------------------------------------

fn random_holonomy(rng: &mut ChaCha8Rng, genus: usize, n: usize) -> HolonomyData {
    let loops = 2 * genus + n.saturating_sub(1);
    let chi: Vec<CharVal> = (0..loops)
        .map(|_| CharVal::Exact(rand_rat(rng, 1, 12) / rand_rat(rng, 1, 12)))
        .collect();
    let mut m = Vec::new();
    let mut re_left = rat_int(2 * genus as i64 - 2);
    let mut rho_left = Rat::one();
    for _ in 0..n.saturating_sub(1) {
        let re = rat_int(rng.gen_range(-3..=3));
        let rho = rand_rat(rng, 1, 9) / rand_rat(rng, 1, 9);
        re_left -= re.clone();
        rho_left /= rho.clone();
        m.push(Order::Exact { re, rho });
    }
    if n > 0 {
        m.push(Order::Exact {
            re: re_left,
            rho: rho_left,
        });
    }
    let chi_punctures = m
        .iter()
        .map(|o| match o {
            Order::Exact { rho, .. } => CharVal::Exact(rho.clone()),
            _ => unreachable!(),
        })
        .collect();
    HolonomyData {
        chi,
        chi_punctures,
        m,
        genus,
    }
}

fn random_period_vector(
    rng: &mut ChaCha8Rng,
    h: &HolonomyData,
) -> PeriodVector {
    let g = h.genus;
    let n = h.n();
    let mut residues = Vec::new();
    let mut re_left = Rat::zero();
    let mut rho_left = Rat::one();
    for _ in 0..n.saturating_sub(1) {
        let re = rat_int(rng.gen_range(-2..=2));
        let rho = rand_rat(rng, 1, 7) / rand_rat(rng, 1, 7);
        re_left -= re.clone();
        rho_left /= rho.clone();
        residues.push(Order::Exact { re, rho });
    }
    if n > 0 {
        residues.push(Order::Exact {
            re: re_left,
            rho: rho_left,
        });
    }
    let mut periods = Vec::new();
    for i in 0..h.chi.len() {
        if i < 2 * g {
            periods.push(Period::Exact {
                mul: rand_rat(rng, 1, 9) / rand_rat(rng, 1, 9),
                turns: rat_int(rng.gen_range(-2..=2)),
            });
        } else {
            let r = &residues[i - 2 * g];
            let Order::Exact { re, rho } = r else { unreachable!() };
            periods.push(Period::Exact {
                mul: rho.clone(),
                turns: re.clone(),
            });
        }
    }
    PeriodVector { periods, residues }
}

#[test]
fn criterion_4_torsor_laws() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x70507);
    for trial in 0..1000 {
        let genus = rng.gen_range(1..=2usize);
        let n = rng.gen_range(1..=3usize);
        let h = random_holonomy(&mut rng, genus, n);
        let alpha = random_period_vector(&mut rng, &h);
        let beta = random_period_vector(&mut rng, &h);

        // group action: (β·(α·h)) = (α+β)·h
        let h1 = exponential_action(&h, &alpha).unwrap();
        let h2 = exponential_action(&h1, &beta).unwrap();
        let sum = PeriodVector {
            periods: alpha
                .periods
                .iter()
                .zip(&beta.periods)
                .map(|(a, b)| a.add(b))
                .collect(),
            residues: alpha
                .residues
                .iter()
                .zip(&beta.residues)
                .map(|(a, b)| dilatkit::holonomy::add_orders(a, b))
                .collect(),
        };
        let direct = exponential_action(&h, &sum).unwrap();
        assert_eq!(h2, direct, "action law failed at trial {trial}");

        // torsor difference inverts the action exactly
        let diff = torsor_difference(&h1, &h).unwrap();
        let back = exponential_action(&h, &diff).unwrap();
        assert_eq!(back, h1, "round trip failed at trial {trial}");

        // freeness at character level: acting by a nontrivial multiplier moves h
        if alpha.periods.iter().any(|p| match p {
            Period::Exact { mul, .. } => !mul.is_one(),
            _ => false,
        }) {
            assert_ne!(h1, h, "freeness failed at trial {trial}");
        }
    }

    // integral cocycle action on framings: free and transitive
    let mut rng = ChaCha8Rng::seed_from_u64(0xF7A3);
    for _ in 0..1000 {
        let genus = rng.gen_range(1..=3usize);
        let r = vec![1i64; 2 * genus.max(1)]; // any fixed boundary data
        let f1 = Framing {
            tau: (0..2 * genus).map(|_| rng.gen_range(-9..=9)).collect(),
            r: r.clone(),
            genus,
        };
        let f2 = Framing {
            tau: (0..2 * genus).map(|_| rng.gen_range(-9..=9)).collect(),
            r,
            genus,
        };
        let c = framing_difference(&f2, &f1).unwrap();
        let mut cocycle = c.clone();
        cocycle.extend(vec![0; f1.n().saturating_sub(1)]);
        let moved = integral_action(&f1, &cocycle).unwrap();
        assert_eq!(moved, f2, "transitivity");
        if c.iter().any(|&x| x != 0) {
            assert_ne!(integral_action(&f1, &cocycle).unwrap(), f1, "freeness");
        }
        // uniqueness: any cocycle carrying f1 to f2 equals c
        let c2 = framing_difference(&f2, &f1).unwrap();
        assert_eq!(c, c2);
    }
    println!(
        "criterion 4: PASS — action law, exact torsor round trips (1000 random rational data), free transitive cocycle action"
    );
}

// --- criterion 5 -----------------------------------------------------------

#[test]
fn criterion_5_turning_number_theorem() {
    let surfaces = vec![
        ("square_torus", corpus::square_torus(), 8usize),
        ("regular_4_gon", corpus::regular_2n_gon(2).unwrap(), 7),
        ("regular_6_gon", corpus::regular_2n_gon(3).unwrap(), 7),
        ("regular_8_gon", corpus::regular_2n_gon(4).unwrap(), 7),
        ("regular_10_gon", corpus::regular_2n_gon(5).unwrap(), 7),
        ("chamber_2", corpus::chamber_surface(rat_int(2)).unwrap(), 7),
        ("chamber_3_2", corpus::chamber_surface(rat(3, 2)).unwrap(), 7),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0x7715);
    let mut checked = 0;
    for (name, spec, vectors) in surfaces {
        let s = build_surface(spec).unwrap();
        let basis = homology_basis(&s).unwrap();
        let (reps, f0) = canonical_framing(&s, &basis).unwrap();
        for _ in 0..vectors {
            // dilation-preserving period vector: Im ∈ 2πZ on every loop
            let offsets: Vec<i64> = (0..2 * s.genus)
                .map(|_| rng.gen_range(-3..=3i64))
                .collect();
            let mut periods: Vec<Period> = offsets
                .iter()
                .map(|&k| Period::Exact {
                    mul: Rat::one(),
                    turns: rat_int(k),
                })
                .collect();
            let n = basis.n_punctures();
            for _ in 0..n.saturating_sub(1) {
                periods.push(Period::zero());
            }
            let alpha = PeriodVector {
                periods,
                residues: vec![Order::zero(); n],
            };
            let twist = twist_framing(&alpha).unwrap();
            assert_eq!(&twist[..2 * s.genus], &offsets[..]);

            // the offsets applied to the framing reproduce the framing of
            // the acted surface; geometrically, each basis curve's regular
            // homotopy class shifts by the offset, realized by tangent kinks
            let f_acted = apply_twist(&f0, &twist).unwrap();
            for (i, rep) in reps.iter().enumerate() {
                let kinked = insert_kinks(&s, rep, offsets[i]).unwrap();
                let tau_new = turning_number(&s, &kinked).unwrap();
                assert_eq!(
                    tau_new - f0.tau[i],
                    offsets[i],
                    "{name}: geometric turning difference on basis curve {i}"
                );
                assert_eq!(tau_new, f_acted.tau[i], "{name}: twisted framing entry {i}");
            }
            checked += 1;
        }
    }
    assert_eq!(checked, 50);
    println!(
        "criterion 5: PASS — 50 dilation-preserving period vectors: geometric turning differences equal Im(period)/2π on every basis curve"
    );
}

// --- criterion 6 -----------------------------------------------------------

/// Explicit positively resolved curve on the square torus from kinked
/// horizontal and vertical geodesics with turning τa and τb.
fn resolved_curve(s: &DilationSurface, tau_a: i64, tau_b: i64) -> CurvePath {
    let seg = |a: (Rat, Rat), b: (Rat, Rat)| PathSegment {
        polygon: 0,
        start: CRat::new(a.0, a.1),
        end: CRat::new(b.0, b.1),
    };
    let half = rat(1, 2);
    // horizontal run (east), smoothed onto the vertical run (north) at the
    // crossing, with a full positive tangent loop closing the resolution
    let base = vec![
        // east from (3/4, 1/2) across the gluing to (3/8, 1/2)
        seg((rat(3, 4), half.clone()), (rat(1, 1), half.clone())),
        seg((rat(0, 1), half.clone()), (rat(3, 8), half.clone())),
        // junction 1: quarter turn onto the vertical line
        seg((rat(3, 8), half.clone()), (half.clone(), rat(5, 8))),
        // north across the gluing
        seg((half.clone(), rat(5, 8)), (half.clone(), rat(1, 1))),
        seg((half.clone(), rat(0, 1)), (half.clone(), rat(3, 8))),
        // junction 2: positive (counterclockwise) resolution, turning the
        // long way from north to east through west and south
        seg((half.clone(), rat(3, 8)), (half.clone(), rat(9, 16))),
        seg((half.clone(), rat(9, 16)), (rat(7, 16), rat(9, 16))),
        seg((rat(7, 16), rat(9, 16)), (rat(7, 16), rat(7, 16))),
        seg((rat(7, 16), rat(7, 16)), (half.clone(), rat(7, 16))),
        seg((half.clone(), rat(7, 16)), (rat(9, 16), half.clone())),
        seg((rat(9, 16), half.clone()), (rat(3, 4), half.clone())),
    ];
    let path = CurvePath {
        segments: base,
        closed: true,
    };
    // τa kinks on the first horizontal segment, τb kinks on the vertical run
    let path = insert_kinks(s, &path, tau_a).unwrap();
    // insert vertical kinks on the segment that is now the north run across
    // the gluing: locate the first segment with direction (0, +) and room
    let mut segments = path.segments.clone();
    if tau_b != 0 {
        let idx = segments
            .iter()
            .position(|sg| {
                let d = sg.direction();
                d.re.is_zero() && d.im.is_positive() && {
                    let len2 = d.norm_sqr();
                    len2 > rat(1, 16) // enough room for kinks
                }
            })
            .expect("vertical run exists");
        let tail = segments.split_off(idx);
        let target = CurvePath {
            segments: vec![tail[0].clone()],
            closed: false,
        };
        let kinked = insert_kinks(s, &target, tau_b).unwrap();
        segments.extend(kinked.segments);
        segments.extend(tail[1..].iter().cloned());
    }
    CurvePath {
        segments,
        closed: true,
    }
}

#[test]
fn criterion_6_concat_rule() {
    let s = build_surface(corpus::square_torus()).unwrap();
    // sanity: the kinked generators really have turning τa and τb
    for (ta, tb) in [(0i64, 0i64), (2, -2), (-1, 1)] {
        let c = resolved_curve(&s, ta, tb);
        let tau = turning_number(&s, &c).unwrap();
        assert_eq!(tau, concat_turning(ta, tb), "resolution of ({ta}, {tb})");
    }
    for ta in -2..=2i64 {
        for tb in -2..=2i64 {
            let c = resolved_curve(&s, ta, tb);
            let tau = turning_number(&s, &c).unwrap();
            assert_eq!(
                tau,
                ta + tb + 1,
                "geometric resolution of (τa={ta}, τb={tb})"
            );
            assert_eq!(concat_turning(ta, tb), ta + tb + 1);
            assert_eq!(concat_turning(tb, ta), tau, "symmetry");
        }
    }
    println!(
        "criterion 6: PASS — concat rule τa+τb+1 matches geometric resolutions on the square torus for (τa, τb) ∈ {{−2..2}}²"
    );
}

// --- criterion 7 -----------------------------------------------------------

fn random_paths(rng: &mut ChaCha8Rng, count: usize) -> Vec<(DilationSurface, CurvePath)> {
    let specs = [
        corpus::square_torus(),
        corpus::regular_2n_gon(3).unwrap(),
        corpus::regular_2n_gon(4).unwrap(),
    ];
    let mut out = Vec::new();
    while out.len() < count {
        let spec = specs[rng.gen_range(0..specs.len())].clone();
        let s = build_surface(spec).unwrap();
        let basis = homology_basis(&s).unwrap();
        let (reps, _) = canonical_framing(&s, &basis).unwrap();
        let marked = s.marked.clone();
        let base = match rng.gen_range(0..3) {
            0 => reps[rng.gen_range(0..reps.len())].clone(),
            1 => puncture_curve(&s, marked[rng.gen_range(0..marked.len())]).unwrap(),
            _ => {
                let r = &reps[rng.gen_range(0..reps.len())];
                insert_kinks(&s, r, rng.gen_range(-3..=3)).unwrap()
            }
        };
        // random refinements keep the path valid
        let mut path = base;
        for _ in 0..rng.gen_range(0..3) {
            path = subdivide_path(&path);
        }
        out.push((s, path));
    }
    out
}

#[test]
fn criterion_7_reversal_and_subdivision() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x2077);
    let cases = random_paths(&mut rng, 200);
    for (i, (s, path)) in cases.iter().enumerate() {
        let tau = turning_number(s, path).unwrap();
        let sub = subdivide_path(path);
        assert_eq!(
            turning_number(s, &sub).unwrap(),
            tau,
            "subdivision invariance on path {i}"
        );
        let rev = reverse_path(path);
        assert_eq!(
            turning_number(s, &rev).unwrap(),
            -tau,
            "reversal on path {i}"
        );
        let rev_sub = reverse_path(&sub);
        assert_eq!(turning_number(s, &rev_sub).unwrap(), -tau);
    }
    println!(
        "criterion 7: PASS — reversal negates and subdivision preserves turning on 200 random closed paths"
    );
}

// --- criterion 8 -----------------------------------------------------------

#[test]
fn criterion_8_determinism() {
    // byte-identical canonical serializations and reports across two
    // independent builds of the full corpus
    let build_all = || -> Vec<(String, String)> {
        let mut out = Vec::new();
        for (name, spec) in exact_corpus().into_iter().chain(float_corpus()) {
            let s = build_surface(spec).unwrap();
            let ser = surface_to_json(&s.spec);
            let rep = report_to_json(&build_report(&s).unwrap());
            out.push((format!("{name}:ser"), ser));
            out.push((format!("{name}:rep"), rep));
        }
        out
    };
    let run1 = build_all();
    let run2 = build_all();
    for ((n1, a), (n2, b)) in run1.iter().zip(run2.iter()) {
        assert_eq!(n1, n2);
        assert_eq!(a, b, "determinism of {n1}");
    }

    // two separate processes of the CLI agree byte for byte
    let bin = env!("CARGO_BIN_EXE_dilatkit");
    let dir = std::env::temp_dir().join("dilatkit_acceptance");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("octagon.json");
    let s = build_surface(corpus::regular_2n_gon(4).unwrap()).unwrap();
    std::fs::write(&path, surface_to_json(&s.spec)).unwrap();
    let run = || {
        std::process::Command::new(bin)
            .args(["report", "--json"])
            .arg(&path)
            .output()
            .expect("run dilatkit")
    };
    let o1 = run();
    let o2 = run();
    assert!(o1.status.success());
    assert_eq!(o1.stdout, o2.stdout, "CLI reports differ between runs");
    println!(
        "criterion 8: PASS — canonical serializations and reports byte-identical across runs (library and CLI)"
    );
}

// --- supporting invariants -------------------------------------------------

#[test]
fn arf_is_stable_under_moves_and_even_cocycles() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA0F);
    for _ in 0..500 {
        let genus = rng.gen_range(2..=3usize);
        let f = Framing {
            tau: (0..2 * genus).map(|_| rng.gen_range(-6..=6)).collect(),
            r: vec![2 * genus as i64 - 1],
            genus,
        };
        let a0 = arf(&f).unwrap();
        // integral action by an even cocycle preserves arf
        let mut cocycle: Vec<i64> = (0..2 * genus).map(|_| 2 * rng.gen_range(-3..=3)).collect();
        cocycle.extend(std::iter::repeat_n(0, f.n().saturating_sub(1)));
        let g = integral_action(&f, &cocycle).unwrap();
        assert_eq!(arf(&g).unwrap(), a0, "even cocycle changed arf");
        // twists along basis curves preserve arf: τ(b) ± τ(a) and τ(a) ± τ(b)
        for h in 0..genus {
            for eps in [1i64, -1] {
                let mut t = f.tau.clone();
                t[2 * h + 1] += eps * f.tau[2 * h];
                let g = Framing {
                    tau: t,
                    r: f.r.clone(),
                    genus,
                };
                assert_eq!(arf(&g).unwrap(), a0, "a-twist changed arf");
                let mut t = f.tau.clone();
                t[2 * h] += eps * f.tau[2 * h + 1];
                let g = Framing {
                    tau: t,
                    r: f.r.clone(),
                    genus,
                };
                assert_eq!(arf(&g).unwrap(), a0, "b-twist changed arf");
                // resolution twist
                let w = f.tau[2 * h] + f.tau[2 * h + 1];
                let mut t = f.tau.clone();
                t[2 * h] += eps * w;
                t[2 * h + 1] -= eps * w;
                let g = Framing {
                    tau: t,
                    r: f.r.clone(),
                    genus,
                };
                assert_eq!(arf(&g).unwrap(), a0, "resolution twist changed arf");
            }
        }
    }
}

#[test]
fn classification_examples_from_reports() {
    // octagon: κ = (2), genus 2 → evenArf with two components
    let s = build_surface(corpus::regular_2n_gon(4).unwrap()).unwrap();
    let r = build_report(&s).unwrap();
    let c = r.classification.unwrap();
    assert_eq!(c.count, ComponentCount::Finite(2));
    let sig = StratumSignature::new(2, vec![2]).unwrap();
    assert_eq!(classify(&sig).kind.to_string(), "evenArf");
}
