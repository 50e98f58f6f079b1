//! Homology bases and holonomy characters of glued surfaces, with the
//! exponential action and flat projection at the level of holonomy data.
//!
//! Loops are combinatorial: sequences of directed crossings of edge
//! pairings, i.e. closed walks on the dual graph whose vertices are
//! polygons. The surface minus its vertex classes deformation-retracts onto
//! this graph, so its cycles generate H₁ of the punctured surface. The
//! symplectic part of a basis is found by bringing the intersection form to
//! standard skew form over ℤ; intersection numbers are computed
//! combinatorially from the interleaving of crossing slots on polygon
//! boundaries.
//!
//! Character values are products of gluing derivatives along a loop, with
//! inverses for backward crossings. In exact (dilation) mode they are
//! positive rationals; a complex order `m` is stored as its integer real
//! part together with the rational link factor `ρ = e^{−2π·Im m}` so the
//! exponential action stays exact.

use crate::num::{rat_to_f64, Rat};
use crate::surface::{Angle, DilationSurface, EdgeRef, LinkFactor, Mode};
use num::{One, Signed, Zero};
use std::collections::{HashMap, VecDeque};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HolonomyError {
    #[error("period vector is incompatible: {0}")]
    IncompatiblePeriods(String),
    #[error("orders have nonzero imaginary part; flat projection needs real m")]
    NonRealOrders,
    #[error("holonomy data disagree on basis shape")]
    BasisMismatch,
    #[error("internal invariant breach: {0}")]
    Internal(String),
}

/// One directed crossing of an edge pairing: `forward` runs from the side of
/// the pairing's first edge into the second.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Crossing {
    pub pairing: usize,
    pub forward: bool,
}

impl Crossing {
    pub fn reversed(self) -> Self {
        Crossing {
            pairing: self.pairing,
            forward: !self.forward,
        }
    }
}

/// Closed walk on the dual graph, as the cyclic sequence of its crossings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CombLoop {
    pub crossings: Vec<Crossing>,
}

impl CombLoop {
    pub fn reversed(&self) -> CombLoop {
        CombLoop {
            crossings: self.crossings.iter().rev().map(|c| c.reversed()).collect(),
        }
    }

    /// Signed crossing counts per pairing: the class of the loop in the free
    /// abelian group on dual edges.
    pub fn class_vector(&self, n_pairings: usize) -> Vec<i64> {
        let mut v = vec![0i64; n_pairings];
        for c in &self.crossings {
            v[c.pairing] += if c.forward { 1 } else { -1 };
        }
        v
    }
}

/// Endpoints (from-polygon, to-polygon) of a crossing in the dual graph.
pub fn crossing_ends(s: &DilationSurface, c: Crossing) -> (usize, usize) {
    let (ea, eb) = s.spec.pairings[c.pairing];
    if c.forward {
        (ea.polygon, eb.polygon)
    } else {
        (eb.polygon, ea.polygon)
    }
}

fn check_loop_connected(s: &DilationSurface, l: &CombLoop) -> bool {
    let m = l.crossings.len();
    if m == 0 {
        return true;
    }
    for i in 0..m {
        let (_, to) = crossing_ends(s, l.crossings[i]);
        let (from_next, _) = crossing_ends(s, l.crossings[(i + 1) % m]);
        if to != from_next {
            return false;
        }
    }
    true
}

/// Basis of H₁(X ∖ P, ℤ): a symplectic 2g-part (a₁, b₁, …, a_g, b_g) with
/// standard intersection numbers, followed by the first n−1 puncture loops.
/// All n puncture loops are stored separately; their classes sum to zero.
#[derive(Debug, Clone)]
pub struct HomologyBasis {
    pub loops: Vec<CombLoop>,
    pub genus: usize,
    /// Small positively oriented loops around the marked points, in the
    /// canonical marked-point order.
    pub puncture_loops: Vec<CombLoop>,
}

impl HomologyBasis {
    pub fn symplectic(&self) -> &[CombLoop] {
        &self.loops[..2 * self.genus]
    }

    pub fn n_punctures(&self) -> usize {
        self.puncture_loops.len()
    }
}

/// Intersection number of two loops, computed combinatorially.
///
/// Each crossing event gets a distinct slot on the crossed edge pair; inside
/// every polygon, two passages cross exactly when their boundary slots
/// interleave, with the sign given by the cyclic order.
pub fn intersection_number(s: &DilationSurface, l1: &CombLoop, l2: &CombLoop) -> i64 {
    #[derive(Clone, Copy)]
    struct Event {
        loop_id: usize,
        pos: usize,
        crossing: Crossing,
    }
    let mut events: Vec<Event> = Vec::new();
    for (loop_id, l) in [l1, l2].into_iter().enumerate() {
        for (pos, &crossing) in l.crossings.iter().enumerate() {
            events.push(Event {
                loop_id,
                pos,
                crossing,
            });
        }
    }
    let mut per_pairing: HashMap<usize, Vec<usize>> = HashMap::new();
    for (idx, ev) in events.iter().enumerate() {
        per_pairing.entry(ev.crossing.pairing).or_default().push(idx);
    }
    // param[event] = rank/(K+1), measured along the pairing's first edge
    let mut param: HashMap<usize, Rat> = HashMap::new();
    for evs in per_pairing.values() {
        let k_total = evs.len() as i64;
        let mut sorted = evs.clone();
        sorted.sort_by_key(|&i| (events[i].loop_id, events[i].pos));
        for (rank, &ev_idx) in sorted.iter().enumerate() {
            param.insert(
                ev_idx,
                Rat::new((rank as i64 + 1).into(), (k_total + 1).into()),
            );
        }
    }

    // Boundary position of an event in the polygon it departs from or lands
    // in: (polygon, edge index, parameter along the edge direction).
    let position = |ev_idx: usize, departing: bool| -> (usize, usize, Rat) {
        let ev = &events[ev_idx];
        let (ea, eb) = s.spec.pairings[ev.crossing.pairing];
        let t = param[&ev_idx].clone();
        let on_first = ev.crossing.forward == departing;
        if on_first {
            (ea.polygon, ea.edge, t)
        } else {
            (eb.polygon, eb.edge, Rat::one() - t)
        }
    };

    let passages = |loop_id: usize| -> Vec<(usize, usize)> {
        let (base, m) = if loop_id == 0 {
            (0, l1.crossings.len())
        } else {
            (l1.crossings.len(), l2.crossings.len())
        };
        (0..m).map(|i| (base + (i + m - 1) % m, base + i)).collect()
    };

    let mut total = 0i64;
    for &(in1, out1) in &passages(0) {
        let (poly1, e_in1, t_in1) = position(in1, false);
        let (poly1b, e_out1, t_out1) = position(out1, true);
        debug_assert_eq!(poly1, poly1b);
        for &(in2, out2) in &passages(1) {
            let (poly2, e_in2, t_in2) = position(in2, false);
            let (_, e_out2, t_out2) = position(out2, true);
            if poly1 != poly2 {
                continue;
            }
            let a_in = (e_in1, t_in1.clone());
            let a_out = (e_out1, t_out1.clone());
            let b_in = (e_in2, t_in2);
            let b_out = (e_out2, t_out2);
            total += chord_crossing_sign(&a_in, &a_out, &b_in, &b_out);
        }
    }
    total
}

type BoundaryPos = (usize, Rat);

/// Sign of the crossing of chords (a_in → a_out) and (b_in → b_out) in a
/// disk whose boundary positions are ordered CCW by (edge, parameter):
/// +1 when the CCW order reads a_in, b_in, a_out, b_out.
fn chord_crossing_sign(
    a_in: &BoundaryPos,
    a_out: &BoundaryPos,
    b_in: &BoundaryPos,
    b_out: &BoundaryPos,
) -> i64 {
    let in_ccw_arc = |x: &BoundaryPos, from: &BoundaryPos, to: &BoundaryPos| -> bool {
        if from < to {
            from < x && x < to
        } else {
            x > from || x < to
        }
    };
    let b_in_inside = in_ccw_arc(b_in, a_in, a_out);
    let b_out_inside = in_ccw_arc(b_out, a_in, a_out);
    match (b_in_inside, b_out_inside) {
        (true, false) => 1,
        (false, true) => -1,
        _ => 0,
    }
}

/// Free-reduce a crossing word cyclically (cancel adjacent inverse pairs).
fn reduce_cyclic(mut w: Vec<Crossing>) -> Vec<Crossing> {
    loop {
        let mut out: Vec<Crossing> = Vec::with_capacity(w.len());
        for c in w.drain(..) {
            if let Some(last) = out.last() {
                if *last == c.reversed() {
                    out.pop();
                    continue;
                }
            }
            out.push(c);
        }
        let mut changed = false;
        while out.len() >= 2 && *out.first().unwrap() == out.last().unwrap().reversed() {
            out.pop();
            out.remove(0);
            changed = true;
        }
        if !changed {
            return out;
        }
        w = out;
    }
}

/// Tree paths from polygon 0 in the dual graph (BFS, pairings scanned in
/// index order), as crossing sequences.
fn tree_paths(s: &DilationSurface) -> Vec<Vec<Crossing>> {
    let f = s.spec.polygons.len();
    let mut paths: Vec<Option<Vec<Crossing>>> = vec![None; f];
    paths[0] = Some(Vec::new());
    let mut queue = VecDeque::from([0usize]);
    while let Some(p) = queue.pop_front() {
        for (pi, &(ea, eb)) in s.spec.pairings.iter().enumerate() {
            for forward in [true, false] {
                let (from, to) = if forward {
                    (ea.polygon, eb.polygon)
                } else {
                    (eb.polygon, ea.polygon)
                };
                if from == p && paths[to].is_none() {
                    let mut path = paths[p].clone().unwrap();
                    path.push(Crossing {
                        pairing: pi,
                        forward,
                    });
                    paths[to] = Some(path);
                    queue.push_back(to);
                }
            }
        }
    }
    paths.into_iter().map(|p| p.expect("connected")).collect()
}

fn fundamental_loops(s: &DilationSurface) -> Vec<CombLoop> {
    let paths = tree_paths(s);
    let mut used_in_tree = vec![false; s.spec.pairings.len()];
    for path in &paths {
        if let Some(last) = path.last() {
            used_in_tree[last.pairing] = true;
        }
    }
    let mut loops = Vec::new();
    for (pi, &(ea, eb)) in s.spec.pairings.iter().enumerate() {
        if used_in_tree[pi] {
            continue;
        }
        let mut word = paths[ea.polygon].clone();
        word.push(Crossing {
            pairing: pi,
            forward: true,
        });
        word.extend(paths[eb.polygon].iter().rev().map(|c| c.reversed()));
        let word = reduce_cyclic(word);
        debug_assert!(!word.is_empty());
        loops.push(CombLoop { crossings: word });
    }
    loops
}

/// Puncture loop of a vertex class: the crossings of the counterclockwise
/// corner cycle.
pub fn puncture_loop(s: &DilationSurface, class: usize) -> CombLoop {
    let cycle = &s.vertex_classes[class].corners;
    let crossings = cycle
        .iter()
        .map(|c| {
            let k = s.spec.polygons[c.polygon].len();
            let e_in = EdgeRef {
                polygon: c.polygon,
                edge: (c.vertex + k - 1) % k,
            };
            let (pi, first) = s.edge_pairing[&e_in];
            Crossing {
                pairing: pi,
                forward: first,
            }
        })
        .collect();
    CombLoop { crossings }
}

/// Brings a skew-symmetric integer matrix to U·J·Uᵀ = ⊕[[0,dᵢ],[−dᵢ,0]] ⊕ 0.
/// Returns (U, number of blocks).
fn skew_normal_form(mut j: Vec<Vec<i64>>) -> (Vec<Vec<i64>>, usize) {
    let n = j.len();
    let mut u: Vec<Vec<i64>> = (0..n)
        .map(|r| (0..n).map(|c| i64::from(r == c)).collect())
        .collect();

    #[allow(clippy::needless_range_loop)]
    fn row_add(j: &mut [Vec<i64>], u: &mut [Vec<i64>], dst: usize, src: usize, c: i64) {
        let n = j.len();
        for t in 0..n {
            j[dst][t] += c * j[src][t];
        }
        for t in 0..n {
            let v = c * j[t][src];
            j[t][dst] += v;
        }
        for t in 0..u[0].len() {
            u[dst][t] += c * u[src][t];
        }
    }
    fn swap(j: &mut [Vec<i64>], u: &mut [Vec<i64>], x: usize, y: usize) {
        j.swap(x, y);
        for row in j.iter_mut() {
            row.swap(x, y);
        }
        u.swap(x, y);
    }

    let mut s = 0;
    'outer: while s + 1 < n {
        let mut pivot: Option<(usize, usize)> = None;
        for i in s..n {
            for k in (i + 1)..n {
                if j[i][k] != 0
                    && pivot
                        .map(|(pi, pk)| j[i][k].abs() < j[pi][pk].abs())
                        .unwrap_or(true)
                {
                    pivot = Some((i, k));
                }
            }
        }
        let Some((pi, pk)) = pivot else {
            break 'outer;
        };
        // move pivot into position (s, s+1)
        if pi != s {
            swap(&mut j, &mut u, s, pi);
        }
        let pk = if pk == s { pi } else { pk };
        if pk != s + 1 {
            swap(&mut j, &mut u, s + 1, pk);
        }
        if j[s][s + 1] < 0 {
            swap(&mut j, &mut u, s, s + 1);
        }
        let d = j[s][s + 1];
        debug_assert!(d > 0);

        // Euclidean clearing of rows s, s+1 beyond the block; a nonzero
        // remainder is strictly smaller than d, so re-pivoting terminates.
        let mut dirty = false;
        for t in (s + 2)..n {
            let q1 = j[s][t].div_euclid(d);
            if q1 != 0 {
                row_add(&mut j, &mut u, t, s + 1, -q1);
            }
            if j[s][t] != 0 {
                dirty = true;
                break;
            }
            let q2 = j[s + 1][t].div_euclid(d);
            if q2 != 0 {
                row_add(&mut j, &mut u, t, s, q2);
            }
            if j[s + 1][t] != 0 {
                dirty = true;
                break;
            }
        }
        if dirty {
            continue 'outer;
        }
        debug_assert!((s + 2..n).all(|t| j[s][t] == 0 && j[s + 1][t] == 0));
        s += 2;
    }
    (u, s / 2)
}

/// Realizes an integer combination of loops as a single closed walk via an
/// Euler circuit through the multiset of crossings, bridging disconnected
/// pieces with null-homotopic tree-path detours.
fn merge_combination(
    s: &DilationSurface,
    loops: &[CombLoop],
    coeffs: &[i64],
) -> Result<CombLoop, HolonomyError> {
    let mut segments: Vec<Vec<Crossing>> = Vec::new();
    for (l, &c) in loops.iter().zip(coeffs) {
        let copy = if c >= 0 { l.clone() } else { l.reversed() };
        for _ in 0..c.unsigned_abs() {
            segments.push(copy.crossings.clone());
        }
    }
    if segments.is_empty() {
        return Err(HolonomyError::Internal(
            "cannot realize the zero class as a loop".into(),
        ));
    }

    // union-find over segments joined by shared polygons
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    let mut parent: Vec<usize> = (0..segments.len()).collect();
    let mut anchor: HashMap<usize, usize> = HashMap::new();
    for (si, seg) in segments.iter().enumerate() {
        for c in seg {
            let (from, to) = crossing_ends(s, *c);
            for p in [from, to] {
                match anchor.get(&p) {
                    Some(&other) => {
                        let (ra, rb) = (find(&mut parent, si), find(&mut parent, other));
                        if ra != rb {
                            parent[ra] = rb;
                        }
                    }
                    None => {
                        anchor.insert(p, si);
                    }
                }
            }
        }
    }
    let paths = tree_paths(s);
    let seg_start: Vec<usize> = segments
        .iter()
        .map(|seg| crossing_ends(s, seg[0]).0)
        .collect();
    let root_set = find(&mut parent, 0);
    let n_orig = segments.len();
    for si in 1..n_orig {
        if find(&mut parent, si) != root_set {
            let from = seg_start[0];
            let target = seg_start[si];
            let mut bridge: Vec<Crossing> =
                paths[from].iter().rev().map(|c| c.reversed()).collect();
            bridge.extend(paths[target].iter().cloned());
            if !bridge.is_empty() {
                let back: Vec<Crossing> = bridge.iter().rev().map(|c| c.reversed()).collect();
                segments.push(bridge);
                segments.push(back);
            }
            let r = find(&mut parent, si);
            parent[r] = root_set;
        }
    }

    let mut multi: Vec<Crossing> = Vec::new();
    for seg in &segments {
        multi.extend(seg.iter().cloned());
    }

    // Hierholzer over the directed crossing multiset
    let mut out_edges: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, c) in multi.iter().enumerate() {
        let (from, _) = crossing_ends(s, *c);
        out_edges.entry(from).or_default().push(i);
    }
    for v in out_edges.values_mut() {
        v.sort_by_key(|&i| (multi[i].pairing, multi[i].forward, i));
        v.reverse();
    }
    let start = crossing_ends(s, multi[0]).0;
    let mut stack: Vec<usize> = vec![start];
    let mut stack_events: Vec<usize> = Vec::new();
    let mut circuit: Vec<usize> = Vec::new();
    let mut used = vec![false; multi.len()];
    while let Some(&v) = stack.last() {
        let next = out_edges.get_mut(&v).and_then(|list| loop {
            match list.pop() {
                Some(e) if used[e] => continue,
                other => break other,
            }
        });
        match next {
            Some(e) => {
                used[e] = true;
                let (_, to) = crossing_ends(s, multi[e]);
                stack.push(to);
                stack_events.push(e);
            }
            None => {
                stack.pop();
                if let Some(e) = stack_events.pop() {
                    circuit.push(e);
                }
            }
        }
    }
    if circuit.len() != multi.len() {
        return Err(HolonomyError::Internal(
            "euler circuit did not cover the combination".into(),
        ));
    }
    circuit.reverse();
    let word = reduce_cyclic(circuit.into_iter().map(|e| multi[e]).collect());
    if word.is_empty() {
        return Err(HolonomyError::Internal(
            "combination reduced to the empty loop".into(),
        ));
    }
    Ok(CombLoop { crossings: word })
}

/// Computes a homology basis with symplectic part (a₁, b₁, …, a_g, b_g) and
/// puncture loops around the first n−1 marked points as the remaining
/// generators. Deterministic for a given surface.
pub fn homology_basis(s: &DilationSurface) -> Result<HomologyBasis, HolonomyError> {
    let fund = fundamental_loops(s);
    let r = fund.len();
    let expected_rank = s.spec.pairings.len() + 1 - s.spec.polygons.len();
    if r != expected_rank {
        return Err(HolonomyError::Internal(format!(
            "fundamental loop count {r} does not match E − F + 1 = {expected_rank}"
        )));
    }

    let mut gram = vec![vec![0i64; r]; r];
    for i in 0..r {
        for k in (i + 1)..r {
            let v = intersection_number(s, &fund[i], &fund[k]);
            gram[i][k] = v;
            gram[k][i] = -v;
        }
    }
    let (u, blocks) = skew_normal_form(gram.clone());
    if blocks != s.genus {
        return Err(HolonomyError::Internal(format!(
            "symplectic rank {blocks} does not match genus {}",
            s.genus
        )));
    }

    let mut loops = Vec::new();
    for blk in 0..blocks {
        for row in [2 * blk, 2 * blk + 1] {
            loops.push(merge_combination(s, &fund, &u[row])?);
        }
    }

    // Independent check on the realized loops: the intersection matrix of the
    // merged walks must be exactly standard.
    for i in 0..loops.len() {
        for k in 0..loops.len() {
            if i == k {
                continue;
            }
            let expect = if i % 2 == 0 && k == i + 1 {
                1
            } else if i % 2 == 1 && k + 1 == i {
                -1
            } else {
                0
            };
            let got = intersection_number(s, &loops[i], &loops[k]);
            if got != expect {
                return Err(HolonomyError::Internal(format!(
                    "realized symplectic loops have ⟨{i},{k}⟩ = {got}, want {expect}"
                )));
            }
        }
    }

    let puncture_loops: Vec<CombLoop> =
        s.marked.iter().map(|&ci| puncture_loop(s, ci)).collect();
    let n = puncture_loops.len();
    if n > 0 {
        for pl in puncture_loops.iter().take(n - 1) {
            loops.push(pl.clone());
        }
    }

    Ok(HomologyBasis {
        loops,
        genus: s.genus,
        puncture_loops,
    })
}

// ---------------------------------------------------------------------------
// Holonomy data and the exponential action
// ---------------------------------------------------------------------------

/// A character value: positive rational in exact (dilation) mode, complex in
/// float mode.
#[derive(Debug, Clone, PartialEq)]
pub enum CharVal {
    Exact(Rat),
    Approx { re: f64, im: f64 },
}

impl CharVal {
    pub fn one() -> Self {
        CharVal::Exact(Rat::one())
    }

    pub fn modulus_f64(&self) -> f64 {
        match self {
            CharVal::Exact(r) => rat_to_f64(r),
            CharVal::Approx { re, im } => re.hypot(*im),
        }
    }

    pub fn to_complex(&self) -> (f64, f64) {
        match self {
            CharVal::Exact(r) => (rat_to_f64(r), 0.0),
            CharVal::Approx { re, im } => (*re, *im),
        }
    }

    pub fn is_one(&self, tol: f64) -> bool {
        match self {
            CharVal::Exact(r) => r.is_one(),
            CharVal::Approx { re, im } => (re - 1.0).abs() < tol && im.abs() < tol,
        }
    }

    pub fn is_positive_real(&self, tol: f64) -> bool {
        match self {
            CharVal::Exact(r) => r.is_positive(),
            CharVal::Approx { re, im } => *re > 0.0 && im.abs() < tol,
        }
    }

    pub fn is_unit_modulus(&self, tol: f64) -> bool {
        (self.modulus_f64() - 1.0).abs() < tol
    }
}

/// A complex cone order m. The exact form keeps Re(m) rational (integer for
/// dilation surfaces) and the link factor ρ = e^{−2π·Im m} as a positive
/// rational, so Im(m) = −ln(ρ)/2π never needs floating arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub enum Order {
    Exact { re: Rat, rho: Rat },
    Approx { re: f64, im: f64 },
}

impl Order {
    pub fn zero() -> Self {
        Order::Exact {
            re: Rat::zero(),
            rho: Rat::one(),
        }
    }

    pub fn re_f64(&self) -> f64 {
        match self {
            Order::Exact { re, .. } => rat_to_f64(re),
            Order::Approx { re, .. } => *re,
        }
    }

    pub fn im_f64(&self) -> f64 {
        match self {
            Order::Exact { rho, .. } => -rat_to_f64(rho).ln() / std::f64::consts::TAU,
            Order::Approx { im, .. } => *im,
        }
    }
}

/// Holonomy data (χ, m): character values on the basis loops and the tuple
/// of cone orders, with the puncture-loop values carried alongside.
#[derive(Debug, Clone, PartialEq)]
pub struct HolonomyData {
    pub chi: Vec<CharVal>,
    pub chi_punctures: Vec<CharVal>,
    pub m: Vec<Order>,
    pub genus: usize,
}

impl HolonomyData {
    pub fn n(&self) -> usize {
        self.m.len()
    }

    fn same_shape(&self, other: &HolonomyData) -> bool {
        self.chi.len() == other.chi.len()
            && self.m.len() == other.m.len()
            && self.genus == other.genus
    }
}

/// A period of a holomorphic form, stored through its exponential: in exact
/// form e^{period} = mul·e^{2πi·turns} with mul a positive rational, so
/// dilation-preserving periods (turns ∈ ℤ) act exactly.
#[derive(Debug, Clone, PartialEq)]
pub enum Period {
    Exact { mul: Rat, turns: Rat },
    Approx { re: f64, im: f64 },
}

impl Period {
    pub fn zero() -> Self {
        Period::Exact {
            mul: Rat::one(),
            turns: Rat::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Period::Exact { mul, turns } => mul.is_one() && turns.is_zero(),
            Period::Approx { re, im } => *re == 0.0 && *im == 0.0,
        }
    }

    pub fn add(&self, other: &Period) -> Period {
        match (self, other) {
            (Period::Exact { mul: m1, turns: t1 }, Period::Exact { mul: m2, turns: t2 }) => {
                Period::Exact {
                    mul: m1 * m2,
                    turns: t1 + t2,
                }
            }
            _ => {
                let (r1, i1) = self.to_complex();
                let (r2, i2) = other.to_complex();
                Period::Approx {
                    re: r1 + r2,
                    im: i1 + i2,
                }
            }
        }
    }

    pub fn negate(&self) -> Period {
        match self {
            Period::Exact { mul, turns } => Period::Exact {
                mul: mul.recip(),
                turns: -turns.clone(),
            },
            Period::Approx { re, im } => Period::Approx { re: -re, im: -im },
        }
    }

    /// The period as a complex number (Re, Im).
    pub fn to_complex(&self) -> (f64, f64) {
        match self {
            Period::Exact { mul, turns } => (
                rat_to_f64(mul).ln(),
                std::f64::consts::TAU * rat_to_f64(turns),
            ),
            Period::Approx { re, im } => (*re, *im),
        }
    }
}

/// A residue: the amount added to a cone order by the Ω(X, P) action.
pub type Residue = Order;

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodVector {
    /// One period per basis loop (symplectic part, then puncture part).
    pub periods: Vec<Period>,
    /// One residue per marked point; zero for the Ω(X) action.
    pub residues: Vec<Residue>,
}

impl PeriodVector {
    pub fn zero(n_loops: usize, n_punctures: usize) -> PeriodVector {
        PeriodVector {
            periods: vec![Period::zero(); n_loops],
            residues: vec![Order::zero(); n_punctures],
        }
    }

    /// Checks Σ residues = 0 and that the period on every puncture loop in
    /// the basis equals 2πi·residue.
    pub fn validate(&self, genus: usize) -> Result<(), HolonomyError> {
        let n = self.residues.len();
        match residue_sum(&self.residues) {
            ResidueSum::Zero => {}
            ResidueSum::Nonzero(desc) => {
                return Err(HolonomyError::IncompatiblePeriods(format!(
                    "residues do not sum to zero: {desc}"
                )))
            }
        }
        let expected = 2 * genus + n.saturating_sub(1);
        if self.periods.len() != expected {
            return Err(HolonomyError::IncompatiblePeriods(format!(
                "expected {expected} periods, got {}",
                self.periods.len()
            )));
        }
        for j in 0..n.saturating_sub(1) {
            let p = &self.periods[2 * genus + j];
            if !period_matches_residue(p, &self.residues[j]) {
                return Err(HolonomyError::IncompatiblePeriods(format!(
                    "period on puncture loop {j} does not equal 2πi·residue"
                )));
            }
        }
        Ok(())
    }
}

enum ResidueSum {
    Zero,
    Nonzero(String),
}

fn residue_sum(residues: &[Residue]) -> ResidueSum {
    let mut exact = true;
    let mut re_sum = Rat::zero();
    let mut rho_prod = Rat::one();
    let mut re_f = 0.0;
    let mut im_f = 0.0;
    for r in residues {
        match r {
            Order::Exact { re, rho } => {
                re_sum += re.clone();
                rho_prod *= rho.clone();
            }
            Order::Approx { re, im } => {
                exact = false;
                re_f += re;
                im_f += im;
            }
        }
        if !exact {
            re_f = residues.iter().map(|r| r.re_f64()).sum();
            im_f = residues.iter().map(|r| r.im_f64()).sum();
            break;
        }
    }
    if exact {
        if re_sum.is_zero() && rho_prod.is_one() {
            ResidueSum::Zero
        } else {
            ResidueSum::Nonzero(format!("Σre = {re_sum}, Πρ = {rho_prod}"))
        }
    } else if re_f.abs() < crate::surface::FLOAT_TOL && im_f.abs() < crate::surface::FLOAT_TOL {
        ResidueSum::Zero
    } else {
        ResidueSum::Nonzero(format!("Σ = {re_f} + {im_f}i"))
    }
}

/// period == 2πi·residue, i.e. e^{period} = ρ·e^{2πi·re} with turns = re.
fn period_matches_residue(p: &Period, r: &Residue) -> bool {
    match (p, r) {
        (Period::Exact { mul, turns }, Order::Exact { re, rho }) => mul == rho && turns == re,
        _ => {
            let (pre, pim) = p.to_complex();
            let (rre, rim) = (r.re_f64(), r.im_f64());
            let want_re = -std::f64::consts::TAU * rim;
            let want_im = std::f64::consts::TAU * rre;
            (pre - want_re).abs() < crate::surface::FLOAT_TOL
                && (pim - want_im).abs() < crate::surface::FLOAT_TOL
        }
    }
}

/// Character of the surface on a homology basis.
pub fn character(
    s: &DilationSurface,
    basis: &HomologyBasis,
) -> Result<HolonomyData, HolonomyError> {
    let chi = basis
        .loops
        .iter()
        .map(|l| loop_character(s, l))
        .collect::<Result<Vec<_>, _>>()?;
    let chi_punctures = basis
        .puncture_loops
        .iter()
        .map(|l| loop_character(s, l))
        .collect::<Result<Vec<_>, _>>()?;

    // the character of a puncture loop must equal the vertex link factor
    for (&ci, ch) in s.marked.iter().zip(&chi_punctures) {
        let ok = match (&s.vertex_classes[ci].link_factor, ch) {
            (LinkFactor::Exact(a), CharVal::Exact(b)) => a == b,
            (lf, ch) => {
                let (re, im) = match lf {
                    LinkFactor::Exact(r) => (rat_to_f64(r), 0.0),
                    LinkFactor::Approx { re, im } => (*re, *im),
                };
                let (cre, cim) = ch.to_complex();
                (re - cre).abs() < crate::surface::FLOAT_TOL
                    && (im - cim).abs() < crate::surface::FLOAT_TOL
            }
        };
        if !ok {
            return Err(HolonomyError::Internal(format!(
                "puncture character disagrees with vertex link factor at class {ci}"
            )));
        }
    }

    let m = s
        .cone_points()
        .iter()
        .map(|cp| match (&cp.angle, &cp.rho) {
            (Angle::Turns(k), Some(rho)) => Order::Exact {
                re: Rat::from_integer((k - 1).into()),
                rho: rho.clone(),
            },
            _ => Order::Approx {
                re: cp.order_re_f64(),
                im: cp.order_im,
            },
        })
        .collect();

    Ok(HolonomyData {
        chi,
        chi_punctures,
        m,
        genus: s.genus,
    })
}

/// χ(loop) = product of gluing derivatives crossed by the loop, with
/// inverses when crossed backward.
pub fn loop_character(s: &DilationSurface, l: &CombLoop) -> Result<CharVal, HolonomyError> {
    if !check_loop_connected(s, l) {
        return Err(HolonomyError::Internal(
            "crossing sequence is not a closed dual walk".into(),
        ));
    }
    if s.mode() == Mode::Exact && s.derivative_dilation {
        let mut acc = Rat::one();
        for c in &l.crossings {
            let a = &s.gluings[c.pairing].a;
            debug_assert!(a.is_positive_real());
            if c.forward {
                acc *= a.re.clone();
            } else {
                acc /= a.re.clone();
            }
        }
        Ok(CharVal::Exact(acc))
    } else {
        let mut cur = (1.0f64, 0.0f64);
        for c in &l.crossings {
            let a = if c.forward {
                s.gluings[c.pairing].a.clone()
            } else {
                s.gluings[c.pairing].a.inv()
            };
            let (ar, ai) = a.to_f64();
            cur = (cur.0 * ar - cur.1 * ai, cur.0 * ai + cur.1 * ar);
        }
        Ok(CharVal::Approx {
            re: cur.0,
            im: cur.1,
        })
    }
}

/// The exponential action: χ′ = χ·e^{period}, m′ = m + residue.
pub fn exponential_action(
    h: &HolonomyData,
    alpha: &PeriodVector,
) -> Result<HolonomyData, HolonomyError> {
    alpha.validate(h.genus)?;
    if alpha.residues.len() != h.m.len() || alpha.periods.len() != h.chi.len() {
        return Err(HolonomyError::BasisMismatch);
    }
    let chi = h
        .chi
        .iter()
        .zip(&alpha.periods)
        .map(|(c, p)| apply_period(c, p))
        .collect();
    let m: Vec<Order> = h
        .m
        .iter()
        .zip(&alpha.residues)
        .map(|(m, r)| add_orders(m, r))
        .collect();
    let chi_punctures = h
        .chi_punctures
        .iter()
        .zip(&alpha.residues)
        .map(|(c, r)| apply_period(c, &residue_to_period(r)))
        .collect();
    Ok(HolonomyData {
        chi,
        chi_punctures,
        m,
        genus: h.genus,
    })
}

fn residue_to_period(r: &Residue) -> Period {
    match r {
        Order::Exact { re, rho } => Period::Exact {
            mul: rho.clone(),
            turns: re.clone(),
        },
        Order::Approx { re, im } => Period::Approx {
            re: -std::f64::consts::TAU * im,
            im: std::f64::consts::TAU * re,
        },
    }
}

fn apply_period(c: &CharVal, p: &Period) -> CharVal {
    match (c, p) {
        (CharVal::Exact(chi), Period::Exact { mul, turns }) if turns.is_integer() => {
            CharVal::Exact(chi * mul)
        }
        _ => {
            let (cr, ci) = c.to_complex();
            let (pr, pi) = p.to_complex();
            let scale = pr.exp();
            let (er, ei) = (scale * pi.cos(), scale * pi.sin());
            CharVal::Approx {
                re: cr * er - ci * ei,
                im: cr * ei + ci * er,
            }
        }
    }
}

pub fn add_orders(a: &Order, b: &Order) -> Order {
    match (a, b) {
        (Order::Exact { re: r1, rho: p1 }, Order::Exact { re: r2, rho: p2 }) => Order::Exact {
            re: r1 + r2,
            rho: p1 * p2,
        },
        _ => Order::Approx {
            re: a.re_f64() + b.re_f64(),
            im: a.im_f64() + b.im_f64(),
        },
    }
}

pub fn sub_orders(a: &Order, b: &Order) -> Order {
    match (a, b) {
        (Order::Exact { re: r1, rho: p1 }, Order::Exact { re: r2, rho: p2 }) => Order::Exact {
            re: r1 - r2,
            rho: p1 / p2,
        },
        _ => Order::Approx {
            re: a.re_f64() - b.re_f64(),
            im: a.im_f64() - b.im_f64(),
        },
    }
}

/// Projection to the unique flat structure: χ′ = χ/|χ| with m unchanged.
/// Requires all orders real.
pub fn flat_projection(h: &HolonomyData) -> Result<HolonomyData, HolonomyError> {
    for m in &h.m {
        let real = match m {
            Order::Exact { rho, .. } => rho.is_one(),
            Order::Approx { im, .. } => im.abs() < crate::surface::FLOAT_TOL,
        };
        if !real {
            return Err(HolonomyError::NonRealOrders);
        }
    }
    let project = |c: &CharVal| -> CharVal {
        match c {
            CharVal::Exact(_) => CharVal::Exact(Rat::one()),
            CharVal::Approx { re, im } => {
                let n = re.hypot(*im);
                CharVal::Approx {
                    re: re / n,
                    im: im / n,
                }
            }
        }
    };
    Ok(HolonomyData {
        chi: h.chi.iter().map(project).collect(),
        chi_punctures: h.chi_punctures.iter().map(project).collect(),
        m: h.m.clone(),
        genus: h.genus,
    })
}

/// The unique α with exponential_action(h2, α) = h1: residues m₁ − m₂,
/// periods log(χ₁/χ₂). On the symplectic part the principal branch
/// (Im ∈ (−π, π]) is taken; on puncture loops the period is pinned to
/// 2πi·residue as the torsor structure requires.
pub fn torsor_difference(
    h1: &HolonomyData,
    h2: &HolonomyData,
) -> Result<PeriodVector, HolonomyError> {
    if !h1.same_shape(h2) {
        return Err(HolonomyError::BasisMismatch);
    }
    let residues: Vec<Order> = h1
        .m
        .iter()
        .zip(&h2.m)
        .map(|(a, b)| sub_orders(a, b))
        .collect();
    let g = h1.genus;
    let mut periods = Vec::with_capacity(h1.chi.len());
    for (i, (c1, c2)) in h1.chi.iter().zip(&h2.chi).enumerate() {
        if i < 2 * g {
            periods.push(principal_log_ratio(c1, c2));
        } else {
            periods.push(residue_to_period(&residues[i - 2 * g]));
        }
    }
    let alpha = PeriodVector { periods, residues };
    alpha.validate(g)?;
    Ok(alpha)
}

fn principal_log_ratio(c1: &CharVal, c2: &CharVal) -> Period {
    match (c1, c2) {
        (CharVal::Exact(a), CharVal::Exact(b)) => Period::Exact {
            mul: a / b,
            turns: Rat::zero(),
        },
        _ => {
            let (r1, i1) = c1.to_complex();
            let (r2, i2) = c2.to_complex();
            let d = r2 * r2 + i2 * i2;
            let (qr, qi) = ((r1 * r2 + i1 * i2) / d, (i1 * r2 - r1 * i2) / d);
            Period::Approx {
                re: qr.hypot(qi).ln(),
                im: qi.atan2(qr),
            }
        }
    }
}

/// Holonomy type of a surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HolonomyKind {
    Translation,
    Dilation,
    Flat,
    Affine,
}

impl std::fmt::Display for HolonomyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            HolonomyKind::Translation => "translation",
            HolonomyKind::Dilation => "dilation",
            HolonomyKind::Flat => "flat",
            HolonomyKind::Affine => "affine",
        };
        write!(f, "{s}")
    }
}

pub fn holonomy_kind(s: &DilationSurface) -> Result<HolonomyKind, HolonomyError> {
    let basis = homology_basis(s)?;
    let h = character(s, &basis)?;
    Ok(holonomy_kind_of(&h))
}

/// Classifies holonomy data: translation if χ ≡ 1; dilation if all values
/// are positive real; flat if all values have modulus one and all orders are
/// real; affine otherwise.
pub fn holonomy_kind_of(h: &HolonomyData) -> HolonomyKind {
    let tol = crate::surface::FLOAT_TOL;
    let all = || h.chi.iter().chain(&h.chi_punctures);
    if all().all(|c| c.is_one(tol)) {
        return HolonomyKind::Translation;
    }
    if all().all(|c| c.is_positive_real(tol)) {
        return HolonomyKind::Dilation;
    }
    let m_real = h.m.iter().all(|m| match m {
        Order::Exact { rho, .. } => rho.is_one(),
        Order::Approx { im, .. } => im.abs() < tol,
    });
    if m_real && all().all(|c| c.is_unit_modulus(tol)) {
        return HolonomyKind::Flat;
    }
    HolonomyKind::Affine
}
