//! Invariant reports: everything the tool knows about one surface, with a
//! digest of the canonical serialization so runs are byte-reproducible.

use crate::classify::{classify, ComponentCount, StratumSignature};
use crate::framing::{boundary_turning, canonical_framing, Framing};
use crate::holonomy::{character, holonomy_kind_of, homology_basis, HolonomyData, HolonomyKind};
use crate::surface::format::surface_to_json;
use crate::surface::{Angle, DilationSurface};
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(transparent)]
    Holonomy(#[from] crate::holonomy::HolonomyError),
    #[error(transparent)]
    Framing(#[from] crate::framing::FramingError),
}

#[derive(Debug, Clone)]
pub struct Report {
    pub digest: String,
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub genus: usize,
    pub n: usize,
    pub cone_table: Vec<ConeRow>,
    pub kind: HolonomyKind,
    pub holonomy: HolonomyData,
    /// Canonical framing when constructible (dilation surfaces with
    /// realizable basis representatives).
    pub framing: Option<Framing>,
    pub classification: Option<Classification>,
    pub version: &'static str,
}

#[derive(Debug, Clone)]
pub struct ConeRow {
    pub angle: Angle,
    pub log_factor: f64,
    pub order_re: Angle,
    pub order_im: f64,
}

#[derive(Debug, Clone)]
pub struct Classification {
    pub kind: String,
    pub count: ComponentCount,
    pub arf: Option<u8>,
}

pub fn surface_digest(s: &DilationSurface) -> String {
    let canonical = surface_to_json(&s.spec);
    let mut hasher = Sha256::new();
    hasher.update(canonical.as_bytes());
    hex::encode(hasher.finalize())
}

pub fn build_report(s: &DilationSurface) -> Result<Report, ReportError> {
    let basis = homology_basis(s)?;
    let holonomy = character(s, &basis)?;
    let kind = holonomy_kind_of(&holonomy);
    let cone_table = s
        .cone_points()
        .iter()
        .map(|cp| ConeRow {
            angle: cp.angle.clone(),
            log_factor: cp.log_factor,
            order_re: cp.order_re.clone(),
            order_im: cp.order_im,
        })
        .collect();

    let framing = canonical_framing(s, &basis).ok().map(|(_, f)| f);
    let classification = match boundary_turning(s) {
        Ok(r) => {
            let kappa: Vec<i64> = r.iter().map(|x| x - 1).collect();
            StratumSignature::new(s.genus, kappa).ok().map(|sig| {
                let oc = classify(&sig);
                Classification {
                    kind: oc.kind.to_string(),
                    count: oc.count,
                    arf: framing
                        .as_ref()
                        .and_then(|f| crate::framing::arf(f).ok()),
                }
            })
        }
        Err(_) => None,
    };

    Ok(Report {
        digest: surface_digest(s),
        vertices: s.vertex_classes.len(),
        edges: s.spec.pairings.len(),
        faces: s.spec.polygons.len(),
        genus: s.genus,
        n: s.n_marked(),
        cone_table,
        kind,
        holonomy,
        framing,
        classification,
        version: crate::VERSION,
    })
}

fn angle_json(a: &Angle) -> String {
    match a {
        Angle::Turns(k) => format!("{{\"turns\":{k}}}"),
        Angle::Approx(t) => format!("{{\"turns_approx\":\"{t}\"}}"),
    }
}

/// Canonical JSON rendering; byte-identical across runs in exact mode.
pub fn report_to_json(r: &Report) -> String {
    let mut out = String::new();
    let _ = write!(
        out,
        "{{\"digest\":\"{}\",\"topology\":{{\"V\":{},\"E\":{},\"F\":{},\"genus\":{},\"n\":{}}},\"cones\":[",
        r.digest, r.vertices, r.edges, r.faces, r.genus, r.n
    );
    for (i, row) in r.cone_table.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(
            out,
            "{{\"angle\":{},\"log_factor\":\"{}\",\"order_re\":{},\"order_im\":\"{}\"}}",
            angle_json(&row.angle),
            row.log_factor,
            angle_json(&row.order_re),
            row.order_im
        );
    }
    let _ = write!(out, "],\"kind\":\"{}\",\"holonomy\":", r.kind);
    out.push_str(&crate::surface::format::holonomy_to_json(&r.holonomy));
    out.push_str(",\"framing\":");
    match &r.framing {
        Some(f) => out.push_str(&crate::surface::format::framing_to_json(f, None)),
        None => out.push_str("null"),
    }
    out.push_str(",\"classification\":");
    match &r.classification {
        Some(c) => {
            let count = match c.count {
                ComponentCount::Finite(k) => k.to_string(),
                ComponentCount::Infinite => "\"infinite\"".to_string(),
            };
            let arf = c
                .arf
                .map(|a| a.to_string())
                .unwrap_or_else(|| "null".to_string());
            let _ = write!(
                out,
                "{{\"kind\":\"{}\",\"count\":{count},\"arf\":{arf}}}",
                c.kind
            );
        }
        None => out.push_str("null"),
    }
    let _ = write!(out, ",\"version\":\"{}\"}}", r.version);
    out
}
