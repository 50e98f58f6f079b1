//! Command-line front end. Structured output goes to stdout, diagnostics to
//! stderr. Exit codes: 0 success, 1 validation failure, 2 usage error,
//! 3 internal invariant breach.

use crate::classify::{
    classify, enumerate_orbits_bfs, same_orbit, ClassifyError, StratumSignature,
};
use crate::framing::{
    boundary_turning, canonical_framing, turning_number, twist_framing, Framing,
};
use crate::holonomy::{
    character, exponential_action, flat_projection, homology_basis,
    torsor_difference,
};
use crate::num::Rat;
use crate::report::{build_report, report_to_json};
use crate::surface::format::{
    framing_from_json, framing_to_json, holonomy_from_json, holonomy_to_json, path_from_json,
    period_vector_from_json, period_vector_to_json, surface_from_json, surface_to_json,
};
use crate::surface::{build_surface, corpus, validate_spec, DilationSurface, Mode, SurfaceError};
use clap::{Parser, Subcommand};
use num::BigInt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Parser)]
#[command(
    name = "dilatkit",
    version,
    about = "Polygon-glued affine and dilation surfaces: invariants, holonomy, framings, components"
)]
pub struct Cli {
    /// Computation mode override: exact | float (also DILATKIT_MODE)
    #[arg(long, global = true)]
    mode: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a surface file; exit 0 when every invariant holds
    Validate { path: PathBuf },
    /// Full invariant report for a surface
    Report {
        path: PathBuf,
        /// Emit the canonical JSON document
        #[arg(long)]
        json: bool,
    },
    /// Holonomy data (χ, m) on the canonical homology basis
    Holonomy { path: PathBuf },
    /// Apply the exponential action to holonomy data
    Act {
        holonomy: PathBuf,
        periods: PathBuf,
    },
    /// Project holonomy data to the unique flat structure
    Flatten { holonomy: PathBuf },
    /// Torsor difference of two holonomy documents (α with α·h2 = h1)
    Diff { h1: PathBuf, h2: PathBuf },
    /// Turning number of a closed path on a dilation surface
    Turning { surface: PathBuf, path: PathBuf },
    /// Canonical framing document of a dilation surface
    Framing { surface: PathBuf },
    /// Turning offsets of a dilation-preserving period vector
    Twist { surface: PathBuf, periods: PathBuf },
    /// Component classification of a stratum signature
    Classify {
        #[arg(long)]
        genus: usize,
        /// Comma-separated integer vector κ, e.g. "3,-3"
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        kappa: String,
    },
    /// Decide whether two framing documents lie in the same orbit
    OrbitEqual {
        f1: PathBuf,
        f2: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        bound: usize,
    },
    /// Enumerate framing orbits of a signature by breadth-first search
    Orbits {
        #[arg(long)]
        genus: usize,
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        kappa: String,
        #[arg(long, default_value_t = 1_000_000)]
        bound: usize,
    },
    /// Generate built-in surface families with expected-invariant sidecars
    Corpus {
        /// square_torus | regular_2n_gon | chamber | troyanov
        name: String,
        /// Generator parameter (integer or rational p/q); repeatable
        #[arg(long = "param", allow_hyphen_values = true)]
        params: Vec<String>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Render the polygon presentation as SVG
    Svg {
        surface: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String, (i32, String)> {
    std::fs::read_to_string(path)
        .map_err(|e| (EXIT_USAGE, format!("cannot read {}: {e}", path.display())))
}

fn parse_rat(text: &str) -> Result<Rat, (i32, String)> {
    let parts: Vec<&str> = text.split('/').collect();
    let int = |s: &str| {
        BigInt::from_str(s.trim()).map_err(|_| (EXIT_USAGE, format!("bad rational '{text}'")))
    };
    match parts.as_slice() {
        [a] => Ok(Rat::from_integer(int(a)?)),
        [a, b] => {
            let d = int(b)?;
            if d == BigInt::from(0) {
                return Err((EXIT_USAGE, format!("zero denominator in '{text}'")));
            }
            Ok(Rat::new(int(a)?, d))
        }
        _ => Err((EXIT_USAGE, format!("bad rational '{text}'"))),
    }
}

fn parse_kappa(text: &str) -> Result<Vec<i64>, (i32, String)> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| (EXIT_USAGE, format!("bad κ entry '{t}'")))
        })
        .collect()
}

fn mode_override(cli_mode: &Option<String>) -> Result<Option<Mode>, (i32, String)> {
    let chosen = cli_mode
        .clone()
        .or_else(|| std::env::var("DILATKIT_MODE").ok());
    match chosen.as_deref() {
        None => Ok(None),
        Some("exact") => Ok(Some(Mode::Exact)),
        Some("float") => Ok(Some(Mode::Float)),
        Some(other) => Err((EXIT_USAGE, format!("unknown mode '{other}'"))),
    }
}

fn load_surface(
    path: &Path,
    mode: Option<Mode>,
) -> Result<DilationSurface, (i32, String)> {
    let text = read(path)?;
    let mut spec =
        surface_from_json(&text).map_err(|e| (EXIT_VALIDATION, format!("ParseError: {e}")))?;
    if let Some(m) = mode {
        spec.options.mode = m;
    }
    build_surface(spec).map_err(|e| match e {
        SurfaceError::InternalInvariant(_) => (EXIT_INTERNAL, e.to_string()),
        other => (EXIT_VALIDATION, other.to_string()),
    })
}

fn classify_exit(e: ClassifyError) -> (i32, String) {
    match e {
        ClassifyError::InvalidSignature { .. } => (EXIT_VALIDATION, e.to_string()),
        ClassifyError::SignatureMismatch => (EXIT_VALIDATION, e.to_string()),
        _ => (EXIT_USAGE, e.to_string()),
    }
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(()) => EXIT_OK,
        Err((code, msg)) => {
            eprintln!("{msg}");
            code
        }
    }
}

fn dispatch(cli: &Cli) -> Result<(), (i32, String)> {
    let mode = mode_override(&cli.mode)?;
    match &cli.command {
        Command::Validate { path } => {
            let text = read(path)?;
            let mut spec = surface_from_json(&text)
                .map_err(|e| (EXIT_VALIDATION, format!("ParseError: {e}")))?;
            if let Some(m) = mode {
                spec.options.mode = m;
            }
            let errors = validate_spec(&spec);
            if errors.is_empty() {
                println!("ok");
                Ok(())
            } else {
                for e in &errors {
                    eprintln!("{}: {e}", error_code(e));
                }
                Err((EXIT_VALIDATION, format!("{} invariant(s) violated", errors.len())))
            }
        }
        Command::Report { path, json } => {
            let s = load_surface(path, mode)?;
            if !crate::surface::check_gauss_bonnet(&s) {
                return Err((EXIT_INTERNAL, "Gauss-Bonnet check failed".into()));
            }
            let r = build_report(&s).map_err(|e| (EXIT_INTERNAL, e.to_string()))?;
            if *json {
                println!("{}", report_to_json(&r));
            } else {
                print_report_text(&r);
            }
            Ok(())
        }
        Command::Holonomy { path } => {
            let s = load_surface(path, mode)?;
            let basis = homology_basis(&s).map_err(|e| (EXIT_INTERNAL, e.to_string()))?;
            let h = character(&s, &basis).map_err(|e| (EXIT_INTERNAL, e.to_string()))?;
            println!("{}", holonomy_to_json(&h));
            Ok(())
        }
        Command::Act { holonomy, periods } => {
            let h = holonomy_from_json(&read(holonomy)?)
                .map_err(|e| (EXIT_VALIDATION, e.to_string()))?;
            let alpha = period_vector_from_json(&read(periods)?)
                .map_err(|e| (EXIT_VALIDATION, e.to_string()))?;
            let out =
                exponential_action(&h, &alpha).map_err(|e| (EXIT_VALIDATION, e.to_string()))?;
            println!("{}", holonomy_to_json(&out));
            Ok(())
        }
        Command::Flatten { holonomy } => {
            let h = holonomy_from_json(&read(holonomy)?)
                .map_err(|e| (EXIT_VALIDATION, e.to_string()))?;
            let out = flat_projection(&h).map_err(|e| (EXIT_VALIDATION, e.to_string()))?;
            println!("{}", holonomy_to_json(&out));
            Ok(())
        }
        Command::Diff { h1, h2 } => {
            let a =
                holonomy_from_json(&read(h1)?).map_err(|e| (EXIT_VALIDATION, e.to_string()))?;
            let b =
                holonomy_from_json(&read(h2)?).map_err(|e| (EXIT_VALIDATION, e.to_string()))?;
            let alpha =
                torsor_difference(&a, &b).map_err(|e| (EXIT_VALIDATION, e.to_string()))?;
            println!("{}", period_vector_to_json(&alpha));
            Ok(())
        }
        Command::Turning { surface, path } => {
            let s = load_surface(surface, mode)?;
            let c = path_from_json(&read(path)?)
                .map_err(|e| (EXIT_VALIDATION, e.to_string()))?;
            let tau = turning_number(&s, &c).map_err(|e| (EXIT_VALIDATION, e.to_string()))?;
            println!("{tau}");
            Ok(())
        }
        Command::Framing { surface } => {
            let s = load_surface(surface, mode)?;
            let basis = homology_basis(&s).map_err(|e| (EXIT_INTERNAL, e.to_string()))?;
            let (reps, f) =
                canonical_framing(&s, &basis).map_err(|e| (EXIT_VALIDATION, e.to_string()))?;
            println!("{}", framing_to_json(&f, Some(&reps)));
            Ok(())
        }
        Command::Twist { surface, periods } => {
            let s = load_surface(surface, mode)?;
            let alpha = period_vector_from_json(&read(periods)?)
                .map_err(|e| (EXIT_VALIDATION, e.to_string()))?;
            let offsets =
                twist_framing(&alpha).map_err(|e| (EXIT_VALIDATION, e.to_string()))?;
            let r = boundary_turning(&s).map_err(|e| (EXIT_VALIDATION, e.to_string()))?;
            let _ = r;
            let rendered: Vec<String> = offsets.iter().map(|o| o.to_string()).collect();
            println!("{{\"offsets\":[{}]}}", rendered.join(","));
            Ok(())
        }
        Command::Classify { genus, kappa } => {
            let kappa = parse_kappa(kappa)?;
            let sig = StratumSignature::new(*genus, kappa).map_err(classify_exit)?;
            let oc = classify(&sig);
            let count = match oc.count {
                crate::classify::ComponentCount::Finite(k) => k.to_string(),
                crate::classify::ComponentCount::Infinite => "\"infinite\"".to_string(),
            };
            println!("{{\"kind\":\"{}\",\"count\":{count}}}", oc.kind);
            Ok(())
        }
        Command::OrbitEqual { f1, f2, bound } => {
            let a: Framing =
                framing_from_json(&read(f1)?).map_err(|e| (EXIT_VALIDATION, e.to_string()))?;
            let b: Framing =
                framing_from_json(&read(f2)?).map_err(|e| (EXIT_VALIDATION, e.to_string()))?;
            let verdict = same_orbit(&a, &b, *bound).map_err(classify_exit)?;
            println!("{{\"verdict\":\"{verdict}\"}}");
            Ok(())
        }
        Command::Orbits {
            genus,
            kappa,
            bound,
        } => {
            let kappa = parse_kappa(kappa)?;
            let sig = StratumSignature::new(*genus, kappa).map_err(classify_exit)?;
            let e = enumerate_orbits_bfs(&sig, *bound).map_err(classify_exit)?;
            let mut forms = String::new();
            for (i, o) in e.orbits.iter().enumerate() {
                if i > 0 {
                    forms.push(',');
                }
                let v: Vec<String> = o.normal_form.iter().map(|x| x.to_string()).collect();
                let arf = o
                    .arf
                    .map(|a| a.to_string())
                    .unwrap_or_else(|| "null".to_string());
                forms.push_str(&format!(
                    "{{\"normal_form\":[{}],\"size\":{},\"arf\":{arf}}}",
                    v.join(","),
                    o.size
                ));
            }
            println!(
                "{{\"count\":{},\"modulus\":{},\"orbits\":[{forms}]}}",
                e.count(),
                e.modulus
            );
            Ok(())
        }
        Command::Corpus { name, params, out } => {
            let parsed: Vec<Rat> = params
                .iter()
                .map(|p| parse_rat(p))
                .collect::<Result<_, _>>()?;
            let jobs: Vec<(String, Option<Rat>)> = if parsed.is_empty() {
                vec![(name.clone(), None)]
            } else {
                parsed.iter().map(|p| (name.clone(), Some(p.clone()))).collect()
            };
            std::fs::create_dir_all(out)
                .map_err(|e| (EXIT_USAGE, format!("cannot create {}: {e}", out.display())))?;
            for (i, (gen, param)) in jobs.iter().enumerate() {
                let spec = corpus::generate(gen, param.clone())
                    .map_err(|e| (EXIT_VALIDATION, e.to_string()))?;
                let s = build_surface(spec).map_err(|e| (EXIT_INTERNAL, e.to_string()))?;
                let stem = match param {
                    Some(p) => format!("{gen}_{}", p.to_string().replace('/', "_")),
                    None => gen.clone(),
                };
                let _ = i;
                let surface_path = out.join(format!("{stem}.json"));
                std::fs::write(&surface_path, surface_to_json(&s.spec))
                    .map_err(|e| (EXIT_USAGE, e.to_string()))?;
                let r = build_report(&s).map_err(|e| (EXIT_INTERNAL, e.to_string()))?;
                let sidecar = out.join(format!("{stem}.expect.json"));
                std::fs::write(&sidecar, expected_sidecar(&s, &r))
                    .map_err(|e| (EXIT_USAGE, e.to_string()))?;
                println!("{}", surface_path.display());
            }
            Ok(())
        }
        Command::Svg { surface, out } => {
            let s = load_surface(surface, mode)?;
            let svg = crate::svg::render_svg(&s);
            match out {
                Some(p) => std::fs::write(p, svg).map_err(|e| (EXIT_USAGE, e.to_string()))?,
                None => print!("{svg}"),
            }
            Ok(())
        }
    }
}

fn error_code(e: &SurfaceError) -> &'static str {
    match e {
        SurfaceError::NonSimplePolygon { .. } => "NonSimplePolygon",
        SurfaceError::DegenerateEdge { .. } => "DegenerateEdge",
        SurfaceError::EdgeOutOfRange { .. } => "EdgeOutOfRange",
        SurfaceError::UnmatchedEdge { .. } => "UnmatchedEdge",
        SurfaceError::EdgePairedTwice { .. } => "EdgePairedTwice",
        SurfaceError::OrientationMismatch { .. } => "OrientationMismatch",
        SurfaceError::NotConnected => "NotConnected",
        SurfaceError::NotDilation { .. } => "NotDilation",
        SurfaceError::Empty => "Empty",
        SurfaceError::InternalInvariant(_) => "InternalInvariant",
    }
}

fn expected_sidecar(s: &DilationSurface, r: &crate::report::Report) -> String {
    let order_re_sum: f64 = s.cone_points().iter().map(|c| c.order_re_f64()).sum();
    format!(
        "{{\"digest\":\"{}\",\"genus\":{},\"n\":{},\"kind\":\"{}\",\"order_re_sum\":\"{}\"}}",
        r.digest, r.genus, r.n, r.kind, order_re_sum
    )
}

fn print_report_text(r: &crate::report::Report) {
    println!("digest   {}", r.digest);
    println!(
        "topology V={} E={} F={} genus={} n={}",
        r.vertices, r.edges, r.faces, r.genus, r.n
    );
    println!("kind     {}", r.kind);
    for (i, row) in r.cone_table.iter().enumerate() {
        let angle = match &row.angle {
            crate::surface::Angle::Turns(k) => format!("{k}·2π"),
            crate::surface::Angle::Approx(t) => format!("{t:.6}·2π"),
        };
        let re = match &row.order_re {
            crate::surface::Angle::Turns(k) => format!("{k}"),
            crate::surface::Angle::Approx(t) => format!("{t:.6}"),
        };
        println!(
            "cone {i}   angle {angle}  log_factor {:.6}  m = {re} + {:.6}i",
            row.log_factor, row.order_im
        );
    }
    if let Some(f) = &r.framing {
        println!("framing  tau {:?}  r {:?}", f.tau, f.r);
    }
    if let Some(c) = &r.classification {
        let arf = c
            .arf
            .map(|a| a.to_string())
            .unwrap_or_else(|| "-".to_string());
        println!("class    kind {} components {} arf {arf}", c.kind, c.count);
    }
    println!("version  {}", r.version);
}
