//! Command-line front end: file I/O, dispatch and exact/float rendering.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::distance::point_distance;
use crate::error::Error;
use crate::hardness::{brute_force_clique, gen_clique_instance, GraphInstance};
use crate::hausdorff::hausdorff_oracle_with;
use crate::matching::{
    match_l2, match_polytopal, reference_match, reference_point_properties_check, verify_certificate, CertificateStatus,
    MatchingCertificate,
};
use crate::norm::NormSpec;
use crate::point::Point;
use crate::polytope::{point_from_json_value, point_to_json, Polytope, VPolytope};
use crate::qp::nearest_v;
use crate::rational::{format_rational, parse_rational, to_f64, Rational};
use crate::vertex_enum::{vertex_enumeration_with, ScaleGuard};

#[derive(Parser, Debug)]
#[command(name = "hkit", version, about = "Exact Hausdorff distances and homothetic matching of polytopes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Distance from a point to a polytope.
    Distance {
        #[arg(long, default_value = "l2")]
        norm: String,
        /// JSON array of rationals, e.g. '["1/2", 3]'.
        #[arg(long)]
        point: String,
        polytope: PathBuf,
    },
    /// Hausdorff distance between two polytopes.
    Hausdorff {
        #[arg(long, default_value = "l2")]
        norm: String,
        p: PathBuf,
        q: PathBuf,
    },
    /// Optimal homothety `αP + c` matching `Q`.
    Match {
        #[arg(long, default_value = "l2")]
        norm: String,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        p: PathBuf,
        q: PathBuf,
    },
    /// Homothety aligning bounding boxes.
    MatchApprox { p: PathBuf, q: PathBuf },
    /// Checks an optimality certificate for the position of `P`.
    Certify {
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        p: PathBuf,
        q: PathBuf,
        certificate: PathBuf,
    },
    /// Writes the Clique instance `(P, Q)` and its metadata.
    GenClique {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        /// Comma-separated 1-based edges, e.g. "1-2,2-3".
        #[arg(long, default_value = "")]
        edges: String,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Vertices of an H-polytope.
    VertexEnum { polytope: PathBuf },
    /// Evaluates the reference-point inequalities.
    CheckProperties {
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        p: PathBuf,
        q: PathBuf,
    },
}

/// A failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(err: Error, context: Option<&Path>) -> Self {
        let code = match err {
            Error::ScaleGuard(_) => 3,
            Error::SelfCheck(_) | Error::TheoremViolation(_) | Error::PointInside => 1,
            _ => 2,
        };
        let message = match context {
            Some(path) => format!("{}: {err}", path.display()),
            None => err.to_string(),
        };
        Failure { code, message }
    }

    fn io(path: &Path, err: std::io::Error) -> Self {
        Failure { code: 2, message: format!("{}: {err}", path.display()) }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

trait Context<T> {
    fn at(self, path: &Path) -> CliResult<T>;
    fn plain(self) -> CliResult<T>;
}

impl<T> Context<T> for crate::error::Result<T> {
    fn at(self, path: &Path) -> CliResult<T> {
        self.map_err(|e| Failure::new(e, Some(path)))
    }

    fn plain(self) -> CliResult<T> {
        self.map_err(|e| Failure::new(e, None))
    }
}

/// Runs the command line; returns the process exit code.
///
/// Exit codes: 0 success, 1 internal failure, 2 invalid input, 3 scale guard.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    2
                }
            };
        }
    };
    match dispatch(cli.command) {
        Ok(value) => {
            let _ = writeln!(out, "{}", serde_json::to_string(&value).expect("serializable"));
            0
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command) -> CliResult<Value> {
    let guard = ScaleGuard::from_env().plain()?;
    match command {
        Command::Distance { norm, point, polytope } => {
            let norm = parse_norm(&norm)?;
            let p = read_polytope(&polytope)?;
            let text: Value = serde_json::from_str(&point)
                .map_err(|e| Failure { code: 2, message: format!("--point: {e}") })?;
            let x = point_from_json_value(&text).plain()?;
            let r = point_distance(&x, &p, &norm).at(&polytope)?;
            let mut v = number(&r.value, norm.is_euclidean());
            v.insert("witness".into(), point_to_json(&r.witness));
            Ok(Value::Object(v))
        }
        Command::Hausdorff { norm, p, q } => {
            let norm = parse_norm(&norm)?;
            let (pp, qq) = (read_polytope(&p)?, read_polytope(&q)?);
            same_dim(&pp, &qq, &p, &q)?;
            let r = hausdorff_oracle_with(&pp, &qq, &norm, &guard).plain()?;
            let squared = norm.is_euclidean();
            let mut v = number(&r.value, squared);
            let witness = if r.directed_pq >= r.directed_qp {
                json!({"from": "P", "point": point_to_json(&r.argmax_p)})
            } else {
                json!({"from": "Q", "point": point_to_json(&r.argmax_q)})
            };
            v.insert("witness".into(), witness);
            v.insert("directed_pq".into(), Value::Object(number(&r.directed_pq, squared)));
            v.insert("directed_qp".into(), Value::Object(number(&r.directed_qp, squared)));
            Ok(Value::Object(v))
        }
        Command::Match { norm, tol, p, q } => {
            let norm = parse_norm(&norm)?;
            let (pp, qq) = (read_v(&p)?, read_v(&q)?);
            same_dim(&Polytope::V(pp.clone()), &Polytope::V(qq.clone()), &p, &q)?;
            let r = if norm.is_euclidean() { match_l2(&pp, &qq, tol) } else { match_polytopal(&pp, &qq, &norm) }.plain()?;
            let mut v = number(&r.value, norm.is_euclidean());
            v.insert("rho".into(), json!(r.rho));
            let witness = json!({
                "alpha": format_rational(&r.homothety.alpha),
                "c": point_to_json(&r.homothety.c),
            });
            v.insert("witness".into(), witness);
            v.insert("exact".into(), json!(r.exact));
            v.insert("converged".into(), json!(r.converged));
            if !r.exact {
                v.insert("lower_bound".into(), json!(r.lower_bound));
            }
            Ok(Value::Object(v))
        }
        Command::MatchApprox { p, q } => {
            let (pp, qq) = (read_polytope(&p)?, read_polytope(&q)?);
            same_dim(&pp, &qq, &p, &q)?;
            let h = reference_match(&pp, &qq).plain()?;
            let moved = match &pp {
                Polytope::V(v) => Polytope::V(v.transform(&h.alpha, &h.c)),
                Polytope::H(hp) => Polytope::H(hp.transform(&h.alpha, &h.c)),
            };
            let r = hausdorff_oracle_with(&moved, &qq, &NormSpec::L2, &guard).plain()?;
            let mut v = number(&r.value, true);
            v.insert(
                "witness".into(),
                json!({"alpha": format_rational(&h.alpha), "c": point_to_json(&h.c), "exact": h.exact}),
            );
            Ok(Value::Object(v))
        }
        Command::Certify { tol, p, q, certificate } => {
            let (pp, qq) = (read_v(&p)?, read_v(&q)?);
            same_dim(&Polytope::V(pp.clone()), &Polytope::V(qq.clone()), &p, &q)?;
            let text = fs::read_to_string(&certificate).map_err(|e| Failure::io(&certificate, e))?;
            let (pp, cert) = parse_certificate(&text, &pp, &qq).at(&certificate)?;
            let status = verify_certificate(&pp, &qq, &cert, tol).at(&certificate)?;
            Ok(match status {
                CertificateStatus::Valid => json!({"status": "valid", "rho": cert.rho}),
                CertificateStatus::Violated { condition, detail } => {
                    json!({"status": "violated", "condition": condition, "detail": detail, "rho": cert.rho})
                }
            })
        }
        Command::GenClique { m, k, edges, out } => {
            let edges = GraphInstance::parse_edges(&edges).plain()?;
            let g = GraphInstance::new(m, k, edges).plain()?;
            let inst = gen_clique_instance(&g).plain()?;
            fs::create_dir_all(&out).map_err(|e| Failure::io(&out, e))?;
            let meta = json!({
                "m": g.m,
                "k": g.k,
                "edges": g.edges.iter().map(|(u, v)| format!("{u}-{v}")).collect::<Vec<_>>(),
                "epsilon": format_rational(&inst.epsilon),
                "k_epsilon": format_rational(&inst.k_eps),
                "n": inst.n,
                "has_clique": brute_force_clique(&g),
            });
            write_file(&out.join("P.json"), &Polytope::H(inst.p).to_json_string())?;
            write_file(&out.join("Q.json"), &Polytope::H(inst.q).to_json_string())?;
            write_file(&out.join("meta.json"), &serde_json::to_string_pretty(&meta).expect("serializable"))?;
            let mut v = number(&inst.k_eps, false);
            v.insert("witness".into(), json!({"dir": out.display().to_string(), "epsilon": format_rational(&inst.epsilon)}));
            Ok(Value::Object(v))
        }
        Command::VertexEnum { polytope } => {
            let h = match read_polytope(&polytope)? {
                Polytope::H(h) => h,
                Polytope::V(v) => return Ok(Polytope::V(v.extreme_points()).to_json()),
            };
            let v = vertex_enumeration_with(&h, &guard).at(&polytope)?;
            Ok(Polytope::V(v).to_json())
        }
        Command::CheckProperties { samples, seed, p, q } => {
            let (pp, qq) = (read_polytope(&p)?, read_polytope(&q)?);
            same_dim(&pp, &qq, &p, &q)?;
            let report = reference_point_properties_check(&pp, &qq, samples, seed).plain()?;
            let checks: Vec<Value> = report
                .checks
                .iter()
                .map(|c| json!({"property": c.property, "lhs": c.lhs, "rhs": c.rhs, "margin": c.margin()}))
                .collect();
            Ok(json!({"holds": true, "checks": checks}))
        }
    }
}

/// `{"value": "p/q", "float": …}`, plus `"squared": true` for ℓ2 values.
fn number(value: &Rational, squared: bool) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("value".into(), Value::String(format_rational(value)));
    m.insert("float".into(), json!(to_f64(value)));
    if squared {
        m.insert("squared".into(), json!(true));
    }
    m
}

fn parse_norm(text: &str) -> CliResult<NormSpec> {
    match text.to_ascii_lowercase().as_str() {
        "l1" => Ok(NormSpec::L1),
        "l2" => Ok(NormSpec::L2),
        "linf" => Ok(NormSpec::LInf),
        _ => match text.strip_prefix("ball:") {
            Some(file) => {
                let path = PathBuf::from(file);
                let ball = read_polytope_raw(&path)?;
                NormSpec::polytopal(ball).at(&path)
            }
            None => Err(Failure {
                code: 2,
                message: format!("--norm: unknown norm {text:?}; expected l1, l2, linf or ball:<file>"),
            }),
        },
    }
}

fn read_polytope_raw(path: &Path) -> CliResult<Polytope> {
    let text = fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    Polytope::from_json_str(&text).at(path)
}

/// Reads a polytope and rejects unbounded H-inputs.
fn read_polytope(path: &Path) -> CliResult<Polytope> {
    let p = read_polytope_raw(path)?;
    if let Polytope::H(h) = &p {
        h.ensure_bounded().at(path)?;
    }
    Ok(p)
}

fn read_v(path: &Path) -> CliResult<VPolytope> {
    match read_polytope(path)? {
        Polytope::V(v) => Ok(v),
        Polytope::H(_) => Err(Failure { code: 2, message: format!("{}: matching needs a V-polytope", path.display()) }),
    }
}

fn same_dim(p: &Polytope, q: &Polytope, pp: &Path, qp: &Path) -> CliResult<()> {
    if p.dim() == q.dim() {
        return Ok(());
    }
    Err(Failure {
        code: 2,
        message: format!("dimension mismatch: {} has dimension {}, {} has {}", pp.display(), p.dim(), qp.display(), q.dim()),
    })
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, format!("{text}\n")).map_err(|e| Failure::io(path, e))
}

fn parse_scalar(v: &Value, what: &str) -> crate::error::Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => parse_rational(&n.to_string()),
        _ => Err(Error::InvalidInput(format!("{what}: expected a number"))),
    }
}

/// Reads `{"rho", "R", "S", "weights"?, "alpha"?, "c"?}`; entries of `R`/`S` are points or
/// `{"p"|"q": point, "proj": point}`. With `alpha`/`c`, `P` is moved first.
fn parse_certificate(text: &str, p: &VPolytope, q: &VPolytope) -> crate::error::Result<(VPolytope, MatchingCertificate)> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
    let obj = v.as_object().ok_or_else(|| Error::InvalidInput("certificate must be a JSON object".into()))?;
    let rho = to_f64(&parse_scalar(obj.get("rho").ok_or_else(|| Error::InvalidInput("missing \"rho\"".into()))?, "rho")?);
    let mut moved = p.clone();
    if obj.contains_key("alpha") || obj.contains_key("c") {
        let alpha = match obj.get("alpha") {
            Some(a) => parse_scalar(a, "alpha")?,
            None => crate::rational::int(1),
        };
        let c = match obj.get("c") {
            Some(c) => point_from_json_value(c)?,
            None => Point::zeros(p.dim()),
        };
        moved = p.transform(&alpha, &c);
    }
    let entries = |key: &str, own: &str, other: &VPolytope| -> crate::error::Result<Vec<(Point, Point)>> {
        let list = match obj.get(key) {
            None => return Ok(Vec::new()),
            Some(l) => l.as_array().ok_or_else(|| Error::InvalidInput(format!("\"{key}\" must be an array")))?,
        };
        list.iter()
            .enumerate()
            .map(|(i, item)| {
                let wrap = |e: Error| Error::InvalidInput(format!("{key}[{i}]: {e}"));
                let (x, proj) = match item {
                    Value::Object(o) => {
                        let x = o.get(own).ok_or_else(|| Error::InvalidInput(format!("{key}[{i}]: missing \"{own}\"")))?;
                        (point_from_json_value(x).map_err(wrap)?, o.get("proj"))
                    }
                    other => (point_from_json_value(other).map_err(wrap)?, None),
                };
                let proj = match proj {
                    Some(pr) => point_from_json_value(pr).map_err(wrap)?,
                    None => nearest_v(&x, other)?.minimizer,
                };
                Ok((x, proj))
            })
            .collect()
    };
    let r = entries("R", "p", q)?;
    let s = entries("S", "q", &moved)?;
    let weights = match obj.get("weights") {
        None => Vec::new(),
        Some(w) => w
            .as_array()
            .ok_or_else(|| Error::InvalidInput("\"weights\" must be an array".into()))?
            .iter()
            .map(|x| parse_scalar(x, "weights").map(|r| to_f64(&r)))
            .collect::<crate::error::Result<_>>()?,
    };
    Ok((moved, MatchingCertificate { rho, r, s, weights }))
}
