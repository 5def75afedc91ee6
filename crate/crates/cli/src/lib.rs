//! Job orchestration behind the `threefold` binary. Every command produces
//! one JSON document and an exit status: 0 done, 2 inconclusive, 1 error.

use std::path::PathBuf;

use num_bigint::BigInt;
use serde_json::{json, Value};
use thiserror::Error;

use threefold::cache::CountCache;
use threefold::counting::{self, CountConfig, CountError, CountRecord, ENGINE_VERSION};
use threefold::cubic::{CubicError, CubicForm};
use threefold::field::FieldOps;
use threefold::jacobian::{certify_not_jacobian, Certification, CountViolation};
use threefold::json::to_value;
use threefold::prym::{self, PrymError};
use threefold::simplicity::check_absolutely_simple;
use threefold::weil::{
    extend_weil, m_values_from_counts, num_points_abelian, verify_weil_bounds, weil_from_m_values, WeilData,
    WeilError,
};
use threefold::intpoly::IntPoly;

pub const CACHE_ENV: &str = "THREEFOLD_CACHE";

/// Dimension of the intermediate Jacobian of a cubic threefold.
const CUBIC_THREEFOLD_G: u32 = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Count,
    Lines,
    Weil,
    Simple,
    Prym,
    Certify,
    Singular,
    KleinCase,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Count => "count",
            Command::Lines => "lines",
            Command::Weil => "weil",
            Command::Simple => "simple",
            Command::Prym => "prym",
            Command::Certify => "certify",
            Command::Singular => "singular",
            Command::KleinCase => "klein-case",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CubicSource {
    Builtin(String),
    File(PathBuf),
}

#[derive(Clone, Debug)]
pub struct JobConfig {
    pub command: Command,
    pub cubic: Option<CubicSource>,
    pub p: Option<u64>,
    pub r: Option<u32>,
    pub q: Option<BigInt>,
    pub counts: Option<Vec<BigInt>>,
    pub poly: Option<Vec<BigInt>>,
    pub extend: Option<u32>,
    pub genus: Option<usize>,
    pub closed_form: bool,
    pub threads: Option<usize>,
    pub cache_path: Option<PathBuf>,
    pub output: Option<PathBuf>,
}

impl JobConfig {
    pub fn new(command: Command) -> Self {
        JobConfig {
            command,
            cubic: None,
            p: None,
            r: None,
            q: None,
            counts: None,
            poly: None,
            extend: None,
            genus: None,
            closed_form: false,
            threads: None,
            cache_path: None,
            output: None,
        }
    }
}

#[derive(Debug, Error)]
pub enum JobError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Cubic(#[from] CubicError),
    #[error(transparent)]
    Count(#[from] CountError),
    #[error(transparent)]
    Weil(#[from] WeilError),
    #[error(transparent)]
    Prym(#[from] PrymError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl JobError {
    pub fn kind(&self) -> &'static str {
        match self {
            JobError::Usage(_) => "usage",
            JobError::Cubic(_) => "parse",
            JobError::Count(CountError::Field(_)) => "field",
            JobError::Count(_) => "budget",
            JobError::Weil(_) => "invalid-weil-data",
            JobError::Prym(_) => "prym",
            JobError::Io { .. } => "io",
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "error": { "kind": self.kind(), "message": self.to_string() } })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Done,
    Inconclusive,
    Failed,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Done => 0,
            Status::Inconclusive => 2,
            Status::Failed => 1,
        }
    }
}

pub struct Outcome {
    pub status: Status,
    pub document: Value,
}

fn usage(msg: impl Into<String>) -> JobError {
    JobError::Usage(msg.into())
}

struct Job {
    cfg: JobConfig,
    count_cfg: CountConfig,
    cache: Option<CountCache>,
}

/// Reference values the certificate for `paper-x` is compared against.
const PAPER_Q1: [i64; 11] = [243, -486, 405, -90, -123, 125, -41, -10, 15, -6, 1];

impl Job {
    fn new(cfg: JobConfig) -> Result<Self, JobError> {
        let count_cfg = CountConfig {
            threads: cfg.threads,
            ..CountConfig::default()
        };
        let cache = match &cfg.cache_path {
            Some(path) => Some(CountCache::open(path).map_err(|source| JobError::Io {
                path: path.clone(),
                source,
            })?),
            None => None,
        };
        Ok(Job { cfg, count_cfg, cache })
    }

    fn cubic(&self) -> Result<CubicForm, JobError> {
        match &self.cfg.cubic {
            Some(CubicSource::Builtin(name)) => Ok(CubicForm::builtin(name)?),
            Some(CubicSource::File(path)) => {
                let text = std::fs::read_to_string(path).map_err(|source| JobError::Io {
                    path: path.clone(),
                    source,
                })?;
                let form = CubicForm::from_text(&text)?;
                Ok(form.with_name(path.display().to_string()))
            }
            None => Err(usage("a cubic is required: pass --builtin NAME or --cubic FILE")),
        }
    }

    fn p(&self) -> Result<u64, JobError> {
        self.cfg.p.ok_or_else(|| usage("--p is required"))
    }

    fn cubic_json(x: &CubicForm) -> Value {
        json!({ "name": x.name, "hash": x.canonical_hash(), "monomials": x.len() })
    }

    fn tower(&self, x: &CubicForm, p: u64, r: u32) -> Result<Vec<CountRecord>, JobError> {
        Ok(counting::count_tower(x, p, r, &self.count_cfg, self.cache.as_ref())?)
    }

    fn count(&self) -> Result<Outcome, JobError> {
        let x = self.cubic()?;
        let p = self.p()?;
        let r = self.cfg.r.unwrap_or(1);
        let recs = self.tower(&x, p, r)?;
        let counts: Vec<Value> = recs
            .iter()
            .map(|rec| {
                json!({
                    "k": rec.k,
                    "q": p.pow(rec.k),
                    "n_points": rec.n_points,
                    "wall_time": rec.wall_time,
                })
            })
            .collect();
        Ok(done(json!({
            "command": "count",
            "cubic": Self::cubic_json(&x),
            "p": p,
            "engine_version": ENGINE_VERSION,
            "counts": counts,
        })))
    }

    fn lines(&self) -> Result<Outcome, JobError> {
        let x = self.cubic()?;
        let p = self.p()?;
        let k = self.cfg.r.unwrap_or(1);
        let hash = x.canonical_hash();
        let cached = self
            .cache
            .as_ref()
            .and_then(|c| c.lookup_lines(&hash, p as u32, k, ENGINE_VERSION));
        let (n_lines, listed) = match cached {
            Some(rec) => (rec.n_lines.unwrap(), None),
            None => {
                let start = std::time::Instant::now();
                let (field, lines) = counting::find_lines(&x, p, k, &self.count_cfg)?;
                if let Some(cache) = &self.cache {
                    let mut rec = counting::count_points(&x, p, k, &self.count_cfg)?;
                    rec.n_lines = Some(lines.len() as u64);
                    rec.wall_time = start.elapsed().as_secs_f64();
                    cache.append(&rec);
                }
                let listed: Vec<Value> = lines
                    .iter()
                    .map(|l| {
                        json!(l
                            .basis
                            .iter()
                            .map(|v| v.iter().map(|&c| field.to_coeffs(c)).collect::<Vec<_>>())
                            .collect::<Vec<_>>())
                    })
                    .collect();
                (lines.len() as u64, Some(listed))
            }
        };
        Ok(done(json!({
            "command": "lines",
            "cubic": Self::cubic_json(&x),
            "p": p,
            "k": k,
            "n_lines": n_lines,
            "lines": listed,
        })))
    }

    fn singular(&self) -> Result<Outcome, JobError> {
        let x = self.cubic()?;
        let p = self.p()?;
        let r = self.cfg.r.unwrap_or(1);
        let search = counting::find_singular_points(&x, p, r, &self.count_cfg)?;
        Ok(done(json!({
            "command": "singular",
            "cubic": Self::cubic_json(&x),
            "search": search,
        })))
    }

    fn klein_case(&self) -> Result<Outcome, JobError> {
        let p = self.p()?;
        Ok(done(json!({
            "command": "klein-case",
            "classification": prym::klein_case_test(p)?,
        })))
    }

    /// Resolves the Weil polynomial input: `--poly`, `--counts`, the Fermat
    /// closed form, or a counted tower of a cubic. Applies `--extend`.
    fn weil_data(&self) -> Result<(WeilData, Value), JobError> {
        let cfg = &self.cfg;
        let (w, source) = if let Some(poly) = &cfg.poly {
            let q = cfg.q.clone().ok_or_else(|| usage("--poly needs --q"))?;
            let w = WeilData::new(q, IntPoly::new(poly.clone()))?;
            (w, json!({ "kind": "polynomial" }))
        } else if let Some(counts) = &cfg.counts {
            let q = cfg.q.clone().ok_or_else(|| usage("--counts needs --q"))?;
            let m = m_values_from_counts(&q, counts)?;
            let w = weil_from_m_values(&q, &m)?;
            let counts_json: Vec<Value> = counts.iter().map(to_value).collect();
            let m_json: Vec<Value> = m.iter().map(to_value).collect();
            (w, json!({ "kind": "counts", "counts": counts_json, "m_values": m_json }))
        } else if cfg.closed_form {
            let x = self.cubic()?;
            if x.canonical_hash() != CubicForm::fermat().canonical_hash() {
                return Err(usage("--closed-form is only available for the Fermat cubic"));
            }
            let p = self.p()?;
            (prym::fermat_weil_poly(p)?, json!({ "kind": "fermat-closed-form", "p": p }))
        } else if cfg.cubic.is_some() {
            let x = self.cubic()?;
            let p = self.p()?;
            let recs = self.tower(&x, p, CUBIC_THREEFOLD_G)?;
            let q = BigInt::from(p);
            let counts: Vec<BigInt> = recs.iter().map(|r| BigInt::from(r.n_points)).collect();
            let m = m_values_from_counts(&q, &counts)?;
            let w = weil_from_m_values(&q, &m)?;
            let m_json: Vec<Value> = m.iter().map(to_value).collect();
            (
                w,
                json!({
                    "kind": "cubic",
                    "cubic": Self::cubic_json(&x),
                    "counts": counts.iter().map(to_value).collect::<Vec<_>>(),
                    "m_values": m_json,
                }),
            )
        } else {
            return Err(usage("no Weil polynomial input: pass --poly, --counts, --builtin or --cubic"));
        };
        match cfg.extend {
            Some(0) => Err(usage("--extend must be positive")),
            Some(r) => Ok((extend_weil(&w, r), json!({ "base": source, "extended_by": r }))),
            None => Ok((w, source)),
        }
    }

    fn weil_json(w: &WeilData) -> Value {
        json!({
            "q": to_value(&w.q),
            "g": w.g,
            "coefficients": w.coeffs().iter().map(to_value).collect::<Vec<_>>(),
            "text": w.poly.to_string(),
        })
    }

    fn weil(&self) -> Result<Outcome, JobError> {
        let (w, source) = self.weil_data()?;
        Ok(done(json!({
            "command": "weil",
            "source": source,
            "weil_poly": Self::weil_json(&w),
            "weil_check": verify_weil_bounds(&w),
            "num_points_abelian": to_value(&num_points_abelian(&w)),
        })))
    }

    fn simple(&self) -> Result<Outcome, JobError> {
        let (w, source) = self.weil_data()?;
        let report = check_absolutely_simple(&w);
        let status = if report.is_absolutely_simple() {
            Status::Done
        } else {
            Status::Inconclusive
        };
        Ok(Outcome {
            status,
            document: json!({
                "command": "simple",
                "source": source,
                "weil_poly": Self::weil_json(&w),
                "simplicity": report,
            }),
        })
    }

    fn prym(&self) -> Result<Outcome, JobError> {
        let (w, source) = self.weil_data()?;
        let g = self.cfg.genus.unwrap_or(w.g + 1);
        let report = prym::attainment_report(&w, g)?;
        Ok(done(json!({
            "command": "prym",
            "source": source,
            "weil_poly": Self::weil_json(&w),
            "prym": report,
        })))
    }

    fn certify(&self) -> Result<Outcome, JobError> {
        let (w, source) = self.weil_data()?;
        let weil_check = verify_weil_bounds(&w);
        if !weil_check.holds {
            return Ok(Outcome {
                status: Status::Inconclusive,
                document: json!({
                    "command": "certify",
                    "source": source,
                    "weil_poly": Self::weil_json(&w),
                    "weil_check": weil_check,
                    "result": { "outcome": "inconclusive", "reason": "weil-bounds-fail" },
                }),
            });
        }
        let mut result = certify_not_jacobian(&w);
        let is_paper_x = match &self.cfg.cubic {
            Some(_) if self.cfg.poly.is_none() && self.cfg.counts.is_none() && self.cfg.extend.is_none() => {
                self.cubic()?.canonical_hash() == CubicForm::paper_x().canonical_hash()
            }
            _ => false,
        };
        if let (Certification::Certificate(cert), true) = (&mut result, is_paper_x) {
            let reference: Vec<BigInt> = PAPER_Q1.iter().map(|&c| BigInt::from(c)).collect();
            let a_ok = cert.case_a.violation
                == CountViolation::NegativeCount {
                    r: 1,
                    n: BigInt::from(-2),
                };
            let b_ok = cert.case_b.counts[..2] == [BigInt::from(10), BigInt::from(4)];
            cert.paper_consistent = Some(cert.weil_poly == reference && a_ok && b_ok);
        }
        let status = match result {
            Certification::Certificate(_) => Status::Done,
            Certification::Inconclusive(_) => Status::Inconclusive,
        };
        Ok(Outcome {
            status,
            document: json!({
                "command": "certify",
                "source": source,
                "weil_poly": Self::weil_json(&w),
                "weil_check": weil_check,
                "result": result,
            }),
        })
    }
}

fn done(document: Value) -> Outcome {
    Outcome {
        status: Status::Done,
        document,
    }
}

/// Runs one job. Errors are folded into the returned document.
pub fn run_pipeline(cfg: JobConfig) -> Outcome {
    let command = cfg.command;
    let run = || -> Result<Outcome, JobError> {
        let job = Job::new(cfg)?;
        match command {
            Command::Count => job.count(),
            Command::Lines => job.lines(),
            Command::Weil => job.weil(),
            Command::Simple => job.simple(),
            Command::Prym => job.prym(),
            Command::Certify => job.certify(),
            Command::Singular => job.singular(),
            Command::KleinCase => job.klein_case(),
        }
    };
    run().unwrap_or_else(|e| Outcome {
        status: Status::Failed,
        document: e.to_json(),
    })
}

/// Parses a comma-separated list of integers.
pub fn parse_int_list(s: &str) -> Result<Vec<BigInt>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<BigInt>().map_err(|_| format!("not an integer: {t:?}")))
        .collect()
}
