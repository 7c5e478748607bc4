//! The `ffradon` command line: configuration, orchestration and report records.
//!
//! Every subcommand produces an ordered list of [`Record`]s, written as
//! json-lines or csv once all work items finish, so output order never
//! depends on scheduling.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::geometry::{Point, Space, DEFAULT_MAX_ITEMS};
use crate::measures::Exponent;
use crate::transforms::{GridFunction, PlaneFamily, RadonFamily};
use crate::verifier::incidence::DEFAULT_TUPLE_BUDGET;
use crate::verifier::scan::SPREAD_TOL;
use crate::verifier::witness::space_for;
use crate::verifier::{
    derive_seed, incidence_check, lemma_suite, random_set_family, sharpness_grid, theorem_scan, LemmaReport,
    RatioReport, ScanConfig, WitnessKind,
};

pub const SCHEMA: &str = "ffradon/1";

/// Build tag carried by every record; override with `FFRADON_BUILD_TAG` at compile time.
pub const BUILD_TAG: &str = match option_env!("FFRADON_BUILD_TAG") {
    Some(t) => t,
    None => concat!("v", env!("CARGO_PKG_VERSION")),
};

pub const CSV_COLUMNS: [&str; 13] =
    ["schema", "cmd", "q", "d", "k", "p", "r", "method", "value", "witness", "exhaustive", "seed", "elapsed_ms"];

#[derive(Parser, Debug)]
#[command(name = "ffradon", version, about = "Finite-field k-plane transform experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print T f on every k-plane.
    Transform(TransformArgs),
    /// Vertex boundedness scan across field orders.
    Scan(ScanArgs),
    /// Hull membership against witness growth exponents.
    Sharpness(SharpnessArgs),
    /// Explicit-constant hyperplane bounds on random sets.
    Lemmas(LemmaArgs),
    /// Span-dimension incidence counts on random set families.
    Incidence(IncidenceArgs),
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    JsonLines,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Field orders, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "2,3,5")]
    pub q: Vec<u64>,
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    /// Plane dimension; defaults to 1.
    #[arg(long)]
    pub k: Option<usize>,
    /// Source exponent, "a/b", decimal or "inf".
    #[arg(long, conflicts_with = "vertex")]
    pub p: Option<Exponent>,
    /// Target exponent.
    #[arg(long, conflicts_with = "vertex")]
    pub r: Option<Exponent>,
    /// Use p = (d+1)/(k+1), r = d+1.
    #[arg(long)]
    pub vertex: bool,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; output does not depend on it.
    #[arg(long, env = "FFRADON_THREADS")]
    pub threads: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::JsonLines)]
    pub format: Format,
    /// Cap on q^d.
    #[arg(long, default_value_t = DEFAULT_MAX_ITEMS)]
    pub max_points: u128,
    /// Cap on subsets visited by indicator search.
    #[arg(long, default_value_t = 1 << 16)]
    pub subset_budget: u64,
    /// Cap on tuples enumerated by incidence counts.
    #[arg(long, default_value_t = DEFAULT_TUPLE_BUDGET)]
    pub tuple_budget: u128,
    /// Write elapsed_ms as 0 so reruns are byte-identical.
    #[arg(long)]
    pub reproducible: bool,
}

#[derive(Args, Debug, Clone)]
pub struct TransformArgs {
    #[command(flatten)]
    pub common: Common,
    /// Inline values "x1,x2:v; ...", unlisted points are 0.
    #[arg(long, group = "source")]
    pub function: Option<String>,
    /// Indicator of the listed points "x1,x2; ...".
    #[arg(long, group = "source")]
    pub indicator: Option<String>,
    /// The constant function 1.
    #[arg(long, group = "source")]
    pub constant: bool,
    /// File of "x1,x2:v" lines.
    #[arg(long, group = "source")]
    pub input: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct ScanArgs {
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct SharpnessArgs {
    #[command(flatten)]
    pub common: Common,
    /// Grid points per axis.
    #[arg(long, default_value_t = 21)]
    pub resolution: usize,
}

#[derive(Args, Debug, Clone)]
pub struct LemmaArgs {
    #[command(flatten)]
    pub common: Common,
    /// Check one set "x1,x2; ..." instead of random batches.
    #[arg(long)]
    pub set: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct IncidenceArgs {
    #[command(flatten)]
    pub common: Common,
    /// Largest random set size.
    #[arg(long, default_value_t = 5)]
    pub max_size: usize,
    /// Check one family, d+1 sets separated by '|'.
    #[arg(long)]
    pub sets: Option<String>,
}

/// A resolved, validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: &'static str,
    pub q_list: Vec<u64>,
    pub d: usize,
    pub k: usize,
    pub p: Exponent,
    pub r: Exponent,
    pub trials: usize,
    pub seed: u64,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub max_points: u128,
    pub subset_budget: u64,
    pub tuple_budget: u128,
    pub reproducible: bool,
    /// Command-specific settings that enter the config hash.
    pub extra: Vec<(String, String)>,
}

impl RunConfig {
    pub fn resolve(command: &'static str, c: &Common) -> Result<Self> {
        if c.q.is_empty() {
            return Err(Error::EmptyInput);
        }
        if c.max_points == 0 || c.subset_budget == 0 || c.tuple_budget == 0 || c.threads == Some(0) {
            return Err(Error::Parse { line: 0, msg: "caps and thread count must be positive".into() });
        }
        let k = c.k.unwrap_or(1);
        if c.d < 2 || k == 0 || k >= c.d {
            return Err(Error::UnsupportedDim(k));
        }
        let (vp, vr) = Exponent::vertex(c.d, k);
        let (p, r) = if c.vertex { (vp, vr) } else { (c.p.unwrap_or(vp), c.r.unwrap_or(vr)) };
        Ok(RunConfig {
            command,
            q_list: c.q.clone(),
            d: c.d,
            k,
            p,
            r,
            trials: c.trials,
            seed: c.seed,
            threads: c.threads,
            out: c.out.clone(),
            format: c.format,
            max_points: c.max_points,
            subset_budget: c.subset_budget,
            tuple_budget: c.tuple_budget,
            reproducible: c.reproducible,
            extra: Vec::new(),
        })
    }

    /// SHA-256 over everything that can change results; threads and output
    /// settings are left out.
    pub fn hash(&self) -> String {
        let mut s = format!(
            "{}|q={:?}|d={}|k={}|p={}|r={}|trials={}|seed={}|caps={},{},{}",
            self.command,
            self.q_list,
            self.d,
            self.k,
            self.p,
            self.r,
            self.trials,
            self.seed,
            self.max_points,
            self.subset_budget,
            self.tuple_budget
        );
        for (k, v) in &self.extra {
            let _ = write!(s, "|{k}={v}");
        }
        let digest = Sha256::digest(s.as_bytes());
        digest.iter().take(8).fold(String::new(), |mut acc, b| {
            let _ = write!(acc, "{b:02x}");
            acc
        })
    }

    fn check_points(&self, q: u64) -> Result<()> {
        let n = (q as u128).checked_pow(self.d as u32).unwrap_or(u128::MAX);
        if n > self.max_points {
            return Err(Error::SizeCapExceeded { what: "q^d", value: n, cap: self.max_points });
        }
        Ok(())
    }

    fn family(&self, q: u64) -> Result<PlaneFamily> {
        self.check_points(q)?;
        PlaneFamily::new(space_for(q, self.d)?, self.k)
    }

    fn single_q(&self) -> Result<u64> {
        match self.q_list.as_slice() {
            [q] => Ok(*q),
            other => Err(Error::Parse { line: 0, msg: format!("this command takes one q, got {}", other.len()) }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum QField {
    One(u64),
    Many(Vec<u64>),
}

impl QField {
    fn csv(&self) -> String {
        match self {
            QField::One(q) => q.to_string(),
            QField::Many(v) => v.iter().map(u64::to_string).collect::<Vec<_>>().join(";"),
        }
    }
}

/// One output row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub schema: &'static str,
    pub cmd: &'static str,
    pub q: QField,
    pub d: usize,
    pub k: usize,
    pub p: String,
    pub r: String,
    pub method: String,
    pub value: f64,
    pub witness: String,
    pub exhaustive: bool,
    pub seed: u64,
    pub elapsed_ms: u64,
    pub config_hash: String,
    pub build: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hull: Option<&'static str>,
}

/// Records plus the assertion failures that decide the exit code.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Outcome {
    pub records: Vec<Record>,
    pub failures: Vec<String>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.failures.is_empty() {
            0
        } else {
            1
        }
    }
}

struct Emitter<'a> {
    cfg: &'a RunConfig,
    hash: String,
    out: Outcome,
}

impl<'a> Emitter<'a> {
    fn new(cfg: &'a RunConfig) -> Self {
        Emitter { cfg, hash: cfg.hash(), out: Outcome::default() }
    }

    fn record(&mut self, q: QField, method: impl Into<String>, value: f64, witness: impl Into<String>) -> &mut Record {
        let cfg = self.cfg;
        self.out.records.push(Record {
            schema: SCHEMA,
            cmd: cfg.command,
            q,
            d: cfg.d,
            k: cfg.k,
            p: cfg.p.to_string(),
            r: cfg.r.to_string(),
            method: method.into(),
            value,
            witness: witness.into(),
            exhaustive: false,
            seed: cfg.seed,
            elapsed_ms: 0,
            config_hash: self.hash.clone(),
            build: BUILD_TAG,
            bound: None,
            hull: None,
        });
        self.out.records.last_mut().unwrap()
    }

    fn ratio(&mut self, rep: &RatioReport) {
        let ms = self.ms(rep.elapsed_ms);
        let rec = self.record(QField::One(rep.q), rep.method.as_str(), rep.max_ratio, rep.witness.clone());
        rec.exhaustive = rep.exhaustive;
        rec.elapsed_ms = ms;
    }

    fn ms(&self, ms: u64) -> u64 {
        if self.cfg.reproducible {
            0
        } else {
            ms
        }
    }

    fn since(&self, t: Instant) -> u64 {
        self.ms(t.elapsed().as_millis() as u64)
    }

    fn fail(&mut self, msg: String) {
        self.out.failures.push(msg);
    }
}

/// Parses "x1,x2[:v]" items separated by ';' or newlines. Points may be
/// parenthesized; values accept decimals and "a/b".
pub fn parse_point_values(text: &str, space: &Space) -> Result<Vec<(usize, Option<f64>)>> {
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line_no = ln + 1;
        let line = line.split('#').next().unwrap_or("");
        for item in line.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let (pt, val) = match item.split_once(':') {
                Some((a, b)) => (
                    a.trim(),
                    Some(
                        parse_value(b.trim())
                            .ok_or_else(|| Error::Parse { line: line_no, msg: format!("bad value {b:?}") })?,
                    ),
                ),
                None => (item, None),
            };
            let pt = pt.trim_start_matches('(').trim_end_matches(')');
            let codes: Vec<u32> = pt
                .split(',')
                .map(|c| c.trim().parse::<u32>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Parse { line: line_no, msg: format!("bad point literal {pt:?}") })?;
            if codes.len() != space.dim() {
                return Err(Error::DimensionMismatch { expected: space.dim(), found: codes.len() });
            }
            if let Some(&c) = codes.iter().find(|&&c| c as usize >= space.q()) {
                return Err(Error::Parse { line: line_no, msg: format!("coordinate {c} not below q = {}", space.q()) });
            }
            out.push((space.rank(&Point::from_codes(&codes)), val));
        }
    }
    Ok(out)
}

fn parse_value(s: &str) -> Option<f64> {
    match s.split_once('/') {
        Some((a, b)) => Some(a.trim().parse::<f64>().ok()? / b.trim().parse::<f64>().ok()?),
        None => s.parse().ok(),
    }
}

fn parse_set(text: &str, space: &Space) -> Result<Vec<usize>> {
    let mut set: Vec<usize> = parse_point_values(text, space)?.into_iter().map(|(x, _)| x).collect();
    set.sort_unstable();
    set.dedup();
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(set)
}

/// "x1,x2;y1,y2" for a list of point ranks; parses back with `--set`.
pub fn set_literal(space: &Space, set: &[usize]) -> String {
    set.iter()
        .map(|&x| space.unrank(x).0.iter().map(|e| e.0.to_string()).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join(";")
}

fn cmd_transform(args: &TransformArgs) -> Result<Outcome> {
    let mut cfg = RunConfig::resolve("transform", &args.common)?;
    let q = cfg.single_q()?;
    let family = cfg.family(q)?;
    let space = family.space();
    let t = Instant::now();
    let f = if args.constant {
        cfg.extra.push(("input".into(), "constant".into()));
        GridFunction::constant(space, 1.0)
    } else if let Some(text) = &args.indicator {
        cfg.extra.push(("indicator".into(), text.clone()));
        GridFunction::indicator(space, &parse_set(text, space)?)?
    } else {
        let text = match (&args.function, &args.input) {
            (Some(s), _) => s.clone(),
            (None, Some(path)) => std::fs::read_to_string(path)?,
            (None, None) => return Err(Error::EmptyInput),
        };
        cfg.extra.push(("function".into(), text.clone()));
        let mut values = vec![0.0; space.num_points()];
        for (x, v) in parse_point_values(&text, space)? {
            values[x] = v.unwrap_or(1.0);
        }
        GridFunction::from_real(space, &values)?
    };
    let tf = family.transform(&f)?;
    let mut em = Emitter::new(&cfg);
    let ms = em.since(t);
    for (flat, v) in family.flats().iter().zip(tf.values()) {
        let rec = em.record(QField::One(q), "kplane", v.re, flat.descriptor());
        rec.exhaustive = true;
        rec.elapsed_ms = ms;
    }
    Ok(em.out)
}

fn cmd_scan(args: &ScanArgs) -> Result<Outcome> {
    let cfg = RunConfig::resolve("scan", &args.common)?;
    for &q in &cfg.q_list {
        cfg.check_points(q)?;
    }
    let mut sc = ScanConfig::new(cfg.q_list.clone(), cfg.d, cfg.k);
    sc.exponents = Some((cfg.p, cfg.r));
    sc.trials = cfg.trials;
    sc.seed = cfg.seed;
    sc.subset_budget = cfg.subset_budget;
    sc.max_points = cfg.max_points;
    let t = Instant::now();
    let out = theorem_scan(&sc)?;
    let mut em = Emitter::new(&cfg);
    for rep in &out.reports {
        em.ratio(rep);
    }
    let ms = em.since(t);
    let rec =
        em.record(QField::Many(cfg.q_list.clone()), "spread", out.spread, format!("max/min over q, tol {SPREAD_TOL}"));
    rec.bound = Some(SPREAD_TOL);
    rec.elapsed_ms = ms;
    for v in out.violations() {
        em.fail(v);
    }
    Ok(em.out)
}

fn cmd_sharpness(args: &SharpnessArgs) -> Result<Outcome> {
    let mut cfg = RunConfig::resolve("sharpness", &args.common)?;
    cfg.extra.push(("resolution".into(), args.resolution.to_string()));
    for &q in &cfg.q_list {
        cfg.check_points(q)?;
    }
    let t = Instant::now();
    let out = sharpness_grid(cfg.d, cfg.k, &cfg.q_list, args.resolution)?;
    let mut em = Emitter::new(&cfg);
    let ms = em.since(t);
    let qs = QField::Many(cfg.q_list.clone());
    for pt in &out.points {
        let (p, r) = (inv_to_exponent(pt.inv_p), inv_to_exponent(pt.inv_r));
        for (kind, fit) in WitnessKind::ALL.iter().zip(&pt.fits) {
            let rec = em.record(qs.clone(), "alpha", fit.alpha, kind.as_str());
            rec.p = p.clone();
            rec.r = r.clone();
            rec.hull = Some(pt.class.as_str());
            rec.exhaustive = true;
            rec.elapsed_ms = ms;
            if *kind == WitnessKind::Delta {
                rec.bound = Some(pt.delta_closed);
            }
        }
    }
    let rec = em.record(qs, "violations", out.violations.len() as f64, "grid coherence");
    rec.elapsed_ms = ms;
    for v in out.violations {
        em.fail(v);
    }
    Ok(em.out)
}

fn inv_to_exponent(x: crate::verifier::hull::Q) -> String {
    if *x.numer() == 0 {
        "inf".into()
    } else {
        let e = num_rational::Ratio::new(*x.denom(), *x.numer());
        if *e.denom() == 1 {
            e.numer().to_string()
        } else {
            format!("{}/{}", e.numer(), e.denom())
        }
    }
}

type LemmaMetric = (&'static str, fn(&LemmaReport) -> (f64, f64));

const LEMMA_METRICS: [LemmaMetric; 5] = [
    ("t0_l2", |r| (r.t0_l2_sq, r.l2_bound)),
    ("t1_l2", |r| (r.t1_l2_sq, r.l2_bound)),
    ("t0_sup", |r| (r.t0_sup, r.sup_bound)),
    ("t1_sup", |r| (r.t1_sup, r.sup_bound)),
    ("off_diag", |r| (r.off_diag, 0.0)),
];

fn cmd_lemmas(args: &LemmaArgs) -> Result<Outcome> {
    let mut cfg = RunConfig::resolve("lemmas", &args.common)?;
    cfg.k = cfg.d - 1;
    if let Some(s) = &args.set {
        cfg.extra.push(("set".into(), s.clone()));
    }
    let mut em = Emitter::new(&cfg);
    for &q in &cfg.q_list {
        cfg.check_points(q)?;
        let t = Instant::now();
        let rf = RadonFamily::new(space_for(q, cfg.d)?)?;
        let space = rf.space();
        let n = space.num_points();
        let sets: Vec<Vec<usize>> = match &args.set {
            Some(text) => vec![parse_set(text, space)?],
            None => (0..cfg.trials)
                .map(|i| {
                    use rand::{Rng, SeedableRng};
                    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, &[q, i as u64]));
                    let size = rng.gen_range(1..=n);
                    let mut s = rand::seq::index::sample(&mut rng, n, size).into_vec();
                    s.sort_unstable();
                    s
                })
                .collect(),
        };
        let reports: Vec<LemmaReport> = sets.par_iter().map(|s| lemma_suite(&rf, s, false)).collect::<Result<_>>()?;
        let ms = em.since(t);
        for (name, metric) in LEMMA_METRICS {
            if args.set.is_some() {
                let (v, b) = metric(&reports[0]);
                let rec = em.record(QField::One(q), name, v, set_literal(space, &sets[0]));
                rec.bound = Some(b);
                rec.exhaustive = true;
                rec.elapsed_ms = ms;
                continue;
            }
            // worst case over the batch, as measured/bound (or raw for the
            // off-diagonal term, whose bound is 0)
            let score = |r: &LemmaReport| {
                let (v, b) = metric(r);
                if b > 0.0 {
                    v / b
                } else {
                    v
                }
            };
            let (i, worst) = reports.iter().map(score).enumerate().fold((0, f64::NEG_INFINITY), |acc, (i, v)| {
                if v > acc.1 {
                    (i, v)
                } else {
                    acc
                }
            });
            let bound = if name == "off_diag" { 0.0 } else { 1.0 };
            let rec = em.record(QField::One(q), format!("{name}_ratio"), worst, set_literal(space, &sets[i]));
            rec.bound = Some(bound);
            rec.elapsed_ms = ms;
        }
        for (set, rep) in sets.iter().zip(&reports) {
            for v in rep.violations() {
                let lit = set_literal(space, set);
                em.record(QField::One(q), "violation", 1.0, format!("{v}: {lit}"));
                em.fail(format!("q={q}: {v} on E = {lit}"));
            }
        }
    }
    Ok(em.out)
}

fn cmd_incidence(args: &IncidenceArgs) -> Result<Outcome> {
    let mut cfg = RunConfig::resolve("incidence", &args.common)?;
    cfg.k = 1;
    cfg.extra.push(("max_size".into(), args.max_size.to_string()));
    if let Some(s) = &args.sets {
        cfg.extra.push(("sets".into(), s.clone()));
    }
    let mut em = Emitter::new(&cfg);
    for &q in &cfg.q_list {
        cfg.check_points(q)?;
        let t = Instant::now();
        let space = space_for(q, cfg.d)?;
        let families: Vec<Vec<Vec<usize>>> = match &args.sets {
            Some(text) => vec![text.split('|').map(|s| parse_set(s, &space)).collect::<Result<_>>()?],
            None => (0..cfg.trials)
                .map(|i| random_set_family(&space, args.max_size.max(1), derive_seed(cfg.seed, &[q, i as u64])))
                .collect(),
        };
        for fam in &families {
            let tuples = fam.iter().map(|s| s.len() as u128).product::<u128>();
            if tuples > cfg.tuple_budget {
                return Err(Error::TooLargeExact { tuples, budget: cfg.tuple_budget });
            }
        }
        let reports = families.par_iter().map(|f| incidence_check(&space, f)).collect::<Result<Vec<_>>>()?;
        let ms = em.since(t);
        let d = cfg.d;
        let witness = match &args.sets {
            Some(_) => families[0].iter().map(|s| set_literal(&space, s)).collect::<Vec<_>>().join("|"),
            None => format!("{} random families", families.len()),
        };
        for s in 0..=d {
            let total: u128 = reports.iter().map(|r| r.delta[s]).sum();
            let rec = em.record(QField::One(q), format!("delta({s})"), total as f64, witness.clone());
            rec.exhaustive = true;
            rec.elapsed_ms = ms;
        }
        for l in 1..=d {
            let total: u128 = reports.iter().map(|r| r.l_classes[l - 1]).sum();
            let rec = em.record(QField::One(q), format!("L({l})"), total as f64, witness.clone());
            rec.exhaustive = true;
            rec.elapsed_ms = ms;
        }
        for (fam, rep) in families.iter().zip(&reports) {
            for v in &rep.violations {
                let lit = fam.iter().map(|s| set_literal(&space, s)).collect::<Vec<_>>().join("|");
                em.record(QField::One(q), "violation", 1.0, format!("{v}: {lit}"));
                em.fail(format!("q={q}: {v} on {lit}"));
            }
        }
    }
    Ok(em.out)
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Transform(a) => &a.common,
            Command::Scan(a) => &a.common,
            Command::Sharpness(a) => &a.common,
            Command::Lemmas(a) => &a.common,
            Command::Incidence(a) => &a.common,
        }
    }
}

/// Runs a parsed command on a pool of the requested size.
pub fn execute(cli: &Cli) -> Result<Outcome> {
    let run = || match &cli.command {
        Command::Transform(a) => cmd_transform(a),
        Command::Scan(a) => cmd_scan(a),
        Command::Sharpness(a) => cmd_sharpness(a),
        Command::Lemmas(a) => cmd_lemmas(a),
        Command::Incidence(a) => cmd_incidence(a),
    };
    match cli.command.common().threads {
        Some(n) => {
            rayon::ThreadPoolBuilder::new().num_threads(n).build().map_err(|e| Error::Io(e.to_string()))?.install(run)
        }
        None => run(),
    }
}

pub fn write_records<W: Write>(records: &[Record], format: Format, w: W) -> Result<()> {
    match format {
        Format::JsonLines => {
            let mut w = BufWriter::new(w);
            for rec in records {
                serde_json::to_writer(&mut w, rec).map_err(|e| Error::Io(e.to_string()))?;
                w.write_all(b"\n")?;
            }
            w.flush()?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(w);
            let io = |e: csv::Error| Error::Io(e.to_string());
            w.write_record(CSV_COLUMNS).map_err(io)?;
            for rec in records {
                w.write_record([
                    rec.schema.to_string(),
                    rec.cmd.to_string(),
                    rec.q.csv(),
                    rec.d.to_string(),
                    rec.k.to_string(),
                    rec.p.clone(),
                    rec.r.clone(),
                    rec.method.clone(),
                    rec.value.to_string(),
                    rec.witness.clone(),
                    rec.exhaustive.to_string(),
                    rec.seed.to_string(),
                    rec.elapsed_ms.to_string(),
                ])
                .map_err(io)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn write_out(records: &[Record], format: Format, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => write_records(records, format, File::create(path)?),
        None => write_records(records, format, io::stdout().lock()),
    }
}

/// Entry point for the binary; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let common = cli.command.common();
    match execute(&cli).and_then(|o| write_out(&o.records, common.format, common.out.as_deref()).map(|_| o)) {
        Ok(outcome) => {
            for f in &outcome.failures {
                eprintln!("assertion failed: {f}");
            }
            outcome.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(args: &str) -> Cli {
        Cli::try_parse_from(std::iter::once("ffradon").chain(args.split_whitespace())).unwrap()
    }

    #[test]
    fn vertex_resolution() {
        let c = cli("scan --q 2 --d 3 --k 2 --vertex");
        let cfg = RunConfig::resolve("scan", c.command.common()).unwrap();
        assert_eq!(cfg.p.to_string(), "4/3");
        assert_eq!(cfg.r.to_string(), "4");
        let c = cli("scan --q 2 --d 2 --p 5/4 --r inf");
        let cfg = RunConfig::resolve("scan", c.command.common()).unwrap();
        assert_eq!((cfg.p.to_string(), cfg.r.to_string()), ("5/4".into(), "inf".into()));
    }

    #[test]
    fn hash_ignores_threads_and_output() {
        let a = cli("scan --q 2,3 --threads 1 --format csv");
        let b = cli("scan --q 2,3 --threads 8 --out x.jsonl");
        let c = cli("scan --q 2,3 --seed 1");
        let h = |c: &Cli| RunConfig::resolve("scan", c.command.common()).unwrap().hash();
        assert_eq!(h(&a), h(&b));
        assert_ne!(h(&a), h(&c));
    }

    #[test]
    fn transform_point_indicator() {
        let out = execute(&cli("transform --q 3 --d 2 --k 1 --indicator 0,0")).unwrap();
        assert_eq!(out.records.len(), 12);
        let hits: Vec<f64> = out.records.iter().map(|r| r.value).filter(|&v| v != 0.0).collect();
        assert_eq!(hits.len(), 4);
        assert!(hits.iter().all(|v| (v - 1.0 / 3.0).abs() < 1e-15));
    }

    #[test]
    fn transform_constant_and_function() {
        let out = execute(&cli("transform --q 3 --d 2 --constant")).unwrap();
        assert!(out.records.iter().all(|r| (r.value - 1.0).abs() < 1e-15));
        let all: String = (0..3).flat_map(|a| (0..3).map(move |b| format!("{a},{b}:1;"))).collect();
        let out = execute(&cli(&format!("transform --q 3 --d 2 --function {all}"))).unwrap();
        assert!(out.records.iter().all(|r| (r.value - 1.0).abs() < 1e-15));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let sp = space_for(3, 2).unwrap();
        assert_eq!(
            parse_point_values("0,0:1\n1,x:2", &sp).unwrap_err(),
            Error::Parse { line: 2, msg: "bad point literal \"1,x\"".into() }
        );
        assert!(matches!(parse_point_values("0,0,0", &sp), Err(Error::DimensionMismatch { expected: 2, found: 3 })));
        assert!(matches!(parse_point_values("(0,1):1/2; 3,0", &sp), Err(Error::Parse { line: 1, .. })));
        assert_eq!(parse_point_values("(0,1):1/2", &sp).unwrap(), vec![(3, Some(0.5))]);
    }

    #[test]
    fn lemma_single_set_matches() {
        let out = execute(&cli("lemmas --q 3 --d 2 --set 0,0")).unwrap();
        assert!(out.failures.is_empty());
        let t0 = out.records.iter().find(|r| r.method == "t0_l2").unwrap();
        assert!((t0.value - 4.0 / 243.0).abs() < 1e-15);
        assert!((t0.bound.unwrap() - 1.0 / 54.0).abs() < 1e-15);
    }

    #[test]
    fn incidence_singleton_family() {
        let out = execute(&cli("incidence --q 3 --d 2 --sets 1,1|1,1|1,1")).unwrap();
        let d0 = out.records.iter().find(|r| r.method == "delta(0)").unwrap();
        assert_eq!(d0.value, 1.0);
        assert!(out.failures.is_empty());
    }

    #[test]
    fn scan_exit_and_caps() {
        let out = execute(&cli("scan --q 2 --d 2 --k 1 --vertex --trials 20")).unwrap();
        assert_eq!(out.exit_code(), 0);
        let ind = out.records.iter().find(|r| r.method == "indicator").unwrap();
        assert!(ind.exhaustive && (ind.value - 1.0).abs() < 1e-9);
        let err = execute(&cli("scan --q 2,5 --d 3 --max-points 64")).unwrap_err();
        assert!(matches!(err, Error::SizeCapExceeded { .. }));
        assert_eq!(run(["ffradon", "scan", "--q", "5", "--d", "3", "--max-points", "64"]), 2);
    }

    #[test]
    fn csv_columns() {
        let out = execute(&cli("scan --q 2 --trials 5 --reproducible")).unwrap();
        let mut buf = Vec::new();
        write_records(&out.records, Format::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_COLUMNS.join(","));
        assert!(lines.next().unwrap().starts_with("ffradon/1,scan,2,2,1,3/2,3,step,"));
    }
}
