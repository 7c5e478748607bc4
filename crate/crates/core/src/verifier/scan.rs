//! Cross-q experiments: vertex boundedness scans, the restricted-type constant,
//! and the hull/witness coherence grid.

use std::time::Instant;

use num_rational::Ratio;
use rayon::prelude::*;

use super::hull::{HullClass, HullSpec, Q};
use super::search::{indicator_norm_search, power_iteration_norm, PowerConfig, SearchConfig};
use super::step::gen_step_function;
use super::witness::{delta_exponent, exponent_fit, space_for, CachedWitness, ExponentFit, WitnessKind};
use super::{derive_seed, Method, RatioReport};
use crate::error::{Error, Result};
use crate::measures::{mean_norm_real, Exponent};
use crate::transforms::PlaneFamily;

/// Largest accepted max/min ratio of per-q maxima.
pub const SPREAD_TOL: f64 = 1.25;

#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig {
    pub q_list: Vec<u64>,
    pub d: usize,
    pub k: usize,
    /// Defaults to the vertex exponents when `None`.
    pub exponents: Option<(Exponent, Exponent)>,
    /// Step functions per q; trial 0 is the constant function.
    pub trials: usize,
    pub seed: u64,
    pub subset_budget: u64,
    pub restarts: usize,
    pub power: PowerConfig,
    /// Cap on q^d.
    pub max_points: u128,
}

impl ScanConfig {
    pub fn new(q_list: Vec<u64>, d: usize, k: usize) -> Self {
        ScanConfig {
            q_list,
            d,
            k,
            exponents: None,
            trials: 1000,
            seed: 0,
            subset_budget: 1 << 16,
            restarts: 8,
            power: PowerConfig::default(),
            max_points: crate::geometry::DEFAULT_MAX_ITEMS,
        }
    }

    pub fn exponents(&self) -> (Exponent, Exponent) {
        self.exponents.unwrap_or_else(|| Exponent::vertex(self.d, self.k))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanOutcome {
    /// Three reports per q, in q order: step, indicator, power.
    pub reports: Vec<RatioReport>,
    pub per_q_max: Vec<(u64, f64)>,
    /// max over q of the per-q maximum divided by the min over q.
    pub spread: f64,
}

impl ScanOutcome {
    /// Boundedness assertions: every maximum is at least the constant
    /// function's ratio 1, and the spread is within [`SPREAD_TOL`].
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for &(q, m) in &self.per_q_max {
            if m < 1.0 - 1e-9 {
                out.push(format!("q={q}: max ratio {m} below the constant witness"));
            }
        }
        if self.spread > SPREAD_TOL {
            out.push(format!("spread {} exceeds {SPREAD_TOL}", self.spread));
        }
        out
    }
}

fn check_size(q: u64, d: usize, cap: u128) -> Result<()> {
    let n = (q as u128).checked_pow(d as u32).unwrap_or(u128::MAX);
    if n > cap {
        return Err(Error::SizeCapExceeded { what: "q^d", value: n, cap });
    }
    Ok(())
}

fn spread_of(per_q: &[(u64, f64)]) -> f64 {
    let hi = per_q.iter().map(|v| v.1).fold(f64::NEG_INFINITY, f64::max);
    let lo = per_q.iter().map(|v| v.1).fold(f64::INFINITY, f64::min);
    if per_q.is_empty() {
        1.0
    } else {
        hi / lo
    }
}

/// Best ratio over `trials` step functions at one q. Ties go to the lowest trial.
fn step_report(family: &PlaneFamily, p: Exponent, r: Exponent, cfg: &ScanConfig, q: u64) -> Result<RatioReport> {
    let start = Instant::now();
    let space = family.space();
    let n = space.num_points();
    let rho = (cfg.d as f64 + 1.0) / (cfg.k as f64 + 1.0);
    let max_levels = ((n as f64).log2() / rho).floor() as usize + 2;
    let max_levels = max_levels.min(n).max(1);
    let trials = cfg.trials.max(1);
    let results: Vec<Result<(f64, String)>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            if i == 0 {
                let f = vec![1.0; n];
                let v = mean_norm_real(&family.transform_real(&f), r) / mean_norm_real(&f, p);
                return Ok((v, "constant".to_string()));
            }
            let s = derive_seed(cfg.seed, &[q, i as u64]);
            let levels = 1 + (derive_seed(s, &[0]) % max_levels as u64) as usize;
            let sf = gen_step_function(s, space, cfg.k, levels)?;
            let f = sf.values(n);
            let v = mean_norm_real(&family.transform_real(&f), r) / mean_norm_real(&f, p);
            Ok((v, sf.descriptor()))
        })
        .collect();
    let mut best = (f64::NEG_INFINITY, String::new());
    for res in results {
        let (v, w) = res?;
        if v > best.0 {
            best = (v, w);
        }
    }
    Ok(RatioReport {
        q,
        d: cfg.d,
        k: cfg.k,
        p,
        r,
        method: Method::StepFunctions,
        max_ratio: best.0,
        witness: best.1,
        exhaustive: false,
        iterations: trials,
        converged: true,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// Step functions, indicator search and power iteration for each q.
pub fn theorem_scan(cfg: &ScanConfig) -> Result<ScanOutcome> {
    let (p, r) = cfg.exponents();
    for &q in &cfg.q_list {
        check_size(q, cfg.d, cfg.max_points)?;
    }
    let mut reports = Vec::with_capacity(3 * cfg.q_list.len());
    let mut per_q_max = Vec::with_capacity(cfg.q_list.len());
    for &q in &cfg.q_list {
        let family = PlaneFamily::new(space_for(q, cfg.d)?, cfg.k)?;
        let step = step_report(&family, p, r, cfg, q)?;
        let scfg =
            SearchConfig { budget: cfg.subset_budget, restarts: cfg.restarts, seed: derive_seed(cfg.seed, &[q, 1]) };
        let ind = indicator_norm_search(&family, p, r, &scfg).report;
        let power = if p.is_infinite() || r.is_infinite() || p.value() <= 1.0 || r.value() <= 1.0 {
            None
        } else {
            let pcfg = PowerConfig { seed: derive_seed(cfg.seed, &[q, 2]), ..cfg.power };
            Some(power_iteration_norm(&family, p, r, &pcfg)?.report)
        };
        let m = [Some(&step), Some(&ind), power.as_ref()]
            .into_iter()
            .flatten()
            .map(|rep| rep.max_ratio)
            .fold(f64::NEG_INFINITY, f64::max);
        per_q_max.push((q, m));
        reports.push(step);
        reports.push(ind);
        reports.extend(power);
    }
    let spread = spread_of(&per_q_max);
    Ok(ScanOutcome { reports, per_q_max, spread })
}

/// C_rt = max over nonempty E of ‖T1_E‖_{d+1} / (|E|/q^d)^{(k+1)/(d+1)}, exhaustively.
pub fn restricted_type_constant(q: u64, d: usize, k: usize, budget: u64) -> Result<RatioReport> {
    let family = PlaneFamily::new(space_for(q, d)?, k)?;
    let n = family.space().num_points();
    let subsets = if n >= 128 { u128::MAX } else { 1u128 << n };
    if subsets > budget as u128 {
        return Err(Error::SizeCapExceeded { what: "subsets", value: subsets, cap: budget as u128 });
    }
    let (p, r) = Exponent::vertex(d, k);
    let res = indicator_norm_search(&family, p, r, &SearchConfig { budget, restarts: 1, seed: 0 });
    debug_assert!(res.report.exhaustive);
    Ok(res.report)
}

/// Coherence thresholds for the sharpness grid.
pub const OUTSIDE_MIN_ALPHA: f64 = 0.05;
pub const INSIDE_MAX_ALPHA: f64 = 0.01;
pub const DELTA_ALPHA_TOL: f64 = 0.01;
/// Allowance for rounding in the fitted slope; exact power laws land within it.
pub const FIT_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct GridPoint {
    pub inv_p: Q,
    pub inv_r: Q,
    pub class: HullClass,
    /// Fits for delta, kflat, constant, in that order.
    pub fits: [ExponentFit; 3],
    pub delta_closed: f64,
}

impl GridPoint {
    pub fn max_alpha(&self) -> f64 {
        self.fits.iter().map(|f| f.alpha).fold(f64::NEG_INFINITY, f64::max)
    }

    /// None when coherent, else a short reason.
    pub fn violation(&self) -> Option<String> {
        let at = format!("(1/p,1/r)=({},{})", self.inv_p, self.inv_r);
        let a = self.max_alpha();
        if (self.fits[0].alpha - self.delta_closed).abs() > DELTA_ALPHA_TOL {
            return Some(format!("{at}: delta alpha {} vs closed form {}", self.fits[0].alpha, self.delta_closed));
        }
        if self.class == HullClass::Outside && a < OUTSIDE_MIN_ALPHA - FIT_EPS {
            return Some(format!("{at}: outside but max alpha {a}"));
        }
        if self.class.is_inside() && a > INSIDE_MAX_ALPHA + FIT_EPS {
            return Some(format!("{at}: {} but max alpha {a}", self.class.as_str()));
        }
        None
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SharpnessOutcome {
    pub d: usize,
    pub k: usize,
    pub q_list: Vec<u64>,
    /// Row-major in 1/p, then 1/r.
    pub points: Vec<GridPoint>,
    pub violations: Vec<String>,
}

fn exponent_from_inv(x: Q) -> Result<Exponent> {
    Exponent::from_reciprocal(Ratio::new(*x.numer() as u64, *x.denom() as u64))
}

/// Witness growth exponents on a `resolution`² grid of (1/p, 1/r) ∈ [0,1]².
pub fn sharpness_grid(d: usize, k: usize, q_list: &[u64], resolution: usize) -> Result<SharpnessOutcome> {
    if resolution < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: resolution });
    }
    if q_list.len() < 3 {
        return Err(Error::TooFewPoints { needed: 3, got: q_list.len() });
    }
    let hull = HullSpec::new(d, k);
    let witnesses: Vec<[CachedWitness; 3]> = q_list
        .par_iter()
        .map(|&q| {
            let family = PlaneFamily::new(space_for(q, d)?, k)?;
            Ok(WitnessKind::ALL.map(|w| CachedWitness::new(w, &family)))
        })
        .collect::<Result<_>>()?;
    let m = (resolution - 1) as i64;
    let cells: Vec<(i64, i64)> = (0..=m).flat_map(|i| (0..=m).map(move |j| (i, j))).collect();
    let points: Vec<GridPoint> = cells
        .par_iter()
        .map(|&(i, j)| {
            let inv_p = Q::new(i, m);
            let inv_r = Q::new(j, m);
            let (p, r) = (exponent_from_inv(inv_p)?, exponent_from_inv(inv_r)?);
            let class = hull.classify((inv_p, inv_r))?;
            let mut fits = [ExponentFit { alpha: 0.0, intercept: 0.0, residual: 0.0 }; 3];
            for (w, fit) in fits.iter_mut().enumerate() {
                let samples: Vec<(u64, f64)> =
                    q_list.iter().zip(&witnesses).map(|(&q, ws)| (q, ws[w].ratio(p, r))).collect();
                *fit = exponent_fit(&samples)?;
            }
            Ok(GridPoint { inv_p, inv_r, class, fits, delta_closed: delta_exponent(d, k, p, r) })
        })
        .collect::<Result<_>>()?;
    let violations = points.iter().filter_map(GridPoint::violation).collect();
    Ok(SharpnessOutcome { d, k, q_list: q_list.to_vec(), points, violations })
}
