//! Necessity witnesses: point mass, k-flat indicator and the constant function,
//! plus the log-log fit that turns a ratio sequence into a growth exponent.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::geometry::Space;
use crate::measures::{mean_norm_real, Exponent};
use crate::transforms::PlaneFamily;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WitnessKind {
    Delta,
    KFlat,
    Constant,
}

impl WitnessKind {
    pub const ALL: [WitnessKind; 3] = [WitnessKind::Delta, WitnessKind::KFlat, WitnessKind::Constant];

    pub fn as_str(self) -> &'static str {
        match self {
            WitnessKind::Delta => "delta",
            WitnessKind::KFlat => "kflat",
            WitnessKind::Constant => "constant",
        }
    }
}

/// Builds F_q from its order, using the default modulus for prime powers.
pub fn field_for_order(q: u64) -> Result<FieldCtx> {
    if q < 2 {
        return Err(Error::NotPrime(q));
    }
    let p = (2..=q).find(|p| q.is_multiple_of(*p)).unwrap();
    let mut n = 0;
    let mut rest = q;
    while rest.is_multiple_of(p) {
        rest /= p;
        n += 1;
    }
    if rest != 1 {
        return Err(Error::NotPrime(q));
    }
    FieldCtx::new(p, n, None)
}

pub fn space_for(q: u64, d: usize) -> Result<Space> {
    Space::new(Arc::new(field_for_order(q)?), d)
}

/// The witness function as a rank-indexed table. The point mass sits at the
/// origin; the flat is the first one in enumeration order.
pub fn witness_function(kind: WitnessKind, family: &PlaneFamily) -> Vec<f64> {
    let n = family.space().num_points();
    match kind {
        WitnessKind::Constant => vec![1.0; n],
        WitnessKind::Delta => {
            let mut f = vec![0.0; n];
            f[0] = 1.0;
            f
        }
        WitnessKind::KFlat => {
            let mut f = vec![0.0; n];
            for &x in family.plane_points(0) {
                f[x as usize] = 1.0;
            }
            f
        }
    }
}

/// A witness with its transform cached, so ratios at many exponents are cheap.
#[derive(Debug, Clone)]
pub struct CachedWitness {
    pub kind: WitnessKind,
    pub f: Vec<f64>,
    pub tf: Vec<f64>,
}

impl CachedWitness {
    pub fn new(kind: WitnessKind, family: &PlaneFamily) -> Self {
        let f = witness_function(kind, family);
        let tf = family.transform_real(&f);
        CachedWitness { kind, f, tf }
    }

    pub fn ratio(&self, p: Exponent, r: Exponent) -> f64 {
        mean_norm_real(&self.tf, r) / mean_norm_real(&self.f, p)
    }
}

/// norm_ratio of the named witness, computed through the transform.
pub fn witness_ratio(kind: WitnessKind, family: &PlaneFamily, p: Exponent, r: Exponent) -> f64 {
    CachedWitness::new(kind, family).ratio(p, r)
}

/// Growth exponent of the point-mass ratio: d/p − k − (d−k)/r.
pub fn delta_exponent(d: usize, k: usize, p: Exponent, r: Exponent) -> f64 {
    d as f64 * p.reciprocal() - k as f64 - (d - k) as f64 * r.reciprocal()
}

/// Closed form q^{d/p − k − (d−k)/r} of the point-mass ratio.
pub fn delta_closed_form(q: u64, d: usize, k: usize, p: Exponent, r: Exponent) -> f64 {
    (q as f64).powf(delta_exponent(d, k, p, r))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentFit {
    pub alpha: f64,
    pub intercept: f64,
    /// Root-mean-square residual in log space.
    pub residual: f64,
}

/// Least-squares slope of log(ratio) against log(q).
pub fn exponent_fit(samples: &[(u64, f64)]) -> Result<ExponentFit> {
    if samples.len() < 3 {
        return Err(Error::TooFewPoints { needed: 3, got: samples.len() });
    }
    let pts: Vec<(f64, f64)> = samples.iter().map(|&(q, v)| ((q as f64).ln(), v.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let alpha = sxy / sxx;
    let intercept = my - alpha * mx;
    let residual = (pts.iter().map(|p| (p.1 - intercept - alpha * p.0).powi(2)).sum::<f64>() / n).sqrt();
    Ok(ExponentFit { alpha, intercept, residual })
}

/// Fits the growth exponent of one witness across several field orders.
pub fn witness_exponent(
    kind: WitnessKind,
    d: usize,
    k: usize,
    p: Exponent,
    r: Exponent,
    q_list: &[u64],
) -> Result<ExponentFit> {
    if q_list.len() < 3 {
        return Err(Error::TooFewPoints { needed: 3, got: q_list.len() });
    }
    let mut samples = Vec::with_capacity(q_list.len());
    for &q in q_list {
        let family = PlaneFamily::new(space_for(q, d)?, k)?;
        samples.push((q, witness_ratio(kind, &family, p, r)));
    }
    exponent_fit(&samples)
}
