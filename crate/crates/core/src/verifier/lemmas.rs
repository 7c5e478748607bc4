//! Explicit-constant forms of the hyperplane lemma bounds for the
//! double-star operators, and the diagonal / off-diagonal split of the
//! L² bound for T₁**.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::Elem;
use crate::geometry::Point;
use crate::transforms::{fourier_transform, GridFunction, RadonFamily};

/// Slack added to the nonpositivity and upper-bound checks.
pub const LEMMA_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaReport {
    pub q: usize,
    pub d: usize,
    pub set_size: usize,
    /// ‖T₀**E‖_∞ and ‖T₀**E‖₂² over (Π_{d-1}, dσ).
    pub t0_sup: f64,
    pub t0_l2_sq: f64,
    pub t1_sup: f64,
    pub t1_l2_sq: f64,
    /// 2 q^{-d+1} |E|.
    pub sup_bound: f64,
    /// (q−1)|E| / (q^d |Π_{d-1}|).
    pub l2_bound: f64,
    /// Diagonal term (s = s') of the T₁** expansion; equal to `l2_bound`.
    pub diag: f64,
    /// Off-diagonal term, summed from its definition.
    pub off_diag: f64,
    /// Off-diagonal term after the substitution u = s'/s, −#{x = u x', u ≠ 0, 1}/(|Π| q^d).
    pub off_diag_closed: f64,
    /// Γ(w') for every Θ representative, when requested.
    pub gamma: Option<Vec<(usize, f64)>>,
}

impl LemmaReport {
    /// Names of the failed checks; empty when every bound holds.
    pub fn violations(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.t0_sup > self.sup_bound * (1.0 + LEMMA_TOL) {
            out.push("t0_sup");
        }
        if self.t1_sup > self.sup_bound * (1.0 + LEMMA_TOL) {
            out.push("t1_sup");
        }
        if self.t0_l2_sq > self.l2_bound + LEMMA_TOL {
            out.push("t0_l2");
        }
        if self.t1_l2_sq > self.l2_bound + LEMMA_TOL {
            out.push("t1_l2");
        }
        if self.off_diag > LEMMA_TOL {
            out.push("off_diag_nonpositive");
        }
        if self.t1_l2_sq > self.diag + LEMMA_TOL {
            out.push("t1_l2_vs_diag");
        }
        if self.t1_l2_sq > self.diag + self.off_diag + LEMMA_TOL {
            out.push("t1_l2_vs_diag_plus_off_diag");
        }
        out
    }

    pub fn passes(&self) -> bool {
        self.violations().is_empty()
    }
}

fn sup_and_l2(values: &[Complex64]) -> (f64, f64) {
    let sup = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let l2 = values.iter().map(|v| v.norm_sqr()).sum::<f64>() / values.len() as f64;
    (sup, l2)
}

/// Measures the double-star operators on the indicator of `set` (point ranks)
/// and evaluates every bound.
pub fn lemma_suite(rf: &RadonFamily, set: &[usize], keep_gamma: bool) -> Result<LemmaReport> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let space = rf.space();
    let field = space.field();
    let q = space.q();
    let d = space.dim();
    let n = space.num_points();
    let e = GridFunction::indicator(space, set)?;
    let mut member = vec![false; n];
    for &x in set {
        member[x] = true;
    }
    let size = member.iter().filter(|&&m| m).count();

    let fhat = fourier_transform(space, &e)?;
    let parts = rf.char_parts_from_fourier(&e, &fhat);
    let (t0_sup, t0_l2_sq) = sup_and_l2(parts.t0_dstar.values());
    let (t1_sup, t1_l2_sq) = sup_and_l2(parts.t1_dstar.values());

    let planes = rf.family().len() as f64;
    let qd = n as f64;
    let sup_bound = 2.0 * (q as f64).powi(1 - d as i32) * size as f64;
    let l2_bound = (q as f64 - 1.0) * size as f64 / (qd * planes);
    let diag = l2_bound;

    // Σ over x, x' ∈ E and s ≠ s' in F_q* with s·x = s'·x' of χ(s' − s)
    let mut off = Complex64::new(0.0, 0.0);
    let mut closed_count = 0u64;
    for x in (0..n).filter(|&x| member[x]) {
        let px = space.unrank(x);
        for s in field.nonzero() {
            for s2 in field.nonzero().filter(|&s2| s2 != s) {
                let u = field.div(s, s2)?;
                let x2 = space.rank(&Point(space.scale(u, &px.0)));
                if member[x2] {
                    off += field.chi(field.sub(s2, s));
                }
            }
        }
        // x = u·x' with u ∉ {0, 1}, i.e. x' = u^{-1}·x
        for u in field.nonzero().filter(|&u| u != Elem::ONE) {
            let x2 = space.rank(&Point(space.scale(field.inv(u)?, &px.0)));
            if member[x2] {
                closed_count += 1;
            }
        }
    }
    let off_diag = off.re / (planes * qd);
    let off_diag_closed = -(closed_count as f64) / (planes * qd);

    let gamma = keep_gamma.then(|| {
        rf.duals()
            .iter()
            .zip(rf.dual_ranks())
            .filter(|(w, _)| w.kind == crate::geometry::HyperplaneKind::Theta)
            .map(|(_, &r)| (r, rf.gamma(&fhat, r)))
            .collect()
    });

    Ok(LemmaReport {
        q,
        d,
        set_size: size,
        t0_sup,
        t0_l2_sq,
        t1_sup,
        t1_l2_sq,
        sup_bound,
        l2_bound,
        diag,
        off_diag,
        off_diag_closed,
        gamma,
    })
}
