//! Maximizing ‖Tf‖_r / ‖f‖_p over indicators and over nonnegative functions.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{derive_seed, Method, RatioReport};
use crate::error::{Error, Result};
use crate::measures::{compensated_sum, mean_norm_real, Exponent};
use crate::transforms::PlaneFamily;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    /// Maximum number of subsets evaluated. Search is exhaustive when 2^{q^d} fits.
    pub budget: u64,
    /// Hill-climbing starts: the full set, a single point, then random subsets.
    pub restarts: usize,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { budget: 1 << 16, restarts: 8, seed: 0 }
    }
}

/// Plane intersection counts of an indicator, with the norm maintained from them.
struct IndicatorState<'a> {
    family: &'a PlaneFamily,
    member: Vec<bool>,
    counts: Vec<u32>,
    size: usize,
    /// pw[c] = (c / q^k)^r for finite r.
    pw: Vec<f64>,
    r: Exponent,
    p: Exponent,
    plane_sum: f64,
}

impl<'a> IndicatorState<'a> {
    fn new(family: &'a PlaneFamily, p: Exponent, r: Exponent) -> Self {
        let m = family.plane_size();
        let pw = (0..=m).map(|c| if r.is_infinite() { 0.0 } else { (c as f64 / m as f64).powf(r.value()) }).collect();
        IndicatorState {
            family,
            member: vec![false; family.space().num_points()],
            counts: vec![0; family.len()],
            size: 0,
            pw,
            r,
            p,
            plane_sum: 0.0,
        }
    }

    fn flip(&mut self, x: usize) {
        let add = !self.member[x];
        self.member[x] = add;
        if add {
            self.size += 1;
        } else {
            self.size -= 1;
        }
        for &w in self.family.planes_through(x) {
            if add {
                self.counts[w as usize] += 1;
            } else {
                self.counts[w as usize] -= 1;
            }
        }
    }

    fn resum(&mut self) {
        self.plane_sum = compensated_sum(self.counts.iter().map(|&c| self.pw[c as usize]));
    }

    fn ratio_with(&self, plane_sum: f64, size: usize, sup_count: Option<u32>) -> f64 {
        let np = self.family.len() as f64;
        let num = if self.r.is_infinite() {
            sup_count.unwrap_or_else(|| *self.counts.iter().max().unwrap()) as f64 / self.family.plane_size() as f64
        } else {
            (plane_sum.max(0.0) / np).powf(1.0 / self.r.value())
        };
        let frac = size as f64 / self.member.len() as f64;
        let den = if self.p.is_infinite() { 1.0 } else { frac.powf(1.0 / self.p.value()) };
        num / den
    }

    fn ratio(&self) -> f64 {
        self.ratio_with(self.plane_sum, self.size, None)
    }

    /// Ratio after flipping x, without mutating.
    fn ratio_after_flip(&mut self, x: usize) -> f64 {
        if self.r.is_infinite() {
            self.flip(x);
            let v = self.ratio_with(0.0, self.size, None);
            self.flip(x);
            return v;
        }
        let add = !self.member[x];
        let delta: f64 = self
            .family
            .planes_through(x)
            .iter()
            .map(|&w| {
                let c = self.counts[w as usize] as usize;
                let c2 = if add { c + 1 } else { c - 1 };
                self.pw[c2] - self.pw[c]
            })
            .sum();
        let size = if add { self.size + 1 } else { self.size - 1 };
        self.ratio_with(self.plane_sum + delta, size, None)
    }

    fn set_descriptor(&self) -> String {
        let ranks: Vec<String> =
            self.member.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| i.to_string()).collect();
        format!("set=[{}]", ranks.join(","))
    }
}

/// Result of an indicator search.
#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorSearch {
    pub report: RatioReport,
    pub best_set: Vec<usize>,
    /// Best ratio among the hill-climbing starting sets (0 when exhaustive).
    pub best_start_ratio: f64,
}

/// Largest ‖T1_E‖_r / ‖1_E‖_p over nonempty E.
pub fn indicator_norm_search(family: &PlaneFamily, p: Exponent, r: Exponent, cfg: &SearchConfig) -> IndicatorSearch {
    let start = Instant::now();
    let n = family.space().num_points();
    let exhaustive = n < 64 && (1u64 << n) <= cfg.budget;
    let mut st = IndicatorState::new(family, p, r);
    let mut best = f64::NEG_INFINITY;
    let mut best_set = Vec::new();
    let mut best_desc = String::new();
    let mut best_start_ratio = 0.0;
    let mut evals = 0usize;

    let mut record = |st: &IndicatorState, v: f64, best: &mut f64| {
        if v > *best {
            *best = v;
            best_set = st.member.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| i).collect();
            best_desc = st.set_descriptor();
        }
    };

    if exhaustive {
        // Gray-code walk over all nonempty subsets
        for m in 1u64..(1u64 << n) {
            st.flip(m.trailing_zeros() as usize);
            st.resum();
            evals += 1;
            let v = st.ratio();
            record(&st, v, &mut best);
        }
    } else {
        let budget = cfg.budget as usize;
        'restarts: for i in 0..cfg.restarts.max(1) {
            let mut st = IndicatorState::new(family, p, r);
            match i {
                0 => (0..n).for_each(|x| st.flip(x)),
                1 => st.flip(0),
                _ => {
                    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, &[i as u64]));
                    let density: f64 = rng.gen_range(0.02..0.6);
                    for x in 0..n {
                        if rng.gen_bool(density) {
                            st.flip(x);
                        }
                    }
                    if st.size == 0 {
                        st.flip(rng.gen_range(0..n));
                    }
                }
            }
            st.resum();
            let mut cur = st.ratio();
            evals += 1;
            best_start_ratio = f64::max(best_start_ratio, cur);
            record(&st, cur, &mut best);
            loop {
                let mut step_best = f64::NEG_INFINITY;
                let mut step_x = usize::MAX;
                for x in 0..n {
                    if st.member[x] && st.size == 1 {
                        continue;
                    }
                    let v = st.ratio_after_flip(x);
                    evals += 1;
                    if v > step_best {
                        step_best = v;
                        step_x = x;
                    }
                }
                if step_x == usize::MAX || step_best <= cur * (1.0 + 1e-12) {
                    break;
                }
                st.flip(step_x);
                st.resum();
                cur = st.ratio();
                record(&st, cur, &mut best);
                if evals >= budget {
                    break 'restarts;
                }
            }
            if evals >= budget {
                break;
            }
        }
    }

    IndicatorSearch {
        report: RatioReport {
            q: family.space().q() as u64,
            d: family.space().dim(),
            k: family.k(),
            p,
            r,
            method: Method::IndicatorSearch,
            max_ratio: best,
            witness: best_desc,
            exhaustive,
            iterations: evals,
            converged: true,
            elapsed_ms: start.elapsed().as_millis() as u64,
        },
        best_set,
        best_start_ratio,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerConfig {
    pub tol: f64,
    pub max_iter: usize,
    /// Seeded random nonnegative starts in addition to f ≡ 1; odd ones are point bumps.
    pub random_starts: usize,
    pub seed: u64,
}

impl Default for PowerConfig {
    fn default() -> Self {
        PowerConfig { tol: 1e-10, max_iter: 500, random_starts: 8, seed: 0 }
    }
}

fn normalize(f: &mut [f64], p: Exponent) {
    let n = mean_norm_real(f, p);
    if n > 0.0 {
        f.iter_mut().for_each(|v| *v /= n);
    }
}

fn ratio_of(family: &PlaneFamily, f: &[f64], p: Exponent, r: Exponent) -> f64 {
    mean_norm_real(&family.transform_real(f), r) / mean_norm_real(f, p)
}

/// One step f ↦ (T†((Tf)^{r−1}))^{1/(p−1)}, normalized to ‖f‖_p = 1.
pub fn power_step(family: &PlaneFamily, f: &[f64], p: Exponent, r: Exponent) -> Vec<f64> {
    let tf = family.transform_real(f);
    let g: Vec<f64> = tf.iter().map(|v| v.max(0.0).powf(r.value() - 1.0)).collect();
    let mut h: Vec<f64> =
        family.adjoint_real(&g).into_iter().map(|v| v.max(0.0).powf(1.0 / (p.value() - 1.0))).collect();
    normalize(&mut h, p);
    h
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerResult {
    pub report: RatioReport,
    /// Ratio sequence per start, f ≡ 1 first.
    pub histories: Vec<Vec<f64>>,
    pub best_function: Vec<f64>,
}

/// Nonlinear power method for ‖T‖_{p→r} on nonnegative functions.
pub fn power_iteration_norm(family: &PlaneFamily, p: Exponent, r: Exponent, cfg: &PowerConfig) -> Result<PowerResult> {
    let start = Instant::now();
    let finite = |e: Exponent| !e.is_infinite() && e.value() > 1.0;
    if !finite(p) || !finite(r) {
        return Err(Error::BadExponent(format!("power iteration needs 1 < p, r < inf, got p={p}, r={r}")));
    }
    let n = family.space().num_points();
    let mut starts = vec![vec![1.0; n]];
    for i in 0..cfg.random_starts {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, &[i as u64]));
        let f: Vec<f64> = if i % 2 == 0 {
            (0..n).map(|_| rng.gen_range(0.0..1.0f64).powi(4)).collect()
        } else {
            // a bump on a point over a small random floor
            let x = rng.gen_range(0..n);
            let floor = 0.3 * 0.5f64.powi((i / 2) as i32);
            (0..n).map(|y| if y == x { 1.0 } else { floor * rng.gen_range(0.0..1.0f64) }).collect()
        };
        starts.push(f);
    }
    let mut best = f64::NEG_INFINITY;
    let mut best_function = Vec::new();
    let mut best_start = 0;
    let mut histories = Vec::with_capacity(starts.len());
    let mut iterations = 0;
    let mut all_converged = true;
    for (si, mut f) in starts.into_iter().enumerate() {
        normalize(&mut f, p);
        let mut cur = ratio_of(family, &f, p, r);
        let mut hist = vec![cur];
        let mut converged = false;
        for _ in 0..cfg.max_iter {
            iterations += 1;
            let next = power_step(family, &f, p, r);
            let v = ratio_of(family, &next, p, r);
            hist.push(v);
            f = next;
            let done = (v - cur).abs() < cfg.tol;
            cur = v;
            if done {
                converged = true;
                break;
            }
        }
        all_converged &= converged;
        let top = hist.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if top > best {
            best = top;
            best_function = f.clone();
            best_start = si;
        }
        histories.push(hist);
    }
    Ok(PowerResult {
        report: RatioReport {
            q: family.space().q() as u64,
            d: family.space().dim(),
            k: family.k(),
            p,
            r,
            method: Method::PowerIteration,
            max_ratio: best,
            witness: format!("power(start={best_start},seed={})", cfg.seed),
            exhaustive: false,
            iterations,
            converged: all_converged,
            elapsed_ms: start.elapsed().as_millis() as u64,
        },
        histories,
        best_function,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::norm_ratio;
    use crate::transforms::GridFunction;
    use crate::verifier::witness::space_for;

    fn family(q: u64, d: usize, k: usize) -> PlaneFamily {
        PlaneFamily::new(space_for(q, d).unwrap(), k).unwrap()
    }

    #[test]
    fn exhaustive_q2_vertex_is_one() {
        let fam = family(2, 2, 1);
        let (p, r) = Exponent::vertex(2, 1);
        let res = indicator_norm_search(&fam, p, r, &SearchConfig::default());
        assert!(res.report.exhaustive);
        assert_eq!(res.report.iterations, 15);
        assert!((res.report.max_ratio - 1.0).abs() < 1e-9);
    }

    #[test]
    fn exhaustive_matches_direct_ratios() {
        let fam = family(3, 2, 1);
        let (p, r) = (Exponent::ratio(5, 4).unwrap(), Exponent::integer(3).unwrap());
        let res = indicator_norm_search(&fam, p, r, &SearchConfig::default());
        assert!(res.report.exhaustive);
        let mut best = 0.0f64;
        for m in 1u32..512 {
            let set: Vec<usize> = (0..9).filter(|i| m >> i & 1 == 1).collect();
            let f = GridFunction::indicator(fam.space(), &set).unwrap();
            best = best.max(norm_ratio(&fam, &f, p, r).unwrap());
        }
        assert!((res.report.max_ratio - best).abs() < 1e-12);
        let f = GridFunction::indicator(fam.space(), &res.best_set).unwrap();
        assert!((norm_ratio(&fam, &f, p, r).unwrap() - best).abs() < 1e-12);
    }

    #[test]
    fn hill_climb_improves_on_starts() {
        let fam = family(5, 2, 1);
        let (p, r) = Exponent::vertex(2, 1);
        let cfg = SearchConfig { budget: 20_000, restarts: 6, seed: 3 };
        let res = indicator_norm_search(&fam, p, r, &cfg);
        assert!(!res.report.exhaustive);
        assert!(res.report.max_ratio >= res.best_start_ratio);
        assert!(res.report.max_ratio >= 1.0);
        let f = GridFunction::indicator(fam.space(), &res.best_set).unwrap();
        assert!((norm_ratio(&fam, &f, p, r).unwrap() - res.report.max_ratio).abs() < 1e-9);
        assert_eq!(res, indicator_norm_search(&fam, p, r, &cfg));
    }

    #[test]
    fn infinite_exponents_in_search() {
        let fam = family(3, 2, 1);
        let res = indicator_norm_search(&fam, Exponent::infinity(), Exponent::infinity(), &SearchConfig::default());
        assert!((res.report.max_ratio - 1.0).abs() < 1e-12);
        let res =
            indicator_norm_search(&fam, Exponent::integer(1).unwrap(), Exponent::infinity(), &SearchConfig::default());
        // a point mass: sup 1/3 over mass 1/9
        assert!((res.report.max_ratio - 3.0).abs() < 1e-12);
    }

    /// max over t of the ratio of (1, t, t, t) on F_2^2 at the vertex, by golden section.
    fn q2_one_parameter_max() -> f64 {
        let ratio = |t: f64| {
            let num = ((3.0 * ((1.0 + t) / 2.0).powi(3) + 3.0 * t.powi(3)) / 6.0).cbrt();
            let den = ((1.0 + 3.0 * t.powf(1.5)) / 4.0).powf(2.0 / 3.0);
            num / den
        };
        let (mut a, mut b) = (0.0f64, 1.0f64);
        let g = (5f64.sqrt() - 1.0) / 2.0;
        for _ in 0..200 {
            let (c, d) = (b - g * (b - a), a + g * (b - a));
            if ratio(c) > ratio(d) {
                b = d;
            } else {
                a = c;
            }
        }
        ratio((a + b) / 2.0)
    }

    #[test]
    fn power_iteration_q2() {
        let fam = family(2, 2, 1);
        let (p, r) = Exponent::vertex(2, 1);
        let res = power_iteration_norm(&fam, p, r, &PowerConfig::default()).unwrap();
        // f = 1 is a fixed point, but the norm over nonnegative functions exceeds
        // the indicator maximum 1
        assert!(res.histories[0].iter().all(|v| (v - 1.0).abs() < 1e-12));
        let want = q2_one_parameter_max();
        assert!((want - 1.03938067).abs() < 1e-7);
        assert!((res.report.max_ratio - want).abs() < 1e-6, "{}", res.report.max_ratio);
    }

    #[test]
    fn power_step_from_point_mass_is_positive() {
        let fam = family(3, 2, 1);
        let (p, r) = Exponent::vertex(2, 1);
        let mut f = vec![0.0; 9];
        f[4] = 1.0;
        let next = power_step(&fam, &f, p, r);
        assert!(next.iter().all(|&v| v >= 0.0));
        assert!(next.iter().any(|&v| v > 0.0));
    }

    #[test]
    fn power_ratios_are_monotone() {
        let fam = family(3, 2, 1);
        let (p, r) = Exponent::vertex(2, 1);
        for seed in 0..100 {
            let cfg = PowerConfig { tol: 1e-12, max_iter: 200, random_starts: 1, seed };
            let res = power_iteration_norm(&fam, p, r, &cfg).unwrap();
            for h in &res.histories {
                for w in h.windows(2) {
                    assert!(w[1] >= w[0] - 1e-9, "seed {seed}: {} -> {}", w[0], w[1]);
                }
            }
            assert!(res.report.max_ratio >= 1.0 - 1e-12);
        }
    }

    #[test]
    fn power_rejects_endpoints() {
        let fam = family(3, 2, 1);
        let one = Exponent::integer(1).unwrap();
        assert!(power_iteration_norm(&fam, one, Exponent::integer(3).unwrap(), &PowerConfig::default()).is_err());
        assert!(power_iteration_norm(
            &fam,
            Exponent::integer(2).unwrap(),
            Exponent::infinity(),
            &PowerConfig::default()
        )
        .is_err());
    }
}
