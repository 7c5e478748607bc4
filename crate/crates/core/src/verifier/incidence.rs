//! Counting (d+1)-tuples by the dimension of their affine span.
//!
//! Two independent counters are provided: span-dimension histograms built by
//! incremental Gaussian elimination over a depth-first tuple walk, and the
//! line-class counter `L(l)` that tests collinearity against an explicit line.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};
use crate::geometry::Space;

/// Default cap on tuples visited by the exact counters.
pub const DEFAULT_TUPLE_BUDGET: u128 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CountMode {
    Exact,
    MonteCarlo { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeltaCount {
    Exact(u128),
    Estimate { value: f64, stderr: f64 },
}

impl DeltaCount {
    pub fn value(&self) -> f64 {
        match *self {
            DeltaCount::Exact(n) => n as f64,
            DeltaCount::Estimate { value, .. } => value,
        }
    }
}

fn tuple_count(sets: &[Vec<usize>]) -> u128 {
    sets.iter().map(|s| s.len() as u128).product()
}

fn check_budget(sets: &[Vec<usize>], budget: u128) -> Result<()> {
    let tuples = tuple_count(sets);
    if tuples > budget {
        return Err(Error::TooLargeExact { tuples, budget });
    }
    Ok(())
}

/// Echelon basis supporting incremental insertion.
#[derive(Clone)]
struct Basis {
    rows: Vec<(usize, Vec<Elem>)>,
}

impl Basis {
    fn insert(&mut self, field: &FieldCtx, mut v: Vec<Elem>) -> bool {
        for (pc, row) in &self.rows {
            let t = v[*pc];
            if !t.is_zero() {
                for (x, &y) in v.iter_mut().zip(row) {
                    *x = field.sub(*x, field.mul(t, y));
                }
            }
        }
        let Some(pc) = v.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        let inv = field.inv(v[pc]).unwrap();
        for x in v.iter_mut() {
            *x = field.mul(*x, inv);
        }
        // keep earlier rows reduced at the new pivot
        for (_, row) in self.rows.iter_mut() {
            let t = row[pc];
            if !t.is_zero() {
                for (x, &y) in row.iter_mut().zip(&v) {
                    *x = field.sub(*x, field.mul(t, y));
                }
            }
        }
        self.rows.push((pc, v));
        true
    }
}

/// Number of tuples in E_0 × … × E_m by affine span dimension (index = dim).
pub fn span_dimension_histogram(space: &Space, sets: &[Vec<usize>], budget: u128) -> Result<Vec<u128>> {
    if sets.is_empty() {
        return Err(Error::EmptyInput);
    }
    check_budget(sets, budget)?;
    let d = space.dim();
    let pts: Vec<Vec<Elem>> = (0..space.num_points()).map(|r| space.unrank(r).0).collect();
    for s in sets {
        if let Some(&bad) = s.iter().find(|&&x| x >= pts.len()) {
            return Err(Error::DimensionMismatch { expected: pts.len(), found: bad });
        }
    }
    let mut hist = vec![0u128; d + 1];

    fn walk(
        space: &Space,
        pts: &[Vec<Elem>],
        sets: &[Vec<usize>],
        pos: usize,
        x0: usize,
        basis: &Basis,
        hist: &mut [u128],
    ) {
        if pos == sets.len() {
            hist[basis.rows.len()] += 1;
            return;
        }
        for &x in &sets[pos] {
            let mut b = basis.clone();
            b.insert(space.field(), space.sub(&pts[x], &pts[x0]));
            walk(space, pts, sets, pos + 1, x0, &b, hist);
        }
    }

    for &x0 in &sets[0] {
        walk(space, &pts, sets, 1, x0, &Basis { rows: Vec::new() }, &mut hist);
    }
    Ok(hist)
}

/// |Δ(s)|: tuples from E_0 × … × E_d whose affine span has dimension exactly s.
pub fn delta_incidence_count(space: &Space, s: usize, sets: &[Vec<usize>], mode: CountMode) -> Result<DeltaCount> {
    match mode {
        CountMode::Exact => {
            let hist = span_dimension_histogram(space, sets, DEFAULT_TUPLE_BUDGET)?;
            Ok(DeltaCount::Exact(hist.get(s).copied().unwrap_or(0)))
        }
        CountMode::MonteCarlo { samples, seed } => {
            if sets.iter().any(|e| e.is_empty()) {
                return Ok(DeltaCount::Exact(0));
            }
            if samples == 0 {
                return Err(Error::EmptyInput);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut hits = 0usize;
            for _ in 0..samples {
                let tuple: Vec<_> = sets.iter().map(|e| space.unrank(e[rng.gen_range(0..e.len())])).collect();
                if space.affine_span(&tuple)?.dim() == s {
                    hits += 1;
                }
            }
            let total = tuple_count(sets) as f64;
            let frac = hits as f64 / samples as f64;
            Ok(DeltaCount::Estimate {
                value: total * frac,
                stderr: total * (frac * (1.0 - frac) / samples as f64).sqrt(),
            })
        }
    }
}

/// |L(l)|: tuples with x_1 = … = x_{l-1} = x_0, x_l ≠ x_0, and every later
/// entry on the line through x_0 and x_l.
pub fn l_class_count(space: &Space, l: usize, sets: &[Vec<usize>]) -> Result<u128> {
    if l == 0 || l >= sets.len() {
        return Err(Error::UnsupportedDim(l));
    }
    check_budget(sets, DEFAULT_TUPLE_BUDGET)?;
    let mut count = 0u128;
    for &x0 in &sets[0] {
        if !sets[1..l].iter().all(|e| e.contains(&x0)) {
            continue;
        }
        let p0 = space.unrank(x0);
        for &xl in sets[l].iter().filter(|&&x| x != x0) {
            let pl = space.unrank(xl);
            let line = space.flat(&p0, &[space.sub(&pl.0, &p0.0)])?;
            let mut tail = 1u128;
            for e in &sets[l + 1..] {
                let on = e.iter().filter(|&&x| space.incident(&line, &space.unrank(x)).unwrap()).count();
                tail *= on as u128;
                if tail == 0 {
                    break;
                }
            }
            count += tail;
        }
    }
    Ok(count)
}

/// The per-instance checks on one family of d+1 sets.
#[derive(Debug, Clone, PartialEq)]
pub struct IncidenceReport {
    pub sizes: Vec<usize>,
    pub delta: Vec<u128>,
    pub l_classes: Vec<u128>,
    pub violations: Vec<String>,
}

pub fn incidence_check(space: &Space, sets: &[Vec<usize>]) -> Result<IncidenceReport> {
    let d = space.dim();
    if sets.len() != d + 1 {
        return Err(Error::DimensionMismatch { expected: d + 1, found: sets.len() });
    }
    let q = space.q() as u128;
    let delta = span_dimension_histogram(space, sets, DEFAULT_TUPLE_BUDGET)?;
    let l_classes: Vec<u128> = (1..=d).map(|l| l_class_count(space, l, sets)).collect::<Result<_>>()?;
    let sizes: Vec<usize> = sets.iter().map(|s| s.len()).collect();
    let mut violations = Vec::new();
    let total: u128 = delta.iter().sum();
    if total != tuple_count(sets) {
        violations.push(format!("sum of span classes {total} != {}", tuple_count(sets)));
    }
    if delta[0] > sizes[0] as u128 {
        violations.push(format!("delta(0) = {} > |E_0| = {}", delta[0], sizes[0]));
    }
    for (i, &ll) in l_classes.iter().enumerate() {
        let l = i + 1;
        let bound = sizes[0] as u128 * sizes[l] as u128 * q.pow((d - l) as u32);
        if ll > bound {
            violations.push(format!("L({l}) = {ll} > {bound}"));
        }
    }
    let lsum: u128 = l_classes.iter().sum();
    if lsum != delta[1] {
        violations.push(format!("sum of L(l) = {lsum} != delta(1) = {}", delta[1]));
    }
    Ok(IncidenceReport { sizes, delta, l_classes, violations })
}

/// d+1 random nonempty sets of size at most `max_size`, sampled independently.
pub fn random_set_family(space: &Space, max_size: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = space.num_points();
    (0..=space.dim())
        .map(|_| {
            let size = rng.gen_range(1..=max_size.min(n));
            rand::seq::index::sample(&mut rng, n, size).into_vec()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;

    fn space(q: u64, d: usize) -> Space {
        Space::new(Arc::new(FieldCtx::prime(q).unwrap()), d).unwrap()
    }

    /// Oracle: affine_span on every tuple.
    fn brute_histogram(space: &Space, sets: &[Vec<usize>]) -> Vec<u128> {
        let mut hist = vec![0u128; space.dim() + 1];
        let mut idx = vec![0usize; sets.len()];
        loop {
            let tuple: Vec<_> = idx.iter().zip(sets).map(|(&i, s)| space.unrank(s[i])).collect();
            hist[space.affine_span(&tuple).unwrap().dim()] += 1;
            let mut j = 0;
            loop {
                if j == sets.len() {
                    return hist;
                }
                idx[j] += 1;
                if idx[j] < sets[j].len() {
                    break;
                }
                idx[j] = 0;
                j += 1;
            }
        }
    }

    #[test]
    fn singleton_family() {
        let sp = space(3, 2);
        let sets = vec![vec![4]; 3];
        assert_eq!(delta_incidence_count(&sp, 0, &sets, CountMode::Exact).unwrap(), DeltaCount::Exact(1));
        assert_eq!(delta_incidence_count(&sp, 1, &sets, CountMode::Exact).unwrap(), DeltaCount::Exact(0));
        for l in 1..=2 {
            assert_eq!(l_class_count(&sp, l, &sets).unwrap(), 0);
        }
    }

    #[test]
    fn full_line_family() {
        let sp = space(3, 2);
        let line: Vec<usize> = sp.flat_point_ranks(&sp.enumerate_kplanes(1).unwrap()[0]);
        let sets = vec![line.clone(); 3];
        let hist = span_dimension_histogram(&sp, &sets, DEFAULT_TUPLE_BUDGET).unwrap();
        assert_eq!(hist, vec![3, 24, 0]);
        let l1 = l_class_count(&sp, 1, &sets).unwrap();
        let l2 = l_class_count(&sp, 2, &sets).unwrap();
        // x_1 ≠ x_0 (3·2 choices), x_2 anywhere on the line (3)
        assert_eq!(l1, 18);
        // x_1 = x_0, x_2 ≠ x_0
        assert_eq!(l2, 6);
        assert!(l1 <= 27);
        assert_eq!(l1 + l2, 24);
    }

    #[test]
    fn whole_plane_over_f2() {
        let sp = space(2, 2);
        let all: Vec<usize> = (0..4).collect();
        let hist = span_dimension_histogram(&sp, &vec![all; 3], DEFAULT_TUPLE_BUDGET).unwrap();
        assert_eq!(hist[0], 4);
        assert_eq!(hist.iter().sum::<u128>(), 64);
        assert_eq!(hist, brute_histogram(&sp, &vec![(0..4).collect(); 3]));
    }

    #[test]
    fn histogram_matches_brute_force_and_l_classes_partition() {
        for (q, d) in [(2u64, 2usize), (3, 2), (2, 3), (3, 3), (5, 2)] {
            let sp = space(q, d);
            for seed in 0..30 {
                let sets = random_set_family(&sp, 6, seed);
                let hist = span_dimension_histogram(&sp, &sets, DEFAULT_TUPLE_BUDGET).unwrap();
                assert_eq!(hist, brute_histogram(&sp, &sets));
                let report = incidence_check(&sp, &sets).unwrap();
                assert!(report.violations.is_empty(), "{:?}", report.violations);
            }
        }
    }

    #[test]
    fn budget_and_errors() {
        let sp = space(3, 2);
        let all: Vec<usize> = (0..9).collect();
        let sets = vec![all; 3];
        assert!(matches!(span_dimension_histogram(&sp, &sets, 100), Err(Error::TooLargeExact { tuples: 729, .. })));
        assert!(matches!(l_class_count(&sp, 0, &sets), Err(Error::UnsupportedDim(0))));
        assert!(matches!(incidence_check(&sp, &sets[..2]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn monte_carlo_is_close_to_exact() {
        let sp = space(3, 2);
        let sets = random_set_family(&sp, 9, 42);
        let exact = span_dimension_histogram(&sp, &sets, DEFAULT_TUPLE_BUDGET).unwrap();
        for (s, &want) in exact.iter().enumerate() {
            let DeltaCount::Estimate { value, stderr } =
                delta_incidence_count(&sp, s, &sets, CountMode::MonteCarlo { samples: 20000, seed: 1 }).unwrap()
            else {
                panic!("expected estimate")
            };
            assert!((value - want as f64).abs() <= 5.0 * stderr + 1e-9, "s={s}: {value} ± {stderr} vs {want}");
        }
    }
}
