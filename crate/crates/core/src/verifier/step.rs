//! Dyadic step functions f = c · Σ_j 2^{-j} E_j with disjoint level sets.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::Space;
use crate::transforms::GridFunction;

#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    /// Dyadic index j; the level's raw weight is 2^{-j}.
    pub index: usize,
    /// Weight after normalization, c · 2^{-j}.
    pub weight: f64,
    /// Point ranks of E_j.
    pub points: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    pub seed: u64,
    /// Normalization exponent ρ = (d+1)/(k+1).
    pub rho: f64,
    /// Global scale c = (Σ_j 2^{-ρj}|E_j|)^{-1/ρ}.
    pub scale: f64,
    pub levels: Vec<Level>,
}

impl StepFunction {
    /// Σ_j 2^{-ρj} |E_j| before scaling.
    pub fn dyadic_mass(&self) -> f64 {
        self.levels.iter().map(|l| 2f64.powf(-self.rho * l.index as f64) * l.points.len() as f64).sum()
    }

    /// Σ_x f(x)^ρ, i.e. Σ_j weight_j^ρ |E_j|; equals 1 after normalization.
    pub fn normalized_mass(&self) -> f64 {
        self.levels.iter().map(|l| l.weight.powf(self.rho) * l.points.len() as f64).sum()
    }

    /// Every level obeys |E_j| ≤ 2^{ρj}.
    pub fn sizes_within_caps(&self) -> bool {
        self.levels.iter().all(|l| l.points.len() as f64 <= 2f64.powf(self.rho * l.index as f64) + 1e-9)
    }

    pub fn values(&self, num_points: usize) -> Vec<f64> {
        let mut v = vec![0.0; num_points];
        for l in &self.levels {
            for &x in &l.points {
                v[x] = l.weight;
            }
        }
        v
    }

    pub fn to_grid(&self, space: &Space) -> GridFunction {
        GridFunction::from_real(space, &self.values(space.num_points())).expect("sized to the space")
    }

    pub fn descriptor(&self) -> String {
        let sizes: Vec<String> = self.levels.iter().map(|l| l.points.len().to_string()).collect();
        format!("step(seed={},sizes=[{}])", self.seed, sizes.join(","))
    }
}

/// Seeded random step function with `level_count` nonempty disjoint levels.
///
/// |E_0| = 1, and level j draws its size uniformly from
/// `1..=min(⌊2^{ρj}⌋, points still available)`, keeping one point in reserve
/// for every later level.
pub fn gen_step_function(seed: u64, space: &Space, k: usize, level_count: usize) -> Result<StepFunction> {
    let n = space.num_points();
    if level_count == 0 || level_count > n {
        return Err(Error::InfeasibleLevels { levels: level_count, points: n });
    }
    let d = space.dim();
    let rho = (d as f64 + 1.0) / (k as f64 + 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut used = 0;
    let mut levels = Vec::with_capacity(level_count);
    for j in 0..level_count {
        let cap = 2f64.powf(rho * j as f64).floor().min(n as f64) as usize;
        let available = n - used - (level_count - j - 1);
        let hi = cap.min(available).max(1);
        let size = rng.gen_range(1..=hi);
        levels.push(Level { index: j, weight: 0.0, points: order[used..used + size].to_vec() });
        used += size;
    }
    let mut sf = StepFunction { seed, rho, scale: 1.0, levels };
    sf.scale = sf.dyadic_mass().powf(-1.0 / rho);
    for l in &mut sf.levels {
        l.weight = sf.scale * 2f64.powf(-(l.index as f64));
    }
    Ok(sf)
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;
    use std::sync::Arc;

    use super::*;
    use crate::field::FieldCtx;

    fn space(q: u64, d: usize) -> Space {
        Space::new(Arc::new(FieldCtx::prime(q).unwrap()), d).unwrap()
    }

    #[test]
    fn single_level_is_a_point_indicator() {
        let sp = space(3, 2);
        let sf = gen_step_function(11, &sp, 1, 1).unwrap();
        assert_eq!(sf.levels.len(), 1);
        assert_eq!(sf.levels[0].points.len(), 1);
        assert_eq!(sf.scale, 1.0);
        let v = sf.values(9);
        assert_eq!(v.iter().filter(|&&x| x == 1.0).count(), 1);
        assert_eq!(v.iter().filter(|&&x| x == 0.0).count(), 8);
    }

    #[test]
    fn deterministic_in_seed() {
        let sp = space(5, 2);
        assert_eq!(gen_step_function(3, &sp, 1, 4).unwrap(), gen_step_function(3, &sp, 1, 4).unwrap());
        assert_ne!(gen_step_function(3, &sp, 1, 4).unwrap(), gen_step_function(4, &sp, 1, 4).unwrap());
    }

    #[test]
    fn invariants_over_many_seeds() {
        let sp = space(3, 2);
        for seed in 0..1000 {
            let levels = 1 + (seed as usize % 5);
            let sf = gen_step_function(seed, &sp, 1, levels).unwrap();
            assert!(sf.sizes_within_caps());
            assert!((sf.normalized_mass() - 1.0).abs() < 1e-9);
            assert!(sf.scale <= 1.0);
            let mut seen = HashSet::new();
            for l in &sf.levels {
                assert!(!l.points.is_empty());
                for &x in &l.points {
                    assert!(seen.insert(x), "levels must be disjoint");
                }
            }
            let sum: f64 = sf.values(9).iter().map(|v| v.powf(1.5)).sum();
            assert!((sum - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn infeasible_levels() {
        let sp = space(2, 2);
        assert_eq!(gen_step_function(0, &sp, 1, 5), Err(Error::InfeasibleLevels { levels: 5, points: 4 }));
        assert!(gen_step_function(0, &sp, 1, 0).is_err());
        let sf = gen_step_function(0, &sp, 1, 4).unwrap();
        assert!(sf.levels.iter().all(|l| l.points.len() == 1));
    }
}
