//! Lebesgue norms under the normalized measures dx and dσ.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::transforms::{GridFunction, PlaneFamily, PlaneFunction};

/// An exponent in [1, ∞], carrying its exact rational value when known.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponent {
    value: f64,
    exact: Option<Ratio<u64>>,
}

impl Exponent {
    pub fn infinity() -> Self {
        Exponent { value: f64::INFINITY, exact: None }
    }

    pub fn ratio(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::BadExponent(format!("{num}/0")));
        }
        let r = Ratio::new(num, den);
        if r < Ratio::from_integer(1) {
            return Err(Error::BadExponent(format!("{num}/{den} < 1")));
        }
        Ok(Exponent { value: num as f64 / den as f64, exact: Some(r) })
    }

    pub fn integer(n: u64) -> Result<Self> {
        Self::ratio(n, 1)
    }

    pub fn real(value: f64) -> Result<Self> {
        if value.is_nan() || value < 1.0 {
            return Err(Error::BadExponent(value.to_string()));
        }
        Ok(Exponent { value, exact: None })
    }

    /// The exponent whose reciprocal is `num/den`; a zero reciprocal gives ∞.
    pub fn from_reciprocal(recip: Ratio<u64>) -> Result<Self> {
        if *recip.numer() == 0 {
            Ok(Self::infinity())
        } else {
            Self::ratio(*recip.denom(), *recip.numer())
        }
    }

    /// The exponents ((d+1)/(k+1), d+1) of the restricted-type vertex.
    pub fn vertex(d: usize, k: usize) -> (Exponent, Exponent) {
        let p = Self::ratio(d as u64 + 1, k as u64 + 1).expect("k < d");
        let r = Self::integer(d as u64 + 1).expect("d >= 1");
        (p, r)
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn exact(&self) -> Option<Ratio<u64>> {
        self.exact
    }

    pub fn is_infinite(&self) -> bool {
        self.value.is_infinite()
    }

    /// 1/p as a float, 0 for ∞.
    pub fn reciprocal(&self) -> f64 {
        if self.is_infinite() {
            0.0
        } else {
            1.0 / self.value
        }
    }

    /// 1/p exactly, when p is rational or infinite.
    pub fn exact_reciprocal(&self) -> Option<Ratio<u64>> {
        if self.is_infinite() {
            Some(Ratio::from_integer(0))
        } else {
            self.exact.map(|r| r.recip())
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.is_infinite(), self.exact) {
            (true, _) => write!(f, "inf"),
            (false, Some(r)) if *r.denom() == 1 => write!(f, "{}", r.numer()),
            (false, Some(r)) => write!(f, "{}/{}", r.numer(), r.denom()),
            (false, None) => write!(f, "{}", self.value),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    /// Accepts `a/b`, integers, decimals and `inf`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") {
            return Ok(Self::infinity());
        }
        let bad = || Error::BadExponent(s.to_string());
        if let Some((a, b)) = s.split_once('/') {
            let a: u64 = a.trim().parse().map_err(|_| bad())?;
            let b: u64 = b.trim().parse().map_err(|_| bad())?;
            return Self::ratio(a, b);
        }
        if let Ok(n) = s.parse::<u64>() {
            return Self::integer(n);
        }
        Self::real(s.parse().map_err(|_| bad())?)
    }
}

/// Neumaier-compensated sum.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    let mut sum = 0.0f64;
    let mut c = 0.0f64;
    for x in it {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            c += (sum - t) + x;
        } else {
            c += (x - t) + sum;
        }
        sum = t;
    }
    sum + c
}

/// (mean |v|^p)^{1/p}, or max |v| for p = ∞.
pub fn mean_norm(values: &[Complex64], p: Exponent) -> f64 {
    if p.is_infinite() {
        return values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    }
    let pv = p.value();
    let s = compensated_sum(values.iter().map(|v| v.norm().powf(pv)));
    (s / values.len() as f64).powf(1.0 / pv)
}

/// Same as [`mean_norm`] for nonnegative reals.
pub fn mean_norm_real(values: &[f64], p: Exponent) -> f64 {
    if p.is_infinite() {
        return values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    }
    let pv = p.value();
    let s = compensated_sum(values.iter().map(|v| v.abs().powf(pv)));
    (s / values.len() as f64).powf(1.0 / pv)
}

/// ‖f‖_{L^p(F_q^d, dx)}.
pub fn lp_norm(f: &GridFunction, p: Exponent) -> f64 {
    mean_norm(f.values(), p)
}

/// ‖F‖_{L^r(Π_k, dσ)}.
pub fn lr_norm_planes(g: &PlaneFunction, r: Exponent) -> f64 {
    mean_norm(g.values(), r)
}

/// L^{p,1} norm of the indicator of a set of `size` points out of `total`.
pub fn restricted_norm_indicator(size: usize, total: usize, p: Exponent) -> Result<f64> {
    if size == 0 {
        return Err(Error::EmptySet);
    }
    let frac = size as f64 / total as f64;
    Ok(if p.is_infinite() { 1.0 } else { frac.powf(1.0 / p.value()) })
}

/// ‖T f‖_r / ‖f‖_p.
pub fn norm_ratio(family: &PlaneFamily, f: &GridFunction, p: Exponent, r: Exponent) -> Result<f64> {
    let den = lp_norm(f, p);
    if den == 0.0 {
        return Err(Error::ZeroFunction);
    }
    let tf = family.transform(f)?;
    Ok(lr_norm_planes(&tf, r) / den)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use proptest::prelude::*;

    use super::*;
    use crate::field::FieldCtx;
    use crate::geometry::Space;

    fn family(q: u64, d: usize, k: usize) -> PlaneFamily {
        PlaneFamily::new(Space::new(Arc::new(FieldCtx::prime(q).unwrap()), d).unwrap(), k).unwrap()
    }

    fn e(s: &str) -> Exponent {
        s.parse().unwrap()
    }

    #[test]
    fn parsing() {
        assert_eq!(e("3/2").exact(), Some(Ratio::new(3, 2)));
        assert_eq!(e("3").to_string(), "3");
        assert_eq!(e("6/4").to_string(), "3/2");
        assert!(e("inf").is_infinite());
        assert_eq!(e("1.25").value(), 1.25);
        assert!("1/2".parse::<Exponent>().is_err());
        assert!("x".parse::<Exponent>().is_err());
        assert!("0.5".parse::<Exponent>().is_err());
        let (p, r) = Exponent::vertex(3, 1);
        assert_eq!((p.to_string(), r.to_string()), ("2".into(), "4".into()));
        assert!(Exponent::from_reciprocal(Ratio::new(0, 1)).unwrap().is_infinite());
        assert_eq!(Exponent::from_reciprocal(Ratio::new(2, 3)).unwrap().to_string(), "3/2");
    }

    #[test]
    fn grid_norm_examples() {
        let fam = family(3, 2, 1);
        let sp = fam.space();
        for p in ["1", "3/2", "2", "7", "inf"] {
            assert!((lp_norm(&GridFunction::constant(sp, 1.0), e(p)) - 1.0).abs() < 1e-15);
        }
        let ind = GridFunction::indicator(sp, &[0, 4, 7]).unwrap();
        assert!((lp_norm(&ind, e("3/2")) - (3.0f64 / 9.0).powf(2.0 / 3.0)).abs() < 1e-15);
        let two = GridFunction::indicator(sp, &[2]).unwrap().scaled(2.0);
        assert_eq!(lp_norm(&two, Exponent::infinity()), 2.0);
    }

    #[test]
    fn plane_norm_examples() {
        let fam = family(2, 2, 1);
        assert!((lr_norm_planes(&PlaneFunction::constant(&fam, 1.0), e("3")) - 1.0).abs() < 1e-15);
        let mut v = vec![Complex64::new(0.0, 0.0); fam.len()];
        v[2] = Complex64::new(1.0, 0.0);
        let one = PlaneFunction::from_values(&fam, v).unwrap();
        assert!((lr_norm_planes(&one, e("3")) - (1.0f64 / 6.0).powf(1.0 / 3.0)).abs() < 1e-15);
        let line: Vec<usize> = fam.plane_points(0).iter().map(|&r| r as usize).collect();
        let tf = fam.transform(&GridFunction::indicator(fam.space(), &line).unwrap()).unwrap();
        assert!((lr_norm_planes(&tf, e("3")) - 0.25f64.powf(1.0 / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn restricted_norm_examples() {
        assert_eq!(restricted_norm_indicator(9, 9, e("3/2")).unwrap(), 1.0);
        assert!((restricted_norm_indicator(3, 9, e("3/2")).unwrap() - (1.0f64 / 3.0).powf(2.0 / 3.0)).abs() < 1e-15);
        let (p, _) = Exponent::vertex(2, 1);
        assert!((restricted_norm_indicator(1, 9, p).unwrap() - (1.0f64 / 9.0).powf(2.0 / 3.0)).abs() < 1e-15);
        assert_eq!(restricted_norm_indicator(0, 9, p), Err(Error::EmptySet));
    }

    #[test]
    fn ratio_examples_at_q2() {
        let fam = family(2, 2, 1);
        let (p, r) = (e("3/2"), e("3"));
        assert!((norm_ratio(&fam, &GridFunction::constant(fam.space(), 1.0), p, r).unwrap() - 1.0).abs() < 1e-12);
        for x in 0..4 {
            let f = GridFunction::indicator(fam.space(), &[x]).unwrap();
            assert!((norm_ratio(&fam, &f, p, r).unwrap() - 1.0).abs() < 1e-12);
            let rest: Vec<usize> = (0..4).filter(|&y| y != x).collect();
            let f = GridFunction::indicator(fam.space(), &rest).unwrap();
            assert!((norm_ratio(&fam, &f, p, r).unwrap() - 1.0).abs() < 1e-12);
        }
        assert_eq!(norm_ratio(&fam, &GridFunction::zeros(fam.space()), p, r), Err(Error::ZeroFunction));
    }

    #[test]
    fn large_p_approaches_sup() {
        let fam = family(5, 2, 1);
        let vals: Vec<f64> = (0..25).map(|i| ((i * 7) % 11) as f64 / 3.0).collect();
        let f = GridFunction::from_real(fam.space(), &vals).unwrap();
        let sup = lp_norm(&f, Exponent::infinity());
        let p64 = lp_norm(&f, e("64"));
        assert!(p64 <= sup && p64 >= 0.95 * sup);
    }

    #[test]
    fn compensated_sum_beats_naive() {
        let xs = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(compensated_sum(xs), 2.0);
    }

    proptest! {
        #[test]
        fn nesting_and_homogeneity(vals in proptest::collection::vec(-5.0f64..5.0, 9), p1 in 1.0f64..6.0, dp in 0.0f64..6.0, c in 0.1f64..10.0) {
            let fam = family(3, 2, 1);
            let f = GridFunction::from_real(fam.space(), &vals).unwrap();
            let (a, b) = (Exponent::real(p1).unwrap(), Exponent::real(p1 + dp).unwrap());
            prop_assert!(lp_norm(&f, a) <= lp_norm(&f, b) * (1.0 + 1e-12) + 1e-300);
            let n = lp_norm(&f, a);
            prop_assert!((lp_norm(&f.scaled(c), a) - c * n).abs() <= 1e-12 * (1.0 + c * n));
            if n > 0.0 {
                let r = Exponent::real(p1 + 1.0).unwrap();
                let r1 = norm_ratio(&fam, &f, a, r).unwrap();
                let r2 = norm_ratio(&fam, &f.scaled(c), a, r).unwrap();
                prop_assert!((r1 - r2).abs() <= 1e-12 * r1.max(1.0));
            }
        }
    }
}
