//! The k-plane transform and the two decompositions of the Radon transform.
//!
//! [`PlaneFamily`] precomputes plane → point-rank and point → plane incidence
//! lists once per (q, d, k); every transform evaluation then reduces to
//! summing table entries.
//!
//! [`RadonFamily`] adds the hyperplane duals and exposes two independent
//! routes to the same operator: a geometric one that sums f over
//! `{x : w'·x = c}` directly, and a spectral one that expands the indicator
//! of that set in additive characters and evaluates through the Fourier
//! transform `F(ξ) = Σ_x χ(ξ·x) f(x)`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::Elem;
use crate::geometry::{Flat, HyperplaneDual, HyperplaneKind, Point, Space};

/// A dense complex function on F_q^d, indexed by point rank.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    q: usize,
    d: usize,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn from_values(space: &Space, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != space.num_points() {
            return Err(Error::DimensionMismatch { expected: space.num_points(), found: values.len() });
        }
        Ok(GridFunction { q: space.q(), d: space.dim(), values })
    }

    pub fn from_real(space: &Space, values: &[f64]) -> Result<Self> {
        Self::from_values(space, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn constant(space: &Space, c: f64) -> Self {
        GridFunction { q: space.q(), d: space.dim(), values: vec![Complex64::new(c, 0.0); space.num_points()] }
    }

    pub fn zeros(space: &Space) -> Self {
        Self::constant(space, 0.0)
    }

    /// Indicator of a set of point ranks.
    pub fn indicator(space: &Space, ranks: &[usize]) -> Result<Self> {
        let mut f = Self::zeros(space);
        for &r in ranks {
            if r >= space.num_points() {
                return Err(Error::DimensionMismatch { expected: space.num_points(), found: r });
            }
            f.values[r] = Complex64::new(1.0, 0.0);
        }
        Ok(f)
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn scaled(&self, c: f64) -> Self {
        GridFunction { q: self.q, d: self.d, values: self.values.iter().map(|v| v * c).collect() }
    }

    pub fn linear_combination(&self, a: Complex64, other: &Self, b: Complex64) -> Result<Self> {
        if self.values.len() != other.values.len() {
            return Err(Error::DimensionMismatch { expected: self.values.len(), found: other.values.len() });
        }
        let values = self.values.iter().zip(&other.values).map(|(x, y)| a * x + b * y).collect();
        Ok(GridFunction { q: self.q, d: self.d, values })
    }

    fn check(&self, space: &Space) -> Result<()> {
        if self.q != space.q() || self.d != space.dim() {
            return Err(Error::DimensionMismatch { expected: space.num_points(), found: self.values.len() });
        }
        Ok(())
    }
}

/// A dense function on an enumerated plane family.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneFunction {
    q: usize,
    d: usize,
    k: usize,
    values: Vec<Complex64>,
}

impl PlaneFunction {
    pub fn from_values(family: &PlaneFamily, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != family.len() {
            return Err(Error::DimensionMismatch { expected: family.len(), found: values.len() });
        }
        Ok(PlaneFunction { q: family.space.q(), d: family.space.dim(), k: family.k, values })
    }

    pub fn constant(family: &PlaneFamily, c: f64) -> Self {
        PlaneFunction {
            q: family.space.q(),
            d: family.space.dim(),
            k: family.k,
            values: vec![Complex64::new(c, 0.0); family.len()],
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn check(&self, family: &PlaneFamily) -> Result<()> {
        if self.q != family.space.q() || self.d != family.space.dim() || self.k != family.k {
            return Err(Error::DimensionMismatch { expected: family.len(), found: self.values.len() });
        }
        Ok(())
    }

    fn map2(&self, other: &Self, op: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        PlaneFunction {
            q: self.q,
            d: self.d,
            k: self.k,
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| op(a, b)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.map2(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.map2(other, |a, b| a - b)
    }

    /// Max pointwise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

/// Π_k with precomputed incidence.
#[derive(Debug, Clone)]
pub struct PlaneFamily {
    space: Space,
    k: usize,
    flats: Vec<Flat>,
    plane_points: Vec<Vec<u32>>,
    point_planes: Vec<Vec<u32>>,
}

const PAR_THRESHOLD: usize = 4096;

impl PlaneFamily {
    pub fn new(space: Space, k: usize) -> Result<Self> {
        if k == 0 || k >= space.dim() {
            return Err(Error::UnsupportedDim(k));
        }
        let flats = space.enumerate_kplanes(k)?;
        let plane_points: Vec<Vec<u32>> =
            flats.iter().map(|w| space.flat_point_ranks(w).into_iter().map(|r| r as u32).collect()).collect();
        let mut point_planes = vec![Vec::new(); space.num_points()];
        for (i, pts) in plane_points.iter().enumerate() {
            for &x in pts {
                point_planes[x as usize].push(i as u32);
            }
        }
        Ok(PlaneFamily { space, k, flats, plane_points, point_planes })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    pub fn flats(&self) -> &[Flat] {
        &self.flats
    }

    /// Point ranks on plane `i`.
    pub fn plane_points(&self, i: usize) -> &[u32] {
        &self.plane_points[i]
    }

    /// Indices of planes through the point of rank `x`.
    pub fn planes_through(&self, x: usize) -> &[u32] {
        &self.point_planes[x]
    }

    /// Number of points on each plane, q^k.
    pub fn plane_size(&self) -> usize {
        self.space.q().pow(self.k as u32)
    }

    pub fn index_of(&self, flat: &Flat) -> Option<usize> {
        self.flats.iter().position(|w| w == flat)
    }

    /// T f(w) = q^{-k} Σ_{x ∈ w} f(x).
    pub fn transform(&self, f: &GridFunction) -> Result<PlaneFunction> {
        f.check(&self.space)?;
        let norm = 1.0 / self.plane_size() as f64;
        let eval =
            |pts: &Vec<u32>| -> Complex64 { pts.iter().map(|&x| f.values[x as usize]).sum::<Complex64>() * norm };
        let values: Vec<Complex64> = if self.len() * self.plane_size() >= PAR_THRESHOLD * 16 {
            self.plane_points.par_iter().map(eval).collect()
        } else {
            self.plane_points.iter().map(eval).collect()
        };
        PlaneFunction::from_values(self, values)
    }

    /// Adjoint with respect to the normalized measures dσ on Π_k and dx on F_q^d:
    /// `T†G(x) = q^d / (|Π_k| q^k) · Σ_{w ∋ x} G(w)`.
    pub fn adjoint(&self, g: &PlaneFunction) -> Result<GridFunction> {
        g.check(self)?;
        let scale = self.space.num_points() as f64 / (self.len() as f64 * self.plane_size() as f64);
        let eval = |ws: &Vec<u32>| -> Complex64 { ws.iter().map(|&w| g.values[w as usize]).sum::<Complex64>() * scale };
        let values: Vec<Complex64> = if self.space.num_points() >= PAR_THRESHOLD {
            self.point_planes.par_iter().map(eval).collect()
        } else {
            self.point_planes.iter().map(eval).collect()
        };
        GridFunction::from_values(&self.space, values)
    }

    /// Real-valued transform on raw rank-indexed tables; used by the search loops.
    pub fn transform_real(&self, f: &[f64]) -> Vec<f64> {
        let norm = 1.0 / self.plane_size() as f64;
        let eval = |pts: &Vec<u32>| -> f64 { pts.iter().map(|&x| f[x as usize]).sum::<f64>() * norm };
        if self.len() * self.plane_size() >= PAR_THRESHOLD * 16 {
            self.plane_points.par_iter().map(eval).collect()
        } else {
            self.plane_points.iter().map(eval).collect()
        }
    }

    pub fn adjoint_real(&self, g: &[f64]) -> Vec<f64> {
        let scale = self.space.num_points() as f64 / (self.len() as f64 * self.plane_size() as f64);
        self.point_planes.iter().map(|ws| ws.iter().map(|&w| g[w as usize]).sum::<f64>() * scale).collect()
    }

    /// ⟨F, G⟩ under dσ.
    pub fn inner(&self, a: &PlaneFunction, b: &PlaneFunction) -> Complex64 {
        a.values.iter().zip(&b.values).map(|(x, y)| x * y.conj()).sum::<Complex64>() / self.len() as f64
    }
}

/// ⟨f, g⟩ under dx.
pub fn grid_inner(f: &GridFunction, g: &GridFunction) -> Complex64 {
    f.values.iter().zip(&g.values).map(|(x, y)| x * y.conj()).sum::<Complex64>() / f.values.len() as f64
}

/// Convenience wrapper matching [`PlaneFamily::transform`].
pub fn kplane_transform(family: &PlaneFamily, f: &GridFunction) -> Result<PlaneFunction> {
    family.transform(f)
}

pub fn adjoint_kplane(family: &PlaneFamily, g: &PlaneFunction) -> Result<GridFunction> {
    family.adjoint(g)
}

/// `F(ξ) = Σ_x χ(ξ·x) f(x)` for every ξ, indexed by rank. Separable over axes.
pub fn fourier_transform(space: &Space, f: &GridFunction) -> Result<Vec<Complex64>> {
    f.check(space)?;
    let field = space.field();
    let q = space.q();
    let chi_mul: Vec<Complex64> =
        (0..q * q).map(|i| field.chi(field.mul(Elem((i / q) as u32), Elem((i % q) as u32)))).collect();
    let mut cur = f.values.clone();
    let mut next = vec![Complex64::new(0.0, 0.0); cur.len()];
    let mut stride = 1;
    for _ in 0..space.dim() {
        for (idx, out) in next.iter_mut().enumerate() {
            let digit = (idx / stride) % q;
            let base = idx - digit * stride;
            let row = &chi_mul[digit * q..(digit + 1) * q];
            *out = (0..q).map(|x| row[x] * cur[base + x * stride]).sum();
        }
        std::mem::swap(&mut cur, &mut next);
        stride *= q;
    }
    Ok(cur)
}

/// The four character-sum parts of the Radon transform.
#[derive(Debug, Clone, PartialEq)]
pub struct CharParts {
    pub t0_star: PlaneFunction,
    pub t0_dstar: PlaneFunction,
    pub t1_star: PlaneFunction,
    pub t1_dstar: PlaneFunction,
}

/// The hyperplane family Π_{d-1} together with its H/Θ duals.
#[derive(Debug, Clone)]
pub struct RadonFamily {
    family: PlaneFamily,
    duals: Vec<HyperplaneDual>,
    dual_ranks: Vec<usize>,
}

impl RadonFamily {
    pub fn new(space: Space) -> Result<Self> {
        let d = space.dim();
        if d < 2 {
            return Err(Error::UnsupportedDim(d));
        }
        let duals = space.hyperplane_split()?;
        let family = PlaneFamily::new(space, d - 1)?;
        Ok(Self::assemble(family, duals))
    }

    fn assemble(family: PlaneFamily, duals: Vec<HyperplaneDual>) -> Self {
        let dual_ranks = duals.iter().map(|w| family.space.rank(&w.dual)).collect();
        RadonFamily { family, duals, dual_ranks }
    }

    pub fn family(&self) -> &PlaneFamily {
        &self.family
    }

    pub fn space(&self) -> &Space {
        &self.family.space
    }

    pub fn duals(&self) -> &[HyperplaneDual] {
        &self.duals
    }

    pub fn theta_count(&self) -> usize {
        self.duals.iter().filter(|w| w.kind == HyperplaneKind::Theta).count()
    }

    /// Same family with each Θ representative w' replaced by `scales[i]·w'`,
    /// where `i` runs over the Θ hyperplanes in family order.
    pub fn with_theta_scales(&self, scales: &[Elem]) -> Result<Self> {
        let space = &self.family.space;
        let mut it = scales.iter();
        let mut duals = self.duals.clone();
        for w in duals.iter_mut().filter(|w| w.kind == HyperplaneKind::Theta) {
            let t = *it.next().ok_or(Error::DimensionMismatch { expected: self.theta_count(), found: scales.len() })?;
            if t.is_zero() {
                return Err(Error::DivisionByZero);
            }
            w.dual = Point(space.scale(t, &w.dual.0));
        }
        Ok(Self::assemble(self.family.clone(), duals))
    }

    pub fn transform(&self, f: &GridFunction) -> Result<PlaneFunction> {
        self.family.transform(f)
    }

    /// (T₀f, T₁f): sums of f over `{x : w'·x = 0}` on Θ and `{x : w'·x = 1}` on H.
    pub fn geometric_split(&self, f: &GridFunction) -> Result<(PlaneFunction, PlaneFunction)> {
        let space = &self.family.space;
        f.check(space)?;
        let points = space.enumerate_points();
        let norm = 1.0 / self.family.plane_size() as f64;
        let zero = Complex64::new(0.0, 0.0);
        let mut t0 = vec![zero; self.duals.len()];
        let mut t1 = vec![zero; self.duals.len()];
        for (i, w) in self.duals.iter().enumerate() {
            let level = w.level();
            let sum: Complex64 = points
                .iter()
                .zip(&f.values)
                .filter(|(x, _)| space.dot(&w.dual.0, &x.0) == level)
                .map(|(_, v)| *v)
                .sum();
            match w.kind {
                HyperplaneKind::Theta => t0[i] = sum * norm,
                HyperplaneKind::H => t1[i] = sum * norm,
            }
        }
        Ok((PlaneFunction::from_values(&self.family, t0)?, PlaneFunction::from_values(&self.family, t1)?))
    }

    /// Character expansion through the Fourier transform.
    pub fn char_parts(&self, f: &GridFunction) -> Result<CharParts> {
        let space = &self.family.space;
        let fhat = fourier_transform(space, f)?;
        Ok(self.char_parts_from_fourier(f, &fhat))
    }

    /// As [`RadonFamily::char_parts`], reusing a precomputed `F(ξ)` table.
    pub fn char_parts_from_fourier(&self, f: &GridFunction, fhat: &[Complex64]) -> CharParts {
        let space = &self.family.space;
        let field = space.field();
        let qd = space.num_points() as f64;
        let total: Complex64 = f.values.iter().sum();
        let zero = Complex64::new(0.0, 0.0);
        let n = self.duals.len();
        let (mut t0s, mut t0ss, mut t1s, mut t1ss) = (vec![zero; n], vec![zero; n], vec![zero; n], vec![zero; n]);
        for (i, w) in self.duals.iter().enumerate() {
            let mut acc = zero;
            for s in field.nonzero() {
                let xi = space.rank(&Point(space.scale(s, &w.dual.0)));
                match w.kind {
                    HyperplaneKind::Theta => acc += fhat[xi],
                    HyperplaneKind::H => acc += field.chi(field.neg(s)) * fhat[xi],
                }
            }
            match w.kind {
                HyperplaneKind::Theta => {
                    t0s[i] = total / qd;
                    t0ss[i] = acc / qd;
                }
                HyperplaneKind::H => {
                    t1s[i] = total / qd;
                    t1ss[i] = acc / qd;
                }
            }
        }
        let fam = &self.family;
        let mk = |v| PlaneFunction::from_values(fam, v).expect("length matches family");
        CharParts { t0_star: mk(t0s), t0_dstar: mk(t0ss), t1_star: mk(t1s), t1_dstar: mk(t1ss) }
    }

    /// The double-star parts evaluated straight from their defining double sum
    /// `q^{-d} Σ_x Σ_{s≠0} χ(s(w'·x − c)) f(x)`.
    pub fn char_parts_direct(&self, f: &GridFunction) -> Result<CharParts> {
        let space = &self.family.space;
        f.check(space)?;
        let field = space.field();
        let points = space.enumerate_points();
        let qd = space.num_points() as f64;
        let total: Complex64 = f.values.iter().sum();
        let zero = Complex64::new(0.0, 0.0);
        let n = self.duals.len();
        let (mut t0s, mut t0ss, mut t1s, mut t1ss) = (vec![zero; n], vec![zero; n], vec![zero; n], vec![zero; n]);
        for (i, w) in self.duals.iter().enumerate() {
            let c = w.level();
            let mut acc = zero;
            for (x, v) in points.iter().zip(&f.values) {
                let a = field.sub(space.dot(&w.dual.0, &x.0), c);
                let inner: Complex64 = field.nonzero().map(|s| field.chi(field.mul(s, a))).sum();
                acc += inner * v;
            }
            match w.kind {
                HyperplaneKind::Theta => {
                    t0s[i] = total / qd;
                    t0ss[i] = acc / qd;
                }
                HyperplaneKind::H => {
                    t1s[i] = total / qd;
                    t1ss[i] = acc / qd;
                }
            }
        }
        let fam = &self.family;
        let mk = |v| PlaneFunction::from_values(fam, v).expect("length matches family");
        Ok(CharParts { t0_star: mk(t0s), t0_dstar: mk(t0ss), t1_star: mk(t1s), t1_dstar: mk(t1ss) })
    }

    /// Γ(w') = |q^{-d} Σ_{x} Σ_{s≠0} χ(s(w'·x)) f(x)|² for an arbitrary dual vector rank.
    pub fn gamma(&self, fhat: &[Complex64], dual_rank: usize) -> f64 {
        let space = &self.family.space;
        let field = space.field();
        let w = space.unrank(dual_rank);
        let acc: Complex64 = field.nonzero().map(|s| fhat[space.rank(&Point(space.scale(s, &w.0)))]).sum();
        (acc / space.num_points() as f64).norm_sqr()
    }

    pub fn dual_ranks(&self) -> &[usize] {
        &self.dual_ranks
    }
}
