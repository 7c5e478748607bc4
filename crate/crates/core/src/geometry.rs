//! Points, affine flats and their enumeration in F_q^d.
//!
//! A [`Flat`] is stored in canonical form: its direction space as a matrix in
//! reduced row-echelon form (pivot entries 1, pivot columns otherwise zero),
//! and a basepoint whose pivot coordinates are all zero. Two flats are equal
//! as point sets exactly when their canonical forms agree, so derived `Eq`,
//! `Hash` and `Ord` are set-theoretic.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};

/// Default cap on q^d and on the size of any enumerated flat family.
pub const DEFAULT_MAX_ITEMS: u128 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point(pub Vec<Elem>);

impl Point {
    pub fn coords(&self) -> &[Elem] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_origin(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn from_codes(codes: &[u32]) -> Point {
        Point(codes.iter().map(|&c| Elem(c)).collect())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// An affine flat in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Flat {
    base: Point,
    dirs: Vec<Vec<Elem>>,
    pivots: Vec<usize>,
}

impl Flat {
    pub fn dim(&self) -> usize {
        self.dirs.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.base.dim()
    }

    pub fn basepoint(&self) -> &Point {
        &self.base
    }

    pub fn directions(&self) -> &[Vec<Elem>] {
        &self.dirs
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Stable textual descriptor, e.g. `base=(0,1);dirs=[(1,2)]`.
    pub fn descriptor(&self) -> String {
        let dirs: Vec<String> = self.dirs.iter().map(|r| Point(r.clone()).to_string()).collect();
        format!("base={};dirs=[{}]", self.base, dirs.join(","))
    }
}

impl fmt::Display for Flat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.descriptor())
    }
}

/// Which half of the hyperplane split a hyperplane lies in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HyperplaneKind {
    /// The hyperplane misses the origin: `{x : w'·x = 1}`.
    H,
    /// The hyperplane contains the origin: `{x : w'·x = 0}`.
    Theta,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperplaneDual {
    pub kind: HyperplaneKind,
    pub dual: Point,
    pub flat: Flat,
}

impl HyperplaneDual {
    /// Right-hand side of the defining equation `w'·x = c`.
    pub fn level(&self) -> Elem {
        match self.kind {
            HyperplaneKind::H => Elem::ONE,
            HyperplaneKind::Theta => Elem::ZERO,
        }
    }
}

/// Gaussian binomial coefficient [d choose k]_q.
pub fn gaussian_binomial(q: u64, d: u32, k: u32) -> u128 {
    if k > d {
        return 0;
    }
    let q = q as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= q.pow(d - i) - 1;
        den *= q.pow(i + 1) - 1;
    }
    num / den
}

/// Number of affine k-flats in F_q^d.
pub fn count_kplanes(q: u64, d: u32, k: u32) -> u128 {
    gaussian_binomial(q, d, k) * (q as u128).pow(d - k)
}

/// Reduces `rows` to RREF in place, dropping zero rows. Returns pivot columns.
fn rref(field: &FieldCtx, rows: &mut Vec<Vec<Elem>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(sel) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, sel);
        let inv = field.inv(rows[r][c]).expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c];
                #[allow(clippy::needless_range_loop)] // reads row r while writing row i
                for j in 0..ncols {
                    let t = field.mul(factor, rows[r][j]);
                    rows[i][j] = field.sub(rows[i][j], t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// F_q^d together with size caps.
#[derive(Debug, Clone)]
pub struct Space {
    field: Arc<FieldCtx>,
    d: usize,
    num_points: usize,
    max_items: u128,
}

impl Space {
    pub fn new(field: Arc<FieldCtx>, d: usize) -> Result<Self> {
        Self::with_cap(field, d, DEFAULT_MAX_ITEMS)
    }

    pub fn with_cap(field: Arc<FieldCtx>, d: usize, max_items: u128) -> Result<Self> {
        if d == 0 {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        let n = (field.q() as u128).checked_pow(d as u32).unwrap_or(u128::MAX);
        if n > max_items {
            return Err(Error::SizeCapExceeded { what: "q^d", value: n, cap: max_items });
        }
        Ok(Space { field, d, num_points: n as usize, max_items })
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn field_arc(&self) -> &Arc<FieldCtx> {
        &self.field
    }

    pub fn q(&self) -> usize {
        self.field.order()
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn num_points(&self) -> usize {
        self.num_points
    }

    pub fn max_items(&self) -> u128 {
        self.max_items
    }

    /// Mixed-radix rank Σ code_i · q^i.
    pub fn rank(&self, x: &Point) -> usize {
        let q = self.q();
        x.0.iter().rev().fold(0usize, |acc, c| acc * q + c.0 as usize)
    }

    pub fn unrank(&self, mut r: usize) -> Point {
        let q = self.q();
        let mut coords = Vec::with_capacity(self.d);
        for _ in 0..self.d {
            coords.push(Elem((r % q) as u32));
            r /= q;
        }
        Point(coords)
    }

    pub fn origin(&self) -> Point {
        Point(vec![Elem::ZERO; self.d])
    }

    pub fn check_point(&self, x: &Point) -> Result<()> {
        if x.dim() != self.d {
            return Err(Error::DimensionMismatch { expected: self.d, found: x.dim() });
        }
        for &c in &x.0 {
            self.field.elem(c.0)?;
        }
        Ok(())
    }

    /// All q^d points in rank order.
    pub fn enumerate_points(&self) -> Vec<Point> {
        (0..self.num_points).map(|r| self.unrank(r)).collect()
    }

    pub fn add(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        a.iter().zip(b).map(|(&x, &y)| self.field.add(x, y)).collect()
    }

    pub fn sub(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        a.iter().zip(b).map(|(&x, &y)| self.field.sub(x, y)).collect()
    }

    pub fn scale(&self, t: Elem, a: &[Elem]) -> Vec<Elem> {
        a.iter().map(|&x| self.field.mul(t, x)).collect()
    }

    pub fn dot(&self, a: &[Elem], b: &[Elem]) -> Elem {
        a.iter().zip(b).fold(Elem::ZERO, |acc, (&x, &y)| self.field.add(acc, self.field.mul(x, y)))
    }

    /// Canonical flat through `base` spanned by `dirs` (dependent vectors allowed).
    pub fn flat(&self, base: &Point, dirs: &[Vec<Elem>]) -> Result<Flat> {
        self.check_point(base)?;
        for v in dirs {
            if v.len() != self.d {
                return Err(Error::DimensionMismatch { expected: self.d, found: v.len() });
            }
        }
        let mut rows = dirs.to_vec();
        let pivots = rref(&self.field, &mut rows);
        let base = self.reduce(&base.0, &rows, &pivots);
        Ok(Flat { base: Point(base), dirs: rows, pivots })
    }

    /// Canonical coset representative of `x` modulo the row space.
    fn reduce(&self, x: &[Elem], rows: &[Vec<Elem>], pivots: &[usize]) -> Vec<Elem> {
        let mut v = x.to_vec();
        for (row, &c) in rows.iter().zip(pivots) {
            let t = v[c];
            if !t.is_zero() {
                for j in 0..self.d {
                    v[j] = self.field.sub(v[j], self.field.mul(t, row[j]));
                }
            }
        }
        v
    }

    /// The smallest affine subspace containing all of `points`.
    pub fn affine_span(&self, points: &[Point]) -> Result<Flat> {
        let first = points.first().ok_or(Error::EmptyInput)?;
        for x in points {
            self.check_point(x)?;
        }
        let dirs: Vec<Vec<Elem>> = points[1..].iter().map(|x| self.sub(&x.0, &first.0)).collect();
        self.flat(first, &dirs)
    }

    pub fn incident(&self, flat: &Flat, x: &Point) -> Result<bool> {
        if flat.ambient_dim() != self.d {
            return Err(Error::DimensionMismatch { expected: self.d, found: flat.ambient_dim() });
        }
        self.check_point(x)?;
        Ok(self.reduce(&x.0, &flat.dirs, &flat.pivots) == flat.base.0)
    }

    /// Points of the flat in parameter order base + Σ t_i·dir_i.
    pub fn flat_points(&self, flat: &Flat) -> Vec<Point> {
        self.flat_point_ranks(flat).into_iter().map(|r| self.unrank(r)).collect()
    }

    pub fn flat_point_ranks(&self, flat: &Flat) -> Vec<usize> {
        let q = self.q();
        let k = flat.dim();
        let total = q.pow(k as u32);
        let mut out = Vec::with_capacity(total);
        for idx in 0..total {
            let mut x = flat.base.0.clone();
            let mut rem = idx;
            for row in &flat.dirs {
                let t = Elem((rem % q) as u32);
                rem /= q;
                if !t.is_zero() {
                    for j in 0..self.d {
                        x[j] = self.field.add(x[j], self.field.mul(t, row[j]));
                    }
                }
            }
            out.push(self.rank(&Point(x)));
        }
        out
    }

    /// All affine k-flats, each exactly once.
    ///
    /// Order: pivot column sets lexicographically, then free RREF entries,
    /// then basepoints (all mixed-radix counters, low position fastest).
    pub fn enumerate_kplanes(&self, k: usize) -> Result<Vec<Flat>> {
        if k > self.d {
            return Err(Error::UnsupportedDim(k));
        }
        let q = self.q();
        let total = count_kplanes(q as u64, self.d as u32, k as u32);
        if total > self.max_items {
            return Err(Error::SizeCapExceeded { what: "|Pi_k|", value: total, cap: self.max_items });
        }
        let mut out = Vec::with_capacity(total as usize);
        for pivots in combinations(self.d, k) {
            let free_cols: Vec<usize> = (0..self.d).filter(|c| !pivots.contains(c)).collect();
            // (row, column) slots that RREF leaves free
            let slots: Vec<(usize, usize)> = pivots
                .iter()
                .enumerate()
                .flat_map(|(i, &pc)| free_cols.iter().filter(move |&&c| c > pc).map(move |&c| (i, c)))
                .collect();
            for assign in Counter::new(q, slots.len()) {
                let mut dirs = vec![vec![Elem::ZERO; self.d]; k];
                for (i, &pc) in pivots.iter().enumerate() {
                    dirs[i][pc] = Elem::ONE;
                }
                for (&(i, c), &v) in slots.iter().zip(&assign) {
                    dirs[i][c] = Elem(v as u32);
                }
                for base_vals in Counter::new(q, free_cols.len()) {
                    let mut base = vec![Elem::ZERO; self.d];
                    for (&c, &v) in free_cols.iter().zip(&base_vals) {
                        base[c] = Elem(v as u32);
                    }
                    out.push(Flat { base: Point(base), dirs: dirs.clone(), pivots: pivots.clone() });
                }
            }
        }
        debug_assert_eq!(out.len() as u128, total);
        Ok(out)
    }

    /// Number of lines containing a flat of dimension s.
    ///
    /// A line contains a point in (q^d − 1)/(q − 1) ways and a line in one
    /// way; nothing of dimension ≥ 2 lies on a line, so the count is 0.
    pub fn count_lines_through(&self, flat: &Flat) -> u128 {
        let q = self.q() as u128;
        match flat.dim() {
            0 => (q.pow(self.d as u32) - 1) / (q - 1),
            1 => 1,
            _ => 0,
        }
    }

    /// Splits the hyperplane family into H (misses origin) and Θ (through origin),
    /// in the order of [`Space::enumerate_kplanes`] with k = d − 1.
    pub fn hyperplane_split(&self) -> Result<Vec<HyperplaneDual>> {
        let flats = self.enumerate_kplanes(self.d - 1)?;
        Ok(flats.into_iter().map(|flat| self.dual_of(flat)).collect())
    }

    fn dual_of(&self, flat: Flat) -> HyperplaneDual {
        // the single non-pivot column carries the normal vector
        let free = (0..self.d).find(|c| !flat.pivots.contains(c)).expect("hyperplane has a free column");
        let mut normal = vec![Elem::ZERO; self.d];
        normal[free] = Elem::ONE;
        for (row, &pc) in flat.dirs.iter().zip(&flat.pivots) {
            normal[pc] = self.field.neg(row[free]);
        }
        let level = self.dot(&normal, &flat.base.0);
        if level.is_zero() {
            let lead = *normal.iter().find(|c| !c.is_zero()).unwrap();
            let inv = self.field.inv(lead).unwrap();
            HyperplaneDual { kind: HyperplaneKind::Theta, dual: Point(self.scale(inv, &normal)), flat }
        } else {
            let inv = self.field.inv(level).unwrap();
            HyperplaneDual { kind: HyperplaneKind::H, dual: Point(self.scale(inv, &normal)), flat }
        }
    }
}

/// k-subsets of 0..n in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Mixed-radix counter over [0, base)^len, low position fastest.
struct Counter {
    base: usize,
    cur: Option<Vec<usize>>,
}

impl Counter {
    fn new(base: usize, len: usize) -> Self {
        Counter { base, cur: Some(vec![0; len]) }
    }
}

impl Iterator for Counter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.cur.clone()?;
        let cur = self.cur.as_mut().unwrap();
        let mut i = 0;
        loop {
            if i == cur.len() {
                self.cur = None;
                break;
            }
            cur[i] += 1;
            if cur[i] < self.base {
                break;
            }
            cur[i] = 0;
            i += 1;
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;

    fn space(p: u64, n: u32, d: usize) -> Space {
        Space::new(Arc::new(FieldCtx::new(p, n, None).unwrap()), d).unwrap()
    }

    /// Oracle: span every (k+1)-tuple of points and dedup by point set.
    fn oracle_kplane_count(s: &Space, k: usize) -> usize {
        let pts = s.enumerate_points();
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut idx = vec![0usize; k + 1];
        loop {
            let tuple: Vec<Point> = idx.iter().map(|&i| pts[i].clone()).collect();
            let f = s.affine_span(&tuple).unwrap();
            if f.dim() == k {
                let mut ranks = s.flat_point_ranks(&f);
                ranks.sort_unstable();
                seen.insert(ranks);
            }
            let mut i = 0;
            loop {
                if i > k {
                    return seen.len();
                }
                idx[i] += 1;
                if idx[i] < pts.len() {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
        }
    }

    #[test]
    fn point_enumeration() {
        let s = space(2, 1, 2);
        let pts = s.enumerate_points();
        assert_eq!(pts.len(), 4);
        for (i, x) in pts.iter().enumerate() {
            assert_eq!(s.rank(x), i);
        }
        let s3 = space(3, 1, 3);
        assert_eq!(s3.enumerate_points().len(), 27);
        assert_eq!(s3.rank(&s3.unrank(17)), 17);
    }

    #[test]
    fn point_cap() {
        let f = Arc::new(FieldCtx::prime(7).unwrap());
        assert!(matches!(Space::with_cap(f, 3, 100), Err(Error::SizeCapExceeded { .. })));
    }

    #[test]
    fn kplane_counts_against_oracle() {
        let cases = [(3u64, 2usize, 1usize, 12usize), (2, 3, 1, 28), (3, 3, 2, 39), (2, 3, 2, 14)];
        for (q, d, k, expected) in cases {
            let s = space(q, 1, d);
            let flats = s.enumerate_kplanes(k).unwrap();
            assert_eq!(flats.len(), expected);
            assert_eq!(oracle_kplane_count(&s, k), expected);
            assert_eq!(count_kplanes(q, d as u32, k as u32), expected as u128);
            let uniq: HashSet<&Flat> = flats.iter().collect();
            assert_eq!(uniq.len(), expected);
        }
    }

    #[test]
    fn family_sizes_match_closed_forms() {
        for q in [2u64, 3, 4, 5] {
            for d in 2..=3usize {
                let s = if q == 4 { space(2, 2, d) } else { space(q, 1, d) };
                let qq = q as u128;
                let lines = qq.pow(d as u32 - 1) * (qq.pow(d as u32) - 1) / (qq - 1);
                assert_eq!(s.enumerate_kplanes(1).unwrap().len() as u128, lines);
                let hyper = qq * (qq.pow(d as u32) - 1) / (qq - 1);
                assert_eq!(s.enumerate_kplanes(d - 1).unwrap().len() as u128, hyper);
                for f in s.enumerate_kplanes(1).unwrap() {
                    assert_eq!(s.flat_points(&f).len(), q as usize);
                }
            }
        }
    }

    #[test]
    fn affine_span_dims() {
        let s = space(3, 1, 2);
        let p = |a: u32, b: u32| Point::from_codes(&[a, b]);
        assert_eq!(s.affine_span(&[p(1, 1)]).unwrap().dim(), 0);
        assert_eq!(s.affine_span(&[p(0, 0), p(1, 0), p(2, 0)]).unwrap().dim(), 1);
        assert_eq!(s.affine_span(&[p(0, 0), p(1, 0), p(0, 1)]).unwrap().dim(), 2);
        assert_eq!(s.affine_span(&[]), Err(Error::EmptyInput));
    }

    #[test]
    fn incidence() {
        let s = space(3, 1, 2);
        let axis = s.flat(&s.origin(), &[vec![Elem(1), Elem(0)]]).unwrap();
        assert!(s.incident(&axis, &s.origin()).unwrap());
        assert!(!s.incident(&axis, &Point::from_codes(&[0, 1])).unwrap());
        for x in s.flat_points(&axis) {
            assert!(s.incident(&axis, &x).unwrap());
        }
        let s3 = space(3, 1, 3);
        assert!(matches!(s3.incident(&axis, &s3.origin()), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn lines_through_flats() {
        let s = space(3, 1, 2);
        let pt = s.affine_span(&[Point::from_codes(&[1, 2])]).unwrap();
        assert_eq!(s.count_lines_through(&pt), 4);
        let oracle = s
            .enumerate_kplanes(1)
            .unwrap()
            .iter()
            .filter(|l| s.incident(l, &Point::from_codes(&[1, 2])).unwrap())
            .count();
        assert_eq!(oracle, 4);
        let line = s.enumerate_kplanes(1).unwrap()[5].clone();
        assert_eq!(s.count_lines_through(&line), 1);
        let whole = s.affine_span(&[s.unrank(0), s.unrank(1), s.unrank(3)]).unwrap();
        assert_eq!(s.count_lines_through(&whole), 0);

        let s2 = space(2, 1, 3);
        let pt = s2.affine_span(&[s2.origin()]).unwrap();
        assert_eq!(s2.count_lines_through(&pt), 7);
        let oracle = s2.enumerate_kplanes(1).unwrap().iter().filter(|l| s2.incident(l, &s2.origin()).unwrap()).count();
        assert_eq!(oracle, 7);
    }

    #[test]
    fn hyperplane_split_counts_and_duals() {
        for (q, d, theta, h) in [(3u64, 2usize, 4usize, 8usize), (2, 3, 7, 7)] {
            let s = space(q, 1, d);
            let split = s.hyperplane_split().unwrap();
            let nt = split.iter().filter(|w| w.kind == HyperplaneKind::Theta).count();
            assert_eq!((nt, split.len() - nt), (theta, h));
            for w in &split {
                assert_eq!(w.kind == HyperplaneKind::Theta, s.incident(&w.flat, &s.origin()).unwrap());
                for x in s.enumerate_points() {
                    let on = s.dot(&w.dual.0, &x.0) == w.level();
                    assert_eq!(on, s.incident(&w.flat, &x).unwrap());
                }
                if w.kind == HyperplaneKind::Theta {
                    let lead = w.dual.0.iter().find(|c| !c.is_zero()).unwrap();
                    assert_eq!(*lead, Elem::ONE);
                }
            }
        }
    }

    #[test]
    fn theta_representative_independence() {
        let s = space(5, 1, 3);
        for w in s.hyperplane_split().unwrap().iter().filter(|w| w.kind == HyperplaneKind::Theta) {
            for t in s.field().nonzero() {
                let scaled = s.scale(t, &w.dual.0);
                for x in s.enumerate_points() {
                    assert_eq!(s.dot(&scaled, &x.0).is_zero(), s.dot(&w.dual.0, &x.0).is_zero());
                }
            }
        }
    }

    #[test]
    fn two_points_span_one_line() {
        for (q, d) in [(2u64, 2usize), (3, 2), (2, 3), (3, 3)] {
            let s = space(q, 1, d);
            let lines = s.enumerate_kplanes(1).unwrap();
            let pts = s.enumerate_points();
            for a in &pts {
                for b in &pts {
                    if a == b {
                        continue;
                    }
                    let containing: Vec<&Flat> =
                        lines.iter().filter(|l| s.incident(l, a).unwrap() && s.incident(l, b).unwrap()).collect();
                    assert_eq!(containing.len(), 1);
                    assert_eq!(*containing[0], s.affine_span(&[a.clone(), b.clone()]).unwrap());
                }
            }
        }
    }

    #[test]
    fn canonicalization_is_parametrization_free() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &(p, n, d) in &[(3u64, 1u32, 3usize), (5, 1, 4), (2, 2, 3), (7, 1, 2)] {
            let s = space(p, n, d);
            let q = s.q() as u32;
            for _ in 0..250 {
                let k = rng.gen_range(0..=d);
                let rand_vec =
                    |rng: &mut ChaCha8Rng| -> Vec<Elem> { (0..d).map(|_| Elem(rng.gen_range(0..q))).collect() };
                let base = Point(rand_vec(&mut rng));
                let dirs: Vec<Vec<Elem>> = (0..k).map(|_| rand_vec(&mut rng)).collect();
                let flat = s.flat(&base, &dirs).unwrap();
                // new basis: random invertible-ish combinations plus the old vectors shuffled
                let mut new_dirs: Vec<Vec<Elem>> = dirs.iter().rev().cloned().collect();
                for _ in 0..2 {
                    if dirs.is_empty() {
                        break;
                    }
                    let i = rng.gen_range(0..dirs.len());
                    let j = rng.gen_range(0..dirs.len());
                    let t = Elem(rng.gen_range(0..q));
                    let comb = s.add(&new_dirs[i], &s.scale(t, &dirs[j]));
                    new_dirs.push(comb);
                }
                let mut shift = base.0.clone();
                for v in &dirs {
                    let t = Elem(rng.gen_range(0..q));
                    shift = s.add(&shift, &s.scale(t, v));
                }
                let again = s.flat(&Point(shift), &new_dirs).unwrap();
                assert_eq!(flat, again);
                let mut a = s.flat_point_ranks(&flat);
                let mut b = s.flat_point_ranks(&again);
                a.sort_unstable();
                b.sort_unstable();
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn gaussian_binomials() {
        assert_eq!(gaussian_binomial(2, 3, 1), 7);
        assert_eq!(gaussian_binomial(3, 2, 1), 4);
        assert_eq!(gaussian_binomial(2, 4, 2), 35);
        assert_eq!(gaussian_binomial(5, 3, 0), 1);
    }
}
