//! Exact arithmetic in F_q, q = p^n.
//!
//! Elements are encoded as integers in `[0, q)`: the base-p digits of a code
//! are the coefficients of a polynomial in `t` of degree < n, low digit first,
//! reduced modulo a monic irreducible polynomial of degree n. For n = 1 this
//! is plain arithmetic mod p.
//!
//! All operations go through precomputed tables, so a [`FieldCtx`] costs
//! O(q^2) memory. The default cap of q <= 1024 keeps that at a few megabytes.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default upper bound on the field order.
pub const DEFAULT_MAX_Q: u64 = 1024;

/// A field element, stored as its integer code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn code(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One of the field operations accepted by [`FieldCtx::arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add(Elem),
    Sub(Elem),
    Mul(Elem),
    Div(Elem),
    Inv,
    Neg,
    Pow(u64),
}

/// A concrete finite field together with its additive character.
#[derive(Clone)]
pub struct FieldCtx {
    p: u32,
    n: u32,
    q: u32,
    /// Monic modulus, low coefficient first, length n + 1.
    modulus: Vec<u32>,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
    trace: Vec<u32>,
    chi: Vec<Complex64>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("n", &self.n)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.n == other.n && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Polynomial remainder over F_p. Coefficients low first; `divisor` must be monic.
fn poly_rem(dividend: &[u32], divisor: &[u32], p: u32) -> Vec<u32> {
    let mut rem: Vec<u32> = dividend.to_vec();
    let dd = divisor.len() - 1;
    while rem.len() > dd {
        let lead = *rem.last().unwrap();
        let shift = rem.len() - 1 - dd;
        if lead != 0 {
            for (i, &c) in divisor.iter().enumerate() {
                let idx = shift + i;
                rem[idx] = (rem[idx] + p - (lead * c) % p) % p;
            }
        }
        rem.pop();
    }
    rem
}

/// Exhaustive factor check: no monic polynomial of degree 1..=n/2 divides `poly`.
fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let n = poly.len() - 1;
    for m in 1..=n / 2 {
        let count = (p as u64).pow(m as u32);
        for code in 0..count {
            let mut cand = digits(code, p, m);
            cand.push(1);
            if poly_rem(poly, &cand, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn digits(mut code: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((code % p as u64) as u32);
        code /= p as u64;
    }
    out
}

fn undigits(ds: &[u32], p: u32) -> u32 {
    ds.iter().rev().fold(0u32, |acc, &c| acc * p + c)
}

/// First monic irreducible of degree n, ordering candidates by the integer
/// code of their lower coefficients.
pub fn default_modulus(p: u32, n: u32) -> Vec<u32> {
    let count = (p as u64).pow(n);
    for code in 0..count {
        let mut cand = digits(code, p, n as usize);
        cand.push(1);
        if is_irreducible(&cand, p) {
            return cand;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FieldCtx {
    /// Builds F_{p^n} with the default size cap.
    pub fn new(p: u64, n: u32, modulus: Option<&[u32]>) -> Result<Self> {
        Self::with_cap(p, n, modulus, DEFAULT_MAX_Q)
    }

    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, 1, None)
    }

    pub fn with_cap(p: u64, n: u32, modulus: Option<&[u32]>, max_q: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidModulus("extension degree must be >= 1".into()));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let q = (p as u128).checked_pow(n).unwrap_or(u128::MAX);
        if q > max_q as u128 {
            return Err(Error::SizeCapExceeded { what: "q", value: q, cap: max_q as u128 });
        }
        let p32 = p as u32;
        let modulus = if n == 1 {
            vec![0, 1]
        } else {
            match modulus {
                None => default_modulus(p32, n),
                Some(m) => {
                    if m.len() != n as usize + 1 {
                        return Err(Error::InvalidModulus(format!("expected {} coefficients, got {}", n + 1, m.len())));
                    }
                    if m.iter().any(|&c| c >= p32) {
                        return Err(Error::InvalidModulus("coefficient out of range".into()));
                    }
                    if m[n as usize] != 1 {
                        return Err(Error::InvalidModulus("modulus must be monic".into()));
                    }
                    if !is_irreducible(m, p32) {
                        return Err(Error::ReducibleModulus);
                    }
                    m.to_vec()
                }
            }
        };
        Ok(Self::build_tables(p32, n, q as u32, modulus))
    }

    fn build_tables(p: u32, n: u32, q: u32, modulus: Vec<u32>) -> Self {
        let qs = q as usize;
        let nd = n as usize;
        let digit_table: Vec<Vec<u32>> = (0..q).map(|c| digits(c as u64, p, nd)).collect();

        let mut add = vec![0u32; qs * qs];
        let mut neg = vec![0u32; qs];
        for a in 0..qs {
            let da = &digit_table[a];
            for b in 0..qs {
                let db = &digit_table[b];
                let s: Vec<u32> = da.iter().zip(db).map(|(x, y)| (x + y) % p).collect();
                add[a * qs + b] = undigits(&s, p);
            }
            let ng: Vec<u32> = da.iter().map(|x| (p - x) % p).collect();
            neg[a] = undigits(&ng, p);
        }

        let mut mul = vec![0u32; qs * qs];
        let mut prod = vec![0u32; 2 * nd];
        for a in 0..qs {
            let da = &digit_table[a];
            for b in a..qs {
                let db = &digit_table[b];
                prod.iter_mut().for_each(|c| *c = 0);
                for (i, &x) in da.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    for (j, &y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let mut r = poly_rem(&prod[..2 * nd - 1], &modulus, p);
                r.resize(nd, 0);
                let c = undigits(&r, p);
                mul[a * qs + b] = c;
                mul[b * qs + a] = c;
            }
        }

        let mut inv = vec![0u32; qs];
        for a in 1..qs {
            inv[a] = (1..q).find(|&b| mul[a * qs + b as usize] == 1).expect("field has inverses");
        }

        let mut ctx = FieldCtx { p, n, q, modulus, add, mul, neg, inv, trace: Vec::new(), chi: Vec::new() };
        ctx.trace = (0..q)
            .map(|a| {
                let mut acc = Elem::ZERO;
                let mut frob = Elem(a);
                for _ in 0..n {
                    acc = ctx.add(acc, frob);
                    frob = ctx.pow(frob, p as u64);
                }
                debug_assert!(acc.0 < p, "trace must land in the prime subfield");
                acc.0
            })
            .collect();
        ctx.chi = ctx.trace.iter().map(|&t| Complex64::from_polar(1.0, 2.0 * PI * t as f64 / p as f64)).collect();
        ctx
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn order(&self) -> usize {
        self.q as usize
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Validates a code and wraps it.
    pub fn elem(&self, code: u32) -> Result<Elem> {
        if code < self.q {
            Ok(Elem(code))
        } else {
            Err(Error::InvalidElement { code, q: self.q })
        }
    }

    /// Element with the given polynomial coefficients (low first).
    pub fn encode(&self, coeffs: &[u32]) -> Result<Elem> {
        if coeffs.len() > self.n as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::InvalidElement { code: u32::MAX, q: self.q });
        }
        Ok(Elem(undigits(coeffs, self.p)))
    }

    /// Polynomial coefficients of `a`, low first, length n.
    pub fn decode(&self, a: Elem) -> Vec<u32> {
        digits(a.0 as u64, self.p, self.n as usize)
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.q).map(Elem)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Elem> + '_ {
        (1..self.q).map(Elem)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.add[a.0 as usize * self.q as usize + b.0 as usize])
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.mul[a.0 as usize * self.q as usize + b.0 as usize])
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(Elem(self.inv[a.0 as usize]))
        }
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = Elem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Single entry point for the field operations.
    pub fn arith(&self, a: Elem, op: ArithOp) -> Result<Elem> {
        match op {
            ArithOp::Add(b) => Ok(self.add(a, b)),
            ArithOp::Sub(b) => Ok(self.sub(a, b)),
            ArithOp::Mul(b) => Ok(self.mul(a, b)),
            ArithOp::Div(b) => self.div(a, b),
            ArithOp::Inv => self.inv(a),
            ArithOp::Neg => Ok(self.neg(a)),
            ArithOp::Pow(e) => Ok(self.pow(a, e)),
        }
    }

    /// Tr(a) = a + a^p + ... + a^{p^{n-1}}, as an integer in [0, p).
    pub fn absolute_trace(&self, a: Elem) -> u32 {
        self.trace[a.0 as usize]
    }

    /// χ(a) = exp(2πi·Tr(a)/p).
    #[inline]
    pub fn chi(&self, a: Elem) -> Complex64 {
        self.chi[a.0 as usize]
    }

    /// Σ_{s ∈ F_q} χ(a·s), computed term by term.
    pub fn character_sum(&self, a: Elem) -> Complex64 {
        self.elements().map(|s| self.chi(self.mul(a, s))).sum()
    }
}
