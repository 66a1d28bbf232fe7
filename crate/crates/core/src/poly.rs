//! Sparse real polynomials in up to 16 variables.
//!
//! Monomials are packed four bits per variable into a `u64`, so multiplying two
//! monomials is integer addition as long as the product has total degree at most
//! [`MAX_DEGREE`]. The polyspace envelope (12 variables, degree 10) sits well inside.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::math;
use crate::moments::{self, MultiIndex};
use crate::{Error, Result};

pub const MAX_VARS: usize = 16;
pub const MAX_DEGREE: u32 = 15;

const NIBBLE: u64 = 0xf;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(u64);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn var(i: usize) -> Monomial {
        assert!(i < MAX_VARS);
        Monomial(1 << (4 * i))
    }

    /// Packs an exponent vector; `None` if it does not fit.
    pub fn from_exponents(exps: &[u32]) -> Option<Monomial> {
        if exps.len() > MAX_VARS || exps.iter().sum::<u32>() > MAX_DEGREE {
            return None;
        }
        let mut key = 0u64;
        for (i, &e) in exps.iter().enumerate() {
            key |= (e as u64) << (4 * i);
        }
        Some(Monomial(key))
    }

    #[inline]
    pub fn exponent(self, i: usize) -> u32 {
        ((self.0 >> (4 * i)) & NIBBLE) as u32
    }

    pub fn degree(self) -> u32 {
        let mut k = self.0;
        let mut total = 0;
        while k != 0 {
            total += (k & NIBBLE) as u32;
            k >>= 4;
        }
        total
    }

    pub fn exponents(self, num_vars: usize) -> Vec<u32> {
        (0..num_vars).map(|i| self.exponent(i)).collect()
    }

    pub fn to_multi_index(self, num_vars: usize) -> MultiIndex {
        MultiIndex::new(self.exponents(num_vars))
    }

    /// `α!` for this monomial's exponent vector.
    pub fn factorial(self, num_vars: usize) -> u128 {
        (0..num_vars)
            .map(|i| moments::factorial(self.exponent(i)))
            .product()
    }

    /// Product of monomials, `None` past [`MAX_DEGREE`].
    pub fn checked_mul(self, other: Monomial) -> Option<Monomial> {
        (self.degree() + other.degree() <= MAX_DEGREE).then(|| self.mul_unchecked(other))
    }

    /// Product of monomials; the caller guarantees the degree bound.
    #[inline]
    fn mul_unchecked(self, other: Monomial) -> Monomial {
        Monomial(self.0 + other.0)
    }

    #[inline]
    fn lower(self, i: usize) -> Monomial {
        debug_assert!(self.exponent(i) > 0);
        Monomial(self.0 - (1 << (4 * i)))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    num_vars: usize,
    terms: BTreeMap<Monomial, f64>,
}

impl Poly {
    pub fn zero(num_vars: usize) -> Poly {
        assert!(num_vars <= MAX_VARS, "at most {MAX_VARS} variables");
        Poly {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(num_vars: usize, c: f64) -> Poly {
        let mut p = Poly::zero(num_vars);
        p.add_term(Monomial::ONE, c);
        p
    }

    /// The coordinate function `x_i`.
    pub fn var(num_vars: usize, i: usize) -> Poly {
        assert!(i < num_vars);
        let mut p = Poly::zero(num_vars);
        p.add_term(Monomial::var(i), 1.0);
        p
    }

    pub fn from_terms<I>(num_vars: usize, terms: I) -> Poly
    where
        I: IntoIterator<Item = (Monomial, f64)>,
    {
        let mut p = Poly::zero(num_vars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, f64)> + '_ {
        self.terms.iter().map(|(&m, &c)| (m, c))
    }

    pub fn coeff(&self, m: Monomial) -> f64 {
        self.terms.get(&m).copied().unwrap_or(0.0)
    }

    pub fn add_term(&mut self, m: Monomial, c: f64) {
        if c == 0.0 {
            return;
        }
        let entry = self.terms.entry(m).or_insert(0.0);
        *entry += c;
        if *entry == 0.0 {
            self.terms.remove(&m);
        }
    }

    /// Maximal total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// `Some(k)` when every term has degree `k` (the zero polynomial is `Some(0)`).
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|m| m.degree());
        match degs.next() {
            None => Some(0),
            Some(k) => degs.all(|e| e == k).then_some(k),
        }
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly::from_terms(self.num_vars, self.terms().map(|(m, c)| (m, c * s)))
    }

    /// `self += s * other`.
    pub fn add_scaled(&mut self, other: &Poly, s: f64) {
        assert_eq!(self.num_vars, other.num_vars, "variable count mismatch");
        for (m, c) in other.terms() {
            self.add_term(m, s * c);
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut p = self.clone();
        p.add_scaled(other, 1.0);
        p
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut p = self.clone();
        p.add_scaled(other, -1.0);
        p
    }

    /// Exact distributive product.
    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        assert_eq!(self.num_vars, other.num_vars, "variable count mismatch");
        let degree = self.degree() + other.degree();
        if degree > MAX_DEGREE {
            return Err(Error::Envelope {
                num_vars: self.num_vars,
                degree,
            });
        }
        let mut out = Poly::zero(self.num_vars);
        for (ma, ca) in self.terms() {
            for (mb, cb) in other.terms() {
                *out.terms.entry(ma.mul_unchecked(mb)).or_insert(0.0) += ca * cb;
            }
        }
        out.terms.retain(|_, c| *c != 0.0);
        Ok(out)
    }

    /// `self^k`; `self^0 = 1`.
    pub fn pow(&self, k: u32) -> Result<Poly> {
        let degree = self.degree().saturating_mul(k);
        if degree > MAX_DEGREE {
            return Err(Error::Envelope {
                num_vars: self.num_vars,
                degree,
            });
        }
        let mut acc = Poly::constant(self.num_vars, 1.0);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.num_vars, "point has wrong length");
        let deg = self.degree() as usize;
        // powers[i][e] = x_i^e
        let powers: Vec<Vec<f64>> = x
            .iter()
            .map(|&xi| {
                let mut p = Vec::with_capacity(deg + 1);
                let mut acc = 1.0;
                for _ in 0..=deg {
                    p.push(acc);
                    acc *= xi;
                }
                p
            })
            .collect();
        self.terms()
            .map(|(m, c)| {
                (0..self.num_vars)
                    .map(|i| powers[i][m.exponent(i) as usize])
                    .product::<f64>()
                    * c
            })
            .sum()
    }

    /// `∂/∂x_i`.
    pub fn partial(&self, i: usize) -> Poly {
        assert!(i < self.num_vars);
        let mut out = Poly::zero(self.num_vars);
        for (m, c) in self.terms() {
            let e = m.exponent(i);
            if e > 0 {
                out.add_term(m.lower(i), c * e as f64);
            }
        }
        out
    }

    /// `Σ_{a,b} op[a][b] ∂_a ∂_b self` for a row-major `num_vars × num_vars` matrix.
    pub fn second_order(&self, op: &[f64]) -> Poly {
        let n = self.num_vars;
        assert_eq!(op.len(), n * n, "operator matrix has wrong size");
        let mut out = Poly::zero(n);
        for (m, c) in self.terms() {
            for a in 0..n {
                let ea = m.exponent(a);
                if ea == 0 {
                    continue;
                }
                if ea >= 2 && op[a * n + a] != 0.0 {
                    let coef = c * (ea * (ea - 1)) as f64 * op[a * n + a];
                    out.add_term(m.lower(a).lower(a), coef);
                }
                for b in (a + 1)..n {
                    let eb = m.exponent(b);
                    let sym = op[a * n + b] + op[b * n + a];
                    if eb == 0 || sym == 0.0 {
                        continue;
                    }
                    out.add_term(m.lower(a).lower(b), c * (ea * eb) as f64 * sym);
                }
            }
        }
        out
    }

    pub fn laplacian(&self) -> Poly {
        let n = self.num_vars;
        let mut id = alloc::vec![0.0; n * n];
        for a in 0..n {
            id[a * n + a] = 1.0;
        }
        self.second_order(&id)
    }

    /// `∫_S f dσ` over the unit sphere of `R^{num_vars}`, term by term.
    pub fn sphere_integral(&self) -> f64 {
        self.terms()
            .map(|(m, c)| c * moments::sphere_moment_of(&m.exponents(self.num_vars)))
            .sum()
    }

    /// Largest absolute coefficient difference with `other`.
    pub fn max_abs_diff(&self, other: &Poly) -> f64 {
        let mut worst = 0.0f64;
        for (m, c) in self.terms() {
            worst = math::max(worst, math::abs(c - other.coeff(m)));
        }
        for (m, c) in other.terms() {
            if !self.terms.contains_key(&m) {
                worst = math::max(worst, math::abs(c));
            }
        }
        worst
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms()
            .fold(0.0, |acc, (_, c)| math::max(acc, math::abs(c)))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}")?;
            for i in 0..self.num_vars {
                match m.exponent(i) {
                    0 => {}
                    1 => write!(f, "*x{i}")?,
                    e => write!(f, "*x{i}^{e}")?,
                }
            }
        }
        Ok(())
    }
}
