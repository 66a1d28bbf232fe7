//! Closed-form constants: `c_t(F^d)`, monomial moments of the unit sphere,
//! `b_{t,m}` and the dimensions of `Hom(t,t)` and `Hom_r`.
//!
//! Factorials, binomials and Pochhammer symbols at half-integers are evaluated in
//! exact integer arithmetic and converted to `f64` once at the end.

use alloc::vec::Vec;

use crate::hilbert::Field;

/// Exponent vector `α` of a monomial `x^α = Π_j x_j^{α_j}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zeros(n: usize) -> Self {
        MultiIndex(alloc::vec![0; n])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total degree `|α|`.
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `α! = Π_j α_j!`.
    pub fn factorial(&self) -> u128 {
        self.0.iter().map(|&a| factorial(a)).product()
    }

    /// Multinomial coefficient `|α|! / α!`.
    pub fn multinomial(&self) -> u128 {
        multinomial(&self.0)
    }
}

/// Reduced fraction with overflow detection; `None` signals that the caller should
/// fall back to floating point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Frac {
    num: i128,
    den: i128,
}

impl Frac {
    pub(crate) const ONE: Frac = Frac { num: 1, den: 1 };

    pub(crate) fn new(num: i128, den: i128) -> Frac {
        debug_assert!(den != 0);
        let g = gcd(num.unsigned_abs(), den.unsigned_abs()).max(1) as i128;
        let s = if den < 0 { -1 } else { 1 };
        Frac {
            num: s * num / g,
            den: s * den / g,
        }
    }

    pub(crate) fn checked_mul(self, other: Frac) -> Option<Frac> {
        // cross-reduce first to keep the magnitudes small
        let g1 = gcd(self.num.unsigned_abs(), other.den.unsigned_abs()).max(1) as i128;
        let g2 = gcd(other.num.unsigned_abs(), self.den.unsigned_abs()).max(1) as i128;
        let num = (self.num / g1).checked_mul(other.num / g2)?;
        let den = (self.den / g2).checked_mul(other.den / g1)?;
        Some(Frac::new(num, den))
    }

    pub(crate) fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub(crate) fn parts(self) -> (i128, i128) {
        (self.num, self.den)
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Product of `num_i / den_i`, exact while it fits in `i128`.
pub(crate) fn frac_product<I>(factors: I) -> f64
where
    I: IntoIterator<Item = (i128, i128)>,
{
    let mut exact = Some(Frac::ONE);
    let mut float = 1.0f64;
    for (n, d) in factors {
        match exact {
            Some(e) => match e.checked_mul(Frac::new(n, d)) {
                Some(p) => exact = Some(p),
                None => {
                    float = e.to_f64() * (n as f64 / d as f64);
                    exact = None;
                }
            },
            None => float *= n as f64 / d as f64,
        }
    }
    exact.map_or(float, Frac::to_f64)
}

pub fn factorial(n: u32) -> u128 {
    (1..=n as u128).product()
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        // acc * (n - i) is divisible by (i + 1) at every step
        acc = acc * (n as u128 - i) / (i + 1);
    }
    acc
}

pub fn multinomial(parts: &[u32]) -> u128 {
    let mut acc: u128 = 1;
    let mut total: u64 = 0;
    for &p in parts {
        total += p as u64;
        acc *= binomial(total, p as u64);
    }
    acc
}

/// Rising factorial `(x)_n = x (x+1) ... (x+n-1)`, extended by `(x)_{-1} = 1/(x-1)`.
pub fn rising(x: f64, n: i32) -> f64 {
    match n {
        -1 => 1.0 / (x - 1.0),
        n if n < -1 => panic!("rising factorial defined only for n >= -1"),
        n => (0..n).map(|j| x + j as f64).product(),
    }
}

/// Factors of `(a/2)_n` as `(a + 2j) / 2`, for exact products at half-integers.
pub(crate) fn half_rising_factors(a: i64, n: u32) -> impl Iterator<Item = (i128, i128)> {
    (0..n as i64).map(move |j| ((a + 2 * j) as i128, 2))
}

/// `c_t(F^d) = Π_{j=0}^{t-1} (m + 2j) / (md + 2j)` as a reduced fraction.
pub fn c_t_ratio(field: Field, d: usize, t: u32) -> (u128, u128) {
    let m = field.m() as i128;
    let md = m * d as i128;
    let mut acc = Frac::ONE;
    for j in 0..t as i128 {
        match acc.checked_mul(Frac::new(m + 2 * j, md + 2 * j)) {
            Some(p) => acc = p,
            None => panic!("c_t fraction overflow at t = {t}, d = {d}"),
        }
    }
    let (n, d) = acc.parts();
    (n as u128, d as u128)
}

/// `c_t(F^d)`, the mean of `|<x,y>|^{2t}` over the unit sphere.
pub fn c_t(field: Field, d: usize, t: u32) -> f64 {
    assert!(d >= 1, "dimension must be positive");
    let m = field.m() as i128;
    let md = m * d as i128;
    frac_product((0..t as i128).map(|j| (m + 2 * j, md + 2 * j)))
}

/// `∫_S x^β dσ` over the unit sphere in `R^N`, `N = beta.len()`.
///
/// Zero when some exponent is odd; otherwise, with `β = 2α`, the ratio
/// `(1/2)_α / (N/2)_{|α|}`.
pub fn sphere_monomial_moment(beta: &MultiIndex) -> f64 {
    sphere_moment_of(beta.exponents())
}

pub(crate) fn sphere_moment_of(beta: &[u32]) -> f64 {
    let n = beta.len() as i128;
    assert!(n >= 1, "sphere needs at least one coordinate");
    if beta.iter().any(|b| b % 2 == 1) {
        return 0.0;
    }
    let half_order: u32 = beta.iter().map(|b| b / 2).sum();
    // (1/2)_a = Π_{j<a} (1 + 2j)/2 and (N/2)_k = Π_{j<k} (N + 2j)/2; the powers of 2 cancel
    let numer = beta
        .iter()
        .flat_map(|&b| (0..(b / 2) as i128).map(|j| 1 + 2 * j));
    let denom = (0..half_order as i128).map(|j| n + 2 * j);
    frac_product(numer.map(|a| (a, 1)).chain(denom.map(|b| (1, b))))
}

/// `b_{t,m} = Π_{j=1}^t 2j (2j + m - 2)`.
pub fn b_const(t: u32, m: usize) -> u128 {
    let m = m as u128;
    (1..=t as u128).map(|j| 2 * j * (2 * j + m - 2)).product()
}

/// Real dimension of `Hom_{F^d}(t,t)`.
pub fn dim_homtt(field: Field, d: usize, t: u32) -> u128 {
    assert!(d >= 1, "dimension must be positive");
    let (d, t) = (d as u64, t as u64);
    match field {
        Field::R => binomial(d + 2 * t - 1, 2 * t),
        Field::C => {
            let b = binomial(d + t - 1, t);
            b * b
        }
        Field::H => {
            let n = t + 2 * d - 1;
            let prod = binomial(n, t) * binomial(n, t + 1);
            debug_assert_eq!(prod % n as u128, 0);
            prod / n as u128
        }
    }
}

/// Number of degree-`r` monomials in the `md` real coordinates of F^d.
pub fn dim_hom_r(field: Field, d: usize, r: u32) -> u128 {
    let md = (field.m() * d) as u64;
    binomial(r as u64 + md - 1, md - 1)
}

/// Maximal number of equiangular lines in F^d and the common angle of a maximal set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SicBound {
    pub max_lines: u64,
    pub angle: f64,
}

/// `n ≤ d + (m/2)(d^2 - d)` with equiangularity constant `C = m / (md + 2)`.
pub fn sic_bound(field: Field, d: usize) -> SicBound {
    let (m, d) = (field.m() as u64, d as u64);
    // m (d^2 - d) is always even
    let max_lines = d + m * (d * d - d) / 2;
    SicBound {
        max_lines,
        angle: m as f64 / (m * d + 2) as f64,
    }
}
