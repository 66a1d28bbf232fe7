//! Projective t-designs: the induced angle measure `μ_m` on [0,1], its orthogonal
//! (Jacobi) polynomials `Q_k^(m)`, the Hoggar residual test and regular schemes.
//!
//! `μ_m` is the law of `|<x,y>|^2` for independent uniform unit vectors; its moments
//! are `∫ x^r dμ_m = c_r(F^d)`. All `μ_m` integrals go through that moment sequence.

use alloc::vec::Vec;

use crate::hilbert::{self, angle_spectrum, Configuration, Field, Vector};
use crate::math;
use crate::moments::{self, frac_product, half_rising_factors, rising};
use crate::{Error, Result};

/// Tolerance on `|v| - 1` for operations that require unit vectors.
pub const UNIT_TOL: f64 = 1e-9;

/// `Q_k^(m)` for F^d as coefficients in `x` (ascending powers).
#[derive(Clone, Debug, PartialEq)]
pub struct JacobiPoly {
    pub k: u32,
    pub m: usize,
    pub d: usize,
    pub coeffs: Vec<f64>,
}

impl JacobiPoly {
    /// Horner evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }
}

/// `Q_k^(m)(x) = ((m/2)_k / k!) Σ_j (-1)^j C(k,j) ((md/2 - 1 + k)_j / (m/2)_j) x^j`.
pub fn jacobi_q(k: u32, m: usize, d: usize) -> JacobiPoly {
    assert!(Field::from_m(m).is_some(), "m must be 1, 2 or 4");
    let (mi, md) = (m as i64, (m * d) as i64);
    let coeffs = (0..=k)
        .map(|j| {
            let sign = if j % 2 == 0 { 1 } else { -1 };
            let lead = half_rising_factors(mi, k).chain((1..=k as i128).map(|i| (1, i)));
            let binom = core::iter::once((sign * moments::binomial(k as u64, j as u64) as i128, 1));
            let upper = half_rising_factors(md - 2 + 2 * k as i64, j);
            let lower = half_rising_factors(mi, j).map(|(n, d)| (d, n));
            frac_product(lead.chain(binom).chain(upper).chain(lower))
        })
        .collect();
    JacobiPoly { k, m, d, coeffs }
}

/// `∫ p dμ_m` for a polynomial given by ascending coefficients.
pub fn mu_integral(coeffs: &[f64], field: Field, d: usize) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .map(|(r, &c)| c * moments::c_t(field, d, r as u32))
        .sum()
}

/// Coefficients of the product of two polynomials in one variable.
pub fn mul_coeffs(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = alloc::vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `∫ Q_j Q_k dμ_m` through the moment sequence.
pub fn mu_inner(p: &JacobiPoly, q: &JacobiPoly) -> f64 {
    assert_eq!((p.m, p.d), (q.m, q.d));
    let field = Field::from_m(p.m).expect("valid m");
    mu_integral(&mul_coeffs(&p.coeffs, &q.coeffs), field, p.d)
}

/// Closed-form `∫ (Q_k^(m))^2 dμ_m`
/// `= (1/(2k + md/2 - 1)) ((m/2)_k ((m/2)(d-1))_k / (md/2)_{k-1}) / k!`, with `(x)_{-1} = 1/(x-1)`.
pub fn jacobi_norm_sq(k: u32, m: usize, d: usize) -> f64 {
    if k == 0 {
        // μ_m is a probability measure; the closed form is 0/0 when md = 2
        return 1.0;
    }
    let (mh, mdh) = (m as f64 / 2.0, (m * d) as f64 / 2.0);
    let k_i = k as i32;
    let fact: f64 = (1..=k).map(|i| i as f64).product();
    rising(mh, k_i) * rising(mh * (d as f64 - 1.0), k_i)
        / rising(mdh, k_i - 1)
        / (2.0 * k as f64 + mdh - 1.0)
        / fact
}

/// Coefficients `κ_ℓ` of `x^t = Σ_{ℓ=0}^t κ_ℓ Q_ℓ^(m)` in `L^2(μ_m)`.
///
/// `κ_0 = c_t`, and for unit vectors with weights summing to one the normalized frame
/// potential equals `c_t + Σ_{ℓ≥1} κ_ℓ r_ℓ` with `r_ℓ` the Hoggar residuals.
pub fn monomial_expansion(t: u32, field: Field, d: usize) -> Vec<f64> {
    let m = field.m();
    let mut xt = alloc::vec![0.0; t as usize + 1];
    xt[t as usize] = 1.0;
    (0..=t)
        .map(|l| {
            let q = jacobi_q(l, m, d);
            let norm = jacobi_norm_sq(l, m, d);
            if norm == 0.0 {
                0.0
            } else {
                mu_integral(&mul_coeffs(&xt, &q.coeffs), field, d) / norm
            }
        })
        .collect()
}

/// `r_ℓ = Σ_{j,k} w_j w_k Q_ℓ^(m)(|<v_j,v_k>|^2)` for `ℓ = 1..=t`, on unit vectors with
/// weights summing to one.
pub(crate) fn hoggar_residuals(
    units: &[Vector],
    weights: &[f64],
    field: Field,
    d: usize,
    t: u32,
) -> Vec<f64> {
    let polys: Vec<JacobiPoly> = (1..=t).map(|l| jacobi_q(l, field.m(), d)).collect();
    let mut out = alloc::vec![0.0; t as usize];
    let n = units.len();
    for j in 0..n {
        for k in 0..n {
            let angle = if j == k {
                1.0
            } else {
                hilbert::inner_unchecked(&units[j], &units[k]).norm_sq()
            };
            let w = weights[j] * weights[k];
            for (r, q) in out.iter_mut().zip(&polys) {
                *r += w * q.eval(angle);
            }
        }
    }
    out
}

/// Hoggar residuals `r_1..r_t` of a unit-vector configuration; all vanish exactly for a
/// projective t-design. Weights are normalized to sum to one (unweighted: `1/n`).
pub fn hoggar_test(cfg: &Configuration, t: u32) -> Result<Vec<f64>> {
    if t < 1 {
        return Err(Error::Domain("t must be at least 1"));
    }
    cfg.check_unit(UNIT_TOL)?;
    let total: f64 = (0..cfg.len()).map(|j| cfg.weight(j)).sum();
    let weights: Vec<f64> = (0..cfg.len()).map(|j| cfg.weight(j) / total).collect();
    Ok(hoggar_residuals(
        cfg.vectors(),
        &weights,
        cfg.field(),
        cfg.dim(),
        t,
    ))
}

/// A configuration whose angle multiset from each point is the same.
#[derive(Clone, Debug, PartialEq)]
pub struct RegularScheme {
    pub n: usize,
    pub angles: Vec<f64>,
    pub counts: Vec<usize>,
}

impl RegularScheme {
    pub fn new(n: usize, angles: Vec<f64>, counts: Vec<usize>) -> Result<Self> {
        if angles.len() != counts.len() {
            return Err(Error::Domain("angles and counts differ in length"));
        }
        if counts.iter().sum::<usize>() + 1 != n {
            return Err(Error::Domain("counts must sum to n - 1"));
        }
        if angles.iter().any(|&a| !(0.0..1.0).contains(&a)) {
            return Err(Error::Domain("angles must lie in [0, 1)"));
        }
        Ok(RegularScheme { n, angles, counts })
    }

    /// Extracts the scheme of a unit-vector configuration if every vector sees the same
    /// angle counts (angles clustered within `tol`).
    pub fn from_configuration(cfg: &Configuration, tol: f64) -> Option<RegularScheme> {
        let spectrum = angle_spectrum(cfg, tol);
        let centers = spectrum.angles();
        let vs = cfg.vectors();
        let n = vs.len();
        let mut reference: Option<Vec<usize>> = None;
        for j in 0..n {
            let mut counts = alloc::vec![0usize; centers.len()];
            for k in (0..n).filter(|&k| k != j) {
                let a = hilbert::inner_unchecked(&vs[j], &vs[k]).norm_sq()
                    / (vs[j].norm_sq() * vs[k].norm_sq());
                counts[nearest(&centers, a)] += 1;
            }
            match &reference {
                None => reference = Some(counts),
                Some(r) if *r == counts => {}
                Some(_) => return None,
            }
        }
        let counts = reference?;
        let (angles, counts): (Vec<f64>, Vec<usize>) = centers
            .into_iter()
            .zip(counts)
            .filter(|&(_, c)| c > 0)
            .unzip();
        RegularScheme::new(n, angles, counts).ok()
    }
}

// Clusters are separated by gaps wider than the clustering tolerance, so each angle
// belongs to the cluster with the nearest center.
fn nearest(centers: &[f64], a: f64) -> usize {
    let mut best = 0;
    for (i, &c) in centers.iter().enumerate() {
        if math::abs(c - a) < math::abs(centers[best] - a) {
            best = i;
        }
    }
    best
}

/// Both sides of `1 + Σ α^r d_α = n (m/2)_r / (md/2)_r` for a regular scheme.
pub fn regular_scheme_check(s: &RegularScheme, field: Field, d: usize, r: u32) -> (f64, f64) {
    let lhs = 1.0
        + s.angles
            .iter()
            .zip(&s.counts)
            .map(|(&a, &c)| math::powi(a, r) * c as f64)
            .sum::<f64>();
    let rhs = s.n as f64 * moments::c_t(field, d, r);
    (lhs, rhs)
}

/// Density `W(z)` of `μ_m` on (0,1): a Beta(m/2, (m/2)(d-1)) density.
pub fn induced_density(z: f64, field: Field, d: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::Domain("induced density needs d >= 2"));
    }
    if !(z > 0.0 && z < 1.0) {
        return Err(Error::Domain("z must lie in (0, 1)"));
    }
    let m = field.m() as f64;
    let (a, b) = (m / 2.0, m / 2.0 * (d as f64 - 1.0));
    let log_norm = math::lgamma(a + b) - math::lgamma(a) - math::lgamma(b);
    Ok(math::exp(
        log_norm + (a - 1.0) * math::ln(z) + (b - 1.0) * math::ln(1.0 - z),
    ))
}
