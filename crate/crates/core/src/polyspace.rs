//! `Hom(t,t)` as a space of real polynomials in the `md` real coordinates of F^d.
//!
//! The kernel `K_w = |<w, ·>|^{2t}` is expanded into a [`Poly`]; the apolar inner
//! product `<f,g> = (1/b_{t,m}) Σ_{|α|=2t} α! f_α g_α` makes `K_w` the reproducing
//! kernel of `Hom(t,t)`, so the apolar Gram of kernels is the matrix of
//! `|<w_j,w_k>|^{2t}`.

use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;

use crate::eigen::{self, RANK_REL_TOL};
use crate::hilbert::{self, Field, Vector};
use crate::math;
use crate::moments::{self, multinomial};
use crate::poly::{Monomial, Poly};
use crate::quat::Quaternion;
use crate::{Error, Result};

/// Largest number of real variables accepted by the kernel constructors.
pub const ENVELOPE_MAX_VARS: usize = 12;
/// Largest polynomial degree `2t` accepted by the kernel constructors.
pub const ENVELOPE_MAX_DEGREE: u32 = 10;

/// Extra samples beyond `dim Hom(t,t)` expected by [`homtt_dim_by_rank`].
pub const RANK_SAMPLE_MARGIN: usize = 4;

pub fn check_envelope(num_vars: usize, degree: u32) -> Result<()> {
    if num_vars > ENVELOPE_MAX_VARS || degree > ENVELOPE_MAX_DEGREE {
        return Err(Error::Envelope { num_vars, degree });
    }
    Ok(())
}

/// The `m` real components of each entry, entry-major.
#[derive(Clone, Debug, PartialEq)]
pub struct RealCoords(pub Vec<f64>);

impl RealCoords {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

pub fn coords(v: &Vector, field: Field) -> RealCoords {
    let m = field.m();
    RealCoords(
        v.entries()
            .iter()
            .flat_map(|q| q.to_array().into_iter().take(m))
            .collect(),
    )
}

pub fn from_coords(x: &[f64], field: Field) -> Vector {
    let m = field.m();
    assert_eq!(x.len() % m, 0, "coordinate count not a multiple of m");
    Vector::new(
        x.chunks(m)
            .map(|c| {
                let mut a = [0.0; 4];
                a[..m].copy_from_slice(c);
                Quaternion::from_array(a)
            })
            .collect(),
    )
}

/// `|<w, ·>|^2` as a quadratic form in the real coordinates of the free variable.
///
/// `<w, q> = Σ_{j,s} x_{js} conj(w_j) i_s` is linear in the coordinates with quaternion
/// coefficients `c_{js}`, so `|<w,q>|^2 = Σ_{a,b} (c_a · c_b) x_a x_b`.
pub fn expand_abs_ip_sq(w: &Vector, field: Field) -> Poly {
    let m = field.m();
    let n = m * w.dim();
    let c: Vec<Quaternion> = w
        .entries()
        .iter()
        .flat_map(|wj| (0..m).map(move |s| wj.conj() * Quaternion::unit(s)))
        .collect();
    let mut p = Poly::zero(n);
    for a in 0..n {
        for b in a..n {
            let dot = c[a].re_mul(c[b].conj());
            let coef = if a == b { dot } else { 2.0 * dot };
            p.add_term(quadratic(a, b), coef);
        }
    }
    p
}

fn quadratic(a: usize, b: usize) -> Monomial {
    Monomial::var(a)
        .checked_mul(Monomial::var(b))
        .expect("degree 2 fits")
}

/// `K_w = |<w, ·>|^{2t}` expanded.
pub fn kernel(w: &Vector, field: Field, t: u32) -> Result<Poly> {
    let n = field.m() * w.dim();
    check_envelope(n, 2 * t)?;
    expand_abs_ip_sq(w, field).pow(t)
}

/// `|·|^{2k}` in `num_vars` variables.
pub fn norm_power(num_vars: usize, k: u32) -> Result<Poly> {
    let r2 = (0..num_vars).fold(Poly::zero(num_vars), |mut acc, i| {
        acc.add_term(quadratic(i, i), 1.0);
        acc
    });
    r2.pow(k)
}

/// Apolar inner product on degree-`2t` forms: `(1/b_{t,m}) Σ_α α! f_α g_α`.
pub fn apolar(f: &Poly, g: &Poly, t: u32, m: usize) -> Result<f64> {
    if f.num_vars() != g.num_vars() {
        return Err(Error::DimensionMismatch {
            expected: f.num_vars(),
            found: g.num_vars(),
        });
    }
    for p in [f, g] {
        match p.homogeneous_degree() {
            Some(k) if k == 2 * t || p.is_zero() => {}
            Some(k) => {
                return Err(Error::DegreeMismatch {
                    left: k,
                    right: 2 * t,
                })
            }
            None => {
                return Err(Error::DegreeMismatch {
                    left: p.degree(),
                    right: 2 * t,
                })
            }
        }
    }
    let (small, large) = if f.len() <= g.len() { (f, g) } else { (g, f) };
    let n = f.num_vars();
    let sum: f64 = small
        .terms()
        .map(|(mono, c)| {
            let other = large.coeff(mono);
            if other == 0.0 {
                0.0
            } else {
                mono.factorial(n) as f64 * c * other
            }
        })
        .sum();
    Ok(sum / moments::b_const(t, m) as f64)
}

/// Both sides of the reproducing property `<K_w, f> = f(w)`.
pub fn reproduce(f: &Poly, w: &Vector, t: u32, field: Field) -> Result<(f64, f64)> {
    let k = kernel(w, field, t)?;
    let lhs = apolar(&k, f, t, field.m())?;
    let rhs = f.eval(coords(w, field).as_slice());
    Ok((lhs, rhs))
}

/// `∫_S f dσ` on the unit sphere of F^d, computed exactly from monomial moments.
pub fn sphere_integral(f: &Poly) -> f64 {
    f.sphere_integral()
}

/// Result of [`homtt_dim_by_rank`].
#[derive(Clone, Debug, PartialEq)]
pub struct RankDimension {
    pub rank: usize,
    /// Closed-form `dim Hom(t,t)` for comparison.
    pub expected: u128,
    pub samples: usize,
    /// Set when `samples < expected + RANK_SAMPLE_MARGIN`; the rank may then undercount.
    pub insufficient_samples: bool,
    /// Gram eigenvalues in decreasing order.
    pub eigenvalues: Vec<f64>,
}

/// Random unit vectors drawn from a seeded stream.
pub fn random_unit_vectors(field: Field, d: usize, count: usize, seed: u64) -> Vec<Vector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| Vector::random_unit(field, d, &mut rng))
        .collect()
}

/// `Gram_{jk} = |<w_j, w_k>|^{2t}`, row-major.
pub fn kernel_gram(ws: &[Vector], t: u32) -> Vec<f64> {
    let n = ws.len();
    let mut g = alloc::vec![0.0; n * n];
    for j in 0..n {
        for k in j..n {
            let v = math::powi(hilbert::inner_unchecked(&ws[j], &ws[k]).norm_sq(), t);
            g[j * n + k] = v;
            g[k * n + j] = v;
        }
    }
    g
}

/// Numerical rank of the kernel Gram for `samples` random unit vectors.
pub fn homtt_dim_by_rank(
    field: Field,
    d: usize,
    t: u32,
    samples: usize,
    seed: u64,
) -> RankDimension {
    let ws = random_unit_vectors(field, d, samples, seed);
    let gram = kernel_gram(&ws, t);
    let e = eigen::symmetric_eigen(&gram, samples);
    let expected = moments::dim_homtt(field, d, t);
    RankDimension {
        rank: eigen::numerical_rank(&e.values, RANK_REL_TOL),
        expected,
        samples,
        insufficient_samples: (samples as u128) < expected + RANK_SAMPLE_MARGIN as u128,
        eigenvalues: e.values,
    }
}

/// Values of the quaternionic `Hom(1,1)` basis `P` at `q`: the `|q_j|^2`, then
/// `√2 Re(q_j conj(q_k) i_r)` for `j < k`, `r = 1..4`.
pub fn h11_basis_values(q: &Vector) -> Vec<f64> {
    let d = q.dim();
    let e = q.entries();
    let mut out = Vec::with_capacity(d + 4 * d * d.saturating_sub(1) / 2);
    out.extend(e.iter().map(|x| x.norm_sq()));
    for j in 0..d {
        for k in (j + 1)..d {
            let prod = e[j] * e[k].conj();
            for r in 0..4 {
                out.push(core::f64::consts::SQRT_2 * prod.re_mul(Quaternion::unit(r)));
            }
        }
    }
    out
}

/// Both sides of `Σ_{|α|=t} C(t,α) P^α(z) P^α(w) = |<w,z>|^{2t}` in H^d.
pub fn tight_frame_expansion_check(t: u32, w: &Vector, z: &Vector) -> Result<(f64, f64)> {
    let rhs = math::powi(hilbert::abs_ip_sq(w, z)?, t);
    let pw = h11_basis_values(w);
    let pz = h11_basis_values(z);
    let mut lhs = 0.0;
    let mut alpha = alloc::vec![0u32; pw.len()];
    for_each_composition(t, &mut alpha, 0, &mut |a| {
        let mut term = multinomial(a) as f64;
        for (i, &ai) in a.iter().enumerate() {
            if ai > 0 {
                term *= math::powi(pz[i] * pw[i], ai);
            }
        }
        lhs += term;
    });
    Ok((lhs, rhs))
}

fn for_each_composition(rest: u32, alpha: &mut [u32], pos: usize, f: &mut impl FnMut(&[u32])) {
    if pos + 1 == alpha.len() {
        alpha[pos] = rest;
        f(alpha);
        alpha[pos] = 0;
        return;
    }
    for k in 0..=rest {
        alpha[pos] = k;
        for_each_composition(rest - k, alpha, pos + 1, f);
    }
    alpha[pos] = 0;
}

/// Coefficients `Re(conj(w_j) i_r conj(i_s) w_k)` of the real second-order operator
/// `|<w, D>|^2 = <w,D><D,w>` acting on real-valued polynomials, indexed by the real
/// coordinates `(j, r)` and `(k, s)`.
///
/// The quaternion-valued operator is `Σ conj(w_j) i_r conj(i_s) w_k ∂_{jr} ∂_{ks}`; on a
/// real polynomial the mixed partials commute and the imaginary parts cancel pairwise.
pub fn plane_wave_operator(w: &Vector, field: Field) -> Vec<f64> {
    let m = field.m();
    let n = m * w.dim();
    let e = w.entries();
    let mut op = alloc::vec![0.0; n * n];
    for j in 0..w.dim() {
        for r in 0..m {
            let left = e[j].conj() * Quaternion::unit(r);
            for k in 0..w.dim() {
                for s in 0..m {
                    let right = Quaternion::unit(s).conj() * e[k];
                    op[(j * m + r) * n + k * m + s] = left.re_mul(right);
                }
            }
        }
    }
    op
}

/// `|<w, D>|^2 f`.
pub fn apply_plane_wave(f: &Poly, w: &Vector, field: Field) -> Poly {
    f.second_order(&plane_wave_operator(w, field))
}

/// Largest coefficient difference between `|<w,D>|^2 K_v` and
/// `2t(2t+m-2) |<v,w>|^2 K_v^{(t-1)}`, where `K_v^{(t)} = |<v,·>|^{2t}`.
pub fn plane_wave_lemma_residual(v: &Vector, w: &Vector, field: Field, t: u32) -> Result<f64> {
    if t < 1 {
        return Err(Error::Domain("t must be at least 1"));
    }
    let m = field.m() as f64;
    let lhs = apply_plane_wave(&kernel(v, field, t)?, w, field);
    let c = 2.0 * t as f64 * (2.0 * t as f64 + m - 2.0) * hilbert::abs_ip_sq(v, w)?;
    let rhs = kernel(v, field, t - 1)?.scale(c);
    Ok(lhs.max_abs_diff(&rhs))
}

/// Relative apolar distance from `f` to the span of `samples` random kernels.
///
/// `f` must be homogeneous of degree `2t`. The projection solves the kernel Gram
/// system by pseudo-inverse and measures the explicit residual polynomial.
pub fn kernel_span_residual(
    f: &Poly,
    field: Field,
    d: usize,
    t: u32,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    let m = field.m();
    let ws = random_unit_vectors(field, d, samples, seed);
    let kernels = ws
        .iter()
        .map(|w| kernel(w, field, t))
        .collect::<Result<Vec<_>>>()?;
    let gram = kernel_gram(&ws, t);
    let b = kernels
        .iter()
        .map(|k| apolar(k, f, t, m))
        .collect::<Result<Vec<_>>>()?;
    let coef = eigen::symmetric_eigen(&gram, samples).pseudo_solve(&b, 1e-12);
    let mut residual = f.clone();
    for (k, c) in kernels.iter().zip(&coef) {
        residual.add_scaled(k, -c);
    }
    let norm_f = apolar(f, f, t, m)?;
    let norm_r = apolar(&residual, &residual, t, m)?;
    Ok(math::sqrt(math::max(norm_r, 0.0) / norm_f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn mono(exps: &[u32]) -> Monomial {
        Monomial::from_exponents(exps).unwrap()
    }

    #[test]
    fn coordinates() {
        let v = Vector::new(alloc::vec![
            Quaternion::new(1.0, 2.0, 3.0, 4.0),
            Quaternion::ZERO
        ]);
        assert_eq!(
            coords(&v, Field::H).0,
            alloc::vec![1.0, 2.0, 3.0, 4.0, 0.0, 0.0, 0.0, 0.0]
        );
        assert_eq!(
            coords(&Vector::from_reals(&[1.0, 2.0, 3.0]), Field::R).0,
            alloc::vec![1.0, 2.0, 3.0]
        );
        let c = Vector::new(alloc::vec![
            Quaternion::new(1.0, 1.0, 0.0, 0.0),
            Quaternion::real(2.0)
        ]);
        assert_eq!(coords(&c, Field::C).0, alloc::vec![1.0, 1.0, 2.0, 0.0]);
        for f in Field::ALL {
            let v = Vector::random(f, 3, &mut rng(1));
            assert_eq!(from_coords(coords(&v, f).as_slice(), f), v);
        }
    }

    #[test]
    fn expansion_of_basis_vector() {
        let p = expand_abs_ip_sq(&Vector::basis(2, 0), Field::H);
        assert_eq!(p.len(), 4);
        for i in 0..4 {
            let mut e = [0u32; 8];
            e[i] = 2;
            assert_eq!(p.coeff(mono(&e)), 1.0);
        }
        let ones = expand_abs_ip_sq(&Vector::from_reals(&[1.0, 1.0]), Field::R);
        assert_eq!(ones.coeff(mono(&[2, 0])), 1.0);
        assert_eq!(ones.coeff(mono(&[1, 1])), 2.0);
        assert_eq!(ones.coeff(mono(&[0, 2])), 1.0);
    }

    #[test]
    fn six_basis_terms_match_expansion() {
        // |<v,q>|^2 = |q1|^2|v1|^2 + |q2|^2|v2|^2 + 2 Σ_r Re(q1 conj(q2) i_r) Re(v1 conj(v2) i_r)
        let mut r = rng(9);
        let v = Vector::random(Field::H, 2, &mut r);
        let p = expand_abs_ip_sq(&v, Field::H);
        for _ in 0..20 {
            let q = Vector::random(Field::H, 2, &mut r);
            let (v1, v2, q1, q2) = (v.0[0], v.0[1], q.0[0], q.0[1]);
            let mut expect = q1.norm_sq() * v1.norm_sq() + q2.norm_sq() * v2.norm_sq();
            for u in 0..4 {
                let iu = Quaternion::unit(u);
                expect += 2.0 * (q1 * q2.conj() * iu).re() * (v1 * v2.conj() * iu).re();
            }
            let got = p.eval(coords(&q, Field::H).as_slice());
            assert!((got - expect).abs() < 1e-12 * (1.0 + expect));
        }
    }

    #[test]
    fn expansion_matches_inner_product() {
        for f in Field::ALL {
            let mut r = rng(f.m() as u64);
            let w = Vector::random(f, 2, &mut r);
            let p = expand_abs_ip_sq(&w, f);
            assert_eq!(p.homogeneous_degree(), Some(2));
            for _ in 0..100 {
                let z = Vector::random(f, 2, &mut r);
                let direct = hilbert::abs_ip_sq(&w, &z).unwrap();
                assert!((p.eval(coords(&z, f).as_slice()) - direct).abs() < 1e-12 * (1.0 + direct));
            }
        }
    }

    #[test]
    fn kernel_square_evaluates() {
        let e1 = Vector::basis(2, 0);
        let k = kernel(&e1, Field::H, 2).unwrap();
        let mut r = rng(4);
        for _ in 0..20 {
            let z = Vector::random(Field::H, 2, &mut r);
            let direct = hilbert::abs_ip_sq(&e1, &z).unwrap().powi(2);
            assert!(
                (k.eval(coords(&z, Field::H).as_slice()) - direct).abs() < 1e-12 * (1.0 + direct)
            );
        }
    }

    #[test]
    fn apolar_of_basis_kernels() {
        for f in Field::ALL {
            for t in 1..=4 {
                let k1 = kernel(&Vector::basis(2, 0), f, t).unwrap();
                let k2 = kernel(&Vector::basis(2, 1), f, t).unwrap();
                assert!((apolar(&k1, &k1, t, f.m()).unwrap() - 1.0).abs() < 1e-14);
                assert_eq!(apolar(&k1, &k2, t, f.m()).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn apolar_rejects_wrong_degree() {
        let k = kernel(&Vector::basis(2, 0), Field::H, 2).unwrap();
        let k1 = kernel(&Vector::basis(2, 0), Field::H, 1).unwrap();
        assert!(matches!(
            apolar(&k, &k1, 2, 4),
            Err(Error::DegreeMismatch { .. })
        ));
        let inhomog = k.add(&Poly::constant(8, 1.0));
        assert!(apolar(&inhomog, &k, 2, 4).is_err());
    }

    #[test]
    fn reproducing_on_combinations() {
        let mut r = rng(21);
        let v1 = Vector::random(Field::H, 2, &mut r);
        let v2 = Vector::random(Field::H, 2, &mut r);
        let f = kernel(&v1, Field::H, 2)
            .unwrap()
            .scale(3.0)
            .add(&kernel(&v2, Field::H, 2).unwrap().scale(2.0));
        for _ in 0..10 {
            let w = Vector::random(Field::H, 2, &mut r);
            let (l, rr) = reproduce(&f, &w, 2, Field::H).unwrap();
            assert!((l - rr).abs() <= 1e-9 * rr.abs().max(1e-12));
        }
        let e1 = Vector::basis(2, 0);
        let (l, rr) = reproduce(&kernel(&e1, Field::H, 3).unwrap(), &e1, 3, Field::H).unwrap();
        assert!((l - 1.0).abs() < 1e-14 && (rr - 1.0).abs() < 1e-14);
        let (l, rr) = reproduce(
            &kernel(&e1, Field::H, 3).unwrap(),
            &Vector::basis(2, 1),
            3,
            Field::H,
        )
        .unwrap();
        assert_eq!((l, rr), (0.0, 0.0));
    }

    #[test]
    fn envelope_is_enforced() {
        let w = Vector::basis(4, 0);
        assert!(matches!(
            kernel(&w, Field::H, 1),
            Err(Error::Envelope { .. })
        ));
        assert!(matches!(
            kernel(&Vector::basis(2, 0), Field::R, 6),
            Err(Error::Envelope { .. })
        ));
        assert!(kernel(&Vector::basis(3, 0), Field::H, 1).is_ok());
    }

    #[test]
    fn kernel_integrates_to_c_t() {
        let mut r = rng(5);
        let w = Vector::random_unit(Field::H, 2, &mut r);
        let k = kernel(&w, Field::H, 2).unwrap();
        assert!((sphere_integral(&k) - 0.3).abs() < 1e-14);
        assert!((sphere_integral(&norm_power(8, 3).unwrap()) - 1.0).abs() < 1e-14);
        let odd = Poly::var(8, 0).mul(&Poly::var(8, 1)).unwrap();
        assert_eq!(sphere_integral(&odd), 0.0);
        for f in Field::ALL {
            for t in 1..=3 {
                let w = Vector::random(f, 2, &mut r);
                let k = kernel(&w, f, t).unwrap();
                let expect = moments::c_t(f, 2, t) * w.norm_sq().powi(t as i32);
                assert!((sphere_integral(&k) - expect).abs() < 1e-12 * expect);
            }
        }
    }

    #[test]
    fn rank_dimensions() {
        let r = homtt_dim_by_rank(Field::H, 2, 1, 20, 1);
        assert_eq!((r.rank, r.expected, r.insufficient_samples), (6, 6, false));
        let r = homtt_dim_by_rank(Field::H, 2, 2, 40, 2);
        assert_eq!((r.rank, r.expected), (20, 20));
        let r = homtt_dim_by_rank(Field::R, 2, 2, 20, 3);
        assert_eq!((r.rank, r.expected), (5, 5));
        let r = homtt_dim_by_rank(Field::H, 2, 2, 10, 3);
        assert!(r.insufficient_samples);
        assert_eq!(r.rank, 10);
    }

    #[test]
    fn tight_frame_identity() {
        let e1 = Vector::basis(2, 0);
        for t in 1..4 {
            let (l, r) = tight_frame_expansion_check(t, &e1, &e1).unwrap();
            assert!((l - 1.0).abs() < 1e-15 && (r - 1.0).abs() < 1e-15);
        }
        let mut g = rng(8);
        for (t, tol) in [(1, 1e-12), (2, 1e-10), (3, 1e-10)] {
            for _ in 0..20 {
                let w = Vector::random_unit(Field::H, 2, &mut g);
                let z = Vector::random_unit(Field::H, 2, &mut g);
                let (l, r) = tight_frame_expansion_check(t, &w, &z).unwrap();
                assert!((l - r).abs() < tol, "t={t}: {l} vs {r}");
            }
        }
        assert_eq!(h11_basis_values(&Vector::basis(3, 0)).len(), 3 + 12);
    }

    #[test]
    fn plane_wave_on_norm_square() {
        // |<w,D>|^2 |·|^2 = 2m |w|^2
        let mut g = rng(30);
        for f in Field::ALL {
            let w = Vector::random(f, 2, &mut g);
            let r2 = norm_power(2 * f.m(), 1).unwrap();
            let out = apply_plane_wave(&r2, &w, f);
            assert_eq!(out.homogeneous_degree(), Some(0));
            let expect = 2.0 * f.m() as f64 * w.norm_sq();
            assert!((out.coeff(Monomial::ONE) - expect).abs() < 1e-12 * expect);
        }
    }

    #[test]
    fn plane_wave_lowers_kernel_degree() {
        let mut g = rng(31);
        for f in Field::ALL {
            for t in 1..4 {
                let v = Vector::random(f, 2, &mut g);
                let w = Vector::random(f, 2, &mut g);
                let r = plane_wave_lemma_residual(&v, &w, f, t).unwrap();
                assert!(r < 1e-10, "{f} t={t}: {r}");
            }
        }
        let v = Vector::basis(2, 0);
        assert!(plane_wave_lemma_residual(&v, &v, Field::R, 0).is_err());
    }

    #[test]
    fn zonal_function_lies_in_kernel_span() {
        // |·|^{2(t-1)} |<w,·>|^2 ∈ Hom(t,t)
        let mut g = rng(41);
        let (d, t) = (2, 2);
        for f in Field::ALL {
            let w = Vector::random_unit(f, d, &mut g);
            let n = f.m() * d;
            let zonal = norm_power(n, t - 1)
                .unwrap()
                .mul(&expand_abs_ip_sq(&w, f))
                .unwrap();
            let dim = moments::dim_homtt(f, d, t) as usize;
            let res = kernel_span_residual(&zonal, f, d, t, 2 * dim + 8, 5).unwrap();
            assert!(res < 1e-8, "{f}: residual {res}");
        }
        // a generic quartic is not in Hom(2,2) for H^2
        let x0 = Poly::var(8, 0);
        let x1 = Poly::var(8, 1);
        let generic = x0.pow(3).unwrap().mul(&x1).unwrap();
        let res = kernel_span_residual(&generic, Field::H, 2, 2, 48, 5).unwrap();
        assert!(res > 1e-3);
    }
}
