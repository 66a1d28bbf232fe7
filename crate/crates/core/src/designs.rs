//! Verification of spherical (t,t)-designs and the closed-form catalog.
//!
//! Three tests decide whether a configuration is a design:
//!
//! - **variational**: the frame potential meets `c_t (Σ_l w_l |v_l|^{2t})^2`, checked at
//!   every degree `r = 1..=t` on the renormalized vectors `|v_j|^{t/r-1} v_j`;
//! - **Bessel**: `Σ_j w_j |<v_j,x>|^{2t} / Σ_l w_l |v_l|^{2t} = c_t |x|^{2t}` at fixed probes;
//! - **Hoggar**: `Σ_{j,k} ω_j ω_k Q_ℓ(|<u_j,u_k>|^2) = 0` for `ℓ = 1..=t`.
//!
//! With `F = Σ ω_j K_{u_j} - c_t |·|^{2t}` in `Hom(t,t)`, the normalized gap is
//! `|F|^2`, a Bessel residual is `|F(x)| ≤ |F|`, and the gap splits as
//! `Σ_ℓ κ_ℓ r_ℓ` with nonnegative terms. The thresholds follow from these relations:
//! relative gap `< tol`, Bessel residual `≤ sqrt(tol · c_t)`, and each `|κ_ℓ r_ℓ| ≤ tol · c_t`.

use alloc::vec::Vec;

use crate::hilbert::{self, angle_spectrum, AngleSpectrum, Configuration, Field, Vector};
use crate::math;
use crate::moments::{self, sic_bound};
use crate::polyspace::{self, random_unit_vectors};
use crate::projective::{self, monomial_expansion};
use crate::quat::Quaternion;
use crate::{Error, Result};

/// Relative-gap tolerance for exact (catalog) inputs.
pub const CATALOG_TOL: f64 = 1e-9;
/// Relative-gap tolerance for numerically searched configurations.
pub const SEARCH_TOL: f64 = 1e-6;

/// Seed of the fixed Bessel probe set.
pub const PROBE_SEED: u64 = 0x5eed_0fbe_55e1;
/// Number of pseudo-random Bessel probes (the standard basis is added on top).
pub const RANDOM_PROBES: usize = 32;
/// Number of probes whose kernels are integrated symbolically for the cubature check.
pub const CUBATURE_PROBES: usize = 8;

/// `Σ_{j,k} w_j w_k |<v_j,v_k>|^{2t}` (unit weights when the configuration has none).
pub fn potential(cfg: &Configuration, t: u32) -> f64 {
    let vs = cfg.vectors();
    let n = vs.len();
    let mut diag = 0.0;
    let mut off = 0.0;
    for j in 0..n {
        let wj = cfg.weight(j);
        diag += wj * wj * math::powi(vs[j].norm_sq(), 2 * t);
        for k in (j + 1)..n {
            let a = hilbert::inner_unchecked(&vs[j], &vs[k]).norm_sq();
            off += wj * cfg.weight(k) * math::powi(a, t);
        }
    }
    diag + 2.0 * off
}

/// `c_t(F^d) (Σ_l w_l |v_l|^{2t})^2`.
pub fn bound(cfg: &Configuration, t: u32) -> f64 {
    let s = weighted_power_sum(cfg, t);
    moments::c_t(cfg.field(), cfg.dim(), t) * s * s
}

fn weighted_power_sum(cfg: &Configuration, t: u32) -> f64 {
    cfg.vectors()
        .iter()
        .enumerate()
        .map(|(j, v)| cfg.weight(j) * math::powi(v.norm_sq(), t))
        .sum()
}

/// Variational comparison at one degree.
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeCheck {
    pub r: u32,
    pub potential: f64,
    pub bound: f64,
    pub gap: f64,
    pub relative_gap: f64,
}

/// How the input was brought to unit vectors with weights summing to one.
#[derive(Clone, Debug, PartialEq)]
pub struct Normalization {
    /// `Σ_l w_l |v_l|^{2t}`; normalized weights are `w_j |v_j|^{2t}` divided by this.
    pub scale: f64,
    pub unit_input: bool,
    pub weighted_input: bool,
    pub zero_vectors_dropped: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DesignReport {
    pub field: Field,
    pub dim: usize,
    pub n: usize,
    pub t: u32,
    pub tolerance: f64,
    pub c_t: f64,
    pub potential: f64,
    pub bound: f64,
    pub gap: f64,
    pub relative_gap: f64,
    /// Potential of the normalized form; compare with `c_t`.
    pub normalized_potential: f64,
    pub normalization: Normalization,
    pub per_r: Vec<DegreeCheck>,
    pub spectrum: AngleSpectrum,
    pub bessel_max_residual: f64,
    pub bessel_threshold: f64,
    /// Largest `|∫ K_x dσ - cubature sum|` over the symbolic probes; `None` when the
    /// kernels fall outside the polynomial envelope.
    pub cubature_max_residual: Option<f64>,
    pub hoggar_residuals: Vec<f64>,
    /// `κ_ℓ r_ℓ`, the share of the normalized gap carried by each Jacobi degree.
    pub hoggar_weighted: Vec<f64>,
    pub variational_pass: bool,
    pub bessel_pass: bool,
    pub hoggar_pass: bool,
    /// The variational verdict.
    pub is_design: bool,
}

impl DesignReport {
    /// True when the three tests agree.
    pub fn verdicts_agree(&self) -> bool {
        self.variational_pass == self.bessel_pass && self.bessel_pass == self.hoggar_pass
    }
}

/// The fixed Bessel probes for F^d: 32 seeded random unit vectors, then `e_1..e_d`.
pub fn bessel_probes(field: Field, d: usize) -> Vec<Vector> {
    let mut probes = random_unit_vectors(field, d, RANDOM_PROBES, PROBE_SEED);
    probes.extend((0..d).map(|j| Vector::basis(d, j)));
    probes
}

/// Full verification of `cfg` as a spherical (t,t)-design at relative tolerance `tol`.
pub fn verify(cfg: &Configuration, t: u32, tol: f64) -> Result<DesignReport> {
    if t < 1 {
        return Err(Error::Domain("t must be at least 1"));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain("tolerance must be positive"));
    }
    let (field, d) = (cfg.field(), cfg.dim());
    let c_t = moments::c_t(field, d, t);

    let per_r: Vec<DegreeCheck> = (1..=t).map(|r| degree_check(cfg, t, r)).collect();
    let top = per_r.last().expect("t >= 1").clone();

    let (units, omega, scale) = cfg.normalized_for(t);
    let normalization = Normalization {
        scale,
        unit_input: cfg.is_unit(projective::UNIT_TOL),
        weighted_input: cfg.weights().is_some(),
        zero_vectors_dropped: cfg.len() - units.len(),
    };
    let normalized_potential = top.potential / (scale * scale);

    let probes = bessel_probes(field, d);
    let bessel_max_residual = probes
        .iter()
        .map(|x| {
            let sum: f64 = units
                .iter()
                .zip(&omega)
                .map(|(u, w)| w * math::powi(hilbert::inner_unchecked(u, x).norm_sq(), t))
                .sum();
            math::abs(sum - c_t * math::powi(x.norm_sq(), t))
        })
        .fold(0.0, math::max);
    let bessel_threshold = math::sqrt(tol * c_t);

    let cubature_max_residual = cubature_residual(cfg, t, scale, &probes[..CUBATURE_PROBES]);

    let hoggar_residuals = projective::hoggar_residuals(&units, &omega, field, d, t);
    let kappa = monomial_expansion(t, field, d);
    let hoggar_weighted: Vec<f64> = hoggar_residuals
        .iter()
        .zip(&kappa[1..])
        .map(|(r, k)| r * k)
        .collect();

    let variational_pass = per_r.iter().all(|c| c.relative_gap < tol);
    let bessel_pass = bessel_max_residual <= bessel_threshold;
    let hoggar_pass = hoggar_weighted.iter().all(|x| math::abs(*x) <= tol * c_t);

    Ok(DesignReport {
        field,
        dim: d,
        n: cfg.len(),
        t,
        tolerance: tol,
        c_t,
        potential: top.potential,
        bound: top.bound,
        gap: top.gap,
        relative_gap: top.relative_gap,
        normalized_potential,
        normalization,
        per_r,
        spectrum: angle_spectrum(cfg, hilbert::DEFAULT_ANGLE_TOL),
        bessel_max_residual,
        bessel_threshold,
        cubature_max_residual,
        hoggar_residuals,
        hoggar_weighted,
        variational_pass,
        bessel_pass,
        hoggar_pass,
        is_design: variational_pass,
    })
}

/// Degree-`r` comparison for the vectors `|v_j|^{t/r-1} v_j`:
/// `Σ w_j w_k |<v_j,v_k>|^{2r} |v_j|^{2t-2r} |v_k|^{2t-2r}` against `c_r (Σ w_l |v_l|^{2t})^2`.
pub fn degree_check(cfg: &Configuration, t: u32, r: u32) -> DegreeCheck {
    assert!(r >= 1 && r <= t);
    let vs = cfg.vectors();
    let norms: Vec<f64> = vs.iter().map(Vector::norm_sq).collect();
    let n = vs.len();
    let mut diag = 0.0;
    let mut off = 0.0;
    for j in 0..n {
        let wj = cfg.weight(j);
        diag += wj * wj * math::powi(norms[j], 2 * t);
        for k in (j + 1)..n {
            let a = hilbert::inner_unchecked(&vs[j], &vs[k]).norm_sq();
            off += wj * cfg.weight(k) * math::powi(a, r) * math::powi(norms[j] * norms[k], t - r);
        }
    }
    let potential = diag + 2.0 * off;
    let s = weighted_power_sum(cfg, t);
    let bound = moments::c_t(cfg.field(), cfg.dim(), r) * s * s;
    let gap = potential - bound;
    DegreeCheck {
        r,
        potential,
        bound,
        gap,
        relative_gap: gap / bound,
    }
}

// Symbolic cubature: ∫ K_x dσ from monomial moments vs (1/scale) Σ_j w_j K_x(v_j).
fn cubature_residual(cfg: &Configuration, t: u32, scale: f64, probes: &[Vector]) -> Option<f64> {
    let field = cfg.field();
    let coords: Vec<_> = cfg
        .vectors()
        .iter()
        .map(|v| polyspace::coords(v, field))
        .collect();
    let mut worst = 0.0f64;
    for x in probes {
        let k = polyspace::kernel(x, field, t).ok()?;
        let integral = polyspace::sphere_integral(&k);
        let sum: f64 = coords
            .iter()
            .enumerate()
            .map(|(j, c)| cfg.weight(j) * k.eval(c.as_slice()))
            .sum::<f64>()
            / scale;
        worst = math::max(worst, math::abs(integral - sum));
    }
    Some(worst)
}

/// `{e_1, e_2} ∪ {(1, ±a)/√2 : a a unit of F}`: `2m + 2` unit vectors in F^2.
pub fn mub_family(field: Field, d: usize) -> Result<Configuration> {
    if d != 2 {
        return Err(Error::Domain("the MUB family is defined for d = 2 only"));
    }
    let s = core::f64::consts::FRAC_1_SQRT_2;
    let mut vs = alloc::vec![Vector::basis(2, 0), Vector::basis(2, 1)];
    for r in 0..field.m() {
        let a = Quaternion::unit(r);
        vs.push(Vector::new(alloc::vec![Quaternion::real(s), a.scale(s)]));
        vs.push(Vector::new(alloc::vec![Quaternion::real(s), a.scale(-s)]));
    }
    Configuration::unweighted(field, 2, vs)
}

/// The standard basis of F^d.
pub fn onb(field: Field, d: usize) -> Result<Configuration> {
    Configuration::unweighted(field, d, (0..d).map(|j| Vector::basis(d, j)).collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquiangularCheck {
    pub is_equiangular: bool,
    /// Common angle when equiangular (`None` for a single vector).
    pub angle: Option<f64>,
    /// Equiangular with the maximal line count and the matching angle `m / (md + 2)`.
    pub meets_sic_bound: bool,
}

/// Whether all off-diagonal angles agree within `tol`, compared with the SIC bound.
pub fn equiangular_check(cfg: &Configuration, tol: f64) -> EquiangularCheck {
    let vs = cfg.vectors();
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for j in 0..vs.len() {
        for k in (j + 1)..vs.len() {
            let a = hilbert::inner_unchecked(&vs[j], &vs[k]).norm_sq()
                / (vs[j].norm_sq() * vs[k].norm_sq());
            lo = lo.min(a);
            hi = hi.max(a);
        }
    }
    if vs.len() < 2 {
        return EquiangularCheck {
            is_equiangular: true,
            angle: None,
            meets_sic_bound: false,
        };
    }
    let is_equiangular = hi - lo <= tol;
    if !is_equiangular {
        return EquiangularCheck {
            is_equiangular,
            angle: None,
            meets_sic_bound: false,
        };
    }
    let angle = 0.5 * (lo + hi);
    let sic = sic_bound(cfg.field(), cfg.dim());
    EquiangularCheck {
        is_equiangular,
        angle: Some(angle),
        meets_sic_bound: vs.len() as u64 == sic.max_lines && math::abs(angle - sic.angle) <= tol,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn onb_potentials() {
        for d in 1..5 {
            let cfg = onb(Field::H, d).unwrap();
            assert_eq!(potential(&cfg, 1), d as f64);
            assert!((bound(&cfg, 1) - d as f64).abs() < 1e-12);
        }
        let cfg = onb(Field::H, 2).unwrap();
        assert_eq!(potential(&cfg, 2), 2.0);
        assert!((bound(&cfg, 2) - 1.2).abs() < 1e-14);
        let rep = verify(&cfg, 2, CATALOG_TOL).unwrap();
        assert!(!rep.is_design && rep.gap > 0.0);
        let r1 = onb(Field::R, 1).unwrap();
        for t in 1..6 {
            assert!(verify(&r1, t, CATALOG_TOL).unwrap().is_design);
        }
    }

    #[test]
    fn mub_family_sizes_and_spectrum() {
        for (f, n) in [(Field::R, 4), (Field::C, 6), (Field::H, 10)] {
            let cfg = mub_family(f, 2).unwrap();
            assert_eq!(cfg.len(), n);
            assert!(cfg.is_unit(1e-15));
        }
        let s = angle_spectrum(&mub_family(Field::H, 2).unwrap(), 1e-9);
        assert_eq!(s.clusters.len(), 2);
        assert_eq!((s.clusters[0].1, s.clusters[1].1), (10, 80));
        assert!(s.clusters[0].0.abs() < 1e-15 && (s.clusters[1].0 - 0.5).abs() < 1e-15);
        assert!(mub_family(Field::H, 3).is_err());
    }

    #[test]
    fn mub_potential_matches_count() {
        let cfg = mub_family(Field::H, 2).unwrap();
        // 10 + 80 (1/2)^3 = 20 = c_3(H^2) 100
        assert!((potential(&cfg, 3) - 20.0).abs() < 1e-12);
        assert!((bound(&cfg, 3) - 20.0).abs() < 1e-12);
        assert!((potential(&cfg, 4) - 15.0).abs() < 1e-12);
        assert!((bound(&cfg, 4) - 100.0 / 7.0).abs() < 1e-12);
    }

    #[test]
    fn equiangular_examples() {
        let e = equiangular_check(&mub_family(Field::H, 2).unwrap(), 1e-9);
        assert!(!e.is_equiangular && e.angle.is_none() && !e.meets_sic_bound);
        let e = equiangular_check(&onb(Field::H, 3).unwrap(), 1e-9);
        assert_eq!(
            e,
            EquiangularCheck {
                is_equiangular: true,
                angle: Some(0.0),
                meets_sic_bound: false
            }
        );
        let e = equiangular_check(&onb(Field::R, 1).unwrap(), 1e-9);
        assert!(e.is_equiangular && e.angle.is_none());
        // three lines at 60 degrees: cos^2 = 1/4
        let (c, s) = (
            libm::cos(core::f64::consts::PI / 3.0),
            libm::sin(core::f64::consts::PI / 3.0),
        );
        let mercedes = Configuration::unweighted(
            Field::R,
            2,
            alloc::vec![
                Vector::from_reals(&[1.0, 0.0]),
                Vector::from_reals(&[c, s]),
                Vector::from_reals(&[c, -s]),
            ],
        )
        .unwrap();
        let e = equiangular_check(&mercedes, 1e-12);
        assert!(e.is_equiangular);
        assert!((e.angle.unwrap() - 0.25).abs() < 1e-15);
        // the R^2 bound is (3, 1/4)
        assert!(e.meets_sic_bound);
    }

    #[test]
    fn weighted_and_scaled_inputs_are_equivalent() {
        let base = mub_family(Field::C, 2).unwrap();
        let scaled: Vec<Vector> = base
            .vectors()
            .iter()
            .enumerate()
            .map(|(j, v)| v.scale(1.0 + 0.3 * j as f64))
            .collect();
        // w_j |v_j|^{2t} constant recovers the unweighted unit design
        let t = 3;
        let weights: Vec<f64> = scaled
            .iter()
            .map(|v| 1.0 / v.norm_sq().powi(t as i32))
            .collect();
        let cfg = Configuration::new(Field::C, 2, scaled, Some(weights)).unwrap();
        let rep = verify(&cfg, t, CATALOG_TOL).unwrap();
        assert!(rep.is_design && rep.bessel_pass && rep.hoggar_pass);
        assert!(rep.normalization.weighted_input && !rep.normalization.unit_input);
        assert!((rep.normalized_potential - rep.c_t).abs() < 1e-12);
    }

    #[test]
    fn zero_vectors_are_ignored() {
        let mut vs = mub_family(Field::R, 2).unwrap().vectors().to_vec();
        vs.push(Vector::zeros(2));
        let cfg = Configuration::unweighted(Field::R, 2, vs).unwrap();
        let rep = verify(&cfg, 3, CATALOG_TOL).unwrap();
        assert!(rep.is_design);
        assert_eq!(rep.normalization.zero_vectors_dropped, 1);
    }

    #[test]
    fn verify_rejects_t_zero() {
        let cfg = onb(Field::H, 2).unwrap();
        assert!(verify(&cfg, 0, 1e-9).is_err());
        assert!(verify(&cfg, 1, 0.0).is_err());
    }

    #[test]
    fn gap_splits_over_jacobi_degrees() {
        let mut rng = <rand_chacha::ChaCha8Rng as rand_core::SeedableRng>::seed_from_u64(77);
        for f in Field::ALL {
            let vs: Vec<Vector> = (0..5)
                .map(|_| Vector::random_unit(f, 3, &mut rng))
                .collect();
            let cfg = Configuration::unweighted(f, 3, vs).unwrap();
            let rep = verify(&cfg, 3, CATALOG_TOL).unwrap();
            let split: f64 = rep.hoggar_weighted.iter().sum();
            let gap = rep.normalized_potential - rep.c_t;
            assert!((split - gap).abs() < 1e-12, "{f}: {split} vs {gap}");
            assert!(rep.hoggar_weighted.iter().all(|&x| x >= -1e-14));
        }
    }
}
