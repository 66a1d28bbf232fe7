//! Vectors and weighted vector systems in F^d, F = R, C, H.
//!
//! F^d is a right F-module; the inner product is conjugate-linear in the first
//! slot and right-linear in the second: `<v, w> = Σ_j conj(v_j) w_j`.

use alloc::vec::Vec;
use core::fmt;

use rand_core::RngCore;
use rand_distr::{Distribution, StandardNormal};

use crate::math;
use crate::quat::Quaternion;
use crate::{Error, Result};

/// The scalar field of a configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    R,
    C,
    H,
}

impl Field {
    pub const ALL: [Field; 3] = [Field::R, Field::C, Field::H];

    /// Real dimension `m` of the field: 1, 2 or 4.
    pub const fn m(self) -> usize {
        match self {
            Field::R => 1,
            Field::C => 2,
            Field::H => 4,
        }
    }

    pub fn from_m(m: usize) -> Option<Field> {
        match m {
            1 => Some(Field::R),
            2 => Some(Field::C),
            4 => Some(Field::H),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Field::R => "R",
            Field::C => "C",
            Field::H => "H",
        }
    }

    /// True when `q` has no components beyond the first `m`.
    pub fn contains(self, q: Quaternion) -> bool {
        let a = q.to_array();
        a[self.m()..].iter().all(|&c| c == 0.0)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl core::str::FromStr for Field {
    type Err = Error;
    fn from_str(s: &str) -> Result<Field> {
        match s {
            "R" | "r" => Ok(Field::R),
            "C" | "c" => Ok(Field::C),
            "H" | "h" => Ok(Field::H),
            _ => Err(Error::Domain("field must be one of R, C, H")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Vector(pub Vec<Quaternion>);

impl Vector {
    pub fn new(entries: Vec<Quaternion>) -> Self {
        Vector(entries)
    }

    pub fn zeros(d: usize) -> Self {
        Vector(alloc::vec![Quaternion::ZERO; d])
    }

    /// The standard basis vector `e_j` (0-based).
    pub fn basis(d: usize, j: usize) -> Self {
        let mut v = Vector::zeros(d);
        v.0[j] = Quaternion::ONE;
        v
    }

    pub fn from_reals(values: &[f64]) -> Self {
        Vector(values.iter().map(|&x| Quaternion::real(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Quaternion] {
        &self.0
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|q| q.norm_sq()).sum()
    }

    pub fn norm(&self) -> f64 {
        math::sqrt(self.norm_sq())
    }

    /// Right scalar multiplication `v · α`.
    pub fn mul_right(&self, alpha: Quaternion) -> Vector {
        Vector(self.0.iter().map(|&q| q * alpha).collect())
    }

    /// Left scalar multiplication `α v`, used for applying matrices entrywise.
    pub fn mul_left(&self, alpha: Quaternion) -> Vector {
        Vector(self.0.iter().map(|&q| alpha * q).collect())
    }

    pub fn scale(&self, s: f64) -> Vector {
        Vector(self.0.iter().map(|&q| q.scale(s)).collect())
    }

    pub fn add(&self, other: &Vector) -> Result<Vector> {
        check_dims(self, other)?;
        Ok(Vector(
            self.0.iter().zip(&other.0).map(|(&a, &b)| a + b).collect(),
        ))
    }

    pub fn normalized(&self) -> Option<Vector> {
        let n = self.norm();
        (n > 0.0).then(|| self.scale(1.0 / n))
    }

    pub fn conforms_to(&self, field: Field) -> bool {
        self.0.iter().all(|&q| field.contains(q) && q.is_finite())
    }

    /// A random vector with independent standard-normal real coordinates.
    pub fn random<R: RngCore + ?Sized>(field: Field, d: usize, rng: &mut R) -> Vector {
        let m = field.m();
        let mut entries = Vec::with_capacity(d);
        for _ in 0..d {
            let mut a = [0.0; 4];
            for c in a.iter_mut().take(m) {
                *c = StandardNormal.sample(rng);
            }
            entries.push(Quaternion::from_array(a));
        }
        Vector(entries)
    }

    /// A random unit vector, uniformly distributed on the sphere.
    pub fn random_unit<R: RngCore + ?Sized>(field: Field, d: usize, rng: &mut R) -> Vector {
        loop {
            if let Some(v) = Vector::random(field, d, rng).normalized() {
                return v;
            }
        }
    }
}

fn check_dims(v: &Vector, w: &Vector) -> Result<()> {
    if v.dim() != w.dim() {
        return Err(Error::DimensionMismatch {
            expected: v.dim(),
            found: w.dim(),
        });
    }
    Ok(())
}

/// `<v, w> = Σ_j conj(v_j) w_j`.
pub fn inner(v: &Vector, w: &Vector) -> Result<Quaternion> {
    check_dims(v, w)?;
    Ok(inner_unchecked(v, w))
}

pub(crate) fn inner_unchecked(v: &Vector, w: &Vector) -> Quaternion {
    v.0.iter().zip(&w.0).map(|(&a, &b)| a.conj() * b).sum()
}

/// `|<v, w>|^2`.
pub fn abs_ip_sq(v: &Vector, w: &Vector) -> Result<f64> {
    Ok(inner(v, w)?.norm_sq())
}

/// A finite weighted sequence of vectors in F^d.
#[derive(Clone, Debug, PartialEq)]
pub struct Configuration {
    field: Field,
    dim: usize,
    vectors: Vec<Vector>,
    weights: Option<Vec<f64>>,
}

impl Configuration {
    pub fn new(
        field: Field,
        dim: usize,
        vectors: Vec<Vector>,
        weights: Option<Vec<f64>>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidConfiguration("dimension must be positive"));
        }
        if vectors.is_empty() {
            return Err(Error::InvalidConfiguration("configuration has no vectors"));
        }
        for (j, v) in vectors.iter().enumerate() {
            if v.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.dim(),
                });
            }
            if let Some(entry) =
                v.0.iter()
                    .position(|&q| !field.contains(q) || !q.is_finite())
            {
                return Err(Error::FieldViolation { vector: j, entry });
            }
        }
        if vectors.iter().all(|v| v.norm_sq() == 0.0) {
            return Err(Error::InvalidConfiguration("all vectors are zero"));
        }
        if let Some(w) = &weights {
            if w.len() != vectors.len() {
                return Err(Error::InvalidConfiguration(
                    "weights and vectors differ in length",
                ));
            }
            if w.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
                return Err(Error::InvalidConfiguration("weights must be positive"));
            }
        }
        Ok(Configuration {
            field,
            dim,
            vectors,
            weights,
        })
    }

    pub fn unweighted(field: Field, dim: usize, vectors: Vec<Vector>) -> Result<Self> {
        Configuration::new(field, dim, vectors, None)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vector] {
        &self.vectors
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    /// Weight of vector `j`; 1 when the configuration is unweighted.
    pub fn weight(&self, j: usize) -> f64 {
        self.weights.as_ref().map_or(1.0, |w| w[j])
    }

    /// True when every vector has norm 1 within `tol`.
    pub fn is_unit(&self, tol: f64) -> bool {
        self.vectors
            .iter()
            .all(|v| math::abs(v.norm() - 1.0) <= tol)
    }

    pub fn check_unit(&self, tol: f64) -> Result<()> {
        for (j, v) in self.vectors.iter().enumerate() {
            let n = v.norm();
            if math::abs(n - 1.0) > tol {
                return Err(Error::NotUnit { vector: j, norm: n });
            }
        }
        Ok(())
    }

    /// The equivalent unit-vector form for strength `t`: zero vectors are dropped, each
    /// `v_j` becomes `v_j / |v_j|` and carries weight `w_j |v_j|^{2t} / Σ_l w_l |v_l|^{2t}`.
    ///
    /// Returns the unit vectors, the normalized weights (summing to 1) and the scale
    /// `Σ_l w_l |v_l|^{2t}`.
    pub fn normalized_for(&self, t: u32) -> (Vec<Vector>, Vec<f64>, f64) {
        let mut units = Vec::with_capacity(self.len());
        let mut raw = Vec::with_capacity(self.len());
        for (j, v) in self.vectors.iter().enumerate() {
            let ns = v.norm_sq();
            if ns == 0.0 {
                continue;
            }
            units.push(v.scale(1.0 / math::sqrt(ns)));
            raw.push(self.weight(j) * math::powi(ns, t));
        }
        let total: f64 = raw.iter().sum();
        let weights = raw.into_iter().map(|w| w / total).collect();
        (units, weights, total)
    }
}

/// Clustered off-diagonal angles `|<v_j,v_k>|^2 / (|v_j|^2 |v_k|^2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AngleSpectrum {
    /// `(center, multiplicity)` sorted by increasing center.
    pub clusters: Vec<(f64, usize)>,
    pub tolerance: f64,
}

impl AngleSpectrum {
    pub fn total(&self) -> usize {
        self.clusters.iter().map(|c| c.1).sum()
    }

    /// Distinct angle values.
    pub fn angles(&self) -> Vec<f64> {
        self.clusters.iter().map(|c| c.0).collect()
    }
}

pub const DEFAULT_ANGLE_TOL: f64 = 1e-6;

/// Single-linkage clustering of all ordered off-diagonal angles within `tol`.
///
/// Pairs involving a zero vector are skipped.
pub fn angle_spectrum(cfg: &Configuration, tol: f64) -> AngleSpectrum {
    let vs = cfg.vectors();
    let norms: Vec<f64> = vs.iter().map(Vector::norm_sq).collect();
    let mut values = Vec::with_capacity(vs.len() * vs.len().saturating_sub(1));
    for j in 0..vs.len() {
        for k in 0..vs.len() {
            if j == k || norms[j] == 0.0 || norms[k] == 0.0 {
                continue;
            }
            let a = inner_unchecked(&vs[j], &vs[k]).norm_sq() / (norms[j] * norms[k]);
            values.push(a);
        }
    }
    values.sort_by(f64::total_cmp);

    let mut clusters = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || values[i] - values[i - 1] > tol {
            let members = &values[start..i];
            if !members.is_empty() {
                let center = members.iter().sum::<f64>() / members.len() as f64;
                clusters.push((center, members.len()));
            }
            start = i;
        }
    }
    AngleSpectrum {
        clusters,
        tolerance: tol,
    }
}
