//! Riemannian gradient descent on the frame potential over products of unit spheres.

use alloc::vec::Vec;

use rand_chacha::ChaCha20Rng;
use rand_core::SeedableRng;

use crate::designs::{self, DesignReport};
use crate::hilbert::{self, Configuration, Field, Vector};
use crate::math;
use crate::polyspace::{self, RealCoords};
use crate::quat::Quaternion;
use crate::{Error, Result};

const ARMIJO_C: f64 = 1e-4;
const SHRINK: f64 = 0.5;
const MIN_STEP: f64 = 1e-30;

#[derive(Clone, Debug, PartialEq)]
pub struct SearchOptions {
    pub field: Field,
    pub dim: usize,
    pub n: usize,
    pub t: u32,
    pub restarts: usize,
    pub max_iters: usize,
    pub seed: u64,
    /// Stop when the Riemannian gradient norm drops below this.
    pub grad_tol: f64,
    /// Stop when the relative gap to the bound drops below this.
    pub target_gap: f64,
}

impl SearchOptions {
    pub fn new(field: Field, dim: usize, n: usize, t: u32) -> Self {
        SearchOptions {
            field,
            dim,
            n,
            t,
            restarts: 16,
            max_iters: 20_000,
            seed: 0,
            grad_tol: 1e-11,
            target_gap: 1e-13,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub best: Configuration,
    pub report: DesignReport,
    /// `(iteration, potential)` for the winning restart.
    pub trajectory: Vec<(usize, f64)>,
    pub restart_index: usize,
    pub iterations: usize,
    pub converged: bool,
}

/// Euclidean gradient of the weighted potential, one block of real coordinates per vector.
pub fn potential_gradient(cfg: &Configuration, t: u32) -> Vec<RealCoords> {
    let w: Vec<f64> = (0..cfg.len()).map(|j| cfg.weight(j)).collect();
    gradient(cfg.vectors(), &w, t)
        .iter()
        .map(|g| polyspace::coords(g, cfg.field()))
        .collect()
}

// d/dv_u Σ w_j w_k |<v_j,v_k>|^{2t} = Σ_k 4t w_u w_k |<v_u,v_k>|^{2t-2} v_k <v_k,v_u>,
// the k = u term included. Entries are quaternions; components outside F cancel.
fn gradient(vs: &[Vector], w: &[f64], t: u32) -> Vec<Vector> {
    let n = vs.len();
    let d = vs[0].dim();
    let mut grads: Vec<Vec<Quaternion>> = alloc::vec![alloc::vec![Quaternion::ZERO; d]; n];
    for u in 0..n {
        for k in u..n {
            let ip = hilbert::inner_unchecked(&vs[k], &vs[u]);
            let c = 4.0 * t as f64 * w[u] * w[k] * math::powi(ip.norm_sq(), t - 1);
            for a in 0..d {
                grads[u][a] += vs[k].entries()[a] * ip * c;
            }
            if k != u {
                let ipc = ip.conj();
                for a in 0..d {
                    grads[k][a] += vs[u].entries()[a] * ipc * c;
                }
            }
        }
    }
    grads.into_iter().map(Vector::new).collect()
}

fn unweighted_potential(vs: &[Vector], t: u32) -> f64 {
    let mut off = 0.0;
    let mut diag = 0.0;
    for j in 0..vs.len() {
        diag += math::powi(vs[j].norm_sq(), 2 * t);
        for k in (j + 1)..vs.len() {
            off += math::powi(hilbert::inner_unchecked(&vs[j], &vs[k]).norm_sq(), t);
        }
    }
    diag + 2.0 * off
}

fn dot(a: &Vector, b: &Vector) -> f64 {
    a.entries()
        .iter()
        .zip(b.entries())
        .map(|(x, y)| x.conj().re_mul(*y))
        .sum()
}

struct Run {
    vectors: Vec<Vector>,
    potential: f64,
    trajectory: Vec<(usize, f64)>,
    iterations: usize,
    converged: bool,
}

fn descend(opts: &SearchOptions, mut x: Vec<Vector>, bound: f64) -> Run {
    let t = opts.t;
    let ones = alloc::vec![1.0; x.len()];
    let step0 = 1.0 / (t as f64 * opts.n as f64);
    let mut p = unweighted_potential(&x, t);
    let mut trajectory = alloc::vec![(0, p)];
    let mut converged = false;
    let mut iterations = 0;
    while iterations < opts.max_iters {
        if (p - bound) / bound <= opts.target_gap {
            converged = true;
            break;
        }
        let g = gradient(&x, &ones, t);
        let tangent: Vec<Vector> = x
            .iter()
            .zip(&g)
            .map(|(xi, gi)| {
                let s = dot(gi, xi);
                gi.add(&xi.scale(-s)).expect("same dimension")
            })
            .collect();
        let gnorm_sq: f64 = tangent.iter().map(Vector::norm_sq).sum();
        if math::sqrt(gnorm_sq) < opts.grad_tol {
            converged = true;
            break;
        }
        let mut alpha = step0;
        let mut accepted = None;
        while alpha > MIN_STEP {
            let cand: Vec<Vector> = x
                .iter()
                .zip(&tangent)
                .map(|(xi, gi)| {
                    xi.add(&gi.scale(-alpha))
                        .expect("same dimension")
                        .normalized()
                        .unwrap_or_else(|| xi.clone())
                })
                .collect();
            let pc = unweighted_potential(&cand, t);
            if pc <= p - ARMIJO_C * alpha * gnorm_sq {
                accepted = Some((cand, pc));
                break;
            }
            alpha *= SHRINK;
        }
        iterations += 1;
        match accepted {
            Some((cand, pc)) => {
                x = cand;
                p = pc;
                trajectory.push((iterations, p));
            }
            None => {
                // no decrease is representable in floating point: a stationary point
                converged = true;
                break;
            }
        }
    }
    Run {
        vectors: x,
        potential: p,
        trajectory,
        iterations,
        converged,
    }
}

/// Best of `opts.restarts` descents from random unit configurations. Restart `i` draws
/// from ChaCha20 stream `i` of `opts.seed`, so results do not depend on scheduling.
/// Ties in the final potential go to the lower restart index.
pub fn minimize(opts: &SearchOptions) -> Result<SearchResult> {
    if opts.t < 1 {
        return Err(Error::Domain("t must be at least 1"));
    }
    if opts.n < 1 || opts.dim < 1 {
        return Err(Error::InvalidConfiguration("n and dim must be positive"));
    }
    if opts.restarts < 1 {
        return Err(Error::Domain("at least one restart is required"));
    }
    let c_t = crate::moments::c_t(opts.field, opts.dim, opts.t);
    let bound = c_t * (opts.n * opts.n) as f64;

    let mut best: Option<(usize, Run)> = None;
    for restart in 0..opts.restarts {
        let mut rng = ChaCha20Rng::seed_from_u64(opts.seed);
        rng.set_stream(restart as u64);
        let x0: Vec<Vector> = (0..opts.n)
            .map(|_| Vector::random_unit(opts.field, opts.dim, &mut rng))
            .collect();
        let run = descend(opts, x0, bound);
        let better = match &best {
            None => true,
            Some((_, b)) => run.potential < b.potential,
        };
        if better {
            best = Some((restart, run));
        }
    }
    let (restart_index, run) = best.expect("at least one restart");
    let cfg = Configuration::unweighted(opts.field, opts.dim, run.vectors)?;
    let report = designs::verify(&cfg, opts.t, designs::SEARCH_TOL)?;
    Ok(SearchResult {
        best: cfg,
        report,
        trajectory: run.trajectory,
        restart_index,
        iterations: run.iterations,
        converged: run.converged,
    })
}

/// First continued-fraction convergent `p/q` of `x` with `|x - p/q| < tol` and `q ≤ max_den`.
pub fn rationalize(x: f64, max_den: u64, tol: f64) -> Option<(i64, u64)> {
    if !x.is_finite() || max_den == 0 {
        return None;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (1i64, 0u64, math::floor(x) as i64, 1u64);
    let mut rem = x - math::floor(x);
    loop {
        if q1 > max_den {
            return None;
        }
        if math::abs(x - p1 as f64 / q1 as f64) < tol {
            return Some((p1, q1));
        }
        if rem < 1e-15 {
            return None;
        }
        let inv = 1.0 / rem;
        let a = math::floor(inv);
        rem = inv - a;
        let a = a as i64;
        let (p2, q2) = (
            a.checked_mul(p1)?.checked_add(p0)?,
            (a as u64).checked_mul(q1)?.checked_add(q0)?,
        );
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
}
