//! Constrained Rayleigh minimization shared by the 1D and 2D discretizations.
//!
//! Minimizes `uᵀAu` over `Σ m_i |u_i|^q = 1` for an SPD stiffness `A` and a
//! positive diagonal mass `m`. Each step solves `A w = m ⊙ u^{q−1}` (the
//! inverse-iteration direction, i.e. the gradient preconditioned by `A⁻¹`)
//! and then minimizes the nonlinear quotient exactly over
//! `span{u, w, u − u_prev}`. At `q = 2` this is single-vector LOBPCG with an
//! exact preconditioner; for `q ≠ 2` the small subspace problem is solved by a
//! damped Newton iteration on `ln E − (2/q) ln N`.
//!
//! The current iterate always lies in the search space, so the quotient never
//! increases.

use crate::error::{Error, Result};

/// Discrete energy `uᵀAu` with a diagonal mass for the `L^q` constraint.
pub(crate) trait EnergyOperator {
    fn len(&self) -> usize;
    fn mass(&self) -> &[f64];
    /// `out = A u`
    fn apply(&self, u: &[f64], out: &mut [f64]);
    /// Solves `A x = rhs`, using the incoming `x` as the initial guess.
    /// Returns the number of inner iterations.
    fn solve(&self, rhs: &[f64], x: &mut [f64]) -> Result<usize>;
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct IterationOptions {
    /// Stop once the relative change of the quotient stays below this for
    /// `patience` consecutive steps.
    pub tol: f64,
    pub patience: usize,
    pub max_iter: usize,
}

impl Default for IterationOptions {
    fn default() -> Self {
        Self {
            tol: 1e-11,
            patience: 2,
            max_iter: 5000,
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Minimizer {
    /// Nonnegative, `Σ m u^q = 1`.
    pub u: Vec<f64>,
    pub lambda: f64,
    pub iterations: usize,
    pub inner_iterations: usize,
    /// Relative change of the quotient at the last step.
    pub last_change: f64,
    /// `‖A u − λ m ⊙ u^{q−1}‖ / ‖A u‖`
    pub equation_residual: f64,
}

pub(crate) fn lq_norm(u: &[f64], mass: &[f64], q: f64) -> f64 {
    power_sum(u, mass, q).powf(1.0 / q)
}

fn power_sum(u: &[f64], mass: &[f64], q: f64) -> f64 {
    if q == 1.0 {
        u.iter().zip(mass).map(|(x, m)| m * x.abs()).sum()
    } else if q == 2.0 {
        u.iter().zip(mass).map(|(x, m)| m * x * x).sum()
    } else {
        u.iter().zip(mass).map(|(x, m)| m * x.abs().powf(q)).sum()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(u: &mut [f64], mass: &[f64], q: f64) -> f64 {
    let n = lq_norm(u, mass, q);
    for x in u.iter_mut() {
        *x /= n;
    }
    n
}

/// `m ⊙ |u|^{q−2} u`; for `q = 1` this is `m` on the positive iterate.
fn constraint_gradient(u: &[f64], mass: &[f64], q: f64, out: &mut [f64]) {
    for ((o, &x), &m) in out.iter_mut().zip(u).zip(mass) {
        *o = if q == 1.0 {
            m
        } else if q == 2.0 {
            m * x
        } else {
            m * x.abs().powf(q - 1.0)
        };
    }
}

/// Relative residual of the discrete Lane–Emden system `A u = λ m ⊙ u^{q−1}`.
pub(crate) fn equation_residual<O: EnergyOperator>(op: &O, u: &[f64], lambda: f64, q: f64) -> f64 {
    let n = op.len();
    let mut au = vec![0.0; n];
    op.apply(u, &mut au);
    let mut g = vec![0.0; n];
    constraint_gradient(u, op.mass(), q, &mut g);
    let num: f64 = au
        .iter()
        .zip(&g)
        .map(|(a, gi)| (a - lambda * gi).powi(2))
        .sum::<f64>()
        .sqrt();
    let den = dot(&au, &au).sqrt();
    num / den
}

/// Minimizes the discrete quotient starting from a positive `init`.
pub(crate) fn minimize<O: EnergyOperator>(
    op: &O,
    q: f64,
    init: Vec<f64>,
    opts: IterationOptions,
) -> Result<Minimizer> {
    let n = op.len();
    let mass = op.mass();
    let mut u = init;
    for x in u.iter_mut() {
        *x = x.abs();
    }
    normalize(&mut u, mass, q);

    let mut au = vec![0.0; n];
    op.apply(&u, &mut au);
    let mut lambda = dot(&u, &au);

    let mut w = vec![0.0; n];
    let mut rhs = vec![0.0; n];
    let mut prev: Option<Vec<f64>> = None;
    let mut inner = 0usize;
    let mut streak = 0usize;
    let mut last_change = f64::INFINITY;

    // q = 1: the constraint gradient does not depend on u, a single solve is exact.
    if q == 1.0 {
        constraint_gradient(&u, mass, q, &mut rhs);
        inner += op.solve(&rhs, &mut w)?;
        for x in w.iter_mut() {
            *x = x.max(0.0);
        }
        normalize(&mut w, mass, q);
        op.apply(&w, &mut au);
        let lam = dot(&w, &au);
        return Ok(Minimizer {
            equation_residual: equation_residual(op, &w, lam, q),
            u: w,
            lambda: lam,
            iterations: 1,
            inner_iterations: inner,
            // the single solve is exact; nothing left to change
            last_change: 0.0,
        });
    }

    for it in 1..=opts.max_iter {
        constraint_gradient(&u, mass, q, &mut rhs);
        inner += op.solve(&rhs, &mut w)?;

        let mut dirs: Vec<Vec<f64>> = Vec::with_capacity(2);
        dirs.push(w.clone());
        if let Some(p) = &prev {
            dirs.push(u.iter().zip(p).map(|(a, b)| a - b).collect());
        }
        let (v, lam) = subspace_step(op, &u, &au, lambda, dirs, q)?;

        last_change = (lambda - lam).abs() / lam;
        prev = Some(std::mem::replace(&mut u, v));
        op.apply(&u, &mut au);
        lambda = dot(&u, &au);
        // at the fixed point A u = λ m u^{q−1}, so u / λ warm-starts the next solve
        for (wi, ui) in w.iter_mut().zip(&u) {
            *wi = ui / lambda;
        }

        if last_change < opts.tol {
            streak += 1;
            if streak >= opts.patience {
                return Ok(Minimizer {
                    equation_residual: equation_residual(op, &u, lambda, q),
                    u,
                    lambda,
                    iterations: it,
                    inner_iterations: inner,
                    last_change,
                });
            }
        } else {
            streak = 0;
        }
    }
    Err(Error::NoConvergence {
        what: "Rayleigh minimization",
        iterations: opts.max_iter,
        last_change,
    })
}

/// Minimizes `E(v) / N(v)^{2/q}` over `v = u + Σ x_j d_j`; returns the
/// normalized nonnegative minimizer and its quotient.
fn subspace_step<O: EnergyOperator>(
    op: &O,
    u: &[f64],
    au: &[f64],
    e0: f64,
    mut dirs: Vec<Vec<f64>>,
    q: f64,
) -> Result<(Vec<f64>, f64)> {
    let n = u.len();
    let mass = op.mass();

    // A-orthogonalize the directions against u and each other; drop dependent ones.
    let mut adirs: Vec<Vec<f64>> = Vec::new();
    let mut kept: Vec<Vec<f64>> = Vec::new();
    for mut d in dirs.drain(..) {
        let c = dot(&d, au) / e0;
        for (di, ui) in d.iter_mut().zip(u) {
            *di -= c * ui;
        }
        for (k, ak) in kept.iter().zip(&adirs) {
            let kk = dot(k, ak);
            let c = dot(&d, ak) / kk;
            for (di, ki) in d.iter_mut().zip(k) {
                *di -= c * ki;
            }
        }
        let mut ad = vec![0.0; n];
        op.apply(&d, &mut ad);
        let ee = dot(&d, &ad);
        if !(ee > 1e-28 * e0) {
            continue;
        }
        // scale so that dᵀAd = uᵀAu
        let s = (e0 / ee).sqrt();
        d.iter_mut().for_each(|x| *x *= s);
        ad.iter_mut().for_each(|x| *x *= s);
        kept.push(d);
        adirs.push(ad);
    }
    let k = kept.len();
    if k == 0 {
        return Ok((u.to_vec(), e0));
    }

    // E(x) = e0 (1 + |x|²) after A-orthogonalization
    let energy = |x: &[f64]| e0 * (1.0 + x.iter().map(|t| t * t).sum::<f64>());
    let combine = |x: &[f64], v: &mut Vec<f64>| {
        v.clear();
        v.extend_from_slice(u);
        for (xj, d) in x.iter().zip(&kept) {
            for (vi, di) in v.iter_mut().zip(d) {
                *vi += xj * di;
            }
        }
    };
    let objective = |v: &[f64], x: &[f64]| energy(x).ln() - (2.0 / q) * power_sum(v, mass, q).ln();

    let mut x = vec![0.0; k];
    let mut v = Vec::with_capacity(n);
    combine(&x, &mut v);
    let mut f = objective(&v, &x);

    for _ in 0..40 {
        // gradient and Hessian of ln E − (2/q) ln N
        let e = energy(&x);
        let nsum = power_sum(&v, mass, q);
        let mut gn = vec![0.0; k];
        let mut hn = vec![vec![0.0; k]; k];
        for i in 0..n {
            let vi = v[i];
            if vi == 0.0 && q < 2.0 {
                continue;
            }
            let a = vi.abs();
            let p1 = q * mass[i] * a.powf(q - 2.0) * vi;
            let p2 = q * (q - 1.0) * mass[i] * a.powf(q - 2.0);
            for j in 0..k {
                let dj = kept[j][i];
                gn[j] += p1 * dj;
                for l in 0..=j {
                    hn[j][l] += p2 * dj * kept[l][i];
                }
            }
        }
        let mut grad = vec![0.0; k];
        let mut hess = vec![vec![0.0; k]; k];
        for j in 0..k {
            let ge = 2.0 * e0 * x[j];
            grad[j] = ge / e - (2.0 / q) * gn[j] / nsum;
            for l in 0..=j {
                let gel = 2.0 * e0 * x[l];
                let he = if j == l { 2.0 * e0 } else { 0.0 };
                let h = he / e - ge * gel / (e * e) - (2.0 / q) * (hn[j][l] / nsum - gn[j] * gn[l] / (nsum * nsum));
                hess[j][l] = h;
                hess[l][j] = h;
            }
        }
        let gnorm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        if gnorm < 1e-15 {
            break;
        }

        let mut step = newton_direction(&hess, &grad);
        let slope: f64 = step.iter().zip(&grad).map(|(s, g)| s * g).sum();
        if !(slope < 0.0) {
            step = grad.iter().map(|g| -g).collect();
        }
        let slope: f64 = step.iter().zip(&grad).map(|(s, g)| s * g).sum();

        let mut t = 1.0;
        let mut accepted = false;
        let mut xt = vec![0.0; k];
        let mut vt = Vec::with_capacity(n);
        for _ in 0..60 {
            for j in 0..k {
                xt[j] = x[j] + t * step[j];
            }
            combine(&xt, &mut vt);
            let ft = objective(&vt, &xt);
            if ft.is_finite() && ft <= f + 1e-4 * t * slope {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
        let moved: f64 = step.iter().map(|s| (t * s).abs()).fold(0.0, f64::max);
        x.copy_from_slice(&xt);
        std::mem::swap(&mut v, &mut vt);
        let df = f - objective(&v, &x);
        f -= df;
        if moved < 1e-14 || df.abs() < 1e-16 {
            break;
        }
    }

    // |v| never has a larger discrete energy than v; keep the nonnegative representative.
    for vi in v.iter_mut() {
        *vi = vi.abs();
    }
    normalize(&mut v, mass, q);
    let mut av = vec![0.0; n];
    op.apply(&v, &mut av);
    let lam = dot(&v, &av);
    if lam > e0 {
        // numerical noise in the subspace solve; keep the previous iterate
        let mut keep = u.to_vec();
        normalize(&mut keep, mass, q);
        return Ok((keep, e0));
    }
    Ok((v, lam))
}

/// Solves `H s = −g` with Levenberg damping until `H` is positive definite.
fn newton_direction(h: &[Vec<f64>], g: &[f64]) -> Vec<f64> {
    let k = g.len();
    let scale = (0..k).map(|i| h[i][i].abs()).fold(1e-300, f64::max);
    let mut mu = 0.0;
    for _ in 0..60 {
        let mut m = h.to_vec();
        for (i, row) in m.iter_mut().enumerate() {
            row[i] += mu;
        }
        if let Some(s) = cholesky_solve(&m, g) {
            return s.into_iter().map(|x| -x).collect();
        }
        mu = if mu == 0.0 { 1e-10 * scale } else { mu * 10.0 };
    }
    g.iter().map(|x| -x).collect()
}

fn cholesky_solve(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let k = b.len();
    let mut l = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in 0..=i {
            let s = a[i][j] - (0..j).map(|p| l[i][p] * l[j][p]).sum::<f64>();
            if i == j {
                if !(s > 0.0) {
                    return None;
                }
                l[i][i] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    let mut y = vec![0.0; k];
    for i in 0..k {
        y[i] = (b[i] - (0..i).map(|p| l[i][p] * y[p]).sum::<f64>()) / l[i][i];
    }
    let mut x = vec![0.0; k];
    for i in (0..k).rev() {
        x[i] = (y[i] - ((i + 1)..k).map(|p| l[p][i] * x[p]).sum::<f64>()) / l[i][i];
    }
    Some(x)
}
