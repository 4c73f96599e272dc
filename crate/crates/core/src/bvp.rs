//! The two boundary-value experiments and their error metrics.
//!
//! **1-D problem.** `u'' + u = 0` on `[0, π/2]`, `u(0) = 2`, `u(π/2) = 1`,
//! exact solution `u = sin x + 2 cos x`. The substitution
//! `u = g (h v + 1)` with `g = 2 - 2x/π`, `h = x (x - π/2)` builds the boundary
//! values into `u`, leaving `p v'' + q v' + r v = s` for the new unknown. It is
//! collocated as `(p(X) Z² + q(X) Z + r(X)) v = s` and compared against a
//! finite-difference shooting baseline.
//!
//! **2-D problem.** `u_xx - u_yy + y u_x = f` on the unit disk with `u = 0` on
//! the circle, exact solution `u = sin(1 - x² - y²)`. With `φ = 1 - x² - y²`
//! and `u = φ v`:
//!
//! ```text
//! φ (v_xx - v_yy + y v_x) - 4x v_x + 4y v_y - 2xy v = f
//! ```
//!
//! which is collocated on a tensor grid covering `[-1, 1]²`.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::interp::{uniform_partition, Partition};
use crate::linalg::{lu_solve, DenseMatrix};
use crate::operator_1d::{apply_operator_poly, OperatorPoly1D, OperatorTerm, Polynomial};
use crate::operator_nd::{grid_eval, lifted_diff, lifted_mult, realize, MultiIndexSpace};

/// Left end of the collocation interval for the 1-D problem. `x = 0` is a
/// root of the leading coefficient `p`.
pub const BVP2_LEFT_OFFSET: f64 = 0.001;
pub const BVP2_MAX_N: usize = 20;
pub const HYPERBOLIC_MIN_N: usize = 4;
pub const HYPERBOLIC_MAX_N: usize = 20;
/// Shooting fails when `|v(π/2)|` is below this.
pub const SHOOTING_MIN_DENOMINATOR: f64 = 1e-12;
/// Solves with a reciprocal condition estimate below this are rejected.
pub const MIN_RCOND: f64 = f64::EPSILON;

/// Sum, maximum and mean of absolute nodal errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorMetrics {
    pub sum: f64,
    pub max: f64,
    pub mean: f64,
}

pub fn error_metrics(approx: &[f64], exact: &[f64]) -> Result<ErrorMetrics> {
    if approx.len() != exact.len() {
        return Err(Error::DimensionMismatch(format!(
            "approximation has {} entries, exact has {}",
            approx.len(),
            exact.len()
        )));
    }
    if approx.is_empty() {
        return Err(Error::InvalidInput("error metrics of empty vectors".into()));
    }
    let mut sum = 0.0;
    let mut max: f64 = 0.0;
    for (a, e) in approx.iter().zip(exact) {
        let d = (a - e).abs();
        sum += d;
        max = max.max(d);
    }
    Ok(ErrorMetrics {
        sum,
        max,
        mean: sum / approx.len() as f64,
    })
}

/// Which method produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    LieAlgebraic,
    Shooting,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::LieAlgebraic => "lie-algebraic",
            Method::Shooting => "shooting",
        }
    }
}

/// Result of one experiment run.
#[derive(Debug, Clone, PartialEq)]
pub struct BvpReport {
    pub method: Method,
    /// One partition per dimension.
    pub grid: Vec<Partition>,
    /// Substituted unknown at the nodes; for shooting, the second IVP solution.
    pub v_sigma: Vec<f64>,
    /// Reconstructed solution at the nodes, in grid linear order.
    pub u_sigma: Vec<f64>,
    pub errors: ErrorMetrics,
    /// Reciprocal condition estimate of the collocation system; `None` when
    /// no linear system was solved.
    pub rcond: Option<f64>,
}

impl BvpReport {
    /// `n` for 1-D runs, `n1xn2` for 2-D runs.
    pub fn size_label(&self) -> String {
        self.grid
            .iter()
            .map(|p| p.n().to_string())
            .collect::<Vec<_>>()
            .join("x")
    }
}

/// Exact solution of the 1-D problem.
pub fn bvp2_exact(x: f64) -> f64 {
    x.sin() + 2.0 * x.cos()
}

/// Coefficients `(p, q, r, s)` of the substituted 1-D equation at `x`.
pub fn bvp2_coefficients(x: f64) -> (f64, f64, f64, f64) {
    let p = -2.0 / PI * x.powi(3) + 3.0 * x * x - PI * x;
    let q = 2.0 * (-6.0 / PI * x * x + 6.0 * x - PI);
    let r = -12.0 / PI * x + 6.0 + x * (2.0 - 2.0 / PI * x) * (x - FRAC_PI_2);
    let s = 2.0 / PI * x - 2.0;
    (p, q, r, s)
}

/// The substituted operator `p D² + q D + r` with polynomial coefficients.
pub fn bvp2_operator() -> OperatorPoly1D {
    // r = 6 - 12x/π + x (2 - 2x/π)(x - π/2) = 6 - (12/π + π) x + 3x² - (2/π) x³
    let p = Polynomial::new(vec![0.0, -PI, 3.0, -2.0 / PI]);
    let q = Polynomial::new(vec![-2.0 * PI, 12.0, -12.0 / PI]);
    let r = Polynomial::new(vec![6.0, -(12.0 / PI + PI), 3.0, -2.0 / PI]);
    OperatorPoly1D::new(vec![
        OperatorTerm { coeff: p, order: 2 },
        OperatorTerm { coeff: q, order: 1 },
        OperatorTerm { coeff: r, order: 0 },
    ])
    .expect("distinct orders, nonzero coefficients")
}

/// `u = (2 - 2x/π)(x (x - π/2) v + 1)`.
pub fn bvp2_reconstruct(x: f64, v: f64) -> f64 {
    (2.0 - 2.0 * x / PI) * (x * (x - FRAC_PI_2) * v + 1.0)
}

/// Collocation solve of the 1-D problem on `n` uniform subintervals of
/// `[0.001, π/2]`, or of `[0, π/2]` when `include_zero_endpoint` is set.
pub fn solve_bvp2(n: usize, include_zero_endpoint: bool) -> Result<BvpReport> {
    if !(2..=BVP2_MAX_N).contains(&n) {
        return Err(Error::InvalidInput(format!(
            "n = {n} outside 2..={BVP2_MAX_N}"
        )));
    }
    let left = if include_zero_endpoint {
        0.0
    } else {
        BVP2_LEFT_OFFSET
    };
    let partition = uniform_partition(left, FRAC_PI_2, n)?;
    let m = apply_operator_poly(&bvp2_operator(), &partition);
    let rhs: Vec<f64> = partition
        .nodes()
        .iter()
        .map(|&x| bvp2_coefficients(x).3)
        .collect();
    let (v, rcond) = solve_checked(&m, &rhs)?;
    let u: Vec<f64> = partition
        .nodes()
        .iter()
        .zip(&v)
        .map(|(&x, &vi)| bvp2_reconstruct(x, vi))
        .collect();
    let exact: Vec<f64> = partition.nodes().iter().map(|&x| bvp2_exact(x)).collect();
    let errors = error_metrics(&u, &exact)?;
    Ok(BvpReport {
        method: Method::LieAlgebraic,
        grid: vec![partition],
        v_sigma: v,
        u_sigma: u,
        errors,
        rcond: Some(rcond),
    })
}

fn solve_checked(m: &DenseMatrix, rhs: &[f64]) -> Result<(Vec<f64>, f64)> {
    let sol = lu_solve(m, rhs)?;
    if sol.rcond < MIN_RCOND {
        return Err(Error::IllConditioned { rcond: sol.rcond });
    }
    Ok((sol.x, sol.rcond))
}

/// Marches `y'' = -y` on `n` steps of size `h` with the central scheme
/// `y_{i+1} = 2 y_i - y_{i-1} - h² y_i`, starting from the second-order
/// Taylor step `y_1 = y_0 + h y'_0 - h² y_0 / 2`.
pub fn march_harmonic(y0: f64, dy0: f64, h: f64, n: usize) -> Vec<f64> {
    let mut y = Vec::with_capacity(n + 1);
    y.push(y0);
    if n == 0 {
        return y;
    }
    y.push(y0 + h * dy0 - 0.5 * h * h * y0);
    for i in 1..n {
        let next = 2.0 * y[i] - y[i - 1] - h * h * y[i];
        y.push(next);
    }
    y
}

/// Shooting combination `u = w + (1 - w(π/2)) / v(π/2) · v` for the boundary
/// value `u(π/2) = 1`.
pub fn shooting_combine(w: &[f64], v: &[f64]) -> Result<Vec<f64>> {
    if w.len() != v.len() || w.is_empty() {
        return Err(Error::DimensionMismatch(format!(
            "IVP solutions have lengths {} and {}",
            w.len(),
            v.len()
        )));
    }
    let v_end = v[v.len() - 1];
    if v_end.abs() < SHOOTING_MIN_DENOMINATOR {
        return Err(Error::DegenerateShooting(v_end.abs()));
    }
    let c = (1.0 - w[w.len() - 1]) / v_end;
    Ok(w.iter().zip(v).map(|(wi, vi)| wi + c * vi).collect())
}

/// Shooting baseline on `n` uniform subintervals of `[0, π/2]`: solves
/// `w'' = -w, w(0) = 2, w'(0) = 0` and `v'' = -v, v(0) = 0, v'(0) = 1` by
/// [`march_harmonic`] and combines them.
pub fn shooting_bvp2(n: usize) -> Result<BvpReport> {
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "shooting needs n >= 2, got {n}"
        )));
    }
    let partition = uniform_partition(0.0, FRAC_PI_2, n)?;
    let h = FRAC_PI_2 / n as f64;
    let w = march_harmonic(2.0, 0.0, h, n);
    let v = march_harmonic(0.0, 1.0, h, n);
    let u = shooting_combine(&w, &v)?;
    let exact: Vec<f64> = partition.nodes().iter().map(|&x| bvp2_exact(x)).collect();
    let errors = error_metrics(&u, &exact)?;
    Ok(BvpReport {
        method: Method::Shooting,
        grid: vec![partition],
        v_sigma: v,
        u_sigma: u,
        errors,
        rcond: None,
    })
}

/// Right-hand side of the 2-D problem.
pub fn hyperbolic_rhs(x: f64, y: f64) -> f64 {
    let phi = 1.0 - x * x - y * y;
    4.0 * (y * y - x * x) * phi.sin() - 2.0 * x * y * phi.cos()
}

/// Exact solution of the 2-D problem, extended to the whole square.
pub fn hyperbolic_exact(x: f64, y: f64) -> f64 {
    (1.0 - x * x - y * y).sin()
}

/// Collocation solve of the 2-D problem on uniform `n1 x n2` partitions of
/// `[-1, 1]²`. Errors are taken over every grid node, including the corners
/// outside the disk.
pub fn solve_hyperbolic(n1: usize, n2: usize) -> Result<BvpReport> {
    for n in [n1, n2] {
        if !(HYPERBOLIC_MIN_N..=HYPERBOLIC_MAX_N).contains(&n) {
            return Err(Error::InvalidInput(format!(
                "n = {n} outside {HYPERBOLIC_MIN_N}..={HYPERBOLIC_MAX_N}"
            )));
        }
    }
    let grid = vec![
        uniform_partition(-1.0, 1.0, n1)?,
        uniform_partition(-1.0, 1.0, n2)?,
    ];
    let size = MultiIndexSpace::from_partitions(&grid)?.size();

    let zx = realize(&lifted_diff(1, &grid)?);
    let zy = realize(&lifted_diff(2, &grid)?);
    let xh = realize(&lifted_mult(1, &grid)?);
    let yh = realize(&lifted_mult(2, &grid)?);
    let id = DenseMatrix::identity(size);

    // K = (I - X² - Y²)(Zx² - Zy² + Y Zx) - 4 X Zx + 4 Y Zy - 2 X Y
    let phi = id.sub(&xh.mul(&xh)?)?.sub(&yh.mul(&yh)?)?;
    let principal = zx.mul(&zx)?.sub(&zy.mul(&zy)?)?.add(&yh.mul(&zx)?)?;
    let k = phi
        .mul(&principal)?
        .sub(&xh.mul(&zx)?.scale(4.0))?
        .add(&yh.mul(&zy)?.scale(4.0))?
        .sub(&xh.mul(&yh)?.scale(2.0))?;

    let f = grid_eval(|p| hyperbolic_rhs(p[0], p[1]), &grid)?;
    let (v, rcond) = solve_checked(&k, &f)?;
    let u = phi.mul_vec(&v)?;
    let exact = grid_eval(|p| hyperbolic_exact(p[0], p[1]), &grid)?;
    let errors = error_metrics(&u, &exact)?;
    Ok(BvpReport {
        method: Method::LieAlgebraic,
        grid,
        v_sigma: v,
        u_sigma: u,
        errors,
        rcond: Some(rcond),
    })
}
