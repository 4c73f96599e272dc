use std::f64::consts::{FRAC_PI_2, PI};

use liealg::bvp::{
    bvp2_coefficients, bvp2_exact, bvp2_operator, bvp2_reconstruct, hyperbolic_exact,
    hyperbolic_rhs, march_harmonic, shooting_bvp2, shooting_combine, solve_bvp2, solve_hyperbolic,
};
use liealg::operator_1d::Polynomial;
use liealg::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn poly_mul(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let mut out = vec![0.0; a.coeffs().len() + b.coeffs().len() - 1];
    for (i, x) in a.coeffs().iter().enumerate() {
        for (j, y) in b.coeffs().iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    Polynomial::new(out)
}

fn poly_add(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let n = a.coeffs().len().max(b.coeffs().len());
    let get = |p: &Polynomial, i: usize| p.coeffs().get(i).copied().unwrap_or(0.0);
    Polynomial::new((0..n).map(|i| get(a, i) + get(b, i)).collect())
}

/// `g = 2 - 2x/π` and `h = x (x - π/2)`, the factors of the substitution.
fn substitution_factors() -> (Polynomial, Polynomial) {
    (
        Polynomial::new(vec![2.0, -2.0 / PI]),
        Polynomial::new(vec![0.0, -FRAC_PI_2, 1.0]),
    )
}

#[test]
fn bvp2_coefficient_identities() {
    // With u = g (h v + 1) and u'' + u = 0: p = gh, q = 2p', r = p'' + p, s = -g.
    let (g, h) = substitution_factors();
    let p = poly_mul(&g, &h);
    let q = p.derivative();
    let q = Polynomial::new(q.coeffs().iter().map(|c| 2.0 * c).collect());
    let r = poly_add(&p.derivative().derivative(), &p);
    let op = bvp2_operator();
    for i in 0..=200 {
        let x = FRAC_PI_2 * i as f64 / 200.0;
        let (pc, qc, rc, sc) = bvp2_coefficients(x);
        assert!((pc - p.eval(x)).abs() < 1e-12, "p at {x}");
        assert!((qc - q.eval(x)).abs() < 1e-12, "q at {x}");
        assert!((rc - r.eval(x)).abs() < 1e-12, "r at {x}");
        assert!((sc + g.eval(x)).abs() < 1e-12, "s at {x}");
        for term in op.terms() {
            let want = match term.order {
                2 => pc,
                1 => qc,
                0 => rc,
                o => panic!("unexpected order {o}"),
            };
            assert!((term.coeff.eval(x) - want).abs() < 1e-12);
        }
    }
}

#[test]
fn substitution_transforms_the_equation() {
    // For any smooth v, u'' + u = p v'' + q v' + r v - s.
    let v = |x: f64| (0.7 * x).cos() + x * x;
    let dv = |x: f64| -0.7 * (0.7 * x).sin() + 2.0 * x;
    let d2v = |x: f64| -0.49 * (0.7 * x).cos() + 2.0;
    let u = |x: f64| bvp2_reconstruct(x, v(x));
    let h = 1e-4;
    for i in 1..20 {
        let x = FRAC_PI_2 * i as f64 / 20.0;
        let lhs = (u(x + h) - 2.0 * u(x) + u(x - h)) / (h * h) + u(x);
        let (p, q, r, s) = bvp2_coefficients(x);
        let rhs = p * d2v(x) + q * dv(x) + r * v(x) - s;
        assert!((lhs - rhs).abs() < 1e-6, "x = {x}: {lhs} vs {rhs}");
    }
}

#[test]
fn reconstruction_meets_boundary_values() {
    assert!((bvp2_reconstruct(0.0, 123.0) - 2.0).abs() < 1e-15);
    assert!((bvp2_reconstruct(FRAC_PI_2, -7.0) - 1.0).abs() < 1e-15);
    assert!((bvp2_exact(0.0) - 2.0).abs() < 1e-15);
    assert!((bvp2_exact(FRAC_PI_2) - 1.0).abs() < 1e-15);
}

#[test]
fn hyperbolic_residual_vanishes_at_random_points() {
    // u = sin φ, φ = 1 - x² - y²: u_xx - u_yy + y u_x from closed-form derivatives.
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let x: f64 = rng.random_range(-1.0..1.0);
        let y: f64 = rng.random_range(-1.0..1.0);
        let phi = 1.0 - x * x - y * y;
        let ux = -2.0 * x * phi.cos();
        let uxx = -2.0 * phi.cos() - 4.0 * x * x * phi.sin();
        let uyy = -2.0 * phi.cos() - 4.0 * y * y * phi.sin();
        let residual = uxx - uyy + y * ux - hyperbolic_rhs(x, y);
        assert!(
            residual.abs() <= 1e-10,
            "residual {residual:e} at ({x}, {y})"
        );
    }
}

#[test]
fn hyperbolic_residual_by_finite_differences() {
    let u = hyperbolic_exact;
    let h = 1e-4;
    for &(x, y) in &[(0.1, 0.2), (-0.5, 0.3), (0.6, -0.6), (0.0, 0.0)] {
        let uxx = (u(x + h, y) - 2.0 * u(x, y) + u(x - h, y)) / (h * h);
        let uyy = (u(x, y + h) - 2.0 * u(x, y) + u(x, y - h)) / (h * h);
        let ux = (u(x + h, y) - u(x - h, y)) / (2.0 * h);
        assert!((uxx - uyy + y * ux - hyperbolic_rhs(x, y)).abs() < 1e-5);
    }
}

#[test]
fn exact_2d_solution_vanishes_on_unit_circle() {
    for i in 0..64 {
        let t = 2.0 * PI * i as f64 / 64.0;
        assert!(hyperbolic_exact(t.cos(), t.sin()).abs() < 1e-15);
    }
}

#[test]
fn collocation_converges_spectrally() {
    let errs: Vec<f64> = [4, 8, 12]
        .iter()
        .map(|&n| solve_bvp2(n, false).unwrap().errors.max)
        .collect();
    assert!(errs[1] < errs[0] * 1e-2);
    assert!(errs[2] < errs[1] * 1e-2);
}

#[test]
fn collocation_handles_zero_endpoint() {
    // p vanishes at 0, but the collocation system stays solvable.
    let r = solve_bvp2(8, true).unwrap();
    assert_eq!(r.grid[0].a(), 0.0);
    assert!(r.errors.max < 1e-5);
}

#[test]
fn collocation_rejects_out_of_range_n() {
    assert!(matches!(solve_bvp2(1, false), Err(Error::InvalidInput(_))));
    assert!(matches!(solve_bvp2(21, false), Err(Error::InvalidInput(_))));
    assert!(matches!(
        solve_hyperbolic(3, 10),
        Err(Error::InvalidInput(_))
    ));
}

#[test]
fn shooting_is_second_order() {
    let errs: Vec<f64> = [8, 16, 32, 64]
        .iter()
        .map(|&n| shooting_bvp2(n).unwrap().errors.max)
        .collect();
    for w in errs.windows(2) {
        let ratio = w[1] / w[0];
        assert!((0.2..=0.3).contains(&ratio), "ratio {ratio}");
    }
}

#[test]
fn harmonic_march_tracks_cosine() {
    let n = 400;
    let h = FRAC_PI_2 / n as f64;
    let w = march_harmonic(1.0, 0.0, h, n);
    assert_eq!(w.len(), n + 1);
    for (i, wi) in w.iter().enumerate() {
        assert!((wi - (i as f64 * h).cos()).abs() < 1e-4);
    }
    assert_eq!(march_harmonic(3.0, 1.0, 0.1, 0), vec![3.0]);
}

#[test]
fn shooting_combination_guards() {
    assert!(matches!(
        shooting_combine(&[1.0, 2.0], &[0.0, 0.0]),
        Err(Error::DegenerateShooting(_))
    ));
    assert!(matches!(
        shooting_combine(&[1.0], &[0.0, 1.0]),
        Err(Error::DimensionMismatch(_))
    ));
    let u = shooting_combine(&[2.0, 3.0], &[0.0, 2.0]).unwrap();
    assert_eq!(u, vec![2.0, 1.0]);
}

#[test]
fn hyperbolic_solution_is_zero_on_disk_boundary_nodes() {
    // Grid nodes on the unit circle: (±1, 0) and (0, ±1).
    let r = solve_hyperbolic(4, 4).unwrap();
    let xs = r.grid[0].nodes();
    let ys = r.grid[1].nodes();
    for (j, &y) in ys.iter().enumerate() {
        for (i, &x) in xs.iter().enumerate() {
            if ((x * x + y * y) - 1.0).abs() < 1e-14 {
                assert!(r.u_sigma[j * xs.len() + i].abs() < 1e-14);
            }
        }
    }
}
