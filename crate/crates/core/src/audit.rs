//! Executable checks of the rank and nilpotency theory behind the
//! differentiation matrices.
//!
//! Every check produces an [`AuditReport`] comparing an expected value
//! (from the theory) with an observed one (from floating-point linear
//! algebra). Nilpotency is judged by norm decay: a power `H^k` counts as zero
//! when `||H^k||_inf <= tol * ||H||_inf^k`. The same test stands in for the
//! rank of a power that is numerically zero, since a relative singular value
//! threshold is meaningless on a matrix made entirely of rounding noise.
//!
//! Floating-point verification is only meaningful at desk scale, so the
//! audits cap `n` at [`MAX_AUDIT_N`] and grid sizes at [`MAX_AUDIT_SIZE`].

use std::fmt;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::interp::{uniform_partition, Partition};
use crate::linalg::{numerical_rank, DenseMatrix};
use crate::operator_1d::diff_matrix;
use crate::operator_nd::{
    full_rank_predicate, lifted_diff, lifted_poly_matrix, realize, MultiIndexSpace, MultiPoly,
};

/// Relative tolerance for deciding that a matrix power has vanished.
pub const NILPOTENCY_REL_TOL: f64 = 1e-8;
/// Largest partition size `n` the 1-D audits accept.
pub const MAX_AUDIT_N: usize = 12;
/// Largest grid size `N` the multi-dimensional audits accept.
pub const MAX_AUDIT_SIZE: usize = 256;
/// Absolute tolerance for the 2x2 determinant identity.
pub const DET_TOL: f64 = 1e-12;
/// Seed used when `LIEALG_SEED` is not set.
pub const DEFAULT_SEED: u64 = 42;

/// The 2x2 nilpotent matrix of the variable-coefficient counterexample.
pub const COUNTEREXAMPLE_B: [[f64; 2]; 2] = [[-2.0, -1.0], [4.0, 2.0]];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuditValue {
    Int(usize),
    Bool(bool),
}

impl fmt::Display for AuditValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AuditValue::Int(v) => write!(f, "{v}"),
            AuditValue::Bool(v) => write!(f, "{v}"),
        }
    }
}

/// Outcome of one check. `pass()` is `expected == observed`.
#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    pub case_name: String,
    pub expected: AuditValue,
    pub observed: AuditValue,
    pub tolerance: f64,
}

impl AuditReport {
    pub fn new(
        case_name: impl Into<String>,
        expected: AuditValue,
        observed: AuditValue,
        tolerance: f64,
    ) -> Self {
        Self {
            case_name: case_name.into(),
            expected,
            observed,
            tolerance,
        }
    }

    pub fn pass(&self) -> bool {
        self.expected == self.observed
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{:e},{}",
            self.case_name,
            self.expected,
            self.observed,
            self.tolerance,
            self.pass()
        )
    }
}

pub const CSV_HEADER: &str = "caseName,expected,observed,tolerance,pass";

/// CSV with header, one row per report.
pub fn reports_to_csv(reports: &[AuditReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in reports {
        writeln!(out, "{}", r.csv_row()).unwrap();
    }
    out
}

/// `||m||_inf <= tol * scale`.
pub fn is_negligible(m: &DenseMatrix, scale: f64, tol: f64) -> bool {
    m.norm_inf() <= tol * scale
}

/// Numerical rank, except that a matrix negligible against `scale` has rank 0.
pub fn effective_rank(m: &DenseMatrix, scale: f64, rel_tol: f64) -> usize {
    if is_negligible(m, scale, NILPOTENCY_REL_TOL) {
        0
    } else {
        numerical_rank(m, rel_tol)
    }
}

fn check_audit_n(n: usize) -> Result<()> {
    if n > MAX_AUDIT_N {
        return Err(Error::ConditioningGuard {
            n,
            max: MAX_AUDIT_N,
        });
    }
    Ok(())
}

fn partition_label(p: &Partition) -> String {
    format!("n={}", p.n())
}

/// Checks `rank Z = n` and `Z^{n+1} = 0` on a partition.
pub fn audit_lemma1(p: &Partition, rel_tol: f64) -> Result<(AuditReport, AuditReport)> {
    audit_lemma1_named(p, rel_tol, &partition_label(p))
}

fn audit_lemma1_named(
    p: &Partition,
    rel_tol: f64,
    label: &str,
) -> Result<(AuditReport, AuditReport)> {
    let n = p.n();
    check_audit_n(n)?;
    let z = diff_matrix(p);
    let rank = numerical_rank(&z, rel_tol);
    let top = z.pow(n as u32 + 1)?;
    let vanishes = is_negligible(&top, z.norm_inf().powi(n as i32 + 1), NILPOTENCY_REL_TOL);
    Ok((
        AuditReport::new(
            format!("lemma1_rank/{label}"),
            AuditValue::Int(n),
            AuditValue::Int(rank),
            rel_tol,
        ),
        AuditReport::new(
            format!("lemma1_nilpotent/{label}"),
            AuditValue::Bool(true),
            AuditValue::Bool(vanishes),
            NILPOTENCY_REL_TOL,
        ),
    ))
}

/// For `H` of size `n+1` with rank `n` and `H^{n+1} = 0`, checks
/// `rank H^k = n + 1 - k` for `k = 0..=n+1`.
pub fn audit_rank_ladder(h: &DenseMatrix, rel_tol: f64) -> Result<Vec<AuditReport>> {
    audit_rank_ladder_named(h, rel_tol, "H")
}

fn audit_rank_ladder_named(h: &DenseMatrix, rel_tol: f64, label: &str) -> Result<Vec<AuditReport>> {
    if !h.is_square() {
        return Err(Error::Hypothesis(format!(
            "H must be square, got {}x{}",
            h.rows(),
            h.cols()
        )));
    }
    let size = h.rows();
    let n = size - 1;
    let hnorm = h.norm_inf();
    let rank = numerical_rank(h, rel_tol);
    if rank != n {
        return Err(Error::Hypothesis(format!(
            "H must have rank n = {n}, numerical rank is {rank}"
        )));
    }
    let mut power = DenseMatrix::identity(size);
    let mut reports = Vec::with_capacity(size + 1);
    for k in 0..=size {
        // Below the nilpotency index the powers are genuinely nonzero and
        // only the thresholded rank is meaningful; H^{n+1} is judged by its
        // norm since its entries are pure round-off.
        let observed = if k < size {
            numerical_rank(&power, rel_tol)
        } else if is_negligible(&power, hnorm.powi(k as i32), NILPOTENCY_REL_TOL) {
            0
        } else {
            return Err(Error::Hypothesis(format!(
                "H^{size} must vanish, ||H^{size}||_inf = {:e}",
                power.norm_inf()
            )));
        };
        reports.push(AuditReport::new(
            format!("rank_ladder/{label}/k={k}"),
            AuditValue::Int(size - k),
            AuditValue::Int(observed),
            rel_tol,
        ));
        power = power.mul(h)?;
    }
    Ok(reports)
}

/// For nilpotent `B` and `P(z) = a_k z^k + ... + a_m z^m` with `a_k != 0`,
/// checks `rank P(B) = rank B^k`. `coeffs` holds `a_k, ..., a_m`.
pub fn audit_theorem1(
    b: &DenseMatrix,
    coeffs: &[f64],
    k: u32,
    rel_tol: f64,
) -> Result<AuditReport> {
    audit_theorem1_named(b, coeffs, k, rel_tol, "B")
}

fn audit_theorem1_named(
    b: &DenseMatrix,
    coeffs: &[f64],
    k: u32,
    rel_tol: f64,
    label: &str,
) -> Result<AuditReport> {
    if !b.is_square() {
        return Err(Error::InvalidInput(format!(
            "B must be square, got {}x{}",
            b.rows(),
            b.cols()
        )));
    }
    match coeffs.first() {
        Some(&a) if a != 0.0 => {}
        _ => {
            return Err(Error::InvalidInput(
                "leading coefficient a_k must be nonzero".into(),
            ))
        }
    }
    let dim = b.rows();
    let bnorm = b.norm_inf();
    let top = b.pow(dim as u32)?;
    if !is_negligible(&top, bnorm.powi(dim as i32), NILPOTENCY_REL_TOL) {
        return Err(Error::InvalidInput(format!(
            "B is not nilpotent: ||B^{dim}||_inf = {:e}",
            top.norm_inf()
        )));
    }

    // B^dim = 0 was just verified, so every power from dim on is exactly
    // zero; thresholding round-off there would report an arbitrary rank.
    let (expected, observed) = if k as usize >= dim {
        (0, 0)
    } else {
        let bk = b.pow(k)?;
        let expected = numerical_rank(&bk, rel_tol);
        let mut power = bk;
        let mut poly = DenseMatrix::zeros(dim, dim);
        for (offset, &a) in coeffs.iter().enumerate() {
            if offset > 0 {
                power = power.mul(b)?;
            }
            if k as usize + offset < dim {
                poly = poly.add(&power.scale(a))?;
            }
        }
        (expected, numerical_rank(&poly, rel_tol))
    };
    Ok(AuditReport::new(
        format!(
            "theorem1/{label}/k={k}/deg={}",
            k as usize + coeffs.len() - 1
        ),
        AuditValue::Int(expected),
        AuditValue::Int(observed),
        rel_tol,
    ))
}

/// `det(I + diag(a, b) B)` for the counterexample matrix `B`; equals
/// `1 + 2(b - a)`.
pub fn counterexample_det(a: f64, b: f64) -> f64 {
    let bm = COUNTEREXAMPLE_B;
    let m00 = 1.0 + a * bm[0][0];
    let m01 = a * bm[0][1];
    let m10 = b * bm[1][0];
    let m11 = 1.0 + b * bm[1][1];
    m00 * m11 - m01 * m10
}

/// Compares the constant-term full-rank prediction for `P(W^(1), ..., W^(d))`
/// with the numerical rank of the realized matrix.
pub fn audit_mdrank(poly: &MultiPoly, ps: &[Partition], rel_tol: f64) -> Result<AuditReport> {
    audit_mdrank_named(poly, ps, rel_tol, "P")
}

fn audit_mdrank_named(
    poly: &MultiPoly,
    ps: &[Partition],
    rel_tol: f64,
    label: &str,
) -> Result<AuditReport> {
    let space = MultiIndexSpace::from_partitions(ps)?;
    if space.size() > MAX_AUDIT_SIZE {
        return Err(Error::SizeGuard {
            size: space.size(),
            max: MAX_AUDIT_SIZE,
        });
    }
    let predicted = full_rank_predicate(poly, ps)?;
    let m = lifted_poly_matrix(poly, ps)?;
    let znorms: Vec<f64> = ps.iter().map(|p| diff_matrix(p).norm_inf()).collect();
    let scale: f64 = poly
        .terms()
        .iter()
        .map(|(c, e)| {
            c.abs()
                * e.iter()
                    .zip(&znorms)
                    .map(|(&k, z)| z.powi(k as i32))
                    .product::<f64>()
        })
        .sum();
    let full = effective_rank(&m, scale, rel_tol) == space.size();
    Ok(AuditReport::new(
        format!("mdrank/{label}/dims={}", dims_label(space.dims())),
        AuditValue::Bool(predicted),
        AuditValue::Bool(full),
        rel_tol,
    ))
}

/// Checks `rank [W^(alpha)]^k = (n_alpha + 1 - k) N / (n_alpha + 1)` for
/// `k = 0..=n_alpha`.
pub fn audit_lifted_ladder(
    alpha: usize,
    ps: &[Partition],
    rel_tol: f64,
) -> Result<Vec<AuditReport>> {
    let w = lifted_diff(alpha, ps)?;
    let space = w.space().clone();
    if space.size() > MAX_AUDIT_SIZE {
        return Err(Error::SizeGuard {
            size: space.size(),
            max: MAX_AUDIT_SIZE,
        });
    }
    let n_alpha = space.dims()[alpha - 1];
    let wm = realize(&w);
    let mut power = DenseMatrix::identity(space.size());
    let mut reports = Vec::new();
    for k in 0..=n_alpha {
        let observed = numerical_rank(&power, rel_tol);
        let expected = (n_alpha + 1 - k) * space.size() / (n_alpha + 1);
        reports.push(AuditReport::new(
            format!(
                "lifted_ladder/dims={}/alpha={alpha}/k={k}",
                dims_label(space.dims())
            ),
            AuditValue::Int(expected),
            AuditValue::Int(observed),
            rel_tol,
        ));
        power = power.mul(&wm)?;
    }
    Ok(reports)
}

fn dims_label(dims: &[usize]) -> String {
    dims.iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join("x")
}

/// Seeded generator of random partitions.
///
/// Interior nodes are sorted i.i.d. uniform draws; a draw is rejected unless
/// every gap lies in `[h/3, 2h]` with `h = (b - a)/n`, and is at least
/// `1e-3 (b - a)`. Unbounded clustering makes `Z` so ill-conditioned that its
/// smallest nonzero singular value falls below any sensible rank threshold.
#[derive(Debug, Clone)]
pub struct PartitionSampler {
    rng: ChaCha8Rng,
}

impl PartitionSampler {
    pub const MIN_GAP_FRACTION: f64 = 1.0 / 3.0;
    pub const MAX_GAP_FRACTION: f64 = 2.0;
    pub const ABS_MIN_GAP: f64 = 1e-3;

    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn sample(&mut self, a: f64, b: f64, n: usize) -> Result<Partition> {
        if a.partial_cmp(&b) != Some(std::cmp::Ordering::Less) || n == 0 {
            return Err(Error::InvalidInput(format!(
                "cannot sample a partition of [{a}, {b}] with n = {n}"
            )));
        }
        if n == 1 {
            return Partition::new(vec![a, b]);
        }
        let width = b - a;
        let h = width / n as f64;
        let lo = (Self::MIN_GAP_FRACTION * h).max(Self::ABS_MIN_GAP * width);
        let hi = Self::MAX_GAP_FRACTION * h;
        let mut nodes = vec![0.0; n + 1];
        loop {
            nodes[0] = a;
            nodes[n] = b;
            for x in &mut nodes[1..n] {
                *x = a + width * self.rng.random::<f64>();
            }
            nodes[1..n].sort_by(f64::total_cmp);
            if nodes.windows(2).all(|w| {
                let gap = w[1] - w[0];
                gap >= lo && gap <= hi
            }) {
                return Partition::new(nodes);
            }
        }
    }
}

/// Polynomial family used by the multi-dimensional rank audit: every
/// polynomial in two symbols with one to three terms and per-symbol degree at
/// most 2. Coefficients cycle through `1, -2, 0.5` by term position.
pub fn small_poly_family() -> Vec<MultiPoly> {
    const COEFFS: [f64; 3] = [1.0, -2.0, 0.5];
    let monomials: Vec<Vec<u32>> = (0..=2u32)
        .flat_map(|a| (0..=2u32).map(move |b| vec![a, b]))
        .collect();
    let mut family = Vec::new();
    let m = monomials.len();
    for i in 0..m {
        family.push(vec![i]);
        for j in i + 1..m {
            family.push(vec![i, j]);
            for k in j + 1..m {
                family.push(vec![i, j, k]);
            }
        }
    }
    family
        .into_iter()
        .map(|idx| {
            let terms = idx
                .iter()
                .enumerate()
                .map(|(pos, &t)| (COEFFS[pos], monomials[t].clone()))
                .collect();
            MultiPoly::new(2, terms).expect("two symbols")
        })
        .collect()
}

fn poly_label(p: &MultiPoly) -> String {
    p.terms()
        .iter()
        .map(|(c, e)| {
            format!(
                "{c}z^({})",
                e.iter().map(u32::to_string).collect::<Vec<_>>().join(".")
            )
        })
        .collect::<Vec<_>>()
        .join("+")
}

/// A random polynomial-in-`Z` rank case on a partition of `[0, 1]`.
#[derive(Debug, Clone)]
pub struct PolyRankCase {
    pub partition: Partition,
    pub k: u32,
    /// `a_k, ..., a_m`, with `a_j = c_j / ||Z||_inf^j` and `|c_j| in [0.5, 2]`.
    pub coeffs: Vec<f64>,
}

impl PolyRankCase {
    pub fn expected_rank(&self) -> usize {
        self.partition.len() - self.k as usize
    }
}

/// Draws `count` random cases with `n in 2..=10`, `k in 0..=n` and degree
/// `m in k..=n`. Coefficients are normalized by powers of `||Z||_inf` so that
/// no single power of `Z` swamps the others.
pub fn random_poly_rank_cases(
    sampler: &mut PartitionSampler,
    count: usize,
) -> Result<Vec<PolyRankCase>> {
    let mut cases = Vec::with_capacity(count);
    for _ in 0..count {
        let n = sampler.rng().random_range(2..=10usize);
        let partition = sampler.sample(0.0, 1.0, n)?;
        let k = sampler.rng().random_range(0..=n as u32);
        let m = sampler.rng().random_range(k..=n as u32);
        let znorm = diff_matrix(&partition).norm_inf();
        let coeffs = (k..=m)
            .map(|j| {
                let rng = sampler.rng();
                let magnitude = rng.random_range(0.5..=2.0);
                let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
                sign * magnitude / znorm.powi(j as i32)
            })
            .collect();
        cases.push(PolyRankCase {
            partition,
            k,
            coeffs,
        });
    }
    Ok(cases)
}

/// Everything the default audit suite runs, in order. Random cases draw from
/// a single [`PartitionSampler`] seeded with `seed`.
pub fn default_suite(seed: u64, rel_tol: f64) -> Result<Vec<AuditReport>> {
    let mut reports = Vec::new();
    let mut sampler = PartitionSampler::new(seed);

    // rank Z = n and Z^{n+1} = 0
    let fixed = [
        ("nodes=0.1", Partition::new(vec![0.0, 1.0])?),
        ("nodes=0.1.2", Partition::new(vec![0.0, 1.0, 2.0])?),
        ("uniform[0.1]/n=7", uniform_partition(0.0, 1.0, 7)?),
    ];
    for (label, p) in &fixed {
        let (r, z) = audit_lemma1_named(p, rel_tol, label)?;
        reports.extend([r, z]);
    }
    for i in 0..100 {
        let n = sampler.rng().random_range(2..=10usize);
        let p = sampler.sample(0.0, 1.0, n)?;
        let (r, z) = audit_lemma1_named(&p, rel_tol, &format!("random-{i:03}/n={n}"))?;
        reports.extend([r, z]);
    }

    // Rank ladders
    let jordan = DenseMatrix::from_rows(&[&[0.0, 1.0], &[0.0, 0.0]])?;
    reports.extend(audit_rank_ladder_named(&jordan, rel_tol, "jordan2")?);
    for (label, p) in &fixed[..2] {
        reports.extend(audit_rank_ladder_named(
            &diff_matrix(p),
            rel_tol,
            &format!("Z/{label}"),
        )?);
    }
    for n in 3..=6 {
        let p = uniform_partition(-1.0, 1.0, n)?;
        reports.extend(audit_rank_ladder_named(
            &diff_matrix(&p),
            rel_tol,
            &format!("Z/uniform[-1.1]/n={n}"),
        )?);
    }

    // rank P(Z) = rank Z^k = n + 1 - k
    let z5 = diff_matrix(&uniform_partition(0.0, 1.0, 4)?);
    let z3 = diff_matrix(&Partition::new(vec![0.0, 1.0, 2.0])?);
    let b = DenseMatrix::from_rows(&[&COUNTEREXAMPLE_B[0], &COUNTEREXAMPLE_B[1]])?;
    reports.push(audit_theorem1_named(
        &z5,
        &[1.0, 0.0, 1.0],
        0,
        rel_tol,
        "Z5/z^2+1",
    )?);
    reports.push(audit_theorem1_named(&z3, &[1.0], 2, rel_tol, "Z3/z^2")?);
    reports.push(audit_theorem1_named(&b, &[3.0], 1, rel_tol, "B/3z")?);
    for (i, case) in random_poly_rank_cases(&mut sampler, 50)?.iter().enumerate() {
        let z = diff_matrix(&case.partition);
        let label = format!("random-{i:03}/n={}", case.partition.n());
        let report = audit_theorem1_named(&z, &case.coeffs, case.k, rel_tol, &label)?;
        // The theory also pins the value: rank Z^k = n + 1 - k.
        reports.push(AuditReport::new(
            report.case_name.replace("theorem1/", "theorem3/"),
            AuditValue::Int(case.expected_rank()),
            report.observed,
            rel_tol,
        ));
        reports.push(report);
    }

    // Variable-coefficient counterexample
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        for j in 0..20 {
            let a = -2.0 + 4.0 * i as f64 / 19.0;
            let b = -2.0 + 4.0 * j as f64 / 19.0;
            worst = worst.max((counterexample_det(a, b) - (1.0 + 2.0 * (b - a))).abs());
        }
    }
    reports.push(AuditReport::new(
        "counterexample_det/grid20x20",
        AuditValue::Bool(true),
        AuditValue::Bool(worst <= DET_TOL),
        DET_TOL,
    ));
    reports.push(AuditReport::new(
        "counterexample_det/singular(a=1.b=0.5)",
        AuditValue::Bool(true),
        AuditValue::Bool(counterexample_det(1.0, 0.5).abs() <= DET_TOL),
        DET_TOL,
    ));

    // Multi-dimensional ranks
    for n1 in 1..=4 {
        for n2 in 1..=4 {
            let ps = vec![
                uniform_partition(-1.0, 1.0, n1)?,
                uniform_partition(-1.0, 1.0, n2)?,
            ];
            for alpha in 1..=2 {
                reports.extend(audit_lifted_ladder(alpha, &ps, rel_tol)?);
            }
        }
    }
    let family = small_poly_family();
    for dims in [(1, 1), (1, 2), (2, 2), (2, 3), (3, 3)] {
        let ps = vec![
            uniform_partition(-1.0, 1.0, dims.0)?,
            uniform_partition(-1.0, 1.0, dims.1)?,
        ];
        for poly in &family {
            reports.push(audit_mdrank_named(poly, &ps, rel_tol, &poly_label(poly))?);
        }
    }
    Ok(reports)
}
