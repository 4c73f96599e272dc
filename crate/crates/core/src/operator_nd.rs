//! Tensor-grid lifting of one-dimensional operators.
//!
//! Grid nodes are addressed by multi-indices `(i_1, ..., i_d)` with
//! `0 <= i_a <= n_a`, linearized by
//!
//! ```text
//! star(i) = i_d (n_1+1)...(n_{d-1}+1) + ... + i_2 (n_1+1) + i_1 + 1
//! ```
//!
//! so dimension 1 varies fastest and linear indices are 1-based. A lifted
//! operator keeps one factor per dimension and is realized entrywise:
//! `M[star(i), star(j)] = prod_a factor_a[i_a, j_a]`. Under this ordering the
//! realized matrix equals the ordinary Kronecker product of the factors taken
//! in reverse dimension order, `F_d ⊗ ... ⊗ F_1`.

use crate::error::{Error, Result};
use crate::interp::Partition;
use crate::linalg::DenseMatrix;
use crate::operator_1d::{diff_matrix, mult_matrix};

/// Index set `{0..=n_1} x ... x {0..=n_d}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiIndexSpace {
    dims: Vec<usize>,
    size: usize,
}

impl MultiIndexSpace {
    /// `dims` holds the per-dimension maxima `n_a`.
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidInput("need at least one dimension".into()));
        }
        if let Some(a) = dims.iter().position(|&n| n == 0) {
            return Err(Error::InvalidInput(format!(
                "dimension {} has n = 0; each dimension needs n >= 1",
                a + 1
            )));
        }
        let size = dims.iter().map(|n| n + 1).product();
        Ok(Self { dims, size })
    }

    pub fn from_partitions(ps: &[Partition]) -> Result<Self> {
        Self::new(ps.iter().map(Partition::n).collect())
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn ndim(&self) -> usize {
        self.dims.len()
    }

    /// Total number of grid nodes `N = prod (n_a + 1)`.
    pub fn size(&self) -> usize {
        self.size
    }

    /// 1-based linear index of a multi-index.
    pub fn star(&self, index: &[usize]) -> Result<usize> {
        if index.len() != self.dims.len() {
            return Err(Error::InvalidInput(format!(
                "multi-index has {} components, space has {} dimensions",
                index.len(),
                self.dims.len()
            )));
        }
        let mut linear = 0;
        let mut stride = 1;
        for (a, (&i, &n)) in index.iter().zip(&self.dims).enumerate() {
            if i > n {
                return Err(Error::InvalidInput(format!(
                    "component {} of multi-index is {i}, exceeds n = {n}",
                    a + 1
                )));
            }
            linear += i * stride;
            stride *= n + 1;
        }
        Ok(linear + 1)
    }

    /// Inverse of [`MultiIndexSpace::star`].
    pub fn unstar(&self, linear: usize) -> Result<Vec<usize>> {
        if linear == 0 || linear > self.size {
            return Err(Error::InvalidInput(format!(
                "linear index {linear} out of range 1..={}",
                self.size
            )));
        }
        let mut rest = linear - 1;
        Ok(self
            .dims
            .iter()
            .map(|&n| {
                let i = rest % (n + 1);
                rest /= n + 1;
                i
            })
            .collect())
    }

    /// Multi-indices in linear order.
    pub fn iter(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (1..=self.size).map(|k| self.unstar(k).expect("in range"))
    }
}

/// Per-dimension factor of a lifted operator.
#[derive(Debug, Clone, PartialEq)]
pub enum Factor {
    Identity,
    Matrix(DenseMatrix),
}

impl Factor {
    fn entry(&self, i: usize, j: usize) -> f64 {
        match self {
            Factor::Identity => {
                if i == j {
                    1.0
                } else {
                    0.0
                }
            }
            Factor::Matrix(m) => m.get(i, j),
        }
    }

    /// Explicit matrix of the given dimension.
    pub fn to_matrix(&self, dim: usize) -> DenseMatrix {
        match self {
            Factor::Identity => DenseMatrix::identity(dim),
            Factor::Matrix(m) => m.clone(),
        }
    }

    fn compose(&self, other: &Factor) -> Factor {
        match (self, other) {
            (Factor::Identity, f) | (f, Factor::Identity) => f.clone(),
            (Factor::Matrix(a), Factor::Matrix(b)) => {
                Factor::Matrix(a.mul(b).expect("factor dimensions checked"))
            }
        }
    }
}

/// Operator on the tensor grid that acts factor-wise in each dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedOperator {
    space: MultiIndexSpace,
    factors: Vec<Factor>,
}

impl LiftedOperator {
    pub fn new(space: MultiIndexSpace, factors: Vec<Factor>) -> Result<Self> {
        if factors.len() != space.ndim() {
            return Err(Error::DimensionMismatch(format!(
                "{} factors for a {}-dimensional space",
                factors.len(),
                space.ndim()
            )));
        }
        for (a, (f, &n)) in factors.iter().zip(space.dims()).enumerate() {
            if let Factor::Matrix(m) = f {
                if m.rows() != n + 1 || m.cols() != n + 1 {
                    return Err(Error::DimensionMismatch(format!(
                        "factor {} is {}x{}, expected {}x{}",
                        a + 1,
                        m.rows(),
                        m.cols(),
                        n + 1,
                        n + 1
                    )));
                }
            }
        }
        Ok(Self { space, factors })
    }

    pub fn identity(space: MultiIndexSpace) -> Self {
        let factors = vec![Factor::Identity; space.ndim()];
        Self { space, factors }
    }

    pub fn space(&self) -> &MultiIndexSpace {
        &self.space
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// Same operator with `factor` placed in dimension `alpha` (1-based).
    fn with_factor(space: MultiIndexSpace, alpha: usize, factor: DenseMatrix) -> Result<Self> {
        check_alpha(alpha, space.ndim())?;
        let mut factors = vec![Factor::Identity; space.ndim()];
        factors[alpha - 1] = Factor::Matrix(factor);
        Self::new(space, factors)
    }
}

fn check_alpha(alpha: usize, d: usize) -> Result<()> {
    if alpha == 0 || alpha > d {
        return Err(Error::InvalidInput(format!(
            "dimension index {alpha} out of range 1..={d}"
        )));
    }
    Ok(())
}

/// `∂/∂x^alpha` on the grid spanned by `ps`; `alpha` is 1-based.
pub fn lifted_diff(alpha: usize, ps: &[Partition]) -> Result<LiftedOperator> {
    let space = MultiIndexSpace::from_partitions(ps)?;
    check_alpha(alpha, ps.len())?;
    LiftedOperator::with_factor(space, alpha, diff_matrix(&ps[alpha - 1]))
}

/// Multiplication by `x^alpha` on the grid spanned by `ps`; `alpha` is 1-based.
pub fn lifted_mult(alpha: usize, ps: &[Partition]) -> Result<LiftedOperator> {
    let space = MultiIndexSpace::from_partitions(ps)?;
    check_alpha(alpha, ps.len())?;
    LiftedOperator::with_factor(space, alpha, mult_matrix(&ps[alpha - 1]))
}

/// Concrete `N x N` matrix, built entrywise from the factors.
pub fn realize(op: &LiftedOperator) -> DenseMatrix {
    let space = &op.space;
    let indices: Vec<Vec<usize>> = space.iter().collect();
    DenseMatrix::from_fn(space.size(), space.size(), |r, c| {
        let (i, j) = (&indices[r], &indices[c]);
        let mut value = 1.0;
        for (a, f) in op.factors.iter().enumerate() {
            value *= f.entry(i[a], j[a]);
            if value == 0.0 {
                break;
            }
        }
        value
    })
}

/// Factor-wise product `A ∘ B`, so that `realize(A ∘ B) = realize(A) realize(B)`.
pub fn lifted_compose(a: &LiftedOperator, b: &LiftedOperator) -> Result<LiftedOperator> {
    if a.space != b.space {
        return Err(Error::DimensionMismatch(format!(
            "cannot compose operators on spaces {:?} and {:?}",
            a.space.dims(),
            b.space.dims()
        )));
    }
    let factors = a
        .factors
        .iter()
        .zip(&b.factors)
        .map(|(fa, fb)| fa.compose(fb))
        .collect();
    Ok(LiftedOperator {
        space: a.space.clone(),
        factors,
    })
}

/// `f` sampled at the grid nodes in linear order (first coordinate fastest).
pub fn grid_eval(f: impl Fn(&[f64]) -> f64, ps: &[Partition]) -> Result<Vec<f64>> {
    let space = MultiIndexSpace::from_partitions(ps)?;
    let mut point = vec![0.0; ps.len()];
    Ok(space
        .iter()
        .map(|idx| {
            for (a, &i) in idx.iter().enumerate() {
                point[a] = ps[a].nodes()[i];
            }
            f(&point)
        })
        .collect())
}

/// Polynomial in `d` commuting symbols, stored as `(coefficient, exponents)`
/// terms. Repeated exponent vectors are summed.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiPoly {
    nvars: usize,
    terms: Vec<(f64, Vec<u32>)>,
}

impl MultiPoly {
    pub fn new(nvars: usize, terms: Vec<(f64, Vec<u32>)>) -> Result<Self> {
        if nvars == 0 {
            return Err(Error::InvalidInput(
                "polynomial needs at least one symbol".into(),
            ));
        }
        if let Some((_, e)) = terms.iter().find(|(_, e)| e.len() != nvars) {
            return Err(Error::InvalidInput(format!(
                "exponent vector {e:?} does not have {nvars} entries"
            )));
        }
        Ok(Self { nvars, terms })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(f64, Vec<u32>)] {
        &self.terms
    }

    pub fn constant_term(&self) -> f64 {
        self.terms
            .iter()
            .filter(|(_, e)| e.iter().all(|&k| k == 0))
            .map(|(c, _)| c)
            .sum()
    }
}

/// `P(W^(1), ..., W^(d))` realized as an `N x N` matrix. Each monomial is
/// composed factor-wise before realization.
pub fn lifted_poly_matrix(poly: &MultiPoly, ps: &[Partition]) -> Result<DenseMatrix> {
    if poly.nvars() != ps.len() {
        return Err(Error::DimensionMismatch(format!(
            "polynomial in {} symbols on a {}-dimensional grid",
            poly.nvars(),
            ps.len()
        )));
    }
    let space = MultiIndexSpace::from_partitions(ps)?;
    let zs: Vec<DenseMatrix> = ps.iter().map(diff_matrix).collect();
    let mut total = DenseMatrix::zeros(space.size(), space.size());
    for (coeff, exps) in poly.terms() {
        let factors = exps
            .iter()
            .zip(&zs)
            .map(|(&k, z)| {
                if k == 0 {
                    Factor::Identity
                } else {
                    Factor::Matrix(z.pow(k).expect("square"))
                }
            })
            .collect();
        let term = realize(&LiftedOperator::new(space.clone(), factors)?);
        total = total.add(&term.scale(*coeff))?;
    }
    Ok(total)
}

/// Full-rank prediction for `P(W^(1), ..., W^(d))`: full rank exactly when
/// the constant term of `P` is nonzero.
pub fn full_rank_predicate(poly: &MultiPoly, ps: &[Partition]) -> Result<bool> {
    if poly.nvars() != ps.len() {
        return Err(Error::DimensionMismatch(format!(
            "polynomial in {} symbols on a {}-dimensional grid",
            poly.nvars(),
            ps.len()
        )));
    }
    Ok(poly.constant_term() != 0.0)
}
