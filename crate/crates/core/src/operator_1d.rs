//! Matrix representations of `d/dx` and of multiplication by `x` on a
//! partition, and of polynomial-coefficient operators built from them.
//!
//! `Z` maps nodal values of a function to nodal values of the derivative of
//! its interpolant, so it is exact on polynomials of degree at most `n` and
//! satisfies `Z^{n+1} = 0`.

use crate::error::{Error, Result};
use crate::interp::{pi_weights, Partition};
use crate::linalg::DenseMatrix;

/// Real polynomial with coefficients in ascending order of degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial(Vec<f64>);

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self(coeffs)
    }

    pub fn constant(c: f64) -> Self {
        Self(vec![c])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0.0)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        if self.0.len() <= 1 {
            return Self(vec![0.0]);
        }
        Self(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| i as f64 * c)
                .collect(),
        )
    }
}

/// One term `coeff(x) * (d/dx)^order`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorTerm {
    pub coeff: Polynomial,
    pub order: u32,
}

/// Formal sum `sum_k a_k(x) (d/dx)^k` with polynomial coefficients and
/// distinct orders.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorPoly1D {
    terms: Vec<OperatorTerm>,
}

impl OperatorPoly1D {
    pub fn new(terms: Vec<OperatorTerm>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidInput(
                "operator needs at least one term".into(),
            ));
        }
        for (i, t) in terms.iter().enumerate() {
            if t.coeff.is_zero() {
                return Err(Error::InvalidInput(format!(
                    "term {i} (order {}) has an all-zero coefficient",
                    t.order
                )));
            }
            if terms[..i].iter().any(|u| u.order == t.order) {
                return Err(Error::InvalidInput(format!(
                    "order {} appears more than once",
                    t.order
                )));
            }
        }
        Ok(Self { terms })
    }

    /// Convenience constructor from `(coefficients, order)` pairs.
    pub fn from_pairs(pairs: &[(&[f64], u32)]) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .map(|(c, order)| OperatorTerm {
                    coeff: Polynomial::new(c.to_vec()),
                    order: *order,
                })
                .collect(),
        )
    }

    pub fn terms(&self) -> &[OperatorTerm] {
        &self.terms
    }
}

/// `Z_jk = dl_k/dx (x_j)` from the closed form:
/// `Z_jj = sum_{m != j} 1/(x_j - x_m)`, `Z_jk = (pi_j/pi_k) / (x_j - x_k)`.
pub fn diff_matrix(p: &Partition) -> DenseMatrix {
    let x = p.nodes();
    let pi = pi_weights(p);
    let pi = pi.values();
    DenseMatrix::from_fn(x.len(), x.len(), |j, k| {
        if j == k {
            x.iter()
                .enumerate()
                .filter(|&(m, _)| m != j)
                .map(|(_, &xm)| 1.0 / (x[j] - xm))
                .sum()
        } else {
            (pi[j] / pi[k]) / (x[j] - x[k])
        }
    })
}

/// `X = diag(x_0, ..., x_n)`.
pub fn mult_matrix(p: &Partition) -> DenseMatrix {
    DenseMatrix::diag(p.nodes())
}

/// Assembles `sum coeff(X) Z^order`.
///
/// Nothing is promised about invertibility: with non-constant coefficients
/// the result can lose rank even when the zeroth-order coefficient does not
/// vanish.
pub fn apply_operator_poly(op: &OperatorPoly1D, p: &Partition) -> DenseMatrix {
    let z = diff_matrix(p);
    let size = p.len();
    let mut total = DenseMatrix::zeros(size, size);
    for term in op.terms() {
        let scale: Vec<f64> = p.nodes().iter().map(|&x| term.coeff.eval(x)).collect();
        let power = z.pow(term.order).expect("Z is square");
        let scaled = DenseMatrix::from_fn(size, size, |i, j| scale[i] * power.get(i, j));
        total = total.add(&scaled).expect("same dimensions");
    }
    total
}

/// Nodal derivative of the interpolant of `values`.
pub fn differentiate_values(p: &Partition, values: &[f64]) -> Result<Vec<f64>> {
    if values.len() != p.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} values for a partition of {} nodes",
            values.len(),
            p.len()
        )));
    }
    diff_matrix(p).mul_vec(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interp::uniform_partition;

    fn part(nodes: &[f64]) -> Partition {
        Partition::new(nodes.to_vec()).unwrap()
    }

    fn assert_matrix_close(a: &DenseMatrix, b: &[&[f64]], tol: f64) {
        let b = DenseMatrix::from_rows(b).unwrap();
        assert_eq!((a.rows(), a.cols()), (b.rows(), b.cols()));
        for (x, y) in a.as_slice().iter().zip(b.as_slice()) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn horner() {
        let q = Polynomial::new(vec![1.0, -2.0, 3.0]);
        assert_eq!(q.eval(2.0), 9.0);
        assert_eq!(q.derivative(), Polynomial::new(vec![-2.0, 6.0]));
        assert_eq!(
            Polynomial::constant(4.0).derivative(),
            Polynomial::new(vec![0.0])
        );
    }

    #[test]
    fn diff_matrix_two_nodes() {
        assert_matrix_close(
            &diff_matrix(&part(&[0.0, 1.0])),
            &[&[-1.0, 1.0], &[-1.0, 1.0]],
            0.0,
        );
    }

    #[test]
    fn diff_matrix_three_nodes() {
        assert_matrix_close(
            &diff_matrix(&part(&[0.0, 1.0, 2.0])),
            &[&[-1.5, 2.0, -0.5], &[-0.5, 0.0, 0.5], &[0.5, -2.0, 1.5]],
            1e-15,
        );
    }

    #[test]
    fn diff_matrix_rows_sum_to_zero() {
        let p = part(&[-0.7, -0.1, 0.05, 0.6, 1.3]);
        let z = diff_matrix(&p);
        for i in 0..z.rows() {
            let s: f64 = z.row(i).iter().sum();
            assert!(s.abs() < 1e-12 * z.norm_inf(), "row {i}: {s}");
        }
    }

    #[test]
    fn mult_matrix_examples() {
        let p = part(&[0.0, 1.0, 2.0]);
        assert_eq!(mult_matrix(&p), DenseMatrix::diag(&[0.0, 1.0, 2.0]));
        assert_eq!(
            mult_matrix(&part(&[-1.0, 1.0])),
            DenseMatrix::diag(&[-1.0, 1.0])
        );
        assert_eq!(mult_matrix(&p).mul_vec(&[1.0; 3]).unwrap(), p.nodes());
    }

    #[test]
    fn operator_validation() {
        assert!(OperatorPoly1D::new(vec![]).is_err());
        assert!(OperatorPoly1D::from_pairs(&[(&[0.0, 0.0], 1)]).is_err());
        assert!(OperatorPoly1D::from_pairs(&[(&[1.0], 1), (&[2.0], 1)]).is_err());
    }

    #[test]
    fn apply_operator_poly_examples() {
        let p = uniform_partition(0.0, 1.0, 4).unwrap();
        let z = diff_matrix(&p);
        let op = OperatorPoly1D::from_pairs(&[(&[1.0], 2), (&[1.0], 0)]).unwrap();
        let expected = z.pow(2).unwrap().add(&DenseMatrix::identity(5)).unwrap();
        assert_eq!(apply_operator_poly(&op, &p), expected);

        let op = OperatorPoly1D::from_pairs(&[(&[1.0], 1)]).unwrap();
        assert_eq!(
            apply_operator_poly(&op, &part(&[0.0, 1.0])),
            diff_matrix(&part(&[0.0, 1.0]))
        );

        let p3 = part(&[0.0, 1.0, 2.0]);
        let op = OperatorPoly1D::from_pairs(&[(&[0.0, 1.0], 0)]).unwrap();
        assert_eq!(apply_operator_poly(&op, &p3), mult_matrix(&p3));
    }

    #[test]
    fn differentiate_values_examples() {
        let p = part(&[0.0, 1.0, 2.0]);
        let d = differentiate_values(&p, &[0.0, 1.0, 4.0]).unwrap();
        for (got, want) in d.iter().zip([0.0, 2.0, 4.0]) {
            assert!((got - want).abs() < 1e-14);
        }
        assert!(differentiate_values(&p, &[5.0; 3])
            .unwrap()
            .iter()
            .all(|v| v.abs() < 1e-14));
        let q = part(&[-0.3, 0.2, 0.25, 0.9]);
        let ones = differentiate_values(&q, q.nodes()).unwrap();
        assert!(ones.iter().all(|v| (v - 1.0).abs() < 1e-12));
        assert!(differentiate_values(&p, &[1.0]).is_err());
    }
}
