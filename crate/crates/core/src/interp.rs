//! Partitions of an interval, their π-weights, and Lagrange interpolation in
//! one dimension and on tensor grids.
//!
//! The basis is evaluated with the plain product formula
//!
//! ```text
//! l_k(x) = prod_{m != k} (x - x_m) / pi_k,    pi_k = prod_{m != k} (x_k - x_m)
//! ```
//!
//! rather than the barycentric rearrangement. Points outside `[a, b]` are
//! accepted; every basis function is a global polynomial.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::operator_nd::MultiIndexSpace;

/// Strictly increasing nodes `a = x_0 < x_1 < ... < x_n = b`, `n >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    nodes: Vec<f64>,
}

impl Partition {
    pub fn new(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "a partition needs at least 2 nodes, got {}",
                nodes.len()
            )));
        }
        if nodes.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("partition nodes must be finite".into()));
        }
        if let Some(i) = nodes.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput(format!(
                "partition nodes must be strictly increasing (x_{} = {} >= x_{} = {})",
                i,
                nodes[i],
                i + 1,
                nodes[i + 1]
            )));
        }
        Ok(Self { nodes })
    }

    /// Left endpoint.
    pub fn a(&self) -> f64 {
        self.nodes[0]
    }

    /// Right endpoint.
    pub fn b(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    /// Number of subintervals; there are `n() + 1` nodes.
    pub fn n(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// One node per line, shortest round-trip representation.
    pub fn to_node_file(&self) -> String {
        let mut out = String::new();
        for x in &self.nodes {
            writeln!(out, "{x:?}").unwrap();
        }
        out
    }

    /// Parses a node file; blank lines and `#` comments are skipped.
    pub fn from_node_file(text: &str) -> Result<Self> {
        let mut nodes = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let x = line.parse::<f64>().map_err(|_| {
                Error::InvalidInput(format!(
                    "node file line {}: bad number {line:?}",
                    lineno + 1
                ))
            })?;
            nodes.push(x);
        }
        Self::new(nodes)
    }
}

/// Nodes `x_i = a + (i/n)(b - a)`, `i = 0..=n`.
pub fn uniform_partition(a: f64, b: f64, n: usize) -> Result<Partition> {
    if a.partial_cmp(&b) != Some(std::cmp::Ordering::Less) {
        return Err(Error::InvalidInput(format!(
            "uniform partition needs a < b, got a = {a}, b = {b}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidInput("uniform partition needs n >= 1".into()));
    }
    let mut nodes: Vec<f64> = (0..=n)
        .map(|i| a + (i as f64 / n as f64) * (b - a))
        .collect();
    nodes[n] = b;
    Partition::new(nodes)
}

/// `pi_k = prod_{m != k} (x_k - x_m)` for each node of a partition.
#[derive(Debug, Clone, PartialEq)]
pub struct PiWeights(Vec<f64>);

impl PiWeights {
    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

pub fn pi_weights(p: &Partition) -> PiWeights {
    let x = p.nodes();
    PiWeights(
        (0..x.len())
            .map(|k| {
                x.iter()
                    .enumerate()
                    .filter(|&(m, _)| m != k)
                    .map(|(_, &xm)| x[k] - xm)
                    .product()
            })
            .collect(),
    )
}

/// Evaluates the `k`-th Lagrange basis polynomial at `x`.
pub fn lagrange_eval(p: &Partition, k: usize, x: f64) -> Result<f64> {
    if k > p.n() {
        return Err(Error::InvalidInput(format!(
            "basis index {k} out of range 0..={}",
            p.n()
        )));
    }
    Ok(basis_value(p.nodes(), pi_weights(p).values()[k], k, x))
}

fn basis_value(nodes: &[f64], pi_k: f64, k: usize, x: f64) -> f64 {
    let numerator: f64 = nodes
        .iter()
        .enumerate()
        .filter(|&(m, _)| m != k)
        .map(|(_, &xm)| x - xm)
        .product();
    numerator / pi_k
}

/// All basis values `l_0(x), ..., l_n(x)`.
pub fn basis_values(p: &Partition, x: f64) -> Vec<f64> {
    let pi = pi_weights(p);
    (0..p.len())
        .map(|k| basis_value(p.nodes(), pi.values()[k], k, x))
        .collect()
}

/// `sum_i values[i] * l_i(x)`.
pub fn interpolate_1d(p: &Partition, values: &[f64], x: f64) -> Result<f64> {
    if values.len() != p.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} values for a partition of {} nodes",
            values.len(),
            p.len()
        )));
    }
    Ok(basis_values(p, x)
        .iter()
        .zip(values)
        .map(|(l, v)| l * v)
        .sum())
}

/// Interpolates grid values ordered by the multi-index linearization
/// (dimension 1 fastest) at an arbitrary point.
pub fn tensor_interpolate(ps: &[Partition], values: &[f64], point: &[f64]) -> Result<f64> {
    let space = MultiIndexSpace::from_partitions(ps)?;
    if values.len() != space.size() {
        return Err(Error::DimensionMismatch(format!(
            "{} values for a grid of {} nodes",
            values.len(),
            space.size()
        )));
    }
    if point.len() != ps.len() {
        return Err(Error::DimensionMismatch(format!(
            "point has {} coordinates, grid has {} dimensions",
            point.len(),
            ps.len()
        )));
    }
    let basis: Vec<Vec<f64>> = ps
        .iter()
        .zip(point)
        .map(|(p, &x)| basis_values(p, x))
        .collect();
    Ok(space
        .iter()
        .zip(values)
        .map(|(idx, v)| {
            let weight: f64 = idx.iter().zip(&basis).map(|(&i, l)| l[i]).product();
            weight * v
        })
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(nodes: &[f64]) -> Partition {
        Partition::new(nodes.to_vec()).unwrap()
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::new(vec![0.0]).is_err());
        assert!(Partition::new(vec![0.0, 0.0]).is_err());
        assert!(Partition::new(vec![1.0, 0.0]).is_err());
        assert!(Partition::new(vec![0.0, f64::NAN]).is_err());
        let p = part(&[-1.0, 0.5, 2.0]);
        assert_eq!((p.a(), p.b(), p.n()), (-1.0, 2.0, 2));
    }

    #[test]
    fn uniform_partition_examples() {
        assert_eq!(uniform_partition(0.0, 1.0, 1).unwrap().nodes(), &[0.0, 1.0]);
        assert_eq!(
            uniform_partition(-1.0, 1.0, 2).unwrap().nodes(),
            &[-1.0, 0.0, 1.0]
        );
        let half_pi = std::f64::consts::FRAC_PI_2;
        let p = uniform_partition(0.001, half_pi, 4).unwrap();
        let step = (half_pi - 0.001) / 4.0;
        assert_eq!(p.nodes()[0], 0.001);
        assert!((p.nodes()[1] - (0.001 + step)).abs() < 1e-15);
        assert_eq!(p.nodes()[4], half_pi);
        assert!(uniform_partition(1.0, 1.0, 3).is_err());
        assert!(uniform_partition(2.0, 1.0, 3).is_err());
        assert!(uniform_partition(0.0, 1.0, 0).is_err());
    }

    #[test]
    fn pi_weight_examples() {
        assert_eq!(pi_weights(&part(&[0.0, 1.0])).values(), &[-1.0, 1.0]);
        assert_eq!(
            pi_weights(&part(&[0.0, 1.0, 2.0])).values(),
            &[2.0, -1.0, 2.0]
        );
        assert_eq!(
            pi_weights(&part(&[-1.0, 0.0, 1.0])).values(),
            &[2.0, -1.0, 2.0]
        );
    }

    #[test]
    fn lagrange_examples() {
        let p = part(&[0.0, 1.0, 2.0]);
        for k in 0..3 {
            for (j, &xj) in p.nodes().iter().enumerate() {
                let expected = if j == k { 1.0 } else { 0.0 };
                assert_eq!(lagrange_eval(&p, k, xj).unwrap(), expected);
            }
        }
        assert!((lagrange_eval(&p, 1, 0.5).unwrap() - 0.75).abs() < 1e-15);
        assert!(lagrange_eval(&p, 3, 0.5).is_err());
        let sum: f64 = basis_values(&p, 0.37).iter().sum();
        assert!((sum - 1.0).abs() < 1e-15);
    }

    #[test]
    fn extrapolation_is_allowed() {
        let p = part(&[0.0, 1.0, 2.0]);
        let v: Vec<f64> = p.nodes().iter().map(|x| x * x).collect();
        assert!((interpolate_1d(&p, &v, 3.0).unwrap() - 9.0).abs() < 1e-12);
    }

    #[test]
    fn interpolate_examples() {
        let p = part(&[0.0, 1.0, 2.0]);
        assert!((interpolate_1d(&p, &[0.0, 1.0, 4.0], 1.5).unwrap() - 2.25).abs() < 1e-15);
        assert!(
            (interpolate_1d(&part(&[0.0, 1.0]), &[2.0, 1.0], 0.5).unwrap() - 1.5).abs() < 1e-15
        );
        assert_eq!(interpolate_1d(&p, &[3.0, -1.0, 7.0], 1.0).unwrap(), -1.0);
        assert!(interpolate_1d(&p, &[1.0, 2.0], 0.5).is_err());
    }

    #[test]
    fn tensor_interpolate_examples() {
        let ps = vec![part(&[0.0, 1.0]), part(&[0.0, 1.0])];
        // f(x, y) = xy in x-fastest order: (0,0), (1,0), (0,1), (1,1)
        let values = [0.0, 0.0, 0.0, 1.0];
        assert!((tensor_interpolate(&ps, &values, &[0.5, 0.5]).unwrap() - 0.25).abs() < 1e-15);
        assert_eq!(tensor_interpolate(&ps, &values, &[1.0, 1.0]).unwrap(), 1.0);
        assert!(tensor_interpolate(&ps, &values[..3], &[0.5, 0.5]).is_err());
        assert!(tensor_interpolate(&ps, &values, &[0.5]).is_err());
    }

    #[test]
    fn tensor_interpolate_reduces_to_1d() {
        let p = part(&[-1.0, -0.2, 0.4, 1.0]);
        let values = [0.3, -1.2, 2.0, 0.7];
        for x in [-0.9, 0.0, 0.33, 1.4] {
            let a = tensor_interpolate(std::slice::from_ref(&p), &values, &[x]).unwrap();
            let b = interpolate_1d(&p, &values, x).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn node_file_round_trip() {
        let p = part(&[0.001, 0.1 + 0.2, std::f64::consts::FRAC_PI_2]);
        let text = p.to_node_file();
        assert_eq!(text.lines().count(), 3);
        assert_eq!(Partition::from_node_file(&text).unwrap(), p);
        assert!(Partition::from_node_file("0\nzero\n").is_err());
        assert_eq!(
            Partition::from_node_file("# nodes\n0\n\n1 # right\n").unwrap(),
            part(&[0.0, 1.0])
        );
    }
}
