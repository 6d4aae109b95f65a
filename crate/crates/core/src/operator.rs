//! Dense complex operator arithmetic.
//!
//! Everything here is plain row-major `Vec<Complex64>` storage; the largest
//! matrices in the suites are a few thousand on a side, so naive O(n^3)
//! products are fine and keep the arithmetic bit-deterministic.

use num_complex::Complex64;

use crate::error::{LabError, Result};
use crate::rng::SplitMix64;

/// Norm above which `op_exp` refuses to run rather than risk overflow in
/// the squaring phase.
pub const EXP_NORM_LIMIT: f64 = 5.0e4;

/// Relative tolerance of the Hermitian flag check.
pub const HERMITIAN_TOL: f64 = 1e-13;

#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    dim: usize,
    data: Vec<Complex64>,
    pub label: Option<String>,
}

impl Operator {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "dim must be >= 1");
        Self { dim, data: vec![Complex64::new(0.0, 0.0); dim * dim], label: None }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.data[i * dim + j] = f(i, j);
            }
        }
        m
    }

    pub fn diag(entries: &[Complex64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, e) in entries.iter().enumerate() {
            m.data[i * entries.len() + i] = *e;
        }
        m
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(LabError::DimensionMismatch(self.dim, other.dim));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Self { dim: self.dim, data, label: None }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Self { dim: self.dim, data, label: None }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let data = self.data.iter().map(|a| a * s).collect();
        Self { dim: self.dim, data, label: None }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn dagger(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    pub fn fro_norm(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Hermitian flag check: max|E - E^dagger| <= 1e-13 * (1 + max|E|).
    pub fn is_hermitian(&self) -> bool {
        let d = self.sub(&self.dagger());
        d.max_abs() <= HERMITIAN_TOL * (1.0 + self.max_abs())
    }

    pub fn is_anti_hermitian(&self) -> bool {
        let d = self.add(&self.dagger());
        d.max_abs() <= HERMITIAN_TOL * (1.0 + self.max_abs())
    }

    /// Leading principal block of size `dim - margin`: the sub-matrix far
    /// enough from the truncation cutoff that finite-dimension artifacts
    /// are absent.
    pub fn interior(&self, margin: usize) -> Self {
        assert!(margin < self.dim, "margin must be < dim");
        let k = self.dim - margin;
        Self::from_fn(k, |i, j| self.get(i, j))
    }

    pub fn interior_norm(&self, margin: usize) -> f64 {
        self.interior(margin).fro_norm()
    }

    pub fn kron(&self, other: &Self) -> Self {
        let n = self.dim;
        let m = other.dim;
        let mut out = Self::zeros(n * m);
        for i in 0..n {
            for j in 0..n {
                let a = self.data[i * n + j];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for k in 0..m {
                    for l in 0..m {
                        out.data[(i * m + k) * (n * m) + (j * m + l)] = a * other.data[k * m + l];
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::identity(self.dim);
        for _ in 0..k {
            out = out.matmul(self);
        }
        out
    }
}

/// AB - BA.
pub fn commutator(a: &Operator, b: &Operator) -> Result<Operator> {
    a.check_same_dim(b)?;
    Ok(a.matmul(b).sub(&b.matmul(a)))
}

/// AB + BA.
pub fn anticommutator(a: &Operator, b: &Operator) -> Result<Operator> {
    a.check_same_dim(b)?;
    Ok(a.matmul(b).add(&b.matmul(a)))
}

/// Symmetrized product (AB + BA)/2.
pub fn sym_product(a: &Operator, b: &Operator) -> Result<Operator> {
    Ok(anticommutator(a, b)?.scale(Complex64::new(0.5, 0.0)))
}

/// Matrix exponential by scaling-and-squaring with a truncated series.
/// The operand is scaled until its norm is below 1/2, the series is summed
/// to machine precision, and the result squared back up.
pub fn op_exp(a: &Operator) -> Result<Operator> {
    if !a.is_finite() {
        return Err(LabError::InvalidParameter("non-finite entries in op_exp".into()));
    }
    let norm = a.fro_norm();
    if norm > EXP_NORM_LIMIT {
        return Err(LabError::ExpOverflow(norm, EXP_NORM_LIMIT));
    }
    let mut squarings = 0u32;
    let mut scaled_norm = norm;
    while scaled_norm >= 0.5 {
        scaled_norm /= 2.0;
        squarings += 1;
    }
    let scaled = a.scale(Complex64::new(1.0 / (1u64 << squarings) as f64, 0.0));

    let mut result = Operator::identity(a.dim());
    let mut term = Operator::identity(a.dim());
    for k in 1..64 {
        term = term.matmul(&scaled).scale(Complex64::new(1.0 / k as f64, 0.0));
        result = result.add(&term);
        if term.fro_norm() <= 1e-18 * result.fro_norm() {
            break;
        }
    }
    for _ in 0..squarings {
        result = result.matmul(&result);
    }
    Ok(result)
}

/// Hermitian matrix fully determined by `(dim, seed)`: (M + M^dagger)/2
/// with i.i.d. standard complex normal entries from splitmix64.
pub fn random_hermitian(dim: usize, seed: u64) -> Operator {
    assert!(dim >= 1);
    let mut rng = SplitMix64::new(seed);
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let mut m = Operator::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            let (re, im) = rng.next_normal_pair();
            m.set(i, j, Complex64::new(re * inv_sqrt2, im * inv_sqrt2));
        }
    }
    let half = Complex64::new(0.5, 0.0);
    Operator::from_fn(dim, |i, j| (m.get(i, j) + m.get(j, i).conj()) * half)
}

/// 2x2 Pauli matrices.
pub fn sigma_x() -> Operator {
    Operator::from_fn(2, |i, j| {
        if i != j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) }
    })
}

pub fn sigma_y() -> Operator {
    let mut m = Operator::zeros(2);
    m.set(0, 1, Complex64::new(0.0, -1.0));
    m.set(1, 0, Complex64::new(0.0, 1.0));
    m
}

pub fn sigma_z() -> Operator {
    Operator::diag(&[Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)])
}

/// sigma^- = |0><1|.
pub fn sigma_minus() -> Operator {
    let mut m = Operator::zeros(2);
    m.set(0, 1, Complex64::new(1.0, 0.0));
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn self_commutator_vanishes() {
        let a = random_hermitian(4, 17);
        let z = commutator(&a, &a).unwrap();
        assert!(z.fro_norm() == 0.0);
    }

    #[test]
    fn pauli_commutator() {
        // [sx, sy] = 2i sz
        let got = commutator(&sigma_x(), &sigma_y()).unwrap();
        let want = sigma_z().scale(c(0.0, 2.0));
        assert!(got.sub(&want).fro_norm() < 1e-15);
    }

    #[test]
    fn ladder_two_level_commutator() {
        let mut a = Operator::zeros(2);
        a.set(0, 1, c(1.0, 0.0));
        let adag = a.dagger();
        let got = commutator(&a, &adag).unwrap();
        let want = Operator::diag(&[c(1.0, 0.0), c(-1.0, 0.0)]);
        assert!(got.sub(&want).fro_norm() < 1e-15);
    }

    #[test]
    fn anticommutator_identity_case() {
        let b = random_hermitian(3, 5);
        let got = anticommutator(&Operator::identity(3), &b).unwrap();
        assert!(got.sub(&b.scale(c(2.0, 0.0))).fro_norm() < 1e-15);
    }

    #[test]
    fn pauli_anticommutator_vanishes() {
        let got = anticommutator(&sigma_x(), &sigma_y()).unwrap();
        assert!(got.fro_norm() < 1e-15);
    }

    #[test]
    fn sym_product_identity_and_pauli() {
        let b = random_hermitian(3, 9);
        let got = sym_product(&Operator::identity(3), &b).unwrap();
        assert!(got.sub(&b).fro_norm() < 1e-15);
        assert!(sym_product(&sigma_x(), &sigma_y()).unwrap().fro_norm() < 1e-15);
    }

    #[test]
    fn sym_product_three_level_ladder() {
        // (a a^dag + a^dag a)/2 = diag(1/2, 3/2, 1) at dim 3
        let mut a = Operator::zeros(3);
        a.set(0, 1, c(1.0, 0.0));
        a.set(1, 2, c(2f64.sqrt(), 0.0));
        let got = sym_product(&a, &a.dagger()).unwrap();
        let want = Operator::diag(&[c(0.5, 0.0), c(1.5, 0.0), c(1.0, 0.0)]);
        assert!(got.sub(&want).fro_norm() < 1e-15);
    }

    #[test]
    fn exp_of_zero_is_identity_exactly() {
        let got = op_exp(&Operator::zeros(4)).unwrap();
        assert_eq!(got, Operator::identity(4));
    }

    #[test]
    fn exp_diagonal() {
        let got = op_exp(&Operator::diag(&[c(1.0, 0.0), c(2.0, 0.0)])).unwrap();
        let want = Operator::diag(&[c(1f64.exp(), 0.0), c(2f64.exp(), 0.0)]);
        assert!(got.sub(&want).fro_norm() < 1e-13 * want.fro_norm());
    }

    #[test]
    fn exp_phase_of_sigma_z() {
        // exp(i pi/2 sz) = diag(i, -i)
        let a = sigma_z().scale(c(0.0, std::f64::consts::FRAC_PI_2));
        let got = op_exp(&a).unwrap();
        let want = Operator::diag(&[c(0.0, 1.0), c(0.0, -1.0)]);
        assert!(got.sub(&want).fro_norm() < 1e-13);
    }

    #[test]
    fn exp_overflow_is_an_error() {
        let a = Operator::identity(2).scale(c(1e6, 0.0));
        assert!(matches!(op_exp(&a), Err(LabError::ExpOverflow(_, _))));
    }

    #[test]
    fn exp_group_law_on_commuting_pair() {
        let a = Operator::diag(&[c(0.3, 0.1), c(-0.2, 0.4)]);
        let b = Operator::diag(&[c(-0.1, 0.2), c(0.5, -0.3)]);
        let lhs = op_exp(&a).unwrap().matmul(&op_exp(&b).unwrap());
        let rhs = op_exp(&a.add(&b)).unwrap();
        assert!(lhs.sub(&rhs).fro_norm() < 1e-10);
    }

    #[test]
    fn random_hermitian_contract() {
        let a = random_hermitian(4, 1);
        let b = random_hermitian(4, 1);
        assert_eq!(a, b);
        // exact conjugate-transpose symmetry by construction
        assert_eq!(a, a.dagger());
        let d = random_hermitian(4, 2);
        assert!(a.sub(&d).fro_norm() > 1e-3);
    }

    #[test]
    fn commutator_trace_is_small() {
        for seed in 0..20 {
            let a = random_hermitian(6, seed);
            let b = random_hermitian(6, seed + 1000);
            let t = commutator(&a, &b).unwrap().trace().norm();
            assert!(t <= 1e-12 * 6.0 * a.fro_norm() * b.fro_norm());
        }
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let a = Operator::identity(2);
        let b = Operator::identity(3);
        assert!(matches!(commutator(&a, &b), Err(LabError::DimensionMismatch(2, 3))));
        assert!(matches!(anticommutator(&a, &b), Err(LabError::DimensionMismatch(2, 3))));
    }

    #[test]
    fn hermiticity_closure() {
        let a = random_hermitian(5, 3);
        let b = random_hermitian(5, 4);
        assert!(anticommutator(&a, &b).unwrap().is_hermitian());
        assert!(sym_product(&a, &b).unwrap().is_hermitian());
        assert!(commutator(&a, &b).unwrap().is_anti_hermitian());
    }

    #[test]
    fn bilinearity_of_commutator() {
        let a = random_hermitian(4, 10);
        let b = random_hermitian(4, 11);
        let cc = random_hermitian(4, 12);
        let alpha = c(1.25, -0.5);
        let beta = c(-0.75, 2.0);
        let lhs = commutator(&a.scale(alpha).add(&b.scale(beta)), &cc).unwrap();
        let rhs = commutator(&a, &cc)
            .unwrap()
            .scale(alpha)
            .add(&commutator(&b, &cc).unwrap().scale(beta));
        let scale = lhs.fro_norm().max(1.0);
        assert!(lhs.sub(&rhs).fro_norm() < 1e-12 * scale);
    }

    #[test]
    fn kron_and_interior() {
        let a = sigma_z();
        let b = Operator::identity(2);
        let k = a.kron(&b);
        assert_eq!(k.dim(), 4);
        assert_eq!(k.get(3, 3), c(-1.0, 0.0));
        let inner = k.interior(1);
        assert_eq!(inner.dim(), 3);
        assert_eq!(inner.get(0, 0), c(1.0, 0.0));
    }
}
