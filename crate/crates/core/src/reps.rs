//! Finite-dimensional canonical pairs: truncated ladder, discrete
//! clock-shift Weyl pair, the Pauli anticommutator pair, Jordan-Wigner
//! fermion modes, and linear canonical transformations.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{LabError, Result};
use crate::operator::{op_exp, Operator};
use crate::report::ResidualReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RepKind {
    Ladder,
    ClockShift,
    PauliChoy,
    JordanWigner,
    Custom,
}

impl RepKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            RepKind::Ladder => "ladder",
            RepKind::ClockShift => "clock_shift",
            RepKind::PauliChoy => "pauli_choy",
            RepKind::JordanWigner => "jordan_wigner",
            RepKind::Custom => "custom",
        }
    }
}

/// A finite-dimensional carrier of a canonical (or Weyl) pair.
/// Immutable after construction; safe to share across threads.
#[derive(Clone, Debug)]
pub struct Representation {
    pub kind: RepKind,
    pub dim: usize,
    pub q_op: Operator,
    pub p_op: Operator,
    pub aux: BTreeMap<String, Operator>,
    pub mass: f64,
    pub omega: f64,
    pub hbar: f64,
    pub interior_margin: usize,
}

impl Representation {
    pub fn q(&self) -> &Operator {
        &self.q_op
    }

    pub fn p(&self) -> &Operator {
        &self.p_op
    }

    pub fn aux(&self, name: &str) -> Result<&Operator> {
        self.aux.get(name).ok_or_else(|| LabError::MissingSymbol(name.into()))
    }
}

#[derive(Clone, Debug)]
pub struct FermionAlgebra {
    pub n_modes: usize,
    pub dim: usize,
    pub annihilators: Vec<Operator>,
}

#[derive(Clone, Copy, Debug)]
pub struct WeylParams {
    pub s: f64,
    pub t: f64,
    pub alpha: f64,
}

/// Harmonic-oscillator ladder pair truncated at `dim` levels:
/// a|n> = sqrt(n)|n-1>, Q = sqrt(hbar/2 m omega)(a + a+),
/// P = i sqrt(hbar m omega / 2)(a+ - a).
pub fn truncated_ladder(dim: usize, m: f64, omega: f64, hbar: f64) -> Result<Representation> {
    if dim < 2 {
        return Err(LabError::InvalidParameter(format!("ladder dim {dim} < 2")));
    }
    if !(m > 0.0 && omega > 0.0 && hbar > 0.0) {
        return Err(LabError::InvalidParameter(
            "ladder parameters must be positive".into(),
        ));
    }
    let a = Operator::from_fn(dim, |i, j| {
        if j == i + 1 {
            Complex64::new((j as f64).sqrt(), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let adag = a.dagger();
    let lq = (hbar / (2.0 * m * omega)).sqrt();
    let lp = (hbar * m * omega / 2.0).sqrt();
    let q = a.add(&adag).scale(Complex64::new(lq, 0.0)).with_label("Q");
    let p = adag.sub(&a).scale(Complex64::new(0.0, lp)).with_label("P");
    let number = adag.matmul(&a).with_label("N");
    let mut aux = BTreeMap::new();
    aux.insert("a".into(), a);
    aux.insert("adag".into(), adag);
    aux.insert("number".into(), number);
    Ok(Representation {
        kind: RepKind::Ladder,
        dim,
        q_op: q,
        p_op: p,
        aux,
        mass: m,
        omega,
        hbar,
        interior_margin: 1,
    })
}

/// Discrete Weyl pair: U = diag(1, w, w^2, ...), V the cyclic shift,
/// w = e^{2 pi i / dim}. Satisfies U V = w V U exactly in exact
/// arithmetic.
pub fn clock_shift(dim: usize) -> Result<Representation> {
    if dim < 2 {
        return Err(LabError::InvalidParameter(format!("clock_shift dim {dim} < 2")));
    }
    let w = 2.0 * std::f64::consts::PI / dim as f64;
    let u = Operator::from_fn(dim, |i, j| {
        if i == j {
            Complex64::from_polar(1.0, w * i as f64)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
    .with_label("U");
    let v = Operator::from_fn(dim, |i, j| {
        if i == (j + 1) % dim {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
    .with_label("V");
    let mut aux = BTreeMap::new();
    aux.insert("U".into(), u.clone());
    aux.insert("V".into(), v.clone());
    Ok(Representation {
        kind: RepKind::ClockShift,
        dim,
        q_op: u,
        p_op: v,
        aux,
        mass: 1.0,
        omega: 1.0,
        hbar: 1.0,
        interior_margin: 0,
    })
}

/// Hermitian 2x2 pair q = sqrt(hbar) sigma_x,
/// p = (sqrt(hbar)/2)(sigma_x + sigma_y). Its anticommutator equals
/// hbar times the identity while the commutator stays nonzero.
pub fn pauli_choy_pair(hbar: f64) -> Result<Representation> {
    if !(hbar > 0.0) {
        return Err(LabError::InvalidParameter("hbar must be positive".into()));
    }
    let s = hbar.sqrt();
    let q = crate::operator::sigma_x().scale(Complex64::new(s, 0.0)).with_label("q");
    let p = crate::operator::sigma_x()
        .add(&crate::operator::sigma_y())
        .scale(Complex64::new(s / 2.0, 0.0))
        .with_label("p");
    Ok(Representation {
        kind: RepKind::PauliChoy,
        dim: 2,
        q_op: q,
        p_op: p,
        aux: BTreeMap::new(),
        mass: 1.0,
        omega: 1.0,
        hbar,
        interior_margin: 0,
    })
}

/// Jordan-Wigner fermion modes on 2^n_modes dimensions:
/// c_i = sigma_z^(i-1) (x) sigma_minus (x) identity.
pub fn jordan_wigner(n_modes: usize) -> Result<FermionAlgebra> {
    if n_modes == 0 {
        return Err(LabError::InvalidParameter("n_modes must be positive".into()));
    }
    if n_modes > 12 {
        return Err(LabError::InvalidParameter(format!(
            "n_modes {n_modes} exceeds the 12-mode memory bound"
        )));
    }
    let dim = 1usize << n_modes;
    let mut annihilators = Vec::with_capacity(n_modes);
    for i in 0..n_modes {
        let mut c = Operator::identity(1);
        for j in 0..n_modes {
            let factor = if j < i {
                crate::operator::sigma_z()
            } else if j == i {
                crate::operator::sigma_minus()
            } else {
                Operator::identity(2)
            };
            c = c.kron(&factor);
        }
        annihilators.push(c.with_label(format!("c{}", i + 1)));
    }
    Ok(FermionAlgebra { n_modes, dim, annihilators })
}

/// Apply a linear symplectic 2x2 matrix to the pair:
/// Q' = m11 Q + m12 P, P' = m21 Q + m22 P. Requires det(M) = 1, which
/// preserves the commutator by bilinearity.
pub fn canonical_transform(rep: &Representation, m: [[f64; 2]; 2]) -> Result<Representation> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if (det - 1.0).abs() > 1e-14 {
        return Err(LabError::NonCanonical(det));
    }
    let q = rep
        .q_op
        .scale(Complex64::new(m[0][0], 0.0))
        .add(&rep.p_op.scale(Complex64::new(m[0][1], 0.0)))
        .with_label("Q'");
    let p = rep
        .q_op
        .scale(Complex64::new(m[1][0], 0.0))
        .add(&rep.p_op.scale(Complex64::new(m[1][1], 0.0)))
        .with_label("P'");
    Ok(Representation {
        kind: RepKind::Custom,
        dim: rep.dim,
        q_op: q,
        p_op: p,
        aux: rep.aux.clone(),
        mass: rep.mass,
        omega: rep.omega,
        hbar: rep.hbar,
        interior_margin: rep.interior_margin,
    })
}

/// Weyl relation residual. Continuous pairs: interior norm of
/// e^{isQ} e^{itP} - e^{-i hbar s t} e^{itP} e^{isQ}. Clock-shift:
/// ||U V - e^{2 pi i / d} V U||.
pub fn weyl_relation_residual(rep: &Representation, w: WeylParams) -> Result<ResidualReport> {
    if !(w.s.is_finite() && w.t.is_finite() && w.alpha.is_finite()) {
        return Err(LabError::InvalidParameter("Weyl parameters must be finite".into()));
    }
    let (residual, tol, operands) = match rep.kind {
        RepKind::ClockShift => {
            let u = &rep.q_op;
            let v = &rep.p_op;
            let phase = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / rep.dim as f64);
            let r = u.matmul(v).sub(&v.matmul(u).scale(phase)).fro_norm();
            (r, 1e-12, format!("U,V d={}", rep.dim))
        }
        _ => {
            let eisq = op_exp(&rep.q_op.scale(Complex64::new(0.0, w.s)))?;
            let eitp = op_exp(&rep.p_op.scale(Complex64::new(0.0, w.t)))?;
            let phase = Complex64::from_polar(1.0, -rep.hbar * w.s * w.t);
            let diff = eisq.matmul(&eitp).sub(&eitp.matmul(&eisq).scale(phase));
            // exponentials mix all levels, so the truncation shadow is
            // wider than for polynomial checks: discard 8 levels when
            // the dimension affords it
            let margin = rep.interior_margin.max(8).min(rep.dim / 2);
            let r = diff.interior_norm(margin);
            (r, 1e-6, format!("exp(isQ),exp(itP) s={} t={}", w.s, w.t))
        }
    };
    Ok(ResidualReport::new("weyl_relation", residual, tol)
        .with_suite("reps")
        .with_operands(operands)
        .with_dim(rep.dim))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{anticommutator as acomm, commutator as comm};

    #[test]
    fn ladder_ccr_profile() {
        for dim in [2usize, 3, 8, 32] {
            let rep = truncated_ladder(dim, 1.0, 1.0, 1.0).unwrap();
            let c = comm(rep.q(), rep.p()).unwrap();
            let mut want = Operator::diag(&vec![Complex64::new(0.0, 1.0); dim]);
            want.set(dim - 1, dim - 1, Complex64::new(0.0, -((dim - 1) as f64)));
            assert!(c.sub(&want).fro_norm() < 1e-13 * dim as f64, "dim {dim}");
            assert!(c.trace().norm() < 1e-12 * dim as f64);
            // interior block of [Q,P] - i hbar I
            let dev = c.sub(&Operator::identity(dim).scale(Complex64::new(0.0, 1.0)));
            assert!(dev.interior_norm(1) < 1e-12);
        }
    }

    #[test]
    fn ladder_harmonic_diagonal() {
        let rep = truncated_ladder(6, 2.0, 3.0, 1.5).unwrap();
        let h = rep
            .p()
            .matmul(rep.p())
            .scale(Complex64::new(1.0 / (2.0 * rep.mass), 0.0))
            .add(
                &rep.q()
                    .matmul(rep.q())
                    .scale(Complex64::new(rep.mass * rep.omega * rep.omega / 2.0, 0.0)),
            );
        for n in 0..rep.dim - 1 {
            let want = rep.hbar * rep.omega * (n as f64 + 0.5);
            assert!((h.get(n, n).re - want).abs() < 1e-12 * want.max(1.0), "level {n}");
        }
    }

    #[test]
    fn ladder_rejects_bad_parameters() {
        assert!(truncated_ladder(1, 1.0, 1.0, 1.0).is_err());
        assert!(truncated_ladder(4, -1.0, 1.0, 1.0).is_err());
        assert!(truncated_ladder(4, 1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn clock_shift_weyl_relation_exact() {
        for dim in 2..=64usize {
            let rep = clock_shift(dim).unwrap();
            let r = weyl_relation_residual(
                &rep,
                WeylParams { s: 0.0, t: 0.0, alpha: 0.0 },
            )
            .unwrap();
            assert!(r.residual <= 1e-12, "dim {dim}: {}", r.residual);
        }
    }

    #[test]
    fn clock_shift_small_dims() {
        let rep2 = clock_shift(2).unwrap();
        let u = rep2.aux("U").unwrap();
        let v = rep2.aux("V").unwrap();
        assert!(u.sub(&crate::operator::sigma_z()).fro_norm() < 1e-15);
        assert!(v.sub(&crate::operator::sigma_x()).fro_norm() < 1e-15);
        let anti = u.matmul(v).add(&v.matmul(u));
        assert!(anti.fro_norm() < 1e-15, "UV = -VU at d=2");

        let rep4 = clock_shift(4).unwrap();
        let u = rep4.aux("U").unwrap();
        let v = rep4.aux("V").unwrap();
        // group commutator U V U^-1 V^-1 = i I; inverses via dagger (unitary)
        let g = u.matmul(v).matmul(&u.dagger()).matmul(&v.dagger());
        let want = Operator::identity(4).scale(Complex64::new(0.0, 1.0));
        assert!(g.sub(&want).fro_norm() < 1e-14);
    }

    #[test]
    fn clock_shift_order_d() {
        for dim in [3usize, 5, 8] {
            let rep = clock_shift(dim).unwrap();
            let id = Operator::identity(dim);
            assert!(rep.q().pow(dim as u32).sub(&id).fro_norm() < 1e-12);
            assert!(rep.p().pow(dim as u32).sub(&id).fro_norm() < 1e-12);
        }
    }

    #[test]
    fn pauli_choy_anticommutator_rule() {
        let hbar = 0.7;
        let rep = pauli_choy_pair(hbar).unwrap();
        assert!(rep.q().is_hermitian() && rep.p().is_hermitian());
        let anti = acomm(rep.q(), rep.p()).unwrap();
        let want = Operator::identity(2).scale(Complex64::new(hbar, 0.0));
        assert!(anti.sub(&want).fro_norm() < 1e-14);
        let c = comm(rep.q(), rep.p()).unwrap();
        assert!(c.fro_norm() > 0.1, "commutator must stay nonzero");
        // [q, p] = -(i hbar / 2) * 2 sigma_z direction check: proportional to sigma_z
        let sz = crate::operator::sigma_z();
        let scale = c.get(0, 0) / sz.get(0, 0);
        assert!(c.sub(&sz.scale(scale)).fro_norm() < 1e-14);
    }

    #[test]
    fn jordan_wigner_car_relations() {
        for n in 1..=4usize {
            let alg = jordan_wigner(n).unwrap();
            let id = Operator::identity(alg.dim);
            for i in 0..n {
                let ci = &alg.annihilators[i];
                assert!(ci.matmul(ci).fro_norm() < 1e-14, "c_{i}^2 = 0");
                for j in 0..n {
                    let cj = &alg.annihilators[j];
                    let mixed = acomm(ci, &cj.dagger()).unwrap();
                    let want = if i == j { id.clone() } else { Operator::zeros(alg.dim) };
                    assert!(mixed.sub(&want).fro_norm() < 1e-12, "{{c_{i}, c_{j}+}}");
                    let same = acomm(ci, cj).unwrap();
                    assert!(same.fro_norm() < 1e-12, "{{c_{i}, c_{j}}}");
                }
            }
        }
    }

    #[test]
    fn jordan_wigner_bounds() {
        assert!(jordan_wigner(0).is_err());
        assert!(jordan_wigner(13).is_err());
    }

    #[test]
    fn canonical_transform_preserves_commutator() {
        let rep = truncated_ladder(10, 1.0, 1.0, 1.0).unwrap();
        let base = comm(rep.q(), rep.p()).unwrap();

        let ident = canonical_transform(&rep, [[1.0, 0.0], [0.0, 1.0]]).unwrap();
        assert!(ident.q().sub(rep.q()).fro_norm() < 1e-15);

        let theta = 0.3f64;
        let rot = canonical_transform(
            &rep,
            [[theta.cos(), -theta.sin()], [theta.sin(), theta.cos()]],
        )
        .unwrap();
        let c = comm(rot.q(), rot.p()).unwrap();
        assert!(c.sub(&base).fro_norm() < 1e-13);

        let alpha = 2.5f64;
        let squeeze = canonical_transform(&rep, [[alpha, 0.0], [0.0, 1.0 / alpha]]).unwrap();
        let c = comm(squeeze.q(), squeeze.p()).unwrap();
        assert!(c.sub(&base).fro_norm() < 1e-12);
        // spectrum of Q' = alpha Q is the scaled spectrum of Q
        let (vals_q, _) = crate::eigen::eigh(rep.q()).unwrap();
        let (vals_sq, _) = crate::eigen::eigh(squeeze.q()).unwrap();
        for (a, b) in vals_q.iter().zip(&vals_sq) {
            assert!((a * alpha - b).abs() < 1e-10);
        }
    }

    #[test]
    fn canonical_transform_rejects_non_symplectic() {
        let rep = truncated_ladder(4, 1.0, 1.0, 1.0).unwrap();
        assert!(matches!(
            canonical_transform(&rep, [[2.0, 0.0], [0.0, 1.0]]),
            Err(LabError::NonCanonical(_))
        ));
    }

    #[test]
    fn weyl_relation_zero_parameter() {
        let rep = truncated_ladder(16, 1.0, 1.0, 1.0).unwrap();
        let r = weyl_relation_residual(&rep, WeylParams { s: 0.0, t: 0.5, alpha: 0.0 }).unwrap();
        assert!(r.residual < 1e-13, "s=0 makes both sides exp(itP): {}", r.residual);
    }

    #[test]
    fn weyl_relation_large_ladder() {
        let rep = truncated_ladder(64, 1.0, 1.0, 1.0).unwrap();
        let r = weyl_relation_residual(&rep, WeylParams { s: 0.1, t: 0.1, alpha: 0.0 }).unwrap();
        assert!(r.pass, "residual {} tol {}", r.residual, r.tolerance);
        assert!(r.residual <= 1e-6);
    }
}
