//! Bracket-identity residuals: operator Jacobi, graded Jacobi, the
//! Dirac consistency chain under kappa-substitution, the Lagrange
//! sufficiency condition, the trace certificate against exact CCR in
//! finite dimension, and the rule-mixing infeasibility bound.

use num_complex::Complex64;

use crate::constants::QuantizationConstants;
use crate::error::Result;
use crate::operator::{anticommutator, commutator, random_hermitian, Operator};
use crate::report::ResidualReport;

/// ||[A,[B,C]] + [C,[A,B]] + [B,[C,A]]||.
pub fn jacobi_residual(a: &Operator, b: &Operator, c: &Operator) -> Result<ResidualReport> {
    let t1 = commutator(a, &commutator(b, c)?)?;
    let t2 = commutator(c, &commutator(a, b)?)?;
    let t3 = commutator(b, &commutator(c, a)?)?;
    let residual = t1.add(&t2).add(&t3).fro_norm();
    let scale = scale_of(&[a, b, c], 3);
    Ok(ResidualReport::new("jacobi", residual, 1e-12 * scale).with_dim(a.dim()))
}

/// ||[{A,B},C] + [{B,C},A] + [{C,A},B]||.
pub fn graded_jacobi_residual(a: &Operator, b: &Operator, c: &Operator) -> Result<ResidualReport> {
    let t1 = commutator(&anticommutator(a, b)?, c)?;
    let t2 = commutator(&anticommutator(b, c)?, a)?;
    let t3 = commutator(&anticommutator(c, a)?, b)?;
    let residual = t1.add(&t2).add(&t3).fro_norm();
    let scale = scale_of(&[a, b, c], 3);
    Ok(ResidualReport::new("graded_jacobi", residual, 1e-12 * scale).with_dim(a.dim()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiracMode {
    FourOp,
    ThreeOp,
    PoissonOnly,
}

impl DiracMode {
    pub fn identity_id(&self) -> &'static str {
        match self {
            DiracMode::FourOp => "dirac_four_op",
            DiracMode::ThreeOp => "dirac_three_op",
            DiracMode::PoissonOnly => "poisson_only",
        }
    }
}

/// Evaluate the Dirac consistency equations with every Poisson bracket
/// replaced by (1/kappa) [.,.]. Under that substitution each equation
/// is an operator identity, so this is a regression self-test of the
/// substitution machinery, not a substantive check.
pub fn dirac_consistency_residual(
    u1: &Operator,
    v1: &Operator,
    u2: &Operator,
    v2: &Operator,
    mode: DiracMode,
    constants: &QuantizationConstants,
) -> Result<ResidualReport> {
    u1.check_same_dim(v1)?;
    u1.check_same_dim(u2)?;
    u1.check_same_dim(v2)?;
    let kappa = constants.kappa();
    let pb = |x: &Operator, y: &Operator| -> Result<Operator> {
        Ok(commutator(x, y)?.scale(Complex64::new(1.0, 0.0) / kappa))
    };
    let residual = match mode {
        DiracMode::FourOp => {
            // {u1 u2, v1 v2} expanded two ways must agree:
            // {u1,v1} u2 v2 + u1 {u2,v1} v2 ... the standard derivation
            // reduces to ([u1,v1])(u2 v2 - v2 u2) form; under the
            // substitution both expansions equal (1/kappa)[u1 u2, v1 v2]
            let lhs = pb(&u1.matmul(u2), &v1.matmul(v2))?;
            let rhs = pb(u1, &v1.matmul(v2))?
                .matmul(u2)
                .add(&u1.matmul(&pb(u2, &v1.matmul(v2))?));
            lhs.sub(&rhs).fro_norm()
        }
        DiracMode::ThreeOp => {
            // {u1 u2, v1} = {u1, v1} u2 + u1 {u2, v1}
            let lhs = pb(&u1.matmul(u2), v1)?;
            let rhs = pb(u1, v1)?.matmul(u2).add(&u1.matmul(&pb(u2, v1)?));
            lhs.sub(&rhs).fro_norm()
        }
        DiracMode::PoissonOnly => {
            // Jacobi identity written entirely in Poisson brackets
            let t1 = pb(u1, &pb(v1, u2)?)?;
            let t2 = pb(u2, &pb(u1, v1)?)?;
            let t3 = pb(v1, &pb(u2, u1)?)?;
            t1.add(&t2).add(&t3).fro_norm()
        }
    };
    let scale = scale_of(&[u1, v1, u2, v2], 4) / constants.hbar.powi(1);
    Ok(ResidualReport::new(mode.identity_id(), residual, 1e-12 * scale.max(1e-6))
        .with_dim(u1.dim()))
}

/// kappa_bar (a,b) c-side check with the Lagrange bracket realized as
/// (1/kappa_bar) {a,b}_+; the sufficiency condition then reads
/// [{a,b}_+, c] - [{a,b}_+, c] = 0, exercised through both routes.
pub fn lagrange_condition_residual(
    a: &Operator,
    b: &Operator,
    c: &Operator,
    constants: &QuantizationConstants,
) -> Result<ResidualReport> {
    a.check_same_dim(b)?;
    a.check_same_dim(c)?;
    let kb = constants.kappa_bar();
    let lagrange = anticommutator(a, b)?.scale(Complex64::new(1.0 / kb, 0.0));
    let lhs = commutator(&lagrange.scale(Complex64::new(kb, 0.0)), c)?;
    let rhs = commutator(&anticommutator(a, b)?, c)?;
    let residual = lhs.sub(&rhs).fro_norm();
    let scale = scale_of(&[a, b, c], 3);
    Ok(ResidualReport::new("lagrange_condition", residual, 1e-12 * scale).with_dim(a.dim()))
}

/// Certificate data for the finite-dimensional CCR obstruction.
#[derive(Clone, Debug)]
pub struct TraceCertificate {
    pub sup_trace_commutator: f64,
    pub trace_rhs: f64,
    pub infeasible: bool,
}

/// tr[A,B] = 0 for every finite pair while tr(i hbar I) has magnitude
/// hbar*dim, so exact CCR is unsatisfiable in finite dimension.
pub fn trace_anomaly_certificate(
    dim: usize,
    constants: &QuantizationConstants,
    seed: u64,
    samples: usize,
) -> (TraceCertificate, ResidualReport) {
    let mut sup = 0.0f64;
    let mut scale = 1.0f64;
    for k in 0..samples {
        let a = random_hermitian(dim, seed.wrapping_add(2 * k as u64));
        let b = random_hermitian(dim, seed.wrapping_add(2 * k as u64 + 1));
        let t = commutator(&a, &b).expect("same dim").trace().norm();
        sup = sup.max(t);
        scale = scale.max(a.fro_norm() * b.fro_norm());
    }
    let rhs = constants.hbar * dim as f64;
    let infeasible = sup <= 1e-12 * scale && rhs > 0.0;
    let cert = TraceCertificate { sup_trace_commutator: sup, trace_rhs: rhs, infeasible };
    let report = ResidualReport::new("trace_anomaly", sup, 1e-12 * scale)
        .with_dim(dim)
        .with_seed(seed);
    (cert, report)
}

fn herm_part(m: &Operator) -> Operator {
    m.add(&m.dagger()).scale(Complex64::new(0.5, 0.0))
}

/// Minimize r(A,B) = ||[A,B] - i hbar I||^2 + ||{A,B} - hbar I||^2 over
/// Hermitian pairs by gradient descent with restarts, and compare
/// against the analytic lower bound hbar^2 * dim coming from
/// |tr([A,B] - i hbar I)|^2 / dim with tr[A,B] = 0.
pub fn mixing_feasibility_bound(
    dim: usize,
    restarts: usize,
    constants: &QuantizationConstants,
    seed: u64,
) -> Result<ResidualReport> {
    if !(2..=8).contains(&dim) {
        return Err(crate::error::LabError::InvalidParameter(format!(
            "mixing bound dim {dim} outside 2..=8"
        )));
    }
    let hbar = constants.hbar;
    let target_c = Operator::identity(dim).scale(Complex64::new(0.0, hbar));
    let target_a = Operator::identity(dim).scale(Complex64::new(hbar, 0.0));

    let value = |a: &Operator, b: &Operator| -> f64 {
        let dc = commutator(a, b).unwrap().sub(&target_c);
        let da = anticommutator(a, b).unwrap().sub(&target_a);
        let (nc, na) = (dc.fro_norm(), da.fro_norm());
        nc * nc + na * na
    };

    let mut best = f64::INFINITY;
    for r in 0..restarts.max(1) {
        let mut a = random_hermitian(dim, seed.wrapping_mul(31).wrapping_add(2 * r as u64));
        let mut b = random_hermitian(dim, seed.wrapping_mul(31).wrapping_add(2 * r as u64 + 1));
        let mut step = 0.05f64;
        let mut cur = value(&a, &b);
        for _ in 0..500 {
            // gradients of r with respect to Hermitian A and B
            let dc = commutator(&a, &b).unwrap().sub(&target_c);
            let da = anticommutator(&a, &b).unwrap().sub(&target_a);
            let ga = herm_part(&b.matmul(&dc.dagger()).sub(&dc.dagger().matmul(&b)))
                .add(&herm_part(&b.matmul(&da.dagger()).add(&da.dagger().matmul(&b))));
            let gb = herm_part(&dc.dagger().matmul(&a).sub(&a.matmul(&dc.dagger())))
                .add(&herm_part(&da.dagger().matmul(&a).add(&a.matmul(&da.dagger()))));
            let ga = ga.scale(Complex64::new(2.0, 0.0));
            let gb = gb.scale(Complex64::new(2.0, 0.0));
            let gn = (ga.fro_norm().powi(2) + gb.fro_norm().powi(2)).sqrt();
            if gn < 1e-12 {
                break;
            }
            let na = a.sub(&ga.scale(Complex64::new(step, 0.0)));
            let nb = b.sub(&gb.scale(Complex64::new(step, 0.0)));
            let nv = value(&na, &nb);
            if nv < cur {
                a = na;
                b = nb;
                cur = nv;
                step *= 1.1;
            } else {
                step *= 0.5;
                if step < 1e-14 {
                    break;
                }
            }
        }
        best = best.min(cur);
    }

    let bound = hbar * hbar * dim as f64;
    // pass when the numerical minimum respects the analytic bound
    let defect = (bound * (1.0 - 1e-6) - best).max(0.0);
    Ok(ResidualReport::new("mixing_feasibility", defect, (bound * 1e-12).max(1e-30))
        .with_operands(format!("best={best:.6e} bound={bound:.6e}"))
        .with_dim(dim)
        .with_seed(seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{sigma_x, sigma_y, sigma_z};
    use crate::reps::{pauli_choy_pair, truncated_ladder};

    #[test]
    fn jacobi_holds_for_all_matrices() {
        let (sx, sy, sz) = (sigma_x(), sigma_y(), sigma_z());
        assert!(jacobi_residual(&sx, &sx, &sy).unwrap().residual < 1e-15);
        assert!(jacobi_residual(&sx, &sy, &sz).unwrap().pass);
        let a = random_hermitian(5, 7);
        let b = random_hermitian(5, 8);
        let c = random_hermitian(5, 9);
        assert!(jacobi_residual(&a, &b, &c).unwrap().pass);
    }

    #[test]
    fn jacobi_cyclic_invariance() {
        let a = random_hermitian(6, 1);
        let b = random_hermitian(6, 2);
        let c = random_hermitian(6, 3);
        let r1 = jacobi_residual(&a, &b, &c).unwrap().residual;
        let r2 = jacobi_residual(&b, &c, &a).unwrap().residual;
        assert!((r1 - r2).abs() < 1e-12);
    }

    #[test]
    fn graded_jacobi_holds() {
        let (sx, sy, sz) = (sigma_x(), sigma_y(), sigma_z());
        assert!(graded_jacobi_residual(&sx, &sx, &sx).unwrap().residual < 1e-15);
        assert!(graded_jacobi_residual(&sx, &sy, &sz).unwrap().pass);
        let a = random_hermitian(8, 11);
        let b = random_hermitian(8, 12);
        let c = random_hermitian(8, 13);
        assert!(graded_jacobi_residual(&a, &b, &c).unwrap().pass);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let a = random_hermitian(3, 1);
        let b = random_hermitian(4, 2);
        assert!(jacobi_residual(&a, &b, &b).is_err());
        assert!(graded_jacobi_residual(&a, &b, &b).is_err());
    }

    #[test]
    fn dirac_consistency_all_modes() {
        let constants = QuantizationConstants::default();
        let u1 = random_hermitian(4, 3);
        let v1 = random_hermitian(4, 4);
        let u2 = random_hermitian(4, 5);
        let v2 = random_hermitian(4, 6);
        for mode in [DiracMode::FourOp, DiracMode::ThreeOp, DiracMode::PoissonOnly] {
            let r = dirac_consistency_residual(&u1, &v1, &u2, &v2, mode, &constants).unwrap();
            assert!(r.pass, "{:?}: {}", mode, r.residual);
        }

        let (sx, sy, sz) = (sigma_x(), sigma_y(), sigma_z());
        let r = dirac_consistency_residual(&sx, &sy, &sz, &sz, DiracMode::ThreeOp, &constants)
            .unwrap();
        assert!(r.residual < 1e-13);

        let rep = truncated_ladder(8, 1.0, 1.0, 1.0).unwrap();
        let qp = crate::operator::sym_product(rep.q(), rep.p()).unwrap();
        let r = dirac_consistency_residual(
            rep.q(),
            rep.p(),
            &qp,
            &qp,
            DiracMode::PoissonOnly,
            &constants,
        )
        .unwrap();
        assert!(r.pass, "poisson_only ladder: {}", r.residual);
    }

    #[test]
    fn lagrange_condition_self_test() {
        let constants = QuantizationConstants::default();
        let a = random_hermitian(6, 21);
        let b = random_hermitian(6, 22);
        let c = random_hermitian(6, 23);
        assert!(lagrange_condition_residual(&a, &a, &b, &constants).unwrap().residual < 1e-13);
        assert!(lagrange_condition_residual(&a, &b, &c, &constants).unwrap().pass);

        let rep = pauli_choy_pair(1.0).unwrap();
        let r = lagrange_condition_residual(rep.q(), rep.p(), &sigma_z(), &constants).unwrap();
        assert!(r.residual < 1e-13);
    }

    #[test]
    fn trace_certificate_every_dim() {
        let constants = QuantizationConstants::default();
        for dim in 1..=12usize {
            let (cert, report) = trace_anomaly_certificate(dim, &constants, 5, 20);
            assert!(cert.infeasible, "dim {dim}");
            assert!(report.pass);
            assert!((cert.trace_rhs - dim as f64).abs() < 1e-15);
        }
    }

    #[test]
    fn ladder_corner_entry() {
        let rep = truncated_ladder(5, 1.0, 1.0, 1.0).unwrap();
        let c = commutator(rep.q(), rep.p()).unwrap();
        let corner = c.get(4, 4);
        assert!((corner - Complex64::new(0.0, -4.0)).norm() < 1e-13);
        let dev = c.sub(&Operator::identity(5).scale(Complex64::new(0.0, 1.0)));
        assert!(dev.interior_norm(1) < 1e-12);
    }

    #[test]
    fn mixing_bound_dims() {
        let constants = QuantizationConstants::default();
        for dim in 2..=6usize {
            let r = mixing_feasibility_bound(dim, 8, &constants, 42).unwrap();
            assert!(r.pass, "dim {dim}: {}", r.operands);
        }
        assert!(mixing_feasibility_bound(1, 1, &constants, 1).is_err());
        assert!(mixing_feasibility_bound(9, 1, &constants, 1).is_err());
    }

    #[test]
    fn pauli_choy_splits_the_objective() {
        let constants = QuantizationConstants::default();
        let rep = pauli_choy_pair(constants.hbar).unwrap();
        let target_a = Operator::identity(2).scale(Complex64::new(constants.hbar, 0.0));
        let da = anticommutator(rep.q(), rep.p()).unwrap().sub(&target_a).fro_norm();
        assert!(da < 1e-14, "anticommutator term exactly satisfied");
        let target_c = Operator::identity(2).scale(Complex64::new(0.0, constants.hbar));
        let dc = commutator(rep.q(), rep.p()).unwrap().sub(&target_c).fro_norm();
        assert!(dc > 0.5, "commutator term cannot vanish");
    }
}

fn scale_of(ops: &[&Operator], degree: u32) -> f64 {
    let m: f64 = ops.iter().map(|o| o.fro_norm()).fold(1.0, f64::max);
    m.powi(degree as i32).max(1.0)
}
