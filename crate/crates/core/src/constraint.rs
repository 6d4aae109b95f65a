//! Constrained dynamics: total Hamiltonian assembly, membership in the
//! commuting (Heisenberg) class, Heisenberg-picture evolution, bracket
//! conservation, the two-transformation ghost defect, Hamilton-equation
//! residuals, and the F-hypothesis polynomial.

use num_complex::Complex64;

use crate::constants::QuantizationConstants;
use crate::eigen::eigh;
use crate::error::{LabError, Result};
use crate::operator::{commutator, op_exp, sym_product, Operator};
use crate::report::ResidualReport;
use crate::reps::Representation;
use crate::symbolic::{NcPolynomial, Sym};

/// One multiplier-constraint pair. Neither factor is required
/// Hermitian. A symbolic body, when present, enables the
/// equation-of-motion checks; the operator body always drives the
/// numeric suites.
#[derive(Clone, Debug)]
pub struct ConstraintTerm {
    pub multiplier: Operator,
    pub f_op: Operator,
    pub f_sym: Option<NcPolynomial>,
    pub label: String,
}

impl ConstraintTerm {
    pub fn matrix(multiplier: Operator, f: Operator, label: impl Into<String>) -> Self {
        Self { multiplier, f_op: f, f_sym: None, label: label.into() }
    }

    pub fn scalar(lambda: f64, f: Operator, label: impl Into<String>) -> Self {
        let id = Operator::identity(f.dim()).scale(Complex64::new(lambda, 0.0));
        Self { multiplier: id, f_op: f, f_sym: None, label: label.into() }
    }

    pub fn symbolic(
        lambda: f64,
        f_sym: NcPolynomial,
        rep: &Representation,
        label: impl Into<String>,
    ) -> Result<Self> {
        let f = f_sym.evaluate(rep.q(), rep.p(), rep.hbar)?;
        let id = Operator::identity(f.dim()).scale(Complex64::new(lambda, 0.0));
        Ok(Self { multiplier: id, f_op: f, f_sym: Some(f_sym), label: label.into() })
    }
}

#[derive(Clone, Debug)]
pub struct ConstraintSystem {
    pub h: Operator,
    pub terms: Vec<ConstraintTerm>,
    pub constants: QuantizationConstants,
}

/// H_T = H + sum_j multiplier_j o F_j with o the symmetrized product,
/// so Hermitian inputs assemble to a Hermitian total Hamiltonian.
pub fn total_hamiltonian(sys: &ConstraintSystem) -> Result<Operator> {
    let mut h = sys.h.clone();
    for term in &sys.terms {
        h = h.add(&sym_product(&term.multiplier, &term.f_op)?);
    }
    Ok(h)
}

/// Max pairwise commutator norm over {H} and every multiplier and
/// constraint body. Membership in the commuting class means every
/// pair commutes.
pub fn heisenberg_class_check(sys: &ConstraintSystem) -> Result<ResidualReport> {
    let mut family: Vec<&Operator> = vec![&sys.h];
    for t in &sys.terms {
        family.push(&t.multiplier);
        family.push(&t.f_op);
    }
    let mut worst = 0.0f64;
    let mut scale = 1.0f64;
    for i in 0..family.len() {
        for j in (i + 1)..family.len() {
            worst = worst.max(commutator(family[i], family[j])?.fro_norm());
            scale = scale.max(family[i].fro_norm() * family[j].fro_norm());
        }
    }
    Ok(ResidualReport::new("heisenberg_class", worst, 1e-12 * scale).with_dim(sys.h.dim()))
}

/// Heisenberg-picture evolution e^{i H_T t / hbar} G e^{-i H_T t / hbar}.
pub fn evolve(g: &Operator, h_t: &Operator, t: f64, hbar: f64) -> Result<Operator> {
    if !h_t.is_hermitian() {
        return Err(LabError::InvalidParameter("evolution requires a Hermitian generator".into()));
    }
    g.check_same_dim(h_t)?;
    let u = op_exp(&h_t.scale(Complex64::new(0.0, t / hbar)))?;
    Ok(u.matmul(g).matmul(&u.dagger()))
}

/// ||(1 / i hbar)[chi, H_T]|| on the interior block; zero means chi is
/// conserved under the total dynamics.
pub fn bracket_conservation(
    chi: &Operator,
    h_t: &Operator,
    hbar: f64,
    margin: usize,
) -> Result<ResidualReport> {
    let rate = commutator(chi, h_t)?.scale(Complex64::new(0.0, -1.0 / hbar));
    let residual = rate.interior_norm(margin);
    let scale = (chi.fro_norm() * h_t.fro_norm() / hbar).max(1.0);
    Ok(ResidualReport::new("bracket_conservation", residual, 1e-10 * scale).with_dim(chi.dim()))
}

fn pbracket(a: &Operator, b: &Operator, hbar: f64) -> Result<Operator> {
    Ok(commutator(a, b)?.scale(Complex64::new(0.0, -1.0 / hbar)))
}

/// Second-order defect of composing the transformations generated by
/// (F_i, ghost eps) and (F_j, ghost gamma) in the two orders:
///
///   delta2 G = gamma eps {G, {F_i, F_j}} + [gamma, eps] {{G, F_j}, F_i}
///
/// with every bracket realized as (1 / i hbar) [.,.]. The same quantity
/// is recomputed by the literal two-path expansion
/// gamma {eps {G, F_i}, F_j} - eps {gamma {G, F_j}, F_i} and the two
/// routes must agree to 1e-10. Requires ghosts commuting with the
/// system operators (scalar ghosts, or ghosts on a tensored factor).
pub fn ghost_defect_routes(
    g: &Operator,
    f_i: &Operator,
    f_j: &Operator,
    eps: &Operator,
    gamma: &Operator,
    hbar: f64,
) -> Result<(Operator, Operator)> {
    let inner = pbracket(f_i, f_j, hbar)?;
    let term1 = gamma.matmul(eps).matmul(&pbracket(g, &inner, hbar)?);
    let ghost_comm = commutator(gamma, eps)?;
    let term2 = ghost_comm.matmul(&pbracket(&pbracket(g, f_j, hbar)?, f_i, hbar)?);
    let direct = term1.add(&term2);

    let path_a = gamma.matmul(&pbracket(&eps.matmul(&pbracket(g, f_i, hbar)?), f_j, hbar)?);
    let path_b = eps.matmul(&pbracket(&gamma.matmul(&pbracket(g, f_j, hbar)?), f_i, hbar)?);
    let two_path = path_a.sub(&path_b);
    Ok((direct, two_path))
}

pub fn ghost_defect(
    g: &Operator,
    f_i: &Operator,
    f_j: &Operator,
    eps: &Operator,
    gamma: &Operator,
    hbar: f64,
) -> Result<Operator> {
    let (direct, two_path) = ghost_defect_routes(g, f_i, f_j, eps, gamma, hbar)?;
    let dev = direct.sub(&two_path).fro_norm();
    let scale = (g.fro_norm() * f_i.fro_norm() * f_j.fro_norm() / (hbar * hbar)).max(1.0);
    if dev > 1e-10 * scale {
        return Err(LabError::InvalidParameter(format!(
            "ghost defect routes disagree: {dev:.3e} (ghosts must commute with the system)"
        )));
    }
    Ok(direct)
}

/// Residual of the constrained canonical equations on a representation:
/// (1 / i hbar)[Q, H_T] against dH/dp + lambda dF/dp, and
/// (1 / i hbar)[P, H_T] against -(dH/dq + lambda dF/dq), with the
/// derivatives taken symbolically. Returns the max interior residual.
pub fn hamilton_residual(
    h_sym: &NcPolynomial,
    lambda: f64,
    f_sym: &NcPolynomial,
    rep: &Representation,
) -> Result<ResidualReport> {
    let h_no = h_sym.normal_order();
    let f_no = f_sym.normal_order();
    let total = h_no.add(&f_no.scale(&rat_from_f64(lambda)?)).normal_order();
    let h_t = total.evaluate(rep.q(), rep.p(), rep.hbar)?;

    let degree = total
        .terms()
        .map(|(k, _)| k.word.len())
        .max()
        .unwrap_or(0);
    let margin = degree.max(rep.interior_margin).min(rep.dim / 2);

    let dp = total.formal_derivative(Sym::P)?.evaluate(rep.q(), rep.p(), rep.hbar)?;
    let dq = total.formal_derivative(Sym::Q)?.evaluate(rep.q(), rep.p(), rep.hbar)?;

    let q_dot = pbracket(rep.q(), &h_t, rep.hbar)?;
    let p_dot = pbracket(rep.p(), &h_t, rep.hbar)?;

    let rq = q_dot.sub(&dp).interior_norm(margin);
    let rp = p_dot.add(&dq).interior_norm(margin);
    let residual = rq.max(rp);
    let scale = h_t.fro_norm().max(1.0);
    Ok(ResidualReport::new("hamilton", residual, 1e-10 * scale)
        .with_operands(format!("lambda={lambda}"))
        .with_dim(rep.dim))
}

fn rat_from_f64(x: f64) -> Result<crate::symbolic::CRat> {
    // every finite f64 is an exact rational, so the symbolic route
    // stays bit-faithful to the numeric multiplier
    let re = crate::symbolic::Rat::from_float(x)
        .ok_or_else(|| LabError::InvalidParameter(format!("multiplier {x} is not finite")))?;
    Ok(crate::symbolic::CRat { re, im: crate::symbolic::Rat::from_integer(0.into()) })
}

#[derive(Clone, Copy, Debug, Default)]
pub struct FHypothesisCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub a_prime: f64,
    pub b_prime: f64,
    pub c_prime: f64,
    pub d_prime: f64,
}

/// F = [P,Q] + i hbar I + A P + B P^2 - C P^3 - D P^4
///       - A' Q + B' Q^2 + C' Q^3 + D' Q^4.
/// The leading block is anti-Hermitian and interior-zero on a ladder
/// pair; the polynomial tail is Hermitian.
pub fn f_hypothesis(c: &FHypothesisCoefficients, rep: &Representation) -> Result<Operator> {
    let q = rep.q();
    let p = rep.p();
    let hbar = rep.hbar;
    let mut f = commutator(p, q)?
        .add(&Operator::identity(rep.dim).scale(Complex64::new(0.0, hbar)));
    let re = |x: f64| Complex64::new(x, 0.0);
    f = f
        .add(&p.scale(re(c.a)))
        .add(&p.pow(2).scale(re(c.b)))
        .sub(&p.pow(3).scale(re(c.c)))
        .sub(&p.pow(4).scale(re(c.d)))
        .sub(&q.scale(re(c.a_prime)))
        .add(&q.pow(2).scale(re(c.b_prime)))
        .add(&q.pow(3).scale(re(c.c_prime)))
        .add(&q.pow(4).scale(re(c.d_prime)));
    Ok(f)
}

/// Interior deviation of the evolved spectrum: eigenvalues of G before
/// and after unitary conjugation agree to rounding.
pub fn spectrum_drift(g: &Operator, evolved: &Operator) -> Result<f64> {
    let (a, _) = eigh(g)?;
    let (b, _) = eigh(evolved)?;
    Ok(a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
}
