//! The 1925 matrix-mechanics program on the (an)harmonic oscillator:
//! spectra, transition tables, the Ritz combination rule, the
//! Thomas-Kuhn sum rule, low-order perturbation theory against full
//! diagonalization, and the operator Newton-law residual.

use num_complex::Complex64;

use crate::eigen::eigh;
use crate::error::{LabError, Result};
use crate::operator::{commutator, Operator};
use crate::report::ResidualReport;
use crate::reps::Representation;
use crate::symbolic::CPolynomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AnharmonicKind {
    Cubic,
    Quartic,
}

impl AnharmonicKind {
    pub fn power(&self) -> u32 {
        match self {
            AnharmonicKind::Cubic => 3,
            AnharmonicKind::Quartic => 4,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            AnharmonicKind::Cubic => "cubic",
            AnharmonicKind::Quartic => "quartic",
        }
    }
}

/// Anharmonic oscillator on a ladder base. The coupling is named `g`;
/// build_anharmonic validates that the interior spectrum stays real
/// and ordered for this strength.
#[derive(Clone, Debug)]
pub struct AnharmonicSpec {
    pub base: Representation,
    pub g: f64,
    pub kind: AnharmonicKind,
}

/// H = P^2/2m + m omega^2 Q^2/2 + g Q^k with the interior spectrum
/// validated: the lowest dim/2 eigenvalues must be strictly increasing
/// with truncation-clean gaps.
pub fn build_anharmonic(spec: &AnharmonicSpec) -> Result<Operator> {
    let rep = &spec.base;
    let q = rep.q();
    let p = rep.p();
    let h0 = p
        .matmul(p)
        .scale(Complex64::new(1.0 / (2.0 * rep.mass), 0.0))
        .add(&q.matmul(q).scale(Complex64::new(rep.mass * rep.omega * rep.omega / 2.0, 0.0)));
    let h = h0.add(&q.pow(spec.kind.power()).scale(Complex64::new(spec.g, 0.0)));
    if !h.is_hermitian() {
        return Err(LabError::SpectrumValidation("assembled H is not Hermitian".into()));
    }
    let (vals, _) = eigh(&h)?;
    let interior = (rep.dim / 2).max(2);
    for w in vals[..interior].windows(2) {
        if !(w[1] > w[0]) {
            return Err(LabError::SpectrumValidation(format!(
                "interior spectrum not strictly increasing: {} then {}",
                w[0], w[1]
            )));
        }
    }
    // a coupling strong enough to pull levels below the potential well
    // floor has escaped into the truncation artifacts
    if vals[0] < -1e-6 * rep.hbar * rep.omega {
        return Err(LabError::SpectrumValidation(format!(
            "ground level {} collapsed below the well floor",
            vals[0]
        )));
    }
    Ok(h.with_label(format!("H_{}", spec.kind.as_str())))
}

/// Spectrum and Q matrix elements restricted to the lowest k levels.
/// omega(n, m) = (E_n - E_m)/hbar is antisymmetric by construction;
/// x_nm = <n|Q|m> is Hermitian because Q is.
#[derive(Clone, Debug)]
pub struct TransitionTable {
    pub energies: Vec<f64>,
    pub amplitudes: Vec<Complex64>,
    pub k: usize,
    pub hbar: f64,
}

impl TransitionTable {
    pub fn omega(&self, n: usize, m: usize) -> f64 {
        (self.energies[n] - self.energies[m]) / self.hbar
    }

    pub fn x(&self, n: usize, m: usize) -> Complex64 {
        self.amplitudes[n * self.k + m]
    }

    /// CSV with header n,m,E_n,omega_nm_re,x_nm_re,x_nm_im.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,m,E_n,omega_nm_re,x_nm_re,x_nm_im\n");
        for n in 0..self.k {
            for m in 0..self.k {
                let x = self.x(n, m);
                out.push_str(&format!(
                    "{},{},{:.17e},{:.17e},{:.17e},{:.17e}\n",
                    n,
                    m,
                    self.energies[n],
                    self.omega(n, m),
                    x.re,
                    x.im
                ));
            }
        }
        out
    }
}

/// Diagonalize H and tabulate E_n, omega(n, m), x_nm for n, m < k.
/// The eigenpairs must meet the backward-error contract
/// ||H v - lambda v|| <= dim * eps * ||H||_F, checked per pair.
pub fn transition_table(h: &Operator, q: &Operator, k: usize, hbar: f64) -> Result<TransitionTable> {
    h.check_same_dim(q)?;
    if k == 0 || k > h.dim() {
        return Err(LabError::InvalidParameter(format!("level count {k} out of range")));
    }
    let (vals, vecs) = eigh(h)?;
    let n = h.dim();
    let norm = h.fro_norm();
    let bound = n as f64 * f64::EPSILON * norm;
    for col in 0..k {
        let mut err = 0.0f64;
        for i in 0..n {
            let mut hv = Complex64::new(0.0, 0.0);
            for j in 0..n {
                hv += h.get(i, j) * vecs.get(j, col);
            }
            err += (hv - vecs.get(i, col) * vals[col]).norm_sqr();
        }
        let err = err.sqrt();
        if err > bound {
            return Err(LabError::EigenBackwardError(err, bound));
        }
    }
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); k * k];
    let qv = q.matmul(&vecs);
    for a in 0..k {
        for b in 0..k {
            let mut x = Complex64::new(0.0, 0.0);
            for i in 0..n {
                x += vecs.get(i, a).conj() * qv.get(i, b);
            }
            amplitudes[a * k + b] = x;
        }
    }
    Ok(TransitionTable { energies: vals[..k].to_vec(), amplitudes, k, hbar })
}

/// Ritz combination: omega(n, n-a) + omega(n-a, n-b) = omega(n, n-b).
/// Telescoping of energy differences makes this exact up to rounding.
pub fn ritz_check(table: &TransitionTable) -> ResidualReport {
    let mut worst = 0.0f64;
    for n in 0..table.k {
        for a in 0..=n {
            for b in 0..=n {
                let mid = n - a;
                let low = n - b;
                let r = (table.omega(n, mid) + table.omega(mid, low) - table.omega(n, low)).abs();
                worst = worst.max(r);
            }
        }
    }
    let emax = table.energies.iter().fold(0.0f64, |m, e| m.max(e.abs())).max(1.0);
    ResidualReport::new("ritz", worst, 1e-12 * emax / table.hbar).with_dim(table.k)
}

/// Thomas-Kuhn sum rule: sum_m (E_m - E_n) |x_nm|^2 = hbar^2 / (2 m).
pub fn thomas_kuhn_check(table: &TransitionTable, n: usize, mass: f64) -> Result<ResidualReport> {
    if n >= table.k {
        return Err(LabError::InvalidParameter(format!("level {n} outside table of {}", table.k)));
    }
    let mut sum = 0.0f64;
    for m in 0..table.k {
        sum += (table.energies[m] - table.energies[n]) * table.x(n, m).norm_sqr();
    }
    let target = table.hbar * table.hbar / (2.0 * mass);
    let residual = (sum - target).abs();
    Ok(ResidualReport::new("thomas_kuhn", residual, 1e-8 * target.max(1.0))
        .with_operands(format!("n={n}"))
        .with_dim(table.k))
}

/// Rayleigh-Schrodinger energy through the requested order on the
/// harmonic basis. Order 0: hbar omega (n + 1/2). Order 1: the
/// diagonal element of the coupling. Order 2: the second-order sum
/// over intermediate harmonic levels.
pub fn perturbation_energy(spec: &AnharmonicSpec, n: usize, order: u32) -> Result<f64> {
    let rep = &spec.base;
    if n >= rep.dim {
        return Err(LabError::InvalidParameter(format!("level {n} outside dim {}", rep.dim)));
    }
    if order > 2 {
        return Err(LabError::InvalidParameter(format!("order {order} > 2")));
    }
    let e0 = rep.hbar * rep.omega * (n as f64 + 0.5);
    if order == 0 {
        return Ok(e0);
    }
    let v = rep.q().pow(spec.kind.power()).scale(Complex64::new(spec.g, 0.0));
    let e1 = v.get(n, n).re;
    if order == 1 {
        return Ok(e0 + e1);
    }
    let mut e2 = 0.0f64;
    for m in 0..rep.dim {
        if m == n {
            continue;
        }
        let denom = rep.hbar * rep.omega * (n as f64 - m as f64);
        if denom.abs() < 1e-14 {
            return Err(LabError::DegenerateDenominator(n, m));
        }
        e2 += v.get(m, n).norm_sqr() / denom;
    }
    Ok(e0 + e1 + e2)
}

/// Log-log slope of the order-2 perturbation error against the
/// coupling, fitted by least squares over the supplied grid.
pub fn perturbation_error_slope(
    dim: usize,
    kind: AnharmonicKind,
    n: usize,
    couplings: &[f64],
) -> Result<f64> {
    if couplings.len() < 2 {
        return Err(LabError::InvalidParameter("need at least two couplings".into()));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &g in couplings {
        let base = crate::reps::truncated_ladder(dim, 1.0, 1.0, 1.0)?;
        let spec = AnharmonicSpec { base, g, kind };
        let h = build_anharmonic(&spec)?;
        let (vals, _) = eigh(&h)?;
        let approx = perturbation_energy(&spec, n, 2)?;
        let err = (approx - vals[n]).abs();
        if err <= 0.0 {
            return Err(LabError::InvalidParameter("zero perturbation error".into()));
        }
        xs.push(g.ln());
        ys.push(err.ln());
    }
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(num / den)
}

/// Operator Newton law: (1/ i hbar)[P, H] + V'(Q) restricted to the
/// interior block, margin equal to deg(V).
pub fn ehrenfest_residual(rep: &Representation, v: &CPolynomial) -> Result<ResidualReport> {
    if v.degree_in_p() > 0 {
        return Err(LabError::InvalidParameter("potential must depend on q alone".into()));
    }
    if v.degree() > 4 {
        return Err(LabError::InvalidParameter("potential degree above 4".into()));
    }
    let q = rep.q();
    let p = rep.p();
    let h = p
        .matmul(p)
        .scale(Complex64::new(1.0 / (2.0 * rep.mass), 0.0))
        .add(&v.evaluate_in_q(q, rep.hbar)?);
    let comm = commutator(p, &h)?.scale(Complex64::new(0.0, -1.0 / rep.hbar));
    let force = v.diff_q().evaluate_in_q(q, rep.hbar)?;
    let margin = (v.degree() as usize).max(rep.interior_margin).min(rep.dim / 2);
    let residual = comm.add(&force).interior_norm(margin);
    let scale = h.fro_norm().max(1.0);
    Ok(ResidualReport::new("ehrenfest", residual, 1e-10 * scale)
        .with_operands(format!("V={v}"))
        .with_dim(rep.dim))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reps::truncated_ladder;
    use crate::symbolic::{parse_c_polynomial, CPolynomial};

    fn spec(dim: usize, g: f64, kind: AnharmonicKind) -> AnharmonicSpec {
        AnharmonicSpec { base: truncated_ladder(dim, 1.0, 1.0, 1.0).unwrap(), g, kind }
    }

    #[test]
    fn harmonic_base_diagonal() {
        let s = spec(16, 0.0, AnharmonicKind::Quartic);
        let h = build_anharmonic(&s).unwrap();
        for n in 0..14 {
            assert!((h.get(n, n).re - (n as f64 + 0.5)).abs() < 1e-12);
        }
    }

    #[test]
    fn anharmonic_hermitian_and_ordered() {
        let s = spec(64, 0.1, AnharmonicKind::Quartic);
        let h = build_anharmonic(&s).unwrap();
        assert!(h.is_hermitian());
        let (vals, _) = eigh(&h).unwrap();
        for w in vals[..10].windows(2) {
            assert!(w[1] > w[0]);
        }
        let s = spec(64, 0.01, AnharmonicKind::Cubic);
        assert!(build_anharmonic(&s).is_ok());
    }

    #[test]
    fn wild_cubic_coupling_rejected() {
        // strong cubic coupling collapses the lower spectrum
        let s = spec(32, 5.0, AnharmonicKind::Cubic);
        assert!(build_anharmonic(&s).is_err());
    }

    #[test]
    fn harmonic_transition_table() {
        let s = spec(64, 0.0, AnharmonicKind::Quartic);
        let h = build_anharmonic(&s).unwrap();
        let t = transition_table(&h, s.base.q(), 10, 1.0).unwrap();
        for n in 0..9 {
            assert!((t.omega(n + 1, n) - 1.0).abs() < 1e-10, "gap at {n}");
            let want = ((n as f64 + 1.0) / 2.0).sqrt();
            assert!((t.x(n, n + 1).norm() - want).abs() < 1e-10, "amplitude at {n}");
        }
        // Hermitian symmetry and antisymmetric frequencies
        for n in 0..t.k {
            for m in 0..t.k {
                assert!((t.x(n, m) - t.x(m, n).conj()).norm() < 1e-12);
                assert_eq!(t.omega(n, m), -t.omega(m, n));
            }
        }
    }

    #[test]
    fn cubic_gap_shift_resolvable() {
        let s = spec(64, 0.01, AnharmonicKind::Cubic);
        let h = build_anharmonic(&s).unwrap();
        let t = transition_table(&h, s.base.q(), 5, 1.0).unwrap();
        assert!((t.omega(2, 1) - t.omega(1, 0)).abs() > 1e-6);
    }

    #[test]
    fn ritz_combination_rule() {
        let s = spec(32, 0.01, AnharmonicKind::Cubic);
        let h = build_anharmonic(&s).unwrap();
        let t = transition_table(&h, s.base.q(), 10, 1.0).unwrap();
        let r = ritz_check(&t);
        assert!(r.pass, "ritz residual {}", r.residual);
    }

    #[test]
    fn thomas_kuhn_sum_rule() {
        let s = spec(64, 0.0, AnharmonicKind::Quartic);
        let h = build_anharmonic(&s).unwrap();
        let t = transition_table(&h, s.base.q(), 32, 1.0).unwrap();
        let r0 = thomas_kuhn_check(&t, 0, 1.0).unwrap();
        assert!(r0.residual < 1e-10, "n=0: {}", r0.residual);
        let r5 = thomas_kuhn_check(&t, 5, 1.0).unwrap();
        assert!(r5.residual < 1e-8, "n=5: {}", r5.residual);
    }

    #[test]
    fn thomas_kuhn_monotone_in_dim() {
        // errors at interior levels are rounding-level, so the
        // monotone approach is asserted with a 1e-12 noise floor
        for n in [0usize, 2, 5] {
            let mut prev = f64::INFINITY;
            for dim in [16usize, 32, 64] {
                let s = spec(dim, 0.0, AnharmonicKind::Quartic);
                let h = build_anharmonic(&s).unwrap();
                let t = transition_table(&h, s.base.q(), dim / 2, 1.0).unwrap();
                let r = thomas_kuhn_check(&t, n, 1.0).unwrap();
                assert!(r.residual <= prev + 1e-12, "n={n} dim={dim}: {} vs {}", r.residual, prev);
                prev = r.residual;
            }
        }
    }

    #[test]
    fn thomas_kuhn_top_level_truncation_artifact() {
        let s = spec(16, 0.0, AnharmonicKind::Quartic);
        let h = build_anharmonic(&s).unwrap();
        let t = transition_table(&h, s.base.q(), 16, 1.0).unwrap();
        let r = thomas_kuhn_check(&t, 15, 1.0).unwrap();
        assert!(!r.pass, "cutoff level must miss the sum rule: {}", r.residual);
    }

    #[test]
    fn perturbation_orders() {
        let s = spec(64, 0.001, AnharmonicKind::Cubic);
        assert!((perturbation_energy(&s, 2, 0).unwrap() - 2.5).abs() < 1e-14);
        // parity selection rule: <n|Q^3|n> = 0
        assert!(
            (perturbation_energy(&s, 2, 1).unwrap() - perturbation_energy(&s, 2, 0).unwrap())
                .abs()
                < 1e-15
        );
        assert!(perturbation_energy(&s, 2, 3).is_err());
    }

    #[test]
    fn quartic_order2_error_is_third_order() {
        let slope = perturbation_error_slope(
            64,
            AnharmonicKind::Quartic,
            1,
            &[1e-3, 2e-3, 4e-3],
        )
        .unwrap();
        assert!((2.7..=3.3).contains(&slope), "slope {slope}");
    }

    #[test]
    fn cubic_order2_error_is_fourth_order() {
        // E(g) is even in g for the cubic coupling (the parity flip
        // Q -> -Q maps g -> -g and is unitary), so the odd corrections
        // vanish and the first neglected term is quartic in g
        let slope = perturbation_error_slope(
            64,
            AnharmonicKind::Cubic,
            1,
            &[1e-3, 2e-3, 4e-3],
        )
        .unwrap();
        assert!((3.8..=4.2).contains(&slope), "slope {slope}");
    }

    #[test]
    fn ehrenfest_free_and_harmonic() {
        let rep = truncated_ladder(32, 1.0, 1.0, 1.0).unwrap();
        let free = ehrenfest_residual(&rep, &CPolynomial::zero()).unwrap();
        assert!(free.residual < 1e-12, "free particle: {}", free.residual);
        let harm = parse_c_polynomial("q^2/2").unwrap();
        let r = ehrenfest_residual(&rep, &harm).unwrap();
        assert!(r.residual < 1e-12, "harmonic: {}", r.residual);
    }

    #[test]
    fn ehrenfest_quartic_interior() {
        let rep = truncated_ladder(64, 1.0, 1.0, 1.0).unwrap();
        let v = parse_c_polynomial("q^2/2 + q^4/10").unwrap();
        let r = ehrenfest_residual(&rep, &v).unwrap();
        assert!(r.residual <= 1e-10, "quartic: {}", r.residual);
    }

    #[test]
    fn csv_round_shape() {
        let s = spec(16, 0.0, AnharmonicKind::Quartic);
        let h = build_anharmonic(&s).unwrap();
        let t = transition_table(&h, s.base.q(), 3, 1.0).unwrap();
        let csv = t.to_csv();
        let lines: Vec<&str> = csv.trim().lines().collect();
        assert_eq!(lines[0], "n,m,E_n,omega_nm_re,x_nm_re,x_nm_im");
        assert_eq!(lines.len(), 1 + 9);
    }
}
