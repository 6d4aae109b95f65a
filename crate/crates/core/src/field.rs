//! Lattice fields: boson ladder sites with the 1/dx delta
//! normalization, fermion sites through Jordan-Wigner strings, and the
//! discretized second-quantized Schrodinger Hamiltonian with spectral
//! cross-checks.

use num_complex::Complex64;

use crate::eigen::eigh;
use crate::error::{LabError, Result};
use crate::operator::{anticommutator, commutator, Operator};
use crate::report::ResidualReport;
use crate::reps::jordan_wigner;

pub const MAX_FIELD_DIM: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Boundary {
    Open,
    Periodic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Statistics {
    Boson,
    Fermion,
}

#[derive(Clone, Debug)]
pub struct LatticeSpec {
    pub sites: usize,
    pub spacing: f64,
    pub boundary: Boundary,
    pub statistics: Statistics,
    /// per-site occupancy cutoff, bosons only
    pub n_max: usize,
    pub potential: Vec<f64>,
}

impl LatticeSpec {
    pub fn site_dim(&self) -> usize {
        match self.statistics {
            Statistics::Boson => self.n_max + 1,
            Statistics::Fermion => 2,
        }
    }

    pub fn hilbert_dim(&self) -> usize {
        self.site_dim().pow(self.sites as u32)
    }

    fn validate(&self) -> Result<()> {
        if self.sites == 0 {
            return Err(LabError::InvalidParameter("sites must be positive".into()));
        }
        if !(self.spacing > 0.0) {
            return Err(LabError::InvalidParameter("spacing must be positive".into()));
        }
        if self.statistics == Statistics::Boson && self.n_max == 0 {
            return Err(LabError::InvalidParameter("n_max must be positive".into()));
        }
        if self.potential.len() != self.sites {
            return Err(LabError::InvalidParameter(format!(
                "potential has {} samples for {} sites",
                self.potential.len(),
                self.sites
            )));
        }
        let mut dim = 1usize;
        for _ in 0..self.sites {
            dim = dim.saturating_mul(self.site_dim());
            if dim > MAX_FIELD_DIM {
                return Err(LabError::InvalidParameter(format!(
                    "Hilbert dimension exceeds {MAX_FIELD_DIM}"
                )));
            }
        }
        Ok(())
    }
}

/// Site annihilators scaled by 1/sqrt(dx) so the same-site bracket is
/// the lattice delta 1/dx.
#[derive(Clone, Debug)]
pub struct FieldOperators {
    pub psi: Vec<Operator>,
    pub sites: usize,
    pub site_dim: usize,
    pub spacing: f64,
    pub statistics: Statistics,
}

impl FieldOperators {
    pub fn dim(&self) -> usize {
        self.psi[0].dim()
    }

    pub fn creator(&self, x: usize) -> Operator {
        self.psi[x].dagger()
    }

    /// Canonical momentum pi_x = i hbar psi_x^dagger.
    pub fn momentum(&self, x: usize, hbar: f64) -> Operator {
        self.creator(x).scale(Complex64::new(0.0, hbar))
    }

    /// Total number operator N = sum_x psi_x^dagger psi_x dx.
    pub fn number(&self) -> Operator {
        let mut n = Operator::zeros(self.dim());
        for psi in &self.psi {
            n = n.add(&psi.dagger().matmul(psi));
        }
        n.scale(Complex64::new(self.spacing, 0.0))
    }

    /// Occupancy of site x in product-basis state s (first site is the
    /// most significant factor).
    pub fn occupancy(&self, s: usize, x: usize) -> usize {
        (s / self.site_dim.pow((self.sites - 1 - x) as u32)) % self.site_dim
    }
}

/// Per-site truncated ladder operators on the tensor product,
/// scaled by 1/sqrt(dx). Different sites commute exactly; the same-site
/// commutator is 1/dx away from the occupancy cutoff.
pub fn boson_lattice(spec: &LatticeSpec) -> Result<FieldOperators> {
    spec.validate()?;
    if spec.statistics != Statistics::Boson {
        return Err(LabError::InvalidParameter("boson_lattice needs boson statistics".into()));
    }
    let d = spec.site_dim();
    let a = Operator::from_fn(d, |i, j| {
        if j == i + 1 {
            Complex64::new((j as f64).sqrt(), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let scale = Complex64::new(1.0 / spec.spacing.sqrt(), 0.0);
    let mut psi = Vec::with_capacity(spec.sites);
    for x in 0..spec.sites {
        let mut op = Operator::identity(1);
        for y in 0..spec.sites {
            let factor = if y == x { a.clone() } else { Operator::identity(d) };
            op = op.kron(&factor);
        }
        psi.push(op.scale(scale).with_label(format!("psi_{x}")));
    }
    Ok(FieldOperators {
        psi,
        sites: spec.sites,
        site_dim: d,
        spacing: spec.spacing,
        statistics: Statistics::Boson,
    })
}

/// Jordan-Wigner modes scaled by 1/sqrt(dx); the CAR delta holds
/// exactly, no truncation exists for fermion sites.
pub fn fermion_lattice(spec: &LatticeSpec) -> Result<FieldOperators> {
    spec.validate()?;
    if spec.statistics != Statistics::Fermion {
        return Err(LabError::InvalidParameter("fermion_lattice needs fermion statistics".into()));
    }
    let alg = jordan_wigner(spec.sites)?;
    let scale = Complex64::new(1.0 / spec.spacing.sqrt(), 0.0);
    let psi = alg
        .annihilators
        .into_iter()
        .enumerate()
        .map(|(x, c)| c.scale(scale).with_label(format!("psi_{x}")))
        .collect();
    Ok(FieldOperators {
        psi,
        sites: spec.sites,
        site_dim: 2,
        spacing: spec.spacing,
        statistics: Statistics::Fermion,
    })
}

pub fn build_lattice(spec: &LatticeSpec) -> Result<FieldOperators> {
    match spec.statistics {
        Statistics::Boson => boson_lattice(spec),
        Statistics::Fermion => fermion_lattice(spec),
    }
}

/// Max deviation of dx [psi_x, psi_y^dagger] from delta_xy, measured on
/// product states whose x- and y-occupancies stay below the cutoff.
/// Fermion sites have no cutoff, so the whole space counts.
pub fn ccr_interior_residual(ops: &FieldOperators, x: usize, y: usize) -> Result<f64> {
    let c = match ops.statistics {
        Statistics::Boson => commutator(&ops.psi[x], &ops.creator(y))?,
        Statistics::Fermion => anticommutator(&ops.psi[x], &ops.creator(y))?,
    };
    let delta = if x == y { 1.0 / ops.spacing } else { 0.0 };
    let dev = c.sub(&Operator::identity(ops.dim()).scale(Complex64::new(delta, 0.0)));
    let cutoff = match ops.statistics {
        Statistics::Boson => ops.site_dim - 1,
        Statistics::Fermion => usize::MAX,
    };
    let mut worst = 0.0f64;
    for s in 0..ops.dim() {
        if ops.occupancy(s, x) >= cutoff || ops.occupancy(s, y) >= cutoff {
            continue;
        }
        for t in 0..ops.dim() {
            if ops.occupancy(t, x) >= cutoff || ops.occupancy(t, y) >= cutoff {
                continue;
            }
            worst = worst.max(dev.get(s, t).norm());
        }
    }
    Ok(worst)
}

/// Forward-difference gradient of the field: (psi_{x+1} - psi_x)/dx.
/// Open boundaries drop the last link; periodic boundaries wrap it.
fn gradient_links(spec: &LatticeSpec) -> Vec<(usize, usize)> {
    match spec.boundary {
        Boundary::Open => (0..spec.sites.saturating_sub(1)).map(|x| (x, x + 1)).collect(),
        Boundary::Periodic => (0..spec.sites).map(|x| (x, (x + 1) % spec.sites)).collect(),
    }
}

/// H = sum_x [ (hbar^2/2m) (grad psi)_x^dagger (grad psi)_x dx
///             + V_x psi_x^dagger psi_x dx ].
pub fn schrodinger_field_hamiltonian(spec: &LatticeSpec, mass: f64, hbar: f64) -> Result<Operator> {
    let ops = build_lattice(spec)?;
    let dx = spec.spacing;
    let mut h = Operator::zeros(ops.dim());
    let kin = hbar * hbar / (2.0 * mass);
    for (x, xp) in gradient_links(spec) {
        let grad = ops.psi[xp]
            .sub(&ops.psi[x])
            .scale(Complex64::new(1.0 / dx, 0.0));
        h = h.add(&grad.dagger().matmul(&grad).scale(Complex64::new(kin * dx, 0.0)));
    }
    for x in 0..spec.sites {
        h = h.add(
            &ops.psi[x]
                .dagger()
                .matmul(&ops.psi[x])
                .scale(Complex64::new(spec.potential[x] * dx, 0.0)),
        );
    }
    Ok(h)
}

/// Single-particle matrix of the same Hamiltonian:
/// (hbar^2/2m) G^T G + diag(V) with G the forward-difference matrix.
pub fn single_particle_matrix(spec: &LatticeSpec, mass: f64, hbar: f64) -> Operator {
    let n = spec.sites;
    let dx = spec.spacing;
    let kin = hbar * hbar / (2.0 * mass * dx * dx);
    let mut h = Operator::zeros(n);
    for (x, xp) in gradient_links(spec) {
        // (e_xp - e_x)(e_xp - e_x)^T expanded
        let add = |h: &mut Operator, i: usize, j: usize, v: f64| {
            let cur = h.get(i, j);
            h.set(i, j, cur + Complex64::new(v, 0.0));
        };
        add(&mut h, x, x, kin);
        add(&mut h, xp, xp, kin);
        add(&mut h, x, xp, -kin);
        add(&mut h, xp, x, -kin);
    }
    for x in 0..n {
        let cur = h.get(x, x);
        h.set(x, x, cur + Complex64::new(spec.potential[x], 0.0));
    }
    h
}

/// Free-fermion cross-check: the many-body spectrum must be the
/// multiset of all subset sums of the single-particle eigenvalues.
pub fn subset_sum_spectral_residual(spec: &LatticeSpec, mass: f64, hbar: f64) -> Result<f64> {
    if spec.statistics != Statistics::Fermion {
        return Err(LabError::InvalidParameter("subset-sum check is fermionic".into()));
    }
    let h = schrodinger_field_hamiltonian(spec, mass, hbar)?;
    let (many, _) = eigh(&h)?;
    let h1 = single_particle_matrix(spec, mass, hbar);
    let (single, _) = eigh(&h1)?;
    let n = spec.sites;
    let mut sums = Vec::with_capacity(1 << n);
    for mask in 0..(1usize << n) {
        let mut s = 0.0f64;
        for (k, e) in single.iter().enumerate() {
            if mask & (1 << k) != 0 {
                s += e;
            }
        }
        sums.push(s);
    }
    sums.sort_by(|a, b| a.partial_cmp(b).unwrap());
    if sums.len() != many.len() {
        return Err(LabError::SpectrumValidation("sector count mismatch".into()));
    }
    Ok(many
        .iter()
        .zip(&sums)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

/// [psi_x, pi_y]_+ = i hbar delta_xy / dx with pi = i hbar psi^dagger.
pub fn lagrange_field_check(spec: &LatticeSpec, hbar: f64) -> Result<ResidualReport> {
    if spec.statistics != Statistics::Fermion {
        return Err(LabError::InvalidParameter("lagrange field rule is fermionic".into()));
    }
    let ops = fermion_lattice(spec)?;
    let id = Operator::identity(ops.dim());
    let mut worst = 0.0f64;
    for x in 0..spec.sites {
        for y in 0..spec.sites {
            let lhs = anticommutator(&ops.psi[x], &ops.momentum(y, hbar))?;
            let delta = if x == y { hbar / spec.spacing } else { 0.0 };
            let want = id.scale(Complex64::new(0.0, delta));
            worst = worst.max(lhs.sub(&want).max_abs());
        }
    }
    let scale = (hbar / spec.spacing).max(1.0);
    Ok(ResidualReport::new("lagrange_field", worst, 1e-12 * scale)
        .with_dim(ops.dim())
        .with_operands(format!("sites={} dx={}", spec.sites, spec.spacing)))
}
