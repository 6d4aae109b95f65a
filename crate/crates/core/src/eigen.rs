//! Hermitian eigensolver: cyclic complex Jacobi rotations.
//!
//! Self-contained so suite output is bit-deterministic across platforms.
//! Adequate for the dimensions used here (<= a few hundred).

use num_complex::Complex64;

use crate::error::{LabError, Result};
use crate::operator::Operator;

/// Diagonalize a Hermitian operator. Returns eigenvalues in ascending
/// order and the unitary of eigenvectors (column k pairs with value k).
/// The backward error ||A v - lambda v|| per pair is verified post hoc
/// against `4 * dim * eps * ||A||_F`.
pub fn eigh(a: &Operator) -> Result<(Vec<f64>, Operator)> {
    if !a.is_hermitian() {
        return Err(LabError::InvalidParameter("eigh requires a Hermitian operator".into()));
    }
    let n = a.dim();
    let mut m = a.clone();
    let mut v = Operator::identity(n);
    let norm = a.fro_norm();
    let tol = 1e-15 * (norm + 1e-300);

    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m.get(p, q).norm_sqr();
            }
        }
        if off.sqrt() <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let g = m.get(p, q);
                let gabs = g.norm();
                if gabs <= 1e-300 {
                    continue;
                }
                let phi = g / gabs; // phase so the pivot becomes real
                let alpha = m.get(p, p).re;
                let beta = m.get(q, q).re;
                let tau = (alpha - beta) / (2.0 * gabs);
                // small-magnitude root of t^2 - 2 tau t - 1 = 0
                let t = if tau >= 0.0 {
                    -1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // J restricted to (p,q): [[c, s*phi], [-s*conj(phi), c]]
                let jpq = phi * s;
                let jqp = -phi.conj() * s;

                // M <- J^dagger M J : update columns then rows
                for i in 0..n {
                    let mip = m.get(i, p);
                    let miq = m.get(i, q);
                    m.set(i, p, mip * c + miq * jqp);
                    m.set(i, q, mip * jpq + miq * c);
                }
                for j in 0..n {
                    let mpj = m.get(p, j);
                    let mqj = m.get(q, j);
                    m.set(p, j, mpj * c + mqj * jqp.conj());
                    m.set(q, j, mpj * jpq.conj() + mqj * c);
                }
                for i in 0..n {
                    let vip = v.get(i, p);
                    let viq = v.get(i, q);
                    v.set(i, p, vip * c + viq * jqp);
                    v.set(i, q, vip * jpq + viq * c);
                }
            }
        }
    }

    let mut pairs: Vec<(f64, usize)> = (0..n).map(|i| (m.get(i, i).re, i)).collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let values: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let vectors = Operator::from_fn(n, |i, j| v.get(i, pairs[j].1));

    let bound = 4.0 * n as f64 * f64::EPSILON * norm;
    for (k, &lambda) in values.iter().enumerate() {
        let mut err = 0.0f64;
        for i in 0..n {
            let mut av = Complex64::new(0.0, 0.0);
            for j in 0..n {
                av += a.get(i, j) * vectors.get(j, k);
            }
            err += (av - vectors.get(i, k) * lambda).norm_sqr();
        }
        let err = err.sqrt();
        if err > bound {
            return Err(LabError::EigenBackwardError(err, bound));
        }
    }
    Ok((values, vectors))
}
