use num_complex::Complex64;
use serde::Serialize;

/// Constants entering the two quantization rules.
///
/// `kappa = i*hbar` scales the commutator rule, `kappa_bar = hbar` the
/// anti-commutator rule. The permutation sign is defined only for the
/// ordered canonical pair: +1 for (q, p), -1 for (p, q); the general case
/// is left unspecified.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct QuantizationConstants {
    pub hbar: f64,
}

impl QuantizationConstants {
    pub fn new(hbar: f64) -> Self {
        assert!(hbar > 0.0, "hbar must be positive");
        Self { hbar }
    }

    pub fn kappa(&self) -> Complex64 {
        Complex64::new(0.0, self.hbar)
    }

    pub fn kappa_bar(&self) -> f64 {
        self.hbar
    }

    /// +1 for the ordered pair (q, p), -1 for (p, q).
    pub fn perm_sign(first_is_q: bool) -> f64 {
        if first_is_q {
            1.0
        } else {
            -1.0
        }
    }
}

impl Default for QuantizationConstants {
    fn default() -> Self {
        Self { hbar: 1.0 }
    }
}
