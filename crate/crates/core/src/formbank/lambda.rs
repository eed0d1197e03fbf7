use std::f64::consts::PI;

use num_complex::Complex64;

use super::Potential;
use crate::error::Result;
use crate::modgroup::check_upper;

/// `(θ₂, θ₃, θ₄)(τ)` by direct summation in `q = e^{πiτ}`.
pub fn theta_constants(tau: Complex64) -> Result<(Complex64, Complex64, Complex64)> {
    check_upper(tau, 0.0)?;
    let i_pi_tau = Complex64::new(0.0, PI) * tau;
    let mut t2 = Complex64::new(0.0, 0.0);
    let mut t3 = Complex64::new(1.0, 0.0);
    let mut t4 = Complex64::new(1.0, 0.0);
    let mut n = 0u32;
    loop {
        let half = n as f64 + 0.5;
        let a = (i_pi_tau * (half * half)).exp();
        t2 += 2.0 * a;
        let m = (n + 1) as f64;
        let b = (i_pi_tau * (m * m)).exp();
        t3 += 2.0 * b;
        t4 += if (n + 1) % 2 == 1 { -2.0 * b } else { 2.0 * b };
        if a.norm() < 1e-18 && b.norm() < 1e-18 {
            break;
        }
        n += 1;
    }
    Ok((t2, t3, t4))
}

/// `λ(τ) = θ₂⁴/θ₃⁴`.
pub fn modular_lambda(tau: Complex64) -> Result<Complex64> {
    let (t2, t3, _) = theta_constants(tau)?;
    Ok((t2 / t3).powi(4))
}

/// The Legendre modular function as a potential on the upper half-plane.
#[derive(Clone, Copy, Debug, Default)]
pub struct ModularLambda;

impl Potential for ModularLambda {
    fn label(&self) -> &str {
        "lambda"
    }

    fn value(&self, z: Complex64) -> Result<Complex64> {
        modular_lambda(z)
    }

    /// `λ' = πi λ θ₄⁴`.
    fn derivative(&self, z: Complex64) -> Result<Complex64> {
        let (t2, t3, t4) = theta_constants(z)?;
        let lambda = (t2 / t3).powi(4);
        Ok(Complex64::new(0.0, PI) * lambda * t4.powi(4))
    }
}
