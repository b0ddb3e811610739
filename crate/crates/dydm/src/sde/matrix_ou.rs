//! Entry-wise OU diffusion on symmetric matrices: the matrix-level oracle for
//! the spectral dynamics.

use super::DysonParams;
use crate::linalg::SymMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

#[derive(Clone, Copy, Debug)]
pub enum OuMode {
    /// Closed-form Gaussian transition: mean `m0 e^{-beta t}`, entry variance
    /// `D_ij^2 (1 - e^{-2 beta t}) / (2 beta)`.
    Exact,
    /// Euler-Maruyama with the given step, for didactic parity with the
    /// spectral integrator.
    Euler { dt: f64 },
}

/// Evolves the symmetric OU process from `m0` for time `t`. Each independent
/// upper-triangle entry has diffusion coefficient `D_ij = sqrt((1+delta_ij)
/// alpha)`.
pub fn simulate_matrix_ou(
    m0: &SymMatrix,
    p: &DysonParams,
    t: f64,
    mode: OuMode,
    rng: &mut impl Rng,
) -> SymMatrix {
    let n = m0.n();
    match mode {
        OuMode::Exact => {
            let decay = (-p.beta * t).exp();
            // Limit beta -> 0: variance D^2 t.
            let base_var = if p.beta > 0.0 {
                (1.0 - (-2.0 * p.beta * t).exp()) / (2.0 * p.beta)
            } else {
                t
            };
            SymMatrix::from_fn(n, |i, j| {
                let d2 = if i == j { 2.0 * p.alpha } else { p.alpha };
                let z: f64 = rng.sample(StandardNormal);
                m0.get(i, j) * decay + (d2 * base_var).sqrt() * z
            })
        }
        OuMode::Euler { dt } => {
            let mut m = m0.clone();
            let steps = (t / dt).ceil().max(1.0) as usize;
            let h = t / steps as f64;
            for _ in 0..steps {
                let prev = m.clone();
                for i in 0..n {
                    for j in i..n {
                        let d = ((if i == j { 2.0 } else { 1.0 }) * p.alpha).sqrt();
                        let z: f64 = rng.sample(StandardNormal);
                        m.set(
                            i,
                            j,
                            prev.get(i, j) - p.beta * prev.get(i, j) * h + d * h.sqrt() * z,
                        );
                    }
                }
            }
            m
        }
    }
}
