//! Gauss–Legendre collocation on `[0, 1]` with a spectral integration matrix.

use std::sync::OnceLock;

pub const NODES: usize = 20;

pub struct Collocation {
    pub nodes: [f64; NODES],
    pub weights: [f64; NODES],
    /// `integ[i][j] = ∫₀^{nodes[i]} L_j(x) dx` for the Lagrange basis `L_j`.
    pub integ: [[f64; NODES]; NODES],
}

/// Legendre polynomials `P_0..P_m` at `x`.
fn legendre_all(x: f64, m: usize) -> Vec<f64> {
    let mut p = vec![0.0; m + 1];
    p[0] = 1.0;
    if m > 0 {
        p[1] = x;
    }
    for k in 1..m {
        p[k + 1] = ((2 * k + 1) as f64 * x * p[k] - k as f64 * p[k - 1]) / (k + 1) as f64;
    }
    p
}

/// Nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut t = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let p = legendre_all(t, n);
            let dp = n as f64 * (t * p[n] - p[n - 1]) / (t * t - 1.0);
            let step = p[n] / dp;
            t -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let p = legendre_all(t, n);
        let dp = n as f64 * (t * p[n] - p[n - 1]) / (t * t - 1.0);
        x[n - 1 - i] = t;
        w[n - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
    (x, w)
}

fn build() -> Collocation {
    let n = NODES;
    let (x, w) = gauss_legendre(n);
    let mut nodes = [0.0; NODES];
    let mut weights = [0.0; NODES];
    let mut integ = [[0.0; NODES]; NODES];
    let px: Vec<Vec<f64>> = x.iter().map(|&t| legendre_all(t, n)).collect();
    for i in 0..n {
        nodes[i] = 0.5 * (x[i] + 1.0);
        weights[i] = 0.5 * w[i];
        // ∫_{-1}^{x_i} P_k
        let ip: Vec<f64> = (0..n)
            .map(|k| if k == 0 { x[i] + 1.0 } else { (px[i][k + 1] - px[i][k - 1]) / (2 * k + 1) as f64 })
            .collect();
        for j in 0..n {
            // L_j = Σ_k (2k+1)/2 · w_j P_k(x_j) P_k
            let s: f64 = (0..n).map(|k| (2 * k + 1) as f64 / 2.0 * w[j] * px[j][k] * ip[k]).sum();
            integ[i][j] = 0.5 * s;
        }
    }
    Collocation { nodes, weights, integ }
}

pub fn collocation() -> &'static Collocation {
    static RULE: OnceLock<Collocation> = OnceLock::new();
    RULE.get_or_init(build)
}
