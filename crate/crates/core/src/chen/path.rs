use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formbank::{OneForm, DEFAULT_Y_MIN};
use crate::modgroup::check_upper;

/// A piecewise straight path in the upper half-plane.
///
/// Straight segments between points above `y_min` stay above `y_min`,
/// so only waypoints need checking.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Path {
    waypoints: Vec<Complex64>,
    #[serde(default = "default_y_min")]
    y_min: f64,
}

fn default_y_min() -> f64 {
    DEFAULT_Y_MIN
}

impl Path {
    pub fn new(waypoints: Vec<Complex64>) -> Result<Self> {
        Self::with_floor(waypoints, DEFAULT_Y_MIN)
    }

    pub fn with_floor(waypoints: Vec<Complex64>, y_min: f64) -> Result<Self> {
        if waypoints.is_empty() {
            return Err(Error::InvalidArgument("a path needs at least one point".into()));
        }
        for &z in &waypoints {
            check_upper(z, y_min)?;
        }
        Ok(Self { waypoints, y_min })
    }

    pub fn segment(a: Complex64, b: Complex64) -> Result<Self> {
        Self::new(vec![a, b])
    }

    pub fn waypoints(&self) -> &[Complex64] {
        &self.waypoints
    }

    pub fn y_min(&self) -> f64 {
        self.y_min
    }

    pub fn start(&self) -> Complex64 {
        self.waypoints[0]
    }

    pub fn end(&self) -> Complex64 {
        *self.waypoints.last().unwrap()
    }

    pub fn segment_count(&self) -> usize {
        self.waypoints.len() - 1
    }

    pub fn segments(&self) -> impl Iterator<Item = (Complex64, Complex64)> + '_ {
        self.waypoints.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn reversed(&self) -> Self {
        let mut w = self.waypoints.clone();
        w.reverse();
        Self { waypoints: w, y_min: self.y_min }
    }

    /// `self` followed by `other`; the junction must match exactly.
    pub fn concat(&self, other: &Path) -> Result<Self> {
        if self.end() != other.start() {
            return Err(Error::PathMismatch(format!("{} vs {}", self.end(), other.start())));
        }
        let mut w = self.waypoints.clone();
        w.extend_from_slice(&other.waypoints[1..]);
        Ok(Self { waypoints: w, y_min: self.y_min.max(other.y_min) })
    }

    /// Same path with every segment split at its midpoint.
    pub fn refined(&self) -> Self {
        let mut w = vec![self.start()];
        for (a, b) in self.segments() {
            w.push(0.5 * (a + b));
            w.push(b);
        }
        Self { waypoints: w, y_min: self.y_min }
    }

    /// Point and velocity at `t ∈ [0, 1]`, each segment taking equal time.
    pub fn point_at(&self, t: f64) -> Result<(Complex64, Complex64)> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidArgument(format!("path parameter {t} outside [0, 1]")));
        }
        let m = self.segment_count();
        if m == 0 {
            return Ok((self.start(), Complex64::new(0.0, 0.0)));
        }
        let s = t * m as f64;
        let k = (s.floor() as usize).min(m - 1);
        let (a, b) = (self.waypoints[k], self.waypoints[k + 1]);
        let u = s - k as f64;
        Ok((a + (b - a) * u, (b - a) * m as f64))
    }
}

/// `ω(z(t))(z′(t))`: the pulled-back integrand of a letter at time `t`.
pub fn pullback_integrand(letter: &dyn OneForm, path: &Path, t: f64, tol: f64) -> Result<Complex64> {
    let (z, dz) = path.point_at(t)?;
    letter.pullback(z, dz, tol)
}
