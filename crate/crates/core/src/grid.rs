//! Coin angles and the discrete Brillouin-zone grid.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::su2::Su2Error;

/// A coin-rotation angle in radians, stored canonicalized to `(-π, π]`.
///
/// Note that the half-angle rotation satisfies `R(θ + 2π) = -R(θ)`, so the
/// canonical representative is what selects the physical rotation.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(into = "f64", from = "f64")]
pub struct Angle(f64);

impl Angle {
    pub fn new(radians: f64) -> Self {
        Angle(canonicalize(radians))
    }

    /// `numerator · π / denominator`, the form used by all scenario presets.
    pub fn pi_frac(numerator: f64, denominator: f64) -> Self {
        Angle::new(numerator * PI / denominator)
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    /// True when the angle is `π` modulo `2π`.
    pub fn is_pi(self) -> bool {
        (PI - self.0.abs()).abs() < 1e-12
    }

    pub fn half_cos(self) -> f64 {
        (self.0 / 2.0).cos()
    }

    pub fn half_sin(self) -> f64 {
        (self.0 / 2.0).sin()
    }
}

impl From<f64> for Angle {
    fn from(v: f64) -> Self {
        Angle::new(v)
    }
}

impl From<Angle> for f64 {
    fn from(a: Angle) -> f64 {
        a.0
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Maps any real angle to `(-π, π]`.
pub fn canonicalize(theta: f64) -> f64 {
    let v = theta.rem_euclid(2.0 * PI);
    if v > PI {
        v - 2.0 * PI
    } else {
        v
    }
}

/// Reduces a phase to `(-π, π]`.
pub fn wrap_phase(phi: f64) -> f64 {
    canonicalize(phi)
}

/// Uniform momentum grid `k_j = -π + 2πj/M`, `j = 0..M`.
///
/// `M` is required to be even so that both `k = 0` (at `j = M/2`) and the
/// zone edge `k = -π ≡ π` (at `j = 0`) are grid points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MomentumGrid {
    count: usize,
}

impl MomentumGrid {
    pub fn new(count: usize) -> Result<Self, Su2Error> {
        if count < 2 || count % 2 == 1 {
            return Err(Su2Error::InvalidGrid(count));
        }
        Ok(MomentumGrid { count })
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.count as f64
    }

    pub fn point(&self, j: usize) -> f64 {
        -PI + self.spacing() * j as f64
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.count).map(|j| self.point(j))
    }

    /// Index of the `k = 0` grid point.
    pub fn zero_index(&self) -> usize {
        self.count / 2
    }

    /// Indices covering the closed half zone `[0, π]`, in increasing `k`.
    ///
    /// The final entry is index 0 (`k = -π`), standing in for `k = π`.
    pub fn half_zone_indices(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (self.count / 2..self.count).collect();
        idx.push(0);
        idx
    }

    /// Momenta matching [`half_zone_indices`](Self::half_zone_indices), with
    /// the last value reported as `+π`.
    pub fn half_zone_points(&self) -> Vec<f64> {
        let mut ks: Vec<f64> = (self.count / 2..self.count).map(|j| self.point(j)).collect();
        ks.push(PI);
        ks
    }

    pub fn refined(&self) -> Self {
        MomentumGrid {
            count: self.count * 2,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_range_is_half_open() {
        assert_eq!(canonicalize(PI), PI);
        assert_eq!(canonicalize(-PI), PI);
        assert!((canonicalize(3.0 * PI) - PI).abs() < 1e-12);
        assert!((canonicalize(-PI / 3.0) + PI / 3.0).abs() < 1e-15);
    }

    #[test]
    fn grid_contains_zero_and_edge() {
        let g = MomentumGrid::new(256).unwrap();
        assert_eq!(g.point(g.zero_index()), 0.0);
        assert_eq!(g.point(0), -PI);
        let half = g.half_zone_points();
        assert_eq!(half.len(), 129);
        assert_eq!(half[0], 0.0);
        assert_eq!(*half.last().unwrap(), PI);
    }

    #[test]
    fn odd_or_tiny_grid_is_rejected() {
        assert!(MomentumGrid::new(0).is_err());
        assert!(MomentumGrid::new(101).is_err());
    }

    proptest! {
        #[test]
        fn canonicalize_is_2pi_periodic(theta in -20.0f64..20.0, m in -5i32..5) {
            let a = canonicalize(theta);
            let b = canonicalize(theta + 2.0 * PI * m as f64);
            let d = (a - b).abs();
            prop_assert!(d < 1e-9 || (d - 2.0 * PI).abs() < 1e-9);
            prop_assert!(a > -PI && a <= PI);
        }
    }
}
