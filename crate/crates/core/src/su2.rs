//! Two-level algebra shared by every engine: coin spinors, 2×2 unitaries,
//! Bloch vectors and the `U = cos ε·I − i sin ε·(n·σ)` decomposition.
//!
//! Conventions fixed here and used throughout the crate:
//!
//! * coin rotations are about `σ_y`: `R(θ) = exp(−iθσ_y/2)`;
//! * momentum amplitudes are `ψ(k, μ) = Σ_x e^{−ikx} ψ(x, μ)`, so moving the
//!   `↑` component one site to the right multiplies it by `e^{−ik}`.

use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::Angle;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Below this `sin ε` the rotation axis of an SU(2) element is undefined.
pub const DEGENERATE_SIN: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Su2Error {
    #[error("matrix is not in SU(2): unitarity defect {unitarity:.3e}, |det - 1| = {det:.3e}")]
    NotSpecialUnitary { unitarity: f64, det: f64 },
    #[error("rotation axis undefined at quasienergy {epsilon}")]
    DegenerateDirection { epsilon: f64 },
    #[error("momentum grid size must be even and at least 2, got {0}")]
    InvalidGrid(usize),
}

/// Coin-space amplitudes `(ψ↑, ψ↓)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Spinor {
    pub up: Complex64,
    pub down: Complex64,
}

impl Spinor {
    pub const fn new(up: Complex64, down: Complex64) -> Self {
        Spinor { up, down }
    }

    pub fn up() -> Self {
        Spinor::new(ONE, ZERO)
    }

    pub fn down() -> Self {
        Spinor::new(ZERO, ONE)
    }

    /// `|↓_y⟩ = (|↑⟩ − i|↓⟩)/√2`, the σ_y eigenstate with eigenvalue −1.
    pub fn down_y() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Spinor::new(Complex64::new(s, 0.0), Complex64::new(0.0, -s))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.up.norm_sqr() + self.down.norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Returns `None` for a (numerically) zero spinor.
    pub fn normalized(&self) -> Option<Spinor> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| self.scale(Complex64::new(1.0 / n, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> Spinor {
        Spinor::new(self.up * c, self.down * c)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Spinor) -> Complex64 {
        self.up.conj() * other.up + self.down.conj() * other.down
    }

    /// Expectation value of `n·σ`.
    pub fn bloch_expectation(&self, n: &BlochVector) -> f64 {
        self.inner(&(n.sigma() * *self)).re
    }

    /// Bloch vector `⟨σ⟩` of a normalized spinor.
    pub fn bloch(&self) -> BlochVector {
        let c = self.up.conj() * self.down;
        BlochVector::new(
            2.0 * c.re,
            2.0 * c.im,
            self.up.norm_sqr() - self.down.norm_sqr(),
        )
    }

    pub fn max_abs_diff(&self, other: &Spinor) -> f64 {
        (self.up - other.up).norm().max((self.down - other.down).norm())
    }

    /// Fixes the global phase so the larger-modulus component is real and
    /// positive; ties go to the `↑` component.
    pub fn gauge_fixed(&self) -> Spinor {
        let pivot = if self.up.norm() + 1e-12 >= self.down.norm() {
            self.up
        } else {
            self.down
        };
        if pivot.norm() == 0.0 {
            return *self;
        }
        self.scale(pivot.conj() / pivot.norm())
    }
}

/// A 2×2 complex matrix, row-major. Every constructor in this crate
/// produces a unitary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unitary2 {
    pub m: [[Complex64; 2]; 2],
}

impl Unitary2 {
    pub const fn new(m: [[Complex64; 2]; 2]) -> Self {
        Unitary2 { m }
    }

    pub fn identity() -> Self {
        Unitary2::new([[ONE, ZERO], [ZERO, ONE]])
    }

    pub fn diag(a: Complex64, b: Complex64) -> Self {
        Unitary2::new([[a, ZERO], [ZERO, b]])
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.m;
        Unitary2::new([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn trace(&self) -> Complex64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn det(&self) -> Complex64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let m = &self.m;
        Unitary2::new([[m[0][0] * c, m[0][1] * c], [m[1][0] * c, m[1][1] * c]])
    }

    pub fn add(&self, other: &Unitary2) -> Self {
        let (a, b) = (&self.m, &other.m);
        Unitary2::new([
            [a[0][0] + b[0][0], a[0][1] + b[0][1]],
            [a[1][0] + b[1][0], a[1][1] + b[1][1]],
        ])
    }

    pub fn max_abs_diff(&self, other: &Unitary2) -> f64 {
        let mut d: f64 = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                d = d.max((self.m[r][c] - other.m[r][c]).norm());
            }
        }
        d
    }

    /// Largest entrywise deviation of `U†U` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        (self.adjoint() * *self).max_abs_diff(&Unitary2::identity())
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut acc = Unitary2::identity();
        let mut base = *self;
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl Mul for Unitary2 {
    type Output = Unitary2;

    fn mul(self, rhs: Unitary2) -> Unitary2 {
        let (a, b) = (&self.m, &rhs.m);
        Unitary2::new([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }
}

impl Mul<Spinor> for Unitary2 {
    type Output = Spinor;

    fn mul(self, s: Spinor) -> Spinor {
        let m = &self.m;
        Spinor::new(
            m[0][0] * s.up + m[0][1] * s.down,
            m[1][0] * s.up + m[1][1] * s.down,
        )
    }
}

/// Real 3-vector; the unit-norm case is the axis `n` of `H = ε n·σ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub nx: f64,
    pub ny: f64,
    pub nz: f64,
}

impl BlochVector {
    pub const X: BlochVector = BlochVector::new(1.0, 0.0, 0.0);
    pub const Y: BlochVector = BlochVector::new(0.0, 1.0, 0.0);
    pub const Z: BlochVector = BlochVector::new(0.0, 0.0, 1.0);

    pub const fn new(nx: f64, ny: f64, nz: f64) -> Self {
        BlochVector { nx, ny, nz }
    }

    pub fn dot(&self, o: &BlochVector) -> f64 {
        self.nx * o.nx + self.ny * o.ny + self.nz * o.nz
    }

    pub fn cross(&self, o: &BlochVector) -> BlochVector {
        BlochVector::new(
            self.ny * o.nz - self.nz * o.ny,
            self.nz * o.nx - self.nx * o.nz,
            self.nx * o.ny - self.ny * o.nx,
        )
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scaled(&self, s: f64) -> BlochVector {
        BlochVector::new(self.nx * s, self.ny * s, self.nz * s)
    }

    pub fn sub(&self, o: &BlochVector) -> BlochVector {
        BlochVector::new(self.nx - o.nx, self.ny - o.ny, self.nz - o.nz)
    }

    pub fn normalized(&self) -> Option<BlochVector> {
        let n = self.norm();
        (n > 0.0).then(|| self.scaled(1.0 / n))
    }

    pub fn components(&self) -> [f64; 3] {
        [self.nx, self.ny, self.nz]
    }

    /// `n·σ = [[nz, nx − i ny], [nx + i ny, −nz]]`.
    pub fn sigma(&self) -> Unitary2 {
        Unitary2::new([
            [Complex64::new(self.nz, 0.0), Complex64::new(self.nx, -self.ny)],
            [Complex64::new(self.nx, self.ny), Complex64::new(-self.nz, 0.0)],
        ])
    }

    /// Eigenvector of `n·σ` with eigenvalue −1 (lower band of `ε n·σ`),
    /// gauge-fixed by [`Spinor::gauge_fixed`].
    pub fn lower_eigenvector(&self) -> Spinor {
        self.eigenvector(-1.0)
    }

    /// Eigenvector of `n·σ` with eigenvalue +1.
    pub fn upper_eigenvector(&self) -> Spinor {
        self.eigenvector(1.0)
    }

    fn eigenvector(&self, sign: f64) -> Spinor {
        // (n·σ − s)v = 0 has the two candidate solutions below; pick the one
        // whose norm is bounded away from zero.
        let a = Spinor::new(
            Complex64::new(self.nx, -self.ny),
            Complex64::new(sign - self.nz, 0.0),
        );
        let b = Spinor::new(
            Complex64::new(sign + self.nz, 0.0),
            Complex64::new(self.nx, self.ny),
        );
        let v = if a.norm_sqr() >= b.norm_sqr() { a } else { b };
        v.normalized()
            .expect("unit Bloch vector has a nonzero eigenvector")
            .gauge_fixed()
    }
}

/// `R(θ) = exp(−iθσ_y/2) = [[cos θ/2, −sin θ/2], [sin θ/2, cos θ/2]]`.
pub fn make_rotation(theta: Angle) -> Unitary2 {
    rotation_raw(theta.radians())
}

/// Rotation by an angle that is not canonicalized (half angles, ramps).
pub fn rotation_raw(theta: f64) -> Unitary2 {
    let (s, c) = (theta / 2.0).sin_cos();
    Unitary2::new([
        [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
        [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
    ])
}

/// Momentum image of moving `↑` one site to the right: `diag(e^{−ik}, 1)`.
pub fn make_shift_up(k: f64) -> Unitary2 {
    Unitary2::diag(Complex64::from_polar(1.0, -k), ONE)
}

/// Momentum image of moving `↓` one site to the left: `diag(1, e^{ik})`.
pub fn make_shift_down(k: f64) -> Unitary2 {
    Unitary2::diag(ONE, Complex64::from_polar(1.0, k))
}

/// Rotation about `σ_z`: `exp(−iφσ_z/2) = diag(e^{−iφ/2}, e^{iφ/2})`.
pub fn z_rotation(phi: f64) -> Unitary2 {
    Unitary2::diag(Complex64::from_polar(1.0, -phi / 2.0), Complex64::from_polar(1.0, phi / 2.0))
}

/// Result of [`su2_decompose`]: `U = cos ε·I − i sin ε·(n·σ)` with `ε ∈ [0, π]`.
///
/// When `sin ε` is below [`DEGENERATE_SIN`] the axis is replaced by `+ŷ`
/// and `degenerate` is set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Su2Decomposition {
    pub epsilon: f64,
    pub n: BlochVector,
    pub degenerate: bool,
}

impl Su2Decomposition {
    pub fn direction(&self) -> Result<BlochVector, Su2Error> {
        if self.degenerate {
            Err(Su2Error::DegenerateDirection {
                epsilon: self.epsilon,
            })
        } else {
            Ok(self.n)
        }
    }

    /// Re-exponentiates the decomposition.
    pub fn to_unitary(&self) -> Unitary2 {
        let (s, c) = self.epsilon.sin_cos();
        Unitary2::identity()
            .scale(Complex64::new(c, 0.0))
            .add(&self.n.sigma().scale(Complex64::new(0.0, -s)))
    }

    /// `exp(−i ε t n·σ)`, the continuous-time propagator of `H = ε n·σ`.
    pub fn propagator(&self, t: f64) -> Unitary2 {
        let (s, c) = (self.epsilon * t).sin_cos();
        Unitary2::identity()
            .scale(Complex64::new(c, 0.0))
            .add(&self.n.sigma().scale(Complex64::new(0.0, -s)))
    }
}

pub fn su2_decompose(u: &Unitary2) -> Result<Su2Decomposition, Su2Error> {
    let unitarity = u.unitarity_defect();
    let det = (u.det() - ONE).norm();
    if unitarity > 1e-9 || det > 1e-9 {
        return Err(Su2Error::NotSpecialUnitary { unitarity, det });
    }
    let cos_eps = u.trace().re / 2.0;
    // A = i(U − cos ε·I) = sin ε · n·σ
    let a = u
        .add(&Unitary2::identity().scale(Complex64::new(-cos_eps, 0.0)))
        .scale(I);
    let m = &a.m;
    let v = BlochVector::new(
        (m[0][1].re + m[1][0].re) / 2.0,
        (m[1][0].im - m[0][1].im) / 2.0,
        (m[0][0].re - m[1][1].re) / 2.0,
    );
    let sin_eps = v.norm();
    let epsilon = sin_eps.atan2(cos_eps);
    if sin_eps < DEGENERATE_SIN {
        return Ok(Su2Decomposition {
            epsilon,
            n: BlochVector::Y,
            degenerate: true,
        });
    }
    Ok(Su2Decomposition {
        epsilon,
        n: v.scaled(1.0 / sin_eps),
        degenerate: false,
    })
}
