//! Wigner rotations induced by a Lorentz boost.
//!
//! Both particles move along ±z and the observer is boosted along x. The
//! induced Wigner rotation is a rotation about y by `+Ω` for momentum `p₊`
//! and by `-Ω` for `p₋`, so the boost acts on the composite space as a
//! momentum-controlled spin rotation.

use std::f64::consts::FRAC_PI_2;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{complexify, CMatrix, FactorOrder, PureState};

/// Spins for which rotation matrices are available.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Spin {
    Half,
    One,
}

impl Spin {
    pub fn from_value(j: f64) -> Result<Self> {
        if j == 0.5 {
            Ok(Self::Half)
        } else if j == 1.0 {
            Ok(Self::One)
        } else {
            Err(Error::UnsupportedSpin(j))
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Self::Half => 0.5,
            Self::One => 1.0,
        }
    }

    /// `2j + 1`
    pub fn dim(self) -> usize {
        match self {
            Self::Half => 2,
            Self::One => 3,
        }
    }
}

/// y-component of angular momentum in the basis `m = j, j-1, ..., -j`.
pub fn jy_matrix(spin: Spin) -> CMatrix {
    let j = spin.value();
    let n = spin.dim();
    // J₊ |m⟩ = sqrt(j(j+1) - m(m+1)) |m+1⟩; row index of m is j - m.
    let raise = DMatrix::<f64>::from_fn(n, n, |r, c| {
        if r + 1 == c {
            let m = j - c as f64;
            (j * (j + 1.0) - m * (m + 1.0)).sqrt()
        } else {
            0.0
        }
    });
    // J_y = (J₊ - J₋) / 2i
    let half_minus_i = Complex64::new(0.0, -0.5);
    complexify(&(&raise - raise.transpose())) * half_minus_i
}

/// Real rotation matrix `d^j(β) = exp(-iβ J_y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct WignerRotation {
    spin: Spin,
    beta: f64,
    matrix: DMatrix<f64>,
}

impl WignerRotation {
    pub fn spin(&self) -> Spin {
        self.spin
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn to_complex(&self) -> CMatrix {
        complexify(&self.matrix)
    }
}

/// Closed-form small-d matrix about y. For spin 1 the basis is
/// `(|1⟩, |0⟩, |-1⟩)`.
pub fn wigner_d(spin: Spin, beta: f64) -> WignerRotation {
    let (s, c) = beta.sin_cos();
    let matrix = match spin {
        Spin::Half => {
            let (sh, ch) = (beta / 2.0).sin_cos();
            DMatrix::from_row_slice(2, 2, &[ch, -sh, sh, ch])
        }
        Spin::One => {
            let r = s * std::f64::consts::FRAC_1_SQRT_2;
            let p = (1.0 + c) / 2.0;
            let m = (1.0 - c) / 2.0;
            DMatrix::from_row_slice(3, 3, &[p, -r, m, r, c, -r, m, r, p])
        }
    };
    WignerRotation { spin, beta, matrix }
}

/// Wigner angle for a particle with standard-boost rapidity `xi` seen from an
/// observer boosted perpendicularly with rapidity `eta`:
/// `tan Ω = sinh ξ sinh η / (cosh ξ + cosh η)`.
pub fn wigner_angle(xi: f64, eta: f64) -> Result<f64> {
    for r in [xi, eta] {
        if r.is_nan() || r < 0.0 {
            return Err(Error::NegativeRapidity(r));
        }
    }
    // Divided through by cosh ξ cosh η so large rapidities saturate at π/2
    // instead of overflowing to NaN.
    let num = xi.tanh() * eta.tanh();
    let den = eta.cosh().recip() + xi.cosh().recip();
    Ok((num / den).atan())
}

/// How the boost is specified: by rapidities, or directly by the Wigner angle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoostSpec {
    Rapidities { xi: f64, eta: f64 },
    WignerAngle { omega: f64 },
}

impl BoostSpec {
    pub fn rapidities(xi: f64, eta: f64) -> Result<Self> {
        wigner_angle(xi, eta)?;
        Ok(Self::Rapidities { xi, eta })
    }

    /// Direct angle input; `Ω = π/2` is allowed although rapidities only
    /// approach it asymptotically.
    pub fn angle(omega: f64) -> Result<Self> {
        if !(0.0..=FRAC_PI_2).contains(&omega) {
            return Err(Error::InvalidParameter(format!(
                "Wigner angle {omega} outside [0, π/2]"
            )));
        }
        Ok(Self::WignerAngle { omega })
    }

    pub fn omega(&self) -> Result<f64> {
        match *self {
            Self::Rapidities { xi, eta } => wigner_angle(xi, eta),
            Self::WignerAngle { omega } => Self::angle(omega).map(|_| omega),
        }
    }
}

/// Which momentum receives the positive rotation. Physical results do not
/// depend on the choice.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignConvention {
    /// `p₊ → +Ω`, `p₋ → -Ω`
    #[default]
    Standard,
    /// `p₊ → -Ω`, `p₋ → +Ω`
    Flipped,
}

impl SignConvention {
    /// Rotation sign for momentum basis index 0 (`p₊`) and 1 (`p₋`).
    fn sign(self, momentum: usize) -> f64 {
        let s = if momentum == 0 { 1.0 } else { -1.0 };
        match self {
            Self::Standard => s,
            Self::Flipped => -s,
        }
    }
}

/// Boost operator on one particle's `[p, s]` space (dimension 6).
pub fn single_particle_boost(omega: f64, convention: SignConvention) -> CMatrix {
    let mut u = CMatrix::zeros(6, 6);
    for p in 0..2 {
        let d = wigner_d(Spin::One, convention.sign(p) * omega).to_complex();
        u.view_mut((3 * p, 3 * p), (3, 3)).copy_from(&d);
    }
    u
}

/// `U(Ω) = Σ_ab |p_a p_b⟩⟨p_a p_b| ⊗ d(±Ω) ⊗ d(±Ω)` on `[pA, pB, sA, sB]`.
pub fn boost_operator(omega: f64) -> CMatrix {
    boost_operator_with(omega, SignConvention::Standard)
}

pub fn boost_operator_with(omega: f64, convention: SignConvention) -> CMatrix {
    let mut u = CMatrix::zeros(36, 36);
    for a in 0..2 {
        let da = wigner_d(Spin::One, convention.sign(a) * omega);
        for b in 0..2 {
            let db = wigner_d(Spin::One, convention.sign(b) * omega);
            let block = complexify(&da.matrix().kronecker(db.matrix()));
            let offset = 9 * (2 * a + b);
            u.view_mut((offset, offset), (9, 9)).copy_from(&block);
        }
    }
    u
}

/// A boost operator ready to act on canonical-order states.
#[derive(Clone, Debug)]
pub struct BoostOperator {
    omega: f64,
    convention: SignConvention,
    matrix: CMatrix,
    unitary: bool,
}

impl BoostOperator {
    pub fn new(omega: f64) -> Self {
        Self::with_convention(omega, SignConvention::Standard)
    }

    pub fn with_convention(omega: f64, convention: SignConvention) -> Self {
        Self {
            omega,
            convention,
            matrix: boost_operator_with(omega, convention),
            unitary: true,
        }
    }

    /// Adds `epsilon` times a fixed operator coupling the two particles'
    /// momenta. The result is no longer unitary; this exists as a negative
    /// control for the conservation checks.
    pub fn perturbed(mut self, epsilon: f64) -> Self {
        if epsilon != 0.0 {
            let coupling = CMatrix::from_fn(36, 36, |i, j| {
                // flips both momentum labels, leaves spins alone
                if i % 9 == j % 9 && i / 9 == 3 - j / 9 {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            });
            self.matrix = &self.matrix + coupling * Complex64::new(0.0, epsilon);
            self.unitary = false;
        }
        self
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn convention(&self) -> SignConvention {
        self.convention
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Applies the operator. Only a perturbed operator renormalizes its output,
    /// so `U(0)` returns the input bit for bit.
    pub fn apply(&self, psi: &PureState) -> Result<PureState> {
        if psi.order() != &FactorOrder::canonical() {
            return Err(Error::InvalidFactorOrder(format!(
                "boost expects canonical order, got {}",
                psi.order()
            )));
        }
        let out = &self.matrix * psi.amplitudes();
        if self.unitary {
            Ok(PureState::from_parts_unchecked(out, FactorOrder::canonical()))
        } else {
            PureState::normalized(out, FactorOrder::canonical())
        }
    }
}
