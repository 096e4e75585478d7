//! Parametrized spin and momentum states and the named states used in
//! reports and on the command line.
//!
//! Spin basis within each spin-1 factor: `|1⟩ → 0`, `|0⟩ → 1`, `|-1⟩ → 2`.
//! Momentum basis: `|p₊⟩ → 0`, `|p₋⟩ → 1`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lorentz::{wigner_d, Spin};
use crate::tensor::{complexify, kron_vec, CVector, FactorOrder, PureState, NORM_TOL};

/// Index of the spin projection `m ∈ {1, 0, -1}` within one spin-1 factor.
pub fn spin_index(m: i8) -> usize {
    match m {
        1 => 0,
        0 => 1,
        -1 => 2,
        _ => panic!("spin-1 projection must be -1, 0 or 1, got {m}"),
    }
}

/// Index of `|m_A m_B⟩` in the two-particle spin space `[sA, sB]`.
pub fn spin_pair_index(m_a: i8, m_b: i8) -> usize {
    3 * spin_index(m_a) + spin_index(m_b)
}

/// Index of `|p_A p_B⟩` (`true` for `p₊`) in `[pA, pB]`.
pub fn momentum_pair_index(a_plus: bool, b_plus: bool) -> usize {
    2 * usize::from(!a_plus) + usize::from(!b_plus)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentumParams {
    pub alpha: f64,
}

/// `cos α |p₊ p₋⟩ + sin α |p₋ p₊⟩`
pub fn momentum_state(params: &MomentumParams) -> CVector {
    momentum_state_with_phase(params.alpha, 0.0)
}

/// `cos α |p₊ p₋⟩ + e^{iφ₀} sin α |p₋ p₊⟩`
pub fn momentum_state_with_phase(alpha: f64, phase: f64) -> CVector {
    let mut v = CVector::zeros(4);
    v[momentum_pair_index(true, false)] = Complex64::new(alpha.cos(), 0.0);
    v[momentum_pair_index(false, true)] = Complex64::from_polar(alpha.sin(), phase);
    v
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpinFamily {
    /// `sinθcosφ |1 1⟩ + sinθsinφ |0 0⟩ + cosθ |-1 -1⟩`
    S1,
    /// `sinθcosφ |1 -1⟩ + sinθsinφ |-1 1⟩ + cosθ |0 0⟩`
    S2,
}

impl SpinFamily {
    /// The three basis kets weighted by `(sinθcosφ, sinθsinφ, cosθ)`.
    pub fn kets(self) -> [(i8, i8); 3] {
        match self {
            Self::S1 => [(1, 1), (0, 0), (-1, -1)],
            Self::S2 => [(1, -1), (-1, 1), (0, 0)],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::S1 => "s1",
            Self::S2 => "s2",
        }
    }
}

impl fmt::Display for SpinFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SpinFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "s1" => Ok(Self::S1),
            "s2" => Ok(Self::S2),
            _ => Err(Error::UnknownName {
                kind: "spin family",
                name: s.to_string(),
            }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpinParams {
    pub family: SpinFamily,
    pub theta: f64,
    pub phi: f64,
}

impl SpinParams {
    pub fn new(family: SpinFamily, theta: f64, phi: f64) -> Self {
        Self { family, theta, phi }
    }

    /// Weights of the family's three kets.
    pub fn weights(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    /// Every `(θ, φ)` with `θ ∈ [0, π]`, `φ ∈ [0, 2π]` producing the unit
    /// weight vector `w` or its negative (which is the same physical state).
    /// Points on the poles, where φ is arbitrary, are reported with `φ = 0`.
    pub fn parameter_points(weights: [f64; 3]) -> Vec<(f64, f64)> {
        use std::f64::consts::TAU;
        let mut out = Vec::new();
        for sign in [1.0, -1.0] {
            let [a, b, c] = weights.map(|w| sign * w);
            let theta = c.clamp(-1.0, 1.0).acos();
            let phi = if a.hypot(b) < 1e-12 {
                0.0
            } else {
                b.atan2(a).rem_euclid(TAU)
            };
            out.push((theta, phi));
            if phi < 1e-12 {
                out.push((theta, TAU));
            }
        }
        out.sort_by(|x, y| x.partial_cmp(y).expect("finite"));
        out.dedup_by(|x, y| (x.0 - y.0).abs() < 1e-12 && (x.1 - y.1).abs() < 1e-12);
        out
    }
}

/// Two-particle spin state of a family, over `[sA, sB]`.
pub fn spin_state(params: &SpinParams) -> CVector {
    spin_vector(params.family.kets(), params.weights())
}

fn spin_vector(kets: [(i8, i8); 3], weights: [f64; 3]) -> CVector {
    let mut v = CVector::zeros(9);
    for ((ma, mb), w) in kets.into_iter().zip(weights) {
        v[spin_pair_index(ma, mb)] += Complex64::new(w, 0.0);
    }
    v
}

/// `|s⟩ ⊗ |p⟩` laid out in the canonical order `[pA, pB, sA, sB]`.
pub fn assemble(spin: &CVector, momentum: &CVector) -> Result<PureState> {
    for (v, expected) in [(spin, 9), (momentum, 4)] {
        if v.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                actual: v.len(),
            });
        }
        let norm = v.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
    }
    // The canonical order puts momentum first, so the product is p ⊗ s.
    PureState::new(kron_vec(momentum, spin), FactorOrder::canonical())
}

/// `(|1 1⟩ - |0 0⟩ + |-1 -1⟩)/√3`, unchanged by `d(Ω) ⊗ d(-Ω)` for every Ω.
pub fn invariant_spin_state() -> CVector {
    sign_pattern_state(-1.0, 1.0)
}

/// `(|1 1⟩ + s₀|0 0⟩ + s₁|-1 -1⟩)/√3` for signs `s₀, s₁ = ±1`.
pub fn sign_pattern_state(sign_00: f64, sign_m1m1: f64) -> CVector {
    let w = 1.0 / 3f64.sqrt();
    spin_vector(SpinFamily::S1.kets(), [w, sign_00 * w, sign_m1m1 * w])
}

/// `‖(d(Ω) ⊗ d(-Ω)) s − s‖`: how far `s` is from being invariant under the
/// counter-rotation that a boost applies to the `|p₊ p₋⟩` branch.
pub fn counter_rotation_defect(spin: &CVector, omega: f64) -> f64 {
    let rot = wigner_d(Spin::One, omega)
        .matrix()
        .kronecker(wigner_d(Spin::One, -omega).matrix());
    (complexify(&rot) * spin - spin).norm()
}

/// Named spin states addressable by a stable identifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NamedState {
    /// `(|1 1⟩ - |0 0⟩ + |-1 -1⟩)/√3`
    Inv3,
    /// `(|1 -1⟩ - |-1 1⟩)/√2`
    BellMinus,
    /// `(|1 -1⟩ + |-1 1⟩)/√2`
    BellPlus,
    /// `|0 0⟩`
    S00,
    /// `|1 1⟩`
    S11,
    /// `(|1 1⟩ + |-1 -1⟩)/√2`
    S11PlusM1M1,
    /// `(|1 1⟩ - |-1 -1⟩)/√2`
    S11MinusM1M1,
}

impl NamedState {
    pub const ALL: [NamedState; 7] = [
        Self::Inv3,
        Self::BellMinus,
        Self::BellPlus,
        Self::S00,
        Self::S11,
        Self::S11PlusM1M1,
        Self::S11MinusM1M1,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Self::Inv3 => "inv3",
            Self::BellMinus => "bell-minus",
            Self::BellPlus => "bell-plus",
            Self::S00 => "s00",
            Self::S11 => "s11",
            Self::S11PlusM1M1 => "s11p",
            Self::S11MinusM1M1 => "s11m",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Self::Inv3 => "(|1 1> - |0 0> + |-1 -1>)/sqrt(3)",
            Self::BellMinus => "(|1 -1> - |-1 1>)/sqrt(2)",
            Self::BellPlus => "(|1 -1> + |-1 1>)/sqrt(2)",
            Self::S00 => "|0 0>",
            Self::S11 => "|1 1>",
            Self::S11PlusM1M1 => "(|1 1> + |-1 -1>)/sqrt(2)",
            Self::S11MinusM1M1 => "(|1 1> - |-1 -1>)/sqrt(2)",
        }
    }

    /// Family and weights `(sinθcosφ, sinθsinφ, cosθ)` that produce this state.
    pub fn family_weights(self) -> (SpinFamily, [f64; 3]) {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let t = 1.0 / 3f64.sqrt();
        match self {
            Self::Inv3 => (SpinFamily::S1, [t, -t, t]),
            Self::BellMinus => (SpinFamily::S2, [h, -h, 0.0]),
            Self::BellPlus => (SpinFamily::S2, [h, h, 0.0]),
            Self::S00 => (SpinFamily::S1, [0.0, 1.0, 0.0]),
            Self::S11 => (SpinFamily::S1, [1.0, 0.0, 0.0]),
            Self::S11PlusM1M1 => (SpinFamily::S1, [h, 0.0, h]),
            Self::S11MinusM1M1 => (SpinFamily::S1, [h, 0.0, -h]),
        }
    }

    /// A family parameter point producing the state.
    pub fn params(self) -> SpinParams {
        let (family, w) = self.family_weights();
        let (theta, phi) = SpinParams::parameter_points(w)
            .into_iter()
            .find(|&(t, p)| {
                let got = SpinParams::new(family, t, p).weights();
                got.iter().zip(w).all(|(g, w)| (g - w).abs() < 1e-12)
            })
            .expect("weights are reachable");
        SpinParams::new(family, theta, phi)
    }

    pub fn vector(self) -> CVector {
        let (family, w) = self.family_weights();
        spin_vector(family.kets(), w)
    }
}

impl fmt::Display for NamedState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for NamedState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|n| n.id() == s)
            .ok_or_else(|| Error::UnknownName {
                kind: "named state",
                name: s.to_string(),
            })
    }
}
