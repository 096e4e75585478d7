//! Self-check suite: the conservation laws, the invariant state and the
//! scaling behaviour, evaluated at fixed seeds.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI, TAU};
use std::fmt::Write as _;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::entanglement::{linear_entropy, CanonicalPartition, CONSERVATION_TOL};
use crate::error::Result;
use crate::lorentz::{wigner_d, BoostOperator, SignConvention, Spin};
use crate::states::{
    assemble, invariant_spin_state, momentum_state, momentum_state_with_phase, spin_state, MomentumParams, SpinFamily,
    SpinParams,
};
use crate::sweep::GridSpec;
use crate::tensor::{reduced_state, CMatrix, MaxModulus, PureState, SubsystemLabel};

pub const SEED: u64 = 0x5EED_0B0057;

/// Knobs for exercising the suite against deliberately broken boosts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CheckConfig {
    pub convention: SignConvention,
    /// Strength of a non-unitary term added to the boost; 0 for the real one.
    pub nonunitary_perturbation: f64,
}

impl CheckConfig {
    fn boost(&self, omega: f64) -> BoostOperator {
        BoostOperator::with_convention(omega, self.convention).perturbed(self.nonunitary_perturbation)
    }

    fn opposite_convention(&self) -> SignConvention {
        match self.convention {
            SignConvention::Standard => SignConvention::Flipped,
            SignConvention::Flipped => SignConvention::Standard,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    /// Largest deviation seen (or smallest margin, for bound checks).
    pub worst: f64,
    pub tolerance: f64,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub passed: bool,
    pub checks: Vec<CheckOutcome>,
}

impl CheckReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let _ = writeln!(
                out,
                "[{}] {:<28} worst {:.3e} (tol {:.0e})  {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.worst,
                c.tolerance,
                c.detail
            );
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        let _ = writeln!(out, "{} checks, {} failed", self.checks.len(), failed);
        out
    }

    pub fn get(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn outcome(name: &str, worst: f64, tolerance: f64, detail: String) -> CheckOutcome {
    CheckOutcome {
        name: name.into(),
        passed: worst.is_finite() && worst < tolerance,
        worst,
        tolerance,
        detail,
    }
}

#[derive(Clone, Copy, Debug)]
struct Draw {
    spin: SpinParams,
    alpha: f64,
    omega: f64,
}

impl Draw {
    fn state(&self) -> Result<PureState> {
        assemble(
            &spin_state(&self.spin),
            &momentum_state(&MomentumParams { alpha: self.alpha }),
        )
    }
}

fn draws(rng: &mut ChaCha8Rng, n: usize) -> Vec<Draw> {
    (0..n)
        .map(|_| {
            let family = if rng.random_bool(0.5) {
                SpinFamily::S1
            } else {
                SpinFamily::S2
            };
            Draw {
                spin: SpinParams::new(family, rng.random_range(0.0..PI), rng.random_range(0.0..TAU)),
                alpha: rng.random_range(0.0..PI),
                omega: rng.random_range(0.0..=FRAC_PI_2),
            }
        })
        .collect()
}

fn delta(psi: &PureState, boost: &BoostOperator, p: CanonicalPartition) -> Result<f64> {
    let partition = p.partition();
    Ok(linear_entropy(&boost.apply(psi)?, &partition)? - linear_entropy(psi, &partition)?)
}

/// Runs every check with the real boost.
pub fn check_suite() -> Result<CheckReport> {
    check_suite_with(&CheckConfig::default())
}

pub fn check_suite_with(cfg: &CheckConfig) -> Result<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let checks = vec![
        check_unitarity(cfg),
        check_rotation_matrices(&mut rng),
        check_conservation(cfg, &mut rng)?,
        check_separable_momentum(cfg)?,
        check_invariant_state(cfg)?,
        check_alpha_scaling(cfg)?,
        check_sign_convention(cfg, &mut rng)?,
        check_zero_boost(cfg, &mut rng)?,
        check_entropy_bounds(cfg, &mut rng)?,
        check_momentum_phase(cfg, &mut rng)?,
    ]
    .into_iter()
    .flatten()
    .collect::<Vec<_>>();
    Ok(CheckReport {
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

fn check_unitarity(cfg: &CheckConfig) -> Vec<CheckOutcome> {
    let worst = (0..20)
        .map(|k| {
            let u = cfg.boost(FRAC_PI_2 * k as f64 / 19.0);
            (u.matrix() * u.matrix().adjoint() - CMatrix::identity(36, 36)).max_modulus()
        })
        .fold(0.0, f64::max);
    vec![outcome("boost-unitarity", worst, 1e-12, "20 angles in [0, π/2]".into())]
}

fn check_rotation_matrices(rng: &mut ChaCha8Rng) -> Vec<CheckOutcome> {
    let mut orth: f64 = 0.0;
    let mut group: f64 = 0.0;
    for _ in 0..50 {
        let (a, b) = (rng.random_range(-PI..PI), rng.random_range(-PI..PI));
        let da = wigner_d(Spin::One, a);
        let m = da.matrix();
        orth = orth.max((m.transpose() * m - nalgebra::DMatrix::identity(3, 3)).amax());
        orth = orth.max((m.determinant() - 1.0).abs());
        let composed = m * wigner_d(Spin::One, b).matrix();
        group = group.max((composed - wigner_d(Spin::One, a + b).matrix()).amax());
    }
    vec![
        outcome("d-matrix-orthogonality", orth, 1e-12, "50 random angles".into()),
        outcome("d-matrix-group-law", group, 1e-12, "50 random angle pairs".into()),
    ]
}

fn check_conservation(cfg: &CheckConfig, rng: &mut ChaCha8Rng) -> Result<Vec<CheckOutcome>> {
    let mut worst = [0.0f64; 2];
    for d in draws(rng, 200) {
        let psi = d.state()?;
        let boost = cfg.boost(d.omega);
        for (slot, p) in worst
            .iter_mut()
            .zip([CanonicalPartition::AvsB, CanonicalPartition::Mixed])
        {
            *slot = slot.max(delta(&psi, &boost, p)?.abs());
        }
    }
    Ok(vec![
        outcome(
            "avb-conservation",
            worst[0],
            CONSERVATION_TOL,
            "200 random draws".into(),
        ),
        outcome(
            "mixed-conservation",
            worst[1],
            CONSERVATION_TOL,
            "200 random draws".into(),
        ),
    ])
}

fn check_separable_momentum(cfg: &CheckConfig) -> Result<Vec<CheckOutcome>> {
    let thetas = GridSpec::new(0.0, PI, 13)?.points();
    let phis = GridSpec::new(0.0, TAU, 25)?.points();
    let mut worst: f64 = 0.0;
    for omega in [FRAC_PI_8, FRAC_PI_2] {
        let boost = cfg.boost(omega);
        for alpha in [0.0, FRAC_PI_2, PI] {
            let mom = momentum_state(&MomentumParams { alpha });
            for family in [SpinFamily::S1, SpinFamily::S2] {
                for &t in &thetas {
                    for &f in &phis {
                        let psi = assemble(&spin_state(&SpinParams::new(family, t, f)), &mom)?;
                        for p in CanonicalPartition::ALL {
                            worst = worst.max(delta(&psi, &boost, p)?.abs());
                        }
                    }
                }
            }
        }
    }
    Ok(vec![outcome(
        "separable-momentum-null",
        worst,
        1e-12,
        "α ∈ {0, π/2, π}, 13×25 grid, both families".into(),
    )])
}

fn check_invariant_state(cfg: &CheckConfig) -> Result<Vec<CheckOutcome>> {
    let mut fidelity_defect: f64 = 0.0;
    let mut worst_delta: f64 = 0.0;
    for omega in [FRAC_PI_8, FRAC_PI_4, FRAC_PI_2] {
        let boost = cfg.boost(omega);
        for alpha in [0.0, FRAC_PI_4] {
            let psi = assemble(&invariant_spin_state(), &momentum_state(&MomentumParams { alpha }))?;
            let out = boost.apply(&psi)?;
            fidelity_defect = fidelity_defect.max((1.0 - psi.fidelity(&out)?).abs());
            for p in CanonicalPartition::ALL {
                worst_delta = worst_delta.max(delta(&psi, &boost, p)?.abs());
            }
        }
    }
    Ok(vec![
        outcome(
            "invariant-state-fidelity",
            fidelity_defect,
            1e-12,
            "Ω ∈ {π/8, π/4, π/2}".into(),
        ),
        outcome("invariant-state-delta-e", worst_delta, 1e-12, "all partitions".into()),
    ])
}

/// Largest relative spread of the pointwise ratio `a / b` over cells with
/// `|b| > 1e-8`, and the mean ratio.
pub fn ratio_spread(a: &[f64], b: &[f64]) -> (f64, f64) {
    let ratios: Vec<f64> = a
        .iter()
        .zip(b)
        .filter(|(_, d)| d.abs() > 1e-8)
        .map(|(n, d)| n / d)
        .collect();
    if ratios.is_empty() {
        return (0.0, f64::NAN);
    }
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let spread = ratios.iter().map(|r| ((r - mean) / mean).abs()).fold(0.0, f64::max);
    (spread, mean)
}

fn check_alpha_scaling(cfg: &CheckConfig) -> Result<Vec<CheckOutcome>> {
    let thetas = GridSpec::new(0.0, PI, 13)?.points();
    let phis = GridSpec::new(0.0, TAU, 25)?.points();
    let omega = 0.7;
    let boost = cfg.boost(omega);
    let mut worst: f64 = 0.0;
    let mut ratios = Vec::new();
    for p in [CanonicalPartition::SvsP, CanonicalPartition::OneVsThree] {
        let surface = |alpha: f64| -> Result<Vec<f64>> {
            let mom = momentum_state(&MomentumParams { alpha });
            let mut out = Vec::new();
            for &t in &thetas {
                for &f in &phis {
                    let psi = assemble(&spin_state(&SpinParams::new(SpinFamily::S1, t, f)), &mom)?;
                    out.push(delta(&psi, &boost, p)?);
                }
            }
            Ok(out)
        };
        let reference = surface(FRAC_PI_4)?;
        for alpha in [FRAC_PI_8, 3.0 * FRAC_PI_8] {
            let (spread, mean) = ratio_spread(&surface(alpha)?, &reference);
            worst = worst.max(spread);
            ratios.push(format!("{p} α={alpha:.4}: {mean:.6}"));
        }
    }
    Ok(vec![outcome(
        "alpha-scale-factor",
        worst,
        1e-6,
        format!("ratio to α=π/4: {}", ratios.join(", ")),
    )])
}

fn check_sign_convention(cfg: &CheckConfig, rng: &mut ChaCha8Rng) -> Result<Vec<CheckOutcome>> {
    let other = CheckConfig {
        convention: cfg.opposite_convention(),
        ..*cfg
    };
    let mut worst: f64 = 0.0;
    for d in draws(rng, 50) {
        let psi = d.state()?;
        let (b1, b2) = (cfg.boost(d.omega), other.boost(d.omega));
        for p in CanonicalPartition::ALL {
            worst = worst.max((delta(&psi, &b1, p)? - delta(&psi, &b2, p)?).abs());
        }
    }
    Ok(vec![outcome(
        "sign-convention-invariance",
        worst,
        1e-12,
        "50 random draws".into(),
    )])
}

fn check_zero_boost(cfg: &CheckConfig, rng: &mut ChaCha8Rng) -> Result<Vec<CheckOutcome>> {
    let boost = cfg.boost(0.0);
    let mut worst: f64 = 0.0;
    for d in draws(rng, 20) {
        let psi = d.state()?;
        for p in CanonicalPartition::ALL {
            worst = worst.max(delta(&psi, &boost, p)?.abs());
        }
    }
    // exact: U(0) is the identity
    Ok(vec![outcome(
        "zero-boost-identity",
        worst,
        f64::MIN_POSITIVE,
        "20 random draws".into(),
    )])
}

fn check_entropy_bounds(cfg: &CheckConfig, rng: &mut ChaCha8Rng) -> Result<Vec<CheckOutcome>> {
    let mut worst: f64 = 0.0;
    for d in draws(rng, 100) {
        let psi = d.state()?;
        let boosted = cfg.boost(d.omega).apply(&psi)?;
        for p in CanonicalPartition::ALL {
            let partition = p.partition();
            for state in [&psi, &boosted] {
                let e = linear_entropy(state, &partition)?;
                let excess = (-e).max(e - partition.max_entropy()).max(0.0);
                worst = worst.max(excess);
            }
        }
    }
    Ok(vec![outcome(
        "entropy-bounds",
        worst,
        1e-12,
        "100 random draws, before and after".into(),
    )])
}

/// A relative phase on the second momentum amplitude is a local unitary
/// `diag(1, e^{iφ₀})` on pA, and the boost is diagonal in momentum, so it
/// commutes. Parts that see no pA coherence keep identical reduced states;
/// the {pA, pB} part changes only by that conjugation. Entropies never move.
fn check_momentum_phase(cfg: &CheckConfig, rng: &mut ChaCha8Rng) -> Result<Vec<CheckOutcome>> {
    const PHASE: f64 = 1.1;
    let local = Complex64::from_polar(1.0, PHASE);
    let mut worst: f64 = 0.0;
    for d in draws(rng, 20) {
        let spin = spin_state(&d.spin);
        let plain = assemble(&spin, &momentum_state(&MomentumParams { alpha: d.alpha }))?;
        let phased = assemble(&spin, &momentum_state_with_phase(d.alpha, PHASE))?;
        let boost = cfg.boost(d.omega);
        for (a_state, b_state) in [
            (plain.clone(), phased.clone()),
            (boost.apply(&plain)?, boost.apply(&phased)?),
        ] {
            for p in CanonicalPartition::ALL {
                let partition = p.partition();
                let ea = linear_entropy(&a_state, &partition)?;
                let eb = linear_entropy(&b_state, &partition)?;
                worst = worst.max((ea - eb).abs());
                for part in partition.parts() {
                    let a = reduced_state(&a_state, part)?;
                    let b = reduced_state(&b_state, part)?;
                    let mut expected = a.entries().clone();
                    if let Some(k) = a.order().position(SubsystemLabel::PA) {
                        let dims = a.order().dims();
                        let stride: usize = dims[k + 1..].iter().product();
                        let pa_minus = |i: usize| (i / stride) % 2 == 1;
                        let n = expected.nrows();
                        for i in 0..n {
                            for j in 0..n {
                                if pa_minus(i) {
                                    expected[(i, j)] *= local;
                                }
                                if pa_minus(j) {
                                    expected[(i, j)] *= local.conj();
                                }
                            }
                        }
                    }
                    worst = worst.max((&expected - b.entries()).max_modulus());
                }
            }
        }
    }
    Ok(vec![outcome(
        "momentum-phase-irrelevance",
        worst,
        1e-12,
        format!("phase {PHASE}, 20 random draws, reduced states up to the local phase on pA"),
    )])
}
