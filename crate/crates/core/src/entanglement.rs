//! Linear-entropy entanglement over partitions of the four subsystems, and
//! the change a boost induces in it.
//!
//! The entropy of a partition is `Σᵢ (1 − Tr ρᵢ²)` over its parts. For a
//! bipartition both sides contribute, so values are twice the one-sided
//! linear entropy; extrema locations are unaffected.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lorentz::{BoostOperator, SignConvention};
use crate::states::{assemble, momentum_state, spin_state, MomentumParams, NamedState, SpinParams};
use crate::tensor::{reduced_purity, CVector, PureState, SubsystemLabel};

/// Threshold above which a change in a conserved entropy counts as a violation.
pub const CONSERVATION_TOL: f64 = 1e-10;

/// Disjoint groups of subsystems whose reduced-state linear entropies are summed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    name: String,
    parts: Vec<Vec<SubsystemLabel>>,
}

impl Partition {
    pub fn new(name: impl Into<String>, parts: Vec<Vec<SubsystemLabel>>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidPartition("no parts".into()));
        }
        let mut seen = Vec::new();
        for part in &parts {
            if part.is_empty() {
                return Err(Error::InvalidPartition("empty part".into()));
            }
            for l in part {
                if seen.contains(l) {
                    return Err(Error::InvalidPartition(format!("{l} appears in more than one part")));
                }
                seen.push(*l);
            }
        }
        Ok(Self {
            name: name.into(),
            parts,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn parts(&self) -> &[Vec<SubsystemLabel>] {
        &self.parts
    }

    /// Largest value the entropy can take: `Σᵢ (1 − 1/dᵢ)`.
    pub fn max_entropy(&self) -> f64 {
        self.parts
            .iter()
            .map(|p| 1.0 - 1.0 / p.iter().map(|l| l.dim()).product::<usize>() as f64)
            .sum()
    }
}

/// The four physically distinct partitions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CanonicalPartition {
    #[serde(rename = "AvsB")]
    AvsB,
    #[serde(rename = "mixed")]
    Mixed,
    #[serde(rename = "SvsP")]
    SvsP,
    #[serde(rename = "1vs3")]
    OneVsThree,
}

impl CanonicalPartition {
    pub const ALL: [CanonicalPartition; 4] = [Self::AvsB, Self::Mixed, Self::SvsP, Self::OneVsThree];

    pub fn name(self) -> &'static str {
        match self {
            Self::AvsB => "AvsB",
            Self::Mixed => "mixed",
            Self::SvsP => "SvsP",
            Self::OneVsThree => "1vs3",
        }
    }

    /// Short command-line form.
    pub fn short_name(self) -> &'static str {
        match self {
            Self::AvsB => "avb",
            Self::Mixed => "mixed",
            Self::SvsP => "svp",
            Self::OneVsThree => "1v3",
        }
    }

    /// Whether entanglement across this partition survives any boost.
    pub fn is_conserved(self) -> bool {
        matches!(self, Self::AvsB | Self::Mixed)
    }

    pub fn partition(self) -> Partition {
        use SubsystemLabel::*;
        let parts = match self {
            Self::AvsB => vec![vec![PA, SA], vec![PB, SB]],
            Self::Mixed => vec![vec![PA, SB], vec![SA, PB]],
            Self::SvsP => vec![vec![SA, SB], vec![PA, PB]],
            Self::OneVsThree => vec![vec![PA], vec![PB], vec![SA], vec![SB]],
        };
        Partition::new(self.name(), parts).expect("catalog partitions are valid")
    }
}

impl fmt::Display for CanonicalPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CanonicalPartition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s) || p.short_name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownName {
                kind: "partition",
                name: s.to_string(),
            })
    }
}

/// `Σᵢ (1 − Tr ρᵢ²)` over the parts of `partition`.
pub fn linear_entropy(psi: &PureState, partition: &Partition) -> Result<f64> {
    partition
        .parts()
        .iter()
        .map(|part| {
            reduced_purity(psi, part)
                .map(|p| 1.0 - p)
                .map_err(|e| Error::InvalidPartition(format!("{}: {e}", partition.name())))
        })
        .sum()
}

/// Entropy before and after a boost.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaEResult {
    pub e_before: f64,
    pub e_after: f64,
    /// `e_after - e_before`
    pub delta: f64,
    pub partition: Partition,
    pub omega: f64,
}

/// Spin part of an initial state: a family point or a named state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpinInput {
    Params(SpinParams),
    Named(NamedState),
}

impl SpinInput {
    pub fn vector(&self) -> CVector {
        match self {
            Self::Params(p) => spin_state(p),
            Self::Named(n) => n.vector(),
        }
    }
}

impl From<SpinParams> for SpinInput {
    fn from(p: SpinParams) -> Self {
        Self::Params(p)
    }
}

impl From<NamedState> for SpinInput {
    fn from(n: NamedState) -> Self {
        Self::Named(n)
    }
}

/// A boost and a partition, reusable across many initial states.
#[derive(Clone, Debug)]
pub struct DeltaEEvaluator {
    boost: BoostOperator,
    partition: Partition,
}

impl DeltaEEvaluator {
    pub fn new(boost: BoostOperator, partition: Partition) -> Self {
        Self { boost, partition }
    }

    pub fn boost(&self) -> &BoostOperator {
        &self.boost
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn evaluate(&self, psi: &PureState) -> Result<DeltaEResult> {
        let e_before = linear_entropy(psi, &self.partition)?;
        let e_after = linear_entropy(&self.boost.apply(psi)?, &self.partition)?;
        Ok(DeltaEResult {
            e_before,
            e_after,
            delta: e_after - e_before,
            partition: self.partition.clone(),
            omega: self.boost.omega(),
        })
    }
}

/// Entropy change of `|s⟩ ⊗ |p(α)⟩` under the boost with Wigner angle `omega`.
pub fn delta_e(spin: &SpinInput, momentum: &MomentumParams, omega: f64, partition: &Partition) -> Result<DeltaEResult> {
    let psi = assemble(&spin.vector(), &momentum_state(momentum))?;
    DeltaEEvaluator::new(BoostOperator::new(omega), partition.clone()).evaluate(&psi)
}

/// ΔE of one state across all four canonical partitions.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConservationReport {
    pub omega: f64,
    pub entries: Vec<(CanonicalPartition, DeltaEResult)>,
    /// Conserved partitions whose |ΔE| exceeded [`CONSERVATION_TOL`].
    pub violations: Vec<CanonicalPartition>,
}

impl ConservationReport {
    pub fn delta(&self, partition: CanonicalPartition) -> f64 {
        self.entries
            .iter()
            .find(|(p, _)| *p == partition)
            .map(|(_, r)| r.delta)
            .expect("every canonical partition is evaluated")
    }

    pub fn is_conserved(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn conservation_report(psi: &PureState, omega: f64) -> Result<ConservationReport> {
    conservation_report_with(psi, &BoostOperator::with_convention(omega, SignConvention::Standard))
}

/// Same as [`conservation_report`] for an arbitrary (possibly perturbed) boost.
pub fn conservation_report_with(psi: &PureState, boost: &BoostOperator) -> Result<ConservationReport> {
    let boosted = boost.apply(psi)?;
    let mut entries = Vec::with_capacity(4);
    let mut violations = Vec::new();
    for kind in CanonicalPartition::ALL {
        let partition = kind.partition();
        let e_before = linear_entropy(psi, &partition)?;
        let e_after = linear_entropy(&boosted, &partition)?;
        let delta = e_after - e_before;
        if kind.is_conserved() && delta.abs() > CONSERVATION_TOL {
            violations.push(kind);
        }
        entries.push((
            kind,
            DeltaEResult {
                e_before,
                e_after,
                delta,
                partition,
                omega: boost.omega(),
            },
        ));
    }
    Ok(ConservationReport {
        omega: boost.omega(),
        entries,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{invariant_spin_state, momentum_pair_index, spin_pair_index, SpinFamily};
    use crate::tensor::{basis_vector, FactorOrder};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8};
    use SubsystemLabel::*;

    fn state(spin: CVector, alpha: f64) -> PureState {
        assemble(&spin, &momentum_state(&MomentumParams { alpha })).unwrap()
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::new("x", vec![]).is_err());
        assert!(Partition::new("x", vec![vec![]]).is_err());
        assert!(Partition::new("x", vec![vec![PA], vec![PA, SB]]).is_err());
        assert!(Partition::new("x", vec![vec![PA], vec![SB]]).is_ok());
    }

    #[test]
    fn catalog_names_parse() {
        for p in CanonicalPartition::ALL {
            assert_eq!(p.name().parse::<CanonicalPartition>().unwrap(), p);
            assert_eq!(p.short_name().parse::<CanonicalPartition>().unwrap(), p);
        }
        assert!("avsc".parse::<CanonicalPartition>().is_err());
    }

    #[test]
    fn max_entropy_of_catalog() {
        assert!((CanonicalPartition::AvsB.partition().max_entropy() - 2.0 * (1.0 - 1.0 / 6.0)).abs() < 1e-15);
        let one_vs_three = 2.0 * 0.5 + 2.0 * (2.0 / 3.0);
        assert!((CanonicalPartition::OneVsThree.partition().max_entropy() - one_vs_three).abs() < 1e-15);
    }

    #[test]
    fn product_basis_state_has_zero_entropy() {
        for idx in [0, 7, 20, 35] {
            let psi = PureState::new(basis_vector(36, idx), FactorOrder::canonical()).unwrap();
            for p in CanonicalPartition::ALL {
                assert_eq!(linear_entropy(&psi, &p.partition()).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn entangled_spin_with_product_momentum_is_s_vs_p_separable() {
        let psi = state(invariant_spin_state(), 0.0);
        let e = linear_entropy(&psi, &CanonicalPartition::SvsP.partition()).unwrap();
        assert!(e.abs() < 1e-14, "{e}");
    }

    #[test]
    fn invariant_state_a_vs_b_entropy() {
        let psi = state(invariant_spin_state(), 0.0);
        let e = linear_entropy(&psi, &CanonicalPartition::AvsB.partition()).unwrap();
        assert!((e - 4.0 / 3.0).abs() < 1e-14, "{e}");
    }

    #[test]
    fn partition_outside_the_state_is_rejected() {
        let psi = PureState::new(basis_vector(4, 0), FactorOrder::new(vec![PA, PB]).unwrap()).unwrap();
        let err = linear_entropy(&psi, &CanonicalPartition::SvsP.partition());
        assert!(matches!(err, Err(Error::InvalidPartition(_))));
    }

    #[test]
    fn zero_boost_changes_nothing() {
        let spin = SpinInput::Params(SpinParams::new(SpinFamily::S2, 0.4, 1.9));
        for p in CanonicalPartition::ALL {
            let r = delta_e(&spin, &MomentumParams { alpha: 0.3 }, 0.0, &p.partition()).unwrap();
            assert_eq!(r.delta, 0.0);
            assert_eq!(r.delta, r.e_after - r.e_before);
        }
    }

    #[test]
    fn separable_momentum_gives_no_change() {
        let spin = SpinInput::Params(SpinParams::new(SpinFamily::S1, 1.2, 0.5));
        for p in CanonicalPartition::ALL {
            let r = delta_e(&spin, &MomentumParams { alpha: 0.0 }, 1.0, &p.partition()).unwrap();
            assert!(r.delta.abs() < 1e-12, "{p}: {}", r.delta);
        }
    }

    #[test]
    fn invariant_state_never_changes() {
        for alpha in [0.0, 0.3, FRAC_PI_4] {
            for omega in [FRAC_PI_8, 1.0, FRAC_PI_2] {
                for p in CanonicalPartition::ALL {
                    let r = delta_e(
                        &NamedState::Inv3.into(),
                        &MomentumParams { alpha },
                        omega,
                        &p.partition(),
                    )
                    .unwrap();
                    assert!(r.delta.abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn conservation_report_examples() {
        let psi = state(spin_state(&SpinParams::new(SpinFamily::S2, 2.0, 4.0)), 0.7);
        let report = conservation_report(&psi, 0.9).unwrap();
        assert!(report.is_conserved());
        assert!(report.delta(CanonicalPartition::AvsB).abs() < 1e-10);
        assert!(report.delta(CanonicalPartition::Mixed).abs() < 1e-10);

        let psi = state(NamedState::S11PlusM1M1.vector(), FRAC_PI_4);
        let r = conservation_report(&psi, FRAC_PI_8).unwrap();
        assert!(r.delta(CanonicalPartition::OneVsThree) > 0.0);
        let r = conservation_report(&psi, FRAC_PI_2).unwrap();
        assert!(r.delta(CanonicalPartition::OneVsThree).abs() < 1e-12);
    }

    #[test]
    fn perturbed_boost_is_flagged() {
        let psi = state(spin_state(&SpinParams::new(SpinFamily::S1, 0.8, 0.3)), 0.6);
        let boost = BoostOperator::new(0.9).perturbed(0.3);
        let report = conservation_report_with(&psi, &boost).unwrap();
        assert!(report.violations.contains(&CanonicalPartition::AvsB));
    }

    #[test]
    fn single_product_amplitude_index_is_consistent() {
        let psi = state(NamedState::S11.vector(), 0.0);
        let idx = 9 * momentum_pair_index(true, false) + spin_pair_index(1, 1);
        assert_eq!(psi.amplitudes()[idx].re, 1.0);
    }
}
