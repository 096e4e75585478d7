//! Grid sweeps of ΔE over the spin parameters `(θ, φ)` and extrema search on
//! the resulting surfaces.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entanglement::{CanonicalPartition, DeltaEEvaluator};
use crate::error::{Error, Result};
use crate::lorentz::{BoostOperator, BoostSpec};
use crate::states::{assemble, momentum_state, spin_state, MomentumParams, SpinFamily, SpinParams};

/// Values within this distance of the global max (min) count as maxima (minima).
pub const EXTREMUM_TOL: f64 = 1e-9;
/// Default merge radius, in grid steps of the coarser axis.
pub const DEFAULT_MERGE_STEPS: f64 = 3.0;

/// `count` evenly spaced points from `start` to `stop` inclusive.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn new(start: f64, stop: f64, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(Error::InvalidParameter(format!(
                "grid needs at least 2 points, got {count}"
            )));
        }
        if !(start.is_finite() && stop.is_finite()) || stop <= start {
            return Err(Error::InvalidParameter(format!("bad grid range {start}:{stop}")));
        }
        Ok(Self { start, stop, count })
    }

    /// `θ ∈ [0, π]`, 121 points.
    pub fn default_theta() -> Self {
        Self {
            start: 0.0,
            stop: PI,
            count: 121,
        }
    }

    /// `φ ∈ [0, 2π]`, 241 points.
    pub fn default_phi() -> Self {
        Self {
            start: 0.0,
            stop: TAU,
            count: 241,
        }
    }

    pub fn step(&self) -> f64 {
        (self.stop - self.start) / (self.count - 1) as f64
    }

    pub fn points(&self) -> Vec<f64> {
        let step = self.step();
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.stop
                } else {
                    self.start + i as f64 * step
                }
            })
            .collect()
    }
}

impl FromStr for GridSpec {
    type Err = Error;

    /// `start:stop:count`; the bounds accept the same forms as [`parse_angle`].
    fn from_str(s: &str) -> Result<Self> {
        let fields: Vec<&str> = s.split(':').collect();
        let [a, b, n] = fields.as_slice() else {
            return Err(Error::Parse(format!("grid `{s}` is not start:stop:count")));
        };
        let count = n
            .trim()
            .parse::<usize>()
            .map_err(|e| Error::Parse(format!("grid count `{n}`: {e}")))?;
        Self::new(parse_angle(a)?, parse_angle(b)?, count)
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.count)
    }
}

/// Parses an angle in radians: a plain number, or a multiple/fraction of pi
/// such as `pi`, `-pi/8`, `3pi/4`, `3*pi/4`.
pub fn parse_angle(s: &str) -> Result<f64> {
    let t = s.trim();
    if let Ok(x) = t.parse::<f64>() {
        return Ok(x);
    }
    let bad = || Error::Parse(format!("cannot read angle `{s}`"));
    let lower = t.to_ascii_lowercase();
    let (num, den) = match lower.split_once('/') {
        Some((n, d)) => (n, d.trim().parse::<f64>().map_err(|_| bad())?),
        None => (lower.as_str(), 1.0),
    };
    let coeff = num.trim().strip_suffix("pi").ok_or_else(bad)?.trim();
    let coeff = coeff.strip_suffix('*').unwrap_or(coeff).trim();
    let k = match coeff {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(k * PI / den)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub family: SpinFamily,
    pub alpha: f64,
    pub boost: BoostSpec,
    pub partition: CanonicalPartition,
    pub theta_grid: GridSpec,
    pub phi_grid: GridSpec,
}

impl SweepConfig {
    /// Default grids for the given physics parameters.
    pub fn new(family: SpinFamily, alpha: f64, boost: BoostSpec, partition: CanonicalPartition) -> Self {
        Self {
            family,
            alpha,
            boost,
            partition,
            theta_grid: GridSpec::default_theta(),
            phi_grid: GridSpec::default_phi(),
        }
    }
}

/// Sampled `ΔE(θ, φ)`, row-major with θ outer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Surface {
    pub thetas: Vec<f64>,
    pub phis: Vec<f64>,
    pub values: Vec<f64>,
}

impl Surface {
    pub fn new(thetas: Vec<f64>, phis: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if thetas.is_empty() || phis.is_empty() {
            return Err(Error::InvalidParameter("empty grid".into()));
        }
        if values.len() != thetas.len() * phis.len() {
            return Err(Error::DimensionMismatch {
                expected: thetas.len() * phis.len(),
                actual: values.len(),
            });
        }
        Ok(Self { thetas, phis, values })
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.thetas.len(), self.phis.len())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.phis.len() + j]
    }

    /// Iterates `(θ, φ, value)` in storage order.
    pub fn cells(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let n = self.phis.len();
        self.values
            .iter()
            .enumerate()
            .map(move |(k, &v)| (self.thetas[k / n], self.phis[k % n], v))
    }

    fn max_step(&self) -> f64 {
        let step = |xs: &[f64]| xs.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max);
        step(&self.thetas).max(step(&self.phis))
    }

    /// Merge radius of [`DEFAULT_MERGE_STEPS`] grid steps.
    pub fn default_merge_radius(&self) -> f64 {
        DEFAULT_MERGE_STEPS * self.max_step()
    }
}

/// A sweep's surface together with the configuration that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub config: SweepConfig,
    pub omega: f64,
    pub surface: Surface,
}

/// Evaluates ΔE on every grid cell. Cells are independent, so the parallel
/// evaluation yields the same values as a serial loop.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepResult> {
    sweep_impl(config, true)
}

/// Serial variant of [`run_sweep`].
pub fn run_sweep_serial(config: &SweepConfig) -> Result<SweepResult> {
    sweep_impl(config, false)
}

fn sweep_impl(config: &SweepConfig, parallel: bool) -> Result<SweepResult> {
    let omega = config.boost.omega()?;
    let thetas = config.theta_grid.points();
    let phis = config.phi_grid.points();
    let momentum = momentum_state(&MomentumParams { alpha: config.alpha });
    let evaluator = DeltaEEvaluator::new(BoostOperator::new(omega), config.partition.partition());

    let cell = |k: usize| -> Result<f64> {
        let params = SpinParams::new(config.family, thetas[k / phis.len()], phis[k % phis.len()]);
        let psi = assemble(&spin_state(&params), &momentum)?;
        Ok(evaluator.evaluate(&psi)?.delta)
    };
    let n = thetas.len() * phis.len();
    let values: Vec<f64> = if parallel {
        (0..n).into_par_iter().map(cell).collect::<Result<_>>()?
    } else {
        (0..n).map(cell).collect::<Result<_>>()?
    };

    Ok(SweepResult {
        config: config.clone(),
        omega,
        surface: Surface::new(thetas, phis, values)?,
    })
}

/// One representative grid point of a cluster of extremal points.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub theta: f64,
    pub phi: f64,
    pub delta_e: f64,
    /// Number of extremal grid points merged into this one.
    pub cluster_size: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremaReport {
    pub maxima: Vec<Extremum>,
    pub minima: Vec<Extremum>,
    pub merge_radius: f64,
    pub global_max: f64,
    pub global_min: f64,
    /// Every grid point is both a maximum and a minimum.
    pub flat: bool,
}

/// Collects the grid points within [`EXTREMUM_TOL`] of the global maximum
/// and minimum, merges points closer than `merge_radius` (single linkage in
/// the `(θ, φ)` plane) and keeps one representative per cluster: its most
/// extreme member, ties going to the smallest `(θ, φ)`.
pub fn find_extrema(surface: &Surface, merge_radius: f64) -> ExtremaReport {
    let global_max = surface.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let global_min = surface.values.iter().copied().fold(f64::INFINITY, f64::min);

    let pick = |keep: &dyn Fn(f64) -> bool, better: &dyn Fn(f64, f64) -> bool| {
        let points: Vec<(f64, f64, f64)> = surface.cells().filter(|c| keep(c.2)).collect();
        cluster(&points, merge_radius, better)
    };
    let maxima = pick(&|v| v >= global_max - EXTREMUM_TOL, &|a, b| a > b);
    let minima = pick(&|v| v <= global_min + EXTREMUM_TOL, &|a, b| a < b);

    ExtremaReport {
        maxima,
        minima,
        merge_radius,
        global_max,
        global_min,
        flat: global_max - global_min <= EXTREMUM_TOL,
    }
}

fn cluster(points: &[(f64, f64, f64)], radius: f64, better: &dyn Fn(f64, f64) -> bool) -> Vec<Extremum> {
    // union-find over the O(n²) neighbour pairs; extremal sets are small
    // except on flat surfaces
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let r2 = radius * radius;
    for i in 0..n {
        for j in i + 1..n {
            let (dt, dp) = (points[i].0 - points[j].0, points[i].1 - points[j].1);
            if dt * dt + dp * dp <= r2 {
                let (a, b) = (root(&mut parent, i), root(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }

    // points arrive sorted by (θ, φ), so the first member seen wins ties
    let mut reps: Vec<(usize, Extremum)> = Vec::new();
    for (i, &(theta, phi, v)) in points.iter().enumerate() {
        let r = root(&mut parent, i);
        match reps.iter_mut().find(|(k, _)| *k == r) {
            Some((_, e)) => {
                e.cluster_size += 1;
                if better(v, e.delta_e) {
                    e.theta = theta;
                    e.phi = phi;
                    e.delta_e = v;
                }
            }
            None => reps.push((
                r,
                Extremum {
                    theta,
                    phi,
                    delta_e: v,
                    cluster_size: 1,
                },
            )),
        }
    }
    let mut out: Vec<Extremum> = reps.into_iter().map(|(_, e)| e).collect();
    out.sort_by(|a, b| (a.theta, a.phi).partial_cmp(&(b.theta, b.phi)).expect("finite"));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8};

    #[test]
    fn grid_points_hit_both_ends() {
        let g = GridSpec::new(0.0, PI, 5).unwrap();
        let p = g.points();
        assert_eq!(p.len(), 5);
        assert_eq!(p[0], 0.0);
        assert_eq!(p[4], PI);
        assert!((p[2] - FRAC_PI_2).abs() < 1e-15);
        assert!(GridSpec::new(0.0, 1.0, 1).is_err());
        assert!(GridSpec::new(1.0, 0.0, 3).is_err());
    }

    #[test]
    fn grid_and_angle_parsing() {
        let g: GridSpec = "0:pi:121".parse().unwrap();
        assert_eq!(g, GridSpec::default_theta());
        let g: GridSpec = "0:2pi:241".parse().unwrap();
        assert_eq!(g, GridSpec::default_phi());
        assert!("0:pi".parse::<GridSpec>().is_err());
        assert!("0:pi:x".parse::<GridSpec>().is_err());

        assert_eq!(parse_angle("0.5").unwrap(), 0.5);
        assert_eq!(parse_angle("pi/8").unwrap(), FRAC_PI_8);
        assert_eq!(parse_angle("3pi/4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_angle("3*pi/4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_angle("-pi/2").unwrap(), -FRAC_PI_2);
        assert_eq!(parse_angle("PI").unwrap(), PI);
        assert!(parse_angle("tau").is_err());
        assert!(parse_angle("pi/x").is_err());
    }

    fn small_config(omega: f64, partition: CanonicalPartition) -> SweepConfig {
        SweepConfig {
            theta_grid: GridSpec::new(0.0, PI, 9).unwrap(),
            phi_grid: GridSpec::new(0.0, TAU, 17).unwrap(),
            ..SweepConfig::new(SpinFamily::S1, FRAC_PI_4, BoostSpec::angle(omega).unwrap(), partition)
        }
    }

    #[test]
    fn sweep_is_row_major_theta_outer() {
        let cfg = small_config(FRAC_PI_8, CanonicalPartition::OneVsThree);
        let res = run_sweep(&cfg).unwrap();
        assert_eq!(res.surface.shape(), (9, 17));
        let (i, j) = (3, 5);
        let spin = SpinParams::new(SpinFamily::S1, res.surface.thetas[i], res.surface.phis[j]);
        let direct = crate::entanglement::delta_e(
            &spin.into(),
            &MomentumParams { alpha: FRAC_PI_4 },
            FRAC_PI_8,
            &CanonicalPartition::OneVsThree.partition(),
        )
        .unwrap();
        assert_eq!(res.surface.get(i, j), direct.delta);
    }

    #[test]
    fn parallel_and_serial_sweeps_agree_exactly() {
        let cfg = small_config(0.6, CanonicalPartition::SvsP);
        assert_eq!(run_sweep(&cfg).unwrap(), run_sweep_serial(&cfg).unwrap());
    }

    #[test]
    fn zero_boost_surface_is_flat() {
        let res = run_sweep(&small_config(0.0, CanonicalPartition::OneVsThree)).unwrap();
        let rep = find_extrema(&res.surface, res.surface.default_merge_radius());
        assert!(rep.flat);
        assert_eq!(rep.global_max, 0.0);
        let total: usize = rep.maxima.iter().map(|e| e.cluster_size).sum();
        assert_eq!(total, 9 * 17);
        let total: usize = rep.minima.iter().map(|e| e.cluster_size).sum();
        assert_eq!(total, 9 * 17);
    }

    #[test]
    fn extrema_clusters_merge_neighbours_only() {
        // peaks at (0,0) and (0,0.1) merge at radius 0.15; the one at (1,1) stays apart
        let s = Surface::new(vec![0.0, 1.0], vec![0.0, 0.1, 1.0], vec![5.0, 5.0, 1.0, 0.0, -2.0, 5.0]).unwrap();
        let rep = find_extrema(&s, 0.15);
        assert_eq!(rep.maxima.len(), 2);
        assert_eq!(
            (rep.maxima[0].theta, rep.maxima[0].phi, rep.maxima[0].cluster_size),
            (0.0, 0.0, 2)
        );
        assert_eq!((rep.maxima[1].theta, rep.maxima[1].phi), (1.0, 1.0));
        assert_eq!(rep.minima.len(), 1);
        assert_eq!(rep.minima[0].delta_e, -2.0);
        assert!(!rep.flat);

        let rep = find_extrema(&s, 0.05);
        assert_eq!(rep.maxima.len(), 3);
    }

    #[test]
    fn surface_shape_mismatch_is_rejected() {
        assert!(Surface::new(vec![0.0], vec![0.0, 1.0], vec![1.0]).is_err());
        assert!(Surface::new(vec![], vec![0.0], vec![]).is_err());
    }
}
