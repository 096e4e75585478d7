//! Results checked against independent computations.

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8};

use nalgebra::{Matrix4, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spinboost::lorentz::Spin;
use spinboost::sweep::EXTREMUM_TOL;
use spinboost::tensor::MaxModulus;
use spinboost::{
    assemble, boost_operator, find_extrema, linear_entropy, momentum_state, spin_state, wigner_angle, wigner_d,
    CanonicalPartition, MomentumParams, NamedState, SpinFamily, SpinParams, Surface,
};

/// Pure boost of a unit-mass particle from rest to four-momentum `q`.
fn standard_boost(q: Vector4<f64>) -> Matrix4<f64> {
    let e = q[0];
    let mut l = Matrix4::identity();
    l[(0, 0)] = e;
    for i in 1..4 {
        l[(0, i)] = q[i];
        l[(i, 0)] = q[i];
        for j in 1..4 {
            l[(i, j)] += q[i] * q[j] / (1.0 + e);
        }
    }
    l
}

/// Rotation angle of W = L(Λp)⁻¹ Λ L(p), p along z with rapidity ξ and Λ
/// along x with rapidity η.
fn composed_rotation_angle(xi: f64, eta: f64) -> (f64, Matrix4<f64>) {
    let p = Vector4::new(xi.cosh(), 0.0, 0.0, xi.sinh());
    let mut lambda = Matrix4::identity();
    lambda[(0, 0)] = eta.cosh();
    lambda[(1, 1)] = eta.cosh();
    lambda[(0, 1)] = eta.sinh();
    lambda[(1, 0)] = eta.sinh();
    let lp = lambda * p;
    let back = standard_boost(Vector4::new(lp[0], -lp[1], -lp[2], -lp[3]));
    let w = back * lambda * standard_boost(p);
    (w[(1, 3)].abs().atan2(w[(3, 3)]), w)
}

#[test]
fn wigner_angle_matches_boost_composition() {
    // the explicit matrices cancel badly at large rapidities, so stay moderate
    for xi in [0.0, 0.1, 0.5, 1.0, 1.7, 2.5] {
        for eta in [0.0, 0.2, 1.0, 1.9, 2.5] {
            let (oracle, w) = composed_rotation_angle(xi, eta);
            // W is a rotation about y
            assert!((w[(0, 0)] - 1.0).abs() < 1e-9, "ξ={xi} η={eta}");
            assert!((w[(2, 2)] - 1.0).abs() < 1e-9, "ξ={xi} η={eta}");
            let got = wigner_angle(xi, eta).unwrap();
            assert!((got - oracle).abs() < 1e-11, "ξ={xi} η={eta}: {got} vs {oracle}");
        }
    }
}

#[test]
fn wigner_angle_reference_value() {
    // ξ = η = 1, from the composition above evaluated independently
    assert!((wigner_angle(1.0, 1.0).unwrap() - 0.42078396163807).abs() < 1e-13);
}

#[test]
fn spin_half_rotation_is_the_half_angle_matrix() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let beta: f64 = rng.random_range(-6.0..6.0);
        let d = wigner_d(Spin::Half, beta);
        let (s, c) = (beta / 2.0).sin_cos();
        let m = d.matrix();
        let expected = [[c, -s], [s, c]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((m[(i, j)] - expected[i][j]).abs() < 1e-15);
            }
        }
    }
}

/// Linear entropy of one part from explicit sums over amplitudes, without
/// the library's reduction routine.
fn brute_part_entropy(amps: &[num_complex::Complex64], keep: &[usize]) -> f64 {
    let dims = [2usize, 2, 3, 3];
    let idx = |i: usize| {
        let mut rest = i;
        let mut d = [0usize; 4];
        for k in (0..4).rev() {
            d[k] = rest % dims[k];
            rest /= dims[k];
        }
        d
    };
    let mut purity = 0.0;
    // Tr ρ² = Σ ψ(a,b) ψ*(a',b) ψ(a',b') ψ*(a,b'), a = kept digits, b = traced
    for i in 0..36 {
        for j in 0..36 {
            let (di, dj) = (idx(i), idx(j));
            // swap kept digits of i and j
            let mut ki = di;
            let mut kj = dj;
            for &k in keep {
                ki[k] = dj[k];
                kj[k] = di[k];
            }
            let flat = |d: [usize; 4]| ((d[0] * 2 + d[1]) * 3 + d[2]) * 3 + d[3];
            let term = amps[i] * amps[j] * amps[flat(ki)].conj() * amps[flat(kj)].conj();
            purity += term.re;
        }
    }
    1.0 - purity
}

#[test]
fn linear_entropy_matches_brute_force_sums() {
    let parts: [(CanonicalPartition, &[&[usize]]); 4] = [
        (CanonicalPartition::AvsB, &[&[0, 2], &[1, 3]]),
        (CanonicalPartition::Mixed, &[&[0, 3], &[2, 1]]),
        (CanonicalPartition::SvsP, &[&[2, 3], &[0, 1]]),
        (CanonicalPartition::OneVsThree, &[&[0], &[1], &[2], &[3]]),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        let family = if rng.random_bool(0.5) {
            SpinFamily::S1
        } else {
            SpinFamily::S2
        };
        let spin = spin_state(&SpinParams::new(
            family,
            rng.random_range(0.0..3.0),
            rng.random_range(0.0..6.0),
        ));
        let psi = assemble(
            &spin,
            &momentum_state(&MomentumParams {
                alpha: rng.random_range(0.0..6.0),
            }),
        )
        .unwrap();
        let u = boost_operator(rng.random_range(0.0..FRAC_PI_2));
        let boosted = &u * psi.amplitudes();
        for state in [psi.amplitudes().as_slice().to_vec(), boosted.as_slice().to_vec()] {
            let pure = spinboost::PureState::new(
                nalgebra::DVector::from_vec(state.clone()),
                spinboost::FactorOrder::canonical(),
            )
            .unwrap();
            for (p, keeps) in &parts {
                let expected: f64 = keeps.iter().map(|k| brute_part_entropy(&state, k)).sum();
                let got = linear_entropy(&pure, &p.partition()).unwrap();
                assert!((got - expected).abs() < 1e-12, "{}: {got} vs {expected}", p.name());
            }
        }
    }
}

#[test]
fn known_delta_e_values() {
    let cases = [
        (NamedState::S00, FRAC_PI_8, CanonicalPartition::OneVsThree, 0.5),
        (
            NamedState::S11PlusM1M1,
            FRAC_PI_8,
            CanonicalPartition::OneVsThree,
            0.125,
        ),
        (NamedState::S11, FRAC_PI_2, CanonicalPartition::OneVsThree, 1.0),
        (NamedState::BellMinus, FRAC_PI_8, CanonicalPartition::SvsP, 0.5),
        (NamedState::BellMinus, FRAC_PI_2, CanonicalPartition::SvsP, 0.0),
        (NamedState::Inv3, FRAC_PI_4, CanonicalPartition::SvsP, 0.0),
    ];
    for (state, omega, partition, expected) in cases {
        let r = spinboost::delta_e(
            &state.into(),
            &MomentumParams { alpha: FRAC_PI_4 },
            omega,
            &partition.partition(),
        )
        .unwrap();
        assert!((r.delta - expected).abs() < 1e-12, "{}: {}", state.id(), r.delta);
    }
}

#[test]
fn opposite_angle_boost_is_the_inverse() {
    let u = boost_operator(FRAC_PI_4);
    let v = boost_operator(-FRAC_PI_4);
    assert!((&u * &v - nalgebra::DMatrix::identity(36, 36)).max_modulus() < 1e-14);
}

/// Flood-fill reference for the extremum finder.
fn brute_extrema(s: &Surface, radius: f64, want_max: bool) -> Vec<(f64, f64, usize)> {
    let cells: Vec<(f64, f64, f64)> = s.cells().collect();
    let target = if want_max {
        cells.iter().map(|c| c.2).fold(f64::NEG_INFINITY, f64::max)
    } else {
        cells.iter().map(|c| c.2).fold(f64::INFINITY, f64::min)
    };
    let hits: Vec<usize> = (0..cells.len())
        .filter(|&k| (cells[k].2 - target).abs() <= EXTREMUM_TOL)
        .collect();
    let mut unseen: BTreeSet<usize> = hits.iter().copied().collect();
    let mut out = Vec::new();
    while let Some(&seed) = unseen.iter().next() {
        unseen.remove(&seed);
        let mut cluster = vec![seed];
        let mut k = 0;
        while k < cluster.len() {
            let c = cells[cluster[k]];
            let near: Vec<usize> = unseen
                .iter()
                .copied()
                .filter(|&o| (cells[o].0 - c.0).hypot(cells[o].1 - c.1) <= radius)
                .collect();
            for o in near {
                unseen.remove(&o);
                cluster.push(o);
            }
            k += 1;
        }
        let best = cluster
            .iter()
            .copied()
            .min_by(|&a, &b| {
                let (va, vb) = (cells[a].2, cells[b].2);
                let order = if want_max { vb.total_cmp(&va) } else { va.total_cmp(&vb) };
                order.then(a.cmp(&b))
            })
            .unwrap();
        out.push((cells[best].0, cells[best].1, cluster.len()));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    out
}

#[test]
fn extrema_match_flood_fill_reference() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for trial in 0..40 {
        let nt = rng.random_range(2..12);
        let np = rng.random_range(2..15);
        let thetas: Vec<f64> = (0..nt).map(|i| i as f64 * 0.1).collect();
        let phis: Vec<f64> = (0..np).map(|j| j as f64 * 0.1).collect();
        // few distinct levels so that ties and plateaus are common
        let values: Vec<f64> = (0..nt * np)
            .map(|_| rng.random_range(0..4) as f64 + if rng.random_bool(0.2) { 1e-10 } else { 0.0 })
            .collect();
        let surface = Surface::new(thetas, phis, values).unwrap();
        let radius = [0.05, 0.1, 0.15, 0.25][trial % 4];
        let report = find_extrema(&surface, radius);
        for (want_max, got) in [(true, &report.maxima), (false, &report.minima)] {
            let expected = brute_extrema(&surface, radius, want_max);
            let got: Vec<(f64, f64, usize)> = got.iter().map(|e| (e.theta, e.phi, e.cluster_size)).collect();
            assert_eq!(got, expected, "trial {trial}, max={want_max}");
        }
    }
}

#[test]
fn s1_sweep_values_and_maxima_match_a_direct_scan() {
    // every grid point is scanned directly and compared against the sweep
    let mut config = spinboost::SweepConfig::new(
        SpinFamily::S1,
        FRAC_PI_4,
        spinboost::BoostSpec::angle(FRAC_PI_8).unwrap(),
        CanonicalPartition::OneVsThree,
    );
    config.theta_grid = spinboost::GridSpec::new(0.0, std::f64::consts::PI, 25).unwrap();
    config.phi_grid = spinboost::GridSpec::new(0.0, std::f64::consts::TAU, 49).unwrap();
    let result = spinboost::run_sweep(&config).unwrap();
    for (theta, phi, v) in result.surface.cells() {
        let direct = spinboost::delta_e(
            &SpinParams::new(SpinFamily::S1, theta, phi).into(),
            &MomentumParams { alpha: FRAC_PI_4 },
            FRAC_PI_8,
            &CanonicalPartition::OneVsThree.partition(),
        )
        .unwrap()
        .delta;
        assert_eq!(v, direct);
    }
    let report = find_extrema(&result.surface, result.surface.default_merge_radius());
    assert_eq!(report.maxima, {
        let r = brute_extrema(&result.surface, result.surface.default_merge_radius(), true);
        r.iter()
            .map(|&(theta, phi, n)| spinboost::Extremum {
                theta,
                phi,
                delta_e: result.surface.get(
                    result.surface.thetas.iter().position(|&t| t == theta).unwrap(),
                    result.surface.phis.iter().position(|&p| p == phi).unwrap(),
                ),
                cluster_size: n,
            })
            .collect::<Vec<_>>()
    });
}
