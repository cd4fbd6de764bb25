//! Independent cross-checks between the delay integrator, the analytic
//! results, and the mode-resolved oracle. These pin the physics through
//! entirely separate computational routes.

use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

use lambdawg_core::*;

fn trapped_config() -> SingleAtomConfig {
    SingleAtomConfig::ideal(
        ChannelParams::new(1.0, TAU, 1.0).unwrap(),
        ChannelParams::new(1.0, TAU, 1.0).unwrap(),
    )
    .unwrap()
}

#[test]
fn oracle_population_matches_integrator_at_late_time() {
    let cfg = trapped_config();
    let dde = integrate_single(&cfg, 10.0, 1e-3).unwrap();
    let geometry = AtomGeometry::from_single_config(&cfg).unwrap();
    let grid = ModeGrid::for_single(&geometry, 4001, 40.0).unwrap();
    let (oracle, _) = evolve_modes_single(&geometry, &grid, 10.0, 2e-3).unwrap();
    let pop_dde = dde.population(0, dde.len() - 1);
    let pop_oracle = oracle.population(0, oracle.len() - 1);
    assert!(
        (pop_dde - pop_oracle).abs() < 1e-2,
        "population mismatch at t = 10: {pop_dde} vs {pop_oracle}"
    );
}

#[test]
fn coincident_two_atom_sum_matches_the_oracle() {
    // one active channel, feedback phase a full turn
    let k0 = 16.0 * PI; // phase 2 * 0.5 * k0 = 16 pi, a multiple of 2 pi
    let cfg = TwoAtomConfig::new(
        0.5,
        0.5,
        1.0,
        0.0,
        1.0,
        1.0,
        k0,
        k0,
        1.0,
        [Complex64::new(1.0, 0.0), Complex64::default()],
    )
    .unwrap();
    let dde = integrate_two_atom(&cfg, 10.0, 1e-3).unwrap();
    // the coincident pair radiates superradiantly at rate 2 gamma_g, so the
    // truncated-bath transient needs a wide window to stay below 1e-2
    let grid = ModeGrid::for_two(&cfg, 8001, 160.0).unwrap();
    let (oracle, _) = evolve_modes_two(&cfg, &grid, 10.0, 5e-4).unwrap();
    let mut worst = 0.0f64;
    for i in 0..oracle.len() {
        let t = oracle.time(i);
        let sum_dde = dde.sample(0, t) + dde.sample(1, t);
        let sum_oracle = oracle.amplitude(0, i) + oracle.amplitude(1, i);
        worst = worst.max((sum_dde - sum_oracle).norm());
    }
    assert!(worst < 1e-2, "collective amplitude mismatch {worst}");
}

#[test]
fn near_mirror_emitter_is_protected_in_the_oracle() {
    let k0 = 16.0 * PI;
    let cfg = TwoAtomConfig::new(
        1e-4,
        0.7,
        1.0,
        1.0,
        1.0,
        1.0,
        k0,
        k0,
        1.0,
        [Complex64::new(1.0, 0.0), Complex64::default()],
    )
    .unwrap();
    let grid = ModeGrid::for_two(&cfg, 2001, 30.0).unwrap();
    let (oracle, _) = evolve_modes_two(&cfg, &grid, 10.0, 3e-3).unwrap();
    let drift = (0..oracle.len())
        .map(|i| (oracle.amplitude(0, i).norm() - 1.0).abs())
        .fold(0.0f64, f64::max);
    assert!(drift < 1e-2, "near-mirror emitter leaked {drift}");
}

#[test]
fn bromwich_inversion_matches_the_integrator() {
    // numerical inverse Laplace transform along Re s = a, with the bare
    // exponential split off analytically so the contour tail converges
    let cfg = trapped_config();
    let total = cfg.total_gamma();
    let a = 0.1;
    let omega_max = 8000.0;
    let d_omega = 0.01;
    let n = (2.0 * omega_max / d_omega) as usize + 1;

    let invert = |t: f64| -> Complex64 {
        let mut sum = Complex64::default();
        for i in 0..n {
            let omega = -omega_max + i as f64 * d_omega;
            let s = Complex64::new(a, omega);
            let free = cfg.initial / (s + 0.5 * total);
            let g = laplace_amplitude(&cfg, s).unwrap() - free;
            let weight = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
            sum += g * Complex64::cis(omega * t) * weight;
        }
        sum * (d_omega * (a * t).exp() / (2.0 * PI)) + cfg.initial * (-0.5 * total * t).exp()
    };

    let traj = integrate_single(&cfg, 9.0, 1e-3).unwrap();
    for t in [0.5, 1.5, 3.0, 5.0, 8.0] {
        let inverted = invert(t);
        let integrated = traj.sample(0, t);
        assert!(
            (inverted - integrated).norm() < 1e-3,
            "Bromwich mismatch at t = {t}: {inverted} vs {integrated}"
        );
    }
}

#[test]
fn final_value_limit_matches_the_long_time_trajectory() {
    for (phi_k, expect_trapping) in [(TAU, true), (0.5 * PI, false)] {
        let cfg = SingleAtomConfig::ideal(
            ChannelParams::new(1.0, phi_k, 0.8).unwrap(),
            ChannelParams::new(0.7, TAU, 1.3).unwrap(),
        )
        .unwrap();
        let limit = final_value(&cfg).unwrap().norm_sqr();
        assert_eq!(limit > 0.0, expect_trapping);
        let traj = integrate_single(&cfg, 50.0, 1e-3).unwrap();
        let pop = traj.population(0, traj.len() - 1);
        assert!(
            (pop - limit).abs() < 1e-3,
            "long-time population {pop} vs final-value limit {limit}"
        );
    }
}

#[test]
fn realspace_snapshot_reproduces_the_detector_field() {
    let cfg = trapped_config();
    let dde = integrate_single(&cfg, 6.0, 1e-3).unwrap();
    let geometry = AtomGeometry::from_single_config(&cfg).unwrap();
    let grid = ModeGrid::for_single(&geometry, 4001, 40.0).unwrap();
    let t_snap = 6.0;
    let (_, state) = evolve_modes_single(&geometry, &grid, t_snap, 2e-3).unwrap();

    // sample away from the direct and mirror-image wavefronts, where the
    // finite window smears the sharp step over ~1/W
    for x_bar in [2.5, 4.0, 4.75] {
        let (psi_k, psi_q) = realspace_field(&state, &grid, &[x_bar]);
        let d = x_bar - geometry.x0;
        let t_bar = t_snap - d; // unit group velocity
        let expected_k = field_amplitude_at(&dde, &cfg, Channel::K, d, t_bar).unwrap();
        let expected_q = field_amplitude_at(&dde, &cfg, Channel::Q, d, t_bar).unwrap();
        assert!(
            (psi_k[0].norm() - expected_k.norm()).abs() < 5e-2,
            "k-field mismatch at x = {x_bar}: {} vs {}",
            psi_k[0].norm(),
            expected_k.norm()
        );
        assert!(
            (psi_q[0].norm() - expected_q.norm()).abs() < 5e-2,
            "q-field mismatch at x = {x_bar}: {} vs {}",
            psi_q[0].norm(),
            expected_q.norm()
        );
    }
}
