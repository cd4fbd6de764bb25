//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (visible with `cargo test --test acceptance -- --nocapture`). Tolerances
//! are pinned here as constants.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};
use std::time::Instant;

use lambdawg_core::*;

const TOL_STEADY_POP: f64 = 1e-3;
const TOL_SERIES_VS_DDE: f64 = 1e-6;
const TOL_ORACLE_VS_DDE: f64 = 1e-2;
const TOL_FINAL_VALUE: f64 = 1e-6;
const TOL_BS_RESIDUAL: f64 = 1e-12;
const TOL_BS_ALPHA: f64 = 1e-12;
const TOL_DARK_DDE: f64 = 1e-10;
const TOL_DARK_ORACLE: f64 = 1e-6;
const TOL_MIRROR_LEAKED: f64 = 1e-3;
const TOL_OPEN_LINE_EXP: f64 = 1e-6;
const FIELD_DROP_RATIO: f64 = 10.0;
const FIELD_SMOOTH_DROP: f64 = 0.05;
const FIELD_LATE_FLOOR: f64 = 1e-6;
const TOL_FLUX_OPEN: f64 = 1e-3;
const TOL_FLUX_TRAPPED: f64 = 1e-2;
// finite mode window plus real-space quadrature; see the partition check
const TOL_FLUX_ORACLE_CROSS: f64 = 2e-2;
const TOL_ORACLE_PARTITION: f64 = 1e-3;
const RELEASE_QUIET: f64 = 1e-6;
const RELEASE_RISE: f64 = 1e-3;
const RELEASE_RESIDUAL_POP: f64 = 0.01;
const TOL_UNITARITY: f64 = 1e-6;

fn check(number: u32, name: &str, pass: bool, detail: String) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("ACCEPTANCE {number:02} {name}: {verdict} ({detail})");
    assert!(pass, "criterion {number:02} {name}: {detail}");
}

fn ideal(gamma_g: f64, gamma_xi: f64, phi_k: f64, phi_q: f64, tau_k: f64, tau_q: f64) -> SingleAtomConfig {
    SingleAtomConfig::ideal(
        ChannelParams::new(gamma_g, phi_k, tau_k).unwrap(),
        ChannelParams::new(gamma_xi, phi_q, tau_q).unwrap(),
    )
    .unwrap()
}

fn with_reflectivity(r: f64, tau_k: f64, tau_q: f64) -> SingleAtomConfig {
    SingleAtomConfig::new(
        ChannelParams::new(1.0, TAU, tau_k).unwrap(),
        ChannelParams::new(1.0, TAU, tau_q).unwrap(),
        r,
        FrequencyShift::None,
        Complex64::new(1.0, 0.0),
    )
    .unwrap()
}

fn max_abs_diff(a: impl Iterator<Item = f64>) -> f64 {
    a.fold(0.0f64, f64::max)
}

#[test]
fn criterion_01_steady_state_trapping() {
    let start = Instant::now();
    let run = |tau: f64| {
        let cfg = ideal(1.0, 1.0, TAU, TAU, tau, tau);
        let traj = integrate_single(&cfg, 50.0, 1e-3).unwrap();
        traj.population(0, traj.len() - 1)
    };
    let long = run(1.0);
    let short = run(0.1);
    let expect_long = 0.25;
    let expect_short = 1.1f64.powi(-2);
    let err_long = (long - expect_long).abs();
    let err_short = (short - expect_short).abs();
    check(
        1,
        "steady-state trapping",
        err_long < TOL_STEADY_POP && err_short < TOL_STEADY_POP,
        format!(
            "pop(50)={long:.6} vs {expect_long} and {short:.6} vs {expect_short:.6}, elapsed {:.1?}",
            start.elapsed()
        ),
    );
}

#[test]
fn criterion_02_series_integrator_equivalence() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let gamma_g = rng.random_range(0.2..2.0);
        let gamma_xi = rng.random_range(0.2..2.0);
        let phi_k = rng.random_range(0.0..TAU);
        let phi_q = rng.random_range(0.0..TAU);
        let tau = rng.random_range(0.3..1.5);
        let cfg = ideal(gamma_g, gamma_xi, phi_k, phi_q, tau, tau);
        let dt = tau / 1e4;
        let traj = integrate_single(&cfg, 10.0 * tau, dt).unwrap();
        let diff = max_abs_diff((0..traj.len()).map(|i| {
            let series = series_solution(&cfg, traj.time(i)).unwrap();
            (series - traj.amplitude(0, i)).norm()
        }));
        worst = worst.max(diff);
    }
    check(
        2,
        "series-integrator equivalence",
        worst < TOL_SERIES_VS_DDE,
        format!("max|series - dde| = {worst:.3e} over 10 random configs, elapsed {:.1?}", start.elapsed()),
    );
}

/// Shared by criteria 3 and 11: the trapped two-channel scenario integrated
/// against mode grids of doubling size, returning per-level discrepancies
/// and the worst norm drift.
fn oracle_refinement() -> (Vec<f64>, f64) {
    let cfg = ideal(1.0, 1.0, TAU, TAU, 1.0, 1.0);
    let dde = integrate_single(&cfg, 10.0, 1e-3).unwrap();
    let geometry = AtomGeometry::from_single_config(&cfg).unwrap();
    let mut discrepancies = Vec::new();
    let mut worst_drift = 0.0f64;
    for level in 0..3u32 {
        let n_modes = 4000 * (1 << level) as usize + 1;
        let window = 40.0 * f64::from(1 << level);
        let grid = ModeGrid::for_single(&geometry, n_modes, window).unwrap();
        let dt = 0.08 / window;
        let (traj, _) = evolve_modes_single(&geometry, &grid, 10.0, dt).unwrap();
        worst_drift = worst_drift.max(traj.error_bound);
        let diff = max_abs_diff(
            (0..traj.len()).map(|i| (dde.sample(0, traj.time(i)) - traj.amplitude(0, i)).norm()),
        );
        discrepancies.push(diff);
    }
    (discrepancies, worst_drift)
}

#[test]
fn criterion_03_oracle_equivalence() {
    // Known red, kept at the pinned tolerance: a mode bath confined to
    // detunings |u| <= W starts quadratically, c(t) ~ 1 - M2 t^2/2 with
    // M2 = sum g^2 dmu ~ 2 G W / pi, while the delay equation starts with
    // slope -G/2, so sup_t |difference| >= ~1/(2 M2) ~ 1.9e-2 at W = 40
    // for this two-channel scenario -- above the pinned 1e-2 for any
    // quadrature with these couplings (tapers and end-weights measure
    // worse). The refined windows and every time-integrated comparison
    // meet the tolerance; see also the t = 10 value cross-check in
    // tests/cross_validation.rs.
    let start = Instant::now();
    let (d, _) = oracle_refinement();
    let monotone = d[1] < d[0] && d[2] < d[1];
    check(
        3,
        "mode-oracle equivalence",
        d[0] < TOL_ORACLE_VS_DDE && monotone,
        format!(
            "discrepancies {:.3e} -> {:.3e} -> {:.3e} under window/mode doubling (truncated-bath floor ~1.9e-2 at the base window), elapsed {:.1?}",
            d[0],
            d[1],
            d[2],
            start.elapsed()
        ),
    );
}

#[test]
fn criterion_04_final_value_consistency() {
    let start = Instant::now();
    let s = Complex64::new(1e-8, 0.0);
    let mut worst = 0.0f64;
    for i in 0..5 {
        for j in 0..5 {
            let tau_k = 0.2 + 0.4 * i as f64;
            let tau_q = 0.2 + 0.4 * j as f64;
            let cfg = ideal(1.0, 1.0, TAU, TAU, tau_k, tau_q);
            let sc = s * laplace_amplitude(&cfg, s).unwrap();
            let predicted = steady_state_population(&cfg).unwrap();
            worst = worst.max((sc.norm_sqr() - predicted).abs());
        }
    }
    let off = ideal(1.0, 1.0, PI, TAU, 1.0, 1.0);
    let sc_off = s * laplace_amplitude(&off, s).unwrap();
    let off_residual = sc_off.norm_sqr();
    check(
        4,
        "final-value consistency",
        worst < TOL_FINAL_VALUE && off_residual < TOL_FINAL_VALUE,
        format!(
            "max|{{s c(s)}}^2 - steady| = {worst:.3e} on 5x5 grid, off-resonant {off_residual:.3e}, elapsed {:.1?}",
            start.elapsed()
        ),
    );
}

#[test]
fn criterion_05_bound_state_suite() {
    let start = Instant::now();
    // independent residual of the energy equation
    let residual = |e: f64, omega0: f64, k: &ChannelParams, q: &ChannelParams| -> f64 {
        (e - omega0
            + 0.5 * k.gamma / k.velocity * ((e - omega0 + k.carrier * k.velocity) * k.delay).sin()
            + 0.5 * q.gamma / q.velocity * ((e - omega0 + q.carrier * q.velocity) * q.delay).sin())
        .abs()
    };

    let omega0 = 10.0;
    let k = ChannelParams::from_geometry(0.5, 1.0, TAU, 1.0).unwrap();
    let q = ChannelParams::from_geometry(0.5, 1.0, TAU, 1.0).unwrap();
    let roots = bound_state_energy(omega0, &k, &q);
    let on_resonance = roots
        .iter()
        .copied()
        .min_by(|a, b| (a - omega0).abs().partial_cmp(&(b - omega0).abs()).unwrap())
        .unwrap();
    let res_resonant = residual(on_resonance, omega0, &k, &q);
    let pinned = (on_resonance - omega0).abs() < 1e-9 && res_resonant < TOL_BS_RESIDUAL;

    let bs = bound_state_population(on_resonance, omega0, &k, &q).unwrap();
    let cfg = ideal(1.0, 1.0, TAU, TAU, 1.0, 1.0);
    let alpha_sq_err = (bs.alpha * bs.alpha - steady_state_population(&cfg).unwrap()).abs();

    let mut rng = ChaCha8Rng::seed_from_u64(0xb0b);
    let mut worst_random = 0.0f64;
    let mut n_roots = 0usize;
    for _ in 0..20 {
        let mk = ChannelParams::direct(
            rng.random_range(0.1..2.0),
            rng.random_range(0.0..TAU),
            rng.random_range(0.1..2.0),
            1.0,
        )
        .unwrap();
        let mq = ChannelParams::direct(
            rng.random_range(0.1..2.0),
            rng.random_range(0.0..TAU),
            rng.random_range(0.1..2.0),
            1.0,
        )
        .unwrap();
        let w0 = rng.random_range(0.0..20.0);
        let roots = bound_state_energy(w0, &mk, &mq);
        n_roots += roots.len();
        for root in roots {
            worst_random = worst_random.max(residual(root, w0, &mk, &mq));
        }
    }
    check(
        5,
        "bound-state suite",
        pinned && alpha_sq_err < TOL_BS_ALPHA && worst_random < TOL_BS_RESIDUAL,
        format!(
            "aligned root residual {res_resonant:.2e}, alpha^2 error {alpha_sq_err:.2e}, worst of {n_roots} random roots {worst_random:.2e}, elapsed {:.1?}",
            start.elapsed()
        ),
    );
}

#[test]
fn criterion_06_dark_state_and_atom_at_mirror() {
    let start = Instant::now();
    let inv = FRAC_1_SQRT_2;

    // coincident emitters, antisymmetric initial state, in the delay system
    let dark = TwoAtomConfig::new(
        0.5,
        0.5,
        1.0,
        1.0,
        1.0,
        1.0,
        4.1,
        7.3,
        1.0,
        [Complex64::new(inv, 0.0), Complex64::new(-inv, 0.0)],
    )
    .unwrap();
    let traj = integrate_two_atom(&dark, 20.0, 5e-3).unwrap();
    let (_, minus) = symmetric_antisymmetric(&traj).unwrap();
    let dde_drift = max_abs_diff(minus.iter().map(|p| (p - minus[0]).norm()));

    // the same protection in the mode oracle
    let dark_oracle = TwoAtomConfig::new(
        0.5,
        0.5,
        1.0,
        1.0,
        1.0,
        1.0,
        16.0 * PI,
        16.0 * PI,
        1.0,
        [Complex64::new(inv, 0.0), Complex64::new(-inv, 0.0)],
    )
    .unwrap();
    let grid = ModeGrid::for_two(&dark_oracle, 2001, 30.0).unwrap();
    let (otraj, _) = evolve_modes_two(&dark_oracle, &grid, 20.0, 3e-3).unwrap();
    let oracle_drift = max_abs_diff((0..otraj.len()).map(|i| {
        let p = (otraj.amplitude(0, i) - otraj.amplitude(1, i)) * inv;
        let p0 = (otraj.amplitude(0, 0) - otraj.amplitude(1, 0)) * inv;
        (p - p0).norm()
    }));

    // an emitter exactly at the mirror never decays
    let at_mirror = TwoAtomConfig::new(
        0.0,
        0.7,
        1.0,
        1.0,
        1.0,
        1.0,
        3.3,
        4.9,
        1.0,
        [Complex64::new(0.8, 0.1), Complex64::new(0.3, -0.2)],
    )
    .unwrap();
    let mtraj = integrate_two_atom(&at_mirror, 20.0, 5e-3).unwrap();
    let frozen_drift =
        max_abs_diff(mtraj.row(0).iter().map(|c| (c - mtraj.amplitude(0, 0)).norm()));

    check(
        6,
        "dark state and atom at mirror",
        dde_drift < TOL_DARK_DDE && oracle_drift < TOL_DARK_ORACLE && frozen_drift < TOL_DARK_DDE,
        format!(
            "antisym drift dde {dde_drift:.2e}, oracle {oracle_drift:.2e}; mirror emitter drift {frozen_drift:.2e}, elapsed {:.1?}",
            start.elapsed()
        ),
    );
}

#[test]
fn criterion_07_imperfect_mirror() {
    let start = Instant::now();
    let run = |r: f64| integrate_single(&with_reflectivity(r, 0.1, 0.5), 50.0, 1e-3).unwrap();

    let leaky = run(0.8);
    let leaked = leaky.population(0, leaky.len() - 1);

    let perfect = run(1.0);
    let trapped = perfect.population(0, perfect.len() - 1);
    let expect_trapped = (1.0f64 + 0.5 * (0.1 + 0.5)).powi(-2);
    let trapped_err = (trapped - expect_trapped).abs();

    let open = run(0.0);
    let open_err = max_abs_diff(
        (0..open.len()).map(|i| (open.population(0, i) - (-2.0 * open.time(i)).exp()).abs()),
    );

    check(
        7,
        "imperfect mirror",
        leaked < TOL_MIRROR_LEAKED && trapped_err < TOL_STEADY_POP && open_err < TOL_OPEN_LINE_EXP,
        format!(
            "R=0.8 leaves {leaked:.2e}; R=1 holds {trapped:.4} vs {expect_trapped:.4}; R=0 vs exp {open_err:.2e}, elapsed {:.1?}",
            start.elapsed()
        ),
    );
}

#[test]
fn criterion_08_output_field_structure() {
    let start = Instant::now();
    let cfg = ideal(1.0, 1.0, TAU, TAU, 0.1, 0.5);
    let dt = 1e-4;
    let traj = integrate_single(&cfg, 12.0, dt).unwrap();
    let field_k = output_field(&traj, &cfg, Channel::K, 0.0, None).unwrap();
    let field_q = output_field(&traj, &cfg, Channel::Q, 0.0, None).unwrap();

    let i_tau_k = (0.1 / dt).round() as usize;
    let drop_ratio = field_k.intensity(i_tau_k - 1) / field_k.intensity(i_tau_k);
    let q_rel_drop = 1.0 - field_q.intensity(i_tau_k) / field_q.intensity(i_tau_k - 1);

    let late_start = (10.0 / dt).round() as usize;
    let late_max = max_abs_diff(
        (late_start..traj.len()).map(|i| field_k.intensity(i).max(field_q.intensity(i))),
    );

    check(
        8,
        "output-field structure",
        drop_ratio >= FIELD_DROP_RATIO && q_rel_drop.abs() < FIELD_SMOOTH_DROP && late_max < FIELD_LATE_FLOOR,
        format!(
            "k-channel drop x{drop_ratio:.1} at its round trip, q-channel change {:.2}%, late-time max {late_max:.2e}, elapsed {:.1?}",
            100.0 * q_rel_drop,
            start.elapsed()
        ),
    );
}

#[test]
fn criterion_09_flux_conservation() {
    let start = Instant::now();

    // open line: everything radiates
    let open = with_reflectivity(0.0, 0.1, 0.5);
    let traj = integrate_single(&open, 20.0, 1e-3).unwrap();
    let fk = output_field(&traj, &open, Channel::K, 0.0, None).unwrap();
    let fq = output_field(&traj, &open, Channel::Q, 0.0, None).unwrap();
    let flux_open = integrated_flux(&fk, &fq, &open).unwrap();

    // trapped: radiated probability is one minus the bound-state weight
    let trapped = ideal(1.0, 1.0, TAU, TAU, 1.0, 1.0);
    let traj = integrate_single(&trapped, 50.0, 1e-3).unwrap();
    let fk = output_field(&traj, &trapped, Channel::K, 0.0, None).unwrap();
    let fq = output_field(&traj, &trapped, Channel::Q, 0.0, None).unwrap();
    let flux_trapped = integrated_flux(&fk, &fq, &trapped).unwrap();
    let alpha = bound_state_population(0.0, 0.0, &trapped.channel_k, &trapped.channel_q)
        .unwrap()
        .alpha;

    // cross-check against the oracle's real-space probability partition
    let geometry = AtomGeometry::from_single_config(&trapped).unwrap();
    let grid = ModeGrid::for_single(&geometry, 4001, 40.0).unwrap();
    let t_snap = 10.0;
    let (otraj, state) = evolve_modes_single(&geometry, &grid, t_snap, 2e-3).unwrap();
    let dx = 1e-3;
    let x_max = geometry.x0 + t_snap + 0.5;
    let n_samples = (x_max / dx) as usize + 1;
    let xs: Vec<f64> = (0..n_samples).map(|i| i as f64 * dx).collect();
    let (psi_k, psi_q) = realspace_field(&state, &grid, &xs);
    let density: Vec<f64> = psi_k
        .iter()
        .zip(&psi_q)
        .map(|(a, b)| a.norm_sqr() + b.norm_sqr())
        .collect();
    let trapz = |lo: usize, hi: usize| -> f64 {
        let sum: f64 = density[lo..hi].iter().sum();
        (sum - 0.5 * (density[lo] + density[hi - 1])) * dx
    };
    let x_cut = 1.5;
    let i_cut = (x_cut / dx) as usize;
    let beyond = trapz(i_cut, n_samples);
    let emitter_pop = otraj.population(0, otraj.len() - 1);
    let partition = emitter_pop + trapz(0, n_samples);

    let open_err = (flux_open - 1.0).abs();
    let trapped_err = (flux_trapped - (1.0 - alpha)).abs();
    let cross_err = (beyond - flux_trapped).abs();
    let partition_err = (partition - 1.0).abs();
    check(
        9,
        "flux conservation",
        open_err < TOL_FLUX_OPEN
            && trapped_err < TOL_FLUX_TRAPPED
            && cross_err < TOL_FLUX_ORACLE_CROSS
            && partition_err < TOL_ORACLE_PARTITION,
        format!(
            "open {flux_open:.5}, trapped {flux_trapped:.4} vs 1-alpha={:.4}, oracle radiated {beyond:.4}, partition error {partition_err:.2e}, elapsed {:.1?}",
            1.0 - alpha,
            start.elapsed()
        ),
    );
}

#[test]
fn criterion_10_frequency_shift_release() {
    let start = Instant::now();
    let cfg = SingleAtomConfig::new(
        ChannelParams::new(1.0, TAU, 1.0).unwrap(),
        ChannelParams::new(1.0, TAU, 2.0).unwrap(),
        1.0,
        FrequencyShift::smooth_step(2.0, 25.0, 0.2).unwrap(),
        Complex64::new(1.0, 0.0),
    )
    .unwrap();
    let dt = 1e-3;
    let traj = integrate_single(&cfg, 60.0, dt).unwrap();
    let field_k = output_field(&traj, &cfg, Channel::K, 0.0, None).unwrap();
    let field_q = output_field(&traj, &cfg, Channel::Q, 0.0, None).unwrap();

    let window = |lo: f64, hi: f64, field: &OutputField| -> f64 {
        let a = (lo / dt).round() as usize;
        let b = (hi / dt).round() as usize;
        max_abs_diff((a..=b).map(|i| field.intensity(i)))
    };
    let quiet = window(20.0, 24.0, &field_k).max(window(20.0, 24.0, &field_q));
    let risen_k = window(25.0, 35.0, &field_k);
    let risen_q = window(25.0, 35.0, &field_q);
    let residual = traj.population(0, traj.len() - 1);

    check(
        10,
        "frequency-shift release",
        quiet < RELEASE_QUIET
            && risen_k > RELEASE_RISE
            && risen_q > RELEASE_RISE
            && residual < RELEASE_RESIDUAL_POP,
        format!(
            "pre-onset max {quiet:.2e}, post-onset peaks k {risen_k:.2e} / q {risen_q:.2e}, residual pop {residual:.2e}, elapsed {:.1?}",
            start.elapsed()
        ),
    );
}

#[test]
fn criterion_11_unitarity() {
    let start = Instant::now();
    let (_, drift) = oracle_refinement();
    check(
        11,
        "unitarity",
        drift < TOL_UNITARITY,
        format!("worst norm drift {drift:.2e} across oracle refinement runs, elapsed {:.1?}", start.elapsed()),
    );
}
