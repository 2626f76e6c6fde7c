// SPDX-License-Identifier: Apache-2.0
use ergmk::cfp::{
    cfp_ensemble, cfp_fast_mixing_check, cfp_simulate, cfp_stationary, CfpConfig, CfpEventKind, CfpParams, FocusCount,
    FAST_MIXING_RATIO,
};
use ergmk::exact::total_variation;
use ergmk::stats::{ks_exponential, mean_and_se};

fn edge_probability(params: CfpParams, n: usize, horizon: f64, reps: usize, seed: u64) -> (f64, f64) {
    let mut c = CfpConfig::new(params, n, false);
    c.t_max = horizon;
    c.burn_in = horizon * 0.1;
    c.seed = seed;
    let p: Vec<f64> = cfp_ensemble(&c, reps).unwrap().iter().map(|r| r.edge_probability).collect();
    mean_and_se(&p)
}

#[test]
fn single_focus_birth_death_probability() {
    for (r_f, r_d) in [(2.0, 1.0), (1.0, 1.0)] {
        let p = CfpParams::new(1.0, r_f, r_d, FocusCount::Fixed(1), false).unwrap();
        let (m, se) = edge_probability(p, 6, 400.0, 8, 17);
        let want = r_f / (r_f + r_d);
        assert!((m - want).abs() < 3.0 * se, "{m} vs {want} ± {se}");
    }
}

#[test]
fn two_vertex_two_focus_product_chain() {
    for r_m in [0.3, 1.5] {
        let p = CfpParams::new(r_m, 1.0, 0.7, FocusCount::Fixed(2), false).unwrap();
        let pi = cfp_stationary(&p, 2, false).unwrap();
        assert_eq!(pi.len(), 8);
        let mut c = CfpConfig::new(p, 2, false);
        c.t_max = 40_000.0;
        c.track_states = true;
        c.seed = 23;
        let traj = cfp_simulate(&c).unwrap();
        let tv = total_variation(&traj.occupancy_distribution(8).unwrap(), &pi);
        assert!(tv <= 0.02, "r_m={r_m} tv={tv}");
    }
}

#[test]
fn fast_mixing_limit_edge_probability() {
    let p = CfpParams::new(1e3, 1.0, 1.0, FocusCount::Fixed(10), false).unwrap();
    let report = cfp_fast_mixing_check(&p, 10, false, 150.0, 8, 41, FAST_MIXING_RATIO).unwrap();
    assert!((report.predicted_edge_probability - 1.0 / 11.0).abs() < 1e-15);
    assert!(report.consistent, "{report:?}");
    assert!((report.implied_edge_theta - ((1.0f64 / 10.0).ln() + 10f64.ln())).abs() < 0.1);
}

#[test]
fn slow_mixing_departs_from_pooled_prediction() {
    let p = CfpParams::new(1e-3, 1.0, 1.0, FocusCount::Fixed(10), false).unwrap();
    assert!(cfp_fast_mixing_check(&p, 10, false, 100.0, 8, 1, FAST_MIXING_RATIO).is_err());
    let report = cfp_fast_mixing_check(&p, 10, false, 100.0, 32, 1, 0.0).unwrap();
    assert!(!report.consistent, "{report:?}");
}

#[test]
fn constant_focus_count_degree_grows_with_order() {
    let p = CfpParams::new(1e3, 1.0, 1.0, FocusCount::Scaled { c: 4.0, gamma: 1.0 }, false).unwrap();
    let want = p.fast_mixing_edge_probability(4);
    let mut degrees = Vec::new();
    for (k, n) in [10usize, 20, 40].into_iter().enumerate() {
        let (m, se) = edge_probability(p, n, 40.0, 4, 60 + k as u64);
        assert!((m - want).abs() < 3.0 * se, "n={n} p={m} want {want} ± {se}");
        degrees.push(m * (n - 1) as f64);
    }
    assert!(degrees[0] < degrees[1] && degrees[1] < degrees[2]);
    assert!((degrees[2] / degrees[0] - 39.0 / 9.0).abs() < 0.2);
}

#[test]
fn focus_occupancy_is_uniform() {
    let p = CfpParams::new(1.0, 1.0, 1.0, FocusCount::Fixed(3), false).unwrap();
    let mut c = CfpConfig::new(p, 4, false);
    c.t_max = 20_000.0;
    c.seed = 8;
    let traj = cfp_simulate(&c).unwrap();
    for row in &traj.focus_occupancy {
        assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        for &x in row {
            assert!((x - 1.0 / 3.0).abs() < 0.03, "{row:?}");
        }
    }
}

#[test]
fn co_located_edge_is_two_state_chain() {
    let (r_f, r_d) = (1.5, 0.5);
    let p = CfpParams::new(1.0, r_f, r_d, FocusCount::Fixed(1), false).unwrap();
    let mut c = CfpConfig::new(p, 2, false);
    c.t_max = 20_000.0;
    c.record_events = true;
    c.seed = 2;
    let traj = cfp_simulate(&c).unwrap();
    let mut on = Vec::new();
    let mut off = Vec::new();
    let mut last = 0.0;
    for e in traj.events.iter().filter(|e| e.kind != CfpEventKind::Migrate) {
        match e.kind {
            CfpEventKind::Form => off.push(e.time - last),
            _ => on.push(e.time - last),
        }
        last = e.time;
    }
    assert!(ks_exponential(&on, r_d).1 > 1e-3);
    assert!(ks_exponential(&off, r_f).1 > 1e-3);
    let (m_on, se_on) = mean_and_se(&on);
    assert!((m_on - 1.0 / r_d).abs() < 3.0 * se_on);
}

#[test]
fn reciprocity_raises_conditional_arc_probability() {
    let p = CfpParams::new(1.0, 1.0, 1.0, FocusCount::Fixed(3), true).unwrap();
    let mut c = CfpConfig::new(p, 5, true);
    c.t_max = 5000.0;
    c.seed = 13;
    let (present, absent) = cfp_simulate(&c).unwrap().reciprocity_conditionals().unwrap();
    assert!(present > absent, "{present} vs {absent}");

    let fast = CfpParams::new(1e3, 1.0, 1.0, FocusCount::Fixed(6), true).unwrap();
    let report = cfp_fast_mixing_check(&fast, 6, true, 100.0, 8, 3, FAST_MIXING_RATIO).unwrap();
    assert!(report.consistent, "{report:?}");
    let r = report.reciprocity.unwrap();
    assert!(r.predicted.given_reverse_present > r.predicted.given_reverse_absent);
}
