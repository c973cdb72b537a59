mod common;

use proptest::prelude::*;
use threshscope_core::metrics::{task_metrics, EmptyF1};
use threshscope_core::sweep::{run_sweep, MetricCell};
use threshscope_core::{find_peaks, robust_region, EvalSet, Metric, MetricLandscape, Provenance, SweepConfig, Task};

/// Every cell evaluated independently at its own threshold pair.
fn naive_sweep(es: &EvalSet, cfg: &SweepConfig, empty: EmptyF1) -> MetricLandscape {
    let grid = cfg.grid().unwrap();
    let mut cells = Vec::new();
    for &ta in &grid {
        for &tr in &grid {
            let a = task_metrics(es, Task::Action, ta, empty);
            let r = task_metrics(es, Task::Reason, tr, empty);
            cells.push(MetricCell {
                action_overall: a.overall_f1,
                action_mean: a.mean_f1,
                reason_overall: r.overall_f1,
                reason_mean: r.mean_f1,
            });
        }
    }
    MetricLandscape::from_cells(grid, cells, Provenance::Computed)
}

fn random_landscape() -> impl Strategy<Value = MetricLandscape> {
    (1usize..=9).prop_flat_map(|n| {
        prop::collection::vec(prop::collection::vec(0.0f64..=1.0, n), 4).prop_map(move |vals| {
            let grid: Vec<f64> = (0..n).map(|k| (k + 1) as f64 / 10.0).collect();
            let profiles: Vec<(Metric, Vec<f64>)> = Metric::ALL.into_iter().zip(vals).collect();
            MetricLandscape::from_profiles(grid, &profiles, Provenance::Fixture, 0)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn marginal_equals_naive(es in common::evalset(20, 6), zero in any::<bool>()) {
        let empty = if zero { EmptyF1::Zero } else { EmptyF1::One };
        let cfg = SweepConfig::default();
        let fast = run_sweep(&es, &cfg, empty).unwrap();
        let slow = naive_sweep(&es, &cfg, empty);
        prop_assert_eq!(fast.cells(), slow.cells());
        prop_assert!(fast.is_decoupled());
        prop_assert_eq!(fast.evaluations(), 18);
    }

    #[test]
    fn peaks_survive_positive_affine_rescaling(ls in random_landscape(), scale in 0.01f64..10.0,
                                               shift in -1.0f64..1.0, which in 0usize..4) {
        let target = Metric::ALL[which];
        let profiles: Vec<(Metric, Vec<f64>)> = Metric::ALL.iter().map(|&m| {
            let p = ls.profile(m);
            if m == target { (m, p.iter().map(|v| v * scale + shift).collect()) } else { (m, p) }
        }).collect();
        let scaled = MetricLandscape::from_profiles(ls.grid().to_vec(), &profiles, Provenance::Fixture, 0);
        let before = find_peaks(&ls);
        let after = find_peaks(&scaled);
        for m in Metric::ALL {
            prop_assert_eq!(before.get(m).threshold, after.get(m).threshold);
        }
    }

    #[test]
    fn peak_dominates_profile(ls in random_landscape()) {
        let p = find_peaks(&ls);
        for m in Metric::ALL {
            let peak = p.get(m);
            let profile = ls.profile(m);
            prop_assert!(profile.iter().all(|&v| v <= peak.value));
            // ties go to the lowest threshold
            let first = profile.iter().position(|&v| v == peak.value).unwrap();
            prop_assert_eq!(ls.grid()[first], peak.threshold);
            prop_assert_eq!(peak.degradation, peak.value - profile[profile.len() - 1]);
        }
    }

    #[test]
    fn robust_region_monotone_in_tolerance(ls in random_landscape(), a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let small = robust_region(&ls, lo);
        let large = robust_region(&ls, hi);
        prop_assert!(small.thresholds.iter().all(|t| large.thresholds.contains(t)));
        prop_assert_eq!(small.thresholds.len() + small.excluded.len(), ls.dim());
        prop_assert_eq!(robust_region(&ls, 1.0).thresholds, ls.grid().to_vec());
    }

    #[test]
    fn grid_generation(min_units in 0u32..=50, span in 0u32..=50, step_units in 1u32..=10) {
        let step = step_units as f64 / 100.0;
        let tau_min = min_units as f64 / 100.0;
        let tau_max = tau_min + (span * step_units) as f64 / 100.0;
        prop_assume!(tau_max <= 1.0);
        let cfg = SweepConfig { tau_min, tau_max, step, robust_rel_tol: 0.03 };
        let grid = cfg.grid().unwrap();
        prop_assert_eq!(grid.len(), ((tau_max - tau_min) / step).round() as usize + 1);
        for (k, t) in grid.iter().enumerate() {
            prop_assert!((t - (tau_min + k as f64 * step)).abs() < 1e-12);
        }
    }
}

#[test]
fn single_point_grid_matches_task_metrics() {
    let rows = vec![
        (vec![0.6, 0.2], vec![0.7, 0.1, 0.5], vec![1.0, 0.0], vec![1.0, 1.0, 0.0]),
        (vec![0.4, 0.9], vec![0.2, 0.8, 0.6], vec![1.0, 1.0], vec![0.0, 1.0, 1.0]),
    ];
    let es = common::build(2, 3, rows);
    let cfg = SweepConfig {
        tau_min: 0.5,
        tau_max: 0.5,
        ..SweepConfig::default()
    };
    let ls = run_sweep(&es, &cfg, EmptyF1::One).unwrap();
    assert_eq!(ls.dim(), 1);
    let a = task_metrics(&es, Task::Action, 0.5, EmptyF1::One);
    let r = task_metrics(&es, Task::Reason, 0.5, EmptyF1::One);
    let c = ls.cell(0, 0);
    assert_eq!((c.action_overall, c.action_mean), (a.overall_f1, a.mean_f1));
    assert_eq!((c.reason_overall, c.reason_mean), (r.overall_f1, r.mean_f1));
}

#[test]
fn default_sweep_is_nine_by_nine() {
    let rows = vec![(vec![0.3], vec![0.8], vec![1.0], vec![0.0])];
    let es = common::build(1, 1, rows);
    let ls = run_sweep(&es, &SweepConfig::default(), EmptyF1::One).unwrap();
    assert_eq!(ls.dim(), 9);
    assert_eq!(ls.cells().len(), 81);
    assert_eq!(ls.provenance(), Provenance::Computed);
}
