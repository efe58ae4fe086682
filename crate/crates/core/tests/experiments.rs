use spectrum_split::experiments::*;
use spectrum_split::*;

fn quick_fig2() -> SweepSpec {
    let mut spec = SweepSpec::defaults(Figure::Fig2);
    spec.grid.n_max = 4;
    spec.grid.utils = vec![0.5];
    spec.sim.trials = 4_000;
    spec.sim.master_seed = 31;
    spec
}

#[test]
fn fig2_analytic_column_is_the_closed_form() {
    let mut spec = SweepSpec::defaults(Figure::Fig2);
    spec.grid.monte_carlo = false;
    let rows = run_fig2(&spec).unwrap();
    assert_eq!(rows.len(), 40);
    for r in &rows {
        let p = NetworkParams::interference_limited(4.0, 10.0, r.util).unwrap();
        assert_eq!(r.analytic_lambda, capacity_approx(&p, r.n, 0.1).unwrap().lambda);
        assert!(r.mc_inf_lambda.is_none() && r.mc_20db_stderr.is_none());
    }
}

#[test]
fn fig2_monte_carlo_columns() {
    let rows = run_fig2(&quick_fig2()).unwrap();
    assert_eq!(rows.len(), 4);
    for r in &rows {
        let inf = r.mc_inf_lambda.unwrap();
        let noisy = r.mc_20db_lambda.unwrap();
        assert!(r.mc_inf_stderr.unwrap() > 0.0);
        assert!((inf / r.analytic_lambda - 1.0).abs() < 0.2);
        assert!(noisy < inf * 1.05);
    }
}

#[test]
fn ds_table() {
    let spec = SweepSpec::defaults(Figure::DsCompare);
    let SweepTable::DsCompare(rows) = run_sweep(&spec).unwrap() else { panic!("wrong table") };
    for r in &rows {
        if r.n == 1 {
            assert!((r.fh_over_ds - 1.0).abs() < 1e-14);
        } else {
            assert!(r.fh_over_ds > 1.0);
        }
        assert_eq!(r.fh_over_ds, r.fh_lambda / r.ds_lambda);
    }
}

#[test]
fn bounds_table() {
    let spec = SweepSpec::defaults(Figure::BoundsCompare);
    let SweepTable::BoundsCompare(rows) = run_sweep(&spec).unwrap() else { panic!("wrong table") };
    assert_eq!(rows.len(), 4);
    for r in &rows {
        assert!((r.random_over_upper - 0.1).abs() < 1e-14);
        assert!(r.random_lambda < r.lattice_lambda);
    }
}

#[test]
fn rerun_is_bit_identical_and_sidecar_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let spec = quick_fig2();
    let first = run_sweep(&spec).unwrap();
    let csv = dir.path().join("fig2.csv");
    let side = write_outputs(&spec, &first, &csv).unwrap();
    assert_eq!(side, sidecar_path(&csv));

    let back = read_sidecar(&side).unwrap();
    assert_eq!(back.spec, spec);
    assert_eq!(back.seed, 31);
    assert_eq!(back.rows, first.len());

    let mut threaded = back.spec.clone();
    threaded.sim.threads = 3;
    let second = run_sweep(&threaded).unwrap();
    assert_eq!(std::fs::read_to_string(&csv).unwrap(), second.to_csv_string().unwrap());
}

#[test]
fn fig1_over_default_grid() {
    let spec = SweepSpec::defaults(Figure::Fig1);
    let SweepTable::Fig1(rows) = run_sweep(&spec).unwrap() else { panic!("wrong table") };
    assert_eq!(rows.len(), 18);
    assert!(rows.windows(2).all(|w| w[1].b_star > w[0].b_star));
    let csv = SweepTable::Fig1(rows).to_csv_string().unwrap();
    assert!(csv.starts_with("alpha,b_star,density_constant\n"));
}

#[test]
fn invalid_grids_rejected() {
    let mut spec = SweepSpec::defaults(Figure::Fig2);
    spec.grid.n_max = 257;
    assert!(run_sweep(&spec).unwrap_err().is_validation());
    let mut spec = SweepSpec::defaults(Figure::DsCompare);
    spec.grid.alphas = vec![3.0, 4.0];
    assert!(run_sweep(&spec).is_err());
}
