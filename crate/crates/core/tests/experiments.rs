use std::path::PathBuf;

use avs_channel::experiment::{cmd_compare, cmd_sweep, sweep_rows, ExperimentConfig, SweepAxis};

fn recipes() -> Vec<PathBuf> {
    let dir: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "docs", "recipes"].iter().collect();
    let mut v: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "conf"))
        .collect();
    v.sort();
    v
}

fn data_rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect()
}

#[test]
fn every_recipe_runs() {
    let all = recipes();
    assert!(all.len() >= 8);
    for path in all {
        let mut cfg = ExperimentConfig::parse(&std::fs::read_to_string(&path).unwrap())
            .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        cfg.trials = 300;
        let sweep = cfg.sweep.as_ref().unwrap();
        let out = if cfg.normalize_energy && sweep.axis == SweepAxis::SnrDb {
            cmd_compare(&cfg)
        } else {
            cmd_sweep(&cfg)
        }
        .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(data_rows(&out).len(), sweep.values.len(), "{}", path.display());
    }
}

#[test]
fn snr_sweep_bounds_agree() {
    let cfg = ExperimentConfig::parse(
        "channel.beta_rad = 0.02\nchannel.normalize_energy = true\nmc.trials = 2000\nsweep.axis = snr_db\nsweep.values = -10:5:30\n",
    )
    .unwrap();
    let rows = sweep_rows(&cfg).unwrap();
    assert_eq!(rows.len(), 9);
    for r in &rows {
        assert!((r.c_ub_closed - r.c_ub_quadrature).abs() <= 1e-9);
        assert!(r.c_mc_vector <= r.c_ub_closed + 3.0 * r.c_mc_stderr);
        assert!(r.c_mc_siso <= r.c_mc_vector);
    }
    assert!(rows.windows(2).all(|w| w[1].c_mc_vector > w[0].c_mc_vector));
}

#[test]
fn compare_limits() {
    let cfg = ExperimentConfig::parse(
        "channel.beta_rad = 0.02\nchannel.normalize_energy = true\nmc.trials = 20000\nsweep.axis = snr_db\nsweep.values = -60, 0, 40\n",
    )
    .unwrap();
    let rows = data_rows(&cmd_compare(&cfg).unwrap());
    assert!(rows[0][1] < 1e-5 && rows[0][3] < 1e-5 && rows[0][5] < 1e-5);
    assert!((rows[2][7] - 3f64.log2()).abs() < 0.02, "{:?}", rows[2]);
}

#[test]
fn sweeps_are_deterministic() {
    let text = "channel.beta_rad = 0.01\nlink.tx_power = 1\nmc.trials = 3000\nsweep.axis = range_m\nsweep.values = 1000, 3000, 5000\n";
    let a = cmd_sweep(&ExperimentConfig::parse(text).unwrap()).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let b = pool.install(|| cmd_sweep(&ExperimentConfig::parse(text).unwrap()).unwrap());
    assert_eq!(a, b);
}

#[test]
fn range_and_frequency_sweeps_refit() {
    let text = "channel.beta_rad = 0.01\nlink.tx_power = 1\nmc.trials = 1000\nsweep.axis = frequency_hz\nsweep.values = 5000, 22000\n";
    let rows = sweep_rows(&ExperimentConfig::parse(text).unwrap()).unwrap();
    // Absorption lowers the fitted scale, so the bound falls.
    assert!(rows[1].c_ub_closed < rows[0].c_ub_closed - 0.5);
}
