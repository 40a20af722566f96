//! Subcommand implementations.

use std::path::Path;
use std::time::Instant;

use sector_music::array::{beamwidth_deg_with_constant, delta_separation};
use sector_music::beamspace::{array_gain, build_weighting};
use sector_music::dpss::compute_bank;
use sector_music::harness::{
    benchmark_rows, build_figure_sweep, build_table, find_empirical_threshold,
    BENCHMARK_GAIN_KERNEL_BANDWIDTH,
};
use sector_music::music::{eig_hermitian, evaluate_grid, GridSpec, ManifoldContext};
use sector_music::signal::{generate_snapshots_with, sample_covariance, Scenario, Space};
use sector_music::threshold::{db_from_linear, threshold_beamspace, EXPANSION_VALIDITY_LIMIT};

use crate::config::RunConfig;
use crate::output::{opt_sig6, sig6, OutputDir};
use crate::{CliError, CommonArgs};

fn load_config(common: &CommonArgs) -> Result<RunConfig, CliError> {
    let path = common
        .config
        .as_ref()
        .ok_or_else(|| CliError::validation("--config <path> is required for this command"))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::validation(format!("cannot read config {path:?}: {e}")))?;
    let mut config = RunConfig::from_json(&text)?;
    apply_overrides(&mut config, common)?;
    Ok(config)
}

fn apply_overrides(config: &mut RunConfig, common: &CommonArgs) -> Result<(), CliError> {
    if let Some(seed) = common.seed {
        config.seed = seed;
    }
    if let Some(space) = &common.space {
        config.space = space.clone();
    }
    if let Some(trials) = common.trials {
        config.trials = trials;
    }
    if let Some(step) = common.snr_step_db {
        config.snr_step_db = step;
    }
    config.validate()
}

pub fn dpss(
    common: &CommonArgs,
    n: Option<usize>,
    b: Option<f64>,
    count: Option<usize>,
) -> Result<(), CliError> {
    let started = Instant::now();
    // Parameters come from the config file when given, flags otherwise.
    let (order, bandwidth, count, seed, config_echo) = match &common.config {
        Some(_) => {
            let config = load_config(common)?;
            (
                config.num_sensors,
                config.kernel_bandwidth,
                config.subspace_dim,
                config.seed,
                serde_json::to_value(&config)
                    .map_err(|e| CliError::validation(e.to_string()))?,
            )
        }
        None => {
            let order = n.ok_or_else(|| CliError::validation("--n required without --config"))?;
            let bandwidth = b.unwrap_or(sector_music::harness::BENCHMARK_KERNEL_BANDWIDTH);
            let count = count.unwrap_or(3);
            let echo = serde_json::json!({"N": order, "B": bandwidth, "n": count});
            (order, bandwidth, count, common.seed.unwrap_or(0), echo)
        }
    };
    let bank = compute_bank(order, bandwidth, count)?;
    let mut out = OutputDir::create(&common.out)?;
    let header = std::iter::once("index".to_string())
        .chain(
            (0..count).map(|k| format!("seq{k}(lambda={})", sig6(bank.concentrations()[k]))),
        )
        .collect::<Vec<_>>()
        .join(",");
    let rows = (0..order).map(|l| {
        std::iter::once(l.to_string())
            .chain((0..count).map(|k| sig6(bank.sequences()[(l, k)])))
            .collect::<Vec<_>>()
            .join(",")
    });
    out.write_csv("dpss.csv", &header, rows)?;
    out.write_manifest("dpss", &config_echo, seed, started.elapsed().as_secs_f64())?;
    println!(
        "wrote dpss bank (N={order}, B={bandwidth}, n={count}) to {:?}",
        out.path()
    );
    Ok(())
}

fn angle_grid(config: &RunConfig) -> Vec<f64> {
    let bw = beamwidth_deg_with_constant(
        &config.geometry().expect("validated"),
        config.beamwidth_constant,
    );
    let step = config.grid_step_deg.unwrap_or(bw / 200.0);
    let mut angles = Vec::new();
    let mut a = -89.5;
    while a <= 89.5 + 1e-12 {
        angles.push(a);
        a += step;
    }
    angles
}

pub fn gain(common: &CommonArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let config = load_config(common)?;
    let geom = config.geometry()?;
    let bank = compute_bank(config.num_sensors, config.kernel_bandwidth, config.subspace_dim)?;
    let center_deg = config.sector_center_deg.unwrap_or_else(|| {
        config
            .two_alphas()
            .map(|[a, b]| 0.5 * (a + b))
            .unwrap_or(0.0)
    });
    let w = build_weighting(&geom, &bank, center_deg.to_radians())?;
    let mut out = OutputDir::create(&common.out)?;
    let rows = angle_grid(&config).into_iter().map(|deg| {
        let g = array_gain(&w, &geom, deg.to_radians());
        format!("{},{},{}", sig6(deg), sig6(g.linear), sig6(g.db))
    });
    out.write_csv("gain.csv", "angle_deg,gain_linear,gain_db", rows)?;
    out.write_manifest("gain", &config, config.seed, started.elapsed().as_secs_f64())?;
    println!("wrote gain profile to {:?}", out.path());
    Ok(())
}

pub fn spectrum(common: &CommonArgs, dump_snapshots: bool) -> Result<(), CliError> {
    let started = Instant::now();
    let config = load_config(common)?;
    let geom = config.geometry()?;
    let space = config.parse_space()?;
    let asnr_db = config
        .asnr_db
        .ok_or_else(|| CliError::validation("asnr_db required for spectrum"))?;
    let alphas_rad: Vec<f64> = config.alphas.iter().map(|d| d.to_radians()).collect();
    if alphas_rad.is_empty() {
        return Err(CliError::validation("alphas must not be empty"));
    }
    let scenario = Scenario::from_asnr_db(
        geom,
        alphas_rad,
        asnr_db,
        config.noise_power,
        config.num_snapshots,
        config.seed,
    )?;
    let snapshots = generate_snapshots_with(&scenario, config.parse_signal_model()?);
    let num_sources = config.alphas.len();
    let mid = config.alphas.iter().sum::<f64>() / config.alphas.len() as f64;
    let bw = beamwidth_deg_with_constant(&geom, config.beamwidth_constant);
    let grid = GridSpec::new(
        mid - config.grid_half_span_beamwidths * bw,
        mid + config.grid_half_span_beamwidths * bw,
        config.grid_step_deg.unwrap_or(bw / 200.0),
    )?;
    let spectrum_grid = match space {
        Space::Element => {
            let cov = sample_covariance(&snapshots, Space::Element)?;
            let eig = eig_hermitian(&cov)?;
            evaluate_grid(&eig, &ManifoldContext::Element(&geom), &grid, num_sources)?
        }
        Space::Beamspace => {
            let bank =
                compute_bank(config.num_sensors, config.kernel_bandwidth, config.subspace_dim)?;
            let center = config.sector_center_deg.unwrap_or(mid);
            let w = build_weighting(&geom, &bank, center.to_radians())?;
            let reduced = sector_music::beamspace::prefilter(&w, &snapshots)?;
            let cov = sample_covariance(&reduced, Space::Beamspace)?;
            let eig = eig_hermitian(&cov)?;
            evaluate_grid(&eig, &ManifoldContext::Beamspace(&w, &geom), &grid, num_sources)?
        }
    };
    let mut out = OutputDir::create(&common.out)?;
    let rows = spectrum_grid
        .angles_deg
        .iter()
        .zip(&spectrum_grid.null_values)
        .zip(&spectrum_grid.spectrum_values)
        .map(|((a, d), p)| format!("{},{},{}", sig6(*a), sig6(*d), sig6(*p)));
    out.write_csv("spectrum.csv", "angle_deg,null_value,spectrum_value", rows)?;
    if dump_snapshots {
        // One column per snapshot; sensor i occupies rows sensor{i}_re and
        // sensor{i}_im (full precision for cross-tool validation).
        let n = snapshots.nrows();
        let header = std::iter::once("component".to_string())
            .chain((0..snapshots.ncols()).map(|k| format!("snapshot{k}")))
            .collect::<Vec<_>>()
            .join(",");
        let dump_rows = (0..2 * n).map(|r| {
            let sensor = r / 2;
            let imag = r % 2 == 1;
            let label = if imag {
                format!("sensor{sensor}_im")
            } else {
                format!("sensor{sensor}_re")
            };
            std::iter::once(label)
                .chain((0..snapshots.ncols()).map(|k| {
                    let c = snapshots[(sensor, k)];
                    format!("{:e}", if imag { c.im } else { c.re })
                }))
                .collect::<Vec<_>>()
                .join(",")
        });
        out.write_csv("snapshots.csv", &header, dump_rows)?;
    }
    out.write_manifest("spectrum", &config, config.seed, started.elapsed().as_secs_f64())?;
    println!("wrote spectrum to {:?}", out.path());
    Ok(())
}

pub fn threshold(common: &CommonArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let config = load_config(common)?;
    let geom = config.geometry()?;
    let [a1, a2] = config.two_alphas()?;
    let delta = delta_separation(&geom, a1.to_radians(), a2.to_radians())?;
    let space = config.parse_space()?;
    let (dim, gain_linear) = match space {
        Space::Element => (config.num_sensors, 1.0),
        Space::Beamspace => {
            let bank =
                compute_bank(config.num_sensors, config.kernel_bandwidth, config.subspace_dim)?;
            let center = config.sector_center_deg.unwrap_or(0.5 * (a1 + a2));
            let w = build_weighting(&geom, &bank, center.to_radians())?;
            (
                config.subspace_dim,
                array_gain(&w, &geom, center.to_radians()).linear,
            )
        }
    };
    let tau = threshold_beamspace(dim, config.num_snapshots, delta, gain_linear)?;
    let tau_db = db_from_linear(tau);
    let valid = delta <= EXPANSION_VALIDITY_LIMIT;
    println!(
        "threshold: {} dB ({} linear), gain {} ({} dB), delta {}, expansion_valid {}",
        sig6(tau_db),
        sig6(tau),
        sig6(gain_linear),
        sig6(db_from_linear(gain_linear)),
        sig6(delta),
        valid
    );
    if !valid {
        println!("note: separation outside expansion validity; threshold is indicative only");
    }
    let mut out = OutputDir::create(&common.out)?;
    let header = "space,N,n,B,K,alpha1_deg,alpha2_deg,delta,gain_linear,gain_db,tau_linear,tau_db,expansion_valid";
    let row = format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{}",
        config.space,
        config.num_sensors,
        dim,
        sig6(config.kernel_bandwidth),
        config.num_snapshots,
        sig6(a1),
        sig6(a2),
        sig6(delta),
        sig6(gain_linear),
        sig6(db_from_linear(gain_linear)),
        sig6(tau),
        sig6(tau_db),
        valid
    );
    out.write_csv("threshold.csv", header, [row])?;
    out.write_manifest("threshold", &config, config.seed, started.elapsed().as_secs_f64())?;
    Ok(())
}

pub fn sweep(common: &CommonArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let config = load_config(common)?;
    let geom = config.geometry()?;
    let bw = beamwidth_deg_with_constant(&geom, config.beamwidth_constant);
    let start = config.alpha_d_start_deg.unwrap_or(0.05 * bw);
    let stop = config.alpha_d_stop_deg.unwrap_or(bw);
    let step = config.alpha_d_step_deg.unwrap_or((stop - start) / 100.0);
    if !(step > 0.0 && stop > start) {
        return Err(CliError::validation(
            "sweep needs alpha_d_stop_deg > alpha_d_start_deg and step > 0",
        ));
    }
    let bank = compute_bank(config.num_sensors, config.kernel_bandwidth, config.subspace_dim)?;
    let w = build_weighting(&geom, &bank, 0.0)?;
    let gain = array_gain(&w, &geom, 0.0).linear;
    let mut rows = Vec::new();
    let mut alpha_d = start;
    while alpha_d <= stop + 1e-12 {
        let half = (alpha_d / 2.0).to_radians();
        let delta = delta_separation(&geom, half, -half)?;
        let tau = threshold_beamspace(config.subspace_dim, config.num_snapshots, delta, gain)?;
        rows.push(format!("{},{}", sig6(alpha_d), sig6(db_from_linear(tau))));
        alpha_d += step;
    }
    let mut out = OutputDir::create(&common.out)?;
    out.write_csv("sweep.csv", "alpha_d_deg,tau_n_db", rows)?;
    out.write_manifest("sweep", &config, config.seed, started.elapsed().as_secs_f64())?;
    println!("wrote threshold sweep to {:?}", out.path());
    Ok(())
}

pub fn montecarlo(common: &CommonArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let config = load_config(common)?;
    let mc = config.mc_config()?;
    let result = find_empirical_threshold(&mc)?;
    let mut out = OutputDir::create(&common.out)?;
    let curve_rows = result
        .snr_db
        .iter()
        .zip(&result.probabilities)
        .map(|(s, p)| format!("{},{}", sig6(*s), sig6(*p)));
    out.write_csv("curve.csv", "asnr_db,probability", curve_rows)?;
    let trial_rows = result.snr_db.iter().zip(&result.trial_logs).flat_map(|(snr, logs)| {
        logs.iter().map(move |t| {
            let peaks = t
                .peaks
                .iter()
                .map(|(a, h)| format!("{}:{}", sig6(*a), sig6(*h)))
                .collect::<Vec<_>>()
                .join(";");
            format!("{},{},{},{},{}", sig6(*snr), t.trial_index, t.seed, t.resolved, peaks)
        })
    });
    out.write_csv(
        "trials.csv",
        "asnr_db,trial_index,seed,resolved,peaks(angle_deg:height)",
        trial_rows,
    )?;
    println!(
        "theory {} dB | empirical {} dB | 50% crossing {} dB (supplementary) | gain {} | delta {}",
        sig6(result.theoretical_threshold_db),
        opt_sig6(result.empirical_threshold_db),
        opt_sig6(result.crossing_50_db),
        sig6(result.array_gain_linear),
        sig6(result.delta),
    );
    if !result.expansion_valid {
        println!("note: separation outside expansion validity");
    }
    out.write_manifest("montecarlo", &config, config.seed, started.elapsed().as_secs_f64())?;
    Ok(())
}

fn table_csv_rows(rows: &[sector_music::harness::TableRow]) -> Vec<String> {
    rows.iter()
        .map(|r| {
            format!(
                "{},{},{},{},{},{},{},{},{},{},{}",
                r.num_sensors,
                r.subspace_dim,
                sig6(r.kernel_bandwidth),
                sig6(r.alpha_d_deg),
                r.num_snapshots,
                sig6(r.tau_theory_db),
                opt_sig6(r.tau_sim_db),
                sig6(r.array_gain_db),
                sig6(r.delta),
                sig6(r.gain_kernel_bandwidth),
                r.expansion_valid,
            )
        })
        .collect()
}

pub const TABLE_CSV_HEADER: &str = "N,n,B,alpha_d_deg,K,tau_theory_db,tau_sim_db,gain_db,delta,gain_kernel_b,expansion_valid";

pub fn tables(
    common: &CommonArgs,
    theory_only: bool,
    max_snapshots: Option<usize>,
) -> Result<(), CliError> {
    let started = Instant::now();
    let seed = common.seed.unwrap_or(0);
    let trials = common.trials.unwrap_or(30);
    let step = common.snr_step_db.unwrap_or(1.0);
    let rows: Vec<_> = benchmark_rows()
        .into_iter()
        .filter(|r| max_snapshots.is_none_or(|m| r.num_snapshots <= m))
        .collect();
    let table = build_table(&rows, !theory_only, trials, step, seed)?;
    let mut out = OutputDir::create(&common.out)?;
    out.write_csv("tables.csv", TABLE_CSV_HEADER, table_csv_rows(&table))?;
    let echo = serde_json::json!({
        "rows": rows,
        "theory_only": theory_only,
        "max_snapshots": max_snapshots,
        "trials": trials,
        "snr_step_db": step,
    });
    out.write_manifest("tables", &echo, seed, started.elapsed().as_secs_f64())?;
    for r in &table {
        println!(
            "N={} alpha_d={} K={}: theory {} dB, simulated {} dB",
            r.num_sensors,
            r.alpha_d_deg,
            r.num_snapshots,
            sig6(r.tau_theory_db),
            opt_sig6(r.tau_sim_db)
        );
    }
    println!("wrote benchmark table to {:?}", out.path());
    Ok(())
}

pub fn figures(common: &CommonArgs) -> Result<(), CliError> {
    let started = Instant::now();
    // With a config: one array; without: both benchmark arrays.
    type FigureSet = (usize, Vec<usize>, f64, Vec<usize>, Vec<f64>);
    let (configs, echo): (Vec<FigureSet>, serde_json::Value) =
        match &common.config {
            Some(_) => {
                let config = load_config(common)?;
                let geom = config.geometry()?;
                let bw = beamwidth_deg_with_constant(&geom, config.beamwidth_constant);
                let n_values = if config.n_values.is_empty() {
                    vec![config.subspace_dim]
                } else {
                    config.n_values.clone()
                };
                let k_values = if config.k_values.is_empty() {
                    vec![100, 1000, 10_000]
                } else {
                    config.k_values.clone()
                };
                let start = config.alpha_d_start_deg.unwrap_or(0.05 * bw);
                let stop = config.alpha_d_stop_deg.unwrap_or(bw);
                let step = config.alpha_d_step_deg.unwrap_or((stop - start) / 100.0);
                let grid = separation_grid(start, stop, step)?;
                let echo = serde_json::to_value(&config)
                    .map_err(|e| CliError::validation(e.to_string()))?;
                (
                    vec![(
                        config.num_sensors,
                        n_values,
                        config.kernel_bandwidth,
                        k_values,
                        grid,
                    )],
                    echo,
                )
            }
            None => {
                let mut configs = Vec::new();
                for n in [8usize, 16] {
                    let bw = 128.0 / n as f64;
                    let grid = separation_grid(0.05 * bw, bw, 0.0095 * bw)?;
                    configs.push((
                        n,
                        vec![3, 4, 5],
                        BENCHMARK_GAIN_KERNEL_BANDWIDTH,
                        vec![100, 1000, 10_000],
                        grid,
                    ));
                }
                (configs, serde_json::json!({"default_benchmark_figures": true}))
            }
        };
    let mut all_rows = Vec::new();
    for (n, n_values, kernel_b, k_values, grid) in &configs {
        let points = build_figure_sweep(*n, n_values, *kernel_b, k_values, grid)?;
        for p in points {
            all_rows.push(format!(
                "{},{},{}",
                sig6(p.alpha_d_deg),
                sig6(p.tau_db),
                p.curve_id
            ));
        }
    }
    let mut out = OutputDir::create(&common.out)?;
    out.write_csv("figures.csv", "alpha_d_deg,tau_n_db,curve_id", all_rows)?;
    out.write_manifest(
        "figures",
        &echo,
        common.seed.unwrap_or(0),
        started.elapsed().as_secs_f64(),
    )?;
    println!("wrote figure dataset to {:?}", out.path());
    Ok(())
}

fn separation_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>, CliError> {
    if !(step > 0.0 && stop > start && start > 0.0) {
        return Err(CliError::validation(
            "separation grid needs stop > start > 0 and step > 0",
        ));
    }
    let mut grid = Vec::new();
    let mut a = start;
    while a <= stop + 1e-12 {
        grid.push(a);
        a += step;
    }
    Ok(grid)
}

pub fn replay(manifest_path: &Path, out: &Path) -> Result<(), CliError> {
    let text = std::fs::read_to_string(manifest_path)
        .map_err(|e| CliError::validation(format!("cannot read manifest {manifest_path:?}: {e}")))?;
    let manifest: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::validation(format!("manifest parse: {e}")))?;
    let command = manifest
        .get("command")
        .and_then(|c| c.as_str())
        .ok_or_else(|| CliError::validation("manifest missing command"))?
        .to_string();
    let config_value = manifest
        .get("config")
        .cloned()
        .ok_or_else(|| CliError::validation("manifest missing config"))?;

    // Rebuild a CommonArgs pointing at a temp config rendered from the echo.
    let tmp = out.join("__replay_config.json");
    std::fs::create_dir_all(out)
        .map_err(|e| CliError::validation(format!("cannot create {out:?}: {e}")))?;
    std::fs::write(&tmp, serde_json::to_string_pretty(&config_value).unwrap())
        .map_err(|e| CliError::validation(format!("cannot write replay config: {e}")))?;
    let common = CommonArgs {
        config: Some(tmp.clone()),
        seed: None,
        out: out.to_path_buf(),
        space: None,
        trials: None,
        snr_step_db: None,
    };
    let result = match command.as_str() {
        "dpss" => dpss(&common, None, None, None),
        "gain" => gain(&common),
        "spectrum" => spectrum(&common, false),
        "threshold" => threshold(&common),
        "sweep" => sweep(&common),
        "montecarlo" => montecarlo(&common),
        "tables" => {
            let theory_only = config_value
                .get("theory_only")
                .and_then(|v| v.as_bool())
                .unwrap_or(false);
            let max_snapshots = config_value
                .get("max_snapshots")
                .and_then(|v| v.as_u64())
                .map(|m| m as usize);
            let trials = config_value.get("trials").and_then(|v| v.as_u64());
            let step = config_value.get("snr_step_db").and_then(|v| v.as_f64());
            let base_seed = manifest.get("base_seed").and_then(|v| v.as_u64());
            let common = CommonArgs {
                config: None,
                seed: base_seed,
                out: out.to_path_buf(),
                space: None,
                trials: trials.map(|t| t as usize),
                snr_step_db: step,
            };
            tables(&common, theory_only, max_snapshots)
        }
        "figures" => {
            // Default-figure runs carry a marker instead of a RunConfig.
            if config_value.get("default_benchmark_figures").is_some() {
                let common = CommonArgs {
                    config: None,
                    seed: None,
                    out: out.to_path_buf(),
                    space: None,
                    trials: None,
                    snr_step_db: None,
                };
                figures(&common)
            } else {
                figures(&common)
            }
        }
        other => Err(CliError::validation(format!(
            "manifest command {other:?} is not replayable"
        ))),
    };
    let _ = std::fs::remove_file(&tmp);
    result?;
    println!("replayed {command} into {out:?}");
    Ok(())
}

