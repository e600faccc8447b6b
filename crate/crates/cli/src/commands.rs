use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::json;

use exchange_budget::budget::{
    builtin_catalog, builtin_platform, feasibility_with, FeasibilityOptions, FeasibilityReport,
    PlatformSpec, TechnologySpec, Threshold, BUILTIN_PLATFORMS,
};
use exchange_budget::decoherence::DephasingSpec;
use exchange_budget::exchange::{
    gate_error_leading_order, gate_error_vs_phase, relative_error_to_phase_error,
    swap_power_target, ExchangePhase, PulseSpec,
};
use exchange_budget::montecarlo::{self, McConfig, RejectPolicy, SweepAxis, SweepRow};
use exchange_budget::noise::{ControlNoiseSpec, NoiseDistribution};
use exchange_budget::specfile::{load_specs, parse_value_list, SpecDocument};

use crate::args::{
    CatalogArgs, FeasibilityArgs, Format, GateArgs, McArgs, McParams, SweepArgs,
    DEFAULT_BW_HIGH_HZ, DEFAULT_EPSILON,
};
use crate::output::{manifest_path_for, sci3, sweep_csv, table, write_file, RunManifest};
use crate::CliError;

struct CatalogEntry {
    tech: TechnologySpec,
    source: String,
}

fn read_spec_file(path: &Path) -> Result<SpecDocument, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    load_specs(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_catalog(files: &[PathBuf]) -> Result<Vec<CatalogEntry>, CliError> {
    let mut entries: Vec<CatalogEntry> = builtin_catalog()
        .into_iter()
        .map(|tech| CatalogEntry {
            tech,
            source: "builtin".into(),
        })
        .collect();
    for path in files {
        for tech in read_spec_file(path)?.technologies {
            if let Some(existing) = entries.iter().find(|e| e.tech.name == tech.name) {
                return Err(CliError::Input(format!(
                    "{}: technology `{}` collides with an entry from {}",
                    path.display(),
                    tech.name,
                    existing.source
                )));
            }
            entries.push(CatalogEntry {
                tech,
                source: path.display().to_string(),
            });
        }
    }
    Ok(entries)
}

fn lookup(catalog: &[CatalogEntry], name: &str) -> Result<TechnologySpec, CliError> {
    catalog
        .iter()
        .find(|e| e.tech.name == name)
        .map(|e| e.tech.clone())
        .ok_or_else(|| {
            let known: Vec<&str> = catalog.iter().map(|e| e.tech.name.as_str()).collect();
            CliError::Input(format!(
                "unknown technology `{name}` (known: {})",
                known.join(", ")
            ))
        })
}

fn finite(name: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Input(format!("--{name} must be finite")))
    }
}

fn opt_finite(name: &str, v: Option<f64>) -> Result<Option<f64>, CliError> {
    v.map(|x| finite(name, x)).transpose()
}

pub fn feasibility(args: FeasibilityArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let doc = args
        .spec
        .as_deref()
        .map(read_spec_file)
        .transpose()?
        .unwrap_or_default();
    let catalog = load_catalog(args.catalog.catalog.as_slice())?;

    let (platform_name, mut platform) = match (&args.platform, doc.platform) {
        (Some(name), _) => {
            let p = builtin_platform(name).ok_or_else(|| {
                CliError::Input(format!(
                    "unknown platform `{name}` (known: {})",
                    BUILTIN_PLATFORMS.join(", ")
                ))
            })?;
            (name.clone(), p)
        }
        (None, Some(p)) => ("spec-file".to_string(), p),
        (None, None) => ("si-spin".to_string(), PlatformSpec::si_spin()),
    };
    if let Some(t2) = opt_finite("t2", args.t2)? {
        platform.t2 = t2;
    }
    if let Some(s) = opt_finite("sensitivity", args.sensitivity)? {
        platform.sensitivity = s;
    }
    platform.validate()?;

    let mut tech = match &args.tech {
        Some(name) => match doc.technologies.iter().find(|t| &t.name == name) {
            Some(t) => t.clone(),
            None => lookup(&catalog, name)?,
        },
        None if doc.technologies.len() == 1 => doc.technologies[0].clone(),
        None if args.sigma_a.is_some() || args.sigma_t.is_some() => TechnologySpec {
            name: "custom".into(),
            sigma_a: 0.0,
            sigma_t: 0.0,
            bw_low: 0.0,
            bw_high: DEFAULT_BW_HIGH_HZ,
            notes: "given on the command line".into(),
        },
        None => {
            return Err(CliError::Input(
                "select a technology with --tech, a spec file, or --sigma-a/--sigma-t".into(),
            ))
        }
    };
    if let Some(v) = opt_finite("sigma-a", args.sigma_a)? {
        tech.sigma_a = v;
    }
    if let Some(v) = opt_finite("sigma-t", args.sigma_t)? {
        tech.sigma_t = v;
    }
    if let Some(v) = opt_finite("bw-low", args.bw_low)? {
        tech.bw_low = v;
    }
    if let Some(v) = opt_finite("bw-high", args.bw_high)? {
        tech.bw_high = v;
    }
    tech.validate()?;

    let epsilon = args
        .epsilon
        .or(doc.threshold.map(Threshold::epsilon))
        .unwrap_or(DEFAULT_EPSILON);
    let eps = Threshold::new(epsilon)?;
    let options = FeasibilityOptions {
        strict_bandwidth: args.strict_bandwidth,
    };
    let report = feasibility_with(&platform, &tech, eps, options);

    let text = feasibility_text(&platform_name, &platform, &tech, &report);
    let document = json!({
        "platform": {
            "name": platform_name,
            "t2_seconds": platform.t2,
            "sensitivity": platform.sensitivity,
        },
        "technology": technology_json(&tech, None),
        "epsilon": epsilon,
        "report": report,
    });
    let json_text = serde_json::to_string_pretty(&document).map_err(CliError::internal)? + "\n";

    match args.format {
        Format::Text => print!("{text}"),
        Format::Json => print!("{json_text}"),
    }

    if let Some(dir) = &args.out_dir {
        let txt = dir.join("feasibility.txt");
        let js = dir.join("feasibility.json");
        write_file(&txt, &text)?;
        write_file(&js, &json_text)?;
        let manifest = RunManifest::new(
            "feasibility",
            json!({
                "platform": document["platform"],
                "technology": document["technology"],
                "epsilon": epsilon,
                "strict_bandwidth": args.strict_bandwidth,
                "spec_file": args.spec,
                "catalog_file": args.catalog.catalog,
            }),
            json!({ "epsilon": DEFAULT_EPSILON, "platform": "si-spin" }),
            None,
        );
        manifest.finish(vec![txt, js], started.elapsed(), &dir.join("manifest.json"))?;
    }
    Ok(())
}

fn technology_json(t: &TechnologySpec, source: Option<&str>) -> serde_json::Value {
    let mut v = json!({
        "name": t.name,
        "sigma_a": t.sigma_a,
        "sigma_t_seconds": t.sigma_t,
        "bw_low_hz": t.bw_low,
        "bw_high_hz": t.bw_high,
        "notes": t.notes,
    });
    if let Some(s) = source {
        v["source"] = json!(s);
    }
    v
}

fn feasibility_text(
    name: &str,
    platform: &PlatformSpec,
    tech: &TechnologySpec,
    r: &FeasibilityReport,
) -> String {
    let opt = |x: Option<f64>| x.map_or_else(|| "-".to_string(), sci3);
    let verdict = if r.feasible { "FEASIBLE" } else { "INFEASIBLE" };
    let (lo, hi) = r
        .t_window
        .map_or(("-".to_string(), "-".to_string()), |(a, b)| {
            (sci3(a), sci3(b))
        });

    let mut out = format!(
        "verdict: {verdict}\nplatform: {name}\ntechnology: {}\nepsilon: {}\n\n",
        tech.name,
        sci3(r.epsilon)
    );
    let rows = vec![
        vec!["T2".into(), sci3(platform.t2), "s".into()],
        vec![
            "sensitivity".into(),
            sci3(platform.sensitivity),
            "dimensionless".into(),
        ],
        vec!["sigma_a".into(), sci3(tech.sigma_a), "dimensionless".into()],
        vec!["sigma_t".into(), sci3(tech.sigma_t), "s".into()],
        vec![
            "amplitude_error (s*sigma_a)".into(),
            sci3(r.amplitude_error),
            "dimensionless".into(),
        ],
        vec!["T_max (eps*T2)".into(), sci3(r.t_max), "s".into()],
        vec![
            "T_min (sigma_t/(eps-s*sigma_a))".into(),
            opt(r.t_min),
            "s".into(),
        ],
        vec![
            "T_min jitter only (sigma_t/eps)".into(),
            sci3(r.t_min_jitter_only),
            "s".into(),
        ],
        vec!["window_low".into(), lo, "s".into()],
        vec!["window_high".into(), hi, "s".into()],
        vec![
            "required_bandwidth (1/T_max)".into(),
            sci3(r.required_bandwidth),
            "Hz".into(),
        ],
        vec![
            "required_bandwidth (1/T_min)".into(),
            opt(r.required_bandwidth_at_t_min),
            "Hz".into(),
        ],
        vec![
            "technology_bandwidth".into(),
            sci3(r.technology_bandwidth),
            "Hz".into(),
        ],
    ];
    out.push_str(&table(&["quantity", "value", "unit"], &rows));
    out.push('\n');

    use exchange_budget::budget::Constraint::*;
    let rows: Vec<Vec<String>> = [Amplitude, Jitter, Decoherence, Bandwidth]
        .into_iter()
        .map(|c| {
            let limiting = match r.limiting_constraints.iter().position(|&l| l == c) {
                Some(0) => "yes (primary)",
                Some(_) => "yes",
                None => "no",
            };
            vec![
                c.to_string(),
                limiting.to_string(),
                format!("{:.1e}", r.improvement_factors.get(c)),
            ]
        })
        .collect();
    out.push_str(&table(
        &["constraint", "limiting", "improvement_factor"],
        &rows,
    ));
    if !r.bandwidth_ok {
        out.push_str(&format!(
            "\nnote: 1/T_max = {} Hz exceeds the technology bandwidth{}\n",
            sci3(r.required_bandwidth),
            if r.strict_bandwidth {
                ""
            } else {
                " (not enforced; use --strict-bandwidth)"
            }
        ));
    }
    out
}

pub fn gate(args: GateArgs) -> Result<(), CliError> {
    let alpha = finite("alpha", args.alpha)?;
    let theta = ExchangePhase::for_swap_power(alpha)?;
    let (exact, first_order) = match args.phase_error {
        Some(pe) => {
            let pe = finite("phase-error", pe)?;
            (pe, pe)
        }
        None => {
            let e = relative_error_to_phase_error(
                theta,
                finite("dj", args.dj.unwrap_or(0.0))?,
                finite("dt", args.dt.unwrap_or(0.0))?,
            )?;
            (e.exact, e.first_order)
        }
    };
    let target = swap_power_target(alpha)?;
    let infidelity = gate_error_vs_phase(exact);
    let leading = gate_error_leading_order(exact);
    let avg_infidelity = 0.8 * infidelity;

    match args.format {
        Format::Json => {
            let m = target.matrix();
            let matrix: Vec<Vec<[f64; 2]>> = (0..4)
                .map(|r| (0..4).map(|c| [m.get(r, c).re, m.get(r, c).im]).collect())
                .collect();
            let doc = json!({
                "alpha": alpha,
                "theta_rad": theta.value(),
                "pulse_area_rad": 2.0 * theta.value(),
                "target_matrix_re_im": matrix,
                "delta_theta_exact_rad": exact,
                "delta_theta_first_order_rad": first_order,
                "process_infidelity": infidelity,
                "process_infidelity_leading_order": leading,
                "average_gate_infidelity": avg_infidelity,
            });
            println!(
                "{}",
                serde_json::to_string_pretty(&doc).map_err(CliError::internal)?
            );
        }
        Format::Text => {
            println!("target: SWAP^{alpha} = P_triplet + exp(i*pi*{alpha}) P_singlet");
            let m = target.matrix();
            for r in 0..4 {
                let row: Vec<String> = (0..4)
                    .map(|c| {
                        let z = m.get(r, c);
                        format!("{:+.6}{:+.6}i", z.re, z.im)
                    })
                    .collect();
                println!("  {}", row.join("  "));
            }
            println!();
            let e = |x: f64| format!("{x:.6e}");
            let rows = vec![
                vec!["theta (pi*alpha)".into(), e(theta.value()), "rad".into()],
                vec![
                    "pulse area J*T/hbar (2*pi*alpha)".into(),
                    e(2.0 * PI * alpha),
                    "rad".into(),
                ],
                vec!["delta_theta exact".into(), e(exact), "rad".into()],
                vec![
                    "delta_theta first order".into(),
                    e(first_order),
                    "rad".into(),
                ],
                vec![
                    "process infidelity".into(),
                    e(infidelity),
                    "dimensionless".into(),
                ],
                vec![
                    "process infidelity (3/16)dtheta^2".into(),
                    e(leading),
                    "dimensionless".into(),
                ],
                vec![
                    "average gate infidelity".into(),
                    e(avg_infidelity),
                    "dimensionless".into(),
                ],
            ];
            print!("{}", table(&["quantity", "value", "unit"], &rows));
        }
    }
    Ok(())
}

struct McSetup {
    config: McConfig,
    workers: usize,
    params: serde_json::Value,
}

fn mc_setup(p: &McParams) -> Result<McSetup, CliError> {
    let catalog = load_catalog(p.catalog.catalog.as_slice())?;
    let tech = p.tech.as_deref().map(|n| lookup(&catalog, n)).transpose()?;
    let sigma_a = finite(
        "sigma-a",
        p.sigma_a
            .or(tech.as_ref().map(|t| t.sigma_a))
            .unwrap_or(0.0),
    )?;
    let sigma_t = finite(
        "sigma-t",
        p.sigma_t
            .or(tech.as_ref().map(|t| t.sigma_t))
            .unwrap_or(0.0),
    )?;
    let distribution: NoiseDistribution = p.distribution.parse()?;
    let reject_policy = match p.reject_policy.as_str() {
        "resample" => RejectPolicy::Resample,
        "discard" => RejectPolicy::Discard,
        other => {
            return Err(CliError::Input(format!(
                "unknown reject policy `{other}` (expected resample|discard)"
            )))
        }
    };
    if p.workers == 0 {
        return Err(CliError::Input("--workers must be >= 1".into()));
    }
    let alpha = finite("alpha", p.alpha)?;
    let j = finite("j-rad-s", p.j_rad_s)?;
    let nominal = match opt_finite("duration", p.duration)? {
        Some(t) => PulseSpec::constant(j, t)?,
        None => PulseSpec::for_swap_power(alpha, j)
            .map_err(|e| CliError::Input(format!("{e}; pass --duration for alpha <= 0")))?,
    };
    let dephasing = opt_finite("t2", p.t2)?
        .map(DephasingSpec::uniform)
        .transpose()?;
    let noise = ControlNoiseSpec::broadband(sigma_a, sigma_t, distribution)?;
    let config = McConfig {
        n_samples: p.n,
        seed: p.seed,
        target_alpha: alpha,
        nominal,
        noise,
        dephasing,
        sensitivity: finite("sensitivity", p.sensitivity)?,
        reject_policy,
    };
    config.validate()?;
    let params = json!({
        "alpha": alpha,
        "j_rad_s": j,
        "duration_seconds": config.nominal.duration(),
        "technology": p.tech,
        "sigma_a": sigma_a,
        "sigma_t_seconds": sigma_t,
        "distribution": distribution,
        "t2_seconds": p.t2,
        "sensitivity": config.sensitivity,
        "n_samples": p.n,
        "seed": p.seed,
        "workers": p.workers,
        "reject_policy": reject_policy,
    });
    Ok(McSetup {
        config,
        workers: p.workers,
        params,
    })
}

fn mc_defaults() -> serde_json::Value {
    json!({
        "epsilon": DEFAULT_EPSILON,
        "alpha": 0.5,
        "j_rad_s": crate::args::DEFAULT_J_RAD_S,
        "n_samples": 100_000,
        "seed": 0,
        "distribution": "gaussian",
        "reject_policy": "resample",
        "sensitivity": 1.0,
    })
}

fn emit_rows(
    command: &str,
    mut params: serde_json::Value,
    setup: &McSetup,
    rows: &[SweepRow],
    output: Option<&Path>,
    started: Instant,
) -> Result<(), CliError> {
    let csv = sweep_csv(rows, setup.config.seed);
    match output {
        None => print!("{csv}"),
        Some(path) => {
            write_file(path, &csv)?;
            if let (Some(obj), Some(extra)) = (params.as_object_mut(), setup.params.as_object()) {
                for (k, v) in extra {
                    obj.entry(k.clone()).or_insert(v.clone());
                }
            }
            let mut manifest =
                RunManifest::new(command, params, mc_defaults(), Some(setup.config.seed));
            manifest.diagnostics = Some(json!(rows
                .iter()
                .map(|r| json!({
                    "axis_value": r.value,
                    "min": r.result.min,
                    "max": r.result.max,
                    "n_rejected": r.result.n_rejected,
                    "n_resampled": r.result.n_resampled,
                    "histogram_log10_bins_from_1e-16": r.result.histogram.counts,
                }))
                .collect::<Vec<_>>()));
            manifest.finish(
                vec![path.to_path_buf()],
                started.elapsed(),
                &manifest_path_for(path),
            )?;
            for r in rows {
                println!(
                    "{} = {:e}: mean infidelity {:.4e} +/- {:.2e} (analytic {:.4e}, n = {})",
                    command_axis(command),
                    r.value,
                    r.result.mean_infidelity,
                    r.result.stderr,
                    r.analytic_prediction,
                    r.result.n_samples
                );
            }
        }
    }
    Ok(())
}

fn command_axis(command: &str) -> &str {
    if command == "mc" {
        "sigma_a"
    } else {
        "axis_value"
    }
}

pub fn mc(args: McArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let setup = mc_setup(&args.params)?;
    // a single run is the one-point sweep over its own sigma_a
    let rows = montecarlo::sweep(
        &setup.config,
        SweepAxis::SigmaA,
        &[setup.config.noise.sigma_a],
        setup.workers,
    )?;
    emit_rows(
        "mc",
        json!({ "axis": "sigma_a" }),
        &setup,
        &rows,
        args.params.output.as_deref(),
        started,
    )
}

pub fn sweep(args: SweepArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let axis: SweepAxis = args.axis.parse()?;
    let values =
        parse_value_list(&args.values).map_err(|e| CliError::Input(format!("--values: {e}")))?;
    let setup = mc_setup(&args.params)?;
    let rows = montecarlo::sweep(&setup.config, axis, &values, setup.workers)?;
    emit_rows(
        "sweep",
        json!({ "axis": axis.name(), "values": values }),
        &setup,
        &rows,
        args.params.output.as_deref(),
        started,
    )
}

pub fn catalog(args: CatalogArgs) -> Result<(), CliError> {
    let files: Vec<PathBuf> = args.env_catalog.into_iter().chain(args.file).collect();
    let catalog = load_catalog(&files)?;
    match args.format {
        Format::Json => {
            let entries: Vec<_> = catalog
                .iter()
                .map(|e| technology_json(&e.tech, Some(&e.source)))
                .collect();
            println!(
                "{}",
                serde_json::to_string_pretty(&entries).map_err(CliError::internal)?
            );
        }
        Format::Text => {
            let rows: Vec<Vec<String>> = catalog
                .iter()
                .map(|e| {
                    vec![
                        e.tech.name.clone(),
                        sci3(e.tech.sigma_a),
                        sci3(e.tech.sigma_t),
                        sci3(e.tech.bw_low),
                        sci3(e.tech.bw_high),
                        e.source.clone(),
                    ]
                })
                .collect();
            print!(
                "{}",
                table(
                    &[
                        "name",
                        "sigma_a",
                        "sigma_t_s",
                        "bw_low_hz",
                        "bw_high_hz",
                        "source"
                    ],
                    &rows
                )
            );
            println!();
            for e in &catalog {
                if !e.tech.notes.is_empty() {
                    println!("{}: {}", e.tech.name, e.tech.notes);
                }
            }
        }
    }
    Ok(())
}
