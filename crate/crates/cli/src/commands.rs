//! Subcommand implementations. Each returns the process exit code on the
//! success path; errors bubble up and are mapped to codes in `exit_code`.

use std::ops::Range;
use std::path::{Path, PathBuf};

use chevron::fit::fit_chevron;
use chevron::profile::{fit_window, read_profile, write_profile, DimensionlessProfile, Profile};
use chevron::relation::{
    cross_section, fit_b_vs_inv_beta, select_constant_re_band, StationRecord,
};
use chevron::similarity::{
    invert_wall_law, lookup_linear, parse_pressure_series, parse_ustar_table, pressure_gradient,
    similarity_parameter, smooth_cp, PressureParameter, WallLawParams,
};
use chevron::synth::{generate, truth_headers, SyntheticSpec};
use chevron::{Error, Result};

use crate::args::{Cli, Command, Format, GlobalOpts};
use crate::plot;
use crate::records::{load_records, save_records, RecordsFile, RunConfig};
use crate::render;

/// Exit code contract: 0 success, 2 input or usage error, 3 analysis
/// failure on structurally valid input.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_)
        | Error::Parse(_)
        | Error::ParseAt { .. }
        | Error::InvalidSpec(_)
        | Error::TooFewSamples { .. }
        | Error::NonMonotoneWallDistance { .. }
        | Error::NonMonotoneX { .. }
        | Error::MixedGradientSeries
        | Error::TooFewRelationPoints { .. }
        | Error::EmptyBand { .. } => 2,
        Error::InsufficientIntermediateRegion { .. }
        | Error::RangeTooSmall { .. }
        | Error::ZeroVarianceAbscissa
        | Error::PrefactorBelowLogFloor { .. }
        | Error::NonPositiveAlpha { .. }
        | Error::NonPositiveLnRe(_)
        | Error::ParallelSegments => 3,
    }
}

pub struct StationAnalysis {
    pub record: StationRecord,
    pub profile: DimensionlessProfile,
    pub window: Range<usize>,
}

/// Full single-station pipeline: read, nondimensionalize, window, chevron
/// fit, wall-law inversion. Inversion failure is not fatal: the fit stands
/// on its own and the similarity columns render as absent.
pub fn analyze_station(path: &Path, cfg: &RunConfig) -> Result<StationAnalysis> {
    let profile = read_profile(path)?.into_dimensionless();
    let window = fit_window(&profile, &cfg.window)?;
    let fit = fit_chevron(&profile, window.clone(), &cfg.break_cfg)?;
    let sim = invert_wall_law(&WallLawParams {
        a: fit.segment1.coeff,
        alpha: fit.segment1.exponent,
    })
    .ok();
    let record = StationRecord { meta: profile.meta.clone(), fit, sim, p: None };
    Ok(StationAnalysis { record, profile, window })
}

pub fn run(cli: &Cli) -> Result<i32> {
    let cfg = RunConfig::from(&cli.opts);
    match &cli.command {
        Command::Analyze { profile } => cmd_analyze(profile, &cfg, &cli.opts),
        Command::Batch { manifest, records_out } => {
            cmd_batch(manifest, records_out.as_deref(), &cfg, &cli.opts)
        }
        Command::Pressure { cp, ustar, records, records_out } => cmd_pressure(
            cp,
            ustar.as_deref(),
            records,
            records_out.as_deref(),
            &cli.opts,
        ),
        Command::Relation { records } => cmd_relation(records, &cli.opts),
        Command::Synth {
            spec,
            ln_re_lambda,
            beta,
            break_eta,
            eta_range,
            n_points,
            noise_sigma,
            stations,
            out_dir,
        } => {
            let mut s = match spec {
                Some(path) => load_spec(path)?,
                None => SyntheticSpec::default(),
            };
            override_spec(
                &mut s,
                *ln_re_lambda,
                *beta,
                *break_eta,
                eta_range.as_deref(),
                *n_points,
                *noise_sigma,
                cli.opts.seed,
            )?;
            cmd_synth(&s, *stations, out_dir, &cli.opts)
        }
        Command::Report { records } => cmd_report(records, &cli.opts),
    }
}

fn print_records(config: &RunConfig, records: &[StationRecord], format: Format) {
    match format {
        Format::Table => {
            print!("{}", render::render_station_table(records));
            if let Some(block) = render::render_pressure_block(records) {
                println!();
                print!("{block}");
            }
        }
        Format::Csv => print!("{}", render::render_station_csv(records)),
        Format::Json => print!("{}", render::render_station_json(config, records)),
    }
}

fn cmd_analyze(path: &Path, cfg: &RunConfig, opts: &GlobalOpts) -> Result<i32> {
    let analysis = analyze_station(path, cfg)?;
    if let Some(dir) = &opts.plot_dir {
        write_station_plots(dir, &analysis)?;
    }
    print_records(cfg, std::slice::from_ref(&analysis.record), opts.format);
    Ok(0)
}

/// Manifest: one profile path per line, relative to the manifest's
/// directory, `#` comments and blank lines skipped.
fn read_manifest(path: &Path) -> Result<Vec<PathBuf>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let base = path.parent().unwrap_or(Path::new("."));
    let entries: Vec<PathBuf> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| base.join(l))
        .collect();
    if entries.is_empty() {
        return Err(Error::Parse(format!("empty manifest: {}", path.display())));
    }
    Ok(entries)
}

fn cmd_batch(
    manifest: &Path,
    records_out: Option<&Path>,
    cfg: &RunConfig,
    opts: &GlobalOpts,
) -> Result<i32> {
    let paths = read_manifest(manifest)?;
    let total = paths.len();
    let mut records = Vec::new();
    for path in &paths {
        match analyze_station(path, cfg) {
            Ok(analysis) => {
                if let Some(dir) = &opts.plot_dir {
                    write_station_plots(dir, &analysis)?;
                }
                records.push(analysis.record);
            }
            Err(e) => eprintln!("station {}: {e}", path.display()),
        }
    }
    if records.is_empty() {
        eprintln!("all {total} stations failed");
        return Ok(3);
    }
    if let Some(out) = records_out {
        save_records(out, &RecordsFile { config: cfg.clone(), records: records.clone() })?;
    }
    print_records(cfg, &records, opts.format);
    Ok(0)
}

fn cmd_pressure(
    cp_path: &Path,
    ustar_path: Option<&Path>,
    records_path: &Path,
    records_out: Option<&Path>,
    opts: &GlobalOpts,
) -> Result<i32> {
    let mut file = load_records(records_path)?;
    file.config.smooth_window = opts.smooth_window;
    let cp_text = std::fs::read_to_string(cp_path)
        .map_err(|e| Error::Parse(format!("{}: {e}", cp_path.display())))?;
    let series = parse_pressure_series(&cp_text)
        .map_err(|e| Error::Parse(format!("{}: {e}", cp_path.display())))?;
    let series = smooth_cp(&series, opts.smooth_window);
    let gradient = pressure_gradient(&series);
    let ustar_table = match ustar_path {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?;
            Some(parse_ustar_table(&text).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?)
        }
        None => None,
    };
    const JOIN_TOL: f64 = 1e-6;
    for r in &mut file.records {
        let x = r.meta.x;
        let Some(dcp_dx) = lookup_linear(&gradient, x, JOIN_TOL) else {
            eprintln!(
                "station {}: x = {x} outside the C_p series coverage, P not computed",
                r.meta.station_id
            );
            continue;
        };
        let u_star = ustar_table
            .as_deref()
            .and_then(|t| lookup_linear(t, x, JOIN_TOL))
            .or(r.meta.u_star);
        let Some(u_star) = u_star else {
            eprintln!(
                "station {}: no u_star in table or profile headers, P not computed",
                r.meta.station_id
            );
            continue;
        };
        let p = similarity_parameter(dcp_dx, series.u_ext, u_star, series.nu);
        r.p = Some(PressureParameter { x, p, dcp_dx });
    }
    if let Some(out) = records_out {
        save_records(out, &file)?;
    }
    print_records(&file.config, &file.records, opts.format);
    Ok(0)
}

fn cmd_relation(records_path: &Path, opts: &GlobalOpts) -> Result<i32> {
    let mut file = load_records(records_path)?;
    file.config.re_band_tol = opts.re_band_tol;
    let (indices, band) = select_constant_re_band(&file.records, opts.re_band_tol)?;
    let selected: Vec<StationRecord> =
        indices.iter().map(|&i| file.records[i].clone()).collect();
    let fit = fit_b_vs_inv_beta(&selected)?;
    let report = render::RelationReport {
        config: &file.config,
        selection_band: band,
        selected_stations: selected.len(),
        relation: &fit,
    };
    if let Some(dir) = &opts.plot_dir {
        write_relation_plots(dir, &fit, &selected)?;
    }
    match opts.format {
        Format::Table => print!("{}", render::render_relation_table(&report)),
        Format::Csv => print!("{}", render::render_relation_csv(&report)),
        Format::Json => print!("{}", render::render_relation_json(&report)),
    }
    Ok(0)
}

fn load_spec(path: &Path) -> Result<SyntheticSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| Error::InvalidSpec(format!("{}: {e}", path.display())))
}

#[allow(clippy::too_many_arguments)]
fn override_spec(
    s: &mut SyntheticSpec,
    ln_re_lambda: Option<f64>,
    beta: Option<f64>,
    break_eta: Option<f64>,
    eta_range: Option<&str>,
    n_points: Option<usize>,
    noise_sigma: Option<f64>,
    seed: Option<u64>,
) -> Result<()> {
    if let Some(v) = ln_re_lambda {
        s.ln_re_lambda = v;
    }
    if let Some(v) = beta {
        s.beta = v;
    }
    if let Some(v) = break_eta {
        s.break_eta = v;
    }
    if let Some(r) = eta_range {
        let parts: Vec<&str> = r.split(':').collect();
        let parsed: Option<(f64, f64)> = match parts.as_slice() {
            [lo, hi] => lo.parse().ok().zip(hi.parse().ok()),
            _ => None,
        };
        s.eta_range = parsed
            .ok_or_else(|| Error::InvalidSpec(format!("eta_range must be LO:HI, got {r:?}")))?;
    }
    if let Some(v) = n_points {
        s.n_points = v;
    }
    if let Some(v) = noise_sigma {
        s.noise_sigma = v;
    }
    if let Some(v) = seed {
        s.seed = v;
    }
    Ok(())
}

fn cmd_synth(
    base: &SyntheticSpec,
    stations: usize,
    out_dir: &Path,
    opts: &GlobalOpts,
) -> Result<i32> {
    if stations == 0 {
        return Err(Error::InvalidSpec("stations must be at least 1".into()));
    }
    std::fs::create_dir_all(out_dir)?;
    let mut summary = Vec::new();
    let mut manifest = String::new();
    for i in 0..stations {
        let spec = SyntheticSpec { seed: base.seed + i as u64, ..base.clone() };
        let (mut profile, truth) = generate(&spec)?;
        let station_id = format!("s{:02}", i + 1);
        profile.meta.station_id = station_id.clone();
        profile.meta.x = (i + 1) as f64;
        let file_name = format!("{station_id}.profile");
        let text = write_profile(&Profile::Dimensionless(profile), &truth_headers(&truth));
        std::fs::write(out_dir.join(&file_name), text)?;
        manifest.push_str(&file_name);
        manifest.push('\n');
        summary.push(render::SynthStation { station_id, file: file_name, seed: spec.seed, truth });
    }
    std::fs::write(out_dir.join("manifest.txt"), manifest)?;
    match opts.format {
        Format::Table => print!("{}", render::render_synth_table(&summary)),
        Format::Csv => print!("{}", render::render_synth_csv(&summary)),
        Format::Json => print!("{}", render::render_synth_json(&summary)),
    }
    Ok(0)
}

fn cmd_report(records_path: &Path, opts: &GlobalOpts) -> Result<i32> {
    let file = load_records(records_path)?;
    print_records(&file.config, &file.records, opts.format);
    Ok(0)
}

fn safe_name(id: &str) -> String {
    id.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}

/// Per-station plot data in (lg eta, lg phi) coordinates: the measured
/// samples and the fitted broken line over the fit window.
fn write_station_plots(dir: &Path, analysis: &StationAnalysis) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let id = safe_name(&analysis.record.meta.station_id);
    let p = &analysis.profile;
    let samples: Vec<(f64, f64)> =
        (0..p.len()).map(|i| (p.eta(i).log10(), p.phi(i).log10())).collect();
    plot::write_xy_dat(
        &dir.join(format!("{id}_profile.dat")),
        &["lg_eta lg_phi".into()],
        &samples,
    )?;
    let fit = &analysis.record.fit;
    let lg_at = |seg: &chevron::fit::SegmentFit, eta: f64| {
        seg.coeff.log10() + seg.exponent * eta.log10()
    };
    let win = &analysis.window;
    let mut line = Vec::new();
    let eta_start = p.eta(win.start);
    let eta_end = p.eta(win.end - 1);
    match (&fit.segment2, fit.break_index) {
        (Some(s2), Some(b)) => {
            let eta_break = p.eta(b);
            line.push((eta_start.log10(), lg_at(&fit.segment1, eta_start)));
            line.push((eta_break.log10(), lg_at(&fit.segment1, eta_break)));
            line.push((eta_break.log10(), lg_at(s2, eta_break)));
            line.push((eta_end.log10(), lg_at(s2, eta_end)));
        }
        _ => {
            line.push((eta_start.log10(), lg_at(&fit.segment1, eta_start)));
            line.push((eta_end.log10(), lg_at(&fit.segment1, eta_end)));
        }
    }
    plot::write_xy_dat(&dir.join(format!("{id}_fit.dat")), &["lg_eta lg_phi".into()], &line)?;
    plot::write_svg_scatter(
        &dir.join(format!("{id}.svg")),
        &format!("station {id}"),
        "lg eta",
        "lg phi",
        &samples,
        &line,
    )
}

fn write_relation_plots(
    dir: &Path,
    fit: &chevron::relation::RelationFit,
    selected: &[StationRecord],
) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let points: Vec<(f64, f64)> = fit.points.iter().map(|p| (p.inv_beta, p.b)).collect();
    plot::write_xy_dat(&dir.join("b_vs_inv_beta.dat"), &["inv_beta B".into()], &points)?;
    let (lo, hi) = points
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(x, _)| (lo.min(x), hi.max(x)));
    let pad = 0.05 * (hi - lo).max(1e-9);
    let (lo, hi) = (lo - pad, hi + pad);
    let line: Vec<(f64, f64)> = (0..50)
        .map(|i| {
            let x = lo + (hi - lo) * i as f64 / 49.0;
            (x, fit.predict(x))
        })
        .collect();
    plot::write_xy_dat(
        &dir.join("b_vs_inv_beta_line.dat"),
        &[format!("B = {} * inv_beta + {}", fit.slope, fit.intercept)],
        &line,
    )?;
    plot::write_svg_scatter(
        &dir.join("b_vs_inv_beta.svg"),
        "B against 1/beta",
        "1/beta",
        "B",
        &points,
        &line,
    )?;
    let (beta_vs_p, b_vs_p) = cross_section(selected);
    if !beta_vs_p.is_empty() {
        plot::write_xy_dat(&dir.join("cross_section_beta.dat"), &["P beta".into()], &beta_vs_p)?;
        plot::write_xy_dat(&dir.join("cross_section_b.dat"), &["P B".into()], &b_vs_p)?;
        plot::write_svg_scatter(
            &dir.join("cross_section_beta.svg"),
            "beta against P",
            "P",
            "beta",
            &beta_vs_p,
            &[],
        )?;
        plot::write_svg_scatter(
            &dir.join("cross_section_b.svg"),
            "B against P",
            "P",
            "B",
            &b_vs_p,
            &[],
        )?;
    }
    Ok(())
}
