// SPDX-License-Identifier: Apache-2.0

//! `pufage`: simulate SRAM PUF devices, enroll aging-sensitive responses,
//! plan response lengths and classify devices as new or recycled.
//!
//! Exit codes: 0 success or "new", 3 "recycled", 1 error, 2 usage error.

pub mod config;
pub mod pipeline;
pub mod reference;
pub mod units;

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context};
use chrono::{DateTime, Utc};
use clap::{Args, Parser, Subcommand, ValueEnum};
use pufage_core::agingmodel::acceleration_factor;
use pufage_core::asr::{characterize, detect_device, enroll, EnrollmentProfile, EstimateSource};
use pufage_core::bitcore::ReadoutSet;
use pufage_core::dataio::{read_profile, read_readouts, write_profile};
use pufage_core::detection::{far, frr, minimal_n, plan_table, render_csv, render_text, PlanCell, Verdict};
use pufage_core::{ErrorModel, StressProfile};

use crate::config::RunConfig;
use crate::reference::{PublishedCell, PUBLISHED_AF, TABLE_1, TABLE_2, TABLE_2_P_INTRA, TARGETS};
use crate::units::Kelvin;

pub const EXIT_OK: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_RECYCLED: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "pufage",
    version,
    about = "Recycled SoC detection from SRAM PUF aging"
)]
pub struct Cli {
    /// Run configuration (TOML). Flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate a device: pre-aging readouts, oven aging, post-aging readouts.
    Simulate(SimulateArgs),
    /// Select aging-sensitive responses and write an enrollment profile.
    Enroll(EnrollArgs),
    /// Estimate p_inter for a profile from post-aging readouts.
    Characterize(CharacterizeArgs),
    /// Minimal response length and threshold for target error rates.
    Plan(PlanArgs),
    /// Classify a probe readout against an enrolled profile.
    Detect(DetectArgs),
    /// Acceleration factor of an oven bake.
    Af(AfArgs),
    /// Recompute the detection-capability tables.
    Tables(TablesArgs),
    /// Print the effective run configuration.
    Config,
}

#[derive(Debug, Clone, Copy, Default, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Csv,
}

fn parse_datetime(s: &str) -> Result<DateTime<Utc>, String> {
    DateTime::parse_from_rfc3339(s)
        .map(|d| d.with_timezone(&Utc))
        .map_err(|e| format!("{e} (expected RFC 3339, e.g. 2024-05-01T12:00:00Z)"))
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub cells: Option<usize>,
    /// Oven hours.
    #[arg(long)]
    pub age_hours: Option<f64>,
    /// Pre-aging corners, e.g. 25C,80C.
    #[arg(long, value_delimiter = ',')]
    pub temps: Option<Vec<Kelvin>>,
    /// Pre-aging readouts per corner.
    #[arg(long)]
    pub repeats: Option<usize>,
    /// Extra RT readouts for an out-of-sample p_intra.
    #[arg(long)]
    pub held_out: Option<usize>,
    #[arg(long)]
    pub post_repeats: Option<usize>,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    #[arg(long, conflicts_with = "literal_af")]
    pub af_override: Option<f64>,
    /// Age with the closed-form acceleration factor.
    #[arg(long)]
    pub literal_af: bool,
}

#[derive(Debug, Args)]
pub struct EnrollArgs {
    #[arg(long)]
    pub rt: PathBuf,
    #[arg(long)]
    pub ht: PathBuf,
    /// RT readouts not used for selection, for an out-of-sample p_intra.
    #[arg(long)]
    pub held_out: Option<PathBuf>,
    /// Re-evaluations per temperature; the first N readouts of each file.
    #[arg(short = 'N')]
    pub n: Option<usize>,
    #[arg(long, short)]
    pub out: PathBuf,
    #[arg(long, value_parser = parse_datetime)]
    pub created_at: Option<DateTime<Utc>>,
}

#[derive(Debug, Args)]
pub struct CharacterizeArgs {
    #[arg(long)]
    pub profile: PathBuf,
    /// Post-aging RT readouts.
    #[arg(long)]
    pub post: PathBuf,
    /// Defaults to overwriting the profile.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    #[arg(long, requires = "p_inter")]
    pub p_intra: Option<f64>,
    #[arg(long, requires = "p_intra")]
    pub p_inter: Option<f64>,
    /// Take the estimators from a characterized profile.
    #[arg(long, conflicts_with_all = ["p_intra", "paper_table_1"])]
    pub profile: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_values_t = TARGETS)]
    pub targets: Vec<f64>,
    /// All seven published estimator pairs.
    #[arg(long, conflicts_with = "p_intra")]
    pub paper_table_1: bool,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    #[arg(long)]
    pub profile: PathBuf,
    #[arg(long)]
    pub probe: PathBuf,
    /// Which readout of the probe file to classify.
    #[arg(long, default_value_t = 0)]
    pub readout: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub target_eer: f64,
}

#[derive(Debug, Args)]
pub struct AfArgs {
    #[arg(long)]
    pub t_stress: Option<Kelvin>,
    #[arg(long)]
    pub t_nominal: Option<Kelvin>,
    /// Millivolts.
    #[arg(long)]
    pub v_stress: Option<f64>,
    /// Millivolts.
    #[arg(long)]
    pub v_nominal: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub m: Option<f64>,
    /// Apparent activation energy, eV.
    #[arg(long, allow_hyphen_values = true)]
    pub eaa: Option<f64>,
    /// Boltzmann constant, eV/K.
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long, conflicts_with = "literal_af")]
    pub af_override: Option<f64>,
    #[arg(long)]
    pub literal_af: bool,
    #[arg(long)]
    pub stress_hours: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Source {
    /// Plan from the published estimators.
    PaperParams,
    /// Run the simulated pipeline and plan from measured estimators.
    Simulate,
}

#[derive(Debug, Args)]
pub struct TablesArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub table: u8,
    #[arg(long, group = "source")]
    pub paper_params: bool,
    #[arg(long, group = "source")]
    pub simulate: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub cells: Option<usize>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

/// Runs one command, writing its report to `out`; returns the exit code.
pub fn run(cli: Cli, out: &mut dyn Write) -> anyhow::Result<u8> {
    let cfg = RunConfig::load_or_default(cli.config.as_deref())?;
    let mut text = String::new();
    let code = match cli.command {
        Command::Simulate(a) => cmd_simulate(cfg, a, &mut text)?,
        Command::Enroll(a) => cmd_enroll(&cfg, a, &mut text)?,
        Command::Characterize(a) => cmd_characterize(a, &mut text)?,
        Command::Plan(a) => cmd_plan(a, &mut text)?,
        Command::Detect(a) => cmd_detect(a, &mut text)?,
        Command::Af(a) => cmd_af(&cfg, a, &mut text)?,
        Command::Tables(a) => cmd_tables(cfg, a, &mut text)?,
        Command::Config => {
            text.push_str(&cfg.to_toml()?);
            EXIT_OK
        }
    };
    out.write_all(text.as_bytes())?;
    Ok(code)
}

fn cmd_simulate(mut cfg: RunConfig, a: SimulateArgs, out: &mut String) -> anyhow::Result<u8> {
    if let Some(v) = a.seed {
        cfg.run.seed = v;
    }
    if let Some(v) = a.cells {
        cfg.run.cell_count = v;
    }
    if let Some(v) = a.age_hours {
        cfg.simulate.stress_hours = v;
    }
    if let Some(v) = a.temps {
        cfg.simulate.temps_k = v.into_iter().map(|k| k.0).collect();
    }
    if let Some(v) = a.repeats {
        cfg.simulate.repeats = v;
    }
    if let Some(v) = a.held_out {
        cfg.simulate.held_out = v;
    }
    if let Some(v) = a.post_repeats {
        cfg.simulate.post_repeats = v;
    }
    if let Some(v) = a.out {
        cfg.run.output_dir = v;
    }
    if let Some(v) = a.af_override {
        cfg.run.af_override = v;
        cfg.run.literal_af = false;
    }
    if a.literal_af {
        cfg.run.literal_af = true;
    }
    cfg.validate()?;
    let ds = pipeline::simulate(&cfg)?;
    let dir = cfg.run.output_dir.clone();
    let manifest = pipeline::write_dataset(&cfg, &ds, &dir)?;
    writeln!(out, "device {} ({} cells)", ds.fresh.id(), ds.fresh.cell_count())?;
    writeln!(
        out,
        "aged {} h at AF {} (closed form {:.6}): {:.2} effective hours = {:.2} days",
        cfg.simulate.stress_hours,
        ds.af,
        ds.literal_af,
        ds.aged.effective_age_h(),
        ds.aged.effective_age_h() / 24.0
    )?;
    for e in &manifest.entries {
        writeln!(
            out,
            "wrote {} ({}, {} K)",
            dir.join(&e.path).display(),
            e.role,
            e.temperature_k
        )?;
    }
    writeln!(out, "wrote {}", dir.join(pipeline::MANIFEST).display())?;
    Ok(EXIT_OK)
}

fn load_set(path: &std::path::Path) -> anyhow::Result<ReadoutSet> {
    let (set, _) = read_readouts(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(set)
}

fn first_readouts(set: ReadoutSet, n: usize, what: &str) -> anyhow::Result<ReadoutSet> {
    if n > set.len() {
        bail!("N = {n} exceeds the {} readouts in the {what} file", set.len());
    }
    Ok(set.prefix(n))
}

fn cmd_enroll(cfg: &RunConfig, a: EnrollArgs, out: &mut String) -> anyhow::Result<u8> {
    let (rt, id) = read_readouts(&a.rt).with_context(|| format!("reading {}", a.rt.display()))?;
    let ht = load_set(&a.ht)?;
    let n = a.n.unwrap_or(cfg.selection.n_reevals);
    let rt = first_readouts(rt, n, "RT")?;
    let ht = first_readouts(ht, n, "HT")?;
    let held = a.held_out.as_deref().map(load_set).transpose()?;
    let selection = pufage_core::SelectionConfig {
        n_reevals: n,
        rt_k: rt.meta().temperature_k(),
        ht_k: ht.meta().temperature_k(),
    };
    let created = a.created_at.unwrap_or(cfg.run.created_at);
    let profile = enroll(id, &rt, &ht, held.as_ref(), &selection, created)?;
    write_profile(&profile, &a.out)?;
    writeln!(out, "ASRs: {}", profile.asrs.len())?;
    let source = match profile.p_intra_source {
        EstimateSource::HeldOut => "held-out readouts",
        EstimateSource::Selection => "selection readouts, in sample",
    };
    writeln!(out, "p_intra_est: {:.4} ({source})", profile.p_intra_est)?;
    writeln!(out, "wrote {}", a.out.display())?;
    Ok(EXIT_OK)
}

fn cmd_characterize(a: CharacterizeArgs, out: &mut String) -> anyhow::Result<u8> {
    let profile = read_profile(&a.profile)?;
    let post = load_set(&a.post)?;
    let profile = characterize(&profile, &post)?;
    let dest = a.out.unwrap_or(a.profile);
    write_profile(&profile, &dest)?;
    let pe = profile.p_inter_est.expect("just characterized");
    writeln!(out, "p_intra_est: {:.4}", profile.p_intra_est)?;
    writeln!(out, "p_inter_est: {:.4}", pe)?;
    writeln!(out, "difference:  {:.4}", pe - profile.p_intra_est)?;
    writeln!(out, "wrote {}", dest.display())?;
    Ok(EXIT_OK)
}

fn render(cells: &[PlanCell], format: Format) -> String {
    match format {
        Format::Text => render_text(cells),
        Format::Csv => render_csv(cells),
    }
}

fn cmd_plan(a: PlanArgs, out: &mut String) -> anyhow::Result<u8> {
    let rows: Vec<(String, ErrorModel)> = if a.paper_table_1 {
        TABLE_1
            .iter()
            .map(|r| {
                Ok((
                    format!("N={}", r.n_reevals),
                    ErrorModel::new(r.p_intra, r.p_inter)?,
                ))
            })
            .collect::<anyhow::Result<_>>()?
    } else if let Some(path) = &a.profile {
        let profile = read_profile(path)?;
        vec![(profile.device_id.to_string(), profile.error_model()?)]
    } else {
        let (Some(pi), Some(pe)) = (a.p_intra, a.p_inter) else {
            bail!("give --p-intra and --p-inter, --profile, or --paper-table-1");
        };
        let model = ErrorModel::new(pi, pe)?;
        model.ensure_separable()?;
        vec![("custom".to_string(), model)]
    };
    out.push_str(&render(&plan_table(&rows, &a.targets), a.format));
    Ok(EXIT_OK)
}

fn cmd_detect(a: DetectArgs, out: &mut String) -> anyhow::Result<u8> {
    let profile = read_profile(&a.profile)?;
    let probe_set = load_set(&a.probe)?;
    if a.readout >= probe_set.len() {
        bail!(
            "probe file has {} readouts, asked for index {}",
            probe_set.len(),
            a.readout
        );
    }
    let probe = &probe_set.readouts()[a.readout];
    let plan = minimal_n(&profile.error_model()?, a.target_eer)?;
    let c = detect_device(&profile, probe, &plan)?;
    writeln!(out, "verdict: {}", c.verdict)?;
    writeln!(out, "hd: {}", c.hd)?;
    writeln!(out, "n: {}", c.n)?;
    writeln!(out, "n_th: {}", c.n_th)?;
    writeln!(out, "P(fresh distance >= hd): {:.3e}", c.fresh_tail)?;
    writeln!(out, "P(aged distance <= hd): {:.3e}", c.aged_tail)?;
    Ok(match c.verdict {
        Verdict::New => EXIT_OK,
        Verdict::Recycled => EXIT_RECYCLED,
    })
}

fn cmd_af(cfg: &RunConfig, a: AfArgs, out: &mut String) -> anyhow::Result<u8> {
    let mut p = cfg.stress;
    if let Some(v) = a.t_stress {
        p.t_stress_k = v.0;
    }
    if let Some(v) = a.t_nominal {
        p.t_nominal_k = v.0;
    }
    if let Some(v) = a.v_stress {
        p.v_stress_mv = v;
    }
    if let Some(v) = a.v_nominal {
        p.v_nominal_mv = v;
    }
    if let Some(v) = a.alpha {
        p.alpha = v;
    }
    if let Some(v) = a.m {
        p.m = v;
    }
    if let Some(v) = a.eaa {
        p.e_aa_ev = v;
    }
    if let Some(v) = a.k {
        p.k_ev_per_k = v;
    }
    let literal = acceleration_factor(&p)?;
    let used = match (a.af_override, a.literal_af || cfg.run.literal_af) {
        (Some(v), _) => Some(v),
        (None, true) => None,
        (None, false) => Some(cfg.run.af_override),
    };
    if let Some(v) = used {
        if !(v > 0.0 && v.is_finite()) {
            bail!("--af-override must be positive, got {v}");
        }
    }
    writeln!(out, "closed-form AF: {literal:.6}")?;
    match used {
        Some(v) => writeln!(out, "override AF:    {v} (used downstream)")?,
        None => writeln!(out, "closed-form AF used downstream")?,
    }
    if p == StressProfile::default() {
        writeln!(
            out,
            "note: the factor quoted for these conditions is {PUBLISHED_AF}, {:.2}x the closed form",
            PUBLISHED_AF / literal
        )?;
    }
    if let Some(h) = a.stress_hours {
        if !(h >= 0.0 && h.is_finite()) {
            bail!("--stress-hours must be non-negative, got {h}");
        }
        let eff = h * used.unwrap_or(literal);
        writeln!(
            out,
            "{h} stress hours = {eff:.2} effective hours = {:.2} days",
            eff / 24.0
        )?;
    }
    Ok(EXIT_OK)
}

/// Plan cell with the published values next to it.
fn compare_line(label: &str, cell: &PlanCell, published: &PublishedCell, out: &mut String) -> bool {
    let (pn, pth, pfar, pfrr) = *published;
    match &cell.outcome {
        Ok(p) => {
            let exact = p.n == pn && p.n_eer == pth;
            let _ = writeln!(
                out,
                "{label:<8} {:>7.0e} {:>6} {:>6} {:>8.2} {:>8.2}   {:>6} {:>6} {:>8.2} {:>8.2}  {}",
                cell.target,
                p.n,
                p.n_eer,
                p.log10_far(),
                p.log10_frr(),
                pn,
                pth,
                pfar,
                pfrr,
                if exact { "exact" } else { "differs" }
            );
            exact
        }
        Err(e) => {
            let _ = writeln!(out, "{label:<8} {:>7.0e} {e}", cell.target);
            false
        }
    }
}

const COMPARE_HEADER: &str =
    "label     target      n  n_eer  log10FAR log10FRR  pub.n  n_eer  log10FAR log10FRR  status\n";

fn cmd_tables(mut cfg: RunConfig, a: TablesArgs, out: &mut String) -> anyhow::Result<u8> {
    if !a.paper_params && !a.simulate {
        bail!("choose --paper-params or --simulate");
    }
    if let Some(v) = a.seed {
        cfg.run.seed = v;
    }
    if let Some(v) = a.cells {
        cfg.run.cell_count = v;
    }
    match (a.table, a.simulate) {
        (1, false) => tables_1_published(a.format, out),
        (2, false) => tables_2_published(a.format, out),
        (1, true) => tables_1_simulated(&cfg, a.format, out),
        (_, true) => tables_2_simulated(&cfg, a.format, out),
        _ => unreachable!("clap limits --table to 1 or 2"),
    }
}

fn published_rows_1() -> anyhow::Result<Vec<(String, ErrorModel)>> {
    TABLE_1
        .iter()
        .map(|r| {
            Ok((
                format!("N={}", r.n_reevals),
                ErrorModel::new(r.p_intra, r.p_inter)?,
            ))
        })
        .collect()
}

fn published_rows_2() -> anyhow::Result<Vec<(String, ErrorModel)>> {
    TABLE_2
        .iter()
        .map(|r| {
            Ok((
                format!("{}d", r.days),
                ErrorModel::new(TABLE_2_P_INTRA, TABLE_2_P_INTRA + r.gap)?,
            ))
        })
        .collect()
}

fn tables_1_published(format: Format, out: &mut String) -> anyhow::Result<u8> {
    let cells = plan_table(&published_rows_1()?, &TARGETS);
    if let Format::Csv = format {
        out.push_str(&render_csv(&cells));
        return Ok(EXIT_OK);
    }
    out.push_str(COMPARE_HEADER);
    let mut exact = 0;
    for (i, cell) in cells.iter().enumerate() {
        let row = &TABLE_1[i / TARGETS.len()];
        exact += compare_line(&cell.label, cell, &row.cells[i % TARGETS.len()], out) as usize;
    }
    writeln!(out, "n/n_eer exact in {exact} of {} cells", cells.len())?;
    Ok(EXIT_OK)
}

fn tables_2_published(format: Format, out: &mut String) -> anyhow::Result<u8> {
    let cells = plan_table(&published_rows_2()?, &TARGETS);
    if let Format::Csv = format {
        out.push_str(&render_csv(&cells));
        return Ok(EXIT_OK);
    }
    writeln!(out, "p_intra taken as {TABLE_2_P_INTRA} for every row")?;
    out.push_str(COMPARE_HEADER);
    let mut exact = 0;
    for (i, cell) in cells.iter().enumerate() {
        let row = &TABLE_2[i / TARGETS.len()];
        exact += compare_line(&cell.label, cell, &row.cells[i % TARGETS.len()], out) as usize;
    }
    writeln!(out, "n/n_eer exact in {exact} of {} cells", cells.len())?;
    Ok(EXIT_OK)
}

/// Measured estimators of one simulated enrollment.
pub struct Measured {
    pub label: String,
    pub profile: EnrollmentProfile,
}

fn measured_report(rows: &[Measured], format: Format, out: &mut String) -> anyhow::Result<()> {
    writeln!(out, "label      ASRs  p_intra  p_inter     diff")?;
    for m in rows {
        let pe = m.profile.p_inter_est.expect("characterized");
        writeln!(
            out,
            "{:<8} {:>6} {:>8.4} {:>8.4} {:>8.4}",
            m.label,
            m.profile.asrs.len(),
            m.profile.p_intra_est,
            pe,
            pe - m.profile.p_intra_est
        )?;
    }
    let models: Vec<(String, ErrorModel)> = rows
        .iter()
        .filter_map(|m| m.profile.error_model().ok().map(|e| (m.label.clone(), e)))
        .collect();
    let cells = plan_table(&models, &TARGETS);
    out.push('\n');
    out.push_str(&render(&cells, format));
    for c in &cells {
        let asrs = rows
            .iter()
            .find(|m| m.label == c.label)
            .map(|m| m.profile.asrs.len());
        if let (Ok(p), Some(k)) = (&c.outcome, asrs) {
            if p.n as usize > k {
                writeln!(
                    out,
                    "{} at {:e}: plan needs {} ASRs, only {k} selected",
                    c.label, c.target, p.n
                )?;
            }
        }
    }
    Ok(())
}

/// Enrolls at `n` re-evaluations from the first `n` readouts of each corner.
pub fn enroll_at(cfg: &RunConfig, ds: &pipeline::Dataset, n: usize) -> anyhow::Result<EnrollmentProfile> {
    let rt = ds.pre_at(cfg.selection.rt_k).context("no RT readouts")?.prefix(n);
    let ht = ds.pre_at(cfg.selection.ht_k).context("no HT readouts")?.prefix(n);
    let selection = pufage_core::SelectionConfig {
        n_reevals: n,
        ..cfg.selection()
    };
    Ok(enroll(
        ds.fresh.id(),
        &rt,
        &ht,
        ds.held_out.as_ref(),
        &selection,
        cfg.run.created_at,
    )?)
}

/// `tables --table 1 --simulate`: enroll at N = 3..=9 on nested readouts,
/// characterize each profile against the same aged device.
pub fn simulate_table_1(cfg: &RunConfig) -> anyhow::Result<Vec<Measured>> {
    let mut cfg = cfg.clone();
    cfg.simulate.repeats = cfg.simulate.repeats.max(9);
    cfg.simulate.temps_k.clear();
    let ds = pipeline::simulate(&cfg)?;
    (3..=9)
        .map(|n| {
            let profile = characterize(&enroll_at(&cfg, &ds, n)?, &ds.post)?;
            Ok(Measured {
                label: format!("N={n}"),
                profile,
            })
        })
        .collect()
}

/// `tables --table 2 --simulate`: one N = 9 enrollment characterized after
/// 18, 48 and 108 oven hours.
pub fn simulate_table_2(cfg: &RunConfig) -> anyhow::Result<Vec<Measured>> {
    let mut cfg = cfg.clone();
    cfg.simulate.repeats = cfg.simulate.repeats.max(9);
    cfg.simulate.temps_k.clear();
    let ds = pipeline::simulate(&cfg)?;
    let profile = enroll_at(&cfg, &ds, 9)?;
    TABLE_2
        .iter()
        .enumerate()
        .map(|(j, row)| {
            let aged = ds.fresh.age_with_factor(row.stress_hours, ds.af)?;
            let post = pipeline::post_readouts(&cfg, &aged, j as u64 + 1)?;
            Ok(Measured {
                label: format!("{:.1}d", aged.effective_age_h() / 24.0),
                profile: characterize(&profile, &post)?,
            })
        })
        .collect()
}

fn tables_1_simulated(cfg: &RunConfig, format: Format, out: &mut String) -> anyhow::Result<u8> {
    measured_report(&simulate_table_1(cfg)?, format, out)?;
    Ok(EXIT_OK)
}

fn tables_2_simulated(cfg: &RunConfig, format: Format, out: &mut String) -> anyhow::Result<u8> {
    measured_report(&simulate_table_2(cfg)?, format, out)?;
    Ok(EXIT_OK)
}

/// log10 FAR and FRR of a model at a given operating point.
pub fn log10_rates(model: &ErrorModel, n: u64, n_th: u64) -> anyhow::Result<(f64, f64)> {
    Ok((far(model, n, n_th)?.log10(), frr(model, n, n_th)?.log10()))
}
