use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Serialize;

use rootlab::certificate::{recheck_json, Certificate, Verdict};
use rootlab::gauge::HolderReport;
use rootlab::monodromy::{certify, loop_permutation, Certifiable};
use rootlab::path::{CoefficientPath, PathFile, Preset};
use rootlab::quad::{custom_root, classify, find_witness, grid_scan, CustomSelector, QuadRow, Rect, RegionLabel, SelectorId};
use rootlab::solver::solve_all;
use rootlab::stability::{
    hurwitz_raster, lambda_bar_modulus_scan, ratio_curve, verify_bound, BoundGrid, BoundReport, DomainBox,
    RasterCell,
};
use rootlab::track::track;
use rootlab::{Complex, Error, MonicPoly, RootMultiset, TrajectoryBundle};

use crate::config::{FileConfig, Resolved};
use crate::output::{emit, num, to_json, write_atomic, Csv};
use crate::{Cli, Command, Format, UsageError, EXIT_COLLISION, EXIT_INCONCLUSIVE, EXIT_INPUT};

pub fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<UsageError>().is_some() {
        return EXIT_INPUT;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::StepUnderflow { .. } | Error::CollisionOnLoop { .. } | Error::SeparationFailure { .. }) => {
            EXIT_COLLISION
        }
        Some(Error::InvalidInput(_) | Error::NotFound(_) | Error::NotClosed { .. } | Error::StepTooLarge { .. }) => {
            EXIT_INPUT
        }
        Some(Error::PeriodicityViolated { .. }) => EXIT_INPUT,
        _ => 1,
    }
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

pub fn run(cli: Cli) -> Result<u8> {
    let file = FileConfig::load(cli.config.as_deref())?;
    let cfg = Resolved {
        seed: cli.seed.or(file.seed).unwrap_or(0),
        file,
    };
    match cli.command {
        Command::Quad {
            selector,
            custom,
            rect,
            grid,
            witness,
            format,
            out,
        } => cmd_quad(&cfg, selector, custom, &rect, grid, witness, format, out.as_deref()),
        Command::Track {
            preset,
            file,
            format,
            out,
            summary,
            numeric,
        } => {
            let path = load_path(preset.as_deref(), file.as_deref())?;
            let bundle = track(&path, &cfg.track(&numeric))?;
            let s = Summary::of(&path, &bundle);
            match format {
                Format::Json => emit(out.as_deref(), &to_json(&TrackJson { summary: s, bundle: &bundle })?)?,
                Format::Csv => {
                    emit(out.as_deref(), &trajectory_csv(&bundle))?;
                    let text = to_json(&s)?;
                    match summary {
                        Some(p) => write_atomic(&p, &text)?,
                        None => eprint!("{text}"),
                    }
                }
            }
            Ok(0)
        }
        Command::Monodromy {
            preset,
            file,
            out,
            numeric,
        } => {
            let path = load_path(preset.as_deref(), file.as_deref())?;
            let lp = loop_permutation(&path, &cfg.track(&numeric))?;
            emit(out.as_deref(), &to_json(&lp)?)?;
            Ok(0)
        }
        Command::Certify {
            name,
            recheck,
            samples,
            eps_end_fraction,
            out,
            numeric,
        } => {
            if let Some(p) = recheck {
                let text = read_input(&p)?;
                let rep = recheck_json(&text)?;
                emit(out.as_deref(), &to_json(&rep)?)?;
                let ok = rep.consistent && rep.recomputed == Verdict::ObstructionCertified;
                return Ok(if ok { 0 } else { EXIT_INCONCLUSIVE });
            }
            let name = name.expect("clap enforces name or --recheck");
            let which = Certifiable::parse(&name)
                .map_err(|_| usage(format!("unknown certificate {name:?}; expected deg2c, deg4r or deg5r")))?;
            let cert = certify(which, &cfg.certify(&numeric, samples, eps_end_fraction))?;
            emit(out.as_deref(), &to_json(&cert)?)?;
            Ok(certificate_exit(&cert))
        }
        Command::Stability {
            n,
            box_a,
            box_w,
            grid_a,
            grid_w,
            steps,
            xi_max,
            hurwitz_raster: raster,
            raster_grid,
            raster_csv,
            ratio_csv,
            continuity_pairs,
            out,
        } => {
            let a = parse_box(&box_a, n, "--box-a")?;
            let w = match box_w {
                Some(s) => parse_box(&s, n, "--box-w")?,
                None => DomainBox::real(&vec![[-1.0, 1.0]; n]).map_err(|e| usage(e.to_string()))?,
            };
            let d = BoundGrid::default();
            let grid = BoundGrid {
                a: grid_a.or(cfg.file.grid_a).unwrap_or(d.a),
                w: grid_w.or(cfg.file.grid_w).unwrap_or(d.w),
                steps: steps.or(cfg.file.steps).unwrap_or(d.steps),
            };
            let xi_max = xi_max.or(cfg.file.xi_max).unwrap_or(50.0);
            let report = verify_bound(&a, &w, grid, xi_max)?;
            let cells = if raster || raster_csv.is_some() {
                Some(hurwitz_raster(&a, raster_grid)?)
            } else {
                None
            };
            if let (Some(p), Some(cells)) = (&raster_csv, &cells) {
                write_atomic(p, &raster_to_csv(n, cells))?;
            }
            if let Some(p) = &ratio_csv {
                let curve = ratio_curve(&report.argmax.a, &report.argmax.w, xi_max, grid.steps)?;
                let mut csv = Csv::new(&["xi".into(), "ratio".into()]);
                for (x, r) in curve {
                    csv.row(&[num(x), num(r)]);
                }
                write_atomic(p, &csv.finish())?;
            }
            let continuity = continuity_pairs
                .map(|m| lambda_bar_modulus_scan(&a, m, cfg.seed))
                .transpose()?;
            let raster = if raster {
                cells.map(|cells| Raster {
                    grid: raster_grid,
                    all_stable: cells.iter().all(|c| c.stable),
                    cells,
                })
            } else {
                None
            };
            emit(
                out.as_deref(),
                &to_json(&StabilityJson {
                    report,
                    hurwitz_raster: raster,
                    continuity,
                })?,
            )?;
            Ok(0)
        }
        Command::Solve { coeffs, out, numeric } => {
            let p = MonicPoly::new(parse_coeffs(&coeffs)?)?;
            let roots = solve_all(&p, &cfg.solve(&numeric))?;
            emit(out.as_deref(), &to_json(&SolveJson { degree: p.degree(), roots: &roots })?)?;
            Ok(0)
        }
    }
}

fn certificate_exit(cert: &Certificate) -> u8 {
    if cert.is_certified() {
        0
    } else {
        eprintln!("inconclusive: failed checks {}", cert.failed.join(", "));
        EXIT_INCONCLUSIVE
    }
}

fn read_input(p: &Path) -> Result<String> {
    fs::read_to_string(p).with_context(|| format!("reading {}", p.display())).map_err(|e| usage(format!("{e:#}")))
}

fn load_path(preset: Option<&str>, file: Option<&Path>) -> Result<CoefficientPath> {
    match (preset, file) {
        (Some(name), None) => match Preset::parse(name) {
            Ok(p) => Ok(CoefficientPath::preset(p)),
            Err(_) => bail!(usage(format!("unknown preset {name:?}"))),
        },
        (None, Some(p)) => {
            let text = read_input(p)?;
            PathFile::parse(&text).map_err(|e| usage(format!("{}: {e}", p.display())))
        }
        _ => bail!(usage("give exactly one of --preset or --file")),
    }
}

fn parse_f64(s: &str, what: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| usage(format!("{what}: {s:?} is not a number")))
}

/// `lo:hi` pairs, one per coordinate.
fn parse_box(arg: &str, n: usize, flag: &str) -> Result<DomainBox> {
    let parts: Vec<f64> = arg
        .split(':')
        .map(|s| parse_f64(s, flag))
        .collect::<Result<_>>()?;
    if n == 0 {
        bail!(usage("--n must be at least 1"));
    }
    if parts.len() != 2 * n {
        bail!(usage(format!(
            "{flag} needs {} numbers (lo:hi per coordinate), got {}",
            2 * n,
            parts.len()
        )));
    }
    let bounds: Vec<[f64; 2]> = parts.chunks(2).map(|c| [c[0], c[1]]).collect();
    DomainBox::real(&bounds).map_err(|e| usage(format!("{flag}: {e}")))
}

/// `a0,a1,...` with each entry `re` or `re:im`.
fn parse_coeffs(arg: &str) -> Result<Vec<Complex>> {
    arg.split(',')
        .enumerate()
        .map(|(k, item)| {
            let what = format!("--coeffs entry {k}");
            match item.split_once(':') {
                Some((re, im)) => Ok(Complex::new(parse_f64(re, &what)?, parse_f64(im, &what)?)),
                None => Ok(Complex::new(parse_f64(item, &what)?, 0.0)),
            }
        })
        .collect()
}

fn region_name(r: RegionLabel) -> &'static str {
    match r {
        RegionLabel::PlusRegion => "plus",
        RegionLabel::Parabola => "parabola",
        RegionLabel::MinusRegion => "minus",
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_quad(
    cfg: &Resolved,
    selector: Option<String>,
    custom: Option<PathBuf>,
    rect: &str,
    grid: Option<usize>,
    witness: bool,
    format: Format,
    out: Option<&Path>,
) -> Result<u8> {
    let b: Vec<f64> = rect
        .split(':')
        .map(|s| parse_f64(s, "--box"))
        .collect::<Result<_>>()?;
    if b.len() != 4 {
        bail!(usage(format!("--box needs a0_lo:a0_hi:a1_lo:a1_hi, got {rect:?}")));
    }
    let rect = Rect::new(b[0], b[1], b[2], b[3]).map_err(|e| usage(e.to_string()))?;
    let grid = grid.or(cfg.file.grid).unwrap_or(100);
    if grid < 2 {
        bail!(usage("--grid must be at least 2"));
    }
    let sel = match (selector, custom) {
        (Some(name), None) => {
            let id = SelectorId::parse(&name)
                .ok_or_else(|| usage(format!("unknown selector {name:?}; expected empty, full, plus or minus")))?;
            CustomSelector::Canonical { id }
        }
        (None, Some(p)) => {
            let text = read_input(&p)?;
            serde_json::from_str(&text).map_err(|e| {
                usage(format!("{} line {} column {}: {e}", p.display(), e.line(), e.column()))
            })?
        }
        _ => bail!(usage("give exactly one of --selector or --custom")),
    };
    let rows: Vec<QuadRow> = match &sel {
        CustomSelector::Canonical { id } => grid_scan(*id, &rect, grid),
        other => {
            let scan = grid_scan(SelectorId::EmptySet, &rect, grid);
            scan.into_iter()
                .map(|r| {
                    Ok(QuadRow {
                        root: custom_root(other, r.a0, r.a1)?,
                        region: classify(r.a0, r.a1),
                        ..r
                    })
                })
                .collect::<Result<_>>()?
        }
    };
    if witness {
        let sample: Vec<[f64; 2]> = rows.iter().map(|r| [r.a0, r.a1]).collect();
        let rep = find_witness(&sel, &sample)?;
        emit(out, &to_json(&WitnessJson { found: rep.is_some(), report: rep })?)?;
        return Ok(0);
    }
    match format {
        Format::Csv => {
            let mut csv = Csv::new(&["a0", "a1", "region", "re", "im"].map(String::from));
            for r in &rows {
                csv.row(&[num(r.a0), num(r.a1), region_name(r.region).into(), num(r.root.re), num(r.root.im)]);
            }
            emit(out, &csv.finish())?;
        }
        Format::Json => emit(out, &to_json(&rows)?)?,
    }
    Ok(0)
}

fn trajectory_csv(b: &TrajectoryBundle) -> String {
    let mut header = vec!["t".to_string()];
    for k in 1..=b.degree() {
        header.push(format!("re_{k}"));
        header.push(format!("im_{k}"));
    }
    let mut csv = Csv::new(&header);
    for (t, roots) in b.grid.iter().zip(&b.roots) {
        let mut row = vec![num(*t)];
        for z in roots {
            row.push(num(z.re));
            row.push(num(z.im));
        }
        csv.row(&row);
    }
    csv.finish()
}

fn raster_to_csv(n: usize, cells: &[RasterCell]) -> String {
    let mut header: Vec<String> = (0..n).map(|k| format!("a{k}")).collect();
    header.push("stable".into());
    let mut csv = Csv::new(&header);
    for c in cells {
        let mut row: Vec<String> = c.a.iter().map(|v| num(*v)).collect();
        row.push(if c.stable { "1" } else { "0" }.into());
        csv.row(&row);
    }
    csv.finish()
}

#[derive(Serialize)]
struct Summary {
    degree: usize,
    domain: [f64; 2],
    steps: usize,
    delta_max: f64,
    rho_max: f64,
    s_min: f64,
    factor_err: f64,
    initial_roots: Vec<Complex>,
    final_roots: Vec<Complex>,
}

impl Summary {
    fn of(path: &CoefficientPath, b: &TrajectoryBundle) -> Self {
        Summary {
            degree: b.degree(),
            domain: path.domain(),
            steps: b.grid.len() - 1,
            delta_max: b.delta_max,
            rho_max: b.rho_max,
            s_min: b.s_min,
            factor_err: b.factor_err,
            initial_roots: b.initial_roots().to_vec(),
            final_roots: b.final_roots().to_vec(),
        }
    }
}

#[derive(Serialize)]
struct TrackJson<'a> {
    summary: Summary,
    bundle: &'a TrajectoryBundle,
}

#[derive(Serialize)]
struct SolveJson<'a> {
    degree: usize,
    roots: &'a RootMultiset,
}

#[derive(Serialize)]
struct WitnessJson {
    found: bool,
    report: Option<rootlab::quad::WitnessReport>,
}

#[derive(Serialize)]
struct Raster {
    grid: usize,
    all_stable: bool,
    cells: Vec<RasterCell>,
}

#[derive(Serialize)]
struct StabilityJson {
    report: BoundReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    hurwitz_raster: Option<Raster>,
    #[serde(skip_serializing_if = "Option::is_none")]
    continuity: Option<HolderReport>,
}
