//! One function per subcommand. Each first turns the config into typed options,
//! so a bad value is reported before anything is computed or written.

use std::collections::BTreeMap;
use std::sync::Arc;

use g2_analysis::{
    convergence_series, delta_power_law, energy_target, rescale_bubble, AnalysisError, BubbleProfile, Window,
};
use g2_geometries::{lambda2s4_profile, Family, Profile};
use g2_hitchin::{integrate_flow, FlowTrajectory};
use g2_instantons::Bundle;
use g2_liealg::Coframe;
use g2_numerics::gauss_kronrod;
use g2_shooting::{
    boundary_for, curvature_decay_fit, decay_fit, holonomy_at_infinity, scan, shoot, Axis, Region, ScanSpec,
    ShootOptions, Verdict,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::checks;
use crate::config::{Metric, RunConfig};
use crate::output::{jnum, jopt, Artifacts, Table};
use crate::{CliError, CHECK_FAILURE, NON_CONVERGENCE, SUCCESS};

fn numerical(e: impl std::fmt::Display) -> CliError {
    CliError::Numerical(e.to_string())
}

/// Typed options of one run.
#[derive(Clone, Debug)]
pub enum Plan {
    Verify { seed: u64, perturb: bool },
    Flow { family: Family, t0: f64, t1: f64, tol: f64 },
    Shoot { family: Family, bundle: Bundle, params: Vec<f64>, opts: ShootOptions },
    Scan { spec: ScanSpec },
    Bubble { x1s: Vec<f64>, lambda: f64 },
    Energy { x1s: Vec<f64>, window: Window },
    Export { metric: Metric, end: f64, samples: usize },
}

fn default_params(family: Family, bundle: Bundle) -> Vec<f64> {
    match (family, bundle) {
        (Family::BryantSalamon, Bundle::P1) => vec![1.0],
        (Family::BryantSalamon, Bundle::Pid) => vec![0.0],
        (Family::Bggg, Bundle::P1) => vec![1.0, 0.25],
        (Family::Bggg, Bundle::Pid) => vec![0.3],
    }
}

fn shoot_options(cfg: &RunConfig) -> Result<ShootOptions, CliError> {
    Ok(ShootOptions { tol: cfg.positive("tol")?, t_max: cfg.opt_positive("tmax")?, ..ShootOptions::default() })
}

fn sweep(cfg: &RunConfig) -> Result<Vec<f64>, CliError> {
    let x1s = cfg.list("x1")?;
    if let Some(x) = x1s.iter().find(|x| **x < 100.0) {
        return Err(CliError::Usage(format!("key `x1`: {x} is outside the asymptotic regime (need x1 >= 100)")));
    }
    Ok(x1s)
}

impl Plan {
    pub fn from_config(cfg: &RunConfig) -> Result<Self, CliError> {
        cfg.usize("threads")?;
        Ok(match cfg.command() {
            "verify" => Plan::Verify { seed: cfg.u64("seed")?, perturb: cfg.bool("perturb")? },
            "flow" => {
                let t0 = cfg.positive("t0")?;
                let t1 = cfg.opt_positive("tmax")?.unwrap_or(10.0 * t0);
                if t1 <= t0 {
                    return Err(CliError::Usage(format!("key `tmax`: must exceed t0 = {t0}, got {t1}")));
                }
                Plan::Flow { family: cfg.family()?, t0, t1, tol: cfg.positive("tol")? }
            }
            "shoot" => {
                let (family, bundle) = (cfg.family()?, cfg.bundle()?);
                let params = if cfg.is_auto("params") { default_params(family, bundle) } else { cfg.list("params")? };
                Plan::Shoot { family, bundle, params, opts: shoot_options(cfg)? }
            }
            "scan" => {
                let (family, bundle) = (cfg.family()?, cfg.bundle()?);
                let (n, m) = cfg.grid()?;
                let axes = match (family, bundle) {
                    (Family::Bggg, Bundle::P1) => {
                        let (f0, f1) = cfg.range("f1p")?;
                        let (g0, g1) = cfg.range("g1p")?;
                        vec![Axis::new("f1p", f0, f1, n), Axis::new("g1p", g0, g1, m)]
                    }
                    _ => {
                        let (lo, hi) = cfg.range("range")?;
                        let name = match (family, bundle) {
                            (Family::BryantSalamon, Bundle::P1) => "x1",
                            (Family::BryantSalamon, Bundle::Pid) => "y0",
                            _ => "b0m",
                        };
                        vec![Axis::new(name, lo, hi, n)]
                    }
                };
                Plan::Scan {
                    spec: ScanSpec {
                        family,
                        bundle,
                        axes,
                        shoot: shoot_options(cfg)?,
                        boundary_tol: cfg.positive("boundary_tol")?,
                    },
                }
            }
            "bubble" => Plan::Bubble { x1s: sweep(cfg)?, lambda: cfg.positive("lambda")? },
            "energy" => Plan::Energy { x1s: sweep(cfg)?, window: cfg.window()? },
            "export" => {
                let metric = cfg.metric()?;
                let end = cfg.opt_positive("tmax")?.unwrap_or(match metric {
                    Metric::Lambda2(_) => 3.0,
                    _ => 10.0,
                });
                let samples = cfg.usize("samples")?;
                if samples < 2 {
                    return Err(CliError::Usage(format!("key `samples`: need at least 2, got {samples}")));
                }
                Plan::Export { metric, end, samples }
            }
            other => return Err(CliError::Usage(format!("unknown command `{other}`"))),
        })
    }

    /// Run and write artifacts; returns the exit code.
    pub fn run(&self, cfg: &RunConfig, art: &mut Artifacts) -> Result<i32, CliError> {
        match self {
            Plan::Verify { seed, perturb } => verify(cfg, art, *seed, *perturb),
            Plan::Flow { family, t0, t1, tol } => flow(cfg, art, *family, *t0, *t1, *tol),
            Plan::Shoot { family, bundle, params, opts } => shoot_one(cfg, art, *family, *bundle, params, opts),
            Plan::Scan { spec } => scan_grid(cfg, art, spec),
            Plan::Bubble { x1s, lambda } => bubble(cfg, art, x1s, *lambda),
            Plan::Energy { x1s, window } => energy(cfg, art, x1s, *window),
            Plan::Export { metric, end, samples } => export(cfg, art, *metric, *end, *samples),
        }
    }
}

fn verify(cfg: &RunConfig, art: &mut Artifacts, seed: u64, perturb: bool) -> Result<i32, CliError> {
    let checks = checks::all(seed, perturb);
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    let body = json!({
        "perturbed": perturb,
        "total": checks.len(),
        "failed": failed,
        "checks": checks,
    });
    art.report("verify.json", body, cfg)?;
    Ok(if failed.is_empty() { SUCCESS } else { CHECK_FAILURE })
}

fn flow(cfg: &RunConfig, art: &mut Artifacts, family: Family, t0: f64, t1: f64, tol: f64) -> Result<i32, CliError> {
    let p = family.profile::<f64>();
    let start = p.rho_of_t(t0).map_err(numerical)?;
    let tr = integrate_flow(&p.state(start).map_err(numerical)?, t0, t1, tol).map_err(numerical)?;
    let rows = tr.rows(&Coframe::s3xs3()).map_err(numerical)?;

    let mut cols: Vec<(&str, &str)> = FlowTrajectory::<f64>::csv_header()
        .iter()
        .map(|h| (*h, if h.starts_with('d') { "length^-1" } else { "length" }))
        .collect();
    cols.push(("rel_dev", ""));
    let mut table = Table::new(&cols);
    let mut worst = 0.0f64;
    for row in &rows {
        let want = p.state(p.rho_of_t(row[0]).map_err(numerical)?).map_err(numerical)?.values();
        let dev = (0..6).map(|i| ((row[1 + i] - want[i]) / want[i]).abs()).fold(0.0, f64::max);
        worst = worst.max(dev);
        let mut r = row.to_vec();
        r.push(dev);
        table.push(&r);
    }
    art.csv("flow.csv", &table, cfg)?;
    art.report(
        "flow.json",
        json!({
            "metric": family.name(),
            "t0": t0,
            "t1": t1,
            "steps": rows.len(),
            "status": format!("{:?}", tr.diagnostics.status),
            "truncated": tr.truncated(),
            "max_torsion": jnum(tr.diagnostics.max_torsion),
            "max_half_flat_defect": jnum(tr.diagnostics.max_constraint),
            "max_rel_dev_from_closed_form": jnum(worst),
        }),
        cfg,
    )?;
    Ok(if tr.truncated() { NON_CONVERGENCE } else { SUCCESS })
}

fn shoot_one(
    cfg: &RunConfig,
    art: &mut Artifacts,
    family: Family,
    bundle: Bundle,
    params: &[f64],
    opts: &ShootOptions,
) -> Result<i32, CliError> {
    let profile: Arc<dyn Profile<f64>> = Arc::from(family.profile::<f64>());
    let data = boundary_for(family, bundle, params, profile.as_ref())
        .map_err(|e| CliError::Usage(format!("key `params`: {e}")))?;
    let (traj, class) = shoot(&data, profile, opts).map_err(numerical)?;

    let labels = traj.ansatz.labels();
    let mut cols: Vec<(String, &str)> = vec![("t".into(), "length"), ("r".into(), "")];
    cols.extend(labels.iter().map(|l| (l.to_string(), "")));
    cols.extend(labels.iter().map(|l| (format!("d{l}"), "length^-1")));
    cols.push(("curvature".into(), "length^-2"));
    let cols_ref: Vec<(&str, &str)> = cols.iter().map(|(n, u)| (n.as_str(), *u)).collect();
    let mut table = Table::new(&cols_ref);
    for &t in &traj.grid {
        let Some(s) = traj.sample(t) else { continue };
        let mut row = vec![t, s.profile.rho];
        row.extend(&s.u);
        row.extend(&s.du);
        row.push(s.curvature_norm_sq().sqrt());
        table.push(&row);
    }
    art.csv("shoot.csv", &table, cfg)?;

    let curvature_slope = match class.verdict {
        Verdict::GlobalBounded => curvature_decay_fit(&traj).ok().map(|f| f.slope),
        _ => None,
    };
    let connection_slope = class.asymptote.as_ref().and_then(|lim| decay_fit(&traj, lim).ok()).map(|f| f.slope);
    let region = if family == Family::Bggg && bundle == Bundle::P1 {
        Region::of(params[0], params[1]).name()
    } else {
        Region::NotApplicable.name()
    };
    art.report(
        "shoot.json",
        json!({
            "metric": family.name(),
            "bundle": format!("{bundle:?}"),
            "boundary": format!("{data:?}"),
            "region": region,
            "t0": traj.t0(),
            "t_end": traj.t_end(),
            "steps": traj.grid.len(),
            "verdict": class.verdict.name(),
            "t_blow": jopt(class.t_blow),
            "asymptote": class.asymptote.as_ref().map(|v| v.iter().map(|x| jnum(*x)).collect::<Vec<_>>()),
            "curvature_sup": jnum(class.curvature_sup),
            "reason": class.reason,
            "curvature_slope": jopt(curvature_slope),
            "connection_slope": jopt(connection_slope),
            "holonomy": jopt(holonomy_at_infinity(&traj, &class).ok()),
        }),
        cfg,
    )?;
    Ok(if class.verdict == Verdict::Undetermined { NON_CONVERGENCE } else { SUCCESS })
}

fn counts(cells: &[&g2_shooting::ScanCell]) -> Value {
    let mut m: BTreeMap<&str, usize> = BTreeMap::new();
    for c in cells {
        *m.entry(c.classification.verdict.name()).or_default() += 1;
    }
    json!(m)
}

fn scan_grid(cfg: &RunConfig, art: &mut Artifacts, spec: &ScanSpec) -> Result<i32, CliError> {
    let report = scan(spec);
    let mut cols: Vec<(&str, &str)> = spec.axes.iter().map(|a| (a.name.as_str(), "")).collect();
    cols.extend([
        ("region", "-"),
        ("verdict", "-"),
        ("curvature_sup", "length^-2"),
        ("slope", ""),
        ("holonomy", "rad"),
    ]);
    let mut table = Table::new(&cols);
    for c in &report.cells {
        let mut row: Vec<String> = c.params.iter().map(|x| crate::output::num(*x)).collect();
        row.push(c.region.name().into());
        row.push(c.classification.verdict.name().into());
        row.push(crate::output::num(c.classification.curvature_sup));
        row.push(c.slope.map(crate::output::num).unwrap_or_default());
        row.push(c.holonomy.map(crate::output::num).unwrap_or_default());
        table.push_cells(row);
    }
    art.csv("scan.csv", &table, cfg)?;

    let mut regions = serde_json::Map::new();
    for r in [Region::A, Region::B, Region::Outside, Region::NotApplicable] {
        let cells: Vec<_> = report.cells.iter().filter(|c| c.region == r).collect();
        if !cells.is_empty() {
            regions.insert(r.name().into(), json!({ "cells": cells.len(), "verdicts": counts(&cells) }));
        }
    }
    let open: Vec<_> = report.open_region().collect();
    let undetermined: Vec<Value> = report
        .cells
        .iter()
        .filter(|c| c.classification.verdict == Verdict::Undetermined)
        .map(|c| {
            json!({
                "params": c.params,
                "region": c.region.name(),
                "reason": c.classification.reason.clone().unwrap_or_else(|| "unspecified".into()),
            })
        })
        .collect();
    let body = json!({
        "metric": spec.family.name(),
        "bundle": format!("{:?}", spec.bundle),
        "axes": spec.axes.iter().map(|a| json!({"name": a.name, "lo": a.lo, "hi": a.hi, "n": a.n})).collect::<Vec<_>>(),
        "cells": report.cells.len(),
        "regions": regions,
        "open_region": {
            "cells": open.len(),
            "verdicts": counts(&open),
            "cells_detail": open.iter().map(|c| json!({
                "params": c.params,
                "verdict": c.classification.verdict.name(),
                "reason": c.classification.reason,
                "curvature_sup": jnum(c.classification.curvature_sup),
            })).collect::<Vec<_>>(),
        },
        "undetermined": undetermined,
    });
    art.report("scan.json", body, cfg)?;
    Ok(if report.undetermined() > 0 { NON_CONVERGENCE } else { SUCCESS })
}

fn analysis_error(e: AnalysisError) -> CliError {
    match e {
        AnalysisError::NotAsymptotic(x) => CliError::Usage(format!("key `x1`: {x} is outside the asymptotic regime")),
        e => numerical(e),
    }
}

fn sorted(x1s: &[f64]) -> Vec<f64> {
    let mut v = x1s.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

fn decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

fn bubble(cfg: &RunConfig, art: &mut Artifacts, x1s: &[f64], lambda: f64) -> Result<i32, CliError> {
    let x1s = sorted(x1s);
    let profiles: Vec<BubbleProfile> = x1s
        .par_iter()
        .map(|&x1| rescale_bubble(x1, lambda))
        .collect::<Result<_, _>>()
        .map_err(analysis_error)?;

    let mut prof = Table::new(&[("x1", ""), ("tau", ""), ("coefficient", ""), ("reference", "")]);
    let mut series = Table::new(&[("x1", ""), ("delta", "length"), ("sup_distance", ""), ("derivative_distance", "")]);
    for b in &profiles {
        for ((tau, c), r) in b.radii.iter().zip(&b.samples).zip(&b.reference) {
            prof.push(&[b.x1, *tau, *c, *r]);
        }
        series.push(&[b.x1, b.delta, b.sup_distance, b.derivative_distance]);
    }
    art.csv("bubble_profiles.csv", &prof, cfg)?;
    art.csv("bubble.csv", &series, cfg)?;

    let sup: Vec<f64> = profiles.iter().map(|b| b.sup_distance).collect();
    let delta: Vec<f64> = profiles.iter().map(|b| b.delta).collect();
    let fit = delta_power_law(&profiles);
    let monotone = decreasing(&sup) && decreasing(&delta);
    art.report(
        "bubble.json",
        json!({
            "lambda": lambda,
            "x1": x1s,
            "sup_distance": sup.iter().map(|x| jnum(*x)).collect::<Vec<_>>(),
            "delta": delta.iter().map(|x| jnum(*x)).collect::<Vec<_>>(),
            "delta_power_law": fit.map(|f| json!({"slope": jnum(f.slope), "intercept": jnum(f.intercept)})),
            "monotone": monotone,
        }),
        cfg,
    )?;
    Ok(if monotone { SUCCESS } else { CHECK_FAILURE })
}

fn energy(cfg: &RunConfig, art: &mut Artifacts, x1s: &[f64], window: Window) -> Result<i32, CliError> {
    let x1s = sorted(x1s);
    let rows = convergence_series(&x1s, 1.0, window).map_err(analysis_error)?;
    let mut table = Table::new(&[("x1", ""), ("sup_distance", ""), ("delta", "length"), ("energy_value", "")]);
    for r in &rows {
        table.push(&[r.x1, r.sup_distance, r.delta, r.energy]);
    }
    art.csv("energy.csv", &table, cfg)?;

    let target = energy_target();
    let contains_s3 = matches!(window, Window::Ball { .. } | Window::Everywhere);
    let limit = if contains_s3 { target } else { 0.0 };
    let errors: Vec<f64> = rows.iter().map(|r| (r.energy - limit).abs() / target).collect();
    // the whole-space current is the same for every x1, so only require no increase
    let monotone = errors.windows(2).all(|w| w[1] <= w[0] || (w[1] - w[0]).abs() <= 1e-9);
    let window_json = match window {
        Window::Ball { radius } => json!({"kind": "ball", "radius": radius}),
        Window::Shell { inner, outer } => json!({"kind": "shell", "inner": inner, "outer": outer}),
        Window::Everywhere => json!({"kind": "all"}),
    };
    art.report(
        "energy.json",
        json!({
            "window": window_json,
            "target": target,
            "expected_limit": limit,
            "x1": x1s,
            "energy": rows.iter().map(|r| jnum(r.energy)).collect::<Vec<_>>(),
            "ratio_to_target": rows.iter().map(|r| jnum(r.energy / target)).collect::<Vec<_>>(),
            "relative_error_to_limit": errors.iter().map(|x| jnum(*x)).collect::<Vec<_>>(),
            "monotone": monotone,
        }),
        cfg,
    )?;
    Ok(if monotone { SUCCESS } else { CHECK_FAILURE })
}

fn export(cfg: &RunConfig, art: &mut Artifacts, metric: Metric, end: f64, n: usize) -> Result<i32, CliError> {
    let grid = (0..n).map(|k| end * k as f64 / (n - 1) as f64);
    let table = match metric {
        // S4 and CP2 share the radial profile
        Metric::Lambda2(_) => {
            let mut t = Table::new(&[("t", "length"), ("s", ""), ("f", ""), ("a", "length"), ("b", "length")]);
            for s in grid {
                let p = lambda2s4_profile(s).map_err(numerical)?;
                let q = gauss_kronrod(|u| lambda2s4_profile(u).map(|p| p.f).unwrap_or(f64::NAN), 0.0, s, 1e-14, 1e-14)
                    .map_err(numerical)?;
                t.push(&[q.value, s, p.f, p.a, p.b]);
            }
            t
        }
        m => {
            let family = m.family().expect("R4xS3 metric");
            let p = family.profile::<f64>();
            let mut t = Table::new(&[
                ("t", "length"),
                ("r", ""),
                ("A1", "length"),
                ("A2", "length"),
                ("A3", "length"),
                ("B1", "length"),
                ("B2", "length"),
                ("B3", "length"),
            ]);
            for time in grid {
                let r = p.rho_of_t(time).map_err(numerical)?;
                let mut row = vec![time, r];
                row.extend(p.state(r).map_err(numerical)?.values());
                t.push(&row);
            }
            t
        }
    };
    art.csv("profile.csv", &table, cfg)?;
    Ok(SUCCESS)
}
