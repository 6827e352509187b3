//! The four commands. Each writes CSV files into the output directory and
//! returns whether every requested solve succeeded.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::Context;
use viscoacoustic::analysis::{
    frequency_grid, modelling_error, near_wall_modes, run_sweep, side_view, slice_source_fraction, solve_exact, solve_model,
    strip_eigenfrequencies, ModeFields, SweepAxis, SweepSpec,
};
use viscoacoustic::export::{format_number, write_errors, write_field_grid, write_profile, write_slopes, write_table, CsvMeta};
use viscoacoustic::sample::{FieldSample, ModalField};
use viscoacoustic::sources::{project_to_modes, ModalSourceSet};
use viscoacoustic::{Discretization, ModelOrder, SeparableGeometry, C64};

use crate::config::{ConfigError, RunConfig};

/// Slices whose source magnitude exceeds this fraction of the peak are refused
/// unless forced: the corrector is only meaningful where the source vanishes.
pub const SLICE_SOURCE_LIMIT: f64 = 1e-3;

/// Output directory and CSV header shared by the files of one run.
pub struct Ctx {
    pub out: PathBuf,
    pub meta: CsvMeta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Complete,
    /// At least one solve failed; its record was written and the others were
    /// still emitted.
    SolverFailure,
}

fn create(ctx: &Ctx, name: &str) -> anyhow::Result<BufWriter<fs::File>> {
    fs::create_dir_all(&ctx.out).with_context(|| format!("creating {}", ctx.out.display()))?;
    let path = ctx.out.join(name);
    let file = fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn finish(mut w: BufWriter<fs::File>, name: &Path) -> anyhow::Result<()> {
    w.flush().with_context(|| format!("writing {}", name.display()))?;
    log::info!("wrote {}", name.display());
    Ok(())
}

fn write_with(ctx: &Ctx, name: &str, f: impl FnOnce(&mut BufWriter<fs::File>) -> viscoacoustic::Result<()>) -> anyhow::Result<()> {
    let mut w = create(ctx, name)?;
    f(&mut w)?;
    finish(w, &ctx.out.join(name))
}

struct Problem {
    geom: SeparableGeometry,
    disc: Discretization,
    set: ModalSourceSet,
}

fn setup(cfg: &RunConfig, params: &viscoacoustic::MaterialParams) -> anyhow::Result<Problem> {
    let geom = cfg.geometry()?;
    let disc = Discretization::for_params(&geom, params, &cfg.discretization())?;
    let set = project_to_modes(&cfg.source()?, &geom, &disc.grid, cfg.discretization.truncation)?;
    Ok(Problem { geom, disc, set })
}

/// Sum of the modes of `fields` at every `(x, y)` of a tensor grid.
fn synthesize(p: &Problem, fields: &ModeFields, xs: &[f64], ys: &[f64]) -> Vec<Vec<C64>> {
    let zero = C64::new(0.0, 0.0);
    let mut out = vec![Vec::with_capacity(xs.len() * ys.len()); 3];
    for &y in ys {
        let src = p.set.eval_modes(y);
        let samples: Vec<(i64, FieldSample)> = fields
            .iter()
            .map(|f| {
                let (s, c) = src[(f.mode() + p.set.truncation as i64) as usize];
                (f.mode(), f.sample(y, s, c))
            })
            .collect();
        for &x in xs {
            let (mut pr, mut va, mut vu) = (zero, zero, zero);
            for (k, s) in &samples {
                let e = C64::from_polar(1.0, p.geom.mode_wavenumber(*k) * x);
                pr += s.p * e;
                va += s.v.a * e;
                vu += s.v.u * e;
            }
            out[0].push(pr);
            out[1].push(va);
            out[2].push(vu);
        }
    }
    out
}

fn refs(f: &ModeFields) -> Vec<&dyn ModalField> {
    f.iter().map(|b| b.as_ref()).collect()
}

/// `solve`: pressure and velocity of the viscous model and of every requested
/// order on a tensor grid (`fields_<model>.csv`), plus `summary.csv` with the
/// status of each solve and its error against the viscous model.
pub fn solve(cfg: &RunConfig, ctx: &Ctx) -> anyhow::Result<Status> {
    let params = cfg.params()?;
    let p = setup(cfg, &params)?;
    let modes = p.set.active(cfg.discretization.energy_threshold);
    let quad = cfg.region()?.quadrature(&p.geom, p.disc.mesh(), p.disc.degree + 4)?;
    let (lo, hi) = p.geom.normal_interval();
    let period = p.geom.tangential_period();
    let (nx, ny) = (cfg.solve.nx, cfg.solve.ny);
    let xs: Vec<f64> = (0..nx).map(|i| period * i as f64 / nx as f64).collect();
    let ys: Vec<f64> = (0..ny).map(|j| lo + (hi - lo) * j as f64 / (ny - 1) as f64).collect();
    let points: Vec<(f64, f64)> = ys.iter().flat_map(|&y| xs.iter().map(move |&x| (x, y))).collect();
    let names = ["p", "v_a", "v_u"];

    let mut summary = Vec::new();
    let mut status = Status::Complete;
    let exact = match solve_exact(&params, &p.geom, &modes, &p.disc) {
        Ok(e) => {
            summary.push(vec!["exact".into(), "ok".into(), String::new(), String::new(), String::new()]);
            Some(e)
        }
        Err(e) if e.is_near_singular() => {
            summary.push(vec!["exact".into(), format!("failed: {e}"), String::new(), String::new(), String::new()]);
            status = Status::SolverFailure;
            None
        }
        Err(e) => return Err(e.into()),
    };
    if let (Some(e), true) = (&exact, cfg.solve.exact) {
        let values = synthesize(&p, e, &xs, &ys);
        write_with(ctx, "fields_exact.csv", |w| write_field_grid(w, &ctx.meta, &names, &points, &values))?;
    }
    for order in cfg.orders()? {
        let label = format!("order{order}");
        match solve_model(&params, &p.geom, order, cfg.route(), &modes, &p.disc) {
            Ok(fields) => {
                let values = synthesize(&p, &fields, &xs, &ys);
                write_with(ctx, &format!("fields_{label}.csv"), |w| write_field_grid(w, &ctx.meta, &names, &points, &values))?;
                let errs = match &exact {
                    Some(e) => {
                        let r = modelling_error(&p.geom, &quad, &p.set, &refs(e), &refs(&fields))?;
                        [r.err_p_h1, r.err_v_hdiv, r.err_total].map(format_number)
                    }
                    None => Default::default(),
                };
                let [a, b, c] = errs;
                summary.push(vec![label, "ok".into(), a, b, c]);
            }
            Err(e) if e.is_near_singular() => {
                log::warn!("order {order} failed: {e}");
                summary.push(vec![label, format!("failed: {e}"), String::new(), String::new(), String::new()]);
                status = Status::SolverFailure;
            }
            Err(e) => return Err(e.into()),
        }
    }
    let columns = ["model", "status", "err_p_H1", "err_v_Hdiv", "err_total"];
    write_with(ctx, "summary.csv", |w| write_table(w, &ctx.meta, &columns, summary))?;
    Ok(status)
}

fn sweep_spec(cfg: &RunConfig, axis: SweepAxis, values: Vec<f64>) -> anyhow::Result<SweepSpec> {
    let mut spec = SweepSpec::new(axis, values, cfg.params()?);
    spec.orders = cfg.orders()?;
    spec.geometry = cfg.geometry()?;
    spec.source = cfg.source()?;
    spec.discretization = cfg.discretization();
    spec.truncation = cfg.discretization.truncation;
    spec.region = cfg.region()?;
    spec.energy_threshold = cfg.discretization.energy_threshold;
    spec.route = cfg.route();
    spec.validate()?;
    Ok(spec)
}

/// `converge`: η sweep at fixed ω, `errors.csv` and `slopes.csv`. Failed
/// samples are recorded in `errors.csv`.
pub fn converge(cfg: &RunConfig, ctx: &Ctx) -> anyhow::Result<Status> {
    let spec = sweep_spec(cfg, SweepAxis::Eta, cfg.sweep.eta.clone())?;
    let report = run_sweep(&spec)?;
    write_with(ctx, "errors.csv", |w| write_errors(w, &ctx.meta, &report))?;
    write_with(ctx, "slopes.csv", |w| write_slopes(w, &ctx.meta, &report))?;
    for s in &report.slopes {
        match s.slope {
            Some(v) => log::info!("order {}: slope {v:.3}", s.order),
            None => log::info!("order {}: no stable window", s.order),
        }
    }
    Ok(Status::Complete)
}

/// `sweep-omega`: ω sweep at fixed η, `errors.csv`, and on the strip the
/// eigenfrequencies below the top of the range in `eigenfrequencies.csv`.
pub fn sweep_omega(cfg: &RunConfig, ctx: &Ctx) -> anyhow::Result<Status> {
    let geom = cfg.geometry()?;
    let s = &cfg.sweep;
    let resonances = match geom {
        SeparableGeometry::StripTorus { period, height } => {
            let top = s.omega_values.as_ref().map_or(s.omega_to, |v| v.iter().copied().fold(0.0, f64::max));
            strip_eigenfrequencies(period, height, cfg.material.c, top + s.omega_gap)
        }
        SeparableGeometry::Annulus { .. } => Vec::new(),
    };
    let values = match &s.omega_values {
        Some(v) => v.clone(),
        None => frequency_grid(s.omega_from, s.omega_to, s.omega_n, &resonances, s.omega_gap)?,
    };
    let spec = sweep_spec(cfg, SweepAxis::Omega, values)?;
    let report = run_sweep(&spec)?;
    write_with(ctx, "errors.csv", |w| write_errors(w, &ctx.meta, &report))?;
    if geom.is_strip() {
        let rows = resonances.iter().map(|&w| vec![format_number(w)]);
        write_with(ctx, "eigenfrequencies.csv", |w| write_table(w, &ctx.meta, &["omega"], rows))?;
    }
    Ok(Status::Complete)
}

/// `nearfield`: side view of the tangential velocity at `nearfield.x`
/// (`profile.csv`). Points cluster at both walls so that the layers are
/// resolved.
pub fn nearfield(cfg: &RunConfig, ctx: &Ctx, force: bool) -> anyhow::Result<Status> {
    let x = cfg.nearfield.x.ok_or_else(|| ConfigError("missing field `nearfield.x` (slice position)".into()))?;
    let params = cfg.params()?;
    let geom = cfg.geometry()?;
    let period = geom.tangential_period();
    if !(x.is_finite() && (0.0..period).contains(&x)) {
        return Err(ConfigError(format!("invalid field `nearfield.x`: slice {x} lies outside [0, {period})")).into());
    }
    let fraction = slice_source_fraction(&cfg.source()?, &geom, x, 128);
    if fraction > SLICE_SOURCE_LIMIT && !(force || cfg.nearfield.force) {
        return Err(ConfigError(format!(
            "slice x = {x} passes through the source (relative magnitude {fraction:.2e}); \
             the corrector is only meaningful where the source vanishes. Use --force to override"
        ))
        .into());
    }
    let eps = params.epsilon();
    if eps > geom.height() / 4.0 {
        log::warn!("boundary layers overlap: ε = {eps:.3e} exceeds a quarter of the height {:.3e}", geom.height());
    }
    let order = ModelOrder::try_from(cfg.nearfield.order)
        .map_err(|_| ConfigError(format!("invalid field `nearfield.order`: {} is not 0, 1 or 2", cfg.nearfield.order)))?;
    let cutoff = cfg.cutoff(&geom)?;
    let p = setup(cfg, &params)?;
    let modes = near_wall_modes(&params, &geom, order, &p.set, cfg.discretization.energy_threshold, &p.disc, cutoff, cfg.variant())?;
    let (lo, hi) = geom.normal_interval();
    let n = cfg.nearfield.points - 1;
    let ys: Vec<f64> =
        (0..=n).map(|j| lo + 0.5 * (hi - lo) * (1.0 - (std::f64::consts::PI * j as f64 / n as f64).cos())).collect();
    let rows = side_view(&geom, &modes, x, &ys);
    write_with(ctx, "profile.csv", |w| write_profile(w, &ctx.meta, &rows))?;
    Ok(Status::Complete)
}
