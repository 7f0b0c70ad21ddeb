//! Subcommand implementations. Each renders its full output as a string so
//! runs can be compared byte for byte.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::config::{resolve, resolve_list, ConfigFile};
use super::csv::{emit, format_number, Table};
use super::validate;
use super::{Cli, CliError, Command, DdiArgs, FidelityArgs, FidelityMode, PhysArgs, PlasmonCmd, StackArgs};
use crate::lens::{lens_degree, radial_mean_index, LensConfig};
use crate::plasmon::{average_absorption, estimate_from_losses, index_sweep, mirror_loss, PlasmonStack};
use crate::qed::{
    coupling_rates, diameter_profile, entanglement_fidelity, fidelity_approx, optimal_time, trajectory,
    AtomPairConfig,
};
use crate::schrodinger::{
    build_blocks, compare_to_analytics, default_l_range, evolve, uniform_grid, DEFAULT_OMEGA0_OVER_GAMMA0,
};

/// Absorption quoted for the plasmonic lens.
pub const STATED_ALPHA_ABS: f64 = 3e-3;
/// Mirror loss quoted for the plasmonic lens.
pub const STATED_ALPHA_MIRROR: f64 = 4e-4;

/// Rendered command output and whether it signals success.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub text: String,
    pub ok: bool,
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let out = execute(cli)?;
    emit(&out.text, cli.common.out.as_deref())?;
    if out.ok {
        Ok(())
    } else {
        Err(CliError::Validation)
    }
}

pub fn execute(cli: &Cli) -> Result<Output, CliError> {
    let file = match &cli.common.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    let ctx = Ctx { cli, file };
    match &cli.command {
        Command::Validate => {
            let report = validate::run_suite(cli.common.quick, validate::closed_form);
            Ok(Output {
                text: report.render(),
                ok: report.all_passed(),
            })
        }
        Command::DdiSweep(a) => csv(ddi_sweep(&ctx, a)?),
        Command::Dynamics(a) => csv(dynamics(&ctx, a)?),
        Command::Fidelity { mode } => csv(match mode {
            FidelityMode::VsLoss(a) => fidelity_vs_loss(&ctx, a)?,
            FidelityMode::VsDetuning(a) => fidelity_vs_detuning(&ctx, a)?,
            FidelityMode::VsRadius(a) => fidelity_vs_radius(&ctx, a)?,
        }),
        Command::Plasmon { cmd } => match cmd {
            PlasmonCmd::IndexSweep { stack, d_max, d_step } => {
                let s = stack_from(&ctx, stack)?;
                let d_max = resolve(*d_max, &ctx.file, "d-max", 200.0)?;
                let step = resolve(*d_step, &ctx.file, "d-step", if ctx.cli.common.quick { 5.0 } else { 0.5 })?;
                let mut t = Table::new(&["d_nm", "n_eff", "chi"]);
                for p in index_sweep(&s, d_max, step)? {
                    t.push(vec![p.height, p.n_eff.re, p.n_eff.im]);
                }
                csv(t)
            }
            PlasmonCmd::Estimate {
                stack,
                r0,
                reflectivity,
                eta,
                recomputed_mirror_loss,
            } => plasmon_estimate(&ctx, stack, *r0, *reflectivity, *eta, *recomputed_mirror_loss),
        },
    }
}

fn csv(mut t: Table) -> Result<Output, CliError> {
    t.sort();
    Ok(Output {
        text: t.render(),
        ok: true,
    })
}

struct Ctx<'a> {
    cli: &'a Cli,
    file: ConfigFile,
}

impl Ctx<'_> {
    fn samples(&self, default: usize, quick: usize) -> Result<usize, CliError> {
        let d = if self.cli.common.quick { quick } else { default };
        let n = resolve(self.cli.common.samples, &self.file, "samples", d)?;
        if n < 2 {
            return Err(CliError::Args("--samples must be at least 2".into()));
        }
        Ok(n)
    }

    fn l_max(&self) -> Result<Option<usize>, CliError> {
        match self.cli.common.l_max {
            Some(l) => Ok(Some(l)),
            None => self.file.get("l-max"),
        }
    }
}

/// Resolved physical parameters for one antipodal configuration.
struct Phys {
    cfg: LensConfig,
    atoms: AtomPairConfig,
    omega0_over_gamma0: f64,
    t_max: Option<f64>,
}

fn phys_from(ctx: &Ctx, a: &PhysArgs) -> Result<Phys, CliError> {
    let f = &ctx.file;
    let nu_center = match a.nu_center {
        Some(v) => Some(v),
        None => f.get("nu-center")?,
    };
    let r0_flag = match a.r0 {
        Some(v) => Some(v),
        None => f.get("r0")?,
    };
    let r0 = match (r0_flag, nu_center) {
        (Some(r), _) => r,
        (None, Some(nu)) => LensConfig::radius_for_degree(nu, 1.0),
        (None, None) => LensConfig::radius_for_degree(20.5, 1.0),
    };
    let alpha = resolve(a.alpha, f, "alpha", 5e-4)?;
    let b = resolve(a.b, f, "b", 0.1)?;
    let rho = resolve(a.rho, f, "rho", 0.27)?;
    let omega0_over_gamma0 = resolve(a.omega0_over_gamma0, f, "omega0-over-gamma0", DEFAULT_OMEGA0_OVER_GAMMA0)?;
    let t_max = match a.t_max {
        Some(v) => Some(v),
        None => f.get("t-max")?,
    };
    Ok(Phys {
        cfg: LensConfig::new(r0, 1.0, b, alpha)?,
        atoms: AtomPairConfig::antipodal(rho)?,
        omega0_over_gamma0,
        t_max,
    })
}

fn ddi_sweep(ctx: &Ctx, a: &DdiArgs) -> Result<Table, CliError> {
    let f = &ctx.file;
    let default_radii: Vec<f64> = [30.5, 50.5, 70.5, 90.5]
        .iter()
        .map(|&nu| LensConfig::radius_for_degree(nu, 1.0))
        .collect();
    let radii = resolve_list(a.radii.as_deref(), f, "radii", &default_radii)?;
    let b = resolve(a.b, f, "b", 0.1)?;
    let offset = resolve(a.offset, f, "offset", 1.0)?;
    let default_points = if ctx.cli.common.quick { 401 } else { 2001 };
    let points = resolve(a.points.or(ctx.cli.common.samples), f, "points", default_points)?;
    let mut t = Table::new(&["R0_over_lambda", "x_over_lambda", "ddi_over_Gamma0"]);
    for r0 in radii {
        let cfg = LensConfig::new(r0, 1.0, b, 0.0)?;
        for (x, d) in diameter_profile(&cfg, offset, points)? {
            t.push(vec![r0, x, d]);
        }
    }
    Ok(t)
}

fn dynamics(ctx: &Ctx, a: &PhysArgs) -> Result<Table, CliError> {
    let p = phys_from(ctx, a)?;
    let rates = coupling_rates(&p.cfg, &p.atoms)?;
    let t0 = optimal_time(&rates)?;
    // five population exchanges by default
    let t_max = p.t_max.unwrap_or(5.0 * PI / rates.delta_omega.abs());
    let n = ctx.samples(2000, 400)?;
    let grid = uniform_grid(t_max, n);
    let tr = trajectory(&rates, &grid);
    let t0_index = grid
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 - t0).abs().total_cmp(&(b.1 - t0).abs()))
        .map(|(k, _)| k);
    let mut header = vec!["t_Gamma0", "pop1", "pop2", "bell_fidelity", "t0_marker"];
    let sim = if ctx.cli.common.simulate {
        header.extend(["sim_pop1", "sim_pop2", "sim_bell_fidelity"]);
        let range = match ctx.l_max()? {
            Some(l) => 1..=l,
            None => default_l_range(lens_degree(&p.cfg).value().re),
        };
        let kappa = p.cfg.kappa() * p.omega0_over_gamma0 / crate::lens::OMEGA0;
        let blocks = build_blocks(&p.cfg, p.atoms.p1.theta(), p.omega0_over_gamma0, range, kappa)?;
        Some(evolve(&blocks, &grid)?)
    } else {
        None
    };
    let mut t = Table::new(&header);
    for k in 0..grid.len() {
        let mut row = vec![
            grid[k],
            tr.pop1[k],
            tr.pop2[k],
            tr.bell_fidelity[k],
            if Some(k) == t0_index { 1.0 } else { 0.0 },
        ];
        if let Some(s) = &sim {
            row.extend([s.amp_a[k].norm_sqr(), s.amp_b[k].norm_sqr(), s.bell_fidelity[k]]);
        }
        t.push(row);
    }
    Ok(t)
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| (lo.ln() + (hi / lo).ln() * k as f64 / (n - 1) as f64).exp())
        .collect()
}

fn numeric_error(ctx: &Ctx, cfg: &LensConfig, p: &Phys) -> Result<f64, CliError> {
    let range = ctx.l_max()?.map(|l| 1..=l);
    let c = compare_to_analytics(cfg, &p.atoms, p.omega0_over_gamma0, range, 2000)?;
    Ok(1.0 - c.numeric_fidelity)
}

fn fidelity_vs_loss(ctx: &Ctx, a: &FidelityArgs) -> Result<Table, CliError> {
    let p = phys_from(ctx, &a.phys)?;
    let default_radii: Vec<f64> = [10.5, 20.5, 50.5, 90.5]
        .iter()
        .map(|&nu| LensConfig::radius_for_degree(nu, 1.0))
        .collect();
    let radii = resolve_list(a.radii.as_deref(), &ctx.file, "radii", &default_radii)?;
    let alphas = match a.alphas.as_deref() {
        Some(s) => super::config::parse_list(s)?,
        None => match ctx.file.get_list("alphas")? {
            Some(v) => v,
            None => log_grid(1e-4, 1e-2, ctx.samples(41, 9)?),
        },
    };
    let simulate = ctx.cli.common.simulate;
    let mut header = vec!["R0_over_lambda", "x", "one_minus_F_analytic"];
    if simulate {
        header.push("one_minus_F_numeric");
    }
    let jobs: Vec<(f64, f64)> = radii.iter().flat_map(|&r| alphas.iter().map(move |&x| (r, x))).collect();
    let rows: Vec<Result<Vec<f64>, CliError>> = jobs
        .par_iter()
        .map(|&(r0, alpha)| {
            let cfg = LensConfig::new(r0, 1.0, p.cfg.b, alpha)?;
            let f = entanglement_fidelity(&coupling_rates(&cfg, &p.atoms)?)?;
            let mut row = vec![r0, alpha, 1.0 - f];
            if simulate {
                row.push(numeric_error(ctx, &cfg, &p)?);
            }
            Ok(row)
        })
        .collect();
    let mut t = Table::new(&header);
    for r in rows {
        t.push(r?);
    }
    Ok(t)
}

fn fidelity_vs_detuning(ctx: &Ctx, a: &FidelityArgs) -> Result<Table, CliError> {
    let p = phys_from(ctx, &a.phys)?;
    let nu_c = match a.phys.nu_center {
        Some(v) => v,
        None => ctx.file.get("nu-center")?.unwrap_or(20.5),
    };
    let offsets = match a.detunings.as_deref() {
        Some(s) => super::config::parse_list(s)?,
        None => match ctx.file.get_list("detunings")? {
            Some(v) => v,
            None => {
                let n = ctx.samples(37, 7)?;
                (0..n).map(|k| -0.45 + 0.9 * k as f64 / (n - 1) as f64).collect()
            }
        },
    };
    let simulate = ctx.cli.common.simulate;
    let mut header = vec!["x", "one_minus_F_analytic"];
    if simulate {
        header.push("one_minus_F_numeric");
    }
    let rows: Vec<Result<Vec<f64>, CliError>> = offsets
        .par_iter()
        .map(|&dnu| {
            let r0 = LensConfig::radius_for_degree(nu_c + dnu, 1.0);
            let cfg = LensConfig::new(r0, 1.0, p.cfg.b, p.cfg.alpha)?;
            let f = entanglement_fidelity(&coupling_rates(&cfg, &p.atoms)?)?;
            let mut row = vec![dnu, 1.0 - f];
            if simulate {
                row.push(numeric_error(ctx, &cfg, &p)?);
            }
            Ok(row)
        })
        .collect();
    let mut t = Table::new(&header);
    for r in rows {
        t.push(r?);
    }
    Ok(t)
}

fn fidelity_vs_radius(ctx: &Ctx, a: &FidelityArgs) -> Result<Table, CliError> {
    let p = phys_from(ctx, &a.phys)?;
    let step = if ctx.cli.common.quick { 10 } else { 1 };
    let degrees: Vec<f64> = (10..=90).step_by(step).map(|m| m as f64 + 0.5).collect();
    let simulate = ctx.cli.common.simulate;
    let mut header = vec!["x", "one_minus_F_analytic", "one_minus_F_approx"];
    if simulate {
        header.push("one_minus_F_numeric");
    }
    let rows: Vec<Result<Vec<f64>, CliError>> = degrees
        .par_iter()
        .map(|&nu| {
            let r0 = LensConfig::radius_for_degree(nu, 1.0);
            let cfg = LensConfig::new(r0, 1.0, p.cfg.b, p.cfg.alpha)?;
            let f = entanglement_fidelity(&coupling_rates(&cfg, &p.atoms)?)?;
            let mut row = vec![r0, 1.0 - f, 1.0 - fidelity_approx(r0, p.cfg.alpha)];
            if simulate {
                row.push(numeric_error(ctx, &cfg, &p)?);
            }
            Ok(row)
        })
        .collect();
    let mut t = Table::new(&header);
    for r in rows {
        t.push(r?);
    }
    Ok(t)
}

fn stack_from(ctx: &Ctx, s: &StackArgs) -> Result<PlasmonStack, CliError> {
    let d = PlasmonStack::silver_737();
    let f = &ctx.file;
    Ok(PlasmonStack::new(
        Complex64::new(
            resolve(s.eps_metal_re, f, "eps-metal-re", d.eps_metal.re)?,
            resolve(s.eps_metal_im, f, "eps-metal-im", d.eps_metal.im)?,
        ),
        resolve(s.eps_dielectric, f, "eps-dielectric", d.eps_dielectric)?,
        resolve(s.lambda_nm, f, "lambda-nm", d.lambda0)?,
    )?)
}

fn plasmon_estimate(
    ctx: &Ctx,
    stack: &StackArgs,
    r0: Option<f64>,
    reflectivity: Option<f64>,
    eta: Option<f64>,
    recomputed: bool,
) -> Result<Output, CliError> {
    let f = &ctx.file;
    let s = stack_from(ctx, stack)?;
    let r0 = resolve(r0, f, "r0", 1.749)?;
    let r2 = resolve(reflectivity, f, "reflectivity", 0.95)?;
    let eta = resolve(eta, f, "eta", 3.0)?;
    let samples = ctx.samples(1001, 1000)?;
    let cfg = LensConfig::new(r0, 1.0, 0.1, 0.0)?;
    let alpha_abs = average_absorption(&cfg, &s, samples)?;
    let n_bar = radial_mean_index(&cfg, 64);
    let alpha_mirror = mirror_loss(&cfg, r2, n_bar)?;
    let stated = estimate_from_losses(&cfg, STATED_ALPHA_ABS, STATED_ALPHA_MIRROR, eta)?;
    let mut lines = vec![
        ("alpha_abs_computed", alpha_abs),
        ("alpha_abs_stated", STATED_ALPHA_ABS),
        ("mean_index", n_bar),
        ("alpha_mirror_formula", alpha_mirror),
        ("alpha_mirror_stated", STATED_ALPHA_MIRROR),
        ("alpha_total_stated", stated.alpha),
        ("fidelity_stated", stated.fidelity),
    ];
    if recomputed {
        let e = estimate_from_losses(&cfg, alpha_abs, alpha_mirror, eta)?;
        lines.push(("alpha_total_recomputed", e.alpha));
        lines.push(("fidelity_recomputed", e.fidelity));
    }
    let mut text = String::new();
    for (k, v) in lines {
        text.push_str(&format!("{k} = {}\n", format_number(v)));
    }
    Ok(Output { text, ok: true })
}
