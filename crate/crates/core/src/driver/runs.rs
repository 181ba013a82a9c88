use rayon::prelude::*;

use crate::adapt::{refine, regularize};
use crate::error::{Error, Result};
use crate::fracture::{build_jdomain, compute_sifs, extend_crack, tip_mesh_size, Extension, SifResult};
use crate::geometry::Vec2;
use crate::material::Material;
use crate::mesh::{PolyMesh, TipEnd, TipRef};
use crate::problems::{MeshFamily, Problem, SlantedCrackProblem};
use crate::recovery::{dorfler_mark, error_norms, recover, ErrorNorms, RecoveredField};
use crate::system::{solve_problem, Solution};

use super::config::{AdaptSection, SimulationConfig};
use super::output::{OutputSink, Snapshot};
use super::report::{loglog_slope, ConvergenceRecord, PropagationRecord, RefinementRecord, RunReport, Slopes, TableRow, Termination};

/// Final state of an adaptive solve.
pub struct AdaptiveOutcome {
    pub mesh: PolyMesh,
    pub solution: Solution,
    pub recovered: RecoveredField,
    pub norms: ErrorNorms,
    /// `Converged` or `RefinementCap`.
    pub status: Termination,
}

/// Solve, estimate, and stop or mark and refine, until η < `eta_stop` or
/// `max_refinements` refinements have been made. Records go to `report`
/// tagged with `propagation_step`.
pub fn adaptive_solve(
    problem: &dyn Problem,
    material: &Material,
    mut mesh: PolyMesh,
    params: &AdaptSection,
    propagation_step: usize,
    report: &mut RunReport,
) -> Result<AdaptiveOutcome> {
    let mut step = 0;
    loop {
        let ctx = |e: Error| e.at_step(step);
        let bcs = problem.boundary_conditions(&mesh).map_err(ctx)?;
        let solution = solve_problem(&mesh, material, params.gamma, &bcs).map_err(ctx)?;
        let recovered = recover(&mesh, &solution).map_err(ctx)?;
        let norms = error_norms(&mesh, &solution, &recovered, problem.exact()).map_err(ctx)?;
        let mut record = RefinementRecord {
            propagation_step,
            step,
            n_elements: mesh.n_elements(),
            n_dofs: solution.stats.n_dofs,
            eta: norms.eta,
            e_l2: norms.e_l2,
            e_h1: norms.e_h1,
            e_spr: norms.e_spr,
            marked: 0,
            hanging_nodes: mesh.hanging_nodes().len(),
        };
        let done = if norms.eta < params.eta_stop {
            Some(Termination::Converged)
        } else if step >= params.max_refinements {
            Some(Termination::RefinementCap)
        } else {
            None
        };
        if let Some(status) = done {
            report.refinement.push(record);
            return Ok(AdaptiveOutcome { mesh, solution, recovered, norms, status });
        }
        let marked = dorfler_mark(&norms.indicators, params.theta);
        record.marked = marked.len();
        report.refinement.push(record);
        let (refined, _) = refine(&mesh, params.scheme, &marked).map_err(ctx)?;
        mesh = regularize(&refined, params.epsilon_merge).map_err(ctx)?;
        step += 1;
    }
}

/// Problem, material and initial mesh described by a config.
pub struct Setup {
    pub problem: Box<dyn Problem>,
    pub material: Material,
    pub mesh: PolyMesh,
    pub sink: OutputSink,
}

impl Setup {
    pub fn from_config(cfg: &SimulationConfig) -> Result<Setup> {
        cfg.validate()?;
        let problem = crate::problems::by_name(&cfg.problem.name)?;
        let material = cfg.material.apply(problem.material())?;
        let mesh = match &cfg.problem.mesh {
            Some(path) => crate::mesh::io::read_mesh(path)?,
            None => problem.initial_mesh(cfg.problem.family.unwrap_or(problem.default_family()), cfg.problem.level, cfg.output.seed)?,
        };
        let sink = OutputSink::new(cfg.output.dir.as_deref(), cfg.output.vtk)?;
        Ok(Setup { problem, material, mesh, sink })
    }
}

pub fn run_adaptive_solve(cfg: &SimulationConfig) -> Result<RunReport> {
    let setup = Setup::from_config(cfg)?;
    let mut report = RunReport::new(setup.problem.name());
    let out = adaptive_solve(setup.problem.as_ref(), &setup.material, setup.mesh, &cfg.adapt, 0, &mut report)?;
    setup.sink.snapshot(
        "adaptive",
        &out.mesh,
        &Snapshot { solution: Some(&out.solution), recovered: Some(&out.recovered), indicators: Some(&out.norms.indicators), q: None },
    )?;
    setup.sink.mesh("adaptive", &out.mesh)?;
    report.status = out.status;
    setup.sink.report(&report)?;
    Ok(report)
}

/// Tip-neighborhood refinements tried before the J-domain is shrunk.
const MAX_TIP_REFINEMENTS: usize = 8;

/// SIFs at `tip`, halving the J-domain once if it collides with the boundary.
pub fn sifs_with_retry(mesh: &PolyMesh, solution: &Solution, tip: TipRef, factor: f64) -> Result<(SifResult, f64)> {
    match compute_sifs(mesh, solution, tip, factor) {
        Err(Error::JDomainCollision(_)) => {
            let f = 0.5 * factor;
            Ok((compute_sifs(mesh, solution, tip, f)?, f))
        }
        other => Ok((other?, factor)),
    }
}

/// SIFs after an adaptive solve. While the J-domain collides with the
/// boundary or another tip, the elements around the tips are refined and the
/// adaptive solve is repeated; only then is the domain shrunk.
pub fn resolved_sifs(
    problem: &dyn Problem,
    material: &Material,
    mut out: AdaptiveOutcome,
    cfg: &SimulationConfig,
    propagation_step: usize,
    report: &mut RunReport,
) -> Result<(AdaptiveOutcome, TipRef, SifResult, f64)> {
    let factor = cfg.fracture.r_out_factor;
    for _ in 0..MAX_TIP_REFINEMENTS {
        let tip = problem.tip(&out.mesh).ok_or_else(|| Error::InvalidInput("problem has no crack tip".into()))?;
        match compute_sifs(&out.mesh, &out.solution, tip, factor) {
            Err(Error::JDomainCollision(_)) => {
                let marked = crate::adapt::tip_neighborhood(&out.mesh, factor);
                let (refined, _) = refine(&out.mesh, cfg.adapt.scheme, &marked)?;
                let mesh = regularize(&refined, cfg.adapt.epsilon_merge)?;
                out = adaptive_solve(problem, material, mesh, &cfg.adapt, propagation_step, report)?;
            }
            other => return Ok((out, tip, other?, factor)),
        }
    }
    let tip = problem.tip(&out.mesh).ok_or_else(|| Error::InvalidInput("problem has no crack tip".into()))?;
    let (sifs, f) = sifs_with_retry(&out.mesh, &out.solution, tip, factor)?;
    Ok((out, tip, sifs, f))
}

/// Growth increment: the configured value, the problem's own, or
/// min(a/10, 2 h_tip).
fn growth_increment(cfg: &SimulationConfig, problem: &dyn Problem, mesh: &PolyMesh, tip: TipRef) -> f64 {
    cfg.fracture
        .delta_a
        .or(problem.default_delta_a())
        .unwrap_or_else(|| (0.1 * mesh.cracks()[tip.crack].length()).min(2.0 * tip_mesh_size(mesh, tip)))
}

/// Crack polyline ordered so that the tracked tip comes last.
fn oriented_path(mesh: &PolyMesh, tip: TipRef) -> Vec<Vec2> {
    let mut p = mesh.cracks()[tip.crack].polyline.clone();
    if mesh.tip(tip).end == TipEnd::Start {
        p.reverse();
    }
    p
}

/// Growth loop: adaptive solve, SIFs, kink angle, extension. `max_steps`
/// extensions at most; 0 gives only the initial solve.
pub fn propagate(problem: &dyn Problem, material: &Material, mut mesh: PolyMesh, cfg: &SimulationConfig, sink: &OutputSink) -> Result<RunReport> {
    let mut report = RunReport::new(problem.name());
    let max_steps = cfg.fracture.max_steps;
    let mut step = 0;
    loop {
        let ctx = |e: Error| e.at_step(step);
        let out = adaptive_solve(problem, material, mesh, &cfg.adapt, step, &mut report).map_err(ctx)?;
        let (out, tip, sifs, factor) = resolved_sifs(problem, material, out, cfg, step, &mut report).map_err(ctx)?;
        let tip_pos = out.mesh.vertex(out.mesh.tip(tip).vertex);
        report.propagation.push(PropagationRecord {
            step,
            tip: tip_pos,
            k1: sifs.k1,
            k2: sifs.k2,
            theta: sifs.theta,
            k_eq: sifs.k_eq,
            r_out_factor: factor,
            n_dofs: out.solution.stats.n_dofs,
            eta: out.norms.eta,
        });
        if sink.vtk && sink.dir.is_some() {
            let q = build_jdomain(&out.mesh, tip, factor).map(|j| j.q).ok();
            sink.snapshot(
                &format!("step_{step:03}"),
                &out.mesh,
                &Snapshot {
                    solution: Some(&out.solution),
                    recovered: Some(&out.recovered),
                    indicators: Some(&out.norms.indicators),
                    q: q.as_deref(),
                },
            )?;
        }
        report.crack_path = oriented_path(&out.mesh, tip);
        if step >= max_steps {
            report.status = Termination::MaxSteps;
            sink.mesh("final", &out.mesh)?;
            break;
        }
        let da = growth_increment(cfg, problem, &out.mesh, tip);
        match extend_crack(&out.mesh, tip, sifs.theta, da).map_err(ctx)? {
            Extension::Extended(m) => mesh = m,
            Extension::ReachedBoundary { hit, tag } => {
                report.crack_path.push(hit);
                report.status = Termination::ReachedBoundary { point: hit, tag };
                sink.mesh("final", &out.mesh)?;
                break;
            }
        }
        step += 1;
    }
    sink.report(&report)?;
    Ok(report)
}

pub fn run_propagation(cfg: &SimulationConfig) -> Result<RunReport> {
    let setup = Setup::from_config(cfg)?;
    propagate(setup.problem.as_ref(), &setup.material, setup.mesh, cfg, &setup.sink)
}

/// Uniform sequences of `levels` meshes per family, with error norms at each
/// level and log-log slopes against the largest element diameter.
pub fn convergence_study(problem: &dyn Problem, material: &Material, families: &[MeshFamily], levels: usize, gamma: f64, seed: u64) -> Result<RunReport> {
    let mut report = RunReport::new(problem.name());
    for &family in families {
        let records: Vec<ConvergenceRecord> = (0..levels)
            .into_par_iter()
            .map(|level| -> Result<ConvergenceRecord> {
                let mesh = problem.initial_mesh(family, level, seed)?;
                let bcs = problem.boundary_conditions(&mesh)?;
                let sol = solve_problem(&mesh, material, gamma, &bcs)?;
                let rec = recover(&mesh, &sol)?;
                let n = error_norms(&mesh, &sol, &rec, problem.exact())?;
                let h = (0..mesh.n_elements()).map(|e| mesh.element_geometry(e).diameter).fold(0.0, f64::max);
                Ok(ConvergenceRecord { family: family.to_string(), level, h, n_dofs: sol.stats.n_dofs, e_l2: n.e_l2, e_h1: n.e_h1, e_spr: n.e_spr, eta: n.eta })
            })
            .collect::<Result<_>>()?;
        let h: Vec<f64> = records.iter().map(|r| r.h).collect();
        let slope = |f: fn(&ConvergenceRecord) -> Option<f64>| -> Option<f64> {
            let y: Option<Vec<f64>> = records.iter().map(f).collect();
            y.and_then(|y| loglog_slope(&h, &y))
        };
        report.slopes.push(Slopes {
            family: family.to_string(),
            e_l2: slope(|r| r.e_l2),
            e_h1: slope(|r| r.e_h1),
            e_spr: slope(|r| r.e_spr),
            eta: slope(|r| Some(r.eta)),
        });
        report.convergence.extend(records);
    }
    Ok(report)
}

pub fn run_convergence_study(cfg: &SimulationConfig) -> Result<RunReport> {
    let setup = Setup::from_config(cfg)?;
    let report = convergence_study(setup.problem.as_ref(), &setup.material, &cfg.study.families, cfg.study.levels, cfg.adapt.gamma, cfg.output.seed)?;
    setup.sink.report(&report)?;
    Ok(report)
}

/// One adaptive solve per (α, β), SIFs at the +x tip. Angles in degrees.
pub fn slanted_crack_table(betas: &[f64], alphas: &[f64], family: MeshFamily, level: usize, cfg: &SimulationConfig) -> Result<RunReport> {
    let cases: Vec<(f64, f64)> = alphas.iter().flat_map(|&a| betas.iter().map(move |&b| (a, b))).collect();
    let rows: Vec<(TableRow, Vec<RefinementRecord>)> = cases
        .par_iter()
        .map(|&(alpha, beta)| -> Result<_> {
            let p = SlantedCrackProblem::with_angles(beta, alpha);
            let mut local = RunReport::new(p.name());
            let mesh = p.initial_mesh(family, level, cfg.output.seed)?;
            let out = adaptive_solve(&p, &p.material, mesh, &cfg.adapt, 0, &mut local)?;
            let (out, _, sifs, _) = resolved_sifs(&p, &p.material, out, cfg, 0, &mut local)?;
            let (k1_exact, k2_exact) = p.exact_sifs();
            let row = TableRow { beta_deg: beta, alpha, k1: sifs.k1, k1_exact, k2: sifs.k2, k2_exact, theta: sifs.theta, n_dofs: out.solution.stats.n_dofs };
            Ok((row, local.refinement))
        })
        .collect::<Result<_>>()?;
    let mut report = RunReport::new("slanted");
    for (row, recs) in rows {
        report.table.push(row);
        report.refinement.extend(recs);
    }
    Ok(report)
}

pub fn run_slanted_crack_table(cfg: &SimulationConfig) -> Result<RunReport> {
    let sink = OutputSink::new(cfg.output.dir.as_deref(), cfg.output.vtk)?;
    let report = slanted_crack_table(&cfg.table.betas, &cfg.table.alphas, cfg.problem.family.unwrap_or(MeshFamily::T3), cfg.problem.level, cfg)?;
    sink.report(&report)?;
    Ok(report)
}
