use std::path::Path;

use qlift_core::dynamics::{choi_matrix, is_cptp, reduced_dynamics_map, trace_preservation_error};
use qlift_core::io;
use qlift_core::liftings::nogo::{run_nogo, NogoConfig};
use qlift_core::liftings::{
    analyze, check_hermiticity_preserving, check_trace_constraint, extract_reference,
    product_lifting, proof_step_diagnostics, AnalysisVerdict, AnalyzeConfig,
};
use qlift_core::measures::{
    choquet_reconstruct, choquet_spectral, classical_lift, empirical_state, estimate_expectation,
    nonaffine_witness, split_lift, LiftTable,
};
use qlift_core::operators::{
    check_psd, kron, pairing, partial_trace_env, partial_trace_sys, trace_norm, Hermitian, Matrix,
};
use qlift_core::states::{gram_matrix, purify, Density};
use qlift_core::tolerance::DEFAULT;

use crate::error::{CliError, CliResult, Kind};
use crate::files::{read_input, write_atomic};
use crate::report::Report;
use crate::runlog::RunRecord;
use crate::{
    AnalyzeArgs, ChoquetArgs, ClassicalLiftArgs, Command, EmpiricalArgs, EstimateArgs, EvolveArgs,
    LiftArgs, NogoArgs, PurifyArgs, ReduceArgs, Side,
};

pub struct Outcome {
    pub report: Report,
    /// Set when the command completed but must exit nonzero.
    pub failure: Option<CliError>,
}

impl From<Report> for Outcome {
    fn from(report: Report) -> Self {
        Self {
            report,
            failure: None,
        }
    }
}

struct Ctx<'a> {
    record: &'a mut RunRecord,
}

impl Ctx<'_> {
    fn text(&mut self, name: &str, path: &Path) -> CliResult<String> {
        let input = read_input(name, path)?;
        self.record
            .inputs
            .push((input.name, input.path, input.sha256));
        Ok(input.text)
    }

    fn matrix(&mut self, name: &str, path: &Path) -> CliResult<Matrix<f64>> {
        Ok(io::read_matrix(&self.text(name, path)?)?)
    }

    fn density(&mut self, name: &str, path: &Path) -> CliResult<Density<f64>> {
        Ok(Density::new(self.matrix(name, path)?, &DEFAULT)?)
    }

    fn hermitian(&mut self, name: &str, path: &Path) -> CliResult<Hermitian<f64>> {
        Ok(Hermitian::new(self.matrix(name, path)?, DEFAULT.hermitian)?)
    }

    fn write(&mut self, path: &Path, contents: &str) -> CliResult<()> {
        write_atomic(path, contents)?;
        self.record.outputs.push(path.to_path_buf());
        Ok(())
    }

    fn write_report(&mut self, path: Option<&Path>, report: &Report) -> CliResult<()> {
        match path {
            Some(p) => self.write(p, &report.render()),
            None => Ok(()),
        }
    }
}

pub fn run(cmd: &Command, record: &mut RunRecord) -> CliResult<Outcome> {
    let mut ctx = Ctx { record };
    match cmd {
        Command::Lift(a) => lift(&mut ctx, a),
        Command::Reduce(a) => reduce(&mut ctx, a),
        Command::Analyze(a) => analyze_cmd(&mut ctx, a),
        Command::Purify(a) => purify_cmd(&mut ctx, a),
        Command::Evolve(a) => evolve(&mut ctx, a),
        Command::Choquet(a) => choquet(&mut ctx, a),
        Command::Estimate(a) => estimate(&mut ctx, a),
        Command::Empirical(a) => empirical(&mut ctx, a),
        Command::ClassicalLift(a) => classical(&mut ctx, a),
        Command::Nogo(a) => nogo(&mut ctx, a),
    }
}

fn lift(ctx: &mut Ctx, a: &LiftArgs) -> CliResult<Outcome> {
    ctx.record.command = "lift".into();
    let rho = ctx.density("state", &a.state)?;
    let d = ctx.density("ref", &a.reference)?;
    let w = kron(rho.matrix(), d.matrix());
    ctx.write(&a.out, &io::write_matrix(&w))?;
    if let Some(path) = &a.emit_lifting {
        ctx.write(path, &io::write_lifting(&product_lifting(&d, rho.dim())))?;
    }
    let mut r = Report::new();
    r.int("ds", rho.dim() as i128)
        .int("de", d.dim() as i128)
        .float("trace", w.trace().re);
    Ok(r.into())
}

fn reduce(ctx: &mut Ctx, a: &ReduceArgs) -> CliResult<Outcome> {
    ctx.record.command = "reduce".into();
    let (ds, de) = a.dims;
    ctx.record.param("ds", ds as i64);
    ctx.record.param("de", de as i64);
    ctx.record
        .param("side", if a.side == Side::Env { "env" } else { "sys" });
    let w = ctx.matrix("state", &a.state)?;
    let out = match a.side {
        Side::Env => partial_trace_env(&w, ds, de)?,
        Side::Sys => partial_trace_sys(&w, ds, de)?,
    };
    ctx.write(&a.out, &io::write_matrix(&out))?;
    let mut r = Report::new();
    r.int("dim", out.dim() as i128)
        .float("trace_re", out.trace().re)
        .float("trace_im", out.trace().im);
    Ok(r.into())
}

fn analyze_cmd(ctx: &mut Ctx, a: &AnalyzeArgs) -> CliResult<Outcome> {
    ctx.record.command = "analyze".into();
    ctx.record.param("tol", a.tol);
    let f = io::read_lifting(&ctx.text("lifting", &a.lifting)?)?;
    if (f.ds(), f.de()) != a.dims {
        return Err(CliError::new(
            Kind::Dimension,
            format!(
                "lifting file has dims {},{} but --dims is {},{}",
                f.ds(),
                f.de(),
                a.dims.0,
                a.dims.1
            ),
        ));
    }
    let cfg = AnalyzeConfig::default().with_residual(a.tol);
    let verdict = analyze(&f, &cfg);
    let mut r = Report::new();
    r.str("verdict", verdict.kind());
    match &verdict {
        AnalysisVerdict::Product { residual, .. } => {
            r.float("residual", *residual);
        }
        AnalysisVerdict::ViolatesTrace {
            max_deviation,
            witness,
        } => {
            r.float("max_deviation", *max_deviation)
                .str("witness", witness.to_string());
        }
        AnalysisVerdict::ViolatesHermiticity { max_deviation } => {
            r.float("max_deviation", *max_deviation);
        }
        AnalysisVerdict::ViolatesPositivity(w) => {
            r.str("witness", w.input.to_string())
                .bool("witness_structured", w.input.is_structured())
                .float("min_eigenvalue", w.min_eigenvalue)
                .matrix("witness_state", w.state.matrix());
        }
        AnalysisVerdict::Inconclusive { residual } => {
            r.float("residual", *residual);
        }
    }
    r.float("hermiticity_deviation", check_hermiticity_preserving(&f))
        .float("trace_deviation", check_trace_constraint(&f));
    for (name, value) in proof_step_diagnostics(&f).rows() {
        r.float(format!("diagnostics.{name}"), value);
    }
    let reference = extract_reference(&f);
    r.int("reference.dim", reference.dim() as i128)
        .matrix("reference.entries", &reference);
    if let Some(path) = &a.reference_out {
        ctx.write(path, &io::write_matrix(&reference))?;
    }
    ctx.write_report(a.report.out.as_deref(), &r)?;
    Ok(r.into())
}

fn purify_cmd(ctx: &mut Ctx, a: &PurifyArgs) -> CliResult<Outcome> {
    ctx.record.command = "purify".into();
    ctx.record.param("denv", a.denv as i64);
    let s = ctx.density("state", &a.state)?;
    let p = purify(&s, a.denv)?;
    ctx.write(&a.out, &io::write_pure(&p))?;
    let reduced = partial_trace_env(&p.projector(), s.dim(), a.denv)?;
    let gram = gram_matrix(p.vector(), s.dim(), a.denv)?;
    let mut r = Report::new();
    r.int("ds", s.dim() as i128)
        .int("de", a.denv as i128)
        .float("reduction_error", trace_norm(&(&reduced - s.matrix())))
        .float("gram_error", (&gram - s.matrix()).max_abs());
    Ok(r.into())
}

fn evolve(ctx: &mut Ctx, a: &EvolveArgs) -> CliResult<Outcome> {
    ctx.record.command = "evolve".into();
    ctx.record.param("t", a.t);
    let h = ctx.hermitian("ham", &a.ham)?;
    let d = ctx.density("ref", &a.reference)?;
    let rho = ctx.density("state", &a.state)?;
    let ch = reduced_dynamics_map(&h, &d, a.t)?;
    if ch.dim() != rho.dim() {
        return Err(CliError::new(
            Kind::Dimension,
            format!(
                "state of dim {} for a system of dim {}",
                rho.dim(),
                ch.dim()
            ),
        ));
    }
    let out = ch.apply(rho.matrix());
    ctx.write(&a.out, &io::write_matrix(&out))?;
    if let Some(path) = &a.emit_channel {
        ctx.write(path, &io::write_channel(&ch))?;
    }
    let choi = choi_matrix(&ch);
    let choi_min = check_psd(&choi.hermitian_part(), DEFAULT.positivity)?.min_eigenvalue;
    let mut r = Report::new();
    r.float("trace", out.trace().re)
        .bool("cptp", is_cptp(&ch, DEFAULT.positivity))
        .float("choi_min_eigenvalue", choi_min)
        .float("trace_preservation_error", trace_preservation_error(&ch));
    Ok(r.into())
}

fn choquet(ctx: &mut Ctx, a: &ChoquetArgs) -> CliResult<Outcome> {
    ctx.record.command = "choquet".into();
    let mut r = Report::new();
    match &a.state {
        Some(path) => {
            let w = ctx.density("state", path)?;
            let mu = choquet_spectral(&w, &DEFAULT);
            let out = a
                .out
                .as_deref()
                .ok_or_else(|| CliError::usage("--out is required with --state"))?;
            ctx.write(out, &io::write_projector_list(&mu))?;
            let back = choquet_reconstruct(&mu);
            r.int("atoms", mu.len() as i128)
                .floats(
                    "weights",
                    &mu.entries().iter().map(|(w, _)| *w).collect::<Vec<_>>(),
                )
                .float(
                    "reconstruction_error",
                    (back.matrix() - w.matrix()).frobenius_norm(),
                );
        }
        None => {
            let w = nonaffine_witness::<f64>();
            let (a1, a2) = (
                choquet_reconstruct(&w.first),
                choquet_reconstruct(&w.second),
            );
            let mut min_distance = f64::INFINITY;
            for (_, x) in w.first.entries() {
                for (_, y) in w.second.entries() {
                    min_distance =
                        min_distance.min((&x.projector() - &y.projector()).frobenius_norm());
                }
            }
            r.matrix("state", w.state.matrix())
                .matrix("first.reconstruction", a1.matrix())
                .matrix("second.reconstruction", a2.matrix())
                .float(
                    "reconstruction_distance",
                    trace_norm(&(a1.matrix() - a2.matrix())),
                )
                .float("min_atom_distance", min_distance)
                .bool("disjoint_atoms", min_distance > 1e-12);
            ctx.write_report(a.out.as_deref(), &r)?;
        }
    }
    Ok(r.into())
}

fn estimate(ctx: &mut Ctx, a: &EstimateArgs) -> CliResult<Outcome> {
    ctx.record.command = "estimate".into();
    ctx.record.param("n", a.n as i64);
    ctx.record.param("seed", a.seed.to_string());
    let b = ctx.density("state", &a.state)?;
    let obs = ctx.hermitian("obs", &a.obs)?;
    let est = estimate_expectation(&b, &obs, a.n, a.seed)?;
    let mut r = Report::new();
    r.float("estimate", est.mean)
        .float("stderr", est.stderr)
        .float("ratio_estimate", est.ratio.mean)
        .float("ratio_stderr", est.ratio.stderr)
        .float("exact", pairing(obs.matrix(), b.matrix()).re)
        .int("n", est.n as i128)
        .int("seed", est.seed as i128);
    ctx.write_report(a.report.out.as_deref(), &r)?;
    Ok(r.into())
}

fn empirical(ctx: &mut Ctx, a: &EmpiricalArgs) -> CliResult<Outcome> {
    ctx.record.command = "empirical".into();
    ctx.record.param("n", a.n as i64);
    ctx.record.param("seed", a.seed.to_string());
    let b = ctx.density("state", &a.state)?;
    let e = empirical_state(&b, a.n, a.seed)?;
    ctx.write(&a.out, &io::write_matrix(e.matrix()))?;
    let mut r = Report::new();
    r.float("trace_norm_error", trace_norm(&(e.matrix() - b.matrix())))
        .int("n", a.n as i128)
        .int("seed", a.seed as i128);
    Ok(r.into())
}

fn classical(ctx: &mut Ctx, a: &ClassicalLiftArgs) -> CliResult<Outcome> {
    ctx.record.command = "classical-lift".into();
    let upsilon = io::read_measure(&ctx.text("upsilon", &a.upsilon)?)?;
    let table: LiftTable<f64> = match (&a.table, &a.split) {
        (Some(path), _) => io::read_lift_table(&ctx.text("table", path)?)?,
        (None, Some(split)) => {
            let q1 = &split.0;
            let (p1, p2) = (a.p1.unwrap_or(0), a.p2.unwrap_or(0));
            let p = a.p.unwrap_or(p1.max(p2) + 1);
            if let Some(&bad) = q1.iter().find(|&&q| q >= upsilon.len()) {
                return Err(CliError::new(
                    Kind::Dimension,
                    format!("split point {bad} outside Q of size {}", upsilon.len()),
                ));
            }
            let mut mask = vec![false; upsilon.len()];
            for &q in q1 {
                mask[q] = true;
            }
            ctx.record.param("split", format!("{q1:?}"));
            ctx.record.param("p1", p1 as i64);
            ctx.record.param("p2", p2 as i64);
            split_lift(&mask, p, p1, p2)?
        }
        (None, None) => return Err(CliError::usage("either --table or --split is required")),
    };
    let out = classical_lift(&table, &upsilon)?;
    ctx.write(&a.out, &io::write_product_measure(&out))?;
    let marginal_error = out.marginal().distance(&upsilon);
    let mut r = Report::new();
    r.int("q", out.q() as i128)
        .int("p", out.p() as i128)
        .int("product_rank", out.product_rank() as i128)
        .bool("is_product", out.is_product())
        .float("marginal_error", marginal_error)
        .bool("upsilon_is_probability", upsilon.is_probability());
    Ok(r.into())
}

fn nogo(ctx: &mut Ctx, a: &NogoArgs) -> CliResult<Outcome> {
    ctx.record.command = "nogo".into();
    ctx.record.param("ds", a.ds as i64);
    ctx.record.param("de", a.de as i64);
    ctx.record.param("trials", a.trials as i64);
    ctx.record.param("eps", a.eps);
    ctx.record.param("seed", a.seed.to_string());
    ctx.record.param("tol", a.tol);
    if a.ds == 0 || a.de == 0 {
        return Err(CliError::usage("dimensions must be positive"));
    }
    let mut cfg = NogoConfig::new(a.ds, a.de, a.trials, a.eps, a.seed);
    cfg.analyze = cfg.analyze.with_residual(a.tol);
    let summary = run_nogo::<f64>(&cfg);
    let mut r = Report::new();
    r.int("trials", a.trials as i128)
        .int("product", summary.product as i128)
        .int("violates_trace", summary.violates_trace as i128)
        .int("violates_hermiticity", summary.violates_hermiticity as i128)
        .int("violates_positivity", summary.violates_positivity as i128)
        .int(
            "structured_witnesses",
            summary
                .trials
                .iter()
                .filter(|t| t.structured_witness)
                .count() as i128,
        )
        .int("falsifiers", summary.falsifiers as i128);
    for t in &summary.trials {
        let mut line = format!("{} {}", t.verdict, crate::report::float(t.value));
        if let Some(w) = &t.witness {
            line += &format!(" {w}");
        }
        r.str(format!("trial.{}", t.index), line);
    }
    ctx.write_report(a.report.out.as_deref(), &r)?;
    let failure = (summary.falsifiers > 0).then(|| {
        CliError::new(
            Kind::Falsifier,
            format!(
                "{} trials passed every check without factorizing",
                summary.falsifiers
            ),
        )
    });
    Ok(Outcome { report: r, failure })
}
