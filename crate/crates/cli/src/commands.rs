use std::collections::BTreeMap;

use serde_json::{json, Value};

use rgg_core::montecarlo::{outcome_counts, pmf_from_counts, MAX_PMF_EDGES, RNG_NAME};
use rgg_core::{
    bound_chain, entropy, entropy_error_bound, estimate_entropy, estimate_pmf, joint_pdf3, pair_count, pair_pdf,
    pmf_exact, prob_complete, prob_connected, shearer_factor, triangle_quantities, BoundChain, ConnectionModel, Disk,
    EdgeVector, EntropyOptions, Error, McSettings, MeasuredEntropy, Model, Pmf, Provenance, Quad, Result, Sides,
};

use crate::args::{Cli, Command, Common, EstimatorArgs, SweepArgs};
use crate::format::{csv_document, fmt_num, header_line};
use crate::validate::{validate_condpdf, validate_pair, validate_pdf3, validate_pmf3};

/// Text to emit and whether a validation check failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub validation_failed: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Self {
            text,
            validation_failed: false,
        }
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;

/// Process exit code for a library error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Unsupported(_) | Error::OutcomeSpaceTooLarge { .. } => EXIT_UNSUPPORTED,
        // A requested accuracy that could not be reached is a failed check, not bad input.
        Error::Accuracy { .. } => EXIT_VALIDATION,
        _ => EXIT_USAGE,
    }
}

struct Context<'a> {
    common: &'a Common,
    domain: Disk,
    quad: Quad,
}

impl Context<'_> {
    fn model(&self) -> Result<Model> {
        ConnectionModel::parse(&self.common.model)
    }

    fn mc(&self) -> Result<McSettings> {
        McSettings::new(self.common.samples, self.common.seed, self.common.workers)
    }

    fn settings(&self, command: &str) -> Value {
        let c = self.common;
        json!({
            "command": command,
            "seed": c.seed,
            "rng": RNG_NAME,
            "samples": c.samples,
            "workers": c.workers,
            "abs_tol": c.abs_tol,
            "diameter": c.diameter,
            "model": c.model,
        })
    }

    fn json(&self, command: &str, mut body: Value) -> Output {
        body["settings"] = self.settings(command);
        Output::ok(serde_json::to_string_pretty(&body).expect("JSON values serialize") + "\n")
    }
}

pub fn run(cli: &Cli) -> Result<Output> {
    let common = &cli.common;
    let domain = Disk::new(common.diameter)?;
    let quad = Quad::with_tolerances(common.abs_tol, 0.0);
    quad.validate()?;
    let ctx = Context { common, domain, quad };
    match &cli.command {
        Command::Pdf3 { r12, r13, r23 } => pdf3(&ctx, *r12, *r13, *r23),
        Command::Pairpdf { r } => pairpdf(&ctx, *r),
        Command::Pmf { n, mc } => pmf(&ctx, *n, *mc),
        Command::Entropy { n } => exact_entropy(&ctx, *n),
        Command::EntropyMc { n, estimator } => entropy_mc(&ctx, *n, estimator),
        Command::Bounds { n, mc } => bounds(&ctx, *n, *mc),
        Command::SweepConnectivity { sweep } => sweep_connectivity(&ctx, sweep),
        Command::SweepEntropy { sweep, estimator } => sweep_entropy(&ctx, sweep, estimator),
        Command::Validate { target, bins } => {
            use crate::args::ValidateTarget::*;
            let report = match target {
                Pdf3 => validate_pdf3(&ctx.domain, &ctx.mc()?, bins.unwrap_or(20), &ctx.quad)?,
                Pair => validate_pair(&ctx.domain, &ctx.mc()?, bins.unwrap_or(50), &ctx.quad)?,
                Condpdf => validate_condpdf(&ctx.domain)?,
                Pmf3 => validate_pmf3(&ctx.model()?, &ctx.domain, &ctx.mc()?, &ctx.quad)?,
            };
            let text =
                serde_json::to_string_pretty(&report.to_json(ctx.settings(&format!("validate {}", target.name()))))
                    .expect("JSON values serialize")
                    + "\n";
            Ok(Output {
                text,
                validation_failed: !report.pass(),
            })
        }
    }
}

fn pdf3(ctx: &Context, r12: f64, r13: f64, r23: f64) -> Result<Output> {
    let sides = Sides::new(r12, r13, r23)?;
    let j = joint_pdf3(&sides, &ctx.domain);
    let q = triangle_quantities(&sides);
    Ok(ctx.json(
        "pdf3",
        json!({
            "sides": [r12, r13, r23],
            "density": j.density,
            "case_tag": j.case.tag(),
            "Q": q.q,
            "d": q.circumdiameter,
            "rbar": q.rbar,
        }),
    ))
}

fn pairpdf(ctx: &Context, r: f64) -> Result<Output> {
    let density = pair_pdf(r, &ctx.domain)?;
    Ok(ctx.json("pairpdf", json!({ "r": r, "density": density })))
}

fn pmf(ctx: &Context, n: usize, mc: bool) -> Result<Output> {
    let model = ctx.model()?;
    let pmf = if mc {
        estimate_pmf(n, &model, &ctx.domain, &ctx.mc()?)?
    } else {
        pmf_exact(n, &model, &ctx.domain, &ctx.quad)?
    };
    let rows: Vec<Vec<String>> = pmf
        .probs
        .iter()
        .enumerate()
        .map(|(code, &p)| {
            let g = EdgeVector::from_code(n, code as u64).expect("code below 2^edges");
            vec![code.to_string(), g.to_bit_string(), fmt_num(p)]
        })
        .collect();
    let header = header_line(
        "pmf",
        ctx.common,
        &[
            ("n", n.to_string()),
            ("method", pmf.method.as_str().into()),
            ("err_est", fmt_num(pmf.error_estimate)),
        ],
    );
    Ok(Output::ok(csv_document(
        header,
        &["code", "edges", "probability"],
        &rows,
    )?))
}

fn exact_entropy(ctx: &Context, n: usize) -> Result<Output> {
    let pmf = pmf_exact(n, &ctx.model()?, &ctx.domain, &ctx.quad)?;
    Ok(ctx.json(
        "entropy",
        json!({
            "n": n,
            "bits": entropy(&pmf),
            "error_bound": entropy_error_bound(&pmf),
            "pmf_error_estimate": pmf.error_estimate,
            "method": pmf.method.as_str(),
        }),
    ))
}

fn options(e: &EstimatorArgs) -> EntropyOptions {
    EntropyOptions {
        miller_madow: !e.no_miller_madow,
        bootstrap: e.bootstrap,
    }
}

fn entropy_mc(ctx: &Context, n: usize, estimator: &EstimatorArgs) -> Result<Output> {
    let opts = options(estimator);
    let e = estimate_entropy(n, &ctx.model()?, &ctx.domain, &ctx.mc()?, &opts)?;
    Ok(ctx.json(
        "entropy-mc",
        json!({
            "n": n,
            "bits": e.bits,
            "std_error": e.std_error,
            "plug_in": e.plug_in,
            "observed_outcomes": e.observed_outcomes,
            "samples": e.samples,
            "miller_madow": opts.miller_madow,
            "bootstrap": opts.bootstrap,
        }),
    ))
}

fn quadrature_entropy(model: &Model, n: usize, ctx: &Context) -> Result<MeasuredEntropy<f64>> {
    let pmf = pmf_exact(n, model, &ctx.domain, &ctx.quad)?;
    Ok(MeasuredEntropy::new(
        entropy(&pmf),
        Provenance::Quadrature,
        entropy_error_bound(&pmf),
    ))
}

/// `H(G_2)` and, for `n >= 3`, `H(G_3)` by quadrature.
fn exact_chain_inputs(model: &Model, n: usize, ctx: &Context) -> Result<BTreeMap<usize, MeasuredEntropy<f64>>> {
    let mut values = BTreeMap::new();
    values.insert(2, quadrature_entropy(model, 2, ctx)?);
    if n >= 3 {
        values.insert(3, quadrature_entropy(model, 3, ctx)?);
    }
    Ok(values)
}

fn chain_json(chain: &BoundChain<f64>) -> Value {
    let entries: Vec<Value> = chain
        .entries
        .iter()
        .map(|e| {
            json!({
                "m": e.m,
                "h_m": e.h_m,
                "factor": e.factor.to_string(),
                "bound": e.bound,
                "provenance": e.provenance.as_str(),
            })
        })
        .collect();
    let tightest = chain.tightest().map(|e| json!({ "m": e.m, "bound": e.bound }));
    json!({ "n": chain.n, "entries": entries, "tightest": tightest, "warnings": chain.warnings })
}

fn bounds(ctx: &Context, n: usize, mc: bool) -> Result<Output> {
    if n < 2 {
        return Err(Error::Argument(format!("a graph needs at least two nodes, got {n}")));
    }
    let model = ctx.model()?;
    let mut values = exact_chain_inputs(&model, n, ctx)?;
    let mut skipped = Vec::new();
    if mc {
        let settings = ctx.mc()?;
        for m in 4..=n {
            if pair_count(m) > MAX_PMF_EDGES {
                skipped.push(m);
                continue;
            }
            let e = estimate_entropy(m, &model, &ctx.domain, &settings, &EntropyOptions::default())?;
            values.insert(
                m,
                MeasuredEntropy::new(e.bits, Provenance::MonteCarlo, 3.0 * e.std_error),
            );
        }
    }
    let chain = bound_chain(n, &values)?;
    let mut body = chain_json(&chain);
    body["skipped_sizes"] = json!(skipped);
    Ok(ctx.json("bounds", body))
}

fn sweep_grid(ctx: &Context, sweep: &SweepArgs) -> Result<Vec<f64>> {
    let diam = ctx.domain.diameter();
    let stop = sweep.r0_stop.unwrap_or(diam);
    let start = sweep.r0_start;
    if !(0.0 <= start && start < stop && stop <= diam) {
        return Err(Error::Argument(format!(
            "sweep range must satisfy 0 <= r0_start < r0_stop <= D, got [{start}, {stop}] with D = {diam}"
        )));
    }
    if sweep.steps < 2 {
        return Err(Error::Argument("a sweep needs at least two steps".into()));
    }
    let last = (sweep.steps - 1) as f64;
    Ok((0..sweep.steps)
        .map(|i| {
            if i + 1 == sweep.steps {
                stop
            } else {
                start + (stop - start) * i as f64 / last
            }
        })
        .collect())
}

/// The `--model` kind with its range parameter set to `r0`.
fn model_at(template: &Model, r0: f64) -> Result<Model> {
    match template {
        ConnectionModel::HardDisk { .. } => ConnectionModel::hard_disk(r0),
        ConnectionModel::ExponentialSoft { beta, .. } => ConnectionModel::exponential_soft(r0, *beta),
        ConnectionModel::Tabulated { .. } => {
            Err(Error::Argument("sweeps need a model with a range parameter r0".into()))
        }
    }
}

fn check_sweep_path(n: usize, mc: bool) -> Result<()> {
    if n < 2 {
        return Err(Error::Argument(format!("a graph needs at least two nodes, got {n}")));
    }
    if n >= 4 && !mc {
        return Err(Error::Unsupported(format!(
            "no exact pmf for n = {n}; pass --mc to estimate it by sampling"
        )));
    }
    Ok(())
}

fn sweep_header(ctx: &Context, command: &str, sweep: &SweepArgs, grid: &[f64], extra: Vec<(&str, String)>) -> String {
    let mut fields = vec![
        ("n", sweep.n.to_string()),
        ("path", if sweep.mc { "monte_carlo" } else { "quadrature" }.to_string()),
        ("r0_start", fmt_num(grid[0])),
        ("r0_stop", fmt_num(grid[grid.len() - 1])),
        ("steps", grid.len().to_string()),
    ];
    fields.extend(extra);
    header_line(command, ctx.common, &fields)
}

fn sweep_connectivity(ctx: &Context, sweep: &SweepArgs) -> Result<Output> {
    check_sweep_path(sweep.n, sweep.mc)?;
    let template = ctx.model()?;
    let grid = sweep_grid(ctx, sweep)?;
    let mut rows = Vec::with_capacity(grid.len());
    for &r0 in &grid {
        let model = model_at(&template, r0)?;
        let (pmf, method, err) = if sweep.mc {
            let counts = outcome_counts(sweep.n, &model, &ctx.domain, &ctx.mc()?)?;
            let pmf: Pmf = pmf_from_counts(sweep.n, &counts)?;
            let n = ctx.common.samples as f64;
            let se = |p: f64| (p * (1.0 - p) / n).sqrt();
            let err = se(prob_connected(&pmf)).max(se(prob_complete(&pmf)));
            (pmf, "monte_carlo", err)
        } else {
            let pmf = pmf_exact(sweep.n, &model, &ctx.domain, &ctx.quad)?;
            let err = pmf.error_estimate;
            (pmf, "quadrature", err)
        };
        rows.push(vec![
            fmt_num(r0),
            fmt_num(prob_connected(&pmf)),
            fmt_num(prob_complete(&pmf)),
            method.to_string(),
            fmt_num(err),
        ]);
    }
    let header = sweep_header(ctx, "sweep-connectivity", sweep, &grid, Vec::new());
    Ok(Output::ok(csv_document(
        header,
        &["r0", "p_connected", "p_complete", "method", "err_est"],
        &rows,
    )?))
}

fn sweep_entropy(ctx: &Context, sweep: &SweepArgs, estimator: &EstimatorArgs) -> Result<Output> {
    check_sweep_path(sweep.n, sweep.mc)?;
    let n = sweep.n;
    if sweep.mc && pair_count(n) > MAX_PMF_EDGES {
        return Err(Error::OutcomeSpaceTooLarge {
            edges: pair_count(n),
            max_edges: MAX_PMF_EDGES,
        });
    }
    let template = ctx.model()?;
    let grid = sweep_grid(ctx, sweep)?;
    let opts = options(estimator);
    let mut rows = Vec::with_capacity(grid.len());
    for &r0 in &grid {
        let model = model_at(&template, r0)?;
        let values = exact_chain_inputs(&model, n, ctx)?;
        let (h, se) = if sweep.mc {
            let e = estimate_entropy(n, &model, &ctx.domain, &ctx.mc()?, &opts)?;
            (e.bits, e.std_error)
        } else {
            let v = values[&n];
            (v.bits, v.uncertainty)
        };
        let chain = bound_chain(n, &values)?;
        let bound = |m: usize| chain.entry(m).map(|e| fmt_num(e.bound)).unwrap_or_default();
        rows.push(vec![fmt_num(r0), fmt_num(h), fmt_num(se), bound(3), bound(2)]);
    }
    let factor = |m: usize| {
        shearer_factor(n, m)
            .map(|f| f.to_string())
            .unwrap_or_else(|_| "1".into())
    };
    let header = sweep_header(
        ctx,
        "sweep-entropy",
        sweep,
        &grid,
        vec![
            ("miller_madow", opts.miller_madow.to_string()),
            ("bootstrap", opts.bootstrap.to_string()),
            ("factor_g3", factor(3)),
            ("factor_g2", factor(2)),
        ],
    );
    Ok(Output::ok(csv_document(
        header,
        &["r0", "H_exact_or_mc", "H_std_err", "bound_from_G3", "bound_from_G2"],
        &rows,
    )?))
}
