//! One function per subcommand, each turning a resolved config into a report.

use std::f64::consts::PI;
use std::fmt::Display;

use rayon::prelude::*;
use whittaker_core::classical::{eigencheck_with, whittaker_classical, ClassicalEvaluator, QuadratureConfig};
use whittaker_core::scaling::{
    eta_modular_residual, eta_modular_residual_uncorrected, f_alpha_with, hamiltonian_limit_residual, limit_scan,
    loglog_slope, a_epsilon, ConstantFunction, GaussianFunction, IntegerPart, ScalingContext, TestFunction,
};
use whittaker_core::toda::{verify_eigen_with, whittaker_lattice_function};
use whittaker_core::whittaker::{
    evaluate, psi_character, EvalMode, Method, QSpec, QWhittakerValue, RationalMode, SeriesMode,
};
use whittaker_core::{dominant_weights, DominantWeight, Error, SpectralParams};

use crate::config::{PsiMethod, RunConfig, TestFunctionArg};
use crate::error::CliError;
use crate::report::{Report, Row, Status};

const LIMIT_COLUMNS: [&str; 8] = ["epsilon", "m_eps", "re_q", "im_q", "re_cl", "im_cl", "abs_err", "rel_err"];
const DEFAULT_EPS_SCAN: [f64; 3] = [0.1, 0.05, 0.025];
const DEFAULT_Y: [f64; 3] = [-1.0, 0.0, 1.0];
const DEFAULT_ETA_EPS: [f64; 4] = [1.0, 2.0, 2.0 * PI, 8.0];
const DEFAULT_STEP: f64 = 0.05;

fn convention_name(c: IntegerPart) -> &'static str {
    match c {
        IntegerPart::Floor => "floor",
        IntegerPart::TowardZero => "toward-zero",
    }
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

fn weight_set(cfg: &RunConfig) -> Result<(usize, Vec<DominantWeight>), CliError> {
    let weights: Vec<Vec<i64>> = match (cfg.weights.is_empty(), cfg.max_spread) {
        (false, Some(_)) => return Err(CliError::invalid("give either --weight or --max-spread, not both")),
        (false, None) => cfg.weights.clone(),
        (true, Some(s)) => {
            let rank = cfg.require_rank()?;
            dominant_weights(rank, s).into_iter().map(|w| w.entries().to_vec()).collect()
        }
        (true, None) => return Err(CliError::invalid("--weight or --max-spread is required")),
    };
    let rank = cfg.rank_for("weight", weights[0].len())?;
    if let Some(w) = weights.iter().find(|w| w.len() != rank) {
        return Err(CliError::invalid(format!("weight {w:?} does not have {rank} entries")));
    }
    Ok((rank, weights.into_iter().map(DominantWeight::new).collect()))
}

fn entries(ws: &[DominantWeight]) -> Vec<Vec<i64>> {
    ws.iter().map(|w| w.entries().to_vec()).collect()
}

fn no_flag<T>(v: &Option<T>, flag: &str, why: &str) -> Result<(), CliError> {
    match v {
        Some(_) => Err(CliError::invalid(format!("--{flag} cannot be used {why}"))),
        None => Ok(()),
    }
}

/// `Psi(p)` for one or more weights.
pub fn qpsi(cfg: &RunConfig) -> Result<Report, CliError> {
    let (rank, weights) = weight_set(cfg)?;
    let method = cfg.method.unwrap_or_default();
    let mut config = Row::new().with("rank", rank).with("weights", entries(&weights)).with(
        "method",
        match method {
            PsiMethod::Direct => "direct",
            PsiMethod::Recursive => "recursive",
            PsiMethod::Character => "character",
        },
    );

    if method == PsiMethod::Character {
        for (v, flag) in [(cfg.z.is_some(), "z"), (cfg.lambda.is_some(), "lambda"), (cfg.q.is_some(), "q")] {
            if v {
                return Err(CliError::invalid(format!("--{flag} cannot be used with --method character")));
            }
        }
        no_flag(&cfg.eps, "eps", "with --method character")?;
        let order = cfg.truncation()?;
        config = config.with("truncation", order);
        let mut report = Report::new("qpsi", config);
        let values: Vec<_> = weights.par_iter().map(|p| psi_character(p, order)).collect();
        for (p, v) in weights.iter().zip(values) {
            match v {
                Ok(v) => report.results.push(
                    Row::new()
                        .with("weight", p.entries())
                        .with("kind", "series")
                        .with("value", v.to_string())
                        .with("positive", true),
                ),
                Err(e @ Error::Positivity { .. }) => {
                    report.status = Status::Failed;
                    report.results.push(
                        Row::new().with("weight", p.entries()).with("kind", "series").with("value", None::<String>).with("positive", false),
                    );
                    report.residuals.push(Row::new().with("weight", p.entries()).with("check", "positivity").with("detail", e.to_string()));
                }
                Err(e) => return Err(e.into()),
            }
        }
        return Ok(report);
    }

    let (spec, q) = match (cfg.exact_z()?, &cfg.lambda) {
        (Some(_), Some(_)) => return Err(CliError::invalid("give either --z or --lambda, not both")),
        (Some(z), None) => {
            cfg.rank_for("z", z.len())?;
            if z.len() != rank {
                return Err(CliError::invalid("--z and --weight lengths differ"));
            }
            config = config.with("z", cfg.z.clone().unwrap_or_default().join(","));
            let q = match (cfg.rational_q()?, cfg.single_eps()?) {
                (Some(_), Some(_)) => return Err(CliError::invalid("give either --q or --eps, not both")),
                (Some(q), None) => {
                    config = config.with("q", q.to_string());
                    QSpec::Rational(q)
                }
                (None, Some(e)) => {
                    config = config.with("eps", e);
                    QSpec::Epsilon(e)
                }
                (None, None) => return Err(CliError::invalid("--z needs --q or --eps")),
            };
            (SpectralParams::exact(z), q)
        }
        (None, Some(l)) => {
            if l.len() != rank {
                return Err(CliError::invalid("--lambda and --weight lengths differ"));
            }
            no_flag(&cfg.q, "q", "with --lambda; use --eps")?;
            let e = cfg.single_eps()?.ok_or_else(|| CliError::invalid("--lambda needs --eps"))?;
            config = config.with("lambda", l.clone()).with("eps", e);
            (SpectralParams::unit_circle(l.clone()), QSpec::Epsilon(e))
        }
        (None, None) => {
            no_flag(&cfg.eps, "eps", "with formal z; give --z or --lambda")?;
            match cfg.rational_q()? {
                Some(q) => {
                    config = config.with("q", q.to_string());
                    (SpectralParams::formal(rank), QSpec::Rational(q))
                }
                None => {
                    let t = cfg.truncation()?;
                    config = config.with("truncation", t);
                    (SpectralParams::formal(rank), QSpec::Formal { truncation: t })
                }
            }
        }
    };
    let m = if method == PsiMethod::Recursive { Method::Recursive } else { Method::Direct };
    let mut report = Report::new("qpsi", config);
    for p in &weights {
        let v = evaluate(p, &spec, &q, m)?;
        report.results.push(value_row(p, v));
    }
    Ok(report)
}

fn value_row(p: &DominantWeight, v: QWhittakerValue) -> Row {
    let row = Row::new().with("weight", p.entries());
    match v {
        QWhittakerValue::Series(s) => {
            row.with("kind", "series").with("value", s.to_string()).with("re", None::<f64>).with("im", None::<f64>)
        }
        QWhittakerValue::RationalPoly(s) => {
            row.with("kind", "laurent").with("value", s.to_string()).with("re", None::<f64>).with("im", None::<f64>)
        }
        QWhittakerValue::Exact(g) => {
            let (re, im) = g.to_f64();
            row.with("kind", "exact").with("value", g.to_string()).with("re", re).with("im", im)
        }
        QWhittakerValue::Float(l) => {
            let c = l.to_complex();
            let log_abs = if l.is_zero() { None } else { Some(l.log_magnitude()) };
            row.with("kind", "float")
                .with("value", None::<String>)
                .with("re", c.re)
                .with("im", c.im)
                .with("log_abs", log_abs)
                .with("phase", if l.is_zero() { None } else { Some(l.phase()) })
        }
    }
}

/// Exact check of `H_r Psi = e_r(z) Psi` with formal `z`.
pub fn eigen(cfg: &RunConfig) -> Result<Report, CliError> {
    let (rank, weights) = weight_set(cfg)?;
    no_flag(&cfg.z, "z", "here; eigen uses formal z")?;
    no_flag(&cfg.lambda, "lambda", "here; eigen uses formal z")?;
    no_flag(&cfg.eps, "eps", "here; eigen needs exact q")?;
    let config = Row::new().with("rank", rank).with("weights", entries(&weights));
    match cfg.rational_q()? {
        Some(q) => {
            let config = config.with("q", q.to_string());
            let mode = RationalMode::new(rank, q)?;
            eigen_report(config, &weights, &mode)
        }
        None => {
            let t = cfg.truncation()?;
            let mode = SeriesMode::new(rank, t);
            eigen_report(config.with("truncation", t), &weights, &mode)
        }
    }
}

fn eigen_report<M: EvalMode>(config: Row, weights: &[DominantWeight], mode: &M) -> Result<Report, CliError>
where
    M::Value: Display,
{
    let psi = whittaker_lattice_function(mode);
    let reports: Vec<_> = weights.par_iter().map(|p| verify_eigen_with(p.entries(), &psi, mode)).collect();
    let mut report = Report::new("eigen", config);
    for rep in reports {
        let rep = rep?;
        for r in &rep.residuals {
            report.results.push(
                Row::new()
                    .with("weight", rep.weight.clone())
                    .with("order", r.order)
                    .with("lhs", r.lhs.to_string())
                    .with("rhs", r.rhs.to_string())
                    .with("residual", r.residual.to_string())
                    .with("zero", r.is_zero),
            );
            report.residuals.push(
                Row::new().with("weight", rep.weight.clone()).with("order", r.order).with("residual", r.residual.to_string()),
            );
            if !r.is_zero {
                report.status = Status::Failed;
            }
        }
    }
    Ok(report)
}

fn quadrature_row(row: Row, q: &QuadratureConfig) -> Row {
    row.with("nodes", q.nodes)
        .with("half_width", q.half_width)
        .with("scheme", format!("{:?}", q.scheme).to_lowercase())
        .with("tolerance", q.tolerance)
}

fn coordinates(cfg: &RunConfig) -> Result<(usize, Vec<f64>, Vec<f64>), CliError> {
    let x = cfg.x.clone().ok_or_else(|| CliError::invalid("--x is required here"))?;
    let lambda = cfg.lambda.clone().ok_or_else(|| CliError::invalid("--lambda is required here"))?;
    let rank = cfg.rank_for("lambda", lambda.len())?;
    if x.len() != rank {
        return Err(CliError::invalid(format!("--x has {} entries, expected {rank}", x.len())));
    }
    Ok((rank, x, lambda))
}

/// Classical value with its finite-difference eigen-check.
pub fn givental(cfg: &RunConfig) -> Result<Report, CliError> {
    let (rank, x, lambda) = coordinates(cfg)?;
    let quad = cfg.quadrature(rank)?;
    let steps = cfg.step.clone().unwrap_or_else(|| vec![DEFAULT_STEP]);
    if steps.iter().any(|h| !(*h > 0.0)) {
        return Err(CliError::invalid("--step values must be positive"));
    }
    let config = quadrature_row(
        Row::new().with("rank", rank).with("x", x.clone()).with("lambda", lambda.clone()),
        &quad,
    )
    .with("step", steps.clone());
    let value = whittaker_classical(&x, &lambda, &quad)?;
    let eval = ClassicalEvaluator::new(&lambda, &quad)?;
    let mut report = Report::new("givental", config);
    let mut prev: Option<(f64, f64)> = None;
    for &h in &steps {
        let e = eigencheck_with(&eval, &x, h)?;
        report.results.push(
            Row::new()
                .with("re", value.value.re)
                .with("im", value.value.im)
                .with("error_estimate", value.error_estimate)
                .with("step", h)
                .with("residual1", e.residual1)
                .with("residual2", e.residual2),
        );
        let slope = prev.map(|(r0, h0)| (r0 / e.residual2).ln() / (h0 / h).ln());
        report.residuals.push(
            Row::new().with("step", h).with("residual1", e.residual1).with("residual2", e.residual2).with("slope2", slope),
        );
        prev = Some((e.residual2, h));
    }
    Ok(report)
}

/// Scaled q-values against the classical function over a decreasing `eps` list.
pub fn limit(cfg: &RunConfig) -> Result<Report, CliError> {
    let (rank, x, lambda) = coordinates(cfg)?;
    let eps = cfg.eps_list()?;
    let quad = cfg.quadrature(rank)?;
    let convention = cfg.integer_part();
    let config = quadrature_row(
        Row::new().with("rank", rank).with("x", x.clone()).with("lambda", lambda.clone()).with("eps", eps.clone()),
        &quad,
    )
    .with("integer_part", convention_name(convention));
    let rows = limit_scan(&x, &lambda, &eps, &quad, convention)?;
    let mut report = Report::new("limit", config);
    report.csv_columns = Some(LIMIT_COLUMNS.to_vec());
    for r in &rows {
        report.results.push(
            Row::new()
                .with("epsilon", r.eps)
                .with("m_eps", r.m)
                .with("re_q", r.q_value.re)
                .with("im_q", r.q_value.im)
                .with("re_cl", r.classical.re)
                .with("im_cl", r.classical.im)
                .with("abs_err", r.abs_err)
                .with("rel_err", r.rel_err)
                .with("effective_x", r.effective_x.clone())
                .with("dominant", r.dominant)
                .with("classical_error", r.classical_error),
        );
    }
    let rel: Vec<f64> = rows.iter().map(|r| r.rel_err).collect();
    report.residuals.push(
        Row::new()
            .with("quantity", "rel_err")
            .with("strictly_decreasing", strictly_decreasing(&rel))
            .with("slope", loglog_slope(&eps, &rel)),
    );
    Ok(report)
}

/// The q-factorial asymptotics table and the eta identity residuals.
pub fn asymptotics(cfg: &RunConfig) -> Result<Report, CliError> {
    let ys = cfg.y.clone().unwrap_or_else(|| DEFAULT_Y.to_vec());
    let eps = cfg.eps.clone().unwrap_or_else(|| DEFAULT_EPS_SCAN.to_vec());
    let eta_eps = cfg.eta_eps.clone().unwrap_or_else(|| DEFAULT_ETA_EPS.to_vec());
    let convention = cfg.integer_part();
    let config = Row::new()
        .with("y", ys.clone())
        .with("eps", eps.clone())
        .with("eta_eps", eta_eps.clone())
        .with("integer_part", convention_name(convention));
    let mut report = Report::new("asymptotics", config);
    for alpha in [1u8, 2] {
        for &y in &ys {
            let mut res = Vec::with_capacity(eps.len());
            for &e in &eps {
                let f = f_alpha_with(y, e, alpha, convention)?;
                res.push(f.residual.abs());
                report.results.push(
                    Row::new()
                        .with("table", "f_alpha")
                        .with("alpha", alpha as i64)
                        .with("y", y)
                        .with("epsilon", e)
                        .with("n", f.n)
                        .with("ln_f", f.ln_f)
                        .with("a_eps", a_epsilon(e)?)
                        .with("residual", f.residual.abs()),
                );
            }
            report.residuals.push(
                Row::new()
                    .with("table", "f_alpha")
                    .with("alpha", alpha as i64)
                    .with("y", y)
                    .with("decreasing", strictly_decreasing(&res))
                    .with("slope", loglog_slope(&eps, &res)),
            );
        }
    }
    for &e in &eta_eps {
        let r = eta_modular_residual(e)?;
        let u = eta_modular_residual_uncorrected(e)?;
        report.results.push(
            Row::new().with("table", "eta").with("epsilon", e).with("residual", r).with("residual_uncorrected", u),
        );
        report.residuals.push(Row::new().with("table", "eta").with("epsilon", e).with("residual", r));
    }
    Ok(report)
}

/// Residuals of the Hamiltonian expansion on a test function.
pub fn hamlimit(cfg: &RunConfig) -> Result<Report, CliError> {
    let x = cfg.x.clone().ok_or_else(|| CliError::invalid("--x is required here"))?;
    let rank = cfg.rank_for("x", x.len())?;
    let eps = cfg.eps.clone().unwrap_or_else(|| DEFAULT_EPS_SCAN.to_vec());
    let which = cfg.test_function.unwrap_or(TestFunctionArg::Gaussian);
    let test: &dyn TestFunction = match which {
        TestFunctionArg::Gaussian => &GaussianFunction,
        TestFunctionArg::Constant => &ConstantFunction,
    };
    let convention = cfg.integer_part();
    let config = Row::new()
        .with("rank", rank)
        .with("x", x.clone())
        .with("eps", eps.clone())
        .with("test_function", if which == TestFunctionArg::Gaussian { "gaussian" } else { "constant" })
        .with("integer_part", convention_name(convention));
    let mut report = Report::new("hamlimit", config);
    let mut r1 = Vec::new();
    let mut r2 = Vec::new();
    for &e in &eps {
        let ctx = ScalingContext::with_convention(e, rank, convention)?;
        let h = hamiltonian_limit_residual(&ctx, test, &x)?;
        r1.push(h.residual1);
        r2.push(h.residual2);
        report.results.push(
            Row::new()
                .with("epsilon", e)
                .with("effective_x", h.effective_x)
                .with("residual1", h.residual1)
                .with("residual2", h.residual2),
        );
    }
    for (name, r) in [("residual1", &r1), ("residual2", &r2)] {
        report.residuals.push(
            Row::new()
                .with("quantity", name)
                .with("decreasing", strictly_decreasing(r))
                .with("slope", loglog_slope(&eps, r)),
        );
    }
    Ok(report)
}
