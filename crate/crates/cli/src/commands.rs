use std::fmt::Write as _;
use std::fs;

use num_complex::Complex64;
use serde_json::{json, Value};

use vvaf::expsum::{bound_scan, parse_theta};
use vvaf::growth::{coefficient_growth_report, mean_square, AlphaChoice, Verdict};
use vvaf::lfunc::{completed_l, completed_truncated, fe_scan, lvalues_csv, Quadrature};
use vvaf::qseries::BUILTIN_VVAFS;
use vvaf::repr::{self, BuiltinParams, SamplerConfig};
use vvaf::{GroupElement, Representation, Vvaf};

use crate::config::{Format, RunConfig};

/// Exit status 1 for verification failures, 2 for usage and input errors.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Verify(String),
}

impl From<vvaf::Error> for CliError {
    fn from(e: vvaf::Error) -> Self {
        match e {
            vvaf::Error::FunctionalEquation(_) => CliError::Verify(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

pub struct Artifact {
    pub stem: String,
    pub body: String,
    pub failed: bool,
}

struct Ctx<'a> {
    cfg: &'a RunConfig,
    command: &'a str,
    source: String,
}

impl Ctx<'_> {
    fn artifact(&self, report: Value, csv: impl FnOnce() -> String, failed: bool) -> Artifact {
        let body = match self.cfg.format {
            Format::Json => {
                let doc = json!({
                    "command": self.command,
                    "source": self.source,
                    "seed": self.cfg.seed,
                    "n": self.cfg.n,
                    "verdict": if failed { "FAIL" } else { "PASS" },
                    "config": self.cfg.to_text(),
                    "report": report,
                });
                let mut s = serde_json::to_string_pretty(&doc).expect("json values serialize");
                s.push('\n');
                s
            }
            Format::Csv => format!(
                "# vvaf {} source={} seed={} n={} verdict={}\n{}",
                self.command,
                self.source,
                self.cfg.seed,
                self.cfg.n,
                if failed { "FAIL" } else { "PASS" },
                csv()
            ),
        };
        Artifact { stem: self.command.replace(' ', "-"), body, failed }
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn read_input(cfg: &RunConfig) -> Result<Option<String>, CliError> {
    match &cfg.input {
        Some(p) => fs::read_to_string(p).map(Some).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", p.display()))),
        None => Ok(None),
    }
}

fn load_rep(cfg: &RunConfig) -> Result<(Representation, String), CliError> {
    if let Some(text) = read_input(cfg)? {
        let rep: Representation =
            serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("malformed representation file: {e}")))?;
        return Ok((rep, cfg.input.as_ref().expect("read").display().to_string()));
    }
    let name = cfg.builtin.as_deref().ok_or_else(|| CliError::Usage("need --builtin or --input".into()))?;
    let b = repr::builtin(name, &BuiltinParams { a: cfg.param_a })?;
    for w in &b.warnings {
        eprintln!("warning: {w}");
    }
    Ok((b.rep, name.to_string()))
}

fn load_form(cfg: &RunConfig) -> Result<(Vvaf, String), CliError> {
    if let Some(text) = read_input(cfg)? {
        let x = Vvaf::from_json(&text).map_err(|e| CliError::Usage(format!("malformed form bundle: {e}")))?;
        return Ok((x, cfg.input.as_ref().expect("read").display().to_string()));
    }
    let name = cfg.builtin.as_deref().ok_or_else(|| CliError::Usage("need --builtin or --input".into()))?;
    if !BUILTIN_VVAFS.contains(&name) {
        return Err(CliError::Usage(format!("unknown built-in form `{name}`, expected one of {}", BUILTIN_VVAFS.join(", "))));
    }
    let order = u32::try_from(cfg.n + 1).map_err(|_| CliError::Usage(format!("N = {} out of range", cfg.n)))?;
    Ok((Vvaf::builtin(name, order)?, name.to_string()))
}

fn sampler(cfg: &RunConfig) -> SamplerConfig {
    SamplerConfig { seed: cfg.seed, words: cfg.sampler_words, matrices: cfg.sampler_matrices, ..SamplerConfig::default() }
}

fn alpha(x: &Vvaf, cfg: &RunConfig) -> Result<(AlphaChoice, Value), CliError> {
    let fit = x.rep().growth_exponent(&sampler(cfg))?;
    Ok((AlphaChoice::from_fit(x, &fit), to_value(&fit)))
}

fn quadrature(cfg: &RunConfig) -> Quadrature {
    Quadrature { step: cfg.quad_step, t_min: cfg.quad_t_min, t_max: cfg.quad_t_max }
}

fn s_grid(cfg: &RunConfig, weight: i32) -> Vec<Complex64> {
    if !cfg.s.is_empty() {
        return cfg.s.clone();
    }
    let k = weight as f64;
    (0..10).map(|j| Complex64::new(k / 2.0 - 1.5 + 0.35 * j as f64, 0.2 * j as f64)).collect()
}

fn need_n(cfg: &RunConfig) -> Result<(), CliError> {
    if cfg.n < 2 {
        return Err(CliError::Usage(format!("N must be at least 2, got {}", cfg.n)));
    }
    Ok(())
}

pub fn repr_check(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let (rep, source) = load_rep(cfg)?;
    let v = rep.validate();
    let ctx = Ctx { cfg, command: "repr check", source };
    let csv = || {
        format!(
            "relation,deviation\ns^2,{:e}\n(st)^3,{:e}\ninverse_condition,{:e}\n",
            v.s_relation, v.st_relation, v.inverse_condition
        )
    };
    Ok(ctx.artifact(to_value(&v), csv, !v.pass))
}

pub fn repr_growth(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let (rep, source) = load_rep(cfg)?;
    let fit = rep.growth_exponent(&sampler(cfg))?;
    let parabolic = rep.parabolic_power_norms(60)?;
    let polynomial = rep.is_polynomial_growth()?;
    let ctx = Ctx { cfg, command: "repr growth", source };
    let report = json!({ "fit": to_value(&fit), "polynomial_growth": polynomial, "parabolic": to_value(&parabolic) });
    let csv = || {
        let mut out = format!("# classification={}\nn,norm\n", to_value(&fit.classification).as_str().unwrap_or("?"));
        for (i, v) in parabolic.norms.iter().enumerate() {
            let _ = writeln!(out, "{},{v:e}", i + 1);
        }
        out
    };
    Ok(ctx.artifact(report, csv, false))
}

pub fn vvaf_coeffs(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let (x, source) = load_form(cfg)?;
    let ctx = Ctx { cfg, command: "vvaf coeffs", source };
    let bundle: Value = serde_json::from_str(&x.to_json()?).map_err(vvaf::Error::from)?;
    let csv = || {
        let mut out = String::from("component,log_power,exponent,coeff_re,coeff_im\n");
        for (i, comp) in x.components().iter().enumerate() {
            for (j, series) in comp.terms() {
                for (e, z) in series.terms() {
                    let _ = writeln!(out, "{i},{j},{e},{:e},{:e}", z.re, z.im);
                }
            }
        }
        out
    };
    Ok(ctx.artifact(bundle, csv, false))
}

pub fn vvaf_transform_check(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let (x, source) = load_form(cfg)?;
    let taus: Vec<Complex64> = (0..10).map(|k| Complex64::new(-0.45 + 0.1 * k as f64, 0.9 + 0.05 * k as f64)).collect();
    let (s, t) = (GroupElement::s(), GroupElement::t());
    let mut elements = vec![("t", t.clone())];
    if x.rep().group().is_full() {
        elements.push(("s", s.clone()));
        elements.push(("t s t^-1 s", t.mul(&s).mul(&t.inverse()).mul(&s)));
    }
    let mut rows = Vec::new();
    for (name, g) in &elements {
        rows.push((*name, x.check_transformation(g, &taus)?));
    }
    let failed = rows.iter().any(|(_, c)| !(c.residual <= cfg.transform_tol + 10.0 * c.max_tail));
    let ctx = Ctx { cfg, command: "vvaf transform-check", source };
    let report = json!({
        "tolerance": cfg.transform_tol,
        "checks": rows.iter().map(|(n, c)| json!({ "element": n, "check": to_value(c) })).collect::<Vec<_>>(),
    });
    let csv = || {
        let mut out = String::from("element,residual,max_tail\n");
        for (n, c) in &rows {
            let _ = writeln!(out, "{n},{:e},{:e}", c.residual, c.max_tail);
        }
        out
    };
    Ok(ctx.artifact(report, csv, failed))
}

pub fn vvaf_growth(cfg: &RunConfig) -> Result<Artifact, CliError> {
    need_n(cfg)?;
    let (x, source) = load_form(cfg)?;
    let (a, fit) = alpha(&x, cfg)?;
    let r = coefficient_growth_report(&x, cfg.n, a, None)?;
    let ctx = Ctx { cfg, command: "vvaf growth", source };
    let failed = r.verdict == Verdict::Fail;
    Ok(ctx.artifact(json!({ "representation_fit": fit, "growth": to_value(&r) }), || r.to_csv(), failed))
}

pub fn vvaf_meansq(cfg: &RunConfig) -> Result<Artifact, CliError> {
    need_n(cfg)?;
    let (x, source) = load_form(cfg)?;
    let (a, fit) = alpha(&x, cfg)?;
    let r = mean_square(&x, cfg.n, a)?;
    let ctx = Ctx { cfg, command: "vvaf meansq", source };
    let failed = r.verdict == Verdict::Fail;
    Ok(ctx.artifact(json!({ "representation_fit": fit, "mean_square": to_value(&r) }), || r.to_csv(), failed))
}

pub fn lfunc_eval(cfg: &RunConfig) -> Result<Artifact, CliError> {
    need_n(cfg)?;
    let (x, source) = load_form(cfg)?;
    let (a, _) = alpha(&x, cfg)?;
    let q = quadrature(cfg);
    let mut values = Vec::new();
    let mut rows = Vec::new();
    for s in s_grid(cfg, x.weight()) {
        let t = completed_truncated(&x, s, cfg.n, a)?;
        let m = completed_l(&x, s, cfg.y0, &q)?;
        rows.push(json!({ "s": [s.re, s.im], "truncated": to_value(&t), "split_mellin": to_value(&m), "difference": t.max_diff(&m) }));
        values.push(t);
        values.push(m);
    }
    let ctx = Ctx { cfg, command: "lfunc eval", source };
    let csv = || {
        // truncated and split-Mellin rows alternate per s
        let mut out = String::from("method,");
        let mut lines = lvalues_csv(&values).lines().map(str::to_string).collect::<Vec<_>>().into_iter();
        out.push_str(&lines.next().unwrap_or_default());
        out.push('\n');
        let dim = x.rep().dim();
        for (k, line) in lines.enumerate() {
            let method = if (k / dim) % 2 == 0 { "truncated" } else { "split_mellin" };
            let _ = writeln!(out, "{method},{line}");
        }
        out
    };
    Ok(ctx.artifact(json!({ "values": rows }), csv, false))
}

pub fn lfunc_fe_scan(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let (x, source) = load_form(cfg)?;
    let scan = fe_scan(&x, &s_grid(cfg, x.weight()), cfg.y0, &quadrature(cfg))?;
    let ctx = Ctx { cfg, command: "lfunc fe-scan", source };
    let failed = scan.sign.is_none();
    Ok(ctx.artifact(to_value(&scan), || scan.to_csv(), failed))
}

pub fn expsum_scan(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let thetas = cfg.theta.iter().map(|t| parse_theta(t)).collect::<Result<Vec<_>, _>>()?;
    let needed = cfg.x.iter().copied().max().unwrap_or(0);
    let mut local = cfg.clone();
    local.n = local.n.max(needed);
    let (x, source) = load_form(&local)?;
    let (a, _) = alpha(&x, cfg)?;
    let scan = bound_scan(&x, &thetas, &cfg.x, a)?;
    let ctx = Ctx { cfg: &local, command: "expsum scan", source };
    let failed = scan.verdict == Verdict::Fail;
    Ok(ctx.artifact(to_value(&scan), || scan.to_csv(), failed))
}
