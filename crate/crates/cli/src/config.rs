//! Run configuration and its key-value text format.
//!
//! One `key = value` pair per line; `#` starts a comment. Lists are comma separated.
//!
//! | key | default | meaning |
//! |-----|---------|---------|
//! | `seed` | `1` | sampler seed, echoed into every artifact |
//! | `n` | `200` | truncation: coefficients `n < N`, terms of truncated sums |
//! | `builtin` | none | built-in representation or form |
//! | `input` | none | JSON representation or form bundle, instead of `builtin` |
//! | `param_a` | `i` | parameter `a` of `nonpoly` |
//! | `out_dir` | none | artifact directory; stdout when unset |
//! | `format` | `json` | `json` or `csv` |
//! | `sampler_words` | `200` | random words in the growth sampler |
//! | `sampler_matrices` | `200` | random matrices in the growth sampler |
//! | `transform_tol` | `1e-8` | residual tolerance of `vvaf transform-check` |
//! | `quad_step` | `0.03125` | double-exponential step |
//! | `quad_t_min` | `-5` | lower end of the quadrature parameter |
//! | `quad_t_max` | `5.5` | upper end of the quadrature parameter |
//! | `y0` | `1` | split point of the Mellin integral |
//! | `s` | weight-dependent | points `s` for `lfunc eval` and `lfunc fe-scan` |
//! | `theta` | `0,1/3,0.7071067811865476,7/10` | angles for `expsum scan` |
//! | `x` | `100,200,500,1000,2000` | cutoffs for `expsum scan` |

use std::fmt::Write as _;
use std::path::PathBuf;

use num_complex::Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn parse(text: &str) -> Result<Self, String> {
        match text {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format `{other}`, expected json or csv")),
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub n: i64,
    pub builtin: Option<String>,
    pub input: Option<PathBuf>,
    pub param_a: Complex64,
    pub out_dir: Option<PathBuf>,
    pub format: Format,
    pub sampler_words: usize,
    pub sampler_matrices: usize,
    pub transform_tol: f64,
    pub quad_step: f64,
    pub quad_t_min: f64,
    pub quad_t_max: f64,
    pub y0: f64,
    pub s: Vec<Complex64>,
    pub theta: Vec<String>,
    pub x: Vec<i64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            n: 200,
            builtin: None,
            input: None,
            param_a: Complex64::new(0.0, 1.0),
            out_dir: None,
            format: Format::Json,
            sampler_words: 200,
            sampler_matrices: 200,
            transform_tol: 1e-8,
            quad_step: 1.0 / 32.0,
            quad_t_min: -5.0,
            quad_t_max: 5.5,
            y0: 1.0,
            s: Vec::new(),
            theta: ["0", "1/3", "0.7071067811865476", "7/10"].map(String::from).to_vec(),
            x: vec![100, 200, 500, 1000, 2000],
        }
    }
}

/// Parses `3`, `-2.5`, `i`, `-i`, `2i`, `6+3i`, `0.5-1e-3i`.
pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("malformed complex number `{text}`");
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        v => v.parse::<f64>().map_err(|_| bad())?,
    };
    let re = re.parse::<f64>().map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}

fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im < 0.0 {
        format!("{}{}i", z.re, z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

fn list<T>(text: &str, f: impl Fn(&str) -> Result<T, String>) -> Result<Vec<T>, String> {
    text.split(',').map(str::trim).filter(|s| !s.is_empty()).map(f).collect()
}

fn number<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, String> {
    v.parse().map_err(|_| format!("bad value `{v}` for `{key}`"))
}

impl RunConfig {
    pub fn set(&mut self, key: &str, v: &str) -> Result<(), String> {
        match key {
            "seed" => self.seed = number(key, v)?,
            "n" | "N" => self.n = number(key, v)?,
            "builtin" => self.builtin = Some(v.to_string()),
            "input" => self.input = Some(PathBuf::from(v)),
            "param_a" | "a" => self.param_a = parse_complex(v)?,
            "out_dir" => self.out_dir = Some(PathBuf::from(v)),
            "format" => self.format = Format::parse(v)?,
            "sampler_words" => self.sampler_words = number(key, v)?,
            "sampler_matrices" => self.sampler_matrices = number(key, v)?,
            "transform_tol" => self.transform_tol = number(key, v)?,
            "quad_step" => self.quad_step = number(key, v)?,
            "quad_t_min" => self.quad_t_min = number(key, v)?,
            "quad_t_max" => self.quad_t_max = number(key, v)?,
            "y0" => self.y0 = number(key, v)?,
            "s" => self.s = list(v, parse_complex)?,
            "theta" => self.theta = list(v, |t| Ok(t.to_string()))?,
            "x" => self.x = list(v, |t| number("x", t))?,
            other => return Err(format!("unknown config key `{other}`")),
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut cfg = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| format!("line {}: expected `key = value`", i + 1))?;
            cfg.set(k.trim(), v.trim()).map_err(|e| format!("line {}: {e}", i + 1))?;
        }
        Ok(cfg)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        put("seed", self.seed.to_string());
        put("n", self.n.to_string());
        if let Some(b) = &self.builtin {
            put("builtin", b.clone());
        }
        if let Some(p) = &self.input {
            put("input", p.display().to_string());
        }
        put("param_a", format_complex(self.param_a));
        if let Some(p) = &self.out_dir {
            put("out_dir", p.display().to_string());
        }
        put("format", self.format.extension().to_string());
        put("sampler_words", self.sampler_words.to_string());
        put("sampler_matrices", self.sampler_matrices.to_string());
        put("transform_tol", format!("{:e}", self.transform_tol));
        put("quad_step", self.quad_step.to_string());
        put("quad_t_min", self.quad_t_min.to_string());
        put("quad_t_max", self.quad_t_max.to_string());
        put("y0", self.y0.to_string());
        put("s", self.s.iter().map(|z| format_complex(*z)).collect::<Vec<_>>().join(","));
        put("theta", self.theta.join(","));
        put("x", self.x.iter().map(i64::to_string).collect::<Vec<_>>().join(","));
        out
    }
}
