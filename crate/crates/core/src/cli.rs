//! Text formats, experiment configs and reports for the `wgalab` binary.
//!
//! Group text: `Z`, `Z^2`, `Z_4`, products joined by `x` (`Z^2xZ_4`), `1` for
//! the trivial group. Weight text: one factor per axis joined by `*`, each one
//! of `const:c`, `poly:alpha`, `exp:a`, `subexp:a,beta`, `table:[v,...]`. A
//! single factor is applied to every axis. Free-axis tables are centred at 0
//! (odd length) unless written `table@start:[...]`, and take an optional
//! `;edge` or `;strict` suffix (strict by default). Torsion tables list
//! `w(0), ..., w(m-1)`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::{compare_radii, norm_l1w, random_element, spectral_radius_normlimit, AlgebraElement};
use crate::error::{Error, Result};
use crate::group::{make_group_spec, GroupSpec};
use crate::representation::{gram_positivity_check, synthesize_functional, SpectralMeasure};
use crate::spectrum::{
    character_space, finite_gelfand_probe, gelfand_eval, isometry_defect, required_samples, sample_gelfand_grid,
    separating_element, spectral_radius_oracle, Character, CharacterSpace,
};
use crate::weight::{bd_partial_sums, classify_weight, weight_radius, AxisWeight, Extension, TableAxis, Weight};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_SAMPLES: usize = 256;
pub const DEFAULT_TOLERANCE: f64 = 1e-3;
/// Ladder depth for `r_w` and the character space.
pub const DEFAULT_WEIGHT_EXPONENT: u64 = 1 << 20;
/// Ladder depth for norm-limit estimates of `r(f)`.
pub const DEFAULT_POWER_EXPONENT: u64 = 1 << 12;
/// Domar ladder reported by `example-paper`.
pub const EXAMPLE_DOMAR_LADDER: [u64; 4] = [100, 1_000, 10_000, 100_000];

fn parse_err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

pub fn parse_group(text: &str) -> Result<GroupSpec> {
    if text.trim() == "1" {
        return Ok(GroupSpec::trivial());
    }
    let mut free: i64 = 0;
    let mut torsion = Vec::new();
    let mut start = 0usize;
    let bytes: Vec<(usize, char)> = text.char_indices().chain(std::iter::once((text.len(), 'x'))).collect();
    for &(i, ch) in &bytes {
        if ch != 'x' && ch != '×' {
            continue;
        }
        let raw = &text[start..i];
        let lead = raw.len() - raw.trim_start().len();
        let pos = start + lead;
        let factor = raw.trim();
        if factor == "Z" {
            free += 1;
        } else if let Some(d) = factor.strip_prefix("Z^") {
            free += d.parse::<i64>().map_err(|_| parse_err(pos + 2, format!("bad rank {d:?}")))?;
        } else if let Some(m) = factor.strip_prefix("Z_") {
            torsion.push(m.parse::<i64>().map_err(|_| parse_err(pos + 2, format!("bad torsion order {m:?}")))?);
        } else {
            return Err(parse_err(pos, format!("expected Z, Z^d or Z_m, found {factor:?}")));
        }
        start = i + ch.len_utf8();
    }
    make_group_spec(free, &torsion)
}

pub fn format_group(spec: &GroupSpec) -> String {
    spec.to_string()
}

fn parse_number(text: &str, pos: usize) -> Result<f64> {
    let t = text.trim();
    let v = match t {
        "ln2" => std::f64::consts::LN_2,
        _ => t.parse::<f64>().map_err(|_| parse_err(pos, format!("expected a number, found {t:?}")))?,
    };
    if !v.is_finite() {
        return Err(parse_err(pos, format!("non-finite number {t:?}")));
    }
    Ok(v)
}

/// Splits on `sep` outside square brackets, returning `(offset, piece)`.
fn split_top(text: &str, sep: char) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in text.char_indices() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push((start, &text[start..i]));
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push((start, &text[start..]));
    out
}

fn parse_axis(text: &str, pos: usize, torsion_order: Option<u64>) -> Result<AxisWeight<f64>> {
    let t = text.trim();
    let pos = pos + (text.len() - text.trim_start().len());
    let Some((kind, args)) = t.split_once(':') else {
        return Err(parse_err(pos, format!("expected kind:args, found {t:?}")));
    };
    let apos = pos + kind.len() + 1;
    match kind {
        "const" => Ok(AxisWeight::Constant(parse_number(args, apos)?)),
        "poly" => Ok(AxisWeight::Poly { alpha: parse_number(args, apos)? }),
        "exp" => Ok(AxisWeight::Exp { a: parse_number(args, apos)? }),
        "subexp" => {
            let Some((a, beta)) = args.split_once(',') else {
                return Err(parse_err(apos, "subexp needs a,beta"));
            };
            Ok(AxisWeight::SubExp { a: parse_number(a, apos)?, beta: parse_number(beta, apos + a.len() + 1)? })
        }
        _ if kind == "table" || kind.starts_with("table@") => {
            let explicit_start = match kind.strip_prefix("table@") {
                Some(s) => Some(s.parse::<i64>().map_err(|_| parse_err(pos + 6, format!("bad table start {s:?}")))?),
                None => None,
            };
            let (body, ext) = match args.rsplit_once(';') {
                Some((b, e)) => (b, Some(e.trim())),
                None => (args, None),
            };
            let extension = match ext {
                None | Some("strict") => Extension::Strict,
                Some("edge") => Extension::Edge,
                Some(other) => return Err(parse_err(apos + body.len() + 1, format!("unknown extension {other:?}"))),
            };
            let body = body.trim();
            let inner = body
                .strip_prefix('[')
                .and_then(|b| b.strip_suffix(']'))
                .ok_or_else(|| parse_err(apos, "table values must be written [v, ...]"))?;
            let mut values = Vec::new();
            let mut off = apos + 1;
            for piece in inner.split(',') {
                values.push(parse_number(piece, off)?);
                off += piece.len() + 1;
            }
            let start = match (torsion_order, explicit_start) {
                (Some(_), Some(_)) => return Err(parse_err(pos, "torsion tables always start at 0")),
                (Some(_), None) => 0,
                (None, Some(s)) => s,
                (None, None) if values.len() % 2 == 1 => -((values.len() / 2) as i64),
                (None, None) => return Err(parse_err(apos, "a centred table needs an odd number of values")),
            };
            Ok(AxisWeight::Table(TableAxis { start, values, extension }))
        }
        _ => Err(parse_err(pos, format!("unknown weight kind {kind:?}"))),
    }
}

pub fn parse_weight(text: &str, spec: &GroupSpec) -> Result<Weight<f64>> {
    let factors = split_top(text, '*');
    let rank = spec.rank();
    let orders: Vec<Option<u64>> = (0..spec.free_rank())
        .map(|_| None)
        .chain(spec.torsion_orders().iter().map(|&m| Some(m)))
        .collect();
    if rank == 0 {
        for (pos, f) in &factors {
            parse_axis(f, *pos, None)?;
        }
        return Weight::new(spec.clone(), Vec::new());
    }
    let axes = if factors.len() == 1 {
        orders.iter().map(|&o| parse_axis(factors[0].1, factors[0].0, o)).collect::<Result<Vec<_>>>()?
    } else if factors.len() == rank {
        factors.iter().zip(&orders).map(|((pos, f), &o)| parse_axis(f, *pos, o)).collect::<Result<Vec<_>>>()?
    } else {
        return Err(parse_err(0, format!("{spec} needs 1 or {rank} weight factors, found {}", factors.len())));
    };
    Weight::new(spec.clone(), axes)
}

fn format_axis(a: &AxisWeight<f64>, torsion: bool) -> String {
    match a {
        AxisWeight::Constant(c) => format!("const:{c}"),
        AxisWeight::Poly { alpha } => format!("poly:{alpha}"),
        AxisWeight::Exp { a } => format!("exp:{a}"),
        AxisWeight::SubExp { a, beta } => format!("subexp:{a},{beta}"),
        AxisWeight::Table(t) => {
            let values: Vec<String> = t.values.iter().map(|v| v.to_string()).collect();
            let centred = t.values.len() % 2 == 1 && t.start == -((t.values.len() / 2) as i64);
            let head = if torsion || centred { "table".to_string() } else { format!("table@{}", t.start) };
            let tail = if !torsion && t.extension == Extension::Edge { ";edge" } else { "" };
            format!("{head}:[{}]{tail}", values.join(","))
        }
    }
}

pub fn format_weight(w: &Weight<f64>) -> String {
    let d = w.spec().free_rank();
    if w.axes().is_empty() {
        return "const:1".into();
    }
    w.axes().iter().enumerate().map(|(j, a)| format_axis(a, j >= d)).collect::<Vec<_>>().join("*")
}

fn json_err(e: serde_json::Error, text: &str) -> Error {
    let offset: usize = text.lines().take(e.line().saturating_sub(1)).map(|l| l.len() + 1).sum::<usize>() + e.column().saturating_sub(1);
    parse_err(offset, e.to_string())
}

/// Element literal: `[[[coords...], re, im], ...]` with free coordinates first.
pub fn parse_element(text: &str, spec: &GroupSpec) -> Result<AlgebraElement<f64>> {
    let raw: Vec<(Vec<i64>, f64, f64)> = serde_json::from_str(text).map_err(|e| json_err(e, text))?;
    let terms = raw
        .into_iter()
        .enumerate()
        .map(|(i, (coords, re, im))| {
            let x = spec
                .element_from_coords(&coords)
                .map_err(|e| parse_err(0, format!("term {i}: {e}")))?;
            Ok((x, Complex::new(re, im)))
        })
        .collect::<Result<Vec<_>>>()?;
    AlgebraElement::from_terms(spec, terms)
}

pub fn element_to_json(f: &AlgebraElement<f64>) -> Value {
    Value::Array(f.terms().map(|(x, a)| json!([x.coords(), a.re, a.im])).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ZLiteral {
    Cartesian { re: f64, im: f64 },
    /// `exp(i angle)`
    Angle { angle: f64 },
}

impl ZLiteral {
    fn value(&self) -> Complex<f64> {
        match self {
            ZLiteral::Cartesian { re, im } => Complex::new(*re, *im),
            ZLiteral::Angle { angle } => Complex::from_polar(1.0, *angle),
        }
    }
}

/// Character literal: `{"free": [{"re": 1, "im": 0}], "torsion": [k]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharacterLiteral {
    #[serde(default)]
    pub free: Vec<ZLiteral>,
    #[serde(default)]
    pub torsion: Vec<u64>,
}

impl CharacterLiteral {
    pub fn to_character(&self, spec: &GroupSpec) -> Result<Character<f64>> {
        Character::new(spec, self.free.iter().map(ZLiteral::value).collect(), self.torsion.clone())
    }

    pub fn from_character(chi: &Character<f64>) -> Self {
        CharacterLiteral {
            free: chi.free.iter().map(|z| ZLiteral::Cartesian { re: z.re, im: z.im }).collect(),
            torsion: chi.torsion.clone(),
        }
    }
}

pub fn parse_character(text: &str, spec: &GroupSpec) -> Result<Character<f64>> {
    let lit: CharacterLiteral = serde_json::from_str(text).map_err(|e| json_err(e, text))?;
    lit.to_character(spec)
}

pub fn parse_characters(text: &str, spec: &GroupSpec) -> Result<Vec<Character<f64>>> {
    let lits: Vec<CharacterLiteral> = serde_json::from_str(text).map_err(|e| json_err(e, text))?;
    lits.iter().map(|l| l.to_character(spec)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomLiteral {
    pub character: CharacterLiteral,
    pub mass: f64,
}

/// Measure literal: `[{"character": {...}, "mass": m}, ...]`.
pub fn parse_measure(text: &str, cs: &CharacterSpace<f64>) -> Result<SpectralMeasure<f64>> {
    let lits: Vec<AtomLiteral> = serde_json::from_str(text).map_err(|e| json_err(e, text))?;
    let atoms = lits
        .iter()
        .map(|a| Ok((a.character.to_character(cs.spec())?, a.mass)))
        .collect::<Result<Vec<_>>>()?;
    SpectralMeasure::new(cs, atoms)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Classify,
    Radius,
    Spectrum,
    ExamplePaper,
    ProbeFinite,
    Separate,
    Bochner,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::Classify,
        Command::Radius,
        Command::Spectrum,
        Command::ExamplePaper,
        Command::ProbeFinite,
        Command::Separate,
        Command::Bochner,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Command::Classify => "classify",
            Command::Radius => "radius",
            Command::Spectrum => "spectrum",
            Command::ExamplePaper => "example-paper",
            Command::ProbeFinite => "probe-finite",
            Command::Separate => "separate",
            Command::Bochner => "bochner",
        }
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| parse_err(0, format!("unknown command {s:?}")))
    }
}

impl Command {
    /// Parser for command-line arguments.
    pub fn from_str_arg(s: &str) -> std::result::Result<Self, String> {
        s.parse().map_err(|e: Error| e.to_string())
    }
}

impl std::fmt::Display for Command {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(parse_err(0, format!("unknown format {s:?}, expected json or csv"))),
        }
    }
}

fn default_group() -> String {
    "Z".into()
}

fn default_weight() -> String {
    "const:1".into()
}

impl Format {
    pub fn from_str_arg(s: &str) -> std::result::Result<Self, String> {
        s.parse().map_err(|e: Error| e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: Command,
    #[serde(default = "default_group")]
    pub group: String,
    #[serde(default = "default_weight")]
    pub weight: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub element: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure: Option<String>,
    /// `separate`: JSON list of excluded characters.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exclude: Option<String>,
    /// `separate`: the character to hit.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_exponent: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub force: bool,
}

impl ExperimentConfig {
    pub fn new(command: Command) -> Self {
        ExperimentConfig {
            command,
            group: default_group(),
            weight: default_weight(),
            element: None,
            measure: None,
            exclude: None,
            target: None,
            max_exponent: None,
            samples: None,
            tolerance: None,
            seed: 0,
            out: None,
            format: Format::Json,
            force: false,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| json_err(e, text))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Parses every text field that the command reads.
    pub fn validate(&self) -> Result<()> {
        let spec = parse_group(&self.group)?;
        parse_weight(&self.weight, &spec)?;
        if let Some(e) = &self.element {
            parse_element(e, &spec)?;
        }
        if let Some(t) = &self.target {
            parse_character(t, &spec)?;
        }
        if let Some(x) = &self.exclude {
            parse_characters(x, &spec)?;
        }
        if let Some(t) = self.tolerance {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::InvalidArgument(format!("tolerance must be positive, got {t}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub x: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub re: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub im: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub series: String,
    pub points: Vec<CurvePoint>,
}

impl Curve {
    fn real(series: &str, pts: impl IntoIterator<Item = (f64, f64)>) -> Self {
        Curve {
            series: series.into(),
            points: pts.into_iter().map(|(x, v)| CurvePoint { x, re: None, im: None, value: Some(v) }).collect(),
        }
    }

    fn complex(series: &str, pts: impl IntoIterator<Item = (f64, Complex<f64>)>) -> Self {
        Curve {
            series: series.into(),
            points: pts
                .into_iter()
                .map(|(x, z)| CurvePoint { x, re: Some(z.re), im: Some(z.im), value: Some(z.norm()) })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool: String,
    pub version: String,
    pub command: Command,
    pub inputs: ExperimentConfig,
    pub results: Value,
    pub curves: Vec<Curve>,
    /// Conditions worth a reader's attention, e.g. `rescaled_weight`.
    pub flags: Vec<String>,
    /// Wall-clock time; the only field that varies between identical runs.
    pub elapsed_ms: f64,
}

struct Outcome {
    results: Value,
    curves: Vec<Curve>,
    flags: Vec<String>,
}

pub fn run_command(cfg: &ExperimentConfig) -> Result<Report> {
    cfg.validate()?;
    let started = Instant::now();
    let out = match cfg.command {
        Command::Classify => run_classify(cfg)?,
        Command::Radius => run_radius(cfg)?,
        Command::Spectrum => run_spectrum(cfg)?,
        Command::ExamplePaper => run_example_paper(cfg)?,
        Command::ProbeFinite => run_probe_finite(cfg)?,
        Command::Separate => run_separate(cfg)?,
        Command::Bochner => run_bochner(cfg)?,
    };
    let mut inputs = cfg.clone();
    if cfg.command == Command::ExamplePaper {
        inputs.group = "Z".into();
        inputs.weight = "poly:1".into();
    }
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: cfg.command,
        inputs,
        results: out.results,
        curves: out.curves,
        flags: out.flags,
        elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
    })
}

fn group_and_weight(cfg: &ExperimentConfig) -> Result<(GroupSpec, Weight<f64>)> {
    let spec = parse_group(&cfg.group)?;
    let w = parse_weight(&cfg.weight, &spec)?;
    Ok((spec, w))
}

fn require<'a>(field: &'a Option<String>, name: &str, cmd: Command) -> Result<&'a str> {
    field.as_deref().ok_or_else(|| Error::InvalidArgument(format!("{cmd} needs --{name}")))
}

fn weight_exponent(cfg: &ExperimentConfig) -> u64 {
    cfg.max_exponent.unwrap_or(DEFAULT_WEIGHT_EXPONENT)
}

fn cplx(z: Complex<f64>) -> Value {
    json!({"re": z.re, "im": z.im})
}

fn run_classify(cfg: &ExperimentConfig) -> Result<Outcome> {
    let (_, w) = group_and_weight(cfg)?;
    let report = classify_weight(&w, cfg.tolerance.unwrap_or(DEFAULT_TOLERANCE))?;
    let curves = report
        .domar_evidence
        .iter()
        .map(|d| Curve::real(&format!("domar_sums{}", d.generator), d.sums.iter().map(|&(n, s)| (n as f64, s))))
        .collect();
    let mut flags = Vec::new();
    if report.rescaled_by.is_some() {
        flags.push("rescaled_weight".into());
    }
    if !report.family_exact {
        flags.push("heuristic_verdict".into());
    }
    Ok(Outcome {
        results: json!({
            "verdict": report.verdict,
            "family_exact": report.family_exact,
            "weight": format_weight(&w),
            "report": report,
        }),
        curves,
        flags,
    })
}

fn oracle_samples(cfg: &ExperimentConfig, f: &AlgebraElement<f64>) -> usize {
    cfg.samples.unwrap_or_else(|| DEFAULT_SAMPLES.max(required_samples(f)))
}

fn run_radius(cfg: &ExperimentConfig) -> Result<Outcome> {
    let (spec, w) = group_and_weight(cfg)?;
    let f = parse_element(require(&cfg.element, "element", cfg.command)?, &spec)?;
    let n = cfg.max_exponent.unwrap_or(DEFAULT_POWER_EXPONENT);
    let est = spectral_radius_normlimit(&f, &w, n)?;
    let cmp = compare_radii(&f, &w, n)?;
    let cs = character_space(&w, weight_exponent(cfg))?;
    let oracle = spectral_radius_oracle(&f, &cs, oracle_samples(cfg, &f))?;
    let mut flags = Vec::new();
    if est.truncated {
        flags.push("support_cap_truncated".into());
    }
    if !cmp.sandwich_ok {
        flags.push("sandwich_violated".into());
    }
    if cs.annuli.iter().any(|a| !a.exact) {
        flags.push("estimated_annulus".into());
    }
    Ok(Outcome {
        results: json!({
            "normlimit": {"estimate": est.estimate, "n_reached": est.n_reached, "truncated": est.truncated},
            "oracle": {
                "value": oracle.value,
                "sampling_bound": oracle.sampling_bound,
                "samples_per_circle": oracle.samples_per_circle,
                "argmax": CharacterLiteral::from_character(&oracle.argmax),
            },
            "comparison": cmp,
            "norm_l1w": norm_l1w(&f, &w)?,
        }),
        curves: vec![Curve::real("normlimit_ladder", est.ladder.iter().map(|&(n, v)| (n as f64, v)))],
        flags,
    })
}

fn run_spectrum(cfg: &ExperimentConfig) -> Result<Outcome> {
    let (spec, w) = group_and_weight(cfg)?;
    let cs = character_space(&w, weight_exponent(cfg))?;
    let mut results = json!({
        "annuli": cs.annuli,
        "cycles": cs.cycles,
        "torus": cs.is_torus(1e-9),
    });
    let mut curves = Vec::new();
    let mut flags = Vec::new();
    if cs.annuli.iter().any(|a| !a.exact) {
        flags.push("estimated_annulus".into());
    }
    if let Some(text) = &cfg.element {
        let f = parse_element(text, &spec)?;
        let m = oracle_samples(cfg, &f);
        let oracle = spectral_radius_oracle(&f, &cs, m)?;
        results["oracle"] = json!({
            "value": oracle.value,
            "sampling_bound": oracle.sampling_bound,
            "samples_per_circle": oracle.samples_per_circle,
            "argmax": CharacterLiteral::from_character(&oracle.argmax),
        });
        if spec.free_rank() == 1 && spec.torsion_orders().is_empty() {
            for (name, r) in [("gelfand_inner", cs.annuli[0].inner), ("gelfand_outer", cs.annuli[0].outer)] {
                if name == "gelfand_inner" && cs.boundary_radii(0).len() == 1 {
                    continue;
                }
                let grid = sample_gelfand_grid(&f, &cs, &[r], &[m])?;
                let step = std::f64::consts::TAU / m as f64;
                curves.push(Curve::complex(name, grid.values.iter().enumerate().map(|(s, z)| (s as f64 * step, *z))));
            }
        }
    }
    Ok(Outcome { results, curves, flags })
}

fn run_example_paper(cfg: &ExperimentConfig) -> Result<Outcome> {
    let spec = GroupSpec::integers();
    let w = parse_weight("poly:1", &spec)?;
    let top = weight_exponent(cfg);
    let one = spec.generator(0);
    let rw = weight_radius(&w, &one, top)?;
    let n_top = rw.n_reached as f64;

    // lim (1 + |n + m|)^(1/n) for a few shifts m, at the top rung
    let shifted: Vec<Value> = (-3i64..=3)
        .map(|m| json!({"m": m, "value": (1.0 + (n_top + m as f64).abs()).powf(1.0 / n_top)}))
        .collect();

    let sums = bd_partial_sums(&w, &one, &EXAMPLE_DOMAR_LADDER)?;
    let one_sided = one_sided_sums(&EXAMPLE_DOMAR_LADDER);
    let monotone = sums.windows(2).all(|p| p[1].1 >= p[0].1);
    let (n_prev, s_prev) = sums[sums.len() - 2];
    let (_, s_last) = sums[sums.len() - 1];
    let two_sided_gap = s_last - s_prev;
    let one_sided_gap = one_sided[one_sided.len() - 1].1 - one_sided[one_sided.len() - 2].1;
    // sum_{n > N} 2 ln(1 + n) / (1 + n^2) <= 2 (ln N + 1) / N
    let tail_bound = 2.0 * ((n_prev as f64).ln() + 1.0) / n_prev as f64;

    let cs = character_space(&w, top)?;
    let annulus = &cs.annuli[0];
    let tol = cfg.tolerance.unwrap_or(DEFAULT_TOLERANCE);
    let report = classify_weight(&w, tol)?;
    let torus = cs.is_torus(tol);

    Ok(Outcome {
        results: json!({
            "group": format_group(&spec),
            "weight": format_weight(&w),
            "rw": {
                "top_value": rw.top_value(),
                "estimate": rw.estimate,
                "n_reached": rw.n_reached,
                "exact": rw.exact,
                "closed_form_top": (1.0 + n_top).powf(1.0 / n_top),
                "within_tolerance": (rw.top_value() - 1.0).abs() <= tol,
                "shifted": shifted,
            },
            "domar": {
                "sums": sums,
                "one_sided_sums": one_sided,
                "monotone": monotone,
                "top_gap": two_sided_gap,
                "top_gap_one_sided": one_sided_gap,
                "tail_bound": tail_bound,
                "gap_within_bound": two_sided_gap.abs() <= tail_bound,
            },
            "annulus": {
                "r_plus": annulus.outer,
                "r_minus": annulus.inner,
                "exact": annulus.exact,
                "within_tolerance": (annulus.outer - 1.0).abs() <= tol && (annulus.inner - 1.0).abs() <= tol,
            },
            "character_space": if torus { "T" } else { "annulus" },
            "verdict": report.verdict,
            "family_exact": report.family_exact,
            "tauberian": true,
        }),
        curves: vec![
            Curve::real("rw_ladder", rw.ladder.iter().map(|&(n, v)| (n as f64, v))),
            Curve::real("domar_sums", sums.iter().map(|&(n, s)| (n as f64, s))),
        ],
        flags: Vec::new(),
    })
}

/// `sum_{n=1..N} ln(1 + n) / (1 + n^2)` on the positive ray.
fn one_sided_sums(ladder: &[u64]) -> Vec<(u64, f64)> {
    let mut out = Vec::with_capacity(ladder.len());
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    let mut n = 1u64;
    for &top in ladder {
        while n <= top {
            let nf = n as f64;
            let term = nf.ln_1p() / (1.0 + nf * nf);
            let t = sum + term;
            comp += if sum.abs() >= term.abs() { (sum - t) + term } else { (term - t) + sum };
            sum = t;
            n += 1;
        }
        out.push((top, sum + comp));
    }
    out
}

fn run_probe_finite(cfg: &ExperimentConfig) -> Result<Outcome> {
    let (spec, w) = group_and_weight(cfg)?;
    let probe = finite_gelfand_probe(&spec, &w)?;
    let mut results = json!({
        "order": probe.order,
        "rank": probe.rank,
        "surjective": probe.surjective,
        "isometry_defect": probe.isometry_defect,
        "witness": element_to_json(&probe.witness),
    });
    if let Some(text) = &cfg.element {
        let f = parse_element(text, &spec)?;
        results["element_defect"] = json!(isometry_defect(&f, &w)?);
    }
    Ok(Outcome { results, curves: Vec::new(), flags: Vec::new() })
}

fn run_separate(cfg: &ExperimentConfig) -> Result<Outcome> {
    let (spec, w) = group_and_weight(cfg)?;
    let cs = character_space(&w, weight_exponent(cfg))?;
    let phi = parse_character(require(&cfg.target, "target", cfg.command)?, &spec)?;
    let excluded = match &cfg.exclude {
        Some(text) => parse_characters(text, &spec)?,
        None => Vec::new(),
    };
    let f = separating_element(&cs, &excluded, &phi)?;
    let at_target = gelfand_eval(&f, &phi)?;
    let mut max_excluded = 0.0f64;
    for e in &excluded {
        max_excluded = max_excluded.max(gelfand_eval(&f, e)?.norm());
    }
    Ok(Outcome {
        results: json!({
            "element": element_to_json(&f),
            "value_at_target": cplx(at_target),
            "max_abs_on_excluded": max_excluded,
            "norm_l1w": norm_l1w(&f, &w)?,
        }),
        curves: Vec::new(),
        flags: Vec::new(),
    })
}

fn run_bochner(cfg: &ExperimentConfig) -> Result<Outcome> {
    let (spec, w) = group_and_weight(cfg)?;
    let cs = character_space(&w, weight_exponent(cfg))?;
    let mu = parse_measure(require(&cfg.measure, "measure", cfg.command)?, &cs)?;
    let phi = synthesize_functional(&mu);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut probes = Vec::new();
    if let Some(text) = &cfg.element {
        probes.push(parse_element(text, &spec)?);
    }
    while probes.len() < 8 {
        probes.push(random_element(&spec, &mut rng, 3, 3));
    }
    let gram = gram_positivity_check(&phi, &probes)?;
    let mut flags = Vec::new();
    if !gram.torus_atoms {
        flags.push("off_torus_atoms".into());
    }
    Ok(Outcome {
        results: json!({
            "atoms": mu.atoms().len(),
            "nonnegative": mu.is_nonnegative(),
            "torus_atoms": gram.torus_atoms,
            "probes": probes.iter().map(element_to_json).collect::<Vec<_>>(),
            "eigenvalues": gram.eigenvalues,
            "min_eigenvalue": gram.min_eigenvalue,
            "frobenius_norm": gram.frobenius_norm,
            "psd": gram.psd,
            "hermitian": gram.hermitian,
        }),
        curves: Vec::new(),
        flags,
    })
}

fn csv_field(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Renders a report; CSV flattens every curve to `series,x,re,im,value` rows.
pub fn render_report(r: &Report, format: Format) -> Result<String> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(r).map_err(|e| Error::Io(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut s = String::from("series,x,re,im,value\n");
            for c in &r.curves {
                for p in &c.points {
                    let _ = writeln!(
                        s,
                        "{},{},{},{},{}",
                        c.series,
                        p.x,
                        csv_field(p.re),
                        csv_field(p.im),
                        csv_field(p.value)
                    );
                }
            }
            Ok(s)
        }
    }
}

/// Writes the rendered report; an existing file is only replaced with `force`.
pub fn write_report(r: &Report, path: &Path, format: Format, force: bool) -> Result<()> {
    if path.exists() && !force {
        return Err(Error::Io(format!("refusing to overwrite {} (pass --force)", path.display())));
    }
    let text = render_report(r, format)?;
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
