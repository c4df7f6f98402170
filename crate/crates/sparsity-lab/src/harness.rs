//! Experiment harness: flat key=value configuration, mode dispatch, and the
//! byte-stable CSV / JSONL writers behind the command-line interface.
//!
//! Exit codes: 0 success, 1 configuration error, 2 a checked bound or
//! identity failed, 3 workload exceeded.

use crate::approx::{ApproxError, ApproxInstance};
use crate::charsum::{
    self, CharSumError, CharSumSpec, KorobovDenominator, DEFAULT_BOUND_SLACK,
};
use crate::example21::{self, Example21Error};
use crate::forms::{self, FormsError, SparseForm};
use crate::sieve::{self, SieveError, SieveSet};
use crate::{fmt_f64, Workload};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fmt;

pub const ENV_BUDGET: &str = "SPARSITY_LAB_BUDGET";

#[derive(Debug, Clone, PartialEq)]
pub enum HarnessError {
    /// Bad configuration; exit code 1. The message names the offending key.
    Config(String),
    /// A bound assertion or exact identity failed; exit code 2.
    BoundFailed(String),
    /// Workload budget exceeded; exit code 3.
    Workload(String),
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 1,
            HarnessError::BoundFailed(_) => 2,
            HarnessError::Workload(_) => 3,
        }
    }
}

impl fmt::Display for HarnessError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HarnessError::Config(m) => write!(f, "config error: {}", m),
            HarnessError::BoundFailed(m) => write!(f, "bound failed: {}", m),
            HarnessError::Workload(m) => write!(f, "workload exceeded: {}", m),
        }
    }
}

impl std::error::Error for HarnessError {}

impl From<CharSumError> for HarnessError {
    fn from(e: CharSumError) -> Self {
        match e {
            CharSumError::WorkloadExceeded { .. } => HarnessError::Workload(e.to_string()),
            CharSumError::IdentityViolated(_) => HarnessError::BoundFailed(e.to_string()),
            CharSumError::Forms(FormsError::WorkloadExceeded { .. }) => {
                HarnessError::Workload(e.to_string())
            }
            other => HarnessError::Config(other.to_string()),
        }
    }
}

impl From<FormsError> for HarnessError {
    fn from(e: FormsError) -> Self {
        match e {
            FormsError::WorkloadExceeded { .. } => HarnessError::Workload(e.to_string()),
            FormsError::DomainError(_) => HarnessError::Config(e.to_string()),
        }
    }
}

impl From<SieveError> for HarnessError {
    fn from(e: SieveError) -> Self {
        HarnessError::Config(e.to_string())
    }
}

impl From<ApproxError> for HarnessError {
    fn from(e: ApproxError) -> Self {
        match e {
            ApproxError::WorkloadExceeded { .. } => HarnessError::Workload(e.to_string()),
            other => HarnessError::Config(other.to_string()),
        }
    }
}

impl From<Example21Error> for HarnessError {
    fn from(e: Example21Error) -> Self {
        match e {
            Example21Error::PrecisionInsufficient { .. } => HarnessError::BoundFailed(e.to_string()),
            other => HarnessError::Config(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Jsonl,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Result<Self, HarnessError> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "jsonl" => Ok(OutputFormat::Jsonl),
            other => Err(HarnessError::Config(format!(
                "format must be csv or jsonl, got {}",
                other
            ))),
        }
    }
}

/// A fully resolved experiment: mode, mode parameters, and the run-wide
/// settings. Every output record embeds this.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub mode: String,
    pub params: BTreeMap<String, String>,
    pub seed: u64,
    pub budget: u64,
    pub format: OutputFormat,
}

pub const MODES: [&str; 9] = [
    "sieve",
    "count-squares",
    "count-sparse",
    "char-sum",
    "verify-lemma",
    "approx-search",
    "example-21",
    "sieve-stats",
    "growth-table",
];

impl ExperimentConfig {
    pub fn new(mode: &str) -> Result<Self, HarnessError> {
        if !MODES.contains(&mode) {
            return Err(HarnessError::Config(format!("unknown mode {}", mode)));
        }
        Ok(ExperimentConfig {
            mode: mode.to_string(),
            params: BTreeMap::new(),
            seed: 0,
            budget: Workload::default().max_states,
            format: OutputFormat::Csv,
        })
    }

    /// Parses flat `key=value` lines with `#` comments. Reserved keys
    /// (mode, seed, budget, format) configure the run itself; everything
    /// else lands in the parameter map.
    pub fn apply_config_text(&mut self, text: &str) -> Result<(), HarnessError> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                HarnessError::Config(format!("line {}: expected key=value, got {}", lineno + 1, raw))
            })?;
            self.apply_pair(key.trim(), value.trim())?;
        }
        Ok(())
    }

    pub fn apply_pair(&mut self, key: &str, value: &str) -> Result<(), HarnessError> {
        match key {
            "mode" => {
                if !MODES.contains(&value) {
                    return Err(HarnessError::Config(format!("unknown mode {}", value)));
                }
                self.mode = value.to_string();
            }
            "seed" => {
                self.seed = value
                    .parse()
                    .map_err(|_| HarnessError::Config(format!("bad seed {}", value)))?
            }
            "budget" => {
                self.budget = value
                    .parse()
                    .map_err(|_| HarnessError::Config(format!("bad budget {}", value)))?
            }
            "format" => self.format = OutputFormat::parse(value)?,
            _ => {
                self.params.insert(key.to_string(), value.to_string());
            }
        }
        Ok(())
    }

    /// Rejects any parameter key outside `allowed`, naming the offender.
    fn check_keys(&self, allowed: &[&str]) -> Result<(), HarnessError> {
        for key in self.params.keys() {
            if !allowed.contains(&key.as_str()) {
                return Err(HarnessError::Config(format!(
                    "unknown key {} for mode {} (allowed: {})",
                    key,
                    self.mode,
                    allowed.join(", ")
                )));
            }
        }
        Ok(())
    }

    /// The full resolved configuration as a flat sorted map.
    pub fn resolved(&self) -> BTreeMap<String, String> {
        let mut map = self.params.clone();
        map.insert("mode".into(), self.mode.clone());
        map.insert("seed".into(), self.seed.to_string());
        map.insert("budget".into(), self.budget.to_string());
        map.insert(
            "format".into(),
            match self.format {
                OutputFormat::Csv => "csv".into(),
                OutputFormat::Jsonl => "jsonl".into(),
            },
        );
        map
    }

    fn workload(&self) -> Workload {
        Workload::new(self.budget)
    }

    // -- typed parameter access ------------------------------------------

    fn required(&self, key: &str) -> Result<&str, HarnessError> {
        self.params
            .get(key)
            .map(|s| s.as_str())
            .ok_or_else(|| HarnessError::Config(format!("missing key {} for mode {}", key, self.mode)))
    }

    fn get_u64(&self, key: &str) -> Result<u64, HarnessError> {
        self.required(key)?
            .parse()
            .map_err(|_| HarnessError::Config(format!("key {} must be a non-negative integer", key)))
    }

    fn get_u64_or(&self, key: &str, default: u64) -> Result<u64, HarnessError> {
        match self.params.get(key) {
            None => Ok(default),
            Some(_) => self.get_u64(key),
        }
    }

    fn get_u32(&self, key: &str) -> Result<u32, HarnessError> {
        self.required(key)?
            .parse()
            .map_err(|_| HarnessError::Config(format!("key {} must be a 32-bit integer", key)))
    }

    fn get_f64(&self, key: &str) -> Result<f64, HarnessError> {
        self.required(key)?
            .parse()
            .map_err(|_| HarnessError::Config(format!("key {} must be a real number", key)))
    }

    fn get_f64_or(&self, key: &str, default: f64) -> Result<f64, HarnessError> {
        match self.params.get(key) {
            None => Ok(default),
            Some(_) => self.get_f64(key),
        }
    }

    fn get_i64_list(&self, key: &str) -> Result<Vec<i64>, HarnessError> {
        self.required(key)?
            .split(',')
            .map(|t| {
                t.trim()
                    .parse()
                    .map_err(|_| HarnessError::Config(format!("key {} must be a comma-separated integer list", key)))
            })
            .collect()
    }

    fn get_u64_list(&self, key: &str) -> Result<Vec<u64>, HarnessError> {
        self.required(key)?
            .split(',')
            .map(|t| {
                t.trim()
                    .parse()
                    .map_err(|_| HarnessError::Config(format!("key {} must be a comma-separated list of non-negative integers", key)))
            })
            .collect()
    }
}

// ---------------------------------------------------------------------------
// box-cap derivation and growth tables
// ---------------------------------------------------------------------------

/// Smallest exponent cap `K` with `g^K > (sum |c_i|) * N^2`.
///
/// Why it suffices: take a representation `n^2 = F(k)` with minimal largest
/// exponent and sort the exponents. If some gap of width
/// `h0 = ceil(log_g(2 sum |c_i|))` splits the tuple, the terms above the gap
/// sum to `g^(k_top) * H`; `H = 0` would contradict minimality (the whole
/// block slides down), and `H != 0` forces
/// `n^2 >= g^(k_top) - (sum |c_i|) g^(k_top - h0) >= 0.5 g^(k_top)`, so
/// `k_top` stays below the cap. Without such a gap the exponents are chained
/// within `h0` of each other and `g^(k_1) <= n^2` pins them all. The
/// `sum |c_i|` factor in the cap absorbs one chained block of gaps.
///
/// ```
/// use sparsity_lab::forms::SparseForm;
/// use sparsity_lab::harness::derive_box_cap;
///
/// let form = SparseForm::new(2, vec![1, 1]).unwrap();
/// assert_eq!(derive_box_cap(&form, 20), 10); // 2^10 > 2 * 20^2
/// ```
pub fn derive_box_cap(form: &SparseForm, n_max: u64) -> u32 {
    let weight = BigInt::from(form.coeff_weight());
    let target = weight * BigInt::from(n_max) * BigInt::from(n_max);
    let g = BigInt::from(form.base());
    let mut k = 1u32;
    let mut power = g.clone();
    while power <= target {
        power *= &g;
        k += 1;
    }
    k.max(2)
}

/// One row of a growth table.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthRow {
    pub n_bound: u64,
    pub k_cap: u32,
    pub count: u64,
    pub log_pow_m: f64,
    pub log_pow_m_gamma: f64,
    pub ratio_m: f64,
    pub ratio_gamma: f64,
}

/// Counts representable roots for each bound in the grid and reports the
/// counts next to `(log N)^m` and `(log N)^(m - gamma_m)`. Inspection data
/// only; no asymptotic claim is checked. For m < 3 the saving exponent is
/// undefined and 0 is used.
pub fn growth_table(
    form: &SparseForm,
    grid: &[u64],
    workload: &Workload,
) -> Result<Vec<GrowthRow>, FormsError> {
    let m = form.arity();
    let gamma = if m >= 3 {
        let r = forms::gamma_m(m as u64)?;
        *r.numer() as f64 / *r.denom() as f64
    } else {
        0.0
    };
    let mut rows = Vec::new();
    for &n_bound in grid {
        let k_cap = derive_box_cap(form, n_bound);
        let (count, _) = form.count_representable(n_bound, k_cap, workload)?;
        let log_n = (n_bound.max(2) as f64).ln();
        let log_pow_m = log_n.powi(m as i32);
        let log_pow_m_gamma = log_n.powf(m as f64 - gamma);
        rows.push(GrowthRow {
            n_bound,
            k_cap,
            count,
            log_pow_m,
            log_pow_m_gamma,
            ratio_m: count as f64 / log_pow_m,
            ratio_gamma: count as f64 / log_pow_m_gamma,
        });
    }
    Ok(rows)
}

// ---------------------------------------------------------------------------
// output assembly
// ---------------------------------------------------------------------------

fn config_comment(cfg: &ExperimentConfig) -> String {
    let pairs: Vec<String> = cfg
        .resolved()
        .into_iter()
        .map(|(k, v)| format!("{}={}", k, v))
        .collect();
    format!("# config: {}\n", pairs.join(" "))
}

fn config_json(cfg: &ExperimentConfig) -> Value {
    Value::Object(
        cfg.resolved()
            .into_iter()
            .map(|(k, v)| (k, Value::String(v)))
            .collect(),
    )
}

fn params_json(cfg: &ExperimentConfig, extra: &[(String, String)]) -> Value {
    let mut map: serde_json::Map<String, Value> = cfg
        .params
        .iter()
        .map(|(k, v)| (k.clone(), Value::String(v.clone())))
        .collect();
    for (k, v) in extra {
        map.insert(k.clone(), Value::String(v.clone()));
    }
    Value::Object(map)
}

fn jsonl_record(cfg: &ExperimentConfig, mut fields: serde_json::Map<String, Value>) -> String {
    fields.insert("config".into(), config_json(cfg));
    let mut line = serde_json::to_string(&Value::Object(fields)).expect("serializable record");
    line.push('\n');
    line
}

fn complex_json(z: num_complex::Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

// ---------------------------------------------------------------------------
// mode execution
// ---------------------------------------------------------------------------

/// The produced output text plus whether every checked bound held.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub text: String,
    /// False when some checked bound or identity failed; the caller should
    /// exit with code 2 after writing the records.
    pub pass: bool,
}

impl RunOutput {
    fn ok(text: String) -> Self {
        RunOutput { text, pass: true }
    }

    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            2
        }
    }
}

/// Runs the experiment and returns the full output text (CSV or JSONL).
pub fn execute(cfg: &ExperimentConfig) -> Result<RunOutput, HarnessError> {
    match cfg.mode.as_str() {
        "sieve" => run_sieve(cfg),
        "count-squares" => run_count_squares(cfg),
        "count-sparse" => run_count_sparse(cfg),
        "char-sum" => run_char_sum(cfg),
        "verify-lemma" => run_verify_lemma(cfg),
        "approx-search" => run_approx_search(cfg),
        "example-21" => run_example21(cfg),
        "sieve-stats" => run_sieve_stats(cfg),
        "growth-table" => run_growth_table(cfg),
        other => Err(HarnessError::Config(format!("unknown mode {}", other))),
    }
}

fn admit_states(cfg: &ExperimentConfig, states: u128) -> Result<(), HarnessError> {
    cfg.workload().admit(states).map_err(|s| {
        HarnessError::Workload(format!("{} states > budget {}", s, cfg.budget))
    })
}

fn parse_form(cfg: &ExperimentConfig) -> Result<SparseForm, HarnessError> {
    let g = cfg.get_u64("g")?;
    let coeffs = cfg.get_i64_list("c")?;
    SparseForm::new(g, coeffs).map_err(HarnessError::from)
}

fn build_set(cfg: &ExperimentConfig) -> Result<SieveSet, HarnessError> {
    let g = cfg.get_u64("g")?;
    let z = cfg.get_f64("z")?;
    let alpha = cfg.get_f64_or("alpha", sieve::DEFAULT_ALPHA)?;
    let c1 = cfg.get_f64_or("c1", sieve::DEFAULT_C1)?;
    if g < 2 {
        return Err(HarnessError::Config("g must be >= 2".into()));
    }
    if !z.is_finite() || z < 3.0 {
        return Err(HarnessError::Config("z must be a finite number >= 3".into()));
    }
    if !alpha.is_finite() || alpha <= 0.0 || alpha >= 1.0 {
        return Err(HarnessError::Config("alpha must lie strictly between 0 and 1".into()));
    }
    if !c1.is_finite() || c1 <= 1.0 || c1 * z > 1e12 {
        return Err(HarnessError::Config("c1 must exceed 1 (and keep c1*z scannable)".into()));
    }
    sieve::build_sieve_set(g, z, alpha, c1).map_err(HarnessError::from)
}

fn run_sieve(cfg: &ExperimentConfig) -> Result<RunOutput, HarnessError> {
    cfg.check_keys(&["g", "z", "alpha", "c1"])?;
    let set = build_set(cfg)?;
    set.verify_members()
        .map_err(HarnessError::BoundFailed)?;
    match cfg.format {
        OutputFormat::Csv => Ok(RunOutput::ok(format!("{}{}", config_comment(cfg), set.to_csv()))),
        OutputFormat::Jsonl => {
            let mut out = String::new();
            for p in &set.primes {
                let mut fields = serde_json::Map::new();
                fields.insert("ell".into(), json!(p.ell));
                fields.insert("tau".into(), json!(p.tau));
                fields.insert("p_largest".into(), json!(p.p_largest));
                fields.insert("nu2".into(), json!(p.nu2));
                fields.insert("u0".into(), json!(set.u0));
                out.push_str(&jsonl_record(cfg, fields));
            }
            Ok(RunOutput::ok(out))
        }
    }
}

fn run_count_squares(cfg: &ExperimentConfig) -> Result<RunOutput, HarnessError> {
    cfg.check_keys(&["g", "c", "K", "N", "mitm"])?;
    let form = parse_form(cfg)?;
    let k_cap = match cfg.params.get("K") {
        Some(_) => cfg.get_u32("K")?,
        None => derive_box_cap(&form, cfg.get_u64("N")?),
    };
    let workload = cfg.workload();
    let count = form.count_square_tuples(k_cap, &workload)?;
    if cfg.params.get("mitm").map(|s| s.as_str()) == Some("true") {
        let alt = form.count_square_tuples_mitm(k_cap, &workload)?;
        if alt.total != count.total {
            return Err(HarnessError::BoundFailed(format!(
                "meet-in-the-middle count {} disagrees with direct count {}",
                alt.total, count.total
            )));
        }
    }
    match cfg.format {
        OutputFormat::Csv => {
            let m = form.arity();
            let mut out = config_comment(cfg);
            let ks: Vec<String> = (1..=m).map(|i| format!("k_{}", i)).collect();
            out.push_str(&format!("n,n_squared,{}\n", ks.join(",")));
            for hit in &count.hits {
                let ks: Vec<String> = hit.k.iter().map(|k| k.to_string()).collect();
                out.push_str(&format!("{},{},{}\n", hit.root, hit.value, ks.join(",")));
            }
            Ok(RunOutput::ok(out))
        }
        OutputFormat::Jsonl => {
            let mut fields = serde_json::Map::new();
            fields.insert("K".into(), json!(k_cap));
            fields.insert("count".into(), json!(count.total));
            fields.insert("zero_tuples".into(), json!(count.zero_hits));
            Ok(RunOutput::ok(jsonl_record(cfg, fields)))
        }
    }
}

fn run_count_sparse(cfg: &ExperimentConfig) -> Result<RunOutput, HarnessError> {
    cfg.check_keys(&["g", "m", "K"])?;
    let g = cfg.get_u64("g")?;
    if g < 2 {
        return Err(HarnessError::Config("g must be >= 2".into()));
    }
    let m = cfg.get_u32("m")?;
    let k_digits = cfg.get_u32("K")?;
    let count = forms::count_sparse_squares(g, m, k_digits, &cfg.workload())?;
    match cfg.format {
        OutputFormat::Csv => Ok(RunOutput::ok(format!(
            "{}g,m,K,count\n{},{},{},{}\n",
            config_comment(cfg),
            g,
            m,
            k_digits,
            count
        ))),
        OutputFormat::Jsonl => {
            let mut fields = serde_json::Map::new();
            fields.insert("count".into(), json!(count));
            Ok(RunOutput::ok(jsonl_record(cfg, fields)))
        }
    }
}

struct LemmaOutcome {
    lemma: String,
    value: Value,
    bound: f64,
    ratio: f64,
    pass: bool,
    /// Per-record additions to the params object (sampled coefficients).
    extra: Vec<(String, String)>,
}

fn lemma_csv_header() -> &'static str {
    "lemma,value,bound,ratio,pass\n"
}

fn lemma_csv_row(o: &LemmaOutcome) -> String {
    let value = match &o.value {
        Value::Object(map) => format!(
            "{}+{}i",
            fmt_f64(map["re"].as_f64().unwrap_or(f64::NAN)),
            fmt_f64(map["im"].as_f64().unwrap_or(f64::NAN))
        ),
        v => v.to_string(),
    };
    format!(
        "{},{},{},{},{}\n",
        o.lemma,
        value,
        fmt_f64(o.bound),
        fmt_f64(o.ratio),
        o.pass
    )
}

fn emit_lemma_records(
    cfg: &ExperimentConfig,
    outcomes: Vec<LemmaOutcome>,
) -> Result<RunOutput, HarnessError> {
    let all_pass = outcomes.iter().all(|o| o.pass);
    let text = match cfg.format {
        OutputFormat::Csv => {
            let mut out = config_comment(cfg);
            out.push_str(lemma_csv_header());
            for o in &outcomes {
                out.push_str(&lemma_csv_row(o));
            }
            out
        }
        OutputFormat::Jsonl => {
            let mut out = String::new();
            for o in &outcomes {
                let mut fields = serde_json::Map::new();
                fields.insert("lemma".into(), json!(o.lemma));
                fields.insert("params".into(), params_json(cfg, &o.extra));
                fields.insert("value".into(), o.value.clone());
                fields.insert("bound".into(), json!(o.bound));
                fields.insert("ratio".into(), json!(o.ratio));
                fields.insert("pass".into(), json!(o.pass));
                out.push_str(&jsonl_record(cfg, fields));
            }
            out
        }
    };
    Ok(RunOutput {
        text,
        pass: all_pass,
    })
}

fn run_char_sum(cfg: &ExperimentConfig) -> Result<RunOutput, HarnessError> {
    cfg.check_keys(&[
        "kind", "q", "d", "a", "chi", "ell", "r", "theta", "b", "L", "denom",
    ])?;
    let workload = cfg.workload();
    let kind = cfg.required("kind")?;
    let outcome = match kind {
        "quad" => {
            let (value, bound) =
                charsum::quad_diag_sum(cfg.get_u64("q")?, cfg.get_u64("d")?, &cfg.get_i64_list("a")?, &workload)?;
            LemmaOutcome {
                lemma: "quad".into(),
                value: json!(value),
                bound,
                ratio: value.unsigned_abs() as f64 / bound,
                pass: (value.unsigned_abs() as f64) <= bound,
                extra: Vec::new(),
            }
        }
        "twisted" => {
            let (value, bound) = charsum::twisted_diag_sum(
                cfg.get_u64("q")?,
                cfg.get_u64("d")?,
                &cfg.get_i64_list("a")?,
                &cfg.get_u64_list("chi")?,
                &workload,
            )?;
            LemmaOutcome {
                lemma: "twisted".into(),
                value: complex_json(value),
                bound,
                ratio: value.norm() / bound,
                pass: value.norm() <= DEFAULT_BOUND_SLACK * bound,
                extra: Vec::new(),
            }
        }
        "s_ell" => {
            let ell = cfg.get_u64("ell")?;
            let arity = cfg.get_i64_list("a")?.len() as u32;
            admit_states(cfg, (ell as u128).saturating_pow(arity))?;
            let s = charsum::s_ell(
                ell,
                cfg.get_u64("theta")?,
                &cfg.get_i64_list("a")?,
                &cfg.get_u64_list("b")?,
            )?;
            LemmaOutcome {
                lemma: "s_ell".into(),
                value: complex_json(s.value),
                bound: s.bound,
                ratio: s.value.norm() / s.bound,
                pass: if s.bound_strict {
                    s.value.norm() <= s.bound
                } else {
                    s.value.norm() <= DEFAULT_BOUND_SLACK * s.bound
                },
                extra: Vec::new(),
            }
        }
        "product" => {
            let spec = CharSumSpec::pair(
                cfg.get_u64("ell")?,
                cfg.get_u64("r")?,
                cfg.get_u64("theta")?,
                cfg.get_i64_list("a")?,
                cfg.get_u64_list("b")?,
            )?;
            let p = charsum::product_sum(&spec, &workload)?;
            LemmaOutcome {
                lemma: "product".into(),
                value: complex_json(p.full.value),
                bound: charsum::COMPLEX_EQ_TOLERANCE,
                ratio: p.factorization_gap() / charsum::COMPLEX_EQ_TOLERANCE,
                pass: p.holds(),
                extra: Vec::new(),
            }
        }
        "incomplete" => {
            let spec = CharSumSpec::pair(
                cfg.get_u64("ell")?,
                cfg.get_u64("r")?,
                cfg.get_u64("theta")?,
                cfg.get_i64_list("a")?,
                vec![0; cfg.get_i64_list("a")?.len()],
            )?;
            let (value, bound) = charsum::incomplete_sum(&spec, &cfg.get_u64_list("L")?, &workload)?;
            LemmaOutcome {
                lemma: "incomplete".into(),
                value: json!(value as i64),
                bound,
                ratio: value.unsigned_abs() as f64 / bound,
                pass: value.unsigned_abs() as f64 <= DEFAULT_BOUND_SLACK * bound,
                extra: Vec::new(),
            }
        }
        "korobov" => {
            let denom = match cfg.params.get("denom").map(|s| s.as_str()) {
                None | Some("ell") => KorobovDenominator::Modulus,
                Some("t") => KorobovDenominator::Period,
                Some(other) => {
                    return Err(HarnessError::Config(format!(
                        "denom must be ell or t, got {}",
                        other
                    )))
                }
            };
            let ell = cfg.get_u64("ell")?;
            admit_states(cfg, 2 * ell as u128)?;
            let (value, bound) = charsum::korobov_sum(
                cfg.get_i64_list("a")?[0],
                cfg.get_u64("theta")?,
                ell,
                denom,
            )?;
            LemmaOutcome {
                lemma: "korobov".into(),
                value: complex_json(value),
                bound,
                ratio: value.norm() / bound,
                pass: value.norm() <= bound,
                extra: Vec::new(),
            }
        }
        other => {
            return Err(HarnessError::Config(format!(
                "unknown kind {} (quad, twisted, s_ell, product, incomplete, korobov)",
                other
            )))
        }
    };
    emit_lemma_records(cfg, vec![outcome])
}

fn run_verify_lemma(cfg: &ExperimentConfig) -> Result<RunOutput, HarnessError> {
    cfg.check_keys(&[
        "lemma", "q", "d", "a", "chi", "ell", "r", "theta", "b", "L", "denom", "g", "c", "K", "m",
        "z", "alpha", "c1", "kappa", "samples", "slack",
    ])?;
    let workload = cfg.workload();
    let slack = cfg.get_f64_or("slack", DEFAULT_BOUND_SLACK)?;
    let lemma = cfg.required("lemma")?.to_string();
    let mut outcomes = Vec::new();
    match lemma.as_str() {
        "3.3" => {
            let form = parse_form(cfg)?;
            let set = build_set(cfg)?;
            let k_cap = cfg.get_u32("K")?;
            if k_cap < 1 {
                return Err(HarnessError::Config("K must be >= 1".into()));
            }
            let (sum, ratio) = sieve::omega_sum(&form, k_cap, &set);
            let m = form.arity() as i32;
            let envelope = ((k_cap as f64).powi(m) * set.z.powf(-set.alpha)
                + (k_cap as f64).powi(m - 1))
                * set.len() as f64;
            outcomes.push(LemmaOutcome {
                lemma,
                value: json!(sum),
                bound: envelope,
                ratio,
                pass: ratio <= slack,
                extra: Vec::new(),
            });
        }
        "3.4" => {
            let set = build_set(cfg)?;
            let kappa = cfg.get_f64("kappa")?;
            let (value, ratio) = sieve::gcd_sum(&set, kappa);
            let envelope = set.z.powf(kappa + set.alpha - set.alpha * kappa + 1.0);
            outcomes.push(LemmaOutcome {
                lemma,
                value: json!(value.as_f64()),
                bound: envelope,
                ratio,
                pass: ratio <= slack,
                extra: Vec::new(),
            });
        }
        "4.1" => {
            let q = cfg.get_u64("q")?;
            let d = cfg.get_u64("d")?;
            match cfg.params.get("samples") {
                None => {
                    let (value, bound) = charsum::quad_diag_sum(q, d, &cfg.get_i64_list("a")?, &workload)?;
                    outcomes.push(LemmaOutcome {
                        lemma,
                        value: json!(value),
                        bound,
                        ratio: value.unsigned_abs() as f64 / bound,
                        pass: value.unsigned_abs() as f64 <= bound,
                        extra: Vec::new(),
                    });
                }
                Some(_) => {
                    let samples = cfg.get_u64("samples")?;
                    let m = cfg.get_u64_or("m", 2)? as usize;
                    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                    for _ in 0..samples {
                        let a: Vec<i64> = (0..m).map(|_| rng.gen_range(1..q) as i64).collect();
                        let (value, bound) = charsum::quad_diag_sum(q, d, &a, &workload)?;
                        let drawn = a.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
                        outcomes.push(LemmaOutcome {
                            lemma: lemma.clone(),
                            value: json!(value),
                            bound,
                            ratio: value.unsigned_abs() as f64 / bound,
                            pass: value.unsigned_abs() as f64 <= bound,
                            extra: vec![("a_sampled".into(), drawn)],
                        });
                    }
                }
            }
        }
        "4.2" => {
            let (value, bound) = charsum::twisted_diag_sum(
                cfg.get_u64("q")?,
                cfg.get_u64("d")?,
                &cfg.get_i64_list("a")?,
                &cfg.get_u64_list("chi")?,
                &workload,
            )?;
            outcomes.push(LemmaOutcome {
                lemma,
                value: complex_json(value),
                bound,
                ratio: value.norm() / bound,
                pass: value.norm() <= slack * bound,
                extra: Vec::new(),
            });
        }
        "4.3" => {
            let spec = CharSumSpec::pair(
                cfg.get_u64("ell")?,
                cfg.get_u64("r")?,
                cfg.get_u64("theta")?,
                cfg.get_i64_list("a")?,
                cfg.get_u64_list("b")?,
            )?;
            let p = charsum::product_sum(&spec, &workload)?;
            outcomes.push(LemmaOutcome {
                lemma,
                value: complex_json(p.full.value),
                bound: charsum::COMPLEX_EQ_TOLERANCE,
                ratio: p.factorization_gap() / charsum::COMPLEX_EQ_TOLERANCE,
                pass: p.holds(),
                extra: Vec::new(),
            });
        }
        "4.4" => {
            let ell = cfg.get_u64("ell")?;
            let arity = cfg.get_i64_list("a")?.len() as u32;
            admit_states(cfg, (ell as u128).saturating_pow(arity))?;
            let s = charsum::s_ell(
                ell,
                cfg.get_u64("theta")?,
                &cfg.get_i64_list("a")?,
                &cfg.get_u64_list("b")?,
            )?;
            outcomes.push(LemmaOutcome {
                lemma,
                value: complex_json(s.value),
                bound: s.bound,
                ratio: s.value.norm() / s.bound,
                pass: if s.bound_strict {
                    s.value.norm() <= s.bound
                } else {
                    s.value.norm() <= slack * s.bound
                },
                extra: Vec::new(),
            });
        }
        "4.5" => {
            let spec = CharSumSpec::pair(
                cfg.get_u64("ell")?,
                cfg.get_u64("r")?,
                cfg.get_u64("theta")?,
                cfg.get_i64_list("a")?,
                cfg.get_u64_list("b")?,
            )?;
            let p = charsum::product_sum(&spec, &workload)?;
            let m = spec.arity() as f64;
            let lr = (spec.ell * spec.r.unwrap()) as f64;
            let strict = spec.b_is_zero() && spec.t.unwrap() % 2 == 1;
            let bound = if strict {
                spec.t.unwrap() as f64 * lr.powf((m - 1.0) / 2.0)
            } else {
                lr.powf((m + 1.0) / 2.0)
            };
            let norm = p.full.value.norm();
            outcomes.push(LemmaOutcome {
                lemma,
                value: complex_json(p.full.value),
                bound,
                ratio: norm / bound,
                pass: if strict { norm <= bound } else { norm <= slack * bound },
                extra: Vec::new(),
            });
        }
        "4.6" => {
            let a = cfg.get_i64_list("a")?;
            let spec = CharSumSpec::pair(
                cfg.get_u64("ell")?,
                cfg.get_u64("r")?,
                cfg.get_u64("theta")?,
                a.clone(),
                vec![0; a.len()],
            )?;
            let (value, bound) = charsum::incomplete_sum(&spec, &cfg.get_u64_list("L")?, &workload)?;
            outcomes.push(LemmaOutcome {
                lemma,
                value: json!(value as i64),
                bound,
                ratio: value.unsigned_abs() as f64 / bound,
                pass: value.unsigned_abs() as f64 <= slack * bound,
                extra: Vec::new(),
            });
        }
        "A.1" => {
            let ell = cfg.get_u64("ell")?;
            admit_states(cfg, 2 * ell as u128)?;
            let (value, bound) = charsum::korobov_sum(
                cfg.get_i64_list("a")?[0],
                cfg.get_u64("theta")?,
                ell,
                KorobovDenominator::Modulus,
            )?;
            outcomes.push(LemmaOutcome {
                lemma,
                value: complex_json(value),
                bound,
                ratio: value.norm() / bound,
                pass: value.norm() <= bound,
                extra: Vec::new(),
            });
        }
        "A.2" => {
            let form = parse_form(cfg)?;
            let set = build_set(cfg)?;
            let ell = cfg.get_u64("ell")?;
            if ell < 3 || form.base() % ell == 0 {
                return Err(HarnessError::Config("ell must be an odd prime not dividing g".into()));
            }
            let t = charsum::t_m_count(&form, cfg.get_u32("K")?, ell, Some(&set));
            let bound = t.lemma_bound.ok_or_else(|| {
                HarnessError::Config(
                    "lemma A.2 needs a member prime, m >= 3 and K >= z".into(),
                )
            })?;
            outcomes.push(LemmaOutcome {
                lemma,
                value: json!(t.count),
                bound,
                ratio: t.count as f64 / bound,
                pass: t.count as f64 <= slack * bound,
                extra: Vec::new(),
            });
        }
        "6.1" => {
            let form = parse_form(cfg)?;
            let ell = cfg.get_u64("ell")?;
            if ell < 3 || !crate::arith::is_prime_u64(ell) || form.base() % ell == 0 {
                return Err(HarnessError::Config("ell must be an odd prime not dividing g".into()));
            }
            let t = charsum::t_m_count(&form, cfg.get_u32("K")?, ell, None);
            outcomes.push(LemmaOutcome {
                lemma,
                value: json!(t.count),
                bound: t.trivial_bound,
                ratio: t.count as f64 / t.trivial_bound,
                pass: t.count as f64 <= t.trivial_bound,
                extra: Vec::new(),
            });
        }
        other => {
            return Err(HarnessError::Config(format!(
                "unknown lemma {} (3.3, 3.4, 4.1, 4.2, 4.3, 4.4, 4.5, 4.6, A.1, A.2, 6.1)",
                other
            )))
        }
    }
    emit_lemma_records(cfg, outcomes)
}

fn run_approx_search(cfg: &ExperimentConfig) -> Result<RunOutput, HarnessError> {
    cfg.check_keys(&["Q", "lambda", "c", "B", "N", "k_lo"])?;
    let q: Vec<i64> = cfg.get_i64_list("Q")?;
    let lambda = cfg
        .required("lambda")?
        .parse::<i64>()
        .map_err(|_| HarnessError::Config("lambda must be an integer in the CLI".into()))?;
    let c = cfg.get_i64_list("c")?;
    let b = cfg.get_f64_or("B", 0.0)?;
    let n_max = cfg.get_u64("N")?;
    let k_lo = cfg.get_u64_or("k_lo", 0)? as u32;
    let inst = ApproxInstance::from_integers(&q, lambda, &c, b)?;
    let witnesses = inst.search(n_max, k_lo, &cfg.workload())?;
    match cfg.format {
        OutputFormat::Csv => {
            let mut out = config_comment(cfg);
            let ks: Vec<String> = (1..=c.len()).map(|i| format!("k_{}", i)).collect();
            out.push_str(&format!("n,{},residual\n", ks.join(",")));
            for w in &witnesses {
                let ks: Vec<String> = w.k.iter().map(|k| k.to_string()).collect();
                out.push_str(&format!("{},{},{}\n", w.n, ks.join(","), fmt_f64(w.residual)));
            }
            Ok(RunOutput::ok(out))
        }
        OutputFormat::Jsonl => {
            let mut out = String::new();
            for w in &witnesses {
                let mut fields = serde_json::Map::new();
                fields.insert("n".into(), json!(w.n));
                fields.insert("k".into(), json!(w.k));
                fields.insert("residual".into(), json!(w.residual));
                out.push_str(&jsonl_record(cfg, fields));
            }
            let mut distinct: Vec<u64> = witnesses.iter().map(|w| w.n).collect();
            distinct.dedup();
            let mut fields = serde_json::Map::new();
            fields.insert("count".into(), json!(distinct.len()));
            fields.insert(
                "count_per_log_pow_m".into(),
                json!(distinct.len() as f64 / (n_max.max(2) as f64).ln().powi(c.len() as i32)),
            );
            out.push_str(&jsonl_record(cfg, fields));
            Ok(RunOutput::ok(out))
        }
    }
}

fn run_example21(cfg: &ExperimentConfig) -> Result<RunOutput, HarnessError> {
    cfg.check_keys(&["n", "bits"])?;
    let n = cfg.get_u32("n")?;
    let bits = cfg.get_u64_or("bits", 512)? as usize;
    if bits > 1 << 20 {
        return Err(HarnessError::Config("bits capped at 2^20".into()));
    }
    let report = example21::example21_verify(n, bits)?;
    let all_ok = report.pass && report.sandwich_ok;
    match cfg.format {
        OutputFormat::Csv => Ok(RunOutput {
            pass: all_ok,
            text: format!(
            "{}n,precision_bits,deviation,budget,pass,sandwich_ok,interval_width\n{},{},{},{},{},{},{}\n",
            config_comment(cfg),
            report.n,
            report.precision_bits,
            fmt_f64(report.deviation),
            fmt_f64(report.budget),
            report.pass,
            report.sandwich_ok,
            fmt_f64(report.interval_width),
        ),
        }),
        OutputFormat::Jsonl => {
            let mut fields = serde_json::Map::new();
            fields.insert("n".into(), json!(report.n));
            fields.insert("precision_bits".into(), json!(report.precision_bits));
            fields.insert("deviation".into(), json!(report.deviation));
            fields.insert("deviation_lo".into(), json!(report.deviation_lo));
            fields.insert("deviation_hi".into(), json!(report.deviation_hi));
            fields.insert("budget".into(), json!(report.budget));
            fields.insert("pass".into(), json!(report.pass));
            fields.insert("sandwich_ok".into(), json!(report.sandwich_ok));
            fields.insert("interval_width".into(), json!(report.interval_width));
            Ok(RunOutput {
                text: jsonl_record(cfg, fields),
                pass: all_ok,
            })
        }
    }
}

fn run_sieve_stats(cfg: &ExperimentConfig) -> Result<RunOutput, HarnessError> {
    cfg.check_keys(&["g", "c", "K", "z", "alpha", "c1"])?;
    let form = parse_form(cfg)?;
    let set = build_set(cfg)?;
    let stats = charsum::sieve_statistics(&form, cfg.get_u32("K")?, &set, &cfg.workload())?;
    match cfg.format {
        OutputFormat::Csv => Ok(RunOutput::ok(format!(
            "{}square_tuples,zero_tuples,w,u,v,term_km_z_alpha,term_km1,term_z2_w,term_z2_v\n{},{},{},{},{},{},{},{},{}\n",
            config_comment(cfg),
            stats.square_tuples,
            stats.zero_tuples,
            stats.w,
            stats.u,
            stats.v,
            fmt_f64(stats.term_km_z_alpha),
            fmt_f64(stats.term_km1),
            fmt_f64(stats.term_z2_w),
            fmt_f64(stats.term_z2_v),
        ))),
        OutputFormat::Jsonl => {
            let mut fields = serde_json::Map::new();
            fields.insert("square_tuples".into(), json!(stats.square_tuples));
            fields.insert("zero_tuples".into(), json!(stats.zero_tuples));
            fields.insert("w".into(), json!(stats.w as i64));
            fields.insert("u".into(), json!(stats.u as i64));
            fields.insert("v".into(), json!(stats.v as i64));
            fields.insert("term_km_z_alpha".into(), json!(stats.term_km_z_alpha));
            fields.insert("term_km1".into(), json!(stats.term_km1));
            fields.insert("term_z2_w".into(), json!(stats.term_z2_w));
            fields.insert("term_z2_v".into(), json!(stats.term_z2_v));
            Ok(RunOutput::ok(jsonl_record(cfg, fields)))
        }
    }
}

fn run_growth_table(cfg: &ExperimentConfig) -> Result<RunOutput, HarnessError> {
    cfg.check_keys(&["g", "c", "N"])?;
    let form = parse_form(cfg)?;
    let grid = match cfg.params.get("N") {
        Some(s) if s.trim().is_empty() => Vec::new(),
        Some(_) => cfg.get_u64_list("N")?,
        None => Vec::new(),
    };
    let rows = growth_table(&form, &grid, &cfg.workload())?;
    match cfg.format {
        OutputFormat::Csv => {
            let mut out = config_comment(cfg);
            out.push_str("n_bound,k_cap,count,log_pow_m,log_pow_m_gamma,ratio_m,ratio_gamma\n");
            for r in &rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    r.n_bound,
                    r.k_cap,
                    r.count,
                    fmt_f64(r.log_pow_m),
                    fmt_f64(r.log_pow_m_gamma),
                    fmt_f64(r.ratio_m),
                    fmt_f64(r.ratio_gamma),
                ));
            }
            Ok(RunOutput::ok(out))
        }
        OutputFormat::Jsonl => {
            let mut out = String::new();
            for r in &rows {
                let mut fields = serde_json::Map::new();
                fields.insert("n_bound".into(), json!(r.n_bound));
                fields.insert("k_cap".into(), json!(r.k_cap));
                fields.insert("count".into(), json!(r.count));
                fields.insert("log_pow_m".into(), json!(r.log_pow_m));
                fields.insert("log_pow_m_gamma".into(), json!(r.log_pow_m_gamma));
                fields.insert("ratio_m".into(), json!(r.ratio_m));
                fields.insert("ratio_gamma".into(), json!(r.ratio_gamma));
                out.push_str(&jsonl_record(cfg, fields));
            }
            Ok(RunOutput::ok(out))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(mode: &str, pairs: &[(&str, &str)]) -> ExperimentConfig {
        let mut c = ExperimentConfig::new(mode).unwrap();
        for (k, v) in pairs {
            c.apply_pair(k, v).unwrap();
        }
        c
    }

    #[test]
    fn derive_box_cap_examples() {
        let f = SparseForm::new(2, vec![1, 1]).unwrap();
        assert_eq!(derive_box_cap(&f, 20), 10); // 2^10 = 1024 > 2 * 400
        let f = SparseForm::new(10, vec![1]).unwrap();
        assert_eq!(derive_box_cap(&f, 10), 3); // 10^3 > 100
        let f = SparseForm::new(2, vec![1, 1]).unwrap();
        assert!(derive_box_cap(&f, 2) >= 2);
    }

    #[test]
    fn box_cap_misses_no_solution_on_small_grid() {
        // brute-force check: enlarging the cap beyond the derived one finds
        // no additional representable root
        for (g, coeffs) in [(2u64, vec![1i64, 1]), (2, vec![1, -1]), (3, vec![2, 1]), (2, vec![257, -1])] {
            let f = SparseForm::new(g, coeffs).unwrap();
            for n_max in [5u64, 20, 50] {
                let k = derive_box_cap(&f, n_max);
                let w = Workload::default();
                let (count, wits) = f.count_representable(n_max, k, &w).unwrap();
                let (count2, wits2) = f.count_representable(n_max, k + 4, &w).unwrap();
                assert_eq!(count, count2, "cap too small for g={} {:?} N={}", g, f.coeffs(), n_max);
                assert_eq!(wits, wits2);
            }
        }
    }

    #[test]
    fn config_parses_file_text_and_rejects_unknown_keys() {
        let mut c = ExperimentConfig::new("count-squares").unwrap();
        c.apply_config_text("# comment\nmode=count-squares\nc=1,1\ng=2\nK=10\nseed=7\n")
            .unwrap();
        assert_eq!(c.seed, 7);
        assert_eq!(c.params["c"], "1,1");
        let err = execute(&cfg("count-squares", &[("c", "1,1"), ("g", "2"), ("K", "10"), ("bogus", "1")]))
            .unwrap_err();
        match err {
            HarnessError::Config(msg) => assert!(msg.contains("bogus")),
            other => panic!("expected config error, got {:?}", other),
        }
    }

    #[test]
    fn count_squares_csv_has_13_rows() {
        let out = execute(&cfg("count-squares", &[("c", "1,1"), ("g", "2"), ("K", "10")])).unwrap();
        let rows: Vec<&str> = out.text.lines().collect();
        assert!(rows[0].starts_with("# config: "));
        assert_eq!(rows[1], "n,n_squared,k_1,k_2");
        assert_eq!(rows.len(), 2 + 13);
    }

    #[test]
    fn count_squares_jsonl_reports_count() {
        let mut c = cfg("count-squares", &[("c", "1,1"), ("g", "2"), ("K", "10")]);
        c.format = OutputFormat::Jsonl;
        let out = execute(&c).unwrap();
        let v: Value = serde_json::from_str(out.text.trim()).unwrap();
        assert_eq!(v["count"], json!(13));
        assert_eq!(v["config"]["mode"], json!("count-squares"));
    }

    #[test]
    fn verify_lemma_product_passes() {
        let mut c = cfg(
            "verify-lemma",
            &[("lemma", "4.3"), ("ell", "5"), ("r", "7"), ("theta", "2"), ("a", "1"), ("b", "0")],
        );
        c.format = OutputFormat::Jsonl;
        let out = execute(&c).unwrap();
        assert!(out.pass);
        let v: Value = serde_json::from_str(out.text.trim()).unwrap();
        assert_eq!(v["pass"], json!(true));
        assert_eq!(v["lemma"], json!("4.3"));
        assert_eq!(v["params"]["ell"], json!("5"));
    }

    #[test]
    fn growth_table_counts_match_direct() {
        let out = execute(&cfg("growth-table", &[("c", "1,1"), ("g", "2"), ("N", "20,100")])).unwrap();
        let lines: Vec<&str> = out.text.lines().collect();
        assert!(lines[2].starts_with("20,10,7,"));
        // counts are non-decreasing in N
        let c20: u64 = lines[2].split(',').nth(2).unwrap().parse().unwrap();
        let c100: u64 = lines[3].split(',').nth(2).unwrap().parse().unwrap();
        assert!(c100 >= c20);
    }

    #[test]
    fn growth_table_empty_grid_is_empty() {
        let out = execute(&cfg("growth-table", &[("c", "1,1"), ("g", "2"), ("N", "")])).unwrap();
        assert_eq!(out.text.lines().count(), 2); // comment + header only
    }

    #[test]
    fn sieve_stats_identity_fields() {
        let mut c = cfg(
            "sieve-stats",
            &[("c", "1,1"), ("g", "2"), ("K", "4"), ("z", "11"), ("alpha", "0.5"), ("c1", "3")],
        );
        c.format = OutputFormat::Jsonl;
        let out = execute(&c).unwrap();
        let v: Value = serde_json::from_str(out.text.trim()).unwrap();
        assert_eq!(v["w"], json!(44));
        assert_eq!(v["u"], json!(50));
        assert_eq!(v["v"], json!(-6));
    }

    #[test]
    fn workload_maps_to_exit_code_3() {
        let mut c = cfg("count-squares", &[("c", "1,1,1"), ("g", "2"), ("K", "1000")]);
        c.budget = 100;
        let err = execute(&c).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn reruns_are_byte_identical() {
        for format in [OutputFormat::Csv, OutputFormat::Jsonl] {
            let mut c = cfg(
                "sieve-stats",
                &[("c", "1,1"), ("g", "2"), ("K", "10"), ("z", "11"), ("alpha", "0.5"), ("c1", "3")],
            );
            c.format = format;
            let a = execute(&c).unwrap();
            let b = execute(&c).unwrap();
            assert_eq!(a.text, b.text);
        }
    }

    #[test]
    fn example21_n3_passes_via_cli() {
        let mut c = cfg("example-21", &[("n", "3"), ("bits", "1024")]);
        c.format = OutputFormat::Jsonl;
        let out = execute(&c).unwrap();
        assert!(out.pass);
        let v: Value = serde_json::from_str(out.text.trim()).unwrap();
        assert_eq!(v["pass"], json!(true));
        assert_eq!(v["sandwich_ok"], json!(true));
    }
}
