//! Scenario configs: TOML with a fixed key set per command.
//!
//! Validation is collect-all: every violation is reported with its field
//! path in one pass rather than failing on the first. Unknown keys are hard
//! errors anywhere in the file; a silent typo in a physics parameter is
//! worse than a rejected config.

use std::path::PathBuf;

use num_complex::Complex64;
use toml::Value;

use sim_core::{
    CollapseMode, CosmologyModel, GridControl, ObserverState, WeightSequenceSpec,
    DEFAULT_ENUMERATION_CAP, DEFAULT_TABLE_CAP,
};

/// One validation violation, addressed by field path.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "config error at `{}`: {}", self.path, self.message)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Horizon,
    Bound,
    Branches,
    Decay,
    CollapseSim,
    Frequency,
    Products,
}

impl Command {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Horizon => "horizon",
            Self::Bound => "bound",
            Self::Branches => "branches",
            Self::Decay => "decay",
            Self::CollapseSim => "collapse-sim",
            Self::Frequency => "frequency",
            Self::Products => "products",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "horizon" => Some(Self::Horizon),
            "bound" => Some(Self::Bound),
            "branches" => Some(Self::Branches),
            "decay" => Some(Self::Decay),
            "collapse-sim" => Some(Self::CollapseSim),
            "frequency" => Some(Self::Frequency),
            "products" => Some(Self::Products),
            _ => None,
        }
    }
}

/// How the branches command totals probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumMethod {
    BruteForce,
    Compressed,
    Auto,
}

/// Evaluation times for horizon/bound scenarios.
#[derive(Debug, Clone, PartialEq)]
pub struct RangeSpec {
    pub t_i: f64,
    pub t_f: f64,
    pub a_i: f64,
    pub times: Vec<f64>,
}

/// Caps and tolerance overrides; defaults match the library contracts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub grid: GridControl,
    pub enumeration_cap: u64,
    pub table_cap: u64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            grid: GridControl::default(),
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
            table_cap: DEFAULT_TABLE_CAP,
        }
    }
}

/// Command-specific validated inputs.
#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    Horizon {
        model: CosmologyModel,
        range: RangeSpec,
    },
    Bound {
        model: CosmologyModel,
        range: RangeSpec,
        entropy_density: f64,
        planck_length: f64,
    },
    Branches {
        state: ObserverState,
        n: usize,
        method: SumMethod,
    },
    Decay {
        state: ObserverState,
        n_list: Vec<u64>,
    },
    CollapseSim {
        state: ObserverState,
        n: usize,
        mode: CollapseMode,
    },
    Frequency {
        state: ObserverState,
        outcome: u32,
        n_list: Vec<u64>,
        trials: u64,
    },
    Products {
        sequence: WeightSequenceSpec,
        cutoff_j: usize,
    },
}

/// A fully validated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub command: Command,
    pub seed: u64,
    pub output_dir: Option<PathBuf>,
    pub tolerances: Tolerances,
    pub payload: Payload,
}

impl Scenario {
    /// The observer state, for commands that take one.
    pub fn state(&self) -> Option<&ObserverState> {
        match &self.payload {
            Payload::Branches { state, .. }
            | Payload::Decay { state, .. }
            | Payload::CollapseSim { state, .. }
            | Payload::Frequency { state, .. } => Some(state),
            _ => None,
        }
    }
}

/// Keys every command accepts.
const UNIVERSAL_KEYS: &[&str] = &["name", "command", "seed", "output_dir", "tolerances"];

fn command_keys(command: Command) -> &'static [&'static str] {
    match command {
        Command::Horizon => &["cosmology", "range"],
        Command::Bound => &["cosmology", "range", "entropy_density", "planck_length"],
        Command::Branches => &["state", "observer_phases", "k", "n", "method"],
        Command::Decay => &["state", "observer_phases", "k", "n_list"],
        Command::CollapseSim => &["state", "observer_phases", "k", "n", "mode"],
        Command::Frequency => &["state", "observer_phases", "k", "outcome", "n_list", "trials"],
        Command::Products => &["state", "observer_phases", "k", "sequence", "cutoff_j"],
    }
}

struct Validator<'a> {
    table: &'a toml::map::Map<String, Value>,
    errors: Vec<ConfigError>,
}

impl<'a> Validator<'a> {
    fn push(&mut self, path: &str, message: impl Into<String>) {
        self.errors.push(ConfigError {
            path: path.to_string(),
            message: message.into(),
        });
    }

    fn require<'v>(&mut self, key: &str, table: Option<&'v Value>) -> Option<&'v Value> {
        if table.is_none() {
            self.push(key, "required field is missing");
        }
        table
    }

    fn f64_at(&mut self, path: &str, value: &Value) -> Option<f64> {
        match value {
            Value::Float(f) => Some(*f),
            Value::Integer(i) => Some(*i as f64),
            _ => {
                self.push(path, "expected a number");
                None
            }
        }
    }

    fn u64_at(&mut self, path: &str, value: &Value) -> Option<u64> {
        match value {
            Value::Integer(i) if *i >= 0 => Some(*i as u64),
            _ => {
                self.push(path, "expected a nonnegative integer");
                None
            }
        }
    }

    fn str_at<'v>(&mut self, path: &str, value: &'v Value) -> Option<&'v str> {
        match value {
            Value::String(s) => Some(s.as_str()),
            _ => {
                self.push(path, "expected a string");
                None
            }
        }
    }
}

/// Parses and validates a raw config, reporting every violation at once.
pub fn validate_config(raw: &str) -> Result<Scenario, Vec<ConfigError>> {
    let value: Value = match toml::from_str(raw) {
        Ok(v) => v,
        Err(e) => {
            return Err(vec![ConfigError {
                path: "(file)".to_string(),
                message: format!("TOML syntax error: {e}"),
            }])
        }
    };
    let Value::Table(table) = &value else {
        return Err(vec![ConfigError {
            path: "(file)".to_string(),
            message: "config root must be a table".to_string(),
        }]);
    };

    let mut v = Validator {
        table,
        errors: Vec::new(),
    };

    let name = match v.table.get("name") {
        Some(val) => v.str_at("name", val).map(str::to_string),
        None => {
            v.push("name", "required field is missing");
            None
        }
    };

    let command = match v.table.get("command") {
        Some(val) => v.str_at("command", val).and_then(|s| {
            let parsed = Command::parse(s);
            if parsed.is_none() {
                v.push(
                    "command",
                    format!(
                        "unknown command `{s}`; expected one of horizon, bound, branches, \
                         decay, collapse-sim, frequency, products"
                    ),
                );
            }
            parsed
        }),
        None => {
            v.push("command", "required field is missing");
            None
        }
    };

    let seed = match v.table.get("seed") {
        Some(val) => v.u64_at("seed", val).unwrap_or(0),
        None => 0,
    };

    let output_dir = match v.table.get("output_dir") {
        Some(val) => v.str_at("output_dir", val).map(PathBuf::from),
        None => None,
    };

    let tolerances = parse_tolerances(&mut v);

    // Unknown-key sweep needs the command; without one we only check the
    // universal keys so the report is still useful.
    if let Some(cmd) = command {
        let allowed: Vec<&str> = UNIVERSAL_KEYS
            .iter()
            .chain(command_keys(cmd).iter())
            .copied()
            .collect();
        for key in v.table.keys() {
            if !allowed.contains(&key.as_str()) {
                let msg = if ALL_KNOWN_KEYS.contains(&key.as_str()) {
                    format!("key is not a parameter of `{}`", cmd.as_str())
                } else {
                    "unknown key".to_string()
                };
                v.push(key, msg);
            }
        }
    }

    let payload = command.and_then(|cmd| build_payload(&mut v, cmd, &tolerances));

    match (name, command, payload) {
        (Some(name), Some(command), Some(payload)) if v.errors.is_empty() => Ok(Scenario {
            name,
            command,
            seed,
            output_dir,
            tolerances,
            payload,
        }),
        _ => Err(v.errors),
    }
}

const ALL_KNOWN_KEYS: &[&str] = &[
    "name",
    "command",
    "seed",
    "output_dir",
    "tolerances",
    "cosmology",
    "range",
    "entropy_density",
    "planck_length",
    "state",
    "observer_phases",
    "k",
    "n",
    "n_list",
    "outcome",
    "trials",
    "mode",
    "method",
    "sequence",
    "cutoff_j",
];

fn parse_tolerances(v: &mut Validator) -> Tolerances {
    let mut out = Tolerances::default();
    let Some(value) = v.table.get("tolerances") else {
        return out;
    };
    let Value::Table(table) = value else {
        v.push("tolerances", "expected a table");
        return out;
    };
    const KEYS: &[&str] = &[
        "ode_rel_tol",
        "ode_abs_tol",
        "residual_rel_tol",
        "quad_rel_tol",
        "enumeration_cap",
        "table_cap",
    ];
    for key in table.keys() {
        if !KEYS.contains(&key.as_str()) {
            v.push(&format!("tolerances.{key}"), "unknown key");
        }
    }
    let positive = |v: &mut Validator, key: &str, slot: &mut f64| {
        if let Some(val) = table.get(key) {
            let path = format!("tolerances.{key}");
            if let Some(x) = v.f64_at(&path, val) {
                if x > 0.0 {
                    *slot = x;
                } else {
                    v.push(&path, "must be positive");
                }
            }
        }
    };
    positive(v, "ode_rel_tol", &mut out.grid.ode_rel_tol);
    positive(v, "ode_abs_tol", &mut out.grid.ode_abs_tol);
    positive(v, "residual_rel_tol", &mut out.grid.residual_rel_tol);
    positive(v, "quad_rel_tol", &mut out.grid.quad_rel_tol);
    if let Some(val) = table.get("enumeration_cap") {
        if let Some(x) = v.u64_at("tolerances.enumeration_cap", val) {
            out.enumeration_cap = x;
        }
    }
    if let Some(val) = table.get("table_cap") {
        if let Some(x) = v.u64_at("tolerances.table_cap", val) {
            out.table_cap = x;
        }
    }
    out
}

fn build_payload(v: &mut Validator, command: Command, _tol: &Tolerances) -> Option<Payload> {
    match command {
        Command::Horizon => {
            let model = parse_cosmology(v);
            let range = parse_range(v);
            Some(Payload::Horizon {
                model: model?,
                range: range?,
            })
        }
        Command::Bound => {
            let model = parse_cosmology(v);
            let range = parse_range(v);
            let entropy = v
                .table
                .get("entropy_density")
                .map(|val| v.f64_at("entropy_density", val))
                .unwrap_or_else(|| {
                    v.push("entropy_density", "required field is missing");
                    None
                })
                .filter(|&x| {
                    if x < 0.0 {
                        v.push("entropy_density", "must be nonnegative");
                        return false;
                    }
                    true
                });
            let planck = v
                .table
                .get("planck_length")
                .map(|val| v.f64_at("planck_length", val))
                .unwrap_or_else(|| {
                    v.push("planck_length", "required field is missing");
                    None
                })
                .filter(|&x| {
                    if x <= 0.0 {
                        v.push("planck_length", "must be positive");
                        return false;
                    }
                    true
                });
            Some(Payload::Bound {
                model: model?,
                range: range?,
                entropy_density: entropy?,
                planck_length: planck?,
            })
        }
        Command::Branches => {
            let state = parse_state(v);
            let n = parse_count(v, "n");
            let method = match v.table.get("method") {
                None => Some(SumMethod::Auto),
                Some(val) => v.str_at("method", val).and_then(|s| match s {
                    "brute" => Some(SumMethod::BruteForce),
                    "compressed" => Some(SumMethod::Compressed),
                    "auto" => Some(SumMethod::Auto),
                    other => {
                        v.push(
                            "method",
                            format!("unknown method `{other}`; expected brute, compressed or auto"),
                        );
                        None
                    }
                }),
            };
            Some(Payload::Branches {
                state: state?,
                n: n?,
                method: method?,
            })
        }
        Command::Decay => {
            let state = parse_state(v);
            let n_list = parse_n_list(v);
            Some(Payload::Decay {
                state: state?,
                n_list: n_list?,
            })
        }
        Command::CollapseSim => {
            let state = parse_state(v);
            let n = parse_count(v, "n");
            let mode = match v.table.get("mode") {
                None => {
                    v.push("mode", "required field is missing");
                    None
                }
                Some(val) => v.str_at("mode", val).and_then(|s| match s {
                    "correlated" => Some(CollapseMode::Correlated),
                    "independent" => Some(CollapseMode::Independent),
                    other => {
                        v.push(
                            "mode",
                            format!("unknown mode `{other}`; expected correlated or independent"),
                        );
                        None
                    }
                }),
            };
            Some(Payload::CollapseSim {
                state: state?,
                n: n?,
                mode: mode?,
            })
        }
        Command::Frequency => {
            let state = parse_state(v);
            let outcome = match v.table.get("outcome") {
                None => Some(1u32),
                Some(val) => v.u64_at("outcome", val).and_then(|o| {
                    if o == 0 {
                        v.push("outcome", "outcomes are 1-based");
                        None
                    } else {
                        u32::try_from(o).ok()
                    }
                }),
            };
            let n_list = parse_n_list(v);
            let trials = match v.table.get("trials") {
                None => {
                    v.push("trials", "required field is missing");
                    None
                }
                Some(val) => v.u64_at("trials", val).filter(|&t| {
                    if t < 2 {
                        v.push("trials", "need at least 2 trials");
                        return false;
                    }
                    true
                }),
            };
            // An outcome beyond the state dimension is left to the module,
            // which reports OutcomeOutOfRange at run time.
            Some(Payload::Frequency {
                state: state?,
                outcome: outcome?,
                n_list: n_list?,
                trials: trials?,
            })
        }
        Command::Products => {
            let sequence = parse_sequence(v);
            let cutoff = match v.table.get("cutoff_j") {
                None => {
                    v.push("cutoff_j", "required field is missing");
                    None
                }
                Some(val) => v.u64_at("cutoff_j", val).and_then(|c| {
                    if c < 10 {
                        v.push("cutoff_j", "cutoff must be at least 10");
                        None
                    } else {
                        usize::try_from(c).ok()
                    }
                }),
            };
            Some(Payload::Products {
                sequence: sequence?,
                cutoff_j: cutoff?,
            })
        }
    }
}

fn parse_cosmology(v: &mut Validator) -> Option<CosmologyModel> {
    let Some(value) = v.require("cosmology", v.table.get("cosmology")) else {
        return None;
    };
    let Value::Table(table) = value else {
        v.push("cosmology", "expected a table");
        return None;
    };
    const KEYS: &[&str] = &["h0", "omega_m", "omega_r", "omega_lambda", "light_speed"];
    for key in table.keys() {
        if !KEYS.contains(&key.as_str()) {
            v.push(&format!("cosmology.{key}"), "unknown key");
        }
    }
    let field = |v: &mut Validator, key: &str, default: Option<f64>| -> Option<f64> {
        let path = format!("cosmology.{key}");
        match table.get(key) {
            Some(val) => v.f64_at(&path, val),
            None => {
                if default.is_none() {
                    v.push(&path, "required field is missing");
                }
                default
            }
        }
    };
    let h0 = field(v, "h0", None);
    let omega_m = field(v, "omega_m", None);
    let omega_r = field(v, "omega_r", Some(0.0));
    let omega_lambda = field(v, "omega_lambda", Some(0.0));
    let light_speed = field(v, "light_speed", Some(1.0));
    match CosmologyModel::new(h0?, omega_m?, omega_r?, omega_lambda?, light_speed?) {
        Ok(model) => Some(model),
        Err(e) => {
            v.push("cosmology", e.to_string());
            None
        }
    }
}

fn parse_range(v: &mut Validator) -> Option<RangeSpec> {
    let Some(value) = v.require("range", v.table.get("range")) else {
        return None;
    };
    let Value::Table(table) = value else {
        v.push("range", "expected a table");
        return None;
    };
    const KEYS: &[&str] = &["t_i", "t_f", "a_i", "times"];
    for key in table.keys() {
        if !KEYS.contains(&key.as_str()) {
            v.push(&format!("range.{key}"), "unknown key");
        }
    }
    let field = |v: &mut Validator, key: &str| -> Option<f64> {
        let path = format!("range.{key}");
        match table.get(key) {
            Some(val) => v.f64_at(&path, val),
            None => {
                v.push(&path, "required field is missing");
                None
            }
        }
    };
    let t_i = field(v, "t_i");
    let t_f = field(v, "t_f");
    let a_i = field(v, "a_i");
    let (t_i, t_f, a_i) = (t_i?, t_f?, a_i?);
    if t_i >= t_f {
        v.push("range", format!("need t_i < t_f, got {t_i} >= {t_f}"));
        return None;
    }
    if a_i <= 0.0 {
        v.push("range.a_i", "must be positive");
        return None;
    }

    let times = match table.get("times") {
        None => {
            v.push("range.times", "required field is missing");
            None
        }
        Some(Value::Array(items)) => {
            let mut times = Vec::with_capacity(items.len());
            for (i, item) in items.iter().enumerate() {
                if let Some(t) = v.f64_at(&format!("range.times[{i}]"), item) {
                    times.push(t);
                }
            }
            // Out-of-range entries are left to the horizon module, which
            // reports them as TimeOutOfRange at run time.
            if times.is_empty() {
                v.push("range.times", "list must be nonempty");
                None
            } else if times.windows(2).any(|w| w[0] >= w[1]) {
                v.push("range.times", "times must be strictly increasing");
                None
            } else {
                Some(times)
            }
        }
        Some(Value::Table(spec)) => parse_times_spec(v, spec, t_i, t_f),
        Some(_) => {
            v.push("range.times", "expected a list of times or a {count, spacing} table");
            None
        }
    };

    Some(RangeSpec {
        t_i,
        t_f,
        a_i,
        times: times?,
    })
}

fn parse_times_spec(
    v: &mut Validator,
    spec: &toml::map::Map<String, Value>,
    t_i: f64,
    t_f: f64,
) -> Option<Vec<f64>> {
    const KEYS: &[&str] = &["count", "spacing", "first_elapsed"];
    for key in spec.keys() {
        if !KEYS.contains(&key.as_str()) {
            v.push(&format!("range.times.{key}"), "unknown key");
        }
    }
    let count = match spec.get("count") {
        Some(val) => v.u64_at("range.times.count", val).filter(|&c| {
            if c < 2 {
                v.push("range.times.count", "need at least 2 points");
                return false;
            }
            true
        }),
        None => {
            v.push("range.times.count", "required field is missing");
            None
        }
    };
    let spacing = match spec.get("spacing") {
        None => Some("log"),
        Some(val) => v.str_at("range.times.spacing", val).and_then(|s| match s {
            "log" | "linear" => Some(s),
            other => {
                v.push(
                    "range.times.spacing",
                    format!("unknown spacing `{other}`; expected log or linear"),
                );
                None
            }
        }),
    };
    let span = t_f - t_i;
    let first_elapsed = match spec.get("first_elapsed") {
        None => Some(span * 1e-3),
        Some(val) => v.f64_at("range.times.first_elapsed", val).filter(|&x| {
            if x <= 0.0 || x >= span {
                v.push("range.times.first_elapsed", "must be in (0, t_f - t_i)");
                return false;
            }
            true
        }),
    };

    let count = count? as usize;
    match spacing? {
        "linear" => Some(
            (0..count)
                .map(|i| t_i + span * i as f64 / (count - 1) as f64)
                .collect(),
        ),
        _ => {
            let first = first_elapsed?;
            let ratio = span / first;
            Some(
                (0..count)
                    .map(|i| t_i + first * ratio.powf(i as f64 / (count - 1) as f64))
                    .collect(),
            )
        }
    }
}

/// State literal: a list of [re, im] pairs.
fn parse_state(v: &mut Validator) -> Option<ObserverState> {
    let Some(value) = v.require("state", v.table.get("state")) else {
        return None;
    };
    let Value::Array(items) = value else {
        v.push("state", "expected a list of [re, im] pairs");
        return None;
    };
    let mut amplitudes = Vec::with_capacity(items.len());
    let mut ok = true;
    for (i, item) in items.iter().enumerate() {
        let path = format!("state[{i}]");
        match item {
            Value::Array(pair) if pair.len() == 2 => {
                let re = v.f64_at(&format!("{path}[0]"), &pair[0]);
                let im = v.f64_at(&format!("{path}[1]"), &pair[1]);
                if let (Some(re), Some(im)) = (re, im) {
                    amplitudes.push(Complex64::new(re, im));
                } else {
                    ok = false;
                }
            }
            _ => {
                v.push(&path, "expected an [re, im] pair");
                ok = false;
            }
        }
    }
    if !ok {
        return None;
    }
    let state = match ObserverState::new(amplitudes) {
        Ok(s) => s,
        Err(e) => {
            v.push("state", e.to_string());
            return None;
        }
    };

    // Accepted for interface compatibility; every modulus-level operation
    // is phase-independent, so the values are validated and set aside.
    if let Some(val) = v.table.get("observer_phases") {
        match val {
            Value::Array(items) => {
                for (i, item) in items.iter().enumerate() {
                    if let Some(phi) = v.f64_at(&format!("observer_phases[{i}]"), item) {
                        if !phi.is_finite() {
                            v.push(&format!("observer_phases[{i}]"), "must be finite");
                        }
                    }
                }
            }
            _ => v.push("observer_phases", "expected a list of phases"),
        }
    }

    if let Some(val) = v.table.get("k") {
        if let Some(k) = v.u64_at("k", val) {
            if k as usize != state.dimension() {
                v.push(
                    "k",
                    format!("k = {k} disagrees with state dimension {}", state.dimension()),
                );
                return None;
            }
        }
    }
    Some(state)
}

fn parse_count(v: &mut Validator, key: &str) -> Option<usize> {
    match v.table.get(key) {
        None => {
            v.push(key, "required field is missing");
            None
        }
        Some(val) => v.u64_at(key, val).and_then(|n| {
            if n == 0 {
                v.push(key, "must be at least 1");
                None
            } else {
                usize::try_from(n).ok()
            }
        }),
    }
}

fn parse_n_list(v: &mut Validator) -> Option<Vec<u64>> {
    let Some(value) = v.require("n_list", v.table.get("n_list")) else {
        return None;
    };
    let Value::Array(items) = value else {
        v.push("n_list", "expected a list of observer counts");
        return None;
    };
    let mut out = Vec::with_capacity(items.len());
    for (i, item) in items.iter().enumerate() {
        if let Some(n) = v.u64_at(&format!("n_list[{i}]"), item) {
            out.push(n);
        }
    }
    if out.is_empty() {
        v.push("n_list", "list must be nonempty");
        return None;
    }
    if out.iter().any(|&n| n == 0) {
        v.push("n_list", "counts must be at least 1");
        return None;
    }
    if out.windows(2).any(|w| w[0] >= w[1]) {
        v.push("n_list", "counts must be strictly increasing");
        return None;
    }
    Some(out)
}

fn parse_sequence(v: &mut Validator) -> Option<WeightSequenceSpec> {
    let Some(value) = v.require("sequence", v.table.get("sequence")) else {
        return None;
    };
    let Value::Table(table) = value else {
        v.push("sequence", "expected a table");
        return None;
    };
    const KEYS: &[&str] = &["kind", "value", "exponent", "values"];
    for key in table.keys() {
        if !KEYS.contains(&key.as_str()) {
            v.push(&format!("sequence.{key}"), "unknown key");
        }
    }
    let kind = match table.get("kind") {
        None => {
            v.push("sequence.kind", "required field is missing");
            return None;
        }
        Some(val) => v.str_at("sequence.kind", val)?,
    };
    match kind {
        "constant" => {
            let value = match table.get("value") {
                None => {
                    v.push("sequence.value", "required for kind = constant");
                    None
                }
                Some(val) => v.f64_at("sequence.value", val),
            }?;
            Some(WeightSequenceSpec::Constant { value })
        }
        "one-minus-inverse-power" => {
            let exponent = match table.get("exponent") {
                None => {
                    v.push("sequence.exponent", "required for kind = one-minus-inverse-power");
                    None
                }
                Some(val) => v.f64_at("sequence.exponent", val),
            }?;
            Some(WeightSequenceSpec::OneMinusInversePower { exponent })
        }
        "explicit" => {
            let values = match table.get("values") {
                None => {
                    v.push("sequence.values", "required for kind = explicit");
                    return None;
                }
                Some(Value::Array(items)) => {
                    let mut out = Vec::with_capacity(items.len());
                    for (i, item) in items.iter().enumerate() {
                        if let Some(x) = v.f64_at(&format!("sequence.values[{i}]"), item) {
                            out.push(x);
                        }
                    }
                    out
                }
                Some(_) => {
                    v.push("sequence.values", "expected a list of weights");
                    return None;
                }
            };
            Some(WeightSequenceSpec::Explicit { values })
        }
        "from-state" => {
            let state = parse_state(v)?;
            Some(sim_core::uniform_symmetric_sequence(&state))
        }
        other => {
            v.push(
                "sequence.kind",
                format!(
                    "unknown kind `{other}`; expected constant, one-minus-inverse-power, \
                     explicit or from-state"
                ),
            );
            None
        }
    }
}
