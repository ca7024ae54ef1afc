use std::fmt;

use latval_core::ball::BallError;
use latval_core::field::FieldError;
use latval_core::gen::GenError;
use latval_core::grid::GridError;
use latval_core::lattice::LatticeError;
use latval_core::suites::SuiteUnknown;
use latval_core::valuation::{Val, ValError};
use serde_json::{json, Map, Value};

/// A failed invocation. Usage errors exit with 2, domain errors with 1.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain { kind: &'static str, message: String },
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn domain(kind: &'static str, msg: impl fmt::Display) -> Self {
        CliError::Domain {
            kind,
            message: msg.to_string(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain { .. } => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Domain { kind, .. } => kind,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) => m,
            CliError::Domain { message, .. } => message,
        }
    }
}

macro_rules! domain_error {
    ($($ty:ty => $kind:literal),* $(,)?) => {
        $(impl From<$ty> for CliError {
            fn from(e: $ty) -> Self {
                CliError::domain($kind, e)
            }
        })*
    };
}

domain_error! {
    LatticeError => "lattice",
    GenError => "generator",
    FieldError => "field",
    ValError => "valuation",
    BallError => "ball",
    GridError => "grid",
}

impl From<SuiteUnknown> for CliError {
    fn from(e: SuiteUnknown) -> Self {
        CliError::usage(e.to_string())
    }
}

/// What a subcommand produced: text lines for people, a payload for machines.
#[derive(Debug)]
pub struct Outcome {
    pub lines: Vec<String>,
    pub result: Value,
    pub witnesses: Option<Value>,
    /// False when the command ran but its verdict is negative.
    pub success: bool,
}

impl Outcome {
    pub fn new(result: Value) -> Self {
        Outcome {
            lines: Vec::new(),
            result,
            witnesses: None,
            success: true,
        }
    }

    pub fn line(mut self, s: impl Into<String>) -> Self {
        self.lines.push(s.into());
        self
    }

    pub fn lines(mut self, ls: impl IntoIterator<Item = String>) -> Self {
        self.lines.extend(ls);
        self
    }

    pub fn witnesses(mut self, w: Value) -> Self {
        self.witnesses = Some(w);
        self
    }

    pub fn success(mut self, ok: bool) -> Self {
        self.success = ok;
        self
    }
}

pub struct Report {
    pub command: Vec<String>,
    pub outcome: Result<Outcome, CliError>,
    pub timing_ms: Option<f64>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        match &self.outcome {
            Ok(o) if o.success => 0,
            Ok(_) => 1,
            Err(e) => e.exit_code(),
        }
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("command".into(), json!(self.command));
        m.insert("exit_code".into(), json!(self.exit_code()));
        match &self.outcome {
            Ok(o) => {
                m.insert("ok".into(), json!(o.success));
                m.insert("result".into(), o.result.clone());
                if let Some(w) = &o.witnesses {
                    m.insert("witnesses".into(), w.clone());
                }
            }
            Err(e) => {
                m.insert("ok".into(), json!(false));
                m.insert(
                    "error".into(),
                    json!({ "kind": e.kind(), "message": e.message() }),
                );
            }
        }
        if let Some(t) = self.timing_ms {
            m.insert("timing_ms".into(), json!(t));
        }
        Value::Object(m)
    }

    /// Text for stdout and for stderr.
    pub fn render(&self, as_json: bool) -> (String, String) {
        if as_json {
            let mut s = serde_json::to_string_pretty(&self.to_json()).expect("serializable");
            s.push('\n');
            return (s, String::new());
        }
        let mut out = String::new();
        let mut err = String::new();
        match &self.outcome {
            Ok(o) => {
                for l in &o.lines {
                    out.push_str(l);
                    out.push('\n');
                }
            }
            Err(e) => err = format!("error: {}\n", e.message()),
        }
        if let Some(t) = self.timing_ms {
            out.push_str(&format!("elapsed: {t:.3} ms\n"));
        }
        (out, err)
    }
}

pub fn val_json(v: Val) -> Value {
    match v {
        Val::Finite(n) => json!(n),
        Val::Infinite => json!("inf"),
    }
}

pub fn vals_json(vs: &[Val]) -> Value {
    Value::Array(vs.iter().map(|&v| val_json(v)).collect())
}

pub fn fmt_vals(vs: &[Val]) -> String {
    let parts: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
    format!("({})", parts.join(", "))
}
