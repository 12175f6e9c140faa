//! Instance and certificate files: JSON documents whose numbers are decimal
//! strings (`"-12"`) or reduced fractions (`"5/4"`). Plain JSON integers are
//! accepted on input; output always uses strings.

use std::fmt::{self, Write as _};

use circuitwalk::walks::{Phase, WalkCertificate, WalkMode, WalkStep};
use circuitwalk::{LpInstance, RatMatrix, RatVector, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::de::{self, Deserializer, Visitor};
use serde::Deserialize;
use thiserror::Error;

/// Parse failure; `line` is 1-based when known.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl ParseError {
    fn at(line: Option<usize>, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

impl From<serde_json::Error> for ParseError {
    fn from(e: serde_json::Error) -> Self {
        let line = (e.line() > 0).then_some(e.line());
        // serde_json appends " at line L column C"; the line is reported separately
        let text = e.to_string();
        let message = match text.rfind(" at line ") {
            Some(k) => text[..k].to_string(),
            None => text,
        };
        ParseError { line, message }
    }
}

/// `"p"` or `"p/q"` with `q > 0` and `gcd(p, q) = 1`.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    let int = |t: &str| -> Result<BigInt, String> {
        let digits = t.strip_prefix('-').unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("`{s}` is not an integer or p/q fraction"));
        }
        t.parse::<BigInt>().map_err(|e| format!("`{s}`: {e}"))
    };
    match s.split_once('/') {
        None => Ok(Rational::from_integer(int(s)?)),
        Some((p, q)) => {
            let (p, q) = (int(p)?, int(q)?);
            if !q.is_positive() {
                return Err(format!("`{s}`: denominator must be positive"));
            }
            let r = Rational::new(p.clone(), q.clone());
            if *r.numer() != p {
                return Err(format!("`{s}`: fraction is not in lowest terms"));
            }
            Ok(r)
        }
    }
}

struct Entry(Rational);

impl<'de> Deserialize<'de> for Entry {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Entry;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a \"p/q\" string")
            }
            fn visit_str<E: de::Error>(self, s: &str) -> Result<Entry, E> {
                parse_rational(s).map(Entry).map_err(E::custom)
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Entry, E> {
                Ok(Entry(Rational::from_integer(v.into())))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Entry, E> {
                Ok(Entry(Rational::from_integer(v.into())))
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Entry, E> {
                Err(E::custom(format!("{v} is not exact; write integers or \"p/q\" strings")))
            }
        }
        d.deserialize_any(V)
    }
}

fn vector(v: Vec<Entry>) -> RatVector {
    RatVector::new(v.into_iter().map(|e| e.0).collect())
}

/// 1-based line of the first occurrence of `"key":`, for anchoring errors
/// found after the document parsed.
fn key_line(text: &str, key: &str) -> Option<usize> {
    let needle = format!("\"{key}\"");
    text.lines().position(|line| {
        line.find(&needle)
            .is_some_and(|k| line[k + needle.len()..].trim_start().starts_with(':'))
    })
    .map(|k| k + 1)
}

fn parse_mode(s: &str) -> Option<WalkMode> {
    match s {
        "circuit" => Some(WalkMode::Circuit),
        "graver" => Some(WalkMode::Graver),
        _ => None,
    }
}

fn parse_phase(s: &str) -> Option<Phase> {
    match s {
        "decay" => Some(Phase::Decay),
        "descent" => Some(Phase::Descent),
        "trivial" => Some(Phase::Trivial),
        _ => None,
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    #[serde(rename = "A")]
    a: Vec<Vec<Entry>>,
    b: Option<Vec<Entry>>,
    l: Option<Vec<Entry>>,
    u: Option<Vec<Entry>>,
    w: Option<Vec<Entry>>,
    x0: Option<Vec<Entry>>,
    mode: Option<String>,
    h: Option<Vec<Entry>>,
}

/// Contents of an instance file. Only `A` is mandatory; commands ask for
/// whatever else they need.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceFile {
    pub a: RatMatrix,
    pub b: Option<RatVector>,
    pub l: Option<RatVector>,
    pub u: Option<RatVector>,
    pub w: Option<RatVector>,
    pub x0: Option<RatVector>,
    pub mode: Option<WalkMode>,
    pub h: Option<RatVector>,
}

impl InstanceFile {
    pub fn from_instance(inst: &LpInstance) -> Self {
        InstanceFile {
            a: inst.a().clone(),
            b: Some(inst.b().clone()),
            l: Some(inst.lower().clone()),
            u: Some(inst.upper().clone()),
            w: Some(inst.w().clone()),
            x0: None,
            mode: None,
            h: None,
        }
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let raw: RawInstance = serde_json::from_str(text)?;
        let here = |key: &str| key_line(text, key);
        if raw.a.is_empty() || raw.a[0].is_empty() {
            return Err(ParseError::at(here("A"), "A must have at least one row and one column"));
        }
        let m = raw.a.len();
        let n = raw.a[0].len();
        if let Some(k) = raw.a.iter().position(|r| r.len() != n) {
            return Err(ParseError::at(
                here("A"),
                format!("row {} of A has {} entries, row 1 has {n}", k + 1, raw.a[k].len()),
            ));
        }
        let rows: Vec<Vec<Rational>> = raw.a.into_iter().map(|r| r.into_iter().map(|e| e.0).collect()).collect();
        let a = RatMatrix::from_rows(rows, n).map_err(|e| ParseError::at(here("A"), e.to_string()))?;
        if !a.is_integral() {
            return Err(ParseError::at(here("A"), "A must be integral"));
        }

        let field = |key: &str, v: Option<Vec<Entry>>, len: usize, integral: bool| -> Result<Option<RatVector>, ParseError> {
            let Some(v) = v else { return Ok(None) };
            let v = vector(v);
            if v.len() != len {
                return Err(ParseError::at(
                    here(key),
                    format!("{key} has {} entries, expected {len}", v.len()),
                ));
            }
            if integral && !v.is_integral() {
                return Err(ParseError::at(here(key), format!("{key} must be integral")));
            }
            Ok(Some(v))
        };
        let file = InstanceFile {
            b: field("b", raw.b, m, true)?,
            l: field("l", raw.l, n, true)?,
            u: field("u", raw.u, n, true)?,
            w: field("w", raw.w, n, true)?,
            x0: field("x0", raw.x0, n, false)?,
            h: field("h", raw.h, n, false)?,
            mode: match raw.mode {
                None => None,
                Some(s) => Some(
                    parse_mode(&s)
                        .ok_or_else(|| ParseError::at(here("mode"), format!("unknown mode `{s}`")))?,
                ),
            },
            a,
        };
        if let (Some(l), Some(u)) = (&file.l, &file.u) {
            if let Some(i) = (0..n).find(|&i| l[i] > u[i]) {
                return Err(ParseError::at(here("u"), format!("l > u in coordinate {}", i + 1)));
            }
        }
        Ok(file)
    }

    /// The program `max { wx : Ax = b, l <= x <= u }`; all four of `b, l, u, w`
    /// must be present.
    pub fn instance(&self) -> Result<LpInstance, ParseError> {
        let need = |key: &str, v: &Option<RatVector>| {
            v.clone().ok_or_else(|| ParseError::at(None, format!("instance file lacks `{key}`")))
        };
        LpInstance::new(
            self.a.clone(),
            need("b", &self.b)?,
            need("l", &self.l)?,
            need("u", &self.u)?,
            need("w", &self.w)?,
        )
        .map_err(|e| ParseError::at(None, e.to_string()))
    }

    pub fn to_json(&self) -> String {
        let mut s = String::from("{\n  \"A\": [\n");
        for i in 0..self.a.nrows() {
            let sep = if i + 1 < self.a.nrows() { "," } else { "" };
            let _ = writeln!(s, "    {}{sep}", json_list(self.a.row(i)));
        }
        s.push_str("  ]");
        let vectors = [
            ("b", &self.b),
            ("l", &self.l),
            ("u", &self.u),
            ("w", &self.w),
            ("x0", &self.x0),
            ("h", &self.h),
        ];
        for (key, v) in vectors {
            if let Some(v) = v {
                let _ = write!(s, ",\n  \"{key}\": {}", json_list(v.entries()));
            }
        }
        if let Some(mode) = self.mode {
            let _ = write!(s, ",\n  \"mode\": \"{}\"", mode.as_str());
        }
        s.push_str("\n}\n");
        s
    }
}

fn json_list(v: &[Rational]) -> String {
    let items: Vec<String> = v.iter().map(|x| format!("\"{x}\"")).collect();
    format!("[{}]", items.join(", "))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStep {
    direction: Vec<Entry>,
    multiplier: Entry,
    phase: String,
    objective_after: Entry,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCertificate {
    mode: String,
    start: Vec<Entry>,
    steps: Vec<RawStep>,
    terminal: Vec<Entry>,
}

/// Serializes everything but the instance, which travels in its own file.
pub fn certificate_to_json(cert: &WalkCertificate) -> String {
    let mut s = String::from("{\n");
    let _ = writeln!(s, "  \"mode\": \"{}\",", cert.mode.as_str());
    let _ = writeln!(s, "  \"start\": {},", json_list(cert.start.entries()));
    if cert.steps.is_empty() {
        s.push_str("  \"steps\": [],\n");
    } else {
        s.push_str("  \"steps\": [\n");
        for (k, step) in cert.steps.iter().enumerate() {
            let sep = if k + 1 < cert.steps.len() { "," } else { "" };
            let _ = writeln!(
                s,
                "    {{\"direction\": {}, \"multiplier\": \"{}\", \"phase\": \"{}\", \"objective_after\": \"{}\"}}{sep}",
                json_list(step.direction.entries()),
                step.multiplier,
                step.phase.as_str(),
                step.objective_after
            );
        }
        s.push_str("  ],\n");
    }
    let _ = writeln!(s, "  \"terminal\": {}", json_list(cert.terminal.entries()));
    s.push_str("}\n");
    s
}

/// Parses a certificate and attaches `inst` to it. Lengths are not checked
/// here: a certificate of the wrong shape is the verifier's to reject.
pub fn parse_certificate(text: &str, inst: &LpInstance) -> Result<WalkCertificate, ParseError> {
    let raw: RawCertificate = serde_json::from_str(text)?;
    let mode = parse_mode(&raw.mode)
        .ok_or_else(|| ParseError::at(key_line(text, "mode"), format!("unknown mode `{}`", raw.mode)))?;
    let mut steps = Vec::with_capacity(raw.steps.len());
    for (k, st) in raw.steps.into_iter().enumerate() {
        let phase = parse_phase(&st.phase).ok_or_else(|| {
            let line = text
                .match_indices("\"phase\"")
                .nth(k)
                .map(|(pos, _)| text[..pos].lines().count().max(1));
            ParseError::at(line, format!("step {}: unknown phase `{}`", k + 1, st.phase))
        })?;
        steps.push(WalkStep {
            direction: vector(st.direction),
            multiplier: st.multiplier.0,
            phase,
            objective_after: st.objective_after.0,
        });
    }
    Ok(WalkCertificate {
        instance: inst.clone(),
        start: vector(raw.start),
        steps,
        terminal: vector(raw.terminal),
        mode,
    })
}

/// `(a, b, c)` with exact entries, as printed by the commands.
pub fn show(v: &RatVector) -> String {
    v.to_string()
}

/// Sign-aware `λ · g` rendering for decomposition output.
pub fn show_term(lambda: &BigInt, g: &RatVector) -> String {
    if lambda.is_one() {
        show(g)
    } else {
        format!("{lambda} * {}", show(g))
    }
}
