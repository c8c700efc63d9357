//! Command reports: an ordered list of titled sections of typed values,
//! rendered as text or JSON. Rationals travel as `"num/den"` strings so the
//! JSON form is exact.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use degbound::rational::{to_display, to_ratio_string};
use degbound::Rational;
use serde::{Deserialize, Serialize};

pub const DECIMAL_DIGITS: usize = 12;
/// Text output abbreviates exact ratios longer than this.
const TEXT_RATIO_LIMIT: usize = 72;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Value {
    Rational {
        ratio: String,
        decimal: String,
    },
    Integer {
        value: i64,
    },
    Float {
        value: f64,
    },
    Text {
        value: String,
    },
    Bool {
        value: bool,
    },
    /// A quantity that does not exist for this input, with the reason.
    Undefined {
        reason: String,
    },
    List {
        items: Vec<Value>,
    },
}

impl Value {
    pub fn rational(r: &Rational) -> Self {
        Value::Rational {
            ratio: to_ratio_string(r),
            decimal: to_display(r, DECIMAL_DIGITS),
        }
    }

    pub fn opt_rational(r: Option<&Rational>, reason: &str) -> Self {
        r.map_or_else(|| Value::undefined(reason), Self::rational)
    }

    pub fn int(v: impl Into<i64>) -> Self {
        Value::Integer { value: v.into() }
    }

    pub fn float(v: f64) -> Self {
        Value::Float { value: v }
    }

    pub fn opt_float(v: Option<f64>, reason: &str) -> Self {
        v.map_or_else(|| Value::undefined(reason), Value::float)
    }

    pub fn text(v: impl Into<String>) -> Self {
        Value::Text { value: v.into() }
    }

    pub fn bool(v: bool) -> Self {
        Value::Bool { value: v }
    }

    pub fn undefined(reason: &str) -> Self {
        Value::Undefined {
            reason: reason.to_string(),
        }
    }

    fn render(&self) -> String {
        match self {
            Value::Rational { ratio, decimal } if ratio.len() > TEXT_RATIO_LIMIT => {
                format!(
                    "{decimal} (exact ratio has {} characters; see --format json)",
                    ratio.len()
                )
            }
            Value::Rational { ratio, decimal } if ratio.ends_with("/1") => {
                let _ = decimal;
                ratio.trim_end_matches("/1").to_string()
            }
            Value::Rational { ratio, decimal } => format!("{ratio} ≈ {decimal}"),
            Value::Integer { value } => value.to_string(),
            Value::Float { value } => format_float(*value),
            Value::Text { value } => value.clone(),
            Value::Bool { value } => if *value { "yes" } else { "no" }.to_string(),
            Value::Undefined { reason } => format!("undefined ({reason})"),
            Value::List { items } => items
                .iter()
                .map(Value::render)
                .collect::<Vec<_>>()
                .join(", "),
        }
    }
}

fn format_float(v: f64) -> String {
    if v != 0.0 && (v.abs() < 1e-4 || v.abs() >= 1e9) {
        format!("{v:.6e}")
    } else {
        format!("{v:.6}")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Field {
    pub key: String,
    pub value: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Section {
    pub title: String,
    pub fields: Vec<Field>,
}

impl Section {
    pub fn new(title: impl Into<String>) -> Self {
        Self {
            title: title.into(),
            fields: Vec::new(),
        }
    }

    pub fn put(&mut self, key: impl Into<String>, value: Value) -> &mut Self {
        self.fields.push(Field {
            key: key.into(),
            value,
        });
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct InstanceSummary {
    pub mode: String,
    pub vertices: String,
    pub edges: u64,
    pub required: usize,
    pub forbidden: usize,
    pub source: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: Vec<String>,
    pub instance: Option<InstanceSummary>,
    pub sections: Vec<Section>,
    pub flags: BTreeMap<String, String>,
    pub elapsed_ms: f64,
}

impl Report {
    pub fn new(command: Vec<String>) -> Self {
        Self {
            command,
            ..Self::default()
        }
    }

    pub fn section(&mut self, title: impl Into<String>) -> &mut Section {
        self.sections.push(Section::new(title));
        self.sections.last_mut().expect("just pushed")
    }

    pub fn flag(&mut self, key: &str, value: impl ToString) {
        self.flags.insert(key.to_string(), value.to_string());
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "$ {}", self.command.join(" "));
        if let Some(i) = &self.instance {
            let src = i
                .source
                .as_deref()
                .map(|s| format!(" from {s}"))
                .unwrap_or_default();
            let _ = writeln!(
                out,
                "instance: {} on {} vertices, {} edges, {} required, {} forbidden{src}",
                i.mode, i.vertices, i.edges, i.required, i.forbidden
            );
        }
        for s in &self.sections {
            let _ = writeln!(out, "\n[{}]", s.title);
            let width = s
                .fields
                .iter()
                .map(|f| f.key.chars().count())
                .max()
                .unwrap_or(0);
            for f in &s.fields {
                let pad = width - f.key.chars().count();
                let _ = writeln!(out, "  {}{} : {}", f.key, " ".repeat(pad), f.value.render());
            }
        }
        if !self.flags.is_empty() {
            let flags: Vec<String> = self.flags.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let _ = writeln!(out, "\nflags: {}", flags.join(" "));
        }
        let _ = writeln!(out, "elapsed: {:.3} ms", self.elapsed_ms);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use degbound::rational::{parse_ratio, ratio};

    impl Value {
        fn as_rational(&self) -> Option<Rational> {
            match self {
                Value::Rational { ratio, .. } => parse_ratio(ratio).ok(),
                _ => None,
            }
        }
    }

    impl Section {
        fn get(&self, key: &str) -> Option<&Value> {
            self.fields.iter().find(|f| f.key == key).map(|f| &f.value)
        }
    }

    impl Report {
        fn find(&self, title: &str) -> Option<&Section> {
            self.sections.iter().find(|s| s.title == title)
        }

        fn from_json(s: &str) -> serde_json::Result<Self> {
            serde_json::from_str(s)
        }
    }

    fn sample() -> Report {
        let mut r = Report::new(vec!["degbound".into(), "bound".into(), "single".into()]);
        r.instance = Some(InstanceSummary {
            mode: "generic".into(),
            vertices: "20".into(),
            edges: 10,
            required: 0,
            forbidden: 1,
            source: Some("m20.txt".into()),
        });
        r.section("bound")
            .put("upper", Value::rational(&ratio(1, 19)))
            .put("lower", Value::rational(&ratio(7, 207)))
            .put("big", Value::rational(&(ratio(1, 3).pow(200))))
            .put("ratio", Value::float(0.1 + 0.2))
            .put("count", Value::int(-3))
            .put("note", Value::undefined("g = 0"))
            .put(
                "flags",
                Value::List {
                    items: vec![Value::bool(true), Value::text("x")],
                },
            );
        r.flag("order", "given");
        r.elapsed_ms = 1.0 / 3.0;
        r
    }

    #[test]
    fn json_round_trip_is_exact() {
        let r = sample();
        let back = Report::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
        let upper = back
            .find("bound")
            .unwrap()
            .get("upper")
            .unwrap()
            .as_rational()
            .unwrap();
        assert_eq!(upper, ratio(1, 19));
        assert_eq!(
            back.find("bound")
                .unwrap()
                .get("big")
                .unwrap()
                .as_rational()
                .unwrap(),
            ratio(1, 3).pow(200)
        );
    }

    #[test]
    fn decimals_have_twelve_digits() {
        let Value::Rational { decimal, .. } = Value::rational(&ratio(1, 19)) else {
            panic!()
        };
        assert_eq!(decimal, "0.0526315789474");
    }

    #[test]
    fn text_rendering() {
        let t = sample().to_text();
        assert!(t.contains("upper : 1/19 ≈ 0.0526315789474"));
        assert!(t.contains("undefined (g = 0)"));
        assert!(t.contains("see --format json"));
        assert_eq!(Value::rational(&ratio(4, 1)).render(), "4");
    }
}
