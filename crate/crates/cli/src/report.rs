use std::fmt::Write as _;
use std::path::Path;

use qzk::graph::Graph;
use qzk::optics::ApparatusParams;
use qzk::protocol::{ProtocolConfig, RoundTranscript, Verdict};
use qzk::qbc::VerificationPolicy;
use qzk::stats::BinomialCount;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use serde_json::Value;

use crate::ModeArg;

#[derive(Debug, Serialize)]
pub struct ConfigEcho {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rounds: Option<u64>,
    pub policy: VerificationPolicy,
    pub params: ApparatusParams,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<ModeArg>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub escape: Option<f64>,
}

/// An empirical frequency with its trial count, standard error, and the
/// prediction it is compared against.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Estimate {
    pub rate: f64,
    pub std_error: f64,
    pub successes: u64,
    pub trials: u64,
    pub expected: f64,
    pub z_score: f64,
}

impl Estimate {
    pub fn new(count: BinomialCount, expected: f64) -> Self {
        Self {
            rate: count.rate(),
            std_error: count.std_error(),
            successes: count.successes,
            trials: count.trials,
            expected,
            z_score: count.z_score(expected),
        }
    }
}

struct Ordered<'a>(&'a [(String, Value)]);

impl Serialize for Ordered<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

#[derive(Debug)]
pub struct Report {
    pub command: &'static str,
    pub config: ConfigEcho,
    results: Vec<(String, Value)>,
    notes: Vec<String>,
    transcripts: Option<Vec<RoundTranscript>>,
    /// Wall-clock duration; the only field that varies between identical runs.
    pub elapsed_ms: f64,
}

impl Report {
    pub fn new(command: &'static str, seed: u64, params: ApparatusParams) -> Self {
        Self {
            command,
            config: ConfigEcho {
                graph: None,
                n: None,
                m: None,
                seed,
                rounds: None,
                policy: VerificationPolicy::default(),
                params,
                mode: None,
                trials: None,
                escape: None,
            },
            results: Vec::new(),
            notes: Vec::new(),
            transcripts: None,
            elapsed_ms: 0.0,
        }
    }

    pub fn for_graph(command: &'static str, cfg: &ProtocolConfig, g: &Graph, path: &Path) -> Self {
        let mut r = Self::new(command, cfg.seed, cfg.params);
        r.config.graph = Some(path.display().to_string());
        r.config.n = Some(g.vertex_count());
        r.config.m = Some(g.edge_count());
        r.config.rounds = cfg.rounds;
        r.config.policy = cfg.policy;
        r
    }

    pub fn push(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("report values serialize");
        self.results.push((key.to_owned(), v));
    }

    pub fn push_estimate(&mut self, key: &str, count: BinomialCount, expected: f64) {
        self.push(key, Estimate::new(count, expected));
    }

    pub fn note(&mut self, msg: impl Into<String>) {
        self.notes.push(msg.into());
    }

    pub fn set_transcripts(&mut self, t: Vec<RoundTranscript>) {
        self.transcripts = Some(t);
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            command: &'a str,
            config: &'a ConfigEcho,
            results: Ordered<'a>,
            #[serde(skip_serializing_if = "<[String]>::is_empty")]
            notes: &'a [String],
            #[serde(skip_serializing_if = "Option::is_none")]
            transcripts: Option<&'a [RoundTranscript]>,
            elapsed_ms: f64,
        }
        let doc = Doc {
            command: self.command,
            config: &self.config,
            results: Ordered(&self.results),
            notes: &self.notes,
            transcripts: self.transcripts.as_deref(),
            elapsed_ms: self.elapsed_ms,
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let c = &self.config;
        let _ = writeln!(out, "qzk {}", self.command);
        if let (Some(g), Some(n), Some(m)) = (&c.graph, c.n, c.m) {
            let _ = writeln!(out, "  graph                 {g} (n = {n}, m = {m})");
        }
        let p = &c.params;
        let _ = writeln!(
            out,
            "  apparatus             phi = {:.6}, theta = {:.6}, <n> = {}, efficiency = {}, dark_rate = {}",
            p.phi, p.theta, p.mean_photon, p.efficiency, p.dark_rate
        );
        let _ = writeln!(out, "  seed                  {}", c.seed);
        if let Some(t) = c.trials {
            let _ = writeln!(out, "  trials                {t}");
        }
        out.push('\n');
        for (k, v) in &self.results {
            render(&mut out, k, v);
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        if let Some(ts) = &self.transcripts {
            let _ = writeln!(out, "\nround  edge  claims  verdict");
            for t in ts {
                let edge = t.challenge.map_or("-".to_owned(), |c| c.edge_index.to_string());
                let claims = t.unveil.map_or("-".to_owned(), |u| format!("{} {}", u.claim_u, u.claim_v));
                let verdict = match t.verdict {
                    Verdict::Accept => "accept".to_owned(),
                    Verdict::Reject(r) => format!("reject ({})", serde_json::to_value(r).unwrap().as_str().unwrap()),
                };
                let _ = writeln!(out, "{:>5}  {edge:>4}  {claims:>6}  {verdict}", t.round);
            }
        }
        let _ = writeln!(out, "\nelapsed               {:.1} ms", self.elapsed_ms);
        out
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap();
            if x != 0.0 && x.abs() < 1e-3 {
                format!("{x:.6e}")
            } else {
                format!("{x:.6}")
            }
        }
        Value::String(s) => s.clone(),
        Value::Array(xs) => format!("[{}]", xs.iter().map(scalar).collect::<Vec<_>>().join(", ")),
        Value::Object(map) => {
            let fields: Vec<String> = map.iter().map(|(k, v)| format!("{k}: {}", scalar(v))).collect();
            format!("{{{}}}", fields.join(", "))
        }
        other => other.to_string(),
    }
}

fn render(out: &mut String, key: &str, v: &Value) {
    match v {
        Value::Array(rows) if rows.iter().all(Value::is_object) && !rows.is_empty() => {
            let _ = writeln!(out, "{key}:");
            let headers: Vec<&String> = rows[0].as_object().unwrap().keys().collect();
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| headers.iter().map(|h| scalar(&r[h.as_str()])).collect())
                .collect();
            let widths: Vec<usize> = headers
                .iter()
                .enumerate()
                .map(|(i, h)| cells.iter().map(|r| r[i].len()).max().unwrap_or(0).max(h.len()))
                .collect();
            let line = |cols: Vec<String>| -> String {
                cols.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect::<Vec<_>>().join("  ")
            };
            let _ = writeln!(out, "  {}", line(headers.iter().map(|h| h.to_string()).collect()));
            for r in cells {
                let _ = writeln!(out, "  {}", line(r));
            }
        }
        Value::Array(rows) if rows.iter().all(Value::is_array) && !rows.is_empty() => {
            let _ = writeln!(out, "{key}:");
            for r in rows {
                let cols: Vec<String> = r.as_array().unwrap().iter().map(scalar).collect();
                let _ = writeln!(out, "  {}", cols.join("  "));
            }
        }
        Value::Object(map) if map.contains_key("rate") && map.contains_key("std_error") => {
            let _ = writeln!(
                out,
                "{key:<22}{} ± {} ({} / {}), expected {}, z = {:.2}",
                scalar(&map["rate"]),
                scalar(&map["std_error"]),
                map["successes"],
                map["trials"],
                scalar(&map["expected"]),
                map["z_score"].as_f64().unwrap_or(f64::NAN),
            );
        }
        other => {
            let _ = writeln!(out, "{key:<22}{}", scalar(other));
        }
    }
}
