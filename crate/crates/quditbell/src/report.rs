//! Flat records and their JSON, CSV and text renderings.
//!
//! JSON output is an array of flat objects. Discrimination-like records carry
//! `d`, `n`, `p`, `q`, `outcomes`, `fidelity`, `gate_count` and
//! `qudits_moved`; fidelities are rounded to 12 decimals so output is stable
//! across runs. CSV joins list fields with `;`.

use std::fmt::Write as _;

use anyhow::Result;
use clap::ValueEnum;
use serde::Serialize;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

pub trait Record: Serialize {
    fn csv_header() -> &'static [&'static str];
    fn csv_fields(&self) -> Vec<String>;
    fn text_line(&self) -> String;
}

pub fn render<R: Record>(records: &[R], format: Format) -> Result<String> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(records)?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(R::csv_header())?;
            for r in records {
                w.write_record(r.csv_fields())?;
            }
            Ok(String::from_utf8(w.into_inner()?)?)
        }
        Format::Text => {
            let mut s = String::new();
            for r in records {
                let _ = writeln!(s, "{}", r.text_line());
            }
            Ok(s)
        }
    }
}

pub fn round12(x: f64) -> f64 {
    (x * 1e12).round() / 1e12
}

fn join(xs: &[usize]) -> String {
    xs.iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(";")
}

fn tuple(xs: &[usize]) -> String {
    let inner = xs
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(",");
    format!("({inner})")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiscriminationRecord {
    pub d: usize,
    pub n: usize,
    pub p: usize,
    pub q: Vec<usize>,
    pub outcomes: Vec<usize>,
    pub fidelity: f64,
    pub deterministic: bool,
    pub gate_count: usize,
    pub qudits_moved: usize,
}

impl Record for DiscriminationRecord {
    fn csv_header() -> &'static [&'static str] {
        &[
            "d",
            "n",
            "p",
            "q",
            "outcomes",
            "fidelity",
            "deterministic",
            "gate_count",
            "qudits_moved",
        ]
    }

    fn csv_fields(&self) -> Vec<String> {
        vec![
            self.d.to_string(),
            self.n.to_string(),
            self.p.to_string(),
            join(&self.q),
            join(&self.outcomes),
            self.fidelity.to_string(),
            self.deterministic.to_string(),
            self.gate_count.to_string(),
            self.qudits_moved.to_string(),
        ]
    }

    fn text_line(&self) -> String {
        format!(
            "d={} n={} p={} q={} outcomes={} fidelity={} gates={} moved={}{}",
            self.d,
            self.n,
            self.p,
            tuple(&self.q),
            tuple(&self.outcomes),
            self.fidelity,
            self.gate_count,
            self.qudits_moved,
            if self.deterministic { "" } else { " (random)" }
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Table1Row {
    pub state: String,
    pub a1: usize,
    pub a2: usize,
    #[serde(flatten)]
    pub run: DiscriminationRecord,
}

impl Record for Table1Row {
    fn csv_header() -> &'static [&'static str] {
        &[
            "state",
            "a1",
            "a2",
            "d",
            "n",
            "p",
            "q",
            "outcomes",
            "fidelity",
            "deterministic",
            "gate_count",
            "qudits_moved",
        ]
    }

    fn csv_fields(&self) -> Vec<String> {
        let mut f = vec![self.state.clone(), self.a1.to_string(), self.a2.to_string()];
        f.extend(self.run.csv_fields());
        f
    }

    fn text_line(&self) -> String {
        format!("{:<5} A1={} A2={}", self.state, self.a1, self.a2)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CostRecord {
    pub protocol: String,
    pub topology: String,
    pub n: usize,
    pub alice: usize,
    pub qudits_moved: usize,
    pub gate_count: usize,
    pub per_player_gate_counts: Vec<usize>,
    pub edge_tallies: Vec<usize>,
}

impl Record for CostRecord {
    fn csv_header() -> &'static [&'static str] {
        &[
            "protocol",
            "topology",
            "n",
            "alice",
            "qudits_moved",
            "gate_count",
            "per_player_gate_counts",
            "edge_tallies",
        ]
    }

    fn csv_fields(&self) -> Vec<String> {
        vec![
            self.protocol.clone(),
            self.topology.clone(),
            self.n.to_string(),
            self.alice.to_string(),
            self.qudits_moved.to_string(),
            self.gate_count.to_string(),
            join(&self.per_player_gate_counts),
            join(&self.edge_tallies),
        ]
    }

    fn text_line(&self) -> String {
        format!(
            "{:<14} {} n={} alice={} moved={} gates={} per-player={}",
            self.protocol,
            self.topology,
            self.n,
            self.alice,
            self.qudits_moved,
            self.gate_count,
            tuple(&self.per_player_gate_counts)
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClosureRecord {
    pub d: usize,
    pub variant: String,
    pub p: usize,
    pub q: usize,
    pub to_p: usize,
    pub to_q: usize,
    pub phase_re: f64,
    pub phase_im: f64,
}

impl Record for ClosureRecord {
    fn csv_header() -> &'static [&'static str] {
        &[
            "d", "variant", "p", "q", "to_p", "to_q", "phase_re", "phase_im",
        ]
    }

    fn csv_fields(&self) -> Vec<String> {
        vec![
            self.d.to_string(),
            self.variant.clone(),
            self.p.to_string(),
            self.q.to_string(),
            self.to_p.to_string(),
            self.to_q.to_string(),
            self.phase_re.to_string(),
            self.phase_im.to_string(),
        ]
    }

    fn text_line(&self) -> String {
        format!(
            "{} d={} ({},{}) -> ({},{})",
            self.variant, self.d, self.p, self.q, self.to_p, self.to_q
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseRecord {
    pub id: String,
    pub passed: bool,
    pub detail: String,
}

impl Record for CaseRecord {
    fn csv_header() -> &'static [&'static str] {
        &["id", "passed", "detail"]
    }

    fn csv_fields(&self) -> Vec<String> {
        vec![
            self.id.clone(),
            self.passed.to_string(),
            self.detail.clone(),
        ]
    }

    fn text_line(&self) -> String {
        let mark = if self.passed { "PASS" } else { "FAIL" };
        if self.detail.is_empty() {
            format!("{mark} {}", self.id)
        } else {
            format!("{mark} {}: {}", self.id, self.detail)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRecord {
    #[serde(flatten)]
    pub run: DiscriminationRecord,
    pub amplitudes: usize,
    pub seconds: f64,
}

impl Record for BenchRecord {
    fn csv_header() -> &'static [&'static str] {
        &[
            "d",
            "n",
            "p",
            "q",
            "outcomes",
            "fidelity",
            "deterministic",
            "gate_count",
            "qudits_moved",
            "amplitudes",
            "seconds",
        ]
    }

    fn csv_fields(&self) -> Vec<String> {
        let mut f = self.run.csv_fields();
        f.push(self.amplitudes.to_string());
        f.push(self.seconds.to_string());
        f
    }

    fn text_line(&self) -> String {
        format!(
            "{} amplitudes={} seconds={:.3}",
            self.run.text_line(),
            self.amplitudes,
            self.seconds
        )
    }
}
