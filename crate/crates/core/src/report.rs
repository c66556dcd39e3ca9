//! Text, CSV and JSON renderings of scenario results.

use std::fmt::Write as _;
use std::io;

use serde::{Deserialize, Serialize};

use crate::amplitude::ExactScalar;
use crate::bosonic::{
    distinguishable_coincidence_probability, hom_coincidence_probability, hom_output,
};
use crate::hardy::{Detector, FullTable, Layout, OutcomeTable, Probability, ScenarioOutcome};

/// Formats with 12 significant digits, trailing zeros trimmed.
pub fn format_float(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{}", if x == 0.0 { 0.0 } else { x });
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    let text = format!("{x:.decimals$}");
    if text.contains('.') {
        text.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        text
    }
}

fn exact_text(p: &Probability) -> String {
    p.exact
        .as_ref()
        .map(ExactScalar::to_string)
        .unwrap_or_default()
}

fn row_line(label: &str, p: &Probability) -> String {
    let exact = match &p.exact {
        Some(x) => x.to_string(),
        None => "-".to_string(),
    };
    format!("{label} | {exact} | {}", format_float(p.float))
}

fn render_outcome_table(out: &mut String, table: &OutcomeTable) {
    let kind = if table.conditional {
        "conditional on no gamma"
    } else {
        "unconditional"
    };
    let _ = writeln!(out, "  {kind}:");
    for ((a, b), p) in &table.rows {
        let _ = writeln!(out, "    {}", row_line(&format!("{a},{b}"), p));
    }
    if !table.conditional {
        let _ = writeln!(out, "    {}", row_line("gamma", &table.gamma));
    }
}

/// Human-readable tables for one scenario, both conditional and unconditional.
pub fn render_scenario(outcome: &ScenarioOutcome) -> String {
    let cfg = &outcome.config;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "config {} (bs2+ {}, bs2- {}), p = {}, backend {}",
        cfg.layout(),
        if cfg.bs2_plus { "in" } else { "out" },
        if cfg.bs2_minus { "in" } else { "out" },
        cfg.reaction_probability,
        outcome.backend
    );
    let _ = writeln!(out, "  e+,e- | exact | float");
    render_outcome_table(&mut out, &outcome.conditional);
    render_outcome_table(&mut out, &outcome.unconditional);
    out
}

/// The four layouts followed by the Hardy-chain summary.
pub fn render_full_table(table: &FullTable) -> String {
    let mut out = String::new();
    for (_, outcome) in table.iter() {
        out.push_str(&render_scenario(outcome));
        out.push('\n');
    }
    let cond = |layout: Layout, a, b| table.get(layout).conditional.get(a, b).to_string();
    use Detector::{C, D};
    let _ = writeln!(out, "Hardy chain:");
    let _ = writeln!(out, "P(c+,c-|out,out) = {}", cond(Layout::OutOut, C, C));
    let _ = writeln!(out, "P(d+,d-|in,out) = {}", cond(Layout::InOut, D, D));
    let _ = writeln!(out, "P(d+,d-|out,in) = {}", cond(Layout::OutIn, D, D));
    let _ = writeln!(
        out,
        "P(d+,d-|in,in) = {} (cond), {} (uncond)",
        cond(Layout::InIn, D, D),
        table.get(Layout::InIn).unconditional.get(D, D)
    );
    out
}

pub fn render_hom() -> String {
    let mut out = String::new();
    let _ = writeln!(out, "input |1,1> through one balanced beam splitter");
    for (ket, amp) in hom_output::<ExactScalar>().amplitudes() {
        let _ = writeln!(out, "  {ket} | {amp}");
    }
    let _ = writeln!(out, "P(coincidence) = {}", hom_coincidence_probability());
    let _ = writeln!(
        out,
        "P(coincidence, distinguishable photons) = {}",
        distinguishable_coincidence_probability()
    );
    out
}

/// One CSV/JSON row of an exported outcome table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRecord {
    pub config: String,
    /// Detector of the positron, or `gamma` for the annihilation row.
    pub detector_plus: String,
    pub detector_minus: String,
    /// Canonical exact value; empty when computed in the float backend.
    pub prob_exact: String,
    pub prob_float: f64,
    pub conditional: bool,
}

impl TableRecord {
    pub fn exact_value(&self) -> Option<ExactScalar> {
        (!self.prob_exact.is_empty())
            .then(|| self.prob_exact.parse().ok())
            .flatten()
    }
}

/// Conditional rows, unconditional rows, then the gamma row.
pub fn records(outcome: &ScenarioOutcome) -> Vec<TableRecord> {
    let config = outcome.config.layout().code().to_string();
    let mut out = Vec::new();
    for table in [&outcome.conditional, &outcome.unconditional] {
        for ((a, b), p) in &table.rows {
            out.push(TableRecord {
                config: config.clone(),
                detector_plus: a.to_string(),
                detector_minus: b.to_string(),
                prob_exact: exact_text(p),
                prob_float: p.float,
                conditional: table.conditional,
            });
        }
    }
    let gamma = &outcome.unconditional.gamma;
    out.push(TableRecord {
        config,
        detector_plus: "gamma".into(),
        detector_minus: "gamma".into(),
        prob_exact: exact_text(gamma),
        prob_float: gamma.float,
        conditional: false,
    });
    out
}

pub fn write_csv<W: io::Write>(writer: W, records: &[TableRecord]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: io::Read>(reader: R) -> csv::Result<Vec<TableRecord>> {
    csv::Reader::from_reader(reader).deserialize().collect()
}

pub fn write_json<W: io::Write>(writer: W, records: &[TableRecord]) -> serde_json::Result<()> {
    serde_json::to_writer_pretty(writer, records)
}

pub fn read_json<R: io::Read>(reader: R) -> serde_json::Result<Vec<TableRecord>> {
    serde_json::from_reader(reader)
}
