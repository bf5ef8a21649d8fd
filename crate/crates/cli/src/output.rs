//! Rendering of command results as JSON, CSV or plain text.

use std::io::Write;

use clap::ValueEnum;
use serde::Serialize;

use delsub::recon::{Outcome, ReconResult, SimulationTable};
use delsub::sweep::SweepSummary;

use crate::{BallOutput, CoverageOutput, IntersectOutput, RequiredReadsOutput};

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

pub trait Render: Serialize {
    fn csv(&self) -> Vec<Vec<String>>;
    fn plain(&self) -> String;

    fn emit(&self, format: Format) {
        let text = match format {
            Format::Json => serde_json::to_string_pretty(self).expect("output serializes"),
            Format::Csv => self
                .csv()
                .iter()
                .map(|row| row.iter().map(|c| csv_field(c)).collect::<Vec<_>>().join(","))
                .collect::<Vec<_>>()
                .join("\n"),
            Format::Plain => self.plain(),
        };
        let mut out = std::io::stdout().lock();
        // a closed pipe downstream is not an error for us
        let _ = writeln!(out, "{text}").and_then(|_| out.flush());
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(T::to_string).unwrap_or_default()
}

fn header(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn row<const N: usize>(cells: [&dyn ToString; N]) -> Vec<String> {
    cells.iter().map(|c| c.to_string()).collect()
}

impl Render for BallOutput {
    fn csv(&self) -> Vec<Vec<String>> {
        let mut rows = vec![vec!["word".to_string()]];
        rows.extend(self.words.iter().map(|w| vec![w.to_string()]));
        rows
    }

    fn plain(&self) -> String {
        let mut out = format!("ball of {} (t={}, s={}): {} words", self.x, self.t, self.s, self.size);
        for w in &self.words {
            out.push_str(&format!("\n  {w}"));
        }
        out
    }
}

impl Render for IntersectOutput {
    fn csv(&self) -> Vec<Vec<String>> {
        let fast = self.fast.as_ref();
        vec![
            header(&["x", "y", "mode", "n", "q", "d", "size", "method", "oracle_size", "agree", "bound", "bound_applicable"]),
            vec![
                self.x.to_string(),
                self.y.to_string(),
                self.mode.to_string(),
                self.x.len().to_string(),
                self.x.alphabet().q().to_string(),
                opt(&fast.map(|r| r.d)),
                self.size.to_string(),
                opt(&fast.map(|r| serde_json::to_value(r.method).unwrap().as_str().unwrap().to_string())),
                opt(&self.oracle_size),
                opt(&self.agree),
                opt(&fast.map(|r| r.bound)),
                opt(&fast.map(|r| r.bound_applicable)),
            ],
        ]
    }

    fn plain(&self) -> String {
        let mut out = format!("|B(x) ∩ B(y)| = {}", self.size);
        if let Some(r) = &self.fast {
            let method = serde_json::to_value(r.method).unwrap();
            out.push_str(&format!(
                "\nd_H = {}, method {}, bound {}{}",
                r.d,
                method.as_str().unwrap(),
                r.bound,
                if r.bound_applicable { "" } else { " (not applicable)" }
            ));
            for (g, s) in &r.group_sizes {
                out.push_str(&format!("\n  {g}: {s}"));
            }
        }
        if let Some(o) = self.oracle_size {
            out.push_str(&format!("\noracle: {o}"));
        }
        match self.agree {
            Some(true) => out.push_str("\nmethods agree"),
            Some(false) => out.push_str("\nMISMATCH between methods"),
            None => {}
        }
        out
    }
}

impl Render for SweepSummary {
    fn csv(&self) -> Vec<Vec<String>> {
        vec![
            header(&["scope", "q", "n", "exhaustive", "seed", "instances", "violations", "max_size", "bound"]),
            vec![
                self.scope.to_string(),
                self.q.to_string(),
                self.n.to_string(),
                self.exhaustive.to_string(),
                opt(&self.seed),
                self.instances.to_string(),
                self.violations.to_string(),
                opt(&self.max_size),
                opt(&self.bound),
            ],
        ]
    }

    fn plain(&self) -> String {
        let domain = match self.seed {
            Some(seed) => format!("sampled, seed {seed}"),
            None => "exhaustive".to_string(),
        };
        let mut out = format!(
            "{} over q={} n={} ({domain}): {} checked, {} violations",
            self.scope, self.q, self.n, self.instances, self.violations
        );
        if let Some(m) = self.max_size {
            out.push_str(&format!(", max size {m}"));
        }
        if let Some(b) = self.bound {
            out.push_str(&format!(" (limit {b})"));
        }
        for f in &self.failures {
            out.push_str(&format!("\n  {f}"));
        }
        out
    }
}

impl Render for SimulationTable {
    fn csv(&self) -> Vec<Vec<String>> {
        let mut rows = vec![header(&[
            "reads",
            "trials",
            "unique_correct",
            "unique_wrong",
            "ambiguous",
            "infeasible",
            "short",
            "success_rate",
        ])];
        rows.extend(self.rows.iter().map(|r| {
            row([
                &r.reads,
                &r.trials,
                &r.unique_correct,
                &r.unique_wrong,
                &r.ambiguous,
                &r.infeasible,
                &r.short,
                &r.success_rate,
            ])
        }));
        rows
    }

    fn plain(&self) -> String {
        let mut out = format!("q={} n={} seed={} p_sub={}\n reads  trials  success", self.q, self.n, self.seed, self.p_sub);
        for r in &self.rows {
            out.push_str(&format!("\n{:>6}  {:>6}  {:.4}", r.reads, r.trials, r.success_rate));
        }
        out
    }
}

impl Render for CoverageOutput {
    fn csv(&self) -> Vec<Vec<String>> {
        vec![
            header(&["q", "n", "codebook_size", "coverage", "pairs_checked", "exhaustive"]),
            row([
                &self.q,
                &self.n,
                &self.codebook_size,
                &self.report.coverage,
                &self.report.pairs_checked,
                &self.report.exhaustive,
            ]),
        ]
    }

    fn plain(&self) -> String {
        let mut out = format!(
            "coverage {} over {} codeword pairs{}",
            self.report.coverage,
            self.report.pairs_checked,
            if self.report.exhaustive { "" } else { " (sampled)" }
        );
        if let Some(note) = &self.report.note {
            out.push_str(&format!("\nnote: {note}"));
        }
        out
    }
}

impl Render for ReconResult {
    fn csv(&self) -> Vec<Vec<String>> {
        let (outcome, words) = match &self.outcome {
            Outcome::Unique { codeword } => ("unique", vec![codeword.to_string()]),
            Outcome::Ambiguous { candidates } => ("ambiguous", candidates.iter().map(|c| c.to_string()).collect()),
            Outcome::Infeasible => ("infeasible", Vec::new()),
        };
        vec![
            header(&["outcome", "raw_reads", "distinct_reads", "candidates"]),
            vec![
                outcome.to_string(),
                self.raw_reads.to_string(),
                self.distinct_reads.to_string(),
                words.join(" "),
            ],
        ]
    }

    fn plain(&self) -> String {
        let head = format!("{} reads ({} distinct): ", self.raw_reads, self.distinct_reads);
        match &self.outcome {
            Outcome::Unique { codeword } => format!("{head}decoded {codeword}"),
            Outcome::Ambiguous { candidates } => format!(
                "{head}ambiguous among {}",
                candidates.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
            ),
            Outcome::Infeasible => format!("{head}no codeword fits every read"),
        }
    }
}

impl Render for RequiredReadsOutput {
    fn csv(&self) -> Vec<Vec<String>> {
        vec![
            header(&["q", "n", "threshold", "max_intersection", "required_reads"]),
            row([&self.q, &self.n, &self.threshold, &self.max_intersection, &self.required_reads]),
        ]
    }

    fn plain(&self) -> String {
        format!(
            "q={} n={}: at most {} shared reads, {} distinct reads suffice",
            self.q, self.n, self.max_intersection, self.required_reads
        )
    }
}
