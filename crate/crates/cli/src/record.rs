use std::io::{self, Write};

use clap::ValueEnum;
use qalink_core::lattice::Obstruction;
use qalink_core::{BigInt, Evidence, MontesinosLink, Verdict};
use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Tsv,
    Jsonl,
    Table,
}

#[derive(Serialize)]
pub struct EvidenceRecord {
    branch: String,
    reflected: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    laufer: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    laufer_steps: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    laufer_witness: Option<usize>,
    /// Ambient dimension of the surjective-transpose embedding.
    #[serde(skip_serializing_if = "Option::is_none")]
    embedding_n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    embeddings_examined: Option<u64>,
}

#[derive(Serialize)]
pub struct OutputRecord {
    link: String,
    canonical: String,
    e: Value,
    p: usize,
    det: Value,
    epsilon: String,
    status: String,
    reason: String,
    /// Tangle positions in the canonical form, from 1.
    witness_pair: Option<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    evidence: Option<EvidenceRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing_ms: Option<u128>,
    #[serde(skip_serializing_if = "Option::is_none")]
    explain: Option<Vec<String>>,
}

/// A JSON number when it fits in 64 bits, otherwise its decimal string.
fn number(x: &BigInt) -> Value {
    x.to_string()
        .parse::<i64>()
        .map(Value::from)
        .unwrap_or_else(|_| Value::String(x.to_string()))
}

impl OutputRecord {
    pub fn new(link: &MontesinosLink, v: &Verdict, ev: Option<&Evidence>, timing_ms: Option<u128>) -> Self {
        let evidence = ev.map(|ev| EvidenceRecord {
            branch: ev.branch.to_string(),
            reflected: ev.reflected,
            laufer: ev.laufer.as_ref().map(|l| format!("{:?}", l.verdict)),
            laufer_steps: ev.laufer.as_ref().map(|l| l.steps),
            laufer_witness: ev.laufer.as_ref().and_then(|l| l.witness),
            embedding_n: ev.obstruction.as_ref().and_then(|o| o.witness()).map(|w| w.n()),
            embeddings_examined: ev
                .obstruction
                .as_ref()
                .map(|o: &Obstruction| o.stats().embeddings_examined()),
        });
        OutputRecord {
            link: link.to_string(),
            canonical: v.normalized.to_string(),
            e: number(v.normalized.e()),
            p: v.normalized.p(),
            det: number(&v.det),
            epsilon: v.epsilon.to_string(),
            status: v.status.to_string(),
            reason: v.reason.to_string(),
            witness_pair: v.witness_pair.map(|(i, j)| [i + 1, j + 1]),
            evidence,
            timing_ms,
            explain: None,
        }
    }

    fn cells(&self, timing: bool) -> Vec<String> {
        let plain = |v: &Value| match v {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        let mut cells = vec![
            self.link.clone(),
            self.canonical.clone(),
            plain(&self.e),
            self.p.to_string(),
            plain(&self.det),
            self.epsilon.clone(),
            self.status.clone(),
            self.reason.clone(),
            self.witness_pair
                .map(|[i, j]| format!("{i},{j}"))
                .unwrap_or_else(|| "-".into()),
            self.evidence
                .as_ref()
                .map(|e| e.branch.clone())
                .unwrap_or_else(|| "-".into()),
        ];
        if timing {
            cells.push(self.timing_ms.map(|t| t.to_string()).unwrap_or_default());
        }
        cells
    }
}

const HEADER: [&str; 10] = [
    "link", "canonical", "e", "p", "det", "epsilon", "status", "reason", "witness", "branch",
];

/// Emits records in the order pushed. Table output is buffered to align
/// columns; the other formats stream.
pub struct Writer {
    format: Format,
    timing: bool,
    header_done: bool,
    rows: Vec<(OutputRecord, Option<Vec<String>>)>,
    out: io::BufWriter<io::Stdout>,
}

impl Writer {
    pub fn new(format: Format, timing: bool) -> Self {
        Writer {
            format,
            timing,
            header_done: false,
            rows: Vec::new(),
            out: io::BufWriter::new(io::stdout()),
        }
    }

    fn header(&self) -> Vec<String> {
        let mut h: Vec<String> = HEADER.iter().map(|s| s.to_string()).collect();
        if self.timing {
            h.push("timing_ms".into());
        }
        h
    }

    pub fn push(&mut self, rec: OutputRecord, trace: Option<&[String]>) {
        self.rows.push((rec, trace.map(<[String]>::to_vec)));
        if self.format != Format::Table {
            self.flush_rows();
        }
    }

    pub fn flush_rows(&mut self) {
        if self.format == Format::Table {
            return;
        }
        let rows = std::mem::take(&mut self.rows);
        if self.format == Format::Tsv && !self.header_done {
            let _ = writeln!(self.out, "{}", self.header().join("\t"));
            self.header_done = true;
        }
        for (mut rec, trace) in rows {
            if self.format == Format::Jsonl {
                rec.explain = trace;
                let _ = writeln!(self.out, "{}", serde_json::to_string(&rec).expect("serializable"));
                continue;
            }
            let _ = writeln!(self.out, "{}", rec.cells(self.timing).join("\t"));
            for line in trace.iter().flatten() {
                let _ = writeln!(self.out, "# {line}");
            }
        }
        let _ = self.out.flush();
    }

    pub fn finish(mut self) {
        if self.format != Format::Table {
            self.flush_rows();
            return;
        }
        let mut table = vec![self.header()];
        table.extend(self.rows.iter().map(|(r, _)| r.cells(self.timing)));
        let widths: Vec<usize> = (0..table[0].len())
            .map(|c| table.iter().map(|row| row[c].chars().count()).max().unwrap_or(0))
            .collect();
        let traces: Vec<Option<Vec<String>>> = std::iter::once(None)
            .chain(self.rows.iter().map(|(_, t)| t.clone()))
            .collect();
        for (row, trace) in table.iter().zip(traces) {
            let line: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(cell, w)| format!("{cell:<w$}"))
                .collect();
            let _ = writeln!(self.out, "{}", line.join("  ").trim_end());
            for l in trace.iter().flatten() {
                let _ = writeln!(self.out, "    {l}");
            }
        }
        let _ = self.out.flush();
    }
}
