//! File formats: stabilizer spec files and fault-tolerant action bundles.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clifford::SRotationSequence;
use crate::code::{CodeError, StabilizerCode};
use crate::ftgate::{CosetChoice, CosetSelection, FaultTolerantAction, FtError, LogicalGate, TransferAmplitude};
use crate::gf2::BitString;
use crate::oracle::DenseOperator;
use crate::partition::DetectorSet;
use crate::spinor::Spinor;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IoError {
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("spec file has no generators")]
    Empty,
    #[error("bundle: {0}")]
    Bundle(String),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Ft(#[from] FtError),
}

impl IoError {
    pub fn is_capacity(&self) -> bool {
        match self {
            IoError::Code(e) => e.is_capacity(),
            IoError::Ft(e) => e.is_capacity(),
            _ => false,
        }
    }
}

/// Parses one generator per line (`#` starts a comment, blank lines skipped).
pub fn parse_stabilizer_spec(text: &str) -> Result<Vec<Spinor>, IoError> {
    let mut out: Vec<Spinor> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let s = Spinor::parse(line).map_err(|e| IoError::Line {
            line: i + 1,
            msg: e.to_string(),
        })?;
        if let Some(first) = out.first() {
            if first.n() != s.n() {
                return Err(IoError::Line {
                    line: i + 1,
                    msg: format!("{} qubits, expected {}", s.n(), first.n()),
                });
            }
        }
        if !s.is_hermitian() {
            return Err(IoError::Line {
                line: i + 1,
                msg: "generator is not hermitian".into(),
            });
        }
        out.push(s);
    }
    if out.is_empty() {
        return Err(IoError::Empty);
    }
    Ok(out)
}

pub fn format_stabilizer_spec(generators: &[Spinor]) -> String {
    let mut s = String::new();
    for g in generators {
        s.push_str(&g.pauli_label());
        s.push('\n');
    }
    s
}

/// Noise file: one noise event per line. A line holds one or more terms
/// separated by `;`; each term is a spinor optionally preceded by a complex
/// coefficient `re,im`. Terms without a coefficient share weight equally.
pub fn parse_noise_list(text: &str) -> Result<Vec<Vec<(Complex64, Spinor)>>, IoError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |msg: String| IoError::Line { line: i + 1, msg };
        let terms: Vec<&str> = line.split(';').map(str::trim).collect();
        let default = Complex64::new(1.0 / (terms.len() as f64).sqrt(), 0.0);
        let mut event = Vec::with_capacity(terms.len());
        for t in terms {
            let (coef, body) = match t.split_once(char::is_whitespace) {
                Some((c, rest)) if c.contains(',') => {
                    let (re, im) = c.split_once(',').expect("contains comma");
                    let re: f64 = re.parse().map_err(|_| bad(format!("bad coefficient {c:?}")))?;
                    let im: f64 = im.parse().map_err(|_| bad(format!("bad coefficient {c:?}")))?;
                    (Complex64::new(re, im), rest.trim())
                }
                _ => (default, t),
            };
            let s = Spinor::parse(body).map_err(|e| bad(e.to_string()))?;
            if let Some((_, first)) = out.first().and_then(|e: &Vec<(Complex64, Spinor)>| e.first()) {
                if first.n() != s.n() {
                    return Err(bad(format!("{} qubits, expected {}", s.n(), first.n())));
                }
            }
            event.push((coef, s));
        }
        out.push(event);
    }
    Ok(out)
}

type Entry = [f64; 2];

fn to_entries(m: &DenseOperator) -> Vec<Vec<Entry>> {
    m.rows()
        .into_iter()
        .map(|r| r.into_iter().map(|c| [c.re, c.im]).collect())
        .collect()
}

fn from_entries(rows: &[Vec<Entry>], what: &str) -> Result<DenseOperator, IoError> {
    DenseOperator::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|e| Complex64::new(e[0], e[1])).collect())
            .collect(),
    )
    .map_err(|_| IoError::Bundle(format!("{what} is not square")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectionEntry {
    pub syndrome: String,
    /// Logical-qubit Pauli letters of the chosen coset.
    pub coset: String,
    /// Phase string on the syndrome qubits.
    pub phase: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrectionEntry {
    pub syndrome: String,
    pub operator: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub max_residual: f64,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FtBundle {
    pub code_id: String,
    pub n: usize,
    pub k: usize,
    pub detectors: Vec<String>,
    pub encoding: Vec<String>,
    pub m00: Vec<Vec<Entry>>,
    pub p_in: Vec<SelectionEntry>,
    pub p_out: Vec<SelectionEntry>,
    pub x: Vec<Vec<Entry>>,
    pub corrections: Vec<CorrectionEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verification: Option<Vec<CheckLine>>,
}

fn logical_label(s: &Spinor) -> String {
    s.pauli_label()
}

fn parse_logical(text: &str, k: usize) -> Result<Spinor, IoError> {
    if k == 0 && text.is_empty() {
        return Ok(Spinor::identity(0).expect("k = 0"));
    }
    let s = Spinor::parse(text).map_err(|e| IoError::Bundle(e.to_string()))?;
    if s.n() != k || !s.is_hermitian() || s.hermitian_sign() != Some(1) {
        return Err(IoError::Bundle(format!("bad coset label {text:?}")));
    }
    Ok(s)
}

fn selection_entries(sel: &CosetSelection) -> Vec<SelectionEntry> {
    sel.iter_nonzero()
        .map(|(b, c)| SelectionEntry {
            syndrome: b.to_string(),
            coset: logical_label(&c.logical),
            phase: c.phase.to_string(),
        })
        .collect()
}

fn parse_selection(entries: &[SelectionEntry], m: usize, k: usize) -> Result<CosetSelection, IoError> {
    let mut map = BTreeMap::new();
    for e in entries {
        let b = BitString::parse(&e.syndrome).map_err(|_| IoError::Bundle(format!("bad syndrome {:?}", e.syndrome)))?;
        let phase = BitString::parse(&e.phase).map_err(|_| IoError::Bundle(format!("bad phase {:?}", e.phase)))?;
        if b.len() != m || phase.len() != m {
            return Err(IoError::Bundle(format!("entry {} has wrong length", e.syndrome)));
        }
        map.insert(
            b,
            CosetChoice {
                logical: parse_logical(&e.coset, k)?,
                phase,
            },
        );
    }
    Ok(CosetSelection::new(m, k, map)?)
}

impl FtBundle {
    pub fn from_action(act: &FaultTolerantAction) -> Self {
        let code = act.code();
        let m = code.n() - code.k();
        FtBundle {
            code_id: code.id().to_string(),
            n: code.n(),
            k: code.k(),
            detectors: code.detectors().detectors().iter().map(|d| d.pauli_label()).collect(),
            encoding: code.encoding().rotations().iter().map(|r| r.to_string()).collect(),
            m00: to_entries(act.gate().matrix()),
            p_in: selection_entries(act.p_in()),
            p_out: selection_entries(act.p_out()),
            x: to_entries(&act.transfer().x),
            corrections: act
                .corrections()
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, s)| CorrectionEntry {
                    syndrome: BitString::from_index(m, i as u64).expect("m small").to_string(),
                    operator: s.pauli_label(),
                })
                .collect(),
            verification: None,
        }
    }

    /// Rebuilds the action; the stored encoding is used as given.
    pub fn to_action(&self) -> Result<FaultTolerantAction, IoError> {
        let dets = self
            .detectors
            .iter()
            .map(|d| Spinor::parse(d).map_err(|e| IoError::Bundle(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        let (c, d) = DetectorSet::from_generators(self.n, &dets).map_err(CodeError::from)?;
        if c.k() != self.k {
            return Err(IoError::Bundle(format!("detectors give k = {}, bundle says {}", c.k(), self.k)));
        }
        let mut listing = format!("# qubits {}\n", self.n);
        for l in &self.encoding {
            listing.push_str(l);
            listing.push('\n');
        }
        let q = SRotationSequence::parse_listing(&listing).map_err(|e| IoError::Bundle(e.to_string()))?;
        let code = StabilizerCode::with_encoding(self.code_id.clone(), &c, &d, q)?;
        let m = self.n - self.k;
        let gate = LogicalGate::new(self.k, from_entries(&self.m00, "m00")?)?;
        let p_in = parse_selection(&self.p_in, m, self.k)?;
        let p_out = parse_selection(&self.p_out, m, self.k)?;
        let transfer = TransferAmplitude {
            x: from_entries(&self.x, "x")?,
            correlated_phases: None,
        };
        Ok(FaultTolerantAction::build(&code, gate, p_in, p_out, transfer)?)
    }

    /// Stored correction table equals the one recomputed from the action.
    pub fn corrections_match(&self, act: &FaultTolerantAction) -> bool {
        FtBundle::from_action(act).corrections == self.corrections
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("bundle serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, IoError> {
        serde_json::from_str(text).map_err(|e| IoError::Bundle(e.to_string()))
    }
}
