use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
}

impl Verdict {
    pub fn from_bool(holds: bool) -> Self {
        if holds {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }

    pub fn holds(self) -> bool {
        self == Verdict::Holds
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
        })
    }
}

/// Uniform summary of an oracle run, rendered as text or JSON by the CLI.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoryReport {
    pub property: String,
    pub systems: Vec<String>,
    pub verdict: Verdict,
    /// Number of cases examined.
    pub work: u128,
    /// Named quantities worth pinning (counts, marginals).
    pub facts: BTreeMap<String, Value>,
    /// Human-readable witness lines; empty when there is none.
    pub witness: Vec<String>,
    pub notes: Vec<String>,
}

impl TheoryReport {
    pub fn new(
        property: impl Into<String>,
        systems: Vec<String>,
        verdict: Verdict,
        work: u128,
    ) -> Self {
        TheoryReport {
            property: property.into(),
            systems,
            verdict,
            work,
            facts: BTreeMap::new(),
            witness: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn fact(mut self, key: &str, value: impl Serialize) -> Self {
        let value = serde_json::to_value(value).expect("facts are plain data");
        self.facts.insert(key.to_string(), value);
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn with_witness(mut self, lines: Vec<String>) -> Self {
        self.witness = lines;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

impl fmt::Display for TheoryReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "property: {}", self.property)?;
        writeln!(f, "systems:  {}", self.systems.join(", "))?;
        writeln!(f, "verdict:  {}", self.verdict)?;
        writeln!(f, "work:     {}", self.work)?;
        for (k, v) in &self.facts {
            writeln!(f, "  {k} = {v}")?;
        }
        if !self.witness.is_empty() {
            writeln!(f, "witness:")?;
            for line in &self.witness {
                writeln!(f, "  {line}")?;
            }
        }
        for note in &self.notes {
            writeln!(f, "note: {note}")?;
        }
        Ok(())
    }
}
