use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value as Json};

use crate::scalar::{format_point, Scalar};

/// Witnesses kept per report; the total is still counted.
pub const WITNESS_CAP: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// No evidence either way, e.g. no candidate selection was available.
    Unverified,
}

impl Verdict {
    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }

    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    /// Fail dominates, then Unverified.
    pub fn all(verdicts: impl IntoIterator<Item = Verdict>) -> Self {
        let mut out = Verdict::Pass;
        for v in verdicts {
            match v {
                Verdict::Fail => return Verdict::Fail,
                Verdict::Unverified => out = Verdict::Unverified,
                Verdict::Pass => {}
            }
        }
        out
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Unverified => "unverified",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessKind {
    /// A neighbor's value leaves the allowed neighborhood of the value at the point.
    Excess,
    /// The value at the point is empty while a neighbor's is not.
    EmptyValue,
    NonConvex,
    NotContained,
    OnDiagonal,
    Violation,
}

impl WitnessKind {
    pub fn as_str(self) -> &'static str {
        match self {
            WitnessKind::Excess => "excess",
            WitnessKind::EmptyValue => "empty value",
            WitnessKind::NonConvex => "non-convex value",
            WitnessKind::NotContained => "not contained",
            WitnessKind::OnDiagonal => "point in closure of its value",
            WitnessKind::Violation => "violation",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Witness<T> {
    pub kind: WitnessKind,
    pub point: Vec<T>,
    pub neighbor: Option<Vec<T>>,
    pub excess: Option<T>,
    /// Whether an exact test confirms the failure at `point` (None when not attempted).
    pub confirmed: Option<bool>,
    pub detail: String,
}

impl<T: Scalar> Witness<T> {
    pub fn at(kind: WitnessKind, point: Vec<T>, detail: impl Into<String>) -> Self {
        Witness { kind, point, neighbor: None, excess: None, confirmed: None, detail: detail.into() }
    }

    pub fn to_record(&self) -> Json {
        let pt = |p: &[T]| Json::Array(p.iter().map(Scalar::to_json).collect());
        json!({
            "kind": self.kind.as_str(),
            "point": pt(&self.point),
            "neighbor": self.neighbor.as_deref().map(pt),
            "excess": self.excess.as_ref().map(Scalar::to_json),
            "confirmed": self.confirmed,
            "detail": self.detail,
        })
    }
}

impl<T: Scalar> fmt::Display for Witness<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}", self.kind.as_str(), format_point(&self.point))?;
        if let Some(nb) = &self.neighbor {
            write!(f, " from {}", format_point(nb))?;
        }
        if let Some(e) = &self.excess {
            write!(f, " excess {e}")?;
        }
        match self.confirmed {
            Some(true) => f.write_str(" [confirmed]")?,
            Some(false) => f.write_str(" [grid artifact]")?,
            None => {}
        }
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

/// Outcome of a check, with the resolution it was run at.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport<T> {
    pub property: String,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness<T>>,
    pub witness_count: usize,
    pub params: BTreeMap<String, String>,
    pub notes: Vec<String>,
    pub children: Vec<CheckReport<T>>,
}

impl<T: Scalar> CheckReport<T> {
    pub fn new(property: impl Into<String>) -> Self {
        CheckReport {
            property: property.into(),
            verdict: Verdict::Pass,
            witnesses: Vec::new(),
            witness_count: 0,
            params: BTreeMap::new(),
            notes: Vec::new(),
            children: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn set_param(&mut self, key: &str, value: impl ToString) {
        self.params.insert(key.to_string(), value.to_string());
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// Records a witness and marks the report failed.
    pub fn fail_with(&mut self, w: Witness<T>) {
        self.witness_count += 1;
        if self.witnesses.len() < WITNESS_CAP {
            self.witnesses.push(w);
        }
        self.verdict = Verdict::Fail;
    }

    pub fn add_child(&mut self, child: CheckReport<T>) {
        self.children.push(child);
    }

    /// Sets the verdict from the children whose names start with one of `prefixes`.
    pub fn verdict_from_children(&mut self, prefixes: &[&str]) {
        let v = Verdict::all(
            self.children.iter().filter(|c| prefixes.iter().any(|p| c.property.starts_with(p))).map(|c| c.verdict),
        );
        self.verdict = Verdict::all([self.verdict, v]);
    }

    pub fn child(&self, property: &str) -> Option<&CheckReport<T>> {
        self.children.iter().find(|c| c.property == property)
    }

    pub fn find(&self, property: &str) -> Option<&CheckReport<T>> {
        if self.property == property {
            return Some(self);
        }
        self.children.iter().find_map(|c| c.find(property))
    }

    pub fn to_record(&self) -> Json {
        json!({
            "property": self.property,
            "verdict": self.verdict.as_str(),
            "witness_count": self.witness_count,
            "witnesses": self.witnesses.iter().map(Witness::to_record).collect::<Vec<_>>(),
            "params": self.params,
            "notes": self.notes,
            "children": self.children.iter().map(CheckReport::to_record).collect::<Vec<_>>(),
        })
    }

    fn write_indented(&self, f: &mut fmt::Formatter<'_>, depth: usize) -> fmt::Result {
        let pad = "  ".repeat(depth);
        write!(f, "{pad}{:<28} {}", self.property, self.verdict)?;
        if self.witness_count > 0 {
            write!(f, " ({} witnesses)", self.witness_count)?;
        }
        writeln!(f)?;
        if !self.params.is_empty() {
            let ps: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            writeln!(f, "{pad}  params: {}", ps.join(", "))?;
        }
        for n in &self.notes {
            writeln!(f, "{pad}  note: {n}")?;
        }
        for w in self.witnesses.iter().take(5) {
            writeln!(f, "{pad}  - {w}")?;
        }
        if self.witnesses.len() > 5 {
            writeln!(f, "{pad}  ... {} more", self.witness_count - 5)?;
        }
        for c in &self.children {
            c.write_indented(f, depth + 1)?;
        }
        Ok(())
    }
}

impl<T: Scalar> fmt::Display for CheckReport<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_indented(f, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdicts_combine() {
        assert_eq!(Verdict::all([Verdict::Pass, Verdict::Unverified]), Verdict::Unverified);
        assert_eq!(Verdict::all([Verdict::Unverified, Verdict::Fail]), Verdict::Fail);
        assert_eq!(Verdict::all([]), Verdict::Pass);
    }

    #[test]
    fn witness_cap_keeps_count() {
        let mut r = CheckReport::<f64>::new("usc");
        for k in 0..40 {
            r.fail_with(Witness::at(WitnessKind::Excess, vec![k as f64], ""));
        }
        assert_eq!(r.witnesses.len(), WITNESS_CAP);
        assert_eq!(r.witness_count, 40);
        assert_eq!(r.to_record()["verdict"], "fail");
    }
}
