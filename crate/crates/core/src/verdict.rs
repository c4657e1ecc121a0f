use std::collections::BTreeMap;

use serde::Serialize;

use crate::relsys::RelationalSystem;
use crate::set::{ElementId, ElementSet};

/// A value bound to a witness variable, in label form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum WitnessValue {
    Element(String),
    Set(Vec<String>),
    Pair(Vec<String>, Vec<String>),
}

pub type Witness = BTreeMap<String, WitnessValue>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails { witness: Witness },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails { witness } => Some(witness),
        }
    }
}

/// Builds witnesses against a labelled universe.
pub(crate) struct WitnessBuilder<'a> {
    labels: &'a [String],
    entries: Witness,
}

impl<'a> WitnessBuilder<'a> {
    pub fn new(labels: &'a [String]) -> Self {
        WitnessBuilder {
            labels,
            entries: BTreeMap::new(),
        }
    }

    pub fn for_system(sys: &'a RelationalSystem) -> Self {
        Self::new(sys.labels())
    }

    fn names(&self, s: &ElementSet) -> Vec<String> {
        s.iter().map(|x| self.labels[x].clone()).collect()
    }

    pub fn set(mut self, name: &str, s: &ElementSet) -> Self {
        let v = WitnessValue::Set(self.names(s));
        self.entries.insert(name.to_string(), v);
        self
    }

    pub fn element(mut self, name: &str, x: ElementId) -> Self {
        self.entries
            .insert(name.to_string(), WitnessValue::Element(self.labels[x].clone()));
        self
    }

    pub fn pair(mut self, name: &str, a: &ElementSet, b: &ElementSet) -> Self {
        let v = WitnessValue::Pair(self.names(a), self.names(b));
        self.entries.insert(name.to_string(), v);
        self
    }

    pub fn text(mut self, name: &str, value: impl Into<String>) -> Self {
        self.entries
            .insert(name.to_string(), WitnessValue::Element(value.into()));
        self
    }

    pub fn fails(self) -> Verdict {
        Verdict::Fails {
            witness: self.entries,
        }
    }
}
