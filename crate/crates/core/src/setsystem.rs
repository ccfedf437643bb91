//! Named set systems, the human-facing form of a binary matrix.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::BinaryMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedSet {
    pub name: String,
    /// Indices into [`SetSystem::elements`].
    pub members: BTreeSet<usize>,
}

/// A universe of named elements and a list of named subsets of it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetSystem {
    elements: Vec<String>,
    sets: Vec<NamedSet>,
}

fn check_unique<'a>(list: &'static str, names: impl Iterator<Item = &'a str>) -> Result<()> {
    let mut seen = HashSet::new();
    for name in names {
        if !seen.insert(name) {
            return Err(Error::DuplicateName {
                list,
                name: name.to_string(),
            });
        }
    }
    Ok(())
}

impl SetSystem {
    pub fn new(elements: Vec<String>, sets: Vec<NamedSet>) -> Result<Self> {
        check_unique("elements", elements.iter().map(String::as_str))?;
        check_unique("sets", sets.iter().map(|s| s.name.as_str()))?;
        for set in &sets {
            if let Some(&bad) = set.members.iter().find(|&&e| e >= elements.len()) {
                return Err(Error::IndexOutOfRange {
                    what: "set member",
                    index: bad,
                    len: elements.len(),
                });
            }
        }
        Ok(SetSystem { elements, sets })
    }

    /// Builds a system from a matrix, naming rows and columns.
    pub fn from_matrix(
        a: &BinaryMatrix,
        elements: Vec<String>,
        set_names: Vec<String>,
    ) -> Result<Self> {
        if elements.len() != a.cols() {
            return Err(Error::LengthMismatch {
                what: "element names",
                expected: a.cols(),
                found: elements.len(),
            });
        }
        if set_names.len() != a.rows() {
            return Err(Error::LengthMismatch {
                what: "set names",
                expected: a.rows(),
                found: set_names.len(),
            });
        }
        let sets = set_names
            .into_iter()
            .enumerate()
            .map(|(i, name)| NamedSet {
                name,
                members: a.row_support(i).into_iter().collect(),
            })
            .collect();
        SetSystem::new(elements, sets)
    }

    /// Names columns `e0, e1, ...` and rows `S0, S1, ...`.
    pub fn from_matrix_default_names(a: &BinaryMatrix) -> Self {
        let elements = (0..a.cols()).map(|j| format!("e{j}")).collect();
        let sets = (0..a.rows()).map(|i| format!("S{i}")).collect();
        SetSystem::from_matrix(a, elements, sets).expect("generated names are unique")
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn sets(&self) -> &[NamedSet] {
        &self.sets
    }

    /// Row `i` is set `i`, column `j` is element `j`.
    pub fn to_matrix(&self) -> BinaryMatrix {
        BinaryMatrix::from_fn(self.sets.len(), self.elements.len(), |i, j| {
            self.sets[i].members.contains(&j)
        })
    }

    pub fn set_index(&self, name: &str) -> Option<usize> {
        self.sets.iter().position(|s| s.name == name)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SetSystemDoc = serde_json::from_str(text).map_err(|e| {
            Error::parse(format!("line {}, column {}", e.line(), e.column()), e.to_string())
        })?;
        doc.into_system()
    }

    pub fn to_json(&self) -> String {
        let doc = SetSystemDoc {
            elements: self.elements.clone(),
            sets: self
                .sets
                .iter()
                .map(|s| SetDoc {
                    name: s.name.clone(),
                    members: s.members.iter().map(|&e| self.elements[e].clone()).collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("plain strings serialize")
    }
}

/// Convenience wrapper matching the matrix-side name of the conversion.
pub fn from_set_system(s: &SetSystem) -> BinaryMatrix {
    s.to_matrix()
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SetSystemDoc {
    elements: Vec<String>,
    sets: Vec<SetDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SetDoc {
    name: String,
    members: Vec<String>,
}

impl SetSystemDoc {
    fn into_system(self) -> Result<SetSystem> {
        let mut index = HashMap::new();
        for (j, name) in self.elements.iter().enumerate() {
            if index.insert(name.as_str(), j).is_some() {
                return Err(Error::parse(
                    format!("elements[{j}]"),
                    format!("duplicate element name {name:?}"),
                ));
            }
        }
        let mut seen_sets = HashSet::new();
        let mut sets = Vec::with_capacity(self.sets.len());
        for (i, set) in self.sets.iter().enumerate() {
            if !seen_sets.insert(set.name.as_str()) {
                return Err(Error::parse(
                    format!("sets[{i}].name"),
                    format!("duplicate set name {:?}", set.name),
                ));
            }
            let mut members = BTreeSet::new();
            for (k, member) in set.members.iter().enumerate() {
                match index.get(member.as_str()) {
                    Some(&j) => {
                        members.insert(j);
                    }
                    None => {
                        return Err(Error::parse(
                            format!("sets[{i}].members[{k}]"),
                            format!("unknown element {member:?}"),
                        ))
                    }
                }
            }
            sets.push(NamedSet {
                name: set.name.clone(),
                members,
            });
        }
        SetSystem::new(self.elements, sets)
    }
}
