//! Instance text format and schema interchange.
//!
//! Instances: one tuple per line, whitespace-separated value names; lines
//! starting with `--` are comments, blank lines are ignored. Schemas are JSON
//! documents with `name`, `arity`, `keys` and `inds`.

use std::collections::HashMap;

use super::{Instance, SchemaDesc, Value};
use crate::enumeration::DomainSpec;
use crate::error::{Error, Result};

/// Interning table between value names and dense indices.
#[derive(Clone, Debug, Default)]
pub struct Symbols {
    names: Vec<String>,
    lookup: HashMap<String, Value>,
}

impl Symbols {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_domain(dom: &DomainSpec) -> Self {
        let mut s = Symbols::new();
        for name in dom.names() {
            s.intern(&name).expect("domain names are distinct and valid");
        }
        s
    }

    pub fn intern(&mut self, name: &str) -> Result<Value> {
        if name.is_empty() || name.starts_with('#') || name.starts_with("--") {
            return Err(Error::usage(format!("invalid value name {name:?}")));
        }
        if let Some(&v) = self.lookup.get(name) {
            return Ok(v);
        }
        let v = Value(self.names.len() as u32);
        self.names.push(name.to_string());
        self.lookup.insert(name.to_string(), v);
        Ok(v)
    }

    pub fn get(&self, name: &str) -> Option<Value> {
        self.lookup.get(name).copied()
    }

    pub fn name(&self, v: Value) -> String {
        self.names
            .get(v.0 as usize)
            .cloned()
            .unwrap_or_else(|| v.default_name())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with("--"))
}

pub fn parse_instance(text: &str, arity: usize, symbols: &mut Symbols) -> Result<Instance> {
    let mut inst = Instance::empty(arity);
    for (line, content) in content_lines(text) {
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.len() != arity {
            return Err(Error::Parse {
                line,
                msg: format!("expected {arity} values, found {}", tokens.len()),
            });
        }
        let tuple = tokens
            .iter()
            .map(|t| symbols.intern(t).map_err(|e| Error::Parse { line, msg: e.to_string() }))
            .collect::<Result<Vec<Value>>>()?;
        inst.insert(tuple)?;
    }
    Ok(inst)
}

pub fn write_instance(inst: &Instance, symbols: &Symbols) -> String {
    let mut out = String::new();
    for t in inst.tuples() {
        let names: Vec<String> = t.iter().map(|&v| symbols.name(v)).collect();
        out.push_str(&names.join(" "));
        out.push('\n');
    }
    out
}

/// Several instances, one block each, blocks separated by a `--` line.
pub fn write_instance_blocks<'a>(insts: impl IntoIterator<Item = &'a Instance>, symbols: &Symbols) -> String {
    insts
        .into_iter()
        .map(|i| write_instance(i, symbols))
        .collect::<Vec<_>>()
        .join("--\n")
}

pub fn parse_schema(text: &str) -> Result<SchemaDesc> {
    let schema: SchemaDesc = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        msg: e.to_string(),
    })?;
    schema.validate()?;
    Ok(schema)
}

pub fn write_schema(schema: &SchemaDesc) -> String {
    serde_json::to_string_pretty(schema).expect("schema serializes")
}
