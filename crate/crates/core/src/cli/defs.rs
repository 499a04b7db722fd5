//! The JSON definition format.

use crate::error::{Error, Result};
use serde::Deserialize;
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Order {
    Hasse { hasse: Vec<(String, String)> },
    Pairs(Vec<(String, String)>),
}

impl Default for Order {
    fn default() -> Self {
        Order::Pairs(Vec::new())
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Def {
    ArrowAlgebra {
        name: Option<String>,
        elements: Vec<String>,
        #[serde(default)]
        leq: Order,
        imp: Vec<Vec<String>>,
        separator: Vec<String>,
    },
    Frame {
        name: Option<String>,
        elements: Vec<String>,
        #[serde(default)]
        leq: Order,
    },
    Pca {
        name: Option<String>,
        elements: Vec<String>,
        #[serde(default)]
        leq: Order,
        app: Vec<Vec<String>>,
        filter: Vec<String>,
        k: Option<String>,
        s: Option<String>,
    },
    Morphism {
        name: Option<String>,
        from: String,
        to: String,
        table: BTreeMap<String, String>,
    },
    Nucleus {
        name: Option<String>,
        on: String,
        table: BTreeMap<String, String>,
    },
    PcaMorphism {
        name: Option<String>,
        from: String,
        to: String,
        values: BTreeMap<String, Vec<String>>,
    },
    Term {
        name: Option<String>,
        term: String,
    },
}

impl Def {
    pub fn name(&self) -> Option<&str> {
        match self {
            Def::ArrowAlgebra { name, .. }
            | Def::Frame { name, .. }
            | Def::Pca { name, .. }
            | Def::Morphism { name, .. }
            | Def::Nucleus { name, .. }
            | Def::PcaMorphism { name, .. }
            | Def::Term { name, .. } => name.as_deref(),
        }
    }

    /// Objects other definitions may refer to come first.
    pub fn rank(&self) -> u8 {
        match self {
            Def::ArrowAlgebra { .. } | Def::Frame { .. } | Def::Pca { .. } | Def::Term { .. } => 0,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum Document {
    Many(Vec<Def>),
    One(Def),
}

/// Parses one file; unnamed definitions take the file stem, suffixed by position when there are several.
pub fn parse_file(path: &Path) -> Result<Vec<(String, Def)>> {
    if path == Path::new("-") {
        let mut text = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut text).map_err(|e| Error::Input(format!("stdin: {e}")))?;
        return parse_str(&text, "stdin").map_err(|e| match e {
            Error::Parse(m) => Error::Parse(format!("<stdin>:{m}")),
            other => other,
        });
    }
    let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("object").to_string();
    parse_str(&text, &stem).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}:{m}", path.display())),
        other => other,
    })
}

pub fn parse_str(text: &str, stem: &str) -> Result<Vec<(String, Def)>> {
    // parse as a value first so positions refer to the syntax, then re-read with the schema
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("{}:{}: {e}", e.line(), e.column())))?;
    let doc = match &value {
        serde_json::Value::Array(items) => {
            let mut defs = Vec::new();
            for (i, item) in items.iter().enumerate() {
                defs.push(serde_json::from_value::<Def>(item.clone()).map_err(|e| Error::Parse(format!("definition {i}: {e}")))?);
            }
            Document::Many(defs)
        }
        _ => Document::One(serde_json::from_value::<Def>(value).map_err(|e| Error::Parse(format!("definition: {e}")))?),
    };
    Ok(match doc {
        Document::One(d) => {
            let name = d.name().map(str::to_string).unwrap_or_else(|| stem.to_string());
            vec![(name, d)]
        }
        Document::Many(ds) => ds.into_iter().enumerate().map(|(i, d)| (d.name().map(str::to_string).unwrap_or_else(|| format!("{stem}.{i}")), d)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frame_and_pca() {
        let defs = parse_str(r#"{"kind":"frame","elements":["0","1","2"],"leq":{"hasse":[["0","1"],["1","2"]]}}"#, "c3").unwrap();
        assert_eq!(defs[0].0, "c3");
        let defs = parse_str(r#"[{"kind":"pca","name":"p","elements":["*"],"app":[["-"]],"filter":["*"]}]"#, "x").unwrap();
        assert!(matches!(&defs[0].1, Def::Pca { app, .. } if app[0][0] == "-"));
    }

    #[test]
    fn syntax_errors_have_positions() {
        let e = parse_str("{\n  \"kind\": \"frame\",\n  oops\n}", "x").unwrap_err();
        assert!(matches!(e, Error::Parse(m) if m.starts_with("3:")));
    }
}
