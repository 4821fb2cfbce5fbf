//! Benchmark corpus: `.phys` files under `<root>/<topic>/`, plus a
//! `manifest.toml` naming the expected tier of every entry.
//!
//! ```toml
//! [[entry]]
//! name = "ch13_electro_question_8"
//! tier = "provable-by-auto"
//! verdict = "proved"
//!
//! [[entry]]
//! name = "ch2_q1"
//! tier = "script-required"
//! verdict = "unknown"
//! script = "mechanics/ch2_q1.script"
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lang::{parse_statement_with, Level, Statement};
use crate::unitdb::{Topic, UnitDb};

pub const MANIFEST: &str = "manifest.toml";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tier {
    ProvableByAuto,
    ScriptRequired,
    DimCheckOnly,
}

impl Tier {
    pub fn as_str(self) -> &'static str {
        match self {
            Tier::ProvableByAuto => "provable-by-auto",
            Tier::ScriptRequired => "script-required",
            Tier::DimCheckOnly => "dim-check-only",
        }
    }
}

impl fmt::Display for Tier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Verdict label a golden entry is expected to produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExpectedVerdict {
    Proved,
    Refuted,
    Unknown,
}

impl ExpectedVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            ExpectedVerdict::Proved => "proved",
            ExpectedVerdict::Refuted => "refuted",
            ExpectedVerdict::Unknown => "unknown",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestEntry {
    pub name: String,
    pub tier: Tier,
    pub verdict: Option<ExpectedVerdict>,
    /// Relative to the corpus root.
    pub script: Option<String>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    #[serde(default, rename = "entry")]
    pub entries: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn read(path: &Path) -> Result<Manifest, String> {
        let text = fs::read_to_string(path).map_err(|e| e.to_string())?;
        toml::from_str(&text).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub statement: Statement,
    pub source: String,
    pub expected: Tier,
    pub verdict: Option<ExpectedVerdict>,
    pub path: PathBuf,
    /// The file as read.
    pub text: String,
    /// Derivation script text, for entries that ship one.
    pub script: Option<String>,
}

impl CorpusEntry {
    pub fn name(&self) -> &str {
        &self.statement.name
    }

    /// The unit database with this entry's constant overrides applied.
    pub fn unit_db(&self, base: &UnitDb) -> UnitDb {
        base.with_constant_overrides(&self.statement.meta.constants)
            .expect("overrides are validated on load")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{}: {message}", path.display())]
pub struct LoadIssue {
    pub path: PathBuf,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{} corpus error(s):\n{}", issues.len(), render(issues))]
pub struct CorpusError {
    pub issues: Vec<LoadIssue>,
}

fn render(issues: &[LoadIssue]) -> String {
    issues
        .iter()
        .map(|i| format!("  {i}"))
        .collect::<Vec<_>>()
        .join("\n")
}

fn phys_files(dir: &Path, out: &mut Vec<PathBuf>) -> std::io::Result<()> {
    for item in fs::read_dir(dir)? {
        let path = item?.path();
        if path.is_dir() {
            phys_files(&path, out)?;
        } else if path.extension().is_some_and(|e| e == "phys") {
            out.push(path);
        }
    }
    Ok(())
}

/// Loads every `.phys` file below `dir`. All problems are collected before
/// failing. Entries come back sorted by name.
pub fn load_corpus(dir: &Path, db: &UnitDb) -> Result<Vec<CorpusEntry>, CorpusError> {
    let mut issues = Vec::new();
    let issue = |path: &Path, message: String| LoadIssue {
        path: path.to_path_buf(),
        message,
    };
    let mut files = Vec::new();
    if let Err(e) = phys_files(dir, &mut files) {
        return Err(CorpusError {
            issues: vec![issue(dir, e.to_string())],
        });
    }
    files.sort();

    let manifest_path = dir.join(MANIFEST);
    let manifest = if manifest_path.exists() {
        match Manifest::read(&manifest_path) {
            Ok(m) => Some(m),
            Err(e) => {
                issues.push(issue(&manifest_path, e));
                None
            }
        }
    } else {
        None
    };
    let mut listed: BTreeMap<&str, &ManifestEntry> = BTreeMap::new();
    if let Some(m) = &manifest {
        for e in &m.entries {
            if listed.insert(&e.name, e).is_some() {
                issues.push(issue(&manifest_path, format!("entry `{}` listed twice", e.name)));
            }
        }
    }

    let mut entries: Vec<CorpusEntry> = Vec::new();
    let mut seen: BTreeMap<String, PathBuf> = BTreeMap::new();
    for path in files {
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) => {
                issues.push(issue(&path, e.to_string()));
                continue;
            }
        };
        let stmt = match parse_statement_with(&text, db) {
            Ok(s) => s,
            Err(e) => {
                issues.push(issue(&path, e.to_string()));
                continue;
            }
        };
        if let Some(first) = seen.insert(stmt.name.clone(), path.clone()) {
            issues.push(issue(
                &path,
                format!("duplicate entry `{}` (also in {})", stmt.name, first.display()),
            ));
            continue;
        }
        if let Err(e) = db.with_constant_overrides(&stmt.meta.constants) {
            issues.push(issue(&path, e.to_string()));
            continue;
        }
        if let Some(parent) = path.parent().filter(|p| *p != dir) {
            let folder = parent.file_name().and_then(|f| f.to_str()).unwrap_or("");
            if folder.parse::<Topic>().is_ok() && folder != stmt.meta.topic.as_str() {
                issues.push(issue(
                    &path,
                    format!("topic `{}` filed under `{folder}/`", stmt.meta.topic),
                ));
                continue;
            }
        }
        let (expected, verdict, script) = match (&manifest, listed.get(stmt.name.as_str())) {
            (None, _) => (Tier::DimCheckOnly, None, None),
            (Some(_), None) => {
                issues.push(issue(&path, format!("`{}` is missing from the manifest", stmt.name)));
                continue;
            }
            (Some(_), Some(m)) => {
                let script = match &m.script {
                    None => None,
                    Some(rel) => match fs::read_to_string(dir.join(rel)) {
                        Ok(t) => Some(t),
                        Err(e) => {
                            issues.push(issue(&dir.join(rel), e.to_string()));
                            continue;
                        }
                    },
                };
                (m.tier, m.verdict, script)
            }
        };
        entries.push(CorpusEntry {
            source: stmt.meta.source.clone().unwrap_or_default(),
            statement: stmt,
            expected,
            verdict,
            path,
            text,
            script,
        });
    }
    for name in listed.keys() {
        if !seen.contains_key(*name) {
            issues.push(issue(&manifest_path, format!("no statement named `{name}`")));
        }
    }
    if !issues.is_empty() {
        return Err(CorpusError { issues });
    }
    entries.sort_by(|a, b| a.statement.name.cmp(&b.statement.name));
    Ok(entries)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CorpusStats {
    pub by_level: BTreeMap<Level, usize>,
    pub by_topic: BTreeMap<Topic, usize>,
    pub total: usize,
}

impl CorpusStats {
    pub fn level(&self, l: Level) -> usize {
        self.by_level.get(&l).copied().unwrap_or(0)
    }

    pub fn topic(&self, t: Topic) -> usize {
        self.by_topic.get(&t).copied().unwrap_or(0)
    }

    /// Comp-easy plus comp-hard.
    pub fn competition(&self) -> usize {
        self.level(Level::CompEasy) + self.level(Level::CompHard)
    }
}

pub fn corpus_stats<'a>(statements: impl IntoIterator<Item = &'a Statement>) -> CorpusStats {
    let mut s = CorpusStats::default();
    for st in statements {
        *s.by_level.entry(st.meta.level).or_default() += 1;
        *s.by_topic.entry(st.meta.topic).or_default() += 1;
        s.total += 1;
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{Metadata, Prop};

    fn tmp(tag: &str) -> PathBuf {
        let d = std::env::temp_dir().join(format!("physkernel-corpus-{tag}-{}", std::process::id()));
        let _ = fs::remove_dir_all(&d);
        fs::create_dir_all(&d).unwrap();
        d
    }

    fn phys(name: &str, topic: &str) -> String {
        format!("---\nname: {name}\nlevel: college\ntopic: {topic}\n---\ntheorem {name} (x : Length) (h : x = 2 • meter) : x = 2 • meter\n")
    }

    #[test]
    fn empty_directory() {
        let d = tmp("empty");
        assert!(load_corpus(&d, UnitDb::shared()).unwrap().is_empty());
    }

    #[test]
    fn sorted_and_manifest_applied() {
        let d = tmp("sorted");
        fs::create_dir_all(d.join("mechanics")).unwrap();
        fs::write(d.join("mechanics/b.phys"), phys("b", "mechanics")).unwrap();
        fs::write(d.join("mechanics/a.phys"), phys("a", "mechanics")).unwrap();
        fs::write(
            d.join(MANIFEST),
            "[[entry]]\nname = \"a\"\ntier = \"provable-by-auto\"\nverdict = \"proved\"\n\n[[entry]]\nname = \"b\"\ntier = \"dim-check-only\"\n",
        )
        .unwrap();
        let c = load_corpus(&d, UnitDb::shared()).unwrap();
        assert_eq!(c.iter().map(|e| e.name()).collect::<Vec<_>>(), ["a", "b"]);
        assert_eq!(c[0].expected, Tier::ProvableByAuto);
        assert_eq!(c[0].verdict, Some(ExpectedVerdict::Proved));
    }

    #[test]
    fn errors_are_aggregated() {
        let d = tmp("errors");
        fs::create_dir_all(d.join("optics")).unwrap();
        fs::write(d.join("optics/x.phys"), phys("x", "alchemy")).unwrap();
        fs::write(d.join("optics/y.phys"), phys("dup", "optics")).unwrap();
        fs::write(d.join("optics/z.phys"), phys("dup", "optics")).unwrap();
        fs::write(d.join("optics/w.phys"), phys("w", "mechanics")).unwrap();
        let err = load_corpus(&d, UnitDb::shared()).unwrap_err();
        assert_eq!(err.issues.len(), 3, "{err}");
        let text = err.to_string();
        assert!(text.contains("alchemy") && text.contains("duplicate") && text.contains("filed under"));
    }

    #[test]
    fn bad_override_is_reported() {
        let d = tmp("override");
        let src = phys("o", "mechanics").replace("---\ntheorem", "constants:\n  hbar_bogus: 1\n---\ntheorem");
        fs::write(d.join("o.phys"), src).unwrap();
        let err = load_corpus(&d, UnitDb::shared()).unwrap_err();
        assert!(err.to_string().contains("hbar_bogus"));
    }

    #[test]
    fn level_split_counts() {
        let mk = |level| Statement {
            name: String::new(),
            meta: Metadata {
                level,
                ..Metadata::default()
            },
            decls: vec![],
            hyps: vec![],
            goal: Prop::eq(crate::lang::Expr::int(0), crate::lang::Expr::int(0)),
        };
        let mut all = Vec::new();
        for (level, n) in [(Level::College, 104), (Level::CompEasy, 62), (Level::CompHard, 34)] {
            all.extend((0..n).map(|_| mk(level)));
        }
        let s = corpus_stats(&all);
        assert_eq!(s.total, 200);
        assert_eq!(s.competition(), 96);
        assert_eq!(s.topic(Topic::Mechanics), 200);
        let one = corpus_stats(&all[..1]);
        assert_eq!((one.total, one.level(Level::College)), (1, 1));
    }
}
