//! Readers for local author and team dump files, and the exclusion rules
//! applied before analysis.
//!
//! Authors come as CSV (`author_id,counts,h_index,first_year,last_year`, with
//! `counts` written `LABEL:INT;LABEL:INT`) or as a JSON array of objects.
//! Teams come as a JSON array of `{paper_id, members}`, a CSV of
//! `paper_id,member;member`, or one `paper_id: member,member` per line.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fs;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{AuthorRecord, DisciplineIndex, Team};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AuthorFormat {
    Csv,
    Json,
}

impl AuthorFormat {
    /// `.json` files are JSON, everything else CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => AuthorFormat::Json,
            _ => AuthorFormat::Csv,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExclusionKind {
    /// An author listed twice on the same paper; the repeat was dropped.
    DuplicateMember,
    /// A team member with no author record; dropped from the team.
    DanglingMember,
    /// A team left with no members after dangling members were dropped.
    EmptyTeam,
    /// A one-author paper; kept in the graph, skipped by team analyses.
    SoloTeam,
    /// An author with a single publication field; skipped by individual entropy.
    SingleField,
    /// An author removed from the dataset entirely.
    RemovedAuthor,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exclusion {
    pub kind: ExclusionKind,
    pub entity: String,
    pub reason: String,
}

impl Exclusion {
    fn new(kind: ExclusionKind, entity: impl Into<String>, reason: impl Into<String>) -> Self {
        Self {
            kind,
            entity: entity.into(),
            reason: reason.into(),
        }
    }
}

fn read_to_string(path: &Path) -> Result<String> {
    let mut text = String::new();
    fs::File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|e| Error::io(path, e))?;
    Ok(text)
}

fn parse_error(path: &Path, location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        location: location.into(),
        message: message.into(),
    }
}

pub fn load_authors(path: &Path, format: AuthorFormat) -> Result<Vec<AuthorRecord>> {
    let text = read_to_string(path)?;
    match format {
        AuthorFormat::Csv => parse_authors_csv(&text, path),
        AuthorFormat::Json => parse_authors_json(&text, path),
    }
}

const AUTHOR_COLUMNS: [&str; 5] = ["author_id", "counts", "h_index", "first_year", "last_year"];

/// Parse `LABEL:INT;LABEL:INT;...`.
pub fn parse_counts(field: &str) -> std::result::Result<BTreeMap<String, u64>, String> {
    let field = field.trim();
    if field.is_empty() {
        return Err("empty counts field".into());
    }
    let mut counts = BTreeMap::new();
    for item in field.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let (label, value) = item
            .rsplit_once(':')
            .ok_or_else(|| format!("count `{item}` is not LABEL:INT"))?;
        let label = label.trim();
        if label.is_empty() {
            return Err(format!("count `{item}` has an empty label"));
        }
        let value: i64 = value
            .trim()
            .parse()
            .map_err(|_| format!("count `{item}` is not an integer"))?;
        if value < 0 {
            return Err(format!("negative count for `{label}`"));
        }
        if counts.insert(label.to_string(), value as u64).is_some() {
            return Err(format!("label `{label}` repeated"));
        }
    }
    Ok(counts)
}

pub fn format_counts(counts: &BTreeMap<String, u64>) -> String {
    counts
        .iter()
        .map(|(l, c)| format!("{l}:{c}"))
        .collect::<Vec<_>>()
        .join(";")
}

pub fn parse_authors_csv(text: &str, path: &Path) -> Result<Vec<AuthorRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| parse_error(path, "line 1", e.to_string()))?
        .clone();
    let mut columns = [0usize; 5];
    for (slot, name) in columns.iter_mut().zip(AUTHOR_COLUMNS) {
        *slot = headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| parse_error(path, "line 1", format!("missing column `{name}`")))?;
    }

    let mut seen = HashSet::new();
    let mut records = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_error(path, format!("line {line}"), e.to_string())
        })?;
        let line = row.position().map_or(0, |p| p.line());
        let at = format!("line {line}");
        let field = |i: usize| row.get(columns[i]).unwrap_or("");
        let int = |i: usize| -> Result<i64> {
            field(i).parse().map_err(|_| {
                parse_error(
                    path,
                    at.clone(),
                    format!("`{}` is not an integer ({})", field(i), AUTHOR_COLUMNS[i]),
                )
            })
        };

        let counts = parse_counts(field(1)).map_err(|m| parse_error(path, at.clone(), m))?;
        let h_index = int(2)?;
        if h_index < 0 {
            return Err(parse_error(path, at, "negative h_index"));
        }
        let record = AuthorRecord {
            author_id: field(0).to_string(),
            counts,
            h_index: h_index as u32,
            first_year: int(3)? as i32,
            last_year: int(4)? as i32,
        };
        check_record(&record, &mut seen).map_err(|e| parse_error(path, at, e.to_string()))?;
        records.push(record);
    }
    Ok(records)
}

#[derive(Deserialize)]
struct RawAuthor {
    author_id: String,
    counts: BTreeMap<String, i64>,
    h_index: i64,
    first_year: i32,
    last_year: i32,
}

pub fn parse_authors_json(text: &str, path: &Path) -> Result<Vec<AuthorRecord>> {
    let raw: Vec<RawAuthor> = serde_json::from_str(text).map_err(|e| {
        parse_error(path, format!("line {}", e.line()), e.to_string())
    })?;
    let mut seen = HashSet::new();
    let mut records = Vec::with_capacity(raw.len());
    for (i, r) in raw.into_iter().enumerate() {
        let at = format!("record {}", i + 1);
        if let Some((label, _)) = r.counts.iter().find(|(_, &c)| c < 0) {
            return Err(parse_error(path, at, format!("negative count for `{label}`")));
        }
        if r.h_index < 0 {
            return Err(parse_error(path, at, "negative h_index"));
        }
        let record = AuthorRecord {
            author_id: r.author_id,
            counts: r.counts.into_iter().map(|(l, c)| (l, c as u64)).collect(),
            h_index: r.h_index as u32,
            first_year: r.first_year,
            last_year: r.last_year,
        };
        check_record(&record, &mut seen).map_err(|e| parse_error(path, at, e.to_string()))?;
        records.push(record);
    }
    Ok(records)
}

fn check_record(record: &AuthorRecord, seen: &mut HashSet<String>) -> Result<()> {
    if record.author_id.is_empty() {
        return Err(Error::Invalid("empty author_id".into()));
    }
    record.validate()?;
    if !seen.insert(record.author_id.clone()) {
        return Err(Error::DuplicateAuthor(record.author_id.clone()));
    }
    Ok(())
}

pub fn authors_to_json(records: &[AuthorRecord]) -> Result<String> {
    Ok(serde_json::to_string_pretty(records)?)
}

pub fn authors_to_csv(records: &[AuthorRecord]) -> String {
    let mut out = AUTHOR_COLUMNS.join(",");
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.author_id,
            format_counts(&r.counts),
            r.h_index,
            r.first_year,
            r.last_year
        ));
    }
    out
}

/// Teams read from file, plus the log of members collapsed on the way in.
#[derive(Debug, Clone, Default)]
pub struct TeamFile {
    pub teams: Vec<Team>,
    pub exclusions: Vec<Exclusion>,
}

pub fn load_teams(path: &Path) -> Result<TeamFile> {
    let text = read_to_string(path)?;
    match path.extension().and_then(|e| e.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("json") => parse_teams_json(&text, path),
        Some(ext) if ext.eq_ignore_ascii_case("csv") => parse_teams_csv(&text, path),
        _ => parse_teams_lines(&text, path),
    }
}

fn push_team(
    out: &mut TeamFile,
    paper_id: &str,
    members: impl IntoIterator<Item = String>,
) -> Result<()> {
    let mut seen = HashSet::new();
    let mut kept = Vec::new();
    for m in members {
        if seen.insert(m.clone()) {
            kept.push(m);
        } else {
            out.exclusions.push(Exclusion::new(
                ExclusionKind::DuplicateMember,
                format!("{paper_id}/{m}"),
                "author listed more than once on the paper",
            ));
        }
    }
    let team = Team::new(paper_id, kept)?;
    if team.is_solo() {
        out.exclusions.push(Exclusion::new(
            ExclusionKind::SoloTeam,
            paper_id,
            "single-author paper excluded from dyadic and team analyses",
        ));
    }
    out.teams.push(team);
    Ok(())
}

#[derive(Deserialize)]
struct RawTeam {
    paper_id: String,
    members: Vec<String>,
}

pub fn parse_teams_json(text: &str, path: &Path) -> Result<TeamFile> {
    let raw: Vec<RawTeam> = serde_json::from_str(text).map_err(|e| {
        parse_error(path, format!("line {}", e.line()), e.to_string())
    })?;
    let mut out = TeamFile::default();
    for (i, t) in raw.into_iter().enumerate() {
        push_team(&mut out, &t.paper_id, t.members)
            .map_err(|e| parse_error(path, format!("record {}", i + 1), e.to_string()))?;
    }
    Ok(out)
}

fn split_members(field: &str, sep: char) -> Vec<String> {
    field
        .split(sep)
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect()
}

pub fn parse_teams_csv(text: &str, path: &Path) -> Result<TeamFile> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut out = TeamFile::default();
    for (i, row) in reader.records().enumerate() {
        let row = row.map_err(|e| parse_error(path, format!("line {}", i + 1), e.to_string()))?;
        let line = row.position().map_or(i as u64 + 1, |p| p.line());
        let paper_id = row.get(0).unwrap_or("");
        if i == 0 && paper_id == "paper_id" {
            continue;
        }
        if paper_id.is_empty() {
            return Err(parse_error(path, format!("line {line}"), "empty paper_id"));
        }
        let members = split_members(row.get(1).unwrap_or(""), ';');
        push_team(&mut out, paper_id, members)
            .map_err(|e| parse_error(path, format!("line {line}"), e.to_string()))?;
    }
    Ok(out)
}

pub fn parse_teams_lines(text: &str, path: &Path) -> Result<TeamFile> {
    let mut out = TeamFile::default();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let at = format!("line {}", i + 1);
        let (paper_id, members) = line
            .split_once(':')
            .ok_or_else(|| parse_error(path, at.clone(), "expected `paper_id: member,member`"))?;
        let paper_id = paper_id.trim();
        if paper_id.is_empty() {
            return Err(parse_error(path, at, "empty paper_id"));
        }
        push_team(&mut out, paper_id, split_members(members, ','))
            .map_err(|e| parse_error(path, at, e.to_string()))?;
    }
    Ok(out)
}

pub fn teams_to_json(teams: &[Team]) -> Result<String> {
    Ok(serde_json::to_string_pretty(teams)?)
}

pub fn teams_to_csv(teams: &[Team]) -> String {
    let mut out = String::from("paper_id,members\n");
    for t in teams {
        out.push_str(&t.paper_id);
        out.push(',');
        out.push_str(&t.members.join(";"));
        out.push('\n');
    }
    out
}

/// Newline-delimited labels; order fixes the index.
pub fn load_index(path: &Path) -> Result<DisciplineIndex> {
    let text = read_to_string(path)?;
    let labels: Vec<&str> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .collect();
    DisciplineIndex::new(labels).map_err(|e| parse_error(path, "index", e.to_string()))
}

/// Everything needed for analysis, with dangling references resolved.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub records: Vec<AuthorRecord>,
    pub teams: Vec<Team>,
    pub index: DisciplineIndex,
    pub exclusions: Vec<Exclusion>,
    /// Authors skipped by individual-entropy statistics.
    pub single_field: BTreeSet<String>,
}

impl Dataset {
    /// Combine parsed records and teams. Team members without a record are
    /// dropped and logged; teams left empty are dropped and logged.
    pub fn assemble(
        records: Vec<AuthorRecord>,
        team_file: TeamFile,
        index: Option<DisciplineIndex>,
    ) -> Result<Self> {
        let mut ids = HashSet::with_capacity(records.len());
        for r in &records {
            r.validate()?;
            if !ids.insert(r.author_id.as_str()) {
                return Err(Error::DuplicateAuthor(r.author_id.clone()));
            }
        }
        let index = match index {
            Some(index) => index,
            None => DisciplineIndex::from_records(&records)?,
        };
        for r in &records {
            if let Some(label) = r.counts.keys().find(|l| index.position(l).is_none()) {
                return Err(Error::UnknownDiscipline(label.clone()));
            }
        }

        let TeamFile {
            teams: raw_teams,
            mut exclusions,
        } = team_file;
        let mut teams = Vec::with_capacity(raw_teams.len());
        for team in raw_teams {
            let (kept, dropped): (Vec<String>, Vec<String>) = team
                .members
                .into_iter()
                .partition(|m| ids.contains(m.as_str()));
            for m in dropped {
                exclusions.push(Exclusion::new(
                    ExclusionKind::DanglingMember,
                    format!("{}/{m}", team.paper_id),
                    "team member has no author record",
                ));
            }
            if kept.is_empty() {
                exclusions.push(Exclusion::new(
                    ExclusionKind::EmptyTeam,
                    team.paper_id,
                    "no members with author records",
                ));
                continue;
            }
            teams.push(Team {
                paper_id: team.paper_id,
                members: kept,
            });
        }

        Ok(Self {
            records,
            teams,
            index,
            exclusions,
            single_field: BTreeSet::new(),
        })
    }

    pub fn load(
        authors: &Path,
        teams: &Path,
        index: Option<&Path>,
    ) -> Result<Self> {
        let records = load_authors(authors, AuthorFormat::from_path(authors))?;
        let team_file = load_teams(teams)?;
        let index = index.map(load_index).transpose()?;
        Self::assemble(records, team_file, index)
    }

    pub fn is_single_field(&self, author_id: &str) -> bool {
        self.single_field.contains(author_id)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SingleFieldRule {
    /// Keep the author everywhere except individual-entropy statistics.
    #[default]
    Flag,
    /// Drop the author from the dataset, including the graph.
    Remove,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExclusionConfig {
    pub single_field: SingleFieldRule,
}

pub fn apply_exclusions(mut dataset: Dataset, rules: ExclusionConfig) -> Dataset {
    let single: Vec<String> = dataset
        .records
        .iter()
        .filter(|r| r.is_single_field())
        .map(|r| r.author_id.clone())
        .collect();

    match rules.single_field {
        SingleFieldRule::Flag => {
            for id in single {
                if dataset.single_field.insert(id.clone()) {
                    dataset.exclusions.push(Exclusion::new(
                        ExclusionKind::SingleField,
                        id,
                        "one publication field; individual entropy is trivially 0",
                    ));
                }
            }
        }
        SingleFieldRule::Remove => {
            let removed: HashSet<String> = single.into_iter().collect();
            dataset.records.retain(|r| !removed.contains(&r.author_id));
            let mut teams = Vec::with_capacity(dataset.teams.len());
            for mut team in std::mem::take(&mut dataset.teams) {
                team.members.retain(|m| !removed.contains(m));
                if team.members.is_empty() {
                    dataset.exclusions.push(Exclusion::new(
                        ExclusionKind::EmptyTeam,
                        team.paper_id,
                        "all members removed as single-field authors",
                    ));
                } else {
                    teams.push(team);
                }
            }
            dataset.teams = teams;
            let mut removed: Vec<String> = removed.into_iter().collect();
            removed.sort();
            for id in removed {
                dataset.exclusions.push(Exclusion::new(
                    ExclusionKind::RemovedAuthor,
                    id,
                    "single publication field",
                ));
            }
        }
    }
    dataset
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build_graph;

    fn p() -> &'static Path {
        Path::new("test")
    }

    #[test]
    fn csv_row_parses() {
        let text = "author_id,counts,h_index,first_year,last_year\na1,CS:50;Math:30;Soc:20,12,2005,2019\n";
        let rs = parse_authors_csv(text, p()).unwrap();
        assert_eq!(rs.len(), 1);
        let r = &rs[0];
        assert_eq!(r.author_id, "a1");
        assert_eq!(r.counts["CS"], 50);
        assert_eq!(r.counts["Math"], 30);
        assert_eq!(r.counts["Soc"], 20);
        assert_eq!((r.h_index, r.first_year, r.last_year), (12, 2005, 2019));
    }

    #[test]
    fn csv_empty_counts_rejected_with_line() {
        let text = "author_id,counts,h_index,first_year,last_year\na1,CS:1,1,2000,2001\na2,,3,2000,2001\n";
        let err = parse_authors_csv(text, p()).unwrap_err().to_string();
        assert!(err.contains("line 3"), "{err}");
        assert!(err.contains("empty counts"), "{err}");
    }

    #[test]
    fn csv_negative_and_duplicate_rejected() {
        let text = "author_id,counts,h_index,first_year,last_year\na1,CS:-1,1,2000,2001\n";
        assert!(parse_authors_csv(text, p()).unwrap_err().to_string().contains("negative"));
        let text = "author_id,counts,h_index,first_year,last_year\na1,CS:1,1,2000,2001\na1,CS:2,1,2000,2001\n";
        assert!(parse_authors_csv(text, p()).unwrap_err().to_string().contains("duplicate"));
    }

    #[test]
    fn json_ignores_extra_keys() {
        let text = r#"[{"author_id":"a1","counts":{"CS":3},"h_index":2,"first_year":2001,"last_year":2003,"orcid":"x"}]"#;
        let rs = parse_authors_json(text, p()).unwrap();
        assert_eq!(rs[0].counts["CS"], 3);
    }

    #[test]
    fn json_round_trip_is_value_equal() {
        let text = r#"[{"counts":{"Math":1,"CS":3},"author_id":"a1","h_index":2,"first_year":2001,"last_year":2003}]"#;
        let rs = parse_authors_json(text, p()).unwrap();
        let out = authors_to_json(&rs).unwrap();
        let a: serde_json::Value = serde_json::from_str(text).unwrap();
        let b: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn team_lines() {
        let tf = parse_teams_lines("p1: a1,a2,a3\np2: a1,a1,a2\np3: a9\n", p()).unwrap();
        assert_eq!(tf.teams[0].members, ["a1", "a2", "a3"]);
        assert_eq!(tf.teams[1].members, ["a1", "a2"]);
        assert_eq!(tf.teams[2].members, ["a9"]);
        assert!(tf.teams[2].is_solo());
        let kinds: Vec<_> = tf.exclusions.iter().map(|e| e.kind).collect();
        assert_eq!(kinds, [ExclusionKind::DuplicateMember, ExclusionKind::SoloTeam]);
    }

    #[test]
    fn empty_team_rejected_with_paper_id() {
        let err = parse_teams_lines("p7:\n", p()).unwrap_err().to_string();
        assert!(err.contains("p7"), "{err}");
        let err = parse_teams_csv("paper_id,members\np8,\n", p()).unwrap_err().to_string();
        assert!(err.contains("p8"), "{err}");
    }

    #[test]
    fn team_csv_and_json() {
        let tf = parse_teams_csv("paper_id,members\np1,a;b;c\n", p()).unwrap();
        assert_eq!(tf.teams[0].members, ["a", "b", "c"]);
        let tf = parse_teams_json(r#"[{"paper_id":"p1","members":["a","b"]}]"#, p()).unwrap();
        assert_eq!(tf.teams[0].paper_id, "p1");
    }

    fn rec(id: &str, counts: &[(&str, u64)]) -> AuthorRecord {
        AuthorRecord {
            author_id: id.into(),
            counts: counts.iter().map(|(l, c)| (l.to_string(), *c)).collect(),
            h_index: 1,
            first_year: 2000,
            last_year: 2010,
        }
    }

    #[test]
    fn dangling_members_are_dropped_and_logged() {
        let tf = parse_teams_lines("p1: a,ghost\np2: ghost\n", p()).unwrap();
        let ds = Dataset::assemble(vec![rec("a", &[("CS", 1), ("Edu", 1)])], tf, None).unwrap();
        assert_eq!(ds.teams.len(), 1);
        assert_eq!(ds.teams[0].members, ["a"]);
        assert!(ds
            .exclusions
            .iter()
            .any(|e| e.kind == ExclusionKind::DanglingMember && e.entity == "p1/ghost"));
        assert!(ds
            .exclusions
            .iter()
            .any(|e| e.kind == ExclusionKind::EmptyTeam && e.entity == "p2"));
    }

    #[test]
    fn single_field_flagging() {
        let a = rec("a", &[("CS", 10)]);
        let b = rec("b", &[("CS", 10), ("Edu", 1)]);
        assert!(a.is_single_field());
        assert!(!b.is_single_field());
    }

    #[test]
    fn exclusions_do_not_touch_topology() {
        let records: Vec<_> = (0..100)
            .map(|i| {
                if i % 40 == 0 {
                    rec(&format!("a{i}"), &[("CS", 5)])
                } else {
                    rec(&format!("a{i}"), &[("CS", 5), ("Edu", 2)])
                }
            })
            .collect();
        let teams: Vec<Team> = (0..99)
            .map(|i| Team::new(format!("p{i}"), vec![format!("a{i}"), format!("a{}", i + 1)]).unwrap())
            .collect();
        let tf = TeamFile {
            teams,
            exclusions: vec![],
        };
        let ds = Dataset::assemble(records, tf, None).unwrap();
        let before = build_graph(&ds.records, &ds.teams).unwrap();
        let ds = apply_exclusions(ds, ExclusionConfig::default());
        assert_eq!(ds.exclusions.len(), 3);
        assert_eq!(ds.single_field.len(), 3);
        let after = build_graph(&ds.records, &ds.teams).unwrap();
        assert_eq!(after.node_count(), 100);
        assert_eq!(after.edges().collect::<Vec<_>>(), before.edges().collect::<Vec<_>>());
    }

    #[test]
    fn remove_rule_drops_authors() {
        let records = vec![rec("a", &[("CS", 5)]), rec("b", &[("CS", 1), ("Edu", 1)])];
        let tf = parse_teams_lines("p1: a,b\np2: a\n", p()).unwrap();
        let ds = Dataset::assemble(records, tf, None).unwrap();
        let ds = apply_exclusions(
            ds,
            ExclusionConfig {
                single_field: SingleFieldRule::Remove,
            },
        );
        assert_eq!(ds.records.len(), 1);
        assert_eq!(ds.teams.len(), 1);
        assert_eq!(ds.teams[0].members, ["b"]);
    }

    #[test]
    fn explicit_index_must_cover_labels() {
        let idx = DisciplineIndex::new(["CS"]).unwrap();
        let err = Dataset::assemble(vec![rec("a", &[("Bio", 1)])], TeamFile::default(), Some(idx))
            .unwrap_err();
        assert!(err.to_string().contains("Bio"));
    }
}
