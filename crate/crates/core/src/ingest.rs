//! Loading, validation and indexing of publication records.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// One publication.
///
/// `c10` is the number of citations the paper received within ten years of
/// publication. Reference ids are kept sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaperRecord {
    pub paper_id: String,
    pub year: i32,
    pub author_ids: Vec<String>,
    pub reference_ids: Vec<String>,
    pub c10: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationConfig {
    pub min_year: i32,
    pub max_year: i32,
    /// Fail on the first invalid record instead of collecting diagnostics.
    pub strict: bool,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        Self {
            min_year: 1850,
            max_year: 2035,
            strict: false,
        }
    }
}

/// Why a record was left out of the corpus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rejection {
    pub line: usize,
    pub paper_id: Option<String>,
    pub field: String,
    pub reason: String,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}", self.line)?;
        if let Some(id) = &self.paper_id {
            write!(f, " (paper `{id}`)")?;
        }
        write!(f, ": field `{}`: {}", self.field, self.reason)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    Jsonl,
    Csv,
}

impl InputFormat {
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => InputFormat::Csv,
            _ => InputFormat::Jsonl,
        }
    }
}

#[derive(Debug)]
pub struct LoadReport {
    pub corpus: Corpus,
    pub rejections: Vec<Rejection>,
}

/// Papers indexed by id and by author.
///
/// Immutable once built. Papers are stored sorted by `paper_id`, so the
/// position of a record never depends on input order.
#[derive(Debug, Clone)]
pub struct Corpus {
    papers: Vec<PaperRecord>,
    by_id: HashMap<String, usize>,
    author_index: BTreeMap<String, Vec<usize>>,
}

impl Corpus {
    pub fn from_records(mut papers: Vec<PaperRecord>) -> Result<Self> {
        papers.sort_by(|a, b| a.paper_id.cmp(&b.paper_id));
        for pair in papers.windows(2) {
            if pair[0].paper_id == pair[1].paper_id {
                return Err(Error::DuplicatePaper(pair[0].paper_id.clone()));
            }
        }
        let by_id = papers
            .iter()
            .enumerate()
            .map(|(i, p)| (p.paper_id.clone(), i))
            .collect();
        let mut author_index: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for (i, p) in papers.iter().enumerate() {
            for a in &p.author_ids {
                author_index.entry(a.clone()).or_default().push(i);
            }
        }
        // index order is paper_id order, so (year, index) sorts by (year, paper_id)
        for list in author_index.values_mut() {
            list.sort_by_key(|&i| (papers[i].year, i));
        }
        Ok(Self {
            papers,
            by_id,
            author_index,
        })
    }

    pub fn papers(&self) -> &[PaperRecord] {
        &self.papers
    }

    pub fn paper(&self, index: usize) -> &PaperRecord {
        &self.papers[index]
    }

    pub fn index_of(&self, paper_id: &str) -> Option<usize> {
        self.by_id.get(paper_id).copied()
    }

    pub fn get(&self, paper_id: &str) -> Option<&PaperRecord> {
        self.index_of(paper_id).map(|i| &self.papers[i])
    }

    pub fn len(&self) -> usize {
        self.papers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.papers.is_empty()
    }

    pub fn n_authors(&self) -> usize {
        self.author_index.len()
    }

    /// Author ids in ascending order.
    pub fn authors(&self) -> impl Iterator<Item = &str> {
        self.author_index.keys().map(String::as_str)
    }

    /// The author's papers as corpus indices, ordered by (year, paper_id).
    pub fn author_papers(&self, author: &str) -> Option<&[usize]> {
        self.author_index.get(author).map(Vec::as_slice)
    }

    pub fn author_index(&self) -> &BTreeMap<String, Vec<usize>> {
        &self.author_index
    }

    pub fn write_jsonl<W: Write>(&self, mut out: W) -> Result<()> {
        for p in &self.papers {
            serde_json::to_writer(&mut out, p)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSONL serialization.
    pub fn checksum(&self) -> String {
        let mut buf = Vec::new();
        self.write_jsonl(&mut buf).expect("writing to memory cannot fail");
        hex::encode(Sha256::digest(&buf))
    }
}

/// Load records from a stream in the given format.
pub fn load_corpus<R: Read>(source: R, format: InputFormat, config: &ValidationConfig) -> Result<LoadReport> {
    let mut records = Vec::new();
    let mut rejections = Vec::new();
    match format {
        InputFormat::Jsonl => {
            let reader = BufReader::new(source);
            for (i, line) in reader.lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                accept(
                    parse_json_line(i + 1, &line, config),
                    config,
                    &mut records,
                    &mut rejections,
                )?;
            }
        }
        InputFormat::Csv => {
            let mut reader = csv::ReaderBuilder::new().from_reader(source);
            let headers = reader.headers()?.clone();
            let column = |name: &str| headers.iter().position(|h| h.trim() == name);
            let cols = CsvColumns {
                paper_id: column("paper_id"),
                year: column("year"),
                author_ids: column("author_ids"),
                reference_ids: column("reference_ids"),
                c10: column("c10"),
            };
            for row in reader.records() {
                let row = row?;
                let line = row.position().map_or(0, |p| p.line() as usize);
                accept(
                    parse_csv_row(line, &row, &cols, config),
                    config,
                    &mut records,
                    &mut rejections,
                )?;
            }
        }
    }
    let corpus = Corpus::from_records(records)?;
    Ok(LoadReport { corpus, rejections })
}

pub fn load_corpus_path(path: &Path, config: &ValidationConfig) -> Result<LoadReport> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    load_corpus(file, InputFormat::from_path(path), config)
}

fn accept(
    parsed: std::result::Result<PaperRecord, Rejection>,
    config: &ValidationConfig,
    records: &mut Vec<PaperRecord>,
    rejections: &mut Vec<Rejection>,
) -> Result<()> {
    match parsed {
        Ok(r) => records.push(r),
        Err(rej) if config.strict => {
            return Err(Error::MalformedRecord {
                line: rej.line,
                field: rej.field,
                message: rej.reason,
            })
        }
        Err(rej) => rejections.push(rej),
    }
    Ok(())
}

/// Number of citation events falling in the ten years after publication
/// (publication year through publication year + 10, inclusive).
pub fn c10_from_citations(pub_year: i32, citing_years: impl IntoIterator<Item = i32>) -> u32 {
    citing_years
        .into_iter()
        .filter(|&y| y >= pub_year && y <= pub_year + 10)
        .count() as u32
}

struct RecordBuilder<'a> {
    line: usize,
    paper_id: Option<String>,
    config: &'a ValidationConfig,
}

impl RecordBuilder<'_> {
    fn reject(&self, field: &str, reason: impl Into<String>) -> Rejection {
        Rejection {
            line: self.line,
            paper_id: self.paper_id.clone(),
            field: field.to_string(),
            reason: reason.into(),
        }
    }

    fn finish(
        &self,
        year: i64,
        author_ids: Vec<String>,
        mut reference_ids: Vec<String>,
        c10: i64,
    ) -> std::result::Result<PaperRecord, Rejection> {
        let paper_id = self.paper_id.clone().unwrap_or_default();
        if paper_id.is_empty() {
            return Err(self.reject("paper_id", "empty paper id"));
        }
        if year < self.config.min_year as i64 || year > self.config.max_year as i64 {
            return Err(self.reject(
                "year",
                format!(
                    "year {year} outside [{}, {}]",
                    self.config.min_year, self.config.max_year
                ),
            ));
        }
        if author_ids.is_empty() {
            return Err(self.reject("author_ids", "empty author list"));
        }
        let mut seen = HashSet::new();
        for a in &author_ids {
            if a.is_empty() {
                return Err(self.reject("author_ids", "empty author id"));
            }
            if !seen.insert(a.as_str()) {
                return Err(self.reject("author_ids", format!("duplicate author `{a}`")));
            }
        }
        if c10 < 0 {
            return Err(self.reject("c10", format!("negative citation count {c10}")));
        }
        if c10 > u32::MAX as i64 {
            return Err(self.reject("c10", "citation count out of range"));
        }
        reference_ids.retain(|r| !r.is_empty());
        reference_ids.sort();
        reference_ids.dedup();
        Ok(PaperRecord {
            paper_id,
            year: year as i32,
            author_ids,
            reference_ids,
            c10: c10 as u32,
        })
    }
}

fn parse_json_line(line: usize, text: &str, config: &ValidationConfig) -> std::result::Result<PaperRecord, Rejection> {
    let mut b = RecordBuilder {
        line,
        paper_id: None,
        config,
    };
    let value: Value = serde_json::from_str(text).map_err(|e| b.reject("<record>", e.to_string()))?;
    let obj = value
        .as_object()
        .ok_or_else(|| b.reject("<record>", "expected a JSON object"))?;

    match obj.get("paper_id") {
        Some(Value::String(s)) => b.paper_id = Some(s.clone()),
        Some(_) => return Err(b.reject("paper_id", "expected a string")),
        None => return Err(b.reject("paper_id", "missing")),
    }
    let year = match obj.get("year") {
        Some(v) => v.as_i64().ok_or_else(|| b.reject("year", "expected an integer"))?,
        None => return Err(b.reject("year", "missing")),
    };
    let author_ids = match obj.get("author_ids") {
        Some(v) => string_array(v).ok_or_else(|| b.reject("author_ids", "expected an array of strings"))?,
        None => return Err(b.reject("author_ids", "missing")),
    };
    let reference_ids = match obj.get("reference_ids") {
        Some(Value::Null) | None => Vec::new(),
        Some(v) => string_array(v).ok_or_else(|| b.reject("reference_ids", "expected an array of strings"))?,
    };
    let c10 = match (obj.get("c10"), obj.get("citations")) {
        (Some(v), _) if !v.is_null() => v.as_i64().ok_or_else(|| b.reject("c10", "expected an integer"))?,
        (_, Some(events)) => {
            let years = citation_years(events).ok_or_else(|| {
                b.reject(
                    "citations",
                    "expected an array of {citing_paper_id, year} objects or [id, year] pairs",
                )
            })?;
            c10_from_citations(year as i32, years) as i64
        }
        _ => return Err(b.reject("c10", "missing (and no `citations` list to derive it from)")),
    };
    b.finish(year, author_ids, reference_ids, c10)
}

fn string_array(v: &Value) -> Option<Vec<String>> {
    v.as_array()?.iter().map(|x| x.as_str().map(str::to_string)).collect()
}

fn citation_years(v: &Value) -> Option<Vec<i32>> {
    v.as_array()?
        .iter()
        .map(|e| match e {
            Value::Object(o) => o.get("year")?.as_i64().map(|y| y as i32),
            Value::Array(pair) if pair.len() == 2 => pair[1].as_i64().map(|y| y as i32),
            _ => None,
        })
        .collect()
}

struct CsvColumns {
    paper_id: Option<usize>,
    year: Option<usize>,
    author_ids: Option<usize>,
    reference_ids: Option<usize>,
    c10: Option<usize>,
}

fn parse_csv_row(
    line: usize,
    row: &csv::StringRecord,
    cols: &CsvColumns,
    config: &ValidationConfig,
) -> std::result::Result<PaperRecord, Rejection> {
    let mut b = RecordBuilder {
        line,
        paper_id: None,
        config,
    };
    let get = |col: Option<usize>| col.and_then(|c| row.get(c)).map(str::trim);
    let paper_id = get(cols.paper_id).ok_or_else(|| b.reject("paper_id", "missing column"))?;
    b.paper_id = Some(paper_id.to_string());
    let year = get(cols.year)
        .ok_or_else(|| b.reject("year", "missing column"))?
        .parse::<i64>()
        .map_err(|e| b.reject("year", e.to_string()))?;
    let split = |s: &str| -> Vec<String> {
        s.split(';')
            .map(str::trim)
            .filter(|x| !x.is_empty())
            .map(str::to_string)
            .collect()
    };
    let authors = split(get(cols.author_ids).ok_or_else(|| b.reject("author_ids", "missing column"))?);
    let refs = get(cols.reference_ids).map(split).unwrap_or_default();
    let c10 = get(cols.c10)
        .ok_or_else(|| b.reject("c10", "missing column"))?
        .parse::<i64>()
        .map_err(|e| b.reject("c10", e.to_string()))?;
    b.finish(year, authors, refs, c10)
}

/// Productivity and impact summary of one author.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScientistProfile {
    pub author_id: String,
    pub paper_count: usize,
    pub mean_c10: f64,
    pub career_start_year: i32,
    pub career_years: i32,
}

/// Authors with at least `min_papers` papers, sorted by id.
pub fn select_focal(corpus: &Corpus, min_papers: usize) -> Vec<String> {
    corpus
        .author_index()
        .iter()
        .filter(|(_, papers)| papers.len() >= min_papers)
        .map(|(a, _)| a.clone())
        .collect()
}

pub fn profile(corpus: &Corpus, author: &str) -> Result<ScientistProfile> {
    let papers = corpus
        .author_papers(author)
        .ok_or_else(|| Error::UnknownAuthor(author.to_string()))?;
    Ok(profile_of(corpus, author, papers))
}

fn profile_of(corpus: &Corpus, author: &str, papers: &[usize]) -> ScientistProfile {
    let total: u64 = papers.iter().map(|&i| corpus.paper(i).c10 as u64).sum();
    let first = corpus.paper(papers[0]).year;
    let last = corpus.paper(*papers.last().expect("author lists are non-empty")).year;
    ScientistProfile {
        author_id: author.to_string(),
        paper_count: papers.len(),
        mean_c10: total as f64 / papers.len() as f64,
        career_start_year: first,
        career_years: last - first,
    }
}

/// Profiles of every author, sorted by id.
pub fn all_profiles(corpus: &Corpus) -> Vec<ScientistProfile> {
    corpus
        .author_index()
        .iter()
        .map(|(a, papers)| profile_of(corpus, a, papers))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(id: &str, year: i32, authors: &[&str], refs: &[&str], c10: u32) -> PaperRecord {
        PaperRecord {
            paper_id: id.into(),
            year,
            author_ids: authors.iter().map(|s| s.to_string()).collect(),
            reference_ids: refs.iter().map(|s| s.to_string()).collect(),
            c10,
        }
    }

    fn load_str(text: &str) -> LoadReport {
        load_corpus(text.as_bytes(), InputFormat::Jsonl, &ValidationConfig::default()).unwrap()
    }

    #[test]
    fn three_records_two_authors() {
        let text = r#"{"paper_id":"p1","year":2000,"author_ids":["a","b"],"reference_ids":["r1"],"c10":3}
{"paper_id":"p2","year":2001,"author_ids":["a"],"reference_ids":[],"c10":0}
{"paper_id":"p3","year":1999,"author_ids":["b","a"],"reference_ids":["r1","r2"],"c10":1}
"#;
        let report = load_str(text);
        assert!(report.rejections.is_empty());
        let c = report.corpus;
        assert_eq!(c.n_authors(), 2);
        let a: Vec<&str> = c
            .author_papers("a")
            .unwrap()
            .iter()
            .map(|&i| c.paper(i).paper_id.as_str())
            .collect();
        assert_eq!(a, ["p3", "p1", "p2"]);
    }

    #[test]
    fn empty_author_list_is_rejected_with_diagnostic() {
        let text = r#"{"paper_id":"p1","year":2000,"author_ids":[],"reference_ids":[],"c10":3}
{"paper_id":"p2","year":2000,"author_ids":["a"],"reference_ids":[],"c10":3}"#;
        let report = load_str(text);
        assert_eq!(report.corpus.len(), 1);
        assert_eq!(report.rejections.len(), 1);
        let r = &report.rejections[0];
        assert_eq!((r.line, r.field.as_str()), (1, "author_ids"));
        assert_eq!(r.paper_id.as_deref(), Some("p1"));
    }

    #[test]
    fn validation_rules() {
        let text = r#"{"paper_id":"p1","year":1700,"author_ids":["a"],"c10":0}
{"paper_id":"p2","year":2000,"author_ids":["a","a"],"c10":0}
{"paper_id":"p3","year":2000,"author_ids":["a"],"c10":-1}
{"paper_id":"p4","year":"x","author_ids":["a"],"c10":0}
not json
{"paper_id":"p5","year":2000,"author_ids":["a"]}"#;
        let report = load_str(text);
        assert!(report.corpus.is_empty());
        let fields: Vec<(usize, &str)> = report.rejections.iter().map(|r| (r.line, r.field.as_str())).collect();
        assert_eq!(
            fields,
            [
                (1, "year"),
                (2, "author_ids"),
                (3, "c10"),
                (4, "year"),
                (5, "<record>"),
                (6, "c10")
            ]
        );
    }

    #[test]
    fn strict_mode_fails_with_line_and_field() {
        let text = "{\"paper_id\":\"p1\",\"year\":2000,\"author_ids\":[\"a\"],\"c10\":0}\n{\"paper_id\":\"p2\",\"year\":2000,\"author_ids\":[],\"c10\":1}";
        let cfg = ValidationConfig {
            strict: true,
            ..Default::default()
        };
        match load_corpus(text.as_bytes(), InputFormat::Jsonl, &cfg) {
            Err(Error::MalformedRecord { line, field, .. }) => assert_eq!((line, field.as_str()), (2, "author_ids")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn duplicate_paper_id_is_an_error() {
        let text = r#"{"paper_id":"p1","year":2000,"author_ids":["a"],"c10":0}
{"paper_id":"p1","year":2001,"author_ids":["b"],"c10":0}"#;
        let err = load_corpus(text.as_bytes(), InputFormat::Jsonl, &ValidationConfig::default()).unwrap_err();
        assert!(matches!(err, Error::DuplicatePaper(id) if id == "p1"));
    }

    #[test]
    fn c10_from_citation_events() {
        let text = r#"{"paper_id":"p1","year":2000,"author_ids":["a"],"citations":[{"citing_paper_id":"x","year":2001},["y",2010],["z",2011],["w",1999]]}"#;
        let report = load_str(text);
        assert_eq!(report.corpus.papers()[0].c10, 2);
    }

    #[test]
    fn csv_adapter() {
        let text = "paper_id,year,author_ids,reference_ids,c10\np1,2000,a;b,r1;r2,4\np2,2001,b,,0\n";
        let report = load_corpus(text.as_bytes(), InputFormat::Csv, &ValidationConfig::default()).unwrap();
        assert!(report.rejections.is_empty());
        let p1 = report.corpus.get("p1").unwrap();
        assert_eq!(p1.author_ids, ["a", "b"]);
        assert_eq!(p1.reference_ids, ["r1", "r2"]);
        assert!(report.corpus.get("p2").unwrap().reference_ids.is_empty());
    }

    #[test]
    fn focal_selection_threshold() {
        let mut recs = Vec::new();
        let mut n = 0;
        for (author, count) in [("a", 60), ("b", 49), ("c", 50)] {
            for _ in 0..count {
                recs.push(rec(&format!("p{n}"), 2000, &[author], &[], 0));
                n += 1;
            }
        }
        let c = Corpus::from_records(recs).unwrap();
        assert_eq!(select_focal(&c, 50), ["a", "c"]);
        assert_eq!(select_focal(&c, 1), ["a", "b", "c"]);
    }

    #[test]
    fn profile_fields() {
        let c = Corpus::from_records(vec![
            rec("p1", 1990, &["a"], &[], 0),
            rec("p2", 1995, &["a", "b"], &[], 10),
            rec("p3", 1993, &["a"], &[], 20),
        ])
        .unwrap();
        let p = profile(&c, "a").unwrap();
        assert_eq!(p.paper_count, 3);
        assert_eq!(p.mean_c10, 10.0);
        assert_eq!((p.career_start_year, p.career_years), (1990, 5));
        let b = profile(&c, "b").unwrap();
        assert_eq!((b.career_start_year, b.career_years), (1995, 0));
        assert!(matches!(profile(&c, "zz"), Err(Error::UnknownAuthor(_))));
    }

    #[test]
    fn same_year_ties_break_on_paper_id() {
        let c = Corpus::from_records(vec![
            rec("z", 2000, &["a"], &[], 0),
            rec("m", 2000, &["a"], &[], 0),
            rec("b", 2001, &["a"], &[], 0),
        ])
        .unwrap();
        let ids: Vec<&str> = c
            .author_papers("a")
            .unwrap()
            .iter()
            .map(|&i| c.paper(i).paper_id.as_str())
            .collect();
        assert_eq!(ids, ["m", "z", "b"]);
    }
}
