//! The record store: a single writer, many readers, optional persistence.
//!
//! Each record carries a version that starts at 1 and increases on every
//! change; writers must name the version they edited. Versions live in
//! memory only and restart at 1 when the store is reopened.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::{Arc, RwLock, RwLockReadGuard, RwLockWriteGuard};

use rasmi_core::corpus::{
    check_transition, compute_stats, extract_dictionary, load_corpus, validate_record, write_corpus, CorpusError,
    CorpusRecord, CorpusStats, Issue, Source, Status, TransitionError,
};
use rasmi_core::suggest::{AlignmentHistory, SnapshotError};
use rasmi_core::Lexicon;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const CORPUS_FILE: &str = "corpus.jsonl";
pub const HISTORY_FILE: &str = "history.snapshot";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordView {
    #[serde(flatten)]
    pub record: CorpusRecord,
    pub version: u64,
}

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("no record with id `{0}`")]
    NotFound(String),
    #[error("a record with id `{0}` already exists")]
    Duplicate(String),
    #[error("record `{id}` is at version {}, not {expected}", current.version)]
    VersionConflict { id: String, expected: u64, current: Box<RecordView> },
    #[error("record has validation errors")]
    Invalid(Vec<Issue>),
    #[error(transparent)]
    Transition(#[from] TransitionError),
    #[error("stored record `{id}` is invalid: {}", issues.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Stored { id: String, issues: Vec<Issue> },
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Snapshot(#[from] SnapshotError),
}

/// Query filters; `q` is a substring match over both sentences.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RecordFilter {
    pub source: Option<Source>,
    pub status: Option<Status>,
    pub annotator: Option<String>,
    pub q: Option<String>,
}

impl RecordFilter {
    pub fn matches(&self, r: &CorpusRecord) -> bool {
        self.source.is_none_or(|s| r.source == s)
            && self.status.is_none_or(|s| r.status == s)
            && self.annotator.as_ref().is_none_or(|a| &r.annotator == a)
            && self.q.as_ref().is_none_or(|q| r.informal.contains(q.as_str()) || r.formal.contains(q.as_str()))
    }
}

fn in_history(r: &CorpusRecord) -> bool {
    matches!(r.status, Status::Reviewed | Status::Confirmed)
}

pub struct Store {
    records: RwLock<BTreeMap<String, RecordView>>,
    history: RwLock<Arc<AlignmentHistory>>,
    dir: Option<PathBuf>,
}

impl Default for Store {
    fn default() -> Self {
        Self::in_memory()
    }
}

impl Store {
    pub fn in_memory() -> Self {
        Store { records: RwLock::default(), history: RwLock::default(), dir: None }
    }

    /// Opens (or creates) a store persisted under `dir`. Stored records must
    /// validate without errors. The history snapshot is loaded when present
    /// and rebuilt from the records otherwise.
    pub fn open(dir: impl AsRef<Path>) -> Result<Self, StoreError> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(&dir)?;
        let corpus = dir.join(CORPUS_FILE);
        let records = if corpus.exists() { load_corpus(&corpus)? } else { Vec::new() };
        let mut map = BTreeMap::new();
        for r in records {
            let issues: Vec<Issue> = validate_record(&r).into_iter().filter(Issue::is_error).collect();
            if !issues.is_empty() {
                return Err(StoreError::Stored { id: r.id, issues });
            }
            if map.contains_key(&r.id) {
                return Err(StoreError::Duplicate(r.id));
            }
            map.insert(r.id.clone(), RecordView { record: r, version: 1 });
        }
        let snapshot = dir.join(HISTORY_FILE);
        let history = match AlignmentHistory::load(&snapshot) {
            Ok(h) => h,
            Err(e) => {
                if snapshot.exists() {
                    log::warn!("{}: {e}; rebuilding", snapshot.display());
                }
                AlignmentHistory::rebuild(map.values().map(|v| &v.record))
            }
        };
        Ok(Store { records: RwLock::new(map), history: RwLock::new(Arc::new(history)), dir: Some(dir) })
    }

    fn read(&self) -> RwLockReadGuard<'_, BTreeMap<String, RecordView>> {
        self.records.read().unwrap_or_else(|e| e.into_inner())
    }

    fn write(&self) -> RwLockWriteGuard<'_, BTreeMap<String, RecordView>> {
        self.records.write().unwrap_or_else(|e| e.into_inner())
    }

    /// The current history. Callers keep a consistent snapshot for as long
    /// as they hold the `Arc`.
    pub fn history(&self) -> Arc<AlignmentHistory> {
        self.history.read().unwrap_or_else(|e| e.into_inner()).clone()
    }

    fn swap_history(&self, h: AlignmentHistory) -> Result<(), StoreError> {
        if let Some(dir) = &self.dir {
            let tmp = dir.join(format!("{HISTORY_FILE}.tmp"));
            h.save(&tmp)?;
            fs::rename(tmp, dir.join(HISTORY_FILE))?;
        }
        *self.history.write().unwrap_or_else(|e| e.into_inner()) = Arc::new(h);
        Ok(())
    }

    fn persist(&self, records: &BTreeMap<String, RecordView>) -> Result<(), StoreError> {
        let Some(dir) = &self.dir else { return Ok(()) };
        let tmp = dir.join(format!("{CORPUS_FILE}.tmp"));
        write_corpus(fs::File::create(&tmp)?, records.values().map(|v| &v.record))?;
        fs::rename(tmp, dir.join(CORPUS_FILE))?;
        Ok(())
    }

    fn rebuild_history(&self, records: &BTreeMap<String, RecordView>) -> Result<(), StoreError> {
        self.swap_history(AlignmentHistory::rebuild(records.values().map(|v| &v.record)))
    }

    pub fn len(&self) -> usize {
        self.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.read().is_empty()
    }

    pub fn get(&self, id: &str) -> Option<RecordView> {
        self.read().get(id).cloned()
    }

    /// Matching records in id order.
    pub fn list(&self, filter: &RecordFilter) -> Vec<RecordView> {
        self.read().values().filter(|v| filter.matches(&v.record)).cloned().collect()
    }

    fn check(record: &CorpusRecord) -> Result<Vec<Issue>, StoreError> {
        let issues = validate_record(record);
        if issues.iter().any(Issue::is_error) {
            return Err(StoreError::Invalid(issues));
        }
        Ok(issues)
    }

    /// Adds a record at version 1. Returns it with any warnings.
    pub fn create(&self, record: CorpusRecord) -> Result<(RecordView, Vec<Issue>), StoreError> {
        let warnings = Self::check(&record)?;
        let mut records = self.write();
        if records.contains_key(&record.id) {
            return Err(StoreError::Duplicate(record.id));
        }
        let view = RecordView { record, version: 1 };
        records.insert(view.record.id.clone(), view.clone());
        self.persist(&records)?;
        if in_history(&view.record) {
            self.rebuild_history(&records)?;
        }
        Ok((view, warnings))
    }

    fn current<'m>(
        records: &'m BTreeMap<String, RecordView>,
        id: &str,
        expected: Option<u64>,
    ) -> Result<&'m RecordView, StoreError> {
        let cur = records.get(id).ok_or_else(|| StoreError::NotFound(id.to_string()))?;
        match expected {
            Some(v) if v != cur.version => {
                Err(StoreError::VersionConflict { id: id.to_string(), expected: v, current: Box::new(cur.clone()) })
            }
            _ => Ok(cur),
        }
    }

    /// Replaces the content of record `id`, which must be at `expected`.
    /// Status is kept from the stored record; it changes only through
    /// [`Store::set_status`].
    pub fn update(
        &self,
        id: &str,
        expected: u64,
        mut record: CorpusRecord,
    ) -> Result<(RecordView, Vec<Issue>), StoreError> {
        let mut records = self.write();
        let cur = Self::current(&records, id, Some(expected))?;
        record.id = id.to_string();
        record.status = cur.record.status;
        let warnings = Self::check(&record)?;
        let view = RecordView { record, version: cur.version + 1 };
        let touches_history = in_history(&view.record);
        records.insert(id.to_string(), view.clone());
        self.persist(&records)?;
        if touches_history {
            self.rebuild_history(&records)?;
        }
        Ok((view, warnings))
    }

    pub fn set_status(&self, id: &str, status: Status, expected: Option<u64>) -> Result<RecordView, StoreError> {
        let mut records = self.write();
        let cur = Self::current(&records, id, expected)?;
        check_transition(cur.record.status, status)?;
        if cur.record.status == status {
            return Ok(cur.clone());
        }
        let mut view = cur.clone();
        view.record.status = status;
        view.version += 1;
        let newly_in_history = in_history(&view.record) && !in_history(&cur.record);
        records.insert(id.to_string(), view.clone());
        self.persist(&records)?;
        if newly_in_history {
            let mut h = (*self.history()).clone();
            if let Err(e) = h.ingest(&view.record) {
                log::warn!("{e}");
            }
            self.swap_history(h)?;
        }
        Ok(view)
    }

    pub fn delete(&self, id: &str, expected: Option<u64>) -> Result<RecordView, StoreError> {
        let mut records = self.write();
        Self::current(&records, id, expected)?;
        let removed = records.remove(id).expect("checked above");
        self.persist(&records)?;
        if in_history(&removed.record) {
            self.rebuild_history(&records)?;
        }
        Ok(removed)
    }

    /// Statistics over exactly the records an unfiltered listing returns.
    pub fn stats(&self) -> CorpusStats {
        compute_stats(self.read().values().map(|v| &v.record))
    }

    pub fn dictionary(&self) -> Lexicon {
        extract_dictionary(self.read().values().map(|v| &v.record))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rasmi_core::corpus::{synthetic_corpus, SynthConfig};

    fn draft(n: usize) -> Vec<CorpusRecord> {
        synthetic_corpus(&SynthConfig::new(n, 1))
            .into_iter()
            .map(|mut r| {
                r.status = Status::Draft;
                r
            })
            .collect()
    }

    #[test]
    fn versions_increase_and_conflicts_are_caught() {
        let s = Store::in_memory();
        let r = draft(1).remove(0);
        let (v, _) = s.create(r.clone()).unwrap();
        assert_eq!(v.version, 1);
        let (v2, _) = s.update(&r.id, 1, r.clone()).unwrap();
        assert_eq!(v2.version, 2);
        match s.update(&r.id, 1, r.clone()) {
            Err(StoreError::VersionConflict { expected: 1, current, .. }) => assert_eq!(current.version, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(s.create(r.clone()), Err(StoreError::Duplicate(_))));
    }

    #[test]
    fn history_follows_review_status() {
        let s = Store::in_memory();
        let r = draft(1).remove(0);
        s.create(r.clone()).unwrap();
        assert!(s.history().is_empty());
        s.set_status(&r.id, Status::Reviewed, None).unwrap();
        let h = s.history();
        assert!(!h.is_empty());
        let mut expected = AlignmentHistory::new();
        expected.ingest(&s.get(&r.id).unwrap().record).unwrap();
        assert_eq!(*h, expected);
        assert!(matches!(s.set_status(&r.id, Status::Draft, None), Err(StoreError::Transition(_))));
        s.delete(&r.id, None).unwrap();
        assert!(s.history().is_empty());
    }

    #[test]
    fn persisted_store_reopens() {
        let dir = tempfile::tempdir().unwrap();
        let recs = draft(5);
        {
            let s = Store::open(dir.path()).unwrap();
            for r in &recs {
                s.create(r.clone()).unwrap();
            }
            s.set_status(&recs[0].id, Status::Reviewed, Some(1)).unwrap();
        }
        let s = Store::open(dir.path()).unwrap();
        assert_eq!(s.len(), 5);
        assert_eq!(s.get(&recs[0].id).unwrap().record.status, Status::Reviewed);
        assert_eq!(s.get(&recs[0].id).unwrap().version, 1);
        assert_eq!(*s.history(), AlignmentHistory::rebuild(s.list(&RecordFilter::default()).iter().map(|v| &v.record)));
    }

    #[test]
    fn filters() {
        let s = Store::in_memory();
        for r in draft(30) {
            s.create(r).unwrap();
        }
        let all = s.list(&RecordFilter::default());
        assert_eq!(all.len(), 30);
        let tw = s.list(&RecordFilter { source: Some(Source::Twitter), ..Default::default() });
        assert!(tw.iter().all(|v| v.record.source == Source::Twitter));
        let first = &all[0].record;
        let word = first.informal.split(' ').next().unwrap().to_string();
        let hits = s.list(&RecordFilter { q: Some(word.clone()), ..Default::default() });
        assert!(hits.iter().any(|v| v.record.id == first.id));
        assert!(hits.iter().all(|v| v.record.informal.contains(&word) || v.record.formal.contains(&word)));
    }
}
