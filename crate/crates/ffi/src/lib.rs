//! C interface to collabtopics.
//!
//! Objects cross the boundary as opaque handles that the caller releases with
//! the matching `*_free` function. Every fallible call returns a
//! [`CtStatus`]; on failure [`ct_last_error`] describes the problem for the
//! calling thread.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use libc::{c_char, size_t};

use collabtopics::cocite::build_cociting;
use collabtopics::config::RunConfig;
use collabtopics::ingest::{load_corpus_path, select_focal, ValidationConfig};
use collabtopics::metrics::{kendall_tau, ks_test};
use collabtopics::pipeline::run_pipeline;
use collabtopics::seed::derive_seed;
use collabtopics::topic::{assign_topics, detect_communities, modularity, TopicAssignment};
use collabtopics::{Corpus, Error};

/// Result of a C interface call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Io = 3,
    Validation = 4,
    MissingArtifact = 5,
    InvalidParameter = 6,
    Undefined = 7,
    EmptyGraph = 8,
    NoFocalScientists = 9,
    UnknownAuthor = 10,
    OutOfRange = 11,
    Panic = 12,
    Other = 13,
}

impl From<&Error> for CtStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Io { .. } | Error::Stream(_) => CtStatus::Io,
            Error::MalformedRecord { .. } | Error::DuplicatePaper(_) | Error::ValidationFailed(_) => {
                CtStatus::Validation
            }
            Error::MissingArtifact { .. } => CtStatus::MissingArtifact,
            Error::InvalidParameter(_) => CtStatus::InvalidParameter,
            Error::Undefined(_) => CtStatus::Undefined,
            Error::EmptyGraph => CtStatus::EmptyGraph,
            Error::NoFocalScientists { .. } => CtStatus::NoFocalScientists,
            Error::UnknownAuthor(_) => CtStatus::UnknownAuthor,
            Error::Json(_) | Error::Csv(_) => CtStatus::Other,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let message = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(message));
}

fn fail(status: CtStatus, message: impl Into<String>) -> CtStatus {
    set_error(message.into());
    status
}

fn from_error(e: Error) -> CtStatus {
    let status = CtStatus::from(&e);
    fail(status, e.to_string())
}

/// Run `f`, turning panics into [`CtStatus::Panic`].
fn guard(f: impl FnOnce() -> Result<(), CtStatus>) -> CtStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CtStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => fail(CtStatus::Panic, "internal panic"),
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, CtStatus> {
    if p.is_null() {
        return Err(fail(CtStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(CtStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn slice_arg<'a>(p: *const f64, n: size_t, what: &str) -> Result<&'a [f64], CtStatus> {
    if n == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(fail(CtStatus::NullPointer, format!("{what} is null")));
    }
    Ok(std::slice::from_raw_parts(p, n))
}

unsafe fn out_arg<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, CtStatus> {
    p.as_mut()
        .ok_or_else(|| fail(CtStatus::NullPointer, format!("{what} is null")))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, CtStatus> {
    p.as_ref().ok_or_else(|| fail(CtStatus::NullPointer, "handle is null"))
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next call on the same thread.
#[no_mangle]
pub extern "C" fn ct_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Loaded publication corpus.
pub struct CtCorpus {
    corpus: Corpus,
    rejected: usize,
}

/// Load a `.jsonl` or `.csv` corpus. With `strict` set, the first invalid
/// record fails the call; otherwise invalid records are skipped and counted.
#[no_mangle]
pub unsafe extern "C" fn ct_corpus_load(path: *const c_char, strict: bool, out: *mut *mut CtCorpus) -> CtStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let path = str_arg(path, "path")?;
        let config = ValidationConfig {
            strict,
            ..ValidationConfig::default()
        };
        let report = load_corpus_path(path.as_ref(), &config).map_err(from_error)?;
        *out = Box::into_raw(Box::new(CtCorpus {
            corpus: report.corpus,
            rejected: report.rejections.len(),
        }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ct_corpus_free(corpus: *mut CtCorpus) {
    if !corpus.is_null() {
        drop(Box::from_raw(corpus));
    }
}

#[no_mangle]
pub unsafe extern "C" fn ct_corpus_n_papers(corpus: *const CtCorpus) -> size_t {
    corpus.as_ref().map_or(0, |c| c.corpus.len())
}

#[no_mangle]
pub unsafe extern "C" fn ct_corpus_n_authors(corpus: *const CtCorpus) -> size_t {
    corpus.as_ref().map_or(0, |c| c.corpus.n_authors())
}

/// Records skipped while loading.
#[no_mangle]
pub unsafe extern "C" fn ct_corpus_n_rejected(corpus: *const CtCorpus) -> size_t {
    corpus.as_ref().map_or(0, |c| c.rejected)
}

/// Number of authors with at least `min_papers` papers.
#[no_mangle]
pub unsafe extern "C" fn ct_corpus_n_focal(corpus: *const CtCorpus, min_papers: size_t) -> size_t {
    corpus.as_ref().map_or(0, |c| select_focal(&c.corpus, min_papers).len())
}

/// Topic detection result for one scientist.
pub struct CtTopics {
    assignment: TopicAssignment,
    modularity: f64,
}

/// Detect topics in one author's co-citing network. The seed is the global
/// seed; the result matches the pipeline for the same seed and settings.
#[no_mangle]
pub unsafe extern "C" fn ct_topics_detect(
    corpus: *const CtCorpus,
    author: *const c_char,
    seed: u64,
    topic_threshold: f64,
    weighted: bool,
    out: *mut *mut CtTopics,
) -> CtStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let corpus = &handle(corpus)?.corpus;
        let author = str_arg(author, "author")?;
        if !(topic_threshold > 0.0 && topic_threshold < 1.0) {
            return Err(fail(
                CtStatus::InvalidParameter,
                "topic_threshold must lie strictly between 0 and 1",
            ));
        }
        let net = build_cociting(corpus, author).map_err(from_error)?;
        let ctx = detect_communities(&net, weighted, derive_seed(seed, &["louvain", author])).map_err(from_error)?;
        *out = Box::into_raw(Box::new(CtTopics {
            assignment: assign_topics(&net, &ctx, topic_threshold),
            modularity: modularity(&ctx),
        }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ct_topics_free(topics: *mut CtTopics) {
    if !topics.is_null() {
        drop(Box::from_raw(topics));
    }
}

/// Number of major topics.
#[no_mangle]
pub unsafe extern "C" fn ct_topics_count(topics: *const CtTopics) -> size_t {
    topics.as_ref().map_or(0, |t| t.assignment.n_topics())
}

/// Papers in the scientist's series, in chronological order.
#[no_mangle]
pub unsafe extern "C" fn ct_topics_n_papers(topics: *const CtTopics) -> size_t {
    topics.as_ref().map_or(0, |t| t.assignment.paper_ids.len())
}

/// Modularity of the detected partition.
#[no_mangle]
pub unsafe extern "C" fn ct_topics_modularity(topics: *const CtTopics) -> f64 {
    topics.as_ref().map_or(f64::NAN, |t| t.modularity)
}

/// Topic of paper `index` in the series; -1 for papers outside major topics.
#[no_mangle]
pub unsafe extern "C" fn ct_topics_paper_topic(topics: *const CtTopics, index: size_t, out: *mut i64) -> CtStatus {
    guard(|| {
        let topics = handle(topics)?;
        let out = out_arg(out, "out")?;
        let topic = topics
            .assignment
            .topic_of
            .get(index)
            .ok_or_else(|| fail(CtStatus::OutOfRange, format!("paper index {index} out of range")))?;
        *out = topic.map_or(-1, i64::from);
        Ok(())
    })
}

/// Kendall tau-b of `n` paired values.
#[no_mangle]
pub unsafe extern "C" fn ct_kendall_tau(x: *const f64, y: *const f64, n: size_t, out: *mut f64) -> CtStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let (x, y) = (slice_arg(x, n, "x")?, slice_arg(y, n, "y")?);
        *out = kendall_tau(x, y).map_err(from_error)?.value;
        Ok(())
    })
}

/// Two-sample Kolmogorov-Smirnov statistic and asymptotic p-value.
#[no_mangle]
pub unsafe extern "C" fn ct_ks_test(
    a: *const f64,
    n_a: size_t,
    b: *const f64,
    n_b: size_t,
    out_d: *mut f64,
    out_p: *mut f64,
) -> CtStatus {
    guard(|| {
        let out_d = out_arg(out_d, "out_d")?;
        let out_p = out_arg(out_p, "out_p")?;
        let r = ks_test(slice_arg(a, n_a, "a")?, slice_arg(b, n_b, "b")?).map_err(from_error)?;
        *out_d = r.d;
        *out_p = r.p_value;
        Ok(())
    })
}

/// Run the full pipeline on `n_inputs` corpus paths with default analysis
/// settings apart from the given ones. `workers` 0 uses every core.
#[no_mangle]
pub unsafe extern "C" fn ct_run_pipeline(
    inputs: *const *const c_char,
    n_inputs: size_t,
    out_dir: *const c_char,
    seed: u64,
    min_papers: size_t,
    workers: size_t,
    surrogate: bool,
) -> CtStatus {
    guard(|| {
        if n_inputs > 0 && inputs.is_null() {
            return Err(fail(CtStatus::NullPointer, "inputs is null"));
        }
        let paths = (0..n_inputs)
            .map(|i| str_arg(*inputs.add(i), "input path").map(PathBuf::from))
            .collect::<Result<Vec<_>, _>>()?;
        let mut cfg = RunConfig::new(paths, PathBuf::from(str_arg(out_dir, "out_dir")?), seed);
        cfg.workers = workers;
        cfg.params.min_papers = min_papers;
        cfg.params.surrogate = surrogate;
        run_pipeline(&cfg).map_err(from_error)?;
        Ok(())
    })
}
