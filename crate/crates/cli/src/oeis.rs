//! OEIS b-file lookup: embedded records, then a local cache, then the network.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Duration;

use num_bigint::BigInt;

pub const DEFAULT_BASE_URL: &str = "https://oeis.org";
/// Overrides [`DEFAULT_BASE_URL`], e.g. to point at a local stub server.
pub const BASE_URL_ENV: &str = "SPIDERMOMENT_OEIS_URL";

/// `(id, b-file text, construction offset)`.
///
/// The construction offset is the OEIS index that index 0 of the matching
/// construction lines up with.
const EMBEDDED: [(&str, &str, usize); 11] = [
    ("A000108", include_str!("../data/A000108.bfile"), 0),
    ("A000957", include_str!("../data/A000957.bfile"), 1),
    ("A000958", include_str!("../data/A000958.bfile"), 1),
    ("A001003", include_str!("../data/A001003.bfile"), 1),
    ("A001006", include_str!("../data/A001006.bfile"), 0),
    ("A001519", include_str!("../data/A001519.bfile"), 1),
    ("A001850", include_str!("../data/A001850.bfile"), 0),
    ("A002426", include_str!("../data/A002426.bfile"), 0),
    ("A005043", include_str!("../data/A005043.bfile"), 0),
    ("A109190", include_str!("../data/A109190.bfile"), 0),
    ("A111961", include_str!("../data/A111961.bfile"), 0),
];

#[derive(Debug, thiserror::Error)]
pub enum OeisError {
    #[error("invalid A-number {0:?} (expected A followed by 6 digits)")]
    InvalidId(String),
    #[error("{id} not found{}", if *.offline { " (offline: not embedded or cached)" } else { "" })]
    NotFound { id: String, offline: bool },
    #[error("fetching {url} failed: {message}")]
    NetworkError { url: String, message: String },
    #[error("malformed b-file for {id}, line {line}: {message}")]
    FormatError {
        id: String,
        line: usize,
        message: String,
    },
    #[error("cache write for {id} failed: {source}")]
    Cache {
        id: String,
        #[source]
        source: std::io::Error,
    },
}

/// A validated A-number.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OeisId(String);

impl FromStr for OeisId {
    type Err = OeisError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let digits = s.strip_prefix('A').or_else(|| s.strip_prefix('a'));
        match digits {
            Some(d) if d.len() == 6 && d.bytes().all(|b| b.is_ascii_digit()) => {
                Ok(Self(format!("A{d}")))
            }
            _ => Err(OeisError::InvalidId(s.to_string())),
        }
    }
}

impl OeisId {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    fn digits(&self) -> &str {
        &self.0[1..]
    }
}

impl fmt::Display for OeisId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Embedded,
    Cache,
    Network,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::Embedded => "embedded",
            Source::Cache => "cache",
            Source::Network => "network",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OeisRecord {
    pub id: OeisId,
    /// OEIS index of `terms[0]`.
    pub offset: usize,
    pub terms: Vec<BigInt>,
    pub source: Source,
}

impl OeisRecord {
    /// Term with OEIS index `n`.
    pub fn term(&self, n: usize) -> Option<&BigInt> {
        n.checked_sub(self.offset).and_then(|i| self.terms.get(i))
    }
}

/// Parses b-file text: lines `n a(n)` with consecutive `n`; blank lines and
/// lines starting with `#` are skipped. Returns the first index and the terms.
pub fn parse_bfile(id: &OeisId, text: &str) -> Result<(usize, Vec<BigInt>), OeisError> {
    let fail = |line: usize, message: String| OeisError::FormatError {
        id: id.to_string(),
        line,
        message,
    };
    let mut offset = None;
    let mut terms = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (Some(n), Some(value), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(fail(i + 1, format!("expected \"n a(n)\", got {line:?}")));
        };
        let n: usize = n
            .parse()
            .map_err(|_| fail(i + 1, format!("bad index {n:?}")))?;
        let value: BigInt = value
            .parse()
            .map_err(|_| fail(i + 1, format!("bad term {value:?}")))?;
        let first = *offset.get_or_insert(n);
        if n != first + terms.len() {
            return Err(fail(i + 1, format!("index {n} out of sequence")));
        }
        terms.push(value);
    }
    match offset {
        Some(offset) => Ok((offset, terms)),
        None => Err(fail(0, "no terms".into())),
    }
}

/// The ids of the embedded records.
pub fn embedded_ids() -> impl Iterator<Item = &'static str> {
    EMBEDDED.iter().map(|e| e.0)
}

/// Construction offset of an embedded sequence; 0 for anything else.
pub fn construction_offset(id: &OeisId) -> usize {
    EMBEDDED
        .iter()
        .find(|e| e.0 == id.as_str())
        .map_or(0, |e| e.2)
}

pub fn embedded(id: &OeisId) -> Option<OeisRecord> {
    let (_, text, _) = EMBEDDED.iter().find(|e| e.0 == id.as_str())?;
    let (offset, terms) = parse_bfile(id, text).expect("embedded b-files are well formed");
    Some(OeisRecord {
        id: id.clone(),
        offset,
        terms,
        source: Source::Embedded,
    })
}

#[derive(Debug, Clone)]
pub struct OeisClient {
    offline: bool,
    cache_dir: Option<PathBuf>,
    base_url: String,
    timeout: Duration,
}

impl OeisClient {
    /// Base URL from [`BASE_URL_ENV`] when set.
    pub fn new(offline: bool, cache_dir: Option<PathBuf>) -> Self {
        let base_url = std::env::var(BASE_URL_ENV).unwrap_or_else(|_| DEFAULT_BASE_URL.to_string());
        Self {
            offline,
            cache_dir,
            base_url,
            timeout: Duration::from_secs(30),
        }
    }

    pub fn with_base_url(mut self, url: impl Into<String>) -> Self {
        self.base_url = url.into();
        self
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.timeout = timeout;
        self
    }

    pub fn cache_path(&self, id: &OeisId) -> Option<PathBuf> {
        self.cache_dir
            .as_ref()
            .map(|d| d.join(format!("{id}.bfile")))
    }

    pub fn bfile_url(&self, id: &OeisId) -> String {
        format!(
            "{}/{}/b{}.txt",
            self.base_url.trim_end_matches('/'),
            id,
            id.digits()
        )
    }

    pub fn lookup(&self, id: &OeisId) -> Result<OeisRecord, OeisError> {
        if let Some(record) = embedded(id) {
            return Ok(record);
        }
        if let Some(path) = self.cache_path(id) {
            if let Ok(text) = std::fs::read_to_string(&path) {
                return self.record(id, &text, Source::Cache);
            }
        }
        if self.offline {
            return Err(OeisError::NotFound {
                id: id.to_string(),
                offline: true,
            });
        }
        let text = self.fetch(id)?;
        let record = self.record(id, &text, Source::Network)?;
        if let Some(dir) = &self.cache_dir {
            write_atomically(dir, &format!("{id}.bfile"), &text).map_err(|source| {
                OeisError::Cache {
                    id: id.to_string(),
                    source,
                }
            })?;
        }
        Ok(record)
    }

    fn record(&self, id: &OeisId, text: &str, source: Source) -> Result<OeisRecord, OeisError> {
        let (offset, terms) = parse_bfile(id, text)?;
        Ok(OeisRecord {
            id: id.clone(),
            offset,
            terms,
            source,
        })
    }

    fn fetch(&self, id: &OeisId) -> Result<String, OeisError> {
        let url = self.bfile_url(id);
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(self.timeout))
            .build()
            .into();
        let network = |message: String| OeisError::NetworkError {
            url: url.clone(),
            message,
        };
        match agent.get(&url).call() {
            Ok(mut response) => response
                .body_mut()
                .read_to_string()
                .map_err(|e| network(e.to_string())),
            Err(ureq::Error::StatusCode(404)) => Err(OeisError::NotFound {
                id: id.to_string(),
                offline: false,
            }),
            Err(e) => Err(network(e.to_string())),
        }
    }
}

/// Writes `dir/name` through a temporary file in the same directory and a
/// rename, so readers never see a partial entry.
fn write_atomically(dir: &Path, name: &str, contents: &str) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    tmp.persist(dir.join(name)).map_err(|e| e.error)?;
    Ok(())
}
