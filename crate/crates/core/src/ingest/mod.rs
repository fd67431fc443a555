//! DBLP ingest: stream-parse an XML dump into [`PublicationRecord`]s and
//! read/write the canonical one-record-per-line JSON format.

mod entities;
mod names;
mod pages;
mod parser;
mod record;

use std::collections::HashSet;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Read, Write};
use std::path::Path;

use flate2::read::MultiGzDecoder;

pub use entities::resolve_entity;
pub use names::{AuthorName, normalize_name, split_author_name};
pub use pages::{PageInfo, parse_page_range};
pub use parser::{IngestStats, RecordReader, parse_records};
pub use record::{PublicationRecord, RecordKind, extract_venue_key};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RecordFault {
    #[error("unknown entity reference &{0};")]
    UnknownEntity(String),
    #[error("year {0:?} is not a four digit year")]
    InvalidYear(String),
    #[error("record has no key")]
    MissingKey,
    #[error("duplicate record key")]
    DuplicateKey,
    #[error("bad attribute: {0}")]
    BadAttribute(String),
}

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    /// The XML stream itself is broken; nothing after `offset` is read.
    #[error("malformed XML at byte {offset}: {message}")]
    Xml { offset: u64, message: String },
    /// A single record was skipped.
    #[error("record {key:?} at byte {offset} skipped: {fault}")]
    Record {
        key: String,
        offset: u64,
        fault: RecordFault,
    },
    #[error("line {line} of canonical record file: {source}")]
    Canonical {
        line: usize,
        #[source]
        source: serde_json::Error,
    },
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl IngestError {
    /// Whether the stream continues after this error.
    pub fn is_recoverable(&self) -> bool {
        matches!(self, IngestError::Record { .. })
    }
}

const GZIP_MAGIC: [u8; 2] = [0x1f, 0x8b];

/// Wraps a byte stream, transparently decompressing it when it starts with
/// the gzip magic bytes.
pub fn decompressing_reader<R: Read + 'static>(input: R) -> io::Result<Box<dyn BufRead>> {
    let mut buffered = BufReader::with_capacity(64 * 1024, input);
    let head = buffered.fill_buf()?;
    if head.starts_with(&GZIP_MAGIC) {
        Ok(Box::new(BufReader::with_capacity(
            64 * 1024,
            MultiGzDecoder::new(buffered),
        )))
    } else {
        Ok(Box::new(buffered))
    }
}

/// Opens a path (or standard input for `-`) for reading, gzip-aware.
pub fn open_input(path: &Path) -> io::Result<Box<dyn BufRead>> {
    if path.as_os_str() == "-" {
        decompressing_reader(io::stdin())
    } else {
        decompressing_reader(File::open(path)?)
    }
}

/// Turns repeated record keys into [`RecordFault::DuplicateKey`] errors.
///
/// Keeps one entry per distinct key seen, so memory grows with the number
/// of records; the parser underneath does not.
pub struct UniqueKeys<I> {
    inner: I,
    seen: HashSet<String>,
}

impl<I> UniqueKeys<I> {
    pub fn new(inner: I) -> Self {
        UniqueKeys {
            inner,
            seen: HashSet::new(),
        }
    }

    pub fn inner(&self) -> &I {
        &self.inner
    }
}

impl<I> Iterator for UniqueKeys<I>
where
    I: Iterator<Item = Result<PublicationRecord, IngestError>>,
{
    type Item = Result<PublicationRecord, IngestError>;

    fn next(&mut self) -> Option<Self::Item> {
        match self.inner.next()? {
            Ok(rec) if !self.seen.insert(rec.record_key.clone()) => {
                Some(Err(IngestError::Record {
                    key: rec.record_key,
                    offset: 0,
                    fault: RecordFault::DuplicateKey,
                }))
            }
            other => Some(other),
        }
    }
}

/// Writes records in the canonical format: one JSON object per line.
pub fn write_canonical<'a, W: Write>(
    mut out: W,
    records: impl IntoIterator<Item = &'a PublicationRecord>,
) -> io::Result<()> {
    for rec in records {
        serde_json::to_writer(&mut out, rec)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

/// Reads the canonical record format, skipping blank lines.
pub fn read_canonical<R: BufRead>(
    input: R,
) -> impl Iterator<Item = Result<PublicationRecord, IngestError>> {
    input
        .lines()
        .enumerate()
        .filter(|(_, l)| l.as_ref().map_or(true, |s| !s.trim().is_empty()))
        .map(|(i, line)| {
            let line = line?;
            serde_json::from_str(&line).map_err(|source| IngestError::Canonical {
                line: i + 1,
                source,
            })
        })
}

/// Format of a records file, sniffed from its first non-blank byte.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecordFormat {
    Xml,
    Canonical,
}

pub fn sniff_format(input: &mut dyn BufRead) -> io::Result<RecordFormat> {
    let head = input.fill_buf()?;
    let first = head
        .iter()
        .copied()
        .find(|b| !(b.is_ascii_whitespace() || matches!(b, 0xef | 0xbb | 0xbf)));
    Ok(if first == Some(b'<') {
        RecordFormat::Xml
    } else {
        RecordFormat::Canonical
    })
}

/// Reads every record from `path`, accepting either DBLP XML or the
/// canonical format. Recoverable record errors are collected rather than
/// returned; a fatal stream error aborts.
pub fn load_records(path: &Path) -> Result<(Vec<PublicationRecord>, LoadReport), IngestError> {
    let mut input = open_input(path)?;
    let format = sniff_format(&mut input)?;
    let mut report = LoadReport::default();
    let mut records = Vec::new();
    let items: Box<dyn Iterator<Item = Result<PublicationRecord, IngestError>>> = match format {
        RecordFormat::Xml => Box::new(RecordReader::new(input)),
        RecordFormat::Canonical => Box::new(read_canonical(input)),
    };
    for item in UniqueKeys::new(items) {
        match item {
            Ok(rec) => records.push(rec),
            Err(e) if e.is_recoverable() => report.record_errors.push(e.to_string()),
            Err(e) => return Err(e),
        }
    }
    Ok((records, report))
}

#[derive(Debug, Default, Clone)]
pub struct LoadReport {
    pub record_errors: Vec<String>,
}
