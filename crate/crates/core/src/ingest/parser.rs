use std::collections::BTreeMap;
use std::io::BufRead;

use quick_xml::Reader;
use quick_xml::XmlVersion;
use quick_xml::encoding::DecodingReader;
use quick_xml::events::{BytesStart, Event};

use super::entities::resolve_entity;
use super::names::split_author_name;
use super::pages::parse_page_range;
use super::record::{PublicationRecord, RecordKind, extract_venue_key};
use super::{IngestError, RecordFault};

/// Element names DBLP uses for top-level records.
const RECORD_ELEMENTS: &[&str] = &[
    "article",
    "inproceedings",
    "proceedings",
    "book",
    "incollection",
    "phdthesis",
    "mastersthesis",
    "www",
    "person",
    "data",
];

/// Counters accumulated over one parse.
#[derive(Debug, Clone, Default, PartialEq, Eq, serde::Serialize)]
pub struct IngestStats {
    pub records: u64,
    pub record_errors: u64,
    /// Skipped top-level elements by element name.
    pub skipped: BTreeMap<String, u64>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Field {
    Author,
    Title,
    Year,
    Pages,
    Booktitle,
    Journal,
    Crossref,
    Ee,
}

impl Field {
    fn from_name(name: &str) -> Option<Field> {
        Some(match name {
            "author" => Field::Author,
            "title" => Field::Title,
            "year" => Field::Year,
            "pages" => Field::Pages,
            "booktitle" => Field::Booktitle,
            "journal" => Field::Journal,
            "crossref" => Field::Crossref,
            "ee" => Field::Ee,
            _ => return None,
        })
    }
}

#[derive(Default)]
struct Draft {
    authors: Vec<String>,
    title: String,
    year: Option<String>,
    pages: Option<String>,
    booktitle: Option<String>,
    journal: Option<String>,
    crossref: Option<String>,
    ee: Vec<String>,
}

impl Draft {
    fn finish(&mut self, field: Field, text: String) {
        match field {
            Field::Author => self.authors.push(text),
            Field::Title => self.title = text,
            Field::Year => self.year = Some(text),
            Field::Pages => self.pages = Some(text),
            Field::Booktitle => self.booktitle = Some(text),
            Field::Journal => self.journal = Some(text),
            Field::Crossref => self.crossref = Some(text),
            Field::Ee => self.ee.push(text),
        }
    }
}

/// Pull parser over a DBLP-style XML stream.
///
/// Yields one item per `inproceedings` or `article` element in document
/// order. Other record kinds are counted in [`IngestStats::skipped`]. A
/// record-level problem (unknown entity, bad year, missing key) yields an
/// `Err` for that record and parsing continues; malformed XML yields a final
/// `Err` and ends the stream. Only one record is held in memory at a time.
pub struct RecordReader<R: BufRead> {
    xml: Reader<DecodingReader<R>>,
    buf: Vec<u8>,
    depth: usize,
    root_seen: bool,
    done: bool,
    stats: IngestStats,
}

impl<R: BufRead> RecordReader<R> {
    pub fn new(input: R) -> Self {
        let mut xml = Reader::from_reader(DecodingReader::new(input));
        let config = xml.config_mut();
        config.trim_text(false);
        config.check_end_names = true;
        RecordReader {
            xml,
            buf: Vec::with_capacity(4096),
            depth: 0,
            root_seen: false,
            done: false,
            stats: IngestStats::default(),
        }
    }

    pub fn stats(&self) -> &IngestStats {
        &self.stats
    }

    pub fn into_stats(self) -> IngestStats {
        self.stats
    }

    fn fatal(&mut self, err: quick_xml::Error) -> IngestError {
        self.done = true;
        IngestError::Xml {
            offset: self.xml.error_position(),
            message: err.to_string(),
        }
    }

    fn next_item(&mut self) -> Option<Result<PublicationRecord, IngestError>> {
        loop {
            self.buf.clear();
            let event = match self.xml.read_event_into(&mut self.buf) {
                Ok(ev) => ev.into_owned(),
                Err(e) => return Some(Err(self.fatal(e))),
            };
            match event {
                Event::Start(start) => {
                    let name = start.name().as_ref().to_string();
                    let is_record = RECORD_ELEMENTS.contains(&name.as_str());
                    if self.depth == 0 && !is_record && !self.root_seen {
                        self.root_seen = true;
                        self.depth = 1;
                        continue;
                    }
                    if name == "inproceedings" || name == "article" {
                        return Some(self.read_record(&start, &name, false));
                    }
                    *self.stats.skipped.entry(name.clone()).or_default() += 1;
                    let mut skip_buf = Vec::new();
                    if let Err(e) = self.xml.read_to_end_into(start.name(), &mut skip_buf) {
                        return Some(Err(self.fatal(e)));
                    }
                }
                Event::Empty(start) => {
                    let name = start.name().as_ref().to_string();
                    if name == "inproceedings" || name == "article" {
                        return Some(self.read_record(&start, &name, true));
                    }
                    *self.stats.skipped.entry(name).or_default() += 1;
                }
                Event::End(_) => {
                    self.depth = self.depth.saturating_sub(1);
                }
                Event::Decl(decl) => {
                    if let Some(encoding) = decl.encoder() {
                        self.xml.get_mut().set_encoding(encoding);
                    }
                }
                Event::Eof => {
                    self.done = true;
                    return None;
                }
                _ => {}
            }
        }
    }

    fn read_record(
        &mut self,
        start: &BytesStart<'_>,
        name: &str,
        empty: bool,
    ) -> Result<PublicationRecord, IngestError> {
        let offset = self.xml.buffer_position();
        let mut fault: Option<RecordFault> = None;
        let key = match start.try_get_attribute("key") {
            Ok(Some(attr)) => match attr.normalized_value(XmlVersion::Implicit1_0) {
                Ok(v) => v.trim().to_string(),
                Err(e) => {
                    fault.get_or_insert(RecordFault::BadAttribute(e.to_string()));
                    String::new()
                }
            },
            Ok(None) => String::new(),
            Err(e) => {
                fault.get_or_insert(RecordFault::BadAttribute(e.to_string()));
                String::new()
            }
        };

        let mut draft = Draft::default();
        if !empty {
            let mut field: Option<Field> = None;
            let mut field_depth = 0usize;
            let mut nested = 0usize;
            let mut text = String::new();
            loop {
                self.buf.clear();
                let event = match self.xml.read_event_into(&mut self.buf) {
                    Ok(ev) => ev,
                    Err(e) => return Err(self.fatal(e)),
                };
                match event {
                    Event::Start(e) => {
                        nested += 1;
                        if field.is_none() && nested == 1 {
                            field = Field::from_name(e.name().as_ref());
                            field_depth = nested;
                            text.clear();
                        }
                    }
                    Event::Empty(_) => {}
                    Event::End(_) => {
                        if nested == 0 {
                            break;
                        }
                        if let Some(f) = field.filter(|_| nested == field_depth) {
                            draft.finish(f, text.trim().to_string());
                            field = None;
                        }
                        nested -= 1;
                    }
                    Event::Text(t) => {
                        if field.is_some() {
                            text.push_str(&t.xml10_content());
                        }
                    }
                    Event::CData(t) => {
                        if field.is_some() {
                            text.push_str(&t.xml10_content());
                        }
                    }
                    Event::GeneralRef(r) => {
                        let resolved = match r.resolve_char_ref() {
                            Ok(Some(c)) => Some(c),
                            Ok(None) => resolve_entity(&r),
                            Err(_) => None,
                        };
                        match resolved {
                            Some(c) if field.is_some() => text.push(c),
                            Some(_) => {}
                            None => {
                                fault.get_or_insert(RecordFault::UnknownEntity(r.to_string()));
                            }
                        }
                    }
                    Event::Eof => {
                        self.done = true;
                        return Err(IngestError::Xml {
                            offset: self.xml.buffer_position(),
                            message: format!("unexpected end of input inside <{name}>"),
                        });
                    }
                    _ => {}
                }
            }
        }

        if fault.is_none() && key.is_empty() {
            fault = Some(RecordFault::MissingKey);
        }
        let year = match draft.year.as_deref() {
            None | Some("") => None,
            Some(y) => match parse_year(y) {
                Some(v) => Some(v),
                None => {
                    fault.get_or_insert(RecordFault::InvalidYear(y.to_string()));
                    None
                }
            },
        };
        if let Some(fault) = fault {
            self.stats.record_errors += 1;
            return Err(IngestError::Record { key, offset, fault });
        }

        let kind = if name == "inproceedings" {
            RecordKind::ConferencePaper
        } else {
            RecordKind::JournalArticle
        };
        let venue_key = extract_venue_key(
            draft.crossref.as_deref(),
            draft.booktitle.as_deref(),
            draft.journal.as_deref(),
        );
        self.stats.records += 1;
        Ok(PublicationRecord {
            record_key: key,
            kind,
            title: draft.title,
            authors: draft.authors.iter().map(|a| split_author_name(a)).collect(),
            venue_key,
            year,
            pages: parse_page_range(draft.pages.as_deref().unwrap_or("")),
            ee_links: draft.ee,
        })
    }
}

fn parse_year(s: &str) -> Option<i32> {
    if s.len() != 4 || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok().filter(|&y| y > 0)
}

impl<R: BufRead> Iterator for RecordReader<R> {
    type Item = Result<PublicationRecord, IngestError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        self.next_item()
    }
}

/// Convenience wrapper around [`RecordReader::new`].
pub fn parse_records<R: BufRead>(input: R) -> RecordReader<R> {
    RecordReader::new(input)
}
