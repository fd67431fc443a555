use serde::{Deserialize, Serialize};

/// The `pages` field of a record, with a page count when one can be derived.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PageInfo {
    pub raw: String,
    pub count: Option<u32>,
}

/// Derives a page count from a DBLP pages string.
///
/// Understands `a-b` / `a--b` ranges, article-number ranges such as
/// `45:1--45:29`, and single page numbers. Anything else keeps the raw text
/// and leaves the count empty.
pub fn parse_page_range(raw: &str) -> PageInfo {
    PageInfo {
        raw: raw.to_string(),
        count: page_count(raw.trim()),
    }
}

fn page_count(s: &str) -> Option<u32> {
    if s.is_empty() {
        return None;
    }
    match split_range(s) {
        Some((start, end)) => {
            let (start_art, start) = split_article(start)?;
            let (end_art, end) = split_article(end)?;
            if start_art != end_art && end_art.is_some() {
                return None;
            }
            let (a, b) = (parse_page(start)?, parse_page(end)?);
            if a == 0 || b < a {
                return None;
            }
            Some(b - a + 1)
        }
        None => {
            let (_, page) = split_article(s)?;
            parse_page(page).filter(|&p| p >= 1).map(|_| 1)
        }
    }
}

fn split_range(s: &str) -> Option<(&str, &str)> {
    s.split_once("--")
        .or_else(|| s.split_once('-'))
        .or_else(|| s.split_once('–'))
        .map(|(a, b)| (a.trim(), b.trim()))
}

/// `"45:29"` → `(Some("45"), "29")`, `"29"` → `(None, "29")`.
fn split_article(s: &str) -> Option<(Option<&str>, &str)> {
    match s.split_once(':') {
        Some((art, page)) if !art.is_empty() && art.bytes().all(|b| b.is_ascii_digit()) => {
            Some((Some(art), page))
        }
        Some(_) => None,
        None => Some((None, s)),
    }
}

fn parse_page(s: &str) -> Option<u32> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn double_dash_range() {
        assert_eq!(parse_page_range("123--134").count, Some(12));
        assert_eq!(parse_page_range("1-10").count, Some(10));
    }

    #[test]
    fn article_number_range() {
        let p = parse_page_range("45:1--45:29");
        assert_eq!(p.count, Some(29));
        assert_eq!(p.raw, "45:1--45:29");
        // DBLP sometimes drops the article number on the end page
        assert_eq!(parse_page_range("45:1--29").count, Some(29));
        assert_eq!(parse_page_range("45:1--46:29").count, None);
    }

    #[test]
    fn single_page() {
        assert_eq!(parse_page_range("77").count, Some(1));
        assert_eq!(parse_page_range("12:7").count, Some(1));
    }

    #[test]
    fn unparseable_keeps_raw() {
        let p = parse_page_range("xii");
        assert_eq!(p.count, None);
        assert_eq!(p.raw, "xii");
        assert_eq!(parse_page_range("").count, None);
        assert_eq!(parse_page_range("134--123").count, None);
        assert_eq!(parse_page_range("0").count, None);
        assert_eq!(parse_page_range("i-x").count, None);
        assert_eq!(parse_page_range("1-").count, None);
    }

    #[test]
    fn overflowing_numbers_degrade() {
        assert_eq!(parse_page_range("1--99999999999999999999").count, None);
    }

    proptest! {
        #[test]
        fn total_over_arbitrary_strings(s in "\\PC*") {
            let p = parse_page_range(&s);
            prop_assert_eq!(&p.raw, &s);
            if let Some(c) = p.count {
                prop_assert!(c >= 1);
            }
        }

        #[test]
        fn well_formed_ranges_count_inclusively(a in 1u32..100_000, len in 0u32..5_000) {
            let b = a + len;
            prop_assert_eq!(parse_page_range(&format!("{a}--{b}")).count, Some(len + 1));
            prop_assert_eq!(parse_page_range(&format!("7:{a}--7:{b}")).count, Some(len + 1));
        }
    }
}
