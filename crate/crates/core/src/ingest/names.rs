use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;
use unicode_normalization::char::is_combining_mark;

/// An author name as printed by DBLP, split from its homonym suffix.
///
/// DBLP distinguishes people who share a name with a trailing four digit
/// number ("João Silva 0002"). The suffix is kept apart from the display
/// form so that matching can be suffix-aware.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "AuthorNameRepr", into = "AuthorNameRepr")]
pub struct AuthorName {
    pub display: String,
    pub disambiguation_suffix: Option<String>,
    pub normalized: String,
}

#[derive(Serialize, Deserialize)]
struct AuthorNameRepr {
    display: String,
    suffix: Option<String>,
}

impl From<AuthorNameRepr> for AuthorName {
    fn from(r: AuthorNameRepr) -> Self {
        let normalized = normalize_name(&r.display);
        AuthorName {
            display: r.display,
            disambiguation_suffix: r.suffix,
            normalized,
        }
    }
}

impl From<AuthorName> for AuthorNameRepr {
    fn from(a: AuthorName) -> Self {
        AuthorNameRepr {
            display: a.display,
            suffix: a.disambiguation_suffix,
        }
    }
}

impl AuthorName {
    /// The display name with the homonym suffix re-attached, as DBLP prints it.
    pub fn dblp_form(&self) -> String {
        match &self.disambiguation_suffix {
            Some(s) => format!("{} {}", self.display, s),
            None => self.display.clone(),
        }
    }
}

/// Splits a raw DBLP author string into display name, homonym suffix and
/// normalized matching key.
pub fn split_author_name(raw: &str) -> AuthorName {
    let collapsed = collapse_whitespace(raw);
    let (display, suffix) = match collapsed.rsplit_once(' ') {
        Some((head, tail))
            if !head.is_empty() && tail.len() == 4 && tail.bytes().all(|b| b.is_ascii_digit()) =>
        {
            (head.to_string(), Some(tail.to_string()))
        }
        _ => (collapsed, None),
    };
    let normalized = normalize_name(&display);
    AuthorName {
        display,
        disambiguation_suffix: suffix,
        normalized,
    }
}

/// Lowercases, strips diacritics and collapses whitespace.
pub fn normalize_name(s: &str) -> String {
    let folded: String = s
        .nfkd()
        .filter(|c| !is_combining_mark(*c))
        .flat_map(char::to_lowercase)
        // uppercase symbols with no lowercase form (e.g. U+1F150)
        .filter(|c| !c.is_uppercase())
        .collect();
    // recompose whatever survived so output is NFC
    collapse_whitespace(&folded.nfc().collect::<String>())
}

fn collapse_whitespace(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}
