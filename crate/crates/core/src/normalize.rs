//! Name normalization shared by the gazetteer index and the corpus matcher.

use unicode_normalization::UnicodeNormalization;

/// Canonical form used for every name comparison: NFKC, lowercased,
/// trimmed, with internal whitespace runs collapsed to a single space.
pub fn normalize(name: &str) -> String {
    let folded: String = name.nfkc().flat_map(char::to_lowercase).collect();
    folded.split_whitespace().collect::<Vec<_>>().join(" ")
}
