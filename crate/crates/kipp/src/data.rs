//! Matrix documents shipped with the crate.

use crate::format::{FormatError, MatrixDocument};

pub const BUNDLED: [(&str, &str); 8] = [
    ("example1", include_str!("../data/example1.json")),
    ("example2", include_str!("../data/example2.json")),
    ("example3", include_str!("../data/example3.json")),
    ("figure1", include_str!("../data/figure1.json")),
    ("figure2", include_str!("../data/figure2.json")),
    ("figure3", include_str!("../data/figure3.json")),
    ("j2", include_str!("../data/j2.json")),
    ("diag123", include_str!("../data/diag123.json")),
];

pub fn bundled_text(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub fn bundled(name: &str) -> Option<Result<MatrixDocument, FormatError>> {
    bundled_text(name).map(MatrixDocument::parse)
}
