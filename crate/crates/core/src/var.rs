use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;

/// A named variable. Ordering is natural: alphabetic prefix, then numeric
/// suffix, so `z2 < z10`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Var(pub String);

impl Var {
    pub fn new(s: impl Into<String>) -> Self {
        Var(s.into())
    }
    pub fn as_str(&self) -> &str {
        &self.0
    }
    fn split(&self) -> (&str, Option<u64>) {
        let s = self.0.as_str();
        let cut = s.trim_end_matches(|c: char| c.is_ascii_digit()).len();
        let (a, b) = s.split_at(cut);
        (a, b.parse().ok())
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, na) = self.split();
        let (b, nb) = other.split();
        a.cmp(b).then(na.cmp(&nb)).then(self.0.cmp(&other.0))
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Var {
    fn from(s: &str) -> Self {
        Var::new(s)
    }
}
