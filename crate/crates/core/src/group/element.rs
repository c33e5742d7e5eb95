use std::fmt;
use std::str::FromStr;

use smallvec::SmallVec;

use crate::error::Error;

/// A group element stored as integer coordinates.
///
/// Lattice and Heisenberg elements are coordinate vectors. Free group elements are
/// reduced words whose letters are signed generator indices (`1`, `-1`, `2`, `-2`).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Element(pub(crate) SmallVec<[i64; 4]>);

impl Element {
    pub fn new(coords: &[i64]) -> Self {
        Element(SmallVec::from_slice(coords))
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<&[i64]> for Element {
    fn from(c: &[i64]) -> Self {
        Element::new(c)
    }
}

impl<const N: usize> From<[i64; N]> for Element {
    fn from(c: [i64; N]) -> Self {
        Element::new(&c)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for Element {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Element::default());
        }
        let mut v = SmallVec::new();
        for part in s.split(',') {
            let c = part
                .trim()
                .parse::<i64>()
                .map_err(|e| Error::Parse(format!("element '{s}': {e}")))?;
            v.push(c);
        }
        Ok(Element(v))
    }
}

/// Sort key for the canonical order: word length first, then coordinates lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Canon {
    pub len: u32,
    pub elem: Element,
}
