use std::collections::HashMap;

use super::{Element, GroupKind};

/// The ball `B_n` listed in canonical order (word length, then lexicographic).
///
/// Balls of smaller radius are prefixes of larger ones, so a position in `B_r`
/// is also the position of the same element in every `B_n` with `n >= r`.
#[derive(Debug)]
pub struct Ball {
    kind: GroupKind,
    radius: usize,
    elements: Vec<Element>,
    lengths: Vec<u32>,
    offsets: Vec<usize>,
    index: HashMap<Element, usize>,
}

impl Ball {
    pub(crate) fn from_spheres(kind: GroupKind, spheres: &[Vec<Element>]) -> Self {
        let total: usize = spheres.iter().map(Vec::len).sum();
        let mut elements = Vec::with_capacity(total);
        let mut lengths = Vec::with_capacity(total);
        let mut offsets = Vec::with_capacity(spheres.len() + 1);
        offsets.push(0);
        for (k, s) in spheres.iter().enumerate() {
            elements.extend(s.iter().cloned());
            lengths.extend(std::iter::repeat_n(k as u32, s.len()));
            offsets.push(elements.len());
        }
        let index = elements.iter().enumerate().map(|(i, g)| (g.clone(), i)).collect();
        Ball {
            kind,
            radius: spheres.len() - 1,
            elements,
            lengths,
            offsets,
            index,
        }
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Element {
        &self.elements[i]
    }

    /// Word length of the element at position `i`.
    pub fn length(&self, i: usize) -> usize {
        self.lengths[i] as usize
    }

    pub fn position(&self, g: &Element) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn contains(&self, g: &Element) -> bool {
        self.index.contains_key(g)
    }

    /// Number of elements of `B_r`, clamped to this ball.
    pub fn prefix_len(&self, r: usize) -> usize {
        self.offsets[r.min(self.radius) + 1]
    }

    /// Elements of word length exactly `k`.
    pub fn sphere(&self, k: usize) -> &[Element] {
        if k > self.radius {
            return &[];
        }
        &self.elements[self.offsets[k]..self.offsets[k + 1]]
    }
}
