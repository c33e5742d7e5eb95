use std::fmt;
use std::str::FromStr;

use smallvec::SmallVec;

use super::Element;
use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum GroupKind {
    /// The free abelian group Z^d with the standard generators.
    Lattice(usize),
    /// Discrete Heisenberg group, `(a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab')`.
    Heisenberg3,
    /// Free group on two generators. Exponential growth.
    Free2,
}

impl GroupKind {
    pub fn default_max_radius(self) -> usize {
        match self {
            GroupKind::Lattice(_) => 12,
            GroupKind::Heisenberg3 => 10,
            GroupKind::Free2 => 8,
        }
    }

    pub fn has_polynomial_growth(self) -> bool {
        !matches!(self, GroupKind::Free2)
    }

    pub fn identity(self) -> Element {
        match self {
            GroupKind::Lattice(d) => Element(SmallVec::from_elem(0, d)),
            GroupKind::Heisenberg3 => Element::new(&[0, 0, 0]),
            GroupKind::Free2 => Element::default(),
        }
    }

    pub fn mul(self, g: &Element, h: &Element) -> Element {
        match self {
            GroupKind::Lattice(_) => {
                Element(g.0.iter().zip(h.0.iter()).map(|(a, b)| a + b).collect())
            }
            GroupKind::Heisenberg3 => {
                let (a, b, c) = (g.0[0], g.0[1], g.0[2]);
                let (a2, b2, c2) = (h.0[0], h.0[1], h.0[2]);
                Element::new(&[a + a2, b + b2, c + c2 + a * b2])
            }
            GroupKind::Free2 => {
                let mut w = g.0.clone();
                for &l in h.0.iter() {
                    if w.last() == Some(&-l) {
                        w.pop();
                    } else {
                        w.push(l);
                    }
                }
                Element(w)
            }
        }
    }

    pub fn inv(self, g: &Element) -> Element {
        match self {
            GroupKind::Lattice(_) => Element(g.0.iter().map(|a| -a).collect()),
            GroupKind::Heisenberg3 => {
                let (a, b, c) = (g.0[0], g.0[1], g.0[2]);
                Element::new(&[-a, -b, a * b - c])
            }
            GroupKind::Free2 => Element(g.0.iter().rev().map(|l| -l).collect()),
        }
    }

    /// Symmetric standard generating set, identity excluded.
    pub fn generators(self) -> Vec<Element> {
        match self {
            GroupKind::Lattice(d) => {
                let mut out = Vec::with_capacity(2 * d);
                for i in 0..d {
                    for s in [-1, 1] {
                        let mut v = SmallVec::from_elem(0, d);
                        v[i] = s;
                        out.push(Element(v));
                    }
                }
                out
            }
            GroupKind::Heisenberg3 => vec![
                Element::new(&[-1, 0, 0]),
                Element::new(&[0, -1, 0]),
                Element::new(&[0, 1, 0]),
                Element::new(&[1, 0, 0]),
            ],
            GroupKind::Free2 => vec![
                Element::new(&[-2]),
                Element::new(&[-1]),
                Element::new(&[1]),
                Element::new(&[2]),
            ],
        }
    }

    pub fn validate(self, g: &Element) -> Result<()> {
        let ok = match self {
            GroupKind::Lattice(d) => g.len() == d,
            GroupKind::Heisenberg3 => g.len() == 3,
            GroupKind::Free2 => {
                g.0.iter().all(|l| matches!(l, -2 | -1 | 1 | 2))
                    && g.0.windows(2).all(|w| w[0] != -w[1])
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Usage(format!("'{g}' is not an element of {self}")))
        }
    }

    /// Word length when a closed form exists.
    pub fn closed_form_length(self, g: &Element) -> Option<usize> {
        match self {
            GroupKind::Lattice(_) => Some(g.0.iter().map(|a| a.unsigned_abs() as usize).sum()),
            GroupKind::Free2 => Some(g.len()),
            GroupKind::Heisenberg3 => None,
        }
    }

    /// Lower bound on the word length from the abelianization.
    pub fn length_lower_bound(self, g: &Element) -> usize {
        match self {
            GroupKind::Heisenberg3 => (g.0[0].unsigned_abs() + g.0[1].unsigned_abs()) as usize,
            _ => self.closed_form_length(g).unwrap_or(0),
        }
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKind::Lattice(d) => write!(f, "Z{d}"),
            GroupKind::Heisenberg3 => f.write_str("H3"),
            GroupKind::Free2 => f.write_str("F2"),
        }
    }
}

impl FromStr for GroupKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t.to_ascii_uppercase().as_str() {
            "H3" => Ok(GroupKind::Heisenberg3),
            "F2" => Ok(GroupKind::Free2),
            u if u.starts_with('Z') => match u[1..].parse::<usize>() {
                Ok(d) if (1..=8).contains(&d) => Ok(GroupKind::Lattice(d)),
                _ => Err(Error::Parse(format!("unknown group '{t}'"))),
            },
            _ => Err(Error::Parse(format!("unknown group '{t}'"))),
        }
    }
}
