//! Group arithmetic, word lengths and ball enumeration.

mod ball;
mod element;
mod growth;
mod kind;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, RwLock};

pub use ball::Ball;
pub use element::{Canon, Element};
pub use growth::{growth_fit, GrowthFit};
pub use kind::GroupKind;

use crate::error::{Error, Result};

/// Limits applied to breadth first enumeration.
#[derive(Debug, Clone, Copy)]
pub struct GroupConfig {
    pub max_radius: usize,
    pub size_limit: usize,
    pub allow_out_of_hypothesis: bool,
}

impl GroupConfig {
    pub fn for_kind(kind: GroupKind) -> Self {
        GroupConfig {
            max_radius: kind.default_max_radius(),
            size_limit: 4_000_000,
            allow_out_of_hypothesis: false,
        }
    }
}

#[derive(Default)]
struct Layers {
    spheres: Vec<Vec<Element>>,
    dist: HashMap<Element, u32>,
}

/// A finitely generated group together with its memoized Cayley graph layers.
pub struct Group {
    kind: GroupKind,
    config: GroupConfig,
    layers: RwLock<Layers>,
    balls: Mutex<HashMap<usize, Arc<Ball>>>,
}

impl std::fmt::Debug for Group {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Group")
            .field("kind", &self.kind)
            .field("config", &self.config)
            .finish()
    }
}

impl Group {
    pub fn new(kind: GroupKind) -> Arc<Group> {
        Self::with_config(kind, GroupConfig::for_kind(kind))
    }

    pub fn with_max_radius(kind: GroupKind, max_radius: usize) -> Arc<Group> {
        let mut c = GroupConfig::for_kind(kind);
        c.max_radius = max_radius;
        Self::with_config(kind, c)
    }

    pub fn with_config(kind: GroupKind, config: GroupConfig) -> Arc<Group> {
        let e = kind.identity();
        let mut layers = Layers::default();
        layers.dist.insert(e.clone(), 0);
        layers.spheres.push(vec![e]);
        Arc::new(Group {
            kind,
            config,
            layers: RwLock::new(layers),
            balls: Mutex::new(HashMap::new()),
        })
    }

    pub fn parse(spec: &str) -> Result<Arc<Group>> {
        Ok(Self::new(spec.parse()?))
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn config(&self) -> GroupConfig {
        self.config
    }

    pub fn max_radius(&self) -> usize {
        self.config.max_radius
    }

    /// Fails for groups outside polynomial growth unless the override is set.
    pub fn require_hypotheses(&self) -> Result<()> {
        if self.kind.has_polynomial_growth() || self.config.allow_out_of_hypothesis {
            Ok(())
        } else {
            Err(Error::OutOfHypothesis(self.kind.to_string()))
        }
    }

    pub fn check_same(&self, other: &Group) -> Result<()> {
        if self.kind == other.kind {
            Ok(())
        } else {
            Err(Error::GroupMismatch {
                left: self.kind.to_string(),
                right: other.kind.to_string(),
            })
        }
    }

    pub fn identity(&self) -> Element {
        self.kind.identity()
    }

    #[inline]
    pub fn mul(&self, g: &Element, h: &Element) -> Element {
        self.kind.mul(g, h)
    }

    #[inline]
    pub fn inv(&self, g: &Element) -> Element {
        self.kind.inv(g)
    }

    /// Multiplication with both operands checked against the group.
    pub fn try_mul(&self, g: &Element, h: &Element) -> Result<Element> {
        self.kind.validate(g)?;
        self.kind.validate(h)?;
        Ok(self.kind.mul(g, h))
    }

    pub fn generators(&self) -> Vec<Element> {
        self.kind.generators()
    }

    pub fn parse_element(&self, s: &str) -> Result<Element> {
        let g: Element = s.parse()?;
        self.kind.validate(&g)?;
        Ok(g)
    }

    fn extend_to(&self, r: usize) -> Result<()> {
        if r > self.config.max_radius {
            return Err(Error::RadiusLimit {
                requested: r,
                max: self.config.max_radius,
            });
        }
        if self.layers.read().unwrap().spheres.len() > r {
            return Ok(());
        }
        let mut guard = self.layers.write().unwrap();
        let layers = &mut *guard;
        let gens = self.kind.generators();
        while layers.spheres.len() <= r {
            let k = layers.spheres.len();
            let total = layers.dist.len();
            let mut next = Vec::new();
            for g in &layers.spheres[k - 1] {
                for u in &gens {
                    let h = self.kind.mul(g, u);
                    if !layers.dist.contains_key(&h) {
                        layers.dist.insert(h.clone(), k as u32);
                        next.push(h);
                        if total + next.len() > self.config.size_limit {
                            return Err(Error::ResourceLimit {
                                radius: k,
                                size: total + next.len(),
                                limit: self.config.size_limit,
                            });
                        }
                    }
                }
            }
            next.sort();
            layers.spheres.push(next);
        }
        Ok(())
    }

    /// Word length with respect to the standard generators.
    ///
    /// Lattices and the free group use closed forms. The Heisenberg group looks the
    /// element up in the enumerated layers and fails beyond the configured radius.
    pub fn word_length(&self, g: &Element) -> Result<usize> {
        if let Some(l) = self.kind.closed_form_length(g) {
            return Ok(l);
        }
        let lb = self.kind.length_lower_bound(g);
        let out = || Error::OutOfRadius {
            element: g.to_string(),
            radius: self.config.max_radius,
        };
        if lb > self.config.max_radius {
            return Err(out());
        }
        if let Some(&d) = self.layers.read().unwrap().dist.get(g) {
            return Ok(d as usize);
        }
        let mut r = self.layers.read().unwrap().spheres.len().max(lb);
        while r <= self.config.max_radius {
            self.extend_to(r)?;
            if let Some(&d) = self.layers.read().unwrap().dist.get(g) {
                return Ok(d as usize);
            }
            r += 1;
        }
        Err(out())
    }

    pub fn canon(&self, g: &Element) -> Result<Canon> {
        Ok(Canon {
            len: self.word_length(g)? as u32,
            elem: g.clone(),
        })
    }

    /// Word length of `x^n`.
    ///
    /// When the length of `x` equals its abelianized length the power is a geodesic
    /// and its length is `n |x|`. Otherwise the power is formed and measured.
    pub fn power_length(&self, x: &Element, n: usize) -> Result<usize> {
        let l = self.word_length(x)?;
        if self.kind.length_lower_bound(x) == l {
            return Ok(n * l);
        }
        let mut p = self.identity();
        for _ in 0..n {
            p = self.mul(&p, x);
        }
        self.word_length(&p)
    }

    pub fn ball(&self, n: usize) -> Result<Arc<Ball>> {
        if let Some(b) = self.balls.lock().unwrap().get(&n) {
            return Ok(b.clone());
        }
        self.extend_to(n)?;
        let ball = {
            let layers = self.layers.read().unwrap();
            Arc::new(Ball::from_spheres(self.kind, &layers.spheres[..=n]))
        };
        self.balls.lock().unwrap().insert(n, ball.clone());
        Ok(ball)
    }

    /// `|B_0|, ..., |B_n|` without materializing index maps.
    pub fn ball_sizes(&self, n: usize) -> Result<Vec<usize>> {
        self.extend_to(n)?;
        let layers = self.layers.read().unwrap();
        let mut acc = 0;
        Ok(layers.spheres[..=n]
            .iter()
            .map(|s| {
                acc += s.len();
                acc
            })
            .collect())
    }

    /// Elements of word length exactly `k`, in canonical order.
    pub fn sphere(&self, k: usize) -> Result<Vec<Element>> {
        self.extend_to(k)?;
        Ok(self.layers.read().unwrap().spheres[k].clone())
    }
}

#[cfg(test)]
mod tests;
