//! The augmented semi-simplex category: objects `[n]` for `n >= -1`, arrows the
//! strictly increasing maps.

use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A strictly increasing map `[dom] -> [cod]`, stored as its image.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "SimplexMorRepr", into = "SimplexMorRepr")]
pub struct SimplexMor {
    dom: isize,
    cod: isize,
    image: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct SimplexMorRepr {
    dom: isize,
    cod: isize,
    image: Vec<usize>,
}

impl TryFrom<SimplexMorRepr> for SimplexMor {
    type Error = Error;

    fn try_from(r: SimplexMorRepr) -> Result<Self> {
        SimplexMor::new(r.dom, r.cod, r.image)
    }
}

impl From<SimplexMor> for SimplexMorRepr {
    fn from(k: SimplexMor) -> Self {
        SimplexMorRepr { dom: k.dom, cod: k.cod, image: k.image }
    }
}

impl SimplexMor {
    pub fn new(dom: isize, cod: isize, image: Vec<usize>) -> Result<Self> {
        if dom < -1 || cod < -1 {
            return Err(Error::Shape(format!("simplex objects start at [-1], got [{dom}] -> [{cod}]")));
        }
        if image.len() as isize != dom + 1 {
            return Err(Error::Shape(format!(
                "image of a map [{dom}] -> [{cod}] must have {} entries, got {}",
                dom + 1,
                image.len()
            )));
        }
        if image.iter().any(|&i| i as isize > cod) {
            return Err(Error::Shape(format!("image {image:?} leaves [{cod}]")));
        }
        if image.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Shape(format!("image {image:?} is not strictly increasing")));
        }
        Ok(SimplexMor { dom, cod, image })
    }

    pub fn identity(n: isize) -> Self {
        SimplexMor { dom: n, cod: n, image: (0..(n + 1) as usize).collect() }
    }

    /// The unique map `[-1] -> [n]`.
    pub fn bang(n: isize) -> Self {
        SimplexMor { dom: -1, cod: n, image: Vec::new() }
    }

    pub fn dom(&self) -> isize {
        self.dom
    }

    pub fn cod(&self) -> isize {
        self.cod
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn is_identity(&self) -> bool {
        self.dom == self.cod
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &SimplexMor) -> Result<SimplexMor> {
        if first.cod != self.dom {
            return Err(Error::Shape(format!(
                "cannot compose [{}]->[{}] after [{}]->[{}]",
                self.dom, self.cod, first.dom, first.cod
            )));
        }
        Ok(SimplexMor {
            dom: first.dom,
            cod: self.cod,
            image: first.image.iter().map(|&i| self.image[i]).collect(),
        })
    }

    /// The join `self ⋆ other : [a+a'+1] -> [b+b'+1]`.
    pub fn join(&self, other: &SimplexMor) -> SimplexMor {
        let shift = (self.cod + 1) as usize;
        let mut image = self.image.clone();
        image.extend(other.image.iter().map(|&i| i + shift));
        SimplexMor { dom: self.dom + other.dom + 1, cod: self.cod + other.cod + 1, image }
    }

    /// All maps `[a] -> [b]`, images in lexicographic order.
    pub fn enumerate(a: isize, b: isize) -> Vec<SimplexMor> {
        if a < -1 || b < -1 || a > b {
            return Vec::new();
        }
        (0..(b + 1) as usize)
            .combinations((a + 1) as usize)
            .map(|image| SimplexMor { dom: a, cod: b, image })
            .collect()
    }
}

impl fmt::Display for SimplexMor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]->[{}]{{", self.dom, self.cod)?;
        for (n, i) in self.image.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_monotone() {
        assert!(SimplexMor::new(1, 2, vec![2, 1]).is_err());
        assert!(SimplexMor::new(1, 2, vec![0]).is_err());
        assert!(SimplexMor::new(0, 0, vec![1]).is_err());
    }

    #[test]
    fn enumeration_counts_are_binomial() {
        assert_eq!(SimplexMor::enumerate(-1, -1).len(), 1);
        assert_eq!(SimplexMor::enumerate(-1, 2).len(), 1);
        assert_eq!(SimplexMor::enumerate(0, 2).len(), 3);
        assert_eq!(SimplexMor::enumerate(1, 2).len(), 3);
        assert_eq!(SimplexMor::enumerate(2, 1).len(), 0);
    }

    #[test]
    fn join_and_composition_interchange() {
        for a in SimplexMor::enumerate(-1, 1) {
            for b in SimplexMor::enumerate(a.cod(), 2) {
                for c in SimplexMor::enumerate(0, 1) {
                    for d in SimplexMor::enumerate(c.cod(), 1) {
                        let lhs = b.after(&a).unwrap().join(&d.after(&c).unwrap());
                        let rhs = b.join(&d).after(&a.join(&c)).unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }
}
